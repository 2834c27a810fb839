//! On-disk dataset layout.
//!
//! A dataset directory holds `meta.json` (kind, seed, generator id, spec,
//! normalization constants, array manifest) plus one flat little-endian
//! 64-bit-float binary file per array, row-major, with shapes declared in
//! the manifest.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::DatasetError;
use crate::grf::{GrfSpec, OperatorDataset, OperatorSample};
use crate::oscillation::WindowedSequenceDataset;

pub const META_FILE: &str = "meta.json";

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrayMeta {
    pub name: String,
    pub file: String,
    /// Shape of the stored array.
    pub shape: Vec<usize>,
    /// Logical shape when the stored array is broadcast (a shared target
    /// grid stored once but conceptually repeated per sample).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub logical_shape: Option<Vec<usize>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetMeta {
    pub dataset_kind: String,
    pub seed: u64,
    pub generator_id: String,
    pub spec: serde_json::Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normalization: Option<(f64, f64)>,
    pub arrays: Vec<ArrayMeta>,
}

fn write_f64_array(path: &Path, values: impl Iterator<Item = f64>) -> Result<(), DatasetError> {
    let mut writer = std::io::BufWriter::new(fs::File::create(path)?);
    for v in values {
        writer.write_all(&v.to_le_bytes())?;
    }
    writer.flush()?;
    Ok(())
}

fn read_f64_array(path: &Path, expected_len: usize) -> Result<Vec<f64>, DatasetError> {
    let bytes = fs::read(path)?;
    if bytes.len() != expected_len * 8 {
        return Err(DatasetError::Meta(format!(
            "{} holds {} bytes, expected {} ({} f64 values)",
            path.display(),
            bytes.len(),
            expected_len * 8,
            expected_len
        )));
    }
    Ok(bytes
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect())
}

fn write_meta(dir: &Path, meta: &DatasetMeta) -> Result<(), DatasetError> {
    let text = serde_json::to_string_pretty(meta).map_err(|e| DatasetError::Meta(e.to_string()))?;
    fs::write(dir.join(META_FILE), text)?;
    Ok(())
}

pub fn read_meta(dir: &Path) -> Result<DatasetMeta, DatasetError> {
    let text = fs::read_to_string(dir.join(META_FILE))?;
    serde_json::from_str(&text).map_err(|e| DatasetError::Meta(e.to_string()))
}

fn find_array<'m>(meta: &'m DatasetMeta, name: &str) -> Result<&'m ArrayMeta, DatasetError> {
    meta.arrays
        .iter()
        .find(|a| a.name == name)
        .ok_or_else(|| DatasetError::Meta(format!("array {name:?} missing from manifest")))
}

fn load_rows(dir: &Path, array: &ArrayMeta) -> Result<Vec<Vec<f64>>, DatasetError> {
    // Trailing singleton feature dimensions collapse into the row width.
    let (rows, width) = match array.shape.as_slice() {
        [r, w] | [r, w, 1] => (*r, *w),
        other => {
            return Err(DatasetError::Meta(format!(
                "array {:?} has unsupported shape {:?}",
                array.name, other
            )))
        }
    };
    let flat = read_f64_array(&dir.join(&array.file), rows * width)?;
    Ok(flat.chunks_exact(width).map(<[f64]>::to_vec).collect())
}

pub fn save_operator_dataset(
    dir: &Path,
    dataset: &OperatorDataset,
    spec: &GrfSpec,
) -> Result<(), DatasetError> {
    fs::create_dir_all(dir)?;
    let count = dataset.len();
    let width = dataset.y_points.len();
    write_f64_array(
        &dir.join("u.bin"),
        dataset.samples.iter().flat_map(|s| s.u_values.iter().copied()),
    )?;
    write_f64_array(
        &dir.join("g.bin"),
        dataset.samples.iter().flat_map(|s| s.g_values.iter().copied()),
    )?;
    write_f64_array(&dir.join("y.bin"), dataset.y_points.iter().copied())?;
    let meta = DatasetMeta {
        dataset_kind: "operator".to_owned(),
        seed: dataset.seed,
        generator_id: dataset.generator_id.clone(),
        spec: serde_json::to_value(spec).map_err(|e| DatasetError::Meta(e.to_string()))?,
        normalization: None,
        arrays: vec![
            ArrayMeta {
                name: "u".to_owned(),
                file: "u.bin".to_owned(),
                shape: vec![count, width],
                logical_shape: None,
            },
            ArrayMeta {
                name: "g".to_owned(),
                file: "g.bin".to_owned(),
                shape: vec![count, width],
                logical_shape: None,
            },
            ArrayMeta {
                name: "y".to_owned(),
                file: "y.bin".to_owned(),
                shape: vec![width],
                logical_shape: Some(vec![count, width]),
            },
        ],
    };
    write_meta(dir, &meta)
}

pub fn load_operator_dataset(dir: &Path) -> Result<(OperatorDataset, GrfSpec), DatasetError> {
    let meta = read_meta(dir)?;
    if meta.dataset_kind != "operator" {
        return Err(DatasetError::Meta(format!(
            "expected an operator dataset, found kind {:?}",
            meta.dataset_kind
        )));
    }
    let spec: GrfSpec =
        serde_json::from_value(meta.spec.clone()).map_err(|e| DatasetError::Meta(e.to_string()))?;
    let u_rows = load_rows(dir, find_array(&meta, "u")?)?;
    let g_rows = load_rows(dir, find_array(&meta, "g")?)?;
    if u_rows.len() != g_rows.len() {
        return Err(DatasetError::Meta(format!(
            "u has {} rows but g has {}",
            u_rows.len(),
            g_rows.len()
        )));
    }
    let y_meta = find_array(&meta, "y")?;
    let width = match y_meta.shape.as_slice() {
        [w] => *w,
        other => {
            return Err(DatasetError::Meta(format!(
                "target grid has unsupported shape {other:?}"
            )))
        }
    };
    let y_points = read_f64_array(&dir.join(&y_meta.file), width)?;
    let samples = u_rows
        .into_iter()
        .zip(g_rows)
        .map(|(u_values, g_values)| OperatorSample { u_values, g_values })
        .collect();
    Ok((
        OperatorDataset {
            samples,
            y_points,
            seed: meta.seed,
            generator_id: meta.generator_id,
        },
        spec,
    ))
}

pub fn save_windowed_pair(
    dir: &Path,
    train: &WindowedSequenceDataset,
    validation: &WindowedSequenceDataset,
    seed: u64,
) -> Result<(), DatasetError> {
    fs::create_dir_all(dir)?;
    let mut arrays = Vec::new();
    for (tag, set) in [("train", train), ("val", validation)] {
        for (kind, rows) in [("inputs", &set.inputs), ("labels", &set.labels)] {
            let name = format!("{kind}_{tag}");
            let file = format!("{name}.bin");
            let width = rows.first().map_or(0, Vec::len);
            write_f64_array(
                &dir.join(&file),
                rows.iter().flat_map(|r| r.iter().copied()),
            )?;
            arrays.push(ArrayMeta {
                name,
                file,
                shape: vec![rows.len(), width, 1],
                logical_shape: None,
            });
        }
    }
    let meta = DatasetMeta {
        dataset_kind: "windowed_sequence".to_owned(),
        seed,
        generator_id: crate::rng::GENERATOR_ID.to_owned(),
        spec: serde_json::json!({
            "history": crate::oscillation::HISTORY_LEN,
            "horizon": crate::oscillation::HORIZON_LEN,
            "damping_ratios": crate::oscillation::DAMPING_RATIOS,
            "pairs": train.inputs.len() + validation.inputs.len(),
        }),
        normalization: train.normalization,
        arrays,
    };
    write_meta(dir, &meta)
}

pub fn load_windowed_pair(
    dir: &Path,
) -> Result<(WindowedSequenceDataset, WindowedSequenceDataset), DatasetError> {
    let meta = read_meta(dir)?;
    if meta.dataset_kind != "windowed_sequence" {
        return Err(DatasetError::Meta(format!(
            "expected a windowed-sequence dataset, found kind {:?}",
            meta.dataset_kind
        )));
    }
    let load_set = |tag: &str| -> Result<WindowedSequenceDataset, DatasetError> {
        let inputs = load_rows(dir, find_array(&meta, &format!("inputs_{tag}"))?)?;
        let labels = load_rows(dir, find_array(&meta, &format!("labels_{tag}"))?)?;
        if inputs.len() != labels.len() {
            return Err(DatasetError::Meta(format!(
                "{tag} inputs have {} rows but labels have {}",
                inputs.len(),
                labels.len()
            )));
        }
        Ok(WindowedSequenceDataset {
            inputs,
            labels,
            normalization: meta.normalization,
        })
    };
    Ok((load_set("train")?, load_set("val")?))
}
