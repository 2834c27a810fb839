use approx::assert_relative_eq;
use epochlab_datasets::{
    constant_operator_dataset, cumulative_trapezoid, grf_sample, kernel_matrix, DatasetError,
    GrfSpec, GENERATOR_ID,
};

#[test]
fn grid_is_uniform_on_the_unit_interval() {
    let spec = GrfSpec::with_function_count(1);
    let grid = spec.grid();
    assert_eq!(grid.len(), 100);
    assert_eq!(grid[0], 0.0);
    assert_eq!(grid[99], 1.0);
    for (i, w) in grid.windows(2).enumerate() {
        assert_relative_eq!(w[1] - w[0], 1.0 / 99.0, epsilon = 1e-15);
        assert_relative_eq!(grid[i], i as f64 / 99.0, epsilon = 1e-15);
    }
}

#[test]
fn kernel_is_symmetric_unit_diagonal_and_bounded() {
    let spec = GrfSpec::with_function_count(1);
    let grid = spec.grid();
    for length_scale in [0.1, 0.25, 0.4] {
        let k = kernel_matrix(&grid, length_scale, 0.0);
        for i in 0..grid.len() {
            assert_eq!(k[(i, i)], 1.0);
            for j in 0..i {
                assert_eq!(k[(i, j)], k[(j, i)]);
                assert!(k[(i, j)] > 0.0 && k[(i, j)] <= 1.0);
            }
        }
    }
}

#[test]
fn trapezoid_labels_satisfy_the_increment_identity() {
    let spec = GrfSpec::with_function_count(3);
    let dataset = grf_sample(&spec, 89).unwrap();
    let grid = &dataset.y_points;
    for sample in &dataset.samples {
        assert_eq!(sample.g_values[0], 0.0);
        for i in 0..grid.len() - 1 {
            let increment =
                0.5 * (sample.u_values[i] + sample.u_values[i + 1]) * (grid[i + 1] - grid[i]);
            assert_relative_eq!(
                sample.g_values[i + 1] - sample.g_values[i],
                increment,
                epsilon = 1e-14
            );
        }
    }
}

#[test]
fn constant_unit_function_integrates_to_the_identity() {
    let spec = GrfSpec::with_function_count(2);
    let dataset = constant_operator_dataset(&spec, 1.0).unwrap();
    assert_eq!(dataset.len(), 2);
    for sample in &dataset.samples {
        for (g, y) in sample.g_values.iter().zip(&dataset.y_points) {
            assert!((g - y).abs() <= 1e-12, "g({y}) = {g}");
        }
    }
}

#[test]
fn cumulative_trapezoid_handles_nonuniform_grids() {
    // Quadratic u on an uneven grid: trapezoid error is h^3/12 * u'' per
    // interval, so exact for linear u.
    let grid = [0.0, 0.1, 0.35, 0.5, 1.0];
    let u: Vec<f64> = grid.iter().map(|x| 2.0 * x + 1.0).collect();
    let g = cumulative_trapezoid(&u, &grid);
    for (gv, x) in g.iter().zip(&grid) {
        assert_relative_eq!(*gv, x * x + x, epsilon = 1e-15);
    }
}

#[test]
fn field_is_zero_mean_within_monte_carlo_error() {
    let spec = GrfSpec::with_function_count(2_000);
    let dataset = grf_sample(&spec, 269).unwrap();
    // Kernel diagonal is 1, so u at any fixed sensor is standard normal and
    // the mean of n draws has standard error 1/sqrt(n).
    let se = 1.0 / (dataset.len() as f64).sqrt();
    for sensor in [0, 50, 99] {
        let mean: f64 = dataset
            .samples
            .iter()
            .map(|s| s.u_values[sensor])
            .sum::<f64>()
            / dataset.len() as f64;
        assert!(
            mean.abs() < 5.0 * se,
            "sensor {sensor}: |{mean}| exceeds 5 standard errors ({se})"
        );
    }
}

#[test]
fn sampled_amplitudes_are_plausibly_standard_normal() {
    let spec = GrfSpec::with_function_count(500);
    let dataset = grf_sample(&spec, 89).unwrap();
    // Pooled second moment over all sensors of all functions: E u^2 = 1.
    let mut sum_sq = 0.0;
    let mut count = 0usize;
    for s in &dataset.samples {
        for v in &s.u_values {
            sum_sq += v * v;
            count += 1;
        }
    }
    let second_moment = sum_sq / count as f64;
    // Within-function values are strongly correlated, so the effective
    // sample count is roughly the function count; allow a wide band.
    assert!(
        (0.7..1.3).contains(&second_moment),
        "pooled second moment {second_moment}"
    );
}

#[test]
fn generation_is_bit_reproducible_and_seed_sensitive() {
    let spec = GrfSpec::with_function_count(20);
    let a = grf_sample(&spec, 814).unwrap();
    let b = grf_sample(&spec, 814).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.generator_id, GENERATOR_ID);

    let c = grf_sample(&spec, 815).unwrap();
    assert_ne!(a.samples[0].u_values, c.samples[0].u_values);

    // Functions own independent substreams: a shorter run is a prefix of a
    // longer one, so counts can grow without disturbing earlier samples.
    let small = grf_sample(&GrfSpec::with_function_count(5), 814).unwrap();
    assert_eq!(small.samples.as_slice(), &a.samples[..5]);
}

#[test]
fn cholesky_failure_is_reported_after_jitter_escalation() {
    // A near-rank-one kernel (huge length scale) cannot factor with the
    // jitter capped far below its eigenvalue gap.
    let spec = GrfSpec {
        function_count: 1,
        sensor_count: 50,
        length_scale_min: 50.0,
        length_scale_max: 50.0,
        jitter_initial: 1e-30,
        jitter_max: 1e-25,
    };
    assert!(matches!(
        grf_sample(&spec, 1),
        Err(DatasetError::CholeskyFailure {
            function_index: 0,
            ..
        })
    ));
}

#[test]
fn invalid_specs_are_rejected() {
    let valid = GrfSpec::with_function_count(1);
    assert!(grf_sample(&GrfSpec { function_count: 0, ..valid.clone() }, 1).is_err());
    assert!(grf_sample(&GrfSpec { sensor_count: 1, ..valid.clone() }, 1).is_err());
    assert!(grf_sample(
        &GrfSpec {
            length_scale_min: 0.4,
            length_scale_max: 0.1,
            ..valid.clone()
        },
        1
    )
    .is_err());
    assert!(grf_sample(
        &GrfSpec {
            jitter_initial: 0.0,
            ..valid
        },
        1
    )
    .is_err());
}
