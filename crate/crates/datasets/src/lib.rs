//! Deterministic dataset generators for the training harness.
//!
//! Two families:
//!
//! * **Damped-oscillation windows** — a free-vibration oscillator integrated
//!   with the Newmark method, cut into history/horizon windows, normalized,
//!   and split into train/validation sets.
//! * **GRF integral-operator samples** — functions drawn from a Gaussian
//!   random field with a squared-exponential kernel, paired with their
//!   cumulative integrals on the same grid.
//!
//! All generation is bit-reproducible from (seed, spec): random draws come
//! from named substreams with hand-specified float conversions (see
//! [`rng::GENERATOR_ID`]), and parallel generation assembles results by unit
//! index.

mod error;
pub mod grf;
pub mod io;
pub mod oscillation;
pub mod rng;

pub use error::DatasetError;
pub use grf::{
    constant_operator_dataset, cumulative_trapezoid, grf_sample, kernel_matrix, GrfSpec,
    OperatorDataset, OperatorSample,
};
pub use oscillation::{
    newmark_beta_solve, normalize_and_split, oscillation_build, sliding_window, OscillatorSpec,
    WindowedSequenceDataset, DAMPING_RATIOS, HISTORY_LEN, HORIZON_LEN, TRAIN_FRACTION,
};
pub use rng::{SubstreamRng, GENERATOR_ID};
