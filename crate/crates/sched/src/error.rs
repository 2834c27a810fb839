use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScheduleError {
    #[error("invalid schedule parameter: {0}")]
    InvalidParameter(String),

    #[error("epoch {epoch} exceeds max epoch {max_epoch}")]
    EpochOutOfRange { epoch: u32, max_epoch: u32 },

    #[error(
        "hyperbola domain violated: n={n}, max_epoch={max_epoch}, upper_bound={upper_bound} \
         (requires upper_bound >= max_epoch >= n, upper_bound > 0)"
    )]
    HyperbolaDomain {
        n: u32,
        max_epoch: u32,
        upper_bound: u32,
    },
}
