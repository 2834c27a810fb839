//! Minimal reverse-mode neural stack for scheduler experiments.
//!
//! Dense networks and a small DeepONet over flat f64 parameter vectors,
//! MSE loss with hand-written exact backpropagation, and AdamW with
//! decoupled weight decay. Everything is plain sequential f64 arithmetic:
//! given (spec, seed, data order) a training trajectory is bit-identical
//! across runs and platforms.

mod activation;
mod dense;
mod deeponet;
mod error;
mod init;
mod optim;

pub use activation::Activation;
pub use dense::{
    dense_batch_loss, dense_batch_loss_grad, forward_dense, init_dense_params, DenseNetworkSpec,
};
pub use deeponet::{
    deeponet_batch_loss, deeponet_batch_loss_grad, desk_deeponet_spec, forward_deeponet,
    init_deeponet_params, paper_deeponet_spec, DeepONetSpec,
};
pub use error::NnError;
pub use optim::{adamw_step, OptimizerParams, ParameterState};
