//! Dense neural networks built around the piecewise linear unit (PLU).
//!
//! The crate has no numeric dependencies: [`linalg`] provides the matrices,
//! [`activation`] the scalar functions, [`network`] forward/backward passes and
//! exact inversion, [`optim`] Adam, and [`experiments`] the function-fitting
//! tasks used to compare activations.

pub mod activation;
pub mod error;
pub mod experiments;
pub mod linalg;
pub mod network;
pub mod optim;
pub mod rng;

pub use activation::{Activation, ActivationKind};
pub use error::{Error, Result};
pub use experiments::{
    default_config, run_experiment, Dataset, ExperimentConfig, Task, TrainOutcome, TrainRecord,
};
pub use linalg::{matmul, solve_linear, transpose, Matrix};
pub use network::{mse_loss, ForwardCache, Gradients, Layer, Mlp};
pub use optim::AdamState;
pub use rng::Rng;
