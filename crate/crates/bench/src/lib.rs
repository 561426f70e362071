//! Fixtures shared by the criterion benchmarks.

use plu_core::{experiments, Activation, ActivationKind, Matrix, Mlp, Rng, Task};

/// Depth-3 width-3 network on the sine inputs.
pub fn sine_fixture(kind: ActivationKind) -> (Mlp, Matrix, Matrix) {
    let data = experiments::gen_sine_data();
    let mlp = Mlp::init(
        &[1, 3, 3, 1],
        Activation::with_defaults(kind),
        &mut Rng::new(0),
    )
    .expect("valid dims");
    (mlp, data.x, data.y)
}

/// Random square PLU network and a batch of its outputs.
pub fn square_fixture(dim: usize, depth: usize, batch: usize) -> (Mlp, Matrix) {
    let mut rng = Rng::new(1);
    let dims = vec![dim; depth + 1];
    let mlp = Mlp::init(
        &dims,
        Activation::with_defaults(ActivationKind::Plu),
        &mut rng,
    )
    .expect("valid dims");
    let x = Matrix::from_fn(dim, batch, |_, _| rng.standard_normal());
    let y = mlp.predict(&x).expect("matching dims");
    (mlp, y)
}

/// Short training run for end-to-end timing.
pub fn short_config(task: Task, kind: ActivationKind, steps: usize) -> plu_core::ExperimentConfig {
    let mut cfg = experiments::default_config_for_kind(task, kind);
    cfg.steps = steps;
    cfg
}
