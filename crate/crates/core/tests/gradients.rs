mod support;

use plu_core::{experiments, mse_loss, Activation, ActivationKind, Matrix, Mlp, Rng};
use support::*;

#[test]
fn backprop_matches_finite_differences_for_every_activation() {
    for (i, kind) in ActivationKind::ALL.into_iter().enumerate() {
        let check = gradient_check(kind, 20, 100 + i as u64);
        println!(
            "{kind}: worst rel err {:.3e} over {} params",
            check.worst_rel_err, check.params_checked
        );
        assert!(
            check.worst_rel_err < GRAD_RTOL,
            "{kind}: {}",
            check.worst_rel_err
        );
    }
}

#[test]
fn forward_matches_straight_line_evaluation() {
    let mut rng = Rng::new(77);
    let mlp = random_mlp(
        &mut rng,
        &[1, 3, 3, 1],
        Activation::with_defaults(ActivationKind::Plu),
    );
    let xs: Vec<f64> = (0..100).map(|_| rng.uniform(-7.0, 7.0)).collect();
    let y = mlp
        .predict(&Matrix::from_vec(1, 100, xs.clone()).unwrap())
        .unwrap();
    for (j, &x) in xs.iter().enumerate() {
        let expected = reference_eval(&mlp, &[x])[0];
        assert!((y[(0, j)] - expected).abs() <= 1e-12, "x={x}");
    }
}

#[test]
fn identity_network_is_one_affine_map() {
    let mut rng = Rng::new(8);
    let mlp = random_mlp(
        &mut rng,
        &[3, 5, 4, 2],
        Activation::with_defaults(ActivationKind::Identity),
    );
    // compose W = W3 W2 W1, b = W3 (W2 b1 + b2) + b3
    let mut w = Matrix::identity(3);
    let mut b = Matrix::zeros(3, 1);
    for l in mlp.layers() {
        w = plu_core::matmul(&l.weights, &w).unwrap();
        b = plu_core::matmul(&l.weights, &b)
            .unwrap()
            .add_column(&l.bias)
            .unwrap();
    }
    let x = random_matrix(&mut rng, 3, 10);
    let expected = plu_core::matmul(&w, &x).unwrap().add_column(&b).unwrap();
    let got = mlp.predict(&x).unwrap();
    assert!(got.sub(&expected).unwrap().max_abs() <= 1e-12 * (1.0 + expected.max_abs()));
}

#[test]
fn forward_is_pure() {
    let mut rng = Rng::new(9);
    let mlp = random_mlp(
        &mut rng,
        &[2, 5, 5, 1],
        Activation::with_defaults(ActivationKind::Tanh),
    );
    let before = mlp.clone();
    let x = random_matrix(&mut rng, 2, 7);
    let a = mlp.predict(&x).unwrap();
    let b = mlp.predict(&x).unwrap();
    let bits = |m: &Matrix| m.as_slice().iter().map(|v| v.to_bits()).collect::<Vec<_>>();
    assert_eq!(bits(&a), bits(&b));
    assert_eq!(mlp, before);
}

#[test]
fn sine_network_gradient_at_init() {
    // the exact training configuration, checked at its first step
    let data = experiments::gen_sine_data();
    let mlp = Mlp::init(
        &[1, 3, 3, 1],
        Activation::with_defaults(ActivationKind::Plu),
        &mut Rng::new(0),
    )
    .unwrap();
    let (_, cache) = mlp.forward(&data.x).unwrap();
    let near_kink = cache.pre_activations()[..2]
        .iter()
        .flat_map(|z| z.as_slice())
        .any(|&z| mlp.activation().kink_distance(z) < KINK_MARGIN);
    assert!(!near_kink);
    let (pred, cache) = mlp.forward(&data.x).unwrap();
    let (_, d_out) = mse_loss(&pred, &data.y).unwrap();
    let analytic = mlp.backward(&cache, &d_out).unwrap();
    let numeric = finite_difference_grads(&mlp, &data.x, &data.y, FD_STEP);
    for (a, n) in analytic.tensors().iter().zip(&numeric) {
        for (&ga, &gn) in a.as_slice().iter().zip(n) {
            assert!(rel_err(ga, gn) < GRAD_RTOL, "{ga} vs {gn}");
        }
    }
}
