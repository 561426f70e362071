//! Test-only oracles shared by the integration suites. Nothing here calls
//! `Mlp::backward`; gradients come from finite differences of the loss alone.
#![allow(dead_code)]

use plu_core::{mse_loss, Activation, ActivationKind, Matrix, Mlp, Rng};

/// Minimum distance between any hidden pre-activation and a kink.
pub const KINK_MARGIN: f64 = 1e-3;
pub const FD_STEP: f64 = 1e-5;
pub const GRAD_RTOL: f64 = 1e-6;
/// Denominator floor for the relative error so exactly-zero gradients compare by absolute error.
pub const GRAD_FLOOR: f64 = 1e-4;

pub fn loss_of(mlp: &Mlp, x: &Matrix, target: &Matrix) -> f64 {
    mse_loss(&mlp.predict(x).unwrap(), target).unwrap().0
}

/// Central difference of the loss with respect to every parameter, in
/// `parameters_mut` order.
pub fn finite_difference_grads(mlp: &Mlp, x: &Matrix, target: &Matrix, h: f64) -> Vec<Vec<f64>> {
    let n_tensors = mlp.param_shapes().len();
    (0..n_tensors)
        .map(|p| {
            let len = {
                let (r, c) = mlp.param_shapes()[p];
                r * c
            };
            (0..len)
                .map(|k| {
                    let mut plus = mlp.clone();
                    plus.parameters_mut()[p].as_mut_slice()[k] += h;
                    let mut minus = mlp.clone();
                    minus.parameters_mut()[p].as_mut_slice()[k] -= h;
                    (loss_of(&plus, x, target) - loss_of(&minus, x, target)) / (2.0 * h)
                })
                .collect()
        })
        .collect()
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(GRAD_FLOOR)
}

/// Straight-line evaluation of a network without using `Mlp::forward`.
pub fn reference_eval(mlp: &Mlp, x: &[f64]) -> Vec<f64> {
    let act = mlp.activation();
    let n_layers = mlp.layers().len();
    let mut h = x.to_vec();
    for (i, layer) in mlp.layers().iter().enumerate() {
        let w = &layer.weights;
        let mut z = vec![0.0; w.rows()];
        for r in 0..w.rows() {
            let mut acc = 0.0;
            for c in 0..w.cols() {
                acc += w[(r, c)] * h[c];
            }
            z[r] = acc + layer.bias[(r, 0)];
        }
        h = if i + 1 < n_layers {
            z.iter().map(|&v| act.forward(v)).collect()
        } else {
            z
        };
    }
    h
}

pub fn random_matrix(rng: &mut Rng, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(rows, cols, |_, _| rng.standard_normal())
}

/// Random network with non-zero biases so bias gradients are exercised too.
pub fn random_mlp(rng: &mut Rng, dims: &[usize], act: Activation) -> Mlp {
    let mut mlp = Mlp::init(dims, act, rng).unwrap();
    for p in mlp.parameters_mut() {
        if p.cols() == 1 {
            for v in p.as_mut_slice() {
                *v = 0.5 * rng.standard_normal();
            }
        }
    }
    mlp
}

/// Draws a batch for which every hidden pre-activation stays `KINK_MARGIN` away from a kink.
pub fn batch_away_from_kinks(rng: &mut Rng, mlp: &Mlp, batch: usize) -> Matrix {
    let act = mlp.activation();
    for _ in 0..10_000 {
        let x = random_matrix(rng, mlp.in_dim(), batch);
        let (_, cache) = mlp.forward(&x).unwrap();
        let hidden = &cache.pre_activations()[..cache.depth() - 1];
        let clear = hidden
            .iter()
            .flat_map(|z| z.as_slice())
            .all(|&z| act.kink_distance(z) > KINK_MARGIN);
        if clear {
            return x;
        }
    }
    panic!("could not draw a kink-free batch");
}

pub struct GradCheck {
    pub worst_rel_err: f64,
    pub params_checked: usize,
}

/// Compares backprop against central differences on `nets` random small networks.
pub fn gradient_check(kind: ActivationKind, nets: usize, seed: u64) -> GradCheck {
    let mut rng = Rng::new(seed);
    let act = Activation::with_defaults(kind);
    let mut worst: f64 = 0.0;
    let mut count = 0;
    for _ in 0..nets {
        let in_dim = 1 + (rng.next_u64() % 3) as usize;
        let h1 = 1 + (rng.next_u64() % 5) as usize;
        let h2 = 1 + (rng.next_u64() % 5) as usize;
        let out = 1 + (rng.next_u64() % 2) as usize;
        let batch = 1 + (rng.next_u64() % 10) as usize;
        let mlp = random_mlp(&mut rng, &[in_dim, h1, h2, out], act);
        let x = batch_away_from_kinks(&mut rng, &mlp, batch);
        let target = random_matrix(&mut rng, out, batch);

        let (pred, cache) = mlp.forward(&x).unwrap();
        let (_, d_out) = mse_loss(&pred, &target).unwrap();
        let analytic = mlp.backward(&cache, &d_out).unwrap();
        let numeric = finite_difference_grads(&mlp, &x, &target, FD_STEP);
        for (a, n) in analytic.tensors().iter().zip(&numeric) {
            assert_eq!(a.as_slice().len(), n.len());
            for (&ga, &gn) in a.as_slice().iter().zip(n) {
                worst = worst.max(rel_err(ga, gn));
                count += 1;
            }
        }
    }
    GradCheck {
        worst_rel_err: worst,
        params_checked: count,
    }
}

/// Worst `|invert(forward(x)) - x|_inf` over `nets` random square networks.
pub fn inversion_round_trip(
    kind: ActivationKind,
    nets: usize,
    dim: usize,
    samples: usize,
    seed: u64,
) -> f64 {
    let mut rng = Rng::new(seed);
    let act = Activation::with_defaults(kind);
    let mut worst: f64 = 0.0;
    for _ in 0..nets {
        let mlp = random_mlp(&mut rng, &[dim; 4], act);
        let x = random_matrix(&mut rng, dim, samples);
        let y = mlp.predict(&x).unwrap();
        let back = mlp.invert(&y).unwrap();
        worst = worst.max(back.sub(&x).unwrap().max_abs());
    }
    worst
}
