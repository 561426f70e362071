//! Function-fitting experiments: target generators, default configurations and
//! the training loop.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use crate::activation::{Activation, ActivationKind};
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::network::{mse_loss, Mlp};
use crate::optim::AdamState;
use crate::rng::Rng;

pub const SINE_SAMPLES: usize = 50;
pub const PARABOLOID_RANGE: (f64, f64) = (-3.0, 3.0);
pub const DEFAULT_PARAMETRIC_C: [f64; 4] = [1.0, 2.0, 2.0, 1.0];
pub const DEFAULT_PARAMETRIC_SAMPLES: usize = 200;
pub const DEFAULT_PARAMETRIC_RANGE: (f64, f64) = (0.0, TAU);
pub const DEFAULT_LR: f64 = 0.01;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Task {
    /// `sin(x)` on `[-2pi, 2pi]`
    Sine,
    /// `t -> [(cos c1 t - cos c2 t)^3, (sin c3 t - sin c4 t)^3]`
    Parametric,
    /// `(x, y) -> x^2 - y^2` on `[-3, 3]^2`
    Paraboloid,
}

impl Task {
    pub const ALL: [Task; 3] = [Task::Sine, Task::Parametric, Task::Paraboloid];

    pub fn name(self) -> &'static str {
        match self {
            Task::Sine => "sine",
            Task::Parametric => "parametric",
            Task::Paraboloid => "paraboloid",
        }
    }

    /// `(input dim, output dim)` of the target function.
    pub fn io_dims(self) -> (usize, usize) {
        match self {
            Task::Sine => (1, 1),
            Task::Parametric => (1, 2),
            Task::Paraboloid => (2, 1),
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Task::ALL
            .into_iter()
            .find(|t| t.name() == s)
            .ok_or_else(|| Error::config(format!("unknown task `{s}`")))
    }
}

/// Training pairs, one sample per column.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    pub x: Matrix,
    pub y: Matrix,
}

impl Dataset {
    pub fn new(x: Matrix, y: Matrix) -> Result<Self> {
        if x.cols() != y.cols() {
            return Err(Error::shape("dataset", x.shape(), y.shape()));
        }
        Ok(Self { x, y })
    }

    pub fn len(&self) -> usize {
        self.x.cols()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// `n` evenly spaced points from `lo` to `hi` inclusive, computed like `numpy.linspace`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => {
            let step = (hi - lo) / (n - 1) as f64;
            let mut v: Vec<f64> = (0..n).map(|i| lo + i as f64 * step).collect();
            v[n - 1] = hi;
            v
        }
    }
}

/// 50 evenly spaced points of `sin` on `[-2pi, 2pi]`.
pub fn gen_sine_data() -> Dataset {
    let xs = linspace(-2.0 * PI, 2.0 * PI, SINE_SAMPLES);
    let ys: Vec<f64> = xs.iter().map(|x| x.sin()).collect();
    Dataset {
        x: Matrix::from_vec(1, SINE_SAMPLES, xs).unwrap(),
        y: Matrix::from_vec(1, SINE_SAMPLES, ys).unwrap(),
    }
}

pub fn parametric_target(c: &[f64; 4], t: f64) -> [f64; 2] {
    [
        ((c[0] * t).cos() - (c[1] * t).cos()).powi(3),
        ((c[2] * t).sin() - (c[3] * t).sin()).powi(3),
    ]
}

/// `n` evenly spaced `t` in `[t_lo, t_hi]` with the two-component parametric target.
pub fn gen_parametric_data(c: &[f64; 4], n: usize, t_lo: f64, t_hi: f64) -> Result<Dataset> {
    if n < 2 {
        return Err(Error::config(format!(
            "parametric data needs n >= 2, got {n}"
        )));
    }
    let ordered = t_lo < t_hi;
    if !ordered {
        return Err(Error::config(format!("empty t range [{t_lo}, {t_hi}]")));
    }
    let ts = linspace(t_lo, t_hi, n);
    let mut y = Matrix::zeros(2, n);
    for (j, &t) in ts.iter().enumerate() {
        let [a, b] = parametric_target(c, t);
        y[(0, j)] = a;
        y[(1, j)] = b;
    }
    Dataset::new(Matrix::from_vec(1, n, ts)?, y)
}

/// `n` points drawn uniformly from `[-3, 3]^2` with target `x^2 - y^2`.
pub fn gen_paraboloid_batch(rng: &mut Rng, n: usize) -> Result<Dataset> {
    if n == 0 {
        return Err(Error::config("paraboloid batch must be non-empty"));
    }
    let (lo, hi) = PARABOLOID_RANGE;
    let mut x = Matrix::zeros(2, n);
    let mut z = Matrix::zeros(1, n);
    for j in 0..n {
        let (a, b) = (rng.uniform(lo, hi), rng.uniform(lo, hi));
        x[(0, j)] = a;
        x[(1, j)] = b;
        z[(0, j)] = a * a - b * b;
    }
    Dataset::new(x, z)
}

/// Regular `side x side` grid over `[-3, 3]^2`, row by row, for plotting fitted surfaces.
pub fn paraboloid_grid(side: usize) -> Result<Dataset> {
    if side < 2 {
        return Err(Error::config("grid side must be at least 2"));
    }
    let (lo, hi) = PARABOLOID_RANGE;
    let axis = linspace(lo, hi, side);
    let n = side * side;
    let mut x = Matrix::zeros(2, n);
    let mut z = Matrix::zeros(1, n);
    for (i, &b) in axis.iter().enumerate() {
        for (j, &a) in axis.iter().enumerate() {
            let k = i * side + j;
            x[(0, k)] = a;
            x[(1, k)] = b;
            z[(0, k)] = a * a - b * b;
        }
    }
    Dataset::new(x, z)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub task: Task,
    pub activation: Activation,
    pub layer_dims: Vec<usize>,
    pub steps: usize,
    pub lr: f64,
    pub seed: u64,
    /// Points per freshly drawn batch; only the paraboloid task draws batches.
    pub batch_size: usize,
    pub parametric_c: [f64; 4],
    /// Size of the fixed training set (sine, parametric) or the batch (paraboloid).
    pub sample_count: usize,
    pub t_range: (f64, f64),
}

impl ExperimentConfig {
    /// Hyperparameters of the published setup for `task`.
    pub fn default_for(task: Task, activation: Activation) -> Self {
        let (layer_dims, steps, samples) = match task {
            Task::Sine => (vec![1, 3, 3, 1], 2048, SINE_SAMPLES),
            Task::Parametric => (vec![1, 5, 5, 5, 5, 2], 4096, DEFAULT_PARAMETRIC_SAMPLES),
            Task::Paraboloid => (vec![2, 3, 3, 1], 4096, 100),
        };
        Self {
            task,
            activation,
            layer_dims,
            steps,
            lr: DEFAULT_LR,
            seed: 0,
            batch_size: 100,
            parametric_c: DEFAULT_PARAMETRIC_C,
            sample_count: samples,
            t_range: DEFAULT_PARAMETRIC_RANGE,
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps == 0 {
            return Err(Error::config("steps must be at least 1"));
        }
        let lr_ok = self.lr > 0.0 && self.lr.is_finite();
        if !lr_ok {
            return Err(Error::config(format!(
                "learning rate must be positive, got {}",
                self.lr
            )));
        }
        let dims = &self.layer_dims;
        if dims.len() < 2 || dims.contains(&0) {
            return Err(Error::config(format!("invalid layer dims {dims:?}")));
        }
        let (input, output) = self.task.io_dims();
        if dims[0] != input || dims[dims.len() - 1] != output {
            return Err(Error::config(format!(
                "{} maps {input} -> {output} but layer dims are {dims:?}",
                self.task
            )));
        }
        match self.task {
            Task::Sine if self.sample_count != SINE_SAMPLES => Err(Error::config(format!(
                "the sine task uses exactly {SINE_SAMPLES} samples"
            ))),
            Task::Parametric
                if self.sample_count < 2
                    || self.t_range.0.partial_cmp(&self.t_range.1)
                        != Some(std::cmp::Ordering::Less) =>
            {
                Err(Error::config(
                    "parametric task needs >= 2 samples over a non-empty t range",
                ))
            }
            Task::Paraboloid if self.batch_size == 0 => {
                Err(Error::config("paraboloid batch size must be positive"))
            }
            _ => Ok(()),
        }
    }

    /// Fixed training set for the full-batch tasks; `None` for the paraboloid.
    pub fn training_data(&self) -> Result<Option<Dataset>> {
        match self.task {
            Task::Sine => Ok(Some(gen_sine_data())),
            Task::Parametric => gen_parametric_data(
                &self.parametric_c,
                self.sample_count,
                self.t_range.0,
                self.t_range.1,
            )
            .map(Some),
            Task::Paraboloid => Ok(None),
        }
    }

    /// Deterministic inputs for dumping predictions: the training set, or a 21x21
    /// grid for the paraboloid.
    pub fn evaluation_data(&self) -> Result<Dataset> {
        match self.training_data()? {
            Some(d) => Ok(d),
            None => paraboloid_grid(21),
        }
    }
}

/// Shorthand for [`ExperimentConfig::default_for`].
pub fn default_config(task: Task, activation: Activation) -> ExperimentConfig {
    ExperimentConfig::default_for(task, activation)
}

/// Default configuration with `kind` at its default parameters.
pub fn default_config_for_kind(task: Task, kind: ActivationKind) -> ExperimentConfig {
    default_config(task, Activation::with_defaults(kind))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainRecord {
    /// 1-based step index.
    pub step: usize,
    /// Training MSE before the step's update.
    pub loss: f64,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    pub records: Vec<TrainRecord>,
    pub model: Mlp,
}

impl TrainOutcome {
    pub fn final_loss(&self) -> f64 {
        self.records.last().map_or(f64::NAN, |r| r.loss)
    }
}

/// Trains one network as described by `cfg`.
///
/// The seeded generator first initialises the weights and then, for the
/// paraboloid, supplies a fresh batch each step. Each step records the loss of
/// the current batch and applies one Adam update.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<TrainOutcome> {
    cfg.validate()?;
    let mut rng = Rng::new(cfg.seed);
    let mut model = Mlp::init(&cfg.layer_dims, cfg.activation, &mut rng)?;
    let mut adam = AdamState::new(&model.param_shapes(), cfg.lr)?;
    let fixed = cfg.training_data()?;

    let mut records = Vec::with_capacity(cfg.steps);
    for step in 1..=cfg.steps {
        let drawn;
        let batch = match &fixed {
            Some(d) => d,
            None => {
                drawn = gen_paraboloid_batch(&mut rng, cfg.batch_size)?;
                &drawn
            }
        };
        let (pred, cache) = model.forward(&batch.x)?;
        let (loss, d_out) = mse_loss(&pred, &batch.y)?;
        records.push(TrainRecord { step, loss });
        let grads = model.backward(&cache, &d_out)?;
        adam.step(&mut model.parameters_mut(), &grads.tensors())?;
    }
    Ok(TrainOutcome { records, model })
}

/// Runs independent experiments on worker threads, preserving input order.
pub fn run_all(configs: &[ExperimentConfig]) -> Vec<Result<TrainOutcome>> {
    let workers = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut out = Vec::with_capacity(configs.len());
    for chunk in configs.chunks(workers) {
        std::thread::scope(|s| {
            let handles: Vec<_> = chunk
                .iter()
                .map(|cfg| s.spawn(move || run_experiment(cfg)))
                .collect();
            out.extend(
                handles
                    .into_iter()
                    .map(|h| h.join().expect("experiment thread panicked")),
            );
        });
    }
    out
}

/// Median of a non-empty slice (mean of the middle pair for even lengths).
pub fn median(values: &[f64]) -> f64 {
    assert!(!values.is_empty(), "median of empty slice");
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}
