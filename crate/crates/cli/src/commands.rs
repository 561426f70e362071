use std::fs;
use std::path::{Path, PathBuf};

use plu_core::experiments::{self, median, ExperimentConfig, TrainOutcome};
use plu_core::network::write_model;
use plu_core::{mse_loss, Activation, ActivationKind, AdamState, Error, Matrix, Mlp, Rng, Task};

use crate::args::{CliArgs, Command, ExperimentArgs};
use crate::error::{CliError, Result};
use crate::output::{emit_svg_plot, fmt_f64, write_loss_csv, write_predictions_csv};

/// Largest acceptable `|invert(forward(x)) - x|` in the inversion demo.
pub const INVERT_TOLERANCE: f64 = 1e-8;

pub fn execute(args: &CliArgs) -> Result<()> {
    match &args.command {
        Command::Run { exp, seed } => run(exp, *seed),
        Command::Sweep { exp, seeds } => sweep(exp, &seeds.0),
        Command::InvertDemo {
            seed,
            dim,
            depth,
            steps,
            samples,
        } => invert_demo(*seed, *dim, *depth, *steps, *samples),
    }
}

fn usage(e: Error) -> CliError {
    CliError::Usage(e.to_string())
}

/// One validated configuration per selected activation.
pub fn build_configs(exp: &ExperimentArgs, seed: u64) -> Result<Vec<ExperimentConfig>> {
    if exp.activations.is_empty() {
        return Err(CliError::Usage("select at least one activation".into()));
    }
    exp.activations
        .iter()
        .map(|&kind| {
            let activation = Activation::new(
                kind,
                exp.alpha.unwrap_or(plu_core::activation::DEFAULT_ALPHA),
                exp.c.unwrap_or(plu_core::activation::DEFAULT_C),
            )
            .map_err(usage)?;
            let mut cfg = experiments::default_config(exp.task, activation).with_seed(seed);
            if let Some(steps) = exp.steps {
                cfg.steps = steps;
            }
            if let Some(lr) = exp.lr {
                cfg.lr = lr;
            }
            if let Some(dims) = &exp.dims {
                cfg.layer_dims = dims.clone();
            }
            cfg.validate().map_err(usage)?;
            Ok(cfg)
        })
        .collect()
}

pub fn artifact_stem(task: Task, kind: ActivationKind, seed: u64) -> String {
    format!("{task}_{kind}_{seed}")
}

fn input_label(task: Task) -> &'static str {
    match task {
        Task::Parametric => "t",
        Task::Sine | Task::Paraboloid => "x",
    }
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

fn write_artifacts(dir: &Path, cfg: &ExperimentConfig, outcome: &TrainOutcome) -> Result<()> {
    let stem = artifact_stem(cfg.task, cfg.activation.kind(), cfg.seed);
    write_loss_csv(&outcome.records, &dir.join(format!("{stem}_loss.csv")))?;
    write_predictions_csv(
        &outcome.model,
        &cfg.evaluation_data()?,
        input_label(cfg.task),
        &dir.join(format!("{stem}_pred.csv")),
    )?;
    let model_path = dir.join(format!("{stem}_model.txt"));
    fs::write(&model_path, write_model(&outcome.model)).map_err(|e| CliError::io(model_path, e))
}

fn train_and_write(
    configs: &[ExperimentConfig],
    dir: &Path,
    plot: bool,
) -> Result<Vec<TrainOutcome>> {
    let outcomes = experiments::run_all(configs)
        .into_iter()
        .collect::<plu_core::Result<Vec<_>>>()?;
    for (cfg, out) in configs.iter().zip(&outcomes) {
        write_artifacts(dir, cfg, out)?;
        println!(
            "{} {} seed={} final_loss={}",
            cfg.task,
            cfg.activation.kind(),
            cfg.seed,
            fmt_f64(out.final_loss())
        );
    }
    if plot {
        let (task, seed) = (configs[0].task, configs[0].seed);
        let series: Vec<_> = configs
            .iter()
            .zip(&outcomes)
            .map(|(c, o)| (c.activation.kind().to_string(), o.records.clone()))
            .collect();
        emit_svg_plot(&series, &dir.join(format!("{task}_{seed}_loss.svg")))?;
    }
    Ok(outcomes)
}

fn run(exp: &ExperimentArgs, seed: u64) -> Result<()> {
    let configs = build_configs(exp, seed)?;
    create_dir(&exp.out)?;
    train_and_write(&configs, &exp.out, exp.plot)?;
    Ok(())
}

fn sweep(exp: &ExperimentArgs, seeds: &[u64]) -> Result<()> {
    create_dir(&exp.out)?;
    let mut finals: Vec<(ActivationKind, u64, f64)> = Vec::new();
    for &seed in seeds {
        let configs = build_configs(exp, seed)?;
        let outcomes = train_and_write(&configs, &exp.out, exp.plot)?;
        for (cfg, out) in configs.iter().zip(&outcomes) {
            finals.push((cfg.activation.kind(), seed, out.final_loss()));
        }
    }

    let mut per_seed = String::from("activation,seed,final_loss\n");
    for (kind, seed, loss) in &finals {
        per_seed.push_str(&format!("{kind},{seed},{}\n", fmt_f64(*loss)));
    }
    let mut summary =
        String::from("activation,runs,median_final_loss,min_final_loss,max_final_loss\n");
    for kind in &exp.activations {
        let losses: Vec<f64> = finals
            .iter()
            .filter(|f| f.0 == *kind)
            .map(|f| f.2)
            .collect();
        let min = losses.iter().copied().fold(f64::INFINITY, f64::min);
        let max = losses.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        let med = median(&losses);
        println!(
            "{} {kind}: median final loss {} over {} seeds",
            exp.task,
            fmt_f64(med),
            losses.len()
        );
        summary.push_str(&format!(
            "{kind},{},{},{},{}\n",
            losses.len(),
            fmt_f64(med),
            fmt_f64(min),
            fmt_f64(max)
        ));
    }
    let task = exp.task;
    write_text(
        &exp.out.join(format!("{task}_sweep_final_losses.csv")),
        &per_seed,
    )?;
    write_text(&exp.out.join(format!("{task}_sweep_summary.csv")), &summary)
}

fn write_text(path: &PathBuf, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::io(path, e))
}

/// Smooth, strictly increasing target used to train the demo network.
fn demo_target(x: f64) -> f64 {
    x + 0.5 * x.sin()
}

pub struct InvertReport {
    pub final_loss: f64,
    pub max_error: f64,
}

/// Trains a square PLU network on `x -> x + sin(x) / 2` and inverts it on fresh inputs.
pub fn invert_round_trip(
    seed: u64,
    dim: usize,
    depth: usize,
    steps: usize,
    samples: usize,
) -> Result<InvertReport> {
    if dim == 0 || depth == 0 || samples == 0 {
        return Err(CliError::Usage(
            "dim, depth and samples must be positive".into(),
        ));
    }
    let mut rng = Rng::new(seed);
    let mut mlp = Mlp::init(
        &vec![dim; depth + 1],
        Activation::with_defaults(ActivationKind::Plu),
        &mut rng,
    )?;
    let train_x = Matrix::from_fn(dim, 256, |_, _| rng.standard_normal());
    let train_y = train_x.map(demo_target);
    let mut adam = AdamState::new(&mlp.param_shapes(), experiments::DEFAULT_LR)?;
    let mut final_loss = f64::NAN;
    for _ in 0..steps {
        let (pred, cache) = mlp.forward(&train_x)?;
        let (loss, grad) = mse_loss(&pred, &train_y)?;
        final_loss = loss;
        let grads = mlp.backward(&cache, &grad)?;
        adam.step(&mut mlp.parameters_mut(), &grads.tensors())?;
    }

    let x = Matrix::from_fn(dim, samples, |_, _| rng.standard_normal());
    let y = mlp.predict(&x)?;
    let back = mlp.invert(&y)?;
    Ok(InvertReport {
        final_loss,
        max_error: back.sub(&x)?.max_abs(),
    })
}

fn invert_demo(seed: u64, dim: usize, depth: usize, steps: usize, samples: usize) -> Result<()> {
    let report = invert_round_trip(seed, dim, depth, steps, samples)?;
    println!(
        "trained {depth}-layer {dim}x{dim} plu network for {steps} steps, final loss {:e}",
        report.final_loss
    );
    println!(
        "max round-trip error over {samples} samples: {:e}",
        report.max_error
    );
    if report.max_error < INVERT_TOLERANCE {
        Ok(())
    } else {
        Err(CliError::Precondition(format!(
            "round-trip error {:e} exceeds {INVERT_TOLERANCE:e}",
            report.max_error
        )))
    }
}
