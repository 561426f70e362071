use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use plu_core::{ActivationKind, Task};

#[derive(Debug, Parser)]
#[command(
    name = "plu",
    version,
    about = "Function-fitting experiments comparing the PLU activation with tanh and ReLU"
)]
pub struct CliArgs {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Train one network per activation and write loss, prediction and model files.
    Run {
        #[command(flatten)]
        exp: ExperimentArgs,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Repeat `run` over several seeds and summarise the final losses.
    Sweep {
        #[command(flatten)]
        exp: ExperimentArgs,
        /// Comma separated seeds or a half-open range such as `0..10`.
        #[arg(long, value_parser = parse_seeds, default_value = "0..5")]
        seeds: SeedList,
    },
    /// Train a small square PLU network, invert it on sample outputs and report the round-trip error.
    InvertDemo {
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Width of every layer.
        #[arg(long, default_value_t = 4)]
        dim: usize,
        /// Number of affine layers.
        #[arg(long, default_value_t = 3)]
        depth: usize,
        #[arg(long, default_value_t = 3000)]
        steps: usize,
        /// Number of held-out points to invert.
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
}

#[derive(Debug, Clone, Args)]
pub struct ExperimentArgs {
    #[arg(long, value_parser = parse_task)]
    pub task: Task,
    #[arg(long, value_delimiter = ',', value_parser = parse_activation, default_value = "plu,tanh,relu")]
    pub activations: Vec<ActivationKind>,
    #[arg(long)]
    pub steps: Option<usize>,
    #[arg(long)]
    pub lr: Option<f64>,
    /// Layer sizes including input and output, e.g. `1,3,3,1`.
    #[arg(long, value_delimiter = ',')]
    pub dims: Option<Vec<usize>>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub c: Option<f64>,
    #[arg(long, default_value = "results")]
    pub out: PathBuf,
    /// Also write an SVG of the loss curves.
    #[arg(long)]
    pub plot: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedList(pub Vec<u64>);

fn parse_task(s: &str) -> Result<Task, String> {
    s.parse().map_err(|e: plu_core::Error| e.to_string())
}

fn parse_activation(s: &str) -> Result<ActivationKind, String> {
    s.parse().map_err(|e: plu_core::Error| e.to_string())
}

pub fn parse_seeds(s: &str) -> Result<SeedList, String> {
    let seeds: Vec<u64> = if let Some((a, b)) = s.split_once("..") {
        let a: u64 = a
            .trim()
            .parse()
            .map_err(|_| format!("bad range start in `{s}`"))?;
        let b: u64 = b
            .trim()
            .parse()
            .map_err(|_| format!("bad range end in `{s}`"))?;
        (a..b).collect()
    } else {
        s.split(',')
            .map(|t| t.trim().parse().map_err(|_| format!("bad seed `{t}`")))
            .collect::<Result<_, _>>()?
    };
    if seeds.is_empty() {
        return Err(format!("`{s}` selects no seeds"));
    }
    Ok(SeedList(seeds))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seed_lists() {
        assert_eq!(parse_seeds("0..3").unwrap(), SeedList(vec![0, 1, 2]));
        assert_eq!(parse_seeds("7, 9,11").unwrap(), SeedList(vec![7, 9, 11]));
        assert!(parse_seeds("3..3").is_err());
        assert!(parse_seeds("a").is_err());
    }

    #[test]
    fn parses_run() {
        let args = CliArgs::try_parse_from([
            "plu",
            "run",
            "--task",
            "sine",
            "--activations",
            "plu,relu,tanh",
            "--seed",
            "7",
            "--out",
            "results/",
        ])
        .unwrap();
        let Command::Run { exp, seed } = args.command else {
            panic!("expected run")
        };
        assert_eq!(seed, 7);
        assert_eq!(exp.task, Task::Sine);
        assert_eq!(
            exp.activations,
            [
                ActivationKind::Plu,
                ActivationKind::Relu,
                ActivationKind::Tanh
            ]
        );
    }

    #[test]
    fn rejects_unknown_values() {
        assert!(CliArgs::try_parse_from(["plu", "run", "--task", "cifar"]).is_err());
        assert!(
            CliArgs::try_parse_from(["plu", "run", "--task", "sine", "--activations", "gelu"])
                .is_err()
        );
        assert!(CliArgs::try_parse_from(["plu", "run"]).is_err());
    }
}
