use std::path::PathBuf;

use biserial::circular::CountBudget;
use biserial::stability::{DecompositionOptions, StabilityOptions, SubrepBudget};
use clap::{Args, Parser, Subcommand, ValueEnum};

pub const DEFAULT_SEED: u64 = 0x5eed_b15e;

#[derive(Parser, Debug)]
#[command(name = "biserial", version, about = "Representation varieties and moduli of gentle algebras")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Text,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct GlobalOpts {
    /// Seed for every randomized step.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Random trials per isomorphism test.
    #[arg(long, global = true, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..))]
    pub trials: u64,
    /// Primes used for stability checks.
    #[arg(long, global = true, value_delimiter = ',', default_value = "2,3,5")]
    pub primes: Vec<u64>,
    /// Largest total dimension accepted by the subrepresentation search.
    #[arg(long, global = true, default_value_t = 6, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_dim: u64,
    /// Closure steps allowed in the subrepresentation search.
    #[arg(long, global = true, default_value_t = 1 << 20, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_candidates: u64,
    /// Partial tuples visited by point counting.
    #[arg(long, global = true, default_value_t = 200_000_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub max_nodes: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Report the special biserial, gentle and complete gentle axioms.
    Validate { file: PathBuf },
    /// Print the complete gentle closure as a quiver file.
    Complete { file: PathBuf },
    /// List the effective oriented cycles of the completion.
    Cycles { file: PathBuf },
    /// List the irreducible components of rep(A, d).
    Components {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', value_parser = parse_assignment)]
        dim: Vec<(String, i64)>,
    },
    /// Dimension of Comp(n, r).
    Dim {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<usize>,
    },
    /// Krull-Schmidt decomposition of a generic point of a component.
    Decompose {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', value_parser = parse_assignment)]
        dim: Vec<(String, i64)>,
        /// Ranks per arrow; arrows left out get rank 0. All components if omitted.
        #[arg(long, value_delimiter = ',', value_parser = parse_assignment)]
        rank: Vec<(String, i64)>,
    },
    /// King stability of a representation given as JSON.
    Stability {
        file: PathBuf,
        #[arg(long)]
        module: PathBuf,
        #[arg(long, value_delimiter = ',', value_parser = parse_assignment)]
        theta: Vec<(String, i64)>,
    },
    /// Moduli space of each component of rep(A, d).
    Moduli {
        file: PathBuf,
        #[arg(long, value_delimiter = ',', value_parser = parse_assignment)]
        dim: Vec<(String, i64)>,
        #[arg(long, value_delimiter = ',', value_parser = parse_assignment)]
        theta: Vec<(String, i64)>,
    },
    /// Count the F_q-points of Comp(n, r).
    CountPoints {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_value = "2,3,5")]
        q: Vec<u64>,
    },
    /// One-parameter family degenerating M0(n, r) to M0(n, r').
    Degenerate {
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        r: Vec<usize>,
        #[arg(long, value_delimiter = ',', required = true)]
        to: Vec<usize>,
    },
}

fn parse_assignment(s: &str) -> Result<(String, i64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got '{s}'"))?;
    let value = value
        .trim()
        .parse::<i64>()
        .map_err(|e| format!("bad value in '{s}': {e}"))?;
    Ok((name.trim().to_string(), value))
}

/// Everything that influences the result of a job besides its inputs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JobConfig {
    pub seed: u64,
    pub trials: usize,
    pub stability: StabilityOptions,
    pub count: CountBudget,
}

impl JobConfig {
    pub fn from_opts(g: &GlobalOpts) -> Self {
        Self {
            seed: g.seed,
            trials: g.trials as usize,
            stability: StabilityOptions {
                primes: g.primes.clone(),
                budget: SubrepBudget {
                    max_total_dim: g.max_dim as usize,
                    max_candidates: g.max_candidates,
                },
            },
            count: CountBudget {
                max_nodes: g.max_nodes,
                ..CountBudget::default()
            },
        }
    }

    pub fn decomposition(&self) -> DecompositionOptions {
        let mut opts = DecompositionOptions {
            stability: self.stability.clone(),
            ..DecompositionOptions::default()
        };
        opts.split.iso_trials = self.trials;
        opts
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn assignments_parse() {
        assert_eq!(parse_assignment("1=-2"), Ok(("1".into(), -2)));
        assert!(parse_assignment("x").is_err());
        assert!(parse_assignment("x=y").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
