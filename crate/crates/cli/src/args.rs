use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use colorz::gf2::DEFAULT_ENUMERATION_CAP;
use colorz::qsim::DEFAULT_QUBIT_CAP;

#[derive(Parser, Debug)]
#[command(name = "colorz", version, about = "Ising partition functions on color-code lattices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write result documents to this file instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,

    /// Include wall time in result documents (makes output run-dependent).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Generate a periodic lattice and print it as a result document.
    Generate(LatticeArgs),
    /// Check the colex invariants of a lattice.
    Validate(LatticeArgs),
    /// Exact partition function, expectation and overlap by enumeration.
    Exact {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Estimate Z with the stabilizer sampler.
    Estimate {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
    },
    /// Estimate Z by emulating the quantum protocol on a dense state vector.
    Qsim {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[command(flatten)]
        caps: CapArgs,
    },
    /// Run the stabilizer estimator and the overlap baseline against the exact value.
    Compare {
        #[command(flatten)]
        lattice: LatticeArgs,
        #[command(flatten)]
        model: ModelArgs,
        #[command(flatten)]
        sampling: SamplingArgs,
        #[command(flatten)]
        caps: CapArgs,
    },
}

#[derive(Args, Debug, Clone)]
pub struct LatticeArgs {
    #[command(flatten)]
    pub source: LatticeSource,

    /// Horizontal cell shift applied when wrapping rows; 0 is the rectangular torus.
    #[arg(long, default_value_t = 0, conflicts_with = "lattice")]
    pub twist: usize,
}

#[derive(Args, Debug, Clone)]
#[group(required = true, multiple = false)]
pub struct LatticeSource {
    /// Hexagonal torus with ROWSxCOLS plaquettes.
    #[arg(long, value_name = "ROWSxCOLS", value_parser = parse_dims)]
    pub hex: Option<(usize, usize)>,

    /// Square-octagon torus with ROWSxCOLS cells.
    #[arg(long, value_name = "ROWSxCOLS", value_parser = parse_dims)]
    pub square_octagon: Option<(usize, usize)>,

    /// Lattice JSON file (a colex, or a document written by `generate`).
    #[arg(long, value_name = "FILE")]
    pub lattice: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct ModelArgs {
    /// Inverse temperature. Overrides the value in a couplings file.
    #[arg(long, conflicts_with = "beta_grid")]
    pub beta: Option<f64>,

    /// Evenly spaced inverse temperatures, one document each.
    #[arg(long, value_name = "START:STOP:STEPS", value_parser = parse_grid)]
    pub beta_grid: Option<BetaGrid>,

    /// Coupling applied at every vertex.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub uniform_j: f64,

    /// Couplings JSON file: {"beta": b, "couplings": [..]} or {"beta": b, "uniform": j}.
    #[arg(long, value_name = "FILE", conflicts_with = "uniform_j")]
    pub couplings: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct SamplingArgs {
    /// Target additive error on the expectation, in (0, 2].
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,

    /// Success probability, in (0, 1).
    #[arg(long, default_value_t = 0.95)]
    pub confidence: f64,

    /// Random seed; drawn at random and echoed when omitted.
    #[arg(long)]
    pub seed: Option<u64>,

    /// Worker threads. Results do not depend on this value.
    #[arg(long, default_value_t = 1, value_parser = clap::value_parser!(u64).range(1..))]
    pub threads: u64,

    /// Override the planned sample count; epsilon is then derived from it.
    #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
    pub samples: Option<u64>,
}

#[derive(Args, Debug, Clone)]
pub struct CapArgs {
    /// Largest code dimension enumerated exactly.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_CAP)]
    pub enum_cap: usize,

    /// Largest dense state vector, in qubits.
    #[arg(long, default_value_t = DEFAULT_QUBIT_CAP)]
    pub qubit_cap: usize,
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let (r, c) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected ROWSxCOLS, got {s:?}"))?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok((parse(r)?, parse(c)?))
}

/// Inverse temperatures from `--beta-grid`, endpoints included.
#[derive(Clone, Debug, PartialEq)]
pub struct BetaGrid(pub Vec<f64>);

fn parse_grid(s: &str) -> Result<BetaGrid, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [start, stop, steps] = parts[..] else {
        return Err(format!("expected START:STOP:STEPS, got {s:?}"));
    };
    let start: f64 = start.parse().map_err(|e| format!("start: {e}"))?;
    let stop: f64 = stop.parse().map_err(|e| format!("stop: {e}"))?;
    let steps: usize = steps.parse().map_err(|e| format!("steps: {e}"))?;
    match steps {
        0 => Err("steps must be at least 1".into()),
        1 => Ok(BetaGrid(vec![start])),
        n => Ok(BetaGrid(
            (0..n)
                .map(|i| start + (stop - start) * i as f64 / (n - 1) as f64)
                .collect(),
        )),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_is_well_formed() {
        Cli::command().debug_assert();
    }

    #[test]
    fn dims_and_grids() {
        assert_eq!(parse_dims("4x6"), Ok((4, 6)));
        assert!(parse_dims("4-6").is_err());
        assert_eq!(parse_grid("0:1:3").unwrap().0, vec![0.0, 0.5, 1.0]);
        assert_eq!(parse_grid("0.2:9:1").unwrap().0, vec![0.2]);
        assert!(parse_grid("0:1").is_err());
        assert!(parse_grid("0:1:0").is_err());
    }
}
