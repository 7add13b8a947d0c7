use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use spectral_abstraction::hierarchy::{LevelMethod, LevelSpec};
use spectral_abstraction::{CutCriterion, LaplacianKind, Metric, PLaplacianParams};

use crate::error::{CliError, Result};

#[derive(Debug, Parser)]
#[command(name = "spectral-abstraction", version, about = "Spectral clustering, hierarchies and structure-function fits")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone)]
pub struct Common {
    /// Input graph (.tsv edge list or .csv matrix)
    #[arg(long)]
    pub input: PathBuf,
    /// Report path
    #[arg(long)]
    pub output: PathBuf,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum LaplacianArg {
    Combinatorial,
    Normalized,
}

impl From<LaplacianArg> for LaplacianKind {
    fn from(a: LaplacianArg) -> Self {
        match a {
            LaplacianArg::Combinatorial => LaplacianKind::Combinatorial,
            LaplacianArg::Normalized => LaplacianKind::SymmetricNormalized,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Euclidean,
    Manhattan,
    Fractional,
}

pub fn metric(m: MetricArg, q: f64) -> Metric {
    match m {
        MetricArg::Euclidean => Metric::Euclidean,
        MetricArg::Manhattan => Metric::Manhattan,
        MetricArg::Fractional => Metric::Fractional(q),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ClusterMethod {
    Recursive,
    Kway,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CriterionArg {
    Cheeger,
    Ratio,
    Normalized,
}

impl From<CriterionArg> for CutCriterion {
    fn from(c: CriterionArg) -> Self {
        match c {
            CriterionArg::Cheeger => CutCriterion::Cheeger,
            CriterionArg::Ratio => CutCriterion::Ratio,
            CriterionArg::Normalized => CutCriterion::Normalized,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Laplacian spectrum plus a scree CSV next to the report
    Spectrum {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "combinatorial")]
        laplacian: LaplacianArg,
    },
    /// Fiedler sign split
    Bipartition {
        #[command(flatten)]
        common: Common,
    },
    /// K clusters by recursive bipartition or k-means on an embedding
    Cluster {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "recursive")]
        method: ClusterMethod,
        /// Embedding dimension for kway (default k - 1)
        #[arg(long)]
        dims: Option<usize>,
        #[arg(long, value_enum, default_value = "euclidean")]
        metric: MetricArg,
        #[arg(long, default_value_t = Metric::DEFAULT_Q)]
        q: f64,
    },
    /// Recursive p-spectral bipartition
    PCluster {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 1.2)]
        p: f64,
        #[arg(long, value_enum, default_value = "cheeger")]
        criterion: CriterionArg,
    },
    /// Multi-level hierarchy over quotient graphs
    Hierarchy {
        #[command(flatten)]
        common: Common,
        /// k=K,method=recursive-linear|recursive-p|kway[,p=X][,dim=N][,metric=M][,q=X][,seed=N]
        #[arg(long = "level", required = true)]
        levels: Vec<String>,
        /// Also write the quotient graphs as DOT
        #[arg(long)]
        dot: bool,
    },
    /// Functional connectivity matrix (CSV) predicted from the graph
    PredictFc {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        beta: f64,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
        #[arg(long, default_value_t = 0.0)]
        offset: f64,
        #[arg(long, value_enum, default_value = "normalized")]
        laplacian: LaplacianArg,
    },
    /// Fit the decay model to an observed matrix
    FitFc {
        #[command(flatten)]
        common: Common,
        /// Observed functional matrix (.csv)
        #[arg(long)]
        observed: PathBuf,
        #[arg(long, value_enum, default_value = "normalized")]
        laplacian: LaplacianArg,
    },
    /// Linear-coupling graph of a Jacobian; --input is the coupling CSV
    JacobianGraph {
        #[command(flatten)]
        common: Common,
        /// 0/1 CSV marking linear couplings
        #[arg(long)]
        mask: PathBuf,
        #[arg(long, default_value_t = 0.0)]
        threshold: f64,
    },
}

/// Parse one `--level` value. `default_seed` applies when `seed=` is absent.
pub fn parse_level_spec(spec: &str, default_seed: u64) -> Result<LevelSpec> {
    let fail = |message: String| CliError::InvalidLevelSpec { spec: spec.to_string(), message };
    let mut k = None;
    let mut method = None;
    let mut p = None;
    let mut dim = None;
    let mut metric_name = None;
    let mut q = None;
    let mut seed = default_seed;
    for part in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) = part.split_once('=').ok_or_else(|| fail(format!("'{part}' is not key=value")))?;
        let number = |what: &str| fail(format!("{key} expects {what}, got '{value}'"));
        match key {
            "k" => k = Some(value.parse::<usize>().map_err(|_| number("an integer"))?),
            "method" => method = Some(value.to_string()),
            "p" => p = Some(value.parse::<f64>().map_err(|_| number("a number"))?),
            "dim" | "dims" => dim = Some(value.parse::<usize>().map_err(|_| number("an integer"))?),
            "metric" => metric_name = Some(value.to_string()),
            "q" => q = Some(value.parse::<f64>().map_err(|_| number("a number"))?),
            "seed" => seed = value.parse::<u64>().map_err(|_| number("an integer"))?,
            _ => return Err(fail(format!("unknown key '{key}'"))),
        }
    }
    let k = k.ok_or_else(|| fail("missing k".into()))?;
    let method = match method.as_deref().unwrap_or("recursive-linear") {
        "recursive-linear" | "recursive" | "linear" => LevelMethod::RecursiveLinear,
        "recursive-p" | "p" => LevelMethod::RecursiveP(PLaplacianParams::with_p(p.unwrap_or(1.2))),
        "kway" | "kway-embedding" => {
            let q = q.unwrap_or(Metric::DEFAULT_Q);
            let metric = match metric_name.as_deref().unwrap_or("euclidean") {
                "euclidean" => Metric::Euclidean,
                "manhattan" => Metric::Manhattan,
                "fractional" => Metric::Fractional(q),
                other => return Err(fail(format!("unknown metric '{other}'"))),
            };
            LevelMethod::KwayEmbedding { dim: dim.unwrap_or(k.saturating_sub(1).max(1)), metric }
        }
        other => return Err(fail(format!("unknown method '{other}'"))),
    };
    Ok(LevelSpec { k, method, seed })
}
