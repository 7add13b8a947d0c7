use std::path::{Path, PathBuf};

use nalgebra::DMatrix;
use serde::Serialize;
use spectral_abstraction::hierarchy::build_hierarchy;
use spectral_abstraction::nonlinear::{jacobian_graph, p_recursive_bipartition};
use spectral_abstraction::partition::{
    connectivity_profile, cut_metrics, kway_embedding_cluster, recursive_bipartition, sign_bipartition,
};
use spectral_abstraction::spectral::{eigendecompose, graph_fiedler, smallest_eigenpairs, spectral_embedding};
use spectral_abstraction::structfunc::{fit_report_with, predict_fc_with};
use spectral_abstraction::{
    ConnectivityProfile, CouplingSystem, CutMetrics, Error, FcModel, Graph, LaplacianKind, PLaplacianParams, Partition,
};

use crate::args::{metric, parse_level_spec, ClusterMethod, Command};
use crate::error::{CliError, Result};
use crate::io::{format_float, matrix_csv, parse_graph_file, read_fc_matrix, read_matrix, to_json, write_outputs};

#[derive(Serialize)]
struct SpectrumReport<'a> {
    laplacian: LaplacianKind,
    labels: &'a [String],
    eigenvalues: &'a [f64],
    eigenvectors: Vec<Vec<f64>>,
}

#[derive(Serialize)]
struct PartitionReport<'a> {
    k: usize,
    assignment: &'a [usize],
    labels: &'a [String],
    metrics: CutMetrics,
    profile: ConnectivityProfile,
    #[serde(skip_serializing_if = "Option::is_none")]
    algebraic_connectivity: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fiedler: Option<Vec<f64>>,
}

#[derive(Serialize)]
struct JacobianReport<'a> {
    labels: &'a [String],
    edges: Vec<(usize, usize, f64)>,
    largest_component: Vec<usize>,
}

/// Path next to `output` with its extension replaced by `suffix`.
pub fn sibling(output: &Path, suffix: &str) -> PathBuf {
    output.with_extension(suffix)
}

fn partition_report(g: &Graph, p: &Partition, fiedler: Option<(f64, Vec<f64>)>) -> Result<String> {
    let (algebraic_connectivity, fiedler) = match fiedler {
        Some((l, v)) => (Some(l), Some(v)),
        None => (None, None),
    };
    Ok(to_json(&PartitionReport {
        k: p.k(),
        assignment: p.assignment(),
        labels: g.labels(),
        metrics: cut_metrics(g, p)?,
        profile: connectivity_profile(g, p)?,
        algebraic_connectivity,
        fiedler,
    }))
}

/// Run one command, writing its report files.
pub fn run(command: &Command) -> Result<()> {
    let files = execute(command)?;
    write_outputs(&files)
}

/// Run one command and return the files it would write.
pub fn execute(command: &Command) -> Result<Vec<(PathBuf, String)>> {
    match command {
        Command::Spectrum { common, laplacian } => {
            let g = parse_graph_file(&common.input)?;
            let s = eigendecompose(&g.laplacian((*laplacian).into()))?;
            let report = SpectrumReport {
                laplacian: s.kind(),
                labels: g.labels(),
                eigenvalues: s.eigenvalues(),
                eigenvectors: (0..s.len()).map(|k| s.eigenvector(k)).collect(),
            };
            let mut scree = String::from("index,eigenvalue\n");
            for (k, l) in s.eigenvalues().iter().enumerate() {
                scree.push_str(&format!("{},{}\n", k + 1, format_float(*l)));
            }
            Ok(vec![(common.output.clone(), to_json(&report)), (sibling(&common.output, "scree.csv"), scree)])
        }
        Command::Bipartition { common } => {
            let g = parse_graph_file(&common.input)?;
            let (l2, v) = graph_fiedler(&g)?;
            let p = sign_bipartition(&g, &v)?;
            Ok(vec![(common.output.clone(), partition_report(&g, &p, Some((l2, v)))?)])
        }
        Command::Cluster { common, k, method, dims, metric: m, q } => {
            let g = parse_graph_file(&common.input)?;
            let p = match method {
                ClusterMethod::Recursive => recursive_bipartition(&g, *k)?,
                ClusterMethod::Kway => {
                    let dim = dims.unwrap_or(k.saturating_sub(1).max(1));
                    let s = smallest_eigenpairs(&g.laplacian(LaplacianKind::Combinatorial), dim + 1)?;
                    let e = spectral_embedding(&s, dim)?;
                    kway_embedding_cluster(&e, *k, metric(*m, *q), common.seed)?
                }
            };
            Ok(vec![(common.output.clone(), partition_report(&g, &p, None)?)])
        }
        Command::PCluster { common, k, p, criterion } => {
            let g = parse_graph_file(&common.input)?;
            let params = PLaplacianParams { criterion: (*criterion).into(), ..PLaplacianParams::with_p(*p) };
            let part = p_recursive_bipartition(&g, *k, &params, common.seed)?;
            Ok(vec![(common.output.clone(), partition_report(&g, &part, None)?)])
        }
        Command::Hierarchy { common, levels, dot } => {
            let g = parse_graph_file(&common.input)?;
            let specs = levels.iter().map(|s| parse_level_spec(s, common.seed)).collect::<Result<Vec<_>>>()?;
            let h = build_hierarchy(&g, &specs)?;
            let mut files = vec![(common.output.clone(), to_json(&h))];
            if *dot {
                files.push((sibling(&common.output, "dot"), h.to_dot()));
            }
            Ok(files)
        }
        Command::PredictFc { common, beta, scale, offset, laplacian } => {
            let g = parse_graph_file(&common.input)?;
            let f = predict_fc_with(&g, &FcModel::new(*beta, *scale, *offset)?, (*laplacian).into())?;
            Ok(vec![(common.output.clone(), matrix_csv(Some(g.labels()), f.entries()))])
        }
        Command::FitFc { common, observed, laplacian } => {
            let g = parse_graph_file(&common.input)?;
            let observed = read_fc_matrix(observed)?;
            let report = fit_report_with(&g, &observed, (*laplacian).into())?;
            Ok(vec![(common.output.clone(), to_json(&report))])
        }
        Command::JacobianGraph { common, mask, threshold } => {
            let (_, couplings) = read_matrix(&common.input)?;
            let (_, mask_values) = read_matrix(mask)?;
            let mut bits = DMatrix::from_element(mask_values.nrows(), mask_values.ncols(), false);
            for (idx, &v) in mask_values.iter().enumerate() {
                bits[idx] = match v {
                    0.0 => false,
                    1.0 => true,
                    _ => {
                        return Err(CliError::Core(Error::InvalidParameter(format!(
                            "mask entries must be 0 or 1, found {v}"
                        ))))
                    }
                };
            }
            let (g, component) = jacobian_graph(&CouplingSystem::new(couplings, bits)?, *threshold)?;
            let report = JacobianReport {
                labels: g.labels(),
                edges: g.edges().iter().map(|e| (e.u, e.v, e.weight)).collect(),
                largest_component: component,
            };
            Ok(vec![(common.output.clone(), to_json(&report))])
        }
    }
}
