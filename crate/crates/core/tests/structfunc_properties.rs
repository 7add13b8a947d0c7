mod common;

use common::random_connected_graph;
use nalgebra::{DMatrix, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spectral_abstraction::graph::sbm_generate;
use spectral_abstraction::spectral::eigendecompose;
use spectral_abstraction::structfunc::{fit_fc, predict_fc, spectra_similarity};
use spectral_abstraction::{FcMatrix, FcModel, Graph, LaplacianKind};

fn fixtures() -> Vec<Graph> {
    vec![
        sbm_generate(3, 10, 0.7, 0.1, 11).unwrap(),
        random_connected_graph(12, 0.3, 2),
        Graph::with_default_labels(6, &[(0, 1, 1.0), (0, 2, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0), (3, 5, 1.0), (4, 5, 1.0)])
            .unwrap(),
    ]
}

/// Largest principal angle between the column spans of `a` and `b`.
fn max_principal_angle(a: &DMatrix<f64>, b: &DMatrix<f64>) -> f64 {
    let s = (a.transpose() * b).singular_values();
    s.iter().fold(1.0f64, |m, &x| m.min(x)).clamp(-1.0, 1.0).acos()
}

#[test]
fn prediction_is_positive_semidefinite() {
    for g in fixtures() {
        for beta in [0.0, 0.5, 2.0, 7.0] {
            let f = predict_fc(&g, &FcModel::new(beta, 1.7, 0.0).unwrap()).unwrap();
            assert!(f.eigenvalues()[0] >= -1e-9);
        }
    }
}

#[test]
fn prediction_inherits_structural_eigenspaces() {
    for g in fixtures() {
        let s = eigendecompose(&g.laplacian(LaplacianKind::SymmetricNormalized)).unwrap();
        for beta in [0.3, 1.0, 2.5] {
            let f = predict_fc(&g, &FcModel::new(beta, 1.0, 0.0).unwrap()).unwrap();
            let eig = SymmetricEigen::new(f.entries().clone());
            let mut order: Vec<usize> = (0..g.n()).collect();
            order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
            // F's eigenvalues descend as the structural ones ascend
            let mut start = 0;
            while start < g.n() {
                let mut end = start + 1;
                while end < g.n() && (s.eigenvalue(end) - s.eigenvalue(end - 1)).abs() < 1e-8 {
                    end += 1;
                }
                let structural = s.eigenvectors().columns(start, end - start).into_owned();
                let functional = DMatrix::from_fn(g.n(), end - start, |i, c| eig.eigenvectors[(i, order[start + c])]);
                assert!(max_principal_angle(&structural, &functional) < 1e-6);
                start = end;
            }
        }
    }
}

#[test]
fn round_trip_fits_over_parameter_grid() {
    for g in fixtures() {
        for beta in [0.4, 1.3, 3.1] {
            for scale in [0.5, 1.0, 2.0] {
                for offset in [0.0, 0.1, 0.7] {
                    let truth = FcModel::new(beta, scale, offset).unwrap();
                    let observed = predict_fc(&g, &truth).unwrap();
                    let (_, err) = fit_fc(&g, &observed).unwrap();
                    assert!(err < 1e-8, "{truth:?}: {err}");
                }
            }
        }
    }
}

#[test]
fn similarity_ignores_orthogonal_conjugation() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for g in fixtures() {
        let n = g.n();
        let a = predict_fc(&g, &FcModel::new(1.0, 1.0, 0.2).unwrap()).unwrap();
        let b = predict_fc(&g, &FcModel::new(0.4, 2.0, 0.0).unwrap()).unwrap();
        let q = DMatrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0)).qr().q();
        let rotated = q.transpose() * a.entries() * &q;
        let rotated = FcMatrix::new((&rotated + rotated.transpose()) * 0.5).unwrap();
        let base = spectra_similarity(&a, &b).unwrap();
        assert!((spectra_similarity(&rotated, &b).unwrap() - base).abs() < 1e-9);
        assert!((-1.0..=1.0).contains(&base));
    }
}
