use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use super::mesh::Mesh;
use super::{BemError, CavityProblem};
use crate::kernels::{Kernel, LayerKind};
use crate::layerpot::{evaluate, evaluate_gl2d, EvalConfig, LayerPotError};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Quadrature for the self and near entries. `Gl2d` is the plain tensor
/// baseline at the near-field order; far entries always use plain GL2D.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum NearMethod {
    Proposed,
    Gl2d,
}

/// `(1/2 I + K) p = V g` at the collocation points.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseSystem {
    pub matrix: DMatrix<Complex64>,
    pub rhs: DVector<Complex64>,
    /// Neumann data per element.
    pub neumann: DVector<Complex64>,
    /// Near (non-self) entries per row.
    pub near_counts: Vec<usize>,
    /// Whether each diagonal entry took the singular branch.
    pub diagonal_singular: Vec<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Solution {
    pub x: DVector<Complex64>,
    /// `|A x - b| / |b|`.
    pub residual: f64,
}

/// `j` is near row `i` when the collocation point of `i` is within one
/// element chord length of the collocation point of `j`.
pub fn near_pairs(mesh: &Mesh, i: usize) -> Vec<usize> {
    (0..mesh.len())
        .filter(|&j| j != i && (mesh.collocation[i] - mesh.collocation[j]).norm() < mesh.edge_lengths[j])
        .collect()
}

enum Route {
    SelfElement,
    Near,
    Far,
}

fn route(mesh: &Mesh, i: usize, j: usize) -> Route {
    if i == j {
        Route::SelfElement
    } else if (mesh.collocation[i] - mesh.collocation[j]).norm() < mesh.edge_lengths[j] {
        Route::Near
    } else {
        Route::Far
    }
}

#[allow(clippy::too_many_arguments)]
fn entry(
    mesh: &Mesh,
    kernel: Kernel,
    layer: LayerKind,
    i: usize,
    j: usize,
    cfg: &EvalConfig,
    near: NearMethod,
    far_order: usize,
) -> Result<(Complex64, bool), LayerPotError> {
    let e = &mesh.elements[j];
    let x = &mesh.collocation[i];
    match (route(mesh, i, j), near) {
        (Route::SelfElement | Route::Near, NearMethod::Proposed) => {
            let r = evaluate(e, kernel, layer, x, cfg)?;
            Ok((r.value, r.path.singular))
        }
        (Route::SelfElement | Route::Near, NearMethod::Gl2d) => Ok((evaluate_gl2d(e, kernel, layer, x, cfg.order_curvature)?, false)),
        (Route::Far, _) => Ok((evaluate_gl2d(e, kernel, layer, x, far_order)?, false)),
    }
}

fn assemble_block(
    mesh: &Mesh,
    kernel: Kernel,
    layer: LayerKind,
    cfg: &EvalConfig,
    near: NearMethod,
    far_order: usize,
    columns: &[usize],
) -> Result<(DMatrix<Complex64>, Vec<bool>), BemError> {
    let n = mesh.len();
    let rows: Vec<Result<(Vec<Complex64>, bool), BemError>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut row = vec![Complex64::new(0.0, 0.0); n];
            let mut diag_singular = false;
            for &j in columns {
                let (v, singular) =
                    entry(mesh, kernel, layer, i, j, cfg, near, far_order).map_err(|source| BemError::Assembly { row: i, col: j, source })?;
                row[j] = v;
                if i == j {
                    diag_singular = singular;
                }
            }
            Ok((row, diag_singular))
        })
        .collect();
    let mut m = DMatrix::zeros(n, n);
    let mut diag = vec![false; n];
    for (i, r) in rows.into_iter().enumerate() {
        let (row, d) = r?;
        for (j, v) in row.into_iter().enumerate() {
            m[(i, j)] = v;
        }
        diag[i] = d;
    }
    Ok((m, diag))
}

/// Double-layer matrix `K_ij = int_{S_j} dG(x_i, y)/dn_y dS_y` with the
/// mesh's normals as stored; diagonal entries are principal values.
pub fn assemble_double_layer(
    mesh: &Mesh,
    kernel: Kernel,
    cfg: &EvalConfig,
    near: NearMethod,
    far_order: usize,
) -> Result<(DMatrix<Complex64>, Vec<bool>), BemError> {
    let all: Vec<usize> = (0..mesh.len()).collect();
    assemble_block(mesh, kernel, LayerKind::Double, cfg, near, far_order, &all)
}

/// Single-layer matrix `V_ij = int_{S_j} G(x_i, y) dS_y`.
pub fn assemble_single_layer(
    mesh: &Mesh,
    kernel: Kernel,
    cfg: &EvalConfig,
    near: NearMethod,
    far_order: usize,
) -> Result<DMatrix<Complex64>, BemError> {
    let all: Vec<usize> = (0..mesh.len()).collect();
    Ok(assemble_block(mesh, kernel, LayerKind::Single, cfg, near, far_order, &all)?.0)
}

/// Collocation system for the cavity problem.
///
/// With `s = +1` for normals pointing out of the fluid (and `-1` otherwise)
/// the system is `(1/2 I + s K) p = s V g`, where `g = dp/dn` is
/// `i k c q v0 (r_hat . n)` on the vibrating cap and zero elsewhere.
pub fn assemble(mesh: &Mesh, prob: &CavityProblem, cfg: &EvalConfig, near: NearMethod, far_order: usize) -> Result<DenseSystem, BemError> {
    prob.validate()?;
    let kernel = Kernel::Helmholtz(prob.k);
    let n = mesh.len();
    let s = mesh.domain_sign();
    let neumann = DVector::from_iterator(
        n,
        (0..n).map(|j| {
            if mesh.vibrating[j] {
                I * (prob.k * prob.c_s * prob.q * prob.v0 * mesh.collocation[j].normalize().dot(&mesh.normals[j]))
            } else {
                Complex64::new(0.0, 0.0)
            }
        }),
    );
    let (k, diagonal_singular) = assemble_double_layer(mesh, kernel, cfg, near, far_order)?;
    let active: Vec<usize> = (0..n).filter(|&j| neumann[j] != Complex64::new(0.0, 0.0)).collect();
    let (v, _) = assemble_block(mesh, kernel, LayerKind::Single, cfg, near, far_order, &active)?;
    let mut matrix = k * Complex64::from(s);
    for i in 0..n {
        matrix[(i, i)] += 0.5;
    }
    let rhs = (v * &neumann) * Complex64::from(s);
    let near_counts = (0..n).map(|i| near_pairs(mesh, i).len()).collect();
    Ok(DenseSystem { matrix, rhs, neumann, near_counts, diagonal_singular })
}

/// Dense LU solve with partial pivoting.
pub fn solve(matrix: &DMatrix<Complex64>, rhs: &DVector<Complex64>) -> Result<Solution, BemError> {
    if matrix.nrows() != matrix.ncols() || matrix.nrows() != rhs.len() {
        return Err(BemError::Dimension(matrix.nrows(), rhs.len()));
    }
    let x = matrix.clone().lu().solve(rhs).ok_or(BemError::Singular)?;
    if x.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(BemError::Singular);
    }
    let bn = rhs.norm();
    let residual = if bn > 0.0 { (matrix * &x - rhs).norm() / bn } else { (matrix * &x).norm() };
    Ok(Solution { x, residual })
}

/// 1-norm condition number via the explicit inverse.
pub fn condition_number_1(matrix: &DMatrix<Complex64>) -> Result<f64, BemError> {
    let inv = matrix.clone().try_inverse().ok_or(BemError::Singular)?;
    let norm1 = |m: &DMatrix<Complex64>| m.column_iter().map(|c| c.iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max);
    Ok(norm1(matrix) * norm1(&inv))
}

/// `|p - p_ref| / |p_ref|` in the Euclidean norm.
pub fn relative_l2_error(p: &[Complex64], p_ref: &[Complex64]) -> Result<f64, BemError> {
    if p.len() != p_ref.len() {
        return Err(BemError::Dimension(p.len(), p_ref.len()));
    }
    let den = p_ref.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if den == 0.0 {
        return Err(BemError::ZeroNorm);
    }
    Ok(p.iter().zip(p_ref).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt() / den)
}
