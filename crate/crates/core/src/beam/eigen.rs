//! Lowest eigenpairs of `K φ = ω² M φ`.
//!
//! Both paths work on the inverted pencil (`K⁻¹ M`), whose dominant
//! eigenvalues are the wanted low modes, so the factorization error is
//! relative to `1/ω₁²` rather than to the stiff axial end of the spectrum.

use crate::error::{Error, Result};
use crate::linalg::{dense_cholesky, dot, norm, symmetric_eigen, DenseMatrix, SymBand};
use crate::real::Real;

use super::mesh::BeamMesh;
use super::modal::{classify, energy_fraction_z, Polarization};
use super::system::SystemMatrices;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Relative change of every wanted eigenvalue between iterations.
    pub tolerance: f64,
    /// Target for `‖Kφ − ω²Mφ‖/‖Kφ‖`; iteration also stops once the
    /// residual has stagnated at the arithmetic's floor.
    pub residual_tolerance: f64,
    pub max_iterations: usize,
    /// Systems with fewer free DOFs are solved densely.
    pub dense_threshold: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            residual_tolerance: 1e-13,
            max_iterations: 500,
            dense_threshold: 600,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SolveMethod {
    Dense,
    SubspaceIteration,
}

/// One mechanical mode.
#[derive(Debug, Clone)]
pub struct Mode<T> {
    /// Angular frequency Ω, rad/s.
    pub omega: T,
    /// `Ω/2π`, Hz.
    pub frequency: T,
    /// Full-length shape in system coordinates (see [`SystemMatrices`]),
    /// M-normalized; constrained DOFs are zero.
    pub shape: Vec<T>,
    pub polarization: Polarization,
    pub energy_fraction_z: T,
    /// `‖Kφ − ω²Mφ‖/‖Kφ‖` on the free DOFs.
    pub residual: T,
}

impl<T: Real> Mode<T> {
    pub fn translation(&self, node: usize) -> [T; 3] {
        [self.shape[6 * node], self.shape[6 * node + 1], self.shape[6 * node + 2]]
    }
}

#[derive(Debug, Clone)]
pub struct ModalSolution<T> {
    /// Ascending in frequency.
    pub modes: Vec<Mode<T>>,
    /// Rigid-translation mass of the whole structure, kg.
    pub total_mass: T,
    pub rotation_scale: T,
    pub method: SolveMethod,
    pub iterations: usize,
}

impl<T: Real> ModalSolution<T> {
    pub fn fundamental(&self) -> &Mode<T> {
        &self.modes[0]
    }
}

pub fn solve_modes<T: Real>(sys: &SystemMatrices<T>, mesh: &BeamMesh<T>, n_modes: usize) -> Result<ModalSolution<T>> {
    solve_modes_with(sys, mesh, n_modes, &SolverOptions::default())
}

pub fn solve_modes_with<T: Real>(
    sys: &SystemMatrices<T>,
    mesh: &BeamMesh<T>,
    n_modes: usize,
    opts: &SolverOptions,
) -> Result<ModalSolution<T>> {
    if n_modes == 0 {
        return Err(Error::InvalidInput("n_modes must be at least 1".into()));
    }
    if sys.dof_count() != mesh.dof_count() {
        return Err(Error::InvalidSystem("system and mesh sizes differ".into()));
    }
    let (k, m, free) = sys.reduced();
    let n_modes = n_modes.min(free.len());
    if m.cholesky().is_err() {
        return Err(Error::InvalidSystem("mass matrix is not positive definite".into()));
    }
    let (method, lambdas, vectors, iterations) = if free.len() < opts.dense_threshold {
        let (l, v) = dense_lowest(&k, &m, n_modes)?;
        (SolveMethod::Dense, l, v, 0)
    } else {
        let (l, v, it) = subspace_lowest(&k, &m, n_modes, opts)?;
        (SolveMethod::SubspaceIteration, l, v, it)
    };

    let n = sys.dof_count();
    let mut modes = Vec::with_capacity(n_modes);
    for (lambda, v) in lambdas.into_iter().zip(vectors) {
        let residual = relative_residual(&k, &m, lambda, &v);
        let mut shape = vec![T::zero(); n];
        for (&g, &x) in free.iter().zip(&v) {
            shape[g] = x;
        }
        let omega = lambda.max(T::zero()).sqrt();
        let fraction = energy_fraction_z(&shape, mesh, sys);
        modes.push(Mode {
            omega,
            frequency: omega / T::TAU(),
            shape,
            polarization: classify(fraction),
            energy_fraction_z: fraction,
            residual,
        });
    }
    Ok(ModalSolution {
        modes,
        total_mass: sys.translational_mass(0),
        rotation_scale: sys.rotation_scale,
        method,
        iterations,
    })
}

/// `‖Kφ − λMφ‖ / ‖Kφ‖`.
pub fn relative_residual<T: Real>(k: &SymBand<T>, m: &SymBand<T>, lambda: T, v: &[T]) -> T {
    let kv = k.matvec(v);
    let mv = m.matvec(v);
    let r: Vec<T> = kv.iter().zip(&mv).map(|(&a, &b)| a - lambda * b).collect();
    let denom = norm(&kv);
    if denom > T::zero() {
        norm(&r) / denom
    } else {
        norm(&r)
    }
}

fn not_positive_definite(e: Error) -> Error {
    match e {
        Error::InvalidSystem(msg) => Error::InvalidSystem(format!("stiffness after constraints: {msg}")),
        other => other,
    }
}

/// Dense reduction of `L⁻¹ M L⁻ᵀ` with `K = L Lᵀ`.
fn dense_lowest<T: Real>(k: &SymBand<T>, m: &SymBand<T>, n_modes: usize) -> Result<(Vec<T>, Vec<Vec<T>>)> {
    let n = k.dim();
    let l = dense_cholesky(&k.to_dense()).map_err(not_positive_definite)?;
    let md = m.to_dense();
    // z = L⁻¹ M (column by column), c = L⁻¹ zᵀ
    let mut z = DenseMatrix::zeros(n);
    for j in 0..n {
        let col = l.solve_lower(&md.column(j));
        for i in 0..n {
            z.set(i, j, col[i]);
        }
    }
    let mut c = DenseMatrix::zeros(n);
    for i in 0..n {
        let row: Vec<T> = (0..n).map(|j| z.get(i, j)).collect();
        let col = l.solve_lower(&row);
        for r in 0..n {
            c.set(r, i, col[r]);
        }
    }
    let half = T::lit(0.5);
    for i in 0..n {
        for j in 0..i {
            let s = half * (c.get(i, j) + c.get(j, i));
            c.set(i, j, s);
            c.set(j, i, s);
        }
    }
    let (mu, y) = symmetric_eigen(&c);
    let mut lambdas = Vec::with_capacity(n_modes);
    let mut vectors = Vec::with_capacity(n_modes);
    for idx in (0..n).rev().take(n_modes) {
        let mu_i = mu[idx];
        if !(mu_i > T::zero()) {
            return Err(Error::InvalidSystem("non-positive eigenvalue of the inverted pencil".into()));
        }
        let mut phi = l.solve_lower_transpose(&y.column(idx));
        let mnorm = m.bilinear(&phi, &phi).sqrt();
        for x in &mut phi {
            *x /= mnorm;
        }
        lambdas.push(T::one() / mu_i);
        vectors.push(phi);
    }
    Ok((lambdas, vectors))
}

/// Deterministic start vectors in [-1, 1] (splitmix64).
fn start_value<T: Real>(i: usize, j: usize) -> T {
    let mut z = (i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15) ^ (j as u64).wrapping_add(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^= z >> 31;
    T::lit((z >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0)
}

/// Small generalized problem `A q = λ B q`, `B` positive definite.
/// Returns ascending eigenvalues and B-orthonormal vectors.
fn small_generalized<T: Real>(a: &DenseMatrix<T>, b: &DenseMatrix<T>) -> Result<(Vec<T>, Vec<Vec<T>>)> {
    let p = a.dim();
    let l = dense_cholesky(b)?;
    let mut tmp = DenseMatrix::zeros(p);
    for j in 0..p {
        let col = l.solve_lower(&a.column(j));
        for i in 0..p {
            tmp.set(i, j, col[i]);
        }
    }
    let mut c = DenseMatrix::zeros(p);
    for i in 0..p {
        let row: Vec<T> = (0..p).map(|j| tmp.get(i, j)).collect();
        let col = l.solve_lower(&row);
        for r in 0..p {
            c.set(r, i, col[r]);
        }
    }
    let half = T::lit(0.5);
    for i in 0..p {
        for j in 0..i {
            let s = half * (c.get(i, j) + c.get(j, i));
            c.set(i, j, s);
            c.set(j, i, s);
        }
    }
    let (vals, y) = symmetric_eigen(&c);
    let vecs = (0..p).map(|j| l.solve_lower_transpose(&y.column(j))).collect();
    Ok((vals, vecs))
}

/// Shift-invert (shift 0) subspace iteration with Rayleigh–Ritz projection.
fn subspace_lowest<T: Real>(
    k: &SymBand<T>,
    m: &SymBand<T>,
    n_modes: usize,
    opts: &SolverOptions,
) -> Result<(Vec<T>, Vec<Vec<T>>, usize)> {
    let n = k.dim();
    let p = (2 * n_modes).max(n_modes + 8).min(n);
    let factor = k.cholesky().map_err(not_positive_definite)?;
    let tol = T::tolerance(opts.tolerance);
    let res_tol = T::tolerance(opts.residual_tolerance);

    let diag_m = m.diagonal();
    let mut x: Vec<Vec<T>> = (0..p)
        .map(|j| {
            if j == 0 {
                diag_m.clone()
            } else {
                (0..n).map(|i| start_value::<T>(i, j)).collect()
            }
        })
        .collect();

    let mut prev: Option<Vec<T>> = None;
    let mut best_res = vec![f64::INFINITY; n_modes];
    let mut stalls = vec![0usize; n_modes];
    let mut worst_change = f64::INFINITY;
    let mut worst_res = f64::INFINITY;

    for it in 1..=opts.max_iterations {
        let y: Vec<Vec<T>> = x.iter().map(|v| m.matvec(v)).collect();
        let xb: Vec<Vec<T>> = y.iter().map(|v| factor.solve(v)).collect();
        let mxb: Vec<Vec<T>> = xb.iter().map(|v| m.matvec(v)).collect();
        let mut kr = DenseMatrix::zeros(p);
        let mut mr = DenseMatrix::zeros(p);
        for a in 0..p {
            for b in 0..=a {
                let kab = (dot(&xb[a], &y[b]) + dot(&xb[b], &y[a])) / T::lit(2.0);
                let mab = dot(&xb[a], &mxb[b]);
                kr.set(a, b, kab);
                kr.set(b, a, kab);
                mr.set(a, b, mab);
                mr.set(b, a, mab);
            }
        }
        let (lambdas, q) = small_generalized(&kr, &mr).map_err(|_| {
            Error::InvalidSystem("subspace lost rank during iteration".into())
        })?;
        x = (0..p)
            .map(|j| {
                let mut v = vec![T::zero(); n];
                for (a, xa) in xb.iter().enumerate() {
                    let w = q[j][a];
                    for (vi, &xi) in v.iter_mut().zip(xa) {
                        *vi += w * xi;
                    }
                }
                v
            })
            .collect();

        let mut all_done = prev.is_some();
        worst_change = 0.0;
        worst_res = 0.0;
        for i in 0..n_modes {
            let Some(pv) = &prev else {
                worst_change = f64::INFINITY;
                continue;
            };
            let change = ((lambdas[i] - pv[i]) / lambdas[i]).abs();
            worst_change = worst_change.max(change.to_f64_lossy());
            if change > tol {
                all_done = false;
                continue;
            }
            let res = relative_residual(k, m, lambdas[i], &x[i]);
            let res64 = res.to_f64_lossy();
            worst_res = worst_res.max(res64);
            if res64 < best_res[i] * 0.9 {
                best_res[i] = res64;
                stalls[i] = 0;
            } else {
                stalls[i] += 1;
            }
            if res > res_tol && stalls[i] < 3 {
                all_done = false;
            }
        }
        if all_done {
            return Ok((lambdas[..n_modes].to_vec(), x.into_iter().take(n_modes).collect(), it));
        }
        prev = Some(lambdas);
    }
    Err(Error::SolverFailure {
        iterations: opts.max_iterations,
        worst_change,
        worst_residual: worst_res,
    })
}
