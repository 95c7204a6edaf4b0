//! Small dense complex matrices (2x2 and 4x4) with the operations two-qubit
//! state calculations need:
//!
//! - Kronecker products and Pauli matrices
//! - Hermitian eigenvalues via cyclic Jacobi sweeps
//! - von Neumann entropy, partial traces, Kraus-map application
//!
//! Eigenvalues are computed on the real symmetric embedding [[X, -Y], [Y, X]]
//! of a Hermitian matrix X + iY; every eigenvalue of the complex matrix shows
//! up twice in the embedding, so the solver keeps one copy of each pair.

use num_complex::Complex64;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::error::{Error, Result};

/// Hermiticity tolerance required by the eigensolver.
pub const HERMITICITY_TOL: f64 = 1e-10;
/// Off-diagonal Frobenius norm at which a Jacobi sweep is considered converged.
pub const JACOBI_TOL: f64 = 1e-14;
/// Hard ceiling on Jacobi sweeps; 4x4 problems converge in a handful.
pub const JACOBI_MAX_SWEEPS: usize = 50;
/// Tolerance for density-matrix checks made on behalf of entropy evaluation.
pub const DENSITY_TOL: f64 = 1e-8;
/// Completeness tolerance for Kraus sets.
pub const KRAUS_TOL: f64 = 1e-10;

/// Square complex matrix of compile-time dimension N (here 2 or 4).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CMatrix<const N: usize> {
    m: [[Complex64; N]; N],
}

pub type Matrix2 = CMatrix<2>;
pub type Matrix4 = CMatrix<4>;

impl<const N: usize> CMatrix<N> {
    pub fn zeros() -> Self {
        CMatrix {
            m: [[Complex64::ZERO; N]; N],
        }
    }

    pub fn identity() -> Self {
        let mut out = Self::zeros();
        for i in 0..N {
            out.m[i][i] = Complex64::ONE;
        }
        out
    }

    pub fn from_rows(rows: [[Complex64; N]; N]) -> Self {
        CMatrix { m: rows }
    }

    pub fn from_real(rows: [[f64; N]; N]) -> Self {
        let mut out = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                out.m[i][j] = Complex64::new(rows[i][j], 0.0);
            }
        }
        out
    }

    pub fn from_diagonal(d: [f64; N]) -> Self {
        let mut out = Self::zeros();
        for i in 0..N {
            out.m[i][i] = Complex64::new(d[i], 0.0);
        }
        out
    }

    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros();
        for i in 0..N {
            for j in 0..N {
                out.m[i][j] = self.m[j][i].conj();
            }
        }
        out
    }

    pub fn trace(&self) -> Complex64 {
        (0..N).map(|i| self.m[i][i]).sum()
    }

    pub fn scale(&self, k: f64) -> Self {
        let mut out = *self;
        for row in out.m.iter_mut() {
            for v in row.iter_mut() {
                *v *= k;
            }
        }
        out
    }

    pub fn cscale(&self, k: Complex64) -> Self {
        let mut out = *self;
        for row in out.m.iter_mut() {
            for v in row.iter_mut() {
                *v *= k;
            }
        }
        out
    }

    /// Max entrywise |a_ij - conj(a_ji)|.
    pub fn hermiticity_deviation(&self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..N {
            for j in 0..N {
                dev = dev.max((self.m[i][j] - self.m[j][i].conj()).norm());
            }
        }
        dev
    }

    /// Max entrywise |a_ij - b_ij|; the distance used throughout the tests.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        let mut dev: f64 = 0.0;
        for i in 0..N {
            for j in 0..N {
                dev = dev.max((self.m[i][j] - other.m[i][j]).norm());
            }
        }
        dev
    }
}

impl<const N: usize> Index<(usize, usize)> for CMatrix<N> {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.m[i][j]
    }
}

impl<const N: usize> IndexMut<(usize, usize)> for CMatrix<N> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.m[i][j]
    }
}

impl<const N: usize> Add for CMatrix<N> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..N {
            for j in 0..N {
                out.m[i][j] += rhs.m[i][j];
            }
        }
        out
    }
}

impl<const N: usize> Sub for CMatrix<N> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        let mut out = self;
        for i in 0..N {
            for j in 0..N {
                out.m[i][j] -= rhs.m[i][j];
            }
        }
        out
    }
}

impl<const N: usize> Mul for CMatrix<N> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let mut out = Self::zeros();
        for i in 0..N {
            for k in 0..N {
                let a = self.m[i][k];
                if a == Complex64::ZERO {
                    continue;
                }
                for j in 0..N {
                    out.m[i][j] += a * rhs.m[k][j];
                }
            }
        }
        out
    }
}

/// Pauli matrix by index: 0 is the identity, 1..=3 are sigma_x, sigma_y, sigma_z.
pub fn pauli(i: usize) -> Matrix2 {
    let o = Complex64::ZERO;
    let l = Complex64::ONE;
    let im = Complex64::I;
    match i {
        0 => Matrix2::identity(),
        1 => Matrix2::from_rows([[o, l], [l, o]]),
        2 => Matrix2::from_rows([[o, -im], [im, o]]),
        3 => Matrix2::from_rows([[l, o], [o, -l]]),
        _ => panic!("pauli index {i} out of range 0..=3"),
    }
}

/// Kronecker product; row-major with the first factor on the slow index,
/// so (a kron b)[2i+k][2j+l] = a[i][j] * b[k][l].
pub fn kron(a: &Matrix2, b: &Matrix2) -> Matrix4 {
    let mut out = Matrix4::zeros();
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    out[(2 * i + k, 2 * j + l)] = a[(i, j)] * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Eigenvalues sorted in descending order.
#[derive(Clone, Debug)]
pub struct Spectrum {
    values: Vec<f64>,
}

impl Spectrum {
    pub fn from_unsorted(mut values: Vec<f64>) -> Self {
        values.sort_by(|a, b| b.partial_cmp(a).expect("eigenvalues are finite"));
        Spectrum { values }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn min(&self) -> f64 {
        *self.values.last().expect("spectrum is nonempty")
    }
}

/// Eigenvalues of a Hermitian matrix by cyclic Jacobi rotation of the real
/// symmetric embedding. `tol` bounds the off-diagonal Frobenius norm left
/// after convergence.
pub fn herm_eigenvalues<const N: usize>(m: &CMatrix<N>, tol: f64) -> Result<Spectrum> {
    let dev = m.hermiticity_deviation();
    if dev > HERMITICITY_TOL {
        return Err(Error::NotHermitian { deviation: dev });
    }
    // Embed the Hermitian part: entries of (m + m')/2 split into X + iY with
    // X symmetric and Y antisymmetric, giving a symmetric 2N x 2N block matrix.
    let n2 = 2 * N;
    let mut a = vec![vec![0.0f64; n2]; n2];
    for i in 0..N {
        for j in 0..N {
            let h = (m.m[i][j] + m.m[j][i].conj()) * 0.5;
            a[i][j] = h.re;
            a[N + i][N + j] = h.re;
            a[i][N + j] = -h.im;
            a[N + i][j] = h.im;
        }
    }
    let diag = jacobi_symmetric(&mut a, tol, JACOBI_MAX_SWEEPS)?;
    let mut sorted = diag;
    sorted.sort_by(|x, y| y.partial_cmp(x).expect("eigenvalues are finite"));
    // Each eigenvalue of the complex matrix appears twice; keep one per pair.
    let values = sorted.into_iter().step_by(2).collect();
    Ok(Spectrum { values })
}

/// Cyclic Jacobi sweeps on a real symmetric matrix, eigenvalues only.
fn jacobi_symmetric(a: &mut [Vec<f64>], tol: f64, max_sweeps: usize) -> Result<Vec<f64>> {
    let n = a.len();
    let off_norm = |a: &[Vec<f64>]| -> f64 {
        let mut s = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                s += a[p][q] * a[p][q];
            }
        }
        (2.0 * s).sqrt()
    };
    let mut residual = off_norm(a);
    for _ in 0..max_sweeps {
        if residual <= tol {
            return Ok((0..n).map(|i| a[i][i]).collect());
        }
        for p in 0..n - 1 {
            for q in (p + 1)..n {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = if theta.abs() > 1e154 {
                    // theta^2 would overflow; the rotation angle is ~1/(2 theta).
                    0.5 / theta
                } else {
                    theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);
                a[p][p] -= t * apq;
                a[q][q] += t * apq;
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                for k in 0..n {
                    if k == p || k == q {
                        continue;
                    }
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = akp - s * (akq + tau * akp);
                    a[p][k] = a[k][p];
                    a[k][q] = akq + s * (akp - tau * akq);
                    a[q][k] = a[k][q];
                }
            }
        }
        residual = off_norm(a);
    }
    if residual <= tol {
        return Ok((0..n).map(|i| a[i][i]).collect());
    }
    Err(Error::NoConvergence {
        sweeps: max_sweeps,
        residual,
    })
}

/// x log2 x with the 0 log 0 = 0 convention.
pub(crate) fn plog2(p: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else {
        p * p.log2()
    }
}

/// Density-matrix diagnostics: how Hermitian, how normalized, how positive.
#[derive(Clone, Debug)]
pub struct DmCheck {
    pub hermiticity_deviation: f64,
    pub trace_deviation: f64,
    /// None when the matrix was too far from Hermitian to eigensolve.
    pub min_eigenvalue: Option<f64>,
    pub tol: f64,
    spectrum: Option<Spectrum>,
}

impl DmCheck {
    pub fn ok(&self) -> bool {
        self.failure().is_none()
    }

    /// First violated property, with the measured value.
    pub fn failure(&self) -> Option<String> {
        if self.hermiticity_deviation > self.tol {
            return Some(format!(
                "hermiticity deviation {:.3e} > {:.1e}",
                self.hermiticity_deviation, self.tol
            ));
        }
        if self.trace_deviation > self.tol {
            return Some(format!(
                "trace deviation {:.3e} > {:.1e}",
                self.trace_deviation, self.tol
            ));
        }
        match self.min_eigenvalue {
            None => Some("eigensolver failed".to_string()),
            Some(l) if l < -self.tol => {
                Some(format!("negative eigenvalue {:.3e} < -{:.1e}", l, self.tol))
            }
            Some(_) => None,
        }
    }

    pub fn spectrum(&self) -> Option<&Spectrum> {
        self.spectrum.as_ref()
    }
}

pub fn is_density_matrix<const N: usize>(m: &CMatrix<N>, tol: f64) -> DmCheck {
    let hermiticity_deviation = m.hermiticity_deviation();
    let trace_deviation = (m.trace() - Complex64::ONE).norm();
    let spectrum = if hermiticity_deviation <= HERMITICITY_TOL.max(tol) {
        // herm_eigenvalues symmetrizes internally, so a small deviation is fine.
        herm_eigenvalues_lenient(m).ok()
    } else {
        None
    };
    DmCheck {
        hermiticity_deviation,
        trace_deviation,
        min_eigenvalue: spectrum.as_ref().map(|s| s.min()),
        tol,
        spectrum,
    }
}

/// Eigenvalues of the Hermitian part, without the strict hermiticity gate.
fn herm_eigenvalues_lenient<const N: usize>(m: &CMatrix<N>) -> Result<Spectrum> {
    let h = (*m + m.adjoint()).scale(0.5);
    herm_eigenvalues(&h, JACOBI_TOL)
}

/// Von Neumann entropy in bits. The input must pass the density-matrix check;
/// eigenvalues that are negative within that tolerance are clamped to zero
/// before the 0 log 0 = 0 convention is applied.
pub fn von_neumann_entropy<const N: usize>(m: &CMatrix<N>) -> Result<f64> {
    let check = is_density_matrix(m, DENSITY_TOL);
    if let Some(reason) = check.failure() {
        return Err(Error::NotDensityMatrix { reason });
    }
    let spectrum = check.spectrum().expect("check passed, spectrum present");
    let mut h = 0.0;
    for &l in spectrum.values() {
        h -= plog2(l.max(0.0));
    }
    Ok(h)
}

/// Which qubit a partial trace keeps.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Trace out one qubit of a two-qubit matrix. Basis ordering matches `kron`:
/// index 2a + b for subsystem states |a>|b>.
pub fn partial_trace(m: &Matrix4, keep: Subsystem) -> Matrix2 {
    let mut out = Matrix2::zeros();
    for i in 0..2 {
        for j in 0..2 {
            out[(i, j)] = match keep {
                Subsystem::A => m[(2 * i, 2 * j)] + m[(2 * i + 1, 2 * j + 1)],
                Subsystem::B => m[(i, j)] + m[(2 + i, 2 + j)],
            };
        }
    }
    out
}

/// Apply a Kraus map sum_k K rho K'. The set must satisfy
/// sum_k K'K = I within `KRAUS_TOL`.
pub fn apply_kraus<const N: usize>(rho: &CMatrix<N>, ops: &[CMatrix<N>]) -> Result<CMatrix<N>> {
    let mut completeness = CMatrix::<N>::zeros();
    for k in ops {
        completeness = completeness + k.adjoint() * *k;
    }
    let deviation = completeness.max_abs_diff(&CMatrix::identity());
    if deviation > KRAUS_TOL {
        return Err(Error::IncompleteKraus { deviation });
    }
    let mut out = CMatrix::zeros();
    for k in ops {
        out = out + *k * *rho * k.adjoint();
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn kron_of_identities_is_identity() {
        let id = kron(&Matrix2::identity(), &Matrix2::identity());
        assert_eq!(id.max_abs_diff(&Matrix4::identity()), 0.0);
    }

    #[test]
    fn kron_pauli_products() {
        let zz = kron(&pauli(3), &pauli(3));
        assert_eq!(zz.max_abs_diff(&Matrix4::from_diagonal([1.0, -1.0, -1.0, 1.0])), 0.0);

        let xx = kron(&pauli(1), &pauli(1));
        let mut expect = Matrix4::zeros();
        for i in 0..4 {
            expect[(i, 3 - i)] = Complex64::ONE;
        }
        assert_eq!(xx.max_abs_diff(&expect), 0.0);

        let yy = kron(&pauli(2), &pauli(2));
        let mut expect = Matrix4::zeros();
        expect[(0, 3)] = c(-1.0, 0.0);
        expect[(1, 2)] = c(1.0, 0.0);
        expect[(2, 1)] = c(1.0, 0.0);
        expect[(3, 0)] = c(-1.0, 0.0);
        assert!(yy.max_abs_diff(&expect) == 0.0);
    }

    #[test]
    fn pauli_x_eigenvalues() {
        let s = herm_eigenvalues(&pauli(1), JACOBI_TOL).unwrap();
        assert!((s.values()[0] - 1.0).abs() < 1e-14);
        assert!((s.values()[1] + 1.0).abs() < 1e-14);
    }

    #[test]
    fn identity_eigenvalues() {
        let s = herm_eigenvalues(&Matrix4::identity(), JACOBI_TOL).unwrap();
        for &v in s.values() {
            assert!((v - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn x_state_eigenvalues_match_hand_computation() {
        // 1/4 (I + 0.3 XX - 0.4 YY + 0.56 ZZ); eigenvalues worked out by hand
        // from the two 2x2 blocks: {0.565, 0.215, 0.135, 0.085}.
        let rho = (kron(&pauli(0), &pauli(0))
            + kron(&pauli(1), &pauli(1)).scale(0.3)
            + kron(&pauli(2), &pauli(2)).scale(-0.4)
            + kron(&pauli(3), &pauli(3)).scale(0.56))
        .scale(0.25);
        let s = herm_eigenvalues(&rho, JACOBI_TOL).unwrap();
        let expect = [0.565, 0.215, 0.135, 0.085];
        for (got, want) in s.values().iter().zip(expect) {
            assert!((got - want).abs() < 1e-14, "got {got}, want {want}");
        }
    }

    #[test]
    fn non_hermitian_rejected() {
        let mut m = Matrix2::identity();
        m[(0, 1)] = c(0.1, 0.0);
        match herm_eigenvalues(&m, JACOBI_TOL) {
            Err(Error::NotHermitian { deviation }) => assert!((deviation - 0.1).abs() < 1e-15),
            other => panic!("expected NotHermitian, got {other:?}"),
        }
    }

    #[test]
    fn complex_hermitian_eigenvalues() {
        // [[2, 1-i], [1+i, 3]]: eigenvalues (5 +- sqrt(9))/2 = {4, 1}.
        let m = Matrix2::from_rows([[c(2.0, 0.0), c(1.0, -1.0)], [c(1.0, 1.0), c(3.0, 0.0)]]);
        let s = herm_eigenvalues(&m, JACOBI_TOL).unwrap();
        assert!((s.values()[0] - 4.0).abs() < 1e-13);
        assert!((s.values()[1] - 1.0).abs() < 1e-13);
    }

    #[test]
    fn entropy_of_maximally_mixed() {
        let rho = Matrix4::identity().scale(0.25);
        assert!((von_neumann_entropy(&rho).unwrap() - 2.0).abs() < 1e-12);
        let rho2 = Matrix2::identity().scale(0.5);
        assert!((von_neumann_entropy(&rho2).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_of_pure_state_is_zero() {
        let rho = Matrix4::from_diagonal([1.0, 0.0, 0.0, 0.0]);
        assert!(von_neumann_entropy(&rho).unwrap().abs() < 1e-12);
    }

    #[test]
    fn entropy_of_rank_two_mixture() {
        let rho = Matrix4::from_diagonal([0.5, 0.5, 0.0, 0.0]);
        assert!((von_neumann_entropy(&rho).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn entropy_clamps_tolerated_negative_eigenvalues() {
        let rho = Matrix4::from_diagonal([0.5, 0.5 + 5e-11, 0.0, -5e-11]);
        let h = von_neumann_entropy(&rho).unwrap();
        assert!(h.is_finite());
        assert!((h - 1.0).abs() < 1e-8);
    }

    #[test]
    fn entropy_rejects_non_density_input() {
        let rho = Matrix2::from_diagonal([0.75, 0.35]);
        assert!(matches!(
            von_neumann_entropy(&rho),
            Err(Error::NotDensityMatrix { .. })
        ));
        let nonpsd = Matrix2::from_rows([[c(0.75, 0.0), c(0.5, 0.0)], [c(0.5, 0.0), c(0.25, 0.0)]]);
        assert!(matches!(
            von_neumann_entropy(&nonpsd),
            Err(Error::NotDensityMatrix { .. })
        ));
    }

    #[test]
    fn partial_trace_of_product_state_recovers_factors() {
        let a = Matrix2::from_rows([[c(0.7, 0.0), c(0.1, 0.2)], [c(0.1, -0.2), c(0.3, 0.0)]]);
        let b = Matrix2::from_rows([[c(0.6, 0.0), c(0.0, -0.1)], [c(0.0, 0.1), c(0.4, 0.0)]]);
        let rho = kron(&a, &b);
        assert!(partial_trace(&rho, Subsystem::A).max_abs_diff(&a) < 1e-15);
        assert!(partial_trace(&rho, Subsystem::B).max_abs_diff(&b) < 1e-15);
    }

    #[test]
    fn partial_trace_of_maximally_mixed() {
        let rho = Matrix4::identity().scale(0.25);
        let half = Matrix2::identity().scale(0.5);
        assert!(partial_trace(&rho, Subsystem::A).max_abs_diff(&half) < 1e-16);
        assert!(partial_trace(&rho, Subsystem::B).max_abs_diff(&half) < 1e-16);
    }

    #[test]
    fn density_check_diagnostics() {
        let good = Matrix4::identity().scale(0.25);
        assert!(is_density_matrix(&good, 1e-8).ok());

        let overweight = Matrix4::identity().scale(0.275);
        let check = is_density_matrix(&overweight, 1e-8);
        assert!(!check.ok());
        assert!((check.trace_deviation - 0.1).abs() < 1e-12);

        let nonpsd = Matrix2::from_rows([[c(0.75, 0.0), c(0.5, 0.0)], [c(0.5, 0.0), c(0.25, 0.0)]]);
        let check = is_density_matrix(&nonpsd, 1e-8);
        assert!(!check.ok());
        assert!(check.min_eigenvalue.unwrap() < -1e-8);
    }

    #[test]
    fn kraus_identity_map() {
        let rho = Matrix2::from_rows([[c(0.6, 0.0), c(0.2, 0.1)], [c(0.2, -0.1), c(0.4, 0.0)]]);
        let out = apply_kraus(&rho, &[Matrix2::identity()]).unwrap();
        assert!(out.max_abs_diff(&rho) < 1e-16);
    }

    #[test]
    fn kraus_full_dephasing_kills_coherences() {
        let rho = Matrix2::from_rows([[c(0.6, 0.0), c(0.2, 0.1)], [c(0.2, -0.1), c(0.4, 0.0)]]);
        let k0 = Matrix2::identity().scale(0.5f64.sqrt());
        let k1 = pauli(3).scale(0.5f64.sqrt());
        let out = apply_kraus(&rho, &[k0, k1]).unwrap();
        let expect = Matrix2::from_diagonal([0.6, 0.4]);
        assert!(out.max_abs_diff(&expect) < 1e-15);
    }

    #[test]
    fn incomplete_kraus_rejected() {
        let rho = Matrix2::identity().scale(0.5);
        let only = Matrix2::identity().scale(0.5f64.sqrt());
        assert!(matches!(
            apply_kraus(&rho, &[only]),
            Err(Error::IncompleteKraus { .. })
        ));
    }
}
