//! Weak two-outcome measurements on qubit B.
//!
//! The outcome pair at strength x is P(+-x) = sqrt((1 -+ tanh x)/2) Q0 +
//! sqrt((1 +- tanh x)/2) Q1, where Q0, Q1 are the rank-one projectors along a
//! measurement direction z on the Bloch sphere. As x grows the pair collapses
//! onto the projective measurement along z; at x = 0 both operators equal
//! I/sqrt(2) and the measurement reveals nothing.
//!
//! Two closed forms for the outcome-averaged post-measurement entropy of A are
//! provided. `conditional_entropy_spectral` reproduces the definitional matrix
//! computation exactly; `conditional_entropy_closed` pairs each numerator with
//! the opposite outcome's normalization and differs from the spectral form by
//! `residual_identity(phi, x)`, which vanishes at phi = 0.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    kron, partial_trace, pauli, plog2, von_neumann_entropy, Matrix2, Matrix4, Subsystem,
};
use crate::states::XStateParams;

/// Strengths above this are clamped; tanh is exactly 1.0 in f64 long before.
pub const MAX_STRENGTH: f64 = 350.0;

/// Unit-norm tolerance for unitary parameters and directions.
pub const UNIT_TOL: f64 = 1e-12;

/// Outcome probabilities below this are treated as a degenerate branch.
pub const DEGENERATE_PROB: f64 = 1e-15;

/// Measurement strength x >= 0. Values above `MAX_STRENGTH` are clamped.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementStrength(f64);

impl MeasurementStrength {
    pub fn new(x: f64) -> Result<Self> {
        if !x.is_finite() || x < 0.0 {
            return Err(Error::Domain {
                what: "measurement strength",
                value: x,
            });
        }
        Ok(MeasurementStrength(x.min(MAX_STRENGTH)))
    }

    pub fn value(&self) -> f64 {
        self.0
    }

    pub fn tanh(&self) -> f64 {
        self.0.tanh()
    }
}

/// An SU(2) rotation V = t I + i (y1 sigma_x + y2 sigma_y + y3 sigma_z),
/// constrained to t^2 + |y|^2 = 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UnitaryParams {
    pub t: f64,
    pub y1: f64,
    pub y2: f64,
    pub y3: f64,
}

impl UnitaryParams {
    pub fn new(t: f64, y1: f64, y2: f64, y3: f64) -> Result<Self> {
        let norm = t * t + y1 * y1 + y2 * y2 + y3 * y3;
        let deviation = (norm - 1.0).abs();
        if !norm.is_finite() || deviation > UNIT_TOL {
            return Err(Error::NotUnit { deviation });
        }
        Ok(UnitaryParams { t, y1, y2, y3 })
    }

    pub fn matrix(&self) -> Matrix2 {
        let (t, y1, y2, y3) = (self.t, self.y1, self.y2, self.y3);
        Matrix2::from_rows([
            [Complex64::new(t, y3), Complex64::new(y2, y1)],
            [Complex64::new(-y2, y1), Complex64::new(t, -y3)],
        ])
    }
}

/// A unit vector on the Bloch sphere selecting the measured basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MeasurementDirection {
    pub z1: f64,
    pub z2: f64,
    pub z3: f64,
}

impl MeasurementDirection {
    pub fn new(z1: f64, z2: f64, z3: f64) -> Result<Self> {
        let norm = z1 * z1 + z2 * z2 + z3 * z3;
        let deviation = (norm - 1.0).abs();
        if !norm.is_finite() || deviation > UNIT_TOL {
            return Err(Error::NotUnit { deviation });
        }
        Ok(MeasurementDirection { z1, z2, z3 })
    }

    pub(crate) fn new_unchecked(z1: f64, z2: f64, z3: f64) -> Self {
        MeasurementDirection { z1, z2, z3 }
    }

    /// (sin b cos a, sin b sin a, cos b) for polar angle b, azimuth a.
    pub fn from_angles(polar: f64, azimuth: f64) -> Self {
        let (sb, cb) = polar.sin_cos();
        let (sa, ca) = azimuth.sin_cos();
        MeasurementDirection {
            z1: sb * ca,
            z2: sb * sa,
            z3: cb,
        }
    }

    pub fn neg(&self) -> Self {
        MeasurementDirection {
            z1: -self.z1,
            z2: -self.z2,
            z3: -self.z3,
        }
    }

    /// z . sigma as a matrix.
    pub fn bloch_matrix(&self) -> Matrix2 {
        pauli(1).scale(self.z1) + pauli(2).scale(self.z2) + pauli(3).scale(self.z3)
    }
}

/// Direction measured by the basis V|0>, V|1>: the Bloch vector of
/// V sigma_z V^dag, i.e. z1 = 2(-t y2 + y1 y3), z2 = 2(t y1 + y2 y3),
/// z3 = t^2 + y3^2 - y1^2 - y2^2.
pub fn direction_from_unitary(u: &UnitaryParams) -> MeasurementDirection {
    let (t, y1, y2, y3) = (u.t, u.y1, u.y2, u.y3);
    MeasurementDirection::new_unchecked(
        2.0 * (-t * y2 + y1 * y3),
        2.0 * (t * y1 + y2 * y3),
        t * t + y3 * y3 - y1 * y1 - y2 * y2,
    )
}

/// Canonical rotation taking sigma_z to the given direction: a rotation by
/// the polar angle about the in-plane axis perpendicular to the azimuth.
/// The antipode z = -e_z maps to the y3 = 0 representative (t, y) = (0, e_x).
pub fn unitary_from_direction(dir: &MeasurementDirection) -> UnitaryParams {
    if dir.z3 <= -1.0 + UNIT_TOL {
        return UnitaryParams { t: 0.0, y1: 1.0, y2: 0.0, y3: 0.0 };
    }
    let beta = dir.z3.clamp(-1.0, 1.0).acos();
    let alpha = dir.z2.atan2(dir.z1);
    let (sh, ch) = (beta / 2.0).sin_cos();
    UnitaryParams {
        t: ch,
        y1: sh * alpha.sin(),
        y2: -sh * alpha.cos(),
        y3: 0.0,
    }
}

/// The rotated basis projectors (Q0, Q1) = (V |0><0| V^dag, V |1><1| V^dag).
fn rotated_projectors(dir: &MeasurementDirection) -> (Matrix2, Matrix2) {
    let v = unitary_from_direction(dir).matrix();
    let vd = v.adjoint();
    let q0 = v * Matrix2::from_diagonal([1.0, 0.0]) * vd;
    let q1 = v * Matrix2::from_diagonal([0.0, 1.0]) * vd;
    (q0, q1)
}

/// The outcome pair (P(x), P(-x)) for strength x along `dir`.
pub fn weak_operators(
    x: &MeasurementStrength,
    dir: &MeasurementDirection,
) -> (Matrix2, Matrix2) {
    let t = x.tanh();
    let lo = ((1.0 - t) / 2.0).sqrt();
    let hi = ((1.0 + t) / 2.0).sqrt();
    let (q0, q1) = rotated_projectors(dir);
    (q0.scale(lo) + q1.scale(hi), q0.scale(hi) + q1.scale(lo))
}

/// Post-measurement data for the two outcomes of a weak measurement on B.
#[derive(Clone, Debug)]
pub struct PosteriorEnsemble {
    pub p_plus: f64,
    pub p_minus: f64,
    pub rho_plus: Matrix2,
    pub rho_minus: Matrix2,
    /// Set when an outcome probability fell below `DEGENERATE_PROB`; the
    /// corresponding conditional state is reported as I/2.
    pub degenerate_plus: bool,
    pub degenerate_minus: bool,
}

impl PosteriorEnsemble {
    /// sum over outcomes of p * S(rho_A|outcome); degenerate branches
    /// contribute nothing.
    pub fn conditional_entropy(&self) -> Result<f64> {
        let mut h = 0.0;
        if !self.degenerate_plus {
            h += self.p_plus * von_neumann_entropy(&self.rho_plus)?;
        }
        if !self.degenerate_minus {
            h += self.p_minus * von_neumann_entropy(&self.rho_minus)?;
        }
        Ok(h)
    }
}

fn density_guard(rho: &Matrix4) -> Result<()> {
    let herm = rho.hermiticity_deviation();
    let tr = (rho.trace() - Complex64::new(1.0, 0.0)).norm();
    if herm > 1e-8 || tr > 1e-8 {
        return Err(Error::NotDensityMatrix {
            reason: format!("hermiticity deviation {herm:.3e}, trace deviation {tr:.3e}"),
        });
    }
    Ok(())
}

fn ensemble_from_ops(rho: &Matrix4, ops: [&Matrix2; 2]) -> Result<PosteriorEnsemble> {
    density_guard(rho)?;
    let id = Matrix2::identity();
    let mut probs = [0.0f64; 2];
    let mut states = [Matrix2::zeros(); 2];
    let mut degenerate = [false; 2];
    for (k, op) in ops.into_iter().enumerate() {
        let big = kron(&id, op);
        let sandwich = big * *rho * big.adjoint();
        let p = sandwich.trace().re;
        probs[k] = p;
        if p <= DEGENERATE_PROB {
            states[k] = id.scale(0.5);
            degenerate[k] = true;
        } else {
            states[k] = partial_trace(&sandwich, Subsystem::A).scale(1.0 / p);
        }
    }
    Ok(PosteriorEnsemble {
        p_plus: probs[0],
        p_minus: probs[1],
        rho_plus: states[0],
        rho_minus: states[1],
        degenerate_plus: degenerate[0],
        degenerate_minus: degenerate[1],
    })
}

/// Outcome probabilities and conditional states of A after the weak pair
/// (P(x), P(-x)) acts on B, computed at the matrix level.
pub fn posterior_ensemble(
    rho: &Matrix4,
    x: &MeasurementStrength,
    dir: &MeasurementDirection,
) -> Result<PosteriorEnsemble> {
    let (pp, pm) = weak_operators(x, dir);
    ensemble_from_ops(rho, [&pp, &pm])
}

/// Projective (strong) counterpart along `dir`.
pub fn projective_ensemble(
    rho: &Matrix4,
    dir: &MeasurementDirection,
) -> Result<PosteriorEnsemble> {
    let zs = dir.bloch_matrix();
    let q0 = (Matrix2::identity() + zs).scale(0.5);
    let q1 = (Matrix2::identity() - zs).scale(0.5);
    ensemble_from_ops(rho, [&q0, &q1])
}

/// The two scalars the closed forms depend on: phi = s z3 and
/// theta = sqrt(c1^2 z1^2 + c2^2 z2^2 + c3^2 z3^2).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhiTheta {
    pub phi: f64,
    pub theta: f64,
}

pub fn phi_theta(params: &XStateParams, dir: &MeasurementDirection) -> PhiTheta {
    let (c1, c2, c3) = (params.c1, params.c2, params.c3);
    let (z1, z2, z3) = (dir.z1, dir.z2, dir.z3);
    PhiTheta {
        phi: params.s * z3,
        theta: (c1 * c1 * z1 * z1 + c2 * c2 * z2 * z2 + c3 * c3 * z3 * z3).sqrt(),
    }
}

fn closed_term(u: f64, t: f64, d: f64, num_name: &'static str, den_name: &'static str) -> Result<f64> {
    let num = 1.0 + u * t;
    if num <= 0.0 {
        return Err(Error::LogDomain { term: num_name, value: num });
    }
    if d <= 0.0 {
        return Err(Error::LogDomain { term: den_name, value: d });
    }
    Ok(num / 4.0 * (num / (2.0 * d)).log2())
}

/// Four-term closed form of the weak conditional entropy in (phi, theta).
///
/// Each numerator 1 +- (phi +- theta) tanh x is paired with the opposite
/// outcome's normalization, so the value is exactly even in phi (bit for
/// bit). The spectral variant below restores the trace-consistent pairing;
/// the two differ by `residual_identity(phi, x)`.
pub fn conditional_entropy_closed(pt: &PhiTheta, x: &MeasurementStrength) -> Result<f64> {
    let t = x.tanh();
    let (phi, theta) = (pt.phi, pt.theta);
    let dm = 1.0 - phi * t;
    let dp = 1.0 + phi * t;
    let t1 = closed_term(phi + theta, t, dm, "1 + (phi+theta) tanh x", "1 - phi tanh x")?;
    let t2 = closed_term(phi - theta, t, dm, "1 + (phi-theta) tanh x", "1 - phi tanh x")?;
    let t3 = closed_term(-phi - theta, t, dp, "1 - (phi+theta) tanh x", "1 + phi tanh x")?;
    let t4 = closed_term(-phi + theta, t, dp, "1 - (phi-theta) tanh x", "1 + phi tanh x")?;
    Ok(-((t1 + t2) + (t3 + t4)))
}

/// Closed form assembled from the actual posterior spectra: outcome weights
/// (1 -+ phi tanh x)/2 with conditional eigenvalues
/// (1 -+ (phi +- theta) tanh x) / (2 (1 -+ phi tanh x)).
///
/// Agrees with the definitional matrix computation to machine precision.
pub fn conditional_entropy_spectral(pt: &PhiTheta, x: &MeasurementStrength) -> Result<f64> {
    let t = x.tanh();
    let (phi, theta) = (pt.phi, pt.theta);
    let mut h = 0.0;
    for sign in [1.0, -1.0] {
        let d = 1.0 - sign * phi * t;
        if d <= 0.0 {
            return Err(Error::LogDomain { term: "outcome weight", value: d });
        }
        let la = (1.0 - sign * (phi + theta) * t) / (2.0 * d);
        let lb = (1.0 - sign * (phi - theta) * t) / (2.0 * d);
        for l in [la, lb] {
            if l < 0.0 {
                return Err(Error::LogDomain { term: "conditional eigenvalue", value: l });
            }
        }
        h -= d / 2.0 * (plog2(la) + plog2(lb));
    }
    Ok(h)
}

/// The analytic gap between the two closed forms:
/// phi tanh x * log2((1 + phi tanh x) / (1 - phi tanh x)).
pub fn residual_identity(phi: f64, x: &MeasurementStrength) -> Result<f64> {
    let v = phi * x.tanh();
    if v.abs() >= 1.0 {
        return Err(Error::Domain { what: "phi tanh x", value: v });
    }
    if v == 0.0 {
        return Ok(0.0);
    }
    Ok(v * ((1.0 + v) / (1.0 - v)).log2())
}

/// Definitional weak conditional entropy at the matrix level.
pub fn weak_conditional_entropy(
    rho: &Matrix4,
    x: &MeasurementStrength,
    dir: &MeasurementDirection,
) -> Result<f64> {
    posterior_ensemble(rho, x, dir)?.conditional_entropy()
}

/// Definitional projective conditional entropy at the matrix level.
pub fn projective_conditional_entropy(
    rho: &Matrix4,
    dir: &MeasurementDirection,
) -> Result<f64> {
    projective_ensemble(rho, dir)?.conditional_entropy()
}

/// Uniform direction on the sphere (for randomized checks).
pub fn sample_direction<R: rand::Rng + ?Sized>(rng: &mut R) -> MeasurementDirection {
    let z3: f64 = rng.random_range(-1.0..=1.0);
    let az: f64 = rng.random_range(0.0..std::f64::consts::TAU);
    let r = (1.0 - z3 * z3).max(0.0).sqrt();
    MeasurementDirection::new_unchecked(r * az.cos(), r * az.sin(), z3)
}

/// Uniform SU(2) element (for randomized checks): a uniform point on S^3.
pub fn sample_unitary<R: rand::Rng + ?Sized>(rng: &mut R) -> UnitaryParams {
    loop {
        let a: [f64; 4] = std::array::from_fn(|_| rng.random_range(-1.0..=1.0));
        let n2: f64 = a.iter().map(|v| v * v).sum();
        if n2 > 1e-6 && n2 <= 1.0 {
            let n = n2.sqrt();
            return UnitaryParams { t: a[0] / n, y1: a[1] / n, y2: a[2] / n, y3: a[3] / n };
        }
    }
}
