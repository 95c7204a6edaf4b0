//! The four-parameter family of two-qubit X states
//!
//! ```text
//! rho = 1/4 (I kron I + s I kron sigma_z + sum_i c_i sigma_i kron sigma_i)
//! ```
//!
//! with parameters (s, c1, c2, c3). The bias s sits on qubit B, which is the
//! measured side everywhere in this crate. Closed forms for the spectrum and
//! the entropies live here next to the matrix constructions they must match.

use std::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{kron, partial_trace, pauli, plog2, Matrix4, Subsystem};

/// Eigenvalues this far below zero still count as physical (rounding slack).
pub const PHYSICALITY_TOL: f64 = 1e-12;

/// How strictly parameter validation is applied.
///
/// `Strict` additionally demands the ordering |c1| < |c2| < |c3| and the bias
/// window 0 < |s| < 1 - |c3| that the closed-form minimum argument relies on.
/// `Relaxed` only requires a physical state with parameters in [-1, 1].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValidationMode {
    Strict,
    Relaxed,
}

/// One failed validation constraint with the measured amount of violation.
#[derive(Clone, Debug)]
pub struct Violation {
    pub constraint: String,
    /// How far past the constraint the parameters are; 0 means exactly on the
    /// (excluded) boundary.
    pub margin: f64,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} violated (by {:.3e})", self.constraint, self.margin)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XStateParams {
    pub s: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
}

/// Closed-form eigenvalues of the family, two per X block:
/// l1, l2 = (1 - c3 +- r_plus)/4 and l3, l4 = (1 + c3 +- r_minus)/4 with
/// r_plus = sqrt(s^2 + (c1+c2)^2), r_minus = sqrt(s^2 + (c1-c2)^2).
#[derive(Clone, Copy, Debug)]
pub struct StateSpectrum {
    pub l1: f64,
    pub l2: f64,
    pub l3: f64,
    pub l4: f64,
}

impl StateSpectrum {
    pub fn values(&self) -> [f64; 4] {
        [self.l1, self.l2, self.l3, self.l4]
    }

    pub fn sorted_desc(&self) -> [f64; 4] {
        let mut v = self.values();
        v.sort_by(|a, b| b.partial_cmp(a).expect("eigenvalues are finite"));
        v
    }

    pub fn min(&self) -> f64 {
        self.values().into_iter().fold(f64::INFINITY, f64::min)
    }
}

fn eigenvalues_of(s: f64, c1: f64, c2: f64, c3: f64) -> StateSpectrum {
    let r_plus = (s * s + (c1 + c2) * (c1 + c2)).sqrt();
    let r_minus = (s * s + (c1 - c2) * (c1 - c2)).sqrt();
    StateSpectrum {
        l1: (1.0 - c3 + r_plus) / 4.0,
        l2: (1.0 - c3 - r_plus) / 4.0,
        l3: (1.0 + c3 + r_minus) / 4.0,
        l4: (1.0 + c3 - r_minus) / 4.0,
    }
}

impl XStateParams {
    pub fn new(s: f64, c1: f64, c2: f64, c3: f64) -> Self {
        XStateParams { s, c1, c2, c3 }
    }

    pub fn zero() -> Self {
        XStateParams::new(0.0, 0.0, 0.0, 0.0)
    }

    /// Every violated constraint for the requested mode, with margins.
    pub fn violations(&self, mode: ValidationMode) -> Vec<Violation> {
        let mut out = Vec::new();
        let vals = [self.s, self.c1, self.c2, self.c3];
        if vals.iter().any(|v| !v.is_finite()) {
            out.push(Violation {
                constraint: "parameters finite".into(),
                margin: f64::INFINITY,
            });
            return out;
        }
        for (name, v) in [("|s|", self.s), ("|c1|", self.c1), ("|c2|", self.c2), ("|c3|", self.c3)]
        {
            if v.abs() > 1.0 {
                out.push(Violation {
                    constraint: format!("{name} <= 1"),
                    margin: v.abs() - 1.0,
                });
            }
        }
        if mode == ValidationMode::Strict {
            if self.c1.abs() >= self.c2.abs() {
                out.push(Violation {
                    constraint: "|c1| < |c2|".into(),
                    margin: self.c1.abs() - self.c2.abs(),
                });
            }
            if self.c2.abs() >= self.c3.abs() {
                out.push(Violation {
                    constraint: "|c2| < |c3|".into(),
                    margin: self.c2.abs() - self.c3.abs(),
                });
            }
            if self.s.abs() == 0.0 {
                out.push(Violation {
                    constraint: "0 < |s|".into(),
                    margin: 0.0,
                });
            }
            if self.s.abs() >= 1.0 - self.c3.abs() {
                out.push(Violation {
                    constraint: "|s| < 1-|c3|".into(),
                    margin: self.s.abs() - (1.0 - self.c3.abs()),
                });
            }
        }
        let min_eig = eigenvalues_of(self.s, self.c1, self.c2, self.c3).min();
        if min_eig < -PHYSICALITY_TOL {
            out.push(Violation {
                constraint: format!("min eigenvalue >= -{PHYSICALITY_TOL:.0e}"),
                margin: -PHYSICALITY_TOL - min_eig,
            });
        }
        out
    }

    pub fn validate(&self, mode: ValidationMode) -> Result<()> {
        let violations = self.violations(mode);
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::InvalidParams { violations })
        }
    }

    /// Closed-form spectrum. Requires a (relaxed-)valid parameter set.
    pub fn spectrum(&self) -> Result<StateSpectrum> {
        self.validate(ValidationMode::Relaxed)?;
        Ok(eigenvalues_of(self.s, self.c1, self.c2, self.c3))
    }

    /// The state as an explicit matrix: diagonal (1+s+c3, 1-s-c3, 1+s-c3,
    /// 1-s+c3)/4, anti-diagonal corners (c1-c2)/4 and center (c1+c2)/4.
    pub fn to_density_matrix(&self) -> Result<Matrix4> {
        self.validate(ValidationMode::Relaxed)?;
        let (s, c1, c2, c3) = (self.s, self.c1, self.c2, self.c3);
        let mut m = [[0.0f64; 4]; 4];
        m[0][0] = (1.0 + s + c3) / 4.0;
        m[1][1] = (1.0 - s - c3) / 4.0;
        m[2][2] = (1.0 + s - c3) / 4.0;
        m[3][3] = (1.0 - s + c3) / 4.0;
        m[0][3] = (c1 - c2) / 4.0;
        m[3][0] = (c1 - c2) / 4.0;
        m[1][2] = (c1 + c2) / 4.0;
        m[2][1] = (c1 + c2) / 4.0;
        Ok(Matrix4::from_real(m))
    }

    /// Same state assembled from the Pauli expansion; agrees with
    /// `to_density_matrix` to machine precision and exists as a cross-check.
    pub fn pauli_sum_matrix(&self) -> Matrix4 {
        let mut m = kron(&pauli(0), &pauli(0)) + kron(&pauli(0), &pauli(3)).scale(self.s);
        for (i, c) in [(1, self.c1), (2, self.c2), (3, self.c3)] {
            m = m + kron(&pauli(i), &pauli(i)).scale(c);
        }
        m.scale(0.25)
    }

    /// Closed-form joint entropy, in bits. Eigenvalues that round slightly
    /// negative at the physical boundary are clamped to zero.
    pub fn joint_entropy(&self) -> Result<f64> {
        let spec = self.spectrum()?;
        let mut h = 0.0;
        for l in spec.values() {
            h -= plog2(l.max(0.0));
        }
        Ok(h)
    }

    /// (S_A, S_B) in closed form: qubit A is maximally mixed, so S_A = 1;
    /// S_B = 1 + binary_term(s).
    pub fn reduced_entropies(&self) -> Result<(f64, f64)> {
        self.validate(ValidationMode::Relaxed)?;
        Ok((1.0, 1.0 + binary_term(self.s)?))
    }
}

/// -(1-v)/2 log2(1-v) - (1+v)/2 log2(1+v), the entropy defect of a qubit with
/// Bloch length |v|. binary_term(0) = 0, binary_term(+-1) = -1.
pub fn binary_term(v: f64) -> Result<f64> {
    if !v.is_finite() || v.abs() > 1.0 {
        return Err(Error::Domain {
            what: "binary_term argument",
            value: v,
        });
    }
    Ok(-(plog2(1.0 - v) + plog2(1.0 + v)) / 2.0)
}

/// Partial traces of the family: A is I/2, B is (I + s sigma_z)/2.
pub fn reduced_b(rho: &Matrix4) -> crate::linalg::Matrix2 {
    partial_trace(rho, Subsystem::B)
}

const MAX_DRAWS: usize = 1_000_000;

/// Rejection-sample a strict-valid parameter set.
pub fn sample_strict<R: Rng + ?Sized>(rng: &mut R) -> XStateParams {
    for _ in 0..MAX_DRAWS {
        let p = XStateParams::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        if p.violations(ValidationMode::Strict).is_empty() {
            return p;
        }
    }
    unreachable!("strict acceptance region has positive volume");
}

/// Rejection-sample a strict-ordered physical set with s = 0 (diagonal in the
/// Bell basis). The bias constraints are waived since s is pinned to zero.
pub fn sample_bell_diagonal<R: Rng + ?Sized>(rng: &mut R) -> XStateParams {
    for _ in 0..MAX_DRAWS {
        let c1 = rng.random_range(-1.0..1.0);
        let c2 = rng.random_range(-1.0..1.0);
        let c3 = rng.random_range(-1.0..1.0);
        let p = XStateParams::new(0.0, c1, c2, c3);
        let ordered = c1.abs() < c2.abs() && c2.abs() < c3.abs();
        if ordered && eigenvalues_of(0.0, c1, c2, c3).min() >= -PHYSICALITY_TOL {
            return p;
        }
    }
    unreachable!("bell-diagonal acceptance region has positive volume");
}

/// Rejection-sample any physical parameter set in [-1, 1]^4.
pub fn sample_relaxed<R: Rng + ?Sized>(rng: &mut R) -> XStateParams {
    for _ in 0..MAX_DRAWS {
        let p = XStateParams::new(
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
        );
        if p.violations(ValidationMode::Relaxed).is_empty() {
            return p;
        }
    }
    unreachable!("relaxed acceptance region has positive volume");
}
