//! Local phase-flip (dephasing) noise applied symmetrically to both qubits.
//!
//! Single-qubit Kraus pair G0 = sqrt(1 - p/2) I, G1 = sqrt(p/2) sigma_z with
//! flip probability p in [0, 1]. Acting on both sides of the family the
//! channel keeps (s, c3) fixed and shrinks the transverse correlations:
//! (s, c1, c2, c3) -> (s, (1-p)^2 c1, (1-p)^2 c2, c3).

use crate::error::{Error, Result};
use crate::linalg::{kron, pauli, plog2, Matrix2, Matrix4};
use crate::measurement::{conditional_entropy_closed, MeasurementStrength, PhiTheta};
use crate::states::{binary_term, ValidationMode, XStateParams};

fn check_probability(p: f64) -> Result<()> {
    if !p.is_finite() || !(0.0..=1.0).contains(&p) {
        return Err(Error::Domain { what: "flip probability", value: p });
    }
    Ok(())
}

/// Single-qubit phase-flip Kraus pair (G0, G1) for flip probability p.
pub fn kraus_pair(p: f64) -> Result<(Matrix2, Matrix2)> {
    check_probability(p)?;
    let g0 = Matrix2::identity().scale((1.0 - p / 2.0).sqrt());
    let g1 = pauli(3).scale((p / 2.0).sqrt());
    Ok((g0, g1))
}

/// The four two-qubit Kraus operators G_i kron G_j of the both-sides channel.
pub fn kraus_phase_flip(p: f64) -> Result<[Matrix4; 4]> {
    let (g0, g1) = kraus_pair(p)?;
    Ok([
        kron(&g0, &g0),
        kron(&g0, &g1),
        kron(&g1, &g0),
        kron(&g1, &g1),
    ])
}

/// Parameter map of the both-sides channel: transverse correlations scale by
/// (1-p)^2, the bias and c3 are untouched.
pub fn evolve_params(params: &XStateParams, p: f64) -> Result<XStateParams> {
    check_probability(p)?;
    let k = (1.0 - p) * (1.0 - p);
    Ok(XStateParams::new(params.s, k * params.c1, k * params.c2, params.c3))
}

/// p(t) = 1 - exp(-gamma t) for decay rate gamma >= 0 and time t >= 0.
/// Saturates to exactly 1.0 in f64 once gamma * t exceeds about 37.
pub fn p_of_time(gamma: f64, time: f64) -> Result<f64> {
    if !gamma.is_finite() || gamma < 0.0 {
        return Err(Error::Domain { what: "decay rate", value: gamma });
    }
    if !time.is_finite() || time < 0.0 {
        return Err(Error::Domain { what: "evolution time", value: time });
    }
    Ok(1.0 - (-gamma * time).exp())
}

/// Closed-form super discord of the dephased state, written directly in the
/// original parameters: the min-weak-entropy block is unchanged (it depends
/// only on s and |c3|), while the joint entropy uses the shrunken
/// off-diagonal radii sqrt(s^2 + (1-p)^4 (c1 +- c2)^2).
///
/// Numerically agrees with `sqd_closed` of `evolve_params` output; both
/// routes are kept so they can be checked against each other.
pub fn sqd_dephased_closed(
    params: &XStateParams,
    x: &MeasurementStrength,
    p: f64,
    mode: ValidationMode,
) -> Result<f64> {
    params.validate(mode)?;
    check_probability(p)?;
    let (s, c1, c2, c3) = (params.s, params.c1, params.c2, params.c3);
    let f = conditional_entropy_closed(&PhiTheta { phi: s, theta: c3.abs() }, x)?;
    let sb = 1.0 + binary_term(s)?;
    let k4 = (1.0 - p) * (1.0 - p) * (1.0 - p) * (1.0 - p);
    let r_plus = (s * s + k4 * (c1 + c2) * (c1 + c2)).sqrt();
    let r_minus = (s * s + k4 * (c1 - c2) * (c1 - c2)).sqrt();
    let mut sab = 0.0;
    for l in [
        (1.0 - c3 + r_plus) / 4.0,
        (1.0 - c3 - r_plus) / 4.0,
        (1.0 + c3 + r_minus) / 4.0,
        (1.0 + c3 - r_minus) / 4.0,
    ] {
        sab -= plog2(l.max(0.0));
    }
    Ok(f + sb - sab)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discord::sqd_closed;
    use crate::linalg::apply_kraus;

    const FIG_B: XStateParams = XStateParams { s: 0.2, c1: 0.3, c2: -0.4, c3: 0.56 };

    fn x(v: f64) -> MeasurementStrength {
        MeasurementStrength::new(v).unwrap()
    }

    #[test]
    fn probability_domain_is_enforced() {
        assert!(kraus_pair(-0.1).is_err());
        assert!(kraus_pair(1.1).is_err());
        assert!(evolve_params(&FIG_B, f64::NAN).is_err());
        assert!(sqd_dephased_closed(&FIG_B, &x(1.0), 2.0, ValidationMode::Strict).is_err());
    }

    #[test]
    fn zero_noise_is_the_identity_channel() {
        let rho = FIG_B.to_density_matrix().unwrap();
        let out = apply_kraus(&rho, &kraus_phase_flip(0.0).unwrap()).unwrap();
        assert!(out.max_abs_diff(&rho) < 1e-15);
        assert_eq!(evolve_params(&FIG_B, 0.0).unwrap(), FIG_B);
    }

    #[test]
    fn full_noise_kills_transverse_correlations() {
        let e = evolve_params(&FIG_B, 1.0).unwrap();
        assert_eq!((e.s, e.c1, e.c2, e.c3), (0.2, 0.0, 0.0, 0.56));
    }

    #[test]
    fn halfway_parameter_map() {
        let e = evolve_params(&FIG_B, 0.5).unwrap();
        assert_eq!((e.s, e.c1, e.c2, e.c3), (0.2, 0.075, -0.1, 0.56));
    }

    #[test]
    fn kraus_and_parameter_map_agree() {
        for p in [0.0, 0.1, 0.37, 0.8, 1.0] {
            let ops = kraus_phase_flip(p).unwrap();
            let direct = apply_kraus(&FIG_B.to_density_matrix().unwrap(), &ops).unwrap();
            let mapped = evolve_params(&FIG_B, p).unwrap().to_density_matrix().unwrap();
            assert!(direct.max_abs_diff(&mapped) < 1e-15, "p = {p}");
        }
    }

    #[test]
    fn single_side_applications_commute_and_compose() {
        let (g0, g1) = kraus_pair(0.3).unwrap();
        let id = Matrix2::identity();
        let a_side = [kron(&g0, &id), kron(&g1, &id)];
        let b_side = [kron(&id, &g0), kron(&id, &g1)];
        let rho = FIG_B.to_density_matrix().unwrap();
        let ab = apply_kraus(&apply_kraus(&rho, &a_side).unwrap(), &b_side).unwrap();
        let ba = apply_kraus(&apply_kraus(&rho, &b_side).unwrap(), &a_side).unwrap();
        let both = apply_kraus(&rho, &kraus_phase_flip(0.3).unwrap()).unwrap();
        assert!(ab.max_abs_diff(&ba) < 1e-15);
        assert!(ab.max_abs_diff(&both) < 1e-15);
    }

    #[test]
    fn dephased_value_matches_composition() {
        for p in [0.0, 0.25, 0.5, 0.9, 1.0] {
            for xv in [0.5, 1.0, 5.0] {
                let direct =
                    sqd_dephased_closed(&FIG_B, &x(xv), p, ValidationMode::Strict).unwrap();
                let evolved = evolve_params(&FIG_B, p).unwrap();
                let composed = sqd_closed(&evolved, &x(xv), ValidationMode::Relaxed).unwrap();
                assert!(
                    (direct - composed).abs() < 1e-12,
                    "p = {p}, x = {xv}: {direct} vs {composed}"
                );
            }
        }
    }

    #[test]
    fn dephased_reference_value() {
        let v = sqd_dephased_closed(&FIG_B, &x(1.0), 0.5, ValidationMode::Strict).unwrap();
        assert!((v - 0.054945620946363238).abs() < 1e-13);
    }

    #[test]
    fn dephased_value_decreases_with_noise() {
        for xv in [1.0, 5.0] {
            let mut prev = f64::INFINITY;
            for i in 0..=10 {
                let p = i as f64 / 10.0;
                let v = sqd_dephased_closed(&FIG_B, &x(xv), p, ValidationMode::Strict).unwrap();
                assert!(v <= prev + 1e-12, "x = {xv}, p = {p}");
                prev = v;
            }
        }
    }

    #[test]
    fn time_to_probability_map() {
        assert_eq!(p_of_time(1.0, std::f64::consts::LN_2).unwrap(), 0.5);
        assert_eq!(p_of_time(0.0, 3.0).unwrap(), 0.0);
        assert_eq!(p_of_time(2.0, 0.0).unwrap(), 0.0);
        assert!(p_of_time(-1.0, 1.0).is_err());
        assert!(p_of_time(1.0, -1.0).is_err());
        let p = p_of_time(0.5, 2.0).unwrap();
        assert!((p - (1.0 - (-1.0f64).exp())).abs() < 1e-16);
    }
}
