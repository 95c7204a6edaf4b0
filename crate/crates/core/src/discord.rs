//! Quantum discord and its weak-measurement generalization.
//!
//! Both quantities share one template: S(rho_B) - S(rho_AB) plus the minimum
//! over measurement directions of a conditional entropy of A. The projective
//! case admits a three-candidate closed form; the weak case has a four-term
//! closed form whose minimum sits on the z axis for the ordered parameter
//! family. Definitional oracles recompute both minima by brute force over the
//! sphere so the closed forms can be audited rather than trusted.

use std::f64::consts::{FRAC_PI_2, TAU};

use crate::error::{Error, Result};
use crate::linalg::{partial_trace, von_neumann_entropy, Subsystem};
use crate::measurement::{
    conditional_entropy_closed, conditional_entropy_spectral,
    projective_conditional_entropy, residual_identity, weak_conditional_entropy,
    MeasurementDirection, MeasurementStrength, PhiTheta,
};
use crate::states::{binary_term, ValidationMode, XStateParams};

/// Negative correlation values within this of zero are rounding noise and may
/// be clamped to exactly zero for reporting.
pub const CLAMP_TOL: f64 = 1e-9;

/// Grid-then-simplex settings for the sphere minimizations.
#[derive(Clone, Copy, Debug)]
pub struct OptimizerConfig {
    /// Polar samples on [0, pi/2] (inclusive); antipodal symmetry of the
    /// objective makes the upper hemisphere sufficient.
    pub polar_steps: usize,
    /// Azimuthal samples on [0, 2 pi) (exclusive).
    pub azimuth_steps: usize,
    /// Simplex spread at which refinement stops.
    pub refine_tolerance: f64,
    pub max_refine_iterations: usize,
    /// Reserved for randomized restarts; the optimizer is fully deterministic
    /// and currently ignores it.
    pub seed: u64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            polar_steps: 61,
            azimuth_steps: 121,
            refine_tolerance: 1e-10,
            max_refine_iterations: 200,
            seed: 42,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |reason: String| Err(Error::BadOptimizerConfig { reason });
        if self.polar_steps < 30 {
            return fail(format!("polar_steps = {} (need >= 30)", self.polar_steps));
        }
        if self.azimuth_steps < 60 {
            return fail(format!("azimuth_steps = {} (need >= 60)", self.azimuth_steps));
        }
        if !(self.refine_tolerance > 0.0 && self.refine_tolerance.is_finite()) {
            return fail(format!("refine_tolerance = {}", self.refine_tolerance));
        }
        if self.max_refine_iterations == 0 {
            return fail("max_refine_iterations = 0".into());
        }
        Ok(())
    }
}

/// A located minimum on the sphere.
#[derive(Clone, Copy, Debug)]
pub struct Minimum {
    pub value: f64,
    pub direction: MeasurementDirection,
}

fn lex_less(a: &MeasurementDirection, b: &MeasurementDirection) -> bool {
    (a.z1, a.z2, a.z3) < (b.z1, b.z2, b.z3)
}

/// Minimize an objective over measurement directions: exhaustive angle grid
/// (ties broken toward the lexicographically smallest direction), then a
/// Nelder-Mead polish in angle space seeded at the best grid cell. Fully
/// deterministic for a fixed configuration.
pub fn minimize_over_sphere<F>(objective: F, cfg: &OptimizerConfig) -> Result<Minimum>
where
    F: Fn(&MeasurementDirection) -> Result<f64>,
{
    cfg.validate()?;
    let eval = |beta: f64, alpha: f64| -> Result<(f64, MeasurementDirection)> {
        let dir = MeasurementDirection::from_angles(beta, alpha);
        let v = objective(&dir)?;
        if !v.is_finite() {
            return Err(Error::NonFiniteObjective { z1: dir.z1, z2: dir.z2, z3: dir.z3 });
        }
        Ok((v, dir))
    };

    let mut best_val = f64::INFINITY;
    let mut best_dir = MeasurementDirection::from_angles(0.0, 0.0);
    let mut best_angles = (0.0, 0.0);
    for i in 0..cfg.polar_steps {
        let beta = FRAC_PI_2 * i as f64 / (cfg.polar_steps - 1) as f64;
        for j in 0..cfg.azimuth_steps {
            let alpha = TAU * j as f64 / cfg.azimuth_steps as f64;
            let (v, dir) = eval(beta, alpha)?;
            if v < best_val || (v == best_val && lex_less(&dir, &best_dir)) {
                best_val = v;
                best_dir = dir;
                best_angles = (beta, alpha);
            }
        }
    }

    // Nelder-Mead on (beta, alpha), initial simplex one grid cell wide.
    let db = FRAC_PI_2 / (cfg.polar_steps - 1) as f64;
    let da = TAU / cfg.azimuth_steps as f64;
    let mut simplex = Vec::with_capacity(3);
    for (b, a) in [
        best_angles,
        (best_angles.0 + db, best_angles.1),
        (best_angles.0, best_angles.1 + da),
    ] {
        let (v, dir) = eval(b, a)?;
        if v < best_val {
            best_val = v;
            best_dir = dir;
        }
        simplex.push(((b, a), v));
    }
    for _ in 0..cfg.max_refine_iterations {
        simplex.sort_by(|p, q| p.1.partial_cmp(&q.1).expect("objective values are finite"));
        if simplex[2].1 - simplex[0].1 <= cfg.refine_tolerance {
            break;
        }
        let centroid = (
            (simplex[0].0 .0 + simplex[1].0 .0) / 2.0,
            (simplex[0].0 .1 + simplex[1].0 .1) / 2.0,
        );
        let worst = simplex[2];
        let reflect = (
            centroid.0 + (centroid.0 - worst.0 .0),
            centroid.1 + (centroid.1 - worst.0 .1),
        );
        let (fr, rdir) = eval(reflect.0, reflect.1)?;
        if fr < best_val {
            best_val = fr;
            best_dir = rdir;
        }
        if fr < simplex[0].1 {
            let expand = (
                centroid.0 + 2.0 * (centroid.0 - worst.0 .0),
                centroid.1 + 2.0 * (centroid.1 - worst.0 .1),
            );
            let (fe, edir) = eval(expand.0, expand.1)?;
            if fe < best_val {
                best_val = fe;
                best_dir = edir;
            }
            simplex[2] = if fe < fr { (expand, fe) } else { (reflect, fr) };
        } else if fr < simplex[1].1 {
            simplex[2] = (reflect, fr);
        } else {
            let contract = (
                (centroid.0 + worst.0 .0) / 2.0,
                (centroid.1 + worst.0 .1) / 2.0,
            );
            let (fc, cdir) = eval(contract.0, contract.1)?;
            if fc < best_val {
                best_val = fc;
                best_dir = cdir;
            }
            if fc < worst.1 {
                simplex[2] = (contract, fc);
            } else {
                // Shrink toward the best vertex.
                for k in 1..3 {
                    let p = (
                        (simplex[k].0 .0 + simplex[0].0 .0) / 2.0,
                        (simplex[k].0 .1 + simplex[0].0 .1) / 2.0,
                    );
                    let (fv, vdir) = eval(p.0, p.1)?;
                    if fv < best_val {
                        best_val = fv;
                        best_dir = vdir;
                    }
                    simplex[k] = (p, fv);
                }
            }
        }
    }

    Ok(Minimum { value: best_val, direction: best_dir })
}

/// Minimum of the four-term closed form over directions. For the ordered
/// family the minimum sits at the z pole, where phi = s and theta = |c3|.
pub fn min_weak_entropy_closed(
    params: &XStateParams,
    x: &MeasurementStrength,
    mode: ValidationMode,
) -> Result<f64> {
    params.validate(mode)?;
    let pt = PhiTheta { phi: params.s, theta: params.c3.abs() };
    conditional_entropy_closed(&pt, x)
}

/// Closed-form super discord: min-weak-entropy + S(rho_B) - S(rho_AB).
pub fn sqd_closed(
    params: &XStateParams,
    x: &MeasurementStrength,
    mode: ValidationMode,
) -> Result<f64> {
    let f = min_weak_entropy_closed(params, x, mode)?;
    let (_, sb) = params.reduced_entropies()?;
    let sab = params.joint_entropy()?;
    Ok(f + sb - sab)
}

/// Definitional super discord: matrix-level entropies and a full sphere
/// minimization of the matrix-level weak conditional entropy.
pub fn sqd_oracle(
    params: &XStateParams,
    x: &MeasurementStrength,
    cfg: &OptimizerConfig,
) -> Result<Minimum> {
    params.validate(ValidationMode::Relaxed)?;
    let rho = params.to_density_matrix()?;
    let sb = von_neumann_entropy(&partial_trace(&rho, Subsystem::B))?;
    let sab = von_neumann_entropy(&rho)?;
    let m = minimize_over_sphere(|d| weak_conditional_entropy(&rho, x, d), cfg)?;
    Ok(Minimum { value: m.value + sb - sab, direction: m.direction })
}

/// The three projective candidate entropies: measurement along z, x, y.
#[derive(Clone, Copy, Debug)]
pub struct DiscordBreakdown {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

fn branch_term(v: f64, d: f64) -> Result<f64> {
    if v < -CLAMP_TOL {
        return Err(Error::LogDomain { term: "projective branch weight", value: v });
    }
    if v <= 0.0 {
        return Ok(0.0); // boundary weight: contributes 0 log 0 = 0
    }
    if d <= 0.0 {
        return Err(Error::LogDomain { term: "projective branch normalization", value: d });
    }
    Ok(v / 4.0 * (v / (2.0 * d)).log2())
}

/// Closed-form quantum discord together with the three candidate conditional
/// entropies whose minimum it uses.
pub fn qd_closed(params: &XStateParams) -> Result<(f64, DiscordBreakdown)> {
    params.validate(ValidationMode::Relaxed)?;
    let (s, c3) = (params.s, params.c3);
    let s1 = -(branch_term(1.0 + s + c3, 1.0 + s)?
        + branch_term(1.0 + s - c3, 1.0 + s)?
        + branch_term(1.0 - s - c3, 1.0 - s)?
        + branch_term(1.0 - s + c3, 1.0 - s)?);
    let s2 = 1.0 + binary_term(params.c1)?;
    let s3 = 1.0 + binary_term(params.c2)?;
    let min3 = s1.min(s2).min(s3);
    let q = 1.0 + binary_term(s)? - params.joint_entropy()? + min3;
    Ok((q, DiscordBreakdown { s1, s2, s3 }))
}

/// Definitional quantum discord via projective sphere minimization.
pub fn qd_oracle(params: &XStateParams, cfg: &OptimizerConfig) -> Result<Minimum> {
    params.validate(ValidationMode::Relaxed)?;
    let rho = params.to_density_matrix()?;
    let sb = von_neumann_entropy(&partial_trace(&rho, Subsystem::B))?;
    let sab = von_neumann_entropy(&rho)?;
    let m = minimize_over_sphere(|d| projective_conditional_entropy(&rho, d), cfg)?;
    Ok(Minimum { value: m.value + sb - sab, direction: m.direction })
}

/// I(A:B) = S_A + S_B - S_AB in closed form.
pub fn mutual_information(params: &XStateParams) -> Result<f64> {
    let (sa, sb) = params.reduced_entropies()?;
    Ok(sa + sb - params.joint_entropy()?)
}

/// Classical correlation J = I(A:B) - QD, using the projective oracle.
pub fn classical_correlation(params: &XStateParams, cfg: &OptimizerConfig) -> Result<f64> {
    Ok(mutual_information(params)? - qd_oracle(params, cfg)?.value)
}

/// Clamp a tiny negative value (within `CLAMP_TOL` of zero) to exactly zero.
/// Returns the possibly-clamped value and whether clamping happened.
pub fn clamp_tiny_negative(v: f64) -> (f64, bool) {
    if v < 0.0 && v >= -CLAMP_TOL {
        (0.0, true)
    } else {
        (v, false)
    }
}

/// Everything the `compute` entry point reports for one state and strength.
#[derive(Clone, Copy, Debug)]
pub struct CorrelationReport {
    pub params: XStateParams,
    pub x: f64,
    pub mutual_information: f64,
    pub qd_closed: f64,
    pub qd_oracle: f64,
    pub sqd_closed: f64,
    pub sqd_oracle: f64,
    pub argmin_direction: MeasurementDirection,
    /// sqd_oracle - sqd_closed; nonnegative up to optimizer resolution.
    pub closed_form_residual: f64,
    /// True when any reported value was a tiny negative clamped to zero.
    pub clamped: bool,
}

impl CorrelationReport {
    pub fn compute(
        params: &XStateParams,
        x: &MeasurementStrength,
        mode: ValidationMode,
        cfg: &OptimizerConfig,
    ) -> Result<Self> {
        let mi = mutual_information(params)?;
        let (qc, _) = qd_closed(params)?;
        let qo = qd_oracle(params, cfg)?;
        let sc = sqd_closed(params, x, mode)?;
        let so = sqd_oracle(params, x, cfg)?;
        let mut clamped = false;
        let mut clamp = |v: f64| {
            let (c, hit) = clamp_tiny_negative(v);
            clamped |= hit;
            c
        };
        let qd_closed = clamp(qc);
        let qd_oracle = clamp(qo.value);
        let sqd_closed = clamp(sc);
        let sqd_oracle = clamp(so.value);
        Ok(CorrelationReport {
            params: *params,
            x: x.value(),
            mutual_information: mi,
            qd_closed,
            qd_oracle,
            sqd_closed,
            sqd_oracle,
            argmin_direction: so.direction,
            closed_form_residual: sqd_oracle - sqd_closed,
            clamped,
        })
    }
}

/// One strength sample of the closed-form-vs-oracle audit.
#[derive(Clone, Copy, Debug)]
pub struct AuditRow {
    pub x: f64,
    pub sqd_closed: f64,
    pub sqd_oracle: f64,
    /// oracle - closed.
    pub difference: f64,
    pub argmin: MeasurementDirection,
    /// Spectral minus four-term conditional entropy at the z pole.
    pub residual_measured: f64,
    /// The analytic prediction for that gap.
    pub residual_predicted: f64,
}

#[derive(Clone, Debug)]
pub struct AuditReport {
    pub params: XStateParams,
    pub seed: u64,
    pub rows: Vec<AuditRow>,
}

/// Compare closed-form and oracle super discord across strengths, and measure
/// the analytic gap between the two conditional-entropy forms at the z pole.
pub fn audit(
    params: &XStateParams,
    xs: &[f64],
    mode: ValidationMode,
    cfg: &OptimizerConfig,
) -> Result<AuditReport> {
    let mut rows = Vec::with_capacity(xs.len());
    let pole = PhiTheta { phi: params.s, theta: params.c3.abs() };
    for &xv in xs {
        let x = MeasurementStrength::new(xv)?;
        let sc = sqd_closed(params, &x, mode)?;
        let so = sqd_oracle(params, &x, cfg)?;
        let measured = conditional_entropy_spectral(&pole, &x)?
            - conditional_entropy_closed(&pole, &x)?;
        let predicted = residual_identity(params.s, &x)?;
        rows.push(AuditRow {
            x: xv,
            sqd_closed: sc,
            sqd_oracle: so.value,
            difference: so.value - sc,
            argmin: so.direction,
            residual_measured: measured,
            residual_predicted: predicted,
        });
    }
    Ok(AuditReport { params: *params, seed: cfg.seed, rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG_A: XStateParams = XStateParams { s: 0.0, c1: 0.3, c2: -0.4, c3: 0.56 };
    const FIG_B: XStateParams = XStateParams { s: 0.2, c1: 0.3, c2: -0.4, c3: 0.56 };

    fn x(v: f64) -> MeasurementStrength {
        MeasurementStrength::new(v).unwrap()
    }

    fn cfg() -> OptimizerConfig {
        OptimizerConfig::default()
    }

    #[test]
    fn config_validation() {
        assert!(cfg().validate().is_ok());
        assert!(OptimizerConfig { polar_steps: 10, ..cfg() }.validate().is_err());
        assert!(OptimizerConfig { azimuth_steps: 10, ..cfg() }.validate().is_err());
        assert!(OptimizerConfig { refine_tolerance: 0.0, ..cfg() }.validate().is_err());
    }

    #[test]
    fn minimizer_on_simple_objectives() {
        // Constant objective: value recovered exactly.
        let m = minimize_over_sphere(|_| Ok(0.75), &cfg()).unwrap();
        assert_eq!(m.value, 0.75);
        // z3^2 is minimized on the equator.
        let m = minimize_over_sphere(|d| Ok(d.z3 * d.z3), &cfg()).unwrap();
        assert!(m.value < 1e-20);
        assert!(m.direction.z3.abs() < 1e-10);
        // Smooth objective with an interior minimum: refine well below the
        // grid resolution. min of (z3 - 0.6)^2 is at polar angle acos(0.6).
        let m = minimize_over_sphere(|d| Ok((d.z3 - 0.6) * (d.z3 - 0.6)), &cfg()).unwrap();
        assert!(m.value < 1e-8);
        assert!((m.direction.z3 - 0.6).abs() < 1e-4);
    }

    #[test]
    fn minimizer_propagates_objective_errors() {
        let r = minimize_over_sphere(
            |d| {
                if d.z3 < 0.5 {
                    Err(Error::Domain { what: "test objective", value: d.z3 })
                } else {
                    Ok(d.z3)
                }
            },
            &cfg(),
        );
        assert!(r.is_err());
        let r = minimize_over_sphere(|_| Ok(f64::NAN), &cfg());
        assert!(matches!(r, Err(Error::NonFiniteObjective { .. })));
    }

    #[test]
    fn minimizer_finds_weak_entropy_minimum_at_pole() {
        let rho = FIG_A.to_density_matrix().unwrap();
        let xv = x(1.0);
        let m =
            minimize_over_sphere(|d| weak_conditional_entropy(&rho, &xv, d), &cfg()).unwrap();
        assert!((m.value - 0.86449069986700722).abs() < 1e-8);
        assert!(m.direction.z3.abs() > 1.0 - 1e-6);
    }

    #[test]
    fn closed_min_weak_entropy_values() {
        assert_eq!(
            min_weak_entropy_closed(&FIG_B, &x(0.0), ValidationMode::Strict).unwrap(),
            1.0
        );
        let f = min_weak_entropy_closed(&FIG_B, &x(1.0), ValidationMode::Strict).unwrap();
        assert!((f - 0.79317813360545908).abs() < 1e-13);
        // Strict mode refuses the zero-bias parameter set.
        assert!(min_weak_entropy_closed(&FIG_A, &x(1.0), ValidationMode::Strict).is_err());
        assert!(min_weak_entropy_closed(&FIG_A, &x(1.0), ValidationMode::Relaxed).is_ok());
    }

    #[test]
    fn sqd_closed_reference_values() {
        let zero = XStateParams::zero();
        assert_eq!(sqd_closed(&zero, &x(1.0), ValidationMode::Relaxed).unwrap(), 0.0);
        let v = sqd_closed(&FIG_B, &x(1.0), ValidationMode::Strict).unwrap();
        assert!((v - 0.17434769871744193).abs() < 1e-13);
        let v = sqd_closed(&FIG_B, &x(5.0), ValidationMode::Strict).unwrap();
        assert!((v - 0.010172328158705168).abs() < 1e-13);
        let v = sqd_closed(&FIG_A, &x(1.0), ValidationMode::Relaxed).unwrap();
        assert!((v - 0.2300267004161618).abs() < 1e-13);
    }

    #[test]
    fn sqd_closed_at_zero_strength_is_mutual_information() {
        let v = sqd_closed(&FIG_B, &x(0.0), ValidationMode::Strict).unwrap();
        let mi = mutual_information(&FIG_B).unwrap();
        assert_eq!(v, mi); // both reduce to 1 + S_B - S_AB, same operations
        assert!((mi - 0.38116956511198286).abs() < 1e-13);
    }

    #[test]
    fn sqd_closed_decreases_with_strength() {
        let mut prev = f64::INFINITY;
        for xv in [0.0, 0.5, 1.0, 2.0, 5.0] {
            let v = sqd_closed(&FIG_B, &x(xv), ValidationMode::Strict).unwrap();
            assert!(v < prev + 1e-12);
            prev = v;
        }
    }

    #[test]
    fn sqd_oracle_reference_values() {
        let m = sqd_oracle(&FIG_A, &x(1.0), &cfg()).unwrap();
        assert!((m.value - 0.23002670041616169).abs() < 1e-7);
        let m = sqd_oracle(&FIG_B, &x(1.0), &cfg()).unwrap();
        assert!((m.value - 0.24181676190851942).abs() < 1e-7);
        assert!(m.direction.z3.abs() > 1.0 - 1e-6);
        // The four-term closed form undershoots the definitional value
        // whenever s != 0; the gap at the pole is the residual identity.
        let closed = sqd_closed(&FIG_B, &x(1.0), ValidationMode::Strict).unwrap();
        let gap = m.value - closed;
        let predicted = residual_identity(0.2, &x(1.0)).unwrap();
        assert!((gap - predicted).abs() < 1e-6, "gap {gap} predicted {predicted}");
    }

    #[test]
    fn qd_closed_reference_values() {
        let (q, b) = qd_closed(&FIG_A).unwrap();
        assert!((q - 0.12570350351112003).abs() < 1e-13);
        assert!((b.s1 - 0.7601675029619654).abs() < 1e-13);
        assert!((b.s2 - 0.934068055375491).abs() < 1e-13);
        assert!((b.s3 - 0.8812908992306927).abs() < 1e-13);
        let (q, b) = qd_closed(&FIG_B).unwrap();
        assert!((q - 0.12709013216324316).abs() < 1e-13);
        assert!((b.s1 - 0.74592056705126031).abs() < 1e-13);
        assert_eq!(qd_closed(&XStateParams::zero()).unwrap().0, 0.0);
    }

    #[test]
    fn qd_closed_handles_boundary_weights() {
        // c3 = 1: two branch weights are exactly zero and the state is
        // classically correlated, so the discord vanishes.
        let p = XStateParams::new(0.0, 0.0, 0.0, 1.0);
        let (q, b) = qd_closed(&p).unwrap();
        assert_eq!(b.s1, 0.0);
        assert!(q.abs() < 1e-15);
    }

    #[test]
    fn qd_oracle_agrees_with_closed_form() {
        let m = qd_oracle(&FIG_A, &cfg()).unwrap();
        assert!((m.value - 0.12570350351112003).abs() < 1e-7);
        let m = qd_oracle(&FIG_B, &cfg()).unwrap();
        assert!((m.value - 0.12709013216324316).abs() < 1e-7);
        // Closed form is an upper bound on the true minimum-based value.
        let (q, _) = qd_closed(&FIG_B).unwrap();
        assert!(q - m.value >= -1e-9);
    }

    #[test]
    fn projective_limit_of_weak_oracle_is_discord() {
        let strong = sqd_oracle(&FIG_B, &x(20.0), &cfg()).unwrap();
        let qd = qd_oracle(&FIG_B, &cfg()).unwrap();
        assert!((strong.value - qd.value).abs() < 1e-7);
    }

    #[test]
    fn mutual_information_reference_values() {
        assert!((mutual_information(&FIG_A).unwrap() - 0.36553600054915458).abs() < 1e-13);
        // Product state carries no correlations at all.
        let product = XStateParams::new(0.2, 0.0, 0.0, 0.0);
        assert!(mutual_information(&product).unwrap().abs() < 1e-12);
    }

    #[test]
    fn classical_correlation_reference_value() {
        let j = classical_correlation(&FIG_B, &cfg()).unwrap();
        assert!((j - 0.25407943294874002).abs() < 1e-6);
        let product = XStateParams::new(0.2, 0.0, 0.0, 0.0);
        assert!(classical_correlation(&product, &cfg()).unwrap().abs() < 1e-8);
    }

    #[test]
    fn report_for_uncorrelated_state_is_all_zero() {
        let zero = XStateParams::zero();
        let r =
            CorrelationReport::compute(&zero, &x(1.0), ValidationMode::Relaxed, &cfg()).unwrap();
        assert_eq!(r.mutual_information, 0.0);
        assert_eq!(r.qd_closed, 0.0);
        assert_eq!(r.sqd_closed, 0.0);
        assert!(r.qd_oracle.abs() < 1e-12);
        assert!(r.sqd_oracle.abs() < 1e-12);
        assert!(r.closed_form_residual >= -CLAMP_TOL);
    }

    #[test]
    fn report_reference_values() {
        let r =
            CorrelationReport::compute(&FIG_B, &x(1.0), ValidationMode::Strict, &cfg()).unwrap();
        assert!((r.sqd_closed - 0.17434769871744193).abs() < 1e-13);
        assert!((r.sqd_oracle - 0.24181676190851942).abs() < 1e-7);
        assert!((r.closed_form_residual - 0.067469063191).abs() < 1e-6);
        assert!(r.sqd_oracle >= r.qd_oracle - 1e-9); // weak reveals less
        assert!(!r.clamped);
    }

    #[test]
    fn clamping_flags_tiny_negatives() {
        assert_eq!(clamp_tiny_negative(-1e-12), (0.0, true));
        assert_eq!(clamp_tiny_negative(1e-12), (1e-12, false));
        assert_eq!(clamp_tiny_negative(-1e-3), (-1e-3, false));
    }

    #[test]
    fn audit_matches_residual_prediction() {
        let report = audit(&FIG_B, &[0.5, 1.0, 2.0], ValidationMode::Strict, &cfg()).unwrap();
        assert_eq!(report.rows.len(), 3);
        for row in &report.rows {
            assert!((row.residual_measured - row.residual_predicted).abs() < 1e-12);
            // The oracle minimum sits at the pole for these parameters, so
            // the closed-vs-oracle difference is the pole residual.
            assert!((row.difference - row.residual_predicted).abs() < 1e-6);
        }
        let r1 = &report.rows[1];
        assert!((r1.residual_predicted - 0.067469063191077538).abs() < 1e-15);
    }
}
