//! Self-verification battery: randomized and structural checks that pin the
//! closed forms to the definitional matrix computations.
//!
//! Each criterion reports a worst-case measured figure against a tolerance.
//! All criteria are hard except the pole-residual audit, which documents the
//! known analytic gap between the two conditional-entropy forms and never
//! fails a run on its own.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::channels::{evolve_params, kraus_phase_flip, sqd_dephased_closed};
use crate::discord::{qd_closed, qd_oracle, sqd_closed, sqd_oracle, OptimizerConfig};
use crate::error::Result;
use crate::linalg::{
    apply_kraus, herm_eigenvalues, pauli, von_neumann_entropy, Matrix2, JACOBI_TOL,
};
use crate::measurement::{
    conditional_entropy_spectral, phi_theta, posterior_ensemble, sample_direction,
    weak_conditional_entropy, weak_operators, MeasurementStrength,
};
use crate::states::{
    sample_bell_diagonal, sample_relaxed, sample_strict, ValidationMode, XStateParams,
};
use crate::sweep::{csv, SweepSpec, SweepVariable};

/// The two parameter sets used by the pinned result figures.
pub const FIGURE_PARAMS_UNBIASED: XStateParams =
    XStateParams { s: 0.0, c1: 0.3, c2: -0.4, c3: 0.56 };
pub const FIGURE_PARAMS_BIASED: XStateParams =
    XStateParams { s: 0.2, c1: 0.3, c2: -0.4, c3: 0.56 };

#[derive(Clone, Copy, Debug)]
pub struct VerifyConfig {
    /// Baseline sample budget; individual criteria scale their counts from it.
    pub samples: usize,
    pub seed: u64,
    /// Agreement tolerance for the oracle-vs-closed-form criteria.
    pub tol: f64,
    pub optimizer: OptimizerConfig,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            samples: 500,
            seed: 42,
            tol: 1e-6,
            optimizer: OptimizerConfig::default(),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CriterionOutcome {
    pub index: usize,
    pub name: &'static str,
    /// Soft criteria are reported but never fail a run.
    pub hard: bool,
    pub pass: bool,
    pub measured: f64,
    pub tolerance: f64,
    pub detail: String,
}

impl CriterionOutcome {
    pub fn line(&self) -> String {
        format!(
            "criterion {:02} {:<32} {} (measured {:.3e}, tolerance {:.3e}{})",
            self.index,
            self.name,
            if self.pass { "PASS" } else { "FAIL" },
            self.measured,
            self.tolerance,
            if self.hard { "" } else { ", soft" },
        )
    }
}

fn run<F>(index: usize, name: &'static str, hard: bool, tolerance: f64, body: F) -> CriterionOutcome
where
    F: FnOnce() -> Result<(bool, f64, String)>,
{
    match body() {
        Ok((pass, measured, detail)) => CriterionOutcome {
            index,
            name,
            hard,
            pass,
            measured,
            tolerance,
            detail,
        },
        Err(e) => CriterionOutcome {
            index,
            name,
            hard,
            pass: false,
            measured: f64::NAN,
            tolerance,
            detail: format!("error: {e}"),
        },
    }
}

fn rng_for(cfg: &VerifyConfig, index: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(cfg.seed.wrapping_add(index.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

fn strength(v: f64) -> Result<MeasurementStrength> {
    MeasurementStrength::new(v)
}

/// 1: closed-form spectrum vs Jacobi eigenvalues on random physical states.
pub fn criterion_01_spectrum(cfg: &VerifyConfig) -> CriterionOutcome {
    run(1, "spectrum-closed-form", true, 1e-12, || {
        let n = 2 * cfg.samples;
        let mut rng = rng_for(cfg, 1);
        let mut worst = 0.0f64;
        for _ in 0..n {
            let p = sample_relaxed(&mut rng);
            let jac = herm_eigenvalues(&p.to_density_matrix()?, JACOBI_TOL)?;
            let closed = p.spectrum()?.sorted_desc();
            for (a, b) in jac.values().iter().zip(closed) {
                worst = worst.max((a - b).abs());
            }
        }
        Ok((worst <= 1e-12, worst, format!("{n} random relaxed-valid states")))
    })
}

/// 2: closed-form joint entropy vs matrix entropy on the same distribution.
pub fn criterion_02_entropy(cfg: &VerifyConfig) -> CriterionOutcome {
    run(2, "joint-entropy-closed-form", true, 1e-12, || {
        let n = 2 * cfg.samples;
        let mut rng = rng_for(cfg, 2);
        let mut worst = 0.0f64;
        for _ in 0..n {
            let p = sample_relaxed(&mut rng);
            let closed = p.joint_entropy()?;
            let matrix = von_neumann_entropy(&p.to_density_matrix()?)?;
            worst = worst.max((closed - matrix).abs());
        }
        Ok((worst <= 1e-12, worst, format!("{n} random relaxed-valid states")))
    })
}

fn random_strength<R: Rng + ?Sized>(rng: &mut R, i: usize) -> Result<MeasurementStrength> {
    // Mostly the physically interesting range, with occasional near-projective
    // strengths thrown in.
    let v = if i % 8 == 7 { rng.random_range(20.0..350.0) } else { rng.random_range(0.0..20.0) };
    strength(v)
}

/// 3: the weak outcome pair resolves the identity for random (x, direction).
pub fn criterion_03_completeness(cfg: &VerifyConfig) -> CriterionOutcome {
    run(3, "weak-operator-completeness", true, 1e-12, || {
        let n = 2 * cfg.samples;
        let mut rng = rng_for(cfg, 3);
        let mut worst = 0.0f64;
        for i in 0..n {
            let d = sample_direction(&mut rng);
            let x = random_strength(&mut rng, i)?;
            let (pp, pm) = weak_operators(&x, &d);
            let sum = pp.adjoint() * pp + pm.adjoint() * pm;
            worst = worst.max(sum.max_abs_diff(&Matrix2::identity()));
        }
        Ok((worst <= 1e-12, worst, format!("{n} random (strength, direction) pairs")))
    })
}

/// 4: matrix-level posteriors vs their closed forms on strict states.
pub fn criterion_04_posterior(cfg: &VerifyConfig) -> CriterionOutcome {
    run(4, "posterior-closed-form", true, 1e-12, || {
        let n = 2 * cfg.samples;
        let mut rng = rng_for(cfg, 4);
        let mut worst = 0.0f64;
        for i in 0..n {
            let p = sample_strict(&mut rng);
            let d = sample_direction(&mut rng);
            let x = random_strength(&mut rng, i)?;
            let t = x.tanh();
            let rho = p.to_density_matrix()?;
            let ens = posterior_ensemble(&rho, &x, &d)?;

            let phi = p.s * d.z3;
            let xop = Matrix2::identity().scale(phi)
                + pauli(1).scale(p.c1 * d.z1)
                + pauli(2).scale(p.c2 * d.z2)
                + pauli(3).scale(p.c3 * d.z3);
            for (sign, prob, state) in [
                (1.0, ens.p_plus, &ens.rho_plus),
                (-1.0, ens.p_minus, &ens.rho_minus),
            ] {
                let prob_closed = (1.0 - sign * phi * t) / 2.0;
                worst = worst.max((prob - prob_closed).abs());
                let state_closed = (Matrix2::identity() - xop.scale(sign * t))
                    .scale(1.0 / (2.0 * (1.0 - sign * phi * t)));
                worst = worst.max(state.max_abs_diff(&state_closed));
            }
        }
        Ok((worst <= 1e-12, worst, format!("{n} random (state, strength, direction) cases")))
    })
}

/// 5: spectral closed form of the weak conditional entropy vs definition.
pub fn criterion_05_conditional_entropy(cfg: &VerifyConfig) -> CriterionOutcome {
    run(5, "weak-entropy-closed-form", true, 1e-12, || {
        let n = 2 * cfg.samples;
        let mut rng = rng_for(cfg, 5);
        let mut worst = 0.0f64;
        for i in 0..n {
            let p = sample_strict(&mut rng);
            let d = sample_direction(&mut rng);
            let x = random_strength(&mut rng, i)?;
            let closed = conditional_entropy_spectral(&phi_theta(&p, &d), &x)?;
            let def = weak_conditional_entropy(&p.to_density_matrix()?, &x, &d)?;
            worst = worst.max((closed - def).abs());
        }
        Ok((worst <= 1e-12, worst, format!("{n} random (state, strength, direction) cases")))
    })
}

/// 6: for unbiased (s = 0) states the four-term closed form must equal the
/// oracle to optimizer accuracy.
pub fn criterion_06_unbiased_exactness(cfg: &VerifyConfig) -> CriterionOutcome {
    run(6, "unbiased-closed-exactness", true, cfg.tol, || {
        let n = (cfg.samples / 5).max(1);
        let mut rng = rng_for(cfg, 6);
        let mut worst = 0.0f64;
        for _ in 0..n {
            let p = sample_bell_diagonal(&mut rng);
            let x = strength(rng.random_range(0.0..5.0))?;
            let closed = sqd_closed(&p, &x, ValidationMode::Relaxed)?;
            let oracle = sqd_oracle(&p, &x, &cfg.optimizer)?.value;
            worst = worst.max((closed - oracle).abs());
        }
        Ok((worst <= cfg.tol, worst, format!("{n} zero-bias ordered states")))
    })
}

/// 7: at x = 20 the weak oracle reproduces the projective oracle.
pub fn criterion_07_projective_limit(cfg: &VerifyConfig) -> CriterionOutcome {
    run(7, "projective-limit", true, cfg.tol, || {
        let n = (cfg.samples / 10).max(1);
        let mut rng = rng_for(cfg, 7);
        let x = strength(20.0)?;
        let mut worst = 0.0f64;
        for _ in 0..n {
            let p = sample_strict(&mut rng);
            let weak = sqd_oracle(&p, &x, &cfg.optimizer)?.value;
            let proj = qd_oracle(&p, &cfg.optimizer)?.value;
            worst = worst.max((weak - proj).abs());
        }
        Ok((worst <= cfg.tol, worst, format!("{n} strict-valid states at x = 20")))
    })
}

/// 8: a weak measurement reveals less, so sqd >= qd up to solver noise.
pub fn criterion_08_ordering(cfg: &VerifyConfig) -> CriterionOutcome {
    run(8, "weak-vs-projective-ordering", true, 1e-9, || {
        let n = (2 * cfg.samples / 5).max(1);
        let mut rng = rng_for(cfg, 8);
        let mut min_gap = f64::INFINITY;
        for _ in 0..n {
            let p = sample_strict(&mut rng);
            let qd = qd_oracle(&p, &cfg.optimizer)?.value;
            for xv in [0.5, 1.0, 2.0] {
                let sqd = sqd_oracle(&p, &strength(xv)?, &cfg.optimizer)?.value;
                min_gap = min_gap.min(sqd - qd);
            }
        }
        Ok((
            min_gap >= -1e-9,
            min_gap,
            format!("most negative sqd-qd gap over {n} states x three strengths"),
        ))
    })
}

/// 9: the oracle super discord is non-increasing in x for the figure states.
pub fn criterion_09_monotonicity(cfg: &VerifyConfig) -> CriterionOutcome {
    run(9, "strength-monotonicity", true, 1e-9, || {
        let mut worst_increase = f64::NEG_INFINITY;
        for params in [FIGURE_PARAMS_UNBIASED, FIGURE_PARAMS_BIASED] {
            let mut prev = f64::INFINITY;
            for i in 0..=50 {
                let x = strength(i as f64 * 0.1)?;
                let v = sqd_oracle(&params, &x, &cfg.optimizer)?.value;
                if i > 0 {
                    worst_increase = worst_increase.max(v - prev);
                }
                prev = v;
            }
        }
        Ok((
            worst_increase <= 1e-9,
            worst_increase,
            "largest adjacent increase, x in [0, 5] step 0.1, both figure states".to_string(),
        ))
    })
}

/// 10: the three-candidate discord form never undercuts the oracle.
pub fn criterion_10_qd_upper_bound(cfg: &VerifyConfig) -> CriterionOutcome {
    run(10, "qd-closed-upper-bound", true, 1e-9, || {
        let n = cfg.samples;
        let mut rng = rng_for(cfg, 10);
        let mut min_gap = f64::INFINITY;
        let mut max_gap = f64::NEG_INFINITY;
        for _ in 0..n {
            let p = sample_strict(&mut rng);
            let gap = qd_closed(&p)?.0 - qd_oracle(&p, &cfg.optimizer)?.value;
            min_gap = min_gap.min(gap);
            max_gap = max_gap.max(gap);
        }
        Ok((
            min_gap >= -1e-9,
            min_gap,
            format!(
                "{n} strict-valid states; max positive gap {max_gap:.3e} (three-axis \
                 candidate set can overshoot; large values would be worth investigating)"
            ),
        ))
    })
}

/// 11: Kraus application equals the parameter map, and the direct dephased
/// closed form equals composition with the evolved parameters.
pub fn criterion_11_channel(cfg: &VerifyConfig) -> CriterionOutcome {
    run(11, "dephasing-consistency", true, 1e-12, || {
        let n = (cfg.samples / 5).max(1);
        let mut rng = rng_for(cfg, 11);
        let mut worst = 0.0f64;
        for _ in 0..n {
            let p = sample_relaxed(&mut rng);
            let rho = p.to_density_matrix()?;
            for i in 0..=10 {
                let prob = i as f64 / 10.0;
                let direct = apply_kraus(&rho, &kraus_phase_flip(prob)?)?;
                let mapped = evolve_params(&p, prob)?.to_density_matrix()?;
                worst = worst.max(direct.max_abs_diff(&mapped));
            }
        }
        let mut rng = rng_for(cfg, 111);
        for _ in 0..n {
            let p = sample_strict(&mut rng);
            for i in 0..=10 {
                let prob = i as f64 / 10.0;
                for xv in [1.0, 5.0] {
                    let x = strength(xv)?;
                    let direct = sqd_dephased_closed(&p, &x, prob, ValidationMode::Relaxed)?;
                    let composed =
                        sqd_closed(&evolve_params(&p, prob)?, &x, ValidationMode::Relaxed)?;
                    worst = worst.max((direct - composed).abs());
                }
            }
        }
        Ok((
            worst <= 1e-12,
            worst,
            format!("{n} states x 11 flip probabilities; Kraus-vs-map and direct-vs-composed"),
        ))
    })
}

/// 12: shape of the strength curves for the unbiased figure state.
pub fn criterion_12_strength_curve_shape(_cfg: &VerifyConfig) -> CriterionOutcome {
    run(12, "figure-strength-curve-shape", true, 0.01, || {
        let params = FIGURE_PARAMS_UNBIASED;
        let (qd, _) = qd_closed(&params)?;
        let mut min_margin = f64::INFINITY;
        let mut last = f64::NAN;
        let mut first = f64::NAN;
        for i in 0..=200 {
            let xv = 5.0 * i as f64 / 200.0;
            let v = sqd_closed(&params, &strength(xv)?, ValidationMode::Relaxed)?;
            if i == 0 {
                first = v;
            } else {
                min_margin = min_margin.min(v - qd);
            }
            last = v;
        }
        let (_, sb) = params.reduced_entropies()?;
        let sab = params.joint_entropy()?;
        let exact_start = first == (1.0 + sb) - sab;
        let endpoint_gap = (last - qd).abs();
        let pass = min_margin > 0.0 && endpoint_gap < 0.01 && exact_start;
        Ok((
            pass,
            endpoint_gap,
            format!(
                "sqd stays above qd by >= {min_margin:.3e} on (0, 5]; \
                 start equals 1 + S_B - S_AB exactly: {exact_start}"
            ),
        ))
    })
}

/// 13: shape of the noise curves and the (x, p) surface for the biased state.
pub fn criterion_13_noise_curve_shape(_cfg: &VerifyConfig) -> CriterionOutcome {
    run(13, "figure-noise-curve-shape", true, 1e-12, || {
        let params = FIGURE_PARAMS_BIASED;
        let mut worst_increase = f64::NEG_INFINITY;
        for xv in [1.0, 5.0] {
            let x = strength(xv)?;
            let mut prev = f64::INFINITY;
            for i in 0..=100 {
                let p = i as f64 / 100.0;
                let v = sqd_dephased_closed(&params, &x, p, ValidationMode::Strict)?;
                if i > 0 {
                    worst_increase = worst_increase.max(v - prev);
                }
                prev = v;
            }
        }
        // Surface on 51 strengths x 21 probabilities: non-increasing along
        // both axes.
        let mut grid = vec![vec![0.0f64; 21]; 51];
        for (i, row) in grid.iter_mut().enumerate() {
            let x = strength(5.0 * i as f64 / 50.0)?;
            for (j, cell) in row.iter_mut().enumerate() {
                let p = j as f64 / 20.0;
                *cell = sqd_dephased_closed(&params, &x, p, ValidationMode::Strict)?;
            }
        }
        for i in 0..51 {
            for j in 0..21 {
                if i > 0 {
                    worst_increase = worst_increase.max(grid[i][j] - grid[i - 1][j]);
                }
                if j > 0 {
                    worst_increase = worst_increase.max(grid[i][j] - grid[i][j - 1]);
                }
            }
        }
        Ok((
            worst_increase <= 1e-12,
            worst_increase,
            "largest increase along p at x in {1, 5} and along both surface axes".to_string(),
        ))
    })
}

/// 14 (soft): the measured gap between the two conditional-entropy forms at
/// the z pole matches its analytic prediction.
pub fn criterion_14_pole_residual_audit(cfg: &VerifyConfig) -> CriterionOutcome {
    run(14, "pole-residual-audit", false, 1e-9, || {
        let params = FIGURE_PARAMS_BIASED;
        let report = crate::discord::audit(
            &params,
            &(0..=20).map(|i| i as f64 * 0.25).collect::<Vec<_>>(),
            ValidationMode::Strict,
            &cfg.optimizer,
        )?;
        let mut worst = 0.0f64;
        let mut lines = Vec::new();
        for row in &report.rows {
            worst = worst.max((row.residual_measured - row.residual_predicted).abs());
            if (row.x * 4.0).round() as i64 % 4 == 0 {
                lines.push(format!(
                    "x={:.2}: closed {:.9}, oracle {:.9}, gap {:.3e}, predicted {:.3e}",
                    row.x, row.sqd_closed, row.sqd_oracle, row.difference, row.residual_predicted
                ));
            }
        }
        Ok((worst <= 1e-9, worst, lines.join("; ")))
    })
}

/// 15: sweep output is byte-identical across repeats and worker counts.
pub fn criterion_15_determinism(cfg: &VerifyConfig) -> CriterionOutcome {
    run(15, "sweep-determinism", true, 0.0, || {
        let spec = SweepSpec {
            params: FIGURE_PARAMS_BIASED,
            variable: SweepVariable::Strength,
            from: 0.0,
            to: 2.0,
            steps: 11,
            mode: ValidationMode::Strict,
        };
        let a = csv(&spec, &cfg.optimizer, 1)?;
        let b = csv(&spec, &cfg.optimizer, 1)?;
        let c = csv(&spec, &cfg.optimizer, 4)?;
        let mismatches = (a != b) as usize + (a != c) as usize;
        Ok((
            mismatches == 0,
            mismatches as f64,
            "11-step sweep, two single-worker runs and one four-worker run".to_string(),
        ))
    })
}

/// Run all criteria in order.
pub fn run_all(cfg: &VerifyConfig) -> Vec<CriterionOutcome> {
    vec![
        criterion_01_spectrum(cfg),
        criterion_02_entropy(cfg),
        criterion_03_completeness(cfg),
        criterion_04_posterior(cfg),
        criterion_05_conditional_entropy(cfg),
        criterion_06_unbiased_exactness(cfg),
        criterion_07_projective_limit(cfg),
        criterion_08_ordering(cfg),
        criterion_09_monotonicity(cfg),
        criterion_10_qd_upper_bound(cfg),
        criterion_11_channel(cfg),
        criterion_12_strength_curve_shape(cfg),
        criterion_13_noise_curve_shape(cfg),
        criterion_14_pole_residual_audit(cfg),
        criterion_15_determinism(cfg),
    ]
}

/// True when every hard criterion passed.
pub fn all_hard_passed(outcomes: &[CriterionOutcome]) -> bool {
    outcomes.iter().all(|o| o.pass || !o.hard)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyConfig {
        VerifyConfig { samples: 20, ..VerifyConfig::default() }
    }

    #[test]
    fn fast_structural_criteria_pass_on_small_budget() {
        for outcome in [
            criterion_01_spectrum(&small()),
            criterion_02_entropy(&small()),
            criterion_03_completeness(&small()),
            criterion_04_posterior(&small()),
            criterion_05_conditional_entropy(&small()),
        ] {
            assert!(outcome.pass, "{}: {}", outcome.line(), outcome.detail);
        }
    }

    #[test]
    fn outcome_line_format() {
        let o = CriterionOutcome {
            index: 3,
            name: "weak-operator-completeness",
            hard: true,
            pass: true,
            measured: 3.2e-16,
            tolerance: 1e-12,
            detail: String::new(),
        };
        let line = o.line();
        assert!(line.starts_with("criterion 03 weak-operator-completeness"));
        assert!(line.contains("PASS"));
        let soft = CriterionOutcome { hard: false, pass: false, ..o };
        assert!(soft.line().contains("FAIL"));
        assert!(soft.line().contains("soft"));
    }

    #[test]
    fn hard_pass_summary_ignores_soft_failures() {
        let mk = |hard, pass| CriterionOutcome {
            index: 1,
            name: "x",
            hard,
            pass,
            measured: 0.0,
            tolerance: 0.0,
            detail: String::new(),
        };
        assert!(all_hard_passed(&[mk(true, true), mk(false, false)]));
        assert!(!all_hard_passed(&[mk(true, false), mk(false, true)]));
    }
}
