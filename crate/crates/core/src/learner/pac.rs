use serde::Serialize;

use super::{exact_pair_statistics, Method, PairRule};
use crate::error::{Error, Result};
use crate::ising::IsingModel;

/// Inputs of the PAC sample-size guarantee.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PacParams {
    /// Separation slack δ between the threshold and `ν_max`.
    pub delta: f64,
    /// Failure probability.
    pub epsilon: f64,
    pub eta: usize,
    pub p: usize,
    /// Lower bound on every marginal probability over at most `η + 1` nodes.
    pub p_min: f64,
    pub nu_max: f64,
}

impl PacParams {
    pub fn new(delta: f64, epsilon: f64, eta: usize, p: usize, p_min: f64, nu_max: f64) -> Result<Self> {
        let params = PacParams {
            delta,
            epsilon,
            eta,
            p,
            p_min,
            nu_max,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(Error::InvalidParameter(format!("delta must be positive, got {}", self.delta)));
        }
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "epsilon must lie in (0, 1), got {}",
                self.epsilon
            )));
        }
        if !(self.p_min > 0.0 && self.p_min <= 1.0) {
            return Err(Error::InvalidParameter(format!("p_min must lie in (0, 1], got {}", self.p_min)));
        }
        if !(0.0..=1.0).contains(&self.nu_max) {
            return Err(Error::InvalidParameter(format!("nu_max must lie in [0, 1], got {}", self.nu_max)));
        }
        if self.p < 2 {
            return Err(Error::InvalidParameter("p must be at least 2".into()));
        }
        Ok(())
    }
}

/// Smallest integer `n` strictly above
/// `2(δ+2)² / (δ² P_min²) · [ln(1/ε) + (η+2) ln p + (η+4) ln 2]`.
pub fn pac_sample_size(params: &PacParams) -> Result<u64> {
    params.validate()?;
    let PacParams {
        delta, epsilon, p_min, ..
    } = *params;
    let eta = params.eta as f64;
    let prefactor = 2.0 * (delta + 2.0).powi(2) / (delta * delta * p_min * p_min);
    let bracket = (1.0 / epsilon).ln() + (eta + 2.0) * (params.p as f64).ln() + (eta + 4.0) * 2f64.ln();
    let bound = prefactor * bracket;
    if !bound.is_finite() || bound >= u64::MAX as f64 {
        return Err(Error::CapacityExceeded(format!("sample size {bound} does not fit in u64")));
    }
    Ok(bound.floor() as u64 + 1)
}

/// `ξ = ν_max + δ`.
pub fn pac_threshold(nu_max: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter(format!("delta must be positive, got {delta}")));
    }
    if !(0.0..=1.0).contains(&nu_max) {
        return Err(Error::InvalidParameter(format!("nu_max must lie in [0, 1], got {nu_max}")));
    }
    Ok(nu_max + delta)
}

/// True edges whose exact statistic (CVDT, ordered-or orientation) is
/// strictly above `lambda`, in lexicographic order.
pub fn recoverable_edge_set(model: &IsingModel, eta: usize, lambda: f64) -> Result<Vec<(usize, usize)>> {
    let stats = exact_pair_statistics(model, eta)?;
    Ok(model
        .graph()
        .edges()
        .filter(|&(u, v)| {
            stats
                .entry(u, v)
                .expect("edge inside the model")
                .statistic(Method::Cvdt, PairRule::OrderedOr)
                .value
                > lambda
        })
        .collect())
}

/// One threshold condition with the value it was compared against.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Verdict {
    pub holds: bool,
    pub reference: f64,
}

/// Finite-sample surrogates of the threshold scaling conditions, all
/// constants set to 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ThresholdFeasibility {
    pub n: u64,
    pub p: usize,
    pub j_min: f64,
    pub alpha: f64,
    pub gamma: usize,
    pub xi: f64,
    /// `ξ <= J_min`
    pub below_min_coupling: Verdict,
    /// `ξ >= α^γ ln p`
    pub above_decay: Verdict,
    /// `ξ >= sqrt(ln p / n)`
    pub above_noise: Verdict,
}

impl ThresholdFeasibility {
    pub fn all_hold(&self) -> bool {
        self.below_min_coupling.holds && self.above_decay.holds && self.above_noise.holds
    }

    /// The smallest ξ meeting the two lower-bound conditions.
    pub fn smallest_admissible_xi(&self) -> f64 {
        self.above_decay.reference.max(self.above_noise.reference)
    }
}

pub fn check_threshold_feasibility(
    n: u64,
    p: usize,
    j_min: f64,
    alpha: f64,
    gamma: usize,
    xi: f64,
) -> Result<ThresholdFeasibility> {
    if alpha >= 1.0 {
        return Err(Error::AssumptionViolation(format!(
            "alpha = {alpha} >= 1: the maximum coupling is not below the correlation-decay threshold"
        )));
    }
    if n == 0 || p < 2 || !(j_min > 0.0) || !(alpha > 0.0) || !(xi > 0.0) {
        return Err(Error::InvalidParameter(
            "feasibility check needs n >= 1, p >= 2 and positive j_min, alpha, xi".into(),
        ));
    }
    let lnp = (p as f64).ln();
    let decay = alpha.powi(gamma as i32) * lnp;
    let noise = (lnp / n as f64).sqrt();
    Ok(ThresholdFeasibility {
        n,
        p,
        j_min,
        alpha,
        gamma,
        xi,
        below_min_coupling: Verdict {
            holds: xi <= j_min,
            reference: j_min,
        },
        above_decay: Verdict {
            holds: xi >= decay,
            reference: decay,
        },
        above_noise: Verdict {
            holds: xi >= noise,
            reference: noise,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_cycle, Graph};
    use crate::ising::{exact_joint, gen_potentials, ParamSpec, SignMode};
    use crate::learner::{learn, LearnerConfig, PairStatistics};
    use proptest::prelude::*;

    #[test]
    fn sample_size_hand_value() {
        let params = PacParams::new(0.5, 0.05, 1, 10, 0.1, 0.0).unwrap();
        assert_eq!(pac_sample_size(&params).unwrap(), 66847);
        let bracket = 20f64.ln() + 3.0 * 10f64.ln() + 5.0 * 2f64.ln();
        assert!((bracket - 13.3692).abs() < 1e-4);
    }

    #[test]
    fn sample_size_scales_with_p_min() {
        let a = pac_sample_size(&PacParams::new(0.3, 0.1, 2, 50, 0.05, 0.0).unwrap()).unwrap();
        let b = pac_sample_size(&PacParams::new(0.3, 0.1, 2, 50, 0.1, 0.0).unwrap()).unwrap();
        let ratio = a as f64 / b as f64;
        assert!((ratio - 4.0).abs() < 1e-3, "{ratio}");
    }

    #[test]
    fn epsilon_only_enters_through_log_term() {
        let near_one = PacParams::new(0.5, 1.0 - 1e-12, 1, 10, 0.1, 0.0).unwrap();
        let n = pac_sample_size(&near_one).unwrap();
        let expected = 5000.0 * (3.0 * 10f64.ln() + 5.0 * 2f64.ln());
        assert_eq!(n, expected.floor() as u64 + 1);
    }

    #[test]
    fn invalid_pac_params() {
        assert!(PacParams::new(0.0, 0.1, 1, 10, 0.1, 0.0).is_err());
        assert!(PacParams::new(0.1, 1.0, 1, 10, 0.1, 0.0).is_err());
        assert!(PacParams::new(0.1, 0.1, 1, 10, 0.0, 0.0).is_err());
        assert!(PacParams::new(0.1, 0.1, 1, 10, 0.1, 1.5).is_err());
    }

    #[test]
    fn threshold_choice() {
        assert_eq!(pac_threshold(0.0, 0.05).unwrap(), 0.05);
        assert!((pac_threshold(0.0243, 0.05).unwrap() - 0.0743).abs() < 1e-15);
        assert!(pac_threshold(0.1, 0.0).is_err());
    }

    #[test]
    fn feasibility_examples() {
        let r = check_threshold_feasibility(10_000, 80, 0.15, 0.39, 10, 0.1).unwrap();
        assert!(r.all_hold());
        assert!((r.above_decay.reference - 0.39f64.powi(10) * 80f64.ln()).abs() < 1e-15);
        assert!((r.above_decay.reference - 3.6e-4).abs() < 1e-5);
        assert!((r.above_noise.reference - 0.0209).abs() < 1e-4);

        let r = check_threshold_feasibility(10_000, 80, 0.15, 0.39, 10, 0.2).unwrap();
        assert!(!r.below_min_coupling.holds);
        assert!(r.above_decay.holds && r.above_noise.holds);

        let r = check_threshold_feasibility(10, 80, 0.15, 0.39, 10, 0.1).unwrap();
        assert!(!r.above_noise.holds);
        assert!((r.above_noise.reference - 0.662).abs() < 1e-3);

        assert!(matches!(
            check_threshold_feasibility(10, 80, 0.15, 1.0, 10, 0.1),
            Err(Error::AssumptionViolation(_))
        ));
    }

    fn chain() -> IsingModel {
        IsingModel::uniform(Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap(), 0.2).unwrap()
    }

    #[test]
    fn recoverable_edges() {
        let m = chain();
        assert_eq!(recoverable_edge_set(&m, 1, 0.1).unwrap(), vec![(0, 1), (1, 2)]);
        assert_eq!(recoverable_edge_set(&m, 1, 0.0).unwrap().len(), 2);
        assert!(recoverable_edge_set(&m, 1, 1.0).unwrap().is_empty());
    }

    #[test]
    fn exact_threshold_recovers_strong_edges() {
        // every edge above ν_max + 2δ is learned with ξ = ν_max + δ from exact statistics
        let delta = 0.01;
        for seed in 0..6 {
            let g = gen_cycle(7).unwrap();
            let m = gen_potentials(&g, &ParamSpec::new(0.15, 0.4, SignMode::Mixed, seed).unwrap()).unwrap();
            let joint = exact_joint(&m).unwrap();
            let eta = 1;
            let nu = joint.nu_max(&g, eta).unwrap();
            let xi = pac_threshold(nu, delta).unwrap();
            let est = PairStatistics::from_exact(&joint, eta).threshold(xi, Method::Cvdt, PairRule::OrderedOr);
            for (u, v) in recoverable_edge_set(&m, eta, nu + 2.0 * delta).unwrap() {
                assert!(est.has_edge(u, v));
            }
            assert!(est.edges().all(|(u, v)| g.has_edge(u, v)));
        }
    }

    #[test]
    fn pac_guarantee_holds_statistically() {
        // p = 8 path: exact separation with η = 1, so ν_max = 0
        let g = Graph::from_edges(8, (0..7).map(|v| (v, v + 1))).unwrap();
        let m = gen_potentials(&g, &ParamSpec::new(0.5, 0.7, SignMode::Attractive, 3).unwrap()).unwrap();
        let joint = exact_joint(&m).unwrap();
        let eta = 1;
        let nu_max = joint.nu_max(&g, eta).unwrap();
        assert_eq!(nu_max, 0.0);
        let (delta, epsilon) = (0.2, 0.1);
        let params = PacParams::new(delta, epsilon, eta, 8, joint.p_min(eta), nu_max).unwrap();
        let n = pac_sample_size(&params).unwrap() as usize;
        let xi = pac_threshold(nu_max, delta).unwrap();
        let target = recoverable_edge_set(&m, eta, nu_max + 2.0 * delta).unwrap();
        assert!(!target.is_empty());
        let cfg = LearnerConfig::new(eta, xi, Method::Cvdt).unwrap();
        let trials = 100;
        let successes = (0..trials)
            .filter(|&t| {
                let s = joint.sample(n, 500 + t).unwrap();
                let est = learn(&s, &cfg).unwrap();
                target.iter().all(|&(u, v)| est.has_edge(u, v)) && est.edges().all(|(u, v)| g.has_edge(u, v))
            })
            .count();
        assert!(successes as f64 >= (1.0 - epsilon) * trials as f64, "{successes}/{trials}");
    }

    proptest! {
        #[test]
        fn verdicts_match_references(
            n in 1u64..1_000_000, p in 2usize..500, j_min in 0.01f64..1.0,
            alpha in 0.01f64..0.99, gamma in 0usize..20, xi in 0.0001f64..1.0,
        ) {
            let r = check_threshold_feasibility(n, p, j_min, alpha, gamma, xi).unwrap();
            prop_assert_eq!(r.below_min_coupling.holds, xi <= r.below_min_coupling.reference);
            prop_assert_eq!(r.above_decay.holds, xi >= r.above_decay.reference);
            prop_assert_eq!(r.above_noise.holds, xi >= r.above_noise.reference);
            prop_assert_eq!(r.all_hold(), xi <= j_min && xi >= r.smallest_admissible_xi());
        }

        #[test]
        fn sample_size_is_strictly_above_bound(
            delta in 0.01f64..2.0, eps in 0.001f64..0.999, eta in 0usize..4,
            p in 2usize..1000, p_min in 0.01f64..1.0,
        ) {
            let params = PacParams::new(delta, eps, eta, p, p_min, 0.0).unwrap();
            let n = pac_sample_size(&params).unwrap() as f64;
            let e = eta as f64;
            let bound = 2.0 * (delta + 2.0).powi(2) / (delta * delta * p_min * p_min)
                * ((1.0 / eps).ln() + (e + 2.0) * (p as f64).ln() + (e + 4.0) * 2f64.ln());
            prop_assert!(n > bound && n - 1.0 <= bound);
        }
    }
}
