use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::IsingModel;
use crate::error::{Error, Result};
use crate::samples::SampleSet;

/// Systematic-scan schedule. One sweep updates every site once, in index order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GibbsConfig {
    #[serde(default = "default_burnin")]
    pub burnin_sweeps: usize,
    #[serde(default = "default_thin")]
    pub thin_sweeps: usize,
}

fn default_burnin() -> usize {
    200
}

fn default_thin() -> usize {
    5
}

impl Default for GibbsConfig {
    fn default() -> Self {
        GibbsConfig {
            burnin_sweeps: default_burnin(),
            thin_sweeps: default_thin(),
        }
    }
}

impl GibbsConfig {
    pub fn validate(&self) -> Result<()> {
        if self.thin_sweeps == 0 {
            return Err(Error::InvalidParameter("thin_sweeps must be at least 1".into()));
        }
        Ok(())
    }
}

/// Draws `n` approximately independent samples from a single chain started
/// at a uniformly random configuration, recording every `thin_sweeps`-th
/// sweep after burn-in.
pub fn gibbs_sample(model: &IsingModel, n: usize, cfg: &GibbsConfig, seed: u64) -> Result<SampleSet> {
    cfg.validate()?;
    let p = model.p();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut x: Vec<f64> = (0..p).map(|_| if rng.gen::<bool>() { 1.0 } else { -1.0 }).collect();
    let h = model.h();

    let sweep = |x: &mut [f64], rng: &mut ChaCha8Rng| {
        for i in 0..p {
            let field: f64 = h[i]
                + model
                    .weighted_neighbors(i)
                    .iter()
                    .map(|&(v, w)| w * x[v])
                    .sum::<f64>();
            let up = 1.0 / (1.0 + (-2.0 * field).exp());
            x[i] = if rng.gen::<f64>() < up { 1.0 } else { -1.0 };
        }
    };

    for _ in 0..cfg.burnin_sweeps {
        sweep(&mut x, &mut rng);
    }
    let mut data = Vec::with_capacity(n * p);
    for _ in 0..n {
        for _ in 0..cfg.thin_sweeps {
            sweep(&mut x, &mut rng);
        }
        data.extend(x.iter().map(|&s| u8::from(s > 0.0)));
    }
    SampleSet::from_symbols(n, p, SampleSet::SPIN_ALPHABET.to_vec(), data)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{gen_cycle, Graph};
    use crate::ising::exact_joint;

    fn spin(s: &SampleSet, r: usize, v: usize) -> f64 {
        s.value(r, v) as f64
    }

    #[test]
    fn free_spins_are_fair_coins() {
        let m = IsingModel::new(Graph::empty(3), [], vec![0.0; 3]).unwrap();
        let n = 20_000;
        let s = gibbs_sample(&m, n, &GibbsConfig::default(), 11).unwrap();
        for v in 0..3 {
            let mean = (0..n).map(|r| spin(&s, r, v)).sum::<f64>() / n as f64;
            assert!(mean.abs() < 4.0 / (n as f64).sqrt(), "mean {mean}");
        }
    }

    #[test]
    fn pair_correlation_matches_tanh() {
        let m = IsingModel::uniform(Graph::from_edges(2, [(0, 1)]).unwrap(), 0.2).unwrap();
        let n = 100_000;
        let s = gibbs_sample(&m, n, &GibbsConfig::default(), 3).unwrap();
        let corr = (0..n).map(|r| spin(&s, r, 0) * spin(&s, r, 1)).sum::<f64>() / n as f64;
        let t = 0.2f64.tanh();
        let se = ((1.0 - t * t) / n as f64).sqrt();
        assert!((corr - t).abs() < 5.0 * se, "corr {corr}");
    }

    #[test]
    fn deterministic_per_seed() {
        let m = IsingModel::uniform(gen_cycle(6).unwrap(), 0.3).unwrap();
        let cfg = GibbsConfig {
            burnin_sweeps: 10,
            thin_sweeps: 1,
        };
        let a = gibbs_sample(&m, 50, &cfg, 8).unwrap();
        assert_eq!(a, gibbs_sample(&m, 50, &cfg, 8).unwrap());
        assert_ne!(a, gibbs_sample(&m, 50, &cfg, 9).unwrap());
        assert!(gibbs_sample(&m, 5, &GibbsConfig { burnin_sweeps: 0, thin_sweeps: 0 }, 1).is_err());
    }

    #[test]
    fn empirical_error_shrinks_like_inverse_root_n() {
        let m = IsingModel::uniform(gen_cycle(4).unwrap(), 0.3).unwrap();
        let target = exact_joint(&m).unwrap().correlation(0, 1);
        let mean_abs_error = |n: usize| {
            let reps = 40;
            (0..reps)
                .map(|rep| {
                    let s = gibbs_sample(&m, n, &GibbsConfig::default(), 1000 + rep).unwrap();
                    let c = (0..n).map(|r| spin(&s, r, 0) * spin(&s, r, 1)).sum::<f64>() / n as f64;
                    (c - target).abs()
                })
                .sum::<f64>()
                / reps as f64
        };
        let ratio = mean_abs_error(8000) / mean_abs_error(2000);
        assert!((0.3..=0.8).contains(&ratio), "ratio {ratio}");
    }
}
