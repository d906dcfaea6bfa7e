//! Brute-force inference over all `2^p` configurations, for small models.

use std::ops::ControlFlow;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::IsingModel;
use crate::combinatorics::for_each_subset;
use crate::error::{Error, Result};
use crate::samples::SampleSet;
use crate::stats::{check_triple, TripleTable};

/// Largest model the exact oracle will enumerate.
pub const EXACT_MAX_NODES: usize = 20;

/// Exact conditional variations below this are floating-point residue of an
/// exact zero and are reported as 0.
const ZERO_TOL: f64 = 1e-12;

/// The full joint distribution of a small Ising model.
///
/// Configuration `x` is stored at the index whose bit `k` is set iff `x_k = +1`.
#[derive(Debug, Clone)]
pub struct ExactJoint {
    p: usize,
    probs: Vec<f64>,
    log_partition: f64,
}

/// A minimum conditional variation together with the conditioning set attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct MinVariation {
    pub value: f64,
    pub set: Vec<usize>,
}

pub fn exact_joint(model: &IsingModel) -> Result<ExactJoint> {
    let p = model.p();
    if p > EXACT_MAX_NODES {
        return Err(Error::CapacityExceeded(format!(
            "exact inference supports p <= {EXACT_MAX_NODES}, got {p}"
        )));
    }
    let states = 1usize << p;
    let spin = |x: usize, k: usize| if x >> k & 1 == 1 { 1.0 } else { -1.0 };
    let log_weights: Vec<f64> = (0..states)
        .map(|x| {
            let pair: f64 = model
                .couplings()
                .iter()
                .map(|&(u, v, w)| w * spin(x, u) * spin(x, v))
                .sum();
            let field: f64 = model.h().iter().enumerate().map(|(k, &hk)| hk * spin(x, k)).sum();
            pair + field
        })
        .collect();
    let max = log_weights.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut probs: Vec<f64> = log_weights.iter().map(|&l| (l - max).exp()).collect();
    let z: f64 = probs.iter().sum();
    probs.iter_mut().for_each(|q| *q /= z);
    Ok(ExactJoint {
        p,
        probs,
        log_partition: max + z.ln(),
    })
}

impl ExactJoint {
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn log_partition(&self) -> f64 {
        self.log_partition
    }

    /// The normaliser `Z`.
    pub fn partition(&self) -> f64 {
        self.log_partition.exp()
    }

    pub fn prob(&self, spins: &[i8]) -> f64 {
        let idx = spins
            .iter()
            .enumerate()
            .filter(|(_, &s)| s > 0)
            .fold(0usize, |acc, (k, _)| acc | 1 << k);
        self.probs[idx]
    }

    /// Marginal table over `vars`; bit `t` of the index is set iff `vars[t]` is `+1`.
    pub fn marginal(&self, vars: &[usize]) -> Vec<f64> {
        let mut out = vec![0.0; 1 << vars.len()];
        for (x, &q) in self.probs.iter().enumerate() {
            let idx = vars
                .iter()
                .enumerate()
                .fold(0usize, |acc, (t, &v)| acc | ((x >> v) & 1) << t);
            out[idx] += q;
        }
        out
    }

    pub fn mean(&self, i: usize) -> f64 {
        let m = self.marginal(&[i]);
        m[1] - m[0]
    }

    /// `E[X_i X_j]`.
    pub fn correlation(&self, i: usize, j: usize) -> f64 {
        let m = self.marginal(&[i, j]);
        m[0] + m[3] - m[1] - m[2]
    }

    /// Conditional variation distance `ν_{i|j;S}`.
    pub fn cond_variation(&self, i: usize, j: usize, s: &[usize]) -> Result<f64> {
        check_triple(self.p, i, j, s)?;
        Ok(self.cond_variation_unchecked(i, j, s))
    }

    fn cond_variation_unchecked(&self, i: usize, j: usize, s: &[usize]) -> f64 {
        let mut vars = Vec::with_capacity(s.len() + 2);
        vars.push(i);
        vars.push(j);
        vars.extend_from_slice(s);
        let table = self.marginal(&vars);
        let v = TripleTable::new(&table, 2, 2).pairwise_variation(1, 0).unwrap_or(0.0);
        if v < ZERO_TOL {
            0.0
        } else {
            v
        }
    }

    /// Minimum of `ν_{i|j;S}` over `|S| <= eta`; ties keep the smallest,
    /// then lexicographically first, set.
    pub fn min_cond_variation(&self, i: usize, j: usize, eta: usize) -> Result<MinVariation> {
        check_triple(self.p, i, j, &[])?;
        let others: Vec<usize> = (0..self.p).filter(|&v| v != i && v != j).collect();
        let mut best = MinVariation {
            value: f64::INFINITY,
            set: Vec::new(),
        };
        for_each_subset(&others, eta, |s| {
            let v = self.cond_variation_unchecked(i, j, s);
            if v < best.value {
                best.value = v;
                best.set = s.to_vec();
            }
            if best.value == 0.0 {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        Ok(best)
    }

    /// `ν_max`: the largest minimum conditional variation over ordered non-adjacent pairs.
    pub fn nu_max(&self, graph: &crate::graph::Graph, eta: usize) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for i in 0..self.p {
            for j in (0..self.p).filter(|&j| j != i && !graph.has_edge(i, j)) {
                worst = worst.max(self.min_cond_variation(i, j, eta)?.value);
            }
        }
        Ok(worst)
    }

    /// Smallest probability of any configuration of any node set of size `<= eta + 1`.
    pub fn p_min(&self, eta: usize) -> f64 {
        let nodes: Vec<usize> = (0..self.p).collect();
        let mut best: f64 = 1.0;
        for_each_subset(&nodes, eta + 1, |s| {
            if !s.is_empty() {
                let m = self.marginal(s);
                best = m.iter().cloned().fold(best, f64::min);
            }
            ControlFlow::Continue(())
        });
        best
    }

    /// Draws `n` i.i.d. configurations by inverse-CDF sampling.
    pub fn sample(&self, n: usize, seed: u64) -> Result<SampleSet> {
        let mut cdf = Vec::with_capacity(self.probs.len());
        let mut acc = 0.0;
        for &q in &self.probs {
            acc += q;
            cdf.push(acc);
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut data = Vec::with_capacity(n * self.p);
        for _ in 0..n {
            let u = rng.gen::<f64>() * acc;
            let x = cdf.partition_point(|&c| c <= u).min(self.probs.len() - 1);
            data.extend((0..self.p).map(|k| ((x >> k) & 1) as u8));
        }
        SampleSet::from_symbols(n, self.p, SampleSet::SPIN_ALPHABET.to_vec(), data)
    }
}

pub fn exact_cond_variation(model: &IsingModel, i: usize, j: usize, s: &[usize]) -> Result<f64> {
    exact_joint(model)?.cond_variation(i, j, s)
}

pub fn exact_min_cond_variation(
    model: &IsingModel,
    i: usize,
    j: usize,
    eta: usize,
) -> Result<MinVariation> {
    exact_joint(model)?.min_cond_variation(i, j, eta)
}

pub fn nu_max_exact(model: &IsingModel, eta: usize) -> Result<f64> {
    exact_joint(model)?.nu_max(model.graph(), eta)
}

pub fn p_min_exact(model: &IsingModel, eta: usize) -> Result<f64> {
    Ok(exact_joint(model)?.p_min(eta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{check_local_separation, gen_cycle, gen_erdos_renyi, Graph};
    use crate::ising::{gen_potentials, ParamSpec, SignMode};
    use proptest::prelude::*;

    fn two_node(j: f64) -> IsingModel {
        IsingModel::uniform(Graph::from_edges(2, [(0, 1)]).unwrap(), j).unwrap()
    }

    fn chain(j: f64) -> IsingModel {
        IsingModel::uniform(Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap(), j).unwrap()
    }

    #[test]
    fn single_free_spin() {
        let m = IsingModel::new(Graph::empty(1), [], vec![0.0]).unwrap();
        assert_eq!(exact_joint(&m).unwrap().probs(), &[0.5, 0.5]);
    }

    #[test]
    fn two_node_table() {
        let joint = exact_joint(&two_node(0.2)).unwrap();
        let z = 2.0 * 0.2f64.exp() + 2.0 * (-0.2f64).exp();
        assert!((joint.prob(&[1, 1]) - 0.2f64.exp() / z).abs() < 1e-15);
        assert!((joint.prob(&[-1, -1]) - 0.2f64.exp() / z).abs() < 1e-15);
        assert!((joint.prob(&[1, -1]) - (-0.2f64).exp() / z).abs() < 1e-15);
        assert!((joint.partition() - z).abs() < 1e-12);
    }

    #[test]
    fn too_large_for_enumeration() {
        let g = gen_cycle(21).unwrap();
        let m = IsingModel::uniform(g, 0.1).unwrap();
        assert!(matches!(exact_joint(&m), Err(Error::CapacityExceeded(_))));
    }

    #[test]
    fn closed_form_variations() {
        let t = 0.2f64.tanh();
        let v = exact_cond_variation(&two_node(0.2), 0, 1, &[]).unwrap();
        assert!((v - 0.197375320224904).abs() < 1e-9);
        assert!((v - t).abs() < 1e-12);
        let c = chain(0.2);
        assert_eq!(exact_cond_variation(&c, 0, 2, &[1]).unwrap(), 0.0);
        let v = exact_cond_variation(&c, 0, 2, &[]).unwrap();
        assert!((v - t * t).abs() < 1e-12);
        assert!((v - 0.038957017).abs() < 1e-8);
        assert!(exact_cond_variation(&c, 0, 2, &[0]).is_err());
    }

    #[test]
    fn min_variation_examples() {
        let tree = IsingModel::uniform(
            Graph::from_edges(5, [(0, 1), (1, 2), (1, 3), (3, 4)]).unwrap(),
            0.2,
        )
        .unwrap();
        let r = exact_min_cond_variation(&tree, 0, 4, 1).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.set, vec![1]);

        let c4 = IsingModel::uniform(gen_cycle(4).unwrap(), 0.2).unwrap();
        assert_eq!(exact_min_cond_variation(&c4, 0, 2, 2).unwrap().value, 0.0);
        let adjacent = exact_min_cond_variation(&c4, 0, 1, 2).unwrap();
        assert!(adjacent.value > 0.0);
        // attained with both other nodes pinned; far smaller than tanh(0.2)
        assert!(adjacent.value < 0.2f64.tanh());
    }

    #[test]
    fn nu_max_on_cycles() {
        let c6 = IsingModel::uniform(gen_cycle(6).unwrap(), 0.2).unwrap();
        let alpha = 0.2f64.tanh() / 0.5;
        let v = nu_max_exact(&c6, 1).unwrap();
        assert!(v > 0.0);
        assert!(v <= alpha.powi(3), "{v} vs {}", alpha.powi(3));
        assert_eq!(nu_max_exact(&c6, 2).unwrap(), 0.0);
    }

    #[test]
    fn p_min_examples() {
        let free = IsingModel::new(Graph::empty(4), [], vec![0.0; 4]).unwrap();
        assert!((p_min_exact(&free, 1).unwrap() - 0.25).abs() < 1e-15);
        let m = two_node(0.2);
        assert!((p_min_exact(&m, 0).unwrap() - 0.5).abs() < 1e-15);
        let z = 2.0 * 0.2f64.exp() + 2.0 * (-0.2f64).exp();
        let pm = p_min_exact(&m, 1).unwrap();
        assert!((pm - (-0.2f64).exp() / z).abs() < 1e-15);
        assert!(pm > 0.0 && pm < 0.25);
    }

    #[test]
    fn variation_is_asymmetric() {
        // node 1 has degree 3, node 0 is a leaf
        let g = Graph::from_edges(4, [(0, 1), (1, 2), (1, 3)]).unwrap();
        let m = IsingModel::new(g, [(0, 1, 0.3), (1, 2, 0.5), (1, 3, 0.4)], vec![0.0; 4]).unwrap();
        let j = exact_joint(&m).unwrap();
        let a = j.cond_variation(0, 1, &[2]).unwrap();
        let b = j.cond_variation(1, 0, &[2]).unwrap();
        assert!((a - b).abs() > 1e-3, "{a} vs {b}");
    }

    #[test]
    fn exact_sampling_matches_moments() {
        let m = two_node(0.2);
        let joint = exact_joint(&m).unwrap();
        let s = joint.sample(200_000, 4).unwrap();
        let corr: f64 = s.rows().map(|r| if r[0] == r[1] { 1.0 } else { -1.0 }).sum::<f64>()
            / s.n() as f64;
        let se = (1.0 - 0.2f64.tanh().powi(2)).sqrt() / (s.n() as f64).sqrt();
        assert!((corr - 0.2f64.tanh()).abs() < 5.0 * se);
    }

    fn arb_model() -> impl Strategy<Value = IsingModel> {
        (3usize..=7, any::<u64>(), any::<u64>(), prop::bool::ANY).prop_map(|(p, gs, ps, mixed)| {
            let g = gen_erdos_renyi(p, 2.5, gs).unwrap();
            let mode = if mixed { SignMode::Mixed } else { SignMode::Attractive };
            gen_potentials(&g, &ParamSpec::new(0.1, 0.6, mode, ps).unwrap()).unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn joint_is_normalised_and_flip_symmetric(m in arb_model()) {
            let joint = exact_joint(&m).unwrap();
            let probs = joint.probs();
            prop_assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            prop_assert!(probs.iter().all(|&q| q > 0.0));
            let mask = probs.len() - 1;
            for (x, &q) in probs.iter().enumerate() {
                prop_assert!((q - probs[x ^ mask]).abs() < 1e-12);
            }
            for i in 0..m.p() {
                prop_assert!(joint.mean(i).abs() < 1e-12);
            }
        }

        #[test]
        fn separators_zero_the_variation(m in arb_model()) {
            let joint = exact_joint(&m).unwrap();
            let g = m.graph();
            let p = g.p();
            for i in 0..p {
                for j in (0..p).filter(|&j| j != i && !g.has_edge(i, j)) {
                    // the neighbourhood of i is a global separator
                    let nb: Vec<usize> = g.neighbors(i).to_vec();
                    let v = joint.cond_variation(i, j, &nb).unwrap();
                    prop_assert_eq!(v, 0.0);
                    let any: Vec<usize> = (0..p).filter(|&v| v != i && v != j).take(2).collect();
                    let v = joint.cond_variation(i, j, &any).unwrap();
                    prop_assert!((0.0..=1.0).contains(&v));
                }
            }
        }

        #[test]
        fn exact_separation_means_zero_nu_max(m in arb_model(), eta in 0usize..4) {
            let report = check_local_separation(m.graph(), eta, m.p()).unwrap();
            if report.holds {
                prop_assert_eq!(nu_max_exact(&m, eta).unwrap(), 0.0);
            }
        }
    }
}
