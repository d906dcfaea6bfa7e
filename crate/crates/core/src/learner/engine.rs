//! The single statistics pass shared by every threshold: for each unordered
//! pair, the minima over conditioning sets of both conditional variation
//! orientations, of their maximum, and of the conditional mutual information.

use std::ops::ControlFlow;

use rayon::prelude::*;

use super::{Minimum, PairEntry, PairStatistics};
use crate::combinatorics::{for_each_subset, ColexRanker};
use crate::ising::ExactJoint;
use crate::samples::SampleSet;
use crate::stats::{empirical_joint, TripleTable};

/// Upper limit on cached moment entries (4 bytes each).
const MOMENT_BUDGET: u64 = 1 << 25;

/// Statistics for one conditioning set.
#[derive(Debug, Clone, Copy)]
struct SetStats {
    forward: f64,
    backward: f64,
    cmi: f64,
}

/// Anything that can produce the four statistics of a triple `(i, j, S)`.
trait StatisticSource: Sync {
    fn p(&self) -> usize;

    /// `vars` is `[i, j, s_1, ..]`.
    fn evaluate(&self, vars: &[usize], scratch: &mut Scratch) -> SetStats;
}

#[derive(Default)]
struct Scratch {
    ints: Vec<i64>,
    floats: Vec<f64>,
    transposed: Vec<f64>,
    sorted: Vec<usize>,
}

/// Runs the minimisation for every pair in lexicographic order.
fn run_pass(source: &dyn StatisticSource, eta: usize) -> Vec<PairEntry> {
    let p = source.p();
    let pairs: Vec<(usize, usize)> = (0..p).flat_map(|i| (i + 1..p).map(move |j| (i, j))).collect();
    pairs
        .par_iter()
        .map_init(Scratch::default, |scratch, &(i, j)| pair_minima(source, i, j, eta, scratch))
        .collect()
}

fn pair_minima(
    source: &dyn StatisticSource,
    i: usize,
    j: usize,
    eta: usize,
    scratch: &mut Scratch,
) -> PairEntry {
    let others: Vec<usize> = (0..source.p()).filter(|&v| v != i && v != j).collect();
    let mut entry = PairEntry {
        i,
        j,
        forward: Minimum::unset(),
        backward: Minimum::unset(),
        max_both: Minimum::unset(),
        cmi: Minimum::unset(),
    };
    let mut vars = Vec::with_capacity(eta + 2);
    for_each_subset(&others, eta, |s| {
        vars.clear();
        vars.push(i);
        vars.push(j);
        vars.extend_from_slice(s);
        let st = source.evaluate(&vars, scratch);
        entry.forward.offer(st.forward, s);
        entry.backward.offer(st.backward, s);
        entry.max_both.offer(st.forward.max(st.backward), s);
        entry.cmi.offer(st.cmi, s);
        if entry.max_both.value == 0.0 && entry.cmi.value == 0.0 {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    entry
}

/// Statistics from empirical samples. Binary data goes through the
/// moment-cache engine, larger alphabets through explicit count tables.
pub(super) fn empirical_statistics(samples: &SampleSet, eta: usize) -> Vec<PairEntry> {
    if samples.is_binary() {
        run_pass(&BinaryMoments::new(samples, eta + 2), eta)
    } else {
        run_pass(&GenericCounts { samples }, eta)
    }
}

pub(super) fn exact_statistics(joint: &ExactJoint, eta: usize) -> Vec<PairEntry> {
    run_pass(&ExactSource { joint }, eta)
}

/// Binary samples as per-variable bitsets with cached joint moments
/// `N(A) = #{samples with every variable of A at +1}` for small `A`.
struct BinaryMoments {
    n: usize,
    p: usize,
    bits: Vec<Vec<u64>>,
    ranker: ColexRanker,
    /// `levels[k]` holds `N(A)` for `|A| = k`, indexed by colex rank.
    levels: Vec<Vec<u32>>,
    xlogx: Vec<f64>,
}

impl BinaryMoments {
    fn new(samples: &SampleSet, max_order: usize) -> Self {
        let p = samples.p();
        let n = samples.n();
        let bits = samples.indicator_bits();
        let mut order = max_order.min(p);
        let ranker_full = ColexRanker::new(p, order);
        while order > 1 {
            let entries: u64 = (1..=order).map(|k| ranker_full.choose(p, k)).sum();
            if entries <= MOMENT_BUDGET {
                break;
            }
            order -= 1;
        }
        let ranker = ColexRanker::new(p, order.max(1));
        let mut levels: Vec<Vec<u32>> = (0..=order)
            .map(|k| vec![0u32; if k == 0 { 1 } else { ranker.choose(p, k) as usize }])
            .collect();
        levels[0][0] = n as u32;
        let words = bits.first().map_or(0, Vec::len);
        let mut stack: Vec<Vec<u64>> = (0..=order).map(|_| vec![u64::MAX; words]).collect();
        fill_levels(&bits, &ranker, &mut levels, &mut stack, 0, 0, 0, order);
        let xlogx = (0..=n).map(|c| if c == 0 { 0.0 } else { c as f64 * (c as f64).ln() }).collect();
        BinaryMoments {
            n,
            p,
            bits,
            ranker,
            levels,
            xlogx,
        }
    }

    /// `N(A)` for a sorted set `A`.
    fn moment(&self, sorted: &[usize]) -> u32 {
        let k = sorted.len();
        if k < self.levels.len() {
            return self.levels[k][self.ranker.rank(sorted)];
        }
        let words = self.bits[sorted[0]].len();
        (0..words)
            .map(|w| {
                sorted
                    .iter()
                    .fold(u64::MAX, |acc, &v| acc & self.bits[v][w])
                    .count_ones()
            })
            .sum()
    }
}

/// Depth-first walk over sorted subsets, extending the AND buffer one variable at a time.
#[allow(clippy::too_many_arguments)]
fn fill_levels(
    bits: &[Vec<u64>],
    ranker: &ColexRanker,
    levels: &mut [Vec<u32>],
    stack: &mut [Vec<u64>],
    start: usize,
    depth: usize,
    rank: usize,
    order: usize,
) {
    if depth == order {
        return;
    }
    for v in start..bits.len() {
        let (lower, upper) = stack.split_at_mut(depth + 1);
        let parent = &lower[depth];
        let child = &mut upper[0];
        let mut count = 0u32;
        for ((c, &a), &b) in child.iter_mut().zip(parent).zip(&bits[v]) {
            *c = a & b;
            count += c.count_ones();
        }
        let r = rank + ranker.choose(v, depth + 1) as usize;
        levels[depth + 1][r] = count;
        if count > 0 {
            fill_levels(bits, ranker, levels, stack, v + 1, depth + 1, r, order);
        }
    }
}

impl StatisticSource for BinaryMoments {
    fn p(&self) -> usize {
        self.p
    }

    fn evaluate(&self, vars: &[usize], scratch: &mut Scratch) -> SetStats {
        let m = vars.len();
        let cells = 1usize << m;
        let counts = &mut scratch.ints;
        counts.clear();
        counts.resize(cells, 0);
        let sorted = &mut scratch.sorted;
        for (mask, slot) in counts.iter_mut().enumerate() {
            sorted.clear();
            sorted.extend((0..m).filter(|&t| mask >> t & 1 == 1).map(|t| vars[t]));
            sorted.sort_unstable();
            *slot = self.moment(sorted) as i64;
        }
        // Möbius inversion: "all of mask at +1" becomes "exactly mask at +1".
        for t in 0..m {
            let bit = 1 << t;
            for mask in 0..cells {
                if mask & bit == 0 {
                    counts[mask] -= counts[mask | bit];
                }
            }
        }
        let f = |c: i64| self.xlogx[c as usize];
        let mut forward = f64::INFINITY;
        let mut backward = f64::INFINITY;
        let mut acc = 0.0;
        for ctx in 0..cells / 4 {
            let c = &counts[4 * ctx..4 * ctx + 4];
            // index bit 0 is x_i, bit 1 is x_j
            let (c00, c10, c01, c11) = (c[0], c[1], c[2], c[3]);
            let (nj_plus, nj_minus) = (c01 + c11, c00 + c10);
            let (ni_plus, ni_minus) = (c10 + c11, c00 + c01);
            if nj_plus > 0 && nj_minus > 0 {
                let tv = (c11 as f64 / nj_plus as f64 - c10 as f64 / nj_minus as f64).abs();
                forward = forward.min(tv);
            }
            if ni_plus > 0 && ni_minus > 0 {
                let tv = (c11 as f64 / ni_plus as f64 - c01 as f64 / ni_minus as f64).abs();
                backward = backward.min(tv);
            }
            acc += f(c00) + f(c01) + f(c10) + f(c11) + f(nj_plus + nj_minus)
                - f(nj_plus)
                - f(nj_minus)
                - f(ni_plus)
                - f(ni_minus);
        }
        let finite = |v: f64| if v.is_finite() { v } else { 0.0 };
        SetStats {
            forward: finite(forward),
            backward: finite(backward),
            cmi: if self.n == 0 { 0.0 } else { (acc / self.n as f64).max(0.0) },
        }
    }
}

/// Swaps the first two axes of a triple table.
fn transpose_pair(weights: &[f64], a: usize, out: &mut Vec<f64>) {
    out.clear();
    out.resize(weights.len(), 0.0);
    let block = a * a;
    for ctx in 0..weights.len() / block {
        for xi in 0..a {
            for xj in 0..a {
                out[xj + a * xi + block * ctx] = weights[xi + a * xj + block * ctx];
            }
        }
    }
}

fn table_stats(weights: &[f64], a: usize, transposed: &mut Vec<f64>) -> SetStats {
    let variation = |w: &[f64]| {
        let t = TripleTable::new(w, a, a);
        if a == 2 {
            t.pairwise_variation(1, 0).unwrap_or(0.0)
        } else {
            t.summed_variation()
        }
    };
    transpose_pair(weights, a, transposed);
    SetStats {
        forward: variation(weights),
        backward: variation(transposed),
        cmi: TripleTable::new(weights, a, a).conditional_mutual_information(),
    }
}

struct GenericCounts<'a> {
    samples: &'a SampleSet,
}

impl StatisticSource for GenericCounts<'_> {
    fn p(&self) -> usize {
        self.samples.p()
    }

    fn evaluate(&self, vars: &[usize], scratch: &mut Scratch) -> SetStats {
        let dist = empirical_joint(self.samples, vars).expect("conditioning table within capacity");
        scratch.floats.clear();
        scratch.floats.extend(dist.counts().iter().map(|&c| c as f64));
        table_stats(&scratch.floats, self.samples.alphabet_size(), &mut scratch.transposed)
    }
}

struct ExactSource<'a> {
    joint: &'a ExactJoint,
}

impl StatisticSource for ExactSource<'_> {
    fn p(&self) -> usize {
        self.joint.p()
    }

    fn evaluate(&self, vars: &[usize], scratch: &mut Scratch) -> SetStats {
        // marginal() uses bit t for vars[t], matching the triple layout for binary arity
        let table = self.joint.marginal(vars);
        let st = table_stats(&table, 2, &mut scratch.transposed);
        let snap = |v: f64| if v < super::EXACT_ZERO_TOL { 0.0 } else { v };
        SetStats {
            forward: snap(st.forward),
            backward: snap(st.backward),
            cmi: snap(st.cmi),
        }
    }
}

impl PairStatistics {
    /// One statistics pass over empirical samples with conditioning sets of size `<= eta`.
    pub fn from_samples(samples: &SampleSet, eta: usize) -> Self {
        PairStatistics {
            p: samples.p(),
            eta,
            entries: empirical_statistics(samples, eta),
        }
    }

    /// The same pass driven by exact marginals of a small model.
    pub fn from_exact(joint: &ExactJoint, eta: usize) -> Self {
        PairStatistics {
            p: joint.p(),
            eta,
            entries: exact_statistics(joint, eta),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::gen_erdos_renyi;
    use crate::ising::{exact_joint, gen_potentials, gibbs_sample, GibbsConfig, ParamSpec, SignMode};
    use crate::stats::{cond_mutual_information, emp_cond_variation};
    use proptest::prelude::*;

    fn samples(p: usize, n: usize, seed: u64) -> SampleSet {
        let g = gen_erdos_renyi(p, 2.0, seed).unwrap();
        let m = gen_potentials(&g, &ParamSpec::new(0.2, 0.5, SignMode::Mixed, seed).unwrap()).unwrap();
        let cfg = GibbsConfig {
            burnin_sweeps: 20,
            thin_sweeps: 1,
        };
        gibbs_sample(&m, n, &cfg, seed).unwrap()
    }

    #[test]
    fn moments_match_direct_counts() {
        let s = samples(7, 300, 2);
        let engine = BinaryMoments::new(&s, 3);
        for set in [vec![0], vec![1, 4], vec![0, 2, 6], vec![1, 2, 3, 5]] {
            let direct = s
                .rows()
                .filter(|r| set.iter().all(|&v| r[v] == 1))
                .count() as u32;
            assert_eq!(engine.moment(&set), direct, "{set:?}");
        }
        assert_eq!(engine.moment(&[]), 300);
    }

    #[test]
    fn moment_budget_limits_order() {
        let s = samples(5, 10, 1);
        let engine = BinaryMoments::new(&s, 10);
        assert_eq!(engine.levels.len(), 6);
    }

    #[test]
    fn transpose_swaps_axes() {
        let w: Vec<f64> = (0..8).map(f64::from).collect();
        let mut t = Vec::new();
        transpose_pair(&w, 2, &mut t);
        assert_eq!(t, vec![0.0, 2.0, 1.0, 3.0, 4.0, 6.0, 5.0, 7.0]);
    }

    #[test]
    fn exact_source_layout_matches_oracle() {
        let g = gen_erdos_renyi(6, 2.5, 4).unwrap();
        let m = gen_potentials(&g, &ParamSpec::new(0.1, 0.5, SignMode::Mixed, 4).unwrap()).unwrap();
        let joint = exact_joint(&m).unwrap();
        let source = ExactSource { joint: &joint };
        let mut scratch = Scratch::default();
        let st = source.evaluate(&[3, 1, 0, 5], &mut scratch);
        assert!((st.forward - joint.cond_variation(3, 1, &[0, 5]).unwrap()).abs() < 1e-12);
        assert!((st.backward - joint.cond_variation(1, 3, &[0, 5]).unwrap()).abs() < 1e-12);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn fast_engine_matches_reference(seed in any::<u64>(), n in 1usize..400) {
            let s = samples(6, n, seed);
            let fast = BinaryMoments::new(&s, 3);
            let mut scratch = Scratch::default();
            for vars in [vec![0, 1], vec![2, 0, 5], vec![4, 3, 1, 2], vec![5, 1, 3, 0, 2]] {
                let st = fast.evaluate(&vars, &mut scratch);
                let (i, j, rest) = (vars[0], vars[1], &vars[2..]);
                prop_assert!((st.forward - emp_cond_variation(&s, i, j, rest).unwrap()).abs() < 1e-12);
                prop_assert!((st.backward - emp_cond_variation(&s, j, i, rest).unwrap()).abs() < 1e-12);
                prop_assert!((st.cmi - cond_mutual_information(&s, i, j, rest).unwrap()).abs() < 1e-12);
                let generic = GenericCounts { samples: &s }.evaluate(&vars, &mut scratch);
                prop_assert!((st.forward - generic.forward).abs() < 1e-12);
                prop_assert!((st.cmi - generic.cmi).abs() < 1e-12);
            }
        }
    }
}
