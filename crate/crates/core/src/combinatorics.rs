//! Small combinatorial helpers shared by the learners and oracles.

use std::ops::ControlFlow;

/// Visits every subset of `universe` with at most `max_size` elements, in
/// order of increasing cardinality and lexicographically (by position in
/// `universe`) within a cardinality. The visitor can stop the walk early.
pub fn for_each_subset<F>(universe: &[usize], max_size: usize, mut visit: F)
where
    F: FnMut(&[usize]) -> ControlFlow<()>,
{
    let max_size = max_size.min(universe.len());
    let mut picked: Vec<usize> = Vec::with_capacity(max_size);
    let mut idx: Vec<usize> = Vec::with_capacity(max_size);
    for size in 0..=max_size {
        idx.clear();
        idx.extend(0..size);
        loop {
            picked.clear();
            picked.extend(idx.iter().map(|&k| universe[k]));
            if visit(&picked).is_break() {
                return;
            }
            // advance to the next combination
            let n = universe.len();
            let mut t = size;
            loop {
                if t == 0 {
                    break;
                }
                t -= 1;
                if idx[t] < n - size + t {
                    idx[t] += 1;
                    for u in t + 1..size {
                        idx[u] = idx[u - 1] + 1;
                    }
                    t = usize::MAX;
                    break;
                }
            }
            if t != usize::MAX {
                break;
            }
        }
    }
}

/// Number of subsets of size at most `max_size` drawn from `n` elements.
pub fn count_subsets(n: usize, max_size: usize) -> u64 {
    (0..=max_size.min(n)).map(|k| binomial(n as u64, k as u64)).sum()
}

/// Exact binomial coefficient, saturating at `u64::MAX`.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for t in 0..k {
        acc = acc * (n - t) as u128 / (t + 1) as u128;
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

/// Natural log of the generalised binomial coefficient Γ(x+1)/(Γ(k+1)Γ(x−k+1)).
pub fn ln_binomial(x: f64, k: f64) -> f64 {
    use statrs::function::gamma::ln_gamma;
    ln_gamma(x + 1.0) - ln_gamma(k + 1.0) - ln_gamma(x - k + 1.0)
}

/// Natural log of `n!`.
pub fn ln_factorial(n: u64) -> f64 {
    statrs::function::gamma::ln_gamma(n as f64 + 1.0)
}

/// Table of binomial coefficients `C(v, k)` for `v < n`, `k ≤ max_k`, used
/// to rank sorted subsets in the combinatorial number system.
#[derive(Debug, Clone)]
pub struct ColexRanker {
    max_k: usize,
    table: Vec<u64>,
}

impl ColexRanker {
    pub fn new(n: usize, max_k: usize) -> Self {
        let mut table = vec![0u64; (n + 1) * (max_k + 1)];
        for v in 0..=n {
            for k in 0..=max_k {
                table[v * (max_k + 1) + k] = binomial(v as u64, k as u64);
            }
        }
        ColexRanker { max_k, table }
    }

    #[inline]
    pub fn choose(&self, v: usize, k: usize) -> u64 {
        self.table[v * (self.max_k + 1) + k]
    }

    /// Rank of a strictly increasing index list among all subsets of the same size.
    #[inline]
    pub fn rank(&self, sorted: &[usize]) -> usize {
        sorted
            .iter()
            .enumerate()
            .map(|(t, &v)| self.choose(v, t + 1))
            .sum::<u64>() as usize
    }
}

/// SplitMix64 finaliser; used to derive independent child seeds.
pub fn mix_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
