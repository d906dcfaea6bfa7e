//! Empirical distributions over small variable subsets, and the distance and
//! information functionals the learners use. Logarithms are natural.

use crate::error::{Error, Result};
use crate::samples::SampleSet;

/// Largest dense table an empirical joint may allocate.
pub const MAX_TABLE_CELLS: usize = 1 << 24;

/// A probability mass function over a product of finite axes.
///
/// Cells are laid out in mixed radix with the *first* axis varying fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct Pmf {
    shape: Vec<usize>,
    probs: Vec<f64>,
}

impl Pmf {
    pub fn new(shape: Vec<usize>, probs: Vec<f64>) -> Result<Self> {
        let cells: usize = shape.iter().product();
        if cells != probs.len() {
            return Err(Error::InvalidArgument(format!(
                "shape {shape:?} has {cells} cells but {} probabilities were given",
                probs.len()
            )));
        }
        if probs.iter().any(|&q| !(q >= 0.0) || !q.is_finite()) {
            return Err(Error::InvalidArgument("probabilities must be finite and nonnegative".into()));
        }
        Ok(Pmf { shape, probs })
    }

    /// A one-dimensional pmf.
    pub fn from_vec(probs: Vec<f64>) -> Result<Self> {
        Self::new(vec![probs.len()], probs)
    }

    pub fn shape(&self) -> &[usize] {
        &self.shape
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Marginal over the listed axes (in the given order).
    pub fn marginal(&self, axes: &[usize]) -> Result<Pmf> {
        if let Some(&a) = axes.iter().find(|&&a| a >= self.shape.len()) {
            return Err(Error::InvalidArgument(format!("axis {a} out of range")));
        }
        let shape: Vec<usize> = axes.iter().map(|&a| self.shape[a]).collect();
        let mut probs = vec![0.0; shape.iter().product()];
        let mut digits = vec![0usize; self.shape.len()];
        for &q in &self.probs {
            let mut idx = 0;
            for &a in axes.iter().rev() {
                idx = idx * self.shape[a] + digits[a];
            }
            probs[idx] += q;
            increment(&mut digits, &self.shape);
        }
        Pmf::new(shape, probs)
    }
}

fn increment(digits: &mut [usize], shape: &[usize]) {
    for (d, &s) in digits.iter_mut().zip(shape) {
        *d += 1;
        if *d < s {
            return;
        }
        *d = 0;
    }
}

fn check_same_support(p: &Pmf, q: &Pmf) -> Result<()> {
    if p.shape != q.shape {
        return Err(Error::InvalidArgument(format!(
            "support mismatch: {:?} vs {:?}",
            p.shape, q.shape
        )));
    }
    Ok(())
}

/// `½ Σ |P(x) − Q(x)|`.
pub fn total_variation(p: &Pmf, q: &Pmf) -> Result<f64> {
    check_same_support(p, q)?;
    Ok(0.5 * p.probs.iter().zip(&q.probs).map(|(a, b)| (a - b).abs()).sum::<f64>())
}

/// `Σ P log(P/Q)`; `f64::INFINITY` when P is not absolutely continuous with respect to Q.
pub fn kl_divergence(p: &Pmf, q: &Pmf) -> Result<f64> {
    check_same_support(p, q)?;
    let mut acc = 0.0;
    for (&a, &b) in p.probs.iter().zip(&q.probs) {
        if a > 0.0 {
            if b <= 0.0 {
                return Ok(f64::INFINITY);
            }
            acc += a * (a / b).ln();
        }
    }
    Ok(acc.max(0.0))
}

pub fn entropy(p: &Pmf) -> f64 {
    -p.probs.iter().filter(|&&q| q > 0.0).map(|&q| q * q.ln()).sum::<f64>()
}

/// Mutual information of a two-axis joint pmf.
pub fn mutual_information(joint: &Pmf) -> Result<f64> {
    if joint.shape.len() != 2 {
        return Err(Error::InvalidArgument(format!(
            "mutual information needs a two-axis joint, got shape {:?}",
            joint.shape
        )));
    }
    let px = joint.marginal(&[0])?;
    let py = joint.marginal(&[1])?;
    let (nx, ny) = (joint.shape[0], joint.shape[1]);
    let mut acc = 0.0;
    for y in 0..ny {
        for x in 0..nx {
            let pxy = joint.probs[x + nx * y];
            if pxy > 0.0 {
                acc += pxy * (pxy / (px.probs[x] * py.probs[y])).ln();
            }
        }
    }
    Ok(acc.max(0.0))
}

/// Counts of joint configurations of a list of variables.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalDist {
    vars: Vec<usize>,
    arity: Vec<usize>,
    counts: Vec<u64>,
    n: u64,
}

impl EmpiricalDist {
    pub fn vars(&self) -> &[usize] {
        &self.vars
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    /// Counts in mixed radix, first variable fastest.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, symbols: &[u8]) -> u64 {
        self.counts[self.index(symbols)]
    }

    /// Empirical probability of a configuration given as symbol indices.
    pub fn prob(&self, symbols: &[u8]) -> f64 {
        self.count(symbols) as f64 / self.n as f64
    }

    fn index(&self, symbols: &[u8]) -> usize {
        assert_eq!(symbols.len(), self.vars.len());
        symbols
            .iter()
            .zip(&self.arity)
            .rev()
            .fold(0, |acc, (&s, &a)| acc * a + s as usize)
    }

    pub fn probs(&self) -> Vec<f64> {
        self.counts.iter().map(|&c| c as f64 / self.n as f64).collect()
    }

    pub fn to_pmf(&self) -> Pmf {
        Pmf {
            shape: self.arity.clone(),
            probs: self.probs(),
        }
    }

    /// Sums out every variable not in `keep` (which must be a subset of `vars`).
    pub fn marginalize(&self, keep: &[usize]) -> Result<EmpiricalDist> {
        let axes = keep
            .iter()
            .map(|v| {
                self.vars
                    .iter()
                    .position(|u| u == v)
                    .ok_or_else(|| Error::InvalidArgument(format!("variable {v} not in table")))
            })
            .collect::<Result<Vec<usize>>>()?;
        let arity: Vec<usize> = axes.iter().map(|&a| self.arity[a]).collect();
        let mut counts = vec![0u64; arity.iter().product()];
        let mut digits = vec![0usize; self.arity.len()];
        for &c in &self.counts {
            let mut idx = 0;
            for &a in axes.iter().rev() {
                idx = idx * self.arity[a] + digits[a];
            }
            counts[idx] += c;
            increment(&mut digits, &self.arity);
        }
        Ok(EmpiricalDist {
            vars: keep.to_vec(),
            arity,
            counts,
            n: self.n,
        })
    }
}

/// Frequency table of the joint configurations of `vars`.
pub fn empirical_joint(samples: &SampleSet, vars: &[usize]) -> Result<EmpiricalDist> {
    for (k, &v) in vars.iter().enumerate() {
        if v >= samples.p() {
            return Err(Error::InvalidArgument(format!("variable {v} out of range")));
        }
        if vars[..k].contains(&v) {
            return Err(Error::InvalidArgument(format!("variable {v} listed twice")));
        }
    }
    let a = samples.alphabet_size();
    let arity = vec![a; vars.len()];
    let cells = arity
        .iter()
        .try_fold(1usize, |acc, &x| acc.checked_mul(x))
        .filter(|&c| c <= MAX_TABLE_CELLS)
        .ok_or_else(|| {
            Error::CapacityExceeded(format!("joint table over {} variables is too large", vars.len()))
        })?;
    let mut counts = vec![0u64; cells];
    for row in samples.rows() {
        let idx = vars.iter().rev().fold(0, |acc, &v| acc * a + row[v] as usize);
        counts[idx] += 1;
    }
    Ok(EmpiricalDist {
        vars: vars.to_vec(),
        arity,
        counts,
        n: samples.n() as u64,
    })
}

pub(crate) fn check_triple(p: usize, i: usize, j: usize, s: &[usize]) -> Result<()> {
    if i >= p || j >= p || i == j {
        return Err(Error::InvalidArgument(format!("invalid node pair ({i}, {j})")));
    }
    for (k, &v) in s.iter().enumerate() {
        if v >= p {
            return Err(Error::InvalidArgument(format!("conditioning node {v} out of range")));
        }
        if v == i || v == j {
            return Err(Error::InvalidArgument(format!(
                "conditioning set overlaps the pair at node {v}"
            )));
        }
        if s[..k].contains(&v) {
            return Err(Error::InvalidArgument(format!("conditioning node {v} repeated")));
        }
    }
    Ok(())
}

/// A joint weight table over `(X_i, X_j, X_S)` laid out with `x_i` fastest,
/// then `x_j`, then the combined conditioning configuration. Weights may be
/// counts or probabilities.
#[derive(Debug, Clone, Copy)]
pub struct TripleTable<'a> {
    pub weights: &'a [f64],
    pub arity_i: usize,
    pub arity_j: usize,
}

impl<'a> TripleTable<'a> {
    pub fn new(weights: &'a [f64], arity_i: usize, arity_j: usize) -> Self {
        debug_assert_eq!(weights.len() % (arity_i * arity_j), 0);
        TripleTable {
            weights,
            arity_i,
            arity_j,
        }
    }

    fn contexts(&self) -> usize {
        self.weights.len() / (self.arity_i * self.arity_j)
    }

    #[inline]
    fn w(&self, xi: usize, xj: usize, s: usize) -> f64 {
        self.weights[xi + self.arity_i * (xj + self.arity_j * s)]
    }

    /// Minimum over admissible conditioning configurations of the total
    /// variation between `P(X_i | X_j = a, x_S)` and `P(X_i | X_j = b, x_S)`.
    /// A configuration is admissible when both conditioning events carry
    /// positive weight; `None` if none is.
    pub fn pairwise_variation(&self, a: usize, b: usize) -> Option<f64> {
        let mut best: Option<f64> = None;
        for s in 0..self.contexts() {
            let za: f64 = (0..self.arity_i).map(|x| self.w(x, a, s)).sum();
            let zb: f64 = (0..self.arity_i).map(|x| self.w(x, b, s)).sum();
            if za <= 0.0 || zb <= 0.0 {
                continue;
            }
            let tv = 0.5
                * (0..self.arity_i)
                    .map(|x| (self.w(x, a, s) / za - self.w(x, b, s) / zb).abs())
                    .sum::<f64>();
            best = Some(best.map_or(tv, |m: f64| m.min(tv)));
        }
        best
    }

    /// Sum over unordered value pairs of `pairwise_variation`, with
    /// inadmissible pairs contributing zero.
    pub fn summed_variation(&self) -> f64 {
        let mut acc = 0.0;
        for a in 0..self.arity_j {
            for b in a + 1..self.arity_j {
                acc += self.pairwise_variation(a, b).unwrap_or(0.0);
            }
        }
        acc
    }

    /// Conditional mutual information `I(X_i; X_j | X_S)` of the normalised table.
    pub fn conditional_mutual_information(&self) -> f64 {
        let total: f64 = self.weights.iter().sum();
        if total <= 0.0 {
            return 0.0;
        }
        let xlogx = |w: f64| if w > 0.0 { w * w.ln() } else { 0.0 };
        let mut acc = 0.0;
        let (ai, aj) = (self.arity_i, self.arity_j);
        for s in 0..self.contexts() {
            let mut zs = 0.0;
            for xj in 0..aj {
                let mut row = 0.0;
                for xi in 0..ai {
                    let w = self.w(xi, xj, s);
                    acc += xlogx(w);
                    row += w;
                }
                acc -= xlogx(row);
                zs += row;
            }
            for xi in 0..ai {
                let col: f64 = (0..aj).map(|xj| self.w(xi, xj, s)).sum();
                acc -= xlogx(col);
            }
            acc += xlogx(zs);
        }
        (acc / total).max(0.0)
    }
}

fn triple_counts(samples: &SampleSet, i: usize, j: usize, s: &[usize]) -> Result<Vec<f64>> {
    check_triple(samples.p(), i, j, s)?;
    let mut vars = Vec::with_capacity(s.len() + 2);
    vars.push(i);
    vars.push(j);
    vars.extend_from_slice(s);
    let dist = empirical_joint(samples, &vars)?;
    Ok(dist.counts.iter().map(|&c| c as f64).collect())
}

/// Plug-in estimate of `I(X_i; X_j | X_S)`; unobserved configurations contribute zero.
pub fn cond_mutual_information(samples: &SampleSet, i: usize, j: usize, s: &[usize]) -> Result<f64> {
    let a = samples.alphabet_size();
    let w = triple_counts(samples, i, j, s)?;
    Ok(TripleTable::new(&w, a, a).conditional_mutual_information())
}

/// Empirical conditional variation distance `ν̂_{i|j;S}` for binary samples.
///
/// The minimum runs over conditioning configurations observed together with
/// both values of `X_j`; with no such configuration the result is 0.
pub fn emp_cond_variation(samples: &SampleSet, i: usize, j: usize, s: &[usize]) -> Result<f64> {
    if !samples.is_binary() {
        return Err(Error::InvalidArgument(
            "conditional variation distance needs a binary alphabet; use the multi-valued form".into(),
        ));
    }
    let w = triple_counts(samples, i, j, s)?;
    Ok(TripleTable::new(&w, 2, 2).pairwise_variation(1, 0).unwrap_or(0.0))
}

/// Conditional variation for finite alphabets: summed over unordered pairs
/// of values of `X_j`.
pub fn multi_valued_cond_variation(
    samples: &SampleSet,
    i: usize,
    j: usize,
    s: &[usize],
) -> Result<f64> {
    let a = samples.alphabet_size();
    let w = triple_counts(samples, i, j, s)?;
    Ok(TripleTable::new(&w, a, a).summed_variation())
}
