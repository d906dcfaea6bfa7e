use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::Graph;
use crate::error::{Error, Result};

/// Attempts made by the configuration model before giving up.
pub const RANDOM_REGULAR_MAX_ATTEMPTS: usize = 1000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    Cycle,
    ErdosRenyi,
    SmallWorld,
    RandomRegular,
}

impl EnsembleKind {
    pub fn label(self) -> &'static str {
        match self {
            EnsembleKind::Cycle => "cycle",
            EnsembleKind::ErdosRenyi => "erdos_renyi",
            EnsembleKind::SmallWorld => "small_world",
            EnsembleKind::RandomRegular => "random_regular",
        }
    }
}

impl std::fmt::Display for EnsembleKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for EnsembleKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cycle" => Ok(EnsembleKind::Cycle),
            "erdos_renyi" | "er" => Ok(EnsembleKind::ErdosRenyi),
            "small_world" | "ws" => Ok(EnsembleKind::SmallWorld),
            "random_regular" | "regular" => Ok(EnsembleKind::RandomRegular),
            other => Err(Error::InvalidParameter(format!("unknown ensemble `{other}`"))),
        }
    }
}

/// A graph ensemble together with its parameters and seed.
///
/// Parameters a kind does not use are ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub p: usize,
    /// Average degree of the Erdős–Rényi part.
    #[serde(default)]
    pub c: f64,
    /// Degree of the ring lattice (small-world).
    #[serde(default)]
    pub d: usize,
    /// Degree (random regular).
    #[serde(default)]
    pub delta: usize,
    #[serde(default)]
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn cycle(p: usize) -> Self {
        EnsembleSpec {
            kind: EnsembleKind::Cycle,
            p,
            c: 0.0,
            d: 0,
            delta: 0,
            seed: 0,
        }
    }

    pub fn erdos_renyi(p: usize, c: f64, seed: u64) -> Self {
        EnsembleSpec {
            kind: EnsembleKind::ErdosRenyi,
            c,
            seed,
            ..Self::cycle(p)
        }
    }

    pub fn small_world(p: usize, d: usize, c: f64, seed: u64) -> Self {
        EnsembleSpec {
            kind: EnsembleKind::SmallWorld,
            c,
            d,
            seed,
            ..Self::cycle(p)
        }
    }

    pub fn random_regular(p: usize, delta: usize, seed: u64) -> Self {
        EnsembleSpec {
            kind: EnsembleKind::RandomRegular,
            delta,
            seed,
            ..Self::cycle(p)
        }
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        EnsembleSpec {
            seed,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            EnsembleKind::Cycle => check_cycle(self.p),
            EnsembleKind::ErdosRenyi => check_avg_degree(self.p, self.c),
            EnsembleKind::SmallWorld => {
                check_ring(self.p, self.d)?;
                check_avg_degree(self.p, self.c)
            }
            EnsembleKind::RandomRegular => check_regular(self.p, self.delta),
        }
    }

    pub fn generate(&self) -> Result<Graph> {
        match self.kind {
            EnsembleKind::Cycle => gen_cycle(self.p),
            EnsembleKind::ErdosRenyi => gen_erdos_renyi(self.p, self.c, self.seed),
            EnsembleKind::SmallWorld => gen_small_world(self.p, self.d, self.c, self.seed),
            EnsembleKind::RandomRegular => gen_random_regular(self.p, self.delta, self.seed),
        }
    }
}

fn check_cycle(p: usize) -> Result<()> {
    if p < 3 {
        return Err(Error::InvalidParameter(format!("cycle needs p >= 3, got {p}")));
    }
    Ok(())
}

fn check_avg_degree(p: usize, c: f64) -> Result<()> {
    if !(c >= 0.0 && c <= p as f64) {
        return Err(Error::InvalidParameter(format!(
            "average degree c = {c} must lie in [0, p = {p}]"
        )));
    }
    Ok(())
}

fn check_ring(p: usize, d: usize) -> Result<()> {
    if p < 3 {
        return Err(Error::InvalidParameter(format!("small-world needs p >= 3, got {p}")));
    }
    if d == 0 || d % 2 != 0 || d >= p {
        return Err(Error::InvalidParameter(format!(
            "ring degree d = {d} must be even, positive and below p = {p}"
        )));
    }
    Ok(())
}

fn check_regular(p: usize, delta: usize) -> Result<()> {
    if delta >= p {
        return Err(Error::InvalidParameter(format!(
            "degree {delta} must be below p = {p}"
        )));
    }
    if (p * delta) % 2 != 0 {
        return Err(Error::InvalidParameter(format!(
            "p * delta = {} must be even",
            p * delta
        )));
    }
    Ok(())
}

/// The cycle `0 − 1 − … − (p−1) − 0`.
pub fn gen_cycle(p: usize) -> Result<Graph> {
    check_cycle(p)?;
    let mut g = Graph::empty(p);
    for v in 0..p {
        g.insert_edge(v, (v + 1) % p);
    }
    Ok(g)
}

fn add_bernoulli_edges(g: &mut Graph, prob: f64, rng: &mut ChaCha8Rng) {
    let p = g.p();
    for u in 0..p {
        for v in u + 1..p {
            // one draw per pair, in lexicographic order, whether or not the edge exists
            if rng.gen::<f64>() < prob {
                g.insert_edge(u, v);
            }
        }
    }
}

/// Erdős–Rényi graph: each pair independently with probability `c / p`.
pub fn gen_erdos_renyi(p: usize, c: f64, seed: u64) -> Result<Graph> {
    check_avg_degree(p, c)?;
    let mut g = Graph::empty(p);
    if p == 0 {
        return Ok(g);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    add_bernoulli_edges(&mut g, c / p as f64, &mut rng);
    Ok(g)
}

/// Ring lattice of degree `d` (d/2 neighbours per side) overlaid with an
/// independent Erdős–Rényi graph of average degree `c`.
pub fn gen_small_world(p: usize, d: usize, c: f64, seed: u64) -> Result<Graph> {
    check_ring(p, d)?;
    check_avg_degree(p, c)?;
    let mut g = Graph::empty(p);
    for v in 0..p {
        for offset in 1..=d / 2 {
            g.insert_edge(v, (v + offset) % p);
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    add_bernoulli_edges(&mut g, c / p as f64, &mut rng);
    Ok(g)
}

/// Uniform simple `delta`-regular graph by the configuration model with
/// rejection of self-loops and repeated pairs.
pub fn gen_random_regular(p: usize, delta: usize, seed: u64) -> Result<Graph> {
    check_regular(p, delta)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut stubs: Vec<usize> = Vec::with_capacity(p * delta);
    'attempt: for _ in 0..RANDOM_REGULAR_MAX_ATTEMPTS {
        stubs.clear();
        stubs.extend((0..p).flat_map(|v| std::iter::repeat(v).take(delta)));
        stubs.shuffle(&mut rng);
        let mut g = Graph::empty(p);
        for pair in stubs.chunks_exact(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || !g.insert_edge(u, v) {
                continue 'attempt;
            }
        }
        return Ok(g);
    }
    Err(Error::GenerationFailure {
        attempts: RANDOM_REGULAR_MAX_ATTEMPTS,
        reason: format!("no simple {delta}-regular pairing found on {p} nodes"),
    })
}
