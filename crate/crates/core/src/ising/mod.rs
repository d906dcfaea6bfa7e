//! Ising models `P(x) ∝ exp(½ xᵀJx + hᵀx)` over `x ∈ {−1, +1}^p`.

mod exact;
mod gibbs;

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub use exact::{
    exact_cond_variation, exact_joint, exact_min_cond_variation, nu_max_exact, p_min_exact,
    ExactJoint, MinVariation, EXACT_MAX_NODES,
};
pub use gibbs::{gibbs_sample, GibbsConfig};

/// An Ising model whose coupling support is exactly the edge set of its graph.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingModel {
    graph: Graph,
    couplings: Vec<(usize, usize, f64)>,
    h: Vec<f64>,
    neighbors: Vec<Vec<(usize, f64)>>,
}

impl IsingModel {
    /// Couplings are keyed by unordered pair; every graph edge needs exactly
    /// one nonzero finite coupling and no coupling may sit on a non-edge.
    pub fn new<I>(graph: Graph, couplings: I, h: Vec<f64>) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, f64)>,
    {
        let p = graph.p();
        if h.len() != p {
            return Err(Error::InvalidArgument(format!(
                "h has length {} but p = {p}",
                h.len()
            )));
        }
        if h.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("node potentials must be finite".into()));
        }
        let mut list: Vec<(usize, usize, f64)> = Vec::with_capacity(graph.k());
        for (u, v, w) in couplings {
            let (a, b) = (u.min(v), u.max(v));
            if !graph.has_edge(a, b) {
                return Err(Error::InvalidArgument(format!(
                    "coupling on ({a}, {b}) which is not an edge"
                )));
            }
            if !w.is_finite() || w == 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "coupling on ({a}, {b}) must be finite and nonzero, got {w}"
                )));
            }
            list.push((a, b, w));
        }
        list.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
        if list.windows(2).any(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(Error::InvalidArgument("coupling listed twice".into()));
        }
        if list.len() != graph.k() {
            return Err(Error::InvalidArgument(format!(
                "{} couplings for {} edges",
                list.len(),
                graph.k()
            )));
        }
        let mut neighbors = vec![Vec::new(); p];
        for &(a, b, w) in &list {
            neighbors[a].push((b, w));
            neighbors[b].push((a, w));
        }
        Ok(IsingModel {
            graph,
            couplings: list,
            h,
            neighbors,
        })
    }

    /// Model with the same coupling `j` on every edge and no field.
    pub fn uniform(graph: Graph, j: f64) -> Result<Self> {
        let couplings: Vec<_> = graph.edges().map(|(u, v)| (u, v, j)).collect();
        let p = graph.p();
        Self::new(graph, couplings, vec![0.0; p])
    }

    pub fn p(&self) -> usize {
        self.graph.p()
    }

    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    /// `(i, j, J_ij)` with `i < j`, in edge order.
    pub fn couplings(&self) -> &[(usize, usize, f64)] {
        &self.couplings
    }

    pub fn coupling(&self, i: usize, j: usize) -> f64 {
        self.neighbors[i]
            .iter()
            .find(|&&(v, _)| v == j)
            .map_or(0.0, |&(_, w)| w)
    }

    pub fn h(&self) -> &[f64] {
        &self.h
    }

    pub(crate) fn weighted_neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.neighbors[i]
    }

    pub fn to_file_format(&self) -> ModelFile {
        ModelFile {
            p: self.p(),
            h: self.h.clone(),
            couplings: self.couplings.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file_format()).expect("model serialises")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: ModelFile =
            serde_json::from_str(text).map_err(|e| Error::Format(format!("model JSON: {e}")))?;
        file.into_model()
    }

    pub fn write_json(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }

    pub fn read_json(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

/// On-disk model: `{"p": int, "h": [floats], "J": [[i, j, value], ...]}` with `i < j`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub p: usize,
    pub h: Vec<f64>,
    #[serde(rename = "J")]
    pub couplings: Vec<(usize, usize, f64)>,
}

impl ModelFile {
    pub fn into_model(self) -> Result<IsingModel> {
        let graph = Graph::from_edges(self.p, self.couplings.iter().map(|&(u, v, _)| (u, v)))?;
        IsingModel::new(graph, self.couplings, self.h)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignMode {
    /// Every coupling positive.
    Attractive,
    /// Each coupling's sign is an independent fair coin.
    Mixed,
}

impl std::str::FromStr for SignMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "attractive" => Ok(SignMode::Attractive),
            "mixed" => Ok(SignMode::Mixed),
            other => Err(Error::InvalidParameter(format!("unknown sign mode `{other}`"))),
        }
    }
}

impl std::fmt::Display for SignMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SignMode::Attractive => "attractive",
            SignMode::Mixed => "mixed",
        })
    }
}

/// How edge potentials are drawn.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamSpec {
    pub j_min: f64,
    pub j_max: f64,
    pub sign_mode: SignMode,
    #[serde(default)]
    pub seed: u64,
}

impl ParamSpec {
    pub fn new(j_min: f64, j_max: f64, sign_mode: SignMode, seed: u64) -> Result<Self> {
        let spec = ParamSpec {
            j_min,
            j_max,
            sign_mode,
            seed,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.j_min > 0.0 && self.j_min <= self.j_max && self.j_max.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "need 0 < j_min <= j_max, got [{}, {}]",
                self.j_min, self.j_max
            )));
        }
        Ok(())
    }
}

/// Draws `|J_ij|` uniformly from `[j_min, j_max]` for every edge (in edge
/// order), applies the sign rule, and sets `h = 0`.
pub fn gen_potentials(graph: &Graph, spec: &ParamSpec) -> Result<IsingModel> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let couplings: Vec<(usize, usize, f64)> = graph
        .edges()
        .map(|(u, v)| {
            let magnitude = rng.gen_range(spec.j_min..=spec.j_max);
            let sign = match spec.sign_mode {
                SignMode::Attractive => 1.0,
                SignMode::Mixed => {
                    if rng.gen_bool(0.5) {
                        1.0
                    } else {
                        -1.0
                    }
                }
            };
            (u, v, sign * magnitude)
        })
        .collect();
    IsingModel::new(graph.clone(), couplings, vec![0.0; graph.p()])
}
