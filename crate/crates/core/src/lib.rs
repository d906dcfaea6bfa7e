//! Structure estimation for Ising graphical models.
//!
//! The crate learns the graph of a pairwise binary Markov random field from
//! i.i.d. samples by thresholding either the empirical *conditional variation
//! distance* (CVDT) or the empirical *conditional mutual information* (CMIT)
//! of every node pair, minimised over small conditioning sets.
//!
//! Around the learners sit the pieces needed to study them end to end:
//!
//! - [`graph`]: graphs, random ensembles (cycle, Erdős–Rényi, small-world,
//!   random regular), girth, γ-local separators and edit distances.
//! - [`ising`]: Ising models, potential generation, exact inference for
//!   small models and a systematic-scan Gibbs sampler.
//! - [`samples`]: sample sets and their CSV / bit-packed file formats.
//! - [`stats`]: empirical distributions and the distance and information
//!   functionals the learners are built on.
//! - [`learner`]: CVDT and CMIT, pair-statistic caching, threshold
//!   feasibility and PAC sample sizes.
//! - [`bounds`]: per-family coupling thresholds, ν_max bounds and
//!   necessary-sample (converse) calculators.
//! - [`experiment`]: the synthetic benchmark pipeline with threshold sweeping
//!   and CSV output.
//!
//! Runnable walkthroughs for each capability live in `examples/`.

pub mod bounds;
pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod experiment;
pub mod graph;
pub mod ising;
pub mod learner;
pub mod samples;
pub mod stats;

pub use error::{Error, Result};
pub use graph::{EnsembleKind, EnsembleSpec, Graph};
pub use ising::{ExactJoint, IsingModel, ParamSpec, SignMode};
pub use learner::{LearnerConfig, Method, PairRule};
pub use samples::SampleSet;
