//! Sweeps ξ over a geometric grid and prints the edit-distance curve.

use ising_select::experiment::{sweep_threshold, ThresholdGrid};
use ising_select::ising::{gen_potentials, gibbs_sample, GibbsConfig};
use ising_select::{EnsembleSpec, Method, PairRule, ParamSpec, Result, SignMode};

fn main() -> Result<()> {
    let g = EnsembleSpec::erdos_renyi(40, 1.0, 5).generate()?;
    let model = gen_potentials(&g, &ParamSpec::new(0.1, 0.2, SignMode::Attractive, 5)?)?;
    let grid = ThresholdGrid::Geometric {
        min: 1e-3,
        max: 1.0,
        count: 20,
    }
    .values()?;
    for n in [1000, 4000, 10_000] {
        let samples = gibbs_sample(&model, n, &GibbsConfig::default(), 5)?;
        let sweep = sweep_threshold(&samples, &g, Method::Cvdt, 2, &grid, PairRule::OrderedOr)?;
        println!("n = {n}: best xi {} with normalized distance {:.3}", sweep.best_xi, sweep.best_distance.normalized);
        for pt in &sweep.curve {
            println!("  xi {:<10} edges {:>4} distance {:.3}", pt.xi, pt.edges, pt.distance.normalized);
        }
    }
    Ok(())
}
