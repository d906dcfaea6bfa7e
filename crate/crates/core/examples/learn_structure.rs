//! Learns a small-world graph from Gibbs samples with both methods and
//! inspects the per-pair statistics.

use ising_select::graph::edit_distance;
use ising_select::ising::{gen_potentials, gibbs_sample, GibbsConfig};
use ising_select::learner::{learn_with_statistics, Method, PairRule};
use ising_select::{EnsembleSpec, LearnerConfig, ParamSpec, Result, SignMode};

fn main() -> Result<()> {
    let g = EnsembleSpec::small_world(30, 2, 1.0, 3).generate()?;
    let model = gen_potentials(&g, &ParamSpec::new(0.3, 0.4, SignMode::Mixed, 3)?)?;
    let samples = gibbs_sample(&model, 5000, &GibbsConfig::default(), 3)?;

    for (method, xi) in [(Method::Cvdt, 0.1), (Method::Cmit, 0.01)] {
        let cfg = LearnerConfig::new(2, xi, method)?;
        let (est, stats) = learn_with_statistics(&samples, &cfg)?;
        let d = edit_distance(&g, &est)?;
        println!(
            "{method} xi={xi}: {} edges estimated, {} true, edit distance {} ({:.3})",
            est.k(),
            g.k(),
            d.raw,
            d.normalized
        );
        let mut weakest = g
            .edges()
            .map(|(u, v)| (u, v, stats.entry(u, v).unwrap().statistic(method, PairRule::OrderedOr).clone()))
            .collect::<Vec<_>>();
        weakest.sort_by(|a, b| a.2.value.total_cmp(&b.2.value));
        let (u, v, m) = &weakest[0];
        println!("  weakest true edge ({u}, {v}): {:.4}, minimised at S = {:?}", m.value, m.set);
    }
    Ok(())
}
