//! Sample-size and threshold calculations for the high-probability
//! recovery guarantee, checked against exact i.i.d. sampling.

use ising_select::graph::edit_distance;
use ising_select::ising::{exact_joint, gen_potentials};
use ising_select::learner::{
    check_threshold_feasibility, learn, pac_sample_size, pac_threshold, recoverable_edge_set, PacParams,
};
use ising_select::{Graph, LearnerConfig, Method, ParamSpec, Result, SignMode};

fn main() -> Result<()> {
    println!(
        "n for delta=0.5, eps=0.05, eta=1, p=10, P_min=0.1: {}",
        pac_sample_size(&PacParams::new(0.5, 0.05, 1, 10, 0.1, 0.0)?)?
    );

    let p = 8;
    let g = Graph::from_edges(p, (1..p).map(|v| (v - 1, v)))?;
    let model = gen_potentials(&g, &ParamSpec::new(0.5, 0.7, SignMode::Attractive, 2)?)?;
    let joint = exact_joint(&model)?;
    let eta = 1;
    let nu_max = joint.nu_max(&g, eta)?;
    let delta = 0.2;
    let params = PacParams::new(delta, 0.1, eta, p, joint.p_min(eta), nu_max)?;
    let n = pac_sample_size(&params)?;
    let xi = pac_threshold(nu_max, delta)?;
    let core = recoverable_edge_set(&model, eta, nu_max + 2.0 * delta)?;
    println!("path p={p}: nu_max {nu_max:.2e}, P_min {:.4}, n = {n}, xi = {xi:.3}", params.p_min);
    println!("edges guaranteed to be found: {core:?}");

    let samples = joint.sample(n as usize, 9)?;
    let est = learn(&samples, &LearnerConfig::new(eta, xi, Method::Cvdt)?)?;
    let contains_core = core.iter().all(|&(u, v)| est.has_edge(u, v));
    let inside_truth = est.edges().all(|(u, v)| g.has_edge(u, v));
    println!(
        "one draw: core found {contains_core}, no spurious edges {inside_truth}, distance {:.3}",
        edit_distance(&g, &est)?.normalized
    );

    let f = check_threshold_feasibility(10_000, 80, 0.1, 0.4, 4, 0.05)?;
    println!(
        "feasibility at n=1e4, p=80, J_min=0.1, alpha=0.4, gamma=4, xi=0.05: all hold {}, smallest admissible xi {:.4}",
        f.all_hold(),
        f.smallest_admissible_xi()
    );
    Ok(())
}
