//! Desk-scale study on p = 80 graphs: mean normalized edit distance per
//! ensemble, method and sample size, with oracle threshold selection.
//!
//! Optional arguments: `attractive|mixed` and the number of trials.

use ising_select::experiment::{run_experiment, EtaOverrides, ExperimentConfig};
use ising_select::{Result, SignMode};

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let sign_mode = match args.next().as_deref() {
        Some("mixed") => SignMode::Mixed,
        _ => SignMode::Attractive,
    };
    let trials = args.next().and_then(|t| t.parse().ok()).unwrap_or(5);
    let mut cfg = ExperimentConfig::desk_scale(sign_mode, trials, 2011);
    cfg.eta = EtaOverrides {
        small_world: Some(2),
        ..EtaOverrides::default()
    };
    cfg.output_dir = Some(std::env::temp_dir().join("ising_select_desk"));
    let outcome = run_experiment(&cfg)?;
    println!("{:<14} {:<5} {:>6} {:>8} {:>8}", "graph", "method", "n", "mean", "stderr");
    for s in &outcome.summary {
        println!(
            "{:<14} {:<5} {:>6} {:>8.4} {:>8.4}",
            s.graph_kind, s.method, s.n, s.mean_distance, s.stderr
        );
    }
    println!("outputs in {}", cfg.output_dir.unwrap().display());
    Ok(())
}
