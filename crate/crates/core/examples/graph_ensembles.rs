//! Draws one graph from each ensemble and prints basic shape statistics.

use ising_select::graph::girth;
use ising_select::{EnsembleSpec, Result};

fn main() -> Result<()> {
    let specs = [
        EnsembleSpec::cycle(80),
        EnsembleSpec::erdos_renyi(80, 1.0, 7),
        EnsembleSpec::small_world(80, 2, 1.0, 7),
        EnsembleSpec::random_regular(80, 3, 7),
    ];
    println!("{:<15} {:>5} {:>6} {:>8} {:>8} {:>6}", "ensemble", "p", "edges", "min deg", "max deg", "girth");
    for spec in &specs {
        let g = spec.generate()?;
        let girth = girth(&g).map_or("-".to_string(), |x| x.to_string());
        println!(
            "{:<15} {:>5} {:>6} {:>8} {:>8} {:>6}",
            spec.kind.label(),
            g.p(),
            g.k(),
            g.min_degree(),
            g.max_degree(),
            girth
        );
    }
    Ok(())
}
