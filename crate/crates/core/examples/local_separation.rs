//! Checks the (η, γ) local separation property on a few graphs and shows
//! individual separators.

use ising_select::graph::{check_local_separation, gen_cycle, gen_erdos_renyi, gen_random_regular, local_separator};
use ising_select::Result;

fn main() -> Result<()> {
    let c12 = gen_cycle(12)?;
    let sep = local_separator(&c12, 0, 3, 5)?;
    println!("C12, pair (0, 3), gamma 5: separator {:?}", sep.separator);
    let sep = local_separator(&c12, 0, 3, 12)?;
    println!("C12, pair (0, 3), gamma 12: separator {:?}", sep.separator);

    let graphs = [
        ("cycle(12)", c12),
        ("erdos_renyi(200, 2)", gen_erdos_renyi(200, 2.0, 1)?),
        ("random_regular(60, 3)", gen_random_regular(60, 3, 1)?),
    ];
    for (name, g) in &graphs {
        for (eta, gamma) in [(1, 2), (2, 1), (2, 3)] {
            let r = check_local_separation(g, eta, gamma)?;
            println!(
                "{name:<22} eta={eta} gamma={gamma}: holds={} worst separator size {} at {:?}",
                r.holds, r.worst_size, r.worst_pair
            );
        }
    }
    Ok(())
}
