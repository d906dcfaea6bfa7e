//! Correlation-decay bounds on ν_max for graph families, ensemble counts
//! and necessary sample sizes.

use ising_select::bounds::{
    ensemble_count_bounds, fano_lower_bound, necessary_samples, nu_max_bound, strong_converse_regime,
    uniform_ensemble_error_bound, Family, FamilyParams,
};
use ising_select::Result;

fn main() -> Result<()> {
    let cases = [
        FamilyParams {
            delta_max: Some(3.0),
            g: Some(12.0),
            j_max: Some(0.2),
            ..FamilyParams::new(Family::GirthBounded)
        },
        FamilyParams {
            p: Some(1e6),
            c: Some(2.0),
            l: Some(4),
            j_max: Some(0.2),
            ..FamilyParams::new(Family::ErdosRenyi)
        },
        FamilyParams {
            p: Some(1e6),
            c: Some(1.5),
            d: Some(2.0),
            l: Some(4),
            j_max: Some(0.2),
            ..FamilyParams::new(Family::SmallWorld)
        },
    ];
    for params in &cases {
        match nu_max_bound(params) {
            Ok(r) => {
                println!(
                    "{:?}: J* {:.4}, alpha {:?}, nu_max bound {:?}, probability {:?}",
                    r.family, r.j_star, r.alpha, r.nu_max_bound, r.bound_probability
                );
                for note in &r.notes {
                    println!("  note: {note}");
                }
            }
            Err(e) => println!("{:?}: {e}", params.family),
        }
    }

    let girth = FamilyParams {
        p: Some(10_000.0),
        k: Some(15_000.0),
        delta_max: Some(3.0),
        delta_min: Some(3.0),
        g: Some(5.0),
        ..FamilyParams::new(Family::GirthBounded)
    };
    let counts = ensemble_count_bounds(&girth)?;
    println!("girth-bounded count: ln|G| in [{:.1}, {:.1}]", counts.log_lower, counts.log_upper);
    match necessary_samples(&girth) {
        Ok(n) => println!("necessary samples: {n:.1}"),
        Err(e) => println!("necessary samples: {e}"),
    }

    let (exact, weak) = fano_lower_bound(80, 1.0, 2)?;
    println!("Fano, p=80, c=1: n >= {exact:.3} (weakened {weak:.3})");
    println!("strong converse at n=2, p=80, c=1: {}", strong_converse_regime(2, 80, 1.0, 0.1)?);
    println!("uniform ensemble error with n=1, p=4, 2^6 graphs: {}", uniform_ensemble_error_bound(1, 4, 6.0)?);
    Ok(())
}
