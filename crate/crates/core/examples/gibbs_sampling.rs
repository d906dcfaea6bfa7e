//! Compares Gibbs estimates of pair correlations with exact values and
//! writes the samples in both file formats.

use ising_select::graph::gen_cycle;
use ising_select::ising::{exact_joint, gibbs_sample, GibbsConfig};
use ising_select::{IsingModel, Result, SampleSet};

fn main() -> Result<()> {
    let model = IsingModel::uniform(gen_cycle(10)?, 0.3)?;
    let exact = exact_joint(&model)?;
    let n = 20_000;
    let samples = gibbs_sample(&model, n, &GibbsConfig::default(), 42)?;
    for (i, j) in [(0, 1), (0, 2), (0, 5)] {
        let est = samples
            .rows()
            .map(|r| if r[i] == r[j] { 1.0 } else { -1.0 })
            .sum::<f64>()
            / n as f64;
        println!("E[x{i} x{j}]: gibbs {est:.4}, exact {:.4}", exact.correlation(i, j));
    }

    let dir = std::env::temp_dir();
    let csv = dir.join("ising_select_samples.csv");
    let bin = dir.join("ising_select_samples.bin");
    samples.save(&csv)?;
    samples.save(&bin)?;
    assert_eq!(SampleSet::load(&csv)?, samples);
    assert_eq!(SampleSet::load(&bin)?, samples);
    println!(
        "wrote {} ({} bytes) and {} ({} bytes)",
        csv.display(),
        std::fs::metadata(&csv).map(|m| m.len()).unwrap_or(0),
        bin.display(),
        std::fs::metadata(&bin).map(|m| m.len()).unwrap_or(0)
    );
    Ok(())
}
