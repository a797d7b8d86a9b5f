//! Run a configured experiment and write its error curves.
//!
//! Run with `cargo run --release --example simulation_harness [config.toml] [out-dir]`.

use std::path::PathBuf;

use multileave::harness::{emit_results, summarize, Experiment, ExperimentConfig};
use multileave::Result;

fn main() -> Result<()> {
    let mut args = std::env::args().skip(1);
    let config = args
        .next()
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("configs/quick.toml"));
    let exp = Experiment::prepare(ExperimentConfig::from_path(&config)?)?;
    println!("ground truth ndcg: {:?}", exp.truth.ndcg);
    let curves = exp.run()?;

    let summary = summarize(&exp.config, &exp.truth, &curves);
    for m in &summary.methods {
        let curve: Vec<String> = m
            .mean_curve
            .iter()
            .map(|p| format!("{}:{:.3}", p.impression, p.e_bin))
            .collect();
        println!(
            "{:<5} final {:.4} ± {:.4}",
            m.method, m.mean_final_e_bin, m.std_final_e_bin
        );
        println!("      {}", curve.join(" "));
    }
    if let Some(dir) = args.next() {
        let files = emit_results(&exp.config, &exp.truth, &curves, dir)?;
        println!("wrote {} and {}", files.csv.display(), files.summary.display());
    }
    Ok(())
}
