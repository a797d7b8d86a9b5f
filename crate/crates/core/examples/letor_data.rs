//! Generate a synthetic LETOR dataset, read it back, and compute the
//! NDCG ground truth for feature rankers.
//!
//! Run with `cargo run --example letor_data`.

use multileave::data::{ground_truth_matrix, parse_letor, serialize_letor, FeatureRanker, SyntheticSpec};
use multileave::Result;

fn main() -> Result<()> {
    let spec = SyntheticSpec {
        n_queries: 50,
        n_docs_per_query: 20,
        n_features: 4,
        seed: 3,
        ..SyntheticSpec::default()
    };
    let text = serialize_letor(&spec.generate()?);
    println!("first lines:");
    for line in text.lines().take(3) {
        println!("  {line}");
    }
    let data = parse_letor(text.as_bytes())?;
    println!("{} queries, {} documents", data.queries.len(), data.num_documents());

    let rankers: Vec<FeatureRanker> = (0..4).map(FeatureRanker::descending).collect();
    let truth = ground_truth_matrix(&rankers, &data, 10)?;
    for (f, v) in truth.ndcg.iter().enumerate() {
        println!("feature {f}: strength {:.2} ndcg@10 {v:.4}", spec.strength(f));
    }
    for row in &truth.signs {
        println!("{row:?}");
    }
    Ok(())
}
