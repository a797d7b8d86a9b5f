//! Run every method on the same impressions and compare their inferences.
//!
//! Run with `cargo run --example baselines_comparison`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use multileave::clicksim::{simulate_clicks, ClickModel};
use multileave::data::{ranker_set, FeatureRanker, SyntheticSpec};
use multileave::{Method, PreferenceMatrix, QueryContext, Result};

fn main() -> Result<()> {
    let data = SyntheticSpec {
        n_queries: 20,
        n_docs_per_query: 15,
        n_features: 3,
        ..SyntheticSpec::default()
    }
    .generate()?;
    let rankers: Vec<FeatureRanker> = (0..3).map(FeatureRanker::descending).collect();
    let model = ClickModel::informational();
    let mut rng = ChaCha8Rng::seed_from_u64(5);

    for name in Method::NAMES {
        let method = Method::from_name(name)?;
        let mut total = PreferenceMatrix::<f64>::zeros(3);
        for t in 0..2000 {
            let query = &data.queries[t % data.queries.len()];
            let ctx = QueryContext::new(ranker_set(&rankers, query));
            let list = method.multileave(&ctx, 5, &mut rng)?;
            let clicks = simulate_clicks(&model, &list, query, &mut rng)?;
            if clicks.any() {
                total.merge(&method.infer(&ctx, &list, &clicks, &mut rng)?)?;
            }
        }
        println!(
            "{name:<5} P[0,1]={:>9.2}  P[0,2]={:>9.2}  P[1,2]={:>9.2}",
            total.get(0, 1),
            total.get(0, 2),
            total.get(1, 2)
        );
    }
    Ok(())
}
