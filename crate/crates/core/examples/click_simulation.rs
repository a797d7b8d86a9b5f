//! Compare simulated click rates with the exact cascade distribution.
//!
//! Run with `cargo run --example click_simulation`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use multileave::clicksim::{builtin_click_models, click_distribution, simulate_clicks};
use multileave::data::{Document, QueryData};
use multileave::{DocumentId, MultileavedList, Result};

fn main() -> Result<()> {
    let grades = [4u8, 0, 2, 1];
    let query = QueryData {
        query_id: "demo".into(),
        documents: grades
            .iter()
            .enumerate()
            .map(|(i, &relevance)| Document {
                id: DocumentId(i as u32),
                features: vec![],
                relevance,
                comment: None,
            })
            .collect(),
    };
    let list = MultileavedList::new((0..4).map(DocumentId).collect());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let draws = 100_000;

    for model in builtin_click_models() {
        let exact = click_distribution::<f64>(&model, &list, &query)?;
        let mut exact_rate = [0.0; 4];
        for (c, p) in &exact {
            for (i, &clicked) in c.0.iter().enumerate() {
                if clicked {
                    exact_rate[i] += p;
                }
            }
        }
        let mut counts = [0usize; 4];
        for _ in 0..draws {
            let c = simulate_clicks(&model, &list, &query, &mut rng)?;
            for (i, &clicked) in c.0.iter().enumerate() {
                counts[i] += clicked as usize;
            }
        }
        println!("{}", model.name);
        for i in 0..4 {
            println!(
                "  rank {} grade {}: exact {:.4} simulated {:.4}",
                i + 1,
                grades[i],
                exact_rate[i],
                counts[i] as f64 / draws as f64
            );
        }
    }
    Ok(())
}
