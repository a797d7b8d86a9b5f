//! Build PPM choice sets, sample a list, and infer preferences from clicks.
//!
//! Run with `cargo run --example ppm_basics`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use multileave::ppm::{build_choice_index, construct_with_index, infer_ppm, pair_weight};
use multileave::{extract_click_preferences, ClickVector, RankerSet, Result};

fn main() -> Result<()> {
    let rankers = RankerSet::from_ids(&[&[0, 1, 2, 3, 4], &[2, 0, 4, 1, 3], &[3, 2, 1, 0, 4]])?;
    let index = build_choice_index(&rankers);
    for i in 1..=3 {
        let omega: Vec<String> = index.omega(i).iter().map(|d| d.to_string()).collect();
        println!("choice set at rank {i}: {{{}}}", omega.join(", "));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(42);
    let list = construct_with_index(&index, 4, &mut rng)?;
    let shown: Vec<String> = list.displayed.iter().map(|d| d.to_string()).collect();
    println!(
        "displayed: {}  considerate: {}",
        shown.join(" "),
        list.is_considerate(&rankers)
    );

    let clicks = ClickVector::at_ranks(4, &[3]);
    for pair in extract_click_preferences(&list, &clicks) {
        println!(
            "{} over {} with weight {:.4}",
            pair.winner,
            pair.loser,
            pair_weight(pair.winner, pair.loser, &index)?
        );
    }
    let p = infer_ppm::<f64>(&rankers, &list, &clicks, &index)?;
    for row in p.rows() {
        let cells: Vec<String> = row.iter().map(|v| format!("{v:>7.3}")).collect();
        println!("{}", cells.join(" "));
    }
    Ok(())
}
