//! Exact checks of considerateness and fidelity on small instances.
//!
//! Run with `cargo run --release --example oracle_verification`.

use std::collections::BTreeSet;

use multileave::oracle::instances::{correlated_spec, position_bias_specs};
use multileave::oracle::{
    check_considerateness, check_pareto_fidelity, check_uncorrelated_fidelity, verify_property, Property,
};
use multileave::scalar::Scalar;
use multileave::{DocumentId, Method, RankerSet, Result};

fn main() -> Result<()> {
    let rankers = RankerSet::from_ids(&[&[0, 1, 2, 3], &[1, 3, 0, 2], &[2, 0, 3, 1]])?;
    let spec = &position_bias_specs(3)[0];
    // ranker 0 places the only relevant document highest
    let relevant: BTreeSet<DocumentId> = [DocumentId(0)].into();
    for name in Method::NAMES {
        let method = Method::from_name(name)?;
        let considerate = check_considerateness(&method, &rankers, 3)?;
        let (unbiased, expected) = check_uncorrelated_fidelity(&method, &rankers, spec, 3)?;
        let pareto = check_pareto_fidelity(&method, &rankers, &relevant, &correlated_spec(3))?;
        println!(
            "{name:<5} considerate {:<5} unbiased {:<5} pareto {}",
            considerate.holds(),
            unbiased,
            pareto.holds()
        );
        if !unbiased {
            let rows: Vec<Vec<f64>> = expected
                .rows()
                .iter()
                .map(|r| r.iter().map(Scalar::to_f64).collect())
                .collect();
            println!("      E[P] under random clicks: {rows:.4?}");
        }
    }

    println!();
    for property in Property::ALL {
        for name in Method::NAMES {
            println!("{}", verify_property(&Method::from_name(name)?, property, 20, 0)?);
        }
    }
    Ok(())
}
