//! One PASS/FAIL line per acceptance criterion. Tolerances live in
//! `hexcut::selfcheck` as named constants.

use hexcut::selfcheck::{self, NAMES};

#[test]
fn acceptance() {
    let mut failed = Vec::new();
    for id in 1..=NAMES.len() as u8 {
        let c = selfcheck::run(id);
        println!("{c}");
        if !c.passed {
            failed.push(c.name);
        }
    }
    println!("rng: {}", hexcut::sampler::RNG_NAME);
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
