//! The ten acceptance criteria over `corpus/`, one line each.

use std::path::PathBuf;

use sctaut::corpus::{run_corpus, CorpusConfig, CRITERIA};

#[test]
fn acceptance() {
    let cfg = CorpusConfig {
        root: PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../corpus"),
        seed: 0,
    };
    let outcomes = run_corpus(&cfg).expect("corpus runs");
    assert_eq!(outcomes.len(), CRITERIA);
    for o in &outcomes {
        println!("{o}");
    }
    let failed: Vec<usize> = outcomes.iter().filter(|o| !o.passed()).map(|o| o.id).collect();
    println!("acceptance: {}/{} passed", CRITERIA - failed.len(), CRITERIA);
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
