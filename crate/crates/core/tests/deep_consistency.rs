//! Enumeration/count agreement past the depths the acceptance suite sweeps,
//! plus an opt-in full-path verification up to the oracle cap.
//!
//! Run the expensive gate with `cargo test --release -- --ignored`.

use num_bigint::BigUint;

use tripath::lattice::Level;
use tripath::massshift::{count_total, enumerate_unique};
use tripath::oracle::oracle_classes;

#[test]
fn enumeration_matches_counts_past_the_oracle_range() {
    for (depth, kstar) in [(15usize, 0), (16, 5), (14, -9), (17, -1)] {
        let emitted = enumerate_unique(depth, kstar).unwrap().count();
        let counted = count_total(depth, kstar).unwrap().total;
        assert_eq!(BigUint::from(emitted), counted, "depth {depth} k* {kstar}");
    }
}

#[test]
fn mirrored_enumerations_are_key_mirrors() {
    for (depth, kstar) in [(12usize, 3), (13, 7), (15, 1)] {
        let pos: Vec<_> = enumerate_unique(depth, kstar).unwrap().collect();
        let neg: Vec<_> = enumerate_unique(depth, -(kstar as Level)).unwrap().collect();
        assert_eq!(pos.len(), neg.len());
        for (p, n) in pos.iter().zip(&neg) {
            assert_eq!(p.tuple.mirror(), n.tuple);
            assert_eq!((p.stage, p.m), (n.stage, n.m));
        }
    }
}

#[test]
#[ignore = "walks 3^D paths; minutes in debug, seconds in release"]
fn full_oracle_verification_to_the_cap() {
    for depth in 11..=14usize {
        for kstar in [0, 1, depth as Level / 2, -(depth as Level) + 2] {
            let classes = oracle_classes(depth, kstar).unwrap();
            let counted = count_total(depth, kstar).unwrap().total;
            assert_eq!(
                counted,
                BigUint::from(classes.len()),
                "depth {depth} k* {kstar}"
            );
            let mut emitted = 0usize;
            for item in enumerate_unique(depth, kstar).unwrap() {
                assert!(classes.contains(&item.tuple));
                emitted += 1;
            }
            assert_eq!(emitted, classes.len());
        }
    }
}
