mod common;

use common::lemmas::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn run(trial: Trial, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..1000 {
        if let Err(e) = trial(&mut rng) {
            panic!("trial {k}: {e}");
        }
    }
}

#[test]
fn variance_of_cut_blocks() {
    run(variance_identity, 1);
}

#[test]
fn adjacent_switch_formula() {
    run(switching_formula, 2);
}

#[test]
fn cut_minimizers_are_contiguous() {
    run(contiguity, 3);
}

#[test]
fn cut_decomposition_is_exact() {
    run(cut_exactness, 4);
}

#[test]
fn circular_square_of_q_is_r() {
    run(q_to_r, 5);
}

#[test]
fn q_order_iff_r_order() {
    run(kendall_equivalence, 6);
}
