//! Randomized trials of the structural identities. Each trial returns a
//! description of the first mismatch it finds.

use nalgebra::DMatrix;
use rand::seq::SliceRandom;
use rand::Rng;
use seriation::cut::{cut_decomposition, CutMatrix};
use seriation::objective::{adjacent_swap_delta, laplacian_form, two_sum_objective, variance, WeightVector};
use seriation::permutation::{for_each_permutation, Permutation};
use seriation::structure::{is_q_matrix, is_r_matrix, square_similarity, RobinsonCheck};
use seriation::SimilarityMatrix;

use super::{brute_force_minimizers, direct_two_sum};

pub type Trial = fn(&mut rand_chacha::ChaCha8Rng) -> Result<(), String>;

pub const TRIALS: [(&str, Trial); 6] = [
    ("variance identity", variance_identity),
    ("switching formula", switching_formula),
    ("contiguity", contiguity),
    ("cut decomposition", cut_exactness),
    ("q to r squaring", q_to_r),
    ("kendall equivalence", kendall_equivalence),
];

pub const IDENTITY_TOL: f64 = 1e-10;

fn random_y<R: Rng>(n: usize, rng: &mut R) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(-2.0..2.0)).collect()
}

/// Two-sum cost of one CUT block equals the squared block size times the
/// variance of the values inside it.
pub fn variance_identity<R: Rng>(rng: &mut R) -> Result<(), String> {
    let n = rng.random_range(1..=12);
    let u = rng.random_range(0..n);
    let v = rng.random_range(u..n);
    let y = random_y(n, rng);
    let a = SimilarityMatrix::new(CutMatrix::new(u, v, 1.0).unwrap().dense(n)).unwrap();
    let f = two_sum_objective(&a, &Permutation::identity(n), &WeightVector::new(y.clone())).unwrap();
    let k = (v - u + 1) as f64;
    let expected = k * k * variance(&y[u..=v]);
    let direct = direct_two_sum(a.entries(), &y);
    if (f - expected).abs() > IDENTITY_TOL || (f - direct).abs() > IDENTITY_TOL {
        return Err(format!("n={n} CUT({u},{v}): {f} vs {expected} (direct {direct})"));
    }
    Ok(())
}

/// Closed-form change under an adjacent swap against recomputation.
pub fn switching_formula<R: Rng>(rng: &mut R) -> Result<(), String> {
    let n = rng.random_range(2..=12);
    let mut m = DMatrix::from_fn(n, n, |_, _| rng.random_range(0.0..1.0));
    m = (&m + m.transpose()) * 0.5;
    m.fill_diagonal(0.0);
    let a = SimilarityMatrix::new(m).unwrap();
    let y = random_y(n, rng);
    let j = rng.random_range(0..n - 1);
    let mut z = y.clone();
    z.swap(j, j + 1);
    let direct = laplacian_form(a.entries(), &y) - laplacian_form(a.entries(), &z);
    let formula = adjacent_swap_delta(&a, &y, j).unwrap();
    if (direct - formula).abs() > IDENTITY_TOL {
        return Err(format!("n={n} j={j}: formula {formula} vs direct {direct}"));
    }
    Ok(())
}

/// Every 2-SUM minimizer over a single CUT gives the block items a run of
/// consecutive positions, hence an interval of the sorted values.
pub fn contiguity<R: Rng>(rng: &mut R) -> Result<(), String> {
    let n = rng.random_range(2..=8);
    let u = rng.random_range(0..n);
    let v = rng.random_range(u..n);
    let m = CutMatrix::new(u, v, 1.0).unwrap().dense(n);
    let (_, minimizers) = brute_force_minimizers(&m, 1e-12);
    for order in minimizers {
        let mut positions: Vec<usize> = (0..n).filter(|&k| (u..=v).contains(&order[k])).collect();
        positions.sort_unstable();
        if positions.last().unwrap() - positions[0] != v - u {
            return Err(format!("n={n} CUT({u},{v}): minimizer {order:?} splits the block"));
        }
    }
    Ok(())
}

fn random_unimodal<R: Rng>(n: usize, max: u32, rng: &mut R) -> Vec<f64> {
    let peak = rng.random_range(0..n);
    let mut values: Vec<u32> = (0..n).map(|_| rng.random_range(0..=max)).collect();
    values[..=peak].sort_unstable();
    values[peak..].sort_unstable_by(|a, b| b.cmp(a));
    values.into_iter().map(f64::from).collect()
}

/// Deflation reproduces `min(a_i, a_j)` exactly on integer input.
pub fn cut_exactness<R: Rng>(rng: &mut R) -> Result<(), String> {
    let n = rng.random_range(0..=15);
    let a = random_unimodal(n.max(1), 9, rng);
    let a = &a[..n];
    let d = cut_decomposition(a).map_err(|e| format!("{a:?}: {e}"))?;
    let target = DMatrix::from_fn(n, n, |i, j| a[i].min(a[j]));
    if d.reconstruct(n) != target || d.terms.len() > n {
        return Err(format!("{a:?}: {} terms, residual {}", d.terms.len(), d.residual_norm));
    }
    Ok(())
}

fn random_q<R: Rng>(n: usize, m: usize, rng: &mut R) -> DMatrix<f64> {
    let mut c = DMatrix::zeros(n, m);
    for j in 0..m {
        let col = random_unimodal(n, 4, rng);
        c.set_column(j, &nalgebra::DVector::from_vec(col));
    }
    c
}

/// The circular square of a Q-matrix is Robinson.
pub fn q_to_r<R: Rng>(rng: &mut R) -> Result<(), String> {
    let n = rng.random_range(1..=10);
    let m = rng.random_range(1..=8);
    let c = random_q(n, m, rng);
    let audit = is_r_matrix(&square_similarity(&c).unwrap(), RobinsonCheck::default());
    if !audit.is_robinson {
        return Err(format!("{n}x{m} Q-matrix squares to {} violations: {c}", audit.violations));
    }
    Ok(())
}

/// For a pre-Q matrix, a row order makes it Q exactly when the same order
/// makes its circular square Robinson. Checked over all row orders.
pub fn kendall_equivalence<R: Rng>(rng: &mut R) -> Result<(), String> {
    let n = rng.random_range(1..=7);
    let m = rng.random_range(1..=5);
    let mut shuffle: Vec<usize> = (0..n).collect();
    shuffle.shuffle(rng);
    let c = Permutation::new(shuffle).unwrap().reorder_rows(&random_q(n, m, rng));
    let a = square_similarity(&c).unwrap();
    let mut failure = None;
    for_each_permutation(n, |order| {
        if failure.is_some() {
            return;
        }
        let p = Permutation::new(order.to_vec()).unwrap();
        let q = is_q_matrix(&p.reorder_rows(&c));
        let r = is_r_matrix(&a.reordered(&p).unwrap(), RobinsonCheck::default()).is_robinson;
        if q != r {
            failure = Some(format!("order {order:?}: Q {q}, R {r} for {c}"));
        }
    });
    failure.map_or(Ok(()), Err)
}
