//! Toy shotgun assembly: spectral pre-order, contigs cut from windows of
//! that order and audited for Robinson structure, contigs ordered by the
//! relaxation under mate-pair constraints, then the reads from rejected
//! contigs placed next to their mates.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::reads::{read_similarity, ReadSet};
use crate::error::{Result, SeriationError};
use crate::permutation::Permutation;
use crate::pipeline::{seriate_qp, QpOptions};
use crate::relax::ConstraintSpec;
use crate::similarity::SimilarityMatrix;
use crate::spectral::spectral_order_by_component;
use crate::structure::{is_r_matrix, RobinsonCheck};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssemblyConfig {
    /// Reads per window of the spectral pre-order.
    pub window: usize,
    /// Largest Robinson violation density of a good contig.
    pub audit_threshold: f64,
    /// Smaller window components are treated as bad.
    pub min_contig: usize,
    /// Solver settings for the contig-level relaxation.
    pub qp: QpOptions,
}

impl Default for AssemblyConfig {
    fn default() -> Self {
        Self { window: 100, audit_threshold: 0.05, min_contig: 5, qp: QpOptions::default() }
    }
}

/// Reads of one contig in assembled order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Contig {
    pub reads: Vec<usize>,
    pub violation_density: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssemblyReport {
    pub windows: usize,
    pub good_contigs: usize,
    /// Reads left outside good contigs and placed afterwards.
    pub bad_reads: usize,
    /// Bad reads without a placed mate, put next to their most similar read.
    pub unplaced_reads: usize,
    pub mate_constraints: usize,
    /// Estimated spacing between consecutive read starts, in base pairs.
    pub read_spacing_bp: f64,
    pub qp_iterations: usize,
    pub used_qp: bool,
}

/// Assembles `reads` and returns the read order, the good contigs in
/// order, and a summary.
pub fn assemble(reads: &ReadSet, cfg: &AssemblyConfig) -> Result<(Permutation, Vec<Contig>, AssemblyReport)> {
    let n = reads.len();
    if n == 0 {
        return Err(SeriationError::InvalidParameter("no reads".into()));
    }
    if cfg.window < 2 {
        return Err(SeriationError::InvalidParameter("window must hold at least two reads".into()));
    }
    let a = read_similarity(reads)?;
    let pre = spectral_order_by_component(&a)?;

    // contigs: connected, Robinson-like components of each window
    let mut contigs = Vec::new();
    let mut bad = Vec::new();
    let windows = pre.order().chunks(cfg.window).count();
    for window in pre.order().chunks(cfg.window) {
        let sub = a.submatrix(window);
        for members in sub.components() {
            let items: Vec<usize> = members.iter().map(|&k| window[k]).collect();
            if items.len() < cfg.min_contig.max(2) {
                bad.extend(items);
                continue;
            }
            let local = a.submatrix(&items);
            let order = spectral_order_by_component(&local)?;
            let ordered: Vec<usize> = order.order().iter().map(|&k| items[k]).collect();
            let audit = is_r_matrix(&local.reordered(&order)?, RobinsonCheck::default());
            let density = audit.violation_density();
            if density <= cfg.audit_threshold {
                contigs.push(Contig { reads: ordered, violation_density: density });
            } else {
                bad.extend(ordered);
            }
        }
    }
    let contigs = agglomerate(&a, contigs, cfg.audit_threshold);
    let spacing = read_spacing(reads, &a, &contigs);

    let mut used_qp = false;
    let mut qp_iterations = 0;
    let mut mate_constraints = 0;
    let contig_order: Vec<usize> = if contigs.len() < 2 {
        (0..contigs.len()).collect()
    } else {
        let s = contig_similarity(&a, &contigs)?;
        let specs = mate_specs(reads, &contigs);
        mate_constraints = specs.len();
        if specs.is_empty() {
            spectral_order_by_component(&s)?.into_order()
        } else {
            used_qp = true;
            let out = seriate_qp(&s, &specs, &cfg.qp)?;
            qp_iterations = out.report.iterations;
            out.permutation.into_order()
        }
    };
    let mut ordered: Vec<Contig> = contig_order.iter().map(|&c| contigs[c].clone()).collect();
    orient_contigs(reads, &a, &mut ordered);

    let (order, unplaced) = place_bad_reads(reads, &a, &ordered, &bad, spacing);
    let report = AssemblyReport {
        windows,
        good_contigs: ordered.len(),
        bad_reads: bad.len(),
        unplaced_reads: unplaced,
        mate_constraints,
        read_spacing_bp: spacing,
        qp_iterations,
        used_qp,
    };
    Ok((Permutation::new(order)?, ordered, report))
}

const BOUNDARY: usize = 30;

/// Repeatedly joins the two contigs with the strongest end-to-end overlap
/// whose junction, `BOUNDARY` reads on each side, still audits as
/// Robinson-like.
fn agglomerate(a: &SimilarityMatrix, mut contigs: Vec<Contig>, threshold: f64) -> Vec<Contig> {
    loop {
        let mut best: Option<(f64, usize, usize, Vec<usize>)> = None;
        for x in 0..contigs.len() {
            for y in (x + 1)..contigs.len() {
                if let Some((score, joined)) = best_junction(a, &contigs[x].reads, &contigs[y].reads, threshold) {
                    if best.as_ref().is_none_or(|b| score > b.0) {
                        best = Some((score, x, y, joined));
                    }
                }
            }
        }
        let Some((_, x, y, joined)) = best else { return contigs };
        let density = is_r_matrix(&a.submatrix(&joined), RobinsonCheck::default()).violation_density();
        contigs.remove(y);
        contigs[x] = Contig { reads: joined, violation_density: density };
    }
}

fn best_junction(a: &SimilarityMatrix, x: &[usize], y: &[usize], threshold: f64) -> Option<(f64, Vec<usize>)> {
    let rev = |v: &[usize]| v.iter().rev().copied().collect::<Vec<_>>();
    let (xr, yr) = (rev(x), rev(y));
    let mut best: Option<(f64, Vec<usize>)> = None;
    for (first, second) in [(x, y), (x, &yr[..]), (&xr[..], y), (y, x)] {
        let tail = &first[first.len().saturating_sub(BOUNDARY)..];
        let head = &second[..second.len().min(BOUNDARY)];
        let score: f64 = tail.iter().map(|&r| head.iter().map(|&q| a.get(r, q)).sum::<f64>()).sum();
        if score <= 0.0 || best.as_ref().is_some_and(|b| b.0 >= score) {
            continue;
        }
        let junction: Vec<usize> = tail.iter().chain(head).copied().collect();
        let audit = is_r_matrix(&a.submatrix(&junction), RobinsonCheck::default());
        if audit.violation_density() <= threshold {
            best = Some((score, first.iter().chain(second).copied().collect()));
        }
    }
    best
}

/// Mean start-to-start distance of neighbouring reads in good contigs,
/// from their shared k-mer counts: `Δ = L − k + 1 − shared`.
fn read_spacing(reads: &ReadSet, a: &SimilarityMatrix, contigs: &[Contig]) -> f64 {
    let (mut total, mut count) = (0.0, 0usize);
    for c in contigs {
        for w in c.reads.windows(2) {
            let len = reads.reads[w[0]].sequence.len().min(reads.reads[w[1]].sequence.len());
            let full = (len + 1 - reads.k) as f64;
            let shared = a.get(w[0], w[1]);
            if shared > 0.0 {
                total += (full - shared).max(0.0);
                count += 1;
            }
        }
    }
    if count == 0 || total == 0.0 {
        1.0
    } else {
        total / count as f64
    }
}

fn contig_similarity(a: &SimilarityMatrix, contigs: &[Contig]) -> Result<SimilarityMatrix> {
    let m = contigs.len();
    let mut owner = HashMap::new();
    for (c, contig) in contigs.iter().enumerate() {
        for &r in &contig.reads {
            owner.insert(r, c);
        }
    }
    let mut s = nalgebra::DMatrix::zeros(m, m);
    for (&r, &x) in &owner {
        for (&q, &y) in &owner {
            if x != y {
                s[(x, y)] += a.get(r, q);
            }
        }
    }
    SimilarityMatrix::new(s)
}

/// Majority vote over mate pairs spanning two contigs: the contig holding
/// the upstream mate goes first. Ties are dropped.
fn mate_specs(reads: &ReadSet, contigs: &[Contig]) -> Vec<ConstraintSpec> {
    let mut owner = HashMap::new();
    for (c, contig) in contigs.iter().enumerate() {
        for &r in &contig.reads {
            owner.insert(r, c);
        }
    }
    let mut votes: HashMap<(usize, usize), i64> = HashMap::new();
    for m in &reads.mate_pairs {
        if let (Some(&x), Some(&y)) = (owner.get(&m.first), owner.get(&m.second)) {
            if x != y {
                let key = (x.min(y), x.max(y));
                *votes.entry(key).or_default() += if x < y { 1 } else { -1 };
            }
        }
    }
    let mut specs: Vec<ConstraintSpec> = votes
        .into_iter()
        .filter(|(_, v)| *v != 0)
        .map(
            |((x, y), v)| {
                if v > 0 {
                    ConstraintSpec::Order { i: x, j: y }
                } else {
                    ConstraintSpec::Order { i: y, j: x }
                }
            },
        )
        .collect();
    specs.sort_by_key(|s| match *s {
        ConstraintSpec::Order { i, j } => (i, j),
        ConstraintSpec::Distance { i, j, .. } => (i, j),
    });
    drop_cycles(contigs.len(), specs)
}

/// Keeps a spec only if it does not close a cycle with the specs kept so
/// far, so the order constraints stay satisfiable.
fn drop_cycles(m: usize, specs: Vec<ConstraintSpec>) -> Vec<ConstraintSpec> {
    let mut next: Vec<Vec<usize>> = vec![Vec::new(); m];
    let mut kept = Vec::new();
    for spec in specs {
        let ConstraintSpec::Order { i, j } = spec else { continue };
        if reaches(&next, j, i) {
            continue;
        }
        next[i].push(j);
        kept.push(spec);
    }
    kept
}

fn reaches(next: &[Vec<usize>], from: usize, to: usize) -> bool {
    let mut seen = vec![false; next.len()];
    let mut stack = vec![from];
    seen[from] = true;
    while let Some(u) = stack.pop() {
        if u == to {
            return true;
        }
        for &v in &next[u] {
            if !seen[v] {
                seen[v] = true;
                stack.push(v);
            }
        }
    }
    false
}

/// Orients every contig. Mates inside a contig vote first; otherwise the
/// contig is turned to overlap best with its already oriented predecessor
/// (the first contig looks at its successor).
fn orient_contigs(reads: &ReadSet, a: &SimilarityMatrix, contigs: &mut [Contig]) {
    let mut position = HashMap::new();
    for c in contigs.iter() {
        for (k, &r) in c.reads.iter().enumerate() {
            position.insert(r, k);
        }
    }
    let mut internal_votes = vec![0i64; contigs.len()];
    for m in &reads.mate_pairs {
        for (c, contig) in contigs.iter().enumerate() {
            if let (Some(&p), Some(&q)) = (position.get(&m.first), position.get(&m.second)) {
                if contig.reads.contains(&m.first) && contig.reads.contains(&m.second) {
                    internal_votes[c] += if p < q { 1 } else { -1 };
                }
            }
        }
    }
    let end = |c: &Contig, head: bool| -> Vec<usize> {
        let t = c.reads.len().min(10);
        if head {
            c.reads[..t].to_vec()
        } else {
            c.reads[c.reads.len() - t..].to_vec()
        }
    };
    let link =
        |x: &[usize], y: &[usize]| -> f64 { x.iter().map(|&r| y.iter().map(|&q| a.get(r, q)).sum::<f64>()).sum() };
    for c in 0..contigs.len() {
        let flip = if internal_votes[c] != 0 {
            internal_votes[c] < 0
        } else if c > 0 {
            let tail = end(&contigs[c - 1], false);
            link(&tail, &end(&contigs[c], false)) > link(&tail, &end(&contigs[c], true))
        } else if contigs.len() > 1 {
            let next = &contigs[1];
            let to_next = |x: &[usize]| link(x, &end(next, true)).max(link(x, &end(next, false)));
            to_next(&end(&contigs[0], true)) > to_next(&end(&contigs[0], false))
        } else {
            false
        };
        if flip {
            contigs[c].reads.reverse();
        }
    }
}

/// Interleaves the bad reads with the ordered good reads. A bad read with a
/// placed mate goes `gap / spacing` ranks away from it; others go next to
/// their most similar placed read, or at the end.
fn place_bad_reads(
    reads: &ReadSet,
    a: &SimilarityMatrix,
    contigs: &[Contig],
    bad: &[usize],
    spacing: f64,
) -> (Vec<usize>, usize) {
    let good: Vec<usize> = contigs.iter().flat_map(|c| c.reads.iter().copied()).collect();
    let rank: HashMap<usize, f64> = good.iter().enumerate().map(|(k, &r)| (r, k as f64)).collect();
    let mut mate_of = HashMap::new();
    for m in &reads.mate_pairs {
        mate_of.insert(m.first, (m.second, m.gap as f64));
        mate_of.insert(m.second, (m.first, -(m.gap as f64)));
    }
    let mut keyed: Vec<(f64, usize)> = good.iter().enumerate().map(|(k, &r)| (k as f64, r)).collect();
    let mut unplaced = 0;
    for &r in bad {
        let target = match mate_of.get(&r).and_then(|&(q, gap)| Some(rank.get(&q)? - gap / spacing)) {
            Some(t) => Some(t),
            None => good
                .iter()
                .filter(|&&q| a.get(r, q) > 0.0)
                .max_by(|&&x, &&y| a.get(r, x).total_cmp(&a.get(r, y)))
                .map(|q| rank[q] + 0.5),
        };
        let key = target.unwrap_or_else(|| {
            unplaced += 1;
            good.len() as f64
        });
        if target.is_some() && mate_of.get(&r).is_none_or(|(q, _)| !rank.contains_key(q)) {
            unplaced += 1;
        }
        keyed.push((key, r));
    }
    keyed.sort_by(|x, y| x.0.total_cmp(&y.0).then(x.1.cmp(&y.1)));
    (keyed.into_iter().map(|(_, r)| r).collect(), unplaced)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::datasets::reads::{simulate_reads, ReadSimConfig};
    use crate::metrics::kendall_tau;

    fn toy(repeat_length: usize, mate_gap: usize, seed: u64) -> ReadSet {
        simulate_reads(&ReadSimConfig {
            genome_length: 2000,
            read_length: 50,
            coverage: 20.0,
            mate_gap,
            k: 12,
            repeat_length,
            seed,
        })
        .unwrap()
    }

    #[test]
    fn repeat_free_gives_one_contig_and_exact_order() {
        let reads = toy(0, 400, 1);
        assert!(read_similarity(&reads).unwrap().is_connected());
        let (order, contigs, report) = assemble(&reads, &AssemblyConfig::default()).unwrap();
        assert_eq!(contigs.len(), 1);
        assert_eq!(report.bad_reads, 0);
        assert_eq!(kendall_tau(&reads.truth(), &order, true).unwrap(), 1.0);
    }

    #[test]
    fn no_mates_means_no_relaxation() {
        let reads = toy(0, 0, 2);
        let (order, _, report) = assemble(&reads, &AssemblyConfig::default()).unwrap();
        assert!(!report.used_qp);
        assert_eq!(report.mate_constraints, 0);
        assert_eq!(order.len(), reads.len());
    }

    #[test]
    fn spacing_estimate_is_close() {
        let reads = toy(0, 400, 3);
        let (_, _, report) = assemble(&reads, &AssemblyConfig::default()).unwrap();
        // 800 reads on 2000 bp
        assert!((report.read_spacing_bp - 2.5).abs() < 1.0, "{}", report.read_spacing_bp);
    }

    #[test]
    fn cycles_are_dropped() {
        let specs = vec![
            ConstraintSpec::Order { i: 0, j: 1 },
            ConstraintSpec::Order { i: 1, j: 2 },
            ConstraintSpec::Order { i: 2, j: 0 },
        ];
        assert_eq!(drop_cycles(3, specs).len(), 2);
    }
}
