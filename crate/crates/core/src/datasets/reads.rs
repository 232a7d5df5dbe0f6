//! Shotgun read simulation on a random genome, k-mer incidence and read
//! similarity.

use std::collections::{HashMap, HashSet};
use std::path::Path;

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, SeriationError};
use crate::permutation::Permutation;
use crate::similarity::SimilarityMatrix;

const BASES: [u8; 4] = *b"ACGT";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Read {
    pub sequence: String,
    /// 0-based start on the genome.
    pub position: usize,
}

/// Two reads whose starts are `gap` base pairs apart, `first` upstream.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MatePair {
    pub first: usize,
    pub second: usize,
    pub gap: usize,
}

/// Simulated reads with their k-mer incidence, kept sparse: `kmers[r]` lists
/// the distinct k-mer ids of read `r`, i.e. the nonzero columns of row `r`
/// of the binary read × k-mer matrix `C`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReadSet {
    pub reads: Vec<Read>,
    pub mate_pairs: Vec<MatePair>,
    pub k: usize,
    pub kmers: Vec<Vec<u32>>,
    pub num_kmers: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReadSimConfig {
    pub genome_length: usize,
    pub read_length: usize,
    pub coverage: f64,
    /// Distance between the starts of mates; 0 simulates unpaired reads.
    pub mate_gap: usize,
    pub k: usize,
    /// Length of a segment copied elsewhere in the genome (0 for none).
    pub repeat_length: usize,
    pub seed: u64,
}

impl Default for ReadSimConfig {
    fn default() -> Self {
        Self {
            genome_length: 10_000,
            read_length: 100,
            coverage: 20.0,
            mate_gap: 1000,
            k: 16,
            repeat_length: 0,
            seed: 0,
        }
    }
}

impl ReadSet {
    pub fn len(&self) -> usize {
        self.reads.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reads.is_empty()
    }

    /// Reads sorted by genome position (ties by index).
    pub fn truth(&self) -> Permutation {
        let keys: Vec<f64> = self.reads.iter().map(|r| r.position as f64).collect();
        Permutation::argsort(&keys)
    }

    /// Dense `C`, for small read sets.
    pub fn incidence(&self) -> DMatrix<f64> {
        let mut c = DMatrix::zeros(self.len(), self.num_kmers);
        for (r, ids) in self.kmers.iter().enumerate() {
            for &id in ids {
                c[(r, id as usize)] = 1.0;
            }
        }
        c
    }

    /// Subset of reads, renumbered in the order given, keeping the mate
    /// pairs with both ends inside.
    pub fn subset(&self, reads: &[usize]) -> ReadSet {
        let index: HashMap<usize, usize> = reads.iter().enumerate().map(|(new, &old)| (old, new)).collect();
        let mate_pairs = self
            .mate_pairs
            .iter()
            .filter_map(|m| Some(MatePair { first: *index.get(&m.first)?, second: *index.get(&m.second)?, gap: m.gap }))
            .collect();
        ReadSet {
            reads: reads.iter().map(|&r| self.reads[r].clone()).collect(),
            mate_pairs,
            k: self.k,
            kmers: reads.iter().map(|&r| self.kmers[r].clone()).collect(),
            num_kmers: self.num_kmers,
        }
    }
}

/// Uniform random genome over `ACGT`.
pub fn random_genome(length: usize, rng: &mut impl Rng) -> String {
    (0..length).map(|_| BASES[rng.random_range(0..4)] as char).collect()
}

/// Copies `genome[source..source + length]` over `genome[target..]`.
pub fn plant_repeat(genome: &mut String, source: usize, target: usize, length: usize) -> Result<()> {
    if source + length > genome.len() || target + length > genome.len() {
        return Err(SeriationError::InvalidParameter("repeat runs past the genome end".into()));
    }
    let segment = genome[source..source + length].to_string();
    genome.replace_range(target..target + length, &segment);
    Ok(())
}

/// Genome of `cfg.genome_length` bases, with a repeat planted when
/// `cfg.repeat_length > 0`: a segment from the first quarter is copied into
/// the third quarter, so the two copies lie about half a genome apart.
pub fn simulate_genome(cfg: &ReadSimConfig) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut genome = random_genome(cfg.genome_length, &mut rng);
    if cfg.repeat_length > 0 {
        let g = cfg.genome_length;
        if 4 * cfg.repeat_length > g {
            return Err(SeriationError::InvalidParameter("repeat longer than a quarter of the genome".into()));
        }
        plant_repeat(&mut genome, g / 8, g / 2 + g / 8, cfg.repeat_length)?;
    }
    Ok(genome)
}

/// Simulates a genome from `cfg` and samples reads from it.
///
/// ```
/// use seriation::datasets::{read_similarity, simulate_reads, ReadSimConfig};
/// use seriation::metrics::kendall_tau;
/// use seriation::spectral_order;
///
/// let cfg = ReadSimConfig {
///     genome_length: 1000, read_length: 50, coverage: 10.0, mate_gap: 0, k: 12,
///     ..ReadSimConfig::default()
/// };
/// let reads = simulate_reads(&cfg).unwrap();
/// let order = spectral_order(&read_similarity(&reads).unwrap()).unwrap();
/// assert_eq!(kendall_tau(&reads.truth(), &order, true).unwrap(), 1.0);
/// ```
pub fn simulate_reads(cfg: &ReadSimConfig) -> Result<ReadSet> {
    let genome = simulate_genome(cfg)?;
    sample_reads(&genome, cfg)
}

/// Samples reads from `genome` with distinct start positions so that read
/// coverage is `cfg.coverage` on average. With a mate gap, reads come in
/// pairs `(s, s + gap)`.
pub fn sample_reads(genome: &str, cfg: &ReadSimConfig) -> Result<ReadSet> {
    let (g, len, k) = (genome.len(), cfg.read_length, cfg.k);
    if k == 0 || k > 32 || len <= k {
        return Err(SeriationError::InvalidParameter(format!("need 0 < k <= 32 and k < read length, got k = {k}")));
    }
    if !(cfg.coverage >= 1.0 && cfg.coverage.is_finite()) {
        return Err(SeriationError::InvalidParameter(format!("coverage {} below 1", cfg.coverage)));
    }
    let span = len + cfg.mate_gap;
    if span > g {
        return Err(SeriationError::InvalidParameter("reads and mate gap do not fit in the genome".into()));
    }
    if let Some(c) = genome.bytes().find(|c| !BASES.contains(c)) {
        return Err(SeriationError::InvalidParameter(format!("genome has non-ACGT base {:?}", c as char)));
    }
    let starts_available = g - len + 1;
    let wanted = ((cfg.coverage * g as f64 / len as f64).round() as usize).max(1).min(starts_available);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x05ee_d0f2_ead5);
    let mut used = HashSet::new();
    let mut reads = Vec::with_capacity(wanted);
    let mut mate_pairs = Vec::new();
    let mut attempts = 0usize;
    while reads.len() < wanted && attempts < 100 * wanted {
        attempts += 1;
        if cfg.mate_gap == 0 {
            let s = rng.random_range(0..starts_available);
            if used.insert(s) {
                reads.push(Read { sequence: genome[s..s + len].to_string(), position: s });
            }
            continue;
        }
        if reads.len() + 2 > wanted && !reads.is_empty() {
            break;
        }
        let s = rng.random_range(0..=g - span);
        let t = s + cfg.mate_gap;
        if used.contains(&s) || used.contains(&t) {
            continue;
        }
        used.insert(s);
        used.insert(t);
        mate_pairs.push(MatePair { first: reads.len(), second: reads.len() + 1, gap: cfg.mate_gap });
        reads.push(Read { sequence: genome[s..s + len].to_string(), position: s });
        reads.push(Read { sequence: genome[t..t + len].to_string(), position: t });
    }
    Ok(index_kmers(reads, mate_pairs, k))
}

fn index_kmers(reads: Vec<Read>, mate_pairs: Vec<MatePair>, k: usize) -> ReadSet {
    let mut ids: HashMap<u64, u32> = HashMap::new();
    let mut kmers = Vec::with_capacity(reads.len());
    for read in &reads {
        let bytes = read.sequence.as_bytes();
        let mut row: Vec<u32> = bytes
            .windows(k)
            .map(|w| {
                let code =
                    w.iter().fold(0u64, |acc, &b| (acc << 2) | BASES.iter().position(|&x| x == b).unwrap_or(0) as u64);
                let next = ids.len() as u32;
                *ids.entry(code).or_insert(next)
            })
            .collect();
        row.sort_unstable();
        row.dedup();
        kmers.push(row);
    }
    ReadSet { reads, mate_pairs, k, kmers, num_kmers: ids.len() }
}

/// Builds a read set from given sequences (no mates), e.g. for tests.
pub fn read_set_from_sequences(sequences: &[(&str, usize)], k: usize) -> Result<ReadSet> {
    if k == 0 || k > 32 {
        return Err(SeriationError::InvalidParameter(format!("k = {k}")));
    }
    let reads: Vec<Read> = sequences.iter().map(|(s, p)| Read { sequence: s.to_string(), position: *p }).collect();
    if let Some(r) = reads.iter().find(|r| r.sequence.len() < k) {
        return Err(SeriationError::InvalidParameter(format!("read at {} shorter than k", r.position)));
    }
    Ok(index_kmers(reads, Vec::new(), k))
}

/// `C Cᵀ`: the number of distinct k-mers shared by each pair of reads.
pub fn read_similarity(reads: &ReadSet) -> Result<SimilarityMatrix> {
    let n = reads.len();
    let mut holders: Vec<Vec<usize>> = vec![Vec::new(); reads.num_kmers];
    for (r, ids) in reads.kmers.iter().enumerate() {
        for &id in ids {
            holders[id as usize].push(r);
        }
    }
    let mut a = DMatrix::zeros(n, n);
    for list in &holders {
        for &i in list {
            for &j in list {
                a[(i, j)] += 1.0;
            }
        }
    }
    SimilarityMatrix::new(a)
}

/// Reads a single-sequence FASTA-like file: `>` lines are skipped, the
/// remaining lines are concatenated and upper-cased.
pub fn read_fasta(path: impl AsRef<Path>) -> Result<String> {
    parse_fasta(&std::fs::read_to_string(path.as_ref())?)
}

pub fn parse_fasta(text: &str) -> Result<String> {
    let mut genome = String::new();
    for (line, content) in text.lines().enumerate() {
        let content = content.trim();
        if content.starts_with('>') || content.is_empty() {
            continue;
        }
        for c in content.chars() {
            let up = c.to_ascii_uppercase();
            if !BASES.contains(&(up as u8)) || !up.is_ascii() {
                return Err(SeriationError::Parse { line: line + 1, message: format!("unexpected base {c:?}") });
            }
            genome.push(up);
        }
    }
    if genome.is_empty() {
        return Err(SeriationError::Parse { line: 0, message: "no sequence".into() });
    }
    Ok(genome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::circular_product;

    fn small() -> ReadSimConfig {
        ReadSimConfig {
            genome_length: 1000,
            read_length: 50,
            coverage: 10.0,
            mate_gap: 300,
            k: 12,
            ..Default::default()
        }
    }

    #[test]
    fn reads_match_genome_and_mates() {
        let cfg = small();
        let genome = simulate_genome(&cfg).unwrap();
        let reads = sample_reads(&genome, &cfg).unwrap();
        assert_eq!(reads.len(), 200);
        for r in &reads.reads {
            assert_eq!(&genome[r.position..r.position + 50], r.sequence);
        }
        for m in &reads.mate_pairs {
            assert_eq!(reads.reads[m.second].position - reads.reads[m.first].position, 300);
        }
        assert!(reads.kmers.iter().all(|row| !row.is_empty()));
    }

    #[test]
    fn similarity_is_binary_circular_product() {
        let reads =
            simulate_reads(&ReadSimConfig { genome_length: 300, coverage: 2.0, mate_gap: 100, ..small() }).unwrap();
        let c = reads.incidence();
        let circ = circular_product(&c, &c.transpose()).unwrap();
        assert_eq!(read_similarity(&reads).unwrap().entries(), &circ);
        assert_eq!(circ, &c * c.transpose());
    }

    #[test]
    fn single_read_and_bad_parameters() {
        let one = read_set_from_sequences(&[("ACGTACGTAC", 0)], 4).unwrap();
        assert_eq!(read_similarity(&one).unwrap().n(), 1);
        assert!(simulate_reads(&ReadSimConfig { k: 60, ..small() }).is_err());
        assert!(simulate_reads(&ReadSimConfig { coverage: 0.5, ..small() }).is_err());
    }

    #[test]
    fn planted_repeat_copies_segment() {
        let cfg = ReadSimConfig { repeat_length: 100, ..small() };
        let g = simulate_genome(&cfg).unwrap();
        assert_eq!(g[125..225], g[625..725]);
        assert_eq!(simulate_genome(&cfg).unwrap(), g);
    }

    #[test]
    fn fasta_parsing() {
        assert_eq!(parse_fasta(">chr\nacg\nTT\n").unwrap(), "ACGTT");
        assert!(parse_fasta(">x\nACNG\n").is_err());
    }
}
