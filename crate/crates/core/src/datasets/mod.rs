//! Generators and loaders for the experiments: Markov chains, random
//! order constraints, incidence data, synthetic pre-R matrices and
//! shotgun reads.

mod archeology;
mod assembly;
mod constraints;
mod markov;
mod reads;
mod synthetic;

pub use archeology::{
    bundled_dataset, load_binary_matrix, parse_binary_matrix, row_similarity, synthetic_c1p, C1pSpec, DATA_DIR_VAR,
    MUNSINGEN_FILE,
};
pub use assembly::{assemble, AssemblyConfig, AssemblyReport, Contig};
pub use constraints::{sample_order_constraints, OrderSample};
pub use markov::{abs_correlation, markov_similarity, sample_covariance, MarkovChainSpec, DEFAULT_COEFFICIENT};
pub use reads::{
    parse_fasta, plant_repeat, random_genome, read_fasta, read_set_from_sequences, read_similarity, sample_reads,
    simulate_genome, simulate_reads, MatePair, Read, ReadSet, ReadSimConfig,
};
pub use synthetic::synthetic_pre_r;
