pub mod cut;
pub mod datasets;
pub mod error;
pub mod experiments;
pub mod io;
pub mod linalg;
pub mod metrics;
pub mod objective;
pub mod permutation;
pub mod pipeline;
pub mod relax;
pub mod rounding;
pub mod similarity;
pub mod spectral;
pub mod structure;

pub use error::{Result, SeriationError};
pub use similarity::SimilarityMatrix;
pub use spectral::{fiedler, spectral_order, FiedlerMethod};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/similarity.md")]
    mod similarity {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    mod spectral {}
    #[doc = include_str!("../../../book/src/relaxation.md")]
    mod relaxation {}
    #[doc = include_str!("../../../book/src/constraints.md")]
    mod constraints {}
    #[doc = include_str!("../../../book/src/rounding.md")]
    mod rounding {}
    #[doc = include_str!("../../../book/src/experiments.md")]
    mod experiments {}
}
