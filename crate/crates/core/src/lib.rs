pub mod bordism_calculus;
pub mod corpus;
pub mod error;
pub mod field;
pub mod loop_symbols;
pub mod planar_models;
pub mod rh_index;
pub mod split_space;
pub mod subspace_lab;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    pub struct Introduction;
    #[doc = include_str!("../../../book/src/split_spaces.md")]
    pub struct SplitSpaces;
    #[doc = include_str!("../../../book/src/subspace_pairs.md")]
    pub struct SubspacePairs;
    #[doc = include_str!("../../../book/src/loop_symbols.md")]
    pub struct LoopSymbols;
    #[doc = include_str!("../../../book/src/symbol_index.md")]
    pub struct SymbolIndex;
    #[doc = include_str!("../../../book/src/correspondences.md")]
    pub struct Correspondences;
    #[doc = include_str!("../../../book/src/planar_domains.md")]
    pub struct PlanarDomains;
    #[doc = include_str!("../../../book/src/command_line.md")]
    pub struct CommandLine;
}
