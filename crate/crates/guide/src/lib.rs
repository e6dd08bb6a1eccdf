//! The book's chapters, included as documentation so `cargo test` runs every code block.

#[doc = include_str!("../../../book/src/introduction.md")]
pub mod introduction {}
#[doc = include_str!("../../../book/src/monomial-ideals.md")]
pub mod monomial_ideals {}
#[doc = include_str!("../../../book/src/newton-polyhedra.md")]
pub mod newton_polyhedra {}
#[doc = include_str!("../../../book/src/closures.md")]
pub mod closures {}
#[doc = include_str!("../../../book/src/equation-systems.md")]
pub mod equation_systems {}
#[doc = include_str!("../../../book/src/branched-covers.md")]
pub mod branched_covers {}
#[doc = include_str!("../../../book/src/reductions.md")]
pub mod reductions {}
#[doc = include_str!("../../../book/src/relative-closure.md")]
pub mod relative_closure {}
#[doc = include_str!("../../../book/src/cli.md")]
pub mod cli {}
#[doc = include_str!("../../../README.md")]
pub mod readme {}
