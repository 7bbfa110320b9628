//! Minimum cycle bases and minimum homology bases of edge-weighted graphs
//! cellularly embedded on surfaces.
//!
//! The crate is organized around a dart-based [`embed::EmbeddedGraph`]:
//!
//! - [`gf2`] — packed GF(2) vectors and matrices.
//! - [`embed`] — rotation-system embeddings, face tracing, duality.
//! - [`instance`] — the text instance format.
//! - [`cut`] — cutting a surface along paths and cycles.
//! - [`shortest`] — deterministic unique shortest paths.
//! - [`decompose`] — tree-coforest decompositions, co-path systems, and
//!   cycle/homology signatures.
//! - [`sparsify`] — elimination of degree-1/2 faces with forced basis cycles.
//! - [`mcb`] — minimum cycle basis on orientable surfaces.
//! - [`mhb`] — minimum homology basis via the cyclic double cover.
//! - [`oracle`] — brute-force reference implementations for verification.
//! - [`gen`] — fixture and random-instance generators.
//! - [`report`] — run reports and the structured output format.
//! - [`cli`] — the command-line front end.

pub mod cli;
pub mod cut;
pub mod decompose;
pub mod embed;
pub mod gen;
pub mod gf2;
pub mod instance;
pub mod mcb;
pub mod mhb;
pub mod oracle;
pub mod report;
pub mod shortest;
pub mod sparsify;
pub mod support;
