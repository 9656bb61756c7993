//! Bipartite matching covered graphs at desk scale: matching engines and
//! matchability certificates, ear decompositions, degree/edge partitions with
//! the extremal classes H0..H4, the transformation calculus (bicontraction,
//! bisplitting, partial retract, balanced 2-cut decomposition, 2-edge
//! splicing), leaf-matching constructions and recognizers, k-extendability
//! with bound and conjecture reports, and an isomorph-free small-n census.
//!
//! The crate is `no_std` + `alloc`; every operation is a pure function over
//! immutable values, so everything is safe to share across threads. IO, file
//! formats, and the CLI live in the companion `earmatch-cli` crate.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod canon;
pub mod census;
pub mod classify;
pub mod construct;
pub mod ears;
pub mod graph;
pub mod kext;
pub mod matching;
pub mod recognize;
pub mod transform;
