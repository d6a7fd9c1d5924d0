//! Exact almost toric base diagrams, intersection lattices of rational
//! surfaces, and the period arithmetic behind liminal pinwheel obstructions.

pub mod exact_core;
pub mod atf_diagram;
pub mod homology;
pub mod period_solver;
pub mod chain_classifier;
pub mod compactification;
pub mod constructions;
pub mod cli;
