//! Computational tools for the categories `S_m(k[T]/T^n)` of invariant
//! subspaces of nilpotent operators over prime fields.

pub mod ar;
pub mod catalog;
pub mod covering;
pub mod exhibits;
pub mod hom;
pub mod io;
pub mod krull;
pub mod linalg;
pub mod poly;
pub mod rep;
pub mod rng;
pub mod zpn;
