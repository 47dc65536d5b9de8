//! Spin networks as ZXH diagrams.
//!
//! Diagrams of Z/X spiders and H-boxes are built for SU(2) recoupling
//! objects, contracted exactly over Q(i)[√2] (or in floating point), and
//! compared against closed-form Wigner symbols.

pub mod exact;
pub mod graph;
pub mod oracle;
pub mod rewrite;
pub mod su2;
pub mod tensor;
