//! Detector-efficiency loophole analysis for entanglement witnesses.
//!
//! A witness `W` is measured through local settings `W = c0 Id + sum_a c_a S_a`.
//! With imperfect detectors whose errors may be correlated adversarially, a
//! negative measured `<W>_m` only proves entanglement once it falls below a
//! bound depending on the decomposition and on the detector efficiencies.
//!
//! - [`operator`]: dense Hermitian operators, eigenvalues, a 3x3 SVD.
//! - [`decomposition`]: Pauli and Gell-Mann expansions of witnesses.
//! - [`loophole`]: worst-case bounds and efficiency thresholds.
//! - [`optimizer`]: the optimal local decomposition of two-qubit witnesses.
//! - [`adversary`]: an independent count-level adversary checking the bounds.
//! - [`cli`]: the `witness-loophole` command-line front end.

pub mod adversary;
pub mod cli;
pub mod decomposition;
pub mod error;
pub mod loophole;
pub mod operator;
pub mod optimizer;
pub mod random;
pub mod report;
pub mod witnesses;

pub use error::{Error, Result};
