//! Kolmogorov widths, ellipsoid covering operators, the bilinear equation
//! `XAY = B` and A-expanding operators, all on finite-dimensional
//! truncations.
//!
//! Conventions: s-numbers are 1-indexed (`s_1 >= s_2 >= ...`), widths are
//! 0-indexed (`d_0 >= d_1 >= ...`) and `d_n(A(B)) = s_{n+1}(A)`. Singular
//! values below `1e-12 * s_1` count as zero unless stated otherwise.

pub mod cli;
pub mod covering;
pub mod equations;
pub mod error;
pub mod expanding;
pub mod linalg;
pub mod matrix_io;
pub mod random;
pub mod report;
pub mod rigid;
pub mod seqlab;
pub mod spectra;

pub use error::{Error, Result};
pub use linalg::{Matrix, Vector};
