//! Regular LDPC codes from quadratic permutation polynomials over `Z_N`.
//!
//! A `(lambda, rho)`-regular Tanner graph with `N` edges is fully described by a
//! permutation of the edge labels. Using a QPP `f(x) = f1 x + f2 x^2 (mod N)` for
//! that permutation gives graphs with large girth, explicit automorphisms and a
//! quasi-cyclic parity-check matrix.
//!
//! Modules, bottom up:
//! - [`qpp`]: permutation-polynomial arithmetic and validity.
//! - [`tanner`]: graph construction, automorphisms, girth.
//! - [`gf2`] and [`alist`]: parity-check matrices, rank, circulant form, file I/O.
//! - [`distance`]: permanent-based minimum-distance bounds and codeword search.
//! - [`decoder`]: sum-product decoding.
//! - [`montecarlo`]: BPSK/AWGN error-rate simulation.
//! - [`search`]: coefficient search.

pub mod alist;
pub mod codespec;
pub mod decoder;
pub mod distance;
pub mod error;
pub mod gf2;
pub mod montecarlo;
pub mod qpp;
pub mod search;
pub mod tanner;

pub use error::{Error, Result};
