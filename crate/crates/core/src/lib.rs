//! Spectral toolkit for norm-gap experiments with the Burgers and 2D Euler equations
//! in Besov spaces `B^s_{p,∞}`.

pub mod constructions;
pub mod cutoff;
pub mod error;
pub mod euler2d;
pub mod experiments;
pub mod fft;
pub mod field;
pub mod field_io;
pub mod fit;
pub mod grid;
pub mod interp;
pub mod littlewood_paley;
pub mod quadrature;
pub mod transport1d;
pub mod vector;

pub use cutoff::{make_cutoff_pair, CutoffProfile};
pub use error::{Error, Result};
pub use field::Field;
pub use grid::UniformPeriodicGrid;
pub use littlewood_paley::{besov_norm, commutator, dyadic_block, lp_norm, BesovIndex, DyadicDecomposition};
pub use rustfft::num_complex::Complex64;
