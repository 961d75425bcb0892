//! Exact finite-precision arithmetic for the two-dimensional local field
//! `K = F_q((t))((pi))`: Witt vectors and Artin-Schreier-Witt conductors,
//! differential forms with the Cartier operator and residues, Milnor `K_2`
//! symbols, the duality and reciprocity pairings on finite windows, and a
//! Weil reciprocity checker on the projective line.

pub mod coeff;
pub mod error;
pub mod ring;
pub mod series;
pub mod witt;
pub mod asw;
pub mod forms;
pub mod residue;
pub mod milnor;
pub mod linalg;
pub mod pairing;
pub mod weil;
pub mod parse;
pub mod sample;
pub mod checks;
pub mod cli;

pub use error::{Error, Result};
