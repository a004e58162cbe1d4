//! Dimensions of Klingen-fixed vectors in depth-zero supercuspidal
//! representations of `GSp(4)`, computed two ways and checked against
//! finite-group and p-adic brute force.

pub mod error;
pub mod ffield;
pub mod cosets;
pub mod groupfq;
pub mod padic;
pub mod chartab;
pub mod dims;
pub mod verify;
pub mod parse;

pub use error::{Error, Result};
