//! Exact twisted conjugacy for triangular matrix groups over integral domains.
//!
//! The crate is organised bottom-up: [`rings`] (finite fields, integers,
//! monogenic orders, polynomial and Laurent rings), [`matgroups`]
//! (triangular groups and finite truncations), [`autos`] (automorphism
//! expressions), [`twisted`] (class decisions, counts and certificates) and
//! [`spectra`] (named experiments with JSON reports).

pub mod autos;
pub mod error;
pub mod linalg;
pub mod matgroups;
pub mod rings;
pub mod spectra;
pub mod twisted;

pub use error::{Error, Result};
