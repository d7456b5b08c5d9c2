pub mod fq;
pub mod int;

pub use fq::{FqMatrix, Solution};
pub use int::IntMatrix;
