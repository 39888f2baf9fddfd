pub mod complex;
pub mod matrix;

pub use complex::{cone, hom_post, hom_pre, ChainMap, Complex, HomologyBasis};
pub use matrix::{axpy, solve_with, Matrix, Reduction, SparseVec};
