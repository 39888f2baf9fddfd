//! Path algebras of rooted tree quivers and complexes of their projectives.

pub mod algebra;
pub mod complex;
pub mod euler;
pub mod hochschild;
pub mod module;

pub use algebra::PathAlgebra;
pub use complex::{
    associated_graded, cone, hom_complex, hom_complex_keyed, CorrFunctor, DiffEntry, Filtration, HomKey, KeyedHom,
    ProjComplex, ProjComplexSpec, ProjMap,
};
pub use hochschild::{cyclic_truncated, hochschild, hochschild_unblocked, trace_class, trace_classes, CyclicResult, HochschildResult};
