//! Trees, rooted trees, correspondences of trees and the poset `Arb_T`.

pub mod correspondence;
pub mod generate;
pub mod tree;

pub use correspondence::{
    class_name, compose, enumerate_correspondences, leq, leq_witness, Arb, Correspondence, CorrespondenceSpec,
    Realized,
};
pub use tree::{iter_bits, RootedTree, Tree, TreeSpec};
