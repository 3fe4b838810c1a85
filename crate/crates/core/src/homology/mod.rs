//! Homology classes as bracket expressions and their pairing with forests.

mod actions;
mod basis;
mod context;
mod coproduct;
mod psi;
mod relations;

pub use actions::{canonical_expr, canonical_sum, left_action, right_action, right_action_normalize};
pub use basis::{enumerate_homology_basis, enumerate_homology_basis_d1, skeleton_expr, D1BasisElement};
pub use context::HomologyContext;
pub use coproduct::{
    check_coassociativity, coproduct, coproduct_of_basis, coproduct_terms, drop_vanishing, TensorPair,
};
pub use psi::{pair, pair_with_psi, pairing_matrix, psi};
pub use relations::{hook_module_rank, verify_bimodule_relations, RelationCheck};
