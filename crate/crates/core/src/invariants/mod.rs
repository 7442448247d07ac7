//! Tableau functions, the block attaching map and its restriction theorem,
//! and semistability of point configurations.

mod config;
pub mod poly;
mod restriction;
mod tableau;

pub use config::{attach_configuration, is_semistable, PointConfiguration, Stability};
pub use poly::{Monomial, Poly, PolyMatrix, Var};
pub use restriction::{
    block_matrix, first_factor_matrix, mu_decompose, second_factor_matrix, uniform_linearization,
    verify_restriction_theorem, BlockShape, ColumnKind, Decomposition, RestrictionFailure,
    RestrictionReport, Restrictor,
};
pub use tableau::{enumerate_tableaux, evaluate_on, evaluate_tableau, generic_matrix, Tableau};
