//! Cluster characters of nilpotent representations of cyclic quivers.
//!
//! The crate computes the character `X_M` of a module `M` in a tube of
//! rank `r` as an exact Laurent polynomial, checks the multiplication
//! formulas between characters by expansion, and writes any product of
//! characters in the basis of rigid-module characters.
//!
//! ```
//! use tubecc::{char_module, TubeModule};
//!
//! let m = TubeModule::parse(4, "E(2,5)").unwrap();
//! assert_eq!(char_module(&m).to_text(), "x1*x4^-1 + 2*x1*x2^-1 + x3*x4^-1 + 2*x2^-1*x3");
//! ```

pub mod basis;
pub mod character;
pub mod cli;
pub mod error;
pub mod grassmannian;
pub mod laurent;
pub mod linalg;
pub mod multiplication;
pub mod tube;
pub mod verify;

pub use basis::{
    decompose, enumerate_rigid, expand_simple_product, independence_check, DecomposeOptions,
    Decomposition, Target,
};
pub use character::{char_definitional, char_indec_closed, char_module};
pub use error::{Error, Result};
pub use laurent::{ExponentVector, LaurentPoly};
pub use multiplication::{ar_product, cluster_mult, dm1_step, inductive_mult, ProductExpansion};
pub use tube::{
    dim_order_cmp, euler_form, ext1_cluster_dim, ext1_dim, hom_dim, hom_space, is_rigid, DimOrder,
    DimVector, Indec, TubeModule,
};
