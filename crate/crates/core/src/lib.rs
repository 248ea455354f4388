//! Exact machinery for structure-constant algebras: Gaussian-rational
//! coefficient arithmetic, associativity and Jacobi verification, parameter
//! families with contraction limits, K-deformations, and the fixture catalog
//! with a Bianchi classifier.

pub mod catalog;
pub mod contraction;
pub mod expr;
pub mod format;
pub mod gauss;
pub mod matrix;
pub mod parse;
pub mod poly;
pub mod tensor;

pub use expr::{CoeffError, CoeffExpr, Limit, Params};
pub use gauss::GaussRat;
pub use matrix::GaussMat;
pub use parse::{parse_expr, print_expr};
pub use tensor::{
    antisymmetrize, associator, check_associativity, check_jacobi, constants_from_matrices,
    multiply, symmetrize, AlgebraElement, AlgebraError, AssociativityReport, JacobiReport,
    StructureTensor,
};
