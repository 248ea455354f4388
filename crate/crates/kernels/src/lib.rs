//! Numeric and symbolic phase-space machinery: the Moyal star product on
//! polynomial symbols, Groenewold kernel evaluation with its weak hbar -> 0
//! limit, the twisted-convolution kernel, and a truncated-Fock realization
//! of the quantizer-dequantizer formalism serving as the numerical oracle.

pub mod fock;
pub mod grid;
pub mod kernel;
pub mod symbol;

pub use fock::{
    kappa1_operator, kappa_deformed_product, kernel_trace, operator_of, quantizer_pair,
    smeared_symbol, symbol_of, weyl_displacement, FockError, FockOperator, FockSpace,
    QuantizerPair,
};
pub use grid::{GridError, PhasePoint, QuadGrid};
pub use kernel::{fresnel_factor, fresnel_weak_limit, groenewold_eval, twisted_convolution_s1, KernelError};
pub use symbol::{
    moyal_product, moyal_product_restricted, poisson_bracket, poisson_bracket_dof, PolySymbol,
    SymbolError,
};
