//! Exact symbolic tensor calculus for the projectively invariant quantization
//! of third-order symbols.
//!
//! Every scalar is an exact [`Rational`], every coordinate-dependent component
//! is a sparse [`Poly`] in `x1..xn`. On top of that sit affine connections,
//! weighted tensor fields and their covariant derivatives, the quantization
//! map sending a symmetric contravariant 3-tensor density to a third-order
//! differential operator, and the infinitesimal actions of vector fields used
//! to check `sl(n+1)`-equivariance in the flat case.

pub mod diffexpr;
pub mod equivariance;
pub mod error;
pub mod parse;
pub mod poly;
pub mod quantization;
pub mod random;
pub mod rational;
pub mod tensor;

pub use diffexpr::DiffExpr;
pub use equivariance::{
    check_equivariance, lie_density, lie_operator, lie_symbol, sl_generators,
    EquivarianceVerdict, VectorField,
};
pub use error::{Error, Result};
pub use parse::{parse_poly, parse_vector_field, ParseError};
pub use poly::{Monomial, Poly};
pub use quantization::{
    apply, operator_equal, quantize, quantize_with, resolve_coefficients,
    resolve_coefficients_resonant, resonant_deltas, resonant_rows, Coefficient,
    CoefficientSet, Diff3Operator, ResonantRow, Weights,
};
pub use rational::{parse_rational, Rational};
pub use tensor::{
    covariant_derivative, divergence3, iterated_covariant, projective_shift, ricci,
    ricci_with, Component, Connection, RicciConvention, Symbol3, Tensor, TensorDensity,
};
