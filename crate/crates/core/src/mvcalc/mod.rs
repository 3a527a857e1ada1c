//! Polynomial multivector calculus on a coordinate chart.

pub mod expr;
pub mod graded;
pub mod poly;
pub mod pullback;

pub use expr::{parse_expr, ExprError, Expression};
pub use graded::{
    differential, euler_field, exterior_derivative, interior_product, schouten_bracket, sharp,
    volume_form, DiffForm, Multivector,
};
pub use poly::{fmt_rational, int, parse_rational, rat, rational_to_f64, PolyScalar, Rational};
pub use pullback::{pullback_eval, pullback_top, ExprForm, ParamMap};
