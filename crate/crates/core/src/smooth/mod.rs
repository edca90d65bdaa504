//! Smooth scalar fields, vector fields and differential forms on a
//! coordinate chart.

mod field;
mod forms;
mod homotopy;
mod jet;
pub mod linalg;

pub use field::{EvalError, Evaluator, Fault, Field, Tape};
pub use forms::{
    contract, exterior_derivative, for_each_increasing, lie_bracket, lie_derivative_form, lie_derivative_form_direct,
    lie_derivative_scalar, sort_sign, wedge, Bivector, Coef, FormError, PForm, VectorField,
};
pub use homotopy::{gauss_legendre_unit, homotopy_potential, HOMOTOPY_NODES};
pub use jet::{Jet, Scalar};
