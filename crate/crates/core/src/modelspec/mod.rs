//! Model files and the expression language of their entries.

mod expr;
mod model;

pub use expr::{compile_field, parse_expr, parse_expr_in, BinOp, Expr, ExprError, Func, HalfPower, Scope};
pub use model::{parse_model, ChartBox, CompiledModel, Constants, Framework, ModelError, ModelFile, VALIDATION_POINTS};
