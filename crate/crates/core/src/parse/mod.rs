//! Text grammars for classical polynomials, Weyl-algebra operators,
//! tensor expressions and coordinate rational functions.

pub mod arith;
pub mod classical;
pub mod lexer;
pub mod operator;
pub mod ratfun;
pub mod tensor;

pub use classical::parse_classical;
pub use operator::parse_operator;
pub use ratfun::{parse_rational, parse_rational_function};
pub use tensor::{parse_declaration, parse_rule, parse_tensor, parse_tensor_expr, parse_tensor_with, Declarations, TensorSource};
