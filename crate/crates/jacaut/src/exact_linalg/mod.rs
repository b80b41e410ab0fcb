//! Exact integer/rational linear algebra and high-precision complex matrices.

pub mod forms;
pub mod hp;
pub mod kernel;
pub mod lll;
pub mod matrix;
pub mod normal_form;

pub use forms::{cholesky, pfaffian, pfaffian_i64, Ldl};
pub use hp::{digits_to_bits, CMatrix, HPComplex, RMatrix};
pub use kernel::integer_kernel;
pub use lll::{lll, lll_gram, lll_integer};
pub use matrix::{IMatrix, Matrix, QMatrix};
pub use normal_form::{hnf, left_kernel, snf};
pub use rug::{Integer as BigInt, Rational as BigRat};
