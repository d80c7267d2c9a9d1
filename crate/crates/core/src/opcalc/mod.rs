//! Functions of the derivative acting on kernels and on power series.

pub mod kernel;
pub mod matrix;
pub mod operator;

pub use kernel::{reg_value, Atom, ConstantAllocator, ConstantPolicy, Kernel, Reg, Side};
pub use matrix::{commutator_derivative_check, MatrixRole, OperatorMatrix};
pub use operator::{
    apply_class, apply_series_operator, apply_to_exponential, ClassEvaluator, ClassTerm, DiffOperator, KernelClass, Nu,
    Symbol,
};
