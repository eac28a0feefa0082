//! Exact scalars, matrices, subspaces and symmetric forms.

mod field;
mod forms;
mod matrix;
mod quad;
mod scalar;
mod subspace;

pub use field::Field;
pub use forms::{
    antisymmetric_for, cayley_orthogonal, inertia_exact, orth_complement, proportionality,
    rational_orth_complement, Inertia, SymmetricForm,
};
pub use matrix::{dot, lin_comb, unit_vec, vec_add, vec_scale, vec_sub, Matrix};
pub use quad::{QuadScalar, Q3};
pub use scalar::{denominator_lcm, factorial, Scalar};
pub use subspace::{intersect_subspaces, SubspaceExact};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum KernelError {
    #[error("ambient dimensions differ: {0} vs {1}")]
    AmbientMismatch(usize, usize),
    #[error("form is degenerate")]
    DegenerateForm,
    #[error("matrix is not symmetric")]
    NotSymmetric,
    #[error("parameter is not antisymmetric for the form")]
    NotAntisymmetric,
    #[error("I + S is singular")]
    SingularCayley,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Rational matrix from integer rows.
pub fn qmat(rows: &[&[i64]]) -> Matrix<Scalar> {
    Matrix::from_ints(rows)
}

/// Rational diagonal form from integers.
pub fn qdiag(xs: &[i64]) -> SymmetricForm<Scalar> {
    SymmetricForm::diag(&xs.iter().map(|&x| Scalar::from_int(x)).collect::<Vec<_>>())
}

/// Rational vector from integers.
pub fn qvec(xs: &[i64]) -> Vec<Scalar> {
    xs.iter().map(|&x| Scalar::from_int(x)).collect()
}
