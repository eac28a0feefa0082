//! Symmetric bilinear forms: inertia, orthogonal complements, Cayley transforms.

use serde::{Deserialize, Serialize};

use super::{Field, KernelError, Matrix, QuadScalar, Scalar, SubspaceExact};

/// Sylvester inertia of a symmetric form.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Inertia {
    pub n_pos: usize,
    pub n_neg: usize,
    pub n_zero: usize,
}

impl Inertia {
    pub fn new(n_pos: usize, n_neg: usize, n_zero: usize) -> Self {
        Inertia { n_pos, n_neg, n_zero }
    }

    pub fn dim(&self) -> usize {
        self.n_pos + self.n_neg + self.n_zero
    }

    /// Swaps the positive and negative counts.
    pub fn flipped(&self) -> Self {
        Inertia { n_pos: self.n_neg, n_neg: self.n_pos, n_zero: self.n_zero }
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.n_zero == 0
    }
}

impl std::fmt::Display for Inertia {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({},{},{})", self.n_pos, self.n_neg, self.n_zero)
    }
}

/// A symmetric Gram matrix.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SymmetricForm<F: Field> {
    gram: Matrix<F>,
}

impl<F: Field> SymmetricForm<F> {
    pub fn new(gram: Matrix<F>) -> Result<Self, KernelError> {
        if !gram.is_symmetric() {
            return Err(KernelError::NotSymmetric);
        }
        Ok(SymmetricForm { gram })
    }

    pub fn diag(entries: &[F]) -> Self {
        SymmetricForm { gram: Matrix::diag(entries) }
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix<F> {
        &self.gram
    }

    pub fn eval(&self, x: &[F], y: &[F]) -> F {
        self.gram.bilinear(x, y)
    }

    pub fn norm(&self, x: &[F]) -> F {
        self.eval(x, x)
    }

    pub fn inertia(&self) -> Inertia {
        inertia_exact(self)
    }

    pub fn is_nondegenerate(&self) -> bool {
        self.gram.rank() == self.dim()
    }

    /// Gram matrix of the form restricted to the span of `vecs`.
    pub fn restrict(&self, vecs: &[Vec<F>]) -> Self {
        let n = vecs.len();
        let mut g = Matrix::zeros(n, n);
        for i in 0..n {
            let gi = self.gram.vec_mul(&vecs[i]);
            for j in i..n {
                let v = super::dot(&gi, &vecs[j]);
                g[(i, j)] = v.clone();
                g[(j, i)] = v;
            }
        }
        SymmetricForm { gram: g }
    }

    /// `true` iff `other = c · self` for some scalar `c`; returns `c`
    /// (`None` when not proportional or `self` is zero).
    pub fn ratio_to(&self, other: &Self) -> Option<F> {
        proportionality(&self.gram, &other.gram)
    }
}

/// The scalar `c` with `b = c · a`, if one exists and `a ≠ 0`.
pub fn proportionality<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Option<F> {
    if a.rows() != b.rows() || a.cols() != b.cols() {
        return None;
    }
    let idx = a.as_slice().iter().position(|x| !x.is_zero())?;
    let c = b.as_slice()[idx].div(&a.as_slice()[idx]);
    (a.scale(&c) == *b).then_some(c)
}

/// Exact Sylvester inertia by symmetric Gaussian elimination.
///
/// Pivots are taken on the diagonal at the lowest available index; when the
/// remaining diagonal vanishes, the lowest nonzero off-diagonal pair `(i, j)`
/// is folded into row/column `i` by the congruence `eᵢ ← eᵢ + eⱼ`.
pub fn inertia_exact<F: Field>(g: &SymmetricForm<F>) -> Inertia {
    let n = g.dim();
    let mut a = g.gram.clone();
    let mut active: Vec<usize> = (0..n).collect();
    let (mut pos, mut neg) = (0, 0);
    while !active.is_empty() {
        let diag = active.iter().copied().find(|&i| !a[(i, i)].is_zero());
        let p = match diag {
            Some(p) => p,
            None => {
                let mut pair = None;
                'search: for (ii, &i) in active.iter().enumerate() {
                    for &j in &active[ii + 1..] {
                        if !a[(i, j)].is_zero() {
                            pair = Some((i, j));
                            break 'search;
                        }
                    }
                }
                let Some((i, j)) = pair else { break };
                // row_i += row_j, then col_i += col_j
                for &k in &active {
                    let v = a[(i, k)].add(&a[(j, k)]);
                    a[(i, k)] = v;
                }
                for &k in &active {
                    let v = a[(k, i)].add(&a[(k, j)]);
                    a[(k, i)] = v;
                }
                i
            }
        };
        let d = a[(p, p)].clone();
        if d.sign() > 0 {
            pos += 1;
        } else {
            neg += 1;
        }
        let dinv = d.inv();
        active.retain(|&x| x != p);
        for &i in &active {
            let f = a[(i, p)].mul(&dinv);
            if f.is_zero() {
                continue;
            }
            for &j in &active {
                let v = a[(i, j)].sub(&f.mul(&a[(p, j)]));
                a[(i, j)] = v;
            }
        }
    }
    Inertia::new(pos, neg, n - pos - neg)
}

/// `{x : G(x, u) = 0 ∀u ∈ U}`.
pub fn orth_complement<F: Field>(
    g: &SymmetricForm<F>,
    u: &SubspaceExact<F>,
) -> Result<SubspaceExact<F>, KernelError> {
    if g.dim() != u.ambient() {
        return Err(KernelError::AmbientMismatch(g.dim(), u.ambient()));
    }
    if !g.is_nondegenerate() {
        return Err(KernelError::DegenerateForm);
    }
    let rows: Vec<Vec<F>> = u.basis().iter().map(|b| g.gram.mul_vec(b)).collect();
    if rows.is_empty() {
        return Ok(SubspaceExact::full(g.dim()));
    }
    Ok(SubspaceExact::span(g.dim(), &Matrix::from_rows(rows).kernel()))
}

/// Rational vectors orthogonal to a subspace defined over Q(√D): every
/// condition `G(x, a + b√D) = 0` splits into `G(x, a) = 0` and `G(x, b) = 0`.
pub fn rational_orth_complement<const D: u64>(
    g: &SymmetricForm<Scalar>,
    u: &SubspaceExact<QuadScalar<D>>,
) -> Result<SubspaceExact<Scalar>, KernelError> {
    if g.dim() != u.ambient() {
        return Err(KernelError::AmbientMismatch(g.dim(), u.ambient()));
    }
    if !g.is_nondegenerate() {
        return Err(KernelError::DegenerateForm);
    }
    let mut rows = Vec::new();
    for v in u.basis() {
        let ra: Vec<Scalar> = v.iter().map(|x| x.a.clone()).collect();
        let rb: Vec<Scalar> = v.iter().map(|x| x.b.clone()).collect();
        rows.push(g.gram.mul_vec(&ra));
        rows.push(g.gram.mul_vec(&rb));
    }
    rational_kernel(g.dim(), rows)
}

fn rational_kernel(n: usize, rows: Vec<Vec<Scalar>>) -> Result<SubspaceExact<Scalar>, KernelError> {
    if rows.is_empty() {
        return Ok(SubspaceExact::full(n));
    }
    Ok(SubspaceExact::span(n, &Matrix::from_rows(rows).kernel()))
}

/// Cayley transform `R = (I − S)(I + S)⁻¹` of a `G`-antisymmetric `S`.
pub fn cayley_orthogonal<F: Field>(g: &SymmetricForm<F>, s: &Matrix<F>) -> Result<Matrix<F>, KernelError> {
    let n = g.dim();
    if s.rows() != n || s.cols() != n {
        return Err(KernelError::AmbientMismatch(n, s.rows()));
    }
    let lhs = s.transpose().mul(&g.gram).add(&g.gram.mul(s));
    if !lhs.is_zero() {
        return Err(KernelError::NotAntisymmetric);
    }
    let id = Matrix::identity(n);
    let inv = id.add(s).inverse().ok_or(KernelError::SingularCayley)?;
    Ok(id.sub(s).mul(&inv))
}

/// `G⁻¹ K` for antisymmetric `K` is `G`-antisymmetric; the standard way to
/// produce Cayley parameters.
pub fn antisymmetric_for<F: Field>(g: &SymmetricForm<F>, k: &Matrix<F>) -> Result<Matrix<F>, KernelError> {
    let ginv = g.gram.inverse().ok_or(KernelError::DegenerateForm)?;
    Ok(ginv.mul(k))
}
