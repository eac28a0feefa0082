//! Subspaces in canonical reduced row-echelon form.

use super::{Field, KernelError, Matrix};

/// A linear subspace of `F^n`, stored as its unique RREF basis.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SubspaceExact<F: Field> {
    ambient: usize,
    basis: Matrix<F>,
}

impl<F: Field> SubspaceExact<F> {
    pub fn zero(ambient: usize) -> Self {
        SubspaceExact { ambient, basis: Matrix::zeros(0, ambient) }
    }

    pub fn full(ambient: usize) -> Self {
        SubspaceExact { ambient, basis: Matrix::identity(ambient) }
    }

    pub fn span(ambient: usize, vecs: &[Vec<F>]) -> Self {
        if vecs.is_empty() {
            return Self::zero(ambient);
        }
        for v in vecs {
            assert_eq!(v.len(), ambient, "vector length differs from ambient dimension");
        }
        Self::from_matrix(Matrix::from_rows(vecs.to_vec()))
    }

    fn from_matrix(m: Matrix<F>) -> Self {
        let ambient = m.cols();
        let (r, pivots) = m.rref();
        let keep: Vec<usize> = (0..pivots.len()).collect();
        let all: Vec<usize> = (0..ambient).collect();
        SubspaceExact { ambient, basis: r.submatrix(&keep, &all) }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn basis(&self) -> Vec<Vec<F>> {
        self.basis.to_rows()
    }

    pub fn basis_matrix(&self) -> &Matrix<F> {
        &self.basis
    }

    /// Pivot columns of the canonical basis.
    pub fn pivots(&self) -> Vec<usize> {
        (0..self.dim())
            .map(|r| self.basis.row(r).iter().position(|x| !x.is_zero()).expect("nonzero row"))
            .collect()
    }

    pub fn contains(&self, v: &[F]) -> bool {
        self.coordinates(v).is_some()
    }

    /// Coordinates of `v` in the canonical basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[F]) -> Option<Vec<F>> {
        assert_eq!(v.len(), self.ambient);
        let piv = self.pivots();
        let coords: Vec<F> = piv.iter().map(|&p| v[p].clone()).collect();
        let recon = self.basis.vec_mul(&coords);
        (recon == v).then_some(coords)
    }

    pub fn contains_subspace(&self, o: &Self) -> bool {
        o.basis().iter().all(|v| self.contains(v))
    }

    pub fn sum(&self, o: &Self) -> Result<Self, KernelError> {
        self.check(o)?;
        Ok(Self::from_matrix(self.basis.vstack(&o.basis)))
    }

    /// `{x : ⟨x, u⟩ = 0 for all u}` under the standard dot product.
    pub fn annihilator(&self) -> Self {
        Self::span(self.ambient, &self.basis.kernel())
    }

    /// Intersection via annihilators: `U ∩ W = ann(ann U + ann W)`.
    pub fn intersect(&self, o: &Self) -> Result<Self, KernelError> {
        self.check(o)?;
        Ok(self.annihilator().sum(&o.annihilator())?.annihilator())
    }

    fn check(&self, o: &Self) -> Result<(), KernelError> {
        if self.ambient != o.ambient {
            return Err(KernelError::AmbientMismatch(self.ambient, o.ambient));
        }
        Ok(())
    }

    pub fn map_field<G: Field>(&self, f: impl Fn(&F) -> G) -> SubspaceExact<G> {
        SubspaceExact::from_matrix(self.basis.map(f))
    }
}

/// Canonical intersection of two subspaces.
pub fn intersect_subspaces<F: Field>(
    u: &SubspaceExact<F>,
    w: &SubspaceExact<F>,
) -> Result<SubspaceExact<F>, KernelError> {
    u.intersect(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_kernel::Scalar;

    fn e(n: usize, i: usize) -> Vec<Scalar> {
        crate::exact_kernel::unit_vec(n, i)
    }

    fn v(xs: &[i64]) -> Vec<Scalar> {
        xs.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    #[test]
    fn coordinate_planes() {
        let u = SubspaceExact::span(4, &[e(4, 0), e(4, 1)]);
        let w = SubspaceExact::span(4, &[e(4, 1), e(4, 2)]);
        assert_eq!(u.intersect(&w).unwrap(), SubspaceExact::span(4, &[e(4, 1)]));
        assert_eq!(u.intersect(&u).unwrap(), u);
    }

    #[test]
    fn stacked_rank_example() {
        let u = SubspaceExact::span(4, &[e(4, 0), e(4, 1), e(4, 2)]);
        let w = SubspaceExact::span(4, &[e(4, 0), e(4, 1), v(&[0, 0, 2, 1])]);
        assert_eq!(u.intersect(&w).unwrap(), SubspaceExact::span(4, &[e(4, 0), e(4, 1)]));
    }

    #[test]
    fn ambient_mismatch() {
        let u = SubspaceExact::<Scalar>::full(3);
        let w = SubspaceExact::<Scalar>::full(4);
        assert!(u.intersect(&w).is_err());
    }

    #[test]
    fn coordinates_reconstruct() {
        let u = SubspaceExact::span(3, &[v(&[1, 2, 3]), v(&[0, 1, 1])]);
        let x = v(&[2, 5, 7]);
        let c = u.coordinates(&x).unwrap();
        assert_eq!(crate::exact_kernel::lin_comb(&c, &u.basis()), x);
        assert!(!u.contains(&v(&[0, 0, 1])));
    }
}
