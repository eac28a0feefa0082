//! Homogeneous endomorphisms of a graded vector space.

use crate::exact_kernel::{Matrix, Scalar};

use super::GradedFrobeniusAlgebra;

/// A linear map of pure degree `δ`, stored as one block `A_i → A_{i+δ}` per
/// source degree. Blocks whose target is out of range have zero rows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GradedEndo {
    degree: i32,
    dims: Vec<usize>,
    blocks: Vec<Matrix<Scalar>>,
}

fn target_dim(dims: &[usize], i: usize, d: i32) -> usize {
    let t = i as i64 + d as i64;
    if t < 0 || t as usize >= dims.len() {
        0
    } else {
        dims[t as usize]
    }
}

impl GradedEndo {
    pub fn zero(dims: &[usize], degree: i32) -> Self {
        let blocks = (0..dims.len()).map(|i| Matrix::zeros(target_dim(dims, i, degree), dims[i])).collect();
        GradedEndo { degree, dims: dims.to_vec(), blocks }
    }

    /// Builds from a function giving the block on each source degree.
    pub fn from_blocks(dims: &[usize], degree: i32, mut f: impl FnMut(usize) -> Option<Matrix<Scalar>>) -> Self {
        let mut e = Self::zero(dims, degree);
        for i in 0..dims.len() {
            if let Some(m) = f(i) {
                assert_eq!((m.rows(), m.cols()), (e.blocks[i].rows(), e.blocks[i].cols()), "block {i} shape");
                e.blocks[i] = m;
            }
        }
        e
    }

    /// Grading operator `H = (i − d)·Id` on `A_i`.
    pub fn grading(dims: &[usize]) -> Self {
        let d = (dims.len() as i64 - 1) / 2;
        Self::from_blocks(dims, 0, |i| {
            Some(Matrix::identity(dims[i]).scale(&Scalar::from_int(i as i64 - d)))
        })
    }

    pub fn identity(dims: &[usize]) -> Self {
        Self::from_blocks(dims, 0, |i| Some(Matrix::identity(dims[i])))
    }

    /// Multiplication by `a ∈ A_2`.
    pub fn multiplication(alg: &GradedFrobeniusAlgebra, a: &[Scalar]) -> Self {
        let top = alg.top_degree();
        Self::from_blocks(alg.dims(), 2, |j| (j + 2 <= top).then(|| alg.mult_block(2, a, j)))
    }

    pub fn degree(&self) -> i32 {
        self.degree
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn block(&self, i: usize) -> &Matrix<Scalar> {
        &self.blocks[i]
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.iter().all(|b| b.is_zero())
    }

    fn check(&self, o: &Self) {
        assert_eq!(self.dims, o.dims, "endomorphisms of different spaces");
    }

    pub fn add(&self, o: &Self) -> Self {
        self.check(o);
        assert_eq!(self.degree, o.degree, "adding endomorphisms of different degrees");
        let blocks = self.blocks.iter().zip(&o.blocks).map(|(a, b)| a.add(b)).collect();
        GradedEndo { degree: self.degree, dims: self.dims.clone(), blocks }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.scale(&-Scalar::one()))
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        let blocks = self.blocks.iter().map(|a| a.scale(s)).collect();
        GradedEndo { degree: self.degree, dims: self.dims.clone(), blocks }
    }

    /// `self ∘ o`.
    pub fn compose(&self, o: &Self) -> Self {
        self.check(o);
        let degree = self.degree + o.degree;
        let mut out = Self::zero(&self.dims, degree);
        for i in 0..self.dims.len() {
            let mid = i as i64 + o.degree as i64;
            if mid < 0 || mid as usize >= self.dims.len() || out.blocks[i].rows() == 0 {
                continue;
            }
            out.blocks[i] = self.blocks[mid as usize].mul(&o.blocks[i]);
        }
        out
    }

    /// Commutator `[self, o]`.
    pub fn bracket(&self, o: &Self) -> Self {
        self.compose(o).sub(&o.compose(self))
    }

    /// Applies the map to a full vector.
    pub fn apply(&self, v: &[Scalar]) -> Vec<Scalar> {
        let offs = offsets(&self.dims);
        let mut out = vec![Scalar::zero(); *offs.last().unwrap()];
        for i in 0..self.dims.len() {
            let t = i as i64 + self.degree as i64;
            if t < 0 || t as usize >= self.dims.len() {
                continue;
            }
            let t = t as usize;
            let y = self.blocks[i].mul_vec(&v[offs[i]..offs[i + 1]]);
            for (k, x) in y.into_iter().enumerate() {
                out[offs[t] + k] += &x;
            }
        }
        out
    }

    /// Entries of all blocks, source degree ascending, row-major.
    pub fn flatten(&self) -> Vec<Scalar> {
        self.blocks.iter().flat_map(|b| b.as_slice().iter().cloned()).collect()
    }

    pub fn from_flat(dims: &[usize], degree: i32, flat: &[Scalar]) -> Self {
        let mut e = Self::zero(dims, degree);
        let mut pos = 0;
        for b in e.blocks.iter_mut() {
            let n = b.rows() * b.cols();
            let rows: Vec<Vec<Scalar>> = (0..b.rows()).map(|r| flat[pos + r * b.cols()..pos + (r + 1) * b.cols()].to_vec()).collect();
            if n > 0 {
                *b = Matrix::from_rows(rows);
            }
            pos += n;
        }
        assert_eq!(pos, flat.len(), "flat length mismatch");
        e
    }

    pub fn flat_len(dims: &[usize], degree: i32) -> usize {
        (0..dims.len()).map(|i| target_dim(dims, i, degree) * dims[i]).sum()
    }

    /// The full `N × N` matrix on `⊕ A_i`.
    pub fn to_matrix(&self) -> Matrix<Scalar> {
        let offs = offsets(&self.dims);
        let n = *offs.last().unwrap();
        let mut m = Matrix::zeros(n, n);
        for (i, b) in self.blocks.iter().enumerate() {
            if b.rows() == 0 {
                continue;
            }
            let t = (i as i64 + self.degree as i64) as usize;
            for r in 0..b.rows() {
                for c in 0..b.cols() {
                    m[(offs[t] + r, offs[i] + c)] = b[(r, c)].clone();
                }
            }
        }
        m
    }
}

pub(crate) fn offsets(dims: &[usize]) -> Vec<usize> {
    let mut o = vec![0];
    for d in dims {
        o.push(o.last().unwrap() + d);
    }
    o
}

/// The grading operator `H` of a graded algebra.
pub fn grading_operator(alg: &GradedFrobeniusAlgebra) -> GradedEndo {
    GradedEndo::grading(alg.dims())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flatten_round_trip() {
        let dims = [1, 0, 3, 0, 1];
        let mut k = 0;
        let flat: Vec<Scalar> = (0..GradedEndo::flat_len(&dims, 2))
            .map(|_| {
                k += 1;
                Scalar::from_int(k)
            })
            .collect();
        let e = GradedEndo::from_flat(&dims, 2, &flat);
        assert_eq!(e.flatten(), flat);
    }

    #[test]
    fn grading_commutes_with_degree_zero() {
        let dims = [1, 0, 2, 0, 1];
        let h = GradedEndo::grading(&dims);
        assert!(h.bracket(&GradedEndo::identity(&dims)).is_zero());
        assert_eq!(h.block(0)[(0, 0)], Scalar::from_int(-2));
        assert_eq!(h.block(4)[(0, 0)], Scalar::from_int(2));
    }
}
