//! Weil operators of induced complex structures and the SU(2) decomposition.

use std::collections::BTreeMap;

use crate::exact_kernel::{unit_vec, Matrix, Scalar, SubspaceExact};
use crate::frobenius_core::{GradedEndo, GradedFrobeniusAlgebra};

use super::{HKTriple, HodgeError};

fn cross(a: &[Scalar; 3], b: &[Scalar; 3]) -> [Scalar; 3] {
    [
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

/// The degree-0 derivation for `aI + bJ + cK`.
///
/// On `A_2` it kills the q-orthocomplement of the triple and acts on the frame
/// by `f_k ↦ −2·(dir × e_k)` in frame coordinates. Higher degrees are spanned
/// by products `A_2 · A_{i−2}`, on which the Leibniz rule fixes the value.
pub fn weil_operator(alg: &GradedFrobeniusAlgebra, t: &HKTriple, dir: &[Scalar; 3]) -> Result<GradedEndo, HodgeError> {
    let norm: Scalar = dir.iter().map(|x| x * x).sum();
    if !norm.is_one() {
        return Err(HodgeError::IrrationalDirection);
    }
    let q = alg.reference_form().ok_or(HodgeError::NoReferenceForm)?;
    let b = alg.dim(2);
    let s = t.norm(q);
    let frame = t.frame();
    let mut w2 = Matrix::zeros(b, b);
    for k in 0..3 {
        let mut ek: [Scalar; 3] = [Scalar::zero(), Scalar::zero(), Scalar::zero()];
        ek[k] = Scalar::one();
        let c = cross(dir, &ek);
        let image: Vec<Scalar> = (0..b)
            .map(|r| (0..3).map(|l| &(&c[l] * &frame[l][r]) * &Scalar::from_int(-2)).sum())
            .collect();
        let covec: Vec<Scalar> = q.gram().vec_mul(frame[k]).iter().map(|x| x / &s).collect();
        for r in 0..b {
            if image[r].is_zero() {
                continue;
            }
            for col in 0..b {
                let v = &w2[(r, col)] + &(&image[r] * &covec[col]);
                w2[(r, col)] = v;
            }
        }
    }
    let top = alg.top_degree();
    let mut blocks: Vec<Matrix<Scalar>> = (0..=top).map(|i| Matrix::zeros(alg.dim(i), alg.dim(i))).collect();
    if top >= 2 {
        blocks[2] = w2;
    }
    for deg in (4..=top).step_by(2) {
        let lower = deg - 2;
        let pairs: Vec<(usize, usize)> = (0..b).flat_map(|i| (0..alg.dim(lower)).map(move |j| (i, j))).collect();
        let prods: Vec<Vec<Scalar>> = pairs.iter().map(|&(i, j)| alg.basis_product(2, i, lower, j).unwrap().to_vec()).collect();
        let (_, pivots) = Matrix::from_cols(&prods, alg.dim(deg)).rref();
        if pivots.len() != alg.dim(deg) {
            return Err(HodgeError::LeibnizInconsistent(format!("degree {deg} is not generated by degree 2")));
        }
        let mut pcols = Vec::new();
        let mut wcols = Vec::new();
        for &p in &pivots {
            let (i, j) = pairs[p];
            let wi = blocks[2].col(i);
            let ej = unit_vec(alg.dim(lower), j);
            let wj = blocks[lower].col(j);
            let a = alg.mul_homogeneous(2, &wi, lower, &ej);
            let c = alg.mul_homogeneous(2, &unit_vec(b, i), lower, &wj);
            pcols.push(prods[p].clone());
            wcols.push(a.iter().zip(&c).map(|(u, v)| u + v).collect());
        }
        let pinv = Matrix::from_cols(&pcols, alg.dim(deg)).inverse().expect("pivot products are independent");
        blocks[deg] = Matrix::from_cols(&wcols, alg.dim(deg)).mul(&pinv);
    }
    let w = GradedEndo::from_blocks(alg.dims(), 0, |i| Some(blocks[i].clone()));
    check_leibniz(alg, &w)?;
    Ok(w)
}

fn check_leibniz(alg: &GradedFrobeniusAlgebra, w: &GradedEndo) -> Result<(), HodgeError> {
    let top = alg.top_degree();
    let degs: Vec<(usize, usize)> = (0..=top).flat_map(|i| (i..=top - i).map(move |j| (i, j))).collect();
    let bad = crate::par::map(&degs, |&(i, j)| {
        for a in 0..alg.dim(i) {
            for c in 0..alg.dim(j) {
                let prod = alg.basis_product(i, a, j, c).unwrap();
                let lhs = w.block(i + j).mul_vec(prod);
                let r1 = alg.mul_homogeneous(i, &w.block(i).col(a), j, &unit_vec(alg.dim(j), c));
                let r2 = alg.mul_homogeneous(i, &unit_vec(alg.dim(i), a), j, &w.block(j).col(c));
                if lhs.iter().zip(r1.iter().zip(&r2)).any(|(l, (x, y))| *l != x + y) {
                    return Some(format!("e({i},{a})·e({j},{c})"));
                }
            }
        }
        None
    });
    match bad.into_iter().flatten().next() {
        Some(w) => Err(HodgeError::LeibnizInconsistent(w)),
        None => Ok(()),
    }
}

/// `C = −(W_I² + W_J² + W_K²)`, acting by `w(w+2)` on weight-`w` blocks.
pub fn casimir(alg: &GradedFrobeniusAlgebra, t: &HKTriple) -> Result<GradedEndo, HodgeError> {
    let dirs = super::default_directions();
    let mut c = GradedEndo::zero(alg.dims(), 0);
    for d in &dirs[..3] {
        let w = weil_operator(alg, t, d)?;
        c = c.sub(&w.compose(&w));
    }
    Ok(c)
}

/// Blocks `(degree, weight) ↦ subspace of A_degree`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsotypicDecomposition {
    pub blocks: BTreeMap<(usize, usize), SubspaceExact<Scalar>>,
}

impl IsotypicDecomposition {
    /// `(weight, dimension)` pairs in one degree, weight descending.
    pub fn dims_in_degree(&self, deg: usize) -> Vec<(usize, usize)> {
        let mut v: Vec<(usize, usize)> =
            self.blocks.iter().filter(|((d, _), _)| *d == deg).map(|((_, w), s)| (*w, s.dim())).collect();
        v.sort_by(|a, b| b.0.cmp(&a.0));
        v
    }

    pub fn block(&self, deg: usize, w: usize) -> Option<&SubspaceExact<Scalar>> {
        self.blocks.get(&(deg, w))
    }
}

pub fn su2_isotypic(alg: &GradedFrobeniusAlgebra, t: &HKTriple) -> Result<IsotypicDecomposition, HodgeError> {
    let c = casimir(alg, t)?;
    isotypic_from_casimir(alg, &c)
}

pub(crate) fn isotypic_from_casimir(alg: &GradedFrobeniusAlgebra, c: &GradedEndo) -> Result<IsotypicDecomposition, HodgeError> {
    let mut blocks = BTreeMap::new();
    for deg in (0..=alg.top_degree()).step_by(2) {
        let n = alg.dim(deg);
        let cb = c.block(deg);
        let mut total = 0;
        for w in (0..=deg).step_by(2) {
            let ev = Scalar::from_int((w * (w + 2)) as i64);
            let shifted = cb.sub(&Matrix::identity(n).scale(&ev));
            let ker = shifted.kernel();
            if ker.is_empty() {
                continue;
            }
            total += ker.len();
            blocks.insert((deg, w), SubspaceExact::span(n, &ker));
        }
        if total != n {
            return Err(HodgeError::NonIntegralSpectrum(deg));
        }
    }
    Ok(IsotypicDecomposition { blocks })
}
