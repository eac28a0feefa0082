//! Lefschetz elements and their dual operators.

use crate::exact_kernel::{Matrix, Scalar, SubspaceExact};

use super::{FrobeniusError, GradedEndo, GradedFrobeniusAlgebra};

/// `L_a^k` as a matrix `A_j → A_{j+2k}`.
pub fn lefschetz_power(alg: &GradedFrobeniusAlgebra, a: &[Scalar], j: usize, k: usize) -> Matrix<Scalar> {
    let mut m = Matrix::identity(alg.dim(j));
    for s in 0..k {
        let src = j + 2 * s;
        if src + 2 > alg.top_degree() {
            return Matrix::zeros(0, alg.dim(j));
        }
        m = alg.mult_block(2, a, src).mul(&m);
    }
    m
}

/// Hard-Lefschetz rank test: `L_a^k : A_{d−k} → A_{d+k}` invertible for `k = 1..d`.
pub fn lefschetz_type(alg: &GradedFrobeniusAlgebra, a: &[Scalar]) -> bool {
    let d = alg.middle();
    (1..=d).all(|k| {
        let (lo, hi) = (d - k, d + k);
        if alg.dim(lo) != alg.dim(hi) {
            return false;
        }
        if alg.dim(lo) == 0 {
            return true;
        }
        let m = lefschetz_power(alg, a, lo, k);
        m.rows() == m.cols() && m.rank() == m.rows()
    })
}

/// `Λ_a`: the unique degree −2 solution of `[L_a, X] = H`, found by solving the
/// linear system on the whole degree −2 block space. All triple relations are
/// re-verified before returning.
pub fn lefschetz_dual(alg: &GradedFrobeniusAlgebra, a: &[Scalar]) -> Result<GradedEndo, FrobeniusError> {
    let dims = alg.dims();
    let l = GradedEndo::multiplication(alg, a);
    let h = GradedEndo::grading(dims);
    let n = GradedEndo::flat_len(dims, -2);
    let rhs = h.flatten();
    let cols: Vec<Vec<Scalar>> = crate::par::map_range(n, |k| {
        let mut flat = vec![Scalar::zero(); n];
        flat[k] = Scalar::one();
        l.bracket(&GradedEndo::from_flat(dims, -2, &flat)).flatten()
    });
    let system = Matrix::from_cols(&cols, rhs.len());
    let x = system.solve(&rhs).ok_or(FrobeniusError::NotLefschetzType)?;
    assert!(system.kernel().is_empty(), "dual operator is not unique");
    let lam = GradedEndo::from_flat(dims, -2, &x);
    verify_triple(&l, &h, &lam)?;
    Ok(lam)
}

/// Second route to `Λ_a` through the primitive decomposition
/// `A_i = ⊕_k L^k P_{i−2k}` with `Λ(L^k p) = k(r−k+1)·L^{k−1}p` on a string of
/// length `r+1`.
pub fn lefschetz_dual_primitive(alg: &GradedFrobeniusAlgebra, a: &[Scalar]) -> Result<GradedEndo, FrobeniusError> {
    let d = alg.middle();
    let top = alg.top_degree();
    let dims = alg.dims().to_vec();
    let prims: Vec<Vec<Vec<Scalar>>> = (0..=d)
        .map(|j| {
            let r = d - j;
            let m = lefschetz_power(alg, a, j, r + 1);
            if m.rows() == 0 {
                SubspaceExact::full(alg.dim(j)).basis()
            } else {
                m.kernel()
            }
        })
        .collect();
    let mut blocks = Vec::new();
    for i in 0..=top {
        let mut bcols = Vec::new();
        let mut ccols = Vec::new();
        for k in 0..=i / 2 {
            let j = i - 2 * k;
            if j > d || k > d - j {
                continue;
            }
            let r = d - j;
            let lk = lefschetz_power(alg, a, j, k);
            let lk1 = if k > 0 { Some(lefschetz_power(alg, a, j, k - 1)) } else { None };
            for p in &prims[j] {
                bcols.push(lk.mul_vec(p));
                let below = if i >= 2 { alg.dim(i - 2) } else { 0 };
                ccols.push(match &lk1 {
                    Some(m) => {
                        let c = Scalar::from_int((k * (r - k + 1)) as i64);
                        m.mul_vec(p).iter().map(|x| x * &c).collect()
                    }
                    None => vec![Scalar::zero(); below],
                });
            }
        }
        if bcols.len() != alg.dim(i) {
            return Err(FrobeniusError::NotLefschetzType);
        }
        let b = Matrix::from_cols(&bcols, alg.dim(i));
        let binv = b.inverse().ok_or(FrobeniusError::NotLefschetzType)?;
        let below = if i >= 2 { alg.dim(i - 2) } else { 0 };
        blocks.push(Matrix::from_cols(&ccols, below).mul(&binv));
    }
    let lam = GradedEndo::from_blocks(&dims, -2, |i| (i >= 2).then(|| blocks[i].clone()));
    let l = GradedEndo::multiplication(alg, a);
    verify_triple(&l, &GradedEndo::grading(&dims), &lam)?;
    Ok(lam)
}

fn verify_triple(l: &GradedEndo, h: &GradedEndo, lam: &GradedEndo) -> Result<(), FrobeniusError> {
    let two = Scalar::from_int(2);
    let ok = l.bracket(lam) == *h
        && h.bracket(l) == l.scale(&two)
        && h.bracket(lam) == lam.scale(&-two);
    if ok {
        Ok(())
    } else {
        Err(FrobeniusError::NotLefschetzType)
    }
}
