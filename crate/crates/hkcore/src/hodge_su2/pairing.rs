//! The extracted degree-2 form and the graded pairing built from primitive
//! classes.

use std::collections::BTreeMap;

use crate::exact_kernel::{factorial, inertia_exact, Matrix, Scalar, SymmetricForm};
use crate::frobenius_core::{lefschetz_power, GradedEndo, GradedFrobeniusAlgebra};

use super::weil::isotypic_from_casimir;
use super::{default_directions, weil_operator, HKTriple, HodgeError};

fn triple_weils(alg: &GradedFrobeniusAlgebra, t: &HKTriple) -> Result<[GradedEndo; 3], HodgeError> {
    let d = default_directions();
    Ok([weil_operator(alg, t, &d[0])?, weil_operator(alg, t, &d[1])?, weil_operator(alg, t, &d[2])?])
}

/// `λ(u·v·w)` for `u, v ∈ A_i` and a fixed full element `w`.
fn trace_gram(alg: &GradedFrobeniusAlgebra, deg: usize, vecs: &[Vec<Scalar>], w: &[Scalar]) -> Matrix<Scalar> {
    let n = vecs.len();
    let full: Vec<Vec<Scalar>> = vecs.iter().map(|v| alg.embed(deg, v)).collect();
    let mut g = Matrix::zeros(n, n);
    for a in 0..n {
        let aw = alg.mul(&full[a], w);
        for c in a..n {
            let v = alg.trace_of(&alg.mul(&aw, &full[c]));
            g[(a, c)] = v.clone();
            g[(c, a)] = v;
        }
    }
    g
}

/// Form on `A_2`: `λ(u·v·x^{2m−2})` on the SU(2)-invariant part, the common
/// value `λ(y²·x^{2m−2})` on the span of the triple, and the two parts
/// orthogonal.
pub fn bb_extract(alg: &GradedFrobeniusAlgebra, t: &HKTriple) -> Result<SymmetricForm<Scalar>, HodgeError> {
    let b = alg.dim(2);
    let ws = triple_weils(alg, t)?;
    let stacked = ws[0].block(2).vstack(ws[1].block(2)).vstack(ws[2].block(2));
    let inv = stacked.kernel();
    let half = alg.top_degree() / 2;
    let xpow = alg.power(&alg.embed(2, &t.x), half - 2);
    let ginv = trace_gram(alg, 2, &inv, &xpow);
    let plus = trace_gram(alg, 2, std::slice::from_ref(&t.y), &xpow)[(0, 0)].clone();
    let mut cols: Vec<Vec<Scalar>> = vec![t.x.clone(), t.y.clone(), t.z.clone()];
    cols.extend(inv.iter().cloned());
    let m = Matrix::from_cols(&cols, b);
    let minv = m.inverse().ok_or_else(|| HodgeError::IndefiniteBlock("triple meets the invariant part".into()))?;
    let mut g = Matrix::zeros(b, b);
    for k in 0..3 {
        g[(k, k)] = plus.clone();
    }
    for r in 0..inv.len() {
        for c in 0..inv.len() {
            g[(3 + r, 3 + c)] = ginv[(r, c)].clone();
        }
    }
    Ok(SymmetricForm::new(minv.transpose().mul(&g).mul(&minv)).expect("congruent to a symmetric matrix"))
}

/// Per-degree symmetric forms on `A_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedPairing {
    pub forms: BTreeMap<usize, SymmetricForm<Scalar>>,
}

/// Graded pairing: on a Lefschetz basis `L^j p` (`p` primitive in degree `2k'`,
/// split by the eigenvalues of `W_I²`) the form is block diagonal with blocks
/// `±(j!/(r−j)!)·λ(p·p'·x^r)` made positive; the result is then twisted by
/// `(−1)^{(i−w)/2}` on the weight-`w` isotypic blocks of `A_{2i}`.
pub fn generalized_pairing(alg: &GradedFrobeniusAlgebra, t: &HKTriple) -> Result<GradedPairing, HodgeError> {
    let ws = triple_weils(alg, t)?;
    let mut cas = GradedEndo::zero(alg.dims(), 0);
    for w in &ws {
        cas = cas.sub(&w.compose(w));
    }
    let iso = isotypic_from_casimir(alg, &cas)?;
    let wi2 = ws[0].compose(&ws[0]);
    let m = alg.top_degree() / 4;
    let xfull = alg.embed(2, &t.x);
    let degrees: Vec<usize> = (0..=2 * m).collect();
    let results = crate::par::map(&degrees, |&k| -> Result<(usize, SymmetricForm<Scalar>), HodgeError> {
        let deg = 2 * k;
        let n = alg.dim(deg);
        let mut vcols: Vec<Vec<Scalar>> = Vec::new();
        let mut grams: Vec<Matrix<Scalar>> = Vec::new();
        for j in 0..=k {
            let kp = k - j;
            if kp > m {
                continue;
            }
            let r = 2 * m - 2 * kp;
            if j > r {
                continue;
            }
            let pdeg = 2 * kp;
            let np = alg.dim(pdeg);
            let kill = lefschetz_power(alg, &t.x, pdeg, r + 1);
            let prim: Vec<Vec<Scalar>> = if kill.rows() == 0 {
                (0..np).map(|i| crate::exact_kernel::unit_vec(np, i)).collect()
            } else {
                kill.kernel()
            };
            if prim.is_empty() {
                continue;
            }
            let pmat = Matrix::from_cols(&prim, np);
            let w2 = wi2.block(pdeg);
            let xr = alg.power(&xfull, r);
            let lj = lefschetz_power(alg, &t.x, pdeg, j);
            for tt in 0..=pdeg {
                let val = Scalar::from_int(-((tt * tt) as i64));
                let shifted = w2.sub(&Matrix::identity(np).scale(&val)).mul(&pmat);
                let coef = shifted.kernel();
                if coef.is_empty() {
                    continue;
                }
                let basis: Vec<Vec<Scalar>> = coef.iter().map(|c| pmat.mul_vec(c)).collect();
                let g = trace_gram(alg, pdeg, &basis, &xr);
                let inertia = inertia_exact(&SymmetricForm::new(g.clone()).expect("symmetric"));
                let sign = if inertia.n_pos == g.rows() {
                    Scalar::one()
                } else if inertia.n_neg == g.rows() {
                    -Scalar::one()
                } else {
                    return Err(HodgeError::IndefiniteBlock(format!(
                        "degree {pdeg}, string step {j}, W_I² eigenvalue {val}: inertia {inertia}"
                    )));
                };
                let fac = &factorial(j as u32) / &factorial((r - j) as u32);
                grams.push(g.scale(&(&sign * &fac)));
                vcols.extend(basis.iter().map(|p| lj.mul_vec(p)));
            }
        }
        if vcols.len() != n {
            return Err(HodgeError::IndefiniteBlock(format!("Lefschetz basis of degree {deg} has {} vectors, expected {n}", vcols.len())));
        }
        let v = Matrix::from_cols(&vcols, n);
        let vinv = v.inverse().ok_or_else(|| HodgeError::IndefiniteBlock(format!("Lefschetz basis of degree {deg} is dependent")))?;
        let mut gb = Matrix::zeros(n, n);
        let mut at = 0;
        for g in &grams {
            for r in 0..g.rows() {
                for c in 0..g.cols() {
                    gb[(at + r, at + c)] = g[(r, c)].clone();
                }
            }
            at += g.rows();
        }
        let her = vinv.transpose().mul(&gb).mul(&vinv);
        let mut ecols = Vec::new();
        let mut signs = Vec::new();
        for w in (0..=deg).step_by(2) {
            if let Some(s) = iso.block(deg, w) {
                let sg = if (k - w / 2) % 2 == 0 { Scalar::one() } else { -Scalar::one() };
                for v in s.basis() {
                    ecols.push(v);
                    signs.push(sg.clone());
                }
            }
        }
        let e = Matrix::from_cols(&ecols, n);
        let s = e.mul(&Matrix::diag(&signs)).mul(&e.inverse().expect("isotypic blocks span"));
        let p = her.mul(&s);
        let form = SymmetricForm::new(p)
            .map_err(|_| HodgeError::IndefiniteBlock(format!("degree {deg}: isotypic blocks are not orthogonal")))?;
        Ok((deg, form))
    });
    let mut forms = BTreeMap::new();
    for r in results {
        let (d, f) = r?;
        forms.insert(d, f);
    }
    Ok(GradedPairing { forms })
}
