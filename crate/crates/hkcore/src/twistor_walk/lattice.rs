//! Integral lattices cut out by period conditions.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::exact_kernel::{denominator_lcm, Scalar, SubspaceExact, Q3};
use crate::model_forge::IntegralLattice;

use super::{PeriodPoint, TwistorError, TwistorPath, TwistorPlane};

/// A saturated sublattice of `Z^b`, stored in Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct NSLattice {
    pub ambient: usize,
    pub basis: Vec<Vec<i64>>,
}

impl NSLattice {
    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn zero(ambient: usize) -> Self {
        NSLattice { ambient, basis: Vec::new() }
    }

    /// Saturation of the span of the given integer vectors.
    pub fn saturated_span(ambient: usize, gens: &[Vec<i64>]) -> Self {
        let sub = SubspaceExact::span(
            ambient,
            &gens.iter().map(|g| g.iter().map(|&x| Scalar::from_int(x)).collect()).collect::<Vec<Vec<Scalar>>>(),
        );
        let conditions = sub.annihilator().basis();
        from_big(ambient, integer_kernel(&conditions, ambient))
    }

    pub fn rational_span(&self) -> SubspaceExact<Scalar> {
        SubspaceExact::span(
            self.ambient,
            &self.basis.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect::<Vec<_>>(),
        )
    }

    pub fn contains_lattice(&self, o: &NSLattice) -> bool {
        self.rational_span().contains_subspace(&o.rational_span())
    }
}

fn to_int_row(row: &[Scalar]) -> Vec<BigInt> {
    let l = denominator_lcm(row);
    row.iter().map(|x| (x * &Scalar::from_bigint(l.clone())).numer()).collect()
}

/// Integer solutions of the rational conditions `rows · λ = 0`, as a basis of
/// the (automatically saturated) kernel lattice.
fn integer_kernel(rows: &[Vec<Scalar>], n: usize) -> Vec<Vec<BigInt>> {
    let a: Vec<Vec<BigInt>> = rows.iter().map(|r| to_int_row(r)).collect();
    let mut cols: Vec<Vec<BigInt>> = (0..n).map(|j| a.iter().map(|r| r[j].clone()).collect()).collect();
    let mut u: Vec<Vec<BigInt>> =
        (0..n).map(|j| (0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect()).collect();
    let mut c = 0;
    for i in 0..a.len() {
        loop {
            let best = (c..n).filter(|&j| !cols[j][i].is_zero()).min_by_key(|&j| cols[j][i].abs());
            let Some(p) = best else { break };
            cols.swap(c, p);
            u.swap(c, p);
            let mut clean = true;
            for j in c + 1..n {
                if cols[j][i].is_zero() {
                    continue;
                }
                let q = cols[j][i].div_floor(&cols[c][i]);
                for r in 0..a.len() {
                    let d = &q * &cols[c][r];
                    cols[j][r] -= d;
                }
                for r in 0..n {
                    let d = &q * &u[c][r];
                    u[j][r] -= d;
                }
                if !cols[j][i].is_zero() {
                    clean = false;
                }
            }
            if clean {
                c += 1;
                break;
            }
        }
    }
    u[c..].to_vec()
}

/// Row Hermite normal form with positive pivots and reduced entries above.
fn hermite(mut rows: Vec<Vec<BigInt>>, n: usize) -> Vec<Vec<BigInt>> {
    let mut r = 0;
    for col in 0..n {
        if r == rows.len() {
            break;
        }
        loop {
            let best = (r..rows.len()).filter(|&i| !rows[i][col].is_zero()).min_by_key(|&i| rows[i][col].abs());
            let Some(p) = best else { break };
            rows.swap(r, p);
            let mut clean = true;
            for i in r + 1..rows.len() {
                if rows[i][col].is_zero() {
                    continue;
                }
                let q = rows[i][col].div_floor(&rows[r][col]);
                for k in 0..n {
                    let d = &q * &rows[r][k];
                    rows[i][k] -= d;
                }
                if !rows[i][col].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if r < rows.len() && !rows[r][col].is_zero() {
            if rows[r][col].is_negative() {
                for x in rows[r].iter_mut() {
                    *x = -x.clone();
                }
            }
            for i in 0..r {
                let q = rows[i][col].div_floor(&rows[r][col]);
                if q.is_zero() {
                    continue;
                }
                for k in 0..n {
                    let d = &q * &rows[r][k];
                    rows[i][k] -= d;
                }
            }
            r += 1;
        }
    }
    rows.truncate(r);
    rows
}

fn from_big(ambient: usize, gens: Vec<Vec<BigInt>>) -> NSLattice {
    let h = hermite(gens, ambient);
    NSLattice {
        ambient,
        basis: h.iter().map(|r| r.iter().map(|x| x.to_i64().expect("lattice entry fits in i64")).collect()).collect(),
    }
}

fn gram_rows(lat: &IntegralLattice, vecs: &[&[Q3]]) -> Vec<Vec<Scalar>> {
    let g = lat.form();
    let mut rows = Vec::new();
    for v in vecs {
        let a: Vec<Scalar> = v.iter().map(|x| x.a.clone()).collect();
        let b: Vec<Scalar> = v.iter().map(|x| x.b.clone()).collect();
        rows.push(g.gram().mul_vec(&a));
        rows.push(g.gram().mul_vec(&b));
    }
    rows.retain(|r| r.iter().any(|x| !x.is_zero()));
    rows
}

/// Integral classes orthogonal to both `u` and `v`, with each condition over
/// Q(√3) split into its rational and irrational parts.
pub fn neron_severi(lat: &IntegralLattice, l: &PeriodPoint) -> NSLattice {
    let rows = gram_rows(lat, &[&l.u, &l.v]);
    from_big(lat.rank(), integer_kernel(&rows, lat.rank()))
}

/// `Λ ∩ W^⊥`.
pub fn lattice_perp(lat: &IntegralLattice, w: &TwistorPlane) -> NSLattice {
    let f = w.frame();
    let rows = gram_rows(lat, &[&f[0], &f[1], &f[2]]);
    from_big(lat.rank(), integer_kernel(&rows, lat.rank()))
}

/// Degree-2 general type: `NS(l) = Λ ∩ W^⊥`.
pub fn general_type2(lat: &IntegralLattice, w: &TwistorPlane, l: &PeriodPoint) -> Result<bool, TwistorError> {
    if !w.contains(&l.u) || !w.contains(&l.v) {
        return Err(TwistorError::PeriodNotOnLine);
    }
    let ns = neron_severi(lat, l);
    let perp = lattice_perp(lat, w);
    assert!(ns.contains_lattice(&perp), "Λ ∩ W^⊥ is not contained in NS(l)");
    Ok(ns == perp)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityEntry {
    pub label: String,
    pub pass: bool,
}

/// Verdicts labelled `general_type(degree-2)`, one per (period, edge) pair.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AdmissibilityReport {
    pub entries: Vec<AdmissibilityEntry>,
    pub pass: bool,
}

pub fn is_admissible(lat: &IntegralLattice, path: &TwistorPath) -> AdmissibilityReport {
    let mut entries = Vec::new();
    let check = |entries: &mut Vec<AdmissibilityEntry>, label: String, w: &TwistorPlane, p: &PeriodPoint| {
        let pass = general_type2(lat, w, p).unwrap_or(false);
        entries.push(AdmissibilityEntry { label: format!("general_type(degree-2) {label}"), pass });
    };
    match &path.endpoints {
        Some((i0, i1)) => {
            check(&mut entries, "start vs edge 0".into(), &path.edges[0], i0);
            check(&mut entries, format!("end vs edge {}", path.len()), path.edges.last().unwrap(), i1);
        }
        None => entries.push(AdmissibilityEntry { label: "endpoints present".into(), pass: false }),
    }
    for (k, v) in path.vertices.iter().enumerate() {
        match v {
            Some(p) => {
                check(&mut entries, format!("vertex {k} vs edge {k}"), &path.edges[k], p);
                check(&mut entries, format!("vertex {k} vs edge {}", k + 1), &path.edges[k + 1], p);
            }
            None => entries.push(AdmissibilityEntry { label: format!("vertex {k} present"), pass: false }),
        }
    }
    let pass = entries.iter().all(|e| e.pass);
    AdmissibilityReport { entries, pass }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn integer_kernel_is_saturated() {
        let rows = vec![crate::exact_kernel::qvec(&[2, 4, 0]), crate::exact_kernel::qvec(&[0, 0, 3])];
        let k = from_big(3, integer_kernel(&rows, 3));
        assert_eq!(k.basis, vec![vec![2, -1, 0]]);
        let s = NSLattice::saturated_span(3, &[vec![2, 4, 0]]);
        assert_eq!(s.basis, vec![vec![1, 2, 0]]);
    }

    #[test]
    fn hermite_is_canonical() {
        let a = from_big(3, vec![vec![1.into(), 1.into(), 0.into()], vec![0.into(), 1.into(), 1.into()]]);
        let b = from_big(3, vec![vec![1.into(), 2.into(), 1.into()], vec![0.into(), 1.into(), 1.into()]]);
        assert_eq!(a, b);
    }
}
