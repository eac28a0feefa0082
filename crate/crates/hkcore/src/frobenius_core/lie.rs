//! Lie subalgebras of `End(A)` spanned by homogeneous endomorphisms.

use std::collections::BTreeMap;

use crate::exact_kernel::{inertia_exact, Inertia, Matrix, Scalar, SymmetricForm};

use super::GradedEndo;

/// Incrementally maintained reduced row-echelon basis.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
struct Echelon {
    rows: Vec<Vec<Scalar>>,
    pivots: Vec<usize>,
}

impl Echelon {
    fn reduce(&self, v: &mut [Scalar]) {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if v[p].is_zero() {
                continue;
            }
            let f = v[p].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x -= &(&f * r);
                }
            }
        }
    }

    /// Adds `v` if it is independent; returns whether the span grew.
    fn insert(&mut self, mut v: Vec<Scalar>) -> bool {
        self.reduce(&mut v);
        let Some(p) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = v[p].inv();
        for x in v.iter_mut() {
            *x *= &inv;
        }
        for row in self.rows.iter_mut() {
            if row[p].is_zero() {
                continue;
            }
            let f = row[p].clone();
            for (x, r) in row.iter_mut().zip(&v) {
                if !r.is_zero() {
                    *x -= &(&f * r);
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.pivots.insert(at, p);
        self.rows.insert(at, v);
        true
    }

    fn coordinates(&self, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let c: Vec<Scalar> = self.pivots.iter().map(|&p| v[p].clone()).collect();
        let mut rest = v.to_vec();
        self.reduce(&mut rest);
        rest.iter().all(|x| x.is_zero()).then_some(c)
    }
}

/// A linear span of homogeneous endomorphisms with a canonical basis,
/// kept separately for each map degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieSubalgebra {
    dims: Vec<usize>,
    parts: BTreeMap<i32, Echelon>,
    closed: bool,
}

impl LieSubalgebra {
    pub fn empty(dims: &[usize]) -> Self {
        LieSubalgebra { dims: dims.to_vec(), parts: BTreeMap::new(), closed: true }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.parts.values().map(|e| e.rows.len()).sum()
    }

    pub fn is_closed(&self) -> bool {
        self.closed
    }

    fn insert(&mut self, x: &GradedEndo) -> bool {
        assert_eq!(x.dims(), self.dims.as_slice(), "endomorphism of a different space");
        if x.is_zero() {
            return false;
        }
        let grew = self.parts.entry(x.degree()).or_default().insert(x.flatten());
        if grew {
            self.closed = false;
        }
        grew
    }

    /// Canonical basis, degree ascending.
    pub fn basis(&self) -> Vec<GradedEndo> {
        self.parts
            .iter()
            .flat_map(|(&d, e)| e.rows.iter().map(move |r| GradedEndo::from_flat(&self.dims, d, r)))
            .collect()
    }

    pub fn contains(&self, x: &GradedEndo) -> bool {
        x.is_zero() || self.parts.get(&x.degree()).is_some_and(|e| e.coordinates(&x.flatten()).is_some())
    }

    /// Coordinates of a homogeneous element in [`basis`](Self::basis).
    pub fn coordinates(&self, x: &GradedEndo) -> Option<Vec<Scalar>> {
        let mut out = Vec::with_capacity(self.dim());
        let flat = x.flatten();
        let mut found = x.is_zero();
        for (&d, e) in &self.parts {
            if d == x.degree() {
                out.extend(e.coordinates(&flat)?);
                found = true;
            } else {
                out.extend(std::iter::repeat_n(Scalar::zero(), e.rows.len()));
            }
        }
        found.then_some(out)
    }

    /// Extends by `gens` and closes under brackets.
    pub fn extend_closure(&mut self, gens: &[GradedEndo]) {
        let mut elems: Vec<GradedEndo> = self.basis();
        let mut done = if self.closed { elems.len() } else { 0 };
        for g in gens {
            if self.insert(g) {
                elems.push(g.clone());
            }
        }
        while done < elems.len() {
            let x = elems[done].clone();
            let prods = crate::par::map(&elems[..done], |y| x.bracket(y));
            for p in prods {
                if self.insert(&p) {
                    elems.push(p);
                }
            }
            done += 1;
        }
        self.closed = true;
    }
}

/// Smallest bracket-closed subspace containing `gens`.
pub fn lie_closure(dims: &[usize], gens: &[GradedEndo]) -> LieSubalgebra {
    let mut g = LieSubalgebra::empty(dims);
    g.extend_closure(gens);
    g
}

/// Basis split by map degree.
pub fn graded_parts(g: &LieSubalgebra) -> BTreeMap<i32, Vec<GradedEndo>> {
    let mut out: BTreeMap<i32, Vec<GradedEndo>> = BTreeMap::new();
    for x in g.basis() {
        out.entry(x.degree()).or_default().push(x);
    }
    out
}

/// Matrices of `ad x` on the canonical basis, one per basis element.
pub fn adjoint_matrices(g: &LieSubalgebra) -> Vec<Matrix<Scalar>> {
    let basis = g.basis();
    let n = basis.len();
    crate::par::map(&basis, |x| {
        let cols: Vec<Vec<Scalar>> = basis
            .iter()
            .map(|y| g.coordinates(&x.bracket(y)).expect("subalgebra is not closed"))
            .collect();
        Matrix::from_cols(&cols, n)
    })
}

/// `B(x, y) = tr(ad x ∘ ad y)` on the canonical basis.
pub fn killing_form(g: &LieSubalgebra) -> SymmetricForm<Scalar> {
    let ads = adjoint_matrices(g);
    let n = ads.len();
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
    let vals = crate::par::map(&pairs, |&(a, b)| {
        let (x, y) = (&ads[a], &ads[b]);
        let mut t = Scalar::zero();
        for i in 0..n {
            for j in 0..n {
                if !x[(i, j)].is_zero() && !y[(j, i)].is_zero() {
                    t += &(&x[(i, j)] * &y[(j, i)]);
                }
            }
        }
        t
    });
    let mut m = Matrix::zeros(n, n);
    for (&(a, b), v) in pairs.iter().zip(vals) {
        m[(a, b)] = v.clone();
        m[(b, a)] = v;
    }
    SymmetricForm::new(m).expect("symmetric by construction")
}

pub fn killing_inertia(g: &LieSubalgebra) -> Inertia {
    inertia_exact(&killing_form(g))
}

/// Symmetric forms `B` on `⊕_{i ∈ degrees} A_i` (all of `A` when `None`) with
/// `B(xv, w) + B(v, xw) = 0` for every basis element `x`, using the
/// compression of `x` to that subspace.
pub fn invariant_symmetric_forms(g: &LieSubalgebra, degrees: Option<&[usize]>) -> Vec<SymmetricForm<Scalar>> {
    let dims = g.dims();
    let offs = super::endo::offsets(dims);
    let idx: Vec<usize> = match degrees {
        None => (0..offs[dims.len()]).collect(),
        Some(ds) => {
            let mut v: Vec<usize> = ds.iter().flat_map(|&i| offs[i]..offs[i + 1]).collect();
            v.sort_unstable();
            v.dedup();
            v
        }
    };
    let n = idx.len();
    let unknowns: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
    let uidx = |a: usize, b: usize| -> usize {
        let (a, b) = if a <= b { (a, b) } else { (b, a) };
        a * n - a * (a + 1) / 2 + b
    };
    let mats: Vec<Matrix<Scalar>> = g.basis().iter().map(|x| x.to_matrix().submatrix(&idx, &idx)).collect();
    let rows: Vec<Vec<Vec<Scalar>>> = crate::par::map(&mats, |m| {
        let mut eqs = Vec::new();
        for r in 0..n {
            for c in r..n {
                let mut eq = vec![Scalar::zero(); unknowns.len()];
                for k in 0..n {
                    if !m[(k, r)].is_zero() {
                        eq[uidx(k, c)] += &m[(k, r)];
                    }
                    if !m[(k, c)].is_zero() {
                        eq[uidx(r, k)] += &m[(k, c)];
                    }
                }
                if eq.iter().any(|x| !x.is_zero()) {
                    eqs.push(eq);
                }
            }
        }
        eqs
    });
    let mut ech = Echelon::default();
    for eq in rows.into_iter().flatten() {
        ech.insert(eq);
    }
    let system = if ech.rows.is_empty() { Matrix::zeros(0, unknowns.len()) } else { Matrix::from_rows(ech.rows) };
    system
        .kernel()
        .into_iter()
        .map(|v| {
            let mut s = Matrix::zeros(n, n);
            for (k, &(a, b)) in unknowns.iter().enumerate() {
                s[(a, b)] = v[k].clone();
                s[(b, a)] = v[k].clone();
            }
            SymmetricForm::new(s).expect("symmetric by construction")
        })
        .collect()
}
