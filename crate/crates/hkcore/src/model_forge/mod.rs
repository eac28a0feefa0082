//! Apolar models: the Gorenstein algebra `Sym(V)/Ann(F)` with `F = q^m`,
//! together with integral lattices for the degree-2 part.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::exact_kernel::{factorial, inertia_exact, Inertia, Matrix, Scalar, SymmetricForm};
use crate::frobenius_core::{algebra_from_json, algebra_to_json, AlgebraFile, FrobeniusError, GradedFrobeniusAlgebra};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ModelError {
    #[error("inertia {found} differs from the required {expected}")]
    InertiaMismatch { expected: Inertia, found: Inertia },
    #[error("quadratic form is degenerate")]
    DegenerateQ,
    #[error("invalid model parameters: {0}")]
    BadSpec(String),
    #[error("model file: {0}")]
    Load(String),
}

impl From<FrobeniusError> for ModelError {
    fn from(e: FrobeniusError) -> Self {
        ModelError::Load(e.to_string())
    }
}

/// Parameters of a model: `b = dim A_2`, half-dimension `m`, and the form `q`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModelSpec {
    pub b: usize,
    pub m: usize,
    pub q: SymmetricForm<Scalar>,
}

impl ModelSpec {
    /// `q = diag(1, 1, 1, −1, …, −1)`.
    pub fn standard(b: usize, m: usize) -> Self {
        let d: Vec<Scalar> = (0..b).map(|i| Scalar::from_int(if i < 3 { 1 } else { -1 })).collect();
        ModelSpec { b, m, q: SymmetricForm::diag(&d) }
    }

    pub fn diag(m: usize, entries: &[i64]) -> Self {
        let d: Vec<Scalar> = entries.iter().map(|&x| Scalar::from_int(x)).collect();
        ModelSpec { b: entries.len(), m, q: SymmetricForm::diag(&d) }
    }

    pub fn validate(&self) -> Result<(), ModelError> {
        if self.b < 4 || self.m < 1 {
            return Err(ModelError::BadSpec(format!("need b ≥ 4 and m ≥ 1, got b={} m={}", self.b, self.m)));
        }
        if self.q.dim() != self.b {
            return Err(ModelError::BadSpec(format!("form has size {} but b = {}", self.q.dim(), self.b)));
        }
        check_signature(&self.q)
    }
}

fn check_signature(q: &SymmetricForm<Scalar>) -> Result<(), ModelError> {
    let found = inertia_exact(q);
    if found.n_zero > 0 {
        return Err(ModelError::DegenerateQ);
    }
    let expected = Inertia::new(3, q.dim() - 3.min(q.dim()), 0);
    if found != expected {
        return Err(ModelError::InertiaMismatch { expected, found });
    }
    Ok(())
}

/// Exponent tuples of total degree `k` in `b` variables, descending order.
pub fn monomials(b: usize, k: usize) -> Vec<Vec<u32>> {
    fn rec(i: usize, b: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i == b - 1 {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for e in (0..=left).rev() {
            cur.push(e);
            rec(i + 1, b, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if b > 0 {
        rec(0, b, k as u32, &mut Vec::new(), &mut out);
    }
    out
}

fn add_exp(a: &[u32], b: &[u32]) -> Vec<u32> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Coefficients of `(xᵀ Q x)^m` keyed by exponent tuple.
fn socle_polynomial(q: &Matrix<Scalar>, m: usize) -> HashMap<Vec<u32>, Scalar> {
    let b = q.rows();
    let mut quad: HashMap<Vec<u32>, Scalar> = HashMap::new();
    for i in 0..b {
        for j in 0..b {
            if q[(i, j)].is_zero() {
                continue;
            }
            let mut e = vec![0u32; b];
            e[i] += 1;
            e[j] += 1;
            *quad.entry(e).or_insert_with(Scalar::zero) += &q[(i, j)];
        }
    }
    let mut f: HashMap<Vec<u32>, Scalar> = HashMap::from([(vec![0u32; b], Scalar::one())]);
    for _ in 0..m {
        let mut next: HashMap<Vec<u32>, Scalar> = HashMap::new();
        for (a, ca) in &f {
            for (g, cg) in &quad {
                *next.entry(add_exp(a, g)).or_insert_with(Scalar::zero) += &(ca * cg);
            }
        }
        next.retain(|_, v| !v.is_zero());
        f = next;
    }
    f
}

/// Evaluator `λ(x^γ) = γ!·[x^γ]F / (2m)!` on monomials of degree `2m`.
struct Contraction {
    f: HashMap<Vec<u32>, Scalar>,
    norm: Scalar,
}

impl Contraction {
    fn eval(&self, g: &[u32]) -> Scalar {
        let Some(c) = self.f.get(g) else {
            return Scalar::zero();
        };
        let w: Scalar = g.iter().fold(Scalar::one(), |acc, &e| &acc * &factorial(e));
        &(c * &w) / &self.norm
    }
}

/// Per-degree data: chosen basis monomials and the reduction map.
struct Level {
    basis: Vec<Vec<u32>>,
    dual_cols: Vec<Vec<u32>>,
    binv: Matrix<Scalar>,
}

impl Level {
    fn reduce(&self, ev: &Contraction, mono: &[u32]) -> Vec<Scalar> {
        let v: Vec<Scalar> = self.dual_cols.iter().map(|c| ev.eval(&add_exp(mono, c))).collect();
        self.binv.vec_mul(&v)
    }
}

/// Builds the apolar model of `spec`.
pub fn apolar_model(spec: &ModelSpec) -> Result<GradedFrobeniusAlgebra, ModelError> {
    spec.validate()?;
    let (b, m) = (spec.b, spec.m);
    let ev = Contraction { f: socle_polynomial(spec.q.gram(), m), norm: factorial(2 * m as u32) };
    let levels: Vec<Level> = crate::par::map_range(2 * m + 1, |i| {
        let rows = monomials(b, i);
        let cols = monomials(b, 2 * m - i);
        let cat: Vec<Vec<Scalar>> =
            rows.iter().map(|r| cols.iter().map(|c| ev.eval(&add_exp(r, c))).collect()).collect();
        let mut chosen: Vec<usize> = Vec::new();
        let mut rank = 0;
        for (k, row) in cat.iter().enumerate() {
            let mut trial: Vec<Vec<Scalar>> = chosen.iter().map(|&c| cat[c].clone()).collect();
            trial.push(row.clone());
            let r = Matrix::from_rows(trial).rank();
            if r > rank {
                rank = r;
                chosen.push(k);
            }
        }
        let bmat = Matrix::from_rows(chosen.iter().map(|&k| cat[k].clone()).collect());
        let (_, pivots) = bmat.rref();
        let sq = bmat.submatrix(&(0..chosen.len()).collect::<Vec<_>>(), &pivots);
        Level {
            basis: chosen.iter().map(|&k| rows[k].clone()).collect(),
            dual_cols: pivots.iter().map(|&p| cols[p].clone()).collect(),
            binv: sq.inverse().expect("pivot block is invertible"),
        }
    });
    let top = 4 * m;
    let dims: Vec<usize> = (0..=top).map(|d| if d % 2 == 0 { levels[d / 2].basis.len() } else { 0 }).collect();
    let pairs: Vec<(usize, usize)> = (0..=2 * m).flat_map(|i| (0..=2 * m - i).map(move |j| (i, j))).collect();
    let built = crate::par::map(&pairs, |&(i, j)| {
        let (li, lj) = (&levels[i], &levels[j]);
        let mut t = Vec::with_capacity(li.basis.len() * lj.basis.len() * levels[i + j].basis.len());
        for x in &li.basis {
            for y in &lj.basis {
                t.extend(levels[i + j].reduce(&ev, &add_exp(x, y)));
            }
        }
        ((2 * i, 2 * j), t)
    });
    let tables: BTreeMap<(usize, usize), Vec<Scalar>> = built.into_iter().collect();
    let trace = vec![ev.eval(&levels[2 * m].basis[0])];
    let mut meta = BTreeMap::new();
    meta.insert("b".to_string(), b.to_string());
    meta.insert("m".to_string(), m.to_string());
    meta.insert("construction".to_string(), "apolar quotient of Sym(V) by Ann(q^m)".to_string());
    meta.insert(
        "scope".to_string(),
        "models the subalgebra generated by degree 2; whether it is the full ring is not tested".to_string(),
    );
    let basis_names: Vec<String> = levels
        .iter()
        .map(|l| l.basis.iter().map(|e| format!("{e:?}")).collect::<Vec<_>>().join(" "))
        .collect();
    meta.insert("basis_monomials".to_string(), basis_names.join(" | "));
    Ok(GradedFrobeniusAlgebra::from_parts(top, dims, tables, trace, Some(spec.q.clone()), meta))
}

/// Canonical JSON text of a model.
pub fn save_model(a: &GradedFrobeniusAlgebra) -> String {
    let mut s = serde_json::to_string(&algebra_to_json(a)).expect("serializable");
    s.push('\n');
    s
}

pub fn load_model(bytes: &[u8]) -> Result<GradedFrobeniusAlgebra, ModelError> {
    let file: AlgebraFile = serde_json::from_slice(bytes).map_err(|e| ModelError::Load(e.to_string()))?;
    Ok(algebra_from_json(&file)?)
}

/// A non-degenerate integral lattice of signature `(3, b−3)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralLattice {
    pub gram: Vec<Vec<i64>>,
}

impl IntegralLattice {
    pub fn rank(&self) -> usize {
        self.gram.len()
    }

    pub fn form(&self) -> SymmetricForm<Scalar> {
        let rows: Vec<&[i64]> = self.gram.iter().map(|r| r.as_slice()).collect();
        SymmetricForm::new(Matrix::from_ints(&rows)).expect("validated symmetric")
    }

    pub fn inertia(&self) -> Inertia {
        inertia_exact(&self.form())
    }
}

pub fn make_lattice(gram: &[Vec<i64>]) -> Result<IntegralLattice, ModelError> {
    let n = gram.len();
    if gram.iter().any(|r| r.len() != n) {
        return Err(ModelError::BadSpec("gram matrix is not square".into()));
    }
    for i in 0..n {
        for j in 0..i {
            if gram[i][j] != gram[j][i] {
                return Err(ModelError::BadSpec(format!("gram matrix not symmetric at ({i},{j})")));
            }
        }
    }
    let l = IntegralLattice { gram: gram.to_vec() };
    check_signature(&l.form())?;
    Ok(l)
}

/// Parses `diag:a,b,c,…` into integers.
pub fn parse_diag(s: &str) -> Result<Vec<i64>, ModelError> {
    let body = s.strip_prefix("diag:").ok_or_else(|| ModelError::BadSpec(format!("expected diag:…, got {s:?}")))?;
    body.split(',')
        .map(|t| t.trim().parse::<i64>().map_err(|_| ModelError::BadSpec(format!("bad entry {t:?}"))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(4, 2).len(), 10);
        assert_eq!(monomials(5, 3).len(), 35);
        assert_eq!(monomials(3, 1), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
    }

    #[test]
    fn k3_type_dims_and_pairing() {
        let a = apolar_model(&ModelSpec::diag(1, &[1, 1, 1, -1])).unwrap();
        assert_eq!(a.dims(), &[1, 0, 4, 0, 1]);
        let p = a.pairing_block(2);
        assert_eq!(p, Matrix::from_ints(&[&[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 0, -1]]));
    }

    #[test]
    fn lattice_gate() {
        assert_eq!(make_lattice(&[vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, 1, 0], vec![0, 0, 0, -1]]).unwrap().rank(), 4);
        assert!(matches!(
            make_lattice(&[vec![1, 0, 0, 0], vec![0, 1, 0, 0], vec![0, 0, -1, 0], vec![0, 0, 0, -1]]),
            Err(ModelError::InertiaMismatch { .. })
        ));
    }

    #[test]
    fn spec_errors() {
        assert_eq!(apolar_model(&ModelSpec::diag(1, &[1, 1, 1, 0])), Err(ModelError::DegenerateQ));
        assert!(matches!(apolar_model(&ModelSpec::diag(1, &[1, 1, -1, -1])), Err(ModelError::InertiaMismatch { .. })));
    }
}
