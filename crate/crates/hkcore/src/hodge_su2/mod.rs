//! Hyperkähler triples and the structures they induce on a model: the so(4,1)
//! action, Weil operators, SU(2)-isotypic blocks, the extracted degree-2 form
//! and its higher-degree analogue.

mod pairing;
mod weil;

pub use pairing::{bb_extract, generalized_pairing, GradedPairing};
pub use weil::{casimir, su2_isotypic, weil_operator, IsotypicDecomposition};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::exact_kernel::{antisymmetric_for, cayley_orthogonal, Matrix, Scalar, SubspaceExact, SymmetricForm};
use crate::frobenius_core::{
    graded_parts, lefschetz_dual, lefschetz_type, lie_closure, FrobeniusError, GradedEndo, GradedFrobeniusAlgebra,
    LieSubalgebra,
};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HodgeError {
    #[error("model has no reference form")]
    NoReferenceForm,
    #[error("triple sampler exhausted: {0}")]
    SamplerExhausted(String),
    #[error("Weil operator fails the Leibniz rule on {0}")]
    LeibnizInconsistent(String),
    #[error("direction is not a rational unit vector")]
    IrrationalDirection,
    #[error("Casimir spectrum on degree {0} is not of the form w(w+2)")]
    NonIntegralSpectrum(usize),
    #[error("pairing block is indefinite: {0}")]
    IndefiniteBlock(String),
    #[error("{0}")]
    Frobenius(#[from] FrobeniusError),
}

/// Classes `x, y, z ∈ A_2` with their Lefschetz duals.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HKTriple {
    pub x: Vec<Scalar>,
    pub y: Vec<Scalar>,
    pub z: Vec<Scalar>,
    pub lam_x: GradedEndo,
    pub lam_y: GradedEndo,
    pub lam_z: GradedEndo,
}

impl HKTriple {
    /// Validates the classes against `q` and computes the duals.
    pub fn new(
        alg: &GradedFrobeniusAlgebra,
        x: Vec<Scalar>,
        y: Vec<Scalar>,
        z: Vec<Scalar>,
    ) -> Result<Self, HodgeError> {
        let q = alg.reference_form().ok_or(HodgeError::NoReferenceForm)?;
        if !d_member(q, &x, &y, &z) {
            return Err(HodgeError::SamplerExhausted("classes violate the orthonormality equations".into()));
        }
        for v in [&x, &y, &z] {
            if !lefschetz_type(alg, v) {
                return Err(FrobeniusError::NotLefschetzType.into());
            }
        }
        let lam_x = lefschetz_dual(alg, &x)?;
        let lam_y = lefschetz_dual(alg, &y)?;
        let lam_z = lefschetz_dual(alg, &z)?;
        Ok(HKTriple { x, y, z, lam_x, lam_y, lam_z })
    }

    pub fn frame(&self) -> [&[Scalar]; 3] {
        [&self.x, &self.y, &self.z]
    }

    /// Common value `q(x,x)`.
    pub fn norm(&self, q: &SymmetricForm<Scalar>) -> Scalar {
        q.norm(&self.x)
    }

    /// The six generators `L_x, Λ_x, L_y, Λ_y, L_z, Λ_z`.
    pub fn generators(&self, alg: &GradedFrobeniusAlgebra) -> Vec<GradedEndo> {
        vec![
            GradedEndo::multiplication(alg, &self.x),
            self.lam_x.clone(),
            GradedEndo::multiplication(alg, &self.y),
            self.lam_y.clone(),
            GradedEndo::multiplication(alg, &self.z),
            self.lam_z.clone(),
        ]
    }
}

/// Pairwise orthogonal, equal positive norms.
pub fn d_member(q: &SymmetricForm<Scalar>, x: &[Scalar], y: &[Scalar], z: &[Scalar]) -> bool {
    let n = q.norm(x);
    q.eval(x, y).is_zero()
        && q.eval(x, z).is_zero()
        && q.eval(y, z).is_zero()
        && q.norm(y) == n
        && q.norm(z) == n
        && n.signum() > 0
}

/// A q-orthogonal positive frame of equal norms, found from an orthogonal
/// basis and, if the norms differ, a bounded integer search.
pub fn base_frame(q: &SymmetricForm<Scalar>) -> Option<[Vec<Scalar>; 3]> {
    let b = q.dim();
    let basis = orthogonal_basis(q);
    let pos: Vec<&Vec<Scalar>> = basis.iter().filter(|v| q.norm(v).signum() > 0).collect();
    if pos.len() < 3 {
        return None;
    }
    let s = q.norm(pos[0]);
    let mut frame = vec![pos[0].clone()];
    while frame.len() < 3 {
        if let Some(v) = pos.iter().find(|v| q.norm(v) == s && frame.iter().all(|f| q.eval(f, v).is_zero())) {
            frame.push((*v).clone());
            continue;
        }
        let comp = crate::exact_kernel::orth_complement(q, &SubspaceExact::span(b, &frame)).ok()?.basis();
        let found = small_vectors(comp.len(), 3).find_map(|c| {
            let v = crate::exact_kernel::lin_comb(&c, &comp);
            (q.norm(&v) == s).then_some(v)
        })?;
        frame.push(found);
    }
    Some([frame[0].clone(), frame[1].clone(), frame[2].clone()])
}

/// Integer vectors with entries in `[-h, h]`, excluding zero.
fn small_vectors(n: usize, h: i64) -> impl Iterator<Item = Vec<Scalar>> {
    let side = (2 * h + 1) as usize;
    let total = side.checked_pow(n as u32).unwrap_or(usize::MAX);
    (1..total).map(move |mut k| {
        (0..n)
            .map(|_| {
                let d = (k % side) as i64 - h;
                k /= side;
                Scalar::from_int(d)
            })
            .collect()
    })
}

/// Orthogonal basis by symmetric Gram–Schmidt over the standard basis.
fn orthogonal_basis(q: &SymmetricForm<Scalar>) -> Vec<Vec<Scalar>> {
    let b = q.dim();
    let mut out: Vec<Vec<Scalar>> = Vec::new();
    let mut pool: Vec<Vec<Scalar>> = (0..b).map(|i| crate::exact_kernel::unit_vec(b, i)).collect();
    let mut extra: Vec<Vec<Scalar>> = Vec::new();
    for i in 0..b {
        for j in i + 1..b {
            let mut v = crate::exact_kernel::unit_vec::<Scalar>(b, i);
            v[j] = Scalar::one();
            extra.push(v);
        }
    }
    pool.extend(extra);
    for v in pool {
        if out.len() == b {
            break;
        }
        let mut w = v;
        for u in &out {
            let c = &q.eval(&w, u) / &q.norm(u);
            w = crate::exact_kernel::vec_sub(&w, &crate::exact_kernel::vec_scale(u, &c));
        }
        if !q.norm(&w).is_zero() {
            out.push(w);
        }
    }
    out
}

/// Deterministic triples: the base frame, then images under seeded Cayley
/// transforms of the orthogonal group of `q`.
pub fn sample_hk_triples(alg: &GradedFrobeniusAlgebra, count: usize, seed: u64) -> Result<Vec<HKTriple>, HodgeError> {
    let q = alg.reference_form().ok_or(HodgeError::NoReferenceForm)?.clone();
    let b = q.dim();
    let [x0, y0, z0] = base_frame(&q).ok_or_else(|| HodgeError::SamplerExhausted("no equal-norm frame".into()))?;
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return Ok(out);
    }
    out.push(HKTriple::new(alg, x0.clone(), y0.clone(), z0.clone())?);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut failures = 0;
    while out.len() < count {
        let r = random_orthogonal(&q, b, &mut rng);
        let Some(r) = r else {
            failures += 1;
            if failures > 100 {
                return Err(HodgeError::SamplerExhausted("Cayley transforms keep failing".into()));
            }
            continue;
        };
        match HKTriple::new(alg, r.mul_vec(&x0), r.mul_vec(&y0), r.mul_vec(&z0)) {
            Ok(t) => out.push(t),
            Err(HodgeError::Frobenius(_)) => {
                failures += 1;
                if failures > 100 {
                    return Err(HodgeError::SamplerExhausted("Lefschetz verification keeps failing".into()));
                }
            }
            Err(e) => return Err(e),
        }
    }
    Ok(out)
}

/// A seeded element of `O(q)` as a Cayley transform of a small skew matrix.
pub fn random_orthogonal(q: &SymmetricForm<Scalar>, b: usize, rng: &mut ChaCha8Rng) -> Option<Matrix<Scalar>> {
    let mut k = Matrix::zeros(b, b);
    for i in 0..b {
        for j in i + 1..b {
            let v = Scalar::frac(rng.gen_range(-2..=2), rng.gen_range(1..=3));
            k[(i, j)] = v.clone();
            k[(j, i)] = -v;
        }
    }
    let s = antisymmetric_for(q, &k).ok()?;
    cayley_orthogonal(q, &s).ok()
}

/// `lie_closure` of the six Lefschetz generators of a triple.
pub fn so5_closure(alg: &GradedFrobeniusAlgebra, t: &HKTriple) -> LieSubalgebra {
    lie_closure(alg.dims(), &t.generators(alg))
}

/// Standard and Pythagorean directions on the unit sphere.
pub fn default_directions() -> Vec<[Scalar; 3]> {
    let f = |a: i64, b: i64, c: i64, d: i64| [Scalar::frac(a, d), Scalar::frac(b, d), Scalar::frac(c, d)];
    vec![f(1, 0, 0, 1), f(0, 1, 0, 1), f(0, 0, 1, 1), f(1, 2, 2, 3), f(2, 3, 6, 7)]
}

/// Closure of the Weil operators of every triple in every direction.
pub fn mumford_tate_algebra(
    alg: &GradedFrobeniusAlgebra,
    triples: &[HKTriple],
    directions: &[[Scalar; 3]],
) -> Result<LieSubalgebra, HodgeError> {
    let mut gens = Vec::new();
    for t in triples {
        for d in directions {
            gens.push(weil_operator(alg, t, d)?);
        }
    }
    Ok(lie_closure(alg.dims(), &gens))
}

/// Whether every basis element restricted to `A_2` is skew for `form`.
pub fn skew_on_degree_two(g: &LieSubalgebra, form: &SymmetricForm<Scalar>) -> bool {
    g.basis().iter().filter(|x| x.degree() == 0).all(|x| {
        let w = x.block(2);
        w.transpose().mul(form.gram()).add(&form.gram().mul(w)).is_zero()
    })
}

/// Comparison of the degree-0 part of `g(A)` with `g_M + span(H)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DegreeZeroReport {
    pub equal: bool,
    pub dim_degree_zero: usize,
    pub dim_gm: usize,
    pub dim_gm_plus_h: usize,
    pub gm_strictly_inside: bool,
    pub identity_in_degree_zero: bool,
    pub note: String,
}

pub fn degree_zero_match(ga: &LieSubalgebra, gm: &LieSubalgebra) -> DegreeZeroReport {
    let dims = ga.dims();
    let n = GradedEndo::flat_len(dims, 0);
    let flats = |xs: Vec<GradedEndo>| xs.iter().map(|x| x.flatten()).collect::<Vec<_>>();
    let zero_part = flats(graded_parts(ga).remove(&0).unwrap_or_default());
    let gm_basis = flats(gm.basis().into_iter().filter(|x| x.degree() == 0).collect());
    let a0 = SubspaceExact::span(n, &zero_part);
    let m = SubspaceExact::span(n, &gm_basis);
    let mut with_h = gm_basis.clone();
    with_h.push(GradedEndo::grading(dims).flatten());
    let mh = SubspaceExact::span(n, &with_h);
    let identity_in = a0.contains(&GradedEndo::identity(dims).flatten());
    DegreeZeroReport {
        equal: a0 == mh,
        dim_degree_zero: a0.dim(),
        dim_gm: m.dim(),
        dim_gm_plus_h: mh.dim(),
        gm_strictly_inside: a0.contains_subspace(&m) && m.dim() < a0.dim(),
        identity_in_degree_zero: identity_in,
        note: "compared against span(H): every generator is traceless, so the identity cannot lie in the closure".into(),
    }
}
