//! Graded Frobenius algebras, Lefschetz triples and the Lie algebras they span.

mod algebra;
pub(crate) mod endo;
mod io;
mod lefschetz;
mod lie;

pub use algebra::{validate_algebra, CheckEntry, GradedFrobeniusAlgebra, ValidationReport};
pub use endo::{grading_operator, GradedEndo};
pub use io::{algebra_from_json, algebra_to_json, AlgebraFile};
pub use lefschetz::{lefschetz_dual, lefschetz_power, lefschetz_dual_primitive, lefschetz_type};
pub use lie::{
    adjoint_matrices, graded_parts, invariant_symmetric_forms, killing_form, killing_inertia, lie_closure,
    LieSubalgebra,
};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact_kernel::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FrobeniusError {
    #[error("element is not of Lefschetz type")]
    NotLefschetzType,
    #[error("no Lefschetz-type element found")]
    NoLefschetzElement,
    #[error("malformed algebra: {0}")]
    Malformed(String),
}

/// Seed and sample budget for [`structure_lie_algebra`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SamplerConfig {
    pub seed: u64,
    pub count: usize,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        SamplerConfig { seed: 0, count: 32 }
    }
}

/// `L_a` and `Λ_a` for a Lefschetz element, or `None`.
pub fn lefschetz_pair(alg: &GradedFrobeniusAlgebra, a: &[Scalar]) -> Option<(GradedEndo, GradedEndo)> {
    if !lefschetz_type(alg, a) {
        return None;
    }
    let lam = lefschetz_dual(alg, a).ok()?;
    Some((GradedEndo::multiplication(alg, a), lam))
}

/// Closure of all `L_a, Λ_a` over Lefschetz basis vectors of `A_2` and then
/// seeded random integer combinations, until three consecutive additions
/// leave the dimension unchanged or the budget runs out.
pub fn structure_lie_algebra(
    alg: &GradedFrobeniusAlgebra,
    cfg: SamplerConfig,
) -> Result<LieSubalgebra, FrobeniusError> {
    let b = alg.dim(2);
    if b == 0 {
        return Err(FrobeniusError::NoLefschetzElement);
    }
    let mut g = LieSubalgebra::empty(alg.dims());
    let mut found = false;
    for k in 0..b {
        let a = crate::exact_kernel::unit_vec(b, k);
        if let Some((l, lam)) = lefschetz_pair(alg, &a) {
            g.extend_closure(&[l, lam]);
            found = true;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut stable = 0;
    for _ in 0..cfg.count {
        if stable >= 3 {
            break;
        }
        let a: Vec<Scalar> = (0..b).map(|_| Scalar::from_int(rng.gen_range(-3..=3))).collect();
        let Some((l, lam)) = lefschetz_pair(alg, &a) else {
            continue;
        };
        found = true;
        let before = g.dim();
        g.extend_closure(&[l, lam]);
        stable = if g.dim() == before { stable + 1 } else { 0 };
    }
    if !found {
        return Err(FrobeniusError::NoLefschetzElement);
    }
    Ok(g)
}
