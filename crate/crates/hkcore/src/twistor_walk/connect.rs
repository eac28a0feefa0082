//! Path construction: reflection walks between arbitrary planes, and
//! admissible walks through irrational planes inside `Q^⊥`.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::exact_kernel::{orth_complement, Field, Matrix, Scalar, SubspaceExact, Q3};
use crate::model_forge::IntegralLattice;

use super::{
    axpy, is_admissible, lines_intersect, neron_severi, period_of_induced, scale, validate_path, NSLattice,
    primitive_factor, PeriodPoint, PeriodSpace, TwistorError, TwistorPath, TwistorPlane, Vec3,
};

fn reflect(ps: &PeriodSpace, d: &[Q3], x: &[Q3]) -> Vec3 {
    let c = &(&ps.eval(x, d) * &Q3::from_int(2)) / &ps.norm(d);
    axpy(&-c, d, x)
}

fn attach_vertices(ps: &PeriodSpace, edges: &[TwistorPlane]) -> Vec<Option<PeriodPoint>> {
    edges.windows(2).map(|w| lines_intersect(ps, &w[0], &w[1]).vertices.into_iter().next()).collect()
}

/// Walk from `W` to `W'` by reflections in non-isotropic vectors.
///
/// Frame vectors are matched one at a time: `s_{f−g}` sends `f` to `g` when
/// `f − g` is anisotropic, otherwise `s_g ∘ s_{f+g}` does. Each reflection
/// fixes the already matched vectors and the plane's intersection with the
/// mirror, so consecutive planes share at least a 2-plane and norms are kept.
/// At most six steps are needed.
pub fn connect_planes(ps: &PeriodSpace, w: &TwistorPlane, target: &TwistorPlane) -> Result<TwistorPath, TwistorError> {
    let s = w.frame_norm(ps);
    let t = target.frame_norm(ps);
    let mut goal = target.frame().clone();
    if s != t {
        let c = ps.sqrt(&(&s / &t)).ok_or(TwistorError::NormMismatch)?;
        for g in goal.iter_mut() {
            *g = scale(g, &c);
        }
    }
    let mut edges = vec![w.clone()];
    let mut frame = w.frame().clone();
    let push = |frame: &[Vec3; 3], edges: &mut Vec<TwistorPlane>| {
        let p = TwistorPlane::from_frame_unchecked(frame.clone());
        if edges.last().is_some_and(|l| l.same_plane(&p)) {
            *edges.last_mut().unwrap() = p;
        } else {
            edges.push(p);
        }
    };
    for i in 0..3 {
        if frame[i] == goal[i] {
            continue;
        }
        let d: Vec3 = frame[i].iter().zip(&goal[i]).map(|(a, b)| a - b).collect();
        let mirrors: Vec<Vec3> = if !Field::is_zero(&ps.norm(&d)) {
            vec![d]
        } else {
            vec![frame[i].iter().zip(&goal[i]).map(|(a, b)| a + b).collect(), goal[i].clone()]
        };
        for m in mirrors {
            for f in frame.iter_mut() {
                *f = reflect(ps, &m, f);
            }
            push(&frame, &mut edges);
        }
    }
    assert_eq!(frame, goal, "reflection walk did not reach the target frame");
    let vertices = attach_vertices(ps, &edges);
    Ok(TwistorPath { edges, vertices, endpoints: None })
}

/// One step of an admissible walk: rotate the frame of `W` by the rational
/// rotation of `quat`, keep the first two vectors and tilt the third towards
/// the normal `n` of `W` inside `Q^⊥`, `p3' = α p3 + ρ n`, with
/// `α = (1+κt²)/(1−κt²)`, `ρ = 2t/(1−κt²)` and `κ = −q(n)/s`, so that
/// `q(p3') = s`. The shared plane carries the vertex `span(p1 + i p2)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodMove {
    pub quat: [i64; 4],
    pub t: Q3,
}

fn quat_rotation(q: &[i64; 4]) -> [[Scalar; 3]; 3] {
    let [a, b, c, d] = *q;
    let n = a * a + b * b + c * c + d * d;
    let f = |x: i64| Scalar::frac(x, n);
    [
        [f(a * a + b * b - c * c - d * d), f(2 * (b * c - a * d)), f(2 * (b * d + a * c))],
        [f(2 * (b * c + a * d)), f(a * a - b * b + c * c - d * d), f(2 * (c * d - a * b))],
        [f(2 * (b * d - a * c)), f(2 * (c * d + a * b)), f(a * a - b * b - c * c + d * d)],
    ]
}

/// Unit-free data of a plane needed to apply moves: its normal `n` in `Q^⊥`
/// and `κ = −q(n)/s`.
#[derive(Clone, Debug)]
pub struct MoveBase {
    normal: Vec3,
    kappa: Q3,
}

impl MoveBase {
    pub fn of(ps: &PeriodSpace, v4: &SubspaceExact<Q3>, w: &TwistorPlane) -> Option<Self> {
        let normal = orth_complement(ps.form3(), w.span()).ok()?.intersect(v4).ok()?;
        if normal.dim() != 1 {
            return None;
        }
        let n = normal.basis().remove(0);
        let n = scale(&n, &primitive_factor(&[&n]));
        let tau = -ps.norm(&n);
        if tau.signum() <= 0 {
            return None;
        }
        let kappa = &tau / &w.frame_norm(ps);
        Some(MoveBase { normal: n, kappa })
    }
}

impl GoodMove {
    pub fn apply(&self, ps: &PeriodSpace, v4: &SubspaceExact<Q3>, w: &TwistorPlane) -> Option<(TwistorPlane, PeriodPoint)> {
        self.apply_with(ps, &MoveBase::of(ps, v4, w)?, w)
    }

    pub fn apply_with(&self, ps: &PeriodSpace, base: &MoveBase, w: &TwistorPlane) -> Option<(TwistorPlane, PeriodPoint)> {
        if self.quat.iter().all(|&x| x == 0) {
            return None;
        }
        let r = quat_rotation(&self.quat);
        let f = w.frame();
        let p: Vec<Vec3> = (0..3)
            .map(|k| (0..ps.dim()).map(|i| (0..3).map(|l| &Q3::rational(r[l][k].clone()) * &f[l][i]).sum()).collect())
            .collect();
        let kt2 = &base.kappa * &(&self.t * &self.t);
        let den = &Q3::one() - &kt2;
        if Field::is_zero(&den) {
            return None;
        }
        let alpha = &(&Q3::one() + &kt2) / &den;
        let rho = &(&self.t * &Q3::from_int(2)) / &den;
        let p3: Vec3 = p[2].iter().zip(&base.normal).map(|(a, b)| &(&alpha * a) + &(&rho * b)).collect();
        debug_assert_eq!(ps.norm(&p3), w.frame_norm(ps));
        let c = primitive_factor(&[&p[0], &p[1], &p3]);
        let frame = [scale(&p[0], &c), scale(&p[1], &c), scale(&p3, &c)];
        let vertex = PeriodPoint { u: frame[0].clone(), v: frame[1].clone() };
        let m = TwistorPlane::from_frame_unchecked(frame);
        Some((m, vertex))
    }
}

/// Vertex on the shared plane of `m` and a fixed plane given by its
/// annihilator rows.
fn shared_vertex(ps: &PeriodSpace, ann: &[Vec3], m: &TwistorPlane) -> Option<PeriodPoint> {
    let f = m.frame();
    let c = Matrix::from_rows(
        ann.iter().map(|a| f.iter().map(|p| a.iter().zip(p).map(|(x, y)| x * y).sum()).collect()).collect(),
    );
    let ker = c.kernel();
    if ker.len() < 2 {
        return None;
    }
    let comb = |k: &[Q3]| -> Vec3 { (0..ps.dim()).map(|i| (0..3).map(|j| &k[j] * &f[j][i]).sum()).collect() };
    let u = comb(&ker[0]);
    let u = scale(&u, &primitive_factor(&[&u]));
    let x = comb(&ker[1]);
    let c = &ps.eval(&x, &u) / &ps.norm(&u);
    let w = axpy(&-c, &u, &x);
    let w = scale(&w, &primitive_factor(&[&w]));
    let r = ps.sqrt(&(&ps.norm(&u) / &ps.norm(&w)))?;
    PeriodPoint::new(ps, u, scale(&w, &r)).ok()
}

/// Seed and bounds for the admissible search.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    pub seed: u64,
    pub max_height: u32,
    pub max_steps: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig { seed: 0, max_height: 20, max_steps: 20_000 }
    }
}

fn canonical_quats(h: i64) -> Vec<[i64; 4]> {
    let mut out = Vec::new();
    for a in -h..=h {
        for b in -h..=h {
            for c in -h..=h {
                for d in -h..=h {
                    let q = [a, b, c, d];
                    let first = q.iter().find(|&&x| x != 0);
                    if first.is_some_and(|&x| x > 0) {
                        out.push(q);
                    }
                }
            }
        }
    }
    out
}

fn rationals(h: i64) -> Vec<Scalar> {
    let mut out = Vec::new();
    for p in 1..=h {
        for q in 1..=h {
            if num_integer::gcd(p, q) == 1 {
                out.push(Scalar::frac(p, q));
                out.push(Scalar::frac(-p, q));
            }
        }
    }
    out
}

fn height_of_quat(q: &[i64; 4]) -> i64 {
    q.iter().map(|x| x.abs()).max().unwrap_or(0)
}

fn height_of_rational(x: &Scalar) -> i64 {
    let n = x.numer().magnitude().clone();
    let d = x.denom().magnitude().clone();
    use num_traits::ToPrimitive;
    n.max(d).to_i64().unwrap_or(i64::MAX)
}

/// Moves of height exactly `h`, seeded order.
fn level(h: i64, rng: &mut ChaCha8Rng) -> Vec<GoodMove> {
    let quats = canonical_quats(h);
    let ts = rationals(h);
    let mut out: Vec<GoodMove> = quats
        .iter()
        .flat_map(|q| ts.iter().map(move |t| (q, t)))
        .filter(|(q, t)| height_of_quat(q).max(height_of_rational(t)) == h)
        .map(|(q, t)| GoodMove { quat: *q, t: Q3::rational(t.clone()) })
        .collect();
    out.shuffle(rng);
    out
}

/// `Q^⊥` over Q(√3).
pub(crate) fn complement_of(ps: &PeriodSpace, q: &NSLattice) -> SubspaceExact<Q3> {
    let span: Vec<Vec3> = q.basis.iter().map(|r| r.iter().map(|&x| Q3::from_int(x)).collect()).collect();
    orth_complement(ps.form3(), &SubspaceExact::span(ps.dim(), &span)).expect("non-degenerate form")
}

struct Target<'a> {
    plane: &'a TwistorPlane,
    period: &'a PeriodPoint,
    ann: Vec<Vec3>,
}

impl<'a> Target<'a> {
    fn new(plane: &'a TwistorPlane, period: &'a PeriodPoint) -> Self {
        let ann = plane.span().annihilator().basis().into_iter().map(|a| scale(&a, &primitive_factor(&[&a]))).collect();
        Target { plane, period, ann }
    }
}

fn try_candidate(
    ps: &PeriodSpace,
    lat: &IntegralLattice,
    base: &MoveBase,
    start: (&TwistorPlane, &PeriodPoint),
    end: &Target<'_>,
    mv: &GoodMove,
) -> Option<TwistorPath> {
    let (m, v1) = mv.apply_with(ps, base, start.0)?;
    let v2 = shared_vertex(ps, &end.ann, &m)?;
    let path = TwistorPath {
        edges: vec![start.0.clone(), m, end.plane.clone()],
        vertices: vec![Some(v1), Some(v2)],
        endpoints: Some((start.1.clone(), end.period.clone())),
    };
    (is_admissible(lat, &path).pass && validate_path(ps, &path).is_ok()).then_some(path)
}

/// Admissible path between periods on planes inside `Q^⊥`.
///
/// Tries the direct step first, then enumerates good moves out of the start
/// plane by increasing height in seeded order, keeping the first whose
/// two-step path passes the admissibility check.
pub fn connect_admissible(
    ps: &PeriodSpace,
    lat: &IntegralLattice,
    q: &NSLattice,
    start: (&TwistorPlane, &PeriodPoint),
    end: (&TwistorPlane, &PeriodPoint),
    cfg: SearchConfig,
) -> Result<TwistorPath, TwistorError> {
    for (name, (w, p)) in [("start", start), ("end", end)] {
        if !w.contains(&p.u) || !w.contains(&p.v) {
            return Err(TwistorError::PeriodNotOnLine);
        }
        let ns = neron_severi(lat, p);
        if &ns != q {
            return Err(TwistorError::PreconditionNS(format!("{name} period has NS rank {} ≠ {}", ns.rank(), q.rank())));
        }
    }
    let v4 = complement_of(ps, q);
    if start.0.same_plane(end.0) {
        let path = TwistorPath {
            edges: vec![start.0.clone()],
            vertices: vec![],
            endpoints: Some((start.1.clone(), end.1.clone())),
        };
        if is_admissible(lat, &path).pass {
            return Ok(path);
        }
    }
    if let Some(v) = lines_intersect(ps, start.0, end.0).vertices.into_iter().next() {
        let path = TwistorPath {
            edges: vec![start.0.clone(), end.0.clone()],
            vertices: vec![Some(v)],
            endpoints: Some((start.1.clone(), end.1.clone())),
        };
        if is_admissible(lat, &path).pass {
            return Ok(path);
        }
    }
    let exhausted = TwistorError::SearchExhausted { max_height: cfg.max_height, max_steps: cfg.max_steps };
    let Some(base) = MoveBase::of(ps, &v4, start.0) else {
        return Err(exhausted);
    };
    let target = Target::new(end.0, end.1);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut steps = 0usize;
    for h in 1..=cfg.max_height as i64 {
        let moves = level(h, &mut rng);
        for chunk in moves.chunks(64) {
            let take = chunk.len().min(cfg.max_steps.saturating_sub(steps));
            if take == 0 {
                return Err(exhausted);
            }
            let found = crate::par::map(&chunk[..take], |mv| try_candidate(ps, lat, &base, start, &target, mv));
            steps += take;
            if let Some(p) = found.into_iter().flatten().next() {
                return Ok(p);
            }
        }
    }
    Err(exhausted)
}

/// A seeded start/end configuration inside `Q^⊥` known to admit a two-step
/// admissible path within height 2.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdmissibleInstance {
    pub start: TwistorPlane,
    pub start_period: PeriodPoint,
    pub end: TwistorPlane,
    pub end_period: PeriodPoint,
}

fn unit_directions() -> Vec<[Scalar; 3]> {
    let f = |a: i64, b: i64, c: i64, d: i64| [Scalar::frac(a, d), Scalar::frac(b, d), Scalar::frac(c, d)];
    vec![f(1, 0, 0, 1), f(0, 3, 4, 5), f(2, 1, 2, 3), f(2, 3, 6, 7), f(-1, 2, 2, 3), f(0, 1, 0, 1)]
}

/// Start plane: two irrational moves away from a standard frame in `Q^⊥`;
/// end plane: two further moves of height ≤ 2.
pub fn admissible_instance(
    ps: &PeriodSpace,
    lat: &IntegralLattice,
    q: &NSLattice,
    seed: u64,
) -> Result<AdmissibleInstance, TwistorError> {
    let v4 = complement_of(ps, q);
    let b = ps.dim();
    let base: Vec<Vec3> = (0..b)
        .map(|i| crate::exact_kernel::unit_vec::<Q3>(b, i))
        .filter(|e| v4.contains(e) && ps.norm(e) == Q3::one())
        .take(3)
        .collect();
    if base.len() < 3 {
        return Err(TwistorError::NotThreeDim);
    }
    let base = TwistorPlane::from_frame(ps, [base[0].clone(), base[1].clone(), base[2].clone()])?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let small: Vec<GoodMove> = (1..=2).flat_map(|h| level(h, &mut ChaCha8Rng::seed_from_u64(0))).collect();
    let dirs = unit_directions();
    for _ in 0..200 {
        let mut w = base.clone();
        let mut ok = true;
        for _ in 0..2 {
            let mut quat = [0i64; 4];
            while quat.iter().all(|&x| x == 0) {
                quat = [rng.gen_range(-2..=2), rng.gen_range(-2..=2), rng.gen_range(-2..=2), rng.gen_range(-2..=2)];
            }
            let c = rng.gen_range(1..=3);
            let t = Q3::new(Scalar::frac(rng.gen_range(-3..=3), c), Scalar::frac(rng.gen_range(1..=3), c));
            match (GoodMove { quat, t }).apply(ps, &v4, &w) {
                Some((m, _)) => w = m,
                None => ok = false,
            }
        }
        if !ok {
            continue;
        }
        let mv1 = small[rng.gen_range(0..small.len())].clone();
        let mv2 = small[rng.gen_range(0..small.len())].clone();
        let Some((m, _)) = mv1.apply(ps, &v4, &w) else { continue };
        let Some((end, _)) = mv2.apply(ps, &v4, &m) else { continue };
        let d1 = &dirs[rng.gen_range(0..dirs.len())];
        let d2 = &dirs[rng.gen_range(0..dirs.len())];
        let (Ok(i0), Ok(i1)) = (period_of_induced(ps, &w, d1), period_of_induced(ps, &end, d2)) else { continue };
        if &neron_severi(lat, &i0) != q || &neron_severi(lat, &i1) != q {
            continue;
        }
        let Some(base) = MoveBase::of(ps, &v4, &w) else { continue };
        if try_candidate(ps, lat, &base, (&w, &i0), &Target::new(&end, &i1), &mv1).is_none() {
            continue;
        }
        return Ok(AdmissibleInstance { start: w, start_period: i0, end, end_period: i1 });
    }
    Err(TwistorError::SearchExhausted { max_height: 2, max_steps: 200 })
}
