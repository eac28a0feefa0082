//! Twistor lines as positive 3-planes of the period space, their
//! intersections, and paths of intersecting lines.

mod connect;
mod lattice;

pub use connect::{admissible_instance, connect_admissible, connect_planes, AdmissibleInstance, GoodMove, MoveBase, SearchConfig};
pub use lattice::{
    general_type2, is_admissible, lattice_perp, neron_severi, AdmissibilityEntry, AdmissibilityReport, NSLattice,
};

use serde::{Deserialize, Serialize};

use crate::exact_kernel::{inertia_exact, Field, Inertia, Matrix, Scalar, SubspaceExact, SymmetricForm, Q3};

pub type Vec3 = Vec<Q3>;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TwistorError {
    #[error("span is not positive definite")]
    NotPositive,
    #[error("vectors do not span a 3-dimensional space")]
    NotThreeDim,
    #[error("no common-norm orthogonal frame over the scalar context")]
    NormMismatch,
    #[error("direction is not a rational unit vector")]
    IrrationalDirection,
    #[error("period does not lie on the twistor line")]
    PeriodNotOnLine,
    #[error("search exhausted (max height {max_height}, max steps {max_steps})")]
    SearchExhausted { max_height: u32, max_steps: usize },
    #[error("Néron–Severi precondition failed: {0}")]
    PreconditionNS(String),
    #[error("invalid period: {0}")]
    BadPeriod(String),
    #[error("form has inertia {0}, expected (3, b−3, 0)")]
    Inertia(Inertia),
    #[error("path file: {0}")]
    Parse(String),
}

/// Which square roots are available when normalizing frames.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ScalarContext {
    Rational,
    Quadratic,
}

/// `V = Q^b` with a form of signature `(3, b−3)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodSpace {
    q: SymmetricForm<Scalar>,
    q3: SymmetricForm<Q3>,
    context: ScalarContext,
}

impl PeriodSpace {
    pub fn new(q: SymmetricForm<Scalar>, context: ScalarContext) -> Result<Self, TwistorError> {
        let i = inertia_exact(&q);
        if i.n_pos != 3 || i.n_zero != 0 {
            return Err(TwistorError::Inertia(i));
        }
        let q3 = SymmetricForm::new(q.gram().map(|x| Q3::rational(x.clone()))).expect("symmetric");
        Ok(PeriodSpace { q, q3, context })
    }

    pub fn diag(entries: &[i64], context: ScalarContext) -> Result<Self, TwistorError> {
        Self::new(crate::exact_kernel::qdiag(entries), context)
    }

    pub fn dim(&self) -> usize {
        self.q.dim()
    }

    pub fn form(&self) -> &SymmetricForm<Scalar> {
        &self.q
    }

    pub fn form3(&self) -> &SymmetricForm<Q3> {
        &self.q3
    }

    pub fn context(&self) -> ScalarContext {
        self.context
    }

    pub fn with_context(&self, context: ScalarContext) -> Self {
        PeriodSpace { context, ..self.clone() }
    }

    pub fn eval(&self, x: &[Q3], y: &[Q3]) -> Q3 {
        self.q3.eval(x, y)
    }

    pub fn norm(&self, x: &[Q3]) -> Q3 {
        self.q3.norm(x)
    }

    /// Square root within the scalar context.
    pub fn sqrt(&self, x: &Q3) -> Option<Q3> {
        match self.context {
            ScalarContext::Rational => {
                if !x.is_rational() {
                    return None;
                }
                x.a.sqrt().map(Q3::rational)
            }
            ScalarContext::Quadratic => x.sqrt(),
        }
    }

    /// Lifts an integer or rational vector.
    pub fn lift(&self, v: &[Scalar]) -> Vec3 {
        v.iter().map(|x| Q3::rational(x.clone())).collect()
    }
}

pub(crate) fn scale(v: &[Q3], c: &Q3) -> Vec3 {
    v.iter().map(|x| x * c).collect()
}

/// Positive rational `c` making `c·v` integral and primitive for every `v`.
pub(crate) fn primitive_factor(vs: &[&[Q3]]) -> Q3 {
    use num_integer::Integer;
    let parts = || vs.iter().flat_map(|v| v.iter()).flat_map(|x| [&x.a, &x.b]);
    let l = crate::exact_kernel::denominator_lcm(parts());
    let g = parts()
        .filter(|x| !x.is_zero())
        .map(|x| x.numer() * (&l / x.denom()))
        .fold(num_bigint::BigInt::from(0), |g, n| g.gcd(&n));
    if g == num_bigint::BigInt::from(0) {
        return Q3::one();
    }
    Q3::rational(&Scalar::from_bigint(l) / &Scalar::from_bigint(g))
}

pub(crate) fn axpy(a: &Q3, x: &[Q3], y: &[Q3]) -> Vec3 {
    x.iter().zip(y).map(|(u, w)| &(a * u) + w).collect()
}

/// The line `span(u + i v)` in the complexification.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeriodPoint {
    pub u: Vec3,
    pub v: Vec3,
}

impl PeriodPoint {
    /// Checks `q(u,u) = q(v,v) > 0` and `q(u,v) = 0`.
    pub fn new(ps: &PeriodSpace, u: Vec3, v: Vec3) -> Result<Self, TwistorError> {
        let p = PeriodPoint { u, v };
        p.check(ps)?;
        Ok(p)
    }

    pub fn check(&self, ps: &PeriodSpace) -> Result<(), TwistorError> {
        let (nu, nv) = (ps.norm(&self.u), ps.norm(&self.v));
        if nu != nv {
            return Err(TwistorError::BadPeriod("q(u,u) ≠ q(v,v)".into()));
        }
        if nu.signum() <= 0 {
            return Err(TwistorError::BadPeriod("q(u,u) ≤ 0".into()));
        }
        if !Field::is_zero(&ps.eval(&self.u, &self.v)) {
            return Err(TwistorError::BadPeriod("q(u,v) ≠ 0".into()));
        }
        Ok(())
    }

    /// `q(l, l)` for `l = u + iv`, as (real, imaginary) parts.
    pub fn self_pairing(&self, ps: &PeriodSpace) -> (Q3, Q3) {
        let re = &ps.norm(&self.u) - &ps.norm(&self.v);
        let im = &ps.eval(&self.u, &self.v) * &Q3::from_int(2);
        (re, im)
    }

    pub fn conj(&self) -> Self {
        PeriodPoint { u: self.u.clone(), v: self.v.iter().map(|x| -x).collect() }
    }

    /// Whether both describe the same complex line (orientation included).
    pub fn same_line(&self, o: &PeriodPoint) -> bool {
        let n = self.u.len();
        let basis = Matrix::from_cols(&[self.u.clone(), self.v.clone()], n);
        let (Some(cu), Some(cv)) = (basis.solve(&o.u), basis.solve(&o.v)) else {
            return false;
        };
        if basis.mul_vec(&cu) != o.u || basis.mul_vec(&cv) != o.v {
            return false;
        }
        cv[0] == -&cu[1] && cv[1] == cu[0]
    }

    pub fn real_plane(&self) -> SubspaceExact<Q3> {
        SubspaceExact::span(self.u.len(), &[self.u.clone(), self.v.clone()])
    }
}

/// A positive 3-plane with an orthogonal frame of common norm.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistorPlane {
    span: SubspaceExact<Q3>,
    frame: [Vec3; 3],
}

impl TwistorPlane {
    /// Trusts that `frame` is orthogonal with a common positive norm.
    pub(crate) fn from_frame_unchecked(frame: [Vec3; 3]) -> Self {
        let span = SubspaceExact::span(frame[0].len(), frame.as_ref());
        TwistorPlane { span, frame }
    }

    /// Validates an explicit frame.
    pub fn from_frame(ps: &PeriodSpace, frame: [Vec3; 3]) -> Result<Self, TwistorError> {
        let s = ps.norm(&frame[0]);
        if s.signum() <= 0 {
            return Err(TwistorError::NotPositive);
        }
        for i in 0..3 {
            if ps.norm(&frame[i]) != s {
                return Err(TwistorError::NormMismatch);
            }
            for j in 0..i {
                if !Field::is_zero(&ps.eval(&frame[i], &frame[j])) {
                    return Err(TwistorError::NormMismatch);
                }
            }
        }
        Ok(Self::from_frame_unchecked(frame))
    }

    pub fn span(&self) -> &SubspaceExact<Q3> {
        &self.span
    }

    pub fn frame(&self) -> &[Vec3; 3] {
        &self.frame
    }

    pub fn frame_norm(&self, ps: &PeriodSpace) -> Q3 {
        ps.norm(&self.frame[0])
    }

    pub fn contains(&self, v: &[Q3]) -> bool {
        self.span.contains(v)
    }

    pub fn same_plane(&self, o: &TwistorPlane) -> bool {
        self.span == o.span
    }
}

/// Validated plane from three spanning vectors: Gram–Schmidt, then rescaling
/// to a common norm where the needed square roots exist.
pub fn plane_make(ps: &PeriodSpace, x: &[Q3], y: &[Q3], z: &[Q3]) -> Result<TwistorPlane, TwistorError> {
    let vecs = vec![x.to_vec(), y.to_vec(), z.to_vec()];
    let span = SubspaceExact::span(ps.dim(), &vecs);
    if span.dim() != 3 {
        return Err(TwistorError::NotThreeDim);
    }
    let restricted = ps.form3().restrict(&span.basis());
    if inertia_exact(&restricted) != Inertia::new(3, 0, 0) {
        return Err(TwistorError::NotPositive);
    }
    let mut gs: Vec<Vec3> = Vec::new();
    for v in vecs {
        let mut w = v;
        for f in &gs {
            let c = &ps.eval(&w, f) / &ps.norm(f);
            w = axpy(&-c, f, &w);
        }
        gs.push(w);
    }
    let s = ps.norm(&gs[0]);
    for k in 1..3 {
        let ratio = &s / &ps.norm(&gs[k]);
        let c = ps.sqrt(&ratio).ok_or(TwistorError::NormMismatch)?;
        gs[k] = scale(&gs[k], &c);
    }
    Ok(TwistorPlane { span, frame: [gs[0].clone(), gs[1].clone(), gs[2].clone()] })
}

/// Rotation with first column `dir`, as a rational 3×3 matrix of columns.
fn rotation_with_first_column(dir: &[Scalar; 3]) -> [[Scalar; 3]; 3] {
    let z = Scalar::zero;
    let o = Scalar::one;
    if dir == &[o(), z(), z()] {
        return [[o(), z(), z()], [z(), o(), z()], [z(), z(), o()]];
    }
    if dir == &[-o(), z(), z()] {
        return [[-o(), z(), z()], [z(), -o(), z()], [z(), z(), o()]];
    }
    let v = [&o() - &dir[0], -&dir[1], -&dir[2]];
    let vv: Scalar = v.iter().map(|x| x * x).sum();
    let h = |i: usize, j: usize| -> Scalar {
        let id = if i == j { o() } else { z() };
        &id - &(&(&v[i] * &v[j]) * &Scalar::from_int(2) / &vv)
    };
    let col = |j: usize| [h(0, j), h(1, j), h(2, j)];
    [col(0), col(2), col(1)]
}

/// Period of the induced structure `aI + bJ + cK`: rotate the frame so that
/// its first vector points along `dir` and return `span(f2' + i f3')`.
pub fn period_of_induced(ps: &PeriodSpace, w: &TwistorPlane, dir: &[Scalar; 3]) -> Result<PeriodPoint, TwistorError> {
    let n: Scalar = dir.iter().map(|x| x * x).sum();
    if !n.is_one() {
        return Err(TwistorError::IrrationalDirection);
    }
    let r = rotation_with_first_column(dir);
    let f = w.frame();
    let rotated = |c: &[Scalar; 3]| -> Vec3 {
        (0..ps.dim()).map(|i| (0..3).map(|l| &Q3::rational(c[l].clone()) * &f[l][i]).sum()).collect()
    };
    PeriodPoint::new(ps, rotated(&r[1]), rotated(&r[2]))
}

/// Result of [`lines_intersect`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Intersection {
    pub intersects: bool,
    pub shared: SubspaceExact<Q3>,
    pub vertices: Vec<PeriodPoint>,
    pub note: Option<String>,
}

/// Two twistor lines meet iff their planes share at least a 2-plane. The
/// vertices `span(u ± iv)` need an equal-norm orthogonal pair in the shared
/// plane, which exists iff its discriminant is a square in the context.
pub fn lines_intersect(ps: &PeriodSpace, w1: &TwistorPlane, w2: &TwistorPlane) -> Intersection {
    let shared = w1.span().intersect(w2.span()).expect("same ambient");
    if shared.dim() < 2 {
        return Intersection { intersects: false, shared, vertices: Vec::new(), note: None };
    }
    let basis = shared.basis();
    let u = basis[0].clone();
    let c = &ps.eval(&basis[1], &u) / &ps.norm(&u);
    let w = axpy(&-c, &u, &basis[1]);
    let ratio = &ps.norm(&u) / &ps.norm(&w);
    match ps.sqrt(&ratio) {
        Some(r) => {
            let v = scale(&w, &r);
            let p = PeriodPoint::new(ps, u, v).expect("orthogonal pair of equal norm");
            let vertices = vec![p.clone(), p.conj()];
            Intersection { intersects: true, shared, vertices, note: None }
        }
        None => Intersection {
            intersects: true,
            shared,
            vertices: Vec::new(),
            note: Some("NoRationalVertex: shared plane has non-square discriminant".into()),
        },
    }
}

/// Edges `W_0..W_k`, optional vertices between consecutive edges, and
/// optional endpoint periods.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TwistorPath {
    pub edges: Vec<TwistorPlane>,
    pub vertices: Vec<Option<PeriodPoint>>,
    pub endpoints: Option<(PeriodPoint, PeriodPoint)>,
}

impl TwistorPath {
    pub fn len(&self) -> usize {
        self.edges.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Independent exact checks of a path: positive frames, consecutive planes
/// sharing at least a 2-plane (rank of stacked frames ≤ 4), vertices on both
/// adjacent planes, endpoints on the end lines.
pub fn validate_path(ps: &PeriodSpace, path: &TwistorPath) -> Result<(), String> {
    if path.edges.is_empty() {
        return Err("path has no edges".into());
    }
    if path.vertices.len() != path.len() {
        return Err(format!("{} vertices for {} steps", path.vertices.len(), path.len()));
    }
    let rank = |vs: &[Vec3]| Matrix::from_rows(vs.to_vec()).rank();
    for (k, e) in path.edges.iter().enumerate() {
        let f = e.frame();
        if rank(f) != 3 {
            return Err(format!("edge {k}: frame is not independent"));
        }
        let s = ps.norm(&f[0]);
        if s.signum() <= 0 {
            return Err(format!("edge {k}: frame norm not positive"));
        }
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { s.clone() } else { Q3::zero() };
                if ps.eval(&f[i], &f[j]) != want {
                    return Err(format!("edge {k}: frame is not orthogonal of common norm"));
                }
            }
        }
        if !f.iter().all(|v| e.contains(v)) || e.span().dim() != 3 {
            return Err(format!("edge {k}: span does not match frame"));
        }
    }
    for k in 0..path.len() {
        let (a, b) = (path.edges[k].frame(), path.edges[k + 1].frame());
        let stacked: Vec<Vec3> = a.iter().chain(b.iter()).cloned().collect();
        if rank(&stacked) > 4 {
            return Err(format!("edges {k} and {}: intersection has dimension < 2", k + 1));
        }
        if let Some(p) = &path.vertices[k] {
            p.check(ps).map_err(|e| format!("vertex {k}: {e}"))?;
            if rank(&[p.u.clone(), p.v.clone()]) != 2 {
                return Err(format!("vertex {k}: u and v are dependent"));
            }
            for fr in [a, b] {
                let mut with: Vec<Vec3> = fr.to_vec();
                with.push(p.u.clone());
                with.push(p.v.clone());
                if rank(&with) != 3 {
                    return Err(format!("vertex {k}: not on both adjacent lines"));
                }
            }
        }
    }
    if let Some((i0, i1)) = &path.endpoints {
        for (p, e, name) in [(i0, path.edges.first().unwrap(), "start"), (i1, path.edges.last().unwrap(), "end")] {
            p.check(ps).map_err(|x| format!("{name} period: {x}"))?;
            if !e.contains(&p.u) || !e.contains(&p.v) {
                return Err(format!("{name} period is not on its line"));
            }
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceFile {
    pub gram: Vec<Vec<String>>,
    pub d: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndpointsFile {
    pub start: PeriodPoint,
    pub end: PeriodPoint,
}

/// JSON form of a path; numbers use the exact string formats.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathFile {
    pub space: SpaceFile,
    pub edges: Vec<[Vec3; 3]>,
    pub vertices: Vec<Option<PeriodPoint>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endpoints: Option<EndpointsFile>,
}

pub fn path_to_json(ps: &PeriodSpace, path: &TwistorPath) -> PathFile {
    PathFile {
        space: SpaceFile { gram: ps.form().gram().to_strings(), d: 3 },
        edges: path.edges.iter().map(|e| e.frame().clone()).collect(),
        vertices: path.vertices.clone(),
        endpoints: path.endpoints.clone().map(|(start, end)| EndpointsFile { start, end }),
    }
}

pub fn path_from_json(f: &PathFile, context: ScalarContext) -> Result<(PeriodSpace, TwistorPath), TwistorError> {
    if f.space.d != 3 {
        return Err(TwistorError::Parse(format!("unsupported extension d = {}", f.space.d)));
    }
    let gram = Matrix::from_strings(&f.space.gram).map_err(|e| TwistorError::Parse(e.to_string()))?;
    let q = SymmetricForm::new(gram).map_err(|e| TwistorError::Parse(e.to_string()))?;
    let ps = PeriodSpace::new(q, context)?;
    let edges = f.edges.iter().map(|fr| TwistorPlane::from_frame(&ps, fr.clone())).collect::<Result<Vec<_>, _>>()?;
    let endpoints = f.endpoints.clone().map(|e| (e.start, e.end));
    Ok((ps, TwistorPath { edges, vertices: f.vertices.clone(), endpoints }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(n: usize, i: usize) -> Vec3 {
        crate::exact_kernel::unit_vec(n, i)
    }

    #[test]
    fn rotation_columns_are_orthonormal() {
        let dir = [Scalar::frac(1, 3), Scalar::frac(2, 3), Scalar::frac(2, 3)];
        let r = rotation_with_first_column(&dir);
        assert_eq!(r[0], dir);
        for i in 0..3 {
            for j in 0..3 {
                let d: Scalar = (0..3).map(|k| &r[i][k] * &r[j][k]).sum();
                assert_eq!(d, if i == j { Scalar::one() } else { Scalar::zero() });
            }
        }
        let det = &(&r[0][0] * &(&(&r[1][1] * &r[2][2]) - &(&r[2][1] * &r[1][2])))
            - &(&r[1][0] * &(&(&r[0][1] * &r[2][2]) - &(&r[2][1] * &r[0][2])))
            + &(&r[2][0] * &(&(&r[0][1] * &r[1][2]) - &(&r[1][1] * &r[0][2])));
        assert_eq!(det, Scalar::one());
    }

    #[test]
    fn same_line_respects_orientation() {
        let ps = PeriodSpace::diag(&[1, 1, 1, -1], ScalarContext::Rational).unwrap();
        let p = PeriodPoint::new(&ps, e(4, 0), e(4, 1)).unwrap();
        let rotated = PeriodPoint::new(&ps, e(4, 1), scale(&e(4, 0), &Q3::from_int(-1))).unwrap();
        assert!(p.same_line(&rotated));
        assert!(!p.same_line(&p.conj()));
    }
}
