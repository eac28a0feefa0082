use hkcore::exact_kernel::{Field, Scalar, Q3};
use hkcore::hodge_su2::random_orthogonal;
use hkcore::model_forge::make_lattice;
use hkcore::twistor_walk::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn v(xs: &[i64]) -> Vec3 {
    xs.iter().map(|&x| Q3::from_int(x)).collect()
}

fn q3(a: (i64, i64), b: (i64, i64)) -> Q3 {
    Q3::new(Scalar::frac(a.0, a.1), Scalar::frac(b.0, b.1))
}

fn ps5(ctx: ScalarContext) -> PeriodSpace {
    PeriodSpace::diag(&[1, 1, 1, -1, -1], ctx).unwrap()
}

fn lattice(d: &[i64]) -> hkcore::model_forge::IntegralLattice {
    let n = d.len();
    make_lattice(&(0..n).map(|i| (0..n).map(|j| if i == j { d[i] } else { 0 }).collect()).collect::<Vec<_>>()).unwrap()
}

fn base(ps: &PeriodSpace) -> TwistorPlane {
    plane_make(ps, &v(&[1, 0, 0, 0, 0]), &v(&[0, 1, 0, 0, 0]), &v(&[0, 0, 1, 0, 0])).unwrap()
}

#[test]
fn plane_make_examples() {
    let ps = ps5(ScalarContext::Rational);
    let w = base(&ps);
    assert_eq!(w.frame_norm(&ps), Q3::one());
    let e4 = v(&[0, 0, 0, 1, 0]);
    assert_eq!(plane_make(&ps, &v(&[1, 0, 0, 0, 0]), &v(&[0, 1, 0, 0, 0]), &e4), Err(TwistorError::NotPositive));
    let z = v(&[0, 0, 2, 1, 0]);
    assert_eq!(plane_make(&ps, &v(&[1, 0, 0, 0, 0]), &v(&[0, 1, 0, 0, 0]), &z), Err(TwistorError::NormMismatch));
    let psq = ps5(ScalarContext::Quadratic);
    let w = plane_make(&psq, &v(&[1, 0, 0, 0, 0]), &v(&[0, 1, 0, 0, 0]), &z).unwrap();
    for f in w.frame() {
        assert_eq!(psq.norm(f), w.frame_norm(&psq));
    }
    assert_eq!(
        plane_make(&ps, &v(&[1, 0, 0, 0, 0]), &v(&[0, 1, 0, 0, 0]), &v(&[1, 1, 0, 0, 0])),
        Err(TwistorError::NotThreeDim)
    );
}

#[test]
fn induced_periods() {
    let ps = ps5(ScalarContext::Rational);
    let w = base(&ps);
    let f = w.frame().clone();
    let one = Scalar::one();
    let p = period_of_induced(&ps, &w, &[one.clone(), Scalar::zero(), Scalar::zero()]).unwrap();
    assert!(p.same_line(&PeriodPoint { u: f[1].clone(), v: f[2].clone() }));
    let (ll, _) = p.self_pairing(&ps);
    assert!(Field::is_zero(&ll));
    let m = period_of_induced(&ps, &w, &[-one, Scalar::zero(), Scalar::zero()]).unwrap();
    assert!(m.same_line(&PeriodPoint { u: f[1].clone(), v: f[2].iter().map(|x| -x).collect() }));
    assert!(m.same_line(&p.conj()));
    let half = Scalar::frac(1, 2);
    assert_eq!(
        period_of_induced(&ps, &w, &[half.clone(), half, Scalar::zero()]),
        Err(TwistorError::IrrationalDirection)
    );
}

#[test]
fn intersection_examples() {
    let psq = ps5(ScalarContext::Quadratic);
    let w1 = base(&psq);
    let w2 = plane_make(&psq, &v(&[1, 0, 0, 0, 0]), &v(&[0, 1, 0, 0, 0]), &v(&[0, 0, 2, 1, 0])).unwrap();
    let r = lines_intersect(&psq, &w1, &w2);
    assert!(r.intersects);
    assert_eq!(r.shared.dim(), 2);
    let target = PeriodPoint { u: v(&[1, 0, 0, 0, 0]), v: v(&[0, 1, 0, 0, 0]) };
    assert_eq!(r.vertices.len(), 2);
    assert!(r.vertices.iter().any(|p| p.same_line(&target)));
    assert!(r.vertices.iter().any(|p| p.same_line(&target.conj())));
    assert_eq!(lines_intersect(&psq, &w1, &w1).shared.dim(), 3);
    // shares only e1 with the base plane
    let w3 = plane_make(&psq, &v(&[1, 0, 0, 0, 0]), &v(&[0, 2, 0, 1, 0]), &v(&[0, 0, 2, 0, 1])).unwrap();
    assert!(!lines_intersect(&psq, &w1, &w3).intersects);
}

#[test]
fn connect_planes_examples() {
    let psq = ps5(ScalarContext::Quadratic);
    let w = base(&psq);
    assert_eq!(connect_planes(&psq, &w, &w).unwrap().len(), 0);
    let w2 = plane_make(&psq, &v(&[1, 0, 0, 0, 0]), &v(&[0, 1, 0, 0, 0]), &v(&[0, 0, 2, 1, 0])).unwrap();
    let p = connect_planes(&psq, &w, &w2).unwrap();
    assert_eq!(p.len(), 1);
    assert!(p.edges[1].same_plane(&w2));
    validate_path(&psq, &p).unwrap();
}

#[test]
fn connect_planes_cayley_images() {
    let ps = ps5(ScalarContext::Rational);
    let w = base(&ps);
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut done = 0;
    while done < 25 {
        let Some(g) = random_orthogonal(ps.form(), 5, &mut rng) else { continue };
        let frame = [0, 1, 2].map(|k| g.col(k).into_iter().map(Q3::rational).collect::<Vec3>());
        let w2 = TwistorPlane::from_frame(&ps, frame).unwrap();
        let p = connect_planes(&ps, &w, &w2).unwrap();
        assert!(p.len() <= 6);
        assert!(p.edges.last().unwrap().same_plane(&w2));
        validate_path(&ps, &p).unwrap();
        done += 1;
    }
}

fn irrational_line() -> PeriodPoint {
    // e1 + i(e2 + √3 e3)/2
    PeriodPoint { u: v(&[1, 0, 0, 0]), v: vec![Q3::zero(), q3((1, 2), (0, 1)), q3((0, 1), (1, 2)), Q3::zero()] }
}

#[test]
fn neron_severi_examples() {
    let lat = lattice(&[1, 1, 1, -1]);
    let ns = neron_severi(&lat, &irrational_line());
    assert_eq!(ns.basis, vec![vec![0, 0, 0, 1]]);
    let rat = PeriodPoint { u: v(&[1, 0, 0, 0]), v: v(&[0, 1, 0, 0]) };
    assert_eq!(neron_severi(&lat, &rat).rank(), 2);
    let ps = PeriodSpace::diag(&[1, 1, 1, -1], ScalarContext::Quadratic).unwrap();
    let inst = admissible_instance(&ps, &lat, &NSLattice::zero(4), 3).unwrap();
    assert_eq!(neron_severi(&lat, &inst.start_period).rank(), 0);
}

#[test]
fn general_type_examples() {
    let lat = lattice(&[1, 1, 1, -1]);
    let ps = PeriodSpace::diag(&[1, 1, 1, -1], ScalarContext::Quadratic).unwrap();
    let w = plane_make(&ps, &v(&[1, 0, 0, 0]), &v(&[0, 1, 0, 0]), &v(&[0, 0, 1, 0])).unwrap();
    assert_eq!(general_type2(&lat, &w, &irrational_line()), Ok(true));
    let rat = PeriodPoint { u: v(&[1, 0, 0, 0]), v: v(&[0, 1, 0, 0]) };
    assert_eq!(general_type2(&lat, &w, &rat), Ok(false));
    for l in [irrational_line(), rat] {
        assert!(neron_severi(&lat, &l).contains_lattice(&lattice_perp(&lat, &w)));
    }
    let off = PeriodPoint { u: v(&[1, 0, 0, 0]), v: v(&[0, 0, 0, 1]) };
    assert_eq!(general_type2(&lat, &w, &off), Err(TwistorError::PeriodNotOnLine));
}

#[test]
fn admissibility_reports() {
    let lat = lattice(&[1, 1, 1, -1]);
    let ps = PeriodSpace::diag(&[1, 1, 1, -1], ScalarContext::Quadratic).unwrap();
    let w = plane_make(&ps, &v(&[1, 0, 0, 0]), &v(&[0, 1, 0, 0]), &v(&[0, 0, 1, 0])).unwrap();
    let l = irrational_line();
    let zero = TwistorPath { edges: vec![w.clone()], vertices: vec![], endpoints: Some((l.clone(), l.clone())) };
    assert!(is_admissible(&lat, &zero).pass);
    let w2 = plane_make(&ps, &v(&[1, 0, 0, 0]), &v(&[0, 1, 0, 0]), &v(&[0, 0, 2, 1])).unwrap();
    let rat = PeriodPoint { u: v(&[1, 0, 0, 0]), v: v(&[0, 1, 0, 0]) };
    let path = TwistorPath { edges: vec![w, w2], vertices: vec![Some(rat)], endpoints: Some((l.clone(), l)) };
    let r = is_admissible(&lat, &path);
    assert!(!r.pass);
    let failed: Vec<_> = r.entries.iter().filter(|e| !e.pass).map(|e| e.label.as_str()).collect();
    assert_eq!(failed.len(), 3, "{failed:?}");
    assert_eq!(failed.iter().filter(|s| s.contains("vertex 0")).count(), 2);
}

#[test]
fn admissible_search_b5() {
    let ps = ps5(ScalarContext::Quadratic);
    let lat = lattice(&[1, 1, 1, -1, -1]);
    let q = NSLattice::saturated_span(5, &[vec![0, 0, 0, 0, 1]]);
    for seed in 0..3 {
        let inst = admissible_instance(&ps, &lat, &q, seed).unwrap();
        let cfg = SearchConfig { seed, ..SearchConfig::default() };
        let p = connect_admissible(&ps, &lat, &q, (&inst.start, &inst.start_period), (&inst.end, &inst.end_period), cfg)
            .unwrap();
        validate_path(&ps, &p).unwrap();
        assert!(is_admissible(&lat, &p).pass);
        for x in p.vertices.iter().flatten() {
            assert_eq!(neron_severi(&lat, x), q);
        }
        let again =
            connect_admissible(&ps, &lat, &q, (&inst.start, &inst.start_period), (&inst.end, &inst.end_period), cfg)
                .unwrap();
        assert_eq!(p, again);
    }
}

#[test]
fn precondition_ns() {
    let ps = ps5(ScalarContext::Quadratic);
    let lat = lattice(&[1, 1, 1, -1, -1]);
    let q = NSLattice::saturated_span(5, &[vec![0, 0, 0, 0, 1]]);
    let w = base(&ps);
    let rat = PeriodPoint { u: v(&[1, 0, 0, 0, 0]), v: v(&[0, 1, 0, 0, 0]) };
    let r = connect_admissible(&ps, &lat, &q, (&w, &rat), (&w, &rat), SearchConfig::default());
    assert!(matches!(r, Err(TwistorError::PreconditionNS(_))));
}

#[test]
fn path_file_round_trip() {
    let psq = ps5(ScalarContext::Quadratic);
    let w = base(&psq);
    let w2 = plane_make(&psq, &v(&[1, 0, 0, 0, 0]), &v(&[0, 1, 0, 0, 0]), &v(&[0, 0, 2, 1, 0])).unwrap();
    let p = connect_planes(&psq, &w, &w2).unwrap();
    let f = path_to_json(&psq, &p);
    let s = serde_json::to_string(&f).unwrap();
    let (ps2, back) = path_from_json(&serde_json::from_str(&s).unwrap(), ScalarContext::Quadratic).unwrap();
    assert_eq!(ps2, psq);
    assert_eq!(back, p);
}

fn small_rational() -> impl Strategy<Value = Scalar> {
    (-3i64..=3, 1i64..=3).prop_map(|(a, b)| Scalar::frac(a, b))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn intersection_is_symmetric(seed in 0u64..1000, t in small_rational()) {
        let psq = ps5(ScalarContext::Quadratic);
        let w1 = base(&psq);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_orthogonal(psq.form(), 5, &mut rng);
        prop_assume!(g.is_some());
        let g = g.unwrap();
        let mut frame = [0, 1, 2].map(|k| g.col(k).into_iter().map(Q3::rational).collect::<Vec3>());
        // keep e1 so the pair sometimes intersects
        if t.signum() > 0 { frame[0] = v(&[1, 0, 0, 0, 0]); }
        let w2 = match plane_make(&psq, &frame[0], &frame[1], &frame[2]) { Ok(w) => w, Err(_) => return Ok(()) };
        let a = lines_intersect(&psq, &w1, &w2);
        let b = lines_intersect(&psq, &w2, &w1);
        prop_assert_eq!(a.intersects, b.intersects);
        prop_assert!(a.shared.contains_subspace(&b.shared) && b.shared.contains_subspace(&a.shared));
        prop_assert_eq!(a.vertices.len(), b.vertices.len());
        for x in &a.vertices {
            prop_assert!(b.vertices.iter().any(|y| y.same_line(x)));
            let plane = x.real_plane();
            for u in plane.basis() {
                prop_assert!(w1.contains(&u) && w2.contains(&u));
            }
        }
    }

    #[test]
    fn induced_periods_lie_on_quadric(seed in 0u64..1000, k in 0usize..5) {
        let ps = ps5(ScalarContext::Rational);
        let lat = lattice(&[1, 1, 1, -1, -1]);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_orthogonal(ps.form(), 5, &mut rng);
        prop_assume!(g.is_some());
        let g = g.unwrap();
        let frame = [0, 1, 2].map(|c| g.col(c).into_iter().map(Q3::rational).collect::<Vec3>());
        let w = TwistorPlane::from_frame(&ps, frame).unwrap();
        let dir = hkcore::hodge_su2::default_directions()[k].clone();
        let p = period_of_induced(&ps, &w, &dir).unwrap();
        let (ll, _) = p.self_pairing(&ps);
        let lbar = ps.norm(&p.u);
        prop_assert!(Field::is_zero(&ll));
        prop_assert!(lbar.signum() > 0);
        prop_assert!(neron_severi(&lat, &p).contains_lattice(&lattice_perp(&lat, &w)));
    }
}
