//! Acceptance criteria, one line per criterion. Exits non-zero on any failure.

use std::time::Instant;

use hkcore::exact_kernel::{inertia_exact, proportionality, Inertia, Scalar, SymmetricForm};
use hkcore::frobenius_core::{
    graded_parts, invariant_symmetric_forms, killing_inertia, structure_lie_algebra, GradedFrobeniusAlgebra,
    SamplerConfig,
};
use hkcore::hodge_su2::*;
use hkcore::model_forge::{apolar_model, make_lattice, ModelSpec};
use hkcore::twistor_walk::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;

const GRID: [(usize, usize); 6] = [(4, 1), (4, 2), (5, 1), (5, 2), (6, 1), (6, 2)];

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn models() -> Vec<(usize, usize, GradedFrobeniusAlgebra)> {
    GRID.iter().map(|&(b, m)| (b, m, apolar_model(&ModelSpec::standard(b, m)).unwrap())).collect()
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn so41(ms: &[(usize, usize, GradedFrobeniusAlgebra)]) -> Outcome {
    for (b, m, a) in ms {
        for (k, t) in sample_hk_triples(a, 5, 100 + *b as u64).map_err(|e| e.to_string())?.iter().enumerate() {
            let g = so5_closure(a, t);
            let ki = killing_inertia(&g);
            let parts: Vec<usize> = graded_parts(&g).values().map(Vec::len).collect();
            ensure(g.dim() == 10 && ki == Inertia::new(4, 6, 0) && parts == [3, 4, 3], || {
                format!("b={b} m={m} triple {k}: dim {} killing {ki:?} parts {parts:?}", g.dim())
            })?;
        }
    }
    Ok("6 models × 5 triples: dim 10, killing (4,6,0), graded (3,4,3)".into())
}

fn structure(ms: &[(usize, usize, GradedFrobeniusAlgebra)]) -> Outcome {
    let mut dims = Vec::new();
    for (b, m, a) in ms {
        let g = structure_lie_algebra(a, SamplerConfig::default()).map_err(|e| e.to_string())?;
        let want = (b + 2) * (b + 1) / 2;
        let ki = killing_inertia(&g);
        let want_ki = Inertia::new(4 * (b - 2), 6 + (b - 2) * (b - 3) / 2, 0);
        ensure(g.dim() == want && ki == want_ki, || format!("b={b} m={m}: dim {} killing {ki:?}", g.dim()))?;
        if *m == 1 {
            let forms = invariant_symmetric_forms(&g, None);
            ensure(forms.len() == 1, || format!("b={b}: {} invariant forms", forms.len()))?;
            let i = inertia_exact(&forms[0]);
            ensure(i == Inertia::new(4, b - 2, 0) || i == Inertia::new(b - 2, 4, 0), || {
                format!("b={b}: invariant form inertia {i:?}")
            })?;
        }
        dims.push(g.dim());
    }
    Ok(format!("closure dims {dims:?}, killing inertias and invariant forms exact"))
}

fn graded_dims(ms: &[(usize, usize, GradedFrobeniusAlgebra)]) -> Outcome {
    for (b, m, a) in ms {
        for i in 0..=2 * m {
            let want = binom(b + i.min(2 * m - i) - 1, i.min(2 * m - i));
            ensure(a.dim(2 * i) == want, || format!("b={b} m={m}: dim A_{} = {} ≠ {want}", 2 * i, a.dim(2 * i)))?;
            ensure(a.dim(2 * i) == a.dim(4 * m - 2 * i), || format!("b={b} m={m}: asymmetric in degree {}", 2 * i))?;
        }
    }
    Ok("dims C(b+i−1,i), mirrored, all grid models".into())
}

fn bb(ms: &[(usize, usize, GradedFrobeniusAlgebra)]) -> Outcome {
    for (b, m, a) in ms {
        let q = a.reference_form().unwrap();
        let forms: Vec<SymmetricForm<Scalar>> = sample_hk_triples(a, 10, 200 + *b as u64)
            .map_err(|e| e.to_string())?
            .iter()
            .map(|t| bb_extract(a, t))
            .collect::<Result<_, _>>()
            .map_err(|e| e.to_string())?;
        for f in &forms {
            let c = proportionality(f.gram(), forms[0].gram());
            ensure(c.is_some_and(|c| c.signum() > 0), || format!("b={b} m={m}: forms not positively proportional"))?;
            ensure(proportionality(f.gram(), q.gram()).is_some(), || format!("b={b} m={m}: form not ∝ q"))?;
            let i = inertia_exact(f);
            ensure(i == Inertia::new(3, b - 3, 0), || format!("b={b} m={m}: inertia {i:?}"))?;
        }
    }
    Ok("10 triples per model: one positive factor, ∝ q, inertia (3,b−3,0)".into())
}

fn gm(ms: &[(usize, usize, GradedFrobeniusAlgebra)]) -> Outcome {
    for (b, m, a) in ms {
        let ts = sample_hk_triples(a, 2, 300).map_err(|e| e.to_string())?;
        let g = mumford_tate_algebra(a, &ts, &default_directions()).map_err(|e| e.to_string())?;
        let bbf = bb_extract(a, &ts[0]).map_err(|e| e.to_string())?;
        ensure(g.dim() == b * (b - 1) / 2, || format!("b={b} m={m}: dim {}", g.dim()))?;
        ensure(skew_on_degree_two(&g, &bbf), || format!("b={b} m={m}: not skew for BB"))?;
    }
    Ok("2 triples × 5 directions: dim b(b−1)/2, skew for BB".into())
}

fn degree_zero(ms: &[(usize, usize, GradedFrobeniusAlgebra)]) -> Outcome {
    let mut note = String::new();
    for (b, m, a) in ms {
        let ts = sample_hk_triples(a, 2, 400).map_err(|e| e.to_string())?;
        let g = mumford_tate_algebra(a, &ts, &default_directions()).map_err(|e| e.to_string())?;
        let ga = structure_lie_algebra(a, SamplerConfig::default()).map_err(|e| e.to_string())?;
        let r = degree_zero_match(&ga, &g);
        ensure(r.equal && r.dim_degree_zero == b * (b - 1) / 2 + 1, || format!("b={b} m={m}: {r:?}"))?;
        ensure(!r.note.is_empty(), || "missing Id/H note".into())?;
        note = r.note;
    }
    Ok(format!("g(A)_0 = g_M + span(H) on all grid models; note: {note}"))
}

fn pairing(ms: &[(usize, usize, GradedFrobeniusAlgebra)]) -> Outcome {
    for (b, m, a) in ms {
        let ts = sample_hk_triples(a, 5, 500).map_err(|e| e.to_string())?;
        let ps: Vec<_> =
            ts.iter().map(|t| generalized_pairing(a, t)).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
        let bbf = bb_extract(a, &ts[0]).map_err(|e| e.to_string())?;
        for (deg, f) in &ps[0].forms {
            ensure(f.is_nondegenerate(), || format!("b={b} m={m}: degenerate in degree {deg}"))?;
            for p in &ps[1..] {
                let c = proportionality(p.forms[deg].gram(), f.gram());
                ensure(c.is_some_and(|c| c.signum() > 0), || format!("b={b} m={m}: degree {deg} not ∝"))?;
            }
        }
        ensure(proportionality(ps[0].forms[&2].gram(), bbf.gram()).is_some(), || {
            format!("b={b} m={m}: degree 2 not ∝ BB")
        })?;
    }
    Ok("5 triples per model: non-degenerate, per-degree positive factor, degree 2 ∝ BB".into())
}

fn rational_plane(ps: &PeriodSpace, rng: &mut ChaCha8Rng) -> TwistorPlane {
    loop {
        if let Some(g) = random_orthogonal(ps.form(), ps.dim(), rng) {
            let frame = [0, 1, 2].map(|k| g.col(k).into_iter().map(hkcore::exact_kernel::Q3::rational).collect());
            return TwistorPlane::from_frame(ps, frame).unwrap();
        }
    }
}

fn connectivity() -> Outcome {
    let ps = PeriodSpace::diag(&[1, 1, 1, -1, -1], ScalarContext::Rational).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(800);
    let mut longest = 0;
    for k in 0..100 {
        let w = rational_plane(&ps, &mut rng);
        let w2 = rational_plane(&ps, &mut rng);
        let p = connect_planes(&ps, &w, &w2).map_err(|e| format!("pair {k}: {e}"))?;
        validate_path(&ps, &p).map_err(|e| format!("pair {k}: {e}"))?;
        ensure(p.edges[0].same_plane(&w) && p.edges.last().unwrap().same_plane(&w2), || format!("pair {k}: ends"))?;
        ensure(p.len() <= 6, || format!("pair {k}: length {}", p.len()))?;
        longest = longest.max(p.len());
    }
    Ok(format!("100 pairs validated, max length {longest}"))
}

fn diag_lattice(d: &[i64]) -> hkcore::model_forge::IntegralLattice {
    let n = d.len();
    make_lattice(&(0..n).map(|i| (0..n).map(|j| if i == j { d[i] } else { 0 }).collect()).collect::<Vec<_>>()).unwrap()
}

fn admissible() -> Outcome {
    let mut runs = vec![];
    for (d, qb, count) in [(vec![1, 1, 1, -1, -1], vec![vec![0, 0, 0, 0, 1]], 20u64), (vec![1, 1, 1, -1], vec![], 1)] {
        let b = d.len();
        let ps = PeriodSpace::diag(&d, ScalarContext::Quadratic).unwrap();
        let lat = diag_lattice(&d);
        let q = NSLattice::saturated_span(b, &qb);
        for seed in 0..count {
            let inst = admissible_instance(&ps, &lat, &q, 900 + seed).map_err(|e| format!("b={b} seed {seed}: {e}"))?;
            let cfg = SearchConfig { seed, ..SearchConfig::default() };
            let p = connect_admissible(&ps, &lat, &q, (&inst.start, &inst.start_period), (&inst.end, &inst.end_period), cfg)
                .map_err(|e| format!("b={b} seed {seed}: {e}"))?;
            validate_path(&ps, &p).map_err(|e| format!("b={b} seed {seed}: {e}"))?;
            ensure(is_admissible(&lat, &p).pass, || format!("b={b} seed {seed}: not admissible"))?;
            for x in p.vertices.iter().flatten() {
                ensure(neron_severi(&lat, x) == q, || format!("b={b} seed {seed}: vertex NS ≠ Q"))?;
            }
            ensure(p.edges.iter().all(|w| w.frame().iter().flatten().any(|c| !c.is_rational())), || {
                format!("b={b} seed {seed}: rational edge")
            })?;
        }
        runs.push(format!("b={b} rank(Q)={}: {count} paths", q.rank()));
    }
    Ok(runs.join("; "))
}

fn dset() -> Outcome {
    let mut n = 0;
    for (b, m, a) in &models()[..] {
        let q = a.reference_form().unwrap();
        for t in sample_hk_triples(a, 10, 1000).map_err(|e| e.to_string())? {
            ensure(d_member(q, &t.x, &t.y, &t.z), || format!("b={b} m={m}: triple outside D"))?;
            n += 1;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(1001);
        for _ in 0..20 {
            if let Some(r) = random_orthogonal(q, *b, &mut rng) {
                ensure(r.transpose().mul(&q.gram().mul(&r)) == *q.gram(), || format!("b={b}: RᵀGR ≠ G"))?;
                n += 1;
            }
        }
    }
    Ok(format!("{n} triples and Cayley transforms checked"))
}

fn matching_sum(q: &SymmetricForm<Scalar>, xs: &[Vec<Scalar>]) -> Scalar {
    if xs.is_empty() {
        return Scalar::one();
    }
    let mut total = Scalar::zero();
    for k in 1..xs.len() {
        let rest: Vec<Vec<Scalar>> =
            xs.iter().enumerate().filter(|&(i, _)| i != 0 && i != k).map(|(_, v)| v.clone()).collect();
        total += &(&q.eval(&xs[0], &xs[k]) * &matching_sum(q, &rest));
    }
    total
}

fn matching(ms: &[(usize, usize, GradedFrobeniusAlgebra)]) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1100);
    let mut consts = vec![];
    for (b, m, a) in ms.iter().filter(|(b, m, _)| *b <= 5 && *m <= 2) {
        let q = a.reference_form().unwrap();
        let mut constant: Option<Scalar> = None;
        for _ in 0..200 {
            let xs: Vec<Vec<Scalar>> =
                (0..2 * m).map(|_| (0..*b).map(|_| Scalar::from_int(rng.gen_range(-3..=3))).collect()).collect();
            let mut acc = a.unit();
            for x in &xs {
                acc = a.mul(&acc, &a.embed(2, x));
            }
            let lhs = a.trace_of(&acc);
            let rhs = matching_sum(q, &xs);
            if rhs.is_zero() {
                ensure(lhs.is_zero(), || format!("b={b} m={m}: trace ≠ 0 where matching sum = 0"))?;
                continue;
            }
            let c = &lhs / &rhs;
            match &constant {
                None => constant = Some(c),
                Some(k) => ensure(&c == k, || format!("b={b} m={m}: constant {c} ≠ {k}"))?,
            }
        }
        consts.push(format!("({b},{m})→{}", constant.ok_or("no non-zero tuple")?));
    }
    Ok(format!("200 tuples per model, constants {}", consts.join(" ")))
}

fn main() {
    let t0 = Instant::now();
    let ms = models();
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("so(4,1) action", Box::new(|| so41(&ms))),
        ("structure algebra", Box::new(|| structure(&ms))),
        ("graded dimensions", Box::new(|| graded_dims(&ms))),
        ("BB independence", Box::new(|| bb(&ms))),
        ("g_M", Box::new(|| gm(&ms))),
        ("grading-zero part", Box::new(|| degree_zero(&ms))),
        ("generalized pairing", Box::new(|| pairing(&ms))),
        ("twistor connectivity", Box::new(connectivity)),
        ("admissible paths", Box::new(admissible)),
        ("D-set and sampling", Box::new(dset)),
        ("model oracle", Box::new(|| matching(&ms))),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let r = f();
        let secs = t.elapsed().as_secs_f64();
        match r {
            Ok(msg) => println!("criterion {:>2} PASS {name} ({secs:.1}s): {msg}", k + 1),
            Err(msg) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} ({secs:.1}s): {msg}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed, {:.1}s", criteria.len() - failed, t0.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
