use hkcore::exact_kernel::{inertia_exact, proportionality, Inertia, Scalar, SymmetricForm};
use hkcore::frobenius_core::{
    graded_parts, invariant_symmetric_forms, killing_inertia, structure_lie_algebra, validate_algebra,
    GradedFrobeniusAlgebra, SamplerConfig,
};
use hkcore::hodge_su2::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::Record;

pub const SUITES: &[(&str, &str)] = &[
    ("validate", "algebra axioms: unit, graded commutativity, associativity, Poincaré pairing"),
    ("graded-dims", "dim A_2i = C(b+i−1, i) up to the middle, mirrored above"),
    ("so5", "closure of one triple's Lefschetz operators: dim 10, Killing (4,6,0), graded (3,4,3)"),
    ("structure-algebra", "closure of all Lefschetz operators: dim (b+2)(b+1)/2 and Killing inertia"),
    ("bb-independence", "degree-2 forms of 10 triples agree up to one positive factor and are ∝ q"),
    ("mumford-tate", "Weil-operator closure has dim b(b−1)/2 and is skew for the degree-2 form"),
    ("grading-zero", "degree-0 part of the structure algebra equals g_M + span(H)"),
    ("generalized-pairing", "graded pairing non-degenerate, triple-independent, degree 2 ∝ degree-2 form"),
    ("dset", "sampled triples satisfy the five frame equations; Cayley transforms preserve q"),
    ("model-oracle", "trace of 2m degree-2 products equals the perfect-matching sum times one constant"),
];

pub struct Ctx<'a> {
    pub alg: &'a GradedFrobeniusAlgebra,
    pub b: usize,
    pub m: usize,
    pub seed: u64,
}

impl Ctx<'_> {
    fn model(&self) -> Value {
        json!({"b": self.b, "m": self.m})
    }

    fn record(&self, check: &str, pass: bool, data: Value) -> Record {
        Record::new(check, self.model(), self.seed, pass, data)
    }

    fn error(&self, check: &str, e: impl std::fmt::Display) -> Record {
        self.record(check, false, json!({"error": e.to_string()}))
    }

    fn q(&self) -> &SymmetricForm<Scalar> {
        self.alg.reference_form().expect("model carries its form")
    }
}

fn inertia(i: Inertia) -> Value {
    json!([i.n_pos, i.n_neg, i.n_zero])
}

fn binom(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

pub fn run(name: &str, c: &Ctx<'_>) -> Option<Record> {
    let r = match name {
        "validate" => validate(c),
        "graded-dims" => graded_dims(c),
        "so5" => so5(c),
        "structure-algebra" => structure(c),
        "bb-independence" => bb(c),
        "mumford-tate" => mumford_tate(c),
        "grading-zero" => grading_zero(c),
        "generalized-pairing" => pairing(c),
        "dset" => dset(c),
        "model-oracle" => oracle(c),
        _ => return None,
    };
    Some(r)
}

fn validate(c: &Ctx<'_>) -> Record {
    let r = validate_algebra(c.alg);
    let entries: Vec<Value> = r.entries.iter().map(|e| json!({"name": e.name, "pass": e.pass, "witness": e.witness})).collect();
    c.record("validate", r.all_pass(), json!({"entries": entries}))
}

fn graded_dims(c: &Ctx<'_>) -> Record {
    let dims: Vec<usize> = (0..=2 * c.m).map(|i| c.alg.dim(2 * i)).collect();
    let want: Vec<usize> = (0..=2 * c.m).map(|i| binom(c.b + i.min(2 * c.m - i) - 1, i.min(2 * c.m - i))).collect();
    c.record("graded-dims", dims == want, json!({"dims": dims, "expected": want}))
}

fn so5(c: &Ctx<'_>) -> Record {
    let ts = match sample_hk_triples(c.alg, 5, c.seed) {
        Ok(t) => t,
        Err(e) => return c.error("so5", e),
    };
    let mut pass = true;
    let mut rows = vec![];
    for t in &ts {
        let g = so5_closure(c.alg, t);
        let ki = killing_inertia(&g);
        let parts: Vec<usize> = graded_parts(&g).values().map(Vec::len).collect();
        pass &= g.dim() == 10 && ki == Inertia::new(4, 6, 0) && parts == [3, 4, 3];
        rows.push(json!({"dim": g.dim(), "killing": inertia(ki), "graded": parts}));
    }
    let first = &rows[0];
    c.record("so5", pass, json!({"triples": ts.len(), "dim": first["dim"], "killing": first["killing"], "per_triple": rows}))
}

fn structure(c: &Ctx<'_>) -> Record {
    let g = match structure_lie_algebra(c.alg, SamplerConfig { seed: c.seed, ..SamplerConfig::default() }) {
        Ok(g) => g,
        Err(e) => return c.error("structure-algebra", e),
    };
    let b = c.b;
    let ki = killing_inertia(&g);
    let want = Inertia::new(4 * (b - 2), 6 + (b - 2) * (b - 3) / 2, 0);
    let mut pass = g.dim() == (b + 2) * (b + 1) / 2 && ki == want;
    let mut data = json!({
        "dim": g.dim(),
        "expected_dim": (b + 2) * (b + 1) / 2,
        "killing": inertia(ki),
        "expected_killing": inertia(want),
    });
    if c.m == 1 {
        let forms = invariant_symmetric_forms(&g, None);
        let inertias: Vec<Inertia> = forms.iter().map(inertia_exact).collect();
        pass &= forms.len() == 1
            && (inertias[0] == Inertia::new(4, b - 2, 0) || inertias[0] == Inertia::new(b - 2, 4, 0));
        data["invariant_forms"] = json!(forms.len());
        data["invariant_form_inertia"] = json!(inertias.into_iter().map(inertia).collect::<Vec<_>>());
    }
    c.record("structure-algebra", pass, data)
}

fn bb(c: &Ctx<'_>) -> Record {
    let ts = match sample_hk_triples(c.alg, 10, c.seed) {
        Ok(t) => t,
        Err(e) => return c.error("bb-independence", e),
    };
    let forms: Result<Vec<_>, _> = ts.iter().map(|t| bb_extract(c.alg, t)).collect();
    let forms = match forms {
        Ok(f) => f,
        Err(e) => return c.error("bb-independence", e),
    };
    let mut pass = true;
    let mut factors = vec![];
    for f in &forms {
        let k = proportionality(f.gram(), forms[0].gram());
        pass &= k.as_ref().is_some_and(|k| k.signum() > 0);
        pass &= inertia_exact(f) == Inertia::new(3, c.b - 3, 0);
        factors.push(k.map(|k| k.to_string()));
    }
    let to_q = proportionality(forms[0].gram(), c.q().gram());
    pass &= to_q.is_some();
    let positive = factors.iter().flatten().collect::<std::collections::BTreeSet<_>>().len();
    c.record(
        "bb-independence",
        pass,
        json!({
            "triples": ts.len(),
            "factors_to_first": factors,
            "distinct_factors": positive,
            "factor_to_q": to_q.map(|k| k.to_string()),
            "inertia": inertia(inertia_exact(&forms[0])),
        }),
    )
}

fn mumford_tate(c: &Ctx<'_>) -> Record {
    let run = || -> Result<Value, HodgeError> {
        let ts = sample_hk_triples(c.alg, 2, c.seed)?;
        let g = mumford_tate_algebra(c.alg, &ts, &default_directions())?;
        let form = bb_extract(c.alg, &ts[0])?;
        Ok(json!({"dim": g.dim(), "expected_dim": c.b * (c.b - 1) / 2, "skew": skew_on_degree_two(&g, &form)}))
    };
    match run() {
        Ok(d) => c.record("mumford-tate", d["dim"] == d["expected_dim"] && d["skew"] == true, d),
        Err(e) => c.error("mumford-tate", e),
    }
}

fn grading_zero(c: &Ctx<'_>) -> Record {
    let run = || -> Result<DegreeZeroReport, String> {
        let ts = sample_hk_triples(c.alg, 2, c.seed).map_err(|e| e.to_string())?;
        let gm = mumford_tate_algebra(c.alg, &ts, &default_directions()).map_err(|e| e.to_string())?;
        let ga = structure_lie_algebra(c.alg, SamplerConfig { seed: c.seed, ..SamplerConfig::default() })
            .map_err(|e| e.to_string())?;
        Ok(degree_zero_match(&ga, &gm))
    };
    match run() {
        Ok(r) => c.record("grading-zero", r.equal, serde_json::to_value(&r).expect("serializes")),
        Err(e) => c.error("grading-zero", e),
    }
}

fn pairing(c: &Ctx<'_>) -> Record {
    let run = || -> Result<(bool, Value), HodgeError> {
        let ts = sample_hk_triples(c.alg, 5, c.seed)?;
        let ps: Vec<_> = ts.iter().map(|t| generalized_pairing(c.alg, t)).collect::<Result<_, _>>()?;
        let form = bb_extract(c.alg, &ts[0])?;
        let mut pass = true;
        let mut per_degree = serde_json::Map::new();
        for (deg, f) in &ps[0].forms {
            let nondeg = f.is_nondegenerate();
            let factors: Vec<Option<String>> =
                ps[1..].iter().map(|p| proportionality(p.forms[deg].gram(), f.gram()).map(|k| k.to_string())).collect();
            let positive = ps[1..]
                .iter()
                .all(|p| proportionality(p.forms[deg].gram(), f.gram()).is_some_and(|k| k.signum() > 0));
            pass &= nondeg && positive;
            per_degree.insert(
                deg.to_string(),
                json!({"nondegenerate": nondeg, "factors": factors, "inertia": inertia(inertia_exact(f))}),
            );
        }
        let to_bb = proportionality(ps[0].forms[&2].gram(), form.gram());
        pass &= to_bb.is_some();
        Ok((pass, json!({"triples": ts.len(), "degrees": per_degree, "degree2_to_bb": to_bb.map(|k| k.to_string())})))
    };
    match run() {
        Ok((pass, d)) => c.record("generalized-pairing", pass, d),
        Err(e) => c.error("generalized-pairing", e),
    }
}

fn dset(c: &Ctx<'_>) -> Record {
    let q = c.q();
    let ts = match sample_hk_triples(c.alg, 10, c.seed) {
        Ok(t) => t,
        Err(e) => return c.error("dset", e),
    };
    let members = ts.iter().filter(|t| d_member(q, &t.x, &t.y, &t.z)).count();
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let (mut tried, mut orthogonal) = (0, 0);
    for _ in 0..20 {
        if let Some(r) = random_orthogonal(q, c.b, &mut rng) {
            tried += 1;
            orthogonal += usize::from(r.transpose().mul(&q.gram().mul(&r)) == *q.gram());
        }
    }
    let pass = members == ts.len() && orthogonal == tried && tried > 0;
    c.record("dset", pass, json!({"triples": ts.len(), "in_d": members, "cayley": tried, "orthogonal": orthogonal}))
}

/// Σ over perfect matchings of `∏ q(x_i, x_j)`.
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

fn oracle(c: &Ctx<'_>) -> Record {
    let q = c.q();
    let mut rng = ChaCha8Rng::seed_from_u64(c.seed);
    let mut constant: Option<Scalar> = None;
    let mut pass = true;
    let mut nonzero = 0;
    for _ in 0..200 {
        let xs: Vec<Vec<Scalar>> =
            (0..2 * c.m).map(|_| (0..c.b).map(|_| Scalar::from_int(rng.gen_range(-3..=3))).collect()).collect();
        let mut acc = c.alg.unit();
        for x in &xs {
            acc = c.alg.mul(&acc, &c.alg.embed(2, x));
        }
        let lhs = c.alg.trace_of(&acc);
        let rhs = matching_sum(q, &xs);
        if rhs.is_zero() {
            pass &= lhs.is_zero();
            continue;
        }
        nonzero += 1;
        let k = &lhs / &rhs;
        match &constant {
            None => constant = Some(k),
            Some(c0) => pass &= &k == c0,
        }
    }
    pass &= constant.is_some();
    c.record("model-oracle", pass, json!({"tuples": 200, "nonzero": nonzero, "constant": constant.map(|k| k.to_string())}))
}
