use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use hkcore::exact_kernel::Q3;
use hkcore::hodge_su2::{base_frame, random_orthogonal};
use hkcore::model_forge::{make_lattice, parse_diag, IntegralLattice};
use hkcore::twistor_walk::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::report::Record;

/// `diag:…` or a JSON file holding an integer matrix, bare or under `"gram"`.
pub fn read_gram(spec: &str) -> Result<Vec<Vec<i64>>> {
    if spec.starts_with("diag:") {
        let d = parse_diag(spec)?;
        let n = d.len();
        return Ok((0..n).map(|i| (0..n).map(|j| if i == j { d[i] } else { 0 }).collect()).collect());
    }
    let text = std::fs::read_to_string(spec).with_context(|| format!("reading {spec}"))?;
    let v: Value = serde_json::from_str(&text).with_context(|| format!("parsing {spec}"))?;
    let m = v.get("gram").cloned().unwrap_or(v);
    serde_json::from_value(m).map_err(|e| anyhow!("{spec}: expected an integer matrix: {e}"))
}

/// `none`, or a comma list of `e<k>` (1-based) or bracketed integer vectors.
pub fn parse_ns(spec: Option<&str>, b: usize) -> Result<NSLattice> {
    let Some(spec) = spec.filter(|s| !matches!(*s, "none" | "0" | "")) else {
        return Ok(NSLattice::zero(b));
    };
    let mut gens = Vec::new();
    for tok in spec.split(';').flat_map(|t| if t.contains('[') { vec![t] } else { t.split(',').collect() }) {
        let tok = tok.trim();
        if let Some(k) = tok.strip_prefix('e') {
            let k: usize = k.parse().map_err(|_| anyhow!("bad basis vector {tok:?}"))?;
            if k == 0 || k > b {
                bail!("basis vector {tok} outside 1..={b}");
            }
            let mut v = vec![0; b];
            v[k - 1] = 1;
            gens.push(v);
        } else {
            let v: Vec<i64> = serde_json::from_str(tok).map_err(|_| anyhow!("bad NS generator {tok:?}"))?;
            if v.len() != b {
                bail!("NS generator {tok} has length {} ≠ {b}", v.len());
            }
            gens.push(v);
        }
    }
    Ok(NSLattice::saturated_span(b, &gens))
}

pub fn max_height() -> Result<u32> {
    match std::env::var("HKCTL_MAX_HEIGHT") {
        Ok(s) => s.trim().parse().map_err(|_| anyhow!("HKCTL_MAX_HEIGHT must be a positive integer, got {s:?}")),
        Err(_) => Ok(20),
    }
}

pub struct Space {
    pub lat: IntegralLattice,
    pub gram: Vec<Vec<i64>>,
}

impl Space {
    pub fn load(spec: &str) -> Result<Self> {
        let gram = read_gram(spec)?;
        let lat = make_lattice(&gram)?;
        Ok(Space { lat, gram })
    }

    pub fn period_space(&self, ctx: ScalarContext) -> Result<PeriodSpace> {
        PeriodSpace::new(self.lat.form(), ctx).map_err(|e| anyhow!("{e}"))
    }

    fn model(&self) -> Value {
        json!({"b": self.gram.len()})
    }
}

fn random_plane(ps: &PeriodSpace, base: &[Vec<hkcore::exact_kernel::Scalar>; 3], rng: &mut ChaCha8Rng) -> TwistorPlane {
    loop {
        if let Some(g) = random_orthogonal(ps.form(), ps.dim(), rng) {
            let frame = [0, 1, 2].map(|k| g.mul_vec(&base[k]).into_iter().map(Q3::rational).collect::<Vec3>());
            if let Ok(w) = TwistorPlane::from_frame(ps, frame) {
                return w;
            }
        }
    }
}

/// Seeded random plane pairs joined by reflection walks.
pub fn connect(space: &Space, ctx: ScalarContext, seed: u64, count: usize, out: Option<&Path>) -> Result<Vec<Record>> {
    let ps = space.period_space(ctx)?;
    let base = base_frame(ps.form()).ok_or_else(|| anyhow!("no positive frame of equal norms found"))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut records = Vec::new();
    for k in 0..count {
        let w = random_plane(&ps, &base, &mut rng);
        let w2 = random_plane(&ps, &base, &mut rng);
        let rec = match connect_planes(&ps, &w, &w2) {
            Ok(path) => {
                let verdict = validate_path(&ps, &path);
                let ends = path.edges[0].same_plane(&w) && path.edges.last().is_some_and(|l| l.same_plane(&w2));
                let pass = verdict.is_ok() && ends && path.len() <= 6;
                if k == 0 {
                    if let Some(p) = out {
                        write_path(p, &ps, &path)?;
                    }
                }
                Record::new(
                    "twistor-connect",
                    space.model(),
                    seed,
                    pass,
                    json!({
                        "pair": k,
                        "length": path.len(),
                        "vertices": path.vertices.iter().filter(|v| v.is_some()).count(),
                        "validator": verdict.err().unwrap_or_else(|| "ok".into()),
                        "endpoints_match": ends,
                    }),
                )
            }
            Err(e) => Record::new("twistor-connect", space.model(), seed, false, json!({"pair": k, "error": e.to_string()})),
        };
        records.push(rec);
    }
    Ok(records)
}

/// A seeded admissible instance and the searched path between its endpoints.
pub fn admissible(space: &Space, ctx: ScalarContext, q: &NSLattice, seed: u64, out: Option<&Path>) -> Result<Record> {
    let model = space.model();
    let ns_json = json!(q.basis);
    if ctx == ScalarContext::Rational {
        return Ok(Record::new(
            "twistor-admissible",
            model,
            seed,
            false,
            json!({
                "ns": ns_json,
                "error": "rational scalars: edges and shared planes are rational, so every vertex has NS rank b−2 \
                          and can never be of general type",
            }),
        ));
    }
    let ps = space.period_space(ctx)?;
    let cfg = SearchConfig { seed, max_height: max_height()?, ..SearchConfig::default() };
    let run = || -> Result<TwistorPath, TwistorError> {
        let inst = admissible_instance(&ps, &space.lat, q, seed)?;
        connect_admissible(&ps, &space.lat, q, (&inst.start, &inst.start_period), (&inst.end, &inst.end_period), cfg)
    };
    let path = match run() {
        Ok(p) => p,
        Err(e) => {
            let mut data = json!({"ns": ns_json, "error": e.to_string()});
            if let TwistorError::SearchExhausted { max_height, max_steps } = e {
                data["max_height"] = json!(max_height);
                data["max_steps"] = json!(max_steps);
            }
            return Ok(Record::new("twistor-admissible", model, seed, false, data));
        }
    };
    if let Some(p) = out {
        write_path(p, &ps, &path)?;
    }
    let verdict = validate_path(&ps, &path);
    let adm = is_admissible(&space.lat, &path);
    let vertex_ns: Vec<Vec<Vec<i64>>> =
        path.vertices.iter().flatten().map(|x| neron_severi(&space.lat, x).basis).collect();
    let ns_ok = vertex_ns.iter().all(|b| b == &q.basis);
    let pass = verdict.is_ok() && adm.pass && ns_ok;
    Ok(Record::new(
        "twistor-admissible",
        model,
        seed,
        pass,
        json!({
            "ns": ns_json,
            "length": path.len(),
            "validator": verdict.err().unwrap_or_else(|| "ok".into()),
            "admissible": adm.pass,
            "checks": adm.entries,
            "vertex_ns": vertex_ns,
            "max_height": cfg.max_height,
        }),
    ))
}

fn write_path(p: &Path, ps: &PeriodSpace, path: &TwistorPath) -> Result<()> {
    let f = path_to_json(ps, path);
    let s = serde_json::to_string_pretty(&f)? + "\n";
    std::fs::write(p, s).with_context(|| format!("writing {}", p.display()))
}
