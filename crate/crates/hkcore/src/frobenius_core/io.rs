//! JSON form of an algebra: only `i ≤ j` non-zero constants are listed and the
//! remaining ones follow from graded commutativity.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::exact_kernel::{Matrix, Scalar, SymmetricForm};

use super::{FrobeniusError, GradedFrobeniusAlgebra};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub top_degree: usize,
    pub dims: Vec<usize>,
    pub mult: Vec<(usize, usize, usize, usize, usize, String)>,
    pub trace: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_form: Option<Vec<Vec<String>>>,
    #[serde(default)]
    pub meta: BTreeMap<String, serde_json::Value>,
}

fn bad(msg: impl Into<String>) -> FrobeniusError {
    FrobeniusError::Malformed(msg.into())
}

fn parse(s: &str) -> Result<Scalar, FrobeniusError> {
    s.parse().map_err(|_| bad(format!("bad scalar {s:?}")))
}

pub fn algebra_to_json(a: &GradedFrobeniusAlgebra) -> AlgebraFile {
    let mut mult = Vec::new();
    for (&(i, j), t) in a.tables() {
        if i > j {
            continue;
        }
        let (di, dj, dk) = (a.dim(i), a.dim(j), a.dim(i + j));
        for x in 0..di {
            for y in 0..dj {
                if i == j && y < x {
                    continue;
                }
                for g in 0..dk {
                    let c = &t[(x * dj + y) * dk + g];
                    if !c.is_zero() {
                        mult.push((i, x, j, y, g, c.to_frac_string()));
                    }
                }
            }
        }
    }
    AlgebraFile {
        top_degree: a.top_degree(),
        dims: a.dims().to_vec(),
        mult,
        trace: a.trace_vector().iter().map(|s| s.to_frac_string()).collect(),
        reference_form: a.reference_form().map(|f| f.gram().to_strings()),
        meta: a.meta().iter().map(|(k, v)| (k.clone(), serde_json::Value::String(v.clone()))).collect(),
    }
}

pub fn algebra_from_json(f: &AlgebraFile) -> Result<GradedFrobeniusAlgebra, FrobeniusError> {
    let top = f.top_degree;
    if f.dims.len() != top + 1 {
        return Err(bad(format!("dims has {} entries for top degree {top}", f.dims.len())));
    }
    let dims = &f.dims;
    let mut seen: HashMap<(usize, usize, usize, usize, usize), Scalar> = HashMap::new();
    for (i, x, j, y, g, c) in &f.mult {
        let (i, x, j, y, g) = (*i, *x, *j, *y, *g);
        if i > j {
            return Err(bad(format!("entry ({i},{x},{j},{y},{g}) has i > j")));
        }
        if i + j > top || x >= dims[i] || y >= dims[j] || g >= dims[i + j] {
            return Err(bad(format!("entry ({i},{x},{j},{y},{g}) out of range")));
        }
        let v = parse(c)?;
        if seen.insert((i, x, j, y, g), v).is_some() {
            return Err(bad(format!("duplicate entry ({i},{x},{j},{y},{g})")));
        }
    }
    let mut tables: BTreeMap<(usize, usize), Vec<Scalar>> = BTreeMap::new();
    for i in 0..=top {
        for j in 0..=top - i {
            tables.insert((i, j), vec![Scalar::zero(); dims[i] * dims[j] * dims[i + j]]);
        }
    }
    let idx = |i: usize, x: usize, j: usize, y: usize, g: usize| (x * dims[j] + y) * dims[i + j] + g;
    for (&(i, x, j, y, g), v) in &seen {
        let sign = if (i * j) % 2 == 1 { -v.clone() } else { v.clone() };
        if i == j {
            if let Some(w) = seen.get(&(j, y, i, x, g)) {
                if *w != sign {
                    return Err(bad(format!("entries ({i},{x},{j},{y},{g}) violate graded commutativity")));
                }
            }
        }
        tables.get_mut(&(i, j)).unwrap()[idx(i, x, j, y, g)] = v.clone();
        tables.get_mut(&(j, i)).unwrap()[idx(j, y, i, x, g)] = sign;
    }
    if f.trace.len() != dims[top] {
        return Err(bad("trace length differs from dim of the top degree"));
    }
    let trace = f.trace.iter().map(|s| parse(s)).collect::<Result<Vec<_>, _>>()?;
    let reference_form = match &f.reference_form {
        None => None,
        Some(rows) => {
            let m = Matrix::from_strings(rows).map_err(|e| bad(e.to_string()))?;
            Some(SymmetricForm::new(m).map_err(|e| bad(e.to_string()))?)
        }
    };
    let meta = f
        .meta
        .iter()
        .map(|(k, v)| (k.clone(), v.as_str().map(str::to_string).unwrap_or_else(|| v.to_string())))
        .collect();
    Ok(GradedFrobeniusAlgebra::from_parts(top, dims.clone(), tables, trace, reference_form, meta))
}
