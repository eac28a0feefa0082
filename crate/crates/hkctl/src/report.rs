use serde::Serialize;
use serde_json::{json, Value};

#[derive(Clone, Debug, Serialize)]
pub struct Record {
    pub check: String,
    pub model: Value,
    pub seed: u64,
    pub status: &'static str,
    pub data: Value,
}

impl Record {
    pub fn new(check: &str, model: Value, seed: u64, pass: bool, data: Value) -> Self {
        Record { check: check.to_string(), model, seed, status: if pass { "pass" } else { "fail" }, data }
    }

    pub fn pass(&self) -> bool {
        self.status == "pass"
    }
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub toolkit: Value,
    pub config: Value,
    pub records: Vec<Record>,
    pub summary: Value,
}

impl Report {
    pub fn new(config: Value, mut records: Vec<Record>) -> Self {
        records.sort_by(|a, b| {
            (a.check.as_str(), a.model.to_string(), a.seed).cmp(&(b.check.as_str(), b.model.to_string(), b.seed))
        });
        let passed = records.iter().filter(|r| r.pass()).count();
        let summary = json!({"total": records.len(), "passed": passed, "failed": records.len() - passed});
        let toolkit = json!({"name": "hkctl", "version": env!("CARGO_PKG_VERSION")});
        Report { toolkit, config, records, summary }
    }

    pub fn all_pass(&self) -> bool {
        self.records.iter().all(Record::pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// One line per record plus a summary line.
    pub fn print(&self) {
        for r in &self.records {
            let mut line = format!("{} {} seed={}", r.check, r.status, r.seed);
            if let Value::Object(m) = &r.data {
                for (k, v) in m.iter().filter(|(_, v)| v.is_number() || v.is_string() || v.is_array()) {
                    if let Value::Array(a) = v {
                        if a.len() > 8 || a.iter().any(|x| x.is_object() || x.is_array()) {
                            continue;
                        }
                    }
                    if k != "error" && v.as_str().is_some_and(|s| s.len() > 60) {
                        continue;
                    }
                    line.push_str(&format!(" {k}={}", v.to_string().replace('"', "")));
                }
            }
            println!("{line}");
        }
        println!(
            "summary: {}/{} passed",
            self.summary["passed"].as_u64().unwrap_or(0),
            self.summary["total"].as_u64().unwrap_or(0)
        );
    }
}
