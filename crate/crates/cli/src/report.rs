use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub compared: usize,
    pub counterexamples: Vec<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, compared: usize, counterexamples: Vec<String>) -> Check {
        Check { name: name.into(), passed: counterexamples.is_empty(), compared, counterexamples }
    }

    pub fn fail(name: impl Into<String>, why: String) -> Check {
        Check { name: name.into(), passed: false, compared: 0, counterexamples: vec![why] }
    }
}

/// Output of every subcommand. Wall time goes to stderr so that reports of
/// identical runs are byte-identical.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub subcommand: String,
    pub parameters: BTreeMap<String, Value>,
    pub passed: bool,
    pub checks: Vec<Check>,
    pub result: Value,
    #[serde(skip)]
    pub lines: Vec<String>,
}

impl RunReport {
    pub fn new(subcommand: &str) -> RunReport {
        RunReport {
            subcommand: subcommand.into(),
            parameters: BTreeMap::new(),
            passed: true,
            checks: vec![],
            result: Value::Null,
            lines: vec![],
        }
    }

    pub fn param(mut self, k: &str, v: impl Serialize) -> RunReport {
        self.parameters.insert(k.into(), serde_json::to_value(v).expect("parameter serializes"));
        self
    }

    pub fn check(&mut self, c: Check) {
        self.passed &= c.passed;
        self.checks.push(c);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_table(&self) -> String {
        let mut out = String::new();
        let params: Vec<String> = self.parameters.iter().map(|(k, v)| format!("{k}={v}")).collect();
        out += &format!("# {} {}\n", self.subcommand, params.join(" "));
        for l in &self.lines {
            out += l;
            out.push('\n');
        }
        for c in &self.checks {
            out += &format!("{} {} ({} compared)\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.compared);
            for x in c.counterexamples.iter().take(10) {
                out += &format!("    {x}\n");
            }
        }
        if !self.checks.is_empty() {
            out += &format!("{}\n", if self.passed { "all checks passed" } else { "some checks FAILED" });
        }
        out
    }
}
