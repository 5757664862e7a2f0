//! Check reports: deterministic, serializable summaries of verification runs.
//!
//! Every checker produces a `CheckReport`. Violations are recorded in the
//! order the sample was traversed, and all element strings come from the
//! canonical displays, so two runs over the same sample produce identical
//! reports byte for byte.

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub witness: Vec<String>,
    pub residual: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    #[serde(rename = "check-name")]
    pub check_name: String,
    #[serde(rename = "algebra-id")]
    pub algebra_id: String,
    #[serde(rename = "sample-size")]
    pub sample_size: usize,
    #[serde(rename = "violations-total")]
    pub violations_total: usize,
    pub violations: Vec<Violation>,
}

impl CheckReport {
    pub fn new(check_name: impl Into<String>, algebra_id: impl Into<String>) -> Self {
        CheckReport {
            check_name: check_name.into(),
            algebra_id: algebra_id.into(),
            sample_size: 0,
            violations_total: 0,
            violations: Vec::new(),
        }
    }

    pub fn record(&mut self, witness: Vec<String>, residual: String) {
        self.violations_total += 1;
        self.violations.push(Violation { witness, residual });
    }

    pub fn passed(&self) -> bool {
        self.violations_total == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization cannot fail")
    }

    /// Plain-text rendering; at most `max_violations` are listed in full.
    pub fn render_text(&self, max_violations: Option<usize>) -> String {
        let mut out = String::new();
        out.push_str(&format!("check: {}\n", self.check_name));
        out.push_str(&format!("algebra: {}\n", self.algebra_id));
        out.push_str(&format!("{} tuples checked\n", self.sample_size));
        if self.passed() {
            out.push_str("no violations\n");
            return out;
        }
        out.push_str(&format!("violations: {}\n", self.violations_total));
        let shown = max_violations.unwrap_or(self.violations.len());
        for v in self.violations.iter().take(shown) {
            out.push_str(&format!("  witness: ({})\n", v.witness.join(", ")));
            out.push_str(&format!("  residual: {}\n", v.residual));
        }
        if self.violations.len() > shown {
            out.push_str(&format!(
                "  ... {} more not shown\n",
                self.violations.len() - shown
            ));
        }
        out
    }
}
