//! Structured run reports with a stable schema and deterministic field
//! ordering. Timing lives outside the body so that identical configurations
//! produce byte-identical bodies.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::algebra::{ConditionReport, Weight};
use crate::resolution::EulerVerdict;

pub const SCHEMA: &str = "superbgg-report/1";

#[derive(Serialize, Clone, Debug, Default)]
pub struct ConfigEcho {
    pub algebra: String,
    pub levi: String,
    pub module: String,
    pub star: String,
    pub variant: String,
    pub truncation: Option<usize>,
    pub k_max: Option<usize>,
    pub weight_box: Option<String>,
    pub verbosity: u8,
}

#[derive(Serialize, Clone, Debug)]
pub struct ConditionSection {
    pub variant: String,
    pub invariance: bool,
    pub dual_basis: bool,
    pub witness: Option<String>,
}

impl ConditionSection {
    pub fn from_report(r: &ConditionReport) -> ConditionSection {
        ConditionSection {
            variant: r.variant.render().to_string(),
            invariance: r.invariance_ok,
            dual_basis: r.dual_basis_ok,
            witness: r.witness.as_ref().map(|w| {
                format!(
                    "A=E{},{} X=E{},{} Y=E{},{}: lhs={} rhs={}",
                    w.a.0 + 1,
                    w.a.1 + 1,
                    w.x.0 + 1,
                    w.x.1 + 1,
                    w.y.0 + 1,
                    w.y.1 + 1,
                    crate::scalar::fmt_q(&w.lhs),
                    crate::scalar::fmt_q(&w.rhs)
                )
            }),
        }
    }
}

#[derive(Serialize, Clone, Debug)]
pub struct CohomologySection {
    pub k: usize,
    pub chain_dim: usize,
    pub harmonic_dim: usize,
    pub hw_list: BTreeMap<String, usize>,
}

pub fn render_hw_list(list: &BTreeMap<Weight, usize>) -> BTreeMap<String, usize> {
    list.iter().map(|(w, m)| (w.render(), *m)).collect()
}

#[derive(Serialize, Clone, Debug, Default)]
pub struct ChainChecks {
    pub side: String,
    pub codiff_squares_to_zero: bool,
    pub diff_squares_to_zero: bool,
    pub gram_adjointness: bool,
    pub invariant_pairing: bool,
    pub morphisms: bool,
    pub action_defect: Option<bool>,
    pub hodge: bool,
    pub disjointness: bool,
    pub nilradical_trivial_on_harmonics: bool,
    pub casimir_criterion_agrees: bool,
    pub quabla_casimir_identity: Option<bool>,
}

impl ChainChecks {
    pub fn all_pass(&self) -> bool {
        self.codiff_squares_to_zero
            && self.diff_squares_to_zero
            && self.gram_adjointness
            && self.invariant_pairing
            && self.morphisms
            && self.action_defect.unwrap_or(true)
            && self.hodge
            && self.disjointness
            && self.nilradical_trivial_on_harmonics
            && self.casimir_criterion_agrees
            && self.quabla_casimir_identity.unwrap_or(true)
    }
}

#[derive(Serialize, Clone, Debug)]
pub struct JetCheck {
    pub name: String,
    pub window: usize,
    pub pass: bool,
}

#[derive(Serialize, Clone, Debug)]
pub struct EulerSection {
    pub weight_box: String,
    pub k_max: usize,
    pub all_pass: bool,
    pub failures: Vec<String>,
}

pub fn euler_section(bx: &str, k_max: usize, verdicts: &[EulerVerdict]) -> EulerSection {
    let failures: Vec<String> = verdicts
        .iter()
        .filter(|v| !v.pass)
        .map(|v| {
            format!(
                "mu={} sum={} expected={}",
                v.mu.render(),
                v.alternating_sum,
                v.expected
            )
        })
        .collect();
    EulerSection {
        weight_box: bx.to_string(),
        k_max,
        all_pass: failures.is_empty(),
        failures,
    }
}

#[derive(Serialize, Clone, Debug)]
pub struct ResolutionSection {
    pub admissible: bool,
    pub levels: Vec<CohomologySection>,
    pub euler: EulerSection,
    pub criterion_census_disagreements: Vec<String>,
}

#[derive(Serialize, Clone, Debug)]
pub struct OperatorDump {
    pub name: String,
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<String>,
}

pub fn dump_matrix(name: &str, m: &crate::linalg::Mat) -> OperatorDump {
    let mut entries = Vec::new();
    for i in 0..m.rows {
        for j in 0..m.cols {
            let v = m.at(i, j);
            if !num_traits::Zero::is_zero(v) {
                entries.push(format!("{i},{j}={}", crate::scalar::fmt_q(v)));
            }
        }
    }
    OperatorDump {
        name: name.to_string(),
        rows: m.rows,
        cols: m.cols,
        entries,
    }
}

#[derive(Serialize, Clone, Debug, Default)]
pub struct ReportBody {
    pub schema: String,
    pub config: ConfigEcho,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition: Option<ConditionSection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub chain_checks: Option<ChainChecks>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub cohomology: Vec<CohomologySection>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub jets: Vec<JetCheck>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub resolution: Option<ResolutionSection>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub warnings: Vec<String>,
    /// Sparse operator entries, included only at the highest verbosity.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub matrices: Vec<OperatorDump>,
}

#[derive(Serialize, Clone, Debug)]
pub struct Report {
    pub body: ReportBody,
    pub timing_ms: u128,
}

impl Report {
    /// The checksum-covered body, pretty-printed; byte-identical across
    /// runs with the same configuration.
    pub fn body_string(&self) -> String {
        serde_json::to_string_pretty(&self.body).expect("report serializes")
    }

    pub fn full_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn body_is_deterministic() {
        let body = ReportBody {
            schema: SCHEMA.into(),
            config: ConfigEcho {
                algebra: "gl:1|1".into(),
                levi: "levi=".into(),
                module: "natural".into(),
                star: "natural".into(),
                variant: "neccond".into(),
                ..Default::default()
            },
            ..Default::default()
        };
        let a = Report { body: body.clone(), timing_ms: 1 };
        let b = Report { body, timing_ms: 999 };
        assert_eq!(a.body_string(), b.body_string());
        assert_ne!(a.full_string(), b.full_string());
    }
}
