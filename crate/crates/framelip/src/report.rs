//! Machine-readable reports, schema version 1.
//!
//! Every numeric field is justified by a named result tag in `refs`, the
//! exact configuration is echoed, and floats are printed with 17 significant
//! digits so identical runs produce byte-identical files.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use crate::config::AnalysisConfig;
use crate::gating::{GateReport, GateVerdict};
use crate::jsonfmt;
use crate::lipschitz::{LipschitzReport, SweepTable};
use crate::patterns::{EnumMethod, ReluPattern, SatPattern};
use crate::phase_retrieval::PrAnalysis;
use crate::relu::ReluInjectivityReport;
use crate::saturation::{CriticalLambdaReport, SatInjectivityReport};

/// Standing note: strict inequalities are realized through a margin, so
/// boundary patterns are merged into their closed neighbors.
pub const MARGIN_NOTE: &str =
    "strict inequalities use the configured margin; measure-zero boundary patterns are merged into closed neighbors";

pub fn sha256_hex(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Debug, Clone)]
pub struct Report {
    pub command: String,
    pub input_digest: Option<String>,
    pub config: AnalysisConfig,
    pub result: Value,
    pub refs: BTreeMap<String, String>,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut obj = Map::new();
        obj.insert("schema".into(), json!(1));
        obj.insert("command".into(), json!(self.command));
        obj.insert(
            "input_digest".into(),
            self.input_digest.as_ref().map(|d| json!(d)).unwrap_or(Value::Null),
        );
        obj.insert(
            "config".into(),
            serde_json::to_value(&self.config).expect("config serializes"),
        );
        obj.insert("result".into(), self.result.clone());
        let refs: Map<String, Value> =
            self.refs.iter().map(|(k, v)| (k.clone(), json!(v))).collect();
        obj.insert("refs".into(), Value::Object(refs));
        obj.insert("warnings".into(), json!(self.warnings));
        jsonfmt::to_json_pretty(&Value::Object(obj))
    }
}

fn vec_value(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|&x| json!(x)).collect())
}

fn method_value(m: EnumMethod) -> Value {
    match m {
        EnumMethod::Exhaustive => json!("exhaustive"),
        EnumMethod::Sampled => json!("sampled"),
    }
}

fn relu_pattern_value(p: &ReluPattern) -> Value {
    json!({ "active": p.active.bitstring(), "witness": vec_value(&p.witness) })
}

fn sat_pattern_value(p: &SatPattern) -> Value {
    json!({ "state": p.state_string(), "witness": vec_value(&p.witness) })
}

pub fn relu_result(
    rep: &ReluInjectivityReport,
    bounds: Option<(f64, f64)>,
) -> (Value, BTreeMap<String, String>, Vec<String>) {
    let mut refs = BTreeMap::new();
    refs.insert("result.a_alpha".into(), "relu-injectivity-characterization".into());
    let bounds_value = match bounds {
        Some((lo, hi)) => {
            refs.insert("result.bounds".into(), "relu-lipschitz-sandwich".into());
            json!({ "lower": lo, "upper": hi })
        }
        None => Value::Null,
    };
    let result = json!({
        "injective": rep.injective,
        "a_alpha": rep.a_alpha,
        "bounds": bounds_value,
        "worst_pattern": relu_pattern_value(&rep.worst_pattern),
        "failing_pattern": rep.failing_pattern.as_ref().map(relu_pattern_value).unwrap_or(Value::Null),
        "pattern_count": rep.pattern_count,
        "method": method_value(rep.method),
    });
    let mut warnings = vec![MARGIN_NOTE.to_string()];
    if rep.method == EnumMethod::Sampled {
        warnings.push("lower-confidence: sampling fallback above the enumeration cap".into());
    }
    (result, refs, warnings)
}

pub fn sat_result(
    rep: &SatInjectivityReport,
    bounds: Option<(f64, f64)>,
    nplus1_bounds: Option<(f64, f64)>,
) -> (Value, BTreeMap<String, String>, Vec<String>) {
    let mut refs = BTreeMap::new();
    refs.insert("result.a_lambda".into(), "sat-injectivity-characterization".into());
    let bounds_value = match bounds {
        Some((lo, hi)) => {
            refs.insert("result.bounds".into(), "sat-lipschitz-sandwich".into());
            json!({ "lower": lo, "upper": hi })
        }
        None => Value::Null,
    };
    let nplus1_value = match nplus1_bounds {
        Some((lo, hi)) => {
            refs.insert("result.nplus1_bounds".into(), "sat-nplus1-sandwich".into());
            json!({ "lower": lo, "upper": hi })
        }
        None => Value::Null,
    };
    let result = json!({
        "injective": rep.injective,
        "a_lambda": rep.a_lambda,
        "lambda": rep.lambda,
        "bounds": bounds_value,
        "nplus1_bounds": nplus1_value,
        "worst_pattern": sat_pattern_value(&rep.worst_pattern),
        "failing_pattern": rep.failing_pattern.as_ref().map(sat_pattern_value).unwrap_or(Value::Null),
        "pattern_count": rep.pattern_count,
        "method": method_value(rep.method),
    });
    let mut warnings = vec![MARGIN_NOTE.to_string()];
    if rep.method == EnumMethod::Sampled {
        warnings.push("lower-confidence: sampling fallback above the enumeration cap".into());
    }
    (result, refs, warnings)
}

pub fn pr_result(analysis: &PrAnalysis) -> (Value, BTreeMap<String, String>, Vec<String>) {
    let mut refs = BTreeMap::new();
    refs.insert("result.sigma_sq".into(), "strong-complement-constant".into());
    refs.insert("result.a_abs".into(), "sign-split-constant".into());
    let bounds_value = match &analysis.bounds {
        Some(b) => {
            refs.insert("result.bounds.bandeira".into(), "scp-sandwich".into());
            refs.insert("result.bounds.a_form".into(), "sign-split-sandwich".into());
            refs.insert("result.bounds.improved".into(), "improved-pr-sandwich".into());
            json!({
                "bandeira": { "lower": b.bandeira.0, "upper": b.bandeira.1 },
                "a_form": { "lower": b.a_form.0, "upper": b.a_form.1 },
                "improved": { "lower": b.improved.0, "upper": b.improved.1 },
            })
        }
        None => Value::Null,
    };
    let worst_product: String = analysis
        .a_abs
        .worst_product_pattern
        .iter()
        .map(|&s| if s > 0 { '+' } else { '-' })
        .collect();
    let result = json!({
        "holds": analysis.complement.holds,
        "sigma_sq": analysis.complement.sigma_sq,
        "worst_subset": analysis.complement.worst_subset.bitstring(),
        "failing_subset": analysis
            .complement
            .failing_subset
            .map(|s| json!(s.bitstring()))
            .unwrap_or(Value::Null),
        "a_abs": analysis.a_abs.a_abs,
        "worst_product_pattern": worst_product,
        "chamber_count": analysis.a_abs.chamber_count,
        "bounds": bounds_value,
    });
    let mut warnings = vec![MARGIN_NOTE.to_string()];
    if analysis.a_abs.method == EnumMethod::Sampled {
        warnings.push("lower-confidence: sampling fallback above the enumeration cap".into());
    }
    (result, refs, warnings)
}

pub fn gate_result(rep: &GateReport) -> (Value, BTreeMap<String, String>, Vec<String>) {
    let mut refs = BTreeMap::new();
    refs.insert("result.verdict".into(), "gate-injectivity-characterization".into());
    let verdict = match rep.verdict {
        GateVerdict::Injective => "injective",
        GateVerdict::NotInjective => "not-injective",
        GateVerdict::Inconclusive => "inconclusive",
    };
    let result = json!({
        "verdict": verdict,
        "failing_pattern": rep
            .failing_pattern
            .as_ref()
            .map(|p| json!(p.state_string()))
            .unwrap_or(Value::Null),
        "witness": rep.witness.as_ref().map(|w| vec_value(w)).unwrap_or(Value::Null),
        "inconclusive_count": rep.inconclusive_count,
        "pattern_count": rep.pattern_count,
        "method": if rep.sampled { json!("sampled") } else { json!("exhaustive") },
    });
    let mut warnings = vec![MARGIN_NOTE.to_string()];
    if rep.inconclusive_count > 0 {
        warnings.push(format!(
            "{} non-spanning cells could not be certified against the ball complement",
            rep.inconclusive_count
        ));
    }
    if rep.sampled {
        warnings.push("lower-confidence: sampling fallback above the enumeration cap".into());
    }
    (result, refs, warnings)
}

pub fn critical_lambda_result(
    rep: &CriticalLambdaReport,
) -> (Value, BTreeMap<String, String>, Vec<String>) {
    let mut refs = BTreeMap::new();
    refs.insert("result.lambda_c".into(), "critical-level-stability".into());
    let history: Vec<Value> =
        rep.bracket_history.iter().map(|(lo, hi)| json!([lo, hi])).collect();
    let result = json!({
        "lambda_c": rep.lambda_c,
        "bracket": [rep.bracket.0, rep.bracket.1],
        "bracket_history": history,
        "iterations": rep.iterations,
        "injective_above": rep.injective_above,
        "non_injective_below": rep.non_injective_below,
    });
    (result, refs, vec![MARGIN_NOTE.to_string()])
}

pub fn kappa_result(rep: &LipschitzReport) -> (Value, BTreeMap<String, String>, Vec<String>) {
    let mut refs = BTreeMap::new();
    refs.insert("result.kappa_hat".into(), "empirical-estimate".into());
    if rep.theoretical_lower.is_some() {
        refs.insert("result.theoretical_lower".into(), "lower-lipschitz-sandwich".into());
        refs.insert("result.theoretical_upper".into(), "lower-lipschitz-sandwich".into());
    }
    let result = json!({
        "kappa_hat": rep.kappa_hat,
        "witness_pair": [vec_value(&rep.witness_pair.0), vec_value(&rep.witness_pair.1)],
        "theoretical_lower": rep.theoretical_lower.map(|v| json!(v)).unwrap_or(Value::Null),
        "theoretical_upper": rep.theoretical_upper.map(|v| json!(v)).unwrap_or(Value::Null),
        "injective": rep.injective.map(|v| json!(v)).unwrap_or(Value::Null),
        "samples_used": rep.samples_used,
        "refinement_steps": rep.refinement_steps,
        "domain": rep.domain,
    });
    let mut warnings = vec![MARGIN_NOTE.to_string()];
    warnings.extend(rep.warnings.iter().cloned());
    (result, refs, warnings)
}

pub fn sweep_result(table: &SweepTable, csv_path: &str) -> (Value, BTreeMap<String, String>, Vec<String>) {
    let mut refs = BTreeMap::new();
    refs.insert("result.rows".into(), "empirical-estimate".into());
    let result = json!({
        "problem": table.problem,
        "rows": table.rows.len(),
        "skipped_non_injective": table.skipped_non_injective,
        "csv_path": csv_path,
    });
    let warnings = vec![
        MARGIN_NOTE.to_string(),
        "exploratory sweep; no conclusions are asserted".to_string(),
    ];
    (result, refs, warnings)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn digest_is_stable_and_hex() {
        let d = sha256_hex(b"framelip");
        assert_eq!(d.len(), 64);
        assert_eq!(d, sha256_hex(b"framelip"));
        assert!(d.chars().all(|c| c.is_ascii_hexdigit()));
    }

    #[test]
    fn report_renders_schema_and_sorted_keys() {
        let rep = Report {
            command: "test".into(),
            input_digest: None,
            config: AnalysisConfig::default(),
            result: json!({"zeta": 0.5, "alpha": 1}),
            refs: BTreeMap::from([("result.zeta".to_string(), "demo".to_string())]),
            warnings: vec!["note".into()],
        };
        let s = rep.to_json();
        assert!(s.contains("\"schema\": 1"));
        assert!(s.contains("\"input_digest\": null"));
        assert!(s.find("\"alpha\"").unwrap() < s.find("\"zeta\"").unwrap());
        // identical reports render identically
        assert_eq!(s, rep.to_json());
    }
}
