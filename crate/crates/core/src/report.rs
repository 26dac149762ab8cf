//! JSON forms of proofs and check reports.
//!
//! Proofs are `{conclusion, rule, params, premises}` with formulas, terms
//! and sequents in script syntax. Reports carry `"schema": 1`.

use serde_json::{json, Map, Value};
use thiserror::Error;

use crate::kernel::{path_string, CheckReport, Params, ProofNode, Rule};
use crate::script::{parse_formula, parse_sequent, parse_term, ParseError};

pub const SCHEMA: u64 = 1;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ImportError {
    #[error("field `{0}` is missing or has the wrong type")]
    Field(String),
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
    #[error("in field `{field}`: {source}")]
    Syntax { field: String, source: ParseError },
}

pub fn params_json(p: &Params) -> Value {
    let mut m = Map::new();
    if let Some(f) = &p.formula {
        m.insert("formula".into(), json!(f.to_string()));
    }
    if let Some(v) = &p.var {
        m.insert("var".into(), json!(v));
    }
    if let Some(t) = &p.term {
        m.insert("term".into(), json!(t.to_string()));
    }
    if let Some(d) = &p.domain {
        m.insert("domain".into(), json!(d));
    }
    if let Some(d) = &p.duality {
        m.insert("duality".into(), json!(d));
    }
    if let Some(w) = p.which {
        m.insert("which".into(), json!(w));
    }
    Value::Object(m)
}

pub fn proof_json(node: &ProofNode) -> Value {
    json!({
        "conclusion": node.conclusion.to_string(),
        "rule": node.rule.name(),
        "params": params_json(&node.params),
        "premises": node.premises.iter().map(proof_json).collect::<Vec<_>>(),
    })
}

fn str_field<'a>(v: &'a Value, key: &str) -> Result<&'a str, ImportError> {
    v.get(key).and_then(Value::as_str).ok_or_else(|| ImportError::Field(key.into()))
}

fn syntax(field: &str) -> impl FnOnce(ParseError) -> ImportError + '_ {
    move |source| ImportError::Syntax {
        field: field.to_string(),
        source,
    }
}

fn params_from_json(v: &Value) -> Result<Params, ImportError> {
    let mut p = Params::default();
    let Some(m) = v.as_object() else {
        return Err(ImportError::Field("params".into()));
    };
    for (key, val) in m {
        let text = || val.as_str().ok_or_else(|| ImportError::Field(key.clone()));
        match key.as_str() {
            "formula" => p.formula = Some(parse_formula(text()?).map_err(syntax("formula"))?),
            "term" => p.term = Some(parse_term(text()?).map_err(syntax("term"))?),
            "var" => p.var = Some(text()?.to_string()),
            "domain" => p.domain = Some(text()?.to_string()),
            "duality" => p.duality = Some(text()?.to_string()),
            "which" => {
                let w = val.as_u64().filter(|w| *w == 1 || *w == 2);
                p.which = Some(w.ok_or_else(|| ImportError::Field("which".into()))? as u8);
            }
            other => return Err(ImportError::Field(other.to_string())),
        }
    }
    Ok(p)
}

pub fn proof_from_json(v: &Value) -> Result<ProofNode, ImportError> {
    let conclusion = parse_sequent(str_field(v, "conclusion")?).map_err(syntax("conclusion"))?;
    let name = str_field(v, "rule")?;
    let rule = Rule::parse(name).ok_or_else(|| ImportError::UnknownRule(name.to_string()))?;
    let params = match v.get("params") {
        Some(p) => params_from_json(p)?,
        None => Params::default(),
    };
    let premises = match v.get("premises") {
        Some(Value::Array(items)) => items.iter().map(proof_from_json).collect::<Result<Vec<_>, _>>()?,
        None => Vec::new(),
        Some(_) => return Err(ImportError::Field("premises".into())),
    };
    Ok(ProofNode::new(conclusion, rule, params, premises))
}

/// The check report of one named proof.
pub fn check_report_json(name: &str, conclusion: &str, report: &CheckReport) -> Value {
    let failures: Vec<Value> = report
        .failures
        .iter()
        .map(|e| {
            json!({
                "path": path_string(&e.path),
                "rule": e.rule,
                "kind": e.failure.kind(),
                "reason": e.failure.to_string(),
            })
        })
        .collect();
    let s = &report.stats;
    json!({
        "name": name,
        "conclusion": conclusion,
        "ok": report.ok,
        "failures": failures,
        "stats": {
            "nodes": s.nodes,
            "height": s.height,
            "rules": s.rules,
            "substitution_domains": s.substitution_domains,
            "d_axiom_domains": s.d_axiom_domains.iter().map(|(d, k)| json!([d, k])).collect::<Vec<_>>(),
        },
    })
}

/// Wrap per-item results with the schema version.
pub fn envelope(command: &str, ok: bool, items: Vec<Value>) -> Value {
    json!({
        "schema": SCHEMA,
        "command": command,
        "ok": ok,
        "items": items,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::{Formula, Sequent};
    use crate::term::Term;

    #[test]
    fn proof_round_trips_through_json() {
        let p = Formula::prop("p");
        let q = Formula::prop("q");
        let leaf = |f: &Formula| ProofNode::leaf(Sequent::of(vec![f.clone()], vec![f.clone()]), Rule::Id);
        let node = ProofNode::new(
            Sequent::of(vec![Formula::imp(p.clone(), q.clone()), p.clone()], vec![q.clone()]),
            Rule::ImpL,
            Params::default().with_term(Term::constant("T")).with_which(1),
            vec![leaf(&p), leaf(&q)],
        );
        let v = proof_json(&node);
        assert_eq!(v["rule"], "imp_l");
        assert_eq!(v["conclusion"], "p -> q, p |- q");
        assert_eq!(proof_from_json(&v).unwrap(), node);
    }
}
