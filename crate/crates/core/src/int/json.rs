//! INT proof files: nested JSON objects with the sequent, the rule name, its side data
//! and the premises.

use super::{IntProof, IntRule};
use crate::formula::{parse_sequent, parse_term};
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("bad proof file: {0}")]
pub struct ProofFileError(pub String);

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawNode {
    sequent: String,
    rule: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pos: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    i: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    t: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    y: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    premises: Vec<RawNode>,
}

fn to_raw(p: &IntProof) -> RawNode {
    let mut raw = RawNode {
        sequent: p.sequent.to_string(),
        rule: p.rule.name().to_string(),
        pos: None,
        i: None,
        n: None,
        t: None,
        y: None,
        premises: p.premises.iter().map(to_raw).collect(),
    };
    match &p.rule {
        IntRule::Exchange { pos } => raw.pos = Some(*pos),
        IntRule::LeftChoiceConj { i, n } | IntRule::RightChoiceDisj { i, n } => {
            raw.i = Some(*i);
            raw.n = Some(*n);
        }
        IntRule::RightChoiceAll { y } | IntRule::LeftChoiceExists { y } => raw.y = Some(y.clone()),
        IntRule::LeftChoiceAll { t } | IntRule::RightChoiceExists { t } => raw.t = Some(t.to_string()),
        _ => {}
    }
    raw
}

fn from_raw(raw: RawNode) -> Result<IntProof, String> {
    let sequent = parse_sequent(&raw.sequent).map_err(|e| format!("sequent {:?}: {e}", raw.sequent))?;
    let side = [("pos", raw.pos.is_some()), ("i", raw.i.is_some()), ("n", raw.n.is_some()), ("t", raw.t.is_some()), ("y", raw.y.is_some())];
    let wanted: &[&str] = match raw.rule.as_str() {
        "Exchange" => &["pos"],
        "LeftChoiceConj" | "RightChoiceDisj" => &["i", "n"],
        "RightChoiceAll" | "LeftChoiceExists" => &["y"],
        "LeftChoiceAll" | "RightChoiceExists" => &["t"],
        name if IntRule::NAMES.contains(&name) => &[],
        other => return Err(format!("unknown rule {other:?}")),
    };
    for (key, present) in side {
        if present != wanted.contains(&key) {
            let what = if present { "does not take" } else { "needs" };
            return Err(format!("{} {what} field {key:?}", raw.rule));
        }
    }
    let term = |t: &Option<String>| {
        let t = t.as_deref().unwrap_or_default();
        parse_term(t).map_err(|e| format!("term {t:?}: {e}"))
    };
    let var = |y: &Option<String>| -> Result<String, String> {
        match parse_term(y.as_deref().unwrap_or_default()) {
            Ok(crate::formula::Term::Var(v)) => Ok(v),
            _ => Err(format!("{:?} is not a variable", y.as_deref().unwrap_or_default())),
        }
    };
    let rule = match raw.rule.as_str() {
        "Identity" => IntRule::Identity,
        "Domination" => IntRule::Domination,
        "Exchange" => IntRule::Exchange { pos: raw.pos.unwrap_or_default() },
        "Weakening" => IntRule::Weakening,
        "Contraction" => IntRule::Contraction,
        "RightImpl" => IntRule::RightImpl,
        "LeftImpl" => IntRule::LeftImpl,
        "RightChoiceConj" => IntRule::RightChoiceConj,
        "LeftChoiceConj" => IntRule::LeftChoiceConj { i: raw.i.unwrap_or_default(), n: raw.n.unwrap_or_default() },
        "RightChoiceDisj" => IntRule::RightChoiceDisj { i: raw.i.unwrap_or_default(), n: raw.n.unwrap_or_default() },
        "LeftChoiceDisj" => IntRule::LeftChoiceDisj,
        "RightChoiceAll" => IntRule::RightChoiceAll { y: var(&raw.y)? },
        "LeftChoiceAll" => IntRule::LeftChoiceAll { t: term(&raw.t)? },
        "RightChoiceExists" => IntRule::RightChoiceExists { t: term(&raw.t)? },
        "LeftChoiceExists" => IntRule::LeftChoiceExists { y: var(&raw.y)? },
        _ => unreachable!("rule names validated above"),
    };
    let premises = raw.premises.into_iter().map(from_raw).collect::<Result<Vec<_>, _>>()?;
    Ok(IntProof { sequent, rule, premises })
}

/// Parse a proof file. Only syntax is checked here; use [`super::check_proof`] for validity.
pub fn proof_from_json(text: &str) -> Result<IntProof, ProofFileError> {
    let raw: RawNode = serde_json::from_str(text).map_err(|e| ProofFileError(e.to_string()))?;
    from_raw(raw).map_err(ProofFileError)
}

pub fn proof_to_json(p: &IntProof) -> String {
    serde_json::to_string_pretty(&to_raw(p)).expect("proof serializes")
}
