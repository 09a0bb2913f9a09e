//! Command results and their text and JSON renderings.

use clap::ValueEnum;
use levi_core::enumerate::Count;
use levi_core::flag::{GeneralizedFlag, TautCouple};
use levi_core::space::Side;
use levi_core::subspace::{QuotientDim, Subspace};
use serde_json::{json, Value};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Finite { value: u64, per_order: Option<Vec<(Vec<usize>, u64)>> },
    /// A countably infinite quotient dimension.
    Infinite,
    Uncountable { witness: Vec<usize> },
    Bool { value: bool, kappa: Option<Vec<usize>>, reason: Option<String> },
    Subspace(String),
    Couples(usize),
}

impl Outcome {
    pub fn count(c: Count, witness: Option<Vec<usize>>) -> Outcome {
        match c {
            Count::Finite(n) => Outcome::Finite { value: n, per_order: None },
            Count::Uncountable => Outcome::Uncountable { witness: witness.unwrap_or_default() },
        }
    }

    pub fn dim(d: QuotientDim) -> Outcome {
        match d {
            QuotientDim::Finite(n) => Outcome::Finite { value: n, per_order: None },
            QuotientDim::Infinite => Outcome::Infinite,
        }
    }

    pub fn truth(value: bool) -> Outcome {
        Outcome::Bool { value, kappa: None, reason: None }
    }
}

/// Members listed from `0` upwards; a selfdual couple has an empty `flag_vstar`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoupleView {
    pub order: Vec<usize>,
    pub flag_v: Vec<String>,
    pub flag_vstar: Vec<String>,
}

/// Canonical string of a chain member; the whole side prints as its name.
pub fn member_string(s: &Subspace) -> String {
    if *s == Subspace::full(s.space(), s.side()) {
        s.space().name(s.side()).to_string()
    } else {
        s.to_string()
    }
}

fn members(f: &GeneralizedFlag) -> Vec<String> {
    f.members().iter().map(member_string).collect()
}

impl CoupleView {
    pub fn of(c: &TautCouple, order: Vec<usize>) -> Self {
        CoupleView { order, flag_v: members(&c.flag_v), flag_vstar: c.flag_vstar.as_ref().map(members).unwrap_or_default() }
    }

    /// A lone flag goes in the column of its side.
    pub fn of_flag(f: &GeneralizedFlag) -> Self {
        let m = members(f);
        let (flag_v, flag_vstar) = if f.side() == Side::Left { (m, Vec::new()) } else { (Vec::new(), m) };
        CoupleView { order: Vec::new(), flag_v, flag_vstar }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Report {
    pub command: String,
    pub result: Outcome,
    pub couples: Vec<CoupleView>,
    pub diagnostics: Vec<String>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

fn result_json(o: &Outcome) -> Value {
    match o {
        Outcome::Finite { value, per_order } => {
            let mut v = json!({ "kind": "finite", "value": value });
            if let Some(p) = per_order {
                v["per_order"] = p.iter().map(|(o, n)| json!({ "order": o, "count": n })).collect();
            }
            v
        }
        Outcome::Infinite => json!({ "kind": "infinite" }),
        Outcome::Uncountable { witness } => json!({ "kind": "uncountable", "witness_J": witness }),
        Outcome::Bool { value, kappa, reason } => {
            let mut v = json!({ "kind": "bool", "value": value });
            if let Some(k) = kappa {
                v["kappa"] = json!(k);
            }
            if let Some(r) = reason {
                v["reason"] = json!(r);
            }
            v
        }
        Outcome::Subspace(s) => json!({ "kind": "subspace", "value": s }),
        Outcome::Couples(n) => json!({ "kind": "couples", "value": n }),
    }
}

pub fn to_json(r: &Report) -> Value {
    json!({
        "command": r.command,
        "result": result_json(&r.result),
        "couples": r.couples.iter().map(|c| json!({
            "order": c.order,
            "flagV": c.flag_v,
            "flagVstar": c.flag_vstar,
        })).collect::<Vec<_>>(),
        "diagnostics": r.diagnostics,
    })
}

fn join(xs: &[usize], sep: &str) -> String {
    xs.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn result_text(o: &Outcome) -> String {
    match o {
        Outcome::Finite { value, per_order: None } => format!("finite {value}"),
        Outcome::Finite { value, per_order: Some(p) } if p.len() > 6 => format!("finite {value} over {} orders", p.len()),
        Outcome::Finite { value, per_order: Some(p) } => {
            let parts: Vec<String> = p.iter().map(|(o, n)| format!("{}: {n}", join(o, "<"))).collect();
            format!("finite {value} ({})", parts.join(", "))
        }
        Outcome::Infinite => "infinite".into(),
        Outcome::Uncountable { witness } => format!("uncountable (J = {{{}}})", join(witness, ",")),
        Outcome::Bool { value, kappa, reason } => {
            let mut s = value.to_string();
            if let Some(k) = kappa {
                s.push_str(&format!(" (kappa = [{}])", join(k, ", ")));
            }
            if let Some(r) = reason {
                s.push_str(&format!(": {r}"));
            }
            s
        }
        Outcome::Subspace(s) => s.clone(),
        Outcome::Couples(n) => format!("{n} couple{}", if *n == 1 { "" } else { "s" }),
    }
}

/// Chain notation: `0 ⊂ ... ⊂ V` then `Vstar ⊃ ... ⊃ 0`.
fn couple_text(c: &CoupleView) -> Vec<String> {
    let mut out = Vec::new();
    if !c.flag_v.is_empty() {
        out.push(format!("    {}", c.flag_v.join(" ⊂ ")));
    }
    if !c.flag_vstar.is_empty() {
        let rev: Vec<&str> = c.flag_vstar.iter().rev().map(String::as_str).collect();
        out.push(format!("    {}", rev.join(" ⊃ ")));
    }
    out
}

pub fn to_text(r: &Report) -> String {
    let mut lines = vec![format!("command: {}", r.command), format!("result: {}", result_text(&r.result))];
    for (k, c) in r.couples.iter().enumerate() {
        let order = if c.order.is_empty() { String::new() } else { format!(" (order {})", join(&c.order, " < ")) };
        lines.push(format!("couple {}{order}:", k + 1));
        lines.extend(couple_text(c));
    }
    if !r.diagnostics.is_empty() {
        lines.push("diagnostics:".into());
        lines.extend(r.diagnostics.iter().map(|d| format!("  {d}")));
    }
    lines.join("\n") + "\n"
}

pub fn format_report(r: &Report, format: Format) -> String {
    match format {
        Format::Text => to_text(r),
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&to_json(r)).expect("json values always serialize");
            s.push('\n');
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn report(result: Outcome) -> Report {
        Report { command: "count --levi L".into(), result, couples: Vec::new(), diagnostics: Vec::new() }
    }

    #[test]
    fn json_kinds() {
        let j = to_json(&report(Outcome::Finite { value: 3, per_order: None }));
        assert_eq!(j["result"], json!({"kind": "finite", "value": 3}));
        let j = to_json(&report(Outcome::Uncountable { witness: vec![1] }));
        assert_eq!(j["result"], json!({"kind": "uncountable", "witness_J": [1]}));
        let j = to_json(&report(Outcome::Bool { value: true, kappa: Some(vec![2, 1]), reason: None }));
        assert_eq!(j["result"], json!({"kind": "bool", "value": true, "kappa": [2, 1]}));
        assert_eq!(j["couples"], json!([]));
    }

    #[test]
    fn text_chains() {
        let mut r = report(Outcome::Couples(1));
        r.couples.push(CoupleView { order: vec![2, 1], flag_v: vec!["0".into(), "A".into(), "V".into()], flag_vstar: vec!["0".into(), "B".into(), "Vstar".into()] });
        let t = to_text(&r);
        assert_eq!(t, "command: count --levi L\nresult: 1 couple\ncouple 1 (order 2 < 1):\n    0 ⊂ A ⊂ V\n    Vstar ⊃ B ⊃ 0\n");
    }
}
