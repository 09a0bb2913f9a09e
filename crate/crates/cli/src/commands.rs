//! Commands over a loaded model, one per library operation.

use clap::Subcommand;
use levi_core::enumerate::{count_self_normalizing, enumerate_all, enumerate_couples, trace_condition_count, Count};
use levi_core::flag::{is_self_taut, is_taut_couple, minimal_taut_couple, GeneralizedFlag, TautCouple};
use levi_core::levi::{forced_selfdual_flags, is_levi_component, is_levi_so, is_levi_sp, LeviCertificate, LieKind};
use levi_core::oracle::{oracle_check, OracleOp};
use levi_core::random::{random_vector, rng};
use levi_core::space::Side;
use levi_core::subspace::Subspace;

use crate::error::{CliError, CliResult};
use crate::model::Model;
use crate::report::{member_string, CoupleView, Outcome, Report};

#[derive(Clone, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Annihilator of a subspace (a name or an expression such as `X1 + span{V[1]}`).
    Perp { name: String },
    /// Double annihilator of a subspace.
    Closure { name: String },
    /// `dim A` or `dim A mod B` (needs B ⊆ A).
    Dim {
        name: String,
        #[arg(value_parser = ["mod"], requires = "sub")]
        keyword: Option<String>,
        sub: Option<String>,
    },
    /// Semiclosed generalized flag generated by a chain of named subspaces.
    FlagFromChain {
        #[arg(required = true)]
        names: Vec<String>,
    },
    /// Tautness of a couple, of two flags, or self-tautness of one flag.
    TautCheck { first: String, second: Option<String> },
    /// Whether the Levi datum is a Levi component of the couple's stabilizer.
    LeviCheck {
        #[arg(long)]
        couple: String,
        #[arg(long)]
        levi: String,
    },
    /// Minimal taut couple for a Levi datum and an order of its summands.
    MinimalCouple {
        #[arg(long)]
        levi: String,
        #[arg(long)]
        order: String,
    },
    /// All taut couples with the datum as Levi component, for one order or all.
    Enumerate {
        #[arg(long)]
        levi: String,
        #[arg(long)]
        order: Option<String>,
    },
    /// Number of self-normalizing parabolics with the datum as Levi component.
    Count {
        #[arg(long)]
        levi: String,
    },
    /// Number of parabolics defined by trace conditions on the couple's stabilizer.
    TraceCount {
        #[arg(long)]
        couple: String,
    },
    /// Socle of the Levi datum.
    Socle {
        #[arg(long)]
        levi: String,
    },
    /// Dense truncation check of the subspace operations on named subspaces.
    Oracle {
        /// `all` or one subspace name.
        #[arg(long, default_value = "all")]
        verify: String,
        #[arg(long, value_delimiter = ',', default_value = "10,20,40")]
        cutoffs: Vec<u64>,
    },
    /// Self-taut flags with the so/sp datum as Levi component.
    SelfdualFlags {
        #[arg(long)]
        levi: String,
    },
}

impl Command {
    /// Canonical command line, echoed in reports.
    pub fn echo(&self) -> String {
        match self {
            Command::Perp { name } => format!("perp {name}"),
            Command::Closure { name } => format!("closure {name}"),
            Command::Dim { name, sub: Some(b), .. } => format!("dim {name} mod {b}"),
            Command::Dim { name, .. } => format!("dim {name}"),
            Command::FlagFromChain { names } => format!("flag-from-chain {}", names.join(" ")),
            Command::TautCheck { first, second: Some(g) } => format!("taut-check {first} {g}"),
            Command::TautCheck { first, .. } => format!("taut-check {first}"),
            Command::LeviCheck { couple, levi } => format!("levi-check --couple {couple} --levi {levi}"),
            Command::MinimalCouple { levi, order } => format!("minimal-couple --levi {levi} --order {order}"),
            Command::Enumerate { levi, order: Some(o) } => format!("enumerate --levi {levi} --order {o}"),
            Command::Enumerate { levi, .. } => format!("enumerate --levi {levi}"),
            Command::Count { levi } => format!("count --levi {levi}"),
            Command::TraceCount { couple } => format!("trace-count --couple {couple}"),
            Command::Socle { levi } => format!("socle --levi {levi}"),
            Command::Oracle { verify, cutoffs } => {
                let c: Vec<String> = cutoffs.iter().map(|c| c.to_string()).collect();
                format!("oracle --verify {verify} --cutoffs {}", c.join(","))
            }
            Command::SelfdualFlags { levi } => format!("selfdual-flags --levi {levi}"),
        }
    }
}

/// A declared subspace, or an expression over the declared names (tried on each side).
fn operand(model: &Model, text: &str) -> CliResult<Subspace> {
    if let Ok(s) = model.subspace(text) {
        return Ok(s.clone());
    }
    match model.eval(Side::Left, text) {
        Ok(s) => Ok(s),
        Err(first) if model.space.is_selfdual() => Err(first),
        Err(first) => model.eval(Side::Right, text).map_err(|_| first),
    }
}

/// An order given by name, or literally as `2,1,3`.
fn resolve_order(model: &Model, text: &str) -> CliResult<Vec<usize>> {
    if let Ok(o) = model.order(text) {
        return Ok(o.clone());
    }
    let parsed: Result<Vec<usize>, _> = text.split(',').map(|t| t.trim().parse::<usize>()).collect();
    parsed.map_err(|_| CliError::Usage(format!("`{text}` is neither an order name nor a list like 1,2")))
}

/// A couple by name; a flag name stands for its selfdual couple.
fn resolve_couple(model: &Model, name: &str) -> CliResult<TautCouple> {
    if let Ok(c) = model.couple(name) {
        return Ok(c.clone());
    }
    match model.flag(name) {
        Ok(f) => Ok(TautCouple::selfdual(f.clone())?),
        Err(_) => Err(CliError::Usage(format!("unknown couple `{name}`"))),
    }
}

fn certificate(c: LeviCertificate) -> Outcome {
    Outcome::Bool { value: c.holds, kappa: c.holds.then_some(c.kappa), reason: c.reason }
}

fn report(cmd: &Command, result: Outcome) -> Report {
    Report { command: cmd.echo(), result, couples: Vec::new(), diagnostics: Vec::new() }
}

pub fn run_command(model: &Model, cmd: &Command, seed: u64) -> CliResult<Report> {
    let mut r = report(cmd, Outcome::Couples(0));
    r.result = match cmd {
        Command::Perp { name } => Outcome::Subspace(member_string(&operand(model, name)?.perp())),
        Command::Closure { name } => Outcome::Subspace(member_string(&operand(model, name)?.closure())),
        Command::Dim { name, sub, .. } => {
            let a = operand(model, name)?;
            match sub {
                Some(b) => Outcome::dim(a.quotient_dim(&operand(model, b)?)?),
                None => Outcome::dim(a.dim()),
            }
        }
        Command::FlagFromChain { names } => {
            let chain = names.iter().map(|n| model.subspace(n).cloned()).collect::<CliResult<Vec<Subspace>>>()?;
            let f = GeneralizedFlag::semiclosed_from_chain(&model.space, chain[0].side(), &chain)?;
            r.couples.push(CoupleView::of_flag(&f));
            Outcome::Couples(1)
        }
        Command::TautCheck { first, second } => match (model.couple(first), second) {
            (Ok(c), None) => Outcome::truth(match &c.flag_vstar {
                Some(g) => is_taut_couple(&c.flag_v, g)?,
                None => is_self_taut(&c.flag_v)?,
            }),
            (_, Some(g)) => Outcome::truth(is_taut_couple(model.flag(first)?, model.flag(g)?)?),
            (Err(_), None) => Outcome::truth(is_self_taut(model.flag(first)?)?),
        },
        Command::LeviCheck { couple, levi } => {
            let c = resolve_couple(model, couple)?;
            let l = model.levi(levi)?;
            certificate(match l.kind() {
                LieKind::Gl | LieKind::Sl => is_levi_component(&c, l)?,
                LieKind::So => is_levi_so(&c.flag_v, l)?,
                LieKind::Sp => is_levi_sp(&c.flag_v, l)?,
            })
        }
        Command::MinimalCouple { levi, order } => {
            let o = resolve_order(model, order)?;
            let c = minimal_taut_couple(model.levi(levi)?, &o)?;
            r.couples.push(CoupleView::of(&c, o));
            Outcome::Couples(1)
        }
        Command::Enumerate { levi, order } => {
            let l = model.levi(levi)?;
            let e = match order {
                Some(o) => enumerate_couples(l, &resolve_order(model, o)?)?,
                None => enumerate_all(l)?,
            };
            r.diagnostics = e.diagnostics;
            match e.total {
                Count::Uncountable => Outcome::Uncountable { witness: e.witness.unwrap_or_default() },
                Count::Finite(_) => {
                    r.couples = e.couples.iter().map(|c| CoupleView::of(&c.couple, c.order.clone())).collect();
                    Outcome::Couples(r.couples.len())
                }
            }
        }
        Command::Count { levi } => {
            let c = count_self_normalizing(model.levi(levi)?)?;
            match c.count {
                Count::Finite(n) => Outcome::Finite { value: n, per_order: Some(c.per_order) },
                Count::Uncountable => Outcome::count(c.count, c.witness),
            }
        }
        Command::TraceCount { couple } => Outcome::count(trace_condition_count(&resolve_couple(model, couple)?)?, None),
        Command::Socle { levi } => Outcome::Subspace(member_string(&model.levi(levi)?.socle()?)),
        Command::Oracle { verify, cutoffs } => {
            let (total, failures) = oracle(model, verify, cutoffs, seed)?;
            r.diagnostics = failures;
            Outcome::Bool { value: r.diagnostics.is_empty(), kappa: None, reason: Some(format!("{total} checks")) }
        }
        Command::SelfdualFlags { levi } => {
            let flags = forced_selfdual_flags(model.levi(levi)?)?;
            r.couples = flags.iter().map(CoupleView::of_flag).collect();
            Outcome::Couples(flags.len())
        }
    };
    Ok(r)
}

/// Oracle operations on the chosen subspaces: perp, closure and membership samples for
/// each, sum, intersection and `(A + B) / A` for each same-side pair.
pub fn oracle_ops(model: &Model, verify: &str, seed: u64) -> CliResult<Vec<(String, OracleOp)>> {
    let chosen: Vec<(&String, &Subspace)> = if verify == "all" {
        model.subspaces.iter().map(|(n, s)| (n, s)).collect()
    } else {
        vec![(model.subspaces.iter().find(|(n, _)| n == verify).map(|(n, _)| n).ok_or_else(|| {
            CliError::Usage(format!("unknown subspace `{verify}`"))
        })?, model.subspace(verify)?)]
    };
    let mut r = rng(seed);
    let mut ops = Vec::new();
    for (k, &(a, sa)) in chosen.iter().enumerate() {
        let mut samples: Vec<_> = (0..6).map(|_| random_vector(&mut r, &model.space, sa.side(), 10)).collect();
        samples.extend(sa.sample_elements(8).into_iter().take(6));
        ops.push((a.clone(), OracleOp::Membership(sa.clone(), samples)));
        ops.push((a.clone(), OracleOp::Perp(sa.clone())));
        ops.push((a.clone(), OracleOp::Closure(sa.clone())));
        for &(b, sb) in chosen[k + 1..].iter().filter(|(_, sb)| sb.side() == sa.side()) {
            let tag = format!("{a}, {b}");
            ops.push((tag.clone(), OracleOp::Sum(sa.clone(), sb.clone())));
            ops.push((tag.clone(), OracleOp::Intersect(sa.clone(), sb.clone())));
            ops.push((tag, OracleOp::QuotientDim(sa.sum(sb)?, sa.clone())));
        }
    }
    Ok(ops)
}

/// Number of checks run and a line per failing check.
fn oracle(model: &Model, verify: &str, cutoffs: &[u64], seed: u64) -> CliResult<(usize, Vec<String>)> {
    let ops = oracle_ops(model, verify, seed)?;
    let mut failures = Vec::new();
    for (tag, op) in &ops {
        let rep = oracle_check(op, cutoffs)?;
        if !rep.passed() {
            failures.push(format!("{tag}: {rep}"));
        }
    }
    Ok((ops.len(), failures))
}
