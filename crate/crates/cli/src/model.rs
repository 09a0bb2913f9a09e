//! Elaboration of parsed statements into library objects.
//!
//! Space statements (`space`, `special`, `pair`) are applied first, in file order; all other
//! statements follow, in file order, so a name must be declared before it is used.

use std::collections::BTreeSet;
use std::path::Path;
use std::sync::Arc;

use levi_core::flag::{GeneralizedFlag, TautCouple};
use levi_core::kernel::{q, Scalar};
use levi_core::levi::{LeviDatum, LieKind};
use levi_core::pattern::{IndexPattern, Universe};
use levi_core::space::{Basis, Side, SpaceSpec, Vector};
use levi_core::subspace::{Space, Subspace, TailFamily};

use crate::dsl::{self, Atom, Binder, CoupleBody, Expr, Family, Index, PatBase, PatMod, PatSpec, Stmt, StmtKind, Summand, Term};
use crate::error::{CliError, CliResult};

#[derive(Clone, Debug)]
pub struct Model {
    pub space: Space,
    pub subspaces: Vec<(String, Subspace)>,
    pub flags: Vec<(String, GeneralizedFlag)>,
    pub couples: Vec<(String, TautCouple)>,
    pub levis: Vec<(String, LeviDatum)>,
    pub orders: Vec<(String, Vec<usize>)>,
    /// Validation findings that do not stop loading (failed Levi validation, for instance).
    pub diagnostics: Vec<String>,
}

fn lookup<'a, T>(items: &'a [(String, T)], name: &str, what: &str) -> CliResult<&'a T> {
    items
        .iter()
        .find(|(n, _)| n == name)
        .map(|(_, t)| t)
        .ok_or_else(|| CliError::Usage(format!("unknown {what} `{name}`")))
}

impl Model {
    pub fn subspace(&self, name: &str) -> CliResult<&Subspace> {
        lookup(&self.subspaces, name, "subspace")
    }

    pub fn flag(&self, name: &str) -> CliResult<&GeneralizedFlag> {
        lookup(&self.flags, name, "flag")
    }

    pub fn couple(&self, name: &str) -> CliResult<&TautCouple> {
        lookup(&self.couples, name, "couple")
    }

    pub fn levi(&self, name: &str) -> CliResult<&LeviDatum> {
        lookup(&self.levis, name, "levi datum")
    }

    pub fn order(&self, name: &str) -> CliResult<&Vec<usize>> {
        lookup(&self.orders, name, "order")
    }

    /// Parses a subspace expression on `side` against the names of this model.
    pub fn eval(&self, side: Side, expr_text: &str) -> CliResult<Subspace> {
        let src = format!("subspace _ in {} = {expr_text}", self.space.name(side));
        let stmts = dsl::parse(&src)?;
        match stmts.as_slice() {
            [st @ Stmt { kind: StmtKind::Subspace { expr, .. }, .. }] => Elab { model: self, stmt: st }.expr(expr, side),
            _ => Err(CliError::Usage(format!("`{expr_text}` is not a single subspace expression"))),
        }
    }
}

enum Decl {
    Subspace(String, Subspace),
    Levi(String, LeviDatum, Vec<String>),
    Flag(String, GeneralizedFlag),
    Couple(String, TautCouple),
    Order(String, Vec<usize>),
}

impl Model {
    fn add(&mut self, d: Decl) {
        match d {
            Decl::Subspace(n, s) => self.subspaces.push((n, s)),
            Decl::Levi(n, l, diags) => {
                self.diagnostics.extend(diags);
                self.levis.push((n, l));
            }
            Decl::Flag(n, f) => self.flags.push((n, f)),
            Decl::Couple(n, c) => self.couples.push((n, c)),
            Decl::Order(n, o) => self.orders.push((n, o)),
        }
    }
}

pub fn parse_model(text: &str) -> CliResult<Model> {
    let stmts = dsl::parse(text)?;
    let space = build_space(&stmts)?;
    let mut model = Model {
        space,
        subspaces: Vec::new(),
        flags: Vec::new(),
        couples: Vec::new(),
        levis: Vec::new(),
        orders: Vec::new(),
        diagnostics: Vec::new(),
    };
    let mut names: BTreeSet<String> = BTreeSet::new();
    for st in &stmts {
        let name = match &st.kind {
            StmtKind::Subspace { name, .. }
            | StmtKind::Levi { name, .. }
            | StmtKind::Flag { name, .. }
            | StmtKind::Couple { name, .. }
            | StmtKind::Order { name, .. } => name,
            _ => continue,
        };
        if !names.insert(name.clone()) {
            return Err(sem(st, format!("`{name}` is already defined")));
        }
        let decl = Elab { model: &model, stmt: st }.declare()?;
        model.add(decl);
    }
    Ok(model)
}

pub fn load_model(path: &Path) -> CliResult<Model> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.display().to_string(), source })?;
    parse_model(&text)
}

fn sem(st: &Stmt, msg: impl Into<String>) -> CliError {
    CliError::Semantic { stmt: st.text.clone(), msg: msg.into() }
}

fn resolve_side(spec: &SpaceSpec, st: &Stmt, name: &str) -> CliResult<Side> {
    if name == spec.name(Side::Left) {
        Ok(Side::Left)
    } else if !spec.is_selfdual() && name == spec.name(Side::Right) {
        Ok(Side::Right)
    } else {
        Err(sem(st, format!("`{name}` is not a side of the space")))
    }
}

fn pattern(u: &Universe, p: &PatSpec) -> levi_core::Result<IndexPattern> {
    let mut out = match &p.base {
        PatBase::All => IndexPattern::all(u),
        PatBase::Residues { modulus, pos, neg: None } => IndexPattern::residues(u, *modulus, pos)?,
        PatBase::Residues { modulus, pos, neg: Some(neg) } => {
            let up = IndexPattern::residues(u, *modulus, pos)?.intersect(&IndexPattern::at_least(u, 1))?;
            let down = IndexPattern::residues(u, *modulus, neg)?.intersect(&IndexPattern::at_most(u, -1))?;
            up.union(&down)?
        }
        PatBase::Finite(set) => IndexPattern::finite_set(u, set.iter().copied()),
    };
    for m in &p.mods {
        out = match m {
            PatMod::From(t) => out.intersect(&IndexPattern::at_least(u, *t))?,
            PatMod::To(t) => out.intersect(&IndexPattern::at_most(u, *t))?,
            PatMod::Beyond(t) => out.intersect(&IndexPattern::abs_at_least(u, t + 1))?,
            PatMod::With(set) => out.union(&IndexPattern::finite_set(u, set.iter().copied()))?,
            PatMod::Excluding(set) => out.minus(&IndexPattern::finite_set(u, set.iter().copied()))?,
        };
    }
    Ok(out)
}

fn build_space(stmts: &[Stmt]) -> CliResult<Space> {
    let mut spec: Option<SpaceSpec> = None;
    for st in stmts {
        let core = |e: levi_core::Error| sem(st, e.to_string());
        match &st.kind {
            StmtKind::Space { name, dual, pairing, universe, excluding } => {
                if spec.is_some() {
                    return Err(sem(st, "a model declares exactly one space"));
                }
                let u = Universe::with_excluded(*universe, excluding.iter().copied());
                spec = Some(match dual {
                    Some(d) if d == name => return Err(sem(st, "the two sides need different names")),
                    Some(d) => SpaceSpec::dual_pair(name, d, u),
                    None => SpaceSpec::selfdual(name, *pairing, u).map_err(core)?,
                });
            }
            StmtKind::Special { names, side } => {
                let s = spec.as_mut().ok_or_else(|| sem(st, "no space declared yet"))?;
                let side = resolve_side(s, st, side)?;
                for n in names {
                    s.add_special(side, n).map_err(core)?;
                }
            }
            StmtKind::Pair { left, right, value, binder } => {
                let s = spec.as_mut().ok_or_else(|| sem(st, "no space declared yet"))?;
                apply_pair(s, st, left, right, value, binder.as_ref())?;
            }
            _ => {}
        }
    }
    spec.map(Arc::new).ok_or_else(|| CliError::Semantic { stmt: String::new(), msg: "model declares no space".into() })
}

fn specials_on(spec: &SpaceSpec, st: &Stmt, side: Side, names: &[String]) -> CliResult<Vec<usize>> {
    names
        .iter()
        .map(|n| {
            spec.special_index(side, n)
                .ok_or_else(|| sem(st, format!("`{n}` is not a special of {}", spec.name(side))))
        })
        .collect()
}

/// Index pattern of a pairing row: a single integer, or the bound variable.
fn row_pattern(spec: &SpaceSpec, st: &Stmt, index: &Index, binder: Option<&Binder>) -> CliResult<IndexPattern> {
    let u = spec.universe();
    match (index, binder) {
        (Index::Int(j), None) => {
            if !u.contains(*j) {
                return Err(sem(st, format!("index {j} is outside the index set")));
            }
            Ok(IndexPattern::finite_set(u, [*j]))
        }
        (Index::Var(v), Some(b)) if *v == b.var => pattern(u, &b.pattern).map_err(|e| sem(st, e.to_string())),
        (Index::Var(v), _) => Err(sem(st, format!("index variable `{v}` is not bound by `for {v} in ...`"))),
        (Index::NegVar(_), _) => Err(sem(st, "pairing rows take a plain index variable")),
        (Index::Int(_), Some(_)) => Err(sem(st, "a fixed index does not take a `for` clause")),
    }
}

fn apply_pair(spec: &mut SpaceSpec, st: &Stmt, left: &Term, right: &Term, value: &Scalar, binder: Option<&Binder>) -> CliResult<()> {
    let core = |e: levi_core::Error| sem(st, e.to_string());
    let rside = spec.perp_side(Side::Left);
    match (left, right) {
        (Term::Specials(ls), Term::Specials(rs)) => {
            if binder.is_some() {
                return Err(sem(st, "special-special entries take no `for` clause"));
            }
            let a = specials_on(spec, st, Side::Left, ls)?;
            let b = specials_on(spec, st, rside, rs)?;
            for &s in &a {
                for &t in &b {
                    spec.set_gram(s, t, value.clone());
                }
            }
        }
        (Term::Specials(ls), Term::Indexed { side, index }) => {
            if resolve_side(spec, st, side)? != rside {
                return Err(sem(st, format!("`{side}` is not paired with {}", spec.name(Side::Left))));
            }
            let p = row_pattern(spec, st, index, binder)?;
            for s in specials_on(spec, st, Side::Left, ls)? {
                spec.push_row(Side::Left, s, p.clone(), value.clone()).map_err(core)?;
            }
        }
        (Term::Indexed { side, index }, Term::Specials(rs)) => {
            if resolve_side(spec, st, side)? != Side::Left {
                return Err(sem(st, format!("`{side}` is not paired with {}", spec.name(rside))));
            }
            let p = row_pattern(spec, st, index, binder)?;
            // selfdual rows are stored as <special, v_j>; convert from <v_j, special>
            let v = if spec.is_selfdual() { value * spec.kind().sign() } else { value.clone() };
            for t in specials_on(spec, st, rside, rs)? {
                spec.push_row(rside, t, p.clone(), v.clone()).map_err(core)?;
            }
        }
        (Term::Indexed { .. }, Term::Indexed { .. }) => {
            return Err(sem(st, "the pairing of regular basis vectors is fixed"));
        }
    }
    Ok(())
}

struct Elab<'a> {
    model: &'a Model,
    stmt: &'a Stmt,
}

impl Elab<'_> {
    fn err(&self, msg: impl Into<String>) -> CliError {
        sem(self.stmt, msg)
    }

    fn core(&self, e: levi_core::Error) -> CliError {
        self.err(e.to_string())
    }

    fn space(&self) -> &Space {
        &self.model.space
    }

    fn named(&self, name: &str) -> CliResult<&Subspace> {
        self.model.subspace(name).map_err(|_| self.err(format!("unknown subspace `{name}`")))
    }

    fn declare(&self) -> CliResult<Decl> {
        let st = self.stmt;
        Ok(match &st.kind {
            StmtKind::Subspace { name, side, expr } => {
                let side = resolve_side(self.space(), st, side)?;
                Decl::Subspace(name.clone(), self.expr(expr, side)?)
            }
            StmtKind::Levi { name, summands } => {
                let l = self.levi(summands)?;
                let report = l.validate().map_err(|e| self.core(e))?;
                let diags = report.failures.iter().map(|f| format!("levi {name}: {f}")).collect();
                Decl::Levi(name.clone(), l, diags)
            }
            StmtKind::Flag { name, side, members } => {
                let side = resolve_side(self.space(), st, side)?;
                let chain = members.iter().map(|m| self.named(m).cloned()).collect::<CliResult<Vec<_>>>()?;
                if let Some((m, _)) = members.iter().zip(&chain).find(|(_, s)| s.side() != self.space().norm(side)) {
                    return Err(self.err(format!("`{m}` does not live in {}", self.space().name(side))));
                }
                let f = GeneralizedFlag::from_chain(self.space(), side, &chain).map_err(|e| self.core(e))?;
                Decl::Flag(name.clone(), f)
            }
            StmtKind::Couple { name, body } => {
                let flag = |n: &str| self.model.flag(n).map_err(|_| self.err(format!("unknown flag `{n}`")));
                let c = match body {
                    CoupleBody::Pair(f, g) => TautCouple::new(flag(f)?.clone(), flag(g)?.clone()),
                    CoupleBody::Selfdual(f) => TautCouple::selfdual(flag(f)?.clone()),
                }
                .map_err(|e| self.core(e))?;
                Decl::Couple(name.clone(), c)
            }
            StmtKind::Order { name, perm } => {
                let mut sorted = perm.clone();
                sorted.sort_unstable();
                if sorted != (1..=perm.len() as i64).collect::<Vec<_>>() {
                    return Err(self.err(format!("an order must list 1..{} once each", perm.len())));
                }
                Decl::Order(name.clone(), perm.iter().map(|&k| k as usize).collect())
            }
            StmtKind::Space { .. } | StmtKind::Special { .. } | StmtKind::Pair { .. } => {
                unreachable!("space statements are applied by build_space")
            }
        })
    }

    fn expr(&self, e: &Expr, side: Side) -> CliResult<Subspace> {
        let space = self.space();
        let side = space.norm(side);
        let core = |e| self.core(e);
        Ok(match e {
            Expr::Zero => Subspace::zero(space, side),
            Expr::Full => Subspace::full(space, side),
            Expr::Name(n) if n == space.name(side) && self.model.subspace(n).is_err() => Subspace::full(space, side),
            Expr::Name(n) => {
                let s = self.named(n)?;
                if s.side() != side {
                    return Err(self.err(format!("`{n}` does not live in {}", space.name(side))));
                }
                s.clone()
            }
            Expr::Span(fams) => {
                let mut vectors = Vec::new();
                let mut families = Vec::new();
                for f in fams {
                    self.family(f, side, &mut vectors, &mut families)?;
                }
                Subspace::span(space, side, &vectors, &families).map_err(core)?
            }
            Expr::Perp(inner) => self.expr(inner, space.perp_side(side))?.perp(),
            Expr::Closure(inner) => self.expr(inner, side)?.closure(),
            Expr::Sum(a, b) => self.expr(a, side)?.sum(&self.expr(b, side)?).map_err(core)?,
            Expr::Meet(a, b) => self.expr(a, side)?.intersect(&self.expr(b, side)?).map_err(core)?,
        })
    }

    fn atom_basis(&self, atom: &Atom, side: Side) -> CliResult<Option<Basis>> {
        let space = self.space();
        match atom {
            Atom::Special(n) => space
                .special_index(side, n)
                .map(|s| Some(Basis::Special(s)))
                .ok_or_else(|| self.err(format!("`{n}` is not a special of {}", space.name(side)))),
            Atom::Indexed { side: sname, index } => {
                if sname != space.name(side) {
                    return Err(self.err(format!("`{sname}[..]` does not live in {}", space.name(side))));
                }
                match index {
                    Index::Int(i) if space.universe().contains(*i) => Ok(Some(Basis::Regular(*i))),
                    Index::Int(i) => Err(self.err(format!("index {i} is outside the index set"))),
                    Index::Var(_) | Index::NegVar(_) => Ok(None),
                }
            }
        }
    }

    fn family(&self, f: &Family, side: Side, vectors: &mut Vec<Vector>, families: &mut Vec<TailFamily>) -> CliResult<()> {
        let mut anchor = Vector::zero(side);
        let (mut lead, mut mirror) = (q(0), q(0));
        for (c, atom) in &f.terms {
            if let Some(b) = self.atom_basis(atom, side)? {
                anchor.add_term(b, c.clone());
                continue;
            }
            let Atom::Indexed { index, .. } = atom else { unreachable!("specials always resolve") };
            let (var, slot) = match index {
                Index::Var(v) => (v, &mut lead),
                Index::NegVar(v) => (v, &mut mirror),
                Index::Int(_) => unreachable!("integers always resolve"),
            };
            match &f.binder {
                Some(b) if b.var == *var => *slot += c,
                _ => return Err(self.err(format!("index variable `{var}` is not bound by `for {var} in ...`"))),
            }
        }
        let Some(b) = &f.binder else {
            vectors.push(anchor);
            return Ok(());
        };
        let p = pattern(self.space().universe(), &b.pattern).map_err(|e| self.core(e))?;
        let fam = TailFamily { pattern: p.clone(), anchor, lead, mirror };
        if p.is_infinite() {
            families.push(fam);
        } else {
            // a finite index set just lists vectors
            let top = p.finite_members().iter().map(|i| i.unsigned_abs()).max().unwrap_or(0);
            vectors.extend(p.members_within(top).into_iter().map(|i| fam.member(i)));
        }
        Ok(())
    }

    fn levi(&self, summands: &[Summand]) -> CliResult<LeviDatum> {
        let space = self.space();
        let yside = space.perp_side(Side::Left);
        let mut pairs = Vec::new();
        let mut gl = false;
        let mut w: Option<(LieKind, &String)> = None;
        for s in summands {
            match s {
                Summand::Linear { gl: g, x, y } => {
                    gl |= *g;
                    let (xs, ys) = (self.named(x)?, self.named(y)?);
                    if xs.side() != Side::Left || ys.side() != yside {
                        return Err(self.err(format!("sl({x}, {y}) needs {x} in {} and {y} in {}", space.name(Side::Left), space.name(yside))));
                    }
                    pairs.push((xs.clone(), ys.clone()));
                }
                Summand::Orthogonal(n) | Summand::Symplectic(n) => {
                    if w.is_some() {
                        return Err(self.err("at most one so/sp summand"));
                    }
                    let k = if matches!(s, Summand::Orthogonal(_)) { LieKind::So } else { LieKind::Sp };
                    w = Some((k, n));
                }
            }
        }
        let (kind, wpart) = match w {
            Some((k, n)) => (k, Some(self.named(n)?.clone())),
            None if gl => (LieKind::Gl, None),
            None => (LieKind::Sl, None),
        };
        LeviDatum::new(space, kind, pairs, wpart).map_err(|e| self.core(e))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HEAD: &str = "space V dual Vstar indices positive\nspecial v in V\n";

    fn semantic(body: &str) -> (String, String) {
        match parse_model(&format!("{HEAD}{body}")) {
            Err(CliError::Semantic { stmt, msg }) => (stmt, msg),
            other => panic!("expected a semantic error, got {other:?}"),
        }
    }

    #[test]
    fn unknown_names_are_reported_with_the_statement() {
        let (stmt, msg) = semantic("subspace A in V = B + span{V[1]}");
        assert_eq!(stmt, "subspace A in V = B + span{V[1]}");
        assert_eq!(msg, "unknown subspace `B`");
        assert_eq!(semantic("pair w . Vstar[1] = 1").1, "`w` is not a special of V");
        assert_eq!(semantic("subspace A in W = 0").1, "`W` is not a side of the space");
    }

    #[test]
    fn side_mismatches() {
        let (_, msg) = semantic("subspace A in Vstar = span{V[1]}");
        assert_eq!(msg, "`V[..]` does not live in Vstar");
        let (_, msg) = semantic("subspace A in V = span{V[1]}\nsubspace B in Vstar = A");
        assert_eq!(msg, "`A` does not live in Vstar");
        let (_, msg) = semantic("subspace A in V = span{V[1]}\nlevi L = sl(A, A)");
        assert_eq!(msg, "sl(A, A) needs A in V and A in Vstar");
    }

    #[test]
    fn index_and_binder_errors() {
        assert_eq!(semantic("subspace A in V = span{V[0]}").1, "index 0 is outside the index set");
        assert_eq!(semantic("subspace A in V = span{V[j]}").1, "index variable `j` is not bound by `for j in ...`");
        assert_eq!(semantic("pair v . Vstar[j] = 1 for k in all").1, "index variable `j` is not bound by `for j in ...`");
        assert_eq!(semantic("order O = (1, 3)").1, "an order must list 1..2 once each");
        assert_eq!(semantic("subspace A in V = 0\nsubspace A in V = 0").1, "`A` is already defined");
    }

    #[test]
    fn finite_binder_lists_vectors() {
        let m = parse_model(&format!("{HEAD}subspace A in V = span{{V[i] + v for i in {{2, 5}}}}")).unwrap();
        let want = m.eval(Side::Left, "span{V[2] + v, V[5] + v}").unwrap();
        assert_eq!(*m.subspace("A").unwrap(), want);
        assert_eq!(want.dim(), levi_core::subspace::QuotientDim::Finite(2));
    }

    #[test]
    fn pairing_rows_and_entries() {
        let m = parse_model(
            "space V dual Vstar indices positive\nspecial a b in V\nspecial c in Vstar\n\
             pair {a, b} . c = 2\npair V[j] . c = 1 for j in 1 mod 2\npair a . Vstar[3] = 1/2",
        )
        .unwrap();
        let s = &m.space;
        assert_eq!(s.pair_basis(Basis::Special(1), Basis::Special(0)), q(2));
        assert_eq!(s.pair_basis(Basis::Regular(5), Basis::Special(0)), q(1));
        assert_eq!(s.pair_basis(Basis::Regular(4), Basis::Special(0)), q(0));
        assert_eq!(s.pair_basis(Basis::Special(0), Basis::Regular(3)), q(1) / q(2));
    }

    #[test]
    fn selfdual_row_from_the_right_is_signed() {
        let m = parse_model("space V selfdual antisymmetric indices nonzero\nspecial e in V\npair V[j] . e = 1 for j in all").unwrap();
        assert_eq!(m.space.pair_basis(Basis::Regular(2), Basis::Special(0)), q(1));
        assert_eq!(m.space.pair_basis(Basis::Special(0), Basis::Regular(2)), q(-1));
    }

    #[test]
    fn side_name_is_the_whole_side() {
        let m = parse_model(HEAD).unwrap();
        assert_eq!(m.eval(Side::Right, "Vstar").unwrap(), Subspace::full(&m.space, Side::Right));
        // v has no pairing row, so it annihilates everything
        assert_eq!(m.eval(Side::Left, "perp(Vstar)").unwrap(), m.eval(Side::Left, "span{v}").unwrap());
    }
}
