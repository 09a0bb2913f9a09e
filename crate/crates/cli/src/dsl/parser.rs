use levi_core::kernel::{q, Scalar};
use levi_core::pattern::UniverseKind;
use levi_core::space::PairingKind;

use super::lexer::{tokenize, Tok, Token};
use super::*;
use crate::error::{CliError, CliResult};

const KEYWORDS: [&str; 8] = ["space", "special", "pair", "subspace", "levi", "flag", "couple", "order"];

pub fn parse(src: &str) -> CliResult<Vec<Stmt>> {
    let toks = tokenize(src)?;
    let mut p = Parser { src, toks, at: 0 };
    let mut out = Vec::new();
    while p.peek() != &Tok::Eof {
        if p.eat_punct(';') {
            continue;
        }
        out.push(p.statement()?);
    }
    Ok(out)
}

struct Parser<'a> {
    src: &'a str,
    toks: Vec<Token>,
    at: usize,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].tok
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.at + k).min(self.toks.len() - 1)].tok
    }

    fn error<T>(&self, msg: impl Into<String>) -> CliResult<T> {
        let t = &self.toks[self.at];
        Err(CliError::Syntax { line: t.line, col: t.col, msg: msg.into() })
    }

    fn expected<T>(&self, what: &str) -> CliResult<T> {
        self.error(format!("expected {what}, found {}", self.peek().describe()))
    }

    fn is_word(&self, w: &str) -> bool {
        matches!(self.peek(), Tok::Ident(s) if s == w)
    }

    fn eat_word(&mut self, w: &str) -> bool {
        let hit = self.is_word(w);
        if hit {
            self.at += 1;
        }
        hit
    }

    fn word(&mut self, w: &str) -> CliResult<()> {
        if self.eat_word(w) {
            Ok(())
        } else {
            self.expected(&format!("`{w}`"))
        }
    }

    fn eat_punct(&mut self, c: char) -> bool {
        let hit = self.peek() == &Tok::Punct(c);
        if hit {
            self.at += 1;
        }
        hit
    }

    fn punct(&mut self, c: char) -> CliResult<()> {
        if self.eat_punct(c) {
            Ok(())
        } else {
            self.expected(&format!("`{c}`"))
        }
    }

    fn name(&mut self) -> CliResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) if !KEYWORDS.contains(&s.as_str()) => {
                self.at += 1;
                Ok(s)
            }
            _ => self.expected("a name"),
        }
    }

    fn int(&mut self) -> CliResult<i64> {
        let neg = self.eat_punct('-');
        match self.peek().clone() {
            Tok::Int(n) => {
                self.at += 1;
                Ok(if neg { -n } else { n })
            }
            _ => self.expected("an integer"),
        }
    }

    fn uint(&mut self) -> CliResult<u64> {
        match self.peek().clone() {
            Tok::Int(n) => {
                self.at += 1;
                Ok(n as u64)
            }
            _ => self.expected("a nonnegative integer"),
        }
    }

    /// `{ INT, ... }`, possibly empty.
    fn int_set(&mut self) -> CliResult<Vec<i64>> {
        self.punct('{')?;
        let mut out = Vec::new();
        if self.eat_punct('}') {
            return Ok(out);
        }
        loop {
            out.push(self.int()?);
            if self.eat_punct('}') {
                return Ok(out);
            }
            self.punct(',')?;
        }
    }

    /// `INT [/ INT]` with an optional leading sign.
    fn rational(&mut self) -> CliResult<Scalar> {
        let num = self.int()?;
        if self.eat_punct('/') {
            let den = self.int()?;
            if den == 0 {
                return self.error("zero denominator");
            }
            return Ok(q(num) / q(den));
        }
        Ok(q(num))
    }

    fn statement(&mut self) -> CliResult<Stmt> {
        let first = &self.toks[self.at];
        let (start, line) = (first.start, first.line);
        let kind = match self.peek().clone() {
            Tok::Ident(k) => {
                self.at += 1;
                match k.as_str() {
                    "space" => self.space()?,
                    "special" => {
                        let names = self.name_list()?;
                        self.word("in")?;
                        StmtKind::Special { names, side: self.name()? }
                    }
                    "pair" => self.pair()?,
                    "subspace" => {
                        let name = self.name()?;
                        self.word("in")?;
                        let side = self.name()?;
                        self.punct('=')?;
                        StmtKind::Subspace { name, side, expr: self.expr()? }
                    }
                    "levi" => self.levi()?,
                    "flag" => {
                        let name = self.name()?;
                        self.word("in")?;
                        let side = self.name()?;
                        self.punct('=')?;
                        StmtKind::Flag { name, side, members: self.tuple(Self::name)? }
                    }
                    "couple" => {
                        let name = self.name()?;
                        self.punct('=')?;
                        let body = if self.eat_word("selfdual") {
                            self.punct('(')?;
                            let f = self.name()?;
                            self.punct(')')?;
                            CoupleBody::Selfdual(f)
                        } else {
                            let fs = self.tuple(Self::name)?;
                            if fs.len() != 2 {
                                return self.error("a couple needs exactly two flags");
                            }
                            CoupleBody::Pair(fs[0].clone(), fs[1].clone())
                        };
                        StmtKind::Couple { name, body }
                    }
                    "order" => {
                        let name = self.name()?;
                        self.punct('=')?;
                        StmtKind::Order { name, perm: self.tuple(Self::int)? }
                    }
                    _ => {
                        self.at -= 1;
                        return self.expected("a statement keyword");
                    }
                }
            }
            _ => return self.expected("a statement keyword"),
        };
        let end = self.toks[self.at - 1].end;
        Ok(Stmt { kind, text: self.src[start..end].to_string(), line })
    }

    /// `( ITEM, ... )` with at least one item.
    fn tuple<T>(&mut self, item: fn(&mut Self) -> CliResult<T>) -> CliResult<Vec<T>> {
        self.punct('(')?;
        let mut out = vec![item(self)?];
        while self.eat_punct(',') {
            out.push(item(self)?);
        }
        self.punct(')')?;
        Ok(out)
    }

    fn space(&mut self) -> CliResult<StmtKind> {
        let name = self.name()?;
        let (dual, pairing) = if self.eat_word("dual") {
            (Some(self.name()?), PairingKind::DualPair)
        } else if self.eat_word("selfdual") {
            let k = if self.eat_word("symmetric") {
                PairingKind::SelfdualSymmetric
            } else if self.eat_word("antisymmetric") {
                PairingKind::SelfdualAntisymmetric
            } else {
                return self.expected("`symmetric` or `antisymmetric`");
            };
            (None, k)
        } else {
            return self.expected("`dual` or `selfdual`");
        };
        self.word("indices")?;
        let universe = if self.eat_word("positive") {
            UniverseKind::Positive
        } else if self.eat_word("nonzero") {
            UniverseKind::Nonzero
        } else if self.eat_word("integers") {
            UniverseKind::Integers
        } else {
            return self.expected("`positive`, `nonzero` or `integers`");
        };
        let excluding = if self.eat_word("excluding") { self.int_set()? } else { Vec::new() };
        Ok(StmtKind::Space { name, dual, pairing, universe, excluding })
    }

    /// Names, `a1..a9` ranges, separated by whitespace (or commas inside braces).
    fn name_list(&mut self) -> CliResult<Vec<String>> {
        let mut out = Vec::new();
        loop {
            if !matches!(self.peek(), Tok::Ident(s) if s != "in" && !KEYWORDS.contains(&s.as_str())) {
                break;
            }
            let first = self.name()?;
            if self.peek() == &Tok::DotDot {
                self.at += 1;
                let last = self.name()?;
                out.extend(self.expand_range(&first, &last)?);
            } else {
                out.push(first);
            }
            self.eat_punct(',');
        }
        if out.is_empty() {
            return self.expected("a name");
        }
        Ok(out)
    }

    fn expand_range(&self, first: &str, last: &str) -> CliResult<Vec<String>> {
        let split = |s: &str| {
            let k = s.trim_end_matches(|c: char| c.is_ascii_digit()).len();
            let (p, n) = s.split_at(k);
            n.parse::<u64>().ok().map(|n| (p.to_string(), n))
        };
        match (split(first), split(last)) {
            (Some((p, a)), Some((p2, b))) if p == p2 && a <= b => Ok((a..=b).map(|k| format!("{p}{k}")).collect()),
            _ => self.error(format!("`{first}..{last}` is not a numbered range")),
        }
    }

    fn pair(&mut self) -> CliResult<StmtKind> {
        let left = self.term()?;
        self.punct('.')?;
        let right = self.term()?;
        self.punct('=')?;
        let value = self.rational()?;
        let binder = if self.eat_word("for") { Some(self.binder()?) } else { None };
        Ok(StmtKind::Pair { left, right, value, binder })
    }

    fn term(&mut self) -> CliResult<Term> {
        if self.eat_punct('{') {
            let names = self.name_list()?;
            self.punct('}')?;
            return Ok(Term::Specials(names));
        }
        if self.peek_at(1) == &Tok::Punct('[') {
            let side = self.name()?;
            return Ok(Term::Indexed { side, index: self.index()? });
        }
        let first = self.name()?;
        if self.peek() == &Tok::DotDot {
            self.at += 1;
            let last = self.name()?;
            return Ok(Term::Specials(self.expand_range(&first, &last)?));
        }
        Ok(Term::Specials(vec![first]))
    }

    /// `[ INT ]`, `[ VAR ]` or `[ -VAR ]`.
    fn index(&mut self) -> CliResult<Index> {
        self.punct('[')?;
        let neg = self.eat_punct('-');
        let ix = match self.peek().clone() {
            Tok::Int(n) => Index::Int(if neg { -n } else { n }),
            Tok::Ident(v) if neg => Index::NegVar(v),
            Tok::Ident(v) => Index::Var(v),
            _ => return self.expected("an index"),
        };
        self.at += 1;
        self.punct(']')?;
        Ok(ix)
    }

    fn binder(&mut self) -> CliResult<Binder> {
        let var = self.name()?;
        self.word("in")?;
        Ok(Binder { var, pattern: self.pattern()? })
    }

    fn pattern(&mut self) -> CliResult<PatSpec> {
        let base = if self.eat_word("all") {
            PatBase::All
        } else {
            let set = if self.peek() == &Tok::Punct('{') { self.int_set()? } else { vec![self.int()?] };
            if self.eat_word("mod") {
                let modulus = self.uint()?;
                if modulus == 0 {
                    return self.error("modulus must be positive");
                }
                let neg = if self.peek() == &Tok::Punct('/') && matches!(self.peek_at(1), Tok::Ident(s) if s == "neg") {
                    self.at += 2;
                    Some(self.int_set()?)
                } else {
                    None
                };
                PatBase::Residues { modulus, pos: set, neg }
            } else if self.toks[self.at - 1].tok == Tok::Punct('}') {
                PatBase::Finite(set)
            } else {
                return self.expected("`mod`");
            }
        };
        let mut mods = Vec::new();
        loop {
            let m = if self.eat_word("from") {
                PatMod::From(self.int()?)
            } else if self.eat_word("to") {
                PatMod::To(self.int()?)
            } else if self.eat_word("beyond") {
                PatMod::Beyond(self.uint()?)
            } else if self.eat_word("with") {
                PatMod::With(self.int_set()?)
            } else if self.eat_word("excluding") {
                PatMod::Excluding(self.int_set()?)
            } else {
                break;
            };
            mods.push(m);
        }
        Ok(PatSpec { base, mods })
    }

    /// `+` is the loosest operator, `&` binds tighter.
    fn expr(&mut self) -> CliResult<Expr> {
        let mut e = self.meet()?;
        while self.eat_punct('+') {
            e = Expr::Sum(Box::new(e), Box::new(self.meet()?));
        }
        Ok(e)
    }

    fn meet(&mut self) -> CliResult<Expr> {
        let mut e = self.primary()?;
        while self.eat_punct('&') {
            e = Expr::Meet(Box::new(e), Box::new(self.primary()?));
        }
        Ok(e)
    }

    fn primary(&mut self) -> CliResult<Expr> {
        match self.peek().clone() {
            Tok::Int(0) => {
                self.at += 1;
                Ok(Expr::Zero)
            }
            Tok::Punct('(') => {
                self.at += 1;
                let e = self.expr()?;
                self.punct(')')?;
                Ok(e)
            }
            Tok::Ident(w) if w == "span" => {
                self.at += 1;
                self.punct('{')?;
                let mut fams = Vec::new();
                if !self.eat_punct('}') {
                    loop {
                        fams.push(self.family()?);
                        if self.eat_punct('}') {
                            break;
                        }
                        self.punct(',')?;
                    }
                }
                Ok(Expr::Span(fams))
            }
            Tok::Ident(w) if w == "full" => {
                self.at += 1;
                Ok(Expr::Full)
            }
            Tok::Ident(w) if (w == "perp" || w == "closure") && self.peek_at(1) == &Tok::Punct('(') => {
                self.at += 2;
                let e = Box::new(self.expr()?);
                self.punct(')')?;
                Ok(if w == "perp" { Expr::Perp(e) } else { Expr::Closure(e) })
            }
            _ => Ok(Expr::Name(self.name()?)),
        }
    }

    fn family(&mut self) -> CliResult<Family> {
        let mut terms = Vec::new();
        let mut sign = if self.eat_punct('-') {
            -1
        } else {
            self.eat_punct('+');
            1
        };
        loop {
            let coeff = if matches!(self.peek(), Tok::Int(_)) {
                let c = self.rational()?;
                self.punct('*')?;
                c
            } else {
                q(1)
            };
            let atom = if self.peek_at(1) == &Tok::Punct('[') {
                let side = self.name()?;
                Atom::Indexed { side, index: self.index()? }
            } else {
                Atom::Special(self.name()?)
            };
            terms.push((coeff * q(sign), atom));
            sign = if self.eat_punct('+') {
                1
            } else if self.eat_punct('-') {
                -1
            } else {
                break;
            };
        }
        let binder = if self.eat_word("for") { Some(self.binder()?) } else { None };
        Ok(Family { terms, binder })
    }

    fn levi(&mut self) -> CliResult<StmtKind> {
        let name = self.name()?;
        self.punct('=')?;
        let mut summands = Vec::new();
        loop {
            let kind = match self.peek().clone() {
                Tok::Ident(k) if ["sl", "gl", "so", "sp"].contains(&k.as_str()) => k,
                _ => return self.expected("`sl`, `gl`, `so` or `sp`"),
            };
            self.at += 1;
            self.punct('(')?;
            let s = match kind.as_str() {
                "sl" | "gl" => {
                    let x = self.name()?;
                    self.punct(',')?;
                    Summand::Linear { gl: kind == "gl", x, y: self.name()? }
                }
                "so" => Summand::Orthogonal(self.name()?),
                _ => Summand::Symplectic(self.name()?),
            };
            self.punct(')')?;
            summands.push(s);
            if !self.eat_punct('+') {
                break;
            }
        }
        Ok(StmtKind::Levi { name, summands })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn one(src: &str) -> StmtKind {
        let mut v = parse(src).unwrap();
        assert_eq!(v.len(), 1, "{v:?}");
        v.remove(0).kind
    }

    fn from(t: i64) -> PatSpec {
        PatSpec { base: PatBase::Residues { modulus: 1, pos: vec![0], neg: None }, mods: vec![PatMod::From(t)] }
    }

    #[test]
    fn one_block_subspace() {
        let k = one("subspace X in V = span { V[1] + V[i] for i in 0 mod 1 from 2 }");
        let fam = Family {
            terms: vec![
                (q(1), Atom::Indexed { side: "V".into(), index: Index::Int(1) }),
                (q(1), Atom::Indexed { side: "V".into(), index: Index::Var("i".into()) }),
            ],
            binder: Some(Binder { var: "i".into(), pattern: from(2) }),
        };
        assert_eq!(k, StmtKind::Subspace { name: "X".into(), side: "V".into(), expr: Expr::Span(vec![fam]) });
    }

    #[test]
    fn all_ones_row() {
        let k = one("pair v . Vstar[j] = 1 for j in all");
        assert_eq!(
            k,
            StmtKind::Pair {
                left: Term::Specials(vec!["v".into()]),
                right: Term::Indexed { side: "Vstar".into(), index: Index::Var("j".into()) },
                value: q(1),
                binder: Some(Binder { var: "j".into(), pattern: PatSpec { base: PatBase::All, mods: vec![] } }),
            }
        );
    }

    #[test]
    fn ranges_and_groups() {
        assert_eq!(
            one("special w1..w3 z in V"),
            StmtKind::Special { names: vec!["w1".into(), "w2".into(), "w3".into(), "z".into()], side: "V".into() }
        );
        match one("pair {a, b} . c1..c2 = -1/2") {
            StmtKind::Pair { left, right, value, binder: None } => {
                assert_eq!(left, Term::Specials(vec!["a".into(), "b".into()]));
                assert_eq!(right, Term::Specials(vec!["c1".into(), "c2".into()]));
                assert_eq!(value, q(-1) / q(2));
            }
            k => panic!("{k:?}"),
        }
    }

    #[test]
    fn generic_pattern_form() {
        match one("subspace A in V = span{V[i] for i in {1,2} mod 3 / neg {0} beyond 4 with {-2, 3}}") {
            StmtKind::Subspace { expr: Expr::Span(f), .. } => {
                let p = &f[0].binder.as_ref().unwrap().pattern;
                assert_eq!(p.base, PatBase::Residues { modulus: 3, pos: vec![1, 2], neg: Some(vec![0]) });
                assert_eq!(p.mods, vec![PatMod::Beyond(4), PatMod::With(vec![-2, 3])]);
            }
            k => panic!("{k:?}"),
        }
    }

    #[test]
    fn expressions_and_precedence() {
        let k = one("subspace S in V = perp(A) + B & closure(C + 0)");
        let n = |s: &str| Box::new(Expr::Name(s.into()));
        let want = Expr::Sum(
            Box::new(Expr::Perp(n("A"))),
            Box::new(Expr::Meet(n("B"), Box::new(Expr::Closure(Box::new(Expr::Sum(n("C"), Box::new(Expr::Zero))))))),
        );
        assert_eq!(k, StmtKind::Subspace { name: "S".into(), side: "V".into(), expr: want });
    }

    #[test]
    fn mirror_and_coefficients() {
        match one("subspace A in V = span{2*V[i] - 1/3*V[-i] - z for i in 1 mod 2 from 3}") {
            StmtKind::Subspace { expr: Expr::Span(f), .. } => {
                let c: Vec<Scalar> = f[0].terms.iter().map(|t| t.0.clone()).collect();
                assert_eq!(c, vec![q(2), q(-1) / q(3), q(-1)]);
                assert_eq!(f[0].terms[1].1, Atom::Indexed { side: "V".into(), index: Index::NegVar("i".into()) });
            }
            k => panic!("{k:?}"),
        }
    }

    #[test]
    fn statements_split_without_separators() {
        let src = "space V dual Vstar indices positive\n# comment\nsubspace X in V = span{V[1]}\n\
                   levi L = sl(X, Y) + gl(A,B)\nflag F in V = (X)\ncouple C = (F, G)\ncouple D = selfdual(F)\norder O = (2,1)";
        let v = parse(src).unwrap();
        assert_eq!(v.len(), 7);
        assert_eq!(v[1].text, "subspace X in V = span{V[1]}");
        assert_eq!(v[1].line, 3);
        assert_eq!(v[6].kind, StmtKind::Order { name: "O".into(), perm: vec![2, 1] });
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let e = parse("space V dual Vstar indices positive\nsubspace X in V span{}").unwrap_err();
        assert_eq!(e.to_string(), "2:17: syntax error: expected `=`, found `span`");
        let e = parse("order O = (1,").unwrap_err();
        assert_eq!(e.to_string(), "1:14: syntax error: expected an integer, found end of input");
        assert!(parse("bogus").is_err());
        assert!(parse("pair v . V[j] = 1/0").is_err());
    }
}
