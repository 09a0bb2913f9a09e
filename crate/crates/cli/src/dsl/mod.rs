//! Model-file language: lexer, statement AST and parser.
//!
//! Elaboration into library objects lives in [`crate::model`].

pub mod lexer;
mod parser;

use levi_core::kernel::Scalar;
use levi_core::pattern::UniverseKind;
use levi_core::space::PairingKind;

pub use parser::parse;

#[derive(Clone, Debug, PartialEq)]
pub struct Stmt {
    pub kind: StmtKind,
    /// Source text of the statement, for semantic error messages.
    pub text: String,
    pub line: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub enum StmtKind {
    Space { name: String, dual: Option<String>, pairing: PairingKind, universe: UniverseKind, excluding: Vec<i64> },
    Special { names: Vec<String>, side: String },
    Pair { left: Term, right: Term, value: Scalar, binder: Option<Binder> },
    Subspace { name: String, side: String, expr: Expr },
    Levi { name: String, summands: Vec<Summand> },
    Flag { name: String, side: String, members: Vec<String> },
    Couple { name: String, body: CoupleBody },
    Order { name: String, perm: Vec<i64> },
}

/// `for NAME in PATTERN`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binder {
    pub var: String,
    pub pattern: PatSpec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Specials(Vec<String>),
    Indexed { side: String, index: Index },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Index {
    Int(i64),
    Var(String),
    NegVar(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatSpec {
    pub base: PatBase,
    pub mods: Vec<PatMod>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatBase {
    All,
    /// Residues on both tails, or positive residues plus `/ neg {...}` for the negative tail.
    Residues { modulus: u64, pos: Vec<i64>, neg: Option<Vec<i64>> },
    Finite(Vec<i64>),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PatMod {
    From(i64),
    To(i64),
    /// Keep only `|i| > t`.
    Beyond(u64),
    /// Add these indices.
    With(Vec<i64>),
    Excluding(Vec<i64>),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Zero,
    Full,
    Name(String),
    Span(Vec<Family>),
    Perp(Box<Expr>),
    Closure(Box<Expr>),
    Sum(Box<Expr>, Box<Expr>),
    Meet(Box<Expr>, Box<Expr>),
}

/// A linear combination of atoms, optionally indexed by a binder.
#[derive(Clone, Debug, PartialEq)]
pub struct Family {
    pub terms: Vec<(Scalar, Atom)>,
    pub binder: Option<Binder>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Atom {
    Special(String),
    Indexed { side: String, index: Index },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Summand {
    Linear { gl: bool, x: String, y: String },
    Orthogonal(String),
    Symplectic(String),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoupleBody {
    Pair(String, String),
    Selfdual(String),
}
