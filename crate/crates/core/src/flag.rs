//! Finite generalized flags, taut couples and stabilizers.

use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::levi::LeviDatum;
use crate::operator::Operator;
use crate::space::{Side, Vector};
use crate::subspace::{Space, Subspace};

/// A strictly increasing chain `0 = F_0 ⊊ F_1 ⊊ … ⊊ F_k = V`.
///
/// Pair `α = j` (for `1 <= j <= k`) is `(F_{j-1}, F_j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedFlag {
    space: Space,
    side: Side,
    members: Vec<Subspace>,
}

impl fmt::Display for GeneralizedFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members.iter().map(|m| m.to_string()).collect();
        write!(f, "{}", parts.join(" ⊂ "))
    }
}

/// Sorts a chain by inclusion, dropping duplicates; fails if two members are incomparable.
fn sort_chain(chain: &[Subspace]) -> Result<Vec<Subspace>> {
    let mut out: Vec<Subspace> = Vec::with_capacity(chain.len());
    for s in chain {
        let mut pos = out.len();
        let mut dup = false;
        for (k, t) in out.iter().enumerate() {
            let le = t.includes(s)?;
            let ge = s.includes(t)?;
            if le && ge {
                dup = true;
                break;
            }
            if !le && !ge {
                return Err(Error::ChainNotTotallyOrdered);
            }
            if le {
                pos = k;
                break;
            }
        }
        if !dup {
            out.insert(pos, s.clone());
        }
    }
    Ok(out)
}

impl GeneralizedFlag {
    /// Validates strict inclusions and the `0`, `V` endpoints.
    pub fn new(members: Vec<Subspace>) -> Result<Self> {
        let first = members.first().ok_or_else(|| Error::InvalidFlag("empty flag".into()))?;
        let (space, side) = (first.space().clone(), first.side());
        if !first.is_zero() {
            return Err(Error::InvalidFlag("first member must be 0".into()));
        }
        let last = members.last().expect("nonempty");
        if *last != Subspace::full(&space, side) {
            return Err(Error::InvalidFlag("last member must be the full space".into()));
        }
        for w in members.windows(2) {
            if !w[1].includes(&w[0])? || w[0].includes(&w[1])? {
                return Err(Error::InvalidFlag("members must increase strictly".into()));
            }
        }
        Ok(GeneralizedFlag { space, side, members })
    }

    pub fn trivial(space: &Space, side: Side) -> Self {
        let side = space.norm(side);
        GeneralizedFlag { space: space.clone(), side, members: vec![Subspace::zero(space, side), Subspace::full(space, side)] }
    }

    /// The chain with `0` and `V` added. Finite chains are their own generalized flag.
    pub fn from_chain(space: &Space, side: Side, chain: &[Subspace]) -> Result<Self> {
        let side = space.norm(side);
        let mut all = vec![Subspace::zero(space, side)];
        all.extend(chain.iter().cloned());
        all.push(Subspace::full(space, side));
        for s in &all {
            if s.side() != side {
                return Err(Error::SideMismatch);
            }
        }
        GeneralizedFlag::new(sort_chain(&all)?)
    }

    /// The unique semiclosed flag with the stabilizer of `chain`: closures are inserted.
    ///
    /// Every nonclosed member must directly follow a closed member of the chain (or `0`).
    pub fn semiclosed_from_chain(space: &Space, side: Side, chain: &[Subspace]) -> Result<Self> {
        let sorted = sort_chain(chain)?;
        let zero_closed = Subspace::zero(space, space.norm(side)).is_closed();
        for (k, s) in sorted.iter().enumerate() {
            let prev_closed = if k == 0 { zero_closed } else { sorted[k - 1].is_closed() };
            if !s.is_closed() && !prev_closed {
                return Err(Error::PreconditionViolation(format!(
                    "nonclosed member {s} is not the immediate successor of a closed member"
                )));
            }
        }
        let mut all = sorted.clone();
        all.extend(sorted.iter().map(Subspace::closure));
        let flag = GeneralizedFlag::from_chain(space, side, &all)?;
        debug_assert!(flag.is_semiclosed());
        Ok(flag)
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn members(&self) -> &[Subspace] {
        &self.members
    }

    pub fn pair_count(&self) -> usize {
        self.members.len() - 1
    }

    /// `(F'_α, F''_α)` for `α` in `1..=pair_count()`.
    pub fn pair(&self, alpha: usize) -> (&Subspace, &Subspace) {
        (&self.members[alpha - 1], &self.members[alpha])
    }

    pub fn is_semiclosed(&self) -> bool {
        (1..=self.pair_count()).all(|a| {
            let (lo, hi) = self.pair(a);
            let c = lo.closure();
            c == *lo || c == *hi
        })
    }

    fn require_semiclosed(&self) -> Result<()> {
        if self.is_semiclosed() {
            Ok(())
        } else {
            Err(Error::NonSemiclosed)
        }
    }

    /// Whether `h` (on the flag's side) is stable under `St_F = sum F''_α ⊗ (F'_α)^⊥`.
    ///
    /// `w ⊗ u` moves `h` along `<h, u>` for `u ∈ (F')^⊥` into `w ∈ F''`, so each pair needs
    /// `(F')^⊥ ⊆ h^⊥` or `F'' ⊆ h`.
    pub fn stabilizes(&self, h: &Subspace) -> Result<bool> {
        if h.side() != self.side {
            return Err(Error::SideMismatch);
        }
        let hp = h.perp();
        for a in 1..=self.pair_count() {
            let (lo, hi) = self.pair(a);
            if !(hp.includes(&lo.perp())? || h.includes(hi)?) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `C` and `D` pair sets.
    pub fn pair_index(&self) -> Result<PairIndex> {
        self.require_semiclosed()?;
        let selfdual = self.space.is_selfdual();
        let mut c = Vec::new();
        let mut d = Vec::new();
        for a in 1..=self.pair_count() {
            let (lo, hi) = self.pair(a);
            if !lo.is_closed() {
                continue;
            }
            if selfdual && !hi.is_isotropic()? {
                continue;
            }
            c.push(a);
            if !hi.quotient_dim(lo)?.at_most(1) {
                d.push(a);
            }
        }
        Ok(PairIndex { all: (1..=self.pair_count()).collect(), closed: c, wide: d })
    }

    /// Whether `T` maps every member into itself.
    pub fn stabilizer_contains(&self, t: &Operator) -> Result<bool> {
        let factors = t.factors(&self.space);
        let reach = factors.iter().map(|(w, u)| w.max_abs_index().max(u.max_abs_index())).max().unwrap_or(0);
        for m in &self.members {
            let r = reach.max(m.frame().threshold);
            let samples = m.sample_elements(r);
            for x in &samples {
                let y = if self.side == Side::Left { t.apply(&self.space, x)? } else { t.apply_dual(&self.space, x)? };
                if !m.contains(&y)? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Operator of the form `sum F''_α ⊗ (F'_α)^⊥` built from generator samples.
    pub fn stabilizer_samples(&self, r: u64) -> Vec<Operator> {
        let mut out = Vec::new();
        for a in 1..=self.pair_count() {
            let (lo, hi) = self.pair(a);
            let ws = hi.window_elements(r);
            let us = lo.perp().window_elements(r);
            for w in &ws {
                for u in &us {
                    out.push(if self.side == Side::Left { Operator::rank_one(w, u) } else { Operator::rank_one(u, w) });
                }
            }
        }
        out
    }
}

/// Pair bookkeeping: all pairs, closed pairs `C`, wide closed pairs `D` (1-based pair ids).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PairIndex {
    pub all: Vec<usize>,
    pub closed: Vec<usize>,
    pub wide: Vec<usize>,
}

/// Flags in `V` and `V_*`; a selfdual couple carries a single self-taut flag.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TautCouple {
    pub flag_v: GeneralizedFlag,
    pub flag_vstar: Option<GeneralizedFlag>,
}

impl TautCouple {
    pub fn new(flag_v: GeneralizedFlag, flag_vstar: GeneralizedFlag) -> Result<Self> {
        if !is_taut_couple(&flag_v, &flag_vstar)? {
            return Err(Error::InvalidFlag("flags do not form a taut couple".into()));
        }
        Ok(TautCouple { flag_v, flag_vstar: Some(flag_vstar) })
    }

    pub fn selfdual(flag: GeneralizedFlag) -> Result<Self> {
        if !is_self_taut(&flag)? {
            return Err(Error::InvalidFlag("flag is not self-taut".into()));
        }
        Ok(TautCouple { flag_v: flag, flag_vstar: None })
    }

    /// The partner flag: the `V_*` flag, or the flag itself when selfdual.
    pub fn dual_flag(&self) -> &GeneralizedFlag {
        self.flag_vstar.as_ref().unwrap_or(&self.flag_v)
    }

    /// For each `γ ∈ C` of `flag_v`, the pair of the dual flag with
    /// `G'_γ = (F''_γ)^⊥` and `(G''_γ)^⊥ = F'_γ`.
    pub fn matched_pairs(&self) -> Result<Vec<(usize, usize)>> {
        let f = &self.flag_v;
        let g = self.dual_flag();
        let mut out = Vec::new();
        for gamma in f.pair_index()?.closed {
            let (lo, hi) = f.pair(gamma);
            let want_lo = hi.perp();
            let beta = (1..=g.pair_count()).find(|&b| {
                let (glo, ghi) = g.pair(b);
                *glo == want_lo && ghi.perp() == *lo
            });
            match beta {
                Some(b) => out.push((gamma, b)),
                None => return Err(Error::InvalidFlag(format!("closed pair {gamma} has no partner"))),
            }
        }
        Ok(out)
    }

    /// Chain notation with the `V_*` flag written in decreasing order.
    pub fn render(&self) -> String {
        let f = self.flag_v.to_string();
        match &self.flag_vstar {
            Some(g) => {
                let parts: Vec<String> = g.members().iter().rev().map(|m| m.to_string()).collect();
                format!("{f}, {}", parts.join(" ⊃ "))
            }
            None => f,
        }
    }
}

/// `F^⊥` stable under `St_G` for each member `F`, and `G^⊥` stable under `St_F`.
pub fn is_taut_couple(f: &GeneralizedFlag, g: &GeneralizedFlag) -> Result<bool> {
    f.require_semiclosed()?;
    g.require_semiclosed()?;
    if f.space.is_selfdual() || f.side == g.side {
        return Err(Error::SideMismatch);
    }
    for m in &f.members {
        if !g.stabilizes(&m.perp())? {
            return Ok(false);
        }
    }
    for m in &g.members {
        if !f.stabilizes(&m.perp())? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn is_self_taut(f: &GeneralizedFlag) -> Result<bool> {
    f.require_semiclosed()?;
    if !f.space.is_selfdual() {
        return Err(Error::RequiresSelfdual);
    }
    for m in &f.members {
        if !f.stabilizes(&m.perp())? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Members `U_i` and `U_i ⊕ X_i` of the summands as placed by a flag: for each summand,
/// the pair `α` with `F''_α = F'_α ⊕ X_i`.
pub fn summand_pairs(flag: &GeneralizedFlag, l: &LeviDatum) -> Result<Vec<Option<usize>>> {
    let mut out = Vec::new();
    for (x, _) in l.summands() {
        let mut found = None;
        for a in 1..=flag.pair_count() {
            let (lo, hi) = flag.pair(a);
            if lo.intersect(x)?.is_zero() && lo.sum(x)? == *hi {
                found = Some(a);
                break;
            }
        }
        out.push(found);
    }
    Ok(out)
}

/// Completes `F` to the unique taut couple with the summands of `l` sitting in
/// immediate pairs `(U_i, U_i ⊕ X_i)`.
pub fn complete_to_taut(flag: &GeneralizedFlag, l: &LeviDatum) -> Result<GeneralizedFlag> {
    let space = flag.space.clone();
    let mut chain: Vec<Subspace> = flag.members.iter().map(Subspace::perp).collect();
    for (k, (pos, (x, y))) in summand_pairs(flag, l)?.into_iter().zip(l.summands()).enumerate() {
        let a = pos.ok_or_else(|| {
            Error::PreconditionViolation(format!("summand {} is not an immediate pair of the flag", k + 1))
        })?;
        let (u, ux) = flag.pair(a);
        debug_assert!(ux.includes(x)?);
        let top = ux.perp().sum(y)?;
        if top.perp() != *u {
            return Err(Error::PreconditionViolation(format!("U = ((U ⊕ X)^⊥ ⊕ Y)^⊥ fails for summand {}", k + 1)));
        }
        chain.push(top);
    }
    GeneralizedFlag::semiclosed_from_chain(&space, space.perp_side(flag.side), &chain)
}

/// The couple with `U_i = ((X_1 ⊕ … ⊕ X_i)^⊥ ⊕ Y_i)^⊥` along `order` (1-based labels).
pub fn minimal_taut_couple(l: &LeviDatum, order: &[usize]) -> Result<TautCouple> {
    let report = l.validate()?;
    if !report.passed() {
        return Err(Error::LeviValidation(report.failures.join("; ")));
    }
    let space = l.space().clone();
    let summands = l.ordered(order)?;
    let mut chain = Vec::new();
    let mut acc = Subspace::zero(&space, Side::Left);
    for (x, y) in &summands {
        acc = acc.sum(x)?;
        let u = acc.perp().sum(y)?.perp();
        chain.push(u.sum(x)?);
        chain.push(u);
    }
    let f = GeneralizedFlag::semiclosed_from_chain(&space, Side::Left, &chain)?;
    let g = complete_to_taut(&f, l)?;
    if space.is_selfdual() {
        return TautCouple::selfdual(f);
    }
    TautCouple::new(f, g)
}

/// Exact pairing matrix between two spanning sets, used for witness search.
pub(crate) fn first_nonzero_pair(space: &Space, xs: &[Vector], ys: &[Vector]) -> Option<(Vector, Vector)> {
    for x in xs {
        for y in ys {
            if let Ok(p) = space.pair(x, y) {
                if !p.is_zero() {
                    return Some((x.clone(), y.clone()));
                }
            }
        }
    }
    None
}

