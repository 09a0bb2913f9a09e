//! Finiteness, enumeration and counting of self-normalizing parabolics with a given Levi datum.

use std::collections::HashMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::flag::{complete_to_taut, is_taut_couple, GeneralizedFlag, TautCouple};
use crate::levi::{induced_order, is_levi_component, reductive_part, LeviDatum};
use crate::space::{PairingKind, Side};
use crate::subspace::{QuotientDim, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Count {
    Finite(u64),
    Uncountable,
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Finite(n) => write!(f, "finite {n}"),
            Count::Uncountable => write!(f, "uncountable"),
        }
    }
}

/// `3 * 2^(n-2) * n!` for `n >= 2`, `2` for `n = 1`.
pub fn count_bound(n: usize) -> u64 {
    match n {
        0 => 1,
        1 => 2,
        _ => 3 * (1u64 << (n - 2)) * (1..=n as u64).product::<u64>(),
    }
}

/// Quotient `(⊕_{i∉J} Y_i)^⊥ / (⊕_{j∈J} X_j)^⊥⊥` for one subset `J` (1-based labels).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubsetQuotient {
    pub subset: Vec<usize>,
    pub dim: QuotientDim,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finiteness {
    pub finite: bool,
    /// First violating `J`, scanning subsets from the full set downwards.
    pub witness: Option<Vec<usize>>,
    /// Every subset, by increasing bitmask with summand `i` at bit `i - 1`.
    pub quotients: Vec<SubsetQuotient>,
}

fn labels(mask: usize, n: usize) -> Vec<usize> {
    (0..n).filter(|k| mask >> k & 1 == 1).map(|k| k + 1).collect()
}

/// Perps of partial sums, cached by summand bitmask.
struct Sums<'a> {
    l: &'a LeviDatum,
    perp_x: HashMap<usize, Subspace>,
    perp_y: HashMap<usize, Subspace>,
}

impl<'a> Sums<'a> {
    fn new(l: &'a LeviDatum) -> Self {
        Sums { l, perp_x: HashMap::new(), perp_y: HashMap::new() }
    }

    /// `(⊕_{k ∈ mask} X_k)^⊥`.
    fn px(&mut self, mask: usize) -> Result<Subspace> {
        if let Some(s) = self.perp_x.get(&mask) {
            return Ok(s.clone());
        }
        let mut acc = Subspace::zero(self.l.space(), Side::Left);
        for k in labels(mask, self.l.len()) {
            acc = acc.sum(&self.l.summands()[k - 1].0)?;
        }
        let p = acc.perp();
        self.perp_x.insert(mask, p.clone());
        Ok(p)
    }

    /// `(⊕_{k ∈ mask} Y_k)^⊥`.
    fn py(&mut self, mask: usize) -> Result<Subspace> {
        if let Some(s) = self.perp_y.get(&mask) {
            return Ok(s.clone());
        }
        let mut acc = Subspace::zero(self.l.space(), Side::Right);
        for k in labels(mask, self.l.len()) {
            acc = acc.sum(&self.l.summands()[k - 1].1)?;
        }
        let p = acc.perp();
        self.perp_y.insert(mask, p.clone());
        Ok(p)
    }
}

fn require_linear(l: &LeviDatum) -> Result<()> {
    if !l.kind().is_linear() {
        return Err(Error::InvalidKind("enumeration covers gl and sl".into()));
    }
    let r = l.validate()?;
    if !r.passed() {
        return Err(Error::LeviValidation(r.failures.join("; ")));
    }
    Ok(())
}

fn finiteness_with(l: &LeviDatum, sums: &mut Sums) -> Result<Finiteness> {
    let n = l.len();
    let full = (1usize << n) - 1;
    let mut quotients = Vec::with_capacity(1 << n);
    for mask in 0..=full {
        let top = sums.py(full & !mask)?;
        let bottom = sums.px(mask)?.perp();
        quotients.push(SubsetQuotient { subset: labels(mask, n), dim: top.quotient_dim(&bottom)? });
    }
    let witness = (0..=full).rev().find(|&m| !quotients[m].dim.at_most(1)).map(|m| labels(m, n));
    Ok(Finiteness { finite: witness.is_none(), witness, quotients })
}

pub fn finiteness_test(l: &LeviDatum) -> Result<Finiteness> {
    require_linear(l)?;
    finiteness_with(l, &mut Sums::new(l))
}

/// One enumerated couple with its `U_i` (listed along the order).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumeratedCouple {
    pub order: Vec<usize>,
    pub us: Vec<Subspace>,
    pub couple: TautCouple,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumerationResult {
    pub couples: Vec<EnumeratedCouple>,
    pub total: Count,
    pub per_order: Vec<(Vec<usize>, u64)>,
    pub witness: Option<Vec<usize>>,
    pub diagnostics: Vec<String>,
}

/// Candidate tuples `(U_1, …, U_n)` along `order`.
fn tuples(l: &LeviDatum, order: &[usize], sums: &mut Sums) -> Result<Vec<Vec<Subspace>>> {
    let n = l.len();
    let summands = l.ordered(order)?;
    let mut cands: Vec<Vec<Subspace>> = Vec::with_capacity(n);
    let mut prefix = 0usize;
    for (i, (x, y)) in summands.iter().enumerate() {
        prefix |= 1 << (order[i] - 1);
        let suffix = order[i..].iter().fold(0usize, |m, &k| m | 1 << (k - 1));
        let lower = sums.px(prefix)?.sum(y)?.perp();
        let upper = sums.py(suffix)?;
        let mut options = vec![lower];
        if options[0] != upper {
            options.push(upper);
        }
        let mut ok = Vec::new();
        for u in options {
            let ux = u.sum(x)?;
            if u.intersect(x)?.is_zero() && ux.perp().sum(y)?.perp() == u {
                ok.push(u);
            }
        }
        cands.push(ok);
    }
    let full_v = Subspace::full(l.space(), Side::Left);
    let mut out = Vec::new();
    let mut stack: Vec<Subspace> = Vec::new();
    fn walk(
        i: usize,
        cands: &[Vec<Subspace>],
        summands: &[(Subspace, Subspace)],
        full_v: &Subspace,
        stack: &mut Vec<Subspace>,
        out: &mut Vec<Vec<Subspace>>,
    ) -> Result<()> {
        if i == cands.len() {
            let last = match stack.last() {
                Some(u) => u.sum(&summands[i - 1].0)?.closure(),
                None => Subspace::zero(full_v.space(), Side::Left),
            };
            if !full_v.quotient_dim(&last)?.at_most(1) {
                return Err(Error::NonUnique("gap above the last summand exceeds dimension 1".into()));
            }
            out.push(stack.clone());
            return Ok(());
        }
        for u in &cands[i] {
            let below = match stack.last() {
                Some(prev) => {
                    let top = prev.sum(&summands[i - 1].0)?;
                    if !u.includes(&top)? {
                        continue;
                    }
                    top.closure()
                }
                None => Subspace::zero(full_v.space(), Side::Left),
            };
            if !u.quotient_dim(&below)?.at_most(1) {
                return Err(Error::NonUnique(format!("gap below U_{} exceeds dimension 1", i + 1)));
            }
            stack.push(u.clone());
            walk(i + 1, cands, summands, full_v, stack, out)?;
            stack.pop();
        }
        Ok(())
    }
    walk(0, &cands, &summands, &full_v, &mut stack, &mut out)?;
    Ok(out)
}

/// `0 ⊂ U_1 ⊂ U_1 ⊕ X_1 ⊂ (U_1 ⊕ X_1)^⊥⊥ ⊂ U_2 ⊂ … ⊂ V` and its completion.
pub fn couple_from_us(l: &LeviDatum, order: &[usize], us: &[Subspace]) -> Result<TautCouple> {
    let space = l.space().clone();
    let summands = l.ordered(order)?;
    let mut chain = Vec::new();
    for (u, (x, _)) in us.iter().zip(&summands) {
        chain.push(u.clone());
        chain.push(u.sum(x)?);
    }
    let f = GeneralizedFlag::semiclosed_from_chain(&space, Side::Left, &chain)?;
    let g = complete_to_taut(&f, l)?;
    Ok(TautCouple { flag_v: f, flag_vstar: Some(g) })
}

fn all_orders(n: usize) -> Vec<Vec<usize>> {
    fn go(rest: &mut Vec<usize>, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for k in 0..rest.len() {
            let v = rest.remove(k);
            cur.push(v);
            go(rest, cur, out);
            cur.pop();
            rest.insert(k, v);
        }
    }
    let mut out = Vec::new();
    go(&mut (1..=n).collect(), &mut Vec::new(), &mut out);
    out
}

fn enumerate_with(l: &LeviDatum, orders: &[Vec<usize>], build: bool, sums: &mut Sums) -> Result<EnumerationResult> {
    let fin = finiteness_with(l, sums)?;
    if !fin.finite {
        return Err(Error::InfiniteFamily { witness: fin.witness.unwrap_or_default() });
    }
    let mut couples = Vec::new();
    let mut per_order = Vec::new();
    let mut diagnostics = Vec::new();
    let mut total = 0u64;
    for order in orders {
        let ts = tuples(l, order, sums)?;
        let mut kept = 0u64;
        for us in ts {
            if build {
                let couple = couple_from_us(l, order, &us)?;
                let taut = is_taut_couple(&couple.flag_v, couple.dual_flag())?;
                let cert = is_levi_component(&couple, l)?;
                if !taut || !cert.holds {
                    diagnostics.push(format!("order {order:?}: candidate rejected (taut {taut}, levi {})", cert.holds));
                    continue;
                }
                let induced = induced_order(&couple, l)?;
                if induced != *order {
                    diagnostics.push(format!("order {order:?}: candidate induces {induced:?}"));
                    continue;
                }
                couples.push(EnumeratedCouple { order: order.clone(), us, couple });
            }
            kept += 1;
        }
        total += kept;
        per_order.push((order.clone(), kept));
    }
    Ok(EnumerationResult { couples, total: Count::Finite(total), per_order, witness: None, diagnostics })
}

/// Couples inducing `order` (1-based labels), each verified taut and Levi.
pub fn enumerate_couples(l: &LeviDatum, order: &[usize]) -> Result<EnumerationResult> {
    require_linear(l)?;
    enumerate_with(l, &[order.to_vec()], true, &mut Sums::new(l))
}

/// Couples over every order.
pub fn enumerate_all(l: &LeviDatum) -> Result<EnumerationResult> {
    require_linear(l)?;
    enumerate_with(l, &all_orders(l.len()), true, &mut Sums::new(l))
}

/// Count with the violating subset when uncountable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountReport {
    pub count: Count,
    pub witness: Option<Vec<usize>>,
    pub per_order: Vec<(Vec<usize>, u64)>,
}

/// Number of self-normalizing parabolics with Levi component `l`, summed over all orders.
///
/// Tuples are counted without assembling couples; [`enumerate_all`] builds and verifies them.
pub fn count_self_normalizing(l: &LeviDatum) -> Result<CountReport> {
    require_linear(l)?;
    let mut sums = Sums::new(l);
    let fin = finiteness_with(l, &mut sums)?;
    if !fin.finite {
        return Ok(CountReport { count: Count::Uncountable, witness: fin.witness, per_order: Vec::new() });
    }
    let r = enumerate_with(l, &all_orders(l.len()), false, &mut sums)?;
    Ok(CountReport { count: r.total, witness: None, per_order: r.per_order })
}

/// Single-summand count: finite iff `dim X^⊥ <= 1` and `dim Y^⊥ <= 1`; then 1 or 2
/// according to whether `<Y^⊥, X^⊥>` vanishes.
pub fn one_block_analysis(x: &Subspace, y: &Subspace) -> Result<Count> {
    if !Subspace::pairs_nondegenerately(x, y)? {
        return Err(Error::DegenerateRestriction("X x Y".into()));
    }
    let xp = x.perp();
    let yp = y.perp();
    if !xp.dim().at_most(1) || !yp.dim().at_most(1) {
        return Ok(Count::Uncountable);
    }
    let space = x.space();
    let (a, b) = (yp.window_elements(yp.frame().threshold), xp.window_elements(xp.frame().threshold));
    let pairs_nonzero = match (a.first(), b.first()) {
        (Some(u), Some(w)) => !space.pair(u, w)?.is_zero(),
        _ => false,
    };
    Ok(Count::Finite(if pairs_nonzero { 2 } else { 1 }))
}

/// Parabolics between `p_-` and `p_+`: one per subspace of the trace functionals on the
/// infinite blocks of a reductive part.
pub fn trace_condition_count(couple: &TautCouple) -> Result<Count> {
    if couple.flag_v.space().kind() != PairingKind::DualPair {
        return Err(Error::InvalidKind("trace conditions are counted for gl".into()));
    }
    let k = reductive_part(couple)?.infinite_blocks();
    Ok(match k {
        0 => Count::Finite(1),
        1 => Count::Finite(2),
        _ => Count::Uncountable,
    })
}
