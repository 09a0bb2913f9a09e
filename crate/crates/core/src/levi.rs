//! Levi data: validation, decision procedures and canonical extraction from couples.

use std::fmt;

use crate::error::{Error, Result};
use crate::flag::{first_nonzero_pair, is_self_taut, GeneralizedFlag, TautCouple};
use crate::space::{PairingKind, Side};
use crate::subspace::{QuotientDim, Space, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LieKind {
    Gl,
    Sl,
    So,
    Sp,
}

impl LieKind {
    pub fn is_linear(self) -> bool {
        matches!(self, LieKind::Gl | LieKind::Sl)
    }
}

impl fmt::Display for LieKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            LieKind::Gl => "gl",
            LieKind::Sl => "sl",
            LieKind::So => "so",
            LieKind::Sp => "sp",
        };
        write!(f, "{s}")
    }
}

/// Summands `sl(X_i, Y_i)` in a fixed labelled order, plus `so(W)`/`sp(W)` when selfdual.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeviDatum {
    space: Space,
    kind: LieKind,
    summands: Vec<(Subspace, Subspace)>,
    wpart: Option<Subspace>,
}

/// Itemized validation failures; empty means the datum is valid.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LeviReport {
    pub failures: Vec<String>,
}

impl LeviReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// A bijection `κ` from summands to wide pairs, when one exists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LeviCertificate {
    pub holds: bool,
    /// `kappa[i]` is the pair id of `flag_v` matched with summand `i`.
    pub kappa: Vec<usize>,
    pub reason: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Block {
    pub x: Subspace,
    pub y: Subspace,
    pub infinite: bool,
}

/// Blocks over all closed pairs of a couple.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductivePart {
    pub blocks: Vec<Block>,
}

impl ReductivePart {
    pub fn infinite_blocks(&self) -> usize {
        self.blocks.iter().filter(|b| b.infinite).count()
    }
}

impl LeviDatum {
    pub fn new(space: &Space, kind: LieKind, summands: Vec<(Subspace, Subspace)>, wpart: Option<Subspace>) -> Result<Self> {
        match (kind.is_linear(), space.kind()) {
            (true, PairingKind::DualPair) => {}
            (true, _) => return Err(Error::RequiresDualPair),
            (false, PairingKind::SelfdualSymmetric) if kind == LieKind::So => {}
            (false, PairingKind::SelfdualAntisymmetric) if kind == LieKind::Sp => {}
            (false, _) => return Err(Error::InvalidKind(format!("{kind} does not match the pairing symmetry"))),
        }
        if wpart.is_some() && kind.is_linear() {
            return Err(Error::InvalidKind("W summand needs so or sp".into()));
        }
        let right = space.norm(Side::Right);
        for (x, y) in &summands {
            if x.side() != Side::Left || y.side() != right {
                return Err(Error::SideMismatch);
            }
        }
        Ok(LeviDatum { space: space.clone(), kind, summands, wpart })
    }

    pub fn space(&self) -> &Space {
        &self.space
    }

    pub fn kind(&self) -> LieKind {
        self.kind
    }

    pub fn summands(&self) -> &[(Subspace, Subspace)] {
        &self.summands
    }

    pub fn wpart(&self) -> Option<&Subspace> {
        self.wpart.as_ref()
    }

    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    /// Summands rearranged by a permutation of 1-based labels.
    pub fn ordered(&self, order: &[usize]) -> Result<Vec<(Subspace, Subspace)>> {
        let n = self.summands.len();
        let mut seen = vec![false; n];
        if order.len() != n {
            return Err(Error::PreconditionViolation(format!("order must list {n} summands")));
        }
        for &k in order {
            if k == 0 || k > n || seen[k - 1] {
                return Err(Error::PreconditionViolation("order must be a permutation of 1..n".into()));
            }
            seen[k - 1] = true;
        }
        Ok(order.iter().map(|&k| self.summands[k - 1].clone()).collect())
    }

    /// Checks nondegeneracy, cross-orthogonality, `dim X_i >= 2`, and isotropy for so/sp.
    pub fn validate(&self) -> Result<LeviReport> {
        let mut failures = Vec::new();
        for (i, (x, y)) in self.summands.iter().enumerate() {
            let label = i + 1;
            if !Subspace::pairs_nondegenerately(x, y)? {
                failures.push(format!("summand {label}: pairing on X x Y is degenerate"));
            }
            if x.dim().at_most(1) {
                failures.push(format!("summand {label}: dim X < 2"));
            }
            if !self.kind.is_linear() && (!x.is_isotropic()? || !y.is_isotropic()?) {
                failures.push(format!("summand {label}: X and Y must be isotropic"));
            }
            for (j, (x2, y2)) in self.summands.iter().enumerate() {
                if i == j {
                    continue;
                }
                if !y2.perp().includes(x)? {
                    let r = x.frame().threshold.max(y2.frame().threshold) + x.frame().modulus.max(y2.frame().modulus);
                    let witness = first_nonzero_pair(&self.space, &x.sample_elements(r), &y2.sample_elements(r));
                    let w = witness
                        .map(|(a, b)| format!(" (witness {} and {})", a.render(&self.space), b.render(&self.space)))
                        .unwrap_or_default();
                    failures.push(format!("<X_{label}, Y_{}> != 0{w}", j + 1));
                }
                if !self.kind.is_linear() && (!x2.perp().includes(x)? || !y2.perp().includes(y)?) {
                    failures.push(format!("summands {label} and {} are not orthogonal", j + 1));
                }
            }
        }
        if let Some(w) = &self.wpart {
            if !w.intersect(&w.perp())?.is_zero() {
                failures.push("W is degenerate".into());
            }
            for (i, (x, y)) in self.summands.iter().enumerate() {
                if !w.perp().includes(x)? || !w.perp().includes(y)? {
                    failures.push(format!("W is not orthogonal to summand {}", i + 1));
                }
            }
        }
        Ok(LeviReport { failures })
    }

    fn require_valid(&self) -> Result<()> {
        let r = self.validate()?;
        if r.passed() {
            Ok(())
        } else {
            Err(Error::LeviValidation(r.failures.join("; ")))
        }
    }

    /// `⊕ X_i ⊕ (⊕ Y_i)^⊥`.
    pub fn socle(&self) -> Result<Subspace> {
        self.require_valid()?;
        let mut xs = Subspace::zero(&self.space, Side::Left);
        let mut ys = Subspace::zero(&self.space, Side::Right);
        for (x, y) in &self.summands {
            xs = xs.sum(x)?;
            ys = ys.sum(y)?;
        }
        xs.sum(&ys.perp())
    }
}

/// `lo ⊕ x = hi`.
fn splits(lo: &Subspace, x: &Subspace, hi: &Subspace) -> Result<bool> {
    Ok(lo.intersect(x)?.is_zero() && lo.sum(x)? == *hi)
}

/// Finds an injective assignment of summands to candidate pairs by backtracking.
fn assign(options: &[Vec<usize>]) -> Option<Vec<usize>> {
    fn go(k: usize, options: &[Vec<usize>], used: &mut Vec<usize>, out: &mut Vec<usize>) -> bool {
        if k == options.len() {
            return true;
        }
        for &o in &options[k] {
            if !used.contains(&o) {
                used.push(o);
                out.push(o);
                if go(k + 1, options, used, out) {
                    return true;
                }
                used.pop();
                out.pop();
            }
        }
        false
    }
    let mut out = Vec::new();
    go(0, options, &mut Vec::new(), &mut out).then_some(out)
}

fn fail(reason: impl Into<String>) -> LeviCertificate {
    LeviCertificate { holds: false, kappa: Vec::new(), reason: Some(reason.into()) }
}

/// The summands of `l` match the wide pairs of the couple with `F'' = F' ⊕ X_i` and
/// `G'' = G' ⊕ Y_i` on the partner pair.
fn match_summands(couple: &TautCouple, l: &LeviDatum, wide: &[usize]) -> Result<LeviCertificate> {
    if l.len() != wide.len() {
        return Ok(fail(format!("{} summands but {} wide pairs", l.len(), wide.len())));
    }
    let partners = couple.matched_pairs()?;
    let f = &couple.flag_v;
    let g = couple.dual_flag();
    let mut options = Vec::new();
    for (i, (x, y)) in l.summands().iter().enumerate() {
        let mut opts = Vec::new();
        for &gamma in wide {
            let beta = partners.iter().find(|p| p.0 == gamma).map(|p| p.1).expect("wide pairs are closed");
            let (flo, fhi) = f.pair(gamma);
            let (glo, ghi) = g.pair(beta);
            if splits(flo, x, fhi)? && splits(glo, y, ghi)? {
                opts.push(gamma);
            }
        }
        if opts.is_empty() {
            return Ok(fail(format!("summand {} matches no wide pair", i + 1)));
        }
        options.push(opts);
    }
    Ok(match assign(&options) {
        Some(kappa) => LeviCertificate { holds: true, kappa, reason: None },
        None => fail("no bijection between summands and wide pairs"),
    })
}

/// Levi decision for gl/sl.
pub fn is_levi_component(couple: &TautCouple, l: &LeviDatum) -> Result<LeviCertificate> {
    if !l.kind().is_linear() {
        return Err(Error::InvalidKind("is_levi_component needs gl or sl".into()));
    }
    l.require_valid()?;
    let wide = couple.flag_v.pair_index()?.wide;
    match_summands(couple, l, &wide)
}

/// Levi decision for so (`symmetric`) and sp.
fn is_levi_selfdual(flag: &GeneralizedFlag, l: &LeviDatum, kind: LieKind) -> Result<LeviCertificate> {
    if l.kind() != kind {
        return Err(Error::InvalidKind(format!("expected {kind} datum")));
    }
    l.require_valid()?;
    let space = flag.space().clone();
    let couple = TautCouple::selfdual(flag.clone())?;
    let idx = flag.pair_index()?;
    let cert = match_summands(&couple, l, &idx.wide)?;
    if !cert.holds {
        return Ok(cert);
    }
    // F: largest isotropic F''; G: smallest coisotropic F' (the members are nested)
    let mut big_f = Subspace::zero(&space, Side::Left);
    let mut big_g = Subspace::full(&space, Side::Left);
    for a in 1..=flag.pair_count() {
        let (lo, hi) = flag.pair(a);
        if hi.is_isotropic()? {
            big_f = hi.clone();
        }
        if lo.is_coisotropic()? && big_g.includes(lo)? {
            big_g = lo.clone();
        }
    }
    if !big_g.includes(&big_f)? {
        return Ok(fail("isotropic part is not inside the coisotropic part"));
    }
    let w = l.wpart().cloned().unwrap_or_else(|| Subspace::zero(&space, Side::Left));
    let gap = big_g.quotient_dim(&big_f)?;
    if kind == LieKind::So && gap.at_most(2) {
        return Ok(if w.is_zero() { cert } else { fail("so case with dim G/F <= 2 needs W = 0") });
    }
    Ok(if splits(&big_f, &w, &big_g)? { cert } else { fail("G != F ⊕ W") })
}

pub fn is_levi_so(flag: &GeneralizedFlag, l: &LeviDatum) -> Result<LeviCertificate> {
    is_levi_selfdual(flag, l, LieKind::So)
}

pub fn is_levi_sp(flag: &GeneralizedFlag, l: &LeviDatum) -> Result<LeviCertificate> {
    is_levi_selfdual(flag, l, LieKind::Sp)
}

/// Self-taut flags `0 ⊂ U ⊂ U ⊕ W ⊂ V` for a datum with no sl summands.
///
/// `U = (U ⊕ W)^⊥` forces `W^⊥⊥ ∩ W^⊥ ⊆ U ⊆ W^⊥`; every `U` in that interval is tried when
/// the interval has dimension at most 1, and the survivors of the isotropy, splitting,
/// self-tautness and so/sp checks are returned.
pub fn forced_selfdual_flags(l: &LeviDatum) -> Result<Vec<GeneralizedFlag>> {
    if l.kind().is_linear() {
        return Err(Error::InvalidKind("forced flags need an so or sp datum".into()));
    }
    if !l.is_empty() {
        return Err(Error::PreconditionViolation("forced flags need a datum with only the W part".into()));
    }
    let space = l.space().clone();
    let w = l.wpart().cloned().ok_or_else(|| Error::PreconditionViolation("missing W".into()))?;
    let wp = w.perp();
    let lo = w.closure().intersect(&wp)?;
    let candidates = match wp.quotient_dim(&lo)? {
        QuotientDim::Finite(0) => vec![lo],
        QuotientDim::Finite(1) => vec![lo, wp],
        d => return Err(Error::PreconditionViolation(format!("candidate interval has dimension {d}"))),
    };
    let mut out = Vec::new();
    for u in candidates {
        if !u.is_isotropic()? || !u.intersect(&w)?.is_zero() {
            continue;
        }
        let uw = u.sum(&w)?;
        if uw.perp() != u {
            continue;
        }
        let flag = GeneralizedFlag::from_chain(&space, Side::Left, &[u, uw])?;
        if !flag.is_semiclosed() || !is_self_taut(&flag)? {
            continue;
        }
        let cert = is_levi_selfdual(&flag, l, l.kind())?;
        if cert.holds {
            out.push(flag);
        }
    }
    Ok(out)
}

/// Complements `X_γ` of `F'_γ` in `F''_γ` and `Y_γ` of `G'_γ` in `G''_γ` for the given pairs,
/// with `X_γ ⊥ Y_η` for `γ != η`.
///
/// Pairs are processed in flag order. Orthogonality to later `Y` is automatic; `X_γ` is
/// chosen inside the annihilator of all earlier `Y`.
fn blocks_for(couple: &TautCouple, pairs: &[usize]) -> Result<Vec<(Subspace, Subspace)>> {
    let partners = couple.matched_pairs()?;
    let f = &couple.flag_v;
    let g = couple.dual_flag();
    let mut ys: Vec<Subspace> = Vec::new();
    for &gamma in pairs {
        let beta = partners.iter().find(|p| p.0 == gamma).map(|p| p.1).expect("closed pair");
        let (glo, ghi) = g.pair(beta);
        ys.push(glo.complement_in(ghi)?);
    }
    let mut out = Vec::new();
    for (k, &gamma) in pairs.iter().enumerate() {
        let (lo, hi) = f.pair(gamma);
        let mut others = Subspace::zero(f.space(), g.side());
        for (j, y) in ys.iter().enumerate() {
            if j != k {
                others = others.sum(y)?;
            }
        }
        let p = others.perp();
        let x = lo.intersect(&p)?.complement_in(&hi.intersect(&p)?)?;
        if !splits(lo, &x, hi)? {
            return Err(Error::PreconditionViolation(format!("pair {gamma}: no complement orthogonal to the other blocks")));
        }
        out.push((x, ys[k].clone()));
    }
    Ok(out)
}

/// `⊕_{γ ∈ D} sl(X_γ, Y_γ)` with cross-orthogonal complements.
pub fn levi_from_couple(couple: &TautCouple) -> Result<LeviDatum> {
    let space = couple.flag_v.space().clone();
    let wide = couple.flag_v.pair_index()?.wide;
    let summands = blocks_for(couple, &wide)?;
    LeviDatum::new(&space, LieKind::Sl, summands, None)
}

pub fn reductive_part(couple: &TautCouple) -> Result<ReductivePart> {
    let closed = couple.flag_v.pair_index()?.closed;
    let blocks = blocks_for(couple, &closed)?
        .into_iter()
        .map(|(x, y)| {
            let infinite = x.dim() == QuotientDim::Infinite;
            Block { x, y, infinite }
        })
        .collect();
    Ok(ReductivePart { blocks })
}

/// Summand labels (1-based) listed in the order their pairs occur in the flag.
pub fn induced_order(couple: &TautCouple, l: &LeviDatum) -> Result<Vec<usize>> {
    let cert = is_levi_component(couple, l)?;
    if !cert.holds {
        return Err(Error::NotLeviComponent);
    }
    let mut labelled: Vec<(usize, usize)> = cert.kappa.iter().enumerate().map(|(i, &g)| (g, i + 1)).collect();
    labelled.sort_unstable();
    Ok(labelled.into_iter().map(|(_, i)| i).collect())
}
