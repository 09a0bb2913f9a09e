//! Canonical generating sets: finitely many vectors plus periodic tail families.

use num_traits::{One, Zero};

use super::{Layout, Subspace, TailFamily};
use crate::kernel::{fmt_scalar, LinSpace, Matrix, Scalar};
use crate::pattern::IndexPattern;
use crate::space::{Basis, SpaceSpec, Vector};

pub type Family = TailFamily;

/// A generating set whose span is exactly the subspace it came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generators {
    pub vectors: Vec<Vector>,
    pub families: Vec<TailFamily>,
}

impl Generators {
    pub fn render(&self, space: &SpaceSpec) -> String {
        let mut parts: Vec<String> = self.vectors.iter().map(|v| v.render(space)).collect();
        parts.extend(self.families.iter().map(|f| render_family(space, f)));
        if parts.is_empty() {
            "0".into()
        } else {
            format!("span{{{}}}", parts.join(", "))
        }
    }
}

fn coeff_prefix(c: &Scalar, first: bool) -> String {
    let neg = c < &Scalar::zero();
    let mag = if neg { -c.clone() } else { c.clone() };
    let sign = match (first, neg) {
        (true, true) => "-".to_string(),
        (true, false) => String::new(),
        (false, true) => " - ".to_string(),
        (false, false) => " + ".to_string(),
    };
    if mag.is_one() {
        sign
    } else {
        format!("{sign}{}*", fmt_scalar(&mag))
    }
}

/// `(residues, modulus, from)` with `pattern = {i >= from : i mod modulus in residues}`.
pub fn positive_tail_form(p: &IndexPattern) -> Option<(Vec<u64>, u64, i64)> {
    if !p.residues_neg().is_empty() || !p.is_infinite() {
        return None;
    }
    let res: Vec<i64> = p.residues_pos().iter().map(|&r| r as i64).collect();
    let u = p.universe();
    let base = IndexPattern::residues(u, p.modulus(), &res).ok()?;
    let form = |t: i64| base.intersect(&IndexPattern::at_least(u, t)).ok();
    let mut t = p.threshold() as i64 + 1;
    if form(t).as_ref() != Some(p) {
        return None;
    }
    while t > 1 && form(t - 1).as_ref() == Some(p) {
        t -= 1;
    }
    Some((p.residues_pos().iter().copied().collect(), p.modulus(), t))
}

pub fn render_pattern(p: &IndexPattern) -> String {
    match positive_tail_form(p) {
        Some((res, m, t)) => {
            let r: Vec<String> = res.iter().map(|r| r.to_string()).collect();
            let r = if r.len() == 1 { r[0].clone() } else { format!("{{{}}}", r.join(",")) };
            format!("{r} mod {m} from {t}")
        }
        None => p.to_string(),
    }
}

fn render_family(space: &SpaceSpec, f: &TailFamily) -> String {
    let side = f.anchor.side();
    let name = space.name(side);
    let mut s = String::new();
    if !f.lead.is_zero() {
        s.push_str(&coeff_prefix(&f.lead, true));
        s.push_str(&format!("{name}[i]"));
    }
    if !f.mirror.is_zero() {
        s.push_str(&coeff_prefix(&f.mirror, s.is_empty()));
        s.push_str(&format!("{name}[-i]"));
    }
    if !f.anchor.is_zero() {
        let a = f.anchor.render(space);
        match a.strip_prefix('-') {
            Some(rest) => s.push_str(&format!(" - {rest}")),
            None => s.push_str(&format!(" + {a}")),
        }
    }
    format!("{s} for i in {}", render_pattern(&f.pattern))
}

/// Merges families differing only in their pattern.
fn merge(families: Vec<TailFamily>) -> Vec<TailFamily> {
    let mut out: Vec<TailFamily> = Vec::new();
    for f in families {
        match out.iter_mut().find(|g| g.anchor == f.anchor && g.lead == f.lead && g.mirror == f.mirror) {
            Some(g) => g.pattern = g.pattern.union(&f.pattern).expect("same universe"),
            None => out.push(f),
        }
    }
    out
}

/// Positive positions `p = block mod M` with `p >= from`.
fn block_pattern(space: &SpaceSpec, modulus: u64, block: usize, from: u64) -> IndexPattern {
    let u = space.universe();
    let res = IndexPattern::residues(u, modulus, &[block as i64]).expect("positive modulus");
    res.intersect(&IndexPattern::at_least(u, from as i64)).expect("same universe")
}

impl Subspace {
    /// Canonical generators in the coarsest frame: RREF rows of `Q` with block columns
    /// first, then extra difference families for tail directions no pivot row reaches.
    pub fn generators(&self) -> Generators {
        let s = self.coarsest();
        let lay = s.layout();
        let wd = lay.window_dim();
        let dim = lay.dim();
        // Column order: block coordinates, then window coordinates.
        let order: Vec<usize> = (wd..dim).chain(0..wd).collect();
        let rows: Vec<Vec<Scalar>> =
            s.q.basis().iter().map(|z| order.iter().map(|&k| z[k].clone()).collect()).collect();
        let (_, ech, pivots) = Matrix::from_rows(dim, rows).rref();
        let mut vectors = Vec::new();
        let mut families = Vec::new();
        let mut extras = Vec::new();
        let mut reached: Vec<Vec<Vec<Scalar>>> = vec![Vec::new(); lay.blocks()];
        for (row, &pc) in ech.row_vecs().iter().zip(&pivots) {
            let mut z = vec![Scalar::zero(); dim];
            for (c, &k) in order.iter().enumerate() {
                z[k] = row[c].clone();
            }
            let first = |b: usize| s.frame.first_position(b);
            if pc >= dim - wd {
                vectors.push(s.lift(&lay, &z, first));
                continue;
            }
            let block = pc / lay.slots;
            let ell: Vec<Scalar> = (0..lay.slots).map(|t| z[lay.block_coord(block, t)].clone()).collect();
            let mut anchor_z = z.clone();
            for t in 0..lay.slots {
                anchor_z[lay.block_coord(block, t)] = Scalar::zero();
            }
            let anchor = s.lift(&lay, &anchor_z, first);
            families.push(TailFamily {
                pattern: block_pattern(&s.space, s.frame.modulus, block, s.frame.threshold + 1),
                anchor,
                lead: ell[0].clone(),
                mirror: ell.get(1).cloned().unwrap_or_else(Scalar::zero),
            });
            reached[block].push(ell);
        }
        for (block, l) in s.l.iter().enumerate() {
            let got = LinSpace::from_vectors(lay.slots, reached[block].clone());
            let p = s.frame.first_position(block);
            for ell in got.complement_in(l) {
                let mut anchor = crate::space::Vector::zero(s.side);
                for (t, c) in ell.iter().enumerate() {
                    anchor.add_term(Basis::Regular(Layout::tail_index(p, t)), -c.clone());
                }
                extras.push(TailFamily {
                    pattern: block_pattern(&s.space, s.frame.modulus, block, p + s.frame.modulus),
                    anchor,
                    lead: ell[0].clone(),
                    mirror: ell.get(1).cloned().unwrap_or_else(Scalar::zero),
                });
            }
        }
        let mut families = merge(families);
        families.extend(merge(extras));
        Generators { vectors, families }
    }
}
