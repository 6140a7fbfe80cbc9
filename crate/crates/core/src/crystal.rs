//! Kashiwara operators on `T_D`: the bracketing rule and an independent
//! `sl_2`-string computation, plus crystal graphs.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flag_comb::{residue_row, FlagSymbol};
use crate::laurent::quantum_binomial;
use crate::rational::Rational;
use crate::tmodule::{e_on_basis, f_on_basis, Chevalley};

/// The partition of `p^{-1}({i, i+1})` into unpaired positions `J` and
/// bracketed pairs `K_s = {k, l}`, `k < l`, `p(k) = i`, `p(l) = i + 1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BracketingPartition {
    residue: usize,
    lo: i64,
    unpaired: Vec<i64>,
    pairs: Vec<(i64, i64)>,
}

impl BracketingPartition {
    pub fn residue(&self) -> usize {
        self.residue
    }

    /// The value pair `(i, i + 1)` with `i` read in `[1, n]`.
    pub fn values(&self) -> (i64, i64) {
        (self.lo, self.lo + 1)
    }

    /// `J`, increasing.
    pub fn unpaired(&self) -> &[i64] {
        &self.unpaired
    }

    /// Pairs sorted by their smaller element.
    pub fn pairs(&self) -> &[(i64, i64)] {
        &self.pairs
    }

    /// Pairs are `(i, i+1)` with no unpaired position inside, no two adjacent
    /// unpaired positions read `(i, i+1)`, and every `i`, `i+1` position is used.
    /// No two pairs interleave as `k < k' < l < l'`.
    pub fn is_nested(&self) -> bool {
        self.pairs.iter().all(|&(k, l)| {
            self.pairs
                .iter()
                .all(|&(k2, l2)| !(k < k2 && k2 < l && l < l2))
        })
    }

    pub fn is_valid_for(&self, p: &FlagSymbol) -> bool {
        let (lo, hi) = self.values();
        let b = self
            .unpaired
            .windows(2)
            .all(|w| !(p.eval(w[0]) == lo && p.eval(w[1]) == hi));
        let c = self.pairs.iter().all(|&(k, l)| {
            k < l
                && p.eval(k) == lo
                && p.eval(l) == hi
                && !self.unpaired.iter().any(|&j| (k..=l).contains(&j))
        });
        let mut all: Vec<i64> = self.unpaired.clone();
        all.extend(self.pairs.iter().flat_map(|&(k, l)| [k, l]));
        all.sort_unstable();
        let mut expect: Vec<i64> = p.preimage(lo);
        expect.extend(p.preimage(hi));
        expect.sort_unstable();
        b && c && all == expect
    }
}

fn sorted_positions(p: &FlagSymbol, lo: i64) -> Vec<(i64, bool)> {
    let mut pos: Vec<(i64, bool)> = p
        .preimage(lo)
        .into_iter()
        .map(|k| (k, false))
        .chain(p.preimage(lo + 1).into_iter().map(|k| (k, true)))
        .collect();
    pos.sort_unstable();
    pos
}

/// Bracket matching with `i` as an opening and `i + 1` as a closing symbol.
pub fn bracket(p: &FlagSymbol, i: usize) -> Result<BracketingPartition> {
    let lo = residue_row(i, p.n())?;
    if p.n() < 2 {
        return Err(Error::Precondition("bracketing needs n >= 2".into()));
    }
    let mut stack: Vec<i64> = Vec::new();
    let mut unpaired = Vec::new();
    let mut pairs = Vec::new();
    for (k, is_hi) in sorted_positions(p, lo) {
        if is_hi {
            match stack.pop() {
                Some(open) => pairs.push((open, k)),
                None => unpaired.push(k),
            }
        } else {
            stack.push(k);
        }
    }
    unpaired.extend(stack);
    unpaired.sort_unstable();
    pairs.sort_unstable();
    Ok(BracketingPartition {
        residue: i,
        lo,
        unpaired,
        pairs,
    })
}

/// Every partition into unpaired positions and `(i, i+1)` pairs with no
/// adjacent unpaired `(i, i+1)` and no unpaired position inside a pair, by
/// exhaustive search. Pairs may interleave.
pub fn brute_force_brackets(p: &FlagSymbol, i: usize) -> Result<Vec<BracketingPartition>> {
    let lo = residue_row(i, p.n())?;
    let pos = sorted_positions(p, lo);
    let mut found = Vec::new();
    fn rec(
        idx: usize,
        pos: &[(i64, bool)],
        used: &mut Vec<bool>,
        pairs: &mut Vec<(i64, i64)>,
        out: &mut Vec<Vec<(i64, i64)>>,
    ) {
        if idx == pos.len() {
            out.push(pairs.clone());
            return;
        }
        if used[idx] {
            return rec(idx + 1, pos, used, pairs, out);
        }
        // leave unpaired
        rec(idx + 1, pos, used, pairs, out);
        if !pos[idx].1 {
            for m in idx + 1..pos.len() {
                if pos[m].1 && !used[m] {
                    used[m] = true;
                    pairs.push((pos[idx].0, pos[m].0));
                    rec(idx + 1, pos, used, pairs, out);
                    pairs.pop();
                    used[m] = false;
                }
            }
        }
    }
    let mut matchings = Vec::new();
    rec(0, &pos, &mut vec![false; pos.len()], &mut Vec::new(), &mut matchings);
    for mut pairs in matchings {
        let paired: BTreeSet<i64> = pairs.iter().flat_map(|&(k, l)| [k, l]).collect();
        let unpaired: Vec<i64> = pos
            .iter()
            .map(|&(k, _)| k)
            .filter(|k| !paired.contains(k))
            .collect();
        pairs.sort_unstable();
        let cand = BracketingPartition {
            residue: i,
            lo,
            unpaired,
            pairs,
        };
        if cand.is_valid_for(p) {
            found.push(cand);
        }
    }
    Ok(found)
}

fn set_value(p: &FlagSymbol, k: i64, value: i64) -> FlagSymbol {
    p.shift_value(k, value - p.eval(k))
}

/// The chain `p_0, ..., p_{#J}`: `p_l` carries `i + 1` on the first `l`
/// positions of `J` and `i` on the rest.
pub fn chain(p: &FlagSymbol, i: usize) -> Result<Vec<FlagSymbol>> {
    let br = bracket(p, i)?;
    let (lo, hi) = br.values();
    let j = br.unpaired();
    Ok((0..=j.len())
        .map(|l| {
            j.iter().enumerate().fold(p.clone(), |q, (x, &k)| {
                set_value(&q, k, if x < l { hi } else { lo })
            })
        })
        .collect())
}

/// `f~_i` by the bracketing rule: the leftmost unpaired `i` becomes `i + 1`.
pub fn kashiwara_f(p: &FlagSymbol, i: usize) -> Result<Option<FlagSymbol>> {
    let br = bracket(p, i)?;
    let (lo, hi) = br.values();
    Ok(br
        .unpaired()
        .iter()
        .find(|&&k| p.eval(k) == lo)
        .map(|&k| set_value(p, k, hi)))
}

/// `e~_i` by the bracketing rule: the rightmost unpaired `i + 1` becomes `i`.
pub fn kashiwara_e(p: &FlagSymbol, i: usize) -> Result<Option<FlagSymbol>> {
    let br = bracket(p, i)?;
    let (lo, hi) = br.values();
    Ok(br
        .unpaired()
        .iter()
        .rev()
        .find(|&&k| p.eval(k) == hi)
        .map(|&k| set_value(p, k, lo)))
}

pub fn kashiwara(p: &FlagSymbol, i: usize, which: Chevalley) -> Result<Option<FlagSymbol>> {
    match which {
        Chevalley::E => kashiwara_e(p, i),
        Chevalley::F => kashiwara_f(p, i),
    }
}

/// `epsilon_i` and `phi_i` from the bracketing.
pub fn string_position(p: &FlagSymbol, i: usize) -> Result<(usize, usize)> {
    let br = bracket(p, i)?;
    let (lo, hi) = br.values();
    let e = br.unpaired().iter().filter(|&&k| p.eval(k) == hi).count();
    let f = br.unpaired().iter().filter(|&&k| p.eval(k) == lo).count();
    Ok((e, f))
}

type RVec = BTreeMap<FlagSymbol, Rational>;

fn radd(acc: &mut RVec, p: FlagSymbol, c: &Rational) {
    if c.is_zero() {
        return;
    }
    let slot = acc.entry(p.clone()).or_insert_with(Rational::zero);
    *slot = &*slot + c;
    if slot.is_zero() {
        acc.remove(&p);
    }
}

fn rapply(x: &RVec, which: Chevalley, i: usize) -> Result<RVec> {
    let mut out = RVec::new();
    for (p, c) in x {
        let img = match which {
            Chevalley::E => e_on_basis(p, i)?,
            Chevalley::F => f_on_basis(p, i)?,
        };
        for (q, a) in img.terms() {
            radd(&mut out, q.clone(), &(c * &Rational::from(a.clone())));
        }
    }
    Ok(out)
}

fn rdivided(x: &RVec, which: Chevalley, i: usize, k: usize) -> Result<RVec> {
    let mut y = x.clone();
    for _ in 0..k {
        y = rapply(&y, which, i)?;
    }
    let fact = Rational::from(crate::laurent::quantum_factorial(k as i64)?);
    Ok(y.into_iter()
        .map(|(p, c)| (p, (&c / &fact).expect("nonzero factorial")))
        .collect())
}

fn rscale(x: &RVec, c: &Rational) -> RVec {
    x.iter()
        .map(|(p, a)| (p.clone(), a * c))
        .filter(|(_, a)| !a.is_zero())
        .collect()
}

fn rsub(x: &RVec, y: &RVec) -> RVec {
    let mut out = x.clone();
    for (p, c) in y {
        radd(&mut out, p.clone(), &(-c));
    }
    out
}

/// `h`-eigenvalue of `[p]` for the `i`-th `sl_2`: `#i - #(i+1)`.
fn h_value(p: &FlagSymbol, i: usize) -> Result<i64> {
    let lo = residue_row(i, p.n())?;
    Ok(p.preimage(lo).len() as i64 - p.preimage(lo + 1).len() as i64)
}

/// Decomposes `[p] = sum_k f_i^{(k)} u_k` with `e_i u_k = 0`; returns the
/// pairs `(k, u_k)`.
pub fn string_decomposition(p: &FlagSymbol, i: usize) -> Result<Vec<(usize, RVec)>> {
    let h = h_value(p, i)?;
    let mut x: RVec = BTreeMap::from([(p.clone(), Rational::one())]);
    let mut parts = Vec::new();
    loop {
        if x.is_empty() {
            break;
        }
        // the top k with e^{(k)} x != 0
        let mut top = 0;
        let mut cur = x.clone();
        loop {
            let next = rapply(&cur, Chevalley::E, i)?;
            if next.is_empty() {
                break;
            }
            cur = next;
            top += 1;
        }
        let ek = rdivided(&x, Chevalley::E, i, top)?;
        // e^{(K)} f^{(K)} u = [N choose K] u for highest weight u with h = N
        let big_n = h + 2 * top as i64;
        let binom = Rational::from(quantum_binomial(big_n, top as i64));
        if binom.is_zero() {
            return Err(Error::Internal(format!("degenerate string at {p}, i={i}")));
        }
        let u = rscale(&ek, &binom.inv()?);
        if !rapply(&u, Chevalley::E, i)?.is_empty() {
            return Err(Error::Internal(format!("component of {p} is not highest weight")));
        }
        let back = rdivided(&u, Chevalley::F, i, top)?;
        x = rsub(&x, &back);
        parts.push((top, u));
        if parts.len() > 64 {
            return Err(Error::Internal(format!("string decomposition of {p} does not terminate")));
        }
    }
    Ok(parts)
}

/// `e~_i` or `f~_i` via the string decomposition, reduced modulo `v`.
pub fn kashiwara_oracle(p: &FlagSymbol, i: usize, which: Chevalley) -> Result<Option<FlagSymbol>> {
    let parts = string_decomposition(p, i)?;
    let mut y = RVec::new();
    for (k, u) in parts {
        let term = match which {
            Chevalley::F => rdivided(&u, Chevalley::F, i, k + 1)?,
            Chevalley::E if k == 0 => continue,
            Chevalley::E => rdivided(&u, Chevalley::F, i, k - 1)?,
        };
        for (q, c) in term {
            radd(&mut y, q, &c);
        }
    }
    let mut hit = None;
    for (q, c) in &y {
        let (num, den) = c
            .value_at_zero()
            .ok_or_else(|| Error::Internal(format!("image of {p} leaves the lattice at {q}")))?;
        if num.is_zero() {
            continue;
        }
        if num != den || hit.is_some() {
            return Err(Error::Internal(format!(
                "image of {p} is not a crystal element mod v (coefficient {c} at {q})"
            )));
        }
        hit = Some(q.clone());
    }
    Ok(hit)
}

/// True when every coefficient of the oracle image is regular at `v = 0`.
pub fn oracle_preserves_lattice(p: &FlagSymbol, i: usize, which: Chevalley) -> Result<bool> {
    Ok(kashiwara_oracle(p, i, which).is_ok())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrystalEdge {
    pub source: FlagSymbol,
    pub target: FlagSymbol,
    pub residue: usize,
    /// False when the target lies outside the enumeration window.
    pub inside: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrystalGraph {
    pub n: usize,
    #[serde(rename = "D")]
    pub d: usize,
    pub vertices: Vec<FlagSymbol>,
    pub edges: Vec<CrystalEdge>,
}

/// Vertices: symbols with window values in `[lo, hi]`, optionally of one
/// weight; edges `b -> f~_i b`.
pub fn crystal_graph(
    n: usize,
    d: usize,
    lo: i64,
    hi: i64,
    weight: Option<&[usize]>,
) -> Result<CrystalGraph> {
    let vertices: Vec<FlagSymbol> = FlagSymbol::enumerate(n, d, lo, hi)
        .into_iter()
        .filter(|p| weight.is_none_or(|w| p.weight() == w))
        .collect();
    let set: BTreeSet<&FlagSymbol> = vertices.iter().collect();
    let mut edges = Vec::new();
    for p in &vertices {
        for i in 0..n {
            if let Some(q) = kashiwara_f(p, i)? {
                let inside = set.contains(&q);
                edges.push(CrystalEdge {
                    source: p.clone(),
                    target: q,
                    residue: i,
                    inside,
                });
            }
        }
    }
    Ok(CrystalGraph {
        n,
        d,
        vertices,
        edges,
    })
}

impl CrystalGraph {
    pub fn to_dot(&self) -> String {
        let label = |p: &FlagSymbol| {
            let v: Vec<String> = p.values().iter().map(|x| x.to_string()).collect();
            format!("\"({})\"", v.join(","))
        };
        let mut s = String::from("digraph crystal {\n");
        for p in &self.vertices {
            let _ = writeln!(s, "  {};", label(p));
        }
        for e in &self.edges {
            let style = if e.inside { "" } else { ", style=dashed" };
            let _ = writeln!(
                s,
                "  {} -> {} [label=\"{}\"{}];",
                label(&e.source),
                label(&e.target),
                e.residue,
                style
            );
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tmodule::ModuleVector;

    fn fs(n: usize, v: &[i64]) -> FlagSymbol {
        FlagSymbol::new(n, v.to_vec()).unwrap()
    }

    #[test]
    fn bracket_examples() {
        let br = bracket(&fs(3, &[3, 6]), 1).unwrap();
        assert!(br.unpaired().is_empty() && br.pairs().is_empty());
        let br = bracket(&fs(2, &[3, 4]), 1).unwrap();
        assert_eq!(br.pairs(), &[(-1, 0)]);
        let br = bracket(&fs(2, &[1, 2]), 1).unwrap();
        assert_eq!(br.pairs(), &[(1, 2)]);
        assert!(br.unpaired().is_empty());
        let br = bracket(&fs(2, &[2, 1]), 1).unwrap();
        assert_eq!(br.unpaired(), &[1, 2]);
        assert!(br.pairs().is_empty());
        assert!(bracket(&fs(2, &[2, 1]), 2).is_err());
    }

    #[test]
    fn kashiwara_examples() {
        let p = fs(2, &[1, 1]);
        assert_eq!(kashiwara_f(&p, 1).unwrap(), Some(fs(2, &[2, 1])));
        assert_eq!(kashiwara_e(&p, 1).unwrap(), None);
        assert_eq!(kashiwara_oracle(&p, 1, Chevalley::F).unwrap(), Some(fs(2, &[2, 1])));
        assert_eq!(kashiwara_oracle(&p, 1, Chevalley::E).unwrap(), None);
    }

    #[test]
    fn rule_matches_oracle_small() {
        for n in 2..=3 {
            for d in 1..=3 {
                for p in FlagSymbol::enumerate(n, d, 0, n as i64 + 1) {
                    for i in 0..n {
                        for which in [Chevalley::E, Chevalley::F] {
                            assert_eq!(
                                kashiwara(&p, i, which).unwrap(),
                                kashiwara_oracle(&p, i, which).unwrap(),
                                "{p} i={i} {which:?}"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bracket_is_unique() {
        for n in 2..=3 {
            for p in FlagSymbol::enumerate(n, 3, 0, n as i64 + 1) {
                for i in 0..n {
                    let all = brute_force_brackets(&p, i).unwrap();
                    assert_eq!(all, vec![bracket(&p, i).unwrap()], "{p} i={i}");
                }
            }
        }
    }

    #[test]
    fn interleaved_pairs_are_also_valid() {
        // positions 1, 2 carry 2 and 7, 8 carry 3: both matchings qualify
        let p = fs(2, &[2, 2, 1, 1]);
        let all = brute_force_brackets(&p, 0).unwrap();
        assert_eq!(all.len(), 2);
        assert!(all.iter().all(|b| b.unpaired().is_empty()));
        let nested: Vec<_> = all.iter().filter(|b| b.is_nested()).collect();
        assert_eq!(nested, vec![&bracket(&p, 0).unwrap()]);
        assert_eq!(bracket(&p, 0).unwrap().pairs(), &[(1, 8), (2, 7)]);
    }

    #[test]
    fn string_relations_on_chains() {
        use crate::laurent::quantum_integer;
        for n in 2..=3 {
            for p in FlagSymbol::enumerate(n, 3, 1, n as i64) {
                for i in 0..n {
                    let ch = chain(&p, i).unwrap();
                    let jn = ch.len() as i64 - 1;
                    let angles: Vec<ModuleVector> = ch
                        .iter()
                        .map(|q| ModuleVector::angle_vector(q, i).unwrap())
                        .collect();
                    for (l, a) in angles.iter().enumerate() {
                        let e = a.apply_e(i).unwrap();
                        let expect_e = if l == 0 {
                            ModuleVector::zero(n, 3)
                        } else {
                            angles[l - 1].scale(&quantum_integer(jn - l as i64 + 1))
                        };
                        assert_eq!(e, expect_e, "{p} i={i} l={l}");
                        let f = a.apply_f(i).unwrap();
                        let expect_f = if l as i64 == jn {
                            ModuleVector::zero(n, 3)
                        } else {
                            angles[l + 1].scale(&quantum_integer(l as i64 + 1))
                        };
                        assert_eq!(f, expect_f, "{p} i={i} l={l}");
                    }
                }
            }
        }
    }

    #[test]
    fn graph_export() {
        let g = crystal_graph(2, 1, 1, 4, None).unwrap();
        assert_eq!(g.vertices.len(), 4);
        // (1) -> (2) by f_1, (2) -> (3) by f_0, ..., (4) -> (5) leaves
        assert_eq!(g.edges.len(), 4);
        assert_eq!(g.edges.iter().filter(|e| !e.inside).count(), 1);
        let dot = g.to_dot();
        assert!(dot.starts_with("digraph crystal {"));
        assert!(dot.contains("\"(1)\" -> \"(2)\" [label=\"1\"]"));
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(serde_json::from_str::<CrystalGraph>(&json).unwrap(), g);
    }
}
