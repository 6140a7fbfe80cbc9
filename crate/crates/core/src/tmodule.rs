//! The module `T_D = (+)_lambda T_lambda H_D` in the basis `[p] = v^{x_p} T_p`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::crystal::bracket;
use crate::error::{Error, Result};
use crate::flag_comb::{residue_row, FlagSymbol};
use crate::hecke::{q, HeckeElement};
use crate::laurent::{quantum_factorial, quantum_integer, Laurent};

#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "VectorRepr", into = "VectorRepr")]
pub struct ModuleVector {
    n: usize,
    d: usize,
    terms: BTreeMap<FlagSymbol, Laurent>,
}

#[derive(Serialize, Deserialize)]
struct TermRepr {
    p: Vec<i64>,
    coeff: Laurent,
}

#[derive(Serialize, Deserialize)]
struct VectorRepr {
    n: usize,
    #[serde(rename = "D")]
    d: usize,
    terms: Vec<TermRepr>,
}

impl TryFrom<VectorRepr> for ModuleVector {
    type Error = Error;
    fn try_from(r: VectorRepr) -> Result<Self> {
        let mut x = ModuleVector::zero(r.n, r.d);
        for t in r.terms {
            if t.p.len() != r.d {
                return Err(Error::RankMismatch(r.d, t.p.len()));
            }
            x.add_term(FlagSymbol::new(r.n, t.p)?, &t.coeff);
        }
        Ok(x)
    }
}

impl From<ModuleVector> for VectorRepr {
    fn from(x: ModuleVector) -> Self {
        VectorRepr {
            n: x.n,
            d: x.d,
            terms: x
                .terms
                .into_iter()
                .map(|(p, coeff)| TermRepr {
                    p: p.values().to_vec(),
                    coeff,
                })
                .collect(),
        }
    }
}

/// Which Chevalley generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Chevalley {
    E,
    F,
}

impl ModuleVector {
    pub fn zero(n: usize, d: usize) -> Self {
        Self {
            n,
            d,
            terms: BTreeMap::new(),
        }
    }

    /// `[p]`.
    pub fn basis(p: FlagSymbol) -> Self {
        Self {
            n: p.n(),
            d: p.rank(),
            terms: BTreeMap::from([(p, Laurent::one())]),
        }
    }

    pub fn from_terms(
        n: usize,
        d: usize,
        terms: impl IntoIterator<Item = (FlagSymbol, Laurent)>,
    ) -> Result<Self> {
        let mut x = Self::zero(n, d);
        for (p, c) in terms {
            if p.n() != n || p.rank() != d {
                return Err(Error::ShapeMismatch(n, d, p.n(), p.rank()));
            }
            x.add_term(p, &c);
        }
        Ok(x)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&FlagSymbol, &Laurent)> {
        self.terms.iter()
    }

    pub fn coeff(&self, p: &FlagSymbol) -> Laurent {
        self.terms.get(p).cloned().unwrap_or_default()
    }

    pub fn support(&self) -> impl Iterator<Item = &FlagSymbol> {
        self.terms.keys()
    }

    pub fn add_term(&mut self, p: FlagSymbol, c: &Laurent) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(p) {
            Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn scale(&self, c: &Laurent) -> Self {
        if c.is_zero() {
            return Self::zero(self.n, self.d);
        }
        Self {
            n: self.n,
            d: self.d,
            terms: self.terms.iter().map(|(p, x)| (p.clone(), x * c)).collect(),
        }
    }

    /// Applies `v -> v^{-1}` to the coefficients only.
    pub fn bar_coefficients(&self) -> Self {
        Self {
            n: self.n,
            d: self.d,
            terms: self.terms.iter().map(|(p, x)| (p.clone(), x.bar())).collect(),
        }
    }

    /// Every coefficient lies in `Z[v]`.
    pub fn in_lattice(&self) -> bool {
        self.terms.values().all(Laurent::in_zv)
    }

    /// Coefficients at `v = 0` of a lattice vector.
    pub fn reduce_mod_v(&self) -> BTreeMap<FlagSymbol, num_bigint::BigInt> {
        self.terms
            .iter()
            .map(|(p, c)| (p.clone(), c.constant_term()))
            .filter(|(_, c)| *c != num_bigint::BigInt::from(0))
            .collect()
    }

    /// The component of weight `mu`.
    pub fn apply_idempotent(&self, mu: &[usize]) -> Self {
        Self {
            n: self.n,
            d: self.d,
            terms: self
                .terms
                .iter()
                .filter(|(p, _)| p.weight() == mu)
                .map(|(p, c)| (p.clone(), c.clone()))
                .collect(),
        }
    }

    pub fn weights(&self) -> Vec<Vec<usize>> {
        let mut w: Vec<Vec<usize>> = self.terms.keys().map(FlagSymbol::weight).collect();
        w.sort();
        w.dedup();
        w
    }

    pub fn map_basis(&self, f: impl Fn(&FlagSymbol) -> Result<ModuleVector>) -> Result<Self> {
        let mut out = Self::zero(self.n, self.d);
        for (p, c) in &self.terms {
            out.accumulate(&f(p)?, c);
        }
        Ok(out)
    }

    /// `self += c * other`.
    pub fn accumulate(&mut self, other: &ModuleVector, c: &Laurent) {
        for (p, x) in &other.terms {
            self.add_term(p.clone(), &(x * c));
        }
    }

    pub fn apply_e(&self, i: usize) -> Result<Self> {
        self.map_basis(|p| e_on_basis(p, i))
    }

    pub fn apply_f(&self, i: usize) -> Result<Self> {
        self.map_basis(|p| f_on_basis(p, i))
    }

    pub fn apply(&self, which: Chevalley, i: usize) -> Result<Self> {
        match which {
            Chevalley::E => self.apply_e(i),
            Chevalley::F => self.apply_f(i),
        }
    }

    /// `e_i^{(k)}` or `f_i^{(k)}`.
    pub fn apply_divided(&self, which: Chevalley, i: usize, k: u32) -> Result<Self> {
        let mut x = self.clone();
        for _ in 0..k {
            x = x.apply(which, i)?;
        }
        let fact = quantum_factorial(k as i64)?;
        let mut out = Self::zero(self.n, self.d);
        for (p, c) in &x.terms {
            out.add_term(p.clone(), &c.divide_exact(&fact)?);
        }
        Ok(out)
    }

    /// `x T_{s_i}` by the combinatorial rule.
    pub fn right_simple(&self, i: usize) -> Self {
        self.map_basis(|p| Ok(right_simple_on_basis(p, i)))
            .expect("infallible")
    }

    /// `x T_{s_i}^{-1} = v^2 x T_{s_i} + (v^2 - 1) x`.
    pub fn right_simple_inverse(&self, i: usize) -> Self {
        let v2 = Laurent::v_pow(2);
        let mut out = self.right_simple(i).scale(&v2);
        out.accumulate(self, &(&v2 - &Laurent::one()));
        out
    }

    /// `x T_rho^k`.
    pub fn right_rotation(&self, k: i64) -> Self {
        Self {
            n: self.n,
            d: self.d,
            terms: self
                .terms
                .iter()
                .map(|(p, c)| {
                    let r = p.mul_rotation(k);
                    let e = p.x_stat() as i32 - r.x_stat() as i32;
                    (r, c * &Laurent::v_pow(-e))
                })
                .collect(),
        }
    }

    /// `x T_w` using the combinatorial rule letter by letter.
    pub fn right_basis(&self, w: &crate::AffinePermutation) -> Self {
        let (k, word) = w.reduced_word();
        word.iter()
            .fold(self.right_rotation(k), |x, &i| x.right_simple(i))
    }

    /// `x h` by expanding each `T_p` in the `T_w` basis, multiplying in
    /// `H_D` and collapsing back onto coset sums.
    pub fn right_hecke(&self, h: &HeckeElement) -> Result<Self> {
        if h.rank() != self.d {
            return Err(Error::RankMismatch(self.d, h.rank()));
        }
        let mut out = Self::zero(self.n, self.d);
        for (lambda, part) in self.to_hecke()? {
            let prod = part.mul(h)?;
            out = &out + &Self::collapse(&lambda, &prod)?;
        }
        Ok(out)
    }

    /// `x h` through the combinatorial rule.
    pub fn right_hecke_fast(&self, h: &HeckeElement) -> Result<Self> {
        if h.rank() != self.d {
            return Err(Error::RankMismatch(self.d, h.rank()));
        }
        let mut out = Self::zero(self.n, self.d);
        for (w, c) in h.terms() {
            out.accumulate(&self.right_basis(w), c);
        }
        Ok(out)
    }

    /// Splits into dominant components and expands in the `T_w` basis.
    pub fn to_hecke(&self) -> Result<BTreeMap<FlagSymbol, HeckeElement>> {
        let mut out: BTreeMap<FlagSymbol, HeckeElement> = BTreeMap::new();
        for (p, c) in &self.terms {
            let lambda = p.dominant();
            let tp = HeckeElement::coset_sum(&lambda, p)?;
            let scaled = tp.scale(&(c * &Laurent::v_pow(p.x_stat() as i32)));
            let slot = out
                .entry(lambda)
                .or_insert_with(|| HeckeElement::zero(self.d));
            *slot = &*slot + &scaled;
        }
        Ok(out)
    }

    /// Reads an element of `T_lambda H_D` back as a combination of `[p]`.
    pub fn collapse(lambda: &FlagSymbol, h: &HeckeElement) -> Result<Self> {
        let mut seen: BTreeMap<FlagSymbol, Laurent> = BTreeMap::new();
        let mut counts: BTreeMap<FlagSymbol, usize> = BTreeMap::new();
        for (w, c) in h.terms() {
            let p = w.act_on_flag_symbol(lambda)?;
            match seen.get(&p) {
                Some(prev) if prev != c => {
                    return Err(Error::Collapse(format!("unequal coefficients on the coset of {p}")))
                }
                _ => {
                    seen.insert(p.clone(), c.clone());
                    *counts.entry(p).or_insert(0) += 1;
                }
            }
        }
        let order = crate::YoungSubgroup::of(lambda)?.order();
        let mut out = Self::zero(lambda.n(), lambda.rank());
        for (p, c) in seen {
            if counts[&p] != order {
                return Err(Error::Collapse(format!("coset of {p} is incomplete")));
            }
            let e = p.x_stat() as i32;
            out.add_term(p, &(&c * &Laurent::v_pow(-e)));
        }
        Ok(out)
    }

    /// The antilinear involution with `tau([p]) = bar([p])`.
    pub fn tau(&self) -> Self {
        let mut out = Self::zero(self.n, self.d);
        for (p, c) in &self.terms {
            out.accumulate(&tau_basis(p), &c.bar());
        }
        out
    }

    /// `(e_i f_i - f_i e_i)` on `[p]`, when it equals `[m] [p]`; returns `m`.
    pub fn commutator_argument(p: &FlagSymbol, i: usize) -> Result<Option<i64>> {
        let x = Self::basis(p.clone());
        let ef = x.apply_f(i)?.apply_e(i)?;
        let fe = x.apply_e(i)?.apply_f(i)?;
        let c = &ef - &fe;
        if c.is_zero() {
            return Ok(Some(0));
        }
        if c.len() != 1 || c.terms.keys().next() != Some(p) {
            return Ok(None);
        }
        let s = c.coeff(p);
        let Some(top) = s.max_degree() else {
            return Ok(Some(0));
        };
        // [m] has top degree m - 1 and leading coefficient sign(m)
        let m = if s.coeff(top) > num_bigint::BigInt::from(0) {
            top as i64 + 1
        } else {
            -(top as i64 + 1)
        };
        Ok((quantum_integer(m) == s).then_some(m))
    }

    /// `<p>` for residue `i`.
    pub fn angle_vector(p: &FlagSymbol, i: usize) -> Result<Self> {
        let br = bracket(p, i)?;
        let (lo, hi) = br.values();
        let j = br.unpaired();
        let target = j.iter().filter(|&&k| p.eval(k) == hi).count();
        let mut out = Self::zero(p.n(), p.rank());
        let t = br.pairs().len();
        for a_mask in 0u64..(1 << j.len()) {
            if a_mask.count_ones() as usize != target {
                continue;
            }
            let in_a = |idx: usize| a_mask >> idx & 1 == 1;
            let mut n_a = 0i32;
            for (x, _) in j.iter().enumerate().filter(|&(x, _)| in_a(x)) {
                n_a += (0..x).filter(|&y| !in_a(y)).count() as i32;
            }
            for b_mask in 0u64..(1 << t) {
                let mut q = p.clone();
                for (x, &k) in j.iter().enumerate() {
                    q = set_value(&q, k, if in_a(x) { hi } else { lo });
                }
                for (s, &(k, l)) in br.pairs().iter().enumerate() {
                    let flip = b_mask >> s & 1 == 1;
                    q = set_value(&q, k, if flip { hi } else { lo });
                    q = set_value(&q, l, if flip { lo } else { hi });
                }
                let nb = b_mask.count_ones() as i32;
                let sign = if nb % 2 == 0 { 1 } else { -1 };
                out.add_term(q, &Laurent::monomial(sign, n_a + nb));
            }
        }
        Ok(out)
    }
}

/// `p` with `p(k) = value`, adjusting the window periodically.
fn set_value(p: &FlagSymbol, k: i64, value: i64) -> FlagSymbol {
    let cur = p.eval(k);
    p.shift_value(k, value - cur)
}

fn pair_values(p: &FlagSymbol, i: usize) -> Result<(i64, i64)> {
    let r = residue_row(i, p.n())?;
    Ok((r, r + 1))
}

/// `e_i [p]`.
pub fn e_on_basis(p: &FlagSymbol, i: usize) -> Result<ModuleVector> {
    let (lo, hi) = pair_values(p, i)?;
    let up = p.preimage(hi);
    let down = p.preimage(lo);
    let mut out = ModuleVector::zero(p.n(), p.rank());
    for &k in &up {
        let e = up.iter().filter(|&&l| l > k).count() as i32
            - down.iter().filter(|&&l| l > k).count() as i32;
        out.add_term(p.shift_value(k, -1), &Laurent::v_pow(e));
    }
    Ok(out)
}

/// `f_i [p]`.
pub fn f_on_basis(p: &FlagSymbol, i: usize) -> Result<ModuleVector> {
    let (lo, hi) = pair_values(p, i)?;
    let up = p.preimage(hi);
    let down = p.preimage(lo);
    let mut out = ModuleVector::zero(p.n(), p.rank());
    for &k in &down {
        let e = down.iter().filter(|&&l| l < k).count() as i32
            - up.iter().filter(|&&l| l < k).count() as i32;
        out.add_term(p.shift_value(k, 1), &Laurent::v_pow(e));
    }
    Ok(out)
}

/// `[p] T_{s_i}`.
pub fn right_simple_on_basis(p: &FlagSymbol, i: usize) -> ModuleVector {
    let d = p.rank();
    let i = i % d;
    let a = p.eval(i as i64);
    let b = p.eval(i as i64 + 1);
    let xp = p.x_stat() as i32;
    let mut out = ModuleVector::zero(p.n(), d);
    if a == b {
        out.add_term(p.clone(), &q());
        return out;
    }
    let ps = p.mul_simple(i);
    let xs = ps.x_stat() as i32;
    // coefficients in the T basis, converted to [.] with v^{x_p - x_q}
    if a < b {
        out.add_term(ps, &Laurent::v_pow(xp - xs));
    } else {
        out.add_term(p.clone(), &(&q() - &Laurent::one()));
        out.add_term(ps, &(&q() * &Laurent::v_pow(xp - xs)));
    }
    out
}

/// `p = (lambda rho^k) s_{i_1} ... s_{i_l}` with every step ascending.
pub fn ascending_word(p: &FlagSymbol) -> (FlagSymbol, i64, Vec<usize>) {
    let d = p.rank();
    let mut cur = p.clone();
    let mut stripped = Vec::new();
    loop {
        let desc = (0..d).find(|&i| cur.eval(i as i64) > cur.eval(i as i64 + 1));
        match desc {
            Some(i) if d >= 2 => {
                stripped.push(i);
                cur = cur.mul_simple(i);
            }
            _ => break,
        }
    }
    stripped.reverse();
    // cur is weakly increasing, hence a rotation of its dominant symbol
    let lambda = cur.dominant();
    let k = (0..d as i64)
        .flat_map(|k| [k, -k])
        .chain((d as i64..).flat_map(|k| [k, -k]))
        .find(|&k| lambda.mul_rotation(k) == cur)
        .expect("weakly increasing symbols are rotations of the chamber");
    (lambda, k, stripped)
}

pub fn tau_basis(p: &FlagSymbol) -> ModuleVector {
    let (lambda, k, word) = ascending_word(p);
    let e = 2 * lambda.x_stat() as i32 - p.x_stat() as i32;
    // T_lambda = v^{-x_lambda} [lambda]
    let start = ModuleVector::basis(lambda.clone())
        .scale(&Laurent::v_pow(e - lambda.x_stat() as i32))
        .right_rotation(k);
    word.iter()
        .fold(start, |x, &i| x.right_simple_inverse(i))
}

impl Add for &ModuleVector {
    type Output = ModuleVector;
    fn add(self, rhs: &ModuleVector) -> ModuleVector {
        let mut out = self.clone();
        out.accumulate(rhs, &Laurent::one());
        out
    }
}

impl Sub for &ModuleVector {
    type Output = ModuleVector;
    fn sub(self, rhs: &ModuleVector) -> ModuleVector {
        let mut out = self.clone();
        out.accumulate(rhs, &Laurent::from_int(-1));
        out
    }
}

impl Neg for &ModuleVector {
    type Output = ModuleVector;
    fn neg(self) -> ModuleVector {
        self.scale(&Laurent::from_int(-1))
    }
}

impl fmt::Display for ModuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(p, c)| format!("({c})[{:?}]", p.values()))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for ModuleVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}
