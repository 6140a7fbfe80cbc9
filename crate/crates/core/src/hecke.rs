//! The affine Hecke algebra `H_D` of type `GL_D` in the `T_w` basis, with
//! quadratic relation `(T_i + 1)(T_i - v^{-2}) = 0`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::affine_weyl::{enumerate_double_coset, min_double_coset_rep, AffinePermutation, YoungSubgroup};
use crate::error::{Error, Result};
use crate::flag_comb::{matrix_of_pair, FlagSymbol, PeriodicMatrix};
use crate::laurent::Laurent;

/// `q = v^{-2}`.
pub fn q() -> Laurent {
    Laurent::v_pow(-2)
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct HeckeElement {
    rank: usize,
    terms: BTreeMap<AffinePermutation, Laurent>,
}

impl HeckeElement {
    pub fn zero(rank: usize) -> Self {
        Self {
            rank,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(rank: usize) -> Self {
        Self::basis(AffinePermutation::identity(rank))
    }

    /// `T_w`.
    pub fn basis(w: AffinePermutation) -> Self {
        let rank = w.rank();
        Self {
            rank,
            terms: BTreeMap::from([(w, Laurent::one())]),
        }
    }

    pub fn from_terms(
        rank: usize,
        terms: impl IntoIterator<Item = (AffinePermutation, Laurent)>,
    ) -> Result<Self> {
        let mut h = Self::zero(rank);
        for (w, c) in terms {
            if w.rank() != rank {
                return Err(Error::RankMismatch(rank, w.rank()));
            }
            h.add_term(w, &c);
        }
        Ok(h)
    }

    /// `T_{s_i}`, `i` read modulo `D`.
    pub fn simple(rank: usize, i: usize) -> Self {
        Self::basis(AffinePermutation::simple(rank, i))
    }

    /// `T_rho^k`.
    pub fn rotation(rank: usize, k: i64) -> Self {
        Self::basis(AffinePermutation::rotation(rank, k))
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&AffinePermutation, &Laurent)> {
        self.terms.iter()
    }

    pub fn coeff(&self, w: &AffinePermutation) -> Laurent {
        self.terms.get(w).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, w: AffinePermutation, c: &Laurent) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(w) {
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
            return Self::zero(self.rank);
        }
        Self {
            rank: self.rank,
            terms: self.terms.iter().map(|(w, x)| (w.clone(), x * c)).collect(),
        }
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch(self.rank, other.rank));
        }
        Ok(())
    }

    /// `h T_{s_i}`.
    pub fn mul_simple_right(&self, i: usize) -> Self {
        let mut out = Self::zero(self.rank);
        let qm1 = &q() - &Laurent::one();
        for (w, c) in &self.terms {
            let ws = w.mul_simple(i);
            if w.has_right_descent(i) {
                out.add_term(w.clone(), &(c * &qm1));
                out.add_term(ws, &(c * &q()));
            } else {
                out.add_term(ws, c);
            }
        }
        out
    }

    /// `T_{s_i} h`.
    pub fn mul_simple_left(&self, i: usize) -> Self {
        let mut out = Self::zero(self.rank);
        let qm1 = &q() - &Laurent::one();
        for (w, c) in &self.terms {
            let sw = w.simple_mul(i);
            if w.has_left_descent(i) {
                out.add_term(w.clone(), &(c * &qm1));
                out.add_term(sw, &(c * &q()));
            } else {
                out.add_term(sw, c);
            }
        }
        out
    }

    /// `h T_rho^k`.
    pub fn mul_rotation_right(&self, k: i64) -> Self {
        Self {
            rank: self.rank,
            terms: self
                .terms
                .iter()
                .map(|(w, c)| (w.mul_rotation(k), c.clone()))
                .collect(),
        }
    }

    /// `h T_{s_i}^{-1}` with `T_s^{-1} = v^2 T_s + (v^2 - 1)`.
    pub fn mul_simple_inverse_right(&self, i: usize) -> Self {
        let v2 = Laurent::v_pow(2);
        let a = self.mul_simple_right(i).scale(&v2);
        let b = self.scale(&(&v2 - &Laurent::one()));
        &a + &b
    }

    /// `h T_w`, via a reduced word of `w`.
    pub fn mul_basis_right(&self, w: &AffinePermutation) -> Self {
        let (k, word) = w.reduced_word();
        word.iter()
            .fold(self.mul_rotation_right(k), |h, &i| h.mul_simple_right(i))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        let mut out = Self::zero(self.rank);
        for (w, c) in &other.terms {
            out = &out + &self.mul_basis_right(w).scale(c);
        }
        Ok(out)
    }

    /// `T_w^{-1}`.
    pub fn inverse_of_basis(w: &AffinePermutation) -> Self {
        let (k, word) = w.reduced_word();
        let d = w.rank();
        word.iter()
            .rev()
            .fold(Self::one(d), |h, &i| h.mul_simple_inverse_right(i))
            .mul_rotation_right(-k)
    }

    /// `sum bar(c_w) T_{w^{-1}}^{-1}`.
    pub fn bar(&self) -> Self {
        let mut out = Self::zero(self.rank);
        for (w, c) in &self.terms {
            out = &out + &Self::inverse_of_basis(&w.inverse()).scale(&c.bar());
        }
        out
    }

    /// The sign character: `T_{s_i} -> -1`, `T_rho -> 1`.
    pub fn sign_character(&self) -> Laurent {
        let mut acc = Laurent::zero();
        for (w, c) in &self.terms {
            if w.length() % 2 == 0 {
                acc += c;
            } else {
                acc -= c;
            }
        }
        acc
    }

    /// `T_p = sum_{w in S_lambda x} T_w` where `(lambda) x = p`.
    pub fn coset_sum(lambda: &FlagSymbol, p: &FlagSymbol) -> Result<Self> {
        let (dom, w) = p.dominant_with_witness();
        if &dom != lambda || !lambda.is_dominant() {
            return Err(Error::NotInOrbit(p.values().to_vec(), lambda.values().to_vec()));
        }
        let group = YoungSubgroup::of(lambda)?;
        let mut out = Self::zero(p.rank());
        for a in group.elements() {
            out.add_term(a.compose(&w)?, &Laurent::one());
        }
        Ok(out)
    }

    /// `T_s = sum_{w in s} T_w` for `s` in the block `(lambda, mu)`.
    pub fn double_coset_sum(lambda: &FlagSymbol, mu: &FlagSymbol, s: &PeriodicMatrix) -> Result<Self> {
        if s.left_dominant() != *lambda || s.right_dominant() != *mu {
            return Err(Error::NotInBlock(format!("{s} is not in ({lambda}, {mu})")));
        }
        let p = s
            .class_members()
            .into_iter()
            .next()
            .ok_or_else(|| Error::Internal(format!("empty class for {s}")))?;
        let (_, w) = p.dominant_with_witness();
        let rep = min_double_coset_rep(lambda, &w, mu)?;
        let mut out = Self::zero(lambda.rank());
        for x in enumerate_double_coset(lambda, mu, &rep)? {
            let cls = matrix_of_pair(&x.act_on_flag_symbol(lambda)?, mu)?;
            if &cls != s {
                return Err(Error::Internal(format!("{x} lies in {cls}, not {s}")));
            }
            out.add_term(x, &Laurent::one());
        }
        Ok(out)
    }

    /// The Bernstein element `X_j`, `j in [1, D]`, realized through
    /// translations by `eta_j = e_j + ... + e_D`.
    pub fn bernstein_x(rank: usize, j: usize) -> Self {
        let eta = |j: usize| -> AffinePermutation {
            let mu: Vec<i64> = (1..=rank).map(|k| i64::from(k >= j)).collect();
            AffinePermutation::translation(&mu)
        };
        let a = Self::basis(eta(j));
        let b = Self::inverse_of_basis(&eta(j + 1));
        a.mul(&b)
            .expect("equal rank")
            .scale(&Laurent::v_pow(2 * (j as i32 - 1)))
    }

    /// `X_j^{-1}`.
    pub fn bernstein_x_inverse(rank: usize, j: usize) -> Self {
        let eta = |j: usize| -> AffinePermutation {
            let mu: Vec<i64> = (1..=rank).map(|k| i64::from(k >= j)).collect();
            AffinePermutation::translation(&mu)
        };
        let a = Self::basis(eta(j + 1));
        let b = Self::inverse_of_basis(&eta(j));
        a.mul(&b)
            .expect("equal rank")
            .scale(&Laurent::v_pow(-2 * (j as i32 - 1)))
    }
}

impl Add for &HeckeElement {
    type Output = HeckeElement;
    fn add(self, rhs: &HeckeElement) -> HeckeElement {
        assert_eq!(self.rank, rhs.rank, "rank mismatch");
        let mut out = self.clone();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c);
        }
        out
    }
}

impl Sub for &HeckeElement {
    type Output = HeckeElement;
    fn sub(self, rhs: &HeckeElement) -> HeckeElement {
        self + &(-rhs)
    }
}

impl Neg for &HeckeElement {
    type Output = HeckeElement;
    fn neg(self) -> HeckeElement {
        self.scale(&Laurent::from_int(-1))
    }
}

impl Mul for &HeckeElement {
    type Output = HeckeElement;
    fn mul(self, rhs: &HeckeElement) -> HeckeElement {
        HeckeElement::mul(self, rhs).expect("rank mismatch")
    }
}

impl fmt::Display for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(w, c)| format!("({c}) T[{w}]"))
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for HeckeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::affine_weyl::elements_up_to_length;
    use proptest::prelude::*;

    fn t(d: usize, word: &[usize]) -> HeckeElement {
        word.iter()
            .fold(HeckeElement::one(d), |h, &i| h.mul_simple_right(i))
    }

    fn lp(terms: &[(i32, i64)]) -> Laurent {
        Laurent::from_terms(terms.iter().copied())
    }

    #[test]
    fn quadratic_relation() {
        let d = 3;
        for i in 0..d {
            let s = HeckeElement::simple(d, i);
            let ss = &s * &s;
            let expect = &s.scale(&(&q() - &Laurent::one())) + &HeckeElement::one(d).scale(&q());
            assert_eq!(ss, expect);
            let one = HeckeElement::one(d);
            // (T + 1)(T - q) = 0
            let lhs = &(&s + &one) * &(&s - &one.scale(&q()));
            assert!(lhs.is_zero());
        }
    }

    #[test]
    fn product_examples() {
        let s1 = HeckeElement::simple(3, 1);
        assert_eq!(&HeckeElement::one(3) * &s1, s1);
        let w = t(3, &[1, 2]).mul_simple_right(1);
        assert_eq!(w.terms().count(), 1);
        let (x, c) = w.terms().next().unwrap();
        assert_eq!(x.length(), 3);
        assert!(c.is_one());
    }

    #[test]
    fn inverse_examples() {
        let d = 3;
        assert_eq!(
            HeckeElement::inverse_of_basis(&AffinePermutation::identity(d)),
            HeckeElement::one(d)
        );
        let inv = HeckeElement::inverse_of_basis(&AffinePermutation::simple(d, 1));
        let expect = &HeckeElement::simple(d, 1).scale(&lp(&[(2, 1)]))
            + &HeckeElement::one(d).scale(&lp(&[(2, 1), (0, -1)]));
        assert_eq!(inv, expect);
        let rho = AffinePermutation::rotation(d, 1);
        assert_eq!(
            HeckeElement::inverse_of_basis(&rho),
            HeckeElement::rotation(d, -1)
        );
        for w in elements_up_to_length(3, 1, 4) {
            let p = &HeckeElement::basis(w.clone()) * &HeckeElement::inverse_of_basis(&w);
            assert_eq!(p, HeckeElement::one(3), "{w}");
        }
    }

    #[test]
    fn bar_examples() {
        let d = 2;
        assert_eq!(HeckeElement::one(d).bar(), HeckeElement::one(d));
        let b = HeckeElement::simple(d, 1).bar();
        assert_eq!(b, HeckeElement::inverse_of_basis(&AffinePermutation::simple(d, 1)));
        assert_eq!(
            HeckeElement::one(d).scale(&Laurent::v()).bar(),
            HeckeElement::one(d).scale(&Laurent::v_pow(-1))
        );
    }

    #[test]
    fn braid_relations_exhaustive() {
        for d in 2..=3usize {
            for w in elements_up_to_length(d, 0, 5) {
                let (_, word) = w.reduced_word();
                // every reduced word evaluates to T_w
                assert_eq!(t(d, &word), HeckeElement::basis(w.clone()));
            }
        }
        let d = 3;
        for i in 0..d {
            let j = (i + 1) % d;
            assert_eq!(t(d, &[i, j, i]), t(d, &[j, i, j]));
        }
        let d = 4;
        assert_eq!(t(d, &[1, 3]), t(d, &[3, 1]));
        assert_eq!(t(d, &[0, 2]), t(d, &[2, 0]));
        // left and right multiplication agree with the general product
        for w in elements_up_to_length(3, 1, 3) {
            let h = HeckeElement::basis(w);
            for i in 0..3 {
                assert_eq!(h.mul_simple_left(i), &HeckeElement::simple(3, i) * &h);
            }
        }
    }

    #[test]
    fn bernstein_relations() {
        for d in 1..=3usize {
            let x: Vec<HeckeElement> = (1..=d).map(|j| HeckeElement::bernstein_x(d, j)).collect();
            let xi: Vec<HeckeElement> =
                (1..=d).map(|j| HeckeElement::bernstein_x_inverse(d, j)).collect();
            let one = HeckeElement::one(d);
            for a in 0..d {
                assert_eq!(&x[a] * &xi[a], one, "X X^-1, D={d}");
                assert_eq!(&xi[a] * &x[a], one, "X^-1 X, D={d}");
                for b in 0..d {
                    assert_eq!(&x[a] * &x[b], &x[b] * &x[a], "commute D={d}");
                }
            }
            for i in 1..d {
                let ti = HeckeElement::simple(d, i);
                let lhs = &(&ti * &x[i - 1]) * &ti;
                assert_eq!(lhs, x[i].scale(&q()), "T_i X_i T_i, D={d}, i={i}");
                for j in 1..=d {
                    if j != i && j != i + 1 {
                        assert_eq!(&x[j - 1] * &ti, &ti * &x[j - 1], "X_j T_i, D={d}");
                    }
                }
            }
        }
    }

    #[test]
    fn coset_sums() {
        let lam = FlagSymbol::new(2, vec![1, 1]).unwrap();
        let h = HeckeElement::coset_sum(&lam, &lam).unwrap();
        assert_eq!(h, &HeckeElement::one(2) + &HeckeElement::simple(2, 1));
        let delta = PeriodicMatrix::delta(&lam);
        assert_eq!(HeckeElement::double_coset_sum(&lam, &lam, &delta).unwrap(), h);
        let lam = FlagSymbol::new(2, vec![1, 2]).unwrap();
        let p = FlagSymbol::new(2, vec![4, -1]).unwrap();
        assert_eq!(HeckeElement::coset_sum(&lam, &p).unwrap().terms().count(), 1);
        assert!(HeckeElement::coset_sum(&lam, &FlagSymbol::new(2, vec![1, 1]).unwrap()).is_err());
    }

    #[test]
    fn dominant_sums_are_bar_invariant() {
        // bar(T_lambda) = v^{2 x_lambda} T_lambda
        for n in 1..=3 {
            for d in 1..=3 {
                for lam in FlagSymbol::dominant_symbols(n, d) {
                    let h = HeckeElement::coset_sum(&lam, &lam).unwrap();
                    let x = lam.x_stat() as i32;
                    assert_eq!(h.bar(), h.scale(&Laurent::v_pow(2 * x)), "{lam}");
                }
            }
        }
    }

    #[test]
    fn sign_character_is_multiplicative() {
        let elems = elements_up_to_length(3, 0, 3);
        for a in &elems {
            for b in elems.iter().take(12) {
                let ha = HeckeElement::basis(a.clone());
                let hb = HeckeElement::basis(b.clone());
                assert_eq!(
                    (&ha * &hb).sign_character(),
                    &ha.sign_character() * &hb.sign_character()
                );
            }
        }
        assert_eq!(HeckeElement::simple(3, 1).sign_character(), Laurent::from_int(-1));
    }

    fn arb_elem(d: usize) -> impl Strategy<Value = HeckeElement> {
        prop::collection::vec(
            (-1i64..=1, prop::collection::vec(0..d, 0..4), -2i32..=2, -2i64..=2),
            1..3,
        )
        .prop_map(move |ts| {
            HeckeElement::from_terms(
                d,
                ts.into_iter().map(|(k, w, e, c)| {
                    (AffinePermutation::from_word(d, k, &w), Laurent::monomial(c, e))
                }),
            )
            .unwrap()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn associativity(a in arb_elem(3), b in arb_elem(3), c in arb_elem(3)) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        }

        #[test]
        fn bar_is_a_ring_involution(a in arb_elem(3), b in arb_elem(3)) {
            prop_assert_eq!(a.bar().bar(), a.clone());
            prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
        }
    }
}
