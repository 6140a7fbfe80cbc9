//! Exact Laurent polynomials in `v` with arbitrary-precision integer
//! coefficients, the bar involution `v -> v^{-1}`, quantum integers and a
//! field of fractions used for exact linear solves.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A Laurent polynomial `sum_k c_k v^k`, stored densely from its lowest
/// nonzero exponent. Zero is the empty coefficient vector, and the first and
/// last stored coefficients are always nonzero.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Laurent {
    low: i32,
    coeffs: Vec<BigInt>,
}

impl Laurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(1, 0)
    }

    /// `v`
    pub fn v() -> Self {
        Self::monomial(1, 1)
    }

    /// `c * v^e`
    pub fn monomial(c: impl Into<BigInt>, e: i32) -> Self {
        Self::from_parts(e, vec![c.into()])
    }

    pub fn v_pow(e: i32) -> Self {
        Self::monomial(1, e)
    }

    pub fn from_int(c: impl Into<BigInt>) -> Self {
        Self::monomial(c, 0)
    }

    /// Builds from `coeffs[k]` = coefficient of `v^(low + k)`.
    pub fn from_parts(low: i32, coeffs: Vec<BigInt>) -> Self {
        let mut p = Self { low, coeffs };
        p.normalize();
        p
    }

    /// Builds from (exponent, coefficient) pairs; repeated exponents add up.
    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i32, C)>,
        C: Into<BigInt>,
    {
        let mut map: BTreeMap<i32, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            *map.entry(e).or_default() += c.into();
        }
        let Some((&lo, _)) = map.iter().next() else {
            return Self::zero();
        };
        let hi = *map.keys().next_back().unwrap();
        let mut coeffs = vec![BigInt::zero(); (hi - lo + 1) as usize];
        for (e, c) in map {
            coeffs[(e - lo) as usize] = c;
        }
        Self::from_parts(lo, coeffs)
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.low += lead as i32;
        }
        if self.coeffs.is_empty() {
            self.low = 0;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn min_degree(&self) -> Option<i32> {
        (!self.is_zero()).then_some(self.low)
    }

    /// Highest exponent with a nonzero coefficient.
    pub fn max_degree(&self) -> Option<i32> {
        (!self.is_zero()).then(|| self.low + self.coeffs.len() as i32 - 1)
    }

    pub fn coeff(&self, e: i32) -> BigInt {
        let k = e - self.low;
        if k < 0 || k as usize >= self.coeffs.len() {
            BigInt::zero()
        } else {
            self.coeffs[k as usize].clone()
        }
    }

    /// Nonzero terms as (exponent, coefficient), increasing exponent.
    pub fn terms(&self) -> impl Iterator<Item = (i32, &BigInt)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(k, c)| (self.low + k as i32, c))
    }

    /// If this is `c * v^e`, returns `(c, e)`.
    pub fn as_monomial(&self) -> Option<(&BigInt, i32)> {
        (self.coeffs.len() == 1).then(|| (&self.coeffs[0], self.low))
    }

    /// Multiplies by `v^e`.
    pub fn shift(&self, e: i32) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self {
            low: self.low + e,
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        Self::from_parts(self.low, self.coeffs.iter().map(|x| x * c).collect())
    }

    /// The ring involution `v -> v^{-1}`.
    pub fn bar(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = self.coeffs.clone();
        coeffs.reverse();
        Self {
            low: -(self.max_degree().unwrap()),
            coeffs,
        }
    }

    pub fn is_bar_invariant(&self) -> bool {
        *self == self.bar()
    }

    /// Terms of strictly positive degree.
    pub fn positive_part(&self) -> Self {
        Self::from_terms(self.terms().filter(|(e, _)| *e > 0).map(|(e, c)| (e, c.clone())))
    }

    /// True if every exponent is `>= 1`, i.e. the element lies in `vZ[v]`.
    pub fn in_v_zv(&self) -> bool {
        self.is_zero() || self.low >= 1
    }

    /// True if every exponent is `>= 0`.
    pub fn in_zv(&self) -> bool {
        self.is_zero() || self.low >= 0
    }

    /// Value at `v = 0` when the element lies in `Z[v]`.
    pub fn constant_term(&self) -> BigInt {
        self.coeff(0)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Exact quotient `self / den`; fails unless `den` divides `self` in
    /// `Z[v, v^{-1}]`.
    pub fn divide_exact(&self, den: &Laurent) -> Result<Laurent> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if self.is_zero() {
            return Ok(Self::zero());
        }
        let dlead = den.coeffs.last().unwrap();
        let dlen = den.coeffs.len();
        let mut rem = self.coeffs.clone();
        if rem.len() < dlen {
            return Err(Error::NotDivisible(self.to_string(), den.to_string()));
        }
        let qlen = rem.len() - dlen + 1;
        let mut quot = vec![BigInt::zero(); qlen];
        for k in (0..qlen).rev() {
            let top = &rem[k + dlen - 1];
            if top.is_zero() {
                continue;
            }
            let (q, r) = top.div_rem(dlead);
            if !r.is_zero() {
                return Err(Error::NotDivisible(self.to_string(), den.to_string()));
            }
            for (j, dc) in den.coeffs.iter().enumerate() {
                rem[k + j] -= &q * dc;
            }
            quot[k] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return Err(Error::NotDivisible(self.to_string(), den.to_string()));
        }
        Ok(Self::from_parts(self.low - den.low, quot))
    }

    /// Evaluates at a rational point `v = num/den` (test utility). Returns
    /// a reduced fraction with positive denominator.
    pub fn eval_rational(&self, num: i64, den: i64) -> (BigInt, BigInt) {
        let n = BigInt::from(num);
        let d = BigInt::from(den);
        let mut acc_n = BigInt::zero();
        let mut acc_d = BigInt::one();
        for (e, c) in self.terms() {
            let k = e.unsigned_abs() as usize;
            let (tn, td) = if e >= 0 {
                (c * num_traits::pow(n.clone(), k), num_traits::pow(d.clone(), k))
            } else {
                (c * num_traits::pow(d.clone(), k), num_traits::pow(n.clone(), k))
            };
            acc_n = acc_n * &td + tn * &acc_d;
            acc_d *= td;
        }
        let g = acc_n.gcd(&acc_d);
        if !g.is_zero() {
            acc_n /= &g;
            acc_d /= &g;
        }
        if acc_d.is_negative() {
            acc_n = -acc_n;
            acc_d = -acc_d;
        }
        (acc_n, acc_d)
    }

    pub(crate) fn low(&self) -> i32 {
        self.low
    }

    pub(crate) fn dense(&self) -> &[BigInt] {
        &self.coeffs
    }

    /// JSON form: exponent strings mapped to integer coefficients.
    pub fn to_json_map(&self) -> BTreeMap<String, BigInt> {
        self.terms().map(|(e, c)| (e.to_string(), c.clone())).collect()
    }

    pub fn from_json_map(map: &BTreeMap<String, BigInt>) -> Result<Self> {
        let mut terms = Vec::with_capacity(map.len());
        for (k, c) in map {
            let e: i32 = k
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent key {k:?}")))?;
            terms.push((e, c.clone()));
        }
        Ok(Self::from_terms(terms))
    }
}

/// Balanced quantum integer `[k] = (v^k - v^{-k}) / (v - v^{-1})`.
pub fn quantum_integer(k: i64) -> Laurent {
    if k == 0 {
        return Laurent::zero();
    }
    let m = k.abs() as i32;
    let sign = if k > 0 { 1 } else { -1 };
    Laurent::from_terms((0..m).map(|j| (m - 1 - 2 * j, sign)))
}

/// `[k]! = [k][k-1]...[1]`.
pub fn quantum_factorial(k: i64) -> Result<Laurent> {
    if k < 0 {
        return Err(Error::NegativeFactorial(k));
    }
    Ok((1..=k).fold(Laurent::one(), |acc, j| &acc * &quantum_integer(j)))
}

/// Quantum binomial `[m choose k]` for `m >= 0`.
pub fn quantum_binomial(m: i64, k: i64) -> Laurent {
    if k < 0 || k > m {
        return Laurent::zero();
    }
    let num = (0..k).fold(Laurent::one(), |acc, j| &acc * &quantum_integer(m - j));
    num.divide_exact(&quantum_factorial(k).unwrap())
        .expect("quantum binomials are Laurent polynomials")
}

fn add_into(acc: &mut Laurent, other: &Laurent, negate: bool) {
    if other.is_zero() {
        return;
    }
    if acc.is_zero() {
        *acc = if negate { -other.clone() } else { other.clone() };
        return;
    }
    let lo = acc.low.min(other.low);
    let hi = acc.max_degree().unwrap().max(other.max_degree().unwrap());
    if lo < acc.low {
        let pad = (acc.low - lo) as usize;
        let mut v = vec![BigInt::zero(); pad];
        v.append(&mut acc.coeffs);
        acc.coeffs = v;
        acc.low = lo;
    }
    acc.coeffs.resize((hi - lo + 1) as usize, BigInt::zero());
    let off = (other.low - acc.low) as usize;
    for (k, c) in other.coeffs.iter().enumerate() {
        if negate {
            acc.coeffs[off + k] -= c;
        } else {
            acc.coeffs[off + k] += c;
        }
    }
    acc.normalize();
}

impl AddAssign<&Laurent> for Laurent {
    fn add_assign(&mut self, rhs: &Laurent) {
        add_into(self, rhs, false);
    }
}

impl SubAssign<&Laurent> for Laurent {
    fn sub_assign(&mut self, rhs: &Laurent) {
        add_into(self, rhs, true);
    }
}

impl AddAssign for Laurent {
    fn add_assign(&mut self, rhs: Laurent) {
        add_into(self, &rhs, false);
    }
}

impl SubAssign for Laurent {
    fn sub_assign(&mut self, rhs: Laurent) {
        add_into(self, &rhs, true);
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for Laurent {
    type Output = Laurent;
    fn add(mut self, rhs: Laurent) -> Laurent {
        self += &rhs;
        self
    }
}

impl Sub for Laurent {
    type Output = Laurent;
    fn sub(mut self, rhs: Laurent) -> Laurent {
        self -= &rhs;
        self
    }
}

impl Neg for Laurent {
    type Output = Laurent;
    fn neg(mut self) -> Laurent {
        for c in &mut self.coeffs {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        -self.clone()
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        if self.is_zero() || rhs.is_zero() {
            return Laurent::zero();
        }
        if let Some((c, e)) = rhs.as_monomial() {
            let mut out = self.scale(c);
            out.low += e;
            return out;
        }
        if let Some((c, e)) = self.as_monomial() {
            let mut out = rhs.scale(c);
            out.low += e;
            return out;
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Laurent::from_parts(self.low + rhs.low, coeffs)
    }
}

impl Mul for Laurent {
    type Output = Laurent;
    fn mul(self, rhs: Laurent) -> Laurent {
        &self * &rhs
    }
}

impl MulAssign<&Laurent> for Laurent {
    fn mul_assign(&mut self, rhs: &Laurent) {
        *self = &*self * rhs;
    }
}

impl From<i64> for Laurent {
    fn from(c: i64) -> Self {
        Laurent::from_int(c)
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms().collect::<Vec<_>>().into_iter().rev() {
            let neg = c.is_negative();
            let abs = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            let show_coeff = !abs.is_one() || e == 0;
            if show_coeff {
                write!(f, "{abs}")?;
            }
            match e {
                0 => {}
                1 => write!(f, "v")?,
                _ => write!(f, "v^{e}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({self})")
    }
}

impl Serialize for Laurent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        // integers are emitted as JSON numbers when they fit in i64
        use serde::ser::SerializeMap;
        let mut m = s.serialize_map(Some(self.terms().count()))?;
        let mut terms: Vec<_> = self.terms().collect();
        terms.sort_by_key(|(e, _)| e.to_string());
        for (e, c) in terms {
            let key = e.to_string();
            match i64::try_from(c) {
                Ok(small) => m.serialize_entry(&key, &small)?,
                Err(_) => m.serialize_entry(&key, &c.to_string())?,
            }
        }
        m.end()
    }
}

impl<'de> Deserialize<'de> for Laurent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw: BTreeMap<String, serde_json::Value> = BTreeMap::deserialize(d)?;
        let mut terms = Vec::new();
        for (k, val) in raw {
            let e: i32 = k.trim().parse().map_err(D::Error::custom)?;
            let c: BigInt = match val {
                serde_json::Value::Number(n) => n
                    .to_string()
                    .parse()
                    .map_err(|_| D::Error::custom("bad coefficient"))?,
                serde_json::Value::String(s) => s.parse().map_err(D::Error::custom)?,
                _ => return Err(D::Error::custom("coefficient must be an integer")),
            };
            terms.push((e, c));
        }
        Ok(Laurent::from_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lp(terms: &[(i32, i64)]) -> Laurent {
        Laurent::from_terms(terms.iter().copied())
    }

    #[test]
    fn quantum_integers() {
        assert!(quantum_integer(0).is_zero());
        assert_eq!(quantum_integer(1), Laurent::one());
        assert_eq!(quantum_integer(2), lp(&[(1, 1), (-1, 1)]));
        assert_eq!(quantum_integer(3), lp(&[(2, 1), (0, 1), (-2, 1)]));
        assert_eq!(quantum_integer(-3), -quantum_integer(3));
    }

    #[test]
    fn quantum_integer_matches_defining_quotient() {
        let denom = lp(&[(1, 1), (-1, -1)]);
        for k in -20..=20i64 {
            let kk = k as i32;
            let num = lp(&[(kk, 1), (-kk, -1)]);
            assert_eq!(num.divide_exact(&denom).unwrap(), quantum_integer(k), "k={k}");
            assert!(quantum_integer(k).is_bar_invariant());
        }
    }

    #[test]
    fn factorials() {
        assert_eq!(quantum_factorial(0).unwrap(), Laurent::one());
        assert_eq!(quantum_factorial(2).unwrap(), quantum_integer(2));
        assert_eq!(
            quantum_factorial(3).unwrap(),
            &quantum_integer(2) * &quantum_integer(3)
        );
        assert!(quantum_factorial(-1).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(quantum_binomial(4, 0), Laurent::one());
        assert_eq!(quantum_binomial(4, 1), quantum_integer(4));
        // [4 choose 2] = v^4 + v^2 + 2 + v^-2 + v^-4
        assert_eq!(quantum_binomial(4, 2), lp(&[(4, 1), (2, 1), (0, 2), (-2, 1), (-4, 1)]));
    }

    #[test]
    fn bar_examples() {
        assert_eq!(Laurent::v().bar(), Laurent::v_pow(-1));
        assert_eq!(Laurent::one().bar(), Laurent::one());
        assert_eq!(lp(&[(2, 1), (-1, 3)]).bar(), lp(&[(-2, 1), (1, 3)]));
    }

    #[test]
    fn exact_division() {
        let num = lp(&[(2, 1), (-2, -1)]);
        let den = lp(&[(1, 1), (-1, -1)]);
        assert_eq!(num.divide_exact(&den).unwrap(), lp(&[(1, 1), (-1, 1)]));
        let x = lp(&[(3, 2), (0, -7)]);
        assert_eq!(x.divide_exact(&Laurent::one()).unwrap(), x);
        assert!(Laurent::zero().divide_exact(&den).unwrap().is_zero());
        assert!(lp(&[(1, 1), (0, 1)]).divide_exact(&den).is_err());
        assert!(x.divide_exact(&Laurent::zero()).is_err());
        assert!(Laurent::from_int(3).divide_exact(&Laurent::from_int(2)).is_err());
    }

    #[test]
    fn display_and_json() {
        let x = lp(&[(1, 1), (-1, 1)]);
        assert_eq!(x.to_string(), "v + v^-1");
        let js = serde_json::to_string(&x).unwrap();
        assert_eq!(js, r#"{"-1":1,"1":1}"#);
        let back: Laurent = serde_json::from_str(&js).unwrap();
        assert_eq!(back, x);
    }

    #[test]
    fn rational_evaluation() {
        // (v + v^-1) at v = 2 is 5/2
        let x = lp(&[(1, 1), (-1, 1)]);
        assert_eq!(x.eval_rational(2, 1), (BigInt::from(5), BigInt::from(2)));
    }

    fn arb_laurent() -> impl Strategy<Value = Laurent> {
        (-4i32..4, prop::collection::vec(-6i64..6, 0..5))
            .prop_map(|(lo, cs)| Laurent::from_parts(lo, cs.into_iter().map(BigInt::from).collect()))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]
        #[test]
        fn ring_axioms(a in arb_laurent(), b in arb_laurent(), c in arb_laurent()) {
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn bar_is_ring_involution(a in arb_laurent(), b in arb_laurent()) {
            prop_assert_eq!(a.bar().bar(), a.clone());
            prop_assert_eq!((&a * &b).bar(), &a.bar() * &b.bar());
            prop_assert_eq!((&a + &b).bar(), &a.bar() + &b.bar());
        }

        #[test]
        fn division_inverts_multiplication(a in arb_laurent(), b in arb_laurent()) {
            prop_assume!(!b.is_zero());
            prop_assert_eq!((&a * &b).divide_exact(&b).unwrap(), a);
        }
    }
}
