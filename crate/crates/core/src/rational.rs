//! Rational functions in `v` over the integers, kept in lowest terms.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::laurent::Laurent;

/// `numerator / denominator` with both Laurent polynomials.
///
/// Canonical form: the denominator is an ordinary polynomial with nonzero
/// constant term whose constant coefficient is positive, and numerator and
/// denominator are coprime in `Z[v]` (content included).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rational {
    num: Laurent,
    den: Laurent,
}

// Dense ordinary polynomials (ascending) used for gcd computations.
type Poly = Vec<BigInt>;

fn trim(p: &mut Poly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

fn content(p: &Poly) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn primitive(p: &Poly) -> Poly {
    let c = content(p);
    if c.is_zero() || c.is_one() {
        return p.clone();
    }
    p.iter().map(|x| x / &c).collect()
}

/// Pseudo-remainder of `a` by `b` (b nonzero).
fn pseudo_rem(a: &Poly, b: &Poly) -> Poly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lb = b[db].clone();
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        for c in r.iter_mut() {
            *c *= &lb;
        }
        let shift = dr - db;
        for (j, bc) in b.iter().enumerate() {
            r[shift + j] -= &lr * bc;
        }
        trim(&mut r);
    }
    r
}

fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    if a.is_empty() {
        return primitive(b);
    }
    if b.is_empty() {
        return primitive(a);
    }
    let g_content = content(a).gcd(&content(b));
    let (mut x, mut y) = if a.len() >= b.len() {
        (primitive(a), primitive(b))
    } else {
        (primitive(b), primitive(a))
    };
    while !y.is_empty() {
        let r = pseudo_rem(&x, &y);
        x = y;
        y = primitive(&r);
    }
    let mut g: Poly = x.iter().map(|c| c * &g_content).collect();
    if g.last().is_some_and(|c| c.is_negative()) {
        for c in g.iter_mut() {
            *c = -std::mem::take(c);
        }
    }
    g
}

fn to_poly(p: &Laurent) -> (i32, Poly) {
    (p.low(), p.dense().to_vec())
}

impl Rational {
    pub fn zero() -> Self {
        Self {
            num: Laurent::zero(),
            den: Laurent::one(),
        }
    }

    pub fn one() -> Self {
        Self::from_laurent(Laurent::one())
    }

    pub fn from_laurent(x: Laurent) -> Self {
        Self::new(x, Laurent::one()).expect("unit denominator")
    }

    pub fn new(num: Laurent, den: Laurent) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(Self::zero());
        }
        let (nl, np) = to_poly(&num);
        let (dl, dp) = to_poly(&den);
        let g = poly_gcd(&np, &dp);
        let np = Laurent::from_parts(0, np).divide_exact(&Laurent::from_parts(0, g.clone()))?;
        let dp = Laurent::from_parts(0, dp).divide_exact(&Laurent::from_parts(0, g))?;
        // v-shift: move the denominator's lowest power into the numerator
        let mut shift = nl - dl;
        let d_low = dp.low();
        shift -= d_low;
        let mut dp = dp.shift(-d_low);
        let mut np = np.shift(shift);
        if dp.constant_term().is_negative() {
            np = -np;
            dp = -dp;
        }
        Ok(Self { num: np, den: dp })
    }

    pub fn numerator(&self) -> &Laurent {
        &self.num
    }

    pub fn denominator(&self) -> &Laurent {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// The Laurent polynomial this equals, when the denominator is a unit.
    pub fn to_laurent(&self) -> Option<Laurent> {
        if self.den.is_one() {
            Some(self.num.clone())
        } else {
            None
        }
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn bar(&self) -> Self {
        Self::new(self.num.bar(), self.den.bar()).expect("nonzero denominator")
    }

    /// True when the function has no pole at `v = 0`.
    pub fn regular_at_zero(&self) -> bool {
        // the denominator has a nonzero constant term by normalization
        self.num.in_zv()
    }

    /// Value at `v = 0` as a fraction, if regular there.
    pub fn value_at_zero(&self) -> Option<(BigInt, BigInt)> {
        if !self.regular_at_zero() {
            return None;
        }
        let n = self.num.constant_term();
        let d = self.den.constant_term();
        let g = n.gcd(&d);
        if n.is_zero() {
            return Some((BigInt::zero(), BigInt::one()));
        }
        Some((n / &g, d / &g))
    }
}

impl From<Laurent> for Rational {
    fn from(x: Laurent) -> Self {
        Self::from_laurent(x)
    }
}

impl Add for &Rational {
    type Output = Rational;
    fn add(self, rhs: &Rational) -> Rational {
        if self.den == rhs.den {
            return Rational::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        Rational::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
        .unwrap()
    }
}

impl Sub for &Rational {
    type Output = Rational;
    fn sub(self, rhs: &Rational) -> Rational {
        self + &(-rhs)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Mul for &Rational {
    type Output = Rational;
    fn mul(self, rhs: &Rational) -> Rational {
        if self.is_zero() || rhs.is_zero() {
            return Rational::zero();
        }
        Rational::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

impl Div for &Rational {
    type Output = Result<Rational>;
    fn div(self, rhs: &Rational) -> Result<Rational> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Rational::new(&self.num * &rhs.den, &self.den * &rhs.num)
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Rational({self})")
    }
}
