//! The affine q-Schur algebra through its blocks `H_{lambda mu}`, the map
//! `Phi_D` from the modified quantum affine algebra, `epsilon` and `psi`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flag_comb::{matrix_of_pair, residue_row, weights, FlagSymbol, PeriodicMatrix};
use crate::hecke::HeckeElement;
use crate::laurent::{quantum_factorial, quantum_integer, Laurent};
use crate::tmodule::{ascending_word, Chevalley, ModuleVector};
use crate::AffinePermutation;

/// A finite combination of `[s]`, grouped into blocks by row and column
/// weight.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "SchurRepr", into = "SchurRepr")]
pub struct SchurElement {
    n: usize,
    d: usize,
    terms: BTreeMap<PeriodicMatrix, Laurent>,
}

#[derive(Serialize, Deserialize)]
struct SchurRepr {
    n: usize,
    #[serde(rename = "D")]
    d: usize,
    blocks: Vec<BlockRepr>,
}

#[derive(Serialize, Deserialize)]
struct BlockRepr {
    lambda: Vec<i64>,
    mu: Vec<i64>,
    terms: Vec<MatrixTermRepr>,
}

#[derive(Serialize, Deserialize)]
struct MatrixTermRepr {
    matrix: Vec<(i64, i64, u64)>,
    coeff: Laurent,
}

impl TryFrom<SchurRepr> for SchurElement {
    type Error = Error;
    fn try_from(r: SchurRepr) -> Result<Self> {
        let mut x = SchurElement::zero(r.n, r.d);
        for b in r.blocks {
            let lambda = FlagSymbol::new(r.n, b.lambda)?;
            let mu = FlagSymbol::new(r.n, b.mu)?;
            for t in b.terms {
                let s = PeriodicMatrix::from_entries(r.n, r.d, t.matrix)?;
                if s.left_dominant() != lambda || s.right_dominant() != mu {
                    return Err(Error::NotInBlock(format!("{s} in ({lambda}, {mu})")));
                }
                x.add_term(s, &t.coeff);
            }
        }
        Ok(x)
    }
}

impl From<SchurElement> for SchurRepr {
    fn from(x: SchurElement) -> Self {
        let blocks = x
            .blocks()
            .into_iter()
            .map(|((lambda, mu), terms)| BlockRepr {
                lambda: lambda.values().to_vec(),
                mu: mu.values().to_vec(),
                terms: terms
                    .into_iter()
                    .map(|(s, coeff)| MatrixTermRepr {
                        matrix: s.entries().collect(),
                        coeff,
                    })
                    .collect(),
            })
            .collect();
        SchurRepr {
            n: x.n,
            d: x.d,
            blocks,
        }
    }
}

/// `[s]` viewed in `T_lambda H_D`: `sum_{p in class(s)} v^{y_s - x_p} [p]`.
pub fn matrix_vector(s: &PeriodicMatrix) -> ModuleVector {
    let ys = s.y_stat() as i32;
    let mut out = ModuleVector::zero(s.n(), s.rank());
    for p in s.class_members() {
        let e = ys - p.x_stat() as i32;
        out.add_term(p, &Laurent::v_pow(e));
    }
    out
}

type Blocks = BTreeMap<(FlagSymbol, FlagSymbol), BTreeMap<PeriodicMatrix, Laurent>>;

impl SchurElement {
    pub fn zero(n: usize, d: usize) -> Self {
        SchurElement {
            n,
            d,
            terms: BTreeMap::new(),
        }
    }

    pub fn basis(s: PeriodicMatrix) -> Self {
        let mut x = Self::zero(s.n(), s.rank());
        x.terms.insert(s, Laurent::one());
        x
    }

    /// `[^delta lambda]`.
    pub fn idempotent(lambda: &FlagSymbol) -> Self {
        Self::basis(PeriodicMatrix::delta(lambda))
    }

    /// `sum_lambda [^delta lambda]`.
    pub fn identity(n: usize, d: usize) -> Self {
        let mut x = Self::zero(n, d);
        for lambda in FlagSymbol::dominant_symbols(n, d) {
            x.add_term(PeriodicMatrix::delta(&lambda), &Laurent::one());
        }
        x
    }

    pub fn from_terms(
        n: usize,
        d: usize,
        terms: impl IntoIterator<Item = (PeriodicMatrix, Laurent)>,
    ) -> Result<Self> {
        let mut x = Self::zero(n, d);
        for (s, c) in terms {
            if s.n() != n || s.rank() != d {
                return Err(Error::ShapeMismatch(n, d, s.n(), s.rank()));
            }
            x.add_term(s, &c);
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

    pub fn terms(&self) -> impl Iterator<Item = (&PeriodicMatrix, &Laurent)> {
        self.terms.iter()
    }

    pub fn coeff(&self, s: &PeriodicMatrix) -> Laurent {
        self.terms.get(s).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, s: PeriodicMatrix, c: &Laurent) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(s) {
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

    pub fn accumulate(&mut self, other: &SchurElement, c: &Laurent) {
        for (s, a) in &other.terms {
            self.add_term(s.clone(), &(a * c));
        }
    }

    pub fn scale(&self, c: &Laurent) -> Self {
        let mut out = Self::zero(self.n, self.d);
        out.accumulate(self, c);
        out
    }

    pub fn map_coefficients(&self, f: impl Fn(&PeriodicMatrix, &Laurent) -> Result<Laurent>) -> Result<Self> {
        let mut out = Self::zero(self.n, self.d);
        for (s, c) in &self.terms {
            out.add_term(s.clone(), &f(s, c)?);
        }
        Ok(out)
    }

    pub fn blocks(&self) -> Blocks {
        let mut out: Blocks = BTreeMap::new();
        for (s, c) in &self.terms {
            out.entry((s.left_dominant(), s.right_dominant()))
                .or_default()
                .insert(s.clone(), c.clone());
        }
        out
    }

    /// The part lying in `H_{lambda mu}`.
    pub fn block(&self, lambda: &FlagSymbol, mu: &FlagSymbol) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(s, _)| &s.left_dominant() == lambda && &s.right_dominant() == mu)
            .map(|(s, c)| (s.clone(), c.clone()))
            .collect();
        SchurElement {
            n: self.n,
            d: self.d,
            terms,
        }
    }

    /// The image of `T_mu` under the component with column weight `mu`.
    pub fn column_vector(&self, mu: &FlagSymbol) -> ModuleVector {
        let mut out = ModuleVector::zero(self.n, self.d);
        for (s, c) in &self.terms {
            if &s.right_dominant() == mu {
                out.accumulate(&matrix_vector(s), c);
            }
        }
        out
    }

    /// Reads a vector of `T_lambda H_D` lying in `H_{lambda nu}` back in the
    /// `[s]` basis; `lambda` may vary across the support.
    pub fn from_column_vector(nu: &FlagSymbol, x: &ModuleVector) -> Result<Self> {
        let mut groups: BTreeMap<PeriodicMatrix, Vec<(&FlagSymbol, &Laurent)>> = BTreeMap::new();
        for (p, c) in x.terms() {
            groups.entry(matrix_of_pair(p, nu)?).or_default().push((p, c));
        }
        let mut out = Self::zero(nu.n(), nu.rank());
        for (t, members) in groups {
            let yt = t.y_stat() as i32;
            let (p0, c0) = members[0];
            let coeff = c0 * &Laurent::v_pow(p0.x_stat() as i32 - yt);
            let expected = t.class_members().len();
            if members.len() != expected {
                return Err(Error::NotInBlock(format!(
                    "{} of {} members of the class of {t} present",
                    members.len(),
                    expected
                )));
            }
            for (p, c) in &members[1..] {
                if *c * &Laurent::v_pow(p.x_stat() as i32 - yt) != coeff {
                    return Err(Error::NotInBlock(format!("unequal coefficients on the class of {t}")));
                }
            }
            out.add_term(t, &coeff);
        }
        Ok(out)
    }

    /// The endomorphism applied to a vector of `T_D`.
    pub fn act(&self, x: &ModuleVector) -> Result<ModuleVector> {
        if x.n() != self.n || x.rank() != self.d {
            return Err(Error::ShapeMismatch(self.n, self.d, x.n(), x.rank()));
        }
        let mut columns: BTreeMap<FlagSymbol, ModuleVector> = BTreeMap::new();
        let mut out = ModuleVector::zero(self.n, self.d);
        for (p, c) in x.terms() {
            let (mu, k, word) = ascending_word(p);
            let col = columns
                .entry(mu.clone())
                .or_insert_with(|| self.column_vector(&mu));
            if col.is_zero() {
                continue;
            }
            let mut y = col.right_rotation(k);
            for i in word {
                y = y.right_simple(i);
            }
            out.accumulate(&y, &(c * &Laurent::v_pow(p.x_stat() as i32)));
        }
        Ok(out)
    }

    /// Composition of endomorphisms, `(self * other)(x) = self(other(x))`.
    pub fn mul(&self, other: &SchurElement) -> Result<SchurElement> {
        if self.n != other.n || self.d != other.d {
            return Err(Error::ShapeMismatch(self.n, self.d, other.n, other.d));
        }
        let mut out = Self::zero(self.n, self.d);
        let nus: std::collections::BTreeSet<FlagSymbol> =
            other.terms.keys().map(|s| s.right_dominant()).collect();
        for nu in nus {
            let img = self.act(&other.column_vector(&nu))?;
            out.accumulate(&Self::from_column_vector(&nu, &img)?, &Laurent::one());
        }
        Ok(out)
    }

    pub fn pow(&self, k: u32) -> Result<SchurElement> {
        let mut acc = Self::identity(self.n, self.d);
        for _ in 0..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    pub fn divide_exact(&self, den: &Laurent) -> Result<SchurElement> {
        self.map_coefficients(|_, c| c.divide_exact(den))
    }

    /// `tau([s]) = v^{-2 x_mu} bar([s])` for `s` in `H_{lambda mu}`.
    pub fn tau(&self) -> Result<SchurElement> {
        let mut out = Self::zero(self.n, self.d);
        for (s, c) in &self.terms {
            out.accumulate(&tau_basis(s)?, &c.bar());
        }
        Ok(out)
    }

    /// The sign character on `S_n`, nonzero only on the block of
    /// `(1, ..., n)`.
    pub fn epsilon_sign(&self) -> Result<Laurent> {
        if self.d != self.n {
            return Err(Error::Precondition(format!(
                "epsilon is defined on S_n, got n={} D={}",
                self.n, self.d
            )));
        }
        let ones = vec![1; self.n];
        let mut acc = Laurent::zero();
        for (s, c) in &self.terms {
            if s.row_weight() != ones || s.col_weight() != ones {
                continue;
            }
            let p = s.class_members().pop().expect("one member");
            let w = AffinePermutation::new(p.values().to_vec())?;
            let sign = HeckeElement::basis(w).sign_character();
            acc += &(c * &(&sign * &Laurent::v_pow(s.y_stat() as i32)));
        }
        Ok(acc)
    }

    /// Blockwise scalar `v^{e(s)}`, or `v^{-e(s)}` when `inverse`.
    pub fn psi_twist(&self, reading: PsiReading, inverse: bool) -> SchurElement {
        let mut out = Self::zero(self.n, self.d);
        for (s, c) in &self.terms {
            let e = reading.exponent(s) as i32;
            out.add_term(s.clone(), &(c * &Laurent::v_pow(if inverse { -e } else { e })));
        }
        out
    }
}

/// `tau([s])` expanded in the `[t]` basis.
pub fn tau_basis(s: &PeriodicMatrix) -> Result<SchurElement> {
    let mu = s.right_dominant();
    let img = matrix_vector(s).tau();
    let twist = Laurent::v_pow(-2 * mu.x_stat() as i32);
    Ok(SchurElement::from_column_vector(&mu, &img)?.scale(&twist))
}

/// How the exponent of the `psi` twist is read off a block.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PsiReading {
    /// Window sum of `lambda` minus window sum of `mu`.
    WindowSum,
    /// `sum_i (#lambda_i - #mu_i)`, always zero.
    Weight,
    /// `sum_{i in [1, n], j} (i - j) s_ij`.
    MatrixShift,
}

impl PsiReading {
    pub const ALL: [PsiReading; 3] = [PsiReading::WindowSum, PsiReading::Weight, PsiReading::MatrixShift];

    pub fn exponent(self, s: &PeriodicMatrix) -> i64 {
        match self {
            PsiReading::WindowSum => {
                let sum = |p: FlagSymbol| p.values().iter().sum::<i64>();
                sum(s.left_dominant()) - sum(s.right_dominant())
            }
            PsiReading::Weight => {
                let (r, c) = (s.row_weight(), s.col_weight());
                r.iter().zip(&c).map(|(&a, &b)| a as i64 - b as i64).sum()
            }
            PsiReading::MatrixShift => s.entries().map(|(i, j, v)| (i - j) * v as i64).sum(),
        }
    }
}

impl fmt::Display for PsiReading {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PsiReading::WindowSum => "window-sum",
            PsiReading::Weight => "weight",
            PsiReading::MatrixShift => "matrix-shift",
        })
    }
}

impl FromStr for PsiReading {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "window-sum" => Ok(PsiReading::WindowSum),
            "weight" => Ok(PsiReading::Weight),
            "matrix-shift" => Ok(PsiReading::MatrixShift),
            _ => Err(Error::Parse(format!("unknown psi reading `{s}`"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Generator {
    A,
    E,
    F,
}

/// `Phi_D(a_lambda)`, `Phi_D(a_lambda e_i)` or `Phi_D(f_i a_lambda)`.
pub fn phi_generator(kind: Generator, i: usize, lambda: &FlagSymbol) -> Result<SchurElement> {
    let (n, d) = (lambda.n(), lambda.rank());
    residue_row(i, n)?;
    if !lambda.is_dominant() {
        return Err(Error::NotDominant(lambda.values().to_vec()));
    }
    Ok(match kind {
        Generator::A => SchurElement::idempotent(lambda),
        Generator::E | Generator::F => match PeriodicMatrix::generator_matrices(lambda, i)? {
            None => SchurElement::zero(n, d),
            Some((s, t)) => SchurElement::basis(if kind == Generator::E { s } else { t }),
        },
    })
}

/// `Phi_D(e_i)` or `Phi_D(f_i)`, summed over all weights.
pub fn phi_chevalley(which: Chevalley, i: usize, n: usize, d: usize) -> Result<SchurElement> {
    let kind = match which {
        Chevalley::E => Generator::E,
        Chevalley::F => Generator::F,
    };
    let mut out = SchurElement::zero(n, d);
    for lambda in FlagSymbol::dominant_symbols(n, d) {
        out.accumulate(&phi_generator(kind, i, &lambda)?, &Laurent::one());
    }
    Ok(out)
}

/// One letter of a monomial in the modified algebra.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Letter {
    /// `e_i^{(k)}`
    E(usize, u32),
    /// `f_i^{(k)}`
    F(usize, u32),
    /// `a_mu`
    A(Vec<usize>),
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::E(i, 1) => write!(f, "e{i}"),
            Letter::F(i, 1) => write!(f, "f{i}"),
            Letter::E(i, k) => write!(f, "e{i}^({k})"),
            Letter::F(i, k) => write!(f, "f{i}^({k})"),
            Letter::A(mu) => {
                let v: Vec<String> = mu.iter().map(|x| x.to_string()).collect();
                write!(f, "a({})", v.join(","))
            }
        }
    }
}

impl FromStr for Letter {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad letter `{s}`"));
        if let Some(rest) = s.strip_prefix('a') {
            let inner = rest
                .strip_prefix('(')
                .and_then(|r| r.strip_suffix(')'))
                .ok_or_else(bad)?;
            let mu = inner
                .split(',')
                .map(|x| x.trim().parse::<usize>().map_err(|_| bad()))
                .collect::<Result<Vec<_>>>()?;
            return Ok(Letter::A(mu));
        }
        let (head, rest) = s.split_at(1.min(s.len()));
        let (idx, k) = match rest.split_once('^') {
            None => (rest, 1),
            Some((idx, pow)) => {
                let pow = pow.trim_start_matches('(').trim_end_matches(')');
                (idx, pow.parse::<u32>().map_err(|_| bad())?)
            }
        };
        let i = idx.parse::<usize>().map_err(|_| bad())?;
        match head {
            "e" => Ok(Letter::E(i, k)),
            "f" => Ok(Letter::F(i, k)),
            _ => Err(bad()),
        }
    }
}

/// A word in the generators, read as a product from left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct UdotMonomial(pub Vec<Letter>);

impl UdotMonomial {
    pub fn new(letters: Vec<Letter>) -> Self {
        UdotMonomial(letters)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &UdotMonomial) -> UdotMonomial {
        UdotMonomial(self.0.iter().chain(&other.0).cloned().collect())
    }

    /// The weight reached from `mu` by reading right to left, or `None` if
    /// it leaves `N^n` or an idempotent disagrees.
    pub fn output_weight(&self, mu: &[usize]) -> Option<Vec<usize>> {
        let n = mu.len();
        let mut w: Vec<i64> = mu.iter().map(|&x| x as i64).collect();
        for letter in self.0.iter().rev() {
            match letter {
                Letter::A(nu) => {
                    if nu.len() != n || nu.iter().zip(&w).any(|(&a, &b)| a as i64 != b) {
                        return None;
                    }
                }
                Letter::E(i, k) | Letter::F(i, k) => {
                    let r = residue_row(*i, n).ok()? as usize;
                    let (lo, hi) = (r - 1, r % n);
                    let k = *k as i64;
                    let sign = if matches!(letter, Letter::E(..)) { 1 } else { -1 };
                    w[lo] += sign * k;
                    w[hi] -= sign * k;
                }
            }
            if w.iter().any(|&x| x < 0) {
                return None;
            }
        }
        Some(w.into_iter().map(|x| x as usize).collect())
    }

    /// `phi(m) = c * m'`: idempotents lose `(1, ..., 1)`, `e_i` gains `v`
    /// and `f_i` gains `v^{-1}`; `None` when an idempotent vanishes.
    pub fn phi_twist(&self) -> Option<(Laurent, UdotMonomial)> {
        let mut exp = 0i32;
        let mut out = Vec::with_capacity(self.0.len());
        for letter in &self.0 {
            match letter {
                Letter::A(mu) => {
                    if mu.contains(&0) {
                        return None;
                    }
                    out.push(Letter::A(mu.iter().map(|x| x - 1).collect()));
                }
                Letter::E(_, k) => {
                    exp += *k as i32;
                    out.push(letter.clone());
                }
                Letter::F(_, k) => {
                    exp -= *k as i32;
                    out.push(letter.clone());
                }
            }
        }
        Some((Laurent::v_pow(exp), UdotMonomial(out)))
    }

    /// Drops the `v`-rescaling of `phi`: only the idempotents shift.
    pub fn shift_idempotents(&self) -> Option<UdotMonomial> {
        self.phi_twist().map(|(_, m)| m)
    }

    /// `tau` on monomials is the identity on letters.
    pub fn tau(&self) -> UdotMonomial {
        self.clone()
    }
}

impl fmt::Display for UdotMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("1");
        }
        let v: Vec<String> = self.0.iter().map(|l| l.to_string()).collect();
        f.write_str(&v.join(" "))
    }
}

impl FromStr for UdotMonomial {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" || s.is_empty() {
            return Ok(UdotMonomial::default());
        }
        s.split(|c: char| c.is_whitespace() || c == '*')
            .filter(|t| !t.is_empty())
            .map(str::parse)
            .collect::<Result<Vec<_>>>()
            .map(UdotMonomial)
    }
}

/// A linear combination of monomials.
pub type UdotElement = Vec<(Laurent, UdotMonomial)>;

fn phi_letter(letter: &Letter, n: usize, d: usize) -> Result<SchurElement> {
    match letter {
        Letter::A(mu) => {
            if mu.len() != n {
                return Err(Error::Precondition(format!("weight of length {} for n={n}", mu.len())));
            }
            if mu.iter().sum::<usize>() != d {
                return Ok(SchurElement::zero(n, d));
            }
            Ok(SchurElement::idempotent(&FlagSymbol::from_weight(mu)?))
        }
        Letter::E(i, k) | Letter::F(i, k) => {
            let which = if matches!(letter, Letter::E(..)) { Chevalley::E } else { Chevalley::F };
            let g = phi_chevalley(which, *i, n, d)?;
            g.pow(*k)?.divide_exact(&quantum_factorial(*k as i64)?)
        }
    }
}

/// `Phi_D(m)` as a product of generator images.
pub fn phi_monomial(m: &UdotMonomial, n: usize, d: usize) -> Result<SchurElement> {
    let mut acc = SchurElement::identity(n, d);
    for letter in m.letters() {
        acc = acc.mul(&phi_letter(letter, n, d)?)?;
        if acc.is_zero() {
            break;
        }
    }
    Ok(acc)
}

/// `Phi_D(m)` through the action on `T_D`: each column `T_mu` is sent to
/// `m T_mu` and read back in the `[s]` basis.
pub fn phi_monomial_by_action(m: &UdotMonomial, n: usize, d: usize) -> Result<SchurElement> {
    let mut out = SchurElement::zero(n, d);
    for mu in FlagSymbol::dominant_symbols(n, d) {
        let start = ModuleVector::basis(mu.clone()).scale(&Laurent::v_pow(-(mu.x_stat() as i32)));
        let img = act_monomial(m, &start)?;
        out.accumulate(&SchurElement::from_column_vector(&mu, &img)?, &Laurent::one());
    }
    Ok(out)
}

/// `m x` under the action on `T_D`, letters applied right to left.
pub fn act_monomial(m: &UdotMonomial, x: &ModuleVector) -> Result<ModuleVector> {
    let mut y = x.clone();
    for letter in m.letters().iter().rev() {
        y = match letter {
            Letter::A(mu) => y.apply_idempotent(mu),
            Letter::E(i, k) => y.apply_divided(Chevalley::E, *i, *k)?,
            Letter::F(i, k) => y.apply_divided(Chevalley::F, *i, *k)?,
        };
        if y.is_zero() {
            break;
        }
    }
    Ok(y)
}

pub fn phi_element(x: &UdotElement, n: usize, d: usize) -> Result<SchurElement> {
    let mut out = SchurElement::zero(n, d);
    for (c, m) in x {
        out.accumulate(&phi_monomial(m, n, d)?, c);
    }
    Ok(out)
}

pub fn act_element(x: &UdotElement, v: &ModuleVector) -> Result<ModuleVector> {
    let mut out = ModuleVector::zero(v.n(), v.rank());
    for (c, m) in x {
        out.accumulate(&act_monomial(m, v)?, c);
    }
    Ok(out)
}

/// Which neighbour enters the scalar of `[e_i, f_i] a_mu`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CommutatorForm {
    /// `[mu_i - mu_{i+1}]`
    NextIndex,
    /// `[mu_i - mu_{i-1}]`
    PreviousIndex,
}

impl CommutatorForm {
    pub fn argument(self, mu: &[usize], i: usize) -> Result<i64> {
        let n = mu.len();
        let r = residue_row(i, n)? as usize - 1;
        let other = match self {
            CommutatorForm::NextIndex => (r + 1) % n,
            CommutatorForm::PreviousIndex => (r + n - 1) % n,
        };
        Ok(mu[r] as i64 - mu[other] as i64)
    }
}

impl fmt::Display for CommutatorForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CommutatorForm::NextIndex => "next-index",
            CommutatorForm::PreviousIndex => "previous-index",
        })
    }
}

impl FromStr for CommutatorForm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "next-index" => Ok(CommutatorForm::NextIndex),
            "previous-index" => Ok(CommutatorForm::PreviousIndex),
            _ => Err(Error::Parse(format!("unknown commutator form `{s}`"))),
        }
    }
}

/// A named defining relation `sum c_m m = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Relation {
    pub name: String,
    pub terms: UdotElement,
}

fn mono(letters: Vec<Letter>) -> UdotMonomial {
    UdotMonomial(letters)
}

/// `a_ij` of type `A^{(1)}_{n-1}`.
pub fn cartan(n: usize, i: usize, j: usize) -> i64 {
    if i == j {
        2
    } else if n == 2 {
        -2
    } else if (i + 1) % n == j || (j + 1) % n == i {
        -1
    } else {
        0
    }
}

/// Every defining relation involving weights of total `d`.
pub fn defining_relations(n: usize, d: usize, form: CommutatorForm) -> Result<Vec<Relation>> {
    let one = Laurent::one;
    let ws = weights(n, d);
    let mut out = Vec::new();
    for nu in &ws {
        for mu in &ws {
            let mut terms = vec![(one(), mono(vec![Letter::A(nu.clone()), Letter::A(mu.clone())]))];
            if nu == mu {
                terms.push((-one(), mono(vec![Letter::A(mu.clone())])));
            }
            out.push(Relation {
                name: format!("a{nu:?} a{mu:?}"),
                terms,
            });
        }
    }
    let unit = |k: usize| {
        let mut w = vec![0; n];
        w[k] += 1;
        w
    };
    let plus = |a: &[usize], b: &[usize]| a.iter().zip(b).map(|(x, y)| x + y).collect::<Vec<_>>();
    for base in weights(n, d.saturating_sub(1)) {
        if d == 0 {
            break;
        }
        for i in 0..n {
            let r = residue_row(i, n)? as usize;
            let (wi, wi1) = (unit(r - 1), unit(r % n));
            out.push(Relation {
                name: format!("a e{i} = e{i} a at {base:?}"),
                terms: vec![
                    (one(), mono(vec![Letter::A(plus(&base, &wi)), Letter::E(i, 1)])),
                    (-one(), mono(vec![Letter::E(i, 1), Letter::A(plus(&base, &wi1))])),
                ],
            });
            out.push(Relation {
                name: format!("a f{i} = f{i} a at {base:?}"),
                terms: vec![
                    (one(), mono(vec![Letter::A(plus(&base, &wi1)), Letter::F(i, 1)])),
                    (-one(), mono(vec![Letter::F(i, 1), Letter::A(plus(&base, &wi))])),
                ],
            });
        }
    }
    for mu in &ws {
        for i in 0..n {
            for j in 0..n {
                let mut terms = vec![
                    (one(), mono(vec![Letter::E(i, 1), Letter::F(j, 1), Letter::A(mu.clone())])),
                    (-one(), mono(vec![Letter::F(j, 1), Letter::E(i, 1), Letter::A(mu.clone())])),
                ];
                if i == j {
                    let m = form.argument(mu, i)?;
                    terms.push((-quantum_integer(m), mono(vec![Letter::A(mu.clone())])));
                }
                out.push(Relation {
                    name: format!("[e{i}, f{j}] a{mu:?}"),
                    terms,
                });
            }
        }
    }
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let top = (1 - cartan(n, i, j)) as u32;
            for (tag, mk) in [("e", Letter::E as fn(usize, u32) -> Letter), ("f", Letter::F)] {
                let terms = (0..=top)
                    .map(|k| {
                        let sign = if k % 2 == 0 { one() } else { -one() };
                        let mut letters = Vec::new();
                        if k > 0 {
                            letters.push(mk(i, k));
                        }
                        letters.push(mk(j, 1));
                        if top - k > 0 {
                            letters.push(mk(i, top - k));
                        }
                        (sign, mono(letters))
                    })
                    .collect();
                out.push(Relation {
                    name: format!("Serre {tag} ({i}, {j})"),
                    terms,
                });
            }
        }
    }
    Ok(out)
}

impl Add for &SchurElement {
    type Output = SchurElement;
    fn add(self, rhs: &SchurElement) -> SchurElement {
        let mut out = self.clone();
        out.accumulate(rhs, &Laurent::one());
        out
    }
}

impl Sub for &SchurElement {
    type Output = SchurElement;
    fn sub(self, rhs: &SchurElement) -> SchurElement {
        let mut out = self.clone();
        out.accumulate(rhs, &-Laurent::one());
        out
    }
}

impl Neg for &SchurElement {
    type Output = SchurElement;
    fn neg(self) -> SchurElement {
        self.scale(&-Laurent::one())
    }
}

impl fmt::Display for SchurElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let parts: Vec<String> = self.terms.iter().map(|(s, c)| format!("({c}){s}")).collect();
        f.write_str(&parts.join(" + "))
    }
}

impl fmt::Debug for SchurElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
