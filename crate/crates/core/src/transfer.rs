//! Comultiplication on generators, the induced map on images, and the
//! rank-lowering transfer `S_{D+n} -> S_D` computed two ways.

use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};

use crate::canonical::{canonical_schur, CanonicalExpansion};
use crate::error::{Error, Result};
use crate::flag_comb::{residue_row, weights, FlagSymbol, OrderHint, PeriodicMatrix};
use crate::laurent::{quantum_factorial, Laurent};
use crate::rational::Rational;
use crate::schur::{
    phi_generator, phi_monomial_by_action, Generator, Letter, PsiReading, SchurElement, UdotMonomial,
};
use crate::tmodule::{Chevalley, ModuleVector};

/// `a_lambda`, `a_lambda e_i` or `f_i a_lambda`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DeltaInput {
    A,
    AE(usize),
    FA(usize),
}

/// `coeff * (left ⊗ right)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaTerm {
    pub coeff: Laurent,
    pub left: UdotMonomial,
    pub right: UdotMonomial,
}

fn splittings(lambda: &[usize]) -> Vec<(Vec<usize>, Vec<usize>)> {
    let mut out = vec![(Vec::new(), Vec::new())];
    for &x in lambda {
        out = out
            .into_iter()
            .flat_map(|(a, b)| {
                (0..=x).map(move |k| {
                    let mut a = a.clone();
                    let mut b = b.clone();
                    a.push(k);
                    b.push(x - k);
                    (a, b)
                })
            })
            .collect();
    }
    out
}

/// `Delta(g)` for a generator carrying weight `lambda`.
pub fn delta_generator(g: &DeltaInput, lambda: &[usize]) -> Result<Vec<DeltaTerm>> {
    let n = lambda.len();
    let mut out = Vec::new();
    for (l1, l2) in splittings(lambda) {
        let a1 = Letter::A(l1.clone());
        let a2 = Letter::A(l2.clone());
        match *g {
            DeltaInput::A => out.push(DeltaTerm {
                coeff: Laurent::one(),
                left: UdotMonomial::new(vec![a1]),
                right: UdotMonomial::new(vec![a2]),
            }),
            DeltaInput::AE(i) => {
                let r = residue_row(i, n)? as usize - 1;
                out.push(DeltaTerm {
                    coeff: Laurent::v_pow(l1[r] as i32),
                    left: UdotMonomial::new(vec![a1.clone()]),
                    right: UdotMonomial::new(vec![a2.clone(), Letter::E(i, 1)]),
                });
                out.push(DeltaTerm {
                    coeff: Laurent::v_pow(-(l2[r] as i32)),
                    left: UdotMonomial::new(vec![a1, Letter::E(i, 1)]),
                    right: UdotMonomial::new(vec![a2]),
                });
            }
            DeltaInput::FA(i) => {
                let r1 = residue_row(i, n)? as usize % n;
                out.push(DeltaTerm {
                    coeff: Laurent::v_pow(-(l1[r1] as i32)),
                    left: UdotMonomial::new(vec![a1.clone()]),
                    right: UdotMonomial::new(vec![Letter::F(i, 1), a2.clone()]),
                });
                out.push(DeltaTerm {
                    coeff: Laurent::v_pow(l2[r1] as i32),
                    left: UdotMonomial::new(vec![Letter::F(i, 1), a1]),
                    right: UdotMonomial::new(vec![a2]),
                });
            }
        }
    }
    Ok(out)
}

/// A finite sum of `[s_1] ⊗ [s_2]` in `S_{D1} ⊗ S_{D2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorElement {
    n: usize,
    d1: usize,
    d2: usize,
    terms: BTreeMap<(PeriodicMatrix, PeriodicMatrix), Laurent>,
}

type ProductCache = HashMap<(PeriodicMatrix, PeriodicMatrix), SchurElement>;

fn basis_product(cache: &mut ProductCache, a: &PeriodicMatrix, b: &PeriodicMatrix) -> Result<SchurElement> {
    if a.col_weight() != b.row_weight() {
        return Ok(SchurElement::zero(a.n(), a.rank()));
    }
    if let Some(hit) = cache.get(&(a.clone(), b.clone())) {
        return Ok(hit.clone());
    }
    let p = SchurElement::basis(a.clone()).mul(&SchurElement::basis(b.clone()))?;
    cache.insert((a.clone(), b.clone()), p.clone());
    Ok(p)
}

impl TensorElement {
    pub fn zero(n: usize, d1: usize, d2: usize) -> Self {
        TensorElement {
            n,
            d1,
            d2,
            terms: BTreeMap::new(),
        }
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

    pub fn terms(&self) -> impl Iterator<Item = (&(PeriodicMatrix, PeriodicMatrix), &Laurent)> {
        self.terms.iter()
    }

    fn add_term(&mut self, key: (PeriodicMatrix, PeriodicMatrix), c: &Laurent) {
        if c.is_zero() {
            return;
        }
        let slot = self.terms.entry(key.clone()).or_default();
        *slot += c;
        if slot.is_zero() {
            self.terms.remove(&key);
        }
    }

    /// `c * (x ⊗ y)`.
    pub fn add_pure(&mut self, x: &SchurElement, y: &SchurElement, c: &Laurent) {
        for (s1, a) in x.terms() {
            for (s2, b) in y.terms() {
                self.add_term((s1.clone(), s2.clone()), &(&(a * b) * c));
            }
        }
    }

    pub fn mul(&self, other: &TensorElement, cache: &mut (ProductCache, ProductCache)) -> Result<TensorElement> {
        let mut out = Self::zero(self.n, self.d1, self.d2);
        for ((a1, a2), c) in &self.terms {
            for ((b1, b2), d) in &other.terms {
                let x = basis_product(&mut cache.0, a1, b1)?;
                if x.is_zero() {
                    continue;
                }
                let y = basis_product(&mut cache.1, a2, b2)?;
                out.add_pure(&x, &y, &(c * d));
            }
        }
        Ok(out)
    }

    pub fn divide_exact(&self, den: &Laurent) -> Result<TensorElement> {
        let mut out = Self::zero(self.n, self.d1, self.d2);
        for (k, c) in &self.terms {
            out.add_term(k.clone(), &c.divide_exact(den)?);
        }
        Ok(out)
    }

    /// `(epsilon ⊗ 1)`, defined when `D1 = n`.
    pub fn epsilon_first(&self) -> Result<SchurElement> {
        let mut out = SchurElement::zero(self.n, self.d2);
        for ((s1, s2), c) in &self.terms {
            let e = SchurElement::basis(s1.clone()).epsilon_sign()?;
            out.add_term(s2.clone(), &(c * &e));
        }
        Ok(out)
    }
}

/// `(Phi_{D1} ⊗ Phi_{D2})(Delta(letter))`.
fn omega_letter(letter: &Letter, n: usize, d1: usize, d2: usize, cache: &mut (ProductCache, ProductCache)) -> Result<TensorElement> {
    let mut out = TensorElement::zero(n, d1, d2);
    match letter {
        Letter::A(mu) => {
            for (l1, l2) in splittings(mu) {
                if l1.iter().sum::<usize>() == d1 && l2.iter().sum::<usize>() == d2 {
                    let x = SchurElement::idempotent(&FlagSymbol::from_weight(&l1)?);
                    let y = SchurElement::idempotent(&FlagSymbol::from_weight(&l2)?);
                    out.add_pure(&x, &y, &Laurent::one());
                }
            }
            Ok(out)
        }
        Letter::E(i, k) | Letter::F(i, k) => {
            let is_e = matches!(letter, Letter::E(..));
            let r = residue_row(*i, n)? as usize - 1;
            let r1 = (r + 1) % n;
            for w1 in weights(n, d1) {
                let lam1 = FlagSymbol::from_weight(&w1)?;
                for w2 in weights(n, d2) {
                    let lam2 = FlagSymbol::from_weight(&w2)?;
                    let (kind, e1, e2) = if is_e {
                        (Generator::E, w1[r] as i32, -(w2[r] as i32))
                    } else {
                        (Generator::F, -(w1[r1] as i32), w2[r1] as i32)
                    };
                    let id1 = SchurElement::idempotent(&lam1);
                    let id2 = SchurElement::idempotent(&lam2);
                    out.add_pure(&id1, &phi_generator(kind, *i, &lam2)?, &Laurent::v_pow(e1));
                    out.add_pure(&phi_generator(kind, *i, &lam1)?, &id2, &Laurent::v_pow(e2));
                }
            }
            let mut acc = out.clone();
            for _ in 1..*k {
                acc = acc.mul(&out, cache)?;
            }
            acc.divide_exact(&quantum_factorial(*k as i64)?)
        }
    }
}

/// `(Phi_{D1} ⊗ Phi_{D2})(Delta(m))`, multiplied leg-wise.
pub fn omega_route(m: &UdotMonomial, n: usize, d1: usize, d2: usize) -> Result<TensorElement> {
    let mut cache = (ProductCache::new(), ProductCache::new());
    let mut acc: Option<TensorElement> = None;
    for letter in m.letters() {
        let g = omega_letter(letter, n, d1, d2, &mut cache)?;
        acc = Some(match acc {
            None => g,
            Some(a) => a.mul(&g, &mut cache)?,
        });
        if acc.as_ref().is_some_and(TensorElement::is_zero) {
            break;
        }
    }
    match acc {
        Some(a) => Ok(a),
        None => {
            let mut out = TensorElement::zero(n, d1, d2);
            out.add_pure(&SchurElement::identity(n, d1), &SchurElement::identity(n, d2), &Laurent::one());
            Ok(out)
        }
    }
}

/// `(epsilon ⊗ 1) Omega_{n D} Phi_{D+n}(m)`, before the `psi` twist.
pub fn route_b_untwisted(m: &UdotMonomial, n: usize, d: usize) -> Result<SchurElement> {
    omega_route(m, n, n, d)?.epsilon_first()
}

/// `psi (epsilon ⊗ 1) Omega_{n D} Phi_{D+n}(m)`.
pub fn route_b(m: &UdotMonomial, n: usize, d: usize, reading: PsiReading) -> Result<SchurElement> {
    Ok(route_b_untwisted(m, n, d)?.psi_twist(reading, false))
}

/// `Phi_D(m)` where `m` is read at rank `D + n` and its idempotents are
/// shifted down by `(1, ..., 1)`; zero if one of them leaves `N^n`.
pub fn phi_shifted(m: &UdotMonomial, n: usize, d: usize) -> Result<SchurElement> {
    match m.shift_idempotents() {
        Some(m2) => phi_monomial_by_action(&m2, n, d),
        None => Ok(SchurElement::zero(n, d)),
    }
}

/// `Phi_D(phi(m))`.
pub fn phi_twisted(m: &UdotMonomial, n: usize, d: usize) -> Result<SchurElement> {
    match m.phi_twist() {
        Some((c, m2)) => Ok(phi_monomial_by_action(&m2, n, d)?.scale(&c)),
        None => Ok(SchurElement::zero(n, d)),
    }
}

type RVec = BTreeMap<PeriodicMatrix, Rational>;

fn to_rvec(x: &SchurElement) -> RVec {
    x.terms().map(|(s, c)| (s.clone(), Rational::from(c.clone()))).collect()
}

fn axpy(y: &mut RVec, a: &Rational, x: &RVec) {
    for (k, v) in x {
        let slot = y.entry(k.clone()).or_insert_with(Rational::zero);
        *slot = &*slot + &(a * v);
        if slot.is_zero() {
            y.remove(k);
        }
    }
}

fn combo_axpy(y: &mut BTreeMap<usize, Rational>, a: &Rational, x: &BTreeMap<usize, Rational>) {
    for (k, v) in x {
        let slot = y.entry(*k).or_insert_with(Rational::zero);
        *slot = &*slot + &(a * v);
        if slot.is_zero() {
            y.remove(k);
        }
    }
}

#[derive(Clone, Debug)]
struct EchelonRow {
    pivot: PeriodicMatrix,
    vec: RVec,
    combo: BTreeMap<usize, Rational>,
}

/// Images `Phi_{D+n}(m)` of a list of monomials with an exact echelon form,
/// together with the rank-`D` values `Phi_D(m)` they transfer to.
#[derive(Clone, Debug)]
pub struct MonomialSpan {
    n: usize,
    d: usize,
    monomials: Vec<UdotMonomial>,
    images: Vec<SchurElement>,
    low: Vec<SchurElement>,
    rows: Vec<EchelonRow>,
}

fn pick_pivot(v: &RVec) -> PeriodicMatrix {
    v.keys()
        .max_by(|a, b| a.y_stat().cmp(&b.y_stat()).then(a.cmp(b)))
        .expect("nonzero")
        .clone()
}

impl MonomialSpan {
    /// An empty span for images at rank `d`; transfers land at `d - n`.
    pub fn new(n: usize, d: usize) -> Result<Self> {
        if d < n {
            return Err(Error::Precondition(format!("rank {d} is below n={n}")));
        }
        Ok(MonomialSpan {
            n,
            d,
            monomials: Vec::new(),
            images: Vec::new(),
            low: Vec::new(),
            rows: Vec::new(),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.d
    }

    pub fn dimension(&self) -> usize {
        self.rows.len()
    }

    pub fn monomials(&self) -> &[UdotMonomial] {
        &self.monomials
    }

    pub fn images(&self) -> &[SchurElement] {
        &self.images
    }

    fn reduce(&self, x: &RVec) -> (RVec, BTreeMap<usize, Rational>) {
        let mut res = x.clone();
        let mut combo = BTreeMap::new();
        for row in &self.rows {
            if let Some(c) = res.get(&row.pivot).cloned() {
                axpy(&mut res, &-&c, &row.vec);
                combo_axpy(&mut combo, &c, &row.combo);
            }
        }
        (res, combo)
    }

    /// Adds `m`; returns whether its image is new. A dependent image whose
    /// relation does not transfer to zero is a hard error.
    pub fn push(&mut self, m: UdotMonomial) -> Result<bool> {
        let img = phi_monomial_by_action(&m, self.n, self.d)?;
        self.push_with_image(m, img)
    }

    fn push_with_image(&mut self, m: UdotMonomial, img: SchurElement) -> Result<bool> {
        let low = phi_shifted(&m, self.n, self.d - self.n)?;
        let idx = self.monomials.len();
        let (res, combo) = self.reduce(&to_rvec(&img));
        self.monomials.push(m);
        self.images.push(img);
        self.low.push(low);
        if res.is_empty() {
            // image(idx) = sum combo; its transfer must agree
            let mut rel = to_rvec(&self.low[idx]);
            for (j, c) in &combo {
                axpy(&mut rel, &-c, &to_rvec(&self.low[*j]));
            }
            if !rel.is_empty() {
                return Err(Error::PreimageDependence(format!(
                    "{} has the same image as a combination of earlier monomials but a different transfer",
                    self.monomials[idx]
                )));
            }
            return Ok(false);
        }
        let pivot = pick_pivot(&res);
        let inv = res[&pivot].inv()?;
        let mut vec = RVec::new();
        axpy(&mut vec, &inv, &res);
        let mut row_combo = BTreeMap::from([(idx, inv.clone())]);
        combo_axpy(&mut row_combo, &-&inv, &combo);
        self.rows.push(EchelonRow {
            pivot,
            vec,
            combo: row_combo,
        });
        Ok(true)
    }

    /// Monomials `l_1 ... l_k a_mu` with `k <= max_len`, letters `e_i^{(p)}`,
    /// `f_i^{(p)}` with `p <= max_power`, built by left extension and
    /// deduplicated by image.
    pub fn generate(
        n: usize,
        d: usize,
        mu: &[usize],
        max_len: usize,
        max_power: u32,
        cap: usize,
    ) -> Result<Self> {
        let mut span = Self::new(n, d)?;
        if mu.iter().sum::<usize>() != d {
            return Ok(span);
        }
        let lam = FlagSymbol::from_weight(mu)?;
        let start_vec = ModuleVector::basis(lam.clone()).scale(&Laurent::v_pow(-(lam.x_stat() as i32)));
        let start = UdotMonomial::new(vec![Letter::A(mu.to_vec())]);
        let mut seen: HashSet<ModuleVector> = HashSet::new();
        seen.insert(start_vec.clone());
        let img = SchurElement::from_column_vector(&lam, &start_vec)?;
        span.push_with_image(start.clone(), img)?;
        let mut frontier = vec![(start, start_vec)];
        let letters: Vec<Letter> = (0..n)
            .flat_map(|i| (1..=max_power).flat_map(move |p| [Letter::E(i, p), Letter::F(i, p)]))
            .collect();
        for _ in 0..max_len {
            let mut next = Vec::new();
            for (m, x) in &frontier {
                for l in &letters {
                    let y = match l {
                        Letter::E(i, p) => x.apply_divided(Chevalley::E, *i, *p)?,
                        Letter::F(i, p) => x.apply_divided(Chevalley::F, *i, *p)?,
                        Letter::A(_) => unreachable!(),
                    };
                    if y.is_zero() || !seen.insert(y.clone()) {
                        continue;
                    }
                    if seen.len() > cap {
                        return Err(Error::CapExceeded { cap });
                    }
                    let m2 = UdotMonomial::new(vec![l.clone()]).concat(m);
                    let img = SchurElement::from_column_vector(&lam, &y)?;
                    span.push_with_image(m2.clone(), img)?;
                    next.push((m2, y));
                }
            }
            frontier = next;
        }
        Ok(span)
    }

    /// Coefficients `c_m` with `x = sum c_m Phi_{D+n}(m)`.
    pub fn solve(&self, x: &SchurElement) -> Result<BTreeMap<usize, Rational>> {
        if x.n() != self.n || x.rank() != self.d {
            return Err(Error::ShapeMismatch(self.n, self.d, x.n(), x.rank()));
        }
        let (res, combo) = self.reduce(&to_rvec(x));
        if !res.is_empty() {
            let support: Vec<String> = res.keys().map(|s| s.to_string()).collect();
            return Err(Error::NotInSpan(support.join(", ")));
        }
        Ok(combo)
    }

    pub fn contains(&self, x: &SchurElement) -> bool {
        self.solve(x).is_ok()
    }

    fn combine(&self, combo: &BTreeMap<usize, Rational>, f: impl Fn(usize) -> Result<SchurElement>) -> Result<SchurElement> {
        let mut acc = RVec::new();
        for (j, c) in combo {
            axpy(&mut acc, c, &to_rvec(&f(*j)?));
        }
        let mut out = SchurElement::zero(self.n, self.d - self.n);
        for (s, c) in acc {
            let l = c
                .to_laurent()
                .ok_or_else(|| Error::Internal(format!("non-Laurent coefficient {c} at {s}")))?;
            out.add_term(s, &l);
        }
        Ok(out)
    }

    /// Route A: solve, then map each monomial to `Phi_D(m)`.
    pub fn transfer_map(&self, x: &SchurElement) -> Result<SchurElement> {
        let combo = self.solve(x)?;
        self.combine(&combo, |j| Ok(self.low[j].clone()))
    }

    /// Route B: `psi (epsilon ⊗ 1) Omega` on the same preimage.
    pub fn transfer_route_b(&self, x: &SchurElement, reading: PsiReading) -> Result<SchurElement> {
        let combo = self.solve(x)?;
        self.combine(&combo, |j| route_b(&self.monomials[j], self.n, self.d - self.n, reading))
    }
}

/// Per-block spans for every column weight at rank `d`.
pub fn spans_by_column(n: usize, d: usize, max_len: usize, max_power: u32, cap: usize) -> Result<BTreeMap<Vec<usize>, MonomialSpan>> {
    weights(n, d)
        .into_iter()
        .map(|mu| Ok((mu.clone(), MonomialSpan::generate(n, d, &mu, max_len, max_power, cap)?)))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeadingTermReport {
    pub input: PeriodicMatrix,
    pub target: PeriodicMatrix,
    pub output: SchurElement,
    pub leading: Laurent,
    /// Support matrices whose diagonal rules out lying below the target.
    pub violations: Vec<PeriodicMatrix>,
    pub pass: bool,
}

/// Transfers `[s]` and inspects the coefficient of `[s - I]`.
pub fn check_leading_term(s: &PeriodicMatrix, span: &MonomialSpan) -> Result<LeadingTermReport> {
    let t = s
        .minus_identity()
        .ok_or_else(|| Error::Precondition(format!("{s} has a zero diagonal entry")))?;
    let output = span.transfer_map(&SchurElement::basis(s.clone()))?;
    let leading = output.coeff(&t);
    let mut violations = Vec::new();
    for (u, _) in output.terms() {
        if u != &t && PeriodicMatrix::order_hint(u, &t)? == OrderHint::DefinitelyNotLeq {
            violations.push(u.clone());
        }
    }
    let pass = !leading.is_zero() && violations.is_empty();
    Ok(LeadingTermReport {
        input: s.clone(),
        target: t,
        output,
        leading,
        violations,
        pass,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    MatchesA,
    MatchesB,
    Counterexample,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TransferReport {
    pub input: PeriodicMatrix,
    #[serde(rename = "route-A")]
    pub route_a: SchurElement,
    #[serde(rename = "route-B")]
    pub route_b: SchurElement,
    pub expected: SchurElement,
    pub verdict: Verdict,
}

/// Transfers `b_s` and compares with `0` or `b_{s - I}`.
pub fn check_canonical_transfer(
    s: &PeriodicMatrix,
    span: &MonomialSpan,
    reading: PsiReading,
    canonical: impl Fn(&PeriodicMatrix) -> Result<CanonicalExpansion<PeriodicMatrix>>,
) -> Result<TransferReport> {
    if !s.is_aperiodic() {
        return Err(Error::Precondition(format!("{s} is not aperiodic")));
    }
    let bs = canonical(s)?.to_schur();
    let route_a = span.transfer_map(&bs)?;
    let route_b = span.transfer_route_b(&bs, reading)?;
    let (expected, case) = match s.minus_identity() {
        None => (SchurElement::zero(s.n(), s.rank() - s.n()), Verdict::MatchesA),
        Some(t) => (canonical(&t)?.to_schur(), Verdict::MatchesB),
    };
    let verdict = if route_a == expected && route_b == expected {
        case
    } else {
        Verdict::Counterexample
    };
    Ok(TransferReport {
        input: s.clone(),
        route_a,
        route_b,
        expected,
        verdict,
    })
}

/// Aperiodic matrices of rank `d` within the band, as the sweep's inputs.
pub fn aperiodic_in_band(n: usize, d: usize, band: i64) -> Vec<PeriodicMatrix> {
    PeriodicMatrix::enumerate_band(n, d, band)
        .into_iter()
        .filter(|s| s.is_aperiodic())
        .collect()
}

/// Transfers every aperiodic `b_s` of rank `d + n` within the band.
pub fn canonical_sweep(
    n: usize,
    d: usize,
    band: i64,
    max_len: usize,
    max_power: u32,
    reading: PsiReading,
) -> Result<Vec<TransferReport>> {
    let spans = spans_by_column(n, d + n, max_len, max_power, 200_000)?;
    let mut out = Vec::new();
    for s in aperiodic_in_band(n, d + n, band) {
        let span = &spans[&s.col_weight()];
        out.push(check_canonical_transfer(&s, span, reading, |x| {
            canonical_schur(x, crate::canonical::DEFAULT_CAP)
        })?);
    }
    Ok(out)
}

/// Monomials `w a_mu` with `w` a word of length `<= max_len` in `e_i`, `f_i`
/// (exponent one) and `mu` a weight of total `d`.
pub fn short_monomials(n: usize, d: usize, max_len: usize) -> Vec<UdotMonomial> {
    let letters: Vec<Letter> = (0..n).flat_map(|i| [Letter::E(i, 1), Letter::F(i, 1)]).collect();
    let mut words: Vec<Vec<Letter>> = vec![Vec::new()];
    let mut all = vec![Vec::new()];
    for _ in 0..max_len {
        words = words
            .iter()
            .flat_map(|w| letters.iter().map(move |l| {
                let mut w = w.clone();
                w.insert(0, l.clone());
                w
            }))
            .collect();
        all.extend(words.iter().cloned());
    }
    let mut out = Vec::new();
    for mu in weights(n, d) {
        for w in &all {
            let mut letters = w.clone();
            letters.push(Letter::A(mu.clone()));
            out.push(UdotMonomial::new(letters));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schur::{defining_relations, CommutatorForm};

    fn m(s: &str) -> UdotMonomial {
        s.parse().unwrap()
    }

    #[test]
    fn delta_term_counts() {
        let a = delta_generator(&DeltaInput::A, &[1, 1]).unwrap();
        assert_eq!(a.len(), 4);
        let e = delta_generator(&DeltaInput::AE(1), &[1, 1]).unwrap();
        assert_eq!(e.len(), 8);
        for t in delta_generator(&DeltaInput::FA(0), &[2, 1]).unwrap() {
            let w = |x: &UdotMonomial| {
                x.letters()
                    .iter()
                    .find_map(|l| match l {
                        Letter::A(w) => Some(w.clone()),
                        _ => None,
                    })
                    .unwrap()
            };
            let (a, b) = (w(&t.left), w(&t.right));
            assert_eq!(vec![a[0] + b[0], a[1] + b[1]], vec![2, 1]);
        }
    }

    #[test]
    fn omega_on_idempotent() {
        let t = omega_route(&m("a(1,1)"), 2, 1, 1).unwrap();
        assert_eq!(t.len(), 2);
        let t = omega_route(&m("e1 a(0,2)"), 2, 1, 1).unwrap();
        assert_eq!(t.len(), 2);
    }

    #[test]
    fn omega_kills_relations() {
        for rel in defining_relations(2, 2, CommutatorForm::NextIndex).unwrap() {
            let mut acc = TensorElement::zero(2, 1, 1);
            for (c, mono) in &rel.terms {
                let t = omega_route(mono, 2, 1, 1).unwrap();
                for ((a, b), x) in t.terms() {
                    acc.add_term((a.clone(), b.clone()), &(x * c));
                }
            }
            assert!(acc.is_zero(), "{}", rel.name);
        }
    }

    #[test]
    fn untwisted_route_is_phi_composed_with_phi_twist() {
        for mono in short_monomials(2, 4, 2) {
            assert_eq!(
                route_b_untwisted(&mono, 2, 2).unwrap(),
                phi_twisted(&mono, 2, 2).unwrap(),
                "{mono}"
            );
        }
    }

    #[test]
    fn exactly_one_psi_reading() {
        let monos = short_monomials(2, 4, 3);
        let passing: Vec<PsiReading> = PsiReading::ALL
            .into_iter()
            .filter(|&r| {
                monos
                    .iter()
                    .all(|mono| route_b(mono, 2, 2, r).unwrap() == phi_shifted(mono, 2, 2).unwrap())
            })
            .collect();
        assert_eq!(passing, vec![PsiReading::MatrixShift]);
    }

    #[test]
    fn transfer_of_idempotent() {
        let span = MonomialSpan::generate(2, 4, &[2, 2], 2, 2, 10_000).unwrap();
        let lam = FlagSymbol::from_weight(&[2, 2]).unwrap();
        let out = span.transfer_map(&SchurElement::idempotent(&lam)).unwrap();
        assert_eq!(out, SchurElement::idempotent(&FlagSymbol::from_weight(&[1, 1]).unwrap()));
        let rep = check_leading_term(&PeriodicMatrix::delta(&lam), &span).unwrap();
        assert!(rep.pass);
        assert!(check_leading_term(&PeriodicMatrix::diagonal(&[4, 0]), &span).is_err());
    }

    #[test]
    fn canonical_sweep_band_one() {
        let reports = canonical_sweep(2, 2, 1, 4, 3, PsiReading::MatrixShift).unwrap();
        assert!(!reports.is_empty());
        assert!(reports.iter().all(|r| r.verdict != Verdict::Counterexample));
        assert!(reports.iter().any(|r| r.verdict == Verdict::MatchesA));
        assert!(reports.iter().any(|r| r.verdict == Verdict::MatchesB));
    }

    #[test]
    fn not_in_span_reported() {
        let span = MonomialSpan::generate(2, 4, &[2, 2], 0, 1, 100).unwrap();
        let (s, _) = PeriodicMatrix::generator_matrices(&FlagSymbol::from_weight(&[2, 2]).unwrap(), 1)
            .unwrap()
            .unwrap();
        assert!(matches!(span.transfer_map(&SchurElement::basis(s)), Err(Error::NotInSpan(_))));
    }
}

