//! The extended affine symmetric group of type `GL_D`.
//!
//! An element is a bijection `w: Z -> Z` with `w(i + D) = w(i) + D`, stored
//! through its window `(w(1), ..., w(D))`. Products are composition,
//! `(w w')(i) = w(w'(i))`. Every element factors uniquely as
//! `rho^k * u` with `rho(i) = i + 1` of length zero and `u` in the affine
//! Coxeter group generated by `s_0, ..., s_{D-1}`.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flag_comb::FlagSymbol;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct AffinePermutation {
    window: Vec<i64>,
}

impl TryFrom<Vec<i64>> for AffinePermutation {
    type Error = Error;
    fn try_from(window: Vec<i64>) -> Result<Self> {
        Self::new(window)
    }
}

impl From<AffinePermutation> for Vec<i64> {
    fn from(w: AffinePermutation) -> Self {
        w.window
    }
}

impl AffinePermutation {
    pub fn new(window: Vec<i64>) -> Result<Self> {
        let d = window.len() as i64;
        if d == 0 {
            return Err(Error::NotABijection(window));
        }
        let residues: HashSet<i64> = window.iter().map(|x| x.mod_floor(&d)).collect();
        if residues.len() != window.len() {
            return Err(Error::NotABijection(window));
        }
        Ok(Self { window })
    }

    pub fn identity(d: usize) -> Self {
        Self {
            window: (1..=d as i64).collect(),
        }
    }

    /// `rho^k`, i.e. `i -> i + k`.
    pub fn rotation(d: usize, k: i64) -> Self {
        Self {
            window: (1..=d as i64).map(|i| i + k).collect(),
        }
    }

    /// The simple reflection `s_i`, `i` read modulo `D`. Requires `D >= 2`.
    pub fn simple(d: usize, i: usize) -> Self {
        Self::identity(d).mul_simple(i)
    }

    /// The translation `i -> i + D mu_i` on the window.
    pub fn translation(mu: &[i64]) -> Self {
        let d = mu.len() as i64;
        Self {
            window: mu.iter().zip(1..).map(|(m, i)| i + d * m).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.window.len()
    }

    pub fn window(&self) -> &[i64] {
        &self.window
    }

    /// `w(i)` for any integer `i`.
    pub fn eval(&self, i: i64) -> i64 {
        let d = self.window.len() as i64;
        let (q, r) = (i - 1).div_mod_floor(&d);
        self.window[r as usize] + q * d
    }

    pub fn is_identity(&self) -> bool {
        self.window.iter().zip(1..).all(|(&w, i)| w == i)
    }

    fn check_rank(&self, other: &Self) -> Result<()> {
        if self.rank() != other.rank() {
            return Err(Error::RankMismatch(self.rank(), other.rank()));
        }
        Ok(())
    }

    /// `self * other`, acting as `other` first.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.check_rank(other)?;
        Ok(Self {
            window: other.window.iter().map(|&j| self.eval(j)).collect(),
        })
    }

    pub fn inverse(&self) -> Self {
        let d = self.window.len() as i64;
        let mut window = vec![0; self.window.len()];
        for (i, &w) in (1..).zip(&self.window) {
            let (q, r) = (w - 1).div_mod_floor(&d);
            window[r as usize] = i - q * d;
        }
        Self { window }
    }

    /// The `k` with `w = rho^k u`, `u` in the Coxeter part.
    pub fn rotation_class(&self) -> i64 {
        let d = self.window.len() as i64;
        let s: i64 = self.window.iter().sum::<i64>() - d * (d + 1) / 2;
        s / d
    }

    /// `#{(i, j) | i in [1, D], j in Z, i < j, w(i) > w(j)}`.
    pub fn length(&self) -> usize {
        let d = self.window.len() as i64;
        let mut total = 0i64;
        for i in 1..=d {
            let wi = self.window[(i - 1) as usize];
            for j in 1..=d {
                let wj = self.window[(j - 1) as usize];
                // j + kD > i and wj + kD < wi
                let lo = (i - j).div_floor(&d) + 1;
                let hi = (wi - wj).div_ceil(&d) - 1;
                if hi >= lo {
                    total += hi - lo + 1;
                }
            }
        }
        total as usize
    }

    /// Right multiplication by `s_i`, which swaps positions `i` and `i + 1`.
    pub fn mul_simple(&self, i: usize) -> Self {
        let d = self.window.len();
        let i = i % d;
        let mut window = self.window.clone();
        if i == 0 {
            let dd = d as i64;
            let first = window[0];
            window[0] = window[d - 1] - dd;
            window[d - 1] = first + dd;
        } else {
            window.swap(i - 1, i);
        }
        Self { window }
    }

    /// Left multiplication by `s_i`, which swaps the values `i` and `i + 1`
    /// modulo `D`.
    pub fn simple_mul(&self, i: usize) -> Self {
        let d = self.window.len();
        Self::simple(d, i).compose(self).expect("equal rank")
    }

    /// Right multiplication by `rho^k`.
    pub fn mul_rotation(&self, k: i64) -> Self {
        Self {
            window: (1..=self.window.len() as i64).map(|i| self.eval(i + k)).collect(),
        }
    }

    pub fn has_right_descent(&self, i: usize) -> bool {
        let i = (i % self.window.len()) as i64;
        self.eval(i) > self.eval(i + 1)
    }

    pub fn has_left_descent(&self, i: usize) -> bool {
        self.inverse().has_right_descent(i)
    }

    /// Factorization `w = rho^k s_{i_1} ... s_{i_l}` with `l = length(w)`.
    pub fn reduced_word(&self) -> (i64, Vec<usize>) {
        let d = self.window.len();
        let mut w = self.clone();
        let mut stripped = Vec::new();
        if d >= 2 {
            while let Some(i) = (0..d).find(|&i| w.has_right_descent(i)) {
                stripped.push(i);
                w = w.mul_simple(i);
            }
        }
        stripped.reverse();
        (w.rotation_class(), stripped)
    }

    pub fn from_word(d: usize, rotation: i64, word: &[usize]) -> Self {
        word.iter()
            .fold(Self::rotation(d, rotation), |w, &i| w.mul_simple(i))
    }

    /// Bruhat order inside one coset of the length-zero subgroup.
    pub fn bruhat_leq(&self, other: &Self) -> Result<bool> {
        self.check_rank(other)?;
        let (kx, ky) = (self.rotation_class(), other.rotation_class());
        if kx != ky {
            return Err(Error::IncomparableRotation(kx, ky));
        }
        Ok(bruhat_rec(self.clone(), other.clone()))
    }

    /// `(p) w`, i.e. `k -> p(w(k))`.
    pub fn act_on_flag_symbol(&self, p: &FlagSymbol) -> Result<FlagSymbol> {
        if p.rank() != self.rank() {
            return Err(Error::RankMismatch(p.rank(), self.rank()));
        }
        let values = self.window.iter().map(|&j| p.eval(j)).collect();
        FlagSymbol::new(p.n(), values)
    }
}

fn bruhat_rec(x: AffinePermutation, y: AffinePermutation) -> bool {
    let (lx, ly) = (x.length(), y.length());
    if lx > ly {
        return false;
    }
    if ly == 0 {
        return x == y;
    }
    let d = y.rank();
    let s = (0..d).find(|&i| y.has_right_descent(i)).expect("positive length");
    let ys = y.mul_simple(s);
    if x.has_right_descent(s) {
        bruhat_rec(x.mul_simple(s), ys)
    } else {
        bruhat_rec(x, ys)
    }
}

impl fmt::Display for AffinePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.window.iter().map(|x| x.to_string()).collect();
        write!(f, "D={};[{}]", self.window.len(), body.join(","))
    }
}

impl fmt::Debug for AffinePermutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for AffinePermutation {
    type Err = Error;

    /// Parses `"D=4;[2,5,3,4]"`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (head, body) = s
            .split_once(';')
            .ok_or_else(|| Error::Parse(format!("expected `D=<rank>;[...]`, got {s:?}")))?;
        let d: usize = head
            .trim()
            .strip_prefix("D=")
            .and_then(|x| x.trim().parse().ok())
            .ok_or_else(|| Error::Parse(format!("bad rank field {head:?}")))?;
        let window = parse_int_list(body)?;
        if window.len() != d {
            return Err(Error::Parse(format!(
                "rank {d} but window has {} entries",
                window.len()
            )));
        }
        Self::new(window)
    }
}

/// Parses `"[a,b,c]"` into integers.
pub(crate) fn parse_int_list(s: &str) -> Result<Vec<i64>> {
    let inner = s
        .trim()
        .strip_prefix('[')
        .and_then(|x| x.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("expected a bracketed list, got {s:?}")))?;
    if inner.trim().is_empty() {
        return Ok(Vec::new());
    }
    inner
        .split(',')
        .enumerate()
        .map(|(pos, x)| {
            x.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("entry {pos}: {x:?} is not an integer")))
        })
        .collect()
}

/// The finite parabolic subgroup fixing a dominant symbol.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct YoungSubgroup {
    rank: usize,
    blocks: Vec<(usize, usize)>,
}

impl YoungSubgroup {
    /// Blocks are the maximal constant runs of `lambda`.
    pub fn of(lambda: &FlagSymbol) -> Result<Self> {
        if !lambda.is_dominant() {
            return Err(Error::NotDominant(lambda.values().to_vec()));
        }
        let vals = lambda.values();
        let mut blocks = Vec::new();
        let mut start = 1;
        for k in 1..=vals.len() {
            if k == vals.len() || vals[k] != vals[k - 1] {
                blocks.push((start, k));
                start = k + 1;
            }
        }
        Ok(Self {
            rank: vals.len(),
            blocks,
        })
    }

    pub fn trivial(rank: usize) -> Self {
        Self {
            rank,
            blocks: (1..=rank).map(|k| (k, k)).collect(),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Inclusive 1-based position intervals.
    pub fn blocks(&self) -> &[(usize, usize)] {
        &self.blocks
    }

    /// Simple reflections `s_i`, `i in [1, D-1]`, lying in the subgroup.
    pub fn generators(&self) -> Vec<usize> {
        self.blocks
            .iter()
            .flat_map(|&(a, b)| a..b)
            .collect()
    }

    pub fn order(&self) -> usize {
        self.blocks
            .iter()
            .map(|&(a, b)| (1..=b - a + 1).product::<usize>())
            .product()
    }

    pub fn elements(&self) -> Vec<AffinePermutation> {
        let gens = self.generators();
        let id = AffinePermutation::identity(self.rank);
        let mut seen: BTreeSet<AffinePermutation> = BTreeSet::from([id.clone()]);
        let mut queue = VecDeque::from([id]);
        while let Some(w) = queue.pop_front() {
            for &g in &gens {
                let x = w.mul_simple(g);
                if seen.insert(x.clone()) {
                    queue.push_back(x);
                }
            }
        }
        seen.into_iter().collect()
    }
}

/// The minimal-length element of `S_lambda w S_mu`.
pub fn min_double_coset_rep(
    lambda: &FlagSymbol,
    w: &AffinePermutation,
    mu: &FlagSymbol,
) -> Result<AffinePermutation> {
    let left = YoungSubgroup::of(lambda)?;
    let right = YoungSubgroup::of(mu)?;
    if left.rank() != w.rank() || right.rank() != w.rank() {
        return Err(Error::RankMismatch(left.rank(), w.rank()));
    }
    let (lg, rg) = (left.generators(), right.generators());
    let mut x = w.clone();
    loop {
        if let Some(&i) = lg.iter().find(|&&i| x.has_left_descent(i)) {
            x = x.simple_mul(i);
        } else if let Some(&j) = rg.iter().find(|&&j| x.has_right_descent(j)) {
            x = x.mul_simple(j);
        } else {
            return Ok(x);
        }
    }
}

/// All elements of `S_lambda rep S_mu`, sorted and without repetition.
pub fn enumerate_double_coset(
    lambda: &FlagSymbol,
    mu: &FlagSymbol,
    rep: &AffinePermutation,
) -> Result<Vec<AffinePermutation>> {
    let left = YoungSubgroup::of(lambda)?.elements();
    let right = YoungSubgroup::of(mu)?.elements();
    let mut out = BTreeSet::new();
    for a in &left {
        let ar = a.compose(rep)?;
        for b in &right {
            out.insert(ar.compose(b)?);
        }
    }
    Ok(out.into_iter().collect())
}

/// Every element of length at most `max_len` in the coset `rho^k W_a`.
pub fn elements_up_to_length(d: usize, rotation: i64, max_len: usize) -> Vec<AffinePermutation> {
    let start = AffinePermutation::rotation(d, rotation);
    let mut seen: BTreeSet<AffinePermutation> = BTreeSet::from([start.clone()]);
    let mut frontier = vec![start];
    if d < 2 {
        return seen.into_iter().collect();
    }
    for _ in 0..max_len {
        let mut next = Vec::new();
        for w in &frontier {
            for i in 0..d {
                if !w.has_right_descent(i) {
                    let x = w.mul_simple(i);
                    if seen.insert(x.clone()) {
                        next.push(x);
                    }
                }
            }
        }
        frontier = next;
    }
    seen.into_iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ap(w: &[i64]) -> AffinePermutation {
        AffinePermutation::new(w.to_vec()).unwrap()
    }

    fn brute_length(w: &AffinePermutation) -> usize {
        let d = w.rank() as i64;
        let bound = 4 * d * (1 + w.window().iter().map(|x| x.abs()).max().unwrap());
        let mut c = 0;
        for i in 1..=d {
            for j in i + 1..=i + bound {
                if w.eval(i) > w.eval(j) {
                    c += 1;
                }
            }
        }
        c
    }

    #[test]
    fn length_examples() {
        assert_eq!(AffinePermutation::identity(3).length(), 0);
        assert_eq!(ap(&[2, 1]).length(), 1);
        assert_eq!(ap(&[3, 2]).length(), 1);
        assert_eq!(AffinePermutation::rotation(4, 3).length(), 0);
    }

    #[test]
    fn rejects_non_bijections() {
        assert!(AffinePermutation::new(vec![1, 3]).is_err());
        assert!(AffinePermutation::new(vec![]).is_err());
    }

    #[test]
    fn reduced_word_examples() {
        assert_eq!(AffinePermutation::identity(3).reduced_word(), (0, vec![]));
        assert_eq!(AffinePermutation::rotation(3, 1).reduced_word(), (1, vec![]));
        let w = ap(&[3, 2]);
        let (k, word) = w.reduced_word();
        assert_eq!(k, 1);
        assert_eq!(word.len(), 1);
        assert_eq!(AffinePermutation::from_word(2, k, &word), w);
    }

    #[test]
    fn text_round_trip() {
        let w: AffinePermutation = "D=4;[2,5,3,4]".parse().unwrap();
        assert_eq!(w.window(), &[2, 5, 3, 4]);
        assert_eq!(w.to_string(), "D=4;[2,5,3,4]");
        assert!("D=3;[2,5,3,4]".parse::<AffinePermutation>().is_err());
        assert!("D=2;[1,x]".parse::<AffinePermutation>().is_err());
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(serde_json::from_str::<AffinePermutation>(&json).unwrap(), w);
        assert!(serde_json::from_str::<AffinePermutation>("[1,3]").is_err());
    }

    #[test]
    fn lengths_change_by_one_exhaustively() {
        for d in 2..=3 {
            for k in -1..=1 {
                for w in elements_up_to_length(d, k, 6) {
                    let l = w.length();
                    assert_eq!(l, brute_length(&w), "{w}");
                    assert_eq!(l, w.inverse().length());
                    for i in 0..d {
                        let l2 = w.mul_simple(i).length();
                        assert_eq!(l.abs_diff(l2), 1, "{w} s_{i}");
                        assert_eq!(l2 < l, w.has_right_descent(i));
                    }
                    let (rot, word) = w.reduced_word();
                    assert_eq!(word.len(), l);
                    assert_eq!(rot, k);
                    assert_eq!(AffinePermutation::from_word(d, rot, &word), w);
                }
            }
        }
    }

    #[test]
    fn bruhat_examples() {
        let x = ap(&[2, 1]);
        assert!(x.bruhat_leq(&x).unwrap());
        let y = x.mul_simple(0);
        assert_eq!(y.length(), 2);
        assert!(x.bruhat_leq(&y).unwrap());
        assert!(!y.bruhat_leq(&x).unwrap());
        assert!(AffinePermutation::identity(2).bruhat_leq(&y).unwrap());
        assert!(matches!(
            x.bruhat_leq(&AffinePermutation::rotation(2, 1)),
            Err(Error::IncomparableRotation(0, 1))
        ));
    }

    // subword criterion against a reduced word of y
    fn bruhat_subword(x: &AffinePermutation, y: &AffinePermutation) -> bool {
        let (k, word) = y.reduced_word();
        let d = y.rank();
        (0u32..1 << word.len()).any(|mask| {
            let sub: Vec<usize> = word
                .iter()
                .enumerate()
                .filter(|(b, _)| mask >> b & 1 == 1)
                .map(|(_, &i)| i)
                .collect();
            AffinePermutation::from_word(d, k, &sub) == *x
        })
    }

    #[test]
    fn bruhat_matches_subword_criterion() {
        let elems = elements_up_to_length(3, 0, 4);
        for x in &elems {
            for y in &elems {
                assert_eq!(x.bruhat_leq(y).unwrap(), bruhat_subword(x, y), "{x} {y}");
            }
        }
    }

    #[test]
    fn flag_action_examples() {
        let lam = FlagSymbol::new(2, vec![1, 2]).unwrap();
        assert_eq!(
            AffinePermutation::identity(2).act_on_flag_symbol(&lam).unwrap(),
            lam
        );
        assert_eq!(
            ap(&[2, 1]).act_on_flag_symbol(&lam).unwrap().values(),
            &[2, 1]
        );
        let lam = FlagSymbol::new(2, vec![1, 1]).unwrap();
        let t = AffinePermutation::translation(&[1, 0]);
        assert_eq!(t.act_on_flag_symbol(&lam).unwrap().values(), &[3, 1]);
        assert!(AffinePermutation::identity(3).act_on_flag_symbol(&lam).is_err());
    }

    #[test]
    fn chamber_is_a_fundamental_domain() {
        for n in 1..=3usize {
            for d in 1..=3usize {
                let mut vals = vec![-6i64; d];
                loop {
                    let p = FlagSymbol::new(n, vals.clone()).unwrap();
                    let (lam, w) = p.dominant_with_witness();
                    assert!(lam.is_dominant());
                    assert_eq!(w.act_on_flag_symbol(&lam).unwrap(), p);
                    // any dominant symbol in the orbit has the same weight,
                    // and weight determines the dominant symbol
                    assert_eq!(lam.weight(), p.weight());
                    // advance odometer
                    let mut k = 0;
                    while k < d && vals[k] == 6 {
                        vals[k] = -6;
                        k += 1;
                    }
                    if k == d {
                        break;
                    }
                    vals[k] += 1;
                }
            }
        }
    }

    #[test]
    fn double_coset_examples() {
        let l11 = FlagSymbol::new(1, vec![1, 1]).unwrap();
        let l12 = FlagSymbol::new(2, vec![1, 2]).unwrap();
        let id = AffinePermutation::identity(2);
        let s1 = ap(&[2, 1]);
        assert_eq!(min_double_coset_rep(&l11, &s1, &l11).unwrap(), id);
        assert_eq!(min_double_coset_rep(&l12, &s1, &l12).unwrap(), s1);
        assert_eq!(enumerate_double_coset(&l11, &l11, &id).unwrap().len(), 2);
        assert_eq!(enumerate_double_coset(&l11, &l12, &id).unwrap().len(), 2);
        assert_eq!(enumerate_double_coset(&l12, &l12, &s1).unwrap(), vec![s1]);
    }

    #[test]
    fn min_rep_is_minimal_and_idempotent() {
        let lambdas = [vec![1, 1, 2], vec![1, 2, 2], vec![1, 1, 1], vec![1, 2, 3]];
        for a in &lambdas {
            for b in &lambdas {
                let la = FlagSymbol::new(3, a.clone()).unwrap();
                let lb = FlagSymbol::new(3, b.clone()).unwrap();
                for w in elements_up_to_length(3, 1, 3) {
                    let m = min_double_coset_rep(&la, &w, &lb).unwrap();
                    assert_eq!(min_double_coset_rep(&la, &m, &lb).unwrap(), m);
                    let coset = enumerate_double_coset(&la, &lb, &m).unwrap();
                    assert!(coset.contains(&w));
                    assert!(coset.iter().all(|x| x.length() >= m.length()));
                    assert_eq!(coset.iter().filter(|x| x.length() == m.length()).count(), 1);
                    let sizes = YoungSubgroup::of(&la).unwrap().order()
                        * YoungSubgroup::of(&lb).unwrap().order();
                    assert_eq!(sizes % coset.len(), 0);
                }
            }
        }
    }

    fn arb_perm(d: usize) -> impl Strategy<Value = AffinePermutation> {
        (-2i64..=2, prop::collection::vec(0..d, 0..8))
            .prop_map(move |(k, word)| AffinePermutation::from_word(d, k, &word))
    }

    proptest! {
        #[test]
        fn group_axioms(x in arb_perm(3), y in arb_perm(3), z in arb_perm(3)) {
            let xy_z = x.compose(&y).unwrap().compose(&z).unwrap();
            let x_yz = x.compose(&y.compose(&z).unwrap()).unwrap();
            prop_assert_eq!(xy_z, x_yz);
            prop_assert!(x.compose(&x.inverse()).unwrap().is_identity());
            prop_assert!(x.inverse().compose(&x).unwrap().is_identity());
        }

        #[test]
        fn right_action(x in arb_perm(3), y in arb_perm(3), vals in prop::collection::vec(-4i64..6, 3)) {
            let p = FlagSymbol::new(2, vals).unwrap();
            let lhs = y.act_on_flag_symbol(&x.act_on_flag_symbol(&p).unwrap()).unwrap();
            let rhs = x.compose(&y).unwrap().act_on_flag_symbol(&p).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
