//! Periodic flag symbols, periodic matrices and their statistics.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::affine_weyl::{parse_int_list, AffinePermutation};
use crate::error::{Error, Result};

/// A function `p: Z -> Z` with `p(j + D) = p(j) + n`, stored by its window.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "FlagSymbolRepr", into = "FlagSymbolRepr")]
pub struct FlagSymbol {
    n: usize,
    values: Vec<i64>,
}

#[derive(Serialize, Deserialize)]
struct FlagSymbolRepr {
    n: usize,
    #[serde(rename = "D")]
    d: usize,
    values: Vec<i64>,
}

impl TryFrom<FlagSymbolRepr> for FlagSymbol {
    type Error = Error;
    fn try_from(r: FlagSymbolRepr) -> Result<Self> {
        if r.values.len() != r.d {
            return Err(Error::Parse(format!(
                "D={} but {} values given",
                r.d,
                r.values.len()
            )));
        }
        FlagSymbol::new(r.n, r.values)
    }
}

impl From<FlagSymbol> for FlagSymbolRepr {
    fn from(p: FlagSymbol) -> Self {
        FlagSymbolRepr {
            n: p.n,
            d: p.values.len(),
            values: p.values,
        }
    }
}

/// Residue `i` in `[0, n-1]` read as a row index in `[1, n]`.
pub(crate) fn residue_row(i: usize, n: usize) -> Result<i64> {
    if i >= n {
        return Err(Error::InvalidResidue { residue: i, n });
    }
    Ok(if i == 0 { n as i64 } else { i as i64 })
}

impl FlagSymbol {
    pub fn new(n: usize, values: Vec<i64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Precondition("n must be positive".into()));
        }
        if values.is_empty() {
            return Err(Error::Precondition("D must be positive".into()));
        }
        Ok(Self { n, values })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn eval(&self, j: i64) -> i64 {
        let d = self.values.len() as i64;
        let (q, r) = (j - 1).div_mod_floor(&d);
        self.values[r as usize] + q * self.n as i64
    }

    /// `1 <= p(1) <= ... <= p(D) <= n`.
    pub fn is_dominant(&self) -> bool {
        let n = self.n as i64;
        self.values.windows(2).all(|w| w[0] <= w[1])
            && self.values.iter().all(|&x| (1..=n).contains(&x))
    }

    /// `#p^{-1}(i)` for `i in [1, n]`.
    pub fn weight(&self) -> Vec<usize> {
        let n = self.n as i64;
        let mut w = vec![0; self.n];
        for &x in &self.values {
            w[(x - 1).mod_floor(&n) as usize] += 1;
        }
        w
    }

    /// The dominant symbol with the given weight.
    pub fn from_weight(weight: &[usize]) -> Result<Self> {
        let values: Vec<i64> = weight
            .iter()
            .enumerate()
            .flat_map(|(i, &m)| std::iter::repeat_n(i as i64 + 1, m))
            .collect();
        Self::new(weight.len(), values)
    }

    /// The dominant `lambda` in the orbit together with `w` with `(lambda) w = p`.
    pub fn dominant_with_witness(&self) -> (FlagSymbol, AffinePermutation) {
        let n = self.n as i64;
        let d = self.values.len() as i64;
        let mut split: Vec<(i64, i64, usize)> = self
            .values
            .iter()
            .enumerate()
            .map(|(k, &x)| {
                let (q, r) = (x - 1).div_mod_floor(&n);
                (r + 1, q, k)
            })
            .collect();
        split.sort_by_key(|&(r, _, k)| (r, k));
        let lambda_vals: Vec<i64> = split.iter().map(|&(r, _, _)| r).collect();
        let mut window = vec![0; self.values.len()];
        for (slot, &(_, q, k)) in split.iter().enumerate() {
            window[k] = slot as i64 + 1 + d * q;
        }
        let lambda = FlagSymbol::new(self.n, lambda_vals).expect("nonempty");
        let w = AffinePermutation::new(window).expect("bijective by construction");
        (lambda, w)
    }

    pub fn dominant(&self) -> FlagSymbol {
        self.dominant_with_witness().0
    }

    /// `(p) s_i`, swapping positions `i` and `i + 1` (periodically for `i = 0`).
    pub fn mul_simple(&self, i: usize) -> Self {
        let d = self.values.len();
        let i = i % d;
        let mut values = self.values.clone();
        if i == 0 {
            let n = self.n as i64;
            let first = values[0];
            values[0] = values[d - 1] - n;
            values[d - 1] = first + n;
        } else {
            values.swap(i - 1, i);
        }
        Self { n: self.n, values }
    }

    /// `(p) rho^k`, i.e. `j -> p(j + k)`.
    pub fn mul_rotation(&self, k: i64) -> Self {
        let d = self.values.len() as i64;
        Self {
            n: self.n,
            values: (1..=d).map(|j| self.eval(j + k)).collect(),
        }
    }

    /// `p` with the value at position `k` (mod `D`) shifted by `delta`.
    pub fn shift_value(&self, k: i64, delta: i64) -> Self {
        let d = self.values.len() as i64;
        let mut values = self.values.clone();
        values[(k - 1).mod_floor(&d) as usize] += delta;
        Self { n: self.n, values }
    }

    /// `#{(k, l) | p(k) in [1, n], k < l, p(k) >= p(l)}`.
    pub fn x_stat(&self) -> u64 {
        let n = self.n as i64;
        let d = self.values.len() as i64;
        let mut total = 0i64;
        for k0 in 1..=d {
            let pk0 = self.values[(k0 - 1) as usize];
            let m = (pk0 - 1).div_floor(&n);
            let (k, pk) = (k0 - m * d, pk0 - m * n);
            for l0 in 1..=d {
                let pl0 = self.values[(l0 - 1) as usize];
                let lo = (k - l0).div_floor(&d) + 1;
                let hi = (pk - pl0).div_floor(&n);
                if hi >= lo {
                    total += hi - lo + 1;
                }
            }
        }
        total as u64
    }

    /// Positions `l` in `[lo, hi]` with `p(l) = value`.
    pub fn preimage_in(&self, value: i64, lo: i64, hi: i64) -> Vec<i64> {
        let n = self.n as i64;
        let d = self.values.len() as i64;
        let mut out = Vec::new();
        for (k0, &x) in (1..).zip(&self.values) {
            if (value - x).mod_floor(&n) != 0 {
                continue;
            }
            let k = k0 + (value - x) / n * d;
            if (lo..=hi).contains(&k) {
                out.push(k);
            }
        }
        out.sort_unstable();
        out
    }

    /// `p^{-1}(value)`, a finite set of integers.
    pub fn preimage(&self, value: i64) -> Vec<i64> {
        self.preimage_in(value, i64::MIN / 4, i64::MAX / 4)
    }

    /// Every symbol with rank `d` and window values in `[lo, hi]`.
    pub fn enumerate(n: usize, d: usize, lo: i64, hi: i64) -> Vec<FlagSymbol> {
        let mut out = Vec::new();
        if hi < lo {
            return out;
        }
        let mut vals = vec![lo; d];
        loop {
            out.push(FlagSymbol {
                n,
                values: vals.clone(),
            });
            let mut k = 0;
            while k < d && vals[k] == hi {
                vals[k] = lo;
                k += 1;
            }
            if k == d {
                return out;
            }
            vals[k] += 1;
        }
    }

    /// Every dominant symbol of the given shape.
    pub fn dominant_symbols(n: usize, d: usize) -> Vec<FlagSymbol> {
        weights(n, d)
            .into_iter()
            .map(|w| FlagSymbol::from_weight(&w).expect("positive n, D"))
            .collect()
    }
}

/// All `mu in N^n` with `sum mu = d`, in lexicographic order.
pub fn weights(n: usize, d: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() + 1 == n {
            cur.push(left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in 0..=left {
            cur.push(a);
            rec(n, left - a, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if n > 0 {
        rec(n, d, &mut Vec::new(), &mut out);
    }
    out
}

impl fmt::Display for FlagSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self.values.iter().map(|x| x.to_string()).collect();
        write!(f, "n={};D={};[{}]", self.n, self.values.len(), body.join(","))
    }
}

impl fmt::Debug for FlagSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

fn parse_field(part: Option<&str>, key: &str) -> Result<usize> {
    let part = part.ok_or_else(|| Error::Parse(format!("missing `{key}=` field")))?;
    part.trim()
        .strip_prefix(key)
        .and_then(|x| x.strip_prefix('='))
        .and_then(|x| x.trim().parse().ok())
        .ok_or_else(|| Error::Parse(format!("bad `{key}` field {part:?}")))
}

impl FromStr for FlagSymbol {
    type Err = Error;

    /// Parses `"n=2;D=2;[2,1]"`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.trim().splitn(3, ';');
        let n = parse_field(parts.next(), "n")?;
        let d = parse_field(parts.next(), "D")?;
        let values = parse_int_list(parts.next().unwrap_or(""))?;
        if values.len() != d {
            return Err(Error::Parse(format!("D={d} but {} values given", values.len())));
        }
        FlagSymbol::new(n, values)
    }
}

/// An `N`-valued `Z x Z` matrix with `s_{i+n, j+n} = s_{ij}`, stored on the
/// rows `[1, n]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "MatrixRepr", into = "MatrixRepr")]
pub struct PeriodicMatrix {
    n: usize,
    d: usize,
    entries: BTreeMap<(i64, i64), u64>,
}

#[derive(Serialize, Deserialize)]
struct MatrixRepr {
    n: usize,
    #[serde(rename = "D")]
    d: usize,
    entries: Vec<(i64, i64, u64)>,
}

impl TryFrom<MatrixRepr> for PeriodicMatrix {
    type Error = Error;
    fn try_from(r: MatrixRepr) -> Result<Self> {
        PeriodicMatrix::from_entries(r.n, r.d, r.entries)
    }
}

impl From<PeriodicMatrix> for MatrixRepr {
    fn from(s: PeriodicMatrix) -> Self {
        MatrixRepr {
            n: s.n,
            d: s.d,
            entries: s.entries().collect(),
        }
    }
}

/// Result of the diagonal test against the closure order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderHint {
    DefinitelyNotLeq,
    Consistent,
    Equal,
}

impl PeriodicMatrix {
    /// Builds from `(i, j, value)` triples with arbitrary `i`; repeated
    /// cells add up, zeros are dropped, and the total must be `d`.
    pub fn from_entries(
        n: usize,
        d: usize,
        entries: impl IntoIterator<Item = (i64, i64, u64)>,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidMatrix("n must be positive".into()));
        }
        let mut map = BTreeMap::new();
        let nn = n as i64;
        for (i, j, v) in entries {
            if v == 0 {
                continue;
            }
            let m = (i - 1).div_floor(&nn);
            *map.entry((i - m * nn, j - m * nn)).or_insert(0) += v;
        }
        let total: u64 = map.values().sum();
        if total != d as u64 {
            return Err(Error::InvalidMatrix(format!(
                "entries sum to {total}, expected D={d}"
            )));
        }
        Ok(Self { n, d, entries: map })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.d
    }

    /// `s_{ij}` for any integers `i`, `j`.
    pub fn get(&self, i: i64, j: i64) -> u64 {
        let n = self.n as i64;
        let m = (i - 1).div_floor(&n);
        self.entries.get(&(i - m * n, j - m * n)).copied().unwrap_or(0)
    }

    /// Nonzero entries with `i in [1, n]`.
    pub fn entries(&self) -> impl Iterator<Item = (i64, i64, u64)> + '_ {
        self.entries.iter().map(|(&(i, j), &v)| (i, j, v))
    }

    /// Row sums `sum_j s_{ij}`, `i in [1, n]`: the weight of the left symbol.
    pub fn row_weight(&self) -> Vec<usize> {
        let mut w = vec![0; self.n];
        for (i, _, v) in self.entries() {
            w[(i - 1) as usize] += v as usize;
        }
        w
    }

    /// Column sums `sum_i s_{ij}`, `j in [1, n]`: the weight of the right symbol.
    pub fn col_weight(&self) -> Vec<usize> {
        let n = self.n as i64;
        let mut w = vec![0; self.n];
        for (_, j, v) in self.entries() {
            w[(j - 1).mod_floor(&n) as usize] += v as usize;
        }
        w
    }

    pub fn left_dominant(&self) -> FlagSymbol {
        FlagSymbol::from_weight(&self.row_weight()).expect("valid shape")
    }

    pub fn right_dominant(&self) -> FlagSymbol {
        FlagSymbol::from_weight(&self.col_weight()).expect("valid shape")
    }

    /// `^delta lambda`, the diagonal matrix of the weight of `lambda`.
    pub fn delta(lambda: &FlagSymbol) -> Self {
        Self::diagonal(&lambda.weight())
    }

    pub fn diagonal(weight: &[usize]) -> Self {
        let d = weight.iter().sum();
        Self::from_entries(
            weight.len(),
            d,
            weight
                .iter()
                .enumerate()
                .map(|(i, &m)| (i as i64 + 1, i as i64 + 1, m as u64)),
        )
        .expect("consistent total")
    }

    pub fn is_diagonal(&self) -> bool {
        self.entries().all(|(i, j, _)| i == j)
    }

    pub fn transpose(&self) -> Self {
        Self::from_entries(self.n, self.d, self.entries().map(|(i, j, v)| (j, i, v)))
            .expect("same total")
    }

    /// Entrywise sum, a matrix of rank `D1 + D2`.
    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::ShapeMismatch(self.n, self.d, other.n, other.d));
        }
        Self::from_entries(self.n, self.d + other.d, self.entries().chain(other.entries()))
    }

    /// `self - other` when nonnegative everywhere.
    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        if self.n != other.n || other.d > self.d {
            return None;
        }
        let mut entries = self.entries.clone();
        for (&k, &v) in &other.entries {
            let e = entries.get_mut(&k)?;
            if *e < v {
                return None;
            }
            *e -= v;
            if *e == 0 {
                entries.remove(&k);
            }
        }
        Some(Self {
            n: self.n,
            d: self.d - other.d,
            entries,
        })
    }

    /// `s - Id` if all diagonal entries are at least one.
    pub fn minus_identity(&self) -> Option<Self> {
        self.checked_sub(&Self::diagonal(&vec![1; self.n]))
    }

    /// `sum s_{ij} s_{kl}` over `i >= k, j < l, i in [1, n]`.
    pub fn y_stat(&self) -> u64 {
        let n = self.n as i64;
        let mut total = 0u64;
        for (i, j, a) in self.entries() {
            for (k0, l0, b) in self.entries() {
                let c = (i - k0).div_floor(&n) - (j - l0).div_floor(&n);
                if c > 0 {
                    total += c as u64 * a * b;
                }
            }
        }
        total
    }

    /// The largest `|j - i|` over the support.
    pub fn band(&self) -> u64 {
        self.entries()
            .map(|(i, j, _)| (j - i).unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    /// For every nonzero offset `j` some `s_{i, i+j}` vanishes.
    pub fn is_aperiodic(&self) -> bool {
        let offsets: std::collections::BTreeSet<i64> =
            self.entries().map(|(i, j, _)| j - i).filter(|&o| o != 0).collect();
        offsets
            .into_iter()
            .all(|o| (1..=self.n as i64).any(|i| self.get(i, i + o) == 0))
    }

    /// The diagonal necessary condition for `t <= s` in the closure order.
    pub fn order_hint(t: &Self, s: &Self) -> Result<OrderHint> {
        if t.n != s.n || t.d != s.d {
            return Err(Error::ShapeMismatch(t.n, t.d, s.n, s.d));
        }
        if t.row_weight() != s.row_weight() || t.col_weight() != s.col_weight() {
            return Err(Error::NotInBlock(format!("{t} and {s} have different weights")));
        }
        if t == s {
            return Ok(OrderHint::Equal);
        }
        if (1..=t.n as i64).any(|i| t.get(i, i) < s.get(i, i)) {
            return Ok(OrderHint::DefinitelyNotLeq);
        }
        Ok(OrderHint::Consistent)
    }

    /// The matrices of the generators `a_lambda e_i` and
    /// `f_i a_lambda`; `None` when the weight of `lambda` at `i` is zero.
    pub fn generator_matrices(lambda: &FlagSymbol, i: usize) -> Result<Option<(Self, Self)>> {
        let n = lambda.n();
        let r = residue_row(i, n)?;
        let w = lambda.weight();
        if w[(r - 1) as usize] == 0 {
            return Ok(None);
        }
        let d = lambda.rank();
        let entries = w
            .iter()
            .enumerate()
            .map(|(k, &m)| {
                let k = k as i64 + 1;
                (k, k, if k == r { m as u64 - 1 } else { m as u64 })
            })
            .chain(std::iter::once((r, r + 1, 1)));
        let s = Self::from_entries(n, d, entries)?;
        let t = s.transpose();
        Ok(Some((s, t)))
    }

    /// Every flag symbol `p` with `matrix_of_pair(p, mu) = self`, where `mu`
    /// is the dominant symbol of the column weight.
    pub fn class_members(&self) -> Vec<FlagSymbol> {
        let n = self.n as i64;
        let mu = self.right_dominant();
        // rows available to each column j in [1, n]
        let mut per_col: Vec<Vec<i64>> = vec![Vec::new(); self.n];
        for (i, j, v) in self.entries() {
            let m = (j - 1).div_floor(&n);
            let col = (j - m * n - 1) as usize;
            for _ in 0..v {
                per_col[col].push(i - m * n);
            }
        }
        let mut results: Vec<Vec<i64>> = vec![Vec::new()];
        for vals in per_col.iter_mut() {
            vals.sort_unstable();
            let perms = multiset_permutations(vals);
            let mut next = Vec::with_capacity(results.len() * perms.len());
            for prefix in &results {
                for perm in &perms {
                    let mut x = prefix.clone();
                    x.extend_from_slice(perm);
                    next.push(x);
                }
            }
            results = next;
        }
        debug_assert!(results.iter().all(|r| r.len() == mu.rank()));
        results
            .into_iter()
            .map(|values| FlagSymbol {
                n: self.n,
                values,
            })
            .collect()
    }

    /// All matrices of rank `d` supported on `|j - i| <= band`.
    pub fn enumerate_band(n: usize, d: usize, band: i64) -> Vec<Self> {
        let cells: Vec<(i64, i64)> = (1..=n as i64)
            .flat_map(|i| (i - band..=i + band).map(move |j| (i, j)))
            .collect();
        let mut out = Vec::new();
        let mut counts = vec![0u64; cells.len()];
        fn rec(
            pos: usize,
            left: u64,
            cells: &[(i64, i64)],
            counts: &mut Vec<u64>,
            out: &mut Vec<PeriodicMatrix>,
            n: usize,
            d: usize,
        ) {
            if pos + 1 == cells.len() {
                counts[pos] = left;
                let e = cells.iter().zip(counts.iter()).map(|(&(i, j), &v)| (i, j, v));
                out.push(PeriodicMatrix::from_entries(n, d, e).expect("total d"));
                return;
            }
            for a in 0..=left {
                counts[pos] = a;
                rec(pos + 1, left - a, cells, counts, out, n, d);
            }
        }
        if !cells.is_empty() {
            rec(0, d as u64, &cells, &mut counts, &mut out, n, d);
        }
        out.sort();
        out
    }
}

fn multiset_permutations(sorted: &[i64]) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let mut cur = sorted.to_vec();
    loop {
        out.push(cur.clone());
        // next lexicographic permutation
        let Some(i) = (1..cur.len()).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..cur.len()).rev().find(|&j| cur[j] > cur[i - 1]).expect("exists");
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

/// `s_{ij} = #{k | p(k) = i, q(k) = j}`.
pub fn matrix_of_pair(p: &FlagSymbol, q: &FlagSymbol) -> Result<PeriodicMatrix> {
    if p.n != q.n || p.rank() != q.rank() {
        return Err(Error::ShapeMismatch(p.n, p.rank(), q.n, q.rank()));
    }
    PeriodicMatrix::from_entries(
        p.n,
        p.rank(),
        p.values.iter().zip(&q.values).map(|(&i, &j)| (i, j, 1)),
    )
}

impl fmt::Display for PeriodicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body: Vec<String> = self
            .entries()
            .map(|(i, j, v)| format!("[{i},{j},{v}]"))
            .collect();
        write!(f, "n={};D={};[{}]", self.n, self.d, body.join(","))
    }
}

impl fmt::Debug for PeriodicMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for PeriodicMatrix {
    type Err = Error;

    /// Parses `"n=2;D=2;[[1,2,1],[2,2,1]]"`.
    fn from_str(s: &str) -> Result<Self> {
        let mut parts = s.trim().splitn(3, ';');
        let n = parse_field(parts.next(), "n")?;
        let d = parse_field(parts.next(), "D")?;
        let body = parts.next().unwrap_or("").trim();
        let inner = body
            .strip_prefix('[')
            .and_then(|x| x.strip_suffix(']'))
            .ok_or_else(|| Error::Parse(format!("expected a list of triples, got {body:?}")))?;
        let mut entries = Vec::new();
        let mut rest = inner.trim();
        while !rest.is_empty() {
            let end = rest
                .find(']')
                .ok_or_else(|| Error::Parse(format!("unterminated triple in {rest:?}")))?;
            let triple = parse_int_list(&rest[..=end])?;
            if triple.len() != 3 || triple[2] < 0 {
                return Err(Error::Parse(format!("bad triple {:?}", &rest[..=end])));
            }
            entries.push((triple[0], triple[1], triple[2] as u64));
            rest = rest[end + 1..].trim_start().trim_start_matches(',').trim_start();
        }
        PeriodicMatrix::from_entries(n, d, entries)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fs(n: usize, v: &[i64]) -> FlagSymbol {
        FlagSymbol::new(n, v.to_vec()).unwrap()
    }

    fn brute_x(p: &FlagSymbol) -> u64 {
        let n = p.n() as i64;
        let d = p.rank() as i64;
        let span = 8 * d * (1 + p.values().iter().map(|x| x.abs()).max().unwrap() + n);
        let mut c = 0;
        for k in -span..=span {
            if !(1..=n).contains(&p.eval(k)) {
                continue;
            }
            for l in k + 1..=k + 2 * span {
                if p.eval(k) >= p.eval(l) {
                    c += 1;
                }
            }
        }
        c
    }

    #[test]
    fn x_stat_examples() {
        assert_eq!(fs(2, &[1, 2]).x_stat(), 0);
        assert_eq!(fs(2, &[2, 1]).x_stat(), 1);
        assert_eq!(fs(3, &[1, 2, 3]).x_stat(), 0);
        assert_eq!(fs(2, &[1, 1]).x_stat(), 1);
    }

    #[test]
    fn x_stat_matches_brute_force() {
        for n in 1..=3 {
            for d in 1..=3 {
                for p in FlagSymbol::enumerate(n, d, -2, 4) {
                    assert_eq!(p.x_stat(), brute_x(&p), "{p}");
                }
            }
        }
    }

    #[test]
    fn parse_and_json() {
        let p: FlagSymbol = "n=2;D=2;[2,1]".parse().unwrap();
        assert_eq!(p, fs(2, &[2, 1]));
        assert_eq!(p.to_string(), "n=2;D=2;[2,1]");
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"n":2,"D":2,"values":[2,1]}"#);
        assert_eq!(serde_json::from_str::<FlagSymbol>(&json).unwrap(), p);
        assert!("n=2;D=3;[2,1]".parse::<FlagSymbol>().is_err());

        let s: PeriodicMatrix = "n=2;D=2;[[1,2,1],[2,2,1]]".parse().unwrap();
        assert_eq!(s.to_string(), "n=2;D=2;[[1,2,1],[2,2,1]]");
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"n":2,"D":2,"entries":[[1,2,1],[2,2,1]]}"#);
        assert_eq!(serde_json::from_str::<PeriodicMatrix>(&json).unwrap(), s);
        assert!("n=2;D=3;[[1,2,1]]".parse::<PeriodicMatrix>().is_err());
    }

    #[test]
    fn periodic_lookup() {
        let s = PeriodicMatrix::from_entries(2, 2, [(3, 4, 1), (0, 0, 1)]).unwrap();
        assert_eq!(s.get(1, 2), 1);
        assert_eq!(s.get(3, 4), 1);
        assert_eq!(s.get(2, 2), 1);
        assert_eq!(s.get(-1, 0), 1);
        assert_eq!(s.get(1, 1), 0);
    }

    #[test]
    fn matrix_of_pair_examples() {
        let lam = fs(2, &[1, 1]);
        assert_eq!(matrix_of_pair(&lam, &lam).unwrap(), PeriodicMatrix::delta(&lam));
        let s = matrix_of_pair(&fs(2, &[1, 1]), &fs(2, &[1, 2])).unwrap();
        assert_eq!(s.entries().collect::<Vec<_>>(), vec![(1, 1, 1), (1, 2, 1)]);
        let p = fs(3, &[4, -1, 2]);
        let s = matrix_of_pair(&p, &p).unwrap();
        assert!(s.is_diagonal());
        assert!(matrix_of_pair(&p, &fs(2, &[1, 1, 1])).is_err());
    }

    #[test]
    fn generator_matrix_examples() {
        let (s, t) = PeriodicMatrix::generator_matrices(&fs(2, &[1, 2]), 1)
            .unwrap()
            .unwrap();
        assert_eq!(s.entries().collect::<Vec<_>>(), vec![(1, 2, 1), (2, 2, 1)]);
        assert_eq!(t, s.transpose());
        assert!(PeriodicMatrix::generator_matrices(&fs(2, &[2, 2]), 1)
            .unwrap()
            .is_none());
        assert!(PeriodicMatrix::generator_matrices(&fs(2, &[1, 2]), 2).is_err());
    }

    #[test]
    fn generator_y_statistics() {
        for n in 2..=3 {
            for d in 1..=4 {
                for lam in FlagSymbol::dominant_symbols(n, d) {
                    let w = lam.weight();
                    assert_eq!(PeriodicMatrix::delta(&lam).y_stat(), 0);
                    for i in 0..n {
                        let r = if i == 0 { n } else { i };
                        let next = r % n;
                        match PeriodicMatrix::generator_matrices(&lam, i).unwrap() {
                            None => assert_eq!(w[r - 1], 0),
                            Some((s, t)) => {
                                assert_eq!(s.y_stat(), w[r - 1] as u64 - 1, "{lam} e_{i}");
                                assert_eq!(t.y_stat(), w[next] as u64, "{lam} f_{i}");
                                assert_eq!(s.row_weight(), w);
                                assert_eq!(t.col_weight(), w);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn aperiodicity_examples() {
        let lam = fs(2, &[1, 2]);
        assert!(PeriodicMatrix::delta(&lam).is_aperiodic());
        let s = PeriodicMatrix::from_entries(1, 2, [(1, 2, 1), (1, 1, 1)]).unwrap();
        assert!(!s.is_aperiodic());
        let s = PeriodicMatrix::from_entries(2, 2, [(1, 2, 1), (2, 2, 1)]).unwrap();
        assert!(s.is_aperiodic());
    }

    #[test]
    fn order_hint_examples() {
        let s = PeriodicMatrix::from_entries(2, 2, [(1, 2, 1), (2, 1, 1)]).unwrap();
        let t = PeriodicMatrix::from_entries(2, 2, [(1, 1, 1), (2, 2, 1)]).unwrap();
        assert_eq!(PeriodicMatrix::order_hint(&s, &s).unwrap(), OrderHint::Equal);
        assert_eq!(
            PeriodicMatrix::order_hint(&s, &t).unwrap(),
            OrderHint::DefinitelyNotLeq
        );
        assert_eq!(PeriodicMatrix::order_hint(&t, &s).unwrap(), OrderHint::Consistent);
        let u = PeriodicMatrix::from_entries(2, 3, [(1, 1, 3)]).unwrap();
        assert!(PeriodicMatrix::order_hint(&u, &s).is_err());
    }

    #[test]
    fn weight_is_a_bijection_on_the_chamber() {
        for n in 1..=3 {
            for d in 1..=5 {
                let doms: Vec<FlagSymbol> = FlagSymbol::enumerate(n, d, 1, n as i64)
                    .into_iter()
                    .filter(|p| p.is_dominant())
                    .collect();
                let ws = weights(n, d);
                assert_eq!(doms.len(), ws.len());
                for lam in &doms {
                    assert_eq!(&FlagSymbol::from_weight(&lam.weight()).unwrap(), lam);
                }
            }
        }
    }

    #[test]
    fn class_members_reproduce_matrix() {
        for s in PeriodicMatrix::enumerate_band(2, 3, 1) {
            let mu = s.right_dominant();
            let members = s.class_members();
            assert!(!members.is_empty());
            for p in &members {
                assert_eq!(&matrix_of_pair(p, &mu).unwrap(), &s);
                assert_eq!(p.weight(), s.row_weight());
            }
        }
        assert_eq!(PeriodicMatrix::enumerate_band(2, 2, 0).len(), 3);
    }

    fn count_eq(p: &FlagSymbol, value: i64, lo: i64, hi: i64) -> i64 {
        p.preimage_in(value, lo, hi).len() as i64
    }

    // both difference identities used for the action formulas
    #[test]
    fn x_difference_identities() {
        for n in 2..=3usize {
            for d in 1..=4usize {
                let width = 2 * n as i64;
                for p in FlagSymbol::enumerate(n, d, 1, width) {
                    for k in 1..=d as i64 {
                        let big = i64::MAX / 8;
                        let pk = p.eval(k);
                        let minus = p.shift_value(k, -1);
                        let lhs = p.x_stat() as i64 - minus.x_stat() as i64;
                        let rhs = count_eq(&p, pk, k + 1, big) - count_eq(&p, pk - 1, -big, k - 1);
                        assert_eq!(lhs, rhs, "{p} k={k} minus");
                        let plus = p.shift_value(k, 1);
                        let lhs = p.x_stat() as i64 - plus.x_stat() as i64;
                        let rhs = count_eq(&p, pk, -big, k - 1) - count_eq(&p, pk + 1, k + 1, big);
                        assert_eq!(lhs, rhs, "{p} k={k} plus");
                    }
                }
            }
        }
    }

    proptest! {
        #[test]
        fn matrix_of_pair_is_orbit_invariant(
            a in prop::collection::vec(-3i64..6, 3),
            b in prop::collection::vec(-3i64..6, 3),
            word in prop::collection::vec(0usize..3, 0..6),
            k in -2i64..3,
        ) {
            let p = FlagSymbol::new(2, a).unwrap();
            let q = FlagSymbol::new(2, b).unwrap();
            let w = AffinePermutation::from_word(3, k, &word);
            let s = matrix_of_pair(&p, &q).unwrap();
            let s2 = matrix_of_pair(
                &w.act_on_flag_symbol(&p).unwrap(),
                &w.act_on_flag_symbol(&q).unwrap(),
            ).unwrap();
            prop_assert_eq!(&s, &s2);
            prop_assert_eq!(s.row_weight(), p.weight());
            prop_assert_eq!(s.col_weight(), q.weight());
        }

        #[test]
        fn simple_and_rotation_match_the_group_action(
            a in prop::collection::vec(-3i64..6, 3), i in 0usize..3, k in -3i64..4
        ) {
            let p = FlagSymbol::new(2, a).unwrap();
            prop_assert_eq!(
                p.mul_simple(i),
                AffinePermutation::simple(3, i).act_on_flag_symbol(&p).unwrap()
            );
            prop_assert_eq!(
                p.mul_rotation(k),
                AffinePermutation::rotation(3, k).act_on_flag_symbol(&p).unwrap()
            );
        }
    }
}
