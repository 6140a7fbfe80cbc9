//! Canonical bases from bar involutions: a generic triangular solver and its
//! specializations to `T_D` and to the Schur algebra.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt::{self, Display, Write as _};
use std::hash::{Hash, Hasher};
use std::path::{Path, PathBuf};
use std::sync::Mutex;

use num_bigint::BigInt;
use num_traits::Zero;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flag_comb::{FlagSymbol, PeriodicMatrix};
use crate::laurent::Laurent;
use crate::schur::{self, matrix_vector, SchurElement};
use crate::tmodule::{tau_basis, ModuleVector};

pub const DEFAULT_CAP: usize = 10_000;

/// Labels with the bar expansions of their standard basis elements.
#[derive(Clone, Debug)]
pub struct BarSystem<L: Ord> {
    rows: BTreeMap<L, BTreeMap<L, Laurent>>,
}

impl<L: Ord + Clone + Display + Hash> BarSystem<L> {
    pub fn from_rows(rows: BTreeMap<L, BTreeMap<L, Laurent>>) -> Result<Self> {
        let sys = BarSystem { rows };
        sys.check_diagonal()?;
        Ok(sys)
    }

    /// Closes `roots` under "appears in a bar expansion", up to `cap` labels.
    pub fn explore(
        roots: impl IntoIterator<Item = L>,
        bar: impl Fn(&L) -> Result<BTreeMap<L, Laurent>>,
        cap: usize,
    ) -> Result<Self> {
        let mut rows = BTreeMap::new();
        let mut stack: Vec<L> = roots.into_iter().collect();
        while let Some(x) = stack.pop() {
            if rows.contains_key(&x) {
                continue;
            }
            if rows.len() >= cap {
                return Err(Error::CapExceeded { cap });
            }
            let row = bar(&x)?;
            stack.extend(row.keys().filter(|y| !rows.contains_key(*y)).cloned());
            rows.insert(x, row);
        }
        Self::from_rows(rows)
    }

    fn check_diagonal(&self) -> Result<()> {
        for (x, row) in &self.rows {
            if row.get(x) != Some(&Laurent::one()) {
                return Err(Error::NotUnitriangular(format!(
                    "diagonal coefficient at {x} is {}",
                    row.get(x).cloned().unwrap_or_default()
                )));
            }
        }
        Ok(())
    }

    pub fn labels(&self) -> impl Iterator<Item = &L> {
        self.rows.keys()
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn row(&self, x: &L) -> Option<&BTreeMap<L, Laurent>> {
        self.rows.get(x)
    }

    /// Labels below `root`, listed so that `y` precedes `z` whenever `z`
    /// appears in the bar expansion of `y`. Ties are broken by a hash salted
    /// with `salt`; `salt = 0` keeps label order.
    pub fn topological_order(&self, root: &L, salt: u64) -> Result<Vec<L>> {
        let mut below = BTreeSet::new();
        let mut stack = vec![root.clone()];
        while let Some(x) = stack.pop() {
            if !below.insert(x.clone()) {
                continue;
            }
            let row = self
                .rows
                .get(&x)
                .ok_or_else(|| Error::NotUnitriangular(format!("{x} is outside the system")))?;
            stack.extend(row.keys().filter(|y| !below.contains(*y)).cloned());
        }
        let mut indegree: BTreeMap<&L, usize> = below.iter().map(|x| (x, 0)).collect();
        for x in &below {
            for y in self.rows[x].keys().filter(|y| *y != x) {
                *indegree.get_mut(y).expect("closed") += 1;
            }
        }
        let key = |x: &L| {
            if salt == 0 {
                0
            } else {
                let mut h = DefaultHasher::new();
                salt.hash(&mut h);
                x.hash(&mut h);
                h.finish()
            }
        };
        let mut ready: BTreeSet<(u64, &L)> = indegree
            .iter()
            .filter(|(_, &d)| d == 0)
            .map(|(x, _)| (key(x), *x))
            .collect();
        let mut order = Vec::with_capacity(below.len());
        while let Some(first) = ready.pop_first() {
            let x = first.1;
            order.push(x.clone());
            for y in self.rows[x].keys().filter(|y| *y != x) {
                let d = indegree.get_mut(y).expect("closed");
                *d -= 1;
                if *d == 0 {
                    ready.insert((key(y), y));
                }
            }
        }
        if order.len() != below.len() {
            return Err(Error::NotUnitriangular(format!("bar support below {root} has a cycle")));
        }
        if order.first() != Some(root) {
            return Err(Error::NotUnitriangular(format!("{root} lies below another label")));
        }
        Ok(order)
    }

    pub fn solve(&self, root: &L) -> Result<CanonicalExpansion<L>> {
        self.solve_salted(root, 0)
    }

    /// The unique bar-fixed `[root] + sum c_y [y]` with `c_y` in `v Z[v]`.
    pub fn solve_salted(&self, root: &L, salt: u64) -> Result<CanonicalExpansion<L>> {
        let order = self.topological_order(root, salt)?;
        let mut pending: BTreeMap<L, Laurent> = BTreeMap::new();
        let mut terms = BTreeMap::new();
        for z in order {
            let c = if &z == root {
                Laurent::one()
            } else {
                let r = pending.remove(&z).unwrap_or_default();
                let c = r.positive_part();
                if &c - &c.bar() != r {
                    return Err(Error::BarDiscrepancy(format!("{r} at {z} below {root}")));
                }
                c
            };
            if c.is_zero() {
                continue;
            }
            let cb = c.bar();
            for (y, a) in &self.rows[&z] {
                if y != &z {
                    *pending.entry(y.clone()).or_default() += &(&cb * a);
                }
            }
            terms.insert(z, c);
        }
        Ok(CanonicalExpansion {
            leading: root.clone(),
            terms,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(bound(
    serialize = "L: Serialize + Clone",
    deserialize = "L: DeserializeOwned + Ord"
))]
pub struct CanonicalExpansion<L: Ord> {
    pub leading: L,
    #[serde(with = "term_list")]
    pub terms: BTreeMap<L, Laurent>,
}

mod term_list {
    use super::*;
    use serde::{Deserializer, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Term<L> {
        label: L,
        coeff: Laurent,
    }

    pub fn serialize<L: Serialize + Clone, S: Serializer>(
        map: &BTreeMap<L, Laurent>,
        ser: S,
    ) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<Term<L>> = map
            .iter()
            .map(|(l, c)| Term {
                label: l.clone(),
                coeff: c.clone(),
            })
            .collect();
        v.serialize(ser)
    }

    pub fn deserialize<'de, L: DeserializeOwned + Ord, D: Deserializer<'de>>(
        de: D,
    ) -> std::result::Result<BTreeMap<L, Laurent>, D::Error> {
        let v: Vec<Term<L>> = Vec::deserialize(de)?;
        Ok(v.into_iter().map(|t| (t.label, t.coeff)).collect())
    }
}

impl<L: Ord + Clone + Display> CanonicalExpansion<L> {
    pub fn coeff(&self, y: &L) -> Laurent {
        self.terms.get(y).cloned().unwrap_or_default()
    }

    /// Leading coefficient 1 and every other coefficient in `v Z[v]`.
    pub fn is_unitriangular(&self) -> bool {
        self.terms.get(&self.leading) == Some(&Laurent::one())
            && self
                .terms
                .iter()
                .all(|(y, c)| y == &self.leading || c.in_v_zv())
    }

    /// Every coefficient in `N[v]`.
    pub fn is_positive(&self) -> bool {
        self.terms
            .values()
            .all(|c| c.terms().all(|(e, a)| e >= 0 && *a > BigInt::zero()))
    }
}

impl CanonicalExpansion<FlagSymbol> {
    pub fn to_vector(&self) -> ModuleVector {
        let mut out = ModuleVector::zero(self.leading.n(), self.leading.rank());
        for (p, c) in &self.terms {
            out.add_term(p.clone(), c);
        }
        out
    }
}

impl CanonicalExpansion<PeriodicMatrix> {
    pub fn to_schur(&self) -> SchurElement {
        let mut out = SchurElement::zero(self.leading.n(), self.leading.rank());
        for (s, c) in &self.terms {
            out.add_term(s.clone(), c);
        }
        out
    }
}

/// The bar system of `T_lambda H_D` below the given symbols.
pub fn tmodule_system(roots: &[FlagSymbol], cap: usize) -> Result<BarSystem<FlagSymbol>> {
    BarSystem::explore(
        roots.iter().cloned(),
        |p| Ok(tau_basis(p).terms().map(|(q, c)| (q.clone(), c.clone())).collect()),
        cap,
    )
}

/// The twisted bar system of `H_{lambda mu}` below the given matrices.
pub fn schur_system(roots: &[PeriodicMatrix], cap: usize) -> Result<BarSystem<PeriodicMatrix>> {
    BarSystem::explore(
        roots.iter().cloned(),
        |s| Ok(schur::tau_basis(s)?.terms().map(|(t, c)| (t.clone(), c.clone())).collect()),
        cap,
    )
}

/// `b_p`.
pub fn canonical_tmodule(p: &FlagSymbol, cap: usize) -> Result<CanonicalExpansion<FlagSymbol>> {
    tmodule_system(std::slice::from_ref(p), cap)?.solve(p)
}

/// `b_s`.
pub fn canonical_schur(s: &PeriodicMatrix, cap: usize) -> Result<CanonicalExpansion<PeriodicMatrix>> {
    schur_system(std::slice::from_ref(s), cap)?.solve(s)
}

/// Grading data read off one coefficient.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KlReport {
    /// `(i, dim_i)` with `dim_i != 0`, increasing in `i`.
    #[serde(with = "dim_list")]
    pub pairs: Vec<(i64, BigInt)>,
    /// All dimensions are nonnegative.
    pub ic_consistent: bool,
}

// dimensions as JSON numbers when they fit, strings otherwise
mod dim_list {
    use num_bigint::BigInt;
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};
    use serde_json::Value;

    pub fn serialize<S: Serializer>(pairs: &[(i64, BigInt)], s: S) -> std::result::Result<S::Ok, S::Error> {
        let out: Vec<(i64, Value)> = pairs
            .iter()
            .map(|(i, d)| match i64::try_from(d) {
                Ok(small) => (*i, Value::from(small)),
                Err(_) => (*i, Value::from(d.to_string())),
            })
            .collect();
        out.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<(i64, BigInt)>, D::Error> {
        let raw: Vec<(i64, Value)> = Vec::deserialize(d)?;
        raw.into_iter()
            .map(|(i, v)| {
                let text = match v {
                    Value::Number(n) => n.to_string(),
                    Value::String(s) => s,
                    other => return Err(D::Error::custom(format!("bad dimension {other}"))),
                };
                text.parse::<BigInt>().map(|b| (i, b)).map_err(D::Error::custom)
            })
            .collect()
    }
}

/// Inverts `c = sum_i v^{-i + shift} dim_i`.
pub fn kl_from_coefficient(c: &Laurent, shift: i64) -> KlReport {
    let mut pairs: Vec<(i64, BigInt)> = c.terms().map(|(e, a)| (shift - e as i64, a.clone())).collect();
    pairs.sort();
    let ic_consistent = pairs.iter().all(|(_, a)| *a > BigInt::zero());
    KlReport { pairs, ic_consistent }
}

/// Statistic used to grade the coefficients of a canonical element.
pub trait Graded {
    fn grade(&self) -> i64;
}

impl Graded for FlagSymbol {
    fn grade(&self) -> i64 {
        self.x_stat() as i64
    }
}

impl Graded for PeriodicMatrix {
    fn grade(&self) -> i64 {
        self.y_stat() as i64
    }
}

pub fn kl_coefficients<L: Ord + Clone + Display + Graded>(exp: &CanonicalExpansion<L>, q: &L) -> KlReport {
    kl_from_coefficient(&exp.coeff(q), exp.leading.grade() - q.grade())
}

/// `v^{x_mu} b_s = b_{p*}` where `p*` is the class member with
/// `x_{p*} = y_s + x_mu`.
pub fn check_compatibility(s: &PeriodicMatrix, cap: usize) -> Result<bool> {
    let mu = s.right_dominant();
    let xmu = mu.x_stat() as i32;
    let target = s.y_stat() as i64 + xmu as i64;
    let tops: Vec<FlagSymbol> = s
        .class_members()
        .into_iter()
        .filter(|p| p.x_stat() as i64 == target)
        .collect();
    let [top] = tops.as_slice() else {
        return Err(Error::Internal(format!("{} class members of {s} of top length", tops.len())));
    };
    let bs = canonical_schur(s, cap)?.to_schur();
    let lhs = bs.column_vector(&mu).scale(&Laurent::v_pow(xmu));
    let rhs = canonical_tmodule(top, cap)?.to_vector();
    Ok(lhs == rhs)
}

/// One row of an exported canonical table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    pub leading: String,
    pub term: String,
    pub coeff: Laurent,
    pub kl: KlReport,
}

pub fn table_rows<L: Ord + Clone + Display + Graded>(exps: &[CanonicalExpansion<L>]) -> Vec<TableRow> {
    let mut rows = Vec::new();
    for e in exps {
        for (q, c) in &e.terms {
            rows.push(TableRow {
                leading: e.leading.to_string(),
                term: q.to_string(),
                coeff: c.clone(),
                kl: kl_coefficients(e, q),
            });
        }
    }
    rows
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

pub fn table_csv(rows: &[TableRow]) -> String {
    let mut out = String::from("leading,term,coeff,kl\n");
    for r in rows {
        let coeff = r.coeff.to_string();
        let kl: Vec<String> = r.kl.pairs.iter().map(|(i, d)| format!("{i}:{d}")).collect();
        let kl = kl.join(" ");
        let _ = writeln!(
            out,
            "{},{},{},{}",
            csv_field(&r.leading),
            csv_field(&r.term),
            csv_field(&coeff),
            csv_field(&kl)
        );
    }
    out
}

/// Canonical expansions keyed by `(n, D, lambda, mu)`, in memory and
/// optionally on disk with one JSON file per key.
#[derive(Debug, Default)]
pub struct CanonicalCache {
    dir: Option<PathBuf>,
    cap: usize,
    tmodule: Mutex<HashMap<String, BTreeMap<String, CanonicalExpansion<FlagSymbol>>>>,
    schur: Mutex<HashMap<String, BTreeMap<String, CanonicalExpansion<PeriodicMatrix>>>>,
}

impl CanonicalCache {
    pub fn in_memory(cap: usize) -> Self {
        CanonicalCache {
            cap,
            ..Default::default()
        }
    }

    pub fn with_dir(dir: impl Into<PathBuf>, cap: usize) -> Result<Self> {
        let dir = dir.into();
        std::fs::create_dir_all(&dir).map_err(|e| Error::Io(format!("{}: {e}", dir.display())))?;
        Ok(CanonicalCache {
            dir: Some(dir),
            cap,
            ..Default::default()
        })
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    fn file(&self, key: &str) -> Option<PathBuf> {
        self.dir.as_ref().map(|d| d.join(format!("{key}.json")))
    }

    fn lookup<L>(
        &self,
        map: &Mutex<HashMap<String, BTreeMap<String, CanonicalExpansion<L>>>>,
        key: &str,
        label: &str,
    ) -> Result<Option<CanonicalExpansion<L>>>
    where
        L: Ord + Clone + DeserializeOwned,
    {
        let mut guard = map.lock().expect("cache lock");
        if !guard.contains_key(key) {
            let loaded = match self.file(key) {
                Some(path) if path.exists() => read_json(&path)?,
                _ => BTreeMap::new(),
            };
            guard.insert(key.to_string(), loaded);
        }
        Ok(guard[key].get(label).cloned())
    }

    fn store<L>(
        &self,
        map: &Mutex<HashMap<String, BTreeMap<String, CanonicalExpansion<L>>>>,
        key: &str,
        label: String,
        value: CanonicalExpansion<L>,
    ) -> Result<()>
    where
        L: Ord + Clone + Serialize,
    {
        let mut guard = map.lock().expect("cache lock");
        let entry = guard.entry(key.to_string()).or_default();
        entry.insert(label, value);
        if let Some(path) = self.file(key) {
            let text = serde_json::to_string_pretty(entry).map_err(|e| Error::Io(e.to_string()))?;
            std::fs::write(&path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        }
        Ok(())
    }

    pub fn tmodule(&self, p: &FlagSymbol) -> Result<CanonicalExpansion<FlagSymbol>> {
        let lam = p.dominant();
        let key = format!("t_n{}_D{}_{}", p.n(), p.rank(), join(lam.values()));
        let label = join(p.values());
        if let Some(hit) = self.lookup(&self.tmodule, &key, &label)? {
            return Ok(hit);
        }
        let value = canonical_tmodule(p, self.cap)?;
        self.store(&self.tmodule, &key, label, value.clone())?;
        Ok(value)
    }

    pub fn schur(&self, s: &PeriodicMatrix) -> Result<CanonicalExpansion<PeriodicMatrix>> {
        let key = format!(
            "s_n{}_D{}_{}_{}",
            s.n(),
            s.rank(),
            join(s.left_dominant().values()),
            join(s.right_dominant().values())
        );
        let label = s.to_string();
        if let Some(hit) = self.lookup(&self.schur, &key, &label)? {
            return Ok(hit);
        }
        let value = canonical_schur(s, self.cap)?;
        self.store(&self.schur, &key, label, value.clone())?;
        Ok(value)
    }
}

fn join(v: &[i64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("-")
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

impl<L: Ord + Display> Display for CanonicalExpansion<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "b[{}] =", self.leading)?;
        for (y, c) in &self.terms {
            write!(f, " + ({c})[{y}]")?;
        }
        Ok(())
    }
}

/// `[p]` for every `p` in a closed set, written back in the canonical basis.
pub fn invert_transition(
    exps: &BTreeMap<FlagSymbol, CanonicalExpansion<FlagSymbol>>,
) -> Result<BTreeMap<FlagSymbol, BTreeMap<FlagSymbol, Laurent>>> {
    // process labels so that everything below p is handled first
    let mut done: BTreeMap<FlagSymbol, BTreeMap<FlagSymbol, Laurent>> = BTreeMap::new();
    let mut remaining: Vec<&FlagSymbol> = exps.keys().collect();
    while !remaining.is_empty() {
        let before = remaining.len();
        let mut next = Vec::new();
        for p in remaining {
            let e = &exps[p];
            let lower: Vec<&FlagSymbol> = e.terms.keys().filter(|q| *q != p).collect();
            if lower.iter().all(|q| done.contains_key(*q)) {
                // [p] = b_p - sum c_q [q]
                let mut row: BTreeMap<FlagSymbol, Laurent> = BTreeMap::from([(p.clone(), Laurent::one())]);
                for q in lower {
                    let c = e.coeff(q);
                    for (r, a) in &done[q] {
                        *row.entry(r.clone()).or_default() -= &(&c * a);
                    }
                }
                row.retain(|_, c| !c.is_zero());
                done.insert(p.clone(), row);
            } else if lower.iter().any(|q| !exps.contains_key(*q)) {
                return Err(Error::NotUnitriangular(format!("{p} reaches outside the set")));
            } else {
                next.push(p);
            }
        }
        if next.len() == before {
            return Err(Error::NotUnitriangular("cyclic transition matrix".into()));
        }
        remaining = next;
    }
    Ok(done)
}

/// `tau`-invariance of a Schur element, for reports.
pub fn schur_is_tau_fixed(x: &SchurElement) -> Result<bool> {
    Ok(&x.tau()? == x)
}

/// `[s]` in `T_lambda H_D`.
pub fn schur_vector(s: &PeriodicMatrix) -> ModuleVector {
    matrix_vector(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fs(n: usize, v: &[i64]) -> FlagSymbol {
        FlagSymbol::new(n, v.to_vec()).unwrap()
    }

    #[test]
    fn dominant_is_single_term() {
        for lam in FlagSymbol::dominant_symbols(2, 2) {
            let b = canonical_tmodule(&lam, DEFAULT_CAP).unwrap();
            assert_eq!(b.terms.len(), 1, "{b}");
        }
    }

    #[test]
    fn example_21() {
        let p = fs(2, &[2, 1]);
        let b = canonical_tmodule(&p, DEFAULT_CAP).unwrap();
        assert!(b.is_unitriangular());
        assert_eq!(b.to_vector().tau(), b.to_vector());
        assert_eq!(b.coeff(&fs(2, &[1, 2])), Laurent::v());
    }

    #[test]
    fn tmodule_table_n2_d2() {
        for p in FlagSymbol::enumerate(2, 2, 1, 4) {
            let b = canonical_tmodule(&p, DEFAULT_CAP).unwrap();
            assert!(b.is_unitriangular(), "{b}");
            let v = b.to_vector();
            assert_eq!(v.tau(), v, "{b}");
            for q in b.terms.keys() {
                assert!(kl_coefficients(&b, q).ic_consistent, "{b} at {q}");
            }
        }
    }

    #[test]
    fn schur_diagonal_is_single_term() {
        for lam in FlagSymbol::dominant_symbols(2, 2) {
            let s = PeriodicMatrix::delta(&lam);
            let b = canonical_schur(&s, DEFAULT_CAP).unwrap();
            assert_eq!(b.terms.len(), 1);
        }
    }

    #[test]
    fn schur_table_n2_d2() {
        for s in PeriodicMatrix::enumerate_band(2, 2, 2) {
            let b = canonical_schur(&s, DEFAULT_CAP).unwrap();
            assert!(b.is_unitriangular(), "{b}");
            assert!(b.is_positive(), "{b}");
            let x = b.to_schur();
            assert_eq!(x.tau().unwrap(), x);
            assert!(check_compatibility(&s, DEFAULT_CAP).unwrap(), "{s}");
        }
    }

    #[test]
    fn order_independent() {
        let p = fs(2, &[4, 1]);
        let sys = tmodule_system(std::slice::from_ref(&p), DEFAULT_CAP).unwrap();
        let a = sys.solve_salted(&p, 0).unwrap();
        for salt in [1, 7, 12345] {
            assert_ne!(sys.topological_order(&p, salt).unwrap().len(), 0);
            assert_eq!(sys.solve_salted(&p, salt).unwrap(), a);
        }
    }

    #[test]
    fn transition_round_trip() {
        let p = fs(2, &[4, 1]);
        let sys = tmodule_system(std::slice::from_ref(&p), DEFAULT_CAP).unwrap();
        let exps: BTreeMap<_, _> = sys
            .labels()
            .map(|q| (q.clone(), sys.solve(q).unwrap()))
            .collect();
        let inv = invert_transition(&exps).unwrap();
        for (q, row) in &inv {
            let mut back = ModuleVector::zero(2, 2);
            for (r, c) in row {
                back.accumulate(&exps[r].to_vector(), c);
            }
            assert_eq!(back, ModuleVector::basis(q.clone()));
        }
    }

    #[test]
    fn kl_examples() {
        let r = kl_from_coefficient(&Laurent::one(), 0);
        assert_eq!(r.pairs, vec![(0, BigInt::from(1))]);
        let r = kl_from_coefficient(&Laurent::v(), 3);
        assert_eq!(r.pairs, vec![(2, BigInt::from(1))]);
        assert!(!kl_from_coefficient(&-Laurent::v(), 0).ic_consistent);
    }

    #[test]
    fn non_unitriangular_rejected() {
        let rows = BTreeMap::from([(1i64, BTreeMap::from([(1i64, Laurent::v())]))]);
        assert!(matches!(BarSystem::from_rows(rows), Err(Error::NotUnitriangular(_))));
    }

    #[test]
    fn cap_is_enforced() {
        let p = fs(2, &[6, 1]);
        assert!(matches!(canonical_tmodule(&p, 2), Err(Error::CapExceeded { cap: 2 })));
    }

    #[test]
    fn exports() {
        let b = canonical_tmodule(&fs(2, &[2, 1]), DEFAULT_CAP).unwrap();
        let rows = table_rows(std::slice::from_ref(&b));
        let csv = table_csv(&rows);
        assert!(csv.starts_with("leading,term,coeff,kl\n"));
        assert_eq!(csv.lines().count(), 1 + b.terms.len());
        let json = serde_json::to_string(&b).unwrap();
        assert_eq!(serde_json::from_str::<CanonicalExpansion<FlagSymbol>>(&json).unwrap(), b);
    }
}
