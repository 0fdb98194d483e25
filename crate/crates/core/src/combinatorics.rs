//! Committees, rankings of committees, and the wreath product `S_m ≀ S_n`
//! acting on both.
//!
//! Committees are indexed in lexicographic order of their choice tuples
//! `(j_1, ..., j_n)`; that index is the coordinate used for every vector in
//! the crate. Group elements and rankings are stored 0-based internally and
//! rendered 1-based.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Size caps guarding the combinatorial explosions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    /// Largest allowed number of committees `m^n`.
    pub dim: usize,
    /// Largest allowed group order `(m!)^n n!`.
    pub group: u64,
    /// Largest allowed number of rankings `(m^n)!` for full enumeration.
    pub rankings: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { dim: 4096, group: 1_000_000, rankings: 1_000_000 }
    }
}

/// Number of departments `n` and candidates per department `m`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Shape {
    pub m: usize,
    pub n: usize,
}

impl Shape {
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m == 0 || n == 0 {
            return Err(Error::InvalidShape(format!("need m >= 1 and n >= 1, got m={m}, n={n}")));
        }
        Ok(Shape { m, n })
    }

    /// `m^n` as a big integer, never overflowing.
    pub fn committee_count(&self) -> BigUint {
        num_traits::pow(BigUint::from(self.m), self.n)
    }

    /// `m^n`, checked against `caps.dim`.
    pub fn dim(&self, caps: &Caps) -> Result<usize> {
        let count = self.committee_count();
        match count.to_usize() {
            Some(d) if d <= caps.dim => Ok(d),
            _ => Err(Error::SizeGuard {
                what: "committee space dimension m^n",
                needed: count.to_string(),
                cap: caps.dim.to_string(),
            }),
        }
    }

    /// `(m!)^n n!`
    pub fn group_order(&self) -> BigUint {
        num_traits::pow(factorial(self.m), self.n) * factorial(self.n)
    }

    fn check_group(&self, caps: &Caps) -> Result<()> {
        let order = self.group_order();
        if order > BigUint::from(caps.group) {
            return Err(Error::SizeGuard {
                what: "wreath product order (m!)^n n!",
                needed: order.to_string(),
                cap: caps.group.to_string(),
            });
        }
        Ok(())
    }

    fn check_rankings(&self, caps: &Caps) -> Result<usize> {
        let dim = self.dim(caps)?;
        let count = factorial(dim);
        if count > BigUint::from(caps.rankings) {
            return Err(Error::SizeGuard {
                what: "number of rankings (m^n)!",
                needed: count.to_string(),
                cap: caps.rankings.to_string(),
            });
        }
        Ok(dim)
    }
}

impl fmt::Display for Shape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "m={}, n={}", self.m, self.n)
    }
}

pub fn factorial(k: usize) -> BigUint {
    (1..=k).fold(BigUint::one(), |acc, i| acc * BigUint::from(i))
}

pub fn binomial(n: usize, k: usize) -> BigUint {
    if k > n {
        return BigUint::from(0u32);
    }
    let k = k.min(n - k);
    // Each partial product is itself a binomial coefficient, so the division is exact.
    (0..k).fold(BigUint::one(), |acc, i| acc * BigUint::from(n - i) / BigUint::from(i + 1))
}

/// One candidate per department. Choices are 1-based.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Committee {
    choices: Vec<usize>,
}

impl Committee {
    pub fn new(shape: Shape, choices: Vec<usize>) -> Result<Self> {
        if choices.len() != shape.n {
            return Err(Error::DimensionMismatch { expected: shape.n, got: choices.len() });
        }
        if let Some(bad) = choices.iter().find(|&&j| j == 0 || j > shape.m) {
            return Err(Error::Invalid(format!("candidate {bad} is outside 1..={}", shape.m)));
        }
        Ok(Committee { choices })
    }

    /// Committee at lexicographic position `index`.
    pub fn from_index(shape: Shape, mut index: usize) -> Self {
        let mut choices = vec![0; shape.n];
        for slot in choices.iter_mut().rev() {
            *slot = index % shape.m + 1;
            index /= shape.m;
        }
        Committee { choices }
    }

    pub fn choices(&self) -> &[usize] {
        &self.choices
    }

    pub fn departments(&self) -> usize {
        self.choices.len()
    }

    pub fn index(&self, m: usize) -> usize {
        self.choices.iter().fold(0, |acc, &j| acc * m + (j - 1))
    }

    /// `(1_{j1},2_{j2},...)`
    pub fn label(&self) -> String {
        let parts: Vec<String> = self.choices.iter().enumerate().map(|(i, j)| format!("{}_{}", i + 1, j)).collect();
        format!("({})", parts.join(","))
    }
}

impl fmt::Display for Committee {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl Serialize for Committee {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

pub fn enumerate_committees(shape: Shape, caps: &Caps) -> Result<Vec<Committee>> {
    let dim = shape.dim(caps)?;
    Ok((0..dim).map(|i| Committee::from_index(shape, i)).collect())
}

/// Number of departments in which the two committees choose differently.
pub fn disagreement(c1: &Committee, c2: &Committee) -> Result<usize> {
    if c1.departments() != c2.departments() {
        return Err(Error::DimensionMismatch { expected: c1.departments(), got: c2.departments() });
    }
    Ok(c1.choices.iter().zip(&c2.choices).filter(|(a, b)| a != b).count())
}

/// Disagreement counts computed straight from lexicographic indices.
pub fn disagreement_by_index(shape: Shape, mut a: usize, mut b: usize) -> usize {
    let mut d = 0;
    for _ in 0..shape.n {
        if a % shape.m != b % shape.m {
            d += 1;
        }
        a /= shape.m;
        b /= shape.m;
    }
    d
}

/// All permutations of `0..k` in lexicographic one-line order.
pub fn lex_permutations(k: usize) -> Vec<Vec<usize>> {
    let mut current: Vec<usize> = (0..k).collect();
    let mut out = vec![current.clone()];
    while next_permutation(&mut current) {
        out.push(current.clone());
    }
    out
}

fn next_permutation(p: &mut [usize]) -> bool {
    if p.len() < 2 {
        return false;
    }
    let Some(i) = (0..p.len() - 1).rev().find(|&i| p[i] < p[i + 1]) else {
        return false;
    };
    let j = (i + 1..p.len()).rev().find(|&j| p[j] > p[i]).expect("successor exists");
    p.swap(i, j);
    p[i + 1..].reverse();
    true
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

/// An element `(σ_1, ..., σ_n; π)` of `S_m ≀ S_n`, stored as 0-based one-line
/// permutations.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WreathElement {
    inner: Vec<Vec<usize>>,
    outer: Vec<usize>,
}

impl WreathElement {
    pub fn new(inner: Vec<Vec<usize>>, outer: Vec<usize>) -> Result<Self> {
        if inner.len() != outer.len() {
            return Err(Error::DimensionMismatch { expected: outer.len(), got: inner.len() });
        }
        if !is_permutation(&outer) {
            return Err(Error::Invalid(format!("outer {outer:?} is not a permutation")));
        }
        let m = inner.first().map_or(0, Vec::len);
        for s in &inner {
            if s.len() != m || !is_permutation(s) {
                return Err(Error::Invalid(format!("inner {s:?} is not a permutation of 0..{m}")));
            }
        }
        Ok(WreathElement { inner, outer })
    }

    /// Builds from 1-based one-line notation, as written by hand.
    pub fn from_one_based(inner: &[&[usize]], outer: &[usize]) -> Result<Self> {
        let shift = |p: &[usize]| -> Result<Vec<usize>> {
            p.iter().map(|&x| x.checked_sub(1).ok_or_else(|| Error::Invalid("entries are 1-based".into()))).collect()
        };
        let inner = inner.iter().map(|p| shift(p)).collect::<Result<Vec<_>>>()?;
        Self::new(inner, shift(outer)?)
    }

    pub fn identity(shape: Shape) -> Self {
        WreathElement { inner: vec![(0..shape.m).collect(); shape.n], outer: (0..shape.n).collect() }
    }

    pub fn inner(&self) -> &[Vec<usize>] {
        &self.inner
    }

    pub fn outer(&self) -> &[usize] {
        &self.outer
    }

    pub fn shape(&self) -> Shape {
        Shape { m: self.inner.first().map_or(0, Vec::len), n: self.outer.len() }
    }

    pub fn is_identity(&self) -> bool {
        self.outer.iter().enumerate().all(|(i, &x)| i == x)
            && self.inner.iter().all(|s| s.iter().enumerate().all(|(i, &x)| i == x))
    }

    /// The product `self · other`, acting as `other` first.
    pub fn compose(&self, other: &WreathElement) -> WreathElement {
        let outer_inv = invert(&self.outer);
        let inner = (0..self.outer.len())
            .map(|i| {
                let tau = &other.inner[outer_inv[i]];
                tau.iter().map(|&x| self.inner[i][x]).collect()
            })
            .collect();
        let outer = other.outer.iter().map(|&x| self.outer[x]).collect();
        WreathElement { inner, outer }
    }

    pub fn inverse(&self) -> WreathElement {
        let outer = invert(&self.outer);
        let inner = (0..self.outer.len()).map(|i| invert(&self.inner[self.outer[i]])).collect();
        WreathElement { inner, outer }
    }

    fn check(&self, shape: Shape) -> Result<()> {
        let own = self.shape();
        if own.n != shape.n {
            return Err(Error::DimensionMismatch { expected: shape.n, got: own.n });
        }
        if own.m != shape.m {
            return Err(Error::DimensionMismatch { expected: shape.m, got: own.m });
        }
        Ok(())
    }

    /// Department `i` of the image takes `σ_i` of the choice the committee
    /// made in department `π^{-1}(i)`.
    fn act(&self, choices: &[usize]) -> Vec<usize> {
        let outer_inv = invert(&self.outer);
        (0..self.outer.len()).map(|i| self.inner[i][choices[outer_inv[i]] - 1] + 1).collect()
    }

    /// The induced permutation of committee indices: `perm[c] = index(g·c)`.
    pub fn committee_permutation(&self, shape: Shape) -> Vec<usize> {
        let dim = shape.m.pow(shape.n as u32);
        (0..dim)
            .map(|i| {
                let c = Committee::from_index(shape, i);
                Committee { choices: self.act(&c.choices) }.index(shape.m)
            })
            .collect()
    }
}

impl fmt::Display for WreathElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let one = |p: &[usize]| p.iter().map(|x| (x + 1).to_string()).collect::<Vec<_>>().join(" ");
        let inner: Vec<String> = self.inner.iter().map(|s| format!("[{}]", one(s))).collect();
        write!(f, "(({}); [{}])", inner.join(","), one(&self.outer))
    }
}

pub fn apply_wreath(g: &WreathElement, c: &Committee) -> Result<Committee> {
    let m = g.shape().m;
    g.check(Shape { m, n: c.departments() })?;
    if c.choices.iter().any(|&j| j > m) {
        return Err(Error::Invalid(format!("committee {c} has a candidate outside 1..={m}")));
    }
    Ok(Committee { choices: g.act(&c.choices) })
}

/// Every element of `S_m ≀ S_n`: outer permutations in lexicographic order,
/// and for each, inner tuples in odometer order (last department fastest).
pub fn enumerate_group(shape: Shape, caps: &Caps) -> Result<Vec<WreathElement>> {
    shape.check_group(caps)?;
    let inner_perms = lex_permutations(shape.m);
    let outers = lex_permutations(shape.n);
    let per_outer = inner_perms.len().pow(shape.n as u32);
    let mut out = Vec::with_capacity(outers.len() * per_outer);
    for outer in &outers {
        let mut odometer = vec![0usize; shape.n];
        loop {
            out.push(WreathElement {
                inner: odometer.iter().map(|&i| inner_perms[i].clone()).collect(),
                outer: outer.clone(),
            });
            let mut pos = shape.n;
            loop {
                if pos == 0 {
                    break;
                }
                pos -= 1;
                odometer[pos] += 1;
                if odometer[pos] < inner_perms.len() {
                    break;
                }
                odometer[pos] = 0;
            }
            if odometer.iter().all(|&i| i == 0) {
                break;
            }
        }
    }
    Ok(out)
}

/// A strict ranking of all committees, most preferred first.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct Ranking {
    order: Vec<usize>,
}

impl Ranking {
    pub fn new(shape: Shape, order: Vec<usize>) -> Result<Self> {
        let dim = shape.m.checked_pow(shape.n as u32).unwrap_or(usize::MAX);
        if order.len() != dim {
            return Err(Error::DimensionMismatch { expected: dim, got: order.len() });
        }
        if !is_permutation(&order) {
            return Err(Error::Invalid(format!("{order:?} is not a permutation of the committees")));
        }
        Ok(Ranking { order })
    }

    pub(crate) fn from_vec_unchecked(order: Vec<usize>) -> Self {
        Ranking { order }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    /// `positions()[c]` is the 0-based place of committee `c`.
    pub fn positions(&self) -> Vec<usize> {
        invert(&self.order)
    }

    /// Image under a committee permutation, position by position.
    pub fn permuted(&self, committee_perm: &[usize]) -> Ranking {
        Ranking { order: self.order.iter().map(|&c| committee_perm[c]).collect() }
    }

    /// Position of this ranking in the lexicographic list of all permutations.
    pub fn lex_rank(&self) -> BigUint {
        let n = self.order.len();
        let mut used = vec![false; n];
        let mut rank = BigUint::from(0u32);
        for (i, &x) in self.order.iter().enumerate() {
            let smaller = (0..x).filter(|&y| !used[y]).count();
            rank += BigUint::from(smaller) * factorial(n - 1 - i);
            used[x] = true;
        }
        rank
    }

    /// Lexicographic position as a machine integer, for small rankings.
    fn lex_rank_small(&self, factorials: &[usize]) -> usize {
        let n = self.order.len();
        let mut used = vec![false; n];
        let mut rank = 0;
        for (i, &x) in self.order.iter().enumerate() {
            let smaller = (0..x).filter(|&y| !used[y]).count();
            rank += smaller * factorials[n - 1 - i];
            used[x] = true;
        }
        rank
    }

    fn from_lex_rank_small(n: usize, mut rank: usize, factorials: &[usize]) -> Ranking {
        let mut pool: Vec<usize> = (0..n).collect();
        let mut order = Vec::with_capacity(n);
        for i in 0..n {
            let f = factorials[n - 1 - i];
            order.push(pool.remove(rank / f));
            rank %= f;
        }
        Ranking { order }
    }

    /// Renders with committee labels; for `m = n = 2` uses the letters W, X, Y, Z.
    pub fn label(&self, shape: Shape) -> String {
        let names: Vec<String> = self
            .order
            .iter()
            .map(|&c| {
                if shape.m == 2 && shape.n == 2 {
                    ["W", "X", "Y", "Z"][c].to_string()
                } else {
                    Committee::from_index(shape, c).label()
                }
            })
            .collect();
        names.join(" > ")
    }
}

impl<'de> Deserialize<'de> for Ranking {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let order = Vec::<usize>::deserialize(d)?;
        if !is_permutation(&order) {
            return Err(serde::de::Error::custom(format!("{order:?} is not a permutation")));
        }
        Ok(Ranking { order })
    }
}

pub fn apply_wreath_to_ranking(g: &WreathElement, r: &Ranking) -> Result<Ranking> {
    let shape = g.shape();
    let dim = shape.m.pow(shape.n as u32);
    if r.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: r.len() });
    }
    Ok(r.permuted(&g.committee_permutation(shape)))
}

type ActionCache = Mutex<HashMap<Shape, Arc<Vec<Vec<usize>>>>>;

/// The group elements as permutations of committee indices, in
/// [`enumerate_group`] order. Cached per shape.
pub fn group_action(shape: Shape, caps: &Caps) -> Result<Arc<Vec<Vec<usize>>>> {
    static CACHE: OnceLock<ActionCache> = OnceLock::new();
    shape.dim(caps)?;
    shape.check_group(caps)?;
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("group cache poisoned").get(&shape) {
        return Ok(hit.clone());
    }
    let perms: Vec<Vec<usize>> = enumerate_group(shape, caps)?.iter().map(|g| g.committee_permutation(shape)).collect();
    let perms = Arc::new(perms);
    cache.lock().expect("group cache poisoned").insert(shape, perms.clone());
    Ok(perms)
}

/// How an [`OrbitInfo::id`] was assigned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitIdScheme {
    /// Index among all orbits sorted by representative.
    Enumerated,
    /// Lexicographic rank of the representative among all `(m^n)!` rankings.
    RepresentativeRank,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitInfo {
    /// Lexicographically smallest ranking in the orbit.
    pub representative: Ranking,
    pub size: u64,
    #[serde(serialize_with = "serialize_biguint")]
    pub id: BigUint,
    pub id_scheme: OrbitIdScheme,
    /// `1`, `2` or `3` for the three orbits of the `m = n = 2` case, labelled
    /// by the position of the disjoint committee pairs.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alias: Option<u32>,
}

fn serialize_biguint<S: serde::Serializer>(v: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v.to_u64() {
        Some(x) => s.serialize_u64(x),
        None => s.serialize_str(&v.to_string()),
    }
}

/// Canonical (lexicographically smallest) member of the orbit of `r`.
pub fn canonical_representative(shape: Shape, r: &Ranking, caps: &Caps) -> Result<Ranking> {
    let dim = shape.dim(caps)?;
    if r.len() != dim {
        return Err(Error::DimensionMismatch { expected: dim, got: r.len() });
    }
    let action = group_action(shape, caps)?;
    let mut best = r.clone();
    for perm in action.iter() {
        let image = r.permuted(perm);
        if image < best {
            best = image;
        }
    }
    Ok(best)
}

/// Members of the orbit of `rep`, ordered by the group element that carries
/// `rep` to them (first occurrence wins when the action is not free).
pub fn orbit_members(shape: Shape, rep: &Ranking, caps: &Caps) -> Result<Vec<Ranking>> {
    let action = group_action(shape, caps)?;
    let mut seen = BTreeSet::new();
    Ok(action.iter().map(|perm| rep.permuted(perm)).filter(|img| seen.insert(img.clone())).collect())
}

/// All orbit representatives in sorted order, cached per shape.
struct OrbitTable {
    reps: Vec<Ranking>,
    size: u64,
}

fn orbit_table(shape: Shape, caps: &Caps) -> Result<Arc<OrbitTable>> {
    static CACHE: OnceLock<Mutex<HashMap<Shape, Arc<OrbitTable>>>> = OnceLock::new();
    let dim = shape.check_rankings(caps)?;
    let cache = CACHE.get_or_init(Default::default);
    if let Some(hit) = cache.lock().expect("orbit cache poisoned").get(&shape) {
        return Ok(hit.clone());
    }
    let action = group_action(shape, caps)?;
    let factorials: Vec<usize> = (0..=dim).map(|k| (1..=k).product()).collect();
    let total = factorials[dim];
    let mut visited = vec![false; total];
    let mut reps = Vec::new();
    let mut size = 0;
    for idx in 0..total {
        if visited[idx] {
            continue;
        }
        // Unvisited in lexicographic order means smallest in its orbit.
        let rep = Ranking::from_lex_rank_small(dim, idx, &factorials);
        let mut count = 0;
        for perm in action.iter() {
            let j = rep.permuted(perm).lex_rank_small(&factorials);
            if !visited[j] {
                visited[j] = true;
                count += 1;
            }
        }
        size = count;
        reps.push(rep);
    }
    let table = Arc::new(OrbitTable { reps, size });
    cache.lock().expect("orbit cache poisoned").insert(shape, table.clone());
    Ok(table)
}

fn listing_alias(shape: Shape, rep: &Ranking, caps: &Caps) -> Result<Option<u32>> {
    if shape != (Shape { m: 2, n: 2 }) {
        return Ok(None);
    }
    // W=0, X=1, Y=2, Z=3; disjoint pairs are {W,Z} and {X,Y}.
    const REFERENCES: [[usize; 4]; 3] = [[0, 2, 1, 3], [0, 1, 3, 2], [0, 3, 1, 2]];
    for (i, reference) in REFERENCES.iter().enumerate() {
        let canon = canonical_representative(shape, &Ranking::from_vec_unchecked(reference.to_vec()), caps)?;
        if &canon == rep {
            return Ok(Some(i as u32 + 1));
        }
    }
    Ok(None)
}

/// The orbit containing `r`. Ids come from the sorted orbit table when full
/// enumeration fits under `caps.rankings`, otherwise from the representative's
/// lexicographic rank.
pub fn orbit_of_ranking(shape: Shape, r: &Ranking, caps: &Caps) -> Result<OrbitInfo> {
    let rep = canonical_representative(shape, r, caps)?;
    let size = orbit_members(shape, &rep, caps)?.len() as u64;
    let (id, id_scheme) = match orbit_table(shape, caps) {
        Ok(table) => {
            let pos = table.reps.binary_search(&rep).expect("representative is in the orbit table");
            (BigUint::from(pos), OrbitIdScheme::Enumerated)
        }
        Err(Error::SizeGuard { .. }) => (rep.lex_rank(), OrbitIdScheme::RepresentativeRank),
        Err(e) => return Err(e),
    };
    let alias = listing_alias(shape, &rep, caps)?;
    Ok(OrbitInfo { representative: rep, size, id, id_scheme, alias })
}

/// `(m^n)! / |image of S_m ≀ S_n in S_{m^n}|`, without enumeration.
///
/// For `m >= 2` the action on rankings is free, so this is
/// `(m^n)! / ((m!)^n n!)`. For `m = 1` there is a single ranking.
pub fn orbit_count(m: usize, n: usize) -> BigUint {
    if m <= 1 {
        return BigUint::one();
    }
    let shape = Shape { m, n };
    let dim = shape.committee_count().to_usize().expect("m^n fits in memory to be meaningful");
    factorial(dim) / shape.group_order()
}

pub fn enumerate_orbits(shape: Shape, caps: &Caps) -> Result<Vec<OrbitInfo>> {
    let table = orbit_table(shape, caps)?;
    table
        .reps
        .iter()
        .enumerate()
        .map(|(i, rep)| {
            Ok(OrbitInfo {
                representative: rep.clone(),
                size: table.size,
                id: BigUint::from(i),
                id_scheme: OrbitIdScheme::Enumerated,
                alias: listing_alias(shape, rep, caps)?,
            })
        })
        .collect()
}

/// Resolves `"<id>"` (enumerated id), `"orbit-<alias>"` (the `m = n = 2`
/// labels 1, 2, 3) or a comma-separated ranking to a canonical representative.
pub fn resolve_orbit_key(shape: Shape, key: &str, caps: &Caps) -> Result<Ranking> {
    let key = key.trim();
    if let Some(alias) = key.strip_prefix("orbit-") {
        let alias: u32 = alias.parse().map_err(|_| Error::Parse(format!("bad orbit alias {key:?}")))?;
        return enumerate_orbits(shape, caps)?
            .into_iter()
            .find(|o| o.alias == Some(alias))
            .map(|o| o.representative)
            .ok_or_else(|| Error::Invalid(format!("no orbit with alias {alias} for {shape}")));
    }
    if key.contains(',') || key.starts_with('[') {
        let order = key
            .trim_start_matches('[')
            .trim_end_matches(']')
            .split(',')
            .map(|s| s.trim().parse::<usize>().map_err(|_| Error::Parse(format!("bad ranking {key:?}"))))
            .collect::<Result<Vec<_>>>()?;
        let r = Ranking::new(shape, order)?;
        return canonical_representative(shape, &r, caps);
    }
    let id: usize = key.parse().map_err(|_| Error::Parse(format!("bad orbit key {key:?}")))?;
    let table = orbit_table(shape, caps)?;
    table
        .reps
        .get(id)
        .cloned()
        .ok_or_else(|| Error::Invalid(format!("orbit id {id} out of range (0..{})", table.reps.len())))
}
