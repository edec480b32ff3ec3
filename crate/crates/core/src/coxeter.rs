//! Finite Coxeter groups from Coxeter matrices.
//!
//! Elements are enumerated by BFS over the Cayley graph; words are kept in
//! canonical form (the ShortLex-minimal reduced word, found by exploring the
//! braid-move closure, per Tits/Matsumoto). The build produces dense ids,
//! O(1) multiplication-by-generator tables on both sides, lengths, descent
//! sets and the full Bruhat order. Element ordering is deterministic: by
//! length, then lexicographic canonical word.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::laurent::GammaExp;

/// Sentinel for an infinite Coxeter matrix entry.
pub const INFINITE: u32 = 0;

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum CoxError {
    #[error("group enumeration exceeded cap of {cap} elements")]
    CapExceeded { cap: usize },
    #[error("invalid Coxeter matrix: {0}")]
    BadMatrix(String),
    #[error("weight for generator s{} is negative", index + 1)]
    NegativeWeight { index: usize },
    #[error("generators s{} and s{} are conjugate in W but have different weights", a + 1, b + 1)]
    ConjugacyViolation { a: usize, b: usize },
    #[error("unknown group name: {0}")]
    UnknownName(String),
    #[error("bad word: {0}")]
    BadWord(String),
    #[error("weight rank mismatch: expected {expected}, got {got}")]
    RankMismatch { expected: usize, got: usize },
}

/// A symmetric Coxeter matrix with entries in {2, 3, ...} ∪ {∞} off the
/// diagonal (∞ stored as [`INFINITE`]) and 1 on the diagonal.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CoxeterMatrix {
    n: usize,
    m: Vec<Vec<u32>>,
}

impl CoxeterMatrix {
    pub fn new(m: Vec<Vec<u32>>) -> Result<Self, CoxError> {
        let n = m.len();
        if n == 0 {
            return Err(CoxError::BadMatrix("empty matrix".into()));
        }
        for (i, row) in m.iter().enumerate() {
            if row.len() != n {
                return Err(CoxError::BadMatrix("matrix is not square".into()));
            }
            for (j, &e) in row.iter().enumerate() {
                if i == j && e != 1 {
                    return Err(CoxError::BadMatrix("diagonal entries must be 1".into()));
                }
                if i != j {
                    if e == 1 {
                        return Err(CoxError::BadMatrix(
                            "off-diagonal entries must be ≥ 2 or ∞".into(),
                        ));
                    }
                    if e != m[j][i] {
                        return Err(CoxError::BadMatrix("matrix must be symmetric".into()));
                    }
                }
            }
        }
        Ok(CoxeterMatrix { n, m })
    }

    /// Named types: `A<n>`, `B<n>` (first bond quadruple), `H3`, `I2(m)`,
    /// `A1xA1` (= `I2(2)`).
    pub fn named(name: &str) -> Result<Self, CoxError> {
        let unknown = || CoxError::UnknownName(name.to_string());
        if name == "A1xA1" {
            return Self::i2(2);
        }
        if let Some(rest) = name.strip_prefix("I2(") {
            let m: u32 = rest
                .strip_suffix(')')
                .ok_or_else(unknown)?
                .parse()
                .map_err(|_| unknown())?;
            return Self::i2(m);
        }
        if name == "H3" {
            return Self::new(vec![vec![1, 5, 2], vec![5, 1, 3], vec![2, 3, 1]]);
        }
        if let Some(n) = name.strip_prefix('A').and_then(|r| r.parse::<usize>().ok()) {
            if n >= 1 {
                return Ok(Self::chain(n, 3));
            }
        }
        if let Some(n) = name.strip_prefix('B').and_then(|r| r.parse::<usize>().ok()) {
            if n >= 2 {
                let mut c = Self::chain(n, 3);
                c.m[0][1] = 4;
                c.m[1][0] = 4;
                return Ok(c);
            }
        }
        Err(unknown())
    }

    fn chain(n: usize, bond: u32) -> Self {
        let mut m = vec![vec![2u32; n]; n];
        for i in 0..n {
            m[i][i] = 1;
            if i + 1 < n {
                m[i][i + 1] = bond;
                m[i + 1][i] = bond;
            }
        }
        CoxeterMatrix { n, m }
    }

    pub fn i2(m: u32) -> Result<Self, CoxError> {
        if m != INFINITE && m < 2 {
            return Err(CoxError::BadMatrix("I2(m) needs m ≥ 2 or ∞".into()));
        }
        Self::new(vec![vec![1, m], vec![m, 1]])
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn entry(&self, i: usize, j: usize) -> u32 {
        self.m[i][j]
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.m
    }
}

/// Dense element id in an enumerated group. Id 0 is the identity.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Elt(pub u32);

impl Elt {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Elt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A fully enumerated finite Coxeter group. Immutable after build; all
/// queries are read-only.
pub struct Group {
    matrix: CoxeterMatrix,
    words: Vec<Vec<u8>>,
    lengths: Vec<u32>,
    left: Vec<Vec<u32>>,
    right: Vec<Vec<u32>>,
    inv: Vec<u32>,
    left_desc: Vec<u32>,
    right_desc: Vec<u32>,
    bruhat: Vec<Vec<u64>>,
    longest: u32,
}

/// Default enumeration cap; a guardrail against infinite groups.
pub const DEFAULT_CAP: usize = 10_000;

impl Group {
    /// Enumerate the full group, failing with `CapExceeded` if more than
    /// `cap` elements appear (which signals an infinite or too-large group).
    pub fn build(matrix: CoxeterMatrix, cap: usize) -> Result<Group, CoxError> {
        let n = matrix.rank();
        if n > 32 {
            return Err(CoxError::BadMatrix("rank > 32 unsupported".into()));
        }
        let mut words: Vec<Vec<u8>> = vec![vec![]];
        let mut ids: HashMap<Vec<u8>, usize> = HashMap::new();
        ids.insert(vec![], 0);
        let mut frontier = 0usize;
        while frontier < words.len() {
            let word = words[frontier].clone();
            let closure = braid_closure(&matrix, &word);
            for s in 0..n as u8 {
                if closure.iter().any(|w| w.first() == Some(&s)) {
                    continue; // s is already a left descent; s·w is shorter
                }
                let mut new_word = Vec::with_capacity(word.len() + 1);
                new_word.push(s);
                new_word.extend_from_slice(&word);
                let canon = lexmin_closure(&matrix, &new_word);
                if !ids.contains_key(&canon) {
                    if words.len() >= cap {
                        return Err(CoxError::CapExceeded { cap });
                    }
                    ids.insert(canon.clone(), words.len());
                    words.push(canon);
                }
            }
            frontier += 1;
        }

        // Deterministic ordering: by length, then lexicographic word.
        words.sort_by(|a, b| (a.len(), a.as_slice()).cmp(&(b.len(), b.as_slice())));
        let ids: HashMap<Vec<u8>, u32> = words
            .iter()
            .enumerate()
            .map(|(i, w)| (w.clone(), i as u32))
            .collect();
        let count = words.len();
        let lengths: Vec<u32> = words.iter().map(|w| w.len() as u32).collect();

        let mut left = vec![vec![0u32; count]; n];
        let mut left_desc = vec![0u32; count];
        for (id, word) in words.iter().enumerate() {
            let closure = braid_closure(&matrix, word);
            for s in 0..n {
                let target = if let Some(w) = closure.iter().find(|w| w.first() == Some(&(s as u8)))
                {
                    left_desc[id] |= 1 << s;
                    let rest = w[1..].to_vec();
                    ids[&lexmin_closure(&matrix, &rest)]
                } else {
                    let mut new_word = Vec::with_capacity(word.len() + 1);
                    new_word.push(s as u8);
                    new_word.extend_from_slice(word);
                    ids[&lexmin_closure(&matrix, &new_word)]
                };
                left[s][id] = target;
            }
        }

        let inv: Vec<u32> = words
            .iter()
            .map(|w| {
                let rev: Vec<u8> = w.iter().rev().copied().collect();
                ids[&lexmin_closure(&matrix, &rev)]
            })
            .collect();
        let mut right = vec![vec![0u32; count]; n];
        let mut right_desc = vec![0u32; count];
        for id in 0..count {
            for s in 0..n {
                let t = inv[left[s][inv[id] as usize] as usize];
                right[s][id] = t;
                if lengths[t as usize] < lengths[id] {
                    right_desc[id] |= 1 << s;
                }
            }
        }

        // Bruhat order by the descent recursion, one bitset row per y.
        let bits = count.div_ceil(64);
        let mut bruhat = vec![vec![0u64; bits]; count];
        bruhat[0][0] = 1;
        for y in 1..count {
            let s = (left_desc[y]).trailing_zeros() as usize;
            let sy = left[s][y] as usize;
            for x in 0..count {
                let probe = if lengths[left[s][x] as usize] < lengths[x] {
                    left[s][x] as usize
                } else {
                    x
                };
                if bruhat[sy][probe / 64] >> (probe % 64) & 1 == 1 {
                    bruhat[y][x / 64] |= 1 << (x % 64);
                }
            }
        }

        let longest = (0..count)
            .max_by_key(|&i| lengths[i])
            .expect("nonempty group") as u32;
        debug_assert_eq!(
            1,
            lengths.iter().filter(|&&l| l == lengths[longest as usize]).count(),
            "longest element must be unique"
        );

        Ok(Group {
            matrix,
            words,
            lengths,
            left,
            right,
            inv,
            left_desc,
            right_desc,
            bruhat,
            longest,
        })
    }

    pub fn named(name: &str, cap: usize) -> Result<Group, CoxError> {
        Group::build(CoxeterMatrix::named(name)?, cap)
    }

    pub fn matrix(&self) -> &CoxeterMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.matrix.rank()
    }

    pub fn order(&self) -> usize {
        self.words.len()
    }

    pub fn elements(&self) -> impl Iterator<Item = Elt> + '_ {
        (0..self.order() as u32).map(Elt)
    }

    pub fn identity(&self) -> Elt {
        Elt(0)
    }

    pub fn generator(&self, s: usize) -> Elt {
        self.left_mul(s, Elt(0))
    }

    pub fn length(&self, w: Elt) -> u32 {
        self.lengths[w.index()]
    }

    /// The canonical (ShortLex-minimal) reduced word, as generator indices.
    pub fn word(&self, w: Elt) -> &[u8] {
        &self.words[w.index()]
    }

    pub fn left_mul(&self, s: usize, w: Elt) -> Elt {
        Elt(self.left[s][w.index()])
    }

    pub fn right_mul(&self, w: Elt, s: usize) -> Elt {
        Elt(self.right[s][w.index()])
    }

    pub fn inverse(&self, w: Elt) -> Elt {
        Elt(self.inv[w.index()])
    }

    /// Full product `x·y`.
    pub fn mul(&self, x: Elt, y: Elt) -> Elt {
        let mut acc = y;
        for &s in self.words[x.index()].iter().rev() {
            acc = self.left_mul(s as usize, acc);
        }
        acc
    }

    pub fn is_left_descent(&self, s: usize, w: Elt) -> bool {
        self.left_desc[w.index()] >> s & 1 == 1
    }

    pub fn is_right_descent(&self, w: Elt, s: usize) -> bool {
        self.right_desc[w.index()] >> s & 1 == 1
    }

    pub fn left_descents(&self, w: Elt) -> Vec<usize> {
        (0..self.rank()).filter(|&s| self.is_left_descent(s, w)).collect()
    }

    pub fn right_descents(&self, w: Elt) -> Vec<usize> {
        (0..self.rank()).filter(|&s| self.is_right_descent(w, s)).collect()
    }

    /// `(−1)^{ℓ(w)}`.
    pub fn eps(&self, w: Elt) -> i64 {
        if self.length(w) % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Bruhat order `x ≤ y`.
    pub fn bruhat_leq(&self, x: Elt, y: Elt) -> bool {
        self.bruhat[y.index()][x.index() / 64] >> (x.index() % 64) & 1 == 1
    }

    /// Left weak order: `x ≤_L y` iff `y = z·x` with `ℓ(y) = ℓ(z) + ℓ(x)`
    /// (x is a suffix of y).
    pub fn weak_leq(&self, x: Elt, y: Elt) -> bool {
        let z = self.mul(y, self.inverse(x));
        self.length(z) + self.length(x) == self.length(y)
    }

    /// The weak-order ideal `{u : u ≤_L w}`.
    pub fn weak_ideal(&self, w: Elt) -> Vec<Elt> {
        self.elements().filter(|&u| self.weak_leq(u, w)).collect()
    }

    /// `Pos(X) = {s ∈ S : ℓ(xs) > ℓ(x) for all x ∈ X}`.
    pub fn pos_set(&self, xs: &[Elt]) -> Vec<usize> {
        (0..self.rank())
            .filter(|&s| xs.iter().all(|&x| !self.is_right_descent(x, s)))
            .collect()
    }

    /// The unique maximal-length element `w₀`.
    pub fn longest_element(&self) -> Elt {
        Elt(self.longest)
    }

    /// `π(w) = w₀ w w₀`, an automorphism with `π(S) = S`.
    pub fn pi_map(&self, w: Elt) -> Elt {
        let w0 = self.longest_element();
        self.mul(w0, self.mul(w, w0))
    }

    /// Index of `π(s)` for a generator.
    pub fn pi_gen(&self, s: usize) -> usize {
        let image = self.pi_map(self.generator(s));
        debug_assert_eq!(self.length(image), 1);
        self.word(image)[0] as usize
    }

    /// Elements of the standard parabolic subgroup generated by `gens`.
    pub fn subgroup(&self, gens: &[usize]) -> Vec<Elt> {
        let mut seen = BTreeSet::new();
        seen.insert(Elt(0));
        let mut queue = vec![Elt(0)];
        while let Some(w) = queue.pop() {
            for &s in gens {
                let sw = self.left_mul(s, w);
                if seen.insert(sw) {
                    queue.push(sw);
                }
            }
        }
        seen.into_iter().collect()
    }

    /// Longest element of the standard parabolic subgroup `⟨gens⟩`.
    pub fn parabolic_longest(&self, gens: &[usize]) -> Elt {
        let elts = self.subgroup(gens);
        *elts
            .iter()
            .max_by_key(|&&w| (self.length(w), std::cmp::Reverse(w.0)))
            .expect("nonempty subgroup")
    }

    /// Minimal-length coset representatives and the per-(s, w)
    /// classification of Lemma 2.1.
    pub fn parabolic(&self, j: &[usize]) -> ParabolicData {
        let d_j: Vec<Elt> = self
            .elements()
            .filter(|&w| j.iter().all(|&s| !self.is_right_descent(w, s)))
            .collect();
        let index: HashMap<Elt, usize> = d_j.iter().enumerate().map(|(i, &w)| (w, i)).collect();
        let mut class = vec![vec![DClass::Minus; d_j.len()]; self.rank()];
        let mut conj = vec![vec![None; d_j.len()]; self.rank()];
        for (i, &w) in d_j.iter().enumerate() {
            for s in 0..self.rank() {
                let sw = self.left_mul(s, w);
                class[s][i] = if self.length(sw) < self.length(w) {
                    DClass::Minus
                } else if index.contains_key(&sw) {
                    DClass::Plus
                } else {
                    // sw = wt for t = w⁻¹sw ∈ J
                    let t = self.mul(self.inverse(w), sw);
                    debug_assert_eq!(self.length(t), 1);
                    conj[s][i] = Some(self.word(t)[0] as usize);
                    DClass::Zero
                };
            }
        }
        ParabolicData {
            j: j.to_vec(),
            d_j,
            index,
            class,
            conj,
        }
    }

    /// Render an element as a dotted word (identity is `"e"`).
    pub fn word_name(&self, w: Elt) -> String {
        if w == Elt(0) {
            return "e".to_string();
        }
        self.words[w.index()]
            .iter()
            .map(|&s| format!("s{}", s + 1))
            .collect::<Vec<_>>()
            .join(".")
    }

    /// Parse a dotted word like `"s2.s1"`; `"e"` (or `""`) is the identity.
    pub fn parse_word(&self, text: &str) -> Result<Elt, CoxError> {
        let text = text.trim();
        if text.is_empty() || text == "e" || text == "1" {
            return Ok(Elt(0));
        }
        let mut w = Elt(0);
        for part in text.split('.').rev() {
            let bad = || CoxError::BadWord(format!("bad generator `{part}`"));
            let idx: usize = part.strip_prefix('s').ok_or_else(bad)?.parse().map_err(|_| bad())?;
            if idx == 0 || idx > self.rank() {
                return Err(CoxError::BadWord(format!(
                    "generator s{idx} out of range 1..={}",
                    self.rank()
                )));
            }
            w = self.left_mul(idx - 1, w);
        }
        Ok(w)
    }

    /// Conjugacy classes of generators: connected components of the graph
    /// with an edge between s and t whenever `m(s,t)` is odd.
    pub fn generator_conjugacy_classes(&self) -> Vec<Vec<usize>> {
        let n = self.rank();
        let mut comp: Vec<Option<usize>> = vec![None; n];
        let mut classes = Vec::new();
        for start in 0..n {
            if comp[start].is_some() {
                continue;
            }
            let c = classes.len();
            let mut stack = vec![start];
            comp[start] = Some(c);
            let mut members = vec![start];
            while let Some(s) = stack.pop() {
                for t in 0..n {
                    if t != s && comp[t].is_none() {
                        let m = self.matrix.entry(s, t);
                        if m != INFINITE && m % 2 == 1 {
                            comp[t] = Some(c);
                            members.push(t);
                            stack.push(t);
                        }
                    }
                }
            }
            members.sort_unstable();
            classes.push(members);
        }
        classes
    }
}

/// Per-(s, w) classification of a parabolic quotient `D_J`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DClass {
    /// `ℓ(sw) < ℓ(w)`
    Minus,
    /// `ℓ(sw) > ℓ(w)` and `sw ∈ D_J`
    Plus,
    /// `ℓ(sw) > ℓ(w)` and `sw ∉ D_J` (then `sw = wt` with `t ∈ J`)
    Zero,
}

pub struct ParabolicData {
    pub j: Vec<usize>,
    pub d_j: Vec<Elt>,
    pub index: HashMap<Elt, usize>,
    class: Vec<Vec<DClass>>,
    conj: Vec<Vec<Option<usize>>>,
}

impl ParabolicData {
    pub fn contains(&self, w: Elt) -> bool {
        self.index.contains_key(&w)
    }

    pub fn class(&self, s: usize, w: Elt) -> DClass {
        self.class[s][self.index[&w]]
    }

    /// For `w ∈ D⁰_{J,s}`, the generator `t ∈ J` with `sw = wt`.
    pub fn conjugated_generator(&self, s: usize, w: Elt) -> Option<usize> {
        self.conj[s][self.index[&w]]
    }
}

/// A weight function `L : S → Γ`, constant on conjugacy classes of
/// generators, with `L(s) ≥ 0`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Weights {
    values: Vec<GammaExp>,
    rank: usize,
}

impl Weights {
    pub fn new(values: Vec<GammaExp>) -> Result<Self, CoxError> {
        let rank = values.first().map(|v| v.rank()).unwrap_or(1);
        for (i, v) in values.iter().enumerate() {
            if v.rank() != rank {
                return Err(CoxError::RankMismatch { expected: rank, got: v.rank() });
            }
            if v.is_negative() {
                return Err(CoxError::NegativeWeight { index: i });
            }
        }
        Ok(Weights { values, rank })
    }

    /// Equal parameters: `L(s) = 1 ∈ Z` for every generator.
    pub fn equal(n_gens: usize) -> Self {
        Weights {
            values: vec![GammaExp::int(1); n_gens],
            rank: 1,
        }
    }

    /// Rank-1 weights from integers.
    pub fn from_ints(values: &[i64]) -> Result<Self, CoxError> {
        Weights::new(values.iter().map(|&v| GammaExp::int(v)).collect())
    }

    pub fn gamma_rank(&self) -> usize {
        self.rank
    }

    pub fn n_gens(&self) -> usize {
        self.values.len()
    }

    pub fn of_gen(&self, s: usize) -> &GammaExp {
        &self.values[s]
    }

    /// `L(w)`, the sum over any reduced word.
    pub fn of(&self, group: &Group, w: Elt) -> GammaExp {
        let mut acc = GammaExp::zero(self.rank);
        for &s in group.word(w) {
            acc = acc.checked_add(&self.values[s as usize]);
        }
        acc
    }

    /// Check `L(s) ≥ 0` and conjugacy-invariance against a group.
    pub fn validate(&self, group: &Group) -> Result<(), CoxError> {
        if self.values.len() != group.rank() {
            return Err(CoxError::RankMismatch {
                expected: group.rank(),
                got: self.values.len(),
            });
        }
        for (i, v) in self.values.iter().enumerate() {
            if v.is_negative() {
                return Err(CoxError::NegativeWeight { index: i });
            }
        }
        for class in group.generator_conjugacy_classes() {
            for window in class.windows(2) {
                if self.values[window[0]] != self.values[window[1]] {
                    return Err(CoxError::ConjugacyViolation { a: window[0], b: window[1] });
                }
            }
        }
        Ok(())
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.values.iter().all(|v| v.is_positive())
    }

    pub fn values_have_zero(&self) -> bool {
        self.values.iter().any(|v| v.is_zero())
    }
}

/// All words reachable from `word` by braid moves. For a reduced word this
/// is the set of all its reduced expressions (Matsumoto/Tits).
fn braid_closure(matrix: &CoxeterMatrix, word: &[u8]) -> Vec<Vec<u8>> {
    let mut seen: HashSet<Vec<u8>> = HashSet::new();
    let mut queue = vec![word.to_vec()];
    seen.insert(word.to_vec());
    while let Some(w) = queue.pop() {
        for i in 0..w.len().saturating_sub(1) {
            let (a, b) = (w[i], w[i + 1]);
            if a == b {
                continue;
            }
            let m = matrix.entry(a as usize, b as usize);
            if m == INFINITE || i + m as usize > w.len() {
                continue;
            }
            let m = m as usize;
            let alternating = (0..m).all(|t| w[i + t] == if t % 2 == 0 { a } else { b });
            if !alternating {
                continue;
            }
            let mut next = w.clone();
            for (t, slot) in next[i..i + m].iter_mut().enumerate() {
                *slot = if t % 2 == 0 { b } else { a };
            }
            if seen.insert(next.clone()) {
                queue.push(next);
            }
        }
    }
    let mut out: Vec<Vec<u8>> = seen.into_iter().collect();
    out.sort_unstable();
    out
}

fn lexmin_closure(matrix: &CoxeterMatrix, word: &[u8]) -> Vec<u8> {
    braid_closure(matrix, word)
        .into_iter()
        .min()
        .expect("closure is nonempty")
}

/// All reduced expressions of the element with the given reduced word.
pub fn reduced_words_of(matrix: &CoxeterMatrix, word: &[u8]) -> Vec<Vec<u8>> {
    braid_closure(matrix, word)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn group(name: &str) -> Group {
        Group::named(name, DEFAULT_CAP).unwrap()
    }

    #[test]
    fn group_orders() {
        assert_eq!(group("A1").order(), 2);
        assert_eq!(group("A2").order(), 6);
        assert_eq!(group("B2").order(), 8);
        assert_eq!(group("A3").order(), 24);
        assert_eq!(group("I2(5)").order(), 10);
        assert_eq!(group("B3").order(), 48);
        assert_eq!(group("A1xA1").order(), 4);
    }

    #[test]
    fn infinite_group_hits_cap() {
        let m = CoxeterMatrix::i2(INFINITE).unwrap();
        match Group::build(m, 1000) {
            Err(CoxError::CapExceeded { cap: 1000 }) => {}
            other => panic!("expected CapExceeded, got {:?}", other.map(|g| g.order())),
        }
    }

    #[test]
    fn identity_is_id_zero_with_length_zero() {
        let g = group("B2");
        assert_eq!(g.identity(), Elt(0));
        assert_eq!(g.length(Elt(0)), 0);
        for w in g.elements() {
            assert_eq!(g.length(w) as usize, g.word(w).len());
        }
    }

    #[test]
    fn generator_multiplication_changes_length_by_one() {
        for name in ["A2", "B2", "A3"] {
            let g = group(name);
            for w in g.elements() {
                for s in 0..g.rank() {
                    let sw = g.left_mul(s, w);
                    let diff = g.length(sw) as i64 - g.length(w) as i64;
                    assert!(diff == 1 || diff == -1);
                    assert_eq!(g.left_mul(s, sw), w);
                }
                if w != g.identity() {
                    assert!(!g.left_descents(w).is_empty());
                }
            }
        }
    }

    #[test]
    fn mul_and_inverse_are_consistent() {
        let g = group("B2");
        for x in g.elements() {
            assert_eq!(g.mul(x, g.inverse(x)), g.identity());
            for y in g.elements() {
                let p = g.mul(x, y);
                assert_eq!(g.inverse(p), g.mul(g.inverse(y), g.inverse(x)));
            }
        }
    }

    /// Subword-property oracle: x ≤ y iff some length-ℓ(x) subsequence of a
    /// fixed reduced word of y multiplies to x.
    fn bruhat_oracle(g: &Group, x: Elt, y: Elt) -> bool {
        let word = g.word(y).to_vec();
        let lx = g.length(x) as usize;
        let n = word.len();
        (0u32..1 << n).any(|mask| {
            if mask.count_ones() as usize != lx {
                return false;
            }
            let mut acc = g.identity();
            for (i, &s) in word.iter().enumerate() {
                if mask >> i & 1 == 1 {
                    acc = g.right_mul(acc, s as usize);
                }
            }
            acc == x
        })
    }

    #[test]
    fn bruhat_matches_subword_oracle() {
        for name in ["A2", "B2", "A3"] {
            let g = group(name);
            for x in g.elements() {
                for y in g.elements() {
                    assert_eq!(
                        g.bruhat_leq(x, y),
                        bruhat_oracle(&g, x, y),
                        "{name}: {} vs {}",
                        g.word_name(x),
                        g.word_name(y)
                    );
                }
            }
        }
    }

    #[test]
    fn bruhat_spot_checks() {
        let g = group("A2");
        let s1 = g.parse_word("s1").unwrap();
        let s2 = g.parse_word("s2").unwrap();
        let s2s1 = g.parse_word("s2.s1").unwrap();
        assert!(g.bruhat_leq(s1, s2s1));
        assert!(!g.bruhat_leq(s1, s2));
        for w in g.elements() {
            assert!(g.bruhat_leq(g.identity(), w));
            assert!(g.bruhat_leq(w, w));
        }
    }

    #[test]
    fn weak_order_spot_checks() {
        let g = group("A2");
        let s1 = g.parse_word("s1").unwrap();
        let s2s1 = g.parse_word("s2.s1").unwrap();
        let s1s2 = g.parse_word("s1.s2").unwrap();
        assert!(g.weak_leq(s1, s2s1));
        assert!(!g.weak_leq(s1, s1s2));
        for w in g.elements() {
            assert!(g.weak_leq(g.identity(), w));
        }
    }

    #[test]
    fn weak_implies_bruhat_exhaustive_b2() {
        let g = group("B2");
        for x in g.elements() {
            for y in g.elements() {
                // definition check: x ≤_L y iff ℓ(yx⁻¹) + ℓ(x) = ℓ(y)
                let z = g.mul(y, g.inverse(x));
                assert_eq!(
                    g.weak_leq(x, y),
                    g.length(z) + g.length(x) == g.length(y)
                );
                if g.weak_leq(x, y) {
                    assert!(g.bruhat_leq(x, y));
                }
            }
        }
    }

    #[test]
    fn parabolic_a2() {
        let g = group("A2");
        let p = g.parabolic(&[1]); // J = {s2}
        let names: Vec<String> = p.d_j.iter().map(|&w| g.word_name(w)).collect();
        assert_eq!(names, vec!["e", "s1", "s2.s1"]);
        // exhaustive: D_J = {w : ℓ(w s) > ℓ(w) ∀ s ∈ J}
        for w in g.elements() {
            assert_eq!(p.contains(w), !g.is_right_descent(w, 1));
        }
        // s = s1, w = s2s1: sw = s1s2s1 = (s2s1)s2 ∉ D_J, conjugated generator s2
        let s2s1 = g.parse_word("s2.s1").unwrap();
        assert_eq!(p.class(0, s2s1), DClass::Zero);
        assert_eq!(p.conjugated_generator(0, s2s1), Some(1));
        // s = s2: s2·s2s1 = s1 ∈ D_J descending; s2·s1 = s2s1 ∈ D_J ascending
        assert_eq!(p.class(1, s2s1), DClass::Minus);
        assert_eq!(p.class(1, g.parse_word("s1").unwrap()), DClass::Plus);
    }

    #[test]
    fn parabolic_lemma_2_1_bijection() {
        for name in ["A3", "B2"] {
            let g = group(name);
            let n = g.rank();
            for jmask in 0u32..1 << n {
                let j: Vec<usize> = (0..n).filter(|&s| jmask >> s & 1 == 1).collect();
                let p = g.parabolic(&j);
                for s in 0..n {
                    let plus: Vec<Elt> = p
                        .d_j
                        .iter()
                        .copied()
                        .filter(|&w| p.class(s, w) == DClass::Plus)
                        .collect();
                    let minus: std::collections::BTreeSet<Elt> = p
                        .d_j
                        .iter()
                        .copied()
                        .filter(|&w| p.class(s, w) == DClass::Minus)
                        .collect();
                    let mapped: std::collections::BTreeSet<Elt> =
                        plus.iter().map(|&w| g.left_mul(s, w)).collect();
                    assert_eq!(mapped, minus, "{name}, J={j:?}, s={s}");
                    for &w in &p.d_j {
                        if p.class(s, w) == DClass::Zero {
                            let t = p.conjugated_generator(s, w).unwrap();
                            assert!(j.contains(&t));
                            assert_eq!(
                                g.left_mul(s, w),
                                g.right_mul(w, t),
                                "sw = wt fails"
                            );
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn pos_set_examples() {
        let g = group("A2");
        let all: Vec<Elt> = g.elements().collect();
        assert_eq!(g.pos_set(&[g.identity()]), vec![0, 1]);
        assert_eq!(g.pos_set(&all), Vec::<usize>::new());
        let s1 = g.parse_word("s1").unwrap();
        assert_eq!(g.pos_set(&[g.identity(), s1]), vec![1]);
    }

    #[test]
    fn longest_elements() {
        let a2 = group("A2");
        let w0 = a2.longest_element();
        assert_eq!(a2.length(w0), 3);
        assert_eq!(a2.word_name(w0), "s1.s2.s1");
        let a1 = group("A1");
        assert_eq!(a1.length(a1.longest_element()), 1);
        let b2 = group("B2");
        let w0 = b2.longest_element();
        assert_eq!(b2.length(w0), 4);
        let s1s2 = b2.parse_word("s1.s2").unwrap();
        assert_eq!(b2.mul(s1s2, s1s2), w0);
    }

    #[test]
    fn pi_map_examples() {
        let a2 = group("A2");
        assert_eq!(a2.pi_map(a2.identity()), a2.identity());
        assert_eq!(a2.pi_gen(0), 1); // π(s1) = s2 in A2
        let b2 = group("B2");
        assert_eq!(b2.pi_gen(0), 0); // w₀ central in B2
        assert_eq!(b2.pi_gen(1), 1);
        // π is a length- and Bruhat-preserving automorphism
        for g in [a2, b2] {
            for x in g.elements() {
                assert_eq!(g.length(g.pi_map(x)), g.length(x));
                for y in g.elements() {
                    assert_eq!(
                        g.mul(g.pi_map(x), g.pi_map(y)),
                        g.pi_map(g.mul(x, y))
                    );
                    assert_eq!(
                        g.bruhat_leq(g.pi_map(x), g.pi_map(y)),
                        g.bruhat_leq(x, y)
                    );
                }
            }
        }
    }

    #[test]
    fn weight_validation() {
        let a2 = group("A2");
        let w = Weights::from_ints(&[1, 2]).unwrap();
        assert_eq!(
            w.validate(&a2),
            Err(CoxError::ConjugacyViolation { a: 0, b: 1 })
        );
        let b2 = group("B2");
        assert!(Weights::from_ints(&[1, 2]).unwrap().validate(&b2).is_ok());
        assert!(Weights::equal(2).validate(&a2).is_ok());
        assert!(matches!(
            Weights::from_ints(&[-1, 2]),
            Err(CoxError::NegativeWeight { index: 0 })
        ));
    }

    #[test]
    fn weight_additive_on_reduced_words() {
        let b2 = group("B2");
        let w = Weights::from_ints(&[1, 2]).unwrap();
        for x in b2.elements() {
            for y in b2.elements() {
                if b2.length(b2.mul(x, y)) == b2.length(x) + b2.length(y) {
                    assert_eq!(
                        w.of(&b2, b2.mul(x, y)),
                        w.of(&b2, x).checked_add(&w.of(&b2, y))
                    );
                }
            }
        }
    }

    #[test]
    fn word_name_roundtrip() {
        let g = group("B3");
        for w in g.elements() {
            assert_eq!(g.parse_word(&g.word_name(w)).unwrap(), w);
        }
    }

    #[test]
    fn weak_ideal_is_suffix_closed() {
        let g = group("B2");
        for w in g.elements() {
            let ideal = g.weak_ideal(w);
            for &u in &ideal {
                for s in g.left_descents(u) {
                    let su = g.left_mul(s, u);
                    assert!(ideal.contains(&su));
                }
            }
        }
    }
}
