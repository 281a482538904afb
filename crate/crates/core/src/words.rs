//! Primitive operations on words: factors, periods, primitivity, conjugacy,
//! fractional powers and Lyndon roots.
//!
//! Rotation indices follow the 1-based convention `x_i = z[i..|z|] z[1..i-1]`,
//! so `x_1 = z`.

use std::collections::{BTreeSet, HashSet};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::word::{shortlex, Word};

/// Words up to this length get their smallest period by direct comparison.
const BRUTE_PERIOD_LIMIT: usize = 64;

/// The distinct factors of `w` of length `len`; `{ε}` for `len == 0`.
pub fn factor_set(w: &[u8], len: usize) -> Result<BTreeSet<Word>> {
    if len > w.len() {
        return Err(Error::OutOfRange {
            what: "factor length",
            value: len,
            max: w.len(),
        });
    }
    if len == 0 {
        return Ok(BTreeSet::from([Word::empty()]));
    }
    Ok(w.windows(len).map(Word::from).collect())
}

/// Membership index over every factor of a word.
#[derive(Debug, Clone)]
pub struct FactorIndex<'a> {
    word: &'a [u8],
    set: HashSet<&'a [u8]>,
}

impl<'a> FactorIndex<'a> {
    pub fn new(word: &'a [u8]) -> Self {
        let n = word.len();
        let mut set = HashSet::with_capacity(n * (n + 1) / 2 + 1);
        set.insert(&word[..0]);
        for i in 0..n {
            for j in i + 1..=n {
                set.insert(&word[i..j]);
            }
        }
        FactorIndex { word, set }
    }

    pub fn word(&self) -> &'a [u8] {
        self.word
    }

    pub fn contains(&self, x: &[u8]) -> bool {
        self.set.contains(x)
    }

    /// Number of distinct factors, ε included.
    pub fn len(&self) -> usize {
        self.set.len()
    }

    pub fn is_empty(&self) -> bool {
        self.set.is_empty()
    }
}

/// Smallest `p` in `1..=|w|` such that `w` is the fractional power of its
/// length-`p` prefix.
pub fn smallest_period(w: &[u8]) -> Result<usize> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(if w.len() <= BRUTE_PERIOD_LIMIT {
        period_by_comparison(w)
    } else {
        period_by_border(w)
    })
}

fn period_by_comparison(w: &[u8]) -> usize {
    (1..=w.len())
        .find(|&p| w[p..] == w[..w.len() - p])
        .unwrap_or(w.len())
}

/// `|w|` minus the length of the longest proper border (KMP failure function).
fn period_by_border(w: &[u8]) -> usize {
    let n = w.len();
    let mut fail = vec![0usize; n];
    let mut k = 0;
    for i in 1..n {
        while k > 0 && w[i] != w[k] {
            k = fail[k - 1];
        }
        if w[i] == w[k] {
            k += 1;
        }
        fail[i] = k;
    }
    n - fail[n - 1]
}

/// `(x, k)` with `w = x^k`, `x` primitive and `k` maximal.
pub fn primitive_root(w: &[u8]) -> Result<(Word, usize)> {
    let p = smallest_period(w)?;
    if w.len().is_multiple_of(p) {
        Ok((Word::from(&w[..p]), w.len() / p))
    } else {
        Ok((Word::from(w), 1))
    }
}

pub fn is_primitive(w: &[u8]) -> Result<bool> {
    Ok(primitive_root(w)?.1 == 1)
}

/// The length-`m` word whose `i`-th letter is `x[(i - 1) mod |x| + 1]`.
pub fn fractional_power(x: &[u8], m: usize) -> Result<Word> {
    if x.is_empty() {
        return if m == 0 {
            Ok(Word::empty())
        } else {
            Err(Error::EmptyWord)
        };
    }
    Ok(x.iter().copied().cycle().take(m).collect::<Vec<_>>().into())
}

/// Lyndon test: strictly smaller than each proper suffix, which also
/// forces primitivity.
pub fn is_lyndon(w: &[u8]) -> Result<bool> {
    if w.is_empty() {
        return Err(Error::EmptyWord);
    }
    Ok(lyndon_prefix_ends(w).last() == Some(&w.len()))
}

/// Lengths of the prefixes of `w` that are Lyndon words, in increasing order.
///
/// Duval scan: `w[..j]` stays a prefix of a Lyndon word while `w[k] <= w[j]`,
/// and is itself Lyndon exactly when the comparison pointer sits at 0.
fn lyndon_prefix_ends(w: &[u8]) -> Vec<usize> {
    let mut ends = Vec::new();
    if w.is_empty() {
        return ends;
    }
    ends.push(1);
    let mut k = 0;
    for j in 1..w.len() {
        match w[k].cmp(&w[j]) {
            std::cmp::Ordering::Less => {
                k = 0;
                ends.push(j + 1);
            }
            std::cmp::Ordering::Equal => k += 1,
            std::cmp::Ordering::Greater => break,
        }
    }
    ends
}

/// Start offset of the lexicographically least rotation (Booth).
fn least_rotation(s: &[u8]) -> usize {
    let n = s.len();
    if n == 0 {
        return 0;
    }
    let mut fail = vec![-1isize; 2 * n];
    let mut k = 0usize;
    for j in 1..2 * n {
        let sj = s[j % n];
        let mut i = fail[j - k - 1];
        while i != -1 && sj != s[(k + i as usize + 1) % n] {
            if sj < s[(k + i as usize + 1) % n] {
                k = j - i as usize - 1;
            }
            i = fail[i as usize];
        }
        if i == -1 && sj != s[k % n] {
            if sj < s[k % n] {
                k = j;
            }
            fail[j - k] = -1;
        } else {
            fail[j - k] = i + 1;
        }
    }
    k
}

fn rotate(x: &[u8], start: usize) -> Word {
    x[start..].iter().chain(&x[..start]).copied().collect::<Vec<_>>().into()
}

/// A Lyndon word together with its rotations `x_1 = z, x_2, ..., x_|z|`.
#[derive(Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct LyndonRoot {
    z: Word,
    #[serde(skip)]
    rotations: Vec<Word>,
}

impl LyndonRoot {
    pub fn new(z: Word) -> Result<Self> {
        if !is_lyndon(&z)? {
            return Err(Error::NotLyndon(z.to_string()));
        }
        Ok(Self::new_unchecked(z))
    }

    fn new_unchecked(z: Word) -> Self {
        let rotations = (0..z.len()).map(|i| rotate(&z, i)).collect();
        LyndonRoot { z, rotations }
    }

    pub fn word(&self) -> &Word {
        &self.z
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn rotations(&self) -> &[Word] {
        &self.rotations
    }

    /// `x_i` for 1-based `i`.
    pub fn rotation(&self, i: usize) -> &Word {
        &self.rotations[i - 1]
    }

    /// `z^{m/|z|}`, the lexicographically smallest member of `[z]_m`.
    pub fn smallest_power(&self, m: usize) -> Word {
        self.power_of_rotation(1, m)
    }

    /// `x_i^{m/|z|}`.
    pub fn power_of_rotation(&self, i: usize, m: usize) -> Word {
        let x = self.rotation(i);
        x.iter().copied().cycle().take(m).collect::<Vec<_>>().into()
    }
}

impl PartialOrd for LyndonRoot {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Roots order by length, then lexicographically.
impl Ord for LyndonRoot {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        shortlex(&self.z, &other.z)
    }
}

impl std::fmt::Debug for LyndonRoot {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "LyndonRoot({:?})", self.z)
    }
}

impl std::fmt::Display for LyndonRoot {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.z.fmt(f)
    }
}

/// The set `[z]_m` of length-`m` factors of `z^∞`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConjPowerSet {
    pub root: LyndonRoot,
    pub m: usize,
    pub members: BTreeSet<Word>,
}

impl ConjPowerSet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn is_subset_of(&self, factors: &FactorIndex<'_>) -> bool {
        self.members.iter().all(|x| factors.contains(x))
    }
}

pub fn conj_power_set(z: &LyndonRoot, m: usize) -> ConjPowerSet {
    let members = (1..=z.len()).map(|i| z.power_of_rotation(i, m)).collect();
    ConjPowerSet {
        root: z.clone(),
        m,
        members,
    }
}

/// Checks `[z]_m ⊆ F(w)` without materializing the set.
pub fn conj_powers_are_factors(z: &LyndonRoot, m: usize, factors: &FactorIndex<'_>) -> bool {
    if m > factors.word().len() {
        return false;
    }
    let mut buf = Vec::with_capacity(m);
    z.rotations().iter().all(|x| {
        buf.clear();
        buf.extend(x.iter().copied().cycle().take(m));
        factors.contains(&buf)
    })
}

/// The Lyndon conjugate `z` of a primitive `x` and the 1-based index `i`
/// with `x = x_i`.
pub fn lyndon_rotation(x: &[u8]) -> Result<(LyndonRoot, usize)> {
    if !is_primitive(x)? {
        return Err(Error::NotPrimitive(Word::from(x).to_string()));
    }
    let k = least_rotation(x);
    let n = x.len();
    let root = LyndonRoot::new_unchecked(rotate(x, k));
    Ok((root, (n - k) % n + 1))
}

/// For a square `s = (x_i)^{2r}` with `x_i ∈ [z]`, returns `(z, i, r)`.
pub fn lyndon_root_of_square(s: &[u8]) -> Result<(LyndonRoot, usize, usize)> {
    let half = s.len() / 2;
    if s.is_empty() || !s.len().is_multiple_of(2) || s[..half] != s[half..] {
        return Err(Error::NotSquare(Word::from(s).to_string()));
    }
    let (x, r) = primitive_root(&s[..half])?;
    let (z, i) = lyndon_rotation(&x)?;
    Ok((z, i, r))
}

/// Every distinct Lyndon factor of `w`, ordered by length then lexicographically.
pub fn lyndon_factors(w: &[u8]) -> Vec<LyndonRoot> {
    let mut seen: HashSet<&[u8]> = HashSet::new();
    for start in 0..w.len() {
        for end in lyndon_prefix_ends(&w[start..]) {
            seen.insert(&w[start..start + end]);
        }
    }
    let mut out: Vec<LyndonRoot> = seen
        .into_iter()
        .map(|z| LyndonRoot::new_unchecked(Word::from(z)))
        .collect();
    out.sort();
    out
}
