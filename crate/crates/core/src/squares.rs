//! Distinct squares of a word, grouped by Lyndon root.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::word::{shortlex, Word};
use crate::words::{lyndon_root_of_square, LyndonRoot};

/// Reusable buffers for the longest-common-extension square scan.
///
/// For a word of length `n` the scan fills `lce[i][j]`, the length of the
/// longest common prefix of the suffixes at `i` and `j`, and
/// `prev[i] = max_{j<i} lce[j][i]`. A square of half length `h` at `i`
/// exists iff `lce[i][i+h] >= h`, and that occurrence is the leftmost one iff
/// `prev[i] < 2h`, so each distinct square is reported exactly once.
#[derive(Debug, Default, Clone)]
pub struct SquareScanner {
    lce: Vec<u32>,
    prev: Vec<u32>,
}

impl SquareScanner {
    pub fn new() -> Self {
        Self::default()
    }

    fn prepare(&mut self, w: &[u8]) {
        let n = w.len();
        let stride = n + 1;
        self.lce.clear();
        self.lce.resize(stride * stride, 0);
        for i in (0..n).rev() {
            for j in (i + 1..n).rev() {
                if w[i] == w[j] {
                    self.lce[i * stride + j] = self.lce[(i + 1) * stride + j + 1] + 1;
                }
            }
        }
        self.prev.clear();
        self.prev.resize(n, 0);
        for i in 0..n {
            self.prev[i] = (0..i).map(|j| self.lce[j * stride + i]).max().unwrap_or(0);
        }
    }

    /// Calls `f(start, half)` (0-based start) once per distinct square, at its
    /// leftmost occurrence.
    pub fn for_each_square(&mut self, w: &[u8], mut f: impl FnMut(usize, usize)) {
        self.prepare(w);
        let n = w.len();
        let stride = n + 1;
        for i in 0..n {
            for h in 1..=(n - i) / 2 {
                if self.lce[i * stride + i + h] as usize >= h && (self.prev[i] as usize) < 2 * h {
                    f(i, h);
                }
            }
        }
    }

    pub fn count(&mut self, w: &[u8]) -> usize {
        let mut c = 0;
        self.for_each_square(w, |_, _| c += 1);
        c
    }
}

/// The distinct squares of `w`, ordered by length then lexicographically.
pub fn distinct_squares(w: &[u8]) -> Vec<Word> {
    let mut out = Vec::new();
    SquareScanner::new().for_each_square(w, |i, h| out.push(Word::from(&w[i..i + 2 * h])));
    out.sort_by(|a, b| shortlex(a, b));
    out
}

pub fn count_distinct_squares(w: &[u8]) -> usize {
    SquareScanner::new().count(w)
}

/// Longest `|x|` over squares `xx` in `w`; 0 when `w` is square-free.
pub fn max_square_half_length(w: &[u8]) -> usize {
    let mut best = 0;
    SquareScanner::new().for_each_square(w, |_, h| best = best.max(h));
    best
}

/// 1-based start positions of every occurrence of `x` in `w`.
pub fn occurrences(w: &[u8], x: &[u8]) -> Vec<usize> {
    if x.is_empty() {
        return (1..=w.len() + 1).collect();
    }
    w.windows(x.len())
        .enumerate()
        .filter(|(_, s)| *s == x)
        .map(|(i, _)| i + 1)
        .collect()
}

/// A square `(x_rotation)^(2 * exponent)` of a known Lyndon root.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Square {
    pub word: Word,
    /// 1-based rotation index `i` with `x_i` the primitive root of the half.
    pub rotation: usize,
    pub exponent: usize,
}

/// `SQ(w)` partitioned by Lyndon root.
#[derive(Debug, Clone)]
pub struct SquareInventory {
    word: Word,
    by_root: BTreeMap<LyndonRoot, Vec<Square>>,
    total: usize,
    max_half_length: usize,
}

impl SquareInventory {
    pub fn new(w: &[u8]) -> Self {
        let mut by_root: BTreeMap<LyndonRoot, Vec<Square>> = BTreeMap::new();
        let mut total = 0;
        let mut max_half_length = 0;
        SquareScanner::new().for_each_square(w, |i, h| {
            let s = &w[i..i + 2 * h];
            let (z, rotation, exponent) =
                lyndon_root_of_square(s).expect("scanner reports only squares");
            by_root.entry(z).or_default().push(Square {
                word: Word::from(s),
                rotation,
                exponent,
            });
            total += 1;
            max_half_length = max_half_length.max(h);
        });
        for squares in by_root.values_mut() {
            squares.sort_by(|a, b| shortlex(&a.word, &b.word));
        }
        SquareInventory {
            word: Word::from(w),
            by_root,
            total,
            max_half_length,
        }
    }

    pub fn word(&self) -> &Word {
        &self.word
    }

    pub fn total(&self) -> usize {
        self.total
    }

    pub fn max_half_length(&self) -> usize {
        self.max_half_length
    }

    /// Roots with at least one square, in length-then-lexicographic order.
    pub fn roots(&self) -> impl Iterator<Item = &LyndonRoot> {
        self.by_root.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&LyndonRoot, &[Square])> {
        self.by_root.iter().map(|(z, v)| (z, v.as_slice()))
    }

    /// `SQ_w(z)`; empty when `z` roots no square of the word.
    pub fn squares_of(&self, z: &LyndonRoot) -> &[Square] {
        self.by_root.get(z).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn count_of(&self, z: &LyndonRoot) -> usize {
        self.squares_of(z).len()
    }

    pub fn root_stats(&self, z: &LyndonRoot) -> Result<RootStats> {
        let squares = self.squares_of(z);
        let r = squares
            .iter()
            .map(|s| s.exponent)
            .max()
            .ok_or_else(|| Error::NoSquares {
                word: self.word.to_string(),
                root: z.to_string(),
            })?;
        let mut k_list: Vec<usize> = squares
            .iter()
            .filter(|s| s.exponent == r)
            .map(|s| s.rotation)
            .collect();
        k_list.sort_unstable();
        let len = z.len();
        let g = k_list
            .iter()
            .zip(k_list.iter().skip(1).chain(std::iter::once(&(k_list[0] + len))))
            .map(|(a, b)| b - a)
            .max()
            .unwrap_or(len);
        Ok(RootStats {
            root: z.clone(),
            r,
            s: k_list.len(),
            k_list,
            g,
            m_bound: 2 * len * r - g + 1,
        })
    }
}

pub fn squares_by_root(w: &[u8]) -> SquareInventory {
    SquareInventory::new(w)
}

/// Statistics of `SQ_w(z)` for a root with at least one square.
///
/// `r` is the largest exponent with `(x_i)^{2r}` a factor, `k_list` the sorted
/// rotation indices attaining it, `g` the largest cyclic gap in `k_list`
/// (closing with `k_1 + |z|`) and `m_bound = 2|z|r - g + 1`, a length `M` with
/// `[z]_M ⊆ F(w)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RootStats {
    pub root: LyndonRoot,
    pub r: usize,
    pub s: usize,
    pub k_list: Vec<usize>,
    pub g: usize,
    #[serde(rename = "M")]
    pub m_bound: usize,
}

impl RootStats {
    /// `|z|(r - 1) + s`.
    pub fn square_count(&self) -> usize {
        self.root.len() * (self.r - 1) + self.s
    }

    /// `2|z|(r - 1) + s + 1`.
    pub fn circuit_lower_bound(&self) -> usize {
        2 * self.root.len() * (self.r - 1) + self.s + 1
    }
}

pub fn root_stats(w: &[u8], z: &LyndonRoot) -> Result<RootStats> {
    SquareInventory::new(w).root_stats(z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::{conj_power_set, FactorIndex};
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    fn w(s: &str) -> Word {
        Word::parse_ascii(s).unwrap()
    }

    fn root(s: &str) -> LyndonRoot {
        LyndonRoot::new(w(s)).unwrap()
    }

    fn strs(v: &[Word]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn squares_of_examples() {
        assert_eq!(
            strs(&distinct_squares(b"aabaabaa")),
            ["aa", "aabaab", "abaaba", "baabaa"]
        );
        assert!(distinct_squares(b"ab").is_empty());
        assert_eq!(strs(&distinct_squares(b"aaaa")), ["aa", "aaaa"]);
        assert!(distinct_squares(b"").is_empty());
    }

    #[test]
    fn inventory_partitions_by_root() {
        let inv = squares_by_root(b"aabaabaa");
        assert_eq!(inv.total(), 4);
        let parts: Vec<(String, Vec<String>)> = inv
            .iter()
            .map(|(z, sq)| {
                (
                    z.to_string(),
                    sq.iter().map(|s| s.word.to_string()).collect(),
                )
            })
            .collect();
        assert_eq!(
            parts,
            [
                ("a".to_string(), vec!["aa".to_string()]),
                (
                    "aab".to_string(),
                    vec!["aabaab".into(), "abaaba".into(), "baabaa".into()]
                ),
            ]
        );
        let inv = squares_by_root(b"abab");
        assert_eq!(inv.roots().map(|z| z.to_string()).collect::<Vec<_>>(), ["ab"]);
        let inv = squares_by_root(b"");
        assert_eq!(inv.total(), 0);
        assert_eq!(inv.roots().count(), 0);
    }

    #[test]
    fn root_stats_examples() {
        let st = root_stats(b"aabaabaa", &root("aab")).unwrap();
        assert_eq!((st.r, st.s, st.k_list.clone(), st.g, st.m_bound), (1, 3, vec![1, 2, 3], 1, 6));
        let st = root_stats(b"aaaa", &root("a")).unwrap();
        assert_eq!((st.r, st.s, st.k_list.clone(), st.g, st.m_bound), (2, 1, vec![1], 1, 4));
        assert_eq!(st.square_count(), 2);
        assert!(matches!(
            root_stats(b"aabaabaa", &root("b")),
            Err(Error::NoSquares { .. })
        ));
    }

    #[test]
    fn half_lengths() {
        assert_eq!(max_square_half_length(b"aabaabaa"), 3);
        assert_eq!(max_square_half_length(b"abc"), 0);
        assert_eq!(max_square_half_length(b"aaaa"), 2);
    }

    #[test]
    fn occurrence_positions() {
        assert_eq!(occurrences(b"aabaabaa", b"aa"), [1, 4, 7]);
        assert_eq!(occurrences(b"ab", b"c"), Vec::<usize>::new());
    }

    fn small_word() -> impl Strategy<Value = Vec<u8>> {
        (1u8..=4).prop_flat_map(|s| prop::collection::vec(0..s, 0..=40))
    }

    proptest! {
        #[test]
        fn matches_naive_oracle(x in small_word()) {
            let got: BTreeSet<Vec<u8>> =
                distinct_squares(&x).into_iter().map(Word::into_letters).collect();
            prop_assert_eq!(got, oracle::naive_distinct_squares(&x));
        }

        #[test]
        fn root_stats_invariants(x in small_word()) {
            let inv = squares_by_root(&x);
            let idx = FactorIndex::new(&x);
            let mut sum = 0;
            for (z, sq) in inv.iter() {
                sum += sq.len();
                let st = inv.root_stats(z).unwrap();
                prop_assert!(1 <= st.s && st.s <= z.len());
                prop_assert!(1 <= st.g && st.g <= z.len() - st.s + 1);
                prop_assert_eq!(sq.len(), st.square_count());
                for m in 0..=st.m_bound {
                    prop_assert!(conj_power_set(z, m).is_subset_of(&idx));
                }
                for i in 1..=z.len() {
                    for d in 1..st.r {
                        let p = z.power_of_rotation(i, 2 * d * z.len());
                        prop_assert!(sq.iter().any(|s| s.word == p));
                    }
                }
            }
            prop_assert_eq!(sum, inv.total());
        }
    }
}
