//! Exact calculus of finite words over the naturals: occurrences, the
//! incompatibility relation, built-from decompositions, and stage composition.
//!
//! Positions are 1-indexed throughout, so `dom(s) = {1, .., lh(s)}`.

use std::fmt;

use crate::error::{Error, Result};

/// A finite word of natural numbers.
///
/// Spacer words live over all of the naturals; generating-sequence words are
/// the binary members of `F` (start and end with 0, see [`FiniteWord::in_f`]).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteWord {
    letters: Vec<u32>,
}

impl FiniteWord {
    pub fn new(letters: impl Into<Vec<u32>>) -> Self {
        Self {
            letters: letters.into(),
        }
    }

    pub fn empty() -> Self {
        Self {
            letters: Vec::new(),
        }
    }

    /// The length `lh(s)`.
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[u32] {
        &self.letters
    }

    /// Letter at 1-indexed position `i`.
    pub fn letter(&self, i: usize) -> u32 {
        self.letters[i - 1]
    }

    /// The restriction `s↾[k, l]` (1-indexed, inclusive).
    pub fn restrict(&self, k: usize, l: usize) -> FiniteWord {
        assert!(
            1 <= k && k <= l && l <= self.len(),
            "restriction out of range"
        );
        FiniteWord::new(&self.letters[k - 1..l])
    }

    pub fn concat(&self, other: &FiniteWord) -> FiniteWord {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        FiniteWord { letters }
    }

    /// Membership in `F`: binary, nonempty, starts and ends with 0.
    pub fn in_f(&self) -> bool {
        !self.letters.is_empty()
            && self.letters.iter().all(|&a| a <= 1)
            && self.letters[0] == 0
            && *self.letters.last().unwrap() == 0
    }

    /// True when all letters are equal. The empty word counts as constant so
    /// that degenerate gap words stay well-typed.
    pub fn is_constant(&self) -> bool {
        self.letters.windows(2).all(|w| w[0] == w[1])
    }

    pub fn max_letter(&self) -> u32 {
        self.letters.iter().copied().max().unwrap_or(0)
    }

    /// Compact digit rendering, e.g. `0010`. Only meaningful when every
    /// letter is a single digit.
    pub fn compact(&self) -> String {
        debug_assert!(self.letters.iter().all(|&a| a <= 9));
        self.letters.iter().map(|a| a.to_string()).collect()
    }
}

impl fmt::Display for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.letters.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for FiniteWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({self})")
    }
}

/// One occurrence of a pattern inside a host word.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Occurrence {
    pub position: usize,
    pub length: usize,
}

impl Occurrence {
    /// Whether the occurrence fits inside a host of length `host_len`.
    pub fn fits(&self, host_len: usize) -> bool {
        self.position >= 1 && self.length >= 1 && self.position + self.length - 1 <= host_len
    }
}

/// All positions `k` at which `pattern` occurs in `host`, ascending.
pub fn occurrences(host: &FiniteWord, pattern: &FiniteWord) -> Result<Vec<usize>> {
    if pattern.is_empty() {
        return Err(Error::EmptyPattern);
    }
    if pattern.len() > host.len() {
        return Ok(Vec::new());
    }
    Ok(host
        .letters
        .windows(pattern.len())
        .enumerate()
        .filter(|(_, w)| *w == pattern.letters())
        .map(|(i, _)| i + 1)
        .collect())
}

/// A hidden alignment of `pattern` against `s⌢(c)⌢s` at an offset covering
/// the middle letter. Returns the offset and the forced value of `c`.
///
/// An occurrence of an equal-length pattern at offset `j ∈ [2, L+1]`
/// necessarily covers position `L+1` (the wildcard), so it exists for some
/// `c ∈ ℕ` iff every other position matches the fixed letters of `s`; the
/// middle then forces `c = pattern(L+2-j)`. This turns the unbounded
/// quantifier over `c` into at most `L` checks.
fn hidden_alignment(s: &FiniteWord, pattern: &FiniteWord) -> Option<(usize, u32)> {
    let l = s.len();
    debug_assert_eq!(l, pattern.len());
    for j in 2..=l + 1 {
        let mid = l + 2 - j; // pattern index landing on the wildcard
        let ok = (1..=l).all(|i| {
            if i == mid {
                return true;
            }
            let p = j + i - 1; // host position
            let host_letter = if p <= l {
                s.letter(p)
            } else {
                s.letter(p - l - 1)
            };
            pattern.letter(i) == host_letter
        });
        if ok {
            return Some((j, pattern.letter(mid)));
        }
    }
    None
}

/// The incompatibility relation `s ⊥ t` for equal-length words: `t` occurs in
/// no `s⌢(c)⌢s`.
pub fn incompatible(s: &FiniteWord, t: &FiniteWord) -> Result<bool> {
    if s.len() != t.len() {
        return Err(Error::LengthMismatch {
            left: s.len(),
            right: t.len(),
        });
    }
    if s.is_empty() {
        return Err(Error::EmptyPattern);
    }
    // t at offset 1 or L+2 lines up with a demonstrated copy of s
    let compatible = s == t || hidden_alignment(s, t).is_some();
    Ok(!compatible)
}

/// Whether `s` occurs in `s⌢(c)⌢s` only at the two demonstrated positions,
/// for every `c ∈ ℕ`.
pub fn only_two_occurrences(s: &FiniteWord) -> Result<bool> {
    if s.is_empty() {
        return Err(Error::EmptyPattern);
    }
    Ok(hidden_alignment(s, s).is_none())
}

/// The unique decomposition `u = v 1^{a_1} v .. v 1^{a_n} v` witnessing
/// `v ≺ u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    base: FiniteWord,
    gaps: Vec<u32>,
    positions: Vec<usize>,
}

impl Decomposition {
    pub fn base(&self) -> &FiniteWord {
        &self.base
    }

    /// The gap exponents `a_1, .., a_n` (`n ≥ 1`).
    pub fn gaps(&self) -> &[u32] {
        &self.gaps
    }

    /// Starting positions of the `n + 1` expected occurrences of the base.
    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn copies(&self) -> usize {
        self.positions.len()
    }

    pub fn expected_occurrences(&self) -> Vec<Occurrence> {
        self.positions
            .iter()
            .map(|&position| Occurrence {
                position,
                length: self.base.len(),
            })
            .collect()
    }

    /// Whether all gaps are equal, i.e. the decomposition witnesses `v ≺_s u`.
    pub fn is_simple(&self) -> bool {
        self.gaps.windows(2).all(|w| w[0] == w[1])
    }

    /// Rebuild the decomposed word from base and gaps.
    pub fn reassemble(&self) -> FiniteWord {
        let mut letters = Vec::new();
        letters.extend_from_slice(self.base.letters());
        for &gap in &self.gaps {
            letters.extend(std::iter::repeat_n(1, gap as usize));
            letters.extend_from_slice(self.base.letters());
        }
        FiniteWord::new(letters)
    }
}

/// The decomposition of `u` over `v`, or `None` when `v ⊀ u`.
///
/// The parse is greedy and left-anchored: gaps consist of 1s only and every
/// copy of `v` starts with 0, so the next copy must begin at the first 0
/// after the current gap. A failed parse is therefore a definitive answer,
/// and a successful parse is the unique decomposition.
pub fn decompose(u: &FiniteWord, v: &FiniteWord) -> Result<Option<Decomposition>> {
    if !u.in_f() || !v.in_f() {
        return Err(Error::NotInF);
    }
    let l = v.len();
    if u.len() < 2 * l {
        return Ok(None); // n ≥ 1 needs at least two copies
    }
    let matches_at =
        |pos: usize| pos + l - 1 <= u.len() && &u.letters()[pos - 1..pos + l - 1] == v.letters();
    if !matches_at(1) {
        return Ok(None);
    }
    let mut positions = vec![1];
    let mut gaps = Vec::new();
    let mut cursor = 1 + l;
    while cursor <= u.len() {
        let mut gap = 0usize;
        while cursor + gap <= u.len() && u.letter(cursor + gap) == 1 {
            gap += 1;
        }
        let next = cursor + gap;
        if !matches_at(next) {
            return Ok(None);
        }
        positions.push(next);
        gaps.push(gap as u32);
        cursor = next + l;
    }
    if gaps.is_empty() {
        return Ok(None);
    }
    Ok(Some(Decomposition {
        base: v.clone(),
        gaps,
        positions,
    }))
}

/// Whether `u` is simply built from `v` (`v ≺_s u`).
pub fn is_simply_built(u: &FiniteWord, v: &FiniteWord) -> Result<bool> {
    Ok(decompose(u, v)?.is_some_and(|d| d.is_simple()))
}

/// Compose two adjacent stages' spacer words: copies of `inner` interleaved
/// with the letters of `outer_gapword`,
/// `inner⌢(g(1))⌢inner⌢..⌢(g(m))⌢inner`, of length `(m+1)·lh(inner) + m`.
///
/// This is the spacer word of the merged stage when the stage carrying
/// `inner` is immediately refined by the stage carrying `outer_gapword`.
pub fn compose_stage(outer_gapword: &FiniteWord, inner: &FiniteWord) -> Result<FiniteWord> {
    if outer_gapword.is_empty() {
        return Err(Error::EmptyGapWord);
    }
    let m = outer_gapword.len();
    let mut letters = Vec::with_capacity((m + 1) * inner.len() + m);
    letters.extend_from_slice(inner.letters());
    for i in 1..=m {
        letters.push(outer_gapword.letter(i));
        letters.extend_from_slice(inner.letters());
    }
    Ok(FiniteWord::new(letters))
}
