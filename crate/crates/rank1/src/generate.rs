//! Materialization of generating sequences, stage telescoping, built-from
//! analysis at finite depth, and the incompatibility telescope used by the
//! non-isomorphism and disjointness engines.

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::params::{bounds, heights, lcm, Heights, ParameterSpec, Stage};
use crate::words::{compose_stage, decompose, incompatible, FiniteWord};

/// Default guard on `lh(v_N)` when materializing words.
pub const DEFAULT_EXPANSION_CAP: usize = 10_000_000;

/// The words `v_0 ⊑ v_1 ⊑ .. ⊑ v_N` of a construction, with their heights.
#[derive(Debug, Clone)]
pub struct GeneratingSequence {
    spec: ParameterSpec,
    words: Vec<FiniteWord>,
    heights: Heights,
}

impl GeneratingSequence {
    pub fn spec(&self) -> &ParameterSpec {
        &self.spec
    }

    pub fn depth(&self) -> usize {
        self.words.len() - 1
    }

    pub fn word(&self, n: usize) -> &FiniteWord {
        &self.words[n]
    }

    pub fn words(&self) -> &[FiniteWord] {
        &self.words
    }

    /// The deepest materialized word `v_N`.
    pub fn top(&self) -> &FiniteWord {
        self.words.last().unwrap()
    }

    pub fn heights(&self) -> &Heights {
        &self.heights
    }

    /// `lh(v_n)` as a machine integer; materialized words always fit.
    pub fn height(&self, n: usize) -> usize {
        self.words[n].len()
    }
}

/// Materialize `v_0 .. v_n` with the default expansion cap.
pub fn expand(spec: &ParameterSpec, n: usize) -> Result<GeneratingSequence> {
    expand_with_cap(spec, n, DEFAULT_EXPANSION_CAP)
}

/// Materialize `v_0 .. v_n`, refusing to build words longer than `cap`.
pub fn expand_with_cap(spec: &ParameterSpec, n: usize, cap: usize) -> Result<GeneratingSequence> {
    spec.require_valid()?;
    let hs = heights(spec, n)?;
    let top = hs.h(n);
    if *top > BigUint::from(cap as u64) {
        let needed = u128::try_from(top).unwrap_or(u128::MAX);
        return Err(Error::CapExceeded { needed, cap });
    }
    let mut words = Vec::with_capacity(n + 1);
    words.push(FiniteWord::new(vec![0u32]));
    for k in 0..n {
        let stage = spec.stage(k).expect("heights succeeded, stage exists");
        let prev = &words[k];
        let mut letters =
            Vec::with_capacity(prev.len() * stage.r as usize + stage.spacer_sum() as usize);
        letters.extend_from_slice(prev.letters());
        for i in 1..=stage.spacer.len() {
            letters.extend(std::iter::repeat_n(1, stage.spacer.letter(i) as usize));
            letters.extend_from_slice(prev.letters());
        }
        let word = FiniteWord::new(letters);
        // cross-check the height recursion against the materialized length
        assert_eq!(
            BigUint::from(word.len() as u64),
            *hs.h(k + 1),
            "height recursion and expansion disagree at stage {k}"
        );
        words.push(word);
    }
    Ok(GeneratingSequence {
        spec: spec.clone(),
        words,
        heights: hs,
    })
}

/// The deepest level `≤ max_depth` whose word fits within `cap` letters.
pub fn fitting_depth(spec: &ParameterSpec, max_depth: usize, cap: usize) -> Result<usize> {
    spec.require_valid()?;
    let cap = BigUint::from(cap as u64);
    let mut best = 0;
    let mut h = BigUint::from(1u32);
    for k in 0..max_depth {
        let stage = match spec.stage(k) {
            Some(st) => st,
            None => break,
        };
        h = h * stage.r + BigUint::from(stage.spacer_sum());
        if h > cap {
            break;
        }
        best = k + 1;
    }
    Ok(best)
}

/// Merge consecutive stages `[from, to)` into one: the cutting values
/// multiply and the spacer words fold through [`compose_stage`].
pub fn merge_stages(spec: &ParameterSpec, from: usize, to: usize) -> Result<Stage> {
    assert!(from < to, "empty stage range");
    let first = spec.stage(from).ok_or(Error::DepthLimited {
        stage: from,
        available: spec.preamble().len(),
    })?;
    let mut r: u64 = first.r as u64;
    let mut spacer = first.spacer.clone();
    for j in from + 1..to {
        let next = spec.stage(j).ok_or(Error::DepthLimited {
            stage: j,
            available: spec.preamble().len(),
        })?;
        r *= next.r as u64;
        if r > u32::MAX as u64 {
            return Err(Error::CutTooCoarse);
        }
        spacer = compose_stage(&next.spacer, &spacer)?;
    }
    debug_assert_eq!(spacer.len() as u64, r - 1);
    Ok(Stage {
        r: r as u32,
        spacer,
    })
}

/// Telescope along explicit cut points `0 = n_0 < n_1 < .. < n_K`: stage `k`
/// of the result merges stages `[n_k, n_{k+1})`, and the stages from `n_K`
/// on are kept as they were. Expanding the result reproduces the subsequence
/// `(v_{n_k})` verbatim.
pub fn telescope(spec: &ParameterSpec, cut_points: &[usize]) -> Result<ParameterSpec> {
    spec.require_valid()?;
    if cut_points.first() != Some(&0) || cut_points.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::BadCutPoints);
    }
    let mut merged = Vec::with_capacity(cut_points.len() - 1);
    for w in cut_points.windows(2) {
        merged.push(merge_stages(spec, w[0], w[1])?);
    }
    let rest = spec.shift(*cut_points.last().unwrap())?;
    let mut preamble = merged;
    preamble.extend_from_slice(rest.preamble());
    ParameterSpec::new(preamble, rest.tail().map(|t| t.to_vec()))
}

/// Telescope a periodic spec along a stride pattern repeated forever,
/// producing an eventually periodic merged spec. The merged stages become
/// periodic once the walk revisits a (tail phase, stride phase) state.
pub fn telescope_periodic(spec: &ParameterSpec, strides: &[usize]) -> Result<ParameterSpec> {
    spec.require_valid()?;
    if strides.is_empty() || strides.contains(&0) {
        return Err(Error::BadCutPoints);
    }
    let period = spec.period().ok_or(Error::DepthLimited {
        stage: spec.preamble().len(),
        available: spec.preamble().len(),
    })?;
    let preamble_len = spec.preamble().len();
    let mut merged: Vec<Stage> = Vec::new();
    let mut seen: Vec<((usize, usize), usize)> = Vec::new();
    let mut n = 0usize;
    let mut k = 0usize;
    loop {
        if n >= preamble_len {
            let state = ((n - preamble_len) % period, k % strides.len());
            if let Some(&(_, start)) = seen.iter().find(|(s, _)| *s == state) {
                let tail = merged.split_off(start);
                return ParameterSpec::new(merged, Some(tail));
            }
            seen.push((state, merged.len()));
        }
        let stride = strides[k % strides.len()];
        merged.push(merge_stages(spec, n, n + stride)?);
        n += stride;
        k += 1;
    }
}

/// Zero-count positions used to prune built-from candidates: any `u ≺ w` has
/// a zero count dividing that of `w`, and a prefix of `w` in `F` with `d`
/// zeros must end exactly at the `d`-th zero.
fn zero_positions(word: &FiniteWord) -> Vec<usize> {
    word.letters()
        .iter()
        .enumerate()
        .filter(|(_, &a)| a == 0)
        .map(|(i, _)| i + 1)
        .collect()
}

fn divisors(n: usize) -> Vec<usize> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// All words `u ∈ F` with `u ≺ word`, in increasing length (hence
/// `≺`-increasing) order. The word itself is excluded since building
/// requires at least two copies.
pub fn built_into(word: &FiniteWord) -> Result<Vec<FiniteWord>> {
    if !word.in_f() {
        return Err(Error::NotInF);
    }
    let zeros = zero_positions(word);
    let total = zeros.len();
    let mut result = Vec::new();
    for d in divisors(total) {
        if d == total {
            break; // u must be a proper prefix with at least two copies
        }
        let candidate = word.restrict(1, zeros[d - 1]);
        if decompose(word, &candidate)?.is_some() {
            result.push(candidate);
        }
    }
    Ok(result)
}

/// One word in the built-from lattice of `v_N`, with its canonicality flag.
#[derive(Debug, Clone)]
pub struct BuiltWord {
    pub word: FiniteWord,
    /// Index `n` when this word is the generating word `v_n`.
    pub stage_index: Option<usize>,
    /// No `u ≺ word ≺ w` with `u ≺_s w` exists among the depth-visible words.
    pub canonical_at_depth: bool,
    /// The `(u, w)` pair witnessing non-canonicality.
    pub witness: Option<(FiniteWord, FiniteWord)>,
}

/// Canonical-at-depth analysis of a materialized generating sequence.
///
/// All verdicts are relative to the depth: a non-canonical flag is final
/// (its witness persists at any larger depth), canonical-at-depth may still
/// be refuted later.
#[derive(Debug, Clone)]
pub struct CanonicalReport {
    pub depth: usize,
    pub built_into: Vec<BuiltWord>,
    /// Stage indices `n` whose `v_n` is non-canonical at this depth.
    pub removable_stages: Vec<usize>,
    /// `v_N` is simply built from some visible word, so the limit word may
    /// be degenerate.
    pub degenerate: bool,
    pub degenerate_base: Option<FiniteWord>,
}

impl CanonicalReport {
    pub fn canonical_members(&self) -> impl Iterator<Item = &BuiltWord> {
        self.built_into.iter().filter(|b| b.canonical_at_depth)
    }

    /// Canonical members that are not generating words of the presentation.
    pub fn extra_canonical(&self) -> impl Iterator<Item = &BuiltWord> {
        self.canonical_members().filter(|b| b.stage_index.is_none())
    }

    /// Whether the supplied parameters are exactly the canonical ones at
    /// this depth: no stage is removable and no foreign canonical member
    /// appears between the generating words.
    pub fn supplied_is_canonical(&self) -> bool {
        self.removable_stages.is_empty() && self.extra_canonical().next().is_none()
    }

    /// Stage parameters of the canonical chain at depth: the decompositions
    /// between consecutive canonical members, ending at `v_N`. `None` when
    /// some consecutive pair is not `≺`-related.
    pub fn canonical_parameters(&self, top: &FiniteWord) -> Option<Vec<Stage>> {
        let mut chain: Vec<&FiniteWord> = self.canonical_members().map(|b| &b.word).collect();
        chain.push(top);
        let mut stages = Vec::with_capacity(chain.len().saturating_sub(1));
        for pair in chain.windows(2) {
            let d = decompose(pair[1], pair[0]).ok()??;
            stages.push(Stage {
                r: d.copies() as u32,
                spacer: FiniteWord::new(d.gaps()),
            });
        }
        Some(stages)
    }
}

/// Flag every depth-visible built-from word as canonical or not, detect
/// simply-built chains and a possibly degenerate limit word.
pub fn canonical_analysis(gen: &GeneratingSequence) -> Result<CanonicalReport> {
    let depth = gen.depth();
    if depth < 2 {
        return Err(Error::LevelOutOfRange {
            level: 2,
            max: depth,
        });
    }
    let top = gen.top();
    let members = built_into(top)?;
    // lattice of all visible words, ≺-increasing by length, top included
    let mut lattice: Vec<&FiniteWord> = members.iter().collect();
    lattice.push(top);
    let n = lattice.len();
    let mut built = vec![vec![false; n]; n];
    let mut simple = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            if let Some(d) = decompose(lattice[j], lattice[i])? {
                built[i][j] = true;
                simple[i][j] = d.is_simple();
            }
        }
    }
    let stage_index_of = |word: &FiniteWord| (0..depth).find(|&k| gen.word(k) == word);
    let mut built_words = Vec::with_capacity(members.len());
    for (k, word) in members.iter().enumerate() {
        let mut witness = None;
        'search: for i in 0..k {
            if !built[i][k] {
                continue;
            }
            for j in k + 1..n {
                if built[k][j] && simple[i][j] {
                    witness = Some((lattice[i].clone(), lattice[j].clone()));
                    break 'search;
                }
            }
        }
        built_words.push(BuiltWord {
            word: word.clone(),
            stage_index: stage_index_of(word),
            canonical_at_depth: witness.is_none(),
            witness,
        });
    }
    let removable_stages = built_words
        .iter()
        .filter(|b| !b.canonical_at_depth)
        .filter_map(|b| b.stage_index)
        .collect();
    let top_idx = n - 1;
    let degenerate_base = (0..members.len())
        .find(|&i| simple[i][top_idx])
        .map(|i| lattice[i].clone());
    Ok(CanonicalReport {
        depth,
        built_into: built_words,
        removable_stages,
        degenerate: degenerate_base.is_some(),
        degenerate_base,
    })
}

/// A certified degeneracy witness for a periodic spec: from stage `m` on,
/// every spacer letter equals `gap`, so the limit word is simply built from
/// `v_m` with constant gaps.
pub fn certified_degenerate(spec: &ParameterSpec) -> Option<(usize, u32)> {
    let tail = spec.tail()?;
    let gap = tail[0].spacer.letter(1);
    let tail_constant = tail
        .iter()
        .all(|st| st.spacer.letters().iter().all(|&a| a == gap));
    if !tail_constant {
        return None;
    }
    let mut m = spec.preamble().len();
    while m > 0 {
        let st = &spec.preamble()[m - 1];
        if st.spacer.letters().iter().all(|&a| a == gap) {
            m -= 1;
        } else {
            break;
        }
    }
    Some((m, gap))
}

/// One verified incompatibility between merged spacer words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IncompatibilityCertificate {
    /// Index in the merged presentation.
    pub merged_stage: usize,
    /// First original stage of the merged block.
    pub original_stage: usize,
    pub merged_r: u32,
    pub s: FiniteWord,
    pub t: FiniteWord,
}

impl IncompatibilityCertificate {
    /// Re-check the certificate from the word calculus alone.
    pub fn verify(&self) -> bool {
        self.s.len() == self.t.len()
            && self.s.len() + 1 == self.merged_r as usize
            && incompatible(&self.s, &self.t).unwrap_or(false)
    }
}

/// Result of the incompatibility telescope on a commensurate pair.
#[derive(Debug, Clone)]
pub struct TelescopeCertificate {
    pub merged_a: ParameterSpec,
    pub merged_b: ParameterSpec,
    /// The walked cut points `n_0 = 0 < n_1 < ..` (one past the last merge).
    pub cut_points: Vec<usize>,
    /// Index into the merged presentation where the periodic part begins.
    pub merged_cycle_start: usize,
    pub certificates: Vec<IncompatibilityCertificate>,
    /// (R, S) over both original presentations.
    pub bounds_before: (u32, u32),
    /// (R', S') over both merged presentations; R' ≤ R³ and S' = S.
    pub bounds_after: (u32, u32),
    /// True when a periodic cycle covers all further stages.
    pub certified: bool,
}

impl TelescopeCertificate {
    /// Whether some certificate lies in the periodic part, so incompatible
    /// merged stages recur forever.
    pub fn recurrent_certificate(&self) -> bool {
        self.certified
            && self
                .certificates
                .iter()
                .any(|c| c.merged_stage >= self.merged_cycle_start)
    }
}

/// Walk the stage-merging construction for a commensurate pair: advance by
/// 1 where the spacer words agree, merge 2 stages where they differ and the
/// next spacer word is non-constant, and 3 stages otherwise. Each merged
/// block with differing spacers yields a verified `⊥` certificate.
///
/// For two periodic specs the walk closes a cycle and certifies all stages;
/// otherwise it stops at `depth` cut points uncertified.
pub fn incompatibility_telescope(
    a: &ParameterSpec,
    b: &ParameterSpec,
    depth: usize,
) -> Result<TelescopeCertificate> {
    a.require_valid()?;
    b.require_valid()?;
    let periodic = a.is_periodic() && b.is_periodic();
    let combined_preamble = a.preamble().len().max(b.preamble().len());
    let combined_period = match (a.period(), b.period()) {
        (Some(x), Some(y)) => lcm(x, y),
        _ => 0,
    };

    let mut merged_a: Vec<Stage> = Vec::new();
    let mut merged_b: Vec<Stage> = Vec::new();
    let mut certificates = Vec::new();
    let mut cut_points = vec![0usize];
    let mut seen: Vec<(usize, usize)> = Vec::new(); // (phase, merged index)
    let mut n = 0usize;
    let mut cycle_start = None;

    loop {
        if periodic && n >= combined_preamble {
            let phase = (n - combined_preamble) % combined_period;
            if let Some(&(_, start)) = seen.iter().find(|(p, _)| *p == phase) {
                cycle_start = Some(start);
                break;
            }
            seen.push((phase, merged_a.len()));
        }
        if !periodic && cut_points.len() > depth {
            break;
        }
        let (sa, sb) = match (a.stage(n), b.stage(n)) {
            (Some(x), Some(y)) => (x, y),
            _ => break,
        };
        if sa.r != sb.r {
            // commensurability precondition violated
            return Err(Error::CertificateFailed {
                stage: merged_a.len(),
            });
        }
        let stride = if sa.spacer == sb.spacer {
            1
        } else {
            match a.stage(n + 1) {
                Some(next) if !next.spacer.is_constant() => 2,
                Some(_) => 3,
                None => break,
            }
        };
        if a.stage(n + stride - 1).is_none() || b.stage(n + stride - 1).is_none() {
            break;
        }
        let block_a = merge_stages(a, n, n + stride)?;
        let block_b = merge_stages(b, n, n + stride)?;
        if stride > 1 {
            let cert = IncompatibilityCertificate {
                merged_stage: merged_a.len(),
                original_stage: n,
                merged_r: block_a.r,
                s: block_a.spacer.clone(),
                t: block_b.spacer.clone(),
            };
            if !cert.verify() {
                return Err(Error::CertificateFailed {
                    stage: cert.merged_stage,
                });
            }
            certificates.push(cert);
        }
        merged_a.push(block_a);
        merged_b.push(block_b);
        n += stride;
        cut_points.push(n);
    }

    let bounds_a = bounds(a)?;
    let bounds_b = bounds(b)?;
    let bounds_before = (bounds_a.r.max(bounds_b.r), bounds_a.s.max(bounds_b.s));
    let (merged_a, merged_b, cycle_start) = match cycle_start {
        Some(start) => {
            let tail_a = merged_a.split_off(start);
            let tail_b = merged_b.split_off(start);
            (
                ParameterSpec::new(merged_a, Some(tail_a))?,
                ParameterSpec::new(merged_b, Some(tail_b))?,
                start,
            )
        }
        None => (
            ParameterSpec::preamble_only(merged_a),
            ParameterSpec::preamble_only(merged_b),
            usize::MAX,
        ),
    };
    let mb_a = bounds(&merged_a)?;
    let mb_b = bounds(&merged_b)?;
    Ok(TelescopeCertificate {
        merged_a,
        merged_b,
        cut_points,
        merged_cycle_start: cycle_start,
        certificates,
        bounds_before,
        bounds_after: (mb_a.r.max(mb_b.r), mb_a.s.max(mb_b.s)),
        certified: periodic,
    })
}
