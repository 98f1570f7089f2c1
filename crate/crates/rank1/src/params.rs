//! Finitely presented cutting/spacer parameter sequences: validation,
//! heights, boundedness, commensurability, and the line-oriented text format.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::error::{Error, Result, StageViolation};
use crate::words::FiniteWord;

/// One construction stage: cutting value `r ≥ 2` and spacer word of length
/// `r - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Stage {
    pub r: u32,
    pub spacer: FiniteWord,
}

impl Stage {
    /// A validated stage. `spacer` must have exactly `r - 1` letters.
    pub fn new(r: u32, spacer: FiniteWord) -> std::result::Result<Self, StageViolation> {
        let stage = Stage { r, spacer };
        match stage.violation() {
            None => Ok(stage),
            Some(v) => Err(v),
        }
    }

    pub fn violation(&self) -> Option<StageViolation> {
        if self.r < 2 {
            return Some(StageViolation::CuttingTooSmall { r: self.r });
        }
        if self.spacer.len() != (self.r - 1) as usize {
            return Some(StageViolation::SpacerLength {
                len: self.spacer.len(),
                expected: self.r - 1,
            });
        }
        None
    }

    /// The spacer sum `Σ_i s(i)`.
    pub fn spacer_sum(&self) -> u64 {
        self.spacer.letters().iter().map(|&a| a as u64).sum()
    }

    pub fn max_spacer(&self) -> u32 {
        self.spacer.max_letter()
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "stage r={} s={}", self.r, self.spacer)
    }
}

/// A finitely presented parameter sequence: explicit preamble stages plus an
/// optional nonempty tail repeated periodically forever.
///
/// Tail-less specs are depth-limited: queries beyond the preamble cannot be
/// answered.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParameterSpec {
    preamble: Vec<Stage>,
    tail: Option<Vec<Stage>>,
}

impl ParameterSpec {
    pub fn new(preamble: Vec<Stage>, tail: Option<Vec<Stage>>) -> Result<Self> {
        if matches!(&tail, Some(t) if t.is_empty()) {
            return Err(Error::EmptySpec);
        }
        Ok(Self { preamble, tail })
    }

    /// A purely periodic spec (empty preamble).
    pub fn periodic(tail: Vec<Stage>) -> Result<Self> {
        Self::new(Vec::new(), Some(tail))
    }

    /// A depth-limited spec with explicitly listed stages only.
    pub fn preamble_only(stages: Vec<Stage>) -> Self {
        Self {
            preamble: stages,
            tail: None,
        }
    }

    pub fn preamble(&self) -> &[Stage] {
        &self.preamble
    }

    pub fn tail(&self) -> Option<&[Stage]> {
        self.tail.as_deref()
    }

    pub fn is_periodic(&self) -> bool {
        self.tail.is_some()
    }

    pub fn period(&self) -> Option<usize> {
        self.tail.as_ref().map(|t| t.len())
    }

    /// Stage `n`, or `None` past the preamble of a tail-less spec.
    pub fn stage(&self, n: usize) -> Option<&Stage> {
        if n < self.preamble.len() {
            return Some(&self.preamble[n]);
        }
        let tail = self.tail.as_ref()?;
        Some(&tail[(n - self.preamble.len()) % tail.len()])
    }

    /// Number of explicitly reachable stages; `None` when the tail makes
    /// every stage reachable.
    pub fn stages_available(&self) -> Option<usize> {
        match self.tail {
            Some(_) => None,
            None => Some(self.preamble.len()),
        }
    }

    fn require_stage(&self, n: usize) -> Result<&Stage> {
        self.stage(n).ok_or(Error::DepthLimited {
            stage: n,
            available: self.preamble.len(),
        })
    }

    pub fn is_empty(&self) -> bool {
        self.preamble.is_empty() && self.tail.is_none()
    }

    /// Every stage in the presentation, preamble then one tail period.
    pub fn presented_stages(&self) -> impl Iterator<Item = (usize, &Stage)> {
        let tail = self.tail.as_deref().unwrap_or(&[]);
        self.preamble.iter().chain(tail.iter()).enumerate()
    }

    /// Per-stage constraint violations, by stage index within the
    /// presentation (preamble first, then the tail period).
    pub fn validate(&self) -> std::result::Result<(), Vec<(usize, StageViolation)>> {
        let violations: Vec<_> = self
            .presented_stages()
            .filter_map(|(i, st)| st.violation().map(|v| (i, v)))
            .collect();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(violations)
        }
    }

    /// First violation as an [`enum@Error`], for operations that need a valid spec.
    pub fn require_valid(&self) -> Result<()> {
        match self.validate() {
            Ok(()) => Ok(()),
            Err(violations) => {
                let (stage, violation) = violations[0];
                Err(Error::InvalidStage { stage, violation })
            }
        }
    }

    /// The spec presenting stages `k, k+1, ..` of this one.
    pub fn shift(&self, k: usize) -> Result<ParameterSpec> {
        if k <= self.preamble.len() {
            return ParameterSpec::new(self.preamble[k..].to_vec(), self.tail.clone());
        }
        let tail = self.tail.as_ref().ok_or(Error::DepthLimited {
            stage: k,
            available: self.preamble.len(),
        })?;
        let phase = (k - self.preamble.len()) % tail.len();
        let mut rotated = tail[phase..].to_vec();
        rotated.extend_from_slice(&tail[..phase]);
        ParameterSpec::periodic(rotated)
    }

    /// The same stage sequence with `copies` tail periods unrolled into the
    /// preamble. Representation changes like this must not affect any
    /// stage-sequence-level operation.
    pub fn unroll(&self, copies: usize) -> ParameterSpec {
        match &self.tail {
            None => self.clone(),
            Some(tail) => {
                let mut preamble = self.preamble.clone();
                for _ in 0..copies {
                    preamble.extend(tail.iter().cloned());
                }
                ParameterSpec {
                    preamble,
                    tail: self.tail.clone(),
                }
            }
        }
    }

    /// Whether the two specs present identical stage sequences, certified
    /// over the preambles plus one aligned common period.
    pub fn same_sequence(&self, other: &ParameterSpec) -> Option<bool> {
        match (self.tail.as_ref(), other.tail.as_ref()) {
            (Some(ta), Some(tb)) => {
                let start = self.preamble.len().max(other.preamble.len());
                let limit = start + lcm(ta.len(), tb.len());
                Some((0..limit).all(|n| self.stage(n) == other.stage(n)))
            }
            (None, None) => Some(self.preamble == other.preamble),
            _ => None,
        }
    }
}

/// One aligned common period past both preambles: checking a stagewise
/// property on `0..horizon` certifies it at every stage of two periodic
/// specs. `None` when either spec is tail-less.
pub fn certification_horizon(a: &ParameterSpec, b: &ParameterSpec) -> Option<usize> {
    match (a.period(), b.period()) {
        (Some(x), Some(y)) => Some(a.preamble().len().max(b.preamble().len()) + lcm(x, y)),
        _ => None,
    }
}

pub(crate) fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}

/// The tower heights `h_0, .., h_N` with `h_0 = 1` and
/// `h_{n+1} = r_n h_n + Σ_i s_n(i)`.
///
/// Heights grow geometrically, so they are kept exact as big integers;
/// silent overflow here would corrupt every modular and alignment check
/// downstream.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Heights {
    values: Vec<BigUint>,
}

impl Heights {
    pub fn values(&self) -> &[BigUint] {
        &self.values
    }

    pub fn h(&self, n: usize) -> &BigUint {
        &self.values[n]
    }

    pub fn depth(&self) -> usize {
        self.values.len() - 1
    }
}

/// Exact heights `h_0 .. h_N`.
pub fn heights(spec: &ParameterSpec, n: usize) -> Result<Heights> {
    spec.require_valid()?;
    let mut values = Vec::with_capacity(n + 1);
    values.push(BigUint::one());
    for k in 0..n {
        let stage = spec.require_stage(k)?;
        let next = values[k].clone() * stage.r + BigUint::from(stage.spacer_sum());
        values.push(next);
    }
    Ok(Heights { values })
}

/// Partial sums report for the finite-measure condition
/// `Σ (h_{n+1} - h_n r_n) / h_{n+1} < ∞`.
#[derive(Debug, Clone)]
pub struct FiniteMeasureReport {
    /// Whether the construction has finite measure. True for every valid
    /// periodic presentation: the terms are `σ_n / h_{n+1} ≤ S(R-1)/h_{n+1}`
    /// with `h_n ≥ 2^n`, hence geometrically summable.
    pub holds: bool,
    /// The exact terms `(σ_n, h_{n+1})` for `n < depth`.
    pub terms: Vec<(u64, BigUint)>,
    pub cutting_bound: u32,
    pub spacer_bound: u32,
}

impl FiniteMeasureReport {
    /// One-line justification of the aggregate verdict.
    pub fn sketch(&self) -> String {
        format!(
            "every term sigma_n/h_(n+1) is at most {}*{}/h_(n+1) and h_n >= 2^n, \
             so the series is dominated by a geometric one",
            self.spacer_bound,
            self.cutting_bound.saturating_sub(1),
        )
    }
}

/// Finite-measure decision with partial sums up to `depth`.
pub fn finite_measure_check(spec: &ParameterSpec, depth: usize) -> Result<FiniteMeasureReport> {
    spec.require_valid()?;
    if !spec.is_periodic() {
        return Err(Error::DepthLimited {
            stage: spec.preamble.len(),
            available: spec.preamble.len(),
        });
    }
    let hs = heights(spec, depth)?;
    let terms = (0..depth)
        .map(|n| {
            let sigma = spec.stage(n).unwrap().spacer_sum();
            (sigma, hs.h(n + 1).clone())
        })
        .collect();
    let bounds = bounds(spec)?;
    Ok(FiniteMeasureReport {
        holds: true,
        terms,
        cutting_bound: bounds.r,
        spacer_bound: bounds.s,
    })
}

/// Uniform bounds over the presented stages.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bounds {
    /// Max cutting value.
    pub r: u32,
    /// Max spacer value.
    pub s: u32,
    /// True when a periodic tail makes the bounds global; false means they
    /// only cover the explicit preamble.
    pub certified: bool,
}

/// Max cutting value and max spacer value over preamble and tail.
pub fn bounds(spec: &ParameterSpec) -> Result<Bounds> {
    if spec.is_empty() {
        return Err(Error::EmptySpec);
    }
    let mut r = 0;
    let mut s = 0;
    for (_, stage) in spec.presented_stages() {
        r = r.max(stage.r);
        s = s.max(stage.max_spacer());
    }
    Ok(Bounds {
        r,
        s,
        certified: spec.is_periodic(),
    })
}

/// Outcome of a commensurability check.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Commensurability {
    /// `r_n = q_n` and `Σ s_n(i) = Σ t_n(i)` for all `n`, certified across
    /// one aligned common period.
    Always,
    /// Definitive mismatch at this stage.
    MismatchAt { stage: usize },
    /// Agreement on every checkable stage, but at least one spec is
    /// tail-less so the quantifier over all `n` stays open.
    Unknown { checked: usize },
}

fn stages_match(a: &Stage, b: &Stage) -> bool {
    a.r == b.r && a.spacer_sum() == b.spacer_sum()
}

/// Stagewise commensurability of the sequences starting at `off_a` and
/// `off_b`. `depth` caps the scan when a certificate is unavailable.
pub(crate) fn commensurate_from(
    a: &ParameterSpec,
    b: &ParameterSpec,
    off_a: usize,
    off_b: usize,
    depth: usize,
) -> Commensurability {
    let certified_limit = match (a.tail.as_ref(), b.tail.as_ref()) {
        (Some(ta), Some(tb)) => {
            let pre_a = a.preamble.len().saturating_sub(off_a);
            let pre_b = b.preamble.len().saturating_sub(off_b);
            Some(pre_a.max(pre_b) + lcm(ta.len(), tb.len()))
        }
        _ => None,
    };
    let limit = certified_limit.unwrap_or(depth);
    for i in 0..limit {
        match (a.stage(off_a + i), b.stage(off_b + i)) {
            (Some(sa), Some(sb)) => {
                if !stages_match(sa, sb) {
                    return Commensurability::MismatchAt { stage: i };
                }
            }
            _ => return Commensurability::Unknown { checked: i },
        }
    }
    if certified_limit.is_some() {
        Commensurability::Always
    } else {
        Commensurability::Unknown { checked: limit }
    }
}

/// Whether the two parameter sequences are commensurate: equal cutting
/// values and equal spacer sums at every stage. Exact for two periodic
/// specs; otherwise checked up to `depth`.
pub fn commensurate(a: &ParameterSpec, b: &ParameterSpec, depth: usize) -> Commensurability {
    commensurate_from(a, b, 0, 0, depth)
}

/// Result of the eventual-commensurability search.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventualAlignment {
    /// `lh(v_N) = lh(w_M)` and the sequences are commensurate from the
    /// aligned offsets on, certified by periodicity.
    Found { n: usize, m: usize },
    /// Heights align and no mismatch was found, but certification is out of
    /// reach (tail-less input).
    Candidate { n: usize, m: usize, checked: usize },
    /// No alignment within the window. Not a proof of non-existence.
    NotFound { window: usize },
}

/// Search for the lexicographically least `(N, M)` with `N, M ≤ window`,
/// `h_N = h_M` (heights are word lengths) and commensurate continuations.
pub fn eventually_commensurate(
    a: &ParameterSpec,
    b: &ParameterSpec,
    window: usize,
) -> Result<EventualAlignment> {
    a.require_valid()?;
    b.require_valid()?;
    let depth_a = match a.stages_available() {
        Some(avail) => window.min(avail),
        None => window,
    };
    let depth_b = match b.stages_available() {
        Some(avail) => window.min(avail),
        None => window,
    };
    let ha = heights(a, depth_a)?;
    let hb = heights(b, depth_b)?;
    let mut candidate = None;
    for n in 0..=depth_a {
        for m in 0..=depth_b {
            if ha.h(n) != hb.h(m) {
                continue;
            }
            match commensurate_from(a, b, n, m, window.max(1) * 4) {
                Commensurability::Always => return Ok(EventualAlignment::Found { n, m }),
                Commensurability::Unknown { checked } => {
                    if candidate.is_none() {
                        candidate = Some(EventualAlignment::Candidate { n, m, checked });
                    }
                }
                Commensurability::MismatchAt { .. } => {}
            }
        }
    }
    Ok(candidate.unwrap_or(EventualAlignment::NotFound { window }))
}

/// Text-format parse error with a 1-indexed line number.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

fn parse_stage_line(rest: &str, line: usize) -> std::result::Result<Stage, ParseError> {
    let err = |message: String| ParseError { line, message };
    let mut r = None;
    let mut spacer = None;
    for field in rest.split_whitespace() {
        if let Some(value) = field.strip_prefix("r=") {
            let parsed: u32 = value
                .parse()
                .map_err(|_| err(format!("invalid cutting value `{value}`")))?;
            r = Some(parsed);
        } else if let Some(value) = field.strip_prefix("s=") {
            let letters = value
                .split(',')
                .map(|part| {
                    part.trim()
                        .parse::<u32>()
                        .map_err(|_| err(format!("invalid spacer value `{part}`")))
                })
                .collect::<std::result::Result<Vec<_>, _>>()?;
            spacer = Some(FiniteWord::new(letters));
        } else {
            return Err(err(format!("unexpected field `{field}`")));
        }
    }
    let r = r.ok_or_else(|| err("stage line is missing r=".into()))?;
    let spacer = spacer.ok_or_else(|| err("stage line is missing s=".into()))?;
    Stage::new(r, spacer).map_err(|violation| err(violation.to_string()))
}

impl ParameterSpec {
    /// Parse the line-oriented spec format: `# comment` lines, section
    /// headers `preamble:` and `period:`, and stage lines
    /// `stage r=<int> s=<int>,<int>,..`. Stages before any header belong to
    /// the preamble.
    pub fn parse_str(text: &str) -> std::result::Result<ParameterSpec, ParseError> {
        #[derive(PartialEq)]
        enum Section {
            Preamble,
            Period,
        }
        let mut section = Section::Preamble;
        let mut seen_period = false;
        let mut preamble = Vec::new();
        let mut period = Vec::new();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if trimmed == "preamble:" {
                if section == Section::Period {
                    return Err(ParseError {
                        line,
                        message: "preamble: must come before period:".into(),
                    });
                }
                continue;
            }
            if trimmed == "period:" {
                if seen_period {
                    return Err(ParseError {
                        line,
                        message: "duplicate period: section".into(),
                    });
                }
                seen_period = true;
                section = Section::Period;
                continue;
            }
            if let Some(rest) = trimmed.strip_prefix("stage ") {
                let stage = parse_stage_line(rest, line)?;
                match section {
                    Section::Preamble => preamble.push(stage),
                    Section::Period => period.push(stage),
                }
                continue;
            }
            return Err(ParseError {
                line,
                message: format!("unrecognized line `{trimmed}`"),
            });
        }
        if seen_period && period.is_empty() {
            return Err(ParseError {
                line: text.lines().count(),
                message: "period: section has no stages".into(),
            });
        }
        if preamble.is_empty() && period.is_empty() {
            return Err(ParseError {
                line: 0,
                message: "no stages".into(),
            });
        }
        Ok(ParameterSpec {
            preamble,
            tail: if seen_period { Some(period) } else { None },
        })
    }

    /// Canonical text rendering; `parse_str` round-trips it.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if !self.preamble.is_empty() {
            out.push_str("preamble:\n");
            for stage in &self.preamble {
                out.push_str(&format!("{stage}\n"));
            }
        }
        if let Some(tail) = &self.tail {
            out.push_str("period:\n");
            for stage in tail {
                out.push_str(&format!("{stage}\n"));
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn stage(r: u32, s: &[u32]) -> Stage {
        Stage {
            r,
            spacer: FiniteWord::new(s),
        }
    }

    fn chacon() -> ParameterSpec {
        ParameterSpec::periodic(vec![stage(3, &[0, 1])]).unwrap()
    }

    fn mirror_chacon() -> ParameterSpec {
        ParameterSpec::periodic(vec![stage(3, &[1, 0])]).unwrap()
    }

    fn big(n: u64) -> BigUint {
        BigUint::from(n)
    }

    #[test]
    fn validate_examples() {
        assert!(chacon().validate().is_ok());
        let bad_len = ParameterSpec::periodic(vec![stage(2, &[0, 1])]).unwrap();
        assert_eq!(
            bad_len.validate().unwrap_err(),
            vec![(
                0,
                StageViolation::SpacerLength {
                    len: 2,
                    expected: 1
                }
            )]
        );
        let bad_r = ParameterSpec::periodic(vec![stage(1, &[])]).unwrap();
        assert!(matches!(
            bad_r.validate().unwrap_err()[0].1,
            StageViolation::CuttingTooSmall { r: 1 }
        ));
    }

    #[test]
    fn heights_examples() {
        let hs = heights(&chacon(), 3).unwrap();
        assert_eq!(hs.values(), &[big(1), big(4), big(13), big(40)]);
        assert_eq!(heights(&chacon(), 0).unwrap().values(), &[big(1)]);
        let doubling = ParameterSpec::periodic(vec![stage(2, &[0])]).unwrap();
        assert_eq!(
            heights(&doubling, 2).unwrap().values(),
            &[big(1), big(2), big(4)]
        );
        let limited = ParameterSpec::preamble_only(vec![stage(3, &[0, 1])]);
        assert!(matches!(
            heights(&limited, 2),
            Err(Error::DepthLimited {
                stage: 1,
                available: 1
            })
        ));
    }

    #[test]
    fn finite_measure_examples() {
        let report = finite_measure_check(&chacon(), 3).unwrap();
        assert!(report.holds);
        assert_eq!(report.terms, vec![(1, big(4)), (1, big(13)), (1, big(40))]);
        let zero = ParameterSpec::periodic(vec![stage(3, &[0, 0])]).unwrap();
        let report = finite_measure_check(&zero, 4).unwrap();
        assert!(report.holds);
        assert!(report.terms.iter().all(|(sigma, _)| *sigma == 0));
        assert!(report.sketch().contains("geometric"));
        assert!(
            finite_measure_check(&ParameterSpec::preamble_only(vec![stage(2, &[1])]), 2).is_err()
        );
    }

    #[test]
    fn bounds_examples() {
        assert_eq!(
            bounds(&chacon()).unwrap(),
            Bounds {
                r: 3,
                s: 1,
                certified: true
            }
        );
        let mixed = ParameterSpec::periodic(vec![stage(2, &[5]), stage(4, &[0, 0, 2])]).unwrap();
        assert_eq!(
            bounds(&mixed).unwrap(),
            Bounds {
                r: 4,
                s: 5,
                certified: true
            }
        );
        let prefix = ParameterSpec::preamble_only(vec![stage(2, &[5])]);
        assert!(!bounds(&prefix).unwrap().certified);
        assert!(bounds(&ParameterSpec::preamble_only(vec![])).is_err());
    }

    #[test]
    fn commensurate_examples() {
        assert_eq!(
            commensurate(&chacon(), &mirror_chacon(), 8),
            Commensurability::Always
        );
        let heavier = ParameterSpec::periodic(vec![stage(3, &[1, 1])]).unwrap();
        assert_eq!(
            commensurate(&chacon(), &heavier, 8),
            Commensurability::MismatchAt { stage: 0 }
        );
        assert_eq!(
            commensurate(&chacon(), &chacon(), 8),
            Commensurability::Always
        );
        let prefix = ParameterSpec::preamble_only(vec![stage(3, &[0, 1])]);
        assert!(matches!(
            commensurate(&chacon(), &prefix, 8),
            Commensurability::Unknown { checked: 1 }
        ));
    }

    #[test]
    fn eventually_commensurate_examples() {
        assert_eq!(
            eventually_commensurate(&chacon(), &chacon(), 20).unwrap(),
            EventualAlignment::Found { n: 0, m: 0 }
        );
        // h_1 of the padded spec is 2 + 2 = 4 = h_1 of Chacon
        let padded =
            ParameterSpec::new(vec![stage(2, &[2])], Some(vec![stage(3, &[0, 1])])).unwrap();
        assert_eq!(
            eventually_commensurate(&chacon(), &padded, 20).unwrap(),
            EventualAlignment::Found { n: 1, m: 1 }
        );
        let doubling = ParameterSpec::periodic(vec![stage(2, &[0])]).unwrap();
        assert_eq!(
            eventually_commensurate(&chacon(), &doubling, 20).unwrap(),
            EventualAlignment::NotFound { window: 20 }
        );
    }

    #[test]
    fn commensurate_specs_have_equal_heights() {
        let depth = 12;
        let ha = heights(&chacon(), depth).unwrap();
        let hb = heights(&mirror_chacon(), depth).unwrap();
        assert_eq!(ha, hb);
    }

    proptest! {
        /// Rotating each spacer word preserves the sums, so the heights
        /// must coincide at every depth.
        #[test]
        fn rotated_spacers_stay_commensurate_with_equal_heights(spec in spec_strategy()) {
            let rotate = |st: &Stage| {
                let mut letters = st.spacer.letters().to_vec();
                letters.rotate_left(1);
                Stage { r: st.r, spacer: FiniteWord::new(letters) }
            };
            let rotated = ParameterSpec::new(
                spec.preamble().iter().map(rotate).collect(),
                spec.tail().map(|t| t.iter().map(rotate).collect()),
            )
            .unwrap();
            prop_assert_eq!(commensurate(&spec, &rotated, 16), Commensurability::Always);
            prop_assert_eq!(heights(&spec, 10).unwrap(), heights(&rotated, 10).unwrap());
        }
    }

    #[test]
    fn representation_changes_do_not_affect_bounds_or_commensurability() {
        let spec = ParameterSpec::new(
            vec![stage(2, &[3])],
            Some(vec![stage(3, &[0, 1]), stage(4, &[2, 0, 1])]),
        )
        .unwrap();
        for copies in 1..=3 {
            let unrolled = spec.unroll(copies);
            assert_eq!(bounds(&spec).unwrap(), bounds(&unrolled).unwrap());
            assert_eq!(commensurate(&spec, &unrolled, 16), Commensurability::Always);
            assert_eq!(spec.same_sequence(&unrolled), Some(true));
        }
    }

    #[test]
    fn shift_drops_stages() {
        let spec = ParameterSpec::new(
            vec![stage(2, &[3]), stage(2, &[4])],
            Some(vec![stage(3, &[0, 1]), stage(4, &[2, 0, 1])]),
        )
        .unwrap();
        for k in 0..7 {
            let shifted = spec.shift(k).unwrap();
            for n in 0..10 {
                assert_eq!(shifted.stage(n), spec.stage(n + k), "k={k} n={n}");
            }
        }
    }

    #[test]
    fn parse_and_print_chacon() {
        let parsed = ParameterSpec::parse_str("period:\nstage r=3 s=0,1\n").unwrap();
        assert_eq!(parsed, chacon());
        assert_eq!(parsed.to_text(), "period:\nstage r=3 s=0,1\n");
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = ParameterSpec::parse_str("period:\nstage r=3 s=0\n").unwrap_err();
        assert_eq!(err.line, 2);
        let err = ParameterSpec::parse_str("").unwrap_err();
        assert_eq!(err.message, "no stages");
        let err = ParameterSpec::parse_str("junk\n").unwrap_err();
        assert_eq!(err.line, 1);
        let err = ParameterSpec::parse_str("period:\nstage r=x s=0\n").unwrap_err();
        assert!(err.message.contains("cutting value"));
    }

    prop_compose! {
        fn stage_strategy()(r in 2u32..=4)(
            r in Just(r),
            letters in prop::collection::vec(0u32..=3, (r - 1) as usize..=(r - 1) as usize),
        ) -> Stage {
            Stage { r, spacer: FiniteWord::new(letters) }
        }
    }

    prop_compose! {
        fn spec_strategy()(
            preamble in prop::collection::vec(stage_strategy(), 0..3),
            tail in prop::collection::vec(stage_strategy(), 1..3),
        ) -> ParameterSpec {
            ParameterSpec::new(preamble, Some(tail)).unwrap()
        }
    }

    proptest! {
        #[test]
        fn parse_print_round_trip(spec in spec_strategy()) {
            let reparsed = ParameterSpec::parse_str(&spec.to_text()).unwrap();
            prop_assert_eq!(reparsed, spec);
        }

        #[test]
        fn heights_strictly_increase(spec in spec_strategy()) {
            let hs = heights(&spec, 8).unwrap();
            for n in 0..8 {
                prop_assert!(hs.h(n) < hs.h(n + 1));
            }
        }
    }
}
