//! The verdict engine: isomorphism, non-isomorphism, disjointness, and
//! minimal self-joinings for bounded, periodic-tail presentations.
//!
//! Verdicts are three-valued. The engine's rules are sufficient conditions
//! with specific hypotheses, so a failed hypothesis never flips into a
//! definite answer unless the rule is a characterization. Every definite
//! answer carries witnesses that re-verify through the word calculus and
//! modular arithmetic alone, without re-running the engine.

use std::fmt;

use thiserror::Error as ThisError;

use crate::ergodic::{ed_holds, totally_ergodic_up_to, EdTrace};
use crate::error::Error;
use crate::generate::{
    canonical_analysis, certified_degenerate, expand_with_cap, fitting_depth,
    incompatibility_telescope, merge_stages, IncompatibilityCertificate, TelescopeCertificate,
    DEFAULT_EXPANSION_CAP,
};
use crate::params::{
    bounds, commensurate, eventually_commensurate, lcm, Commensurability, EventualAlignment,
    ParameterSpec, Stage,
};
use crate::words::{only_two_occurrences, FiniteWord};

/// Three-valued decision outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Answer {
    Yes,
    No,
    DepthLimited,
}

impl Answer {
    /// Process exit code contract: 0 = Yes, 1 = No, 2 = DepthLimited.
    pub fn exit_code(self) -> u8 {
        match self {
            Answer::Yes => 0,
            Answer::No => 1,
            Answer::DepthLimited => 2,
        }
    }
}

impl fmt::Display for Answer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Answer::Yes => "Yes",
            Answer::No => "No",
            Answer::DepthLimited => "DepthLimited",
        })
    }
}

/// Which decision rule fired. The display names are the stable tokens used
/// in machine-readable output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[allow(non_camel_case_types)]
pub enum Rule {
    Cor2_3,
    Thm3_1,
    Thm3_2,
    Thm3_2_dprime,
    Cor3_5_1,
    Cor3_5_2,
    Cor3_5_2prime,
    Thm4_1,
    Thm4_1_dprime,
    Cor4_6,
    Thm5_1,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Rule::Cor2_3 => "Cor2.3",
            Rule::Thm3_1 => "Thm3.1",
            Rule::Thm3_2 => "Thm3.2",
            Rule::Thm3_2_dprime => "Thm3.2-d'",
            Rule::Cor3_5_1 => "Cor3.5-1",
            Rule::Cor3_5_2 => "Cor3.5-2",
            Rule::Cor3_5_2prime => "Cor3.5-2'",
            Rule::Thm4_1 => "Thm4.1",
            Rule::Thm4_1_dprime => "Thm4.1-d'",
            Rule::Cor4_6 => "Cor4.6",
            Rule::Thm5_1 => "Thm5.1",
        })
    }
}

/// A named hypothesis that a rule needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Condition {
    /// (a) bounded cutting values.
    CuttingBound,
    /// (b) bounded spacer values.
    SpacerBound,
    /// (c) spacer words with only the two demonstrated self-occurrences.
    SpacerSelfOverlap,
    /// (d') ergodic powers up to the spacer bound.
    PartialTotalErgodicity,
    /// The supplied parameters must be the canonical ones.
    Canonicality,
    /// The limit word must not be simply built from anything.
    NonDegeneracy,
    /// A periodic tail is needed to close the quantifiers.
    PeriodicTail,
    /// Stagewise equal cutting values and spacer sums.
    Commensurability,
    /// A height alignment for the eventually commensurate route.
    EventualCommensurability,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Condition::CuttingBound => "a",
            Condition::SpacerBound => "b",
            Condition::SpacerSelfOverlap => "c",
            Condition::PartialTotalErgodicity => "d'",
            Condition::Canonicality => "canonicality",
            Condition::NonDegeneracy => "non-degeneracy",
            Condition::PeriodicTail => "periodic-tail",
            Condition::Commensurability => "commensurability",
            Condition::EventualCommensurability => "eventual-commensurability",
        })
    }
}

/// Structured evidence attached to a verdict.
#[derive(Debug, Clone)]
pub enum Witness {
    /// Spacer words coincide from this stage on. When an [`Witness::Alignment`]
    /// witness is present, the stage counts from the aligned offsets.
    AgreeFrom { stage: usize },
    /// Spacer words differ at this stage (counted like [`Witness::AgreeFrom`]),
    /// recurring with this period.
    DifferAt { stage: usize, period: usize },
    /// Height alignment offsets for the eventually commensurate route.
    Alignment { n: usize, m: usize },
    /// Uniform bounds on the presentation.
    Bounds { r: u32, s: u32 },
    /// Bounds before and after stage merging; merging at most three stages
    /// cubes the cutting bound and preserves the spacer bound.
    BoundPropagation {
        r_before: u32,
        s_before: u32,
        r_after: u32,
        s_after: u32,
    },
    /// A verified incompatibility between merged spacer words.
    Incompatibility(IncompatibilityCertificate),
    /// A power-ergodicity trace.
    Ed(EdTrace),
    /// Both systems fail the criterion at `d`: they share a cyclic factor.
    EdBothFail {
        d: u64,
        left: EdTrace,
        right: EdTrace,
    },
    /// A spacer word verified to have only the two demonstrated
    /// self-occurrences.
    TwoOccurrences { stage: usize, spacer: FiniteWord },
    /// A hypothesis that could not be established, with detail.
    Unmet {
        condition: Condition,
        detail: String,
    },
    /// The deepest word is simply built from a visible word.
    DegenerateHint { base_len: usize },
    /// The supplied parameters equal the canonical ones at this depth.
    CanonicalAtDepth { depth: usize },
}

/// A three-valued decision with the rule that fired and re-verifiable
/// evidence.
#[derive(Debug, Clone)]
pub struct Verdict {
    pub answer: Answer,
    pub rule: Option<Rule>,
    pub witnesses: Vec<Witness>,
    /// Expansion depth the analysis actually used.
    pub depth: usize,
}

impl Verdict {
    fn new(answer: Answer, rule: Option<Rule>, witnesses: Vec<Witness>, depth: usize) -> Self {
        Verdict {
            answer,
            rule,
            witnesses,
            depth,
        }
    }

    pub fn agree_from(&self) -> Option<usize> {
        self.witnesses.iter().find_map(|w| match w {
            Witness::AgreeFrom { stage } => Some(*stage),
            _ => None,
        })
    }

    pub fn certificates(&self) -> impl Iterator<Item = &IncompatibilityCertificate> {
        self.witnesses.iter().filter_map(|w| match w {
            Witness::Incompatibility(c) => Some(c),
            _ => None,
        })
    }

    pub fn ed_traces(&self) -> impl Iterator<Item = &EdTrace> {
        self.witnesses.iter().filter_map(|w| match w {
            Witness::Ed(t) => Some(t),
            _ => None,
        })
    }

    pub fn unmet_conditions(&self) -> impl Iterator<Item = Condition> + '_ {
        self.witnesses.iter().filter_map(|w| match w {
            Witness::Unmet { condition, .. } => Some(*condition),
            _ => None,
        })
    }
}

/// Engine settings. The defaults keep every check on the worked examples
/// well under a second.
#[derive(Debug, Clone, Copy)]
pub struct Options {
    /// Target expansion/analysis depth.
    pub depth: usize,
    /// Search window for height alignments.
    pub window: usize,
    /// Cap on materialized word length.
    pub cap: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            depth: 12,
            window: 20,
            cap: DEFAULT_EXPANSION_CAP,
        }
    }
}

/// Precondition failures of the decision layer.
#[derive(Debug, Clone, PartialEq, Eq, ThisError)]
pub enum DecideError {
    #[error("parameters are not commensurate: mismatch at stage {stage}")]
    NotCommensurate { stage: usize },
    #[error("degenerate construction: all spacer values from stage {stage} on equal {gap}")]
    Degenerate { stage: usize, gap: u32 },
    #[error("stage {stage} is not canonical at depth {depth}: a simply-built pair spans it")]
    NotCanonicalAtDepth { stage: usize, depth: usize },
    #[error(transparent)]
    Core(#[from] Error),
}

type DecideResult = Result<Verdict, DecideError>;

fn depth_limited(witnesses: Vec<Witness>, depth: usize) -> Verdict {
    Verdict::new(Answer::DepthLimited, None, witnesses, depth)
}

fn unmet(condition: Condition, detail: impl Into<String>) -> Witness {
    Witness::Unmet {
        condition,
        detail: detail.into(),
    }
}

/// Letters needed to reach the given level, for cap diagnostics.
fn letters_needed(spec: &ParameterSpec, depth: usize) -> u128 {
    crate::params::heights(spec, depth)
        .ok()
        .map(|h| u128::try_from(h.h(depth)).unwrap_or(u128::MAX))
        .unwrap_or(0)
}

/// Reject certified-degenerate specs and specs with a removable stage at
/// depth. Returns the analysis depth used.
fn canonical_guard(spec: &ParameterSpec, opts: &Options) -> Result<usize, DecideError> {
    if let Some((stage, gap)) = certified_degenerate(spec) {
        return Err(DecideError::Degenerate { stage, gap });
    }
    let depth = fitting_depth(spec, opts.depth.max(2), opts.cap)?;
    if depth < 2 {
        return Err(DecideError::Core(Error::CapExceeded {
            needed: letters_needed(spec, 2),
            cap: opts.cap,
        }));
    }
    let gen = expand_with_cap(spec, depth, opts.cap)?;
    let report = canonical_analysis(&gen)?;
    if let Some(&stage) = report.removable_stages.first() {
        return Err(DecideError::NotCanonicalAtDepth { stage, depth });
    }
    Ok(depth)
}

enum Agreement {
    From(usize),
    DifferRecurrently { stage: usize, period: usize },
}

/// Whether two periodic specs eventually agree stagewise, decided over one
/// aligned common period.
fn eventual_agreement(a: &ParameterSpec, b: &ParameterSpec) -> Agreement {
    let start = a.preamble().len().max(b.preamble().len());
    let period = lcm(a.period().unwrap(), b.period().unwrap());
    for n in start..start + period {
        if a.stage(n) != b.stage(n) {
            return Agreement::DifferRecurrently { stage: n, period };
        }
    }
    let mut from = start;
    while from > 0 && a.stage(from - 1) == b.stage(from - 1) {
        from -= 1;
    }
    Agreement::From(from)
}

/// Run the telescope and re-verify the non-isomorphism hypotheses on the
/// merged pair: commensurability, bounds, and a recurrent certificate.
fn verified_telescope(
    a: &ParameterSpec,
    b: &ParameterSpec,
    opts: &Options,
) -> Result<(TelescopeCertificate, Vec<Witness>), DecideError> {
    let tele = incompatibility_telescope(a, b, opts.depth)?;
    let merged_ok = matches!(
        commensurate(&tele.merged_a, &tele.merged_b, opts.depth),
        Commensurability::Always
    );
    if !merged_ok || !tele.recurrent_certificate() {
        return Err(DecideError::Core(Error::CertificateFailed { stage: 0 }));
    }
    let mut witnesses = vec![Witness::BoundPropagation {
        r_before: tele.bounds_before.0,
        s_before: tele.bounds_before.1,
        r_after: tele.bounds_after.0,
        s_after: tele.bounds_after.1,
    }];
    witnesses.extend(
        tele.certificates
            .iter()
            .cloned()
            .map(Witness::Incompatibility),
    );
    Ok((tele, witnesses))
}

/// Isomorphism for commensurate, canonically-bounded-at-depth, non-degenerate
/// pairs: Yes when the spacer words eventually coincide (a replacement
/// scheme exists), No when they differ recurrently (the telescoped pair
/// carries verified incompatibilities), DepthLimited otherwise.
pub fn check_isomorphic(a: &ParameterSpec, b: &ParameterSpec, opts: &Options) -> DecideResult {
    a.require_valid()?;
    b.require_valid()?;
    match commensurate(a, b, opts.depth) {
        Commensurability::MismatchAt { stage } => {
            return Err(DecideError::NotCommensurate { stage })
        }
        Commensurability::Unknown { checked } => {
            return Ok(depth_limited(
                vec![unmet(
                    Condition::Commensurability,
                    format!("agreement checked to stage {checked} without a periodic certificate"),
                )],
                opts.depth,
            ))
        }
        Commensurability::Always => {}
    }
    let depth_a = canonical_guard(a, opts)?;
    let depth_b = canonical_guard(b, opts)?;
    let depth = depth_a.min(depth_b);
    match eventual_agreement(a, b) {
        Agreement::From(stage) => Ok(Verdict::new(
            Answer::Yes,
            Some(Rule::Cor2_3),
            vec![Witness::AgreeFrom { stage }],
            depth,
        )),
        Agreement::DifferRecurrently { stage, period } => {
            let (_, mut witnesses) = verified_telescope(a, b, opts)?;
            witnesses.insert(0, Witness::DifferAt { stage, period });
            Ok(Verdict::new(
                Answer::No,
                Some(Rule::Thm3_1),
                witnesses,
                depth,
            ))
        }
    }
}

/// Isomorphism without assuming commensurability: search for a height
/// alignment and re-run the commensurate logic on the shifted pair. Finding
/// no alignment within the window proves nothing and stays DepthLimited.
pub fn check_isomorphic_general(
    a: &ParameterSpec,
    b: &ParameterSpec,
    opts: &Options,
) -> DecideResult {
    a.require_valid()?;
    b.require_valid()?;
    if let Commensurability::Always = commensurate(a, b, opts.depth) {
        return check_isomorphic(a, b, opts);
    }
    match eventually_commensurate(a, b, opts.window)? {
        EventualAlignment::Found { n, m } => {
            let shifted_a = a.shift(n)?;
            let shifted_b = b.shift(m)?;
            let depth_a = canonical_guard(a, opts)?;
            let depth_b = canonical_guard(b, opts)?;
            let depth = depth_a.min(depth_b);
            match eventual_agreement(&shifted_a, &shifted_b) {
                Agreement::From(stage) => Ok(Verdict::new(
                    Answer::Yes,
                    Some(Rule::Cor2_3),
                    vec![Witness::Alignment { n, m }, Witness::AgreeFrom { stage }],
                    depth,
                )),
                Agreement::DifferRecurrently { stage, period } => {
                    let (_, mut witnesses) = verified_telescope(&shifted_a, &shifted_b, opts)?;
                    witnesses.insert(0, Witness::DifferAt { stage, period });
                    witnesses.insert(0, Witness::Alignment { n, m });
                    Ok(Verdict::new(
                        Answer::No,
                        Some(Rule::Thm5_1),
                        witnesses,
                        depth,
                    ))
                }
            }
        }
        EventualAlignment::Candidate { n, m, checked } => Ok(depth_limited(
            vec![
                Witness::Alignment { n, m },
                unmet(
                    Condition::EventualCommensurability,
                    format!("alignment ({n}, {m}) consistent to stage {checked} but uncertified"),
                ),
            ],
            opts.depth,
        )),
        EventualAlignment::NotFound { window } => Ok(depth_limited(
            vec![unmet(
                Condition::EventualCommensurability,
                format!("no height alignment within window {window}; this proves nothing"),
            )],
            opts.depth,
        )),
    }
}

/// Disjointness for commensurate, canonically-bounded-at-depth pairs. Yes
/// needs recurrently differing spacers plus, for every `1 < d ≤ S`, an
/// ergodic `d`-th power on at least one side; eventual agreement or a shared
/// non-ergodic power yields No.
pub fn check_disjoint(a: &ParameterSpec, b: &ParameterSpec, opts: &Options) -> DecideResult {
    a.require_valid()?;
    b.require_valid()?;
    match commensurate(a, b, opts.depth) {
        Commensurability::MismatchAt { stage } => {
            return Err(DecideError::NotCommensurate { stage })
        }
        Commensurability::Unknown { checked } => {
            return Ok(depth_limited(
                vec![unmet(
                    Condition::Commensurability,
                    format!("agreement checked to stage {checked} without a periodic certificate"),
                )],
                opts.depth,
            ))
        }
        Commensurability::Always => {}
    }
    let depth_a = canonical_guard(a, opts)?;
    let depth_b = canonical_guard(b, opts)?;
    let depth = depth_a.min(depth_b);
    match eventual_agreement(a, b) {
        Agreement::From(stage) => {
            // eventually equal parameters are isomorphic, never disjoint
            Ok(Verdict::new(
                Answer::No,
                Some(Rule::Cor3_5_2),
                vec![Witness::AgreeFrom { stage }],
                depth,
            ))
        }
        Agreement::DifferRecurrently { stage, period } => {
            let bounds_a = bounds(a)?;
            let bounds_b = bounds(b)?;
            let spacer_bound = bounds_a.s.max(bounds_b.s) as u64;
            let mut witnesses = vec![
                Witness::DifferAt { stage, period },
                Witness::Bounds {
                    r: bounds_a.r.max(bounds_b.r),
                    s: spacer_bound as u32,
                },
            ];
            for d in 2..=spacer_bound {
                let left = ed_holds(a, d)?;
                let right = ed_holds(b, d)?;
                if left.holds {
                    witnesses.push(Witness::Ed(left));
                } else if right.holds {
                    witnesses.push(Witness::Ed(right));
                } else {
                    // both powers non-ergodic: common cyclic factor of order d
                    witnesses.push(Witness::EdBothFail { d, left, right });
                    return Ok(Verdict::new(
                        Answer::No,
                        Some(Rule::Cor3_5_2prime),
                        witnesses,
                        depth,
                    ));
                }
            }
            let (_, tele_witnesses) = verified_telescope(a, b, opts)?;
            witnesses.extend(tele_witnesses);
            Ok(Verdict::new(
                Answer::Yes,
                Some(Rule::Cor3_5_2prime),
                witnesses,
                depth,
            ))
        }
    }
}

fn distinct_stages(spec: &ParameterSpec) -> Vec<(usize, &Stage)> {
    let mut seen: Vec<&Stage> = Vec::new();
    let mut out = Vec::new();
    for (i, stage) in spec.presented_stages() {
        if !seen.contains(&stage) {
            seen.push(stage);
            out.push((i, stage));
        }
    }
    out
}

/// Sufficient conditions for minimal self-joinings of all orders on the
/// supplied presentation: bounds, spacer words with only the demonstrated
/// self-occurrences, and ergodic powers up to the spacer bound. Failures
/// name the condition and stay DepthLimited; this rule never answers No.
pub fn check_msj(spec: &ParameterSpec, opts: &Options) -> DecideResult {
    spec.require_valid()?;
    if !spec.is_periodic() {
        return Ok(depth_limited(
            vec![unmet(
                Condition::PeriodicTail,
                "the all-stages quantifiers need a periodic tail",
            )],
            opts.depth,
        ));
    }
    let bounds = bounds(spec)?;
    let mut witnesses = vec![Witness::Bounds {
        r: bounds.r,
        s: bounds.s,
    }];
    let mut failures = Vec::new();
    for (stage_index, stage) in distinct_stages(spec) {
        if only_two_occurrences(&stage.spacer)? {
            witnesses.push(Witness::TwoOccurrences {
                stage: stage_index,
                spacer: stage.spacer.clone(),
            });
        } else {
            failures.push(unmet(
                Condition::SpacerSelfOverlap,
                format!(
                    "spacer ({}) at stage {stage_index} has a hidden self-occurrence",
                    stage.spacer
                ),
            ));
        }
    }
    for trace in totally_ergodic_up_to(spec, bounds.s as u64)? {
        if trace.holds {
            witnesses.push(Witness::Ed(trace));
        } else {
            failures.push(unmet(
                Condition::PartialTotalErgodicity,
                format!("power {} is not ergodic", trace.d),
            ));
            witnesses.push(Witness::Ed(trace));
        }
    }
    if failures.is_empty() {
        Ok(Verdict::new(
            Answer::Yes,
            Some(Rule::Thm4_1_dprime),
            witnesses,
            opts.depth,
        ))
    } else {
        witnesses.extend(failures);
        Ok(depth_limited(witnesses, opts.depth))
    }
}

/// The characterization rule's stride walk on a single periodic spec: merge
/// 2 stages where the next spacer word is non-constant, 3 otherwise. Returns
/// the merged presentation (preamble + cycle).
fn msj_stride_walk(spec: &ParameterSpec) -> Result<ParameterSpec, Error> {
    let period = spec.period().expect("caller ensures a periodic tail");
    let preamble = spec.preamble().len();
    let mut merged = Vec::new();
    let mut seen: Vec<(usize, usize)> = Vec::new();
    let mut n = 0usize;
    loop {
        if n >= preamble {
            let phase = (n - preamble) % period;
            if let Some(&(_, start)) = seen.iter().find(|(p, _)| *p == phase) {
                let tail = merged.split_off(start);
                return ParameterSpec::new(merged, Some(tail));
            }
            seen.push((phase, merged.len()));
        }
        let next = spec.stage(n + 1).expect("periodic spec has every stage");
        let stride = if next.spacer.is_constant() { 3 } else { 2 };
        merged.push(merge_stages(spec, n, n + stride)?);
        n += stride;
    }
}

/// The characterization route: minimal self-joinings iff non-rigid and
/// totally ergodic. Necessity is checked first (a failing power up to the
/// spacer bound answers No); sufficiency needs the supplied parameters to be
/// canonical at depth, after which the stride-merged presentation must pass
/// the self-overlap condition mechanically.
pub fn check_msj_ryzhikov(spec: &ParameterSpec, opts: &Options) -> DecideResult {
    spec.require_valid()?;
    if !spec.is_periodic() {
        return Ok(depth_limited(
            vec![unmet(
                Condition::PeriodicTail,
                "the all-stages quantifiers need a periodic tail",
            )],
            opts.depth,
        ));
    }
    let bounds_before = bounds(spec)?;
    // necessity: a non-ergodic power refutes minimal self-joinings, and for
    // non-degenerate periodic specs any failing modulus is ≤ the spacer bound
    let traces = totally_ergodic_up_to(spec, bounds_before.s as u64)?;
    if let Some(failing) = traces.iter().find(|t| !t.holds) {
        return Ok(Verdict::new(
            Answer::No,
            Some(Rule::Cor4_6),
            vec![Witness::Ed(failing.clone())],
            opts.depth,
        ));
    }
    if certified_degenerate(spec).is_some() {
        return Ok(depth_limited(
            vec![unmet(
                Condition::NonDegeneracy,
                "all spacer values eventually constant: the limit word is simply built",
            )],
            opts.depth,
        ));
    }
    let depth = fitting_depth(spec, opts.depth.max(2), opts.cap)?;
    if depth < 2 {
        return Err(DecideError::Core(Error::CapExceeded {
            needed: letters_needed(spec, 2),
            cap: opts.cap,
        }));
    }
    let gen = expand_with_cap(spec, depth, opts.cap)?;
    let report = canonical_analysis(&gen)?;
    if report.degenerate {
        let base_len = report.degenerate_base.as_ref().map_or(0, |b| b.len());
        return Ok(depth_limited(
            vec![
                Witness::DegenerateHint { base_len },
                unmet(
                    Condition::NonDegeneracy,
                    "the deepest word is simply built from a visible word",
                ),
            ],
            depth,
        ));
    }
    if !report.supplied_is_canonical() {
        let detail = match report.removable_stages.first() {
            Some(stage) => format!("stage {stage} is removable at depth {depth}"),
            None => format!("extra canonical members appear at depth {depth}"),
        };
        return Ok(depth_limited(
            vec![unmet(Condition::Canonicality, detail)],
            depth,
        ));
    }
    // canonical at depth and bounded: the non-rigidity proxy holds; merge
    // stages so the self-overlap condition can be checked mechanically
    let merged = msj_stride_walk(spec)?;
    let mut witnesses = vec![
        Witness::CanonicalAtDepth { depth },
        Witness::Bounds {
            r: bounds_before.r,
            s: bounds_before.s,
        },
    ];
    let merged_bounds = bounds(&merged)?;
    witnesses.push(Witness::BoundPropagation {
        r_before: bounds_before.r,
        s_before: bounds_before.s,
        r_after: merged_bounds.r,
        s_after: merged_bounds.s,
    });
    for (stage_index, stage) in distinct_stages(&merged) {
        if only_two_occurrences(&stage.spacer)? {
            witnesses.push(Witness::TwoOccurrences {
                stage: stage_index,
                spacer: stage.spacer.clone(),
            });
        } else {
            witnesses.push(unmet(
                Condition::SpacerSelfOverlap,
                format!(
                    "merged stage {stage_index} has a hidden self-occurrence despite \
                     canonical-at-depth parameters; deeper analysis may refute canonicality"
                ),
            ));
            return Ok(depth_limited(witnesses, depth));
        }
    }
    witnesses.extend(traces.into_iter().map(Witness::Ed));
    Ok(Verdict::new(
        Answer::Yes,
        Some(Rule::Cor4_6),
        witnesses,
        depth,
    ))
}

/// Isomorphism driver: the commensurate route, falling through to the
/// eventually-commensurate route when the parameters are not commensurate.
pub fn isomorphic(a: &ParameterSpec, b: &ParameterSpec, opts: &Options) -> DecideResult {
    match check_isomorphic(a, b, opts) {
        Err(DecideError::NotCommensurate { .. }) => check_isomorphic_general(a, b, opts),
        other => other,
    }
}

/// Minimal-self-joinings driver: the sufficient conditions first, then the
/// characterization for a definite answer; otherwise report the conditions
/// that failed.
pub fn msj(spec: &ParameterSpec, opts: &Options) -> DecideResult {
    let direct = check_msj(spec, opts)?;
    if direct.answer == Answer::Yes {
        return Ok(direct);
    }
    let ryzhikov = check_msj_ryzhikov(spec, opts)?;
    if ryzhikov.answer != Answer::DepthLimited {
        return Ok(ryzhikov);
    }
    Ok(direct)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::words::incompatible;

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

    /// Chacon-like spec for a 0/1 sequence: spacer (0,1) where the bit is 1
    /// and (1,0) where it is 0.
    fn chacon_like(preamble_bits: &[u8], tail_bits: &[u8]) -> ParameterSpec {
        let to_stage = |&bit: &u8| {
            if bit == 1 {
                stage(3, &[0, 1])
            } else {
                stage(3, &[1, 0])
            }
        };
        ParameterSpec::new(
            preamble_bits.iter().map(to_stage).collect(),
            Some(tail_bits.iter().map(to_stage).collect()),
        )
        .unwrap()
    }

    #[test]
    fn eventually_agreeing_pairs_are_isomorphic() {
        let opts = Options::default();
        let a = chacon_like(&[1, 0, 0, 1, 0], &[1]);
        let b = chacon_like(&[0, 1, 1, 1, 1], &[1]);
        let verdict = check_isomorphic(&a, &b, &opts).unwrap();
        assert_eq!(verdict.answer, Answer::Yes);
        assert_eq!(verdict.rule, Some(Rule::Cor2_3));
        assert_eq!(verdict.agree_from(), Some(5));
    }

    #[test]
    fn self_isomorphism_has_trivial_witness() {
        let opts = Options::default();
        let verdict = check_isomorphic(&chacon(), &chacon(), &opts).unwrap();
        assert_eq!(verdict.answer, Answer::Yes);
        assert_eq!(verdict.agree_from(), Some(0));
    }

    #[test]
    fn chacon_vs_mirror_is_not_isomorphic() {
        let opts = Options::default();
        let verdict = check_isomorphic(&chacon(), &mirror_chacon(), &opts).unwrap();
        assert_eq!(verdict.answer, Answer::No);
        assert_eq!(verdict.rule, Some(Rule::Thm3_1));
        let certs: Vec<_> = verdict.certificates().collect();
        assert!(!certs.is_empty());
        for cert in certs {
            assert!(cert.verify());
            assert!(incompatible(&cert.s, &cert.t).unwrap());
        }
    }

    #[test]
    fn chacon_vs_mirror_is_disjoint() {
        let opts = Options::default();
        let verdict = check_disjoint(&chacon(), &mirror_chacon(), &opts).unwrap();
        assert_eq!(verdict.answer, Answer::Yes);
        assert_eq!(verdict.rule, Some(Rule::Cor3_5_2prime));
    }

    #[test]
    fn self_pair_is_not_disjoint() {
        let opts = Options::default();
        let verdict = check_disjoint(&chacon(), &chacon(), &opts).unwrap();
        assert_eq!(verdict.answer, Answer::No);
        assert_eq!(verdict.rule, Some(Rule::Cor3_5_2));
    }

    #[test]
    fn shared_cyclic_factor_blocks_disjointness() {
        // equal spacer sums, all values even: both fail the d = 2 criterion
        let opts = Options::default();
        let a = ParameterSpec::periodic(vec![stage(4, &[0, 2, 0])]).unwrap();
        let b = ParameterSpec::periodic(vec![stage(4, &[2, 0, 0])]).unwrap();
        let verdict = check_disjoint(&a, &b, &opts).unwrap();
        assert_eq!(verdict.answer, Answer::No);
        assert_eq!(verdict.rule, Some(Rule::Cor3_5_2prime));
        assert!(verdict
            .witnesses
            .iter()
            .any(|w| matches!(w, Witness::EdBothFail { d: 2, .. })));
    }

    #[test]
    fn non_commensurate_pairs_redirect() {
        let opts = Options::default();
        let doubling = ParameterSpec::periodic(vec![stage(2, &[0])]).unwrap();
        assert!(matches!(
            check_isomorphic(&chacon(), &doubling, &opts),
            Err(DecideError::NotCommensurate { stage: 0 })
        ));
        let verdict = isomorphic(&chacon(), &doubling, &opts).unwrap();
        assert_eq!(verdict.answer, Answer::DepthLimited);
    }

    #[test]
    fn alignment_route_matches_direct_verdicts() {
        let opts = Options::default();
        // Chacon with a padding stage whose height re-aligns at (1, 1)
        let padded =
            ParameterSpec::new(vec![stage(2, &[2])], Some(vec![stage(3, &[0, 1])])).unwrap();
        let verdict = check_isomorphic_general(&chacon(), &padded, &opts).unwrap();
        assert_eq!(verdict.answer, Answer::Yes);
        assert_eq!(verdict.rule, Some(Rule::Cor2_3));
        // same padding against the mirror tail: differs recurrently
        let padded_mirror =
            ParameterSpec::new(vec![stage(2, &[2])], Some(vec![stage(3, &[1, 0])])).unwrap();
        let verdict = check_isomorphic_general(&chacon(), &padded_mirror, &opts).unwrap();
        assert_eq!(verdict.answer, Answer::No);
        assert_eq!(verdict.rule, Some(Rule::Thm5_1));
        assert!(verdict.certificates().all(|c| c.verify()));
    }

    #[test]
    fn isomorphic_yes_implies_disjoint_no() {
        let opts = Options::default();
        let pairs = [
            (chacon(), chacon()),
            (chacon_like(&[1, 0], &[1]), chacon_like(&[0, 0], &[1])),
        ];
        for (a, b) in pairs {
            let iso = check_isomorphic(&a, &b, &opts).unwrap();
            let dis = check_disjoint(&a, &b, &opts).unwrap();
            if iso.answer == Answer::Yes {
                assert_eq!(dis.answer, Answer::No);
            }
        }
    }

    #[test]
    fn chacon_has_minimal_self_joinings() {
        let opts = Options::default();
        let verdict = check_msj(&chacon(), &opts).unwrap();
        assert_eq!(verdict.answer, Answer::Yes);
        assert_eq!(verdict.rule, Some(Rule::Thm4_1_dprime));
        let ryzhikov = check_msj_ryzhikov(&chacon(), &opts).unwrap();
        assert_eq!(ryzhikov.answer, Answer::Yes);
        assert_eq!(ryzhikov.rule, Some(Rule::Cor4_6));
    }

    #[test]
    fn constant_spacer_fails_condition_c() {
        let opts = Options::default();
        let spec = ParameterSpec::periodic(vec![stage(3, &[0, 0])]).unwrap();
        let verdict = msj(&spec, &opts).unwrap();
        assert_eq!(verdict.answer, Answer::DepthLimited);
        assert!(verdict
            .unmet_conditions()
            .any(|c| c == Condition::SpacerSelfOverlap));
    }

    #[test]
    fn even_spacer_doubling_is_refuted_by_necessity() {
        let opts = Options::default();
        let spec = ParameterSpec::periodic(vec![stage(2, &[2])]).unwrap();
        let verdict = msj(&spec, &opts).unwrap();
        assert_eq!(verdict.answer, Answer::No);
        assert_eq!(verdict.rule, Some(Rule::Cor4_6));
    }

    #[test]
    fn simply_built_chain_stays_depth_limited() {
        let opts = Options::default();
        let spec = ParameterSpec::periodic(vec![stage(2, &[1])]).unwrap();
        let verdict = msj(&spec, &opts).unwrap();
        assert_eq!(verdict.answer, Answer::DepthLimited);
    }

    #[test]
    fn msj_yes_implies_ryzhikov_yes() {
        let opts = Options::default();
        for spec in [chacon(), mirror_chacon(), chacon_like(&[], &[1, 0])] {
            let direct = check_msj(&spec, &opts).unwrap();
            if direct.answer == Answer::Yes {
                let ryzhikov = check_msj_ryzhikov(&spec, &opts).unwrap();
                assert_eq!(ryzhikov.answer, Answer::Yes);
            }
        }
    }

    #[test]
    fn stride_merging_rescues_single_letter_spacers() {
        // the r=2 stage's singleton spacer fails the self-overlap condition
        // directly, but the merged presentation passes it, so the
        // characterization still answers Yes
        let opts = Options::default();
        let spec = ParameterSpec::periodic(vec![stage(2, &[1]), stage(3, &[0, 1])]).unwrap();
        let direct = check_msj(&spec, &opts).unwrap();
        assert_eq!(direct.answer, Answer::DepthLimited);
        let verdict = msj(&spec, &opts).unwrap();
        assert_eq!(verdict.answer, Answer::Yes);
        assert_eq!(verdict.rule, Some(Rule::Cor4_6));
        // the merged spacer words in the witnesses re-verify
        for w in &verdict.witnesses {
            if let Witness::TwoOccurrences { spacer, .. } = w {
                assert!(crate::words::only_two_occurrences(spacer).unwrap());
            }
        }
    }

    #[test]
    fn degenerate_pairs_are_rejected() {
        let opts = Options::default();
        let a = ParameterSpec::periodic(vec![stage(3, &[0, 0])]).unwrap();
        let b = ParameterSpec::periodic(vec![stage(3, &[0, 0])]).unwrap();
        assert!(matches!(
            check_isomorphic(&a, &b, &opts),
            Err(DecideError::Degenerate { .. })
        ));
    }

    #[test]
    fn removable_stages_are_rejected_with_a_witness() {
        // the constant gaps over the first two stages make stage 1 removable
        let opts = Options::default();
        let spec = ParameterSpec::new(
            vec![stage(2, &[1]), stage(2, &[1])],
            Some(vec![stage(3, &[0, 1])]),
        )
        .unwrap();
        assert!(matches!(
            check_isomorphic(&spec, &spec, &opts),
            Err(DecideError::NotCanonicalAtDepth { stage: 1, .. })
        ));
    }

    #[test]
    fn verdicts_are_stable_under_deeper_analysis() {
        let a = chacon_like(&[1, 0, 1], &[1, 0]);
        let b = chacon_like(&[0, 0, 1], &[1, 0]);
        let shallow = check_isomorphic(
            &a,
            &b,
            &Options {
                depth: 6,
                ..Options::default()
            },
        )
        .unwrap();
        let deep = check_isomorphic(
            &a,
            &b,
            &Options {
                depth: 14,
                ..Options::default()
            },
        )
        .unwrap();
        assert_eq!(shallow.answer, deep.answer);
        assert_eq!(shallow.rule, deep.rule);
    }
}
