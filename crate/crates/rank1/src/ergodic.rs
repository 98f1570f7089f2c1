//! The modular ergodicity criterion for powers of a rank-one transformation.
//!
//! For `d > 1`, the `d`-th power is ergodic iff for every `N` there are
//! `n ≥ N` and `i` with `h_N + s_n(i) ≢ 0 (mod d)`. For an eventually
//! periodic presentation the heights mod `d` are eventually periodic, so the
//! quantifier over all `N` reduces to the preperiod plus one cycle.

use crate::error::{Error, Result};
use crate::params::ParameterSpec;

/// A positive witness for one starting index: the spacer value at `(stage,
/// index)` breaks the congruence.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdWitness {
    /// The starting index `N`.
    pub start: usize,
    /// A stage `n ≥ N`.
    pub stage: usize,
    /// 1-indexed position in that stage's spacer word.
    pub index: usize,
    /// The spacer value, with `h_N + value ≢ 0 (mod d)`.
    pub value: u32,
}

/// A refutation: from stage `start` on, every spacer value `v` satisfies
/// `h_start + v ≡ 0 (mod d)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EdFailure {
    pub start: usize,
    /// `h_start mod d`.
    pub residue: u64,
}

/// Decision trace for one modulus, mechanically re-verifiable via
/// [`EdTrace::verify`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdTrace {
    pub d: u64,
    pub holds: bool,
    /// `h_N mod d` for `N = 0 .. checked` (preperiod plus one full cycle).
    pub residues: Vec<u64>,
    /// Index where the residue/stage-phase cycle begins.
    pub cycle_start: usize,
    pub cycle_len: usize,
    /// One witness per checked starting index (all of them when the
    /// criterion holds, the prefix before the failure otherwise).
    pub witnesses: Vec<EdWitness>,
    pub failure: Option<EdFailure>,
}

fn residue_step(h: u64, stage_r: u32, spacer_sum: u64, d: u64) -> u64 {
    ((h as u128 * stage_r as u128 + spacer_sum as u128) % d as u128) as u64
}

/// `h_N mod d` for `N = 0 .. count`.
pub fn height_residues(spec: &ParameterSpec, d: u64, count: usize) -> Result<Vec<u64>> {
    if d < 2 {
        return Err(Error::InvalidModulus { d });
    }
    spec.require_valid()?;
    let mut residues = Vec::with_capacity(count + 1);
    let mut h = 1 % d;
    residues.push(h);
    for n in 0..count {
        let stage = spec.stage(n).ok_or(Error::DepthLimited {
            stage: n,
            available: spec.preamble().len(),
        })?;
        h = residue_step(h, stage.r, stage.spacer_sum(), d);
        residues.push(h);
    }
    Ok(residues)
}

/// The least `(n, i)` with `n ≥ start` whose spacer value breaks the
/// congruence for residue `h`. Scanning one full period past
/// `max(start, preamble)` exhausts the value set of stages `≥ start`.
fn find_witness(spec: &ParameterSpec, start: usize, h: u64, d: u64) -> Option<(usize, usize, u32)> {
    let scan_end = start.max(spec.preamble().len()) + spec.period().unwrap_or(0);
    for n in start..=scan_end {
        let stage = spec.stage(n)?;
        for i in 1..=stage.spacer.len() {
            let v = stage.spacer.letter(i);
            if (h + v as u64) % d != 0 {
                return Some((n, i, v));
            }
        }
    }
    None
}

/// Exact decision of the criterion for modulus `d` on a periodic-tail spec.
pub fn ed_holds(spec: &ParameterSpec, d: u64) -> Result<EdTrace> {
    if d < 2 {
        return Err(Error::InvalidModulus { d });
    }
    spec.require_valid()?;
    let period = spec.period().ok_or(Error::DepthLimited {
        stage: spec.preamble().len(),
        available: spec.preamble().len(),
    })?;
    let preamble = spec.preamble().len();

    // walk h mod d with cycle detection on (residue, tail phase)
    let mut residues = vec![1 % d];
    let mut seen: Vec<((u64, usize), usize)> = Vec::new();
    let (cycle_start, cycle_len) = loop {
        let n = residues.len() - 1;
        if n >= preamble {
            let state = (residues[n], (n - preamble) % period);
            if let Some(&(_, first)) = seen.iter().find(|(s, _)| *s == state) {
                break (first, n - first);
            }
            seen.push((state, n));
        }
        let stage = spec.stage(n).unwrap();
        residues.push(residue_step(residues[n], stage.r, stage.spacer_sum(), d));
    };
    let checked = cycle_start + cycle_len;
    residues.truncate(checked + 1);

    let mut witnesses = Vec::with_capacity(checked);
    let mut failure = None;
    for (start, &residue) in residues.iter().enumerate().take(checked) {
        match find_witness(spec, start, residue, d) {
            Some((stage, index, value)) => witnesses.push(EdWitness {
                start,
                stage,
                index,
                value,
            }),
            None => {
                failure = Some(EdFailure { start, residue });
                break;
            }
        }
    }
    Ok(EdTrace {
        d,
        holds: failure.is_none(),
        residues,
        cycle_start,
        cycle_len,
        witnesses,
        failure,
    })
}

impl EdTrace {
    /// Recompute the trace's arithmetic directly from the spec: residues,
    /// each witness congruence, and (for a failure) that no spacer value at
    /// any later stage escapes the congruence.
    pub fn verify(&self, spec: &ParameterSpec) -> bool {
        let Ok(residues) = height_residues(spec, self.d, self.residues.len() - 1) else {
            return false;
        };
        if residues != self.residues {
            return false;
        }
        for w in &self.witnesses {
            let Some(stage) = spec.stage(w.stage) else {
                return false;
            };
            if w.stage < w.start
                || w.index < 1
                || w.index > stage.spacer.len()
                || stage.spacer.letter(w.index) != w.value
                || (self.residues[w.start] + w.value as u64) % self.d == 0
            {
                return false;
            }
        }
        if let Some(f) = &self.failure {
            if self.residues[f.start] != f.residue {
                return false;
            }
            if find_witness(spec, f.start, f.residue, self.d).is_some() {
                return false;
            }
        }
        true
    }
}

/// Traces for every `2 ≤ d ≤ bound`; the aggregate holds iff each does.
pub fn totally_ergodic_up_to(spec: &ParameterSpec, bound: u64) -> Result<Vec<EdTrace>> {
    (2..=bound).map(|d| ed_holds(spec, d)).collect()
}
