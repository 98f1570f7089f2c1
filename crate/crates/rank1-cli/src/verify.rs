//! Re-check a machine-format verdict from its witnesses alone: word-calculus
//! certificates directly, modular traces against the referenced spec files,
//! stage agreements and height alignments against the reloaded specs.

use std::collections::BTreeMap;
use std::fs;

use rank1::ergodic::{EdFailure, EdTrace, EdWitness};
use rank1::params::{certification_horizon, heights, ParameterSpec};
use rank1::words::{incompatible, only_two_occurrences, FiniteWord};

pub struct VerifyOutcome {
    pub checked: usize,
    pub failed: Vec<String>,
    pub lines: Vec<String>,
}

fn parse_word(text: &str) -> Option<FiniteWord> {
    let letters = text
        .split(',')
        .map(|p| p.trim().parse::<u32>().ok())
        .collect::<Option<Vec<_>>>()?;
    Some(FiniteWord::new(letters))
}

fn load_spec(map: &BTreeMap<String, String>, key: &str) -> Option<ParameterSpec> {
    let path = map.get(key)?;
    let text = fs::read_to_string(path).ok()?;
    ParameterSpec::parse_str(&text).ok()
}

fn rebuild_ed_trace(map: &BTreeMap<String, String>, idx: usize) -> Option<EdTrace> {
    let p = format!("ed.{idx}");
    let d: u64 = map.get(&format!("{p}.d"))?.parse().ok()?;
    let holds: bool = map.get(&format!("{p}.holds"))?.parse().ok()?;
    let residues: Vec<u64> = map
        .get(&format!("{p}.residues"))?
        .split(',')
        .map(|r| r.trim().parse().ok())
        .collect::<Option<Vec<_>>>()?;
    let cycle_start = map.get(&format!("{p}.cycle_start"))?.parse().ok()?;
    let cycle_len = map.get(&format!("{p}.cycle_len"))?.parse().ok()?;
    let count: usize = map.get(&format!("{p}.witnesses"))?.parse().ok()?;
    let mut witnesses = Vec::with_capacity(count);
    for j in 0..count {
        let q = format!("{p}.witness.{j}");
        witnesses.push(EdWitness {
            start: map.get(&format!("{q}.start"))?.parse().ok()?,
            stage: map.get(&format!("{q}.stage"))?.parse().ok()?,
            index: map.get(&format!("{q}.index"))?.parse().ok()?,
            value: map.get(&format!("{q}.value"))?.parse().ok()?,
        });
    }
    let failure = match map.get(&format!("{p}.failure.start")) {
        Some(start) => Some(EdFailure {
            start: start.parse().ok()?,
            residue: map.get(&format!("{p}.failure.residue"))?.parse().ok()?,
        }),
        None => None,
    };
    if holds != failure.is_none() {
        return None;
    }
    Some(EdTrace {
        d,
        holds,
        residues,
        cycle_start,
        cycle_len,
        witnesses,
        failure,
    })
}

/// Re-check every witness found in the `key: value` lines of `input`.
pub fn verify(input: &str) -> Result<VerifyOutcome, String> {
    let mut map = BTreeMap::new();
    for (i, raw) in input.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| format!("line {}: expected `key: value`", i + 1))?;
        map.insert(key.trim().to_string(), value.trim().to_string());
    }

    let spec = load_spec(&map, "spec");
    let spec_a = load_spec(&map, "spec_a").or_else(|| spec.clone());
    let spec_b = load_spec(&map, "spec_b");
    let loaded: Vec<&ParameterSpec> = [spec_a.as_ref(), spec_b.as_ref()]
        .into_iter()
        .flatten()
        .collect();

    let mut outcome = VerifyOutcome {
        checked: 0,
        failed: Vec::new(),
        lines: Vec::new(),
    };
    let check = |name: String, ok: bool, outcome: &mut VerifyOutcome| {
        outcome.checked += 1;
        outcome
            .lines
            .push(format!("{name}: {}", if ok { "ok" } else { "FAILED" }));
        if !ok {
            outcome.failed.push(name);
        }
    };

    // incompatibility certificates are self-contained
    for i in 0.. {
        let p = format!("certificate.{i}");
        let (Some(s), Some(t)) = (map.get(&format!("{p}.s")), map.get(&format!("{p}.t"))) else {
            break;
        };
        let ok = match (parse_word(s), parse_word(t)) {
            (Some(s), Some(t)) => {
                let r_ok = map
                    .get(&format!("{p}.r"))
                    .and_then(|r| r.parse::<usize>().ok())
                    .is_none_or(|r| r == s.len() + 1);
                r_ok && incompatible(&s, &t).unwrap_or(false)
            }
            _ => false,
        };
        check(p, ok, &mut outcome);
    }

    // spacer self-occurrence witnesses are self-contained
    for i in 0.. {
        let Some(spacer) = map.get(&format!("two_occ.{i}.spacer")) else {
            break;
        };
        let ok = parse_word(spacer)
            .map(|w| only_two_occurrences(&w).unwrap_or(false))
            .unwrap_or(false);
        check(format!("two_occ.{i}"), ok, &mut outcome);
    }

    // modular traces re-verify against whichever referenced spec they fit
    for i in 0.. {
        if !map.contains_key(&format!("ed.{i}.d")) {
            break;
        }
        let name = format!("ed.{i}");
        match rebuild_ed_trace(&map, i) {
            Some(trace) if !loaded.is_empty() => {
                let ok = loaded.iter().any(|s| trace.verify(s));
                check(name, ok, &mut outcome);
            }
            Some(_) => outcome.lines.push(format!("{name}: skipped (no spec)")),
            None => check(name, false, &mut outcome),
        }
    }

    // stage agreement / disagreement against the reloaded pair; when an
    // alignment witness is present the stage indices are relative to the
    // aligned offsets
    if let (Some(a), Some(b)) = (spec_a.as_ref(), spec_b.as_ref()) {
        let alignment = match (
            map.get("alignment.n").and_then(|v| v.parse::<usize>().ok()),
            map.get("alignment.m").and_then(|v| v.parse::<usize>().ok()),
        ) {
            (Some(n), Some(m)) => {
                let ok = match (heights(a, n), heights(b, m)) {
                    (Ok(ha), Ok(hb)) => ha.h(n) == hb.h(m),
                    _ => false,
                };
                check("alignment".into(), ok, &mut outcome);
                (n, m)
            }
            _ => (0, 0),
        };
        let (off_a, off_b) = alignment;
        let stage_pair = |k: usize| (a.stage(off_a + k), b.stage(off_b + k));
        if let Some(n) = map.get("agree_from").and_then(|v| v.parse::<usize>().ok()) {
            let horizon = certification_horizon(a, b).unwrap_or(n + 1).max(n + 1);
            let ok = (n..horizon).all(|k| {
                let (sa, sb) = stage_pair(k);
                sa.is_some() && sa == sb
            }) && (n == 0 || {
                let (sa, sb) = stage_pair(n - 1);
                sa != sb
            });
            check("agree_from".into(), ok, &mut outcome);
        }
        if let Some(n) = map
            .get("differ_at.stage")
            .and_then(|v| v.parse::<usize>().ok())
        {
            let (sa, sb) = stage_pair(n);
            check("differ_at".into(), sa != sb, &mut outcome);
        }
    }

    Ok(outcome)
}
