//! Verdict and report rendering: human-readable text and line-parseable
//! `key: value` machine output.

use rank1::decide::{Verdict, Witness};
use rank1::ergodic::EdTrace;
use rank1::generate::{CanonicalReport, GeneratingSequence};
use rank1::symbolic::{Kappa, Label, LabelVector};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Machine,
}

/// Ordered key/value report. Machine output prints every pair as
/// `key: value`; text output gets a hand-written rendering per command.
pub struct Report {
    pairs: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: &str) -> Self {
        Report {
            pairs: vec![("command".into(), command.into())],
        }
    }

    pub fn push(&mut self, key: impl Into<String>, value: impl ToString) {
        self.pairs.push((key.into(), value.to_string()));
    }

    /// Push unless the key is already present; keys must stay unique for the
    /// output to be unambiguously parseable.
    pub fn push_unique(&mut self, key: impl Into<String>, value: impl ToString) {
        let key = key.into();
        if !self.pairs.iter().any(|(k, _)| *k == key) {
            self.pairs.push((key, value.to_string()));
        }
    }

    pub fn emit_machine(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.pairs {
            out.push_str(k);
            out.push_str(": ");
            out.push_str(v);
            out.push('\n');
        }
        out
    }
}

pub fn push_ed_block(report: &mut Report, idx: usize, trace: &EdTrace) {
    let p = format!("ed.{idx}");
    report.push(format!("{p}.d"), trace.d);
    report.push(format!("{p}.holds"), trace.holds);
    let residues: Vec<String> = trace.residues.iter().map(|r| r.to_string()).collect();
    report.push(format!("{p}.residues"), residues.join(","));
    report.push(format!("{p}.cycle_start"), trace.cycle_start);
    report.push(format!("{p}.cycle_len"), trace.cycle_len);
    report.push(format!("{p}.witnesses"), trace.witnesses.len());
    for (j, w) in trace.witnesses.iter().enumerate() {
        report.push(format!("{p}.witness.{j}.start"), w.start);
        report.push(format!("{p}.witness.{j}.stage"), w.stage);
        report.push(format!("{p}.witness.{j}.index"), w.index);
        report.push(format!("{p}.witness.{j}.value"), w.value);
    }
    if let Some(f) = &trace.failure {
        report.push(format!("{p}.failure.start"), f.start);
        report.push(format!("{p}.failure.residue"), f.residue);
    }
}

/// Flatten a verdict into report pairs.
pub fn push_verdict(report: &mut Report, verdict: &Verdict) {
    report.push("answer", verdict.answer);
    if let Some(rule) = verdict.rule {
        report.push("rule", rule);
    }
    report.push("depth", verdict.depth);
    let mut certs = 0usize;
    let mut eds = 0usize;
    let mut two = 0usize;
    let mut unmet = 0usize;
    let mut unmet_conditions: Vec<String> = Vec::new();
    for witness in &verdict.witnesses {
        match witness {
            Witness::AgreeFrom { stage } => report.push("agree_from", stage),
            Witness::DifferAt { stage, period } => {
                report.push("differ_at.stage", stage);
                report.push("differ_at.period", period);
            }
            Witness::Alignment { n, m } => {
                report.push("alignment.n", n);
                report.push("alignment.m", m);
            }
            Witness::Bounds { r, s } => {
                report.push_unique("bounds.r", r);
                report.push_unique("bounds.s", s);
            }
            Witness::BoundPropagation {
                r_before,
                s_before,
                r_after,
                s_after,
            } => {
                report.push_unique("bounds.r", r_before);
                report.push_unique("bounds.s", s_before);
                report.push("bounds.r_merged", r_after);
                report.push("bounds.s_merged", s_after);
            }
            Witness::Incompatibility(c) => {
                let p = format!("certificate.{certs}");
                report.push(format!("{p}.stage"), c.merged_stage);
                report.push(format!("{p}.original_stage"), c.original_stage);
                report.push(format!("{p}.r"), c.merged_r);
                report.push(format!("{p}.s"), &c.s);
                report.push(format!("{p}.t"), &c.t);
                certs += 1;
            }
            Witness::Ed(trace) => {
                push_ed_block(report, eds, trace);
                eds += 1;
            }
            Witness::EdBothFail { d, left, right } => {
                report.push("ed_both_fail.d", d);
                push_ed_block(report, eds, left);
                eds += 1;
                push_ed_block(report, eds, right);
                eds += 1;
            }
            Witness::TwoOccurrences { stage, spacer } => {
                report.push(format!("two_occ.{two}.stage"), stage);
                report.push(format!("two_occ.{two}.spacer"), spacer);
                two += 1;
            }
            Witness::Unmet { condition, detail } => {
                report.push(format!("unmet.{unmet}.condition"), condition);
                report.push(format!("unmet.{unmet}.detail"), detail);
                unmet_conditions.push(condition.to_string());
                unmet += 1;
            }
            Witness::DegenerateHint { base_len } => {
                report.push("degenerate_hint.base_len", base_len);
            }
            Witness::CanonicalAtDepth { depth } => {
                report.push("canonical_depth", depth);
            }
        }
    }
    report.push("certificates", certs);
    report.push("ed_traces", eds);
    if !unmet_conditions.is_empty() {
        report.push("not_applicable", unmet_conditions.join(","));
    }
}

/// Human rendering of a verdict report.
pub fn verdict_text(report: &Report) -> String {
    let mut out = String::new();
    let get = |key: &str| {
        report
            .pairs
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    };
    let command = get("command").unwrap_or("?");
    let answer = get("answer").unwrap_or("?");
    match get("rule") {
        Some(rule) => out.push_str(&format!("{command}: {answer} (rule {rule})\n")),
        None => out.push_str(&format!("{command}: {answer}\n")),
    }
    for (k, v) in &report.pairs {
        match k.as_str() {
            "agree_from" => out.push_str(&format!("  spacer words agree from stage {v} on\n")),
            "differ_at.stage" => {
                out.push_str(&format!("  spacer words differ at stage {v}"));
            }
            "differ_at.period" => out.push_str(&format!(" and recurrently with period {v}\n")),
            "alignment.n" => out.push_str(&format!("  height alignment at stages ({v}, ")),
            "alignment.m" => out.push_str(&format!("{v})\n")),
            "bounds.r" => out.push_str(&format!("  bounds: r <= {v}")),
            "bounds.s" => out.push_str(&format!(", spacer values <= {v}\n")),
            "bounds.r_merged" => out.push_str(&format!("  merged bounds: r <= {v}")),
            "bounds.s_merged" => out.push_str(&format!(", spacer values <= {v}\n")),
            "not_applicable" => {
                out.push_str(&format!("  conditions not established: {v}\n"));
            }
            "canonical_depth" => {
                out.push_str(&format!("  parameters canonical at depth {v}\n"));
            }
            _ => {
                if let Some(rest) = k.strip_suffix(".s") {
                    if rest.starts_with("certificate.") {
                        out.push_str(&format!("  {rest}: s' = {v}"));
                    }
                }
                if let Some(rest) = k.strip_suffix(".t") {
                    if rest.starts_with("certificate.") {
                        let _ = rest;
                        out.push_str(&format!(", t' = {v} (incompatible)\n"));
                    }
                }
                if k.ends_with(".holds") && k.starts_with("ed.") {
                    let d = report
                        .pairs
                        .iter()
                        .find(|(kk, _)| *kk == k.replace(".holds", ".d"))
                        .map(|(_, vv)| vv.as_str())
                        .unwrap_or("?");
                    let verdict = if v == "true" {
                        "ergodic"
                    } else {
                        "not ergodic"
                    };
                    out.push_str(&format!("  power {d}: {verdict}\n"));
                }
                if let Some(rest) = k.strip_prefix("unmet.") {
                    if rest.ends_with(".detail") {
                        out.push_str(&format!("  unmet: {v}\n"));
                    }
                }
            }
        }
    }
    out
}

pub fn push_generate(report: &mut Report, gen: &GeneratingSequence) {
    report.push("depth", gen.depth());
    for (n, h) in gen.heights().values().iter().enumerate() {
        report.push(format!("h.{n}"), h);
    }
    for n in 0..=gen.depth() {
        report.push(format!("v.{n}"), gen.word(n).compact());
    }
}

pub fn generate_text(gen: &GeneratingSequence) -> String {
    let mut out = String::new();
    for n in 0..=gen.depth() {
        let h = gen.height(n);
        if h <= WORD_PRINT_LIMIT {
            out.push_str(&format!("v_{n}  (h = {h}):  {}\n", gen.word(n).compact()));
        } else {
            // the full word stays available through the machine format
            let head = gen.word(n).restrict(1, WORD_PRINT_LIMIT).compact();
            out.push_str(&format!("v_{n}  (h = {h}):  {head}..\n"));
        }
    }
    out
}

/// Words longer than this are shown truncated in text output.
const WORD_PRINT_LIMIT: usize = 256;

pub fn push_canonical(report: &mut Report, analysis: &CanonicalReport) {
    report.push("depth", analysis.depth);
    report.push("built", analysis.built_into.len());
    for (i, b) in analysis.built_into.iter().enumerate() {
        let p = format!("built.{i}");
        report.push(format!("{p}.len"), b.word.len());
        if b.word.len() <= WORD_PRINT_LIMIT {
            report.push(format!("{p}.word"), b.word.compact());
        }
        if let Some(stage) = b.stage_index {
            report.push(format!("{p}.stage"), stage);
        }
        report.push(format!("{p}.canonical"), b.canonical_at_depth);
        if let Some((inner, outer)) = &b.witness {
            report.push(format!("{p}.witness_inner_len"), inner.len());
            report.push(format!("{p}.witness_outer_len"), outer.len());
        }
    }
    let removable: Vec<String> = analysis
        .removable_stages
        .iter()
        .map(|s| s.to_string())
        .collect();
    report.push("removable", removable.join(","));
    report.push("degenerate", analysis.degenerate);
    report.push("canonical_supplied", analysis.supplied_is_canonical());
}

pub fn canonical_text(analysis: &CanonicalReport) -> String {
    let mut out = format!(
        "canonical analysis at depth {} ({} built-from words)\n",
        analysis.depth,
        analysis.built_into.len()
    );
    for b in &analysis.built_into {
        let name = match b.stage_index {
            Some(n) => format!("v_{n}"),
            None => "word".into(),
        };
        let status = if b.canonical_at_depth {
            "canonical at depth"
        } else {
            "removable"
        };
        out.push_str(&format!("  {name} (len {}): {status}\n", b.word.len()));
    }
    if analysis.degenerate {
        out.push_str("  warning: deepest word is simply built; may be degenerate\n");
    }
    out
}

pub fn push_labels(report: &mut Report, labels: &LabelVector) {
    for (n, l) in labels.lambdas.iter().enumerate() {
        let value = match l {
            Label::Copy(i) => i.to_string(),
            Label::Spacer => "inf".into(),
        };
        report.push(format!("lambda.{n}"), value);
    }
    for (n, k) in labels.kappas.iter().enumerate() {
        let value = match k {
            Kappa::Left => "-1",
            Kappa::Interior => "0",
            Kappa::Right => "+1",
            Kappa::Spacer => "inf",
        };
        report.push(format!("kappa.{n}"), value);
    }
}

pub fn labels_text(labels: &LabelVector) -> String {
    let mut out = String::new();
    for n in 0..labels.lambdas.len() {
        let l = match labels.lambdas[n] {
            Label::Copy(i) => i.to_string(),
            Label::Spacer => "inf".into(),
        };
        let k = match labels.kappas[n] {
            Kappa::Left => "-1",
            Kappa::Interior => "0",
            Kappa::Right => "+1",
            Kappa::Spacer => "inf",
        };
        out.push_str(&format!("level {n}: lambda = {l}, kappa = {k}\n"));
    }
    out
}
