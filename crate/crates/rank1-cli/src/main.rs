//! Command-line front end: spec-file parsing, subcommand dispatch, and
//! human/machine verdict output.

mod report;
mod verify;

use std::io::Read;
use std::process::exit;

use rank1::decide::{check_disjoint, isomorphic, msj, DecideError, Options};
use rank1::ergodic::{ed_holds, totally_ergodic_up_to, EdTrace};
use rank1::error::Error;
use rank1::generate::{canonical_analysis, expand_with_cap, DEFAULT_EXPANSION_CAP};
use rank1::params::ParameterSpec;
use rank1::symbolic::{label_vector, PointedConfig};

use report::{
    canonical_text, generate_text, labels_text, push_canonical, push_ed_block, push_generate,
    push_labels, push_verdict, verdict_text, Format, Report,
};

const USAGE: &str = "\
usage: rank1 <command> [args] [flags]

commands:
  validate <spec>                          check the stage constraints
  generate <spec>                          materialize the generating sequence
  canonical <spec>                         canonical-at-depth analysis
  ergodic <spec> (--d <d> | --upto <D>)    power ergodicity criterion
  check-iso <spec-a> <spec-b>              isomorphism verdict
  check-disjoint <spec-a> <spec-b>         disjointness verdict
  check-msj <spec>                         minimal self-joinings verdict
  labels <spec> --level <N> --offset <p>   level labels of a pointed window
  verify [<report>|-]                      re-check a machine-format verdict

flags:
  --depth <n>            analysis depth (default 12)
  --window <n>           height-alignment search window (default 20)
  --d <d> | --upto <D>   modulus / modulus range for ergodic
  --level <n> --offset <p>   window coordinates for labels
  --cap <letters>        expansion cap (default 10000000)
  --format text|machine  output format (default text)

spec files are line-oriented: optional `preamble:` and `period:` sections
with `stage r=<int> s=<int>,<int>,..` lines; `#` starts a comment. the path
`-` reads from stdin.

exit codes: 0 = yes, 1 = no, 2 = depth-limited, 64 = usage, 65 = invalid spec
";

struct Args {
    command: String,
    positional: Vec<String>,
    depth: usize,
    window: usize,
    cap: usize,
    d: Option<u64>,
    upto: Option<u64>,
    level: Option<usize>,
    offset: Option<usize>,
    format: Format,
}

fn usage_error(message: &str) -> u8 {
    eprintln!("rank1: {message}");
    eprintln!("{USAGE}");
    64
}

fn parse_args(raw: &[String]) -> Result<Args, String> {
    let mut args = Args {
        command: String::new(),
        positional: Vec::new(),
        depth: 12,
        window: 20,
        cap: DEFAULT_EXPANSION_CAP,
        d: None,
        upto: None,
        level: None,
        offset: None,
        format: Format::Text,
    };
    let mut it = raw.iter();
    args.command = it.next().cloned().ok_or("missing command")?;
    while let Some(arg) = it.next() {
        let mut flag_value = |name: &str| it.next().cloned().ok_or(format!("{name} needs a value"));
        match arg.as_str() {
            "--depth" => {
                args.depth = flag_value("--depth")?
                    .parse()
                    .map_err(|_| "--depth needs an integer".to_string())?
            }
            "--window" => {
                args.window = flag_value("--window")?
                    .parse()
                    .map_err(|_| "--window needs an integer".to_string())?
            }
            "--cap" => {
                args.cap = flag_value("--cap")?
                    .parse()
                    .map_err(|_| "--cap needs an integer".to_string())?
            }
            "--d" => {
                args.d = Some(
                    flag_value("--d")?
                        .parse()
                        .map_err(|_| "--d needs an integer".to_string())?,
                )
            }
            "--upto" => {
                args.upto = Some(
                    flag_value("--upto")?
                        .parse()
                        .map_err(|_| "--upto needs an integer".to_string())?,
                )
            }
            "--level" => {
                args.level = Some(
                    flag_value("--level")?
                        .parse()
                        .map_err(|_| "--level needs an integer".to_string())?,
                )
            }
            "--offset" => {
                args.offset = Some(
                    flag_value("--offset")?
                        .parse()
                        .map_err(|_| "--offset needs an integer".to_string())?,
                )
            }
            "--format" => {
                args.format = match flag_value("--format")?.as_str() {
                    "text" => Format::Text,
                    "machine" => Format::Machine,
                    other => return Err(format!("unknown format `{other}`")),
                }
            }
            // accepted alias for a positional spec path
            "--spec" => args.positional.push(flag_value("--spec")?),
            flag if flag.starts_with("--") => return Err(format!("unknown flag `{flag}`")),
            positional => args.positional.push(positional.to_string()),
        }
    }
    Ok(args)
}

fn read_spec(path: &str) -> Result<ParameterSpec, (String, u8)> {
    let text = if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| (format!("stdin: {e}"), 65))?;
        buf
    } else {
        std::fs::read_to_string(path).map_err(|e| (format!("{path}: {e}"), 65))?
    };
    ParameterSpec::parse_str(&text).map_err(|e| (format!("{path}:{e}"), 65))
}

/// Exit code for a core error: resource limits stay depth-limited, malformed
/// specs are invalid input, surprises are loud.
fn core_exit(err: &Error) -> u8 {
    match err {
        Error::DepthLimited { .. } | Error::CapExceeded { .. } => 2,
        Error::InvalidStage { .. } | Error::EmptySpec => 65,
        Error::CertificateFailed { .. } => 70,
        _ => 64,
    }
}

fn emit(report: &Report, format: Format, text: String) {
    match format {
        Format::Machine => print!("{}", report.emit_machine()),
        Format::Text => print!("{text}"),
    }
}

fn finish_verdict(
    result: Result<rank1::decide::Verdict, DecideError>,
    mut report: Report,
    format: Format,
) -> u8 {
    match result {
        Ok(verdict) => {
            push_verdict(&mut report, &verdict);
            let text = verdict_text(&report);
            emit(&report, format, text);
            verdict.answer.exit_code()
        }
        Err(DecideError::Core(e)) => {
            eprintln!("rank1: {e}");
            core_exit(&e)
        }
        Err(e) => {
            // hypothesis failure: the engine cannot apply its rules here
            let command = report_command(&report);
            report.push("answer", "DepthLimited");
            report.push("reason", &e);
            let text = format!("{command}: DepthLimited\n  {e}\n");
            emit(&report, format, text);
            2
        }
    }
}

fn report_command(report: &Report) -> String {
    report
        .emit_machine()
        .lines()
        .next()
        .and_then(|l| l.strip_prefix("command: ").map(str::to_string))
        .unwrap_or_default()
}

fn ergodic_exit(traces: &[EdTrace]) -> u8 {
    if traces.iter().all(|t| t.holds) {
        0
    } else {
        1
    }
}

fn run(raw: &[String]) -> u8 {
    let args = match parse_args(raw) {
        Ok(args) => args,
        Err(message) => return usage_error(&message),
    };
    let opts = Options {
        depth: args.depth,
        window: args.window,
        cap: args.cap,
    };
    let format = args.format;

    let one_spec = |args: &Args| -> Result<(String, ParameterSpec), (String, u8)> {
        match args.positional.as_slice() {
            [path] => Ok((path.clone(), read_spec(path)?)),
            _ => Err(("expected exactly one spec path".into(), 64)),
        }
    };

    match args.command.as_str() {
        "validate" => {
            let (path, spec) = match one_spec(&args) {
                Ok(v) => v,
                Err((m, 64)) => return usage_error(&m),
                Err((m, code)) => {
                    eprintln!("rank1: {m}");
                    return code;
                }
            };
            let mut report = Report::new("validate");
            report.push("spec", &path);
            match spec.validate() {
                Ok(()) => {
                    report.push("valid", true);
                    emit(&report, format, format!("{path}: ok\n"));
                    0
                }
                Err(violations) => {
                    report.push("valid", false);
                    let mut text = String::new();
                    for (i, (stage, violation)) in violations.iter().enumerate() {
                        report.push(format!("violation.{i}.stage"), stage);
                        report.push(format!("violation.{i}.message"), violation);
                        text.push_str(&format!("{path}: stage {stage}: {violation}\n"));
                    }
                    emit(&report, format, text);
                    65
                }
            }
        }
        "generate" => {
            let (path, spec) = match one_spec(&args) {
                Ok(v) => v,
                Err((m, 64)) => return usage_error(&m),
                Err((m, code)) => {
                    eprintln!("rank1: {m}");
                    return code;
                }
            };
            match expand_with_cap(&spec, args.depth, args.cap) {
                Ok(gen) => {
                    let mut report = Report::new("generate");
                    report.push("spec", &path);
                    push_generate(&mut report, &gen);
                    emit(&report, format, generate_text(&gen));
                    0
                }
                Err(e) => {
                    eprintln!("rank1: {e}");
                    core_exit(&e)
                }
            }
        }
        "canonical" => {
            let (path, spec) = match one_spec(&args) {
                Ok(v) => v,
                Err((m, 64)) => return usage_error(&m),
                Err((m, code)) => {
                    eprintln!("rank1: {m}");
                    return code;
                }
            };
            let analysis = expand_with_cap(&spec, args.depth, args.cap)
                .and_then(|gen| canonical_analysis(&gen));
            match analysis {
                Ok(analysis) => {
                    let mut report = Report::new("canonical");
                    report.push("spec", &path);
                    push_canonical(&mut report, &analysis);
                    emit(&report, format, canonical_text(&analysis));
                    0
                }
                Err(e) => {
                    eprintln!("rank1: {e}");
                    core_exit(&e)
                }
            }
        }
        "ergodic" => {
            let (path, spec) = match one_spec(&args) {
                Ok(v) => v,
                Err((m, 64)) => return usage_error(&m),
                Err((m, code)) => {
                    eprintln!("rank1: {m}");
                    return code;
                }
            };
            let traces = match (args.d, args.upto) {
                (Some(d), None) => ed_holds(&spec, d).map(|t| vec![t]),
                (None, Some(bound)) => totally_ergodic_up_to(&spec, bound),
                _ => return usage_error("ergodic needs exactly one of --d or --upto"),
            };
            match traces {
                Ok(traces) => {
                    let mut report = Report::new("ergodic");
                    report.push("spec", &path);
                    let mut text = String::new();
                    for (i, trace) in traces.iter().enumerate() {
                        push_ed_block(&mut report, i, trace);
                        text.push_str(&format!(
                            "power {}: {}\n",
                            trace.d,
                            if trace.holds {
                                "ergodic"
                            } else {
                                "not ergodic"
                            }
                        ));
                    }
                    let all = traces.iter().all(|t| t.holds);
                    report.push("holds", all);
                    text.push_str(&format!(
                        "verdict: {}\n",
                        if all {
                            "all checked powers ergodic"
                        } else {
                            "some power not ergodic"
                        }
                    ));
                    emit(&report, format, text);
                    ergodic_exit(&traces)
                }
                Err(e) => {
                    eprintln!("rank1: {e}");
                    core_exit(&e)
                }
            }
        }
        "check-iso" | "check-disjoint" => {
            let [path_a, path_b] = args.positional.as_slice() else {
                return usage_error("expected two spec paths");
            };
            let a = match read_spec(path_a) {
                Ok(s) => s,
                Err((m, code)) => {
                    eprintln!("rank1: {m}");
                    return code;
                }
            };
            let b = match read_spec(path_b) {
                Ok(s) => s,
                Err((m, code)) => {
                    eprintln!("rank1: {m}");
                    return code;
                }
            };
            let mut report = Report::new(&args.command);
            report.push("spec_a", path_a);
            report.push("spec_b", path_b);
            let result = if args.command == "check-iso" {
                isomorphic(&a, &b, &opts)
            } else {
                check_disjoint(&a, &b, &opts)
            };
            finish_verdict(result, report, format)
        }
        "check-msj" => {
            let (path, spec) = match one_spec(&args) {
                Ok(v) => v,
                Err((m, 64)) => return usage_error(&m),
                Err((m, code)) => {
                    eprintln!("rank1: {m}");
                    return code;
                }
            };
            let mut report = Report::new("check-msj");
            report.push("spec", &path);
            finish_verdict(msj(&spec, &opts), report, format)
        }
        "labels" => {
            let (Some(level), Some(offset)) = (args.level, args.offset) else {
                return usage_error("labels needs --level and --offset");
            };
            let (path, spec) = match one_spec(&args) {
                Ok(v) => v,
                Err((m, 64)) => return usage_error(&m),
                Err((m, code)) => {
                    eprintln!("rank1: {m}");
                    return code;
                }
            };
            let labels = expand_with_cap(&spec, level, args.cap).and_then(|gen| {
                let config = PointedConfig::new(&gen, level, offset)?;
                Ok(label_vector(&config))
            });
            match labels {
                Ok(labels) => {
                    let mut report = Report::new("labels");
                    report.push("spec", &path);
                    report.push("level", level);
                    report.push("offset", offset);
                    push_labels(&mut report, &labels);
                    emit(&report, format, labels_text(&labels));
                    0
                }
                Err(e) => {
                    eprintln!("rank1: {e}");
                    core_exit(&e)
                }
            }
        }
        "verify" => {
            let path = args.positional.first().map(String::as_str).unwrap_or("-");
            let input = if path == "-" {
                let mut buf = String::new();
                if let Err(e) = std::io::stdin().read_to_string(&mut buf) {
                    eprintln!("rank1: stdin: {e}");
                    return 65;
                }
                buf
            } else {
                match std::fs::read_to_string(path) {
                    Ok(text) => text,
                    Err(e) => {
                        eprintln!("rank1: {path}: {e}");
                        return 65;
                    }
                }
            };
            match verify::verify(&input) {
                Ok(outcome) => {
                    for line in &outcome.lines {
                        println!("{line}");
                    }
                    if outcome.failed.is_empty() {
                        println!("verify: ok ({} checks)", outcome.checked);
                        0
                    } else {
                        println!("verify: FAILED ({})", outcome.failed.join(", "));
                        1
                    }
                }
                Err(message) => {
                    eprintln!("rank1: {message}");
                    65
                }
            }
        }
        "help" | "--help" | "-h" => {
            print!("{USAGE}");
            0
        }
        other => usage_error(&format!("unknown command `{other}`")),
    }
}

fn main() {
    let raw: Vec<String> = std::env::args().skip(1).collect();
    exit(run(&raw) as i32)
}
