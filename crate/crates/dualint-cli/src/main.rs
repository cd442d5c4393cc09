//! Command-line driver: reads systems (`{"M": [[int]], "b": [int]}`) or
//! clutter files (ground size, then 1-based member lines) and runs the
//! certification pipelines. Exit codes: 0 certified, 1 refuted,
//! 2 undecided, 3 usage or input error, 4 resource limit, 5 internal.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use dualint::analyzer::{
    certify_td_in_l, decide_tdi_nondegenerate, near_tdi_sample, search_bad_weight, Certificate,
    SearchBudget, Status, Verdict,
};
use dualint::arith::{format_rat, int, int_to_rat, Rat};
use dualint::clutter::{blocker, ideal_report, intersection_profile, verify_tdd, Clutter};
use dualint::error::Error;
use dualint::lspec::LSpec;
use dualint::polyhedron::{face_from_tight, LinearSystem};
use dualint::report;
use dualint::tilt::{tilt_constraint, tilt_solvable, ResiliencyProfile};

/// Weight-box bound used when neither `--box` nor the environment sets one.
const DEFAULT_WEIGHT_BOX: u64 = 2;
/// Denominator cap used when neither `--denom-cap` nor the environment
/// sets one.
const DEFAULT_DENOM_CAP: u64 = 16;
const ENV_WEIGHT_BOX: &str = "DUALINT_WEIGHT_BOX";
const ENV_DENOM_CAP: &str = "DUALINT_DENOM_CAP";

#[derive(Parser)]
#[command(
    name = "dualint",
    version,
    about = "Exact certification of dual integrality properties of integer linear systems"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Check {
    /// Total dual integrality.
    Tdi,
    /// Total dual dyadicness (denominators are powers of two).
    Tdd,
    /// Dual integrality over some prime-denominator domain per weight.
    NearTdi,
    /// Dual integrality over the domain spanned by --primes.
    TdInL,
}

#[derive(Subcommand)]
enum Cmd {
    /// Certify or refute a dual integrality property of a system file.
    Analyze {
        /// Path to a JSON system {"M": [[int]], "b": [int]}.
        path: PathBuf,
        #[arg(long, value_enum)]
        check: Check,
        /// Primes spanning the denominator domain (td-in-l, near-tdi).
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        /// Scan all integer weights with coordinates in [-W, W].
        #[arg(long = "box")]
        weight_box: Option<u64>,
        /// Largest denominator tried by witness searches.
        #[arg(long)]
        denom_cap: Option<u64>,
        /// Emit the versioned JSON report instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Print the canonical tilt constraint of a (weight, face, down-face)
    /// triple and its solvability over a denominator domain.
    Tilt {
        /// Path to a JSON system {"M": [[int]], "b": [int]}.
        path: PathBuf,
        /// Weight vector, comma-separated integers.
        #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
        w: Vec<i64>,
        /// 1-based tight row indices of the face.
        #[arg(long, value_delimiter = ',')]
        face: Vec<usize>,
        /// 1-based tight row indices of the down-face.
        #[arg(long, value_delimiter = ',')]
        downface: Vec<usize>,
        /// Primes spanning the solvability domain (default: 2).
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
        #[arg(long)]
        json: bool,
    },
    /// Blocker, idealness, intersection profile, or dyadic verification of
    /// a clutter file (first line: ground size; then 1-based member lines).
    Clutter {
        path: PathBuf,
        /// Print the blocker.
        #[arg(long)]
        blocker: bool,
        /// Decide idealness of the covering polyhedron.
        #[arg(long)]
        ideal: bool,
        /// Print member-blocker intersection statistics.
        #[arg(long)]
        profile: bool,
        /// Verify total dual dyadicness of the covering system.
        #[arg(long)]
        tdd: bool,
        /// Scan covering weights with coordinates in [0, W] (--tdd).
        #[arg(long = "box")]
        weight_box: Option<u64>,
        #[arg(long)]
        json: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(match e {
                Error::ResourceLimit { .. } => 4,
                Error::Internal(_) => 5,
                _ => 3,
            })
        }
    }
}

fn read_file(path: &Path) -> Result<String, Error> {
    fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn env_u64(name: &'static str) -> Result<Option<u64>, Error> {
    match std::env::var(name) {
        Err(_) => Ok(None),
        Ok(s) => s
            .parse::<u64>()
            .map(Some)
            .map_err(|_| Error::usage(format!("{name} must be an unsigned integer, got {s:?}"))),
    }
}

fn budget_from(
    weight_box: Option<u64>,
    denom_cap: Option<u64>,
    primes: Vec<u64>,
) -> Result<SearchBudget, Error> {
    let wb = match weight_box {
        Some(v) => v,
        None => env_u64(ENV_WEIGHT_BOX)?.unwrap_or(DEFAULT_WEIGHT_BOX),
    };
    let dc = match denom_cap {
        Some(v) => v,
        None => env_u64(ENV_DENOM_CAP)?.unwrap_or(DEFAULT_DENOM_CAP),
    };
    SearchBudget::new(wb, primes, dc)
}

fn run(cmd: Cmd) -> Result<u8, Error> {
    let started = Instant::now();
    match cmd {
        Cmd::Analyze { path, check, primes, weight_box, denom_cap, json } => {
            let sys = report::parse_system(&read_file(&path)?)?;
            let primes = primes.unwrap_or_else(|| vec![2, 3]);
            let budget = budget_from(weight_box, denom_cap, primes.clone())?;
            let verdict = match check {
                Check::Tdi => analyze_tdi(&sys, &budget)?,
                Check::Tdd => scan_or_certify(&sys, &LSpec::dyadic(), &budget)?,
                Check::NearTdi => near_tdi_sample(&sys, &budget)?,
                Check::TdInL => {
                    let l = LSpec::primes(primes)?;
                    scan_or_certify(&sys, &l, &budget)?
                }
            };
            if json {
                let rep = report::assemble(
                    check_name(check),
                    report::system_value(&sys),
                    vec![report::verdict_value(&verdict)],
                    &budget,
                    elapsed_ms(started),
                );
                println!("{}", report::to_string(&rep));
            } else {
                print_verdict(&verdict);
            }
            Ok(report::exit_code(verdict.status) as u8)
        }
        Cmd::Tilt { path, w, face, downface, primes, json } => {
            let sys = report::parse_system(&read_file(&path)?)?;
            let w_rat: Vec<Rat> = w.iter().map(|&k| int_to_rat(&int(k))).collect();
            let f = face_from_tight(&sys, &to_zero_based(&face)?)?;
            let fplus = face_from_tight(&sys, &to_zero_based(&downface)?)?;
            let t = tilt_constraint(&sys, &w_rat, &f, &fplus)?;
            let l = match primes {
                Some(p) => LSpec::primes(p)?,
                None => LSpec::dyadic(),
            };
            let (solvable, witness) = tilt_solvable(&t, &l);
            if json {
                let rep = json!({
                    "schema": report::SCHEMA_VERSION,
                    "check": "tilt",
                    "input": report::system_value(&sys),
                    "tilt": report::tilt_value(&t),
                    "domain": l.to_string(),
                    "solvable": solvable,
                    "witness": witness.as_ref().map(|u| rat_list(u)),
                    "timing_ms": elapsed_ms(started),
                });
                println!("{}", report::to_string(&rep));
            } else {
                println!("tilt: {}", report::tilt_equation(&t));
                match (&witness, solvable) {
                    (Some(u), _) => {
                        println!("solvable over {l}: u = ({})", join_rats(u));
                    }
                    (None, true) => println!("solvable over {l}"),
                    (None, false) => println!("not solvable over {l}"),
                }
            }
            Ok(0)
        }
        Cmd::Clutter { path, blocker: do_blocker, ideal, profile, tdd, weight_box, json } => {
            let ops = [do_blocker, ideal, profile, tdd];
            if ops.iter().filter(|&&b| b).count() != 1 {
                return Err(Error::usage(
                    "pick exactly one of --blocker, --ideal, --profile, --tdd",
                ));
            }
            let c = Clutter::parse_text(&read_file(&path)?)?;
            if do_blocker {
                let b = blocker(&c)?;
                if json {
                    let rep = json!({
                        "schema": report::SCHEMA_VERSION,
                        "check": "clutter-blocker",
                        "input": report::clutter_value(&c),
                        "blocker": report::clutter_value(&b),
                        "timing_ms": elapsed_ms(started),
                    });
                    println!("{}", report::to_string(&rep));
                } else {
                    print!("{}", b.to_text());
                }
                return Ok(0);
            }
            if ideal {
                let rep = ideal_report(&c)?;
                if json {
                    let out = json!({
                        "schema": report::SCHEMA_VERSION,
                        "check": "clutter-ideal",
                        "input": report::clutter_value(&c),
                        "result": report::ideal_value(&rep),
                        "timing_ms": elapsed_ms(started),
                    });
                    println!("{}", report::to_string(&out));
                } else {
                    println!("ideal: {}", rep.ideal);
                    if let Some(v) = &rep.fractional_vertex {
                        println!("fractional vertex: ({})", join_rats(v));
                    }
                }
                return Ok(0);
            }
            if profile {
                let p = intersection_profile(&c)?;
                if json {
                    let out = json!({
                        "schema": report::SCHEMA_VERSION,
                        "check": "clutter-profile",
                        "input": report::clutter_value(&c),
                        "result": report::intersection_value(&p),
                        "timing_ms": elapsed_ms(started),
                    });
                    println!("{}", report::to_string(&out));
                } else {
                    println!("max |S ∩ B| = {}", p.max_sb);
                    println!("power-of-two pattern: {}", yes_no(p.all_in_p));
                    println!("all intersections odd: {}", yes_no(p.binary));
                }
                return Ok(0);
            }
            // --tdd
            let budget = budget_from(weight_box, None, vec![2])?;
            let verdict = verify_tdd(&c, &budget)?;
            if json {
                let rep = report::assemble(
                    "clutter-tdd",
                    report::clutter_value(&c),
                    vec![report::verdict_value(&verdict)],
                    &budget,
                    elapsed_ms(started),
                );
                println!("{}", report::to_string(&rep));
            } else {
                print_verdict(&verdict);
            }
            Ok(report::exit_code(verdict.status) as u8)
        }
    }
}

/// Exact decision first; when the system is degenerate (or any other
/// undecided outcome), fall back to the integer-dual weight scan so finite
/// refutations are still found.
fn analyze_tdi(sys: &LinearSystem, budget: &SearchBudget) -> Result<Verdict, Error> {
    let v = decide_tdi_nondegenerate(sys)?;
    if v.status != Status::Undecided {
        return Ok(v);
    }
    if let Some(bad) = search_bad_weight(sys, &LSpec::Integers, budget)? {
        return Ok(Verdict {
            property: v.property,
            status: Status::Refuted,
            certificate: Certificate::BadWeight(bad),
        });
    }
    Ok(v)
}

/// Sufficient-condition certificate first, then the scan refuter.
fn scan_or_certify(sys: &LinearSystem, l: &LSpec, budget: &SearchBudget) -> Result<Verdict, Error> {
    let v = certify_td_in_l(sys, l)?;
    if v.status != Status::Undecided {
        return Ok(v);
    }
    if let Some(bad) = search_bad_weight(sys, l, budget)? {
        return Ok(Verdict {
            property: v.property,
            status: Status::Refuted,
            certificate: Certificate::BadWeight(bad),
        });
    }
    Ok(v)
}

fn check_name(c: Check) -> &'static str {
    match c {
        Check::Tdi => "tdi",
        Check::Tdd => "tdd",
        Check::NearTdi => "near-tdi",
        Check::TdInL => "td-in-l",
    }
}

fn to_zero_based(rows: &[usize]) -> Result<Vec<usize>, Error> {
    rows.iter()
        .map(|&r| r.checked_sub(1).ok_or_else(|| Error::usage("row indices are 1-based")))
        .collect()
}

fn elapsed_ms(started: Instant) -> u64 {
    u64::try_from(started.elapsed().as_millis()).unwrap_or(u64::MAX)
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn join_rats(v: &[Rat]) -> String {
    v.iter().map(format_rat).collect::<Vec<_>>().join(", ")
}

fn rat_list(v: &[Rat]) -> Value {
    Value::Array(v.iter().map(|r| json!(format_rat(r))).collect())
}

fn print_verdict(v: &Verdict) {
    println!("property: {}", report::property_name(&v.property));
    println!("status: {}", report::status_name(v.status));
    println!("rule: {}", report::rule_for(&v.certificate));
    for line in evidence_lines(&v.certificate) {
        println!("{line}");
    }
}

fn profile_lines(p: &ResiliencyProfile, out: &mut Vec<String>) {
    if !p.integral {
        out.push("polyhedron is not integral".into());
        return;
    }
    let failing: Vec<String> = p
        .shifts
        .iter()
        .enumerate()
        .filter(|(_, s)| s.is_none())
        .map(|(i, _)| format!("not resilient, row {}", i + 1))
        .collect();
    if failing.is_empty() {
        out.push("integral and resilient under the admitted shifts".into());
    } else {
        out.extend(failing);
    }
}

fn evidence_lines(c: &Certificate) -> Vec<String> {
    let mut out = Vec::new();
    match c {
        Certificate::DivisionResiliency { p, gsc, profile } => {
            out.push(format!("division closure bound p = {p}"));
            out.push(
                if gsc.holds {
                    "equality rows generate their cone over the domain"
                } else {
                    "equality rows fail the generating-set check"
                }
                .into(),
            );
            profile_lines(profile, &mut out);
        }
        Certificate::NondegenerateTdi { gsc, profile } => {
            if !gsc.holds {
                out.push("equality rows fail the generating-set check".into());
            }
            profile_lines(profile, &mut out);
        }
        Certificate::BadWeight(b) => {
            let w: Vec<String> = b.w.iter().map(|v| v.to_string()).collect();
            out.push(format!("bad w = ({})", w.join(",")));
            out.push(format!("no optimal dual over {} at that weight", b.lspec));
        }
        Certificate::Exhausted { weight_box, primes, note } => {
            let ps: Vec<String> = primes.iter().map(|p| p.to_string()).collect();
            out.push(format!("searched weight box {weight_box}, primes {{{}}}", ps.join(",")));
            out.push(note.clone());
        }
        Certificate::Degenerate { reason } => out.push(reason.clone()),
        Certificate::ClutterIntersection { max_sb, ideal, .. } => {
            out.push(format!("ideal: {ideal}"));
            out.push(format!(
                "max |S ∩ B| = {max_sb}; every intersection size is one plus zero-or-a-power-of-two"
            ));
        }
    }
    out
}
