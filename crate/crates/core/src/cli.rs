//! Command-line front end. [`run`] parses arguments, dispatches, and returns
//! the exit status together with everything that should go to stdout.

use std::collections::BTreeMap;

use clap::{error::ErrorKind, Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::band::{banding_possible, Coherence, TorusLink};
use crate::classify::{classify, scan, ObstructionReport};
use crate::lens::{d_invariant, normalize, Normalized};
use crate::linkform::{filling_linking_form, linking_forms_equivalent, target_linking_form};

#[derive(Debug, Parser)]
#[command(name = "lenscheck", version, about = "Exact lens space d-invariants and surgery obstructions")]
struct Cli {
    /// Emit a JSON record instead of text
    #[arg(long, global = true)]
    json: bool,
    /// Emit CSV (scan only)
    #[arg(long, global = true, conflicts_with = "json")]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct LensArgs {
    #[arg(long, allow_hyphen_values = true)]
    p: i64,
    #[arg(long, allow_hyphen_values = true)]
    q: i64,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// d-invariants of L(p,q); a negative p reverses orientation
    D {
        #[command(flatten)]
        lens: LensArgs,
        #[arg(long, allow_hyphen_values = true, conflicts_with = "all")]
        spin: Option<i64>,
        #[arg(long)]
        all: bool,
    },
    /// Self-conjugate Spin^c structures of L(p,q)
    Spins {
        #[command(flatten)]
        lens: LensArgs,
    },
    /// Linking forms of the essential filling and of L(n,1)
    Linkform {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Run the obstruction pipeline on L(n,1)
    Classify {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long)]
        trace: bool,
    },
    /// Classify every n in a range
    Scan {
        #[arg(long = "from", allow_hyphen_values = true)]
        from: i64,
        #[arg(long, allow_hyphen_values = true)]
        to: i64,
        /// Exit 1 unless the survivors are exactly the realizable values
        #[arg(long)]
        check_theorem: bool,
    },
    /// Band surgery from T(2,3) to T(2,n)
    Band {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, conflicts_with = "non_coherent", required_unless_present = "non_coherent")]
        coherent: bool,
        #[arg(long)]
        non_coherent: bool,
    },
}

/// Machine-readable output of one command.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutputRecord {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub result: Value,
    pub citations: Vec<String>,
}

impl OutputRecord {
    /// Pretty JSON with keys in sorted order.
    pub fn render(&self) -> String {
        let value = serde_json::to_value(self).expect("record is plain data");
        render_value(&value)
    }
}

pub fn render_value(value: &Value) -> String {
    serde_json::to_string_pretty(value).expect("values always serialize")
}

struct Rendered {
    status: i32,
    text: String,
    record: OutputRecord,
}

const D_CITATION: &str = "d-invariant recursion along the Euclidean algorithm";
const SPIN_CITATION: &str = "self-conjugate Spin^c structures of L(p,q): (p+q-1)/2 and (q-1)/2 when integral";
const LINKFORM_CITATION: &str = "linking forms q/p and m/p agree iff q = m a^2 mod p for a unit a";
const BAND_CITATION: &str = "branched double cover of T(2,n) is L(n,1); bands lift to distance one surgeries";

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let status = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            return (status, e.render().to_string());
        }
    };
    if cli.csv && !matches!(cli.command, Command::Scan { .. }) {
        return (2, "error: --csv is only supported by scan\n".to_string());
    }
    let outcome = match &cli.command {
        Command::D { lens, spin, .. } => run_d(lens, *spin),
        Command::Spins { lens } => run_spins(lens),
        Command::Linkform { n } => run_linkform(*n),
        Command::Classify { n, trace } => Ok(run_classify(*n, *trace)),
        Command::Scan { from, to, check_theorem } => run_scan(*from, *to, *check_theorem, cli.csv),
        Command::Band { n, coherent, .. } => Ok(run_band(*n, *coherent)),
    };
    match outcome {
        Ok(out) if cli.json => (out.status, out.record.render() + "\n"),
        Ok(out) => (out.status, out.text),
        Err(msg) => (2, format!("error: {msg}\n")),
    }
}

fn inputs<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn record(command: &str, inputs: BTreeMap<String, String>, result: Value, citations: &[&str]) -> OutputRecord {
    OutputRecord {
        command: command.to_string(),
        inputs,
        result,
        citations: citations.iter().map(|c| c.to_string()).collect(),
    }
}

fn normalized(lens: &LensArgs) -> Result<Normalized, String> {
    normalize(lens.p, lens.q).map_err(|e| e.to_string())
}

fn run_d(args: &LensArgs, spin: Option<i64>) -> Result<Rendered, String> {
    let norm = normalized(args)?;
    let p = norm.lens.p();
    let indices: Vec<u64> = match spin {
        Some(i) => vec![i.rem_euclid(p as i64) as u64],
        None => (0..p).collect(),
    };
    let values: Vec<(u64, String)> = indices
        .iter()
        .map(|&i| {
            let d = d_invariant(&norm.lens, norm.map_spin(i)).expect("index reduced mod p");
            (i, d.to_string())
        })
        .collect();
    let text = match spin {
        Some(_) => format!("{}\n", values[0].1),
        None => values.iter().map(|(i, d)| format!("{i}: {d}\n")).collect(),
    };
    let result: Value = values.iter().map(|(i, d)| json!({ "spin": i, "d": d })).collect();
    let mut ins = inputs([("p", args.p.to_string()), ("q", args.q.to_string())]);
    if let Some(i) = spin {
        ins.insert("spin".into(), i.to_string());
    }
    Ok(Rendered { status: 0, text, record: record("d", ins, result, &[D_CITATION]) })
}

fn run_spins(args: &LensArgs) -> Result<Rendered, String> {
    let norm = normalized(args)?;
    let canonical = norm.lens.self_conjugate_spins();
    let spins: Vec<u64> =
        (0..norm.lens.p()).filter(|&i| canonical.contains(&norm.map_spin(i))).collect();
    let text = spins.iter().map(u64::to_string).collect::<Vec<_>>().join(" ") + "\n";
    let ins = inputs([("p", args.p.to_string()), ("q", args.q.to_string())]);
    Ok(Rendered { status: 0, text, record: record("spins", ins, json!(spins), &[SPIN_CITATION]) })
}

fn run_linkform(n: i64) -> Result<Rendered, String> {
    let filling = filling_linking_form(n).map_err(|e| e.to_string())?;
    let target = target_linking_form(n).map_err(|e| e.to_string())?;
    let equivalent = linking_forms_equivalent(&filling, &target);
    let text = format!(
        "filling {filling}, target {target}: {}\n",
        if equivalent { "equivalent" } else { "not equivalent" }
    );
    let result = json!({
        "filling": filling.to_string(),
        "target": target.to_string(),
        "equivalent": equivalent,
    });
    let rec = record("linkform", inputs([("n", n.to_string())]), result, &[LINKFORM_CITATION]);
    Ok(Rendered { status: 0, text, record: rec })
}

fn summary_line(report: &ObstructionReport) -> String {
    match (report.firing_check, &report.witness) {
        (Some(check), _) => format!("{} (by {check})", report.verdict),
        (None, Some(w)) => format!("{} (witness: {})", report.verdict, w.label()),
        (None, None) => report.verdict.to_string(),
    }
}

fn run_classify(n: i64, trace: bool) -> Rendered {
    let report = classify(n);
    let mut text = summary_line(&report) + "\n";
    if trace {
        for r in &report.trace {
            text.push_str(&format!("  {} {}: {}\n", r.check, r.outcome, r.detail));
        }
    }
    let mut citations: Vec<&str> = report.trace.iter().map(|r| r.citation.as_str()).collect();
    citations.dedup();
    let mut result = serde_json::to_value(&report).expect("report is plain data");
    if !trace {
        result.as_object_mut().expect("report is an object").remove("trace");
    }
    let rec = record("classify", inputs([("n", n.to_string())]), result, &citations);
    Rendered { status: 0, text, record: rec }
}

fn run_scan(from: i64, to: i64, check_theorem: bool, csv: bool) -> Result<Rendered, String> {
    if from > to {
        return Err(format!("empty range {from}..{to}"));
    }
    let result = scan(from, to);
    let summary = &result.summary;
    let status = if check_theorem && !summary.matches_theorem { 1 } else { 0 };
    let join = |v: &[i64]| v.iter().map(i64::to_string).collect::<Vec<_>>().join(" ");
    let text = if csv {
        scan_csv(&result.reports)
    } else {
        let obstructed = result.reports.iter().filter(|r| r.is_obstructed()).count();
        format!(
            "scanned {} values, {obstructed} obstructed\nnot obstructed: {}\nexpected:       {}\n{}\n",
            result.reports.len(),
            join(&summary.not_obstructed),
            join(&summary.expected),
            if summary.matches_theorem { "match" } else { "MISMATCH" }
        )
    };
    let rows: Vec<Value> = result
        .reports
        .iter()
        .map(|r| {
            json!({
                "n": r.n,
                "verdict": r.verdict.to_string(),
                "firing_check": r.firing_check.map(|c| c.to_string()),
                "N0": r.n0(),
                "witness": r.witness.map(|w| w.label()),
            })
        })
        .collect();
    let value = json!({ "reports": rows, "summary": summary });
    let mut ins = inputs([("from", from.to_string()), ("to", to.to_string())]);
    ins.insert("check_theorem".into(), check_theorem.to_string());
    Ok(Rendered { status, text, record: record("scan", ins, value, &[]) })
}

fn scan_csv(reports: &[ObstructionReport]) -> String {
    let mut writer = csv::Writer::from_writer(Vec::new());
    writer
        .write_record(["n", "verdict", "firing_check", "N0", "witness"])
        .expect("in-memory write");
    for r in reports {
        writer
            .write_record([
                r.n.to_string(),
                r.verdict.to_string(),
                r.firing_check.map(|c| c.to_string()).unwrap_or_default(),
                r.n0().unwrap_or_default().to_string(),
                r.witness.map(|w| w.label()).unwrap_or_default(),
            ])
            .expect("in-memory write");
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("fields are utf-8")
}

fn run_band(n: i64, coherent: bool) -> Rendered {
    let coherence = if coherent { Coherence::Coherent } else { Coherence::NonCoherent };
    let verdict = banding_possible(n, coherence);
    let link = TorusLink::new(n);
    let text = match (&verdict.witness, verdict.possible) {
        (Some(w), true) => format!("possible (witness: {}: {})\n", w.label(), w.description),
        (None, true) => "possible\n".to_string(),
        (_, false) => format!("impossible ({})\n", serde_json::to_value(verdict.reason).unwrap().as_str().unwrap()),
    };
    let mut result = serde_json::to_value(&verdict).expect("verdict is plain data");
    result["link"] = serde_json::to_value(link).expect("link is plain data");
    let ins = inputs([("n", n.to_string()), ("coherence", coherence.to_string())]);
    Rendered { status: 0, text, record: record("band", ins, result, &[BAND_CITATION]) }
}
