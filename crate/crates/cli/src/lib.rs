// SPDX-License-Identifier: Apache-2.0

//! Command-line front end. Every verb is a thin adapter over `revlogic`;
//! [`run`] returns the exit code and rendered streams so tests can drive it
//! without a subprocess.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use revlogic::netlist::{parse_netlist, parse_stimulus, LineRole, Netlist};
use revlogic::perm::{builtin_gate, code_bit, is_bijective, Permutation, BUILTIN_GATES};
use revlogic::quantum::{registered_decomposition, verify_registry, RegistryEntry};
use revlogic::seq::{
    builtin_design, claims_ledger, improvement_rows, settle, verify_spec, ClaimRecord, Verdict,
    BUILTIN_DESIGNS,
};
use revlogic::synth::{
    build_cost_atlas, min_cost_synthesis, AtlasLimits, CostAtlas, CostCertifier,
};

/// Environment variable naming an atlas snapshot file.
pub const ATLAS_ENV: &str = "REVLOGIC_ATLAS";

/// Success.
pub const EXIT_OK: i32 = 0;
/// The command ran and found a mismatch.
pub const EXIT_MISMATCH: i32 = 1;
/// Bad invocation or an operational error.
pub const EXIT_USAGE: i32 = 2;

/// Certifier layout used when a synthesis bound exceeds the atlas.
const CERT_DEPTH: u32 = 5;
const CERT_MAX_SPLIT: u32 = 3;

type Failure = Box<dyn std::error::Error>;

#[derive(Debug, Parser)]
#[command(name = "revlogic", version, about = "Reversible-logic workbench")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Inspect the built-in gate library.
    Gates {
        #[command(subcommand)]
        action: GatesCmd,
    },
    /// Quantum-level verification and synthesis.
    Qc {
        #[command(subcommand)]
        action: QcCmd,
    },
    /// Cost, delay and garbage of a netlist file.
    Analyze { file: PathBuf },
    /// Settle a netlist once per stimulus step.
    Sim {
        file: PathBuf,
        #[arg(long)]
        stimulus: PathBuf,
    },
    /// Sequential checks of the built-in designs.
    Ff {
        #[command(subcommand)]
        action: FfCmd,
    },
    /// Published figures against recomputed values.
    Report {
        #[command(subcommand)]
        action: ReportCmd,
    },
}

#[derive(Debug, Subcommand)]
enum GatesCmd {
    List,
    Table { name: String },
    Check { name: String },
}

#[derive(Debug, Args)]
struct AtlasSource {
    /// Atlas snapshot to load instead of building one.
    #[arg(long, value_name = "FILE")]
    atlas: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum QcCmd {
    /// Simulate the registered decompositions.
    Verify { name: Option<String> },
    /// Minimum-cost NCV circuit for a gate or a permutation file.
    Synth {
        #[arg(required_unless_present = "perm", conflicts_with = "perm")]
        name: Option<String>,
        #[arg(long, value_name = "FILE")]
        perm: Option<PathBuf>,
        #[arg(long)]
        max_cost: Option<u32>,
        #[command(flatten)]
        source: AtlasSource,
    },
    /// Build a cost atlas.
    Atlas {
        #[arg(long)]
        width: usize,
        #[arg(long)]
        max_cost: u32,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
enum FfCmd {
    /// Exhaustive characteristic check; ID or `all`.
    Verify { id: String },
}

#[derive(Debug, Subcommand)]
enum ReportCmd {
    Claims {
        #[arg(long)]
        json: bool,
        #[arg(long)]
        design: Option<String>,
    },
    Improvements,
}

/// Exit code and captured streams of one invocation.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Output format of [`render_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

/// Sentinel printed for an empty record set.
pub const NO_RECORDS: &str = "no records";

fn opt(v: Option<i64>) -> String {
    v.map_or_else(|| "-".to_string(), |x| x.to_string())
}

/// Renders ledger rows with a fixed column order.
pub fn render_report(records: &[ClaimRecord], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(records).expect("records serialize");
            s.push('\n');
            s
        }
        Format::Text if records.is_empty() => format!("{NO_RECORDS}\n"),
        Format::Text => {
            let dw = records
                .iter()
                .map(|r| r.design.len())
                .max()
                .unwrap_or(0)
                .max(6);
            let mw = records
                .iter()
                .map(|r| r.metric.len())
                .max()
                .unwrap_or(0)
                .max(6);
            let mut s = format!(
                "{:<dw$}  {:<mw$}  {:>5}  {:>5}  {:>8}  verdict\n",
                "design", "metric", "text", "table", "achieved"
            );
            for r in records {
                let _ = writeln!(
                    s,
                    "{:<dw$}  {:<mw$}  {:>5}  {:>5}  {:>8}  {}",
                    r.design,
                    r.metric,
                    opt(r.text_claim),
                    opt(r.table_claim),
                    r.achieved,
                    r.verdict.as_str()
                );
            }
            s
        }
    }
}

struct Io {
    out: String,
    err: String,
}

/// Parses `argv` (program name first) and runs one verb.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            return if code == EXIT_OK {
                Outcome {
                    code,
                    stdout: text,
                    stderr: String::new(),
                }
            } else {
                Outcome {
                    code,
                    stdout: String::new(),
                    stderr: text,
                }
            };
        }
    };
    let mut io = Io {
        out: String::new(),
        err: String::new(),
    };
    let code = match dispatch(cli.command, &mut io) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(io.err, "error: {e}");
            EXIT_USAGE
        }
    };
    Outcome {
        code,
        stdout: io.out,
        stderr: io.err,
    }
}

fn dispatch(cmd: Command, io: &mut Io) -> Result<i32, Failure> {
    match cmd {
        Command::Gates { action } => gates(action, io),
        Command::Qc { action } => qc(action, io),
        Command::Analyze { file } => analyze(&file, io),
        Command::Sim { file, stimulus } => sim(&file, &stimulus, io),
        Command::Ff {
            action: FfCmd::Verify { id },
        } => ff_verify(&id, io),
        Command::Report { action } => report(action, io),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()).into())
}

fn bits(code: usize, width: usize) -> String {
    (0..width)
        .map(|l| if code_bit(code, l, width) { "1" } else { "0" })
        .collect::<Vec<_>>()
        .join(" ")
}

fn gates(cmd: GatesCmd, io: &mut Io) -> Result<i32, Failure> {
    match cmd {
        GatesCmd::List => {
            let _ = writeln!(
                io.out,
                "{:<5}  {:>5}  {:>7}  map",
                "gate", "width", "claimed"
            );
            for name in BUILTIN_GATES {
                let g = builtin_gate(name)?;
                let claimed = g.claimed_cost.map_or("-".to_string(), |c| c.to_string());
                let _ = writeln!(
                    io.out,
                    "{:<5}  {:>5}  {:>7}  {}",
                    g.name,
                    g.width(),
                    claimed,
                    g.perm
                );
            }
            Ok(EXIT_OK)
        }
        GatesCmd::Table { name } => {
            let g = builtin_gate(&name)?;
            let w = g.width();
            let _ = writeln!(io.out, "{} | {}", g.inputs.join(" "), g.outputs.join(" "));
            for code in 0..1usize << w {
                let _ = writeln!(
                    io.out,
                    "{} | {}",
                    bits(code, w),
                    bits(g.perm.apply(code), w)
                );
            }
            Ok(EXIT_OK)
        }
        GatesCmd::Check { name } => {
            let g = builtin_gate(&name)?;
            let bijective = is_bijective(&g.perm.codes())?;
            let balanced = g.perm.is_balanced();
            let yes = |b: bool| if b { "yes" } else { "no" };
            let _ = writeln!(
                io.out,
                "{}: bijective {}, balanced {}",
                g.name,
                yes(bijective),
                yes(balanced)
            );
            Ok(if bijective && balanced {
                EXIT_OK
            } else {
                EXIT_MISMATCH
            })
        }
    }
}

fn registry_line(e: &RegistryEntry) -> String {
    let claimed = e.claimed.map_or("-".to_string(), |c| c.to_string());
    let verdict = match (e.equivalent, e.claim_met) {
        (false, _) => "not equivalent",
        (true, Some(false)) => "cost differs from claim",
        (true, _) => "ok",
    };
    format!(
        "{:<5}  {:>10}  {:>4}  {:>5}  {:>7}  {verdict}",
        e.name,
        if e.equivalent { "yes" } else { "no" },
        e.cost,
        e.depth,
        claimed
    )
}

fn load_atlas(source: &AtlasSource, width: usize, io: &mut Io) -> Result<CostAtlas, Failure> {
    let path = source
        .atlas
        .clone()
        .or_else(|| std::env::var_os(ATLAS_ENV).map(PathBuf::from));
    if let Some(path) = path {
        let atlas = CostAtlas::from_snapshot(&read(&path)?)?;
        if atlas.width() == width {
            return Ok(atlas);
        }
        let _ = writeln!(
            io.err,
            "note: snapshot {} has width {}, building width {width} in-process",
            path.display(),
            atlas.width()
        );
    } else {
        let _ = writeln!(
            io.err,
            "note: no atlas snapshot given, building one in-process"
        );
    }
    Ok(build_cost_atlas(width, AtlasLimits::default().max_cost)?)
}

fn parse_perm_file(text: &str) -> Result<Permutation, Failure> {
    let codes = text
        .split(|c: char| c.is_whitespace() || matches!(c, ',' | '[' | ']'))
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| format!("`{t}` is not an output code"))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let width = codes.len().trailing_zeros() as usize;
    if codes.len() < 2 || codes.len() != 1 << width {
        return Err(format!("{} codes is not a power of two", codes.len()).into());
    }
    Ok(Permutation::from_codes(width, &codes)?)
}

fn qc(cmd: QcCmd, io: &mut Io) -> Result<i32, Failure> {
    match cmd {
        QcCmd::Verify { name } => {
            let report = verify_registry();
            let entries: Vec<&RegistryEntry> = match &name {
                Some(n) => vec![report.get(n).ok_or_else(|| format!("unknown gate `{n}`"))?],
                None => report.entries.iter().collect(),
            };
            let _ = writeln!(
                io.out,
                "{:<5}  {:>10}  {:>4}  {:>5}  {:>7}  verdict",
                "gate", "equivalent", "cost", "depth", "claimed"
            );
            for e in &entries {
                let _ = writeln!(io.out, "{}", registry_line(e));
                if name.is_some() {
                    let _ = writeln!(io.out, "circuit: {}", registered_decomposition(&e.name)?);
                }
            }
            Ok(if entries.iter().all(|e| e.passed()) {
                EXIT_OK
            } else {
                EXIT_MISMATCH
            })
        }
        QcCmd::Synth {
            name,
            perm,
            max_cost,
            source,
        } => {
            let p = match (&name, &perm) {
                (Some(n), _) => builtin_gate(n)?.perm,
                (None, Some(path)) => parse_perm_file(&read(path)?)?,
                (None, None) => unreachable!("clap requires one of them"),
            };
            let limit = AtlasLimits::default().max_cost;
            let bound = max_cost.unwrap_or(limit);
            let found = if bound <= limit {
                let atlas = load_atlas(&source, p.width(), io)?;
                min_cost_synthesis(&atlas, &p, bound)?
            } else {
                let split = bound.saturating_sub(CERT_DEPTH);
                if split > CERT_MAX_SPLIT {
                    return Err(format!(
                        "--max-cost {bound} exceeds the search reach {}",
                        CERT_DEPTH + CERT_MAX_SPLIT
                    )
                    .into());
                }
                let _ = writeln!(
                    io.err,
                    "note: bound {bound} exceeds the atlas, using a split search"
                );
                let certifier = CostCertifier::new(p.width(), CERT_DEPTH, split)?;
                certifier.min_cost(&p, bound)?.map(|c| (c.cost, c.circuit))
            };
            let _ = writeln!(io.out, "permutation: {p}");
            match found {
                Some((cost, circuit)) => {
                    let _ = writeln!(io.out, "cost: {cost}");
                    let _ = writeln!(io.out, "circuit: {circuit}");
                    Ok(EXIT_OK)
                }
                None => {
                    let _ = writeln!(io.out, "no realization within cost {bound}");
                    Ok(EXIT_MISMATCH)
                }
            }
        }
        QcCmd::Atlas {
            width,
            max_cost,
            out,
        } => {
            let atlas = build_cost_atlas(width, max_cost)?;
            let _ = writeln!(
                io.out,
                "width {width}, max cost {max_cost}: {} permutations",
                atlas.len()
            );
            for (cost, n) in atlas.histogram().iter().enumerate() {
                let _ = writeln!(io.out, "cost {cost}: {n}");
            }
            if let Some(path) = out {
                std::fs::write(&path, atlas.to_snapshot())
                    .map_err(|e| format!("{}: {e}", path.display()))?;
                let _ = writeln!(io.out, "snapshot written to {}", path.display());
            }
            Ok(EXIT_OK)
        }
    }
}

fn analyze(file: &Path, io: &mut Io) -> Result<i32, Failure> {
    let n = parse_netlist(&read(file)?)?;
    let m = n.metrics()?;
    let _ = writeln!(io.out, "lines: {}", n.width());
    let _ = writeln!(io.out, "gates: {}", m.gate_count);
    let _ = writeln!(io.out, "quantum cost: {}", m.quantum_cost);
    let _ = writeln!(io.out, "delay (depth): {}", m.delay);
    let _ = writeln!(io.out, "delay (serial): {}", m.serial_delay);
    let garbage: Vec<String> = n.garbage_lines().iter().map(usize::to_string).collect();
    let _ = writeln!(io.out, "garbage: {} [{}]", m.garbage, garbage.join(" "));
    let consts = n
        .roles()
        .iter()
        .filter(|r| matches!(r, LineRole::Const(_)))
        .count();
    let _ = writeln!(io.out, "constant inputs: {consts}");
    let _ = writeln!(io.out, "feedbacks: {}", n.feedbacks().len());
    Ok(EXIT_OK)
}

fn output_bits(n: &Netlist, values: &[bool]) -> String {
    n.outputs()
        .iter()
        .map(|o| format!("{}={}", o.label, u8::from(values[o.line])))
        .collect::<Vec<_>>()
        .join(" ")
}

fn sim(file: &Path, stimulus: &Path, io: &mut Io) -> Result<i32, Failure> {
    let n = parse_netlist(&read(file)?)?;
    let steps = parse_stimulus(&read(stimulus)?)?.resolve(&n)?;
    let mut state = vec![false; n.feedbacks().len()];
    for (i, inputs) in steps.iter().enumerate() {
        let shown = inputs
            .iter()
            .map(|(k, v)| format!("{k}={}", u8::from(*v)))
            .collect::<Vec<_>>()
            .join(" ");
        match settle(&n, inputs, &state) {
            Ok(s) => {
                let _ = writeln!(
                    io.out,
                    "step {}: {shown} -> {} (settled in {})",
                    i + 1,
                    output_bits(&n, &s.values),
                    s.iterations
                );
                state = s.state;
            }
            Err(e) => {
                let _ = writeln!(io.out, "step {}: {shown} -> {e}", i + 1);
                return Ok(EXIT_MISMATCH);
            }
        }
    }
    Ok(EXIT_OK)
}

fn ff_verify(id: &str, io: &mut Io) -> Result<i32, Failure> {
    let ids: Vec<&str> = if id == "all" {
        BUILTIN_DESIGNS.to_vec()
    } else {
        vec![id]
    };
    let mut ok = true;
    for id in ids {
        let spec = builtin_design(id)?;
        let report = verify_spec(&spec)?;
        let _ = writeln!(
            io.out,
            "{id}: {} ({}) {}/{} {}",
            report.characteristic.name(),
            report.formula,
            report.pass_count(),
            report.rows.len(),
            if report.passed() { "pass" } else { "FAIL" }
        );
        for row in report.rows.iter().filter(|r| !r.passed) {
            let _ = writeln!(io.out, "  {}", row.describe());
        }
        ok &= report.passed();
    }
    Ok(if ok { EXIT_OK } else { EXIT_MISMATCH })
}

fn report(cmd: ReportCmd, io: &mut Io) -> Result<i32, Failure> {
    match cmd {
        ReportCmd::Claims { json, design } => {
            let records: Vec<ClaimRecord> = claims_ledger()?
                .into_iter()
                .filter(|r| {
                    design
                        .as_ref()
                        .is_none_or(|d| r.design.eq_ignore_ascii_case(d))
                })
                .collect();
            let format = if json { Format::Json } else { Format::Text };
            io.out.push_str(&render_report(&records, format));
            let flagged = records.iter().any(|r| r.verdict == Verdict::Mismatch);
            Ok(if flagged { EXIT_MISMATCH } else { EXIT_OK })
        }
        ReportCmd::Improvements => {
            let rows = improvement_rows();
            let _ = writeln!(
                io.out,
                "{:<8}  {:<13}  {:<12}  {:>8}  {:>8}  {:>7}  {:>8}  result",
                "design", "versus", "metric", "existing", "proposed", "printed", "achieved"
            );
            for r in &rows {
                let _ = writeln!(
                    io.out,
                    "{:<8}  {:<13}  {:<12}  {:>8}  {:>8}  {:>7}  {:>8}  {}",
                    r.design,
                    r.versus,
                    r.metric,
                    r.existing,
                    r.proposed,
                    r.printed,
                    r.achieved,
                    if r.reproduced() { "ok" } else { "differs" }
                );
            }
            Ok(if rows.iter().all(|r| r.reproduced()) {
                EXIT_OK
            } else {
                EXIT_MISMATCH
            })
        }
    }
}
