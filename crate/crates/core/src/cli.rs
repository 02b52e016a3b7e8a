//! Command-line front end.
//!
//! Every command renders its whole table into memory first, so a failing
//! command never leaves partial output behind. Errors go to stderr as a JSON
//! object with a machine-readable `reason`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::admissible::{assess, default_depth, Verdict};
use crate::blattner::{c_norms, restrict_to_k};
use crate::branching::{check_cutoff, restrict_discrete_series, ChamberCheck, RestrictOptions};
use crate::bundled;
use crate::chambers::{c_norm2, chamber_by_id, enumerate_all_orbits, enumerate_chambers, orbit_param};
use crate::config::Config;
use crate::error::{Error, Result};
use crate::exact::{fmt_q, parse_q, Q};
use crate::rootdata::GroupData;
use crate::selftest::{self, SelftestOptions};
use crate::spinor::spinor_character;
use crate::weight::Weight;

#[derive(Parser, Debug)]
#[command(name = "orbita", version, about = "Exact branching laws for discrete series")]
pub struct Cli {
    /// Config file describing a group or a pair.
    #[arg(long, visible_alias = "pair", global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Use a config shipped with the crate instead of a file.
    #[arg(long, global = true, value_name = "NAME", conflicts_with = "config")]
    pub bundled: Option<String>,
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Coordinates for weights on input and output.
    #[arg(long, global = true, value_enum, default_value_t = Basis::Root)]
    pub basis: Basis,
    /// Which group of a pair config the group-level commands act on.
    #[arg(long, global = true, value_enum, default_value_t = Which::G)]
    pub group: Which,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Basis {
    /// Simple-root coordinates.
    Root,
    /// Fundamental-weight coordinates.
    Fundamental,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Which {
    G,
    Gprime,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// List the chambers: id, sign vector, representative.
    Chambers,
    /// List admissible orbit parameters with c^G up to the cutoff.
    Orbits(CutoffArg),
    /// Dump the spinor character attached to a chamber.
    Spinor {
        /// Chamber id as printed by `chambers`.
        #[arg(long)]
        chamber: usize,
    },
    /// K-type multiplicities of a discrete series.
    Blattner(OrbitArgs),
    /// Decide admissibility of the restriction of a discrete series of G'.
    Admissible {
        /// Parameter of G', defaults to the config's `[run] orbit`.
        #[arg(long, allow_hyphen_values = true)]
        orbit: Option<String>,
        /// Radius of the shell used to estimate the support cone.
        #[arg(long)]
        depth: Option<String>,
    },
    /// Branching multiplicities of a discrete series of G' restricted to G.
    Restrict {
        #[command(flatten)]
        args: OrbitArgs,
        /// Radius of the shell used to estimate the support cone.
        #[arg(long)]
        depth: Option<String>,
        /// Use two-radius stabilization instead of the certified radius.
        #[arg(long)]
        stabilize: bool,
        /// Run uncertified even when the pair is not admissible.
        #[arg(long)]
        force: bool,
    },
    /// Run the built-in acceptance suite.
    Selftest(CutoffArg),
}

#[derive(Args, Debug)]
pub struct CutoffArg {
    /// Largest c-norm to report, a rational such as "25" or "17/2".
    #[arg(long)]
    pub cutoff: Option<String>,
}

#[derive(Args, Debug)]
pub struct OrbitArgs {
    /// Coordinates, comma or space separated, e.g. "1/2,1/2".
    #[arg(long, allow_hyphen_values = true)]
    pub orbit: Option<String>,
    /// Largest c-norm to report, a rational such as "25" or "17/2".
    #[arg(long)]
    pub cutoff: Option<String>,
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_)
        | Error::Parse(_)
        | Error::InvalidCartan(_)
        | Error::InconsistentFlags(_)
        | Error::InvalidDatum(_)
        | Error::IncompatibleLattices(_) => 2,
        Error::NotAdmissiblePair(_) => 3,
        e if e.is_internal_consistency() => 4,
        _ => 1,
    }
}

/// Parses arguments and runs, writing to the given streams. Returns the exit
/// status.
pub fn run_from<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    configure_threads();
    match execute(&cli) {
        Ok(Output { text, code, stderr }) => {
            let _ = out.write_all(text.as_bytes());
            if let Some(s) = stderr {
                let _ = writeln!(err, "{s}");
            }
            code
        }
        Err(e) => {
            let body = json!({ "error": e.reason(), "message": e.to_string() });
            let _ = writeln!(err, "{body}");
            exit_code(&e)
        }
    }
}

fn configure_threads() {
    if let Some(n) = std::env::var("ORBITA_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        // A second call in the same process fails harmlessly.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

struct Output {
    text: String,
    code: i32,
    stderr: Option<String>,
}

impl Output {
    fn ok(text: String) -> Self {
        Output { text, code: 0, stderr: None }
    }
}

fn load_config(cli: &Cli) -> Result<Option<Config>> {
    if let Some(path) = &cli.config {
        return Config::load(path).map(Some);
    }
    if let Some(name) = &cli.bundled {
        return bundled::config(name).map(Some);
    }
    Ok(None)
}

fn require(cfg: Option<Config>) -> Result<Config> {
    cfg.ok_or_else(|| Error::Config("no config given; use --config <file> or --bundled <name>".into()))
}

fn target_group(cli: &Cli, cfg: &Config) -> Result<GroupData> {
    match cli.group {
        Which::G => cfg.group(),
        Which::Gprime => {
            cfg.group.gprime.as_ref().ok_or_else(|| Error::Config("config has no [group.gprime]".into()))?.group()
        }
    }
}

fn parse_coords(s: &str) -> Result<Vec<Q>> {
    let s = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    s.split(|c: char| c == ',' || c.is_whitespace()).filter(|t| !t.is_empty()).map(parse_q).collect()
}

struct Coords<'a> {
    g: &'a GroupData,
    basis: Basis,
}

impl Coords<'_> {
    fn input(&self, s: &str) -> Result<Weight> {
        let v = parse_coords(s)?;
        if v.len() != self.g.rank() {
            return Err(Error::Parse(format!("expected {} coordinates, got {}", self.g.rank(), v.len())));
        }
        Ok(match self.basis {
            Basis::Root => Weight(v),
            Basis::Fundamental => self.g.from_fundamental(&v),
        })
    }

    fn output(&self, w: &Weight) -> Value {
        let v = match self.basis {
            Basis::Root => w.0.clone(),
            Basis::Fundamental => self.g.to_fundamental(w),
        };
        Value::Array(v.iter().map(|x| Value::String(fmt_q(x))).collect())
    }
}

fn rational(x: &Q) -> Value {
    Value::String(fmt_q(x))
}

type Row = Vec<(&'static str, Value)>;

fn render(rows: &[Row], format: Format) -> String {
    match format {
        Format::Json => rows.iter().map(|r| json_line(r) + "\n").collect(),
        Format::Csv => render_csv(rows),
    }
}

fn json_line(row: &Row) -> String {
    let fields: Vec<String> = row.iter().map(|(k, v)| format!("{}:{}", Value::from(*k), v)).collect();
    format!("{{{}}}", fields.join(","))
}

fn cell_columns(key: &str, v: &Value) -> Vec<(String, String)> {
    match v {
        Value::Array(items) if items.iter().all(|x| !x.is_array() && !x.is_object()) => {
            items.iter().enumerate().map(|(i, x)| (format!("{key}_{}", i + 1), scalar(x))).collect()
        }
        other => vec![(key.to_string(), scalar(other))],
    }
}

fn scalar(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn render_csv(rows: &[Row]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for (i, row) in rows.iter().enumerate() {
        let cells: Vec<(String, String)> = row.iter().flat_map(|(k, v)| cell_columns(k, v)).collect();
        if i == 0 {
            w.write_record(cells.iter().map(|c| &c.0)).expect("in-memory write");
        }
        w.write_record(cells.iter().map(|c| &c.1)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}

fn cutoff_or(arg: &Option<String>, cfg: &Config) -> Result<Q> {
    let r = match arg {
        Some(s) => parse_q(s)?,
        None => cfg.cutoff()?.ok_or_else(|| Error::Config("no --cutoff and no [run] cutoff".into()))?,
    };
    check_cutoff(&r)?;
    Ok(r)
}

fn orbit_or(arg: &Option<String>, cfg: &Config, coords: &Coords<'_>) -> Result<Weight> {
    match arg {
        Some(s) => coords.input(s),
        None => cfg.orbit()?.ok_or_else(|| Error::Config("no --orbit and no [run] orbit".into())),
    }
}

fn execute(cli: &Cli) -> Result<Output> {
    let cfg = load_config(cli)?;
    if let Command::Selftest(arg) = &cli.command {
        let cutoff = arg.cutoff.as_deref().map(parse_q).transpose()?;
        if let Some(r) = &cutoff {
            check_cutoff(r)?;
        }
        let report = selftest::run(&SelftestOptions { cutoff, config: cfg });
        let mut text = String::new();
        for o in &report.outcomes {
            text.push_str(&o.to_string());
            text.push('\n');
        }
        if report.passed() {
            return Ok(Output::ok(text));
        }
        let failed: Vec<Value> = report.failures().map(|o| json!({ "criterion": o.id, "name": o.name })).collect();
        let stderr = json!({ "error": "selftest_failed", "failed": failed }).to_string();
        return Ok(Output { text, code: 4, stderr: Some(stderr) });
    }
    let cfg = require(cfg)?;
    match &cli.command {
        Command::Chambers => {
            let g = target_group(cli, &cfg)?;
            let c = Coords { g: &g, basis: cli.basis };
            let rows: Vec<Row> = enumerate_chambers(&g)
                .iter()
                .map(|ch| {
                    vec![
                        ("id", json!(ch.id)),
                        ("signs", json!(ch.signs)),
                        ("representative", c.output(&ch.representative)),
                    ]
                })
                .collect();
            Ok(Output::ok(render(&rows, cli.format.unwrap_or(Format::Json))))
        }
        Command::Orbits(arg) => {
            let g = target_group(cli, &cfg)?;
            let r = cutoff_or(&arg.cutoff, &cfg)?;
            let c = Coords { g: &g, basis: cli.basis };
            let mut orbits = enumerate_all_orbits(&g, &r);
            orbits.sort_by(|a, b| a.lambda.cmp(&b.lambda));
            let rows: Vec<Row> = orbits
                .iter()
                .map(|o| {
                    vec![
                        ("lambda", c.output(&o.lambda)),
                        ("chamber", json!(o.chamber)),
                        ("c_norm2", rational(&c_norm2(&g, &o.lambda))),
                    ]
                })
                .collect();
            Ok(Output::ok(render(&rows, cli.format.unwrap_or(Format::Json))))
        }
        Command::Spinor { chamber } => {
            let g = target_group(cli, &cfg)?;
            let ch =
                chamber_by_id(&g, *chamber).ok_or_else(|| Error::Config(format!("no chamber with id {chamber}")))?;
            let s = spinor_character(&g, &ch.representative)?;
            let c = Coords { g: &g, basis: cli.basis };
            let rows: Vec<Row> =
                s.terms.iter().map(|(w, m)| vec![("weight", c.output(w)), ("coefficient", json!(m))]).collect();
            Ok(Output::ok(render(&rows, cli.format.unwrap_or(Format::Json))))
        }
        Command::Blattner(args) => {
            let g = target_group(cli, &cfg)?;
            let c = Coords { g: &g, basis: cli.basis };
            let lambda = orbit_or(&args.orbit, &cfg, &c)?;
            let r = cutoff_or(&args.cutoff, &cfg)?;
            let orbit = orbit_param(&g, &lambda)?;
            let v = restrict_to_k(&g, &orbit, &r)?;
            let rows: Vec<Row> = v
                .coeffs
                .iter()
                .map(|(mu, m)| {
                    vec![
                        ("mu", c.output(mu)),
                        ("multiplicity", json!(m)),
                        ("ck2", rational(&c_norms(&g, &orbit, mu).ck2)),
                    ]
                })
                .collect();
            Ok(Output::ok(render(&rows, cli.format.unwrap_or(Format::Csv))))
        }
        Command::Admissible { orbit, depth } => {
            let pair = cfg.pair()?;
            let c = Coords { g: &pair.gprime, basis: cli.basis };
            let lp = orbit_or(orbit, &cfg, &c)?;
            let o = orbit_param(&pair.gprime, &lp)?;
            let depth = match depth {
                Some(s) => parse_q(s)?,
                None => cfg.depth()?.unwrap_or_else(|| default_depth(&pair.gprime, &o)),
            };
            let (cone, v) = assess(&pair.gprime, &pair.g, &pair.embedding, &o, &depth, pair.cartan_saturation)?;
            let mut row: Row = match &v.status {
                Verdict::Admissible { gap, gap_exact } => {
                    vec![("verdict", json!("admissible")), ("gap", rational(gap)), ("gap_exact", json!(gap_exact))]
                }
                Verdict::NotAdmissible { witness } => {
                    vec![("verdict", json!("not_admissible")), ("witness", c.output(witness))]
                }
                Verdict::Unknown { reason } => vec![("verdict", json!("unknown")), ("reason", json!(reason))],
            };
            row.push(("backend", serde_json::to_value(v.backend).expect("enum serializes")));
            row.push(("depth", rational(&depth)));
            row.push(("generators", json!(cone.generators.len())));
            Ok(Output::ok(render(&[row], cli.format.unwrap_or(Format::Json))))
        }
        Command::Restrict { args, depth, stabilize, force } => {
            let pair = cfg.pair()?;
            let cp = Coords { g: &pair.gprime, basis: cli.basis };
            let cg = Coords { g: &pair.g, basis: cli.basis };
            let lp = orbit_or(&args.orbit, &cfg, &cp)?;
            let r = cutoff_or(&args.cutoff, &cfg)?;
            let depth = match depth {
                Some(s) => Some(parse_q(s)?),
                None => cfg.depth()?,
            };
            let opts = RestrictOptions { depth, force: *force, stabilize: *stabilize };
            let res = restrict_discrete_series(&pair, &lp, &r, &opts)?;
            let rows: Vec<Row> = res
                .entries
                .iter()
                .map(|e| {
                    vec![
                        ("orbit", cg.output(&e.orbit.lambda)),
                        ("multiplicity", json!(e.multiplicity)),
                        ("certified", json!(e.certified)),
                        ("stable", json!(e.stable)),
                        ("chamber", json!(e.orbit.chamber)),
                        ("c_norm2", rational(&e.c_norm2)),
                    ]
                })
                .collect();
            let unique = match &res.chamber {
                ChamberCheck::Unique { chamber } => json!(chamber),
                ChamberCheck::Violation(v) => {
                    json!({ "violation": v.witnesses.iter().map(|o| cg.output(&o.lambda)).collect::<Vec<_>>() })
                }
            };
            let summary: Row = vec![
                ("summary", json!(true)),
                ("gap", res.gap.as_ref().map_or(Value::Null, rational)),
                ("cutoff", rational(&res.cutoff)),
                ("unique_chamber", unique),
                ("mode", serde_json::to_value(res.mode).expect("enum serializes")),
                ("kprime_radius", rational(&res.kprime_radius)),
                ("parity_checked", json!(res.parity.checked)),
                ("parity_in_k_out", json!(res.parity.in_k_out)),
            ];
            let format = cli.format.unwrap_or(Format::Json);
            let mut text = render(&rows, format);
            match format {
                Format::Json => text.push_str(&(json_line(&summary) + "\n")),
                Format::Csv => text.push_str(&format!("# summary {}\n", json_line(&summary))),
            }
            Ok(Output::ok(text))
        }
        Command::Selftest(_) => unreachable!("handled above"),
    }
}
