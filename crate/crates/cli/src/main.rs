use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use srg_core::families::{FamilyError, FamilySpec};
use srg_core::matrep::{ElementCache, MatError, DEFAULT_CAP};
use srg_core::reflect::{inventory, verify_lemmas, ReflectError};
use srg_core::verdict::{
    all_open_after_crude, open_after_refined, reflection_table, verify_table2, CaseStatus, PairStatus, Stage,
    VerdictError, CHAMP_RECORDS,
};
use srg_core::ws2::{build_ws2, stabilizer_pipeline, Ws2Error, Ws2Options};

mod report;

use report::{Format, Report};

#[derive(Parser, Debug)]
#[command(
    name = "srg",
    version,
    about = "Tables and checks for rank-two symplectic reflection groups"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct Global {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Directory for cached element sets (SRG_CACHE takes precedence).
    #[arg(long, global = true)]
    cache: Option<PathBuf>,
    /// Largest group the run may enumerate.
    #[arg(long, global = true, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// Worker threads; defaults to available parallelism.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Seed echoed in the report for reproducible randomized runs.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reflection counts or open cases.
    Tables {
        #[command(subcommand)]
        table: Table,
    },
    /// Subgroup relations or per-group structural checks.
    Verify {
        #[command(subcommand)]
        what: Verify,
    },
    /// Symplectic reflections of E(G) for one group.
    Inventory {
        #[arg(long)]
        spec: String,
    },
    /// The W(S_2) stabilizer computation.
    Ws2 {
        /// Also compare against a full stabilizer filter and symmetric powers.
        #[arg(long)]
        full: bool,
    },
}

#[derive(Subcommand, Debug)]
enum Table {
    /// N and the minimal d for each reflection group.
    Reflections,
    /// Cases still open after a stage.
    Open {
        #[arg(long, value_enum, default_value_t = OpenStage::Refined)]
        stage: OpenStage,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OpenStage {
    Crude,
    Refined,
}

#[derive(Subcommand, Debug)]
enum Verify {
    /// Containments among the seventeen reflection groups.
    Subgroups,
    /// Structural checks; repeat --spec, or pass --open for every crude-stage case.
    Lemmas {
        #[arg(long)]
        spec: Vec<String>,
        #[arg(long)]
        open: bool,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Output(String),
    Overflow(String),
    Other(String),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Usage(_) => 2,
            Failure::Output(_) => 3,
            Failure::Overflow(_) => 4,
            Failure::Other(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Output(m) | Failure::Overflow(m) | Failure::Other(m) => m,
        }
    }
}

impl From<MatError> for Failure {
    fn from(e: MatError) -> Self {
        match e {
            MatError::ClosureOverflow { .. } => Failure::Overflow(e.to_string()),
            e => Failure::Other(e.to_string()),
        }
    }
}

impl From<FamilyError> for Failure {
    fn from(e: FamilyError) -> Self {
        match e {
            FamilyError::Matrix(m) => m.into(),
            e => Failure::Usage(e.to_string()),
        }
    }
}

impl From<ReflectError> for Failure {
    fn from(e: ReflectError) -> Self {
        match e {
            ReflectError::Matrix(m) => m.into(),
            ReflectError::Family(f) => f.into(),
            e => Failure::Other(e.to_string()),
        }
    }
}

impl From<VerdictError> for Failure {
    fn from(e: VerdictError) -> Self {
        match e {
            VerdictError::Reflect(r) => r.into(),
            e => Failure::Other(e.to_string()),
        }
    }
}

impl From<Ws2Error> for Failure {
    fn from(e: Ws2Error) -> Self {
        match e {
            Ws2Error::Matrix(m) => m.into(),
            e => Failure::Other(e.to_string()),
        }
    }
}

fn parse_spec(s: &str) -> Result<FamilySpec, Failure> {
    s.parse::<FamilySpec>()
        .map_err(|e| Failure::Usage(format!("invalid spec {s:?}: {e}")))
}

fn check_cap(needed: u64, cap: usize) -> Result<(), Failure> {
    if needed > cap as u64 {
        return Err(MatError::ClosureOverflow { cap }.into());
    }
    Ok(())
}

fn echo(args: &[String]) -> String {
    args.iter().skip(1).cloned().collect::<Vec<_>>().join(" ")
}

fn stage_certificates(c: &CaseStatus, crude: bool) -> Vec<String> {
    let has_data = CHAMP_RECORDS.iter().any(|r| r.g0 == c.g0 && r.has_data);
    let tag = match (c.stage, crude, has_data) {
        (Stage::SelfCase, _, _) => "self-case",
        (_, true, _) => "below-crude-bound",
        (_, false, true) => "refined-bound-not-met",
        (_, false, false) => "no-data",
    };
    vec![tag.to_string()]
}

fn tables(table: &Table, g: &Global, command: String) -> Result<Report, Failure> {
    check_cap(3600, g.cap)?;
    match table {
        Table::Reflections => {
            let rows = reflection_table()?;
            let mut report = Report::new(command, vec!["group", "N", "minimal_d"]);
            for r in rows {
                report.push(
                    json!({
                        "g0": r.g0.label(),
                        "kind": r.g0.kind.tag(),
                        "st": r.st_number,
                        "n": r.n,
                        "minimal_d": r.minimal_d,
                        "status": "pass",
                    }),
                    vec![r.g0.label(), r.n.to_string(), r.minimal_d.to_string()],
                );
            }
            Ok(report)
        }
        Table::Open { stage } => {
            let crude = *stage == OpenStage::Crude;
            let cases = if crude {
                all_open_after_crude()?
            } else {
                open_after_refined(&CHAMP_RECORDS)?
            };
            let mut report = Report::new(command, vec!["G0", "d_values"]);
            for (g0, ds) in srg_core::verdict::group_rows(&cases) {
                let list = ds.iter().map(|d| d.to_string()).collect::<Vec<_>>().join(" ");
                report.push_row(vec![g0.label(), list]);
            }
            for c in &cases {
                report.push_item(json!({
                    "g0": c.g0.label(),
                    "kind": c.g0.kind.tag(),
                    "d": c.d,
                    "status": c.stage.as_str(),
                    "certificates": stage_certificates(c, crude),
                }));
            }
            report.summary("cases", cases.len());
            Ok(report)
        }
    }
}

fn verify(what: &Verify, g: &Global, command: String) -> Result<Report, Failure> {
    match what {
        Verify::Subgroups => {
            check_cap(3600, g.cap)?;
            let rep = verify_table2()?;
            let mut report = Report::new(command, vec!["H", "G", "listed", "status", "certificates"]);
            for p in &rep.pairs {
                let status = match p.status {
                    PairStatus::Contained | PairStatus::Absent => "pass",
                    PairStatus::Undetermined => "undetermined",
                    PairStatus::Failed => "fail",
                };
                let certs: Vec<&str> = p.certificates.iter().map(|c| c.as_str()).collect();
                report.push(
                    json!({
                        "sub": p.sub.label(),
                        "group": p.group.label(),
                        "listed": p.listed,
                        "relation": p.status.as_str(),
                        "status": status,
                        "certificates": certs,
                        "witness": p.witness,
                    }),
                    vec![
                        p.sub.label(),
                        p.group.label(),
                        p.listed.to_string(),
                        p.status.as_str().to_string(),
                        certs.join(" "),
                    ],
                );
            }
            Ok(report)
        }
        Verify::Lemmas { spec, open } => {
            let mut specs: Vec<FamilySpec> = spec.iter().map(|s| parse_spec(s)).collect::<Result<_, _>>()?;
            if *open {
                specs.extend(all_open_after_crude()?.into_iter().map(|c| FamilySpec {
                    kind: c.g0.kind,
                    d: c.d,
                }));
            }
            if specs.is_empty() {
                return Err(Failure::Usage("verify lemmas needs --spec or --open".into()));
            }
            for s in &specs {
                check_cap(2 * s.order(), g.cap)?;
            }
            let mut report = Report::new(command, vec!["spec", "check", "status", "detail"]);
            for s in specs {
                let lr = verify_lemmas(s)?;
                for c in &lr.checks {
                    let status = if c.passed { "pass" } else { "fail" };
                    report.push(
                        json!({
                            "spec": s.to_string(),
                            "check": c.name,
                            "status": status,
                            "detail": c.detail,
                            "witness": c.witness,
                        }),
                        vec![s.to_string(), c.name.to_string(), status.to_string(), c.detail.clone()],
                    );
                }
                if let Some(n) = lr.symplectic_classes {
                    report.push_item(json!({
                        "spec": s.to_string(),
                        "check": "symplectic-classes",
                        "status": "pass",
                        "detail": format!("{n} E(G)-classes of symplectic reflections"),
                    }));
                }
            }
            Ok(report)
        }
    }
}

fn run(cli: &Cli, args: &[String]) -> Result<Report, Failure> {
    let g = &cli.global;
    let command = echo(args);
    let csv_ok = matches!(
        cli.command,
        Command::Tables { .. }
            | Command::Verify {
                what: Verify::Subgroups | Verify::Lemmas { .. }
            }
    );
    if g.format == Format::Csv && !csv_ok {
        return Err(Failure::Usage(
            "csv output is only available for tables and verify".into(),
        ));
    }
    match &cli.command {
        Command::Tables { table } => tables(table, g, command),
        Command::Verify { what } => verify(what, g, command),
        Command::Inventory { spec } => {
            let s = parse_spec(spec)?;
            check_cap(2 * s.order(), g.cap)?;
            let inv = inventory(s)?;
            let mut report = Report::new(command, vec![]);
            report.push_item(json!({
                "spec": s.to_string(),
                "g0": inv.g0.label(),
                "n": inv.n,
                "symplectic_reflections": inv.symplectic_reflections.len(),
                "g0vee_part": inv.g0vee_part.len(),
                "dd_part": inv.dd_part.len(),
                "dd_classes": inv.dd_class_count,
                "classes": inv.classes,
                "status": "pass",
            }));
            Ok(report)
        }
        Command::Ws2 { full } => {
            check_cap(srg_core::ws2::WS2_ORDER as u64, g.cap)?;
            let cache_dir = std::env::var_os("SRG_CACHE")
                .map(PathBuf::from)
                .or_else(|| g.cache.clone());
            let cache = cache_dir.map(ElementCache::new);
            let group = build_ws2(cache.as_ref(), g.cap)?;
            let rep = stabilizer_pipeline(
                &group,
                Ws2Options {
                    full: *full,
                    cap: g.cap,
                },
            )?;
            let mut report = Report::new(command, vec![]);
            for (name, ok) in rep.checks() {
                report.push_item(json!({"check": name, "status": if ok { "pass" } else { "fail" }}));
            }
            report.attach(
                "ws2",
                serde_json::to_value(&rep).map_err(|e| Failure::Other(e.to_string()))?,
            );
            Ok(report)
        }
    }
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>, Failure> {
    match path {
        Some(p) => File::create(p)
            .map(|f| Box::new(f) as Box<dyn Write>)
            .map_err(|e| Failure::Output(format!("cannot write {}: {e}", p.display()))),
        None => Ok(Box::new(io::stdout())),
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = cli.global.threads {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let result = open_output(&cli.global.out).and_then(|mut out| {
        let mut report = run(&cli, &args)?;
        report.seed = cli.global.seed;
        report
            .write(cli.global.format, &mut out)
            .map_err(|e| Failure::Output(e.to_string()))?;
        Ok(report.failed())
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(f) => {
            eprintln!("srg: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
