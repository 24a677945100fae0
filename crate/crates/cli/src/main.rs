use std::fs;
use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use prefcon_core::contract::{self, Mode};
use prefcon_core::symbolic;
use prefcon_core::winnow::{parse_skyline_spec, skyline_relation, winnow, winnow_ranks};
use prefcon_core::{ContractError, DataError, Dataset, DnfFormula, FiniteRelation, FormulaError, PreferenceSource, Schema};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "prefcon", version, about = "Contract strict-partial-order preference relations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Contract a finite relation given as an edge list.
    Contract {
        #[arg(long)]
        pref: PathBuf,
        #[arg(long)]
        con: PathBuf,
        #[arg(long)]
        protect: Option<PathBuf>,
        #[arg(long, default_value = "prefix", value_parser = parse_mode)]
        mode: Mode,
        /// Keep the per-stratum trace in the output.
        #[arg(long)]
        trace: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Contract a relation given by a formula.
    ContractSym {
        #[arg(long)]
        schema: PathBuf,
        #[arg(long)]
        pref: PathBuf,
        #[arg(long)]
        con: PathBuf,
        #[arg(long)]
        protect: Option<PathBuf>,
        #[arg(long, default_value = "prefix", value_parser = parse_mode)]
        mode: Mode,
        /// Only report whether the base contractor is finitely stratifiable.
        #[arg(long)]
        check_only: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Best rows of a CSV dataset under a preference relation.
    Winnow {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        source: SourceArgs,
        /// Emit every row with a `winnow_rank` column (0 = best).
        #[arg(long)]
        annotate: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pareto dominance relation of a dataset, as an edge list.
    Skyline {
        #[command(flatten)]
        data: DataArgs,
        #[arg(long)]
        spec: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the session HTTP service.
    Serve {
        #[arg(long, default_value_t = 8080)]
        port: u16,
        #[arg(long, default_value = "0.0.0.0")]
        host: String,
        /// Directory holding the session logs.
        #[arg(long, env = prefcon_session::DATA_ENV, default_value = "prefcon-data")]
        data: PathBuf,
    },
}

#[derive(Args)]
struct DataArgs {
    #[arg(long)]
    schema: PathBuf,
    /// CSV file with a header row.
    #[arg(long)]
    data: PathBuf,
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct SourceArgs {
    /// Edge list over row keys.
    #[arg(long)]
    pref: Option<PathBuf>,
    /// File holding a preference formula.
    #[arg(long)]
    formula: Option<PathBuf>,
    /// Skyline spec such as `price=min,year=max`.
    #[arg(long)]
    spec: Option<String>,
}

fn parse_mode(s: &str) -> Result<Mode, String> {
    Mode::parse(s).ok_or_else(|| format!("unknown mode {s:?} (prefix, meet, protecting, protecting-meet)"))
}

struct Failure {
    code: String,
    message: String,
    detail: Value,
}

impl Failure {
    fn new(code: &str, message: impl Into<String>) -> Failure {
        Failure { code: code.into(), message: message.into(), detail: Value::Null }
    }

    fn exit_code(&self) -> u8 {
        if self.code == "PROTECTION_CONFLICT" {
            2
        } else {
            1
        }
    }
}

impl From<ContractError> for Failure {
    fn from(e: ContractError) -> Failure {
        let mut f = Failure::new(e.code(), e.to_string());
        f.detail = match &e {
            ContractError::ProtectionConflict { edges } => json!({ "edges": edges }),
            ContractError::ProtectionConflictAt { left, right } => json!({ "left": left, "right": right }),
            ContractError::NotSpo { witness } => json!({ "witness": witness }),
            ContractError::ConNotSubset { outside } | ContractError::ProtectNotSubset { outside } => {
                json!({ "outside": outside })
            }
            ContractError::NotFinitelyStratifiable(r) => json!({ "report": r }),
            _ => Value::Null,
        };
        f
    }
}

impl From<DataError> for Failure {
    fn from(e: DataError) -> Failure {
        match e {
            DataError::Contract(c) => c.into(),
            e => Failure::new(e.code(), e.to_string()),
        }
    }
}

impl From<FormulaError> for Failure {
    fn from(e: FormulaError) -> Failure {
        Failure::new(e.code(), e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new("IO_ERROR", format!("{}: {e}", path.display())))
}

fn write(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::new("IO_ERROR", format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn relation(path: &Path) -> Result<FiniteRelation, Failure> {
    FiniteRelation::parse(&read(path)?).map_err(|m| Failure::new("PARSE_ERROR", format!("{}: {m}", path.display())))
}

fn schema(path: &Path) -> Result<Arc<Schema>, Failure> {
    serde_json::from_str(&read(path)?)
        .map(Arc::new)
        .map_err(|e| Failure::new("SCHEMA_ERROR", format!("{}: {e}", path.display())))
}

fn formula(path: &Path, schema: &Arc<Schema>) -> Result<DnfFormula, Failure> {
    Ok(DnfFormula::parse(&read(path)?, schema)?)
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json output");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Contract { pref, con, protect, mode, trace, out } => {
            let pref = relation(&pref)?;
            let con = relation(&con)?;
            let protect = protect.as_deref().map(relation).transpose()?.unwrap_or_default();
            let mut res = match mode {
                Mode::Prefix => contract::min_contr_finite(&pref, &con)?,
                Mode::Meet => contract::meet_contr(&pref, &con)?,
                Mode::Protecting => contract::min_contr_protecting(&pref, &con, &protect)?,
                Mode::ProtectingMeet => contract::meet_contr_protecting(&pref, &con, &protect)?,
            };
            if !trace {
                res.strata_trace.clear();
            }
            write(out.as_deref(), &pretty(&res))
        }
        Command::ContractSym { schema: sp, pref, con, protect, mode, check_only, out } => {
            let s = schema(&sp)?;
            let pref = formula(&pref, &s)?;
            let con = formula(&con, &s)?;
            if check_only {
                let report = symbolic::check_finitely_stratifiable(&pref, &con)?;
                return write(out.as_deref(), &pretty(&report));
            }
            let protect = match &protect {
                Some(p) => formula(p, &s)?,
                None => DnfFormula::falsity(&s),
            };
            let mut res = match mode {
                Mode::Prefix => symbolic::min_contr_symbolic(&pref, &con)?,
                Mode::Meet => symbolic::meet_contr_symbolic(&pref, &con, None)?,
                Mode::Protecting => symbolic::min_contr_protecting_symbolic(&pref, &con, &protect)?,
                Mode::ProtectingMeet => symbolic::meet_contr_symbolic(&pref, &con, Some(&protect))?,
            };
            res.strata_trace.clear();
            write(out.as_deref(), &pretty(&res))
        }
        Command::Winnow { data, source, annotate, out } => {
            let s = schema(&data.schema)?;
            let d = Dataset::load(&data.data, &s)?;
            let src = if let Some(p) = &source.pref {
                PreferenceSource::Finite(relation(p)?)
            } else if let Some(p) = &source.formula {
                PreferenceSource::Formula(formula(p, &s)?)
            } else {
                let spec = source.spec.as_deref().expect("clap enforces one source");
                PreferenceSource::Finite(skyline_relation(&d, &parse_skyline_spec(spec)?)?)
            };
            let csv = if annotate {
                let ranks: Vec<String> = winnow_ranks(&src, &d)?.iter().map(usize::to_string).collect();
                d.to_csv(Some(("winnow_rank", &ranks)))
            } else {
                winnow(&src, &d)?.to_csv(None)
            };
            write(out.as_deref(), &csv)
        }
        Command::Skyline { data, spec, out } => {
            let s = schema(&data.schema)?;
            let d = Dataset::load(&data.data, &s)?;
            let rel = skyline_relation(&d, &parse_skyline_spec(&spec)?)?;
            write(out.as_deref(), &rel.to_tsv())
        }
        Command::Serve { port, host, data } => {
            let addr: SocketAddr = format!("{host}:{port}")
                .parse()
                .map_err(|e| Failure::new("BAD_ADDRESS", format!("{host}:{port}: {e}")))?;
            let svc = prefcon_session::Service::open(&data)
                .map_err(|e| Failure::new("IO_ERROR", format!("{}: {e}", data.display())))?;
            let rt = tokio::runtime::Runtime::new().map_err(|e| Failure::new("IO_ERROR", e.to_string()))?;
            rt.block_on(prefcon_session::serve(addr, Arc::new(svc)))
                .map_err(|e| Failure::new("IO_ERROR", e.to_string()))
        }
    }
}

fn main() -> ExitCode {
    tracing_subscriber::fmt()
        .with_env_filter(tracing_subscriber::EnvFilter::from_default_env())
        .with_writer(std::io::stderr)
        .init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let body = json!({ "code": f.code, "message": f.message, "detail": f.detail });
            eprintln!("{body}");
            ExitCode::from(f.exit_code())
        }
    }
}
