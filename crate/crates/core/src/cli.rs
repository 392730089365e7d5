//! Command-line front end.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::automata::{build_acceptor, export_automaton, ExportFormat};
use crate::cayley::{build_ball, DEFAULT_ENTRY_CAP};
use crate::error::Error;
use crate::experiments::{
    combing_bound, combing_sweep, conjugation_check, quasi_rows_csv, quasigeodesic_table,
};
use crate::fellow::CappedMetric;
use crate::presentation::{parse_word, GroupSpec, Word};
use crate::rewrite::normalize;

pub const DEFAULT_RADIUS: u32 = 8;
pub const DEFAULT_SEED: u64 = 0;

#[derive(Parser, Debug)]
#[command(
    name = "lmfbc",
    version,
    about = "Normal forms, word problem and fellow-traveler experiments for \
             <a, t, b_1..b_k | at = ta, b_i^-1 t b_i = a^(n_i) t>"
)]
pub struct Cli {
    /// Exponents n_1,...,n_k defining the group.
    #[arg(long, global = true, value_name = "N1,N2,...", allow_hyphen_values = true)]
    pub exponents: Option<String>,

    /// JSON config file with the same fields; flags take precedence.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Print the normal form of a word.
    Normalize {
        #[arg(allow_hyphen_values = true)]
        word: String,
    },
    /// Decide whether a word is the identity.
    Wp {
        #[arg(allow_hyphen_values = true)]
        word: String,
    },
    /// Membership of a word in the normal form language.
    Member {
        #[arg(allow_hyphen_values = true)]
        word: String,
    },
    /// Export the normal form acceptor.
    Dfa {
        #[arg(long, value_enum, default_value_t = DfaFormat::Json)]
        export: DfaFormat,
    },
    /// Breadth-first ball around the identity.
    Ball {
        #[arg(long)]
        radius: Option<u32>,
        #[arg(long, value_enum, default_value_t = BallFormat::Json)]
        format: BallFormat,
        #[arg(long)]
        entry_cap: Option<usize>,
    },
    /// Fellow-traveler distance between two word paths.
    Fellow {
        #[arg(long, value_enum, default_value_t = Mode::Async)]
        mode: Mode,
        #[arg(long, allow_hyphen_values = true)]
        lhs: String,
        #[arg(long, allow_hyphen_values = true)]
        rhs: String,
        #[arg(long)]
        cap: Option<u32>,
    },
    /// Sweep of asynchronous distances between w and the normal form of wx.
    CombingCheck {
        #[arg(long, default_value_t = 2000)]
        samples: usize,
        #[arg(long, default_value_t = 20)]
        maxlen: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        cap: Option<u32>,
    },
    /// Normal form lengths of b_i^-k t^j against k + j.
    Quasigeodesic {
        #[arg(long)]
        stable: u32,
        #[arg(long, default_value_t = 5)]
        kmax: u32,
        #[arg(long, default_value_t = 5)]
        jmax: u32,
        #[arg(long, default_value_t = 7)]
        verify_radius: u32,
        #[arg(long, value_enum, default_value_t = TableFormat::Json)]
        format: TableFormat,
        #[arg(long)]
        entry_cap: Option<usize>,
    },
    /// Check b_i^-p t b_i^p = a^(p n_i) t.
    ConjugationCheck {
        #[arg(long, default_value_t = 20)]
        pmax: u32,
        #[arg(long, value_enum, default_value_t = TableFormat::Json)]
        format: TableFormat,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum DfaFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum BallFormat {
    Json,
    Csv,
    Dot,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Json,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Sync,
    Async,
}

/// Settings shared by all subcommands, read from `--config` and overridden
/// by flags.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CliConfig {
    pub exponents: Vec<i64>,
    pub radius: Option<u32>,
    pub entry_cap: Option<usize>,
    pub cap: Option<u32>,
    pub seed: Option<u64>,
}

impl CliConfig {
    fn resolve(cli: &Cli) -> Result<(CliConfig, GroupSpec), Error> {
        let mut cfg = match &cli.config {
            Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
            None => CliConfig::default(),
        };
        if let Some(e) = &cli.exponents {
            cfg.exponents = e.parse::<GroupSpec>()?.exponents().to_vec();
        }
        if cfg.radius == Some(0) || cfg.entry_cap == Some(0) || cfg.cap == Some(0) {
            return Err(Error::InvalidSpec("caps must be positive".into()));
        }
        let spec = GroupSpec::new(cfg.exponents.clone())?;
        Ok((cfg, spec))
    }
}

#[derive(Serialize)]
struct FellowOutput {
    mode: &'static str,
    lhs: String,
    rhs: String,
    cap: u32,
    value: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    alignment: Option<String>,
}

/// Runs the CLI on `args`, writing results to `out` and diagnostics to `err`.
/// Returns the process exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    match dispatch(&cli, out) {
        Ok(()) => 0,
        Err(e) => {
            let record = serde_json::json!({"error": e.kind(), "message": e.to_string()});
            let _ = writeln!(err, "{record}");
            1
        }
    }
}

pub fn dispatch(cli: &Cli, out: &mut dyn Write) -> Result<(), Error> {
    let (cfg, spec) = CliConfig::resolve(cli)?;
    let word = |text: &str| -> Result<Word, Error> { Ok(parse_word(&spec, text)?) };
    let entry_cap = cfg.entry_cap.unwrap_or(DEFAULT_ENTRY_CAP);
    match &cli.command {
        Command::Normalize { word: text } => {
            let nf = normalize(&spec, &word(text)?);
            writeln!(out, "{}", serde_json::to_string(&nf.record())?)?;
        }
        Command::Wp { word: text } => {
            let id = normalize(&spec, &word(text)?).is_identity();
            writeln!(out, "{}", if id { "identity" } else { "non-identity" })?;
        }
        Command::Member { word: text } => {
            let ok = build_acceptor(&spec).accepts(&word(text)?);
            writeln!(out, "{}", if ok { "accept" } else { "reject" })?;
        }
        Command::Dfa { export } => {
            let format = match export {
                DfaFormat::Dot => ExportFormat::Dot,
                DfaFormat::Json => ExportFormat::Json,
            };
            let text = export_automaton(&build_acceptor(&spec), format);
            write!(out, "{}", text.trim_end())?;
            writeln!(out)?;
        }
        Command::Ball {
            radius,
            format,
            entry_cap: flag_cap,
        } => {
            let radius = radius.or(cfg.radius).unwrap_or(DEFAULT_RADIUS);
            let ball = build_ball(&spec, radius, flag_cap.unwrap_or(entry_cap))?;
            match format {
                BallFormat::Json => writeln!(out, "{}", ball.to_json())?,
                BallFormat::Csv => write!(out, "{}", ball.to_csv()?)?,
                BallFormat::Dot => write!(out, "{}", ball.to_dot())?,
            }
        }
        Command::Fellow {
            mode,
            lhs,
            rhs,
            cap,
        } => {
            let cap = cap
                .or(cfg.cap)
                .unwrap_or(combing_bound(&spec) + 1);
            let (w, u) = (word(lhs)?, word(rhs)?);
            let metric = CappedMetric::new(&spec, cap)?;
            let (mode, value, alignment) = match mode {
                Mode::Sync => ("sync", metric.sync_distance(&w, &u), None),
                Mode::Async => {
                    let m = metric.async_distance(&w, &u);
                    let alignment = m.as_ref().map(|m| m.alignment.to_string());
                    ("async", m.map(|m| m.distance), alignment)
                }
            };
            let value = value.ok_or(Error::CapExceeded { cap })?;
            let record = FellowOutput {
                mode,
                lhs: w.to_string(),
                rhs: u.to_string(),
                cap,
                value,
                alignment,
            };
            writeln!(out, "{}", serde_json::to_string(&record)?)?;
        }
        Command::CombingCheck {
            samples,
            maxlen,
            seed,
            cap,
        } => {
            let seed = seed.or(cfg.seed).unwrap_or(DEFAULT_SEED);
            let cap = cap.or(cfg.cap).unwrap_or(combing_bound(&spec) + 2);
            let report = combing_sweep(&spec, *samples, *maxlen, seed, cap)?;
            writeln!(out, "{}", serde_json::to_string_pretty(&report)?)?;
        }
        Command::Quasigeodesic {
            stable,
            kmax,
            jmax,
            verify_radius,
            format,
            entry_cap: flag_cap,
        } => {
            let rows = quasigeodesic_table(
                &spec,
                *stable,
                *kmax,
                *jmax,
                *verify_radius,
                flag_cap.unwrap_or(entry_cap),
            )?;
            match format {
                TableFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?,
                TableFormat::Csv => write!(out, "{}", quasi_rows_csv(&rows)?)?,
            }
        }
        Command::ConjugationCheck { pmax, format } => {
            let rows = conjugation_check(&spec, *pmax);
            match format {
                TableFormat::Json => writeln!(out, "{}", serde_json::to_string_pretty(&rows)?)?,
                TableFormat::Csv => {
                    let mut w = csv::Writer::from_writer(Vec::new());
                    for r in &rows {
                        w.serialize(r)?;
                    }
                    let bytes = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
                    out.write_all(&bytes)?;
                }
            }
        }
    }
    Ok(())
}
