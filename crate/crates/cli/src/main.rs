//! `singmod`: exact CM valuations, analytic verification and the number
//! theory tools behind them.
//!
//! Exit codes: 0 ok, 1 validation error or failed check, 2 improper
//! intersection, 3 insufficient precision. Nothing is written to stdout
//! unless the whole result was computed.

mod config;
mod render;

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};
use singmod::analytic::{gz_log_norm, BorcherdsInput, Model};
use singmod::arith::{fmt_rational, parse_rational};
use singmod::cmval::{
    content_primes, fourier_content, gz_dorman_level1, valuations, ExactQSeries, HeegnerDivisor,
};
use singmod::localsym::{diff_set, hilbert_symbol, nu_p, o_m, Place};
use singmod::pipeline::{verify, VerifyRequest};
use singmod::quadarith::{rho_all, Discriminant};
use singmod::{Error, Result};

use config::{FileConfig, Format, Overrides, RunConfig};

#[derive(Parser, Debug)]
#[command(
    name = "singmod",
    version,
    about = "Exact valuations of CM values and their analytic verification"
)]
struct Cli {
    /// Working precision in bits (at least 64).
    #[arg(long, global = true, env = "SINGMOD_PREC_BITS")]
    prec_bits: Option<u32>,
    /// Maximum number of q-series terms in analytic evaluations.
    #[arg(long, global = true, env = "SINGMOD_TRUNC")]
    trunc: Option<usize>,
    /// Directory for cached class-group records.
    #[arg(long, global = true, env = "SINGMOD_CACHE_DIR")]
    cache_dir: Option<PathBuf>,
    /// TOML file with defaults for the options above.
    #[arg(long, global = true, env = "SINGMOD_CONFIG")]
    config: Option<PathBuf>,
    /// Output format (default json).
    #[arg(long, global = true, value_enum, env = "SINGMOD_FORMAT")]
    format: Option<Format>,
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Args, Debug)]
struct PointArgs {
    /// Level N.
    #[arg(long = "N")]
    level: u64,
    /// Fundamental discriminant D < 0.
    #[arg(long = "D", allow_negative_numbers = true)]
    disc: i64,
    /// Residue with ρ² ≡ D (mod 4N).
    #[arg(long, allow_negative_numbers = true)]
    rho: i64,
    /// JSON divisor file `{"N": .., "coeffs": [{"d", "r", "c"}]}`.
    #[arg(long)]
    divisor: PathBuf,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Exact valuation profile of Ψ(z_{D,ρ}) at every prime.
    Valuation(PointArgs),
    /// Exact profile, conjugate values, class polynomial and norm check.
    Verify {
        #[command(flatten)]
        point: PointArgs,
        #[arg(long, default_value = "hauptmodul47", value_parser = ["hauptmodul47", "j", "borcherds-table"])]
        model: String,
        /// Borcherds exponent table, required by `--model borcherds-table`.
        #[arg(long)]
        table: Option<PathBuf>,
    },
    /// Reduced forms of the class group.
    Clgroup {
        #[arg(long = "D", allow_negative_numbers = true)]
        disc: i64,
    },
    /// Number of integral ideals of norm n in each class.
    Rho {
        #[arg(long)]
        n: String,
        #[arg(long = "D", allow_negative_numbers = true)]
        disc: i64,
    },
    /// Diff(m), with ν_p and o(m).
    Diff {
        #[arg(long, allow_negative_numbers = true)]
        m: String,
        #[arg(long, default_value = "1")]
        scale: String,
        #[arg(long = "D", allow_negative_numbers = true)]
        disc: i64,
    },
    /// Hilbert symbol (a, b)_p; p is a prime or `inf`.
    Hilbert {
        #[arg(short, allow_negative_numbers = true)]
        a: String,
        #[arg(short, allow_negative_numbers = true)]
        b: String,
        #[arg(short)]
        p: String,
    },
    /// p-adic content of an exact q-series.
    Content {
        /// hauptmodul47, j, e4 or delta.
        #[arg(long, conflicts_with = "file", required_unless_present = "file")]
        series: Option<String>,
        /// Series JSON `{"den", "order", "coeffs": [{"e", "c"}]}`.
        #[arg(long)]
        file: Option<PathBuf>,
        /// Expansion order for named series.
        #[arg(long, default_value_t = 100)]
        order: i64,
        /// Without p, lists the primes dividing the content.
        #[arg(long)]
        p: Option<u64>,
    },
    /// Level-1 norm of j(z_D) − j(z_d): exact profile against the analytic value.
    Gz {
        #[arg(long = "D", allow_negative_numbers = true)]
        disc: i64,
        #[arg(long, allow_negative_numbers = true)]
        rho: i64,
        #[arg(long, allow_negative_numbers = true)]
        d: i64,
    },
}

/// Output plus any notice for stderr and whether every check passed.
struct Outcome {
    value: Value,
    notice: Option<String>,
    pass: bool,
}

impl From<Value> for Outcome {
    fn from(value: Value) -> Self {
        Self {
            value,
            notice: None,
            pass: true,
        }
    }
}

fn read(path: &PathBuf) -> Result<String> {
    fs::read_to_string(path)
        .map_err(|e| Error::Invalid(format!("cannot read {}: {e}", path.display())))
}

fn load_divisor(p: &PointArgs) -> Result<HeegnerDivisor> {
    let div = HeegnerDivisor::from_json(&read(&p.divisor)?)?;
    if div.level() != p.level {
        return Err(Error::Invalid(format!(
            "divisor has level {} but --N is {}",
            div.level(),
            p.level
        )));
    }
    Ok(div)
}

fn run(cli: &Cli, cfg: &RunConfig) -> Result<Outcome> {
    let cache = cfg.cache();
    Ok(match &cli.cmd {
        Command::Valuation(p) => {
            let div = load_divisor(p)?;
            let cg = cache.get(p.disc)?;
            let profile = valuations(&cg, p.level, p.rho, &div)?;
            Outcome {
                value: profile.to_json(),
                notice: profile.is_zero().then(|| "unit".to_string()),
                pass: true,
            }
        }
        Command::Verify {
            point,
            model,
            table,
        } => {
            let divisor = load_divisor(point)?;
            let model = match (model.as_str(), table) {
                ("hauptmodul47", None) => Model::Hauptmodul47,
                ("j", None) => Model::J,
                ("borcherds-table", Some(t)) => {
                    let v: Value = serde_json::from_str(&read(t)?)?;
                    Model::Borcherds(BorcherdsInput::from_json(&v)?)
                }
                ("borcherds-table", None) => {
                    return Err(Error::Invalid(
                        "--model borcherds-table needs --table".into(),
                    ))
                }
                (_, Some(_)) => {
                    return Err(Error::Invalid(
                        "--table is only used with --model borcherds-table".into(),
                    ))
                }
                (m, None) => return Err(Error::Invalid(format!("unknown model {m}"))),
            };
            let cg = cache.get(point.disc)?;
            let req = VerifyRequest {
                level: point.level,
                rho: point.rho,
                divisor,
                model,
                ctx: cfg.precision()?,
            };
            let report = verify(&cg, &req)?;
            Outcome {
                value: report.to_json(),
                notice: report.unit.then(|| "unit".to_string()),
                pass: report.passed(),
            }
        }
        Command::Clgroup { disc } => {
            let cg = cache.get(*disc)?;
            let forms: Vec<Value> = (0..cg.h())
                .map(|c| json!({"form": cg.label(c), "order": cg.order(c)}))
                .collect();
            json!({"D": disc, "h": cg.h(), "forms": forms}).into()
        }
        Command::Rho { n, disc } => {
            let n = parse_rational(n)?;
            let cg = cache.get(*disc)?;
            let counts = rho_all(&cg, &n);
            let by_class: Vec<Value> = cg
                .labels()
                .into_iter()
                .zip(&counts)
                .map(|(l, c)| json!({"label": l, "count": c}))
                .collect();
            json!({"D": disc, "n": fmt_rational(&n), "by_class": by_class, "total": counts.iter().sum::<u64>()}).into()
        }
        Command::Diff { m, scale, disc } => {
            let (m, scale) = (parse_rational(m)?, parse_rational(scale)?);
            let d = Discriminant::fundamental(*disc)?;
            let res = diff_set(&m, &scale, d)?;
            let nu = res
                .primes
                .iter()
                .map(|&p| Ok(json!({"p": p, "nu": fmt_rational(&nu_p(&m, p, d)?)})))
                .collect::<Result<Vec<_>>>()?;
            json!({
                "D": disc,
                "m": fmt_rational(&m),
                "scale": fmt_rational(&scale),
                "primes": res.primes,
                "nu": nu,
                "o": o_m(&m, d),
            })
            .into()
        }
        Command::Hilbert { a, b, p } => {
            let (x, y) = (parse_rational(a)?, parse_rational(b)?);
            let place = match p.as_str() {
                "inf" | "infinity" => Place::Infinity,
                s => Place::Prime(s.parse().map_err(|_| {
                    Error::Invalid(format!("place {s} is neither a prime nor inf"))
                })?),
            };
            if let Place::Prime(q) = place {
                if !singmod::arith::is_prime(q) {
                    return Err(Error::Invalid(format!("{q} is not prime")));
                }
            }
            let s = hilbert_symbol(&x, &y, place)?;
            json!({"a": fmt_rational(&x), "b": fmt_rational(&y), "place": p, "symbol": s}).into()
        }
        Command::Content {
            series,
            file,
            order,
            p,
        } => {
            let (name, f) = match (series, file) {
                (Some(s), _) => (s.clone(), ExactQSeries::named(s, *order)?),
                (None, Some(path)) => {
                    let v: Value = serde_json::from_str(&read(path)?)?;
                    (path.display().to_string(), ExactQSeries::from_json(&v)?)
                }
                (None, None) => return Err(Error::Invalid("give --series or --file".into())),
            };
            match p {
                Some(p) => json!({"series": name, "order": f.order(), "p": p, "content": fourier_content(&f, *p)?}),
                None => json!({"series": name, "order": f.order(), "content_primes": content_primes(&f)?}),
            }
            .into()
        }
        Command::Gz { disc, rho, d } => {
            let big = cache.get(*disc)?;
            let small = cache.get(*d)?;
            let profile = gz_dorman_level1(&big, *rho, *d)?;
            let (value, radius) = gz_log_norm(&big, &small, &cfg.precision()?)?;
            let analytic = value.to_f64();
            let exact = profile.log_norm();
            let rel = (exact - analytic).abs() / analytic.abs().max(1.0);
            Outcome {
                value: json!({
                    "profile": profile.to_json(),
                    "log_norm_exact": format!("{exact:.15e}"),
                    "log_norm_analytic": format!("{analytic:.15e}"),
                    "analytic_radius": format!("{radius:e}"),
                    "relative_error": format!("{rel:e}"),
                    "pass": rel < 1e-8,
                }),
                notice: None,
                pass: rel < 1e-8,
            }
        }
    })
}

fn overrides(cli: &Cli) -> Overrides {
    Overrides {
        prec_bits: cli.prec_bits,
        trunc: cli.trunc,
        cache_dir: cli.cache_dir.clone(),
        format: cli.format,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = cli
        .config
        .as_ref()
        .map(|p| FileConfig::load(p))
        .transpose()
        .and_then(|file| RunConfig::resolve(overrides(&cli), file))
        .and_then(|cfg| Ok((run(&cli, &cfg)?, cfg)));
    match result {
        Ok((out, cfg)) => {
            print!("{}", render::render(&out.value, cfg.format));
            if let Some(n) = out.notice {
                eprintln!("{n}");
            }
            if out.pass {
                ExitCode::SUCCESS
            } else {
                eprintln!("error: verification failed");
                ExitCode::from(1)
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            if let Error::Precision(_) = e {
                let bits = cli
                    .prec_bits
                    .unwrap_or(config::DEFAULT_PREC_BITS)
                    .saturating_mul(2);
                eprintln!("hint: retry with --prec-bits {bits}, a larger --trunc, or a longer exponent table");
            }
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use clap::CommandFactory;

    #[test]
    fn cli_definition_is_consistent() {
        Cli::command().debug_assert();
    }

    #[test]
    fn parses_negative_values() {
        let cli =
            Cli::try_parse_from(["singmod", "hilbert", "-a", "-1", "-b", "-1", "-p", "2"]).unwrap();
        assert!(matches!(cli.cmd, Command::Hilbert { ref a, .. } if a == "-1"));
        let cli =
            Cli::try_parse_from(["singmod", "clgroup", "--D", "-23", "--format", "table"]).unwrap();
        assert_eq!(cli.format, Some(Format::Table));
    }
}
