use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use kvcheck::cone::cone_generators;
use kvcheck::dpctl::{kvv_scan, negative_control, sample_config};
use kvcheck::gf::field_of_order;
use kvcheck::insep::{classify_all_members, fiber_census};
use kvcheck::lattice::{all_points_blowup, DivClass};
use kvcheck::linsys::{cohomology, system_for};
use kvcheck::report::{kmk_checks, run_report, ReportOptions, Status};

/// Exact verification of Kawamata-Viehweg failure on blowups of the plane
/// at all F_q-points.
#[derive(Parser)]
#[command(name = "kvcheck", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every check for q and print the JSON report.
    Report {
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Record wall-clock time per check (output is then not reproducible).
        #[arg(long)]
        timings: bool,
    },
    /// Cohomology of aH - sum m_i E_i on the surface for q.
    H {
        #[arg(long)]
        q: u64,
        #[arg(long, allow_hyphen_values = true)]
        a: i64,
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        m: Vec<i64>,
        /// Print the interpolation matrix for h^0 on stderr.
        #[arg(long)]
        dump_matrix: bool,
    },
    /// Points, lines and incidences of PG(2, q).
    Planes {
        #[arg(long)]
        q: u64,
    },
    /// The generators of the cone of curves and the exclusion table.
    Cone {
        #[arg(long)]
        q: u64,
    },
    /// Sizes of sampled fibers of the inseparable map.
    Fibers {
        #[arg(long)]
        q: u64,
        #[arg(long)]
        ext: u32,
        #[arg(long, default_value_t = 50)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// The members of |M| with F_q coefficients.
    Members {
        #[arg(long)]
        q: u64,
    },
    /// Strange-conic and lattice checks for the Keel-McKernan surface.
    Kmk {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(["2", "4"]))]
        field: String,
    },
    /// Vanishing scan on del Pezzo surfaces.
    Dpcontrol {
        #[arg(long)]
        points: usize,
        #[arg(long, default_value_t = 32)]
        field_order: u64,
        #[arg(long, default_value_t = 25)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also run the q = 2 all-points configuration.
        #[arg(long)]
        negative_control: bool,
    },
}

enum Failure {
    Usage(String),
    Checks,
}

impl From<kvcheck::Error> for Failure {
    fn from(e: kvcheck::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Writes to stdout, treating a closed pipe as success.
fn write_stdout(text: &str) {
    let _ = writeln!(std::io::stdout().lock(), "{text}");
}

fn emit(v: &Value) {
    write_stdout(&serde_json::to_string_pretty(v).expect("json"));
}

fn run(cmd: Command) -> Result<(), Failure> {
    match cmd {
        Command::Report {
            q,
            seed,
            out,
            timings,
        } => {
            let report = run_report(q, ReportOptions { seed, timings })?;
            let text = report.to_pretty();
            match out {
                Some(path) => std::fs::write(&path, text + "\n")
                    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
                None => write_stdout(&text),
            }
            for c in report.checks.iter().filter(|c| c.status == Status::Fail) {
                eprintln!("FAIL {}: {}", c.check_id, c.statement);
            }
            if !report.passed() {
                return Err(Failure::Checks);
            }
        }
        Command::H {
            q,
            a,
            m,
            dump_matrix,
        } => {
            let s = all_points_blowup(q)?;
            let d = DivClass::from_ints(s.surface(), a, &m)?;
            if dump_matrix {
                match system_for(s.surface(), &d)? {
                    Some(sys) => eprint!("{}", sys.dump()),
                    None => eprintln!("no sections: negative degree"),
                }
            }
            write_stdout(&cohomology(s.surface(), &d)?.to_json().to_string());
        }
        Command::Planes { q } => {
            emit(&all_points_blowup(q)?.incidence().to_json());
        }
        Command::Cone { q } => {
            if q != 2 {
                return Err(Failure::Usage("cone certified for q=2 only".into()));
            }
            let s = all_points_blowup(2)?;
            emit(&cone_generators(&s.classes(), s.incidence())?.to_json());
        }
        Command::Fibers {
            q,
            ext,
            samples,
            seed,
        } => {
            let census = fiber_census(q, ext, samples, seed)?;
            emit(&census.to_json());
            if census.histogram.keys().any(|&k| k != 1) || census.solver_mismatches > 0 {
                return Err(Failure::Checks);
            }
        }
        Command::Members { q } => {
            let s = all_points_blowup(q)?;
            let f = s.field();
            let members = classify_all_members(&s)?;
            let rows: Vec<Value> = s
                .incidence()
                .points()
                .iter()
                .zip(&members)
                .map(|(coeffs, m)| {
                    json!({
                        "coeffs": coeffs.to_json(f),
                        "center": s.incidence().points()[m.center].to_json(f),
                        "lines": m.lines.iter().map(|&j| s.incidence().lines()[j].to_json(f)).collect::<Vec<_>>(),
                    })
                })
                .collect();
            emit(&json!({"q": q, "count": rows.len(), "members": rows}));
        }
        Command::Kmk { field } => {
            let order: u64 = field.parse().expect("validated by clap");
            let checks = kmk_checks(order)?;
            let failed = checks.iter().any(|c| c.status == Status::Fail);
            emit(&json!({"schema": kvcheck::report::SCHEMA, "field": order, "checks": checks}));
            if failed {
                return Err(Failure::Checks);
            }
        }
        Command::Dpcontrol {
            points,
            field_order,
            trials,
            seed,
            negative_control: with_control,
        } => {
            let field = field_of_order(field_order)?;
            let config = sample_config(points, &field, seed)?;
            let scan = kvv_scan(&config, trials, seed)?;
            let mut out = json!({"config": config.to_json(), "scan": scan.to_json()});
            let mut ok = scan.passed();
            if with_control {
                let ctl = negative_control()?;
                ok &= ctl.passed();
                out["negative_control"] = serde_json::to_value(&ctl).expect("plain data");
            }
            emit(&out);
            if !ok {
                return Err(Failure::Checks);
            }
        }
    }
    Ok(())
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(value) = std::env::var("KVCHECK_THREADS") else {
        return Ok(());
    };
    let n: usize = value.parse().ok().filter(|&n| n > 0).ok_or_else(|| {
        Failure::Usage(format!(
            "KVCHECK_THREADS must be a positive integer, got {value:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Usage(e.to_string()))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(cli.command)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
