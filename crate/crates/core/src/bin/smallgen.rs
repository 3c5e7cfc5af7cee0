use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use smallgen::curve::{BasePlace, CurveModel};
use smallgen::divisor::{conorm, HeightValue};
use smallgen::error::Error;
use smallgen::oracle::{
    check_point_cap, count_places_exhaustive, count_places_kernel, describe, min_generator_exhaustive, rr_dim_exhaustive,
    OracleReport,
};
use smallgen::pipeline::{small_generator, verify_certificate, SearchOptions};
use smallgen::report::{analyze, places_row, to_json, CertificateDoc, InputEcho, PlacesDoc, SCHEMA};
use smallgen::rr::rr_dim;

/// Certified small generators of superelliptic function fields `y^m = f(x)` over `F_q`.
#[derive(Parser)]
#[command(name = "smallgen", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CurveArgs {
    /// Size of the constant field
    #[arg(long)]
    q: u64,
    /// Exponent of `y`
    #[arg(long)]
    m: usize,
    /// Right-hand side, e.g. "x^5+1" or "(u+1)*x^3+x"
    #[arg(long)]
    f: String,
}

#[derive(Args)]
struct Output {
    /// Also write the JSON document to this file
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Genus, places at infinity and the ramification identity
    Analyze {
        #[command(flatten)]
        curve: CurveArgs,
        #[command(flatten)]
        output: Output,
    },
    /// Place counts for degrees 1..=l against the exact lower bounds
    Places {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u64).range(1..))]
        l: u64,
        #[command(flatten)]
        output: Output,
    },
    /// Search, certify and print a small generator
    Generator {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Degrees past g + 1 tried before the greedy fallback
        #[arg(long, default_value_t = 8)]
        delta: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Recheck a certificate file
    Verify { path: PathBuf },
    /// Brute-force cross-checks of the kernel
    Oracle {
        #[command(flatten)]
        curve: CurveArgs,
        /// Largest place degree to count
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        l: u64,
        /// Height cap for the generator search, as "p/q"; defaults to the certificate height
        #[arg(long)]
        cap: Option<String>,
        /// Largest multiple of the infinite conorm whose dimension is checked
        #[arg(long, default_value_t = 3)]
        rr_max: i64,
        #[command(flatten)]
        output: Output,
    },
}

enum Failure {
    Verification(String),
    Kernel(Error),
    Io(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Kernel(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Verification(_) => 1,
            Failure::Io(_) => 2,
            Failure::Kernel(Error::SearchExhausted(_)) => 3,
            Failure::Kernel(Error::EnumerationCap(_) | Error::FieldCap(_) | Error::PrecisionCap(_)) => 4,
            Failure::Kernel(_) => 2,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Verification(s) | Failure::Io(s) => s.clone(),
            Failure::Kernel(e) => e.to_string(),
        }
    }
}

fn emit(text: &str, output: &Output) -> Result<(), Failure> {
    print!("{text}");
    if let Some(path) = &output.out {
        fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))?;
    }
    Ok(())
}

fn curve_of(a: &CurveArgs) -> Result<std::sync::Arc<CurveModel>, Failure> {
    Ok(CurveModel::from_text(a.q, a.m, &a.f)?)
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze { curve, output } => {
            let c = curve_of(&curve)?;
            emit(&to_json(&analyze(&c)?), &output)
        }
        Command::Places { curve, l, output } => {
            let c = curve_of(&curve)?;
            check_point_cap(c.field().order(), l as usize)?;
            let rows = (1..=l as usize)
                .map(|d| Ok(places_row(&c, count_places_exhaustive(&c, d)?)))
                .collect::<Result<Vec<_>, Error>>()?;
            let doc = PlacesDoc {
                schema: SCHEMA.to_string(),
                input: InputEcho::of(&c),
                genus: c.genus(),
                rows,
            };
            emit(&to_json(&doc), &output)
        }
        Command::Generator {
            curve,
            workers,
            delta,
            output,
        } => {
            let c = curve_of(&curve)?;
            let cert = small_generator(&c, &SearchOptions { workers, delta })?;
            emit(&to_json(&CertificateDoc::from_certificate(&cert)), &output)?;
            let rep = verify_certificate(&c, &cert)?;
            if rep.ok() {
                Ok(())
            } else {
                Err(Failure::Verification(rep.to_string()))
            }
        }
        Command::Verify { path } => {
            let text = fs::read_to_string(&path)
                .map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
            let doc: CertificateDoc =
                serde_json::from_str(&text).map_err(|e| Failure::Io(format!("malformed certificate: {e}")))?;
            let cert = doc.to_certificate()?;
            let rep = verify_certificate(&cert.curve, &cert)?;
            print!("{rep}");
            if rep.ok() {
                Ok(())
            } else {
                Err(Failure::Verification("certificate rejected".into()))
            }
        }
        Command::Oracle {
            curve,
            l,
            cap,
            rr_max,
            output,
        } => {
            let c = curve_of(&curve)?;
            check_point_cap(c.field().order(), l as usize)?;
            let name = format!("y^{} = {} over F_{}", c.m(), c.f(), c.field().order());
            let mut reports = Vec::new();
            for d in 1..=l as usize {
                let start = Instant::now();
                let o = count_places_exhaustive(&c, d)?;
                let k = count_places_kernel(&c, d)?;
                let enumerated = c.field().order().pow(d as u32);
                let (ov, kv) = (format!("{}/{}", o.total, o.fres1), format!("{}/{}", k.total, k.fres1));
                reports.push(OracleReport::new(
                    format!("{name}: places of degree {d} (total/fres1)"),
                    ov.clone(),
                    kv.clone(),
                    ov == kv,
                    enumerated,
                    start,
                ));
            }
            for n in -1..=rr_max {
                let start = Instant::now();
                let a = conorm(&c, &[(BasePlace::Infinite, n)])?;
                let o = rr_dim_exhaustive(&c, &a)?;
                let k = rr_dim(&c, &a)?;
                reports.push(OracleReport::new(
                    format!("{name}: dim L({})", describe(&a)),
                    o.to_string(),
                    k.to_string(),
                    o == k,
                    0,
                    start,
                ));
            }
            let start = Instant::now();
            let cert = small_generator(&c, &SearchOptions::default())?;
            let cap = match cap {
                Some(s) => HeightValue::parse(&s)?,
                None => cert.height,
            };
            let best = min_generator_exhaustive(&c, cap)?;
            let (value, ok, visited) = match &best {
                Some(b) => (
                    format!("{} ({})", b.height, b.witness),
                    cert.lower_bound <= b.height && b.height <= cert.height,
                    b.visited,
                ),
                None => ("none".to_string(), cap < cert.height, 0),
            };
            reports.push(OracleReport::new(
                format!("{name}: least generator height up to {cap}"),
                value,
                format!("certificate {} in [{}, {}]", cert.height, cert.lower_bound, cert.upper_bound),
                ok,
                visited,
                start,
            ));
            emit(&to_json(&reports), &output)?;
            if reports.iter().all(|r| r.matches) {
                Ok(())
            } else {
                Err(Failure::Verification("oracle disagreement".into()))
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("smallgen: {}", f.message());
            ExitCode::from(f.code())
        }
    }
}
