use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use thiserror::Error;

use raycurves::curve::{parse_curve, parse_divisor, parse_place_set, CurveError, CurveModel};
use raycurves::fixtures::{self, Status, FIXTURES};
use raycurves::invariants::{invariants_for_places, InvariantError};
use raycurves::rayclass::{RayClassError, RayClassGroup, RayClassOptions};
use raycurves::records::{RecordError, RecordTable};
use raycurves::search::{search_curve, SearchConfig, SearchError};

#[derive(Parser)]
#[command(name = "raycurves", version, about = "Ray class groups and curves with many points over small fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct CurveArgs {
    /// Size of the base field (2, 3, 4 or 5).
    #[arg(long)]
    q: u32,
    /// Curve equation, e.g. "y^2 + (x^2 + x + 1)y + x^5 + x^4 + x^2 + x".
    #[arg(long)]
    curve: String,
}

#[derive(clap::Args)]
struct BoundArgs {
    /// Largest degree of a generating place (default genus + 1).
    #[arg(long)]
    gen_bound: Option<usize>,
    /// Largest weight of the functions tried as relations.
    #[arg(long, default_value_t = 12)]
    fun_bound: usize,
    /// Largest generator degree reached when escalating.
    #[arg(long, default_value_t = 12)]
    max_gen_bound: usize,
}

impl BoundArgs {
    fn options(&self) -> RayClassOptions {
        RayClassOptions { gen_bound: self.gen_bound, fun_bound: self.fun_bound, max_gen_bound: self.max_gen_bound }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Recompute the built-in constructions ("all" or one name).
    Verify {
        #[arg(default_value = "all")]
        name: String,
        /// Count stated moduli that only reproduce with a corrected modulus as failures.
        #[arg(long)]
        strict: bool,
    },
    /// Structure of a ray class group.
    Rcg {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value = "0")]
        divisor: String,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Invariants of the class field in which the given places split.
    Invariants {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long)]
        divisor: String,
        /// Set of places, e.g. "{(1/x, y/x^3), (x + 1, y + 1)}".
        #[arg(long)]
        split: String,
        #[command(flatten)]
        bounds: BoundArgs,
    },
    /// Search abelian extensions of one or more curves.
    Search {
        #[arg(long)]
        q: u32,
        #[arg(long, required = true)]
        curve: Vec<String>,
        #[arg(long, default_value_t = 4)]
        max_conductor_degree: i64,
        #[arg(long, default_value_t = 50)]
        max_genus: i64,
        /// Bound on d*s (default from the record table).
        #[arg(long)]
        ds_cap: Option<i64>,
        /// Only these numbers of split places, comma separated.
        #[arg(long, value_delimiter = ',')]
        split_sizes: Option<Vec<usize>>,
        /// Restrict the support of the modulus to this set of places.
        #[arg(long)]
        support: Option<String>,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        records_file: Option<PathBuf>,
        /// JSON-lines output file.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List the places of a curve up to a degree.
    Places {
        #[command(flatten)]
        curve: CurveArgs,
        #[arg(long, default_value_t = 1)]
        max_degree: usize,
    },
    /// Query or extend the table of known bounds.
    Records {
        #[arg(long)]
        records_file: Option<PathBuf>,
        #[command(subcommand)]
        action: RecordsAction,
    },
}

#[derive(Subcommand)]
enum RecordsAction {
    /// Interval for N_q(g).
    Query { q: u32, g: i64 },
    /// Print the whole table as CSV.
    List,
    /// Merge rows from a CSV file into the table and print or save it.
    Import {
        file: PathBuf,
        #[arg(long)]
        save: bool,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("verification failed")]
    Mismatch,
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    RayClass(#[from] RayClassError),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    Records(#[from] RecordError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn ray_exit(e: &RayClassError) -> u8 {
    match e {
        RayClassError::CertificateFailed { .. } | RayClassError::Inconsistent { .. } => 4,
        _ => 1,
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Mismatch => 1,
            CliError::Curve(_) | CliError::Records(RecordError::Format { .. }) => 3,
            CliError::RayClass(e) | CliError::Invariant(InvariantError::RayClass(e)) => ray_exit(e),
            CliError::Invariant(InvariantError::Curve(_)) => 3,
            CliError::Search(SearchError::Invariant(InvariantError::RayClass(e))) => ray_exit(e),
            _ => 1,
        }
    }
}

fn load_records(path: &Option<PathBuf>) -> Result<RecordTable, CliError> {
    match path {
        Some(p) if p.exists() => Ok(RecordTable::load(p)?),
        Some(p) => Err(CliError::Usage(format!("records file {} does not exist", p.display()))),
        None => Ok(RecordTable::builtin()),
    }
}

fn curve_of(args: &CurveArgs) -> Result<CurveModel, CliError> {
    Ok(parse_curve(args.q, &args.curve)?)
}

fn verify(name: &str, strict: bool) -> Result<(), CliError> {
    let list: Vec<&'static fixtures::Fixture> = if name == "all" {
        FIXTURES.iter().collect()
    } else {
        vec![fixtures::fixture(name).ok_or_else(|| {
            let names: Vec<&str> = FIXTURES.iter().map(|f| f.name).collect();
            CliError::Usage(format!("unknown fixture {name:?}; known: all, {}", names.join(", ")))
        })?]
    };
    let mut failed = false;
    for f in list {
        let v = fixtures::verify(f, &RayClassOptions::default())?;
        let inv = &v.invariants;
        let got = format!("d={} genus={} N={}", inv.degree, inv.genus, inv.rational_places);
        match v.status() {
            Status::Match => println!("{:10} PASS     {got}  Cl_D = {}", f.name, v.group),
            Status::Erratum => {
                let c = v.corrected.as_ref().expect("erratum has a corrected field");
                println!(
                    "{:10} ERRATUM  stated modulus {} gives {got}; modulus {} gives d={} genus={} N={}",
                    f.name,
                    f.modulus,
                    f.attained_with.unwrap_or_default(),
                    c.degree,
                    c.genus,
                    c.rational_places
                );
                failed |= strict;
            }
            Status::Mismatch => {
                println!("{:10} FAIL     {got}, expected genus={} N={}", f.name, f.genus, f.points);
                if !v.certificate_holds {
                    println!("{:10}          certificate does not hold", "");
                }
                failed = true;
            }
        }
    }
    if failed {
        Err(CliError::Mismatch)
    } else {
        Ok(())
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Verify { name, strict } => verify(&name, strict),
        Command::Rcg { curve, divisor, bounds } => {
            let c = curve_of(&curve)?;
            let d = parse_divisor(&c, &divisor)?;
            let rcg = RayClassGroup::compute(&c, &d, &bounds.options())?;
            let cert = rcg.certificate();
            println!("{}", rcg.group());
            println!(
                "h = {}, |U_D| = {}, torsion = {} (expected {})",
                cert.class_number, cert.unit_order, cert.torsion, cert.expected_torsion
            );
            Ok(())
        }
        Command::Invariants { curve, divisor, split, bounds } => {
            let c = curve_of(&curve)?;
            let d = parse_divisor(&c, &divisor)?;
            let s = parse_place_set(&c, &split)?;
            let rcg = RayClassGroup::compute(&c, &d, &bounds.options())?;
            let inv = invariants_for_places(&rcg, &s)?;
            println!("d={} genus={} N={}", inv.degree, inv.genus, inv.rational_places);
            println!("Gal = {}", inv.galois_group);
            println!("conductor = {}", c.format_divisor(&inv.conductor));
            for dec in &inv.ramified {
                println!(
                    "  {}: e={} f={} count={} conductor={} discriminant={}",
                    c.format_place(&dec.place),
                    dec.ramification,
                    dec.residue_degree,
                    dec.count,
                    dec.conductor,
                    dec.discriminant
                );
            }
            Ok(())
        }
        Command::Search {
            q,
            curve,
            max_conductor_degree,
            max_genus,
            ds_cap,
            split_sizes,
            support,
            workers,
            checkpoint,
            records_file,
            out,
        } => {
            let records = load_records(&records_file)?;
            for text in curve {
                let c = parse_curve(q, &text)?;
                let support = support.as_deref().map(|s| parse_place_set(&c, s)).transpose()?;
                let config = SearchConfig {
                    max_genus,
                    ds_cap,
                    max_conductor_degree: Some(max_conductor_degree),
                    support,
                    split_sizes: split_sizes.clone(),
                    workers,
                    checkpoint: checkpoint.clone(),
                    out: out.clone(),
                    ..Default::default()
                };
                let report = search_curve(&c, &config, &records)?;
                let ceiling = report.bounds.iter().map(|b| b.degree_bound).max().unwrap_or(-1);
                eprintln!(
                    "{}: {} of {} moduli (resumed at {}), conductor degree ceiling {ceiling}, {} skipped",
                    c.display(),
                    report.moduli,
                    report.total_moduli,
                    report.resumed_from,
                    report.skipped.len()
                );
                for s in &report.skipped {
                    eprintln!("  skipped {}: {}", s.modulus, s.reason);
                }
                if out.is_none() {
                    for f in &report.findings {
                        println!("{}", serde_json::to_string(f).expect("findings serialize"));
                    }
                }
            }
            Ok(())
        }
        Command::Places { curve, max_degree } => {
            let c = curve_of(&curve)?;
            for p in c.places_up_to(max_degree) {
                println!("{} {}", p.degree(), c.format_place(&p));
            }
            Ok(())
        }
        Command::Records { records_file, action } => match action {
            RecordsAction::Query { q, g } => {
                println!("{}", load_records(&records_file)?.query(q, g)?);
                Ok(())
            }
            RecordsAction::List => {
                print!("{}", load_records(&records_file)?.to_csv());
                Ok(())
            }
            RecordsAction::Import { file, save } => {
                let mut table = match &records_file {
                    Some(p) if p.exists() => RecordTable::load(p)?,
                    _ => RecordTable::builtin(),
                };
                for (q, g, iv) in RecordTable::load(&file)?.rows() {
                    table.insert(q, g, iv)?;
                }
                match (&records_file, save) {
                    (Some(p), true) => table.save(p)?,
                    (None, true) => return Err(CliError::Usage("--save needs --records-file".into())),
                    _ => print!("{}", table.to_csv()),
                }
                Ok(())
            }
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if !matches!(e, CliError::Mismatch) {
                eprintln!("error: {e}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}
