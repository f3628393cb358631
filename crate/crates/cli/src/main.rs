//! `integral-cayley`: build finite Z/n-algebras from JSON specs, certify them,
//! and compute or verify Cayley-graph spectra.
//!
//! Exit codes: 0 success, 1 input error, 2 size cap, 3 ring not symmetric
//! (or functional degenerate), 4 integrality and stability disagree.

mod select;

use std::fs::{File, OpenOptions};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use integral_cayley::arith::gcd;
use integral_cayley::{
    certify, gcd_classes, induced_dirichlet_is_trivial, is_additively_closed, is_nondegenerate,
    numeric_spectrum_oracle, paley_graph, power_residue_character, quadratic_character, quartic_residue_character,
    run_census, spectrum, to_dot, verify_by_characters, verify_theorem, CayleyGraph, Certificate, Error, FiniteRing,
    LinearFunctional, MultiplicativeCharacter, RingSpec, VerifyMode,
};

const THREADS_ENV: &str = "INTEGRAL_CAYLEY_THREADS";

#[derive(Parser)]
#[command(
    name = "integral-cayley",
    version,
    about = "Exact spectra of Cayley graphs over finite rings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the ring carries a non-degenerate linear functional.
    Certify {
        spec: PathBuf,
        /// Test these generator values instead of searching.
        #[arg(long)]
        psi: Option<String>,
    },
    /// Exact spectrum of one Cayley graph.
    Spectrum {
        spec: PathBuf,
        #[command(flatten)]
        set: SetArg,
        /// Non-degenerate functional to use instead of the certified one.
        #[arg(long)]
        psi: Option<String>,
        /// Cross-check against a floating-point eigensolver.
        #[arg(long)]
        oracle: bool,
        /// Also write the graph in DOT format.
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Compare integrality with scalar stability over many connection sets.
    Verify {
        spec: PathBuf,
        #[command(flatten)]
        mode: ModeArgs,
        /// Test a single connection set.
        #[arg(long, conflicts_with_all = ["exhaustive", "sample"])]
        set: Option<String>,
        #[arg(long)]
        psi: Option<String>,
        /// Use all of Hom(R, Z/n) for the spectrum; works on any ring.
        #[arg(long, conflicts_with = "psi")]
        characters: bool,
    },
    /// Batch run over a family of rings, one JSON line per connection set.
    Census {
        /// Inclusive range of moduli for the `zn` family, e.g. `3..8`.
        #[arg(long, conflicts_with = "specs")]
        range: Option<String>,
        /// Spec files forming the family.
        #[arg(long, num_args = 0..)]
        specs: Vec<PathBuf>,
        /// Output file; records go to stdout and the summary to stderr if absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Append to the output file instead of truncating it.
        #[arg(long, requires = "out")]
        append: bool,
        #[command(flatten)]
        mode: ModeArgs,
        #[arg(long)]
        no_timestamp: bool,
    },
    /// Paley-type graph Γ(R, ker χ) and the induced-character criterion.
    Paley {
        #[arg(long)]
        ring: PathBuf,
        #[arg(long = "char", value_enum)]
        character: CharKind,
        /// Element index of a square root of -1, for quartic characters on rings
        /// other than Z[x]/(x^2 + 1, p).
        #[arg(long)]
        sqrt_minus_one: Option<usize>,
    },
    /// Write a Cayley graph in DOT format.
    Export {
        spec: PathBuf,
        #[command(flatten)]
        set: SetArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SetArg {
    /// Connection set: index list `1,7`, `units`, `gcd:d[,d..]`, `orbit:i` or `empty`.
    #[arg(long)]
    set: String,
}

#[derive(Args)]
struct ModeArgs {
    /// Every union of negation classes (the default).
    #[arg(long, conflicts_with = "sample")]
    exhaustive: bool,
    /// Number of random unions of negation classes.
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, default_value_t = 0, requires = "sample")]
    seed: u64,
}

impl ModeArgs {
    fn mode(&self) -> VerifyMode {
        match self.sample {
            Some(count) if !self.exhaustive => VerifyMode::Sample { count, seed: self.seed },
            _ => VerifyMode::Exhaustive,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum CharKind {
    Quartic,
    Quadratic,
    Trivial,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Failure {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e {
            Error::SizeCap { .. } => 2,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    // usage errors are input errors; clap's own code 2 is reserved for caps
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Err(f) = configure_threads() {
        eprintln!("error: {}", f.message);
        return ExitCode::from(f.code);
    }
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(raw) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| Failure::input(format!("{THREADS_ENV} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| Failure {
            code: 2,
            message: e.to_string(),
        })
}

fn run(command: Command) -> Outcome {
    match command {
        Command::Certify { spec, psi } => cmd_certify(&spec, psi.as_deref()),
        Command::Spectrum {
            spec,
            set,
            psi,
            oracle,
            dot,
        } => cmd_spectrum(&spec, &set.set, psi.as_deref(), oracle, dot.as_deref()),
        Command::Verify {
            spec,
            mode,
            set,
            psi,
            characters,
        } => {
            let mode = match set {
                Some(s) => {
                    let (_, ring) = load(&spec)?;
                    VerifyMode::Single(select::resolve(&ring, &s).map_err(Failure::input)?)
                }
                None => mode.mode(),
            };
            cmd_verify(&spec, mode, psi.as_deref(), characters)
        }
        Command::Census {
            range,
            specs,
            out,
            append,
            mode,
            no_timestamp,
        } => cmd_census(
            range.as_deref(),
            &specs,
            out.as_deref(),
            append,
            mode.mode(),
            no_timestamp,
        ),
        Command::Paley {
            ring,
            character,
            sqrt_minus_one,
        } => cmd_paley(&ring, character, sqrt_minus_one),
        Command::Export { spec, set, out } => cmd_export(&spec, &set.set, out.as_deref()),
    }
}

fn read_spec(path: &Path) -> Result<RingSpec, Failure> {
    let text =
        std::fs::read_to_string(path).map_err(|e| Failure::input(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("cannot parse {}: {e}", path.display())))
}

fn load(path: &Path) -> Result<(RingSpec, FiniteRing), Failure> {
    let spec = read_spec(path)?;
    let ring = spec.build()?;
    Ok((spec, ring))
}

fn print_json(value: &Value) {
    println!("{value}");
}

fn explicit_functional(ring: &FiniteRing, text: &str) -> Result<LinearFunctional, Failure> {
    let values = select::parse_values(text).map_err(Failure::input)?;
    Ok(LinearFunctional::new(ring, values)?)
}

/// The functional a spectrum or verification runs with: `--psi` if given
/// (must be non-degenerate), else the certified one.
fn working_functional(spec: &RingSpec, ring: &FiniteRing, psi: Option<&str>) -> Result<LinearFunctional, Failure> {
    if let Some(text) = psi {
        let psi = explicit_functional(ring, text)?;
        if !is_nondegenerate(ring, &psi)? {
            return Err(Failure::input(Error::DegenerateFunctional.to_string()));
        }
        return Ok(psi);
    }
    match certify(ring, Some(spec))? {
        Certificate::Symmetric { psi, .. } => Ok(psi),
        Certificate::NotSymmetric { .. } => Err(Failure {
            code: 3,
            message: "ring is not symmetric; pass --psi or use --characters where available".into(),
        }),
    }
}

fn cmd_certify(path: &Path, psi: Option<&str>) -> Outcome {
    let (spec, ring) = load(path)?;
    if let Some(text) = psi {
        let psi = explicit_functional(&ring, text)?;
        let witness = integral_cayley::functional::kernel_ideal_witness(&ring, &psi)?;
        let nondegenerate = witness.is_none();
        print_json(&json!({
            "ring": ring.label(),
            "psi": psi.values(),
            "nondegenerate": nondegenerate,
            "witness": witness.map(|r| r.coords().to_vec()),
        }));
        return Ok(if nondegenerate { 0 } else { 3 });
    }
    match certify(&ring, Some(&spec))? {
        Certificate::Symmetric { psi, canonical } => {
            print_json(&json!({
                "symmetric": true,
                "ring": ring.label(),
                "psi": psi.values(),
                "canonical": canonical,
            }));
            Ok(0)
        }
        Certificate::NotSymmetric { witnesses } => {
            let mut ideals = Vec::with_capacity(witnesses.len());
            for (psi, r) in &witnesses {
                ideals.push(json!({
                    "psi": psi.values(),
                    "generator": r.coords(),
                    "ideal": ring.principal_ideal_indices(r)?,
                }));
            }
            print_json(&json!({
                "symmetric": false,
                "ring": ring.label(),
                "psi": null,
                "witness_ideals": ideals,
            }));
            Ok(3)
        }
    }
}

fn cmd_spectrum(path: &Path, selector: &str, psi: Option<&str>, oracle: bool, dot: Option<&Path>) -> Outcome {
    let (spec, ring) = load(path)?;
    let set = select::resolve(&ring, selector).map_err(Failure::input)?;
    let graph = CayleyGraph::new(&ring, set)?;
    let psi = working_functional(&spec, &ring, psi)?;
    let report = spectrum(&ring, &graph, &psi)?;
    let mut out = report.to_json();
    if let Some(e) = report.eigenvalues.iter().find(|e| e.integer.is_none()) {
        out["witness"] = json!(e.r);
    }
    if oracle {
        let mut numeric = numeric_spectrum_oracle(&ring, &graph)?;
        let mut exact = report.numeric_values();
        numeric.sort_by(f64::total_cmp);
        exact.sort_by(f64::total_cmp);
        let deviation = numeric
            .iter()
            .zip(&exact)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        out["oracle_max_deviation"] = json!(deviation);
    }
    if let Some(dot_path) = dot {
        write_file(dot_path, &to_dot(&ring, &graph)?)?;
    }
    print_json(&out);
    Ok(0)
}

fn cmd_verify(path: &Path, mode: VerifyMode, psi: Option<&str>, characters: bool) -> Outcome {
    let (spec, ring) = load(path)?;
    let report = if characters {
        verify_by_characters(&ring, &mode)?
    } else {
        let psi = working_functional(&spec, &ring, psi)?;
        verify_theorem(&ring, &psi, &mode)?
    };
    let mut out = report.to_json();
    out["ring"] = json!(ring.label());
    let mut ok = report.is_consistent();
    if integral_cayley::arith::is_prime(ring.modulus()) {
        // integral sets whose union with 0 is not an F_p-subspace
        let mut count = 0;
        for v in report.verdicts.iter().filter(|v| v.integral) {
            if !is_additively_closed(&ring, &v.connection)? {
                count += 1;
            }
        }
        out["integral_non_subspace_sets"] = json!(count);
    }
    if let RingSpec::Zn { n } = spec {
        // integral sets of Z/n should be exactly the unions of gcd classes
        let integral: Vec<&Vec<usize>> = report
            .verdicts
            .iter()
            .filter(|v| v.integral)
            .map(|v| &v.connection)
            .collect();
        let classes = gcd_classes(n);
        let all_gcd_unions = integral.iter().all(|set| is_gcd_union(n, &classes, set));
        out["integral_sets"] = json!(integral.len());
        out["integral_sets_are_gcd_unions"] = json!(all_gcd_unions);
        ok &= all_gcd_unions;
    }
    print_json(&out);
    Ok(if ok { 0 } else { 4 })
}

fn is_gcd_union(n: u64, classes: &std::collections::BTreeMap<u64, Vec<u64>>, set: &[usize]) -> bool {
    set.iter().all(|&m| {
        let class = &classes[&gcd(m as u64, n)];
        class.iter().all(|c| set.binary_search(&(*c as usize)).is_ok())
    })
}

fn parse_range(text: &str) -> Result<(u64, u64), Failure> {
    let bad = || Failure::input(format!("range must look like `a..b`, got {text:?}"));
    let (a, b) = text.split_once("..").ok_or_else(bad)?;
    let b = b.strip_prefix('=').unwrap_or(b);
    let lo: u64 = a.trim().parse().map_err(|_| bad())?;
    let hi: u64 = b.trim().parse().map_err(|_| bad())?;
    if lo == 0 {
        return Err(Failure::input("moduli start at 1"));
    }
    Ok((lo, hi))
}

fn cmd_census(
    range: Option<&str>,
    specs: &[PathBuf],
    out: Option<&Path>,
    append: bool,
    mode: VerifyMode,
    no_timestamp: bool,
) -> Outcome {
    let family: Vec<RingSpec> = match range {
        Some(text) => {
            let (lo, hi) = parse_range(text)?;
            (lo..=hi).map(|n| RingSpec::Zn { n }).collect()
        }
        None => specs.iter().map(|p| read_spec(p)).collect::<Result<_, _>>()?,
    };
    let timestamp = if no_timestamp {
        None
    } else {
        Some(
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
        )
    };
    let mut sink: Box<dyn Write> = match out {
        Some(path) => {
            let file = OpenOptions::new()
                .create(true)
                .write(true)
                .append(append)
                .truncate(!append)
                .open(path)
                .map_err(|e| Failure::input(format!("cannot open {}: {e}", path.display())))?;
            Box::new(BufWriter::new(file))
        }
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    };
    let summary = run_census(&family, &mode, timestamp, |record| {
        serde_json::to_writer(&mut sink, record)?;
        sink.write_all(b"\n")
    })?
    .and_then(|s| sink.flush().map(|_| s))
    .map_err(|e| Failure::input(format!("cannot write census output: {e}")))?;
    drop(sink);
    let line = serde_json::to_string(&summary).expect("summary serializes");
    if out.is_some() {
        println!("{line}");
    } else {
        eprintln!("{line}");
    }
    Ok(if summary.is_consistent() { 0 } else { 4 })
}

fn cmd_paley(path: &Path, kind: CharKind, sqrt_minus_one: Option<usize>) -> Outcome {
    let (spec, ring) = load(path)?;
    let chi: MultiplicativeCharacter = match (kind, sqrt_minus_one) {
        (CharKind::Quartic, Some(idx)) => power_residue_character(&ring, 4, &ring.element_at(idx)?)?,
        (CharKind::Quartic, None) => quartic_residue_character(&spec)?.1,
        (CharKind::Quadratic, _) => quadratic_character(&ring)?,
        (CharKind::Trivial, _) => MultiplicativeCharacter::trivial(&ring)?,
    };
    let graph = paley_graph(&ring, &chi)?;
    let psi = working_functional(&spec, &ring, None)?;
    let report = spectrum(&ring, &graph, &psi)?;
    let trivial = induced_dirichlet_is_trivial(&ring, &chi, ring.modulus())?;
    let consistent = trivial == report.integral;
    print_json(&json!({
        "character_order": chi.order(),
        "report": report.to_json(),
        "induced_trivial": trivial,
        "integral": report.integral,
        "consistent": consistent,
    }));
    Ok(if consistent { 0 } else { 4 })
}

fn cmd_export(path: &Path, selector: &str, out: Option<&Path>) -> Outcome {
    let (_, ring) = load(path)?;
    let set = select::resolve(&ring, selector).map_err(Failure::input)?;
    let graph = CayleyGraph::new(&ring, set)?;
    let dot = to_dot(&ring, &graph)?;
    match out {
        Some(p) => write_file(p, &dot)?,
        None => print!("{dot}"),
    }
    Ok(0)
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    File::create(path)
        .and_then(|mut f| f.write_all(contents.as_bytes()))
        .map_err(|e| Failure::input(format!("cannot write {}: {e}", path.display())))
}
