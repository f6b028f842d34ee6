use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use chordbar::barcode::{self, Barcode};
use chordbar::coefficients::{parse_rational, Rational};
use chordbar::complex::{ActionValue, FilteredComplex, Window};
use chordbar::dga::{check_augmentation, partial_linearization};
use chordbar::displacement::{oscillation, theorem_bound, OscillationProfile, PiecewiseLinear};
use chordbar::pwc::{check_transitions, drift_speed_audit, simulate, vineyard_csv, PwcError};
use chordbar::schema::{self, ComplexFile, DgaFile, Num, SchemaError, TimelineFile};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::Value;

mod examples;

#[derive(Parser)]
#[command(name = "chordbar", version, about = "Exact barcodes for filtered complexes and chord DGAs")]
struct Cli {
    /// Prefix human-readable output with a version and time header.
    #[arg(long, global = true)]
    stamp: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a complex, DGA or timeline file.
    Validate {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Kind::Auto)]
        kind: Kind,
        /// Also check this augmentation against the DGA.
        #[arg(long)]
        augmentation: Option<PathBuf>,
    },
    /// Compute the barcode of a complex.
    Barcode {
        path: PathBuf,
        #[arg(long, value_enum, default_value_t = Engine::Canonical)]
        engine: Engine,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
        /// Column width of the bar diagram.
        #[arg(long, default_value_t = 60)]
        width: usize,
    },
    /// Run a timeline and check every event against the bifurcation rules.
    Simulate {
        path: PathBuf,
        /// Write the vineyard CSV (`t,bar_id,start,end`) here; `-` for stdout.
        #[arg(long)]
        vineyard: Option<PathBuf>,
        /// CSV `t,rate` of the oscillation rate; audits the drift speeds.
        #[arg(long)]
        audit: Option<PathBuf>,
    },
    /// Partially linearize a two-component DGA on an action window.
    Linearize {
        dga: PathBuf,
        #[arg(long)]
        augmentation: Option<PathBuf>,
        /// Window lower bound.
        #[arg(long, allow_hyphen_values = true)]
        lower: String,
        /// Window upper bound (`inf` allowed).
        #[arg(long)]
        upper: String,
        /// Length cutoff for pure chords (`inf` allowed).
        #[arg(long)]
        l: String,
        /// Write the linearized complex here.
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Table)]
        format: Format,
    },
    /// Lower bound on the number of chords from σ and Betti data.
    Bound {
        /// σ values by degree: a JSON array file or an inline list `inf,inf`.
        #[arg(long)]
        sigma: String,
        /// Betti numbers by degree: a JSON array file or an inline list `1,0,1`.
        #[arg(long)]
        betti: String,
        #[arg(long, default_value = "inf")]
        l: String,
        /// Oscillation value.
        #[arg(long, conflicts_with = "osc_profile")]
        osc: Option<String>,
        /// CSV `t,max,min`; the oscillation is integrated over its domain.
        #[arg(long)]
        osc_profile: Option<PathBuf>,
    },
    /// Print a built-in example file, or write all of them to a directory.
    Fixtures {
        name: Option<String>,
        #[arg(long, default_value = "F2")]
        field: String,
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Auto,
    Complex,
    Dga,
    Timeline,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Canonical,
    Definitional,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Table,
    Json,
    Csv,
    Diagram,
}

/// Exit 1 for domain failures, 2 for I/O and parse failures.
enum Failure {
    Domain(String),
    Input(String),
    /// Checks ran but some failed: full report on stdout, summary on stderr.
    Rejected { report: String, summary: String },
}

impl From<SchemaError> for Failure {
    fn from(e: SchemaError) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<String, Failure>;

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn parse_file<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = read(path)?;
    serde_json::from_str(&text)
        .map_err(|e| Failure::Input(format!("{}: {}", path.display(), SchemaError::from(e))))
}

fn domain<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Domain(e.to_string())
}

fn rational_arg(name: &str, text: &str) -> Result<Rational, Failure> {
    parse_rational(text).ok_or_else(|| Failure::Input(format!("--{name}: `{text}` is not a rational number")))
}

fn action_arg(name: &str, text: &str) -> Result<ActionValue, Failure> {
    text.parse().map_err(|e| Failure::Input(format!("--{name}: {e}")))
}

fn load_complex(path: &Path) -> Result<FilteredComplex, Failure> {
    let file: ComplexFile = parse_file(path)?;
    schema::complex_from_file(&file)?.map_err(domain)
}

fn render(b: &Barcode, format: Format, width: usize) -> String {
    match format {
        Format::Table => barcode::render_table(b),
        Format::Csv => barcode::render_csv(b),
        Format::Diagram => barcode::render_diagram(b, width),
        Format::Json => schema::to_pretty(&schema::barcode_to_dtos(b)) + "\n",
    }
}

fn detect(value: &Value) -> Option<Kind> {
    let obj = value.as_object()?;
    if obj.contains_key("entries") {
        Some(Kind::Timeline)
    } else if obj.contains_key("chords") {
        Some(Kind::Dga)
    } else if obj.contains_key("generators") {
        Some(Kind::Complex)
    } else {
        None
    }
}

fn cmd_validate(path: &Path, kind: Kind, augmentation: Option<&Path>) -> Outcome {
    let text = read(path)?;
    let kind = match kind {
        Kind::Auto => {
            let value: Value = serde_json::from_str(&text).map_err(|e| Failure::Input(SchemaError::from(e).to_string()))?;
            detect(&value).ok_or_else(|| Failure::Input("cannot tell whether this is a complex, DGA or timeline".into()))?
        }
        k => k,
    };
    match kind {
        Kind::Complex => {
            let file: ComplexFile = schema::parse(&text)?;
            let c = schema::complex_from_file(&file)?.map_err(domain)?;
            Ok(format!("valid complex: {} generators over {}, window {}\n", c.len(), c.field(), c.window()))
        }
        Kind::Dga => {
            let file: DgaFile = schema::parse(&text)?;
            let dga = schema::dga_from_file(&file)?.map_err(domain)?;
            let report = dga.validate();
            if !report.is_valid() {
                return Err(Failure::Domain(report.to_string()));
            }
            let mut out = format!("valid DGA: {} chords over {}\n", dga.len(), dga.field());
            if let Some(p) = augmentation {
                let eps = schema::augmentation_from_file(dga.field(), &parse_file(p)?)?;
                let r = check_augmentation(&dga, &eps);
                if !r.is_valid() {
                    return Err(Failure::Domain(format!("augmentation: {r}")));
                }
                out.push_str("augmentation: valid\n");
            }
            Ok(out)
        }
        Kind::Timeline => {
            let file: TimelineFile = schema::parse(&text)?;
            let (initial, timeline) = schema::timeline_from_file(&file)?;
            let initial = initial.map_err(domain)?;
            let trace = simulate(&initial, &timeline).map_err(domain)?;
            Ok(format!("valid timeline: {} events, {} samples\n", trace.events.len(), trace.samples.len()))
        }
        Kind::Auto => unreachable!("resolved above"),
    }
}

fn cmd_barcode(path: &Path, engine: Engine, format: Format, width: usize) -> Outcome {
    let c = load_complex(path)?;
    let b = match engine {
        Engine::Canonical => barcode::barcode(&c),
        Engine::Definitional => barcode::barcode_definitional(&c),
        Engine::Both => {
            let a = barcode::barcode(&c);
            let d = barcode::barcode_definitional(&c);
            if a != d {
                return Err(Failure::Domain(format!(
                    "engine mismatch\ncanonical:\n{}definitional:\n{}",
                    barcode::render_table(&a),
                    barcode::render_table(&d)
                )));
            }
            a
        }
    };
    Ok(render(&b, format, width))
}

fn simulate_error(e: PwcError) -> Failure {
    Failure::Domain(e.to_string())
}

fn read_rate_csv(path: &Path) -> Result<PiecewiseLinear, Failure> {
    let text = read(path)?;
    let mut points = Vec::new();
    for (i, line) in csv_rows(&text) {
        let [t, r] = line.as_slice() else {
            return Err(Failure::Input(format!("{}:{i}: expected `t,rate`", path.display())));
        };
        points.push((rational_arg("audit", t)?, rational_arg("audit", r)?));
    }
    PiecewiseLinear::new(points).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// Non-empty, non-comment rows split on commas, skipping a header whose
/// first cell is `t`.
fn csv_rows(text: &str) -> Vec<(usize, Vec<&str>)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
        .map(|(i, l)| (i, l.split(',').map(str::trim).collect::<Vec<_>>()))
        .filter(|(_, cells)| cells.first() != Some(&"t"))
        .collect()
}

fn cmd_simulate(path: &Path, vineyard: Option<&Path>, audit: Option<&Path>) -> Outcome {
    let file: TimelineFile = parse_file(path)?;
    let (initial, timeline) = schema::timeline_from_file(&file)?;
    let initial = initial.map_err(domain)?;
    let trace = simulate(&initial, &timeline).map_err(simulate_error)?;
    let report = check_transitions(&trace);
    let mut out = String::new();
    for check in &report.checks {
        out.push_str(&format!("{check}\n"));
    }
    let mut ok = report.all_passed();
    if let Some(p) = audit {
        let omega = read_rate_csv(p)?;
        let a = drift_speed_audit(&initial, &timeline, &omega);
        out.push_str(&format!("audit: {} segments checked\n", a.segments_checked));
        for f in &a.findings {
            out.push_str(&format!("audit entry {} {:?}: {}\n", f.index, f.kind, f.detail));
        }
        ok &= a.passed();
    }
    if let Some(v) = vineyard {
        let csv = vineyard_csv(&trace);
        if v == Path::new("-") {
            out.push_str(&csv);
        } else {
            write(v, &csv)?;
        }
    }
    if ok {
        Ok(out)
    } else {
        let failed = report.failures().count();
        Err(Failure::Rejected {
            report: out,
            summary: format!("{failed} transition check(s) failed"),
        })
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_linearize(
    dga_path: &Path,
    augmentation: Option<&Path>,
    lower: &str,
    upper: &str,
    l: &str,
    output: Option<&Path>,
    format: Format,
) -> Outcome {
    let file: DgaFile = parse_file(dga_path)?;
    let dga = schema::dga_from_file(&file)?.map_err(domain)?;
    let eps = match augmentation {
        Some(p) => schema::augmentation_from_file(dga.field(), &parse_file(p)?)?,
        None => chordbar::dga::Augmentation::default(),
    };
    let window = Window::new(action_arg("lower", lower)?, action_arg("upper", upper)?).map_err(domain)?;
    let l = action_arg("l", l)?;
    let lin = partial_linearization(&dga, &eps, &window, &l).map_err(domain)?;
    if let Some(p) = output {
        write(p, &(schema::to_pretty(&ComplexFile::from(&lin.complex)) + "\n"))?;
    }
    let mut out = render(&barcode::barcode(&lin.complex), format, 60);
    for (m, w) in &lin.below_window_words {
        out.push_str(&format!("note: {m} has word {w} through a chord below the window\n"));
    }
    Ok(out)
}

fn list_arg(text: &str) -> Result<Vec<Num>, Failure> {
    let path = Path::new(text);
    if path.exists() {
        return parse_file(path);
    }
    Ok(text
        .trim_matches(|c| c == '[' || c == ']')
        .split(',')
        .map(|s| Num::Text(s.trim().trim_matches('"').to_string()))
        .collect())
}

fn read_profile_csv(path: &Path) -> Result<OscillationProfile, Failure> {
    let text = read(path)?;
    let mut samples = Vec::new();
    for (i, line) in csv_rows(&text) {
        let [t, hi, lo] = line.as_slice() else {
            return Err(Failure::Input(format!("{}:{i}: expected `t,max,min`", path.display())));
        };
        samples.push((
            rational_arg("osc-profile", t)?,
            rational_arg("osc-profile", hi)?,
            rational_arg("osc-profile", lo)?,
        ));
    }
    OscillationProfile::new(samples).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

fn cmd_bound(sigma: &str, betti: &str, l: &str, osc: Option<&str>, osc_profile: Option<&Path>) -> Outcome {
    let sigma = schema::sigma_from_values(&list_arg(sigma)?)?.map_err(domain)?;
    let betti: Vec<u64> = list_arg(betti)?
        .iter()
        .map(|n| {
            n.to_string()
                .parse::<u64>()
                .map_err(|_| Failure::Input(format!("--betti: `{n}` is not a non-negative integer")))
        })
        .collect::<Result<_, _>>()?;
    let betti = schema::betti_from_values(&betti);
    let l = action_arg("l", l)?;
    let osc = match (osc, osc_profile) {
        (Some(o), _) => rational_arg("osc", o)?,
        (None, Some(p)) => {
            let profile = read_profile_csv(p)?;
            oscillation(&profile, profile.end()).map_err(domain)?
        }
        (None, None) => return Err(Failure::Input("one of --osc or --osc-profile is required".into())),
    };
    let report = theorem_bound(&sigma, &betti, &l, &osc).map_err(domain)?;
    Ok(format!("oscillation: {osc}\n{report}"))
}

fn cmd_fixtures(name: Option<&str>, field: &str, out_dir: Option<&Path>) -> Outcome {
    let field = field.parse().map_err(|e| Failure::Input(format!("--field: {e}")))?;
    match (name, out_dir) {
        (Some(n), None) => examples::render(n, field).ok_or_else(|| {
            Failure::Input(format!("unknown fixture `{n}`; available: {}", examples::NAMES.join(", ")))
        }),
        (None, Some(dir)) => {
            fs::create_dir_all(dir).map_err(|e| Failure::Input(format!("{}: {e}", dir.display())))?;
            let mut out = String::new();
            for n in examples::NAMES {
                let path = dir.join(format!("{n}.{}", examples::extension(n)));
                write(&path, &examples::render(n, field).expect("listed fixture"))?;
                out.push_str(&format!("{}\n", path.display()));
            }
            Ok(out)
        }
        (None, None) => Ok(examples::NAMES.join("\n") + "\n"),
        (Some(_), Some(_)) => Err(Failure::Input("give either a fixture name or --out-dir".into())),
    }
}

fn stamp() -> String {
    let secs = std::time::SystemTime::now()
        .duration_since(std::time::UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0);
    format!("# chordbar {} at unix time {secs}\n", env!("CARGO_PKG_VERSION"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut human = true;
    let result = match &cli.command {
        Command::Validate {
            path,
            kind,
            augmentation,
        } => cmd_validate(path, *kind, augmentation.as_deref()),
        Command::Barcode {
            path,
            engine,
            format,
            width,
        } => {
            human = matches!(format, Format::Table | Format::Diagram);
            cmd_barcode(path, *engine, *format, *width)
        }
        Command::Simulate { path, vineyard, audit } => {
            human = vineyard.as_deref() != Some(Path::new("-"));
            cmd_simulate(path, vineyard.as_deref(), audit.as_deref())
        }
        Command::Linearize {
            dga,
            augmentation,
            lower,
            upper,
            l,
            output,
            format,
        } => {
            human = matches!(format, Format::Table | Format::Diagram);
            cmd_linearize(dga, augmentation.as_deref(), lower, upper, l, output.as_deref(), *format)
        }
        Command::Bound {
            sigma,
            betti,
            l,
            osc,
            osc_profile,
        } => cmd_bound(sigma, betti, l, osc.as_deref(), osc_profile.as_deref()),
        Command::Fixtures { name, field, out_dir } => {
            human = name.is_none();
            cmd_fixtures(name.as_deref(), field, out_dir.as_deref())
        }
    };
    let header = if cli.stamp && human { stamp() } else { String::new() };
    match result {
        Ok(out) => {
            print!("{header}{out}");
            ExitCode::SUCCESS
        }
        Err(Failure::Domain(msg)) => {
            print!("{header}");
            eprintln!("error: {}", msg.trim_end());
            ExitCode::from(1)
        }
        Err(Failure::Rejected { report, summary }) => {
            print!("{header}{report}");
            eprintln!("error: {summary}");
            ExitCode::from(1)
        }
        Err(Failure::Input(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
