use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use margulis_core::analysis::{analyze_group, ElementSummary, GroupAnalysis, OwnedStructure};
use margulis_core::classifier::{classify, CheckedEntry, Classification};
use margulis_core::corpus::{fixture, FixtureOptions};
use margulis_core::groupfile::{parse_group, serialize_group, Group};
use margulis_core::obstruction::{properness_scan, ObstructionReport, ScanConfig};
use margulis_core::spectral::SpectralConfig;
use margulis_core::Error;

const EXIT_FAILURE: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_OBSTRUCTION: u8 = 10;
const EXIT_USAGE: u8 = 64;

#[derive(Parser)]
#[command(
    name = "margulis",
    version,
    about = "Spectral analysis and properness scans for affine groups"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FixtureName {
    Lattice,
    Margulis,
    Case23,
    #[value(name = "sl3-violation")]
    Sl3Violation,
}

impl FixtureName {
    fn as_str(self) -> &'static str {
        match self {
            FixtureName::Lattice => "lattice",
            FixtureName::Margulis => "margulis",
            FixtureName::Case23 => "case23",
            FixtureName::Sl3Violation => "sl3-violation",
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Spectral data, splittings and signs of the generators and short words.
    Analyze {
        file: PathBuf,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..=10))]
        max_len: u64,
        /// Distance to 1 below which an eigenvalue counts as 1.
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Bounded search for obstructions to proper discontinuity.
    /// Exits with 10 when one is found.
    Scan {
        file: PathBuf,
        #[arg(long, default_value_t = 4, value_parser = clap::value_parser!(u64).range(1..=10))]
        max_len: u64,
        #[arg(long, default_value_t = 12, value_parser = clap::value_parser!(u32).range(1..=64))]
        max_exp: u32,
        #[arg(long, default_value_t = 1.0)]
        radius: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Smallest |alpha| counted as a sign and smallest transversality margin.
        #[arg(long, default_value_t = 1e-6)]
        margin: f64,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Admissible semisimple linear parts for R^n, 2 <= n <= 6, re-checked by sampling.
    Classify {
        n: usize,
        #[arg(long, default_value_t = 200)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Writes a fixture group file.
    Corpus {
        #[arg(value_enum)]
        name: FixtureName,
        /// Rank of the translation lattice.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        boost: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        angle: Option<f64>,
        #[arg(long)]
        scale: Option<f64>,
        /// Give the second generator of the margulis pair the opposite sign.
        #[arg(long)]
        flip: bool,
        /// V1 -> V2 coupling of the case23 fixture.
        #[arg(long, allow_hyphen_values = true)]
        coupling: Option<f64>,
        /// Put V1 and V2 of the case23 fixture in general position.
        #[arg(long)]
        mix: bool,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn usage(e: Error) -> Failure {
    Failure::new(EXIT_USAGE, e.to_string())
}

fn input(path: &Path, e: Error) -> Failure {
    Failure::new(EXIT_PARSE, format!("{}: {e}", path.display()))
}

fn load(path: &Path) -> Result<(Group, Option<OwnedStructure>), Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))?;
    let group = parse_group(&text).map_err(|e| input(path, e))?;
    let structure = OwnedStructure::from_group(&group).map_err(|e| input(path, e))?;
    if let Some(s) = &structure {
        s.view()
            .check(&group.generators)
            .map_err(|e| input(path, e))?;
    }
    Ok((group, structure))
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("report serializes");
    s.push('\n');
    s
}

fn num(x: f64) -> String {
    if x.is_nan() {
        "-".into()
    } else {
        format!("{x:.6e}")
    }
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_else(|| "-".into())
}

fn vector(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| num(*x)).collect();
    format!("[{}]", parts.join(", "))
}

fn element_line(out: &mut String, e: &ElementSummary) {
    let _ = write!(
        out,
        "  {:<16} {}/{}/{}  lambda {}  s {}  {}  alpha {}",
        e.word,
        e.dim_plus,
        e.dim_minus,
        e.dim_zero,
        num(e.lambda),
        opt(e.s),
        if e.hyperbolic {
            "hyperbolic"
        } else {
            "-         "
        },
        opt(e.alpha),
    );
    if let Some(n) = &e.note {
        let _ = write!(out, "  ({n})");
    }
    out.push('\n');
}

fn analysis_text(a: &GroupAnalysis) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "dimension {}", a.dimension);
    let _ = writeln!(
        out,
        "structure: {}",
        a.structure.as_deref().unwrap_or("none")
    );
    let _ = writeln!(out, "generators (dim A+/A-/A0):");
    for e in &a.generators {
        element_line(&mut out, e);
    }
    if !a.words.is_empty() {
        let _ = writeln!(out, "words of length 2..={}:", a.max_len);
        for e in &a.words {
            element_line(&mut out, e);
        }
    }
    let _ = writeln!(
        out,
        "hyperbolic words: {}; words without eigenvalue 1 (tol {}): {}{}",
        a.hyperbolic_words,
        num(a.tol),
        a.without_eigenvalue_one,
        if a.truncated {
            "; enumeration truncated"
        } else {
            ""
        }
    );
    out
}

fn report_text(r: &ObstructionReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "verdict: {}", r.verdict.as_str());
    if let Some(f) = &r.eigenvalue_one {
        let _ = writeln!(out, "no eigenvalue 1: {}", f.word);
        if let Some(p) = &f.fixed_point {
            let _ = writeln!(
                out,
                "  fixed point {} (residual {})",
                vector(p),
                opt(f.residual)
            );
        }
    }
    if let Some(p) = &r.pair {
        let _ = writeln!(
            out,
            "positive: {}  alpha {}",
            p.positive.word,
            num(p.positive.alpha)
        );
        let _ = writeln!(
            out,
            "negative: {}  alpha {}",
            p.negative.word,
            num(p.negative.alpha)
        );
        let _ = writeln!(
            out,
            "conjugator: {}  (conjugated {}; transversality margin {})",
            p.conjugator,
            p.conjugated,
            num(p.transversality_margin)
        );
    }
    if let Some(b) = &r.ball {
        let _ = writeln!(
            out,
            "ball witness: h^{} g^{} with g = {}, h = {}, radius {}",
            b.m,
            b.n,
            b.g,
            b.h,
            num(b.radius)
        );
        let _ = writeln!(out, "  point {}", vector(&b.point));
        let _ = writeln!(out, "  centers {} and {}", vector(&b.p1), vector(&b.p2));
        let _ = writeln!(
            out,
            "  slacks {} and {}",
            num(b.start_slack),
            num(b.end_slack)
        );
    }
    let s = &r.signs;
    let _ = writeln!(
        out,
        "signs: {} hyperbolic words, {} signed ({} positive, {} negative, {} undecided), alpha in [{}, {}]",
        s.hyperbolic_words,
        s.signed_words,
        s.positive,
        s.negative,
        s.undecided,
        opt(s.min_alpha),
        opt(s.max_alpha)
    );
    let b = &r.budget;
    let _ = writeln!(
        out,
        "budget: max-len {}, max-exp {}, radius {}, margin {}, seed {}; {} words{}, {} pairs examined",
        b.max_len,
        b.max_exp,
        num(b.radius),
        num(b.margin),
        b.seed,
        b.words_enumerated,
        if b.truncated { " (truncated)" } else { "" },
        b.pairs_examined
    );
    let _ = writeln!(out, "note: {}", r.note);
    out
}

fn entry_line(out: &mut String, e: &CheckedEntry) {
    let c = &e.census;
    let _ = writeln!(
        out,
        "  ({}) {:<20} V1 = {:<12} real rank {}  eigenvalue 1 on V1: {}  [{} / {} samples; {}]",
        e.entry.item,
        e.entry.group,
        e.entry
            .v1_blocks
            .iter()
            .map(|d| format!("R^{d}"))
            .collect::<Vec<_>>()
            .join(" + "),
        e.entry.real_rank,
        if e.entry.eigenvalue_one_on_v1 {
            "yes"
        } else {
            "no"
        },
        c.with_one,
        c.samples,
        if e.verified { "verified" } else { "MISMATCH" }
    );
}

fn classification_text(c: &Classification) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "n = {} ({} samples per entry, seed {})",
        c.n, c.samples, c.seed
    );
    let _ = writeln!(out, "case 1, no eigenvalue 1 on V1:");
    if c.case1.is_empty() {
        let _ = writeln!(out, "  (none)");
    }
    for e in &c.case1 {
        entry_line(&mut out, e);
    }
    let _ = writeln!(out, "case 2, eigenvalue 1 on V1:");
    if c.case2.is_empty() {
        let _ = writeln!(out, "  (none)");
    }
    for e in &c.case2 {
        entry_line(&mut out, e);
    }
    for n in &c.notes {
        let _ = writeln!(
            out,
            "excluded: {} on R^{}, real rank {} ({}) [{} / {} samples with eigenvalue 1; {}]",
            n.note.group,
            n.note.rep_dim,
            n.note.real_rank,
            n.note.excluded_because,
            n.census.with_one,
            n.census.samples,
            if n.verified { "verified" } else { "MISMATCH" }
        );
    }
    out
}

fn emit<T: serde::Serialize>(format: Format, value: &T, text: impl FnOnce(&T) -> String) {
    match format {
        Format::Text => print!("{}", text(value)),
        Format::Json => print!("{}", json(value)),
    }
}

fn check_positive(name: &str, x: f64) -> Result<(), Failure> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Failure::new(
            EXIT_USAGE,
            format!("--{name} must be a positive number, got {x}"),
        ))
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Analyze {
            file,
            max_len,
            tol,
            format,
        } => {
            check_positive("tol", tol)?;
            let (group, _) = load(&file)?;
            let a = analyze_group(&group, max_len as usize, tol, &SpectralConfig::default())
                .map_err(|e| Failure::new(EXIT_FAILURE, e.to_string()))?;
            emit(format, &a, analysis_text);
            Ok(0)
        }
        Command::Scan {
            file,
            max_len,
            max_exp,
            radius,
            seed,
            margin,
            tol,
            format,
        } => {
            check_positive("radius", radius)?;
            check_positive("margin", margin)?;
            check_positive("tol", tol)?;
            let cfg = ScanConfig {
                max_len: max_len as usize,
                max_exp,
                radius,
                seed,
                margin,
                tol,
                ..ScanConfig::default()
            };
            let (group, structure) = load(&file)?;
            let report = properness_scan(
                &group.generators,
                structure.as_ref().map(|s| s.view()),
                &cfg,
            )
            .map_err(|e| Failure::new(EXIT_FAILURE, e.to_string()))?;
            emit(format, &report, report_text);
            Ok(if report.verdict.is_obstruction() {
                EXIT_OBSTRUCTION
            } else {
                0
            })
        }
        Command::Classify {
            n,
            samples,
            seed,
            format,
        } => {
            if samples == 0 {
                return Err(Failure::new(EXIT_USAGE, "--samples must be at least 1"));
            }
            let c = classify(n, samples, seed).map_err(usage)?;
            emit(format, &c, classification_text);
            Ok(if c.all_verified() { 0 } else { EXIT_FAILURE })
        }
        Command::Corpus {
            name,
            n,
            boost,
            angle,
            scale,
            flip,
            coupling,
            mix,
            out,
        } => {
            let mut opts = FixtureOptions::default();
            if let Some(n) = n {
                opts.n = n;
            }
            let m = &mut opts.margulis;
            let c = &mut opts.case23;
            if let Some(x) = boost {
                m.boost_strength = x;
                c.boost_strength = x;
            }
            if let Some(x) = angle {
                m.angle = x;
                c.angle = x;
            }
            if let Some(x) = scale {
                m.translation_scale = x;
                c.translation_scale = x;
            }
            if let Some(x) = coupling {
                c.coupling = x;
            }
            m.sign_flip = flip;
            c.mix = mix;
            let group = fixture(name.as_str(), &opts).map_err(usage)?;
            let text = serialize_group(&group);
            match out {
                Some(path) => std::fs::write(&path, text)
                    .map_err(|e| Failure::new(EXIT_FAILURE, format!("{}: {e}", path.display())))?,
                None => print!("{text}"),
            }
            Ok(0)
        }
    }
}

fn configure_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("MARGULIS_THREADS") else {
        return Ok(());
    };
    let n: usize = match v.trim().parse() {
        Ok(n) if n > 0 => n,
        _ => {
            return Err(Failure::new(
                EXIT_USAGE,
                format!("MARGULIS_THREADS must be a positive integer, got {v:?}"),
            ))
        }
    };
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::new(EXIT_FAILURE, e.to_string()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_USAGE } else { 0 });
        }
    };
    match configure_threads().and_then(|()| run(cli)) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("margulis: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
