mod sweep;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use polyface::classify::regions_to_csv;
use polyface::cone::facet_count;
use polyface::io;
use polyface::matroid::format_family;
use polyface::{
    classify_face, is_extreme_ray, is_two_face, minimal_face_dim, region_boundary_data, tight_set,
    ChiOracle, Error, Matroid, RankVector, Subset,
};

#[derive(Parser)]
#[command(
    name = "polyface",
    version,
    about = "Faces of the Shannon cone spanned by matroids"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    out: OutputArgs,
}

#[derive(Args)]
struct OutputArgs {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Check the polymatroid axioms for a rank vector.
    CheckPolymatroid {
        /// Rank vector file.
        #[arg(long)]
        h: PathBuf,
    },
    /// Dimension of the smallest face containing h (or h1 + h2).
    FaceDim {
        /// Rank vector file.
        #[arg(long, conflicts_with_all = ["h1", "h2"], required_unless_present = "h1")]
        h: Option<PathBuf>,
        /// First summand.
        #[arg(long, requires = "h2")]
        h1: Option<PathBuf>,
        /// Second summand.
        #[arg(long, requires = "h1")]
        h2: Option<PathBuf>,
    },
    /// Whether h spans an extreme ray.
    IsExtreme {
        /// Rank vector file.
        #[arg(long)]
        h: PathBuf,
    },
    /// Whether h1 and h2 span a 2-dimensional face.
    IsTwoFace {
        /// First rank vector file.
        #[arg(long)]
        h1: PathBuf,
        /// Second rank vector file.
        #[arg(long)]
        h2: PathBuf,
    },
    /// Circuits, loops and parallel classes of a matroid.
    Circuits {
        /// Matroid file.
        #[arg(long)]
        matroid: PathBuf,
    },
    /// Classify the face spanned by a matroid and U_{1,|α|} on α.
    Classify {
        #[command(flatten)]
        face: FaceArgs,
    },
    /// Boundary data of the entropic region of a face.
    Region {
        #[command(flatten)]
        face: FaceArgs,
        /// Largest a shown, in nats or as ln:v.
        #[arg(long, default_value = "ln:16")]
        a_max: String,
    },
    /// Build a certificate for a point of a face, or re-check one.
    Certify {
        /// Matroid file.
        #[arg(long, required_unless_present = "check")]
        matroid: Option<PathBuf>,
        /// Comma-separated elements, e.g. 1,2.
        #[arg(long, value_parser = parse_alpha, required_unless_present = "check")]
        alpha: Option<Alpha>,
        /// Alphabet size; the lattice point is a = ln v.
        #[arg(long, required_unless_present = "check")]
        v: Option<u32>,
        /// In nats or as ln:v.
        #[arg(long, required_unless_present = "check")]
        a: Option<String>,
        /// Defaults to ln v - a, the boundary point.
        #[arg(long)]
        b: Option<String>,
        /// Re-validate an existing certificate file instead.
        #[arg(long, conflicts_with_all = ["matroid", "alpha", "v", "a", "b"])]
        check: Option<PathBuf>,
    },
    /// Run the property suites over the built-in catalog.
    SweepCatalog,
}

#[derive(Args)]
struct FaceArgs {
    /// Matroid file.
    #[arg(long)]
    matroid: PathBuf,
    /// Comma-separated elements, e.g. 1,2.
    #[arg(long, value_parser = parse_alpha)]
    alpha: Alpha,
}

#[derive(Clone, Debug)]
struct Alpha(Vec<usize>);

fn parse_alpha(s: &str) -> std::result::Result<Alpha, String> {
    s.split(',')
        .map(|t| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("not an element: {t:?}"))
        })
        .collect::<std::result::Result<_, _>>()
        .map(Alpha)
}

/// Accepts a decimal number of nats or `ln:v`.
fn parse_nats(s: &str) -> Result<f64> {
    let value = match s.strip_prefix("ln:") {
        Some(v) => {
            let v: u32 = v
                .parse()
                .map_err(|_| Error::Parse(format!("expected ln:<integer>, got {s:?}")))?;
            (v as f64).ln()
        }
        None => s
            .parse::<f64>()
            .map_err(|_| Error::Parse(format!("not a number: {s:?}")))?,
    };
    if !value.is_finite() {
        return Err(Error::Parse(format!("not finite: {s:?}")).into());
    }
    Ok(value)
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| {
        anyhow!(Error::Invalid(format!(
            "cannot read {}: {e}",
            path.display()
        )))
    })
}

fn load_rank_vector(path: &Path) -> Result<RankVector> {
    io::parse_rank_vector(&read(path)?).with_context(|| path.display().to_string())
}

fn load_matroid(path: &Path) -> Result<Matroid> {
    io::parse_matroid(&read(path)?).with_context(|| path.display().to_string())
}

fn alpha_subset(m: &Matroid, alpha: &Alpha) -> Result<Subset> {
    let alpha = &alpha.0;
    if let Some(&e) = alpha.iter().find(|&&e| e == 0 || e > m.n()) {
        return Err(Error::ElementOutOfRange {
            element: e,
            n: m.n(),
        })
        .context("--alpha");
    }
    Ok(Subset::from_elements(alpha.iter().copied())?)
}

/// Rendered output of a command, and whether it counts as a domain failure.
struct Report {
    json: Value,
    text: String,
    csv: Option<String>,
    failure: bool,
}

impl Report {
    fn new(json: Value, text: impl Into<String>) -> Self {
        Report {
            json,
            text: text.into(),
            csv: None,
            failure: false,
        }
    }
}

fn run(cli: &Cli) -> Result<Report> {
    match &cli.command {
        Command::CheckPolymatroid { h } => {
            let h = load_rank_vector(h)?;
            let violation = h.first_violation();
            let json = json!({
                "n": h.n(),
                "polymatroid": violation.is_none(),
                "violated": violation.map(|f| f.to_string()),
                "checked": facet_count(h.n()),
                "integerMinimal": violation.is_none() && h.is_integer_minimal(),
                "modular": h.is_modular(),
                "tight": h.is_tight(),
            });
            let text = match violation {
                None => "polymatroid".to_string(),
                Some(f) => format!("not a polymatroid: {f} violated"),
            };
            let mut r = Report::new(json, text);
            r.failure = violation.is_some();
            Ok(r)
        }
        Command::FaceDim { h, h1, h2 } => {
            let vector = match (h, h1, h2) {
                (Some(h), _, _) => load_rank_vector(h)?,
                (None, Some(a), Some(b)) => load_rank_vector(a)?.add(&load_rank_vector(b)?)?,
                _ => bail!(Error::Invalid("give --h or both --h1 and --h2".into())),
            };
            let dim = minimal_face_dim(&vector)?;
            let tight: Vec<String> = tight_set(&vector)?
                .facets
                .iter()
                .map(|f| f.to_string())
                .collect();
            Ok(Report::new(
                json!({ "dim": dim, "tight": tight }),
                dim.to_string(),
            ))
        }
        Command::IsExtreme { h } => {
            let h = load_rank_vector(h)?;
            let extreme = is_extreme_ray(&h)?;
            Ok(Report::new(
                json!({ "extreme": extreme, "dim": minimal_face_dim(&h)? }),
                extreme.to_string(),
            ))
        }
        Command::IsTwoFace { h1, h2 } => {
            let (h1, h2) = (load_rank_vector(h1)?, load_rank_vector(h2)?);
            let two = is_two_face(&h1, &h2)?;
            let dim = minimal_face_dim(&h1.add(&h2)?)?;
            Ok(Report::new(
                json!({ "twoFace": two, "dim": dim }),
                two.to_string(),
            ))
        }
        Command::Circuits { matroid } => {
            let m = load_matroid(matroid)?;
            let circuits: Vec<Vec<usize>> = m
                .circuits()
                .iter()
                .map(|c| c.elements().collect())
                .collect();
            let classes: Vec<Vec<usize>> = m
                .parallel_classes()
                .iter()
                .map(|c| c.elements().collect())
                .collect();
            let json = json!({
                "n": m.n(),
                "rank": m.full_rank(),
                "circuits": circuits,
                "loops": m.loops().elements().collect::<Vec<_>>(),
                "parallelClasses": classes,
                "connected": m.is_connected_after_loop_deletion(),
            });
            let text = format!(
                "rank {}\ncircuits {}\nloops {}\nconnected {}",
                m.full_rank(),
                format_family(m.circuits()),
                m.loops(),
                m.is_connected_after_loop_deletion()
            );
            Ok(Report::new(json, text))
        }
        Command::Classify { face } => {
            let m = load_matroid(&face.matroid)?;
            let alpha = alpha_subset(&m, &face.alpha)?;
            let chi = ChiOracle::new();
            let report = classify_face(&m, alpha, &chi)?;
            let mut json = serde_json::to_value(&report)?;
            json["certificates"] = report
                .certificates
                .iter()
                .map(io::certificate_to_json)
                .collect();
            let mut text = format!(
                "face type: {}\ntwo-face: {}",
                report.face_type, report.two_face
            );
            for note in &report.notes {
                text.push_str(&format!("\nnote: {note}"));
            }
            Ok(Report::new(json, text))
        }
        Command::Region { face, a_max } => {
            let m = load_matroid(&face.matroid)?;
            let alpha = alpha_subset(&m, &face.alpha)?;
            let a_max = parse_nats(a_max).context("--a-max")?;
            let chi = ChiOracle::new();
            let report = classify_face(&m, alpha, &chi)?;
            let pieces = region_boundary_data(report.face_type, &chi.view(&m), a_max)?;
            let csv = regions_to_csv(&pieces);
            let json = json!({ "faceType": report.face_type, "pieces": pieces });
            let mut r = Report::new(json, csv.clone());
            r.csv = Some(csv);
            Ok(r)
        }
        Command::Certify {
            check: Some(path), ..
        } => {
            let cert =
                io::parse_certificate(&read(path)?).with_context(|| path.display().to_string())?;
            Ok(Report::new(
                json!({ "valid": true, "residual": cert.residual }),
                format!("valid, residual {:e}", cert.residual),
            ))
        }
        Command::Certify {
            matroid: Some(matroid),
            alpha: Some(alpha),
            v: Some(v),
            a: Some(a),
            b,
            check: None,
        } => {
            let m = load_matroid(matroid)?;
            let alpha = alpha_subset(&m, alpha)?;
            let a = parse_nats(a).context("--a")?;
            let b = match b {
                Some(b) => parse_nats(b).context("--b")?,
                None => ((*v as f64).ln() - a).max(0.0),
            };
            let cert = polyface::entropy::certify_point(&m, alpha, *v, a, b)?;
            let text = format!(
                "point ({}, {}), residual {:e}, support {}",
                cert.point.a,
                cert.point.b,
                cert.residual,
                cert.distribution.support_size()
            );
            Ok(Report::new(io::certificate_to_json(&cert), text))
        }
        Command::Certify { .. } => bail!(Error::Invalid(
            "certify needs --matroid, --alpha, --v and --a, or --check".into()
        )),
        Command::SweepCatalog => {
            let rows = sweep::sweep_catalog();
            let failure = rows.iter().any(|r| !r.passed());
            let mut r = Report::new(serde_json::to_value(&rows)?, sweep::to_text(&rows));
            r.csv = Some(sweep::to_csv(&rows));
            r.failure = failure;
            Ok(r)
        }
    }
}

fn render(report: &Report, format: Format) -> Result<String> {
    let mut s = match format {
        Format::Json => serde_json::to_string_pretty(&report.json)?,
        Format::Text => report.text.clone(),
        Format::Csv => report.csv.clone().ok_or_else(|| {
            anyhow!(Error::Invalid(
                "csv output is only available for region and sweep-catalog".into()
            ))
        })?,
    };
    if !s.ends_with('\n') {
        s.push('\n');
    }
    Ok(s)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(e) if !e.is_input_error() => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = run(&cli).and_then(|report| {
        let out = render(&report, cli.out.format)?;
        match &cli.out.output {
            Some(path) => fs::write(path, &out).map_err(|e| {
                anyhow!(Error::Invalid(format!(
                    "cannot write {}: {e}",
                    path.display()
                )))
            })?,
            None => print!("{out}"),
        }
        Ok(report.failure)
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
