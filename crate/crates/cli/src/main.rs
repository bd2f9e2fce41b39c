use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use ps12::bb_core::Vector2;
use ps12::hermite::RefinementLevel;
use ps12::macro_solver::{derive_init_rules, derive_subdiv_rules};
use ps12::smoothness::example_stencils;
use ps12::splits::{ps12_split, ps6_split};
use ps12::surface_io::{
    export_derivative_field, export_mesh, load_mesh, load_triangulation, sample_polynomial,
    save_triangulation, Arithmetic, MacroTriangulation, MeshFormat, Poly2,
};
use ps12::surface_io::export::field_selector;
use ps12::surface_io::poly::parse_number;
use ps12::verify::{self, Suite};
use ps12::{Rational, Scalar};

#[derive(Parser)]
#[command(name = "ps12", version, about = "C² quintic Hermite subdivision on the Powell–Sabin 12-split")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Element {
    Ps12,
    Ps6,
}

#[derive(Subcommand)]
enum Command {
    /// Re-derive the midpoint rules from the macro-element in exact arithmetic.
    DeriveRules {
        #[arg(long, value_enum)]
        element: Element,
        /// `.json` (default) or `.txt` for a readable listing.
        #[arg(long)]
        out: PathBuf,
        /// Also write the example smoothness stencils as JSON.
        #[arg(long)]
        stencils: Option<PathBuf>,
    },
    /// Refine a macro-triangulation and export the surface as OBJ or PLY.
    Refine {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        levels: usize,
        /// Format from the extension: `.obj` or `.ply`.
        #[arg(long)]
        out: PathBuf,
    },
    /// Export one jet entry at every refined point as CSV.
    Field {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        levels: usize,
        /// f, t, m, tt, tm, mm, ttt, ttm, tmm or mmm.
        #[arg(long)]
        which: String,
        /// First direction as `x,y` (default `1,0`).
        #[arg(long, allow_hyphen_values = true)]
        t: Option<String>,
        /// Second direction as `x,y` (default `0,1`).
        #[arg(long, allow_hyphen_values = true)]
        m: Option<String>,
        /// Use `t = v_j − v_i` and `m = rot90(t)` of the mesh edge `i-j`.
        #[arg(long, conflicts_with_all = ["t", "m"])]
        edge: Option<String>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a verification suite; exits nonzero if any check fails.
    Verify {
        #[arg(long)]
        suite: String,
    },
    /// Fill a mesh with data sampled from a polynomial of degree ≤ 5.
    Sample {
        /// `{"terms": [[a, b, coeff], ...]}` for `Σ coeff x^a y^b`.
        #[arg(long)]
        poly: PathBuf,
        #[arg(long)]
        mesh: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn create(path: &Path) -> Result<BufWriter<fs::File>> {
    let f = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(f))
}

fn extension(path: &Path) -> String {
    path.extension().and_then(|e| e.to_str()).unwrap_or("").to_ascii_lowercase()
}

fn derive_rules(element: Element, out: &Path, stencils: Option<&Path>) -> Result<()> {
    let unit = ps12::bb_core::Triangle::new(
        ps12::bb_core::Point2::from_ratios((0, 1), (0, 1)),
        ps12::bb_core::Point2::from_ratios((1, 1), (0, 1)),
        ps12::bb_core::Point2::from_ratios((0, 1), (1, 1)),
    );
    let table = match element {
        Element::Ps12 => derive_init_rules(&ps12_split(&unit)?)?,
        Element::Ps6 => derive_subdiv_rules(&ps6_split(&unit)?)?,
    };
    let text = if extension(out) == "txt" { table.to_text() } else { table.to_json() };
    fs::write(out, text).with_context(|| format!("writing {}", out.display()))?;
    if let Some(path) = stencils {
        let json = serde_json::to_string_pretty(&example_stencils()?)?;
        fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn refined<S: Scalar>(tri: &MacroTriangulation<S>, levels: usize) -> Result<RefinementLevel<S>> {
    Ok(ps12::hermite::refine_levels(&tri.initial_level()?, levels))
}

fn mesh_format(path: &Path) -> Result<MeshFormat> {
    match extension(path).as_str() {
        "obj" => Ok(MeshFormat::Obj),
        "ply" => Ok(MeshFormat::Ply),
        other => bail!("unknown mesh format `.{other}` (use .obj or .ply)"),
    }
}

fn refine_cmd(input: &Path, levels: usize, out: &Path) -> Result<()> {
    let doc = load_triangulation(&read(input)?)?;
    let format = mesh_format(out)?;
    let mut w = create(out)?;
    match doc.arithmetic {
        Arithmetic::Exact => export_mesh(&refined(&doc.triangulation, levels)?, format, &mut w)?,
        Arithmetic::F64 => export_mesh(&refined(&doc.triangulation.map(|v| v.to_f64()), levels)?, format, &mut w)?,
    }
    w.flush()?;
    Ok(())
}

fn parse_vector(text: &str) -> Result<Vector2<Rational>> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let num = |s: &str| {
        let v = serde_json::from_str(s).unwrap_or_else(|_| serde_json::Value::String(s.to_string()));
        parse_number(&v).ok_or_else(|| anyhow!("not a number: {s}"))
    };
    match parts.as_slice() {
        [x, y] => Ok(Vector2::new(num(x)?, num(y)?)),
        _ => bail!("expected `x,y`, got `{text}`"),
    }
}

fn field_frame(
    tri: &MacroTriangulation<Rational>,
    t: Option<&str>,
    m: Option<&str>,
    edge: Option<&str>,
) -> Result<Option<(Vector2<Rational>, Vector2<Rational>)>> {
    if let Some(key) = edge {
        let (i, j) = key
            .split_once('-')
            .and_then(|(a, b)| Some((a.parse::<usize>().ok()?, b.parse::<usize>().ok()?)))
            .ok_or_else(|| anyhow!("edge must be `i-j`, got `{key}`"))?;
        tri.edge_index(i.min(j), i.max(j)).ok_or_else(|| anyhow!("no edge {key}"))?;
        let tv = &tri.vertices[j] - &tri.vertices[i];
        let n = tv.perp();
        return Ok(Some((tv, n)));
    }
    if t.is_none() && m.is_none() {
        return Ok(None);
    }
    let t = t.map(parse_vector).transpose()?.unwrap_or(Vector2::new(Rational::from_i64(1), Rational::from_i64(0)));
    let m = m.map(parse_vector).transpose()?.unwrap_or(Vector2::new(Rational::from_i64(0), Rational::from_i64(1)));
    Ok(Some((t, m)))
}

fn field_cmd(
    input: &Path,
    levels: usize,
    which: &str,
    t: Option<&str>,
    m: Option<&str>,
    edge: Option<&str>,
    out: &Path,
) -> Result<()> {
    let doc = load_triangulation(&read(input)?)?;
    field_selector(which)?;
    let frame = field_frame(&doc.triangulation, t, m, edge)?;
    let mut w = create(out)?;
    match doc.arithmetic {
        Arithmetic::Exact => export_derivative_field(&refined(&doc.triangulation, levels)?, which, frame, &mut w)?,
        Arithmetic::F64 => {
            let tri = doc.triangulation.map(|v| v.to_f64());
            let frame = frame.map(|(a, b)| (Vector2::new(a.x.to_f64(), a.y.to_f64()), Vector2::new(b.x.to_f64(), b.y.to_f64())));
            export_derivative_field(&refined(&tri, levels)?, which, frame, &mut w)?
        }
    }
    w.flush()?;
    Ok(())
}

fn verify_cmd(suite: &str) -> Result<bool> {
    let suite: Suite = suite.parse()?;
    let checks = verify::run(suite)?;
    for c in &checks {
        println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    Ok(checks.iter().all(|c| c.passed))
}

fn sample_cmd(poly: &Path, mesh: &Path, out: &Path) -> Result<()> {
    let value: serde_json::Value = serde_json::from_str(&read(poly)?).context("polynomial is not JSON")?;
    let poly = Poly2::from_json(&value)?;
    let doc = load_mesh(&read(mesh)?)?;
    let data = sample_polynomial(&poly, &doc.triangulation)?;
    fs::write(out, save_triangulation(&data, doc.arithmetic)).with_context(|| format!("writing {}", out.display()))?;
    Ok(())
}

fn run(cli: Cli) -> Result<bool> {
    match cli.command {
        Command::DeriveRules { element, out, stencils } => derive_rules(element, &out, stencils.as_deref())?,
        Command::Refine { input, levels, out } => refine_cmd(&input, levels, &out)?,
        Command::Field {
            input,
            levels,
            which,
            t,
            m,
            edge,
            out,
        } => field_cmd(&input, levels, &which, t.as_deref(), m.as_deref(), edge.as_deref(), &out)?,
        Command::Verify { suite } => return verify_cmd(&suite),
        Command::Sample { poly, mesh, out } => sample_cmd(&poly, &mesh, &out)?,
    }
    Ok(true)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
