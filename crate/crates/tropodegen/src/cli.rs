//! Command-line front end: equations, ideal-points, slopes, solve, volume,
//! holonomy, develop, degenerate.
//!
//! Exit codes: 0 success, 2 input error, 3 numeric failure.

use crate::equations::{build_gluing_system, GluingSystem, ShapeAssignment};
use crate::geometry::{
    self, fig8_builtin_path, holonomy_eval, trace_squared, track_degeneration, DegenerationOptions,
    DegenerationVerdict, GeometryError, SolveOptions,
};
use crate::surfaces::{boundary_slopes, nontriviality_certificate, Verdict};
use crate::triangulation::{parse_triangulation, IdealTriangulation};
use crate::tropical::{enumerate_pf_vertices, quads_to_xi};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde_json::json;
use std::path::{Path, PathBuf};

pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERIC: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "tropodegen",
    about = "Gluing equations, tropical ideal points, spun-normal surfaces and degenerations of ideal triangulations"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Table,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Triangulation JSON file.
    pub file: PathBuf,
    #[arg(long, value_enum, default_value_t = Format::Table)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the gluing equations, the exponent matrix A and the Q-matching matrix B.
    Equations {
        #[command(flatten)]
        common: CommonArgs,
        /// Directory for A.csv / B.csv when --format csv.
        #[arg(long)]
        out_dir: Option<PathBuf>,
    },
    /// Enumerate the admissible vertices (candidate ideal points) with nu values and slopes.
    IdealPoints {
        #[command(flatten)]
        common: CommonArgs,
        /// Add the Theorem-1 non-triviality certificate column.
        #[arg(long)]
        certify: bool,
    },
    /// Slope report per vertex solution (solution, nu(M), nu(L), slope).
    Slopes {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Solve the gluing equations by Newton iteration.
    Solve {
        #[command(flatten)]
        common: CommonArgs,
        /// Impose the completeness equations mu(M_i) = mu(L_i) = 1.
        #[arg(long)]
        complete: bool,
        /// Initial guess per tetrahedron, "re,im;re,im;...". Default i per tetrahedron.
        #[arg(long)]
        start: Option<String>,
    },
    /// Solve (complete by default) and report the Lobachevsky-Milnor volume.
    Volume {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Solve (complete by default) and report mu, trace^2 of one curve.
    Holonomy {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long)]
        curve: String,
    },
    /// Develop the triangulation and print placements and face-pairing matrices.
    Develop {
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Track a degeneration path against the candidate ideal points.
    Degenerate {
        #[command(flatten)]
        common: CommonArgs,
        /// Use the built-in figure-eight path w = r^2 w0, r = 2^-1..2^-samples.
        #[arg(long)]
        fig8_builtin: bool,
        /// JSON file with `{"path": [[ [re,im], ... per tetrahedron ] ...]}`.
        #[arg(long)]
        path: Option<PathBuf>,
        #[arg(long, default_value_t = 20)]
        samples: usize,
    },
}

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }

    pub fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Numeric(m) => m,
        }
    }
}

impl From<GeometryError> for CliError {
    fn from(e: GeometryError) -> Self {
        CliError::Numeric(e.to_string())
    }
}

fn load(file: &Path) -> Result<IdealTriangulation, CliError> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", file.display())))?;
    parse_triangulation(&text).map_err(|e| CliError::Input(e.to_string()))
}

fn env_tolerance() -> f64 {
    std::env::var("TROPODEGEN_TOL")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(1e-12)
}

fn fmt_c(z: Complex64) -> String {
    format!("{:+.12e}{:+.12e}i", z.re, z.im)
}

fn complex_json(z: Complex64) -> serde_json::Value {
    json!([format!("{:.17e}", z.re), format!("{:.17e}", z.im)])
}

fn parse_start(s: &str, n: usize) -> Result<Vec<Complex64>, CliError> {
    let parts: Vec<&str> = s.split(';').collect();
    if parts.len() != n {
        return Err(CliError::Input(format!(
            "--start needs {n} entries separated by ';'"
        )));
    }
    parts
        .iter()
        .map(|p| {
            let nums: Vec<&str> = p.split(',').collect();
            if nums.len() != 2 {
                return Err(CliError::Input(format!("bad complex '{p}', want re,im")));
            }
            let re: f64 = nums[0]
                .trim()
                .parse()
                .map_err(|_| CliError::Input(format!("bad float '{}'", nums[0])))?;
            let im: f64 = nums[1]
                .trim()
                .parse()
                .map_err(|_| CliError::Input(format!("bad float '{}'", nums[1])))?;
            Ok(Complex64::new(re, im))
        })
        .collect()
}

struct VertexRow {
    n: Vec<i64>,
    xi: Vec<String>,
    nu_m: String,
    nu_l: String,
    slope: String,
    certificate: Option<String>,
}

/// Assembled report: manifold, matrices and the vertex table. This is the
/// canonical JSON output of `ideal-points`.
pub struct ReportBundle {
    pub manifold: String,
    pub sys: GluingSystem,
    rows: Vec<VertexRow>,
}

fn build_report(
    tri: &IdealTriangulation,
    manifold: String,
    certify: bool,
) -> Result<ReportBundle, CliError> {
    let sys = build_gluing_system(tri);
    let bases = tri.cusp_bases();
    let pairs: Vec<_> = bases.iter().flatten().copied().collect();
    let vertices = enumerate_pf_vertices(&sys);
    if !vertices.is_empty() && pairs.is_empty() {
        return Err(CliError::Input(
            "no (meridian, longitude) basis supplied for any cusp".into(),
        ));
    }
    let mut rows = Vec::new();
    for v in &vertices {
        let xi = quads_to_xi(&sys, v).map_err(|e| CliError::Input(e.to_string()))?;
        let report =
            boundary_slopes(&sys, v, &pairs).map_err(|e| CliError::Input(e.to_string()))?;
        let cert = if certify {
            let curves: Vec<_> = tri.curves.iter().collect();
            let c = nontriviality_certificate(&sys, v, &curves)
                .map_err(|e| CliError::Input(e.to_string()))?;
            Some(match c.verdict {
                Verdict::CertifiedNontrivial => "CERTIFIED_NONTRIVIAL".to_string(),
                Verdict::Undetermined => "UNDETERMINED".to_string(),
            })
        } else {
            None
        };
        let first = &report.cusps[0];
        rows.push(VertexRow {
            n: v.minimal_integer()
                .iter()
                .map(|x| x.to_i64().unwrap())
                .collect(),
            xi: xi.coords().iter().map(|x| x.to_string()).collect(),
            nu_m: first.nu_meridian.to_string(),
            nu_l: first.nu_longitude.to_string(),
            slope: first.slope_string(),
            certificate: cert,
        });
    }
    Ok(ReportBundle {
        manifold,
        sys,
        rows,
    })
}

impl ReportBundle {
    fn to_json(&self) -> serde_json::Value {
        json!({
            "manifold": self.manifold,
            "a": self.sys.a.to_json_rows(),
            "b": self.sys.b.to_json_rows(),
            "vertices": self.rows.iter().map(|r| {
                let mut obj = json!({
                    "n": r.n,
                    "xi": r.xi,
                    "nu_meridian": r.nu_m,
                    "nu_longitude": r.nu_l,
                    "slope": r.slope,
                });
                if let Some(c) = &r.certificate {
                    obj["certificate"] = json!(c);
                }
                obj
            }).collect::<Vec<_>>(),
        })
    }

    fn to_csv(&self) -> String {
        let mut s = String::from("solution,xi,nu_meridian,nu_longitude,slope");
        if self.rows.iter().any(|r| r.certificate.is_some()) {
            s.push_str(",certificate");
        }
        s.push('\n');
        for r in &self.rows {
            let n: Vec<String> = r.n.iter().map(|x| x.to_string()).collect();
            s.push_str(&format!(
                "({}),({}),{},{},{}",
                n.join(" "),
                r.xi.join(" "),
                r.nu_m,
                r.nu_l,
                r.slope
            ));
            if let Some(c) = &r.certificate {
                s.push_str(&format!(",{c}"));
            }
            s.push('\n');
        }
        s
    }

    fn to_table(&self) -> String {
        let mut s = String::new();
        for (i, eq) in self.sys.equations_multiplicative().iter().enumerate() {
            s.push_str(&format!("edge {i}: {eq}\n"));
        }
        s.push_str(&format!(
            "{:<22} {:>6} {:>6}  {:<10} {}\n",
            "solution", "nu(M)", "nu(L)", "slope", "certificate"
        ));
        for r in &self.rows {
            let n: Vec<String> = r.n.iter().map(|x| x.to_string()).collect();
            s.push_str(&format!(
                "{:<22} {:>6} {:>6}  {:<10} {}\n",
                format!("({})", n.join(",")),
                r.nu_m,
                r.nu_l,
                r.slope,
                r.certificate.as_deref().unwrap_or("-")
            ));
        }
        s
    }
}

fn solve_for(
    tri: &IdealTriangulation,
    sys: &GluingSystem,
    complete: bool,
    start: Option<&str>,
) -> Result<geometry::SolveOutcome, CliError> {
    let n = tri.tet_count;
    let initial = match start {
        Some(s) => parse_start(s, n)?,
        None => vec![Complex64::new(0.0, 1.0); n],
    };
    let mut opts = SolveOptions::with_initial(initial);
    opts.complete = complete;
    opts.tolerance = env_tolerance();
    let curves: Vec<_> = tri.curves.iter().collect();
    Ok(geometry::solve(sys, &curves, &opts)?)
}

fn shapes_json(shapes: &ShapeAssignment) -> serde_json::Value {
    json!(shapes
        .triples
        .iter()
        .map(|t| json!({
            "z": complex_json(t[0]),
            "zp": complex_json(t[1]),
            "zpp": complex_json(t[2]),
        }))
        .collect::<Vec<_>>())
}

pub fn run(cli: Cli) -> Result<String, CliError> {
    match cli.command {
        Command::Equations { common, out_dir } => {
            let tri = load(&common.file)?;
            let sys = build_gluing_system(&tri);
            match common.format {
                Format::Csv => {
                    let dir = out_dir.unwrap_or_else(|| PathBuf::from("."));
                    std::fs::create_dir_all(&dir).map_err(|e| CliError::Input(e.to_string()))?;
                    std::fs::write(dir.join("A.csv"), sys.a.to_csv())
                        .map_err(|e| CliError::Input(e.to_string()))?;
                    std::fs::write(dir.join("B.csv"), sys.b.to_csv())
                        .map_err(|e| CliError::Input(e.to_string()))?;
                    Ok(format!(
                        "wrote {} and {}\n",
                        dir.join("A.csv").display(),
                        dir.join("B.csv").display()
                    ))
                }
                Format::Json => Ok(format!(
                    "{}\n",
                    serde_json::to_string_pretty(&json!({
                        "gluing_equations": sys.equations_multiplicative(),
                        "q_matching_equations": sys.q_matching_equations(),
                        "a": sys.a.to_json_rows(),
                        "b": sys.b.to_json_rows(),
                    }))
                    .unwrap()
                )),
                Format::Table => {
                    let mut s = String::from("hyperbolic gluing equations:\n");
                    for eq in sys.equations_multiplicative() {
                        s.push_str(&format!("  {eq}\n"));
                    }
                    s.push_str("Q-matching equations:\n");
                    for eq in sys.q_matching_equations() {
                        s.push_str(&format!("  {eq}\n"));
                    }
                    s.push_str("A:\n");
                    s.push_str(&sys.a.to_csv());
                    s.push_str("B:\n");
                    s.push_str(&sys.b.to_csv());
                    Ok(s)
                }
            }
        }
        Command::IdealPoints { common, certify } => {
            let tri = load(&common.file)?;
            let manifold = common
                .file
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_default();
            let bundle = build_report(&tri, manifold, certify)?;
            match common.format {
                Format::Json => Ok(format!(
                    "{}\n",
                    serde_json::to_string_pretty(&bundle.to_json()).unwrap()
                )),
                Format::Csv => Ok(bundle.to_csv()),
                Format::Table => Ok(bundle.to_table()),
            }
        }
        Command::Slopes { common } => {
            let tri = load(&common.file)?;
            let sys = build_gluing_system(&tri);
            let bases = tri.cusp_bases();
            let pairs: Vec<_> = bases.iter().flatten().copied().collect();
            if pairs.is_empty() {
                return Err(CliError::Input(
                    "no (meridian, longitude) basis supplied for any cusp".into(),
                ));
            }
            let mut s = String::from("solution,nu_meridian,nu_longitude,slope\n");
            for v in enumerate_pf_vertices(&sys) {
                let rep = boundary_slopes(&sys, &v, &pairs)
                    .map_err(|e| CliError::Input(e.to_string()))?;
                let n: Vec<String> = v.minimal_integer().iter().map(|x| x.to_string()).collect();
                let c = &rep.cusps[0];
                s.push_str(&format!(
                    "({}),{},{},{}\n",
                    n.join(" "),
                    c.nu_meridian,
                    c.nu_longitude,
                    c.slope_string()
                ));
            }
            Ok(s)
        }
        Command::Solve {
            common,
            complete,
            start,
        } => {
            let tri = load(&common.file)?;
            let sys = build_gluing_system(&tri);
            let out = solve_for(&tri, &sys, complete, start.as_deref())?;
            let vol =
                geometry::volume(&out.shapes).map_err(|e| CliError::Numeric(e.to_string()))?;
            Ok(format!(
                "{}\n",
                serde_json::to_string_pretty(&json!({
                    "complete": complete,
                    "iterations": out.iterations,
                    "residual": format!("{:.3e}", out.residual),
                    "volume": format!("{:.12}", vol),
                    "shapes": shapes_json(&out.shapes),
                }))
                .unwrap()
            ))
        }
        Command::Volume { common } => {
            let tri = load(&common.file)?;
            let sys = build_gluing_system(&tri);
            let out = solve_for(&tri, &sys, true, None)?;
            let vol =
                geometry::volume(&out.shapes).map_err(|e| CliError::Numeric(e.to_string()))?;
            Ok(format!("volume = {vol:.12}\n"))
        }
        Command::Holonomy { common, curve } => {
            let tri = load(&common.file)?;
            let sys = build_gluing_system(&tri);
            let gamma = tri
                .curve(&curve)
                .ok_or_else(|| CliError::Input(format!("no curve named '{curve}'")))?;
            let out = solve_for(&tri, &sys, true, None)?;
            let mu = holonomy_eval(&out.shapes, gamma)?;
            let t2 = trace_squared(&out.shapes, gamma)?;
            Ok(format!(
                "mu({curve}) = {}\ntrace^2({curve}) = {}\n",
                fmt_c(mu),
                fmt_c(t2)
            ))
        }
        Command::Develop { common } => {
            let tri = load(&common.file)?;
            let sys = build_gluing_system(&tri);
            let out = solve_for(&tri, &sys, true, None)?;
            let dev = geometry::develop(&tri, &sys, &out.shapes)?;
            let mut s = String::from("vertex placements:\n");
            for (i, p) in dev.placements.iter().enumerate() {
                let coords: Vec<String> = p.iter().map(|x| x.to_string()).collect();
                s.push_str(&format!("  tet {i}: [{}]\n", coords.join(", ")));
            }
            s.push_str("face-pairing matrices (non-tree faces):\n");
            for ((i, f), m) in &dev.face_matrices {
                s.push_str(&format!(
                    "  ({i},{f}): [[{}, {}], [{}, {}]]  trace^2 = {}\n",
                    fmt_c(m.0[0][0]),
                    fmt_c(m.0[0][1]),
                    fmt_c(m.0[1][0]),
                    fmt_c(m.0[1][1]),
                    fmt_c(m.trace_squared()),
                ));
            }
            for c in &tri.curves {
                let h = dev.curve_holonomy(c).normalized();
                s.push_str(&format!(
                    "curve {}: trace^2 = {}\n",
                    c.name,
                    fmt_c(h.trace_squared())
                ));
            }
            Ok(s)
        }
        Command::Degenerate {
            common,
            fig8_builtin,
            path,
            samples,
        } => {
            let tri = load(&common.file)?;
            let sys = build_gluing_system(&tri);
            let pathdata: Vec<(f64, ShapeAssignment)> = if fig8_builtin {
                if tri.tet_count != 2 {
                    return Err(CliError::Input(
                        "--fig8-builtin needs the two-tetrahedron fixture".into(),
                    ));
                }
                fig8_builtin_path(samples)
            } else {
                let p = path.ok_or_else(|| {
                    CliError::Input("supply --path FILE or --fig8-builtin".into())
                })?;
                let text = std::fs::read_to_string(&p)
                    .map_err(|e| CliError::Input(format!("cannot read {}: {e}", p.display())))?;
                let doc: serde_json::Value = serde_json::from_str(&text)
                    .map_err(|e| CliError::Input(format!("bad path file: {e}")))?;
                let arr = doc["path"]
                    .as_array()
                    .ok_or_else(|| CliError::Input("path file needs a 'path' array".into()))?;
                let mut out = Vec::new();
                for (k, sample) in arr.iter().enumerate() {
                    let zs: Vec<Complex64> = sample
                        .as_array()
                        .ok_or_else(|| CliError::Input("each sample is an array".into()))?
                        .iter()
                        .map(|v| {
                            let re = v[0].as_f64().unwrap_or(f64::NAN);
                            let im = v[1].as_f64().unwrap_or(f64::NAN);
                            Complex64::new(re, im)
                        })
                        .collect();
                    let shapes = ShapeAssignment::from_tet_shapes(&zs)
                        .map_err(|e| CliError::Numeric(e.to_string()))?;
                    out.push((k as f64, shapes));
                }
                out
            };
            let candidates: Vec<_> = enumerate_pf_vertices(&sys)
                .iter()
                .map(|n| quads_to_xi(&sys, n).expect("vertices are admissible"))
                .collect();
            let (samples_out, verdict) = track_degeneration(
                &sys,
                &pathdata,
                &candidates,
                &DegenerationOptions::default(),
            )?;
            let mut s = String::from("parameter,u,distances\n");
            for smp in &samples_out {
                let d: Vec<String> = smp.distances.iter().map(|x| format!("{x:.6e}")).collect();
                s.push_str(&format!(
                    "{:.8e},{:.8e},{}\n",
                    smp.parameter,
                    smp.u,
                    d.join(",")
                ));
            }
            match verdict {
                DegenerationVerdict::Converged {
                    candidate,
                    final_distance,
                } => {
                    let n = crate::tropical::xi_to_quads(&candidates[candidate])
                        .expect("candidate in S_n");
                    let rep: Vec<String> =
                        n.minimal_integer().iter().map(|x| x.to_string()).collect();
                    s.push_str(&format!(
                        "verdict: converged to vertex ({}) at distance {final_distance:.3e}\n",
                        rep.join(",")
                    ));
                }
                DegenerationVerdict::None => s.push_str("verdict: NONE\n"),
            }
            Ok(s)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn start_parser() {
        let v = parse_start("0.5,0.87; -1 , 2.25", 2).unwrap();
        assert_eq!(v[0], Complex64::new(0.5, 0.87));
        assert_eq!(v[1], Complex64::new(-1.0, 2.25));
        assert!(parse_start("1,2", 2).is_err());
        assert!(parse_start("1;2", 2).is_err());
    }

    #[test]
    fn report_rows_satisfy_slope_identity() {
        use num_traits::Zero;
        let tri = crate::fixtures::fig8();
        let bundle = build_report(&tri, "fig8".into(), true).unwrap();
        for r in &bundle.rows {
            let nm: crate::exact::Rat = r.nu_m.parse().unwrap();
            let nl: crate::exact::Rat = r.nu_l.parse().unwrap();
            if !nm.is_zero() {
                let slope: crate::exact::Rat = r.slope.parse().unwrap();
                assert_eq!(slope, -nl / nm);
            }
        }
    }
}
