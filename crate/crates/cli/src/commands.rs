use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use rdlab_core::acceptance::{self, Scale, CRITERIA};
use rdlab_core::cubic_lines::{
    blowup_cubic, double_sixes, lines_from_one, lines_on_cubic, random_six_points, srg_parameters, CubicSurface,
    PlanePoint, ProjLine,
};
use rdlab_core::monodromy::{bezout_system, certify, flex_system, kontsevich_nd, lines27, MonodromyOptions, ParametricSystem};
use rdlab_core::poly::AnyPoly;
use rdlab_core::quartic_bitangents::{
    bitangents_from_two, classify_configurations, point_on_surface, quartic_from_cubic_point, Bitangent, PlaneQuartic,
};
use rdlab_core::rd_bounds::{best_classical_bound, BoundCatalogue};
use rdlab_core::tschirnhaus::{bring_hamilton_reduce, kill_two, solve_via_tower, BringHamiltonOptions, SolutionTower};
use rdlab_core::{Num, C64};
use serde_json::{json, Value};

use crate::{CliError, Context};

fn read_input(path: &Path) -> Result<String, CliError> {
    if path.as_os_str() == "-" {
        return std::io::read_to_string(std::io::stdin()).map_err(|e| CliError::Input(format!("cannot read stdin: {e}")));
    }
    fs::read_to_string(path).map_err(|e| CliError::Input(format!("cannot read `{}`: {e}", path.display())))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &Path, what: &str) -> Result<T, CliError> {
    serde_json::from_str(&read_input(path)?)
        .map_err(|e| CliError::Input(format!("`{}` is not a valid {what}: {e}", path.display())))
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("results serialize")
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum Method {
    /// Down to `n - 4` parameters: four square roots and one cubic.
    #[default]
    BringHamilton,
    /// Quadratic transformation killing the two top coefficients.
    KillTwo,
}

#[derive(Debug, Args)]
pub struct ReduceArgs {
    /// Polynomial JSON file, `-` for stdin.
    #[arg(long)]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t)]
    method: Method,
    /// Scale the target so its constant term is 1.
    #[arg(long)]
    unit_constant: bool,
}

fn build_tower(args: &ReduceArgs) -> Result<SolutionTower, CliError> {
    let p: AnyPoly = parse_json(&args.input, "polynomial")?;
    let (_, tower) = match args.method {
        Method::BringHamilton => bring_hamilton_reduce(&p, BringHamiltonOptions { unit_constant: args.unit_constant })?,
        Method::KillTwo => kill_two(&p)?,
    };
    Ok(tower)
}

pub fn reduce(_ctx: &Context, args: &ReduceArgs) -> Result<Value, CliError> {
    Ok(to_value(&build_tower(args)?))
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[command(flatten)]
    reduce: ReduceArgs,
}

pub fn solve(ctx: &Context, args: &SolveArgs) -> Result<Value, CliError> {
    let tower = build_tower(&args.reduce)?;
    let solution = solve_via_tower(&tower)?;
    let worst = solution.roots.worst_residual();
    let out = json!({ "source": tower.source, "target": tower.target, "solution": solution });
    if !(worst < ctx.tol) {
        return Err(CliError::Check {
            message: format!("worst pulled-back residual {worst:e} exceeds {:e}", ctx.tol),
            diagnostic: out,
        });
    }
    Ok(out)
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false, id = "subject")]
pub struct BoundSubject {
    /// Generic polynomial degree.
    #[arg(long)]
    n: Option<u64>,
    /// Group label such as `A5`, `S7`, `W(E6)` or `PSL(2,7)`.
    #[arg(long)]
    group: Option<String>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    subject: BoundSubject,
    /// Replacement bound catalogue (JSON).
    #[arg(long)]
    catalogue: Option<PathBuf>,
}

fn load_catalogue(path: Option<&PathBuf>) -> Result<BoundCatalogue, CliError> {
    match path {
        Some(p) => Ok(BoundCatalogue::from_json(&read_input(p)?)?),
        None => Ok(BoundCatalogue::builtin()),
    }
}

pub fn bound(args: &BoundArgs) -> Result<Value, CliError> {
    let catalogue = load_catalogue(args.catalogue.as_ref())?;
    let report = match (&args.subject.n, &args.subject.group) {
        (Some(n), _) => best_classical_bound(*n)?,
        (_, Some(label)) => catalogue.label_bound(label)?,
        _ => unreachable!("clap enforces exactly one subject"),
    };
    Ok(to_value(&report))
}

/// `fermat`, `clebsch`, `random` (from the seed) or a surface JSON file.
fn load_surface(spec: &str, seed: u64) -> Result<CubicSurface, CliError> {
    Ok(match spec {
        "fermat" => CubicSurface::fermat(),
        "clebsch" => CubicSurface::clebsch(),
        "random" => CubicSurface::random(seed),
        path => parse_json(Path::new(path), "cubic surface")?,
    })
}

/// `fermat`, `random` (from the seed) or a quartic JSON file.
fn load_quartic(spec: &str, seed: u64) -> Result<PlaneQuartic, CliError> {
    Ok(match spec {
        "fermat" => PlaneQuartic::fermat(),
        "random" => PlaneQuartic::random(seed),
        path => parse_json(Path::new(path), "plane quartic")?,
    })
}

fn load_vector<const N: usize>(path: &Path, what: &str) -> Result<[C64; N], CliError> {
    let v: Vec<Num> = parse_json(path, what)?;
    let v: Vec<C64> = v.iter().map(Num::to_c64).collect();
    v.try_into().map_err(|v: Vec<C64>| CliError::Input(format!("{what} needs {N} entries, got {}", v.len())))
}

fn load_points(path: &Path) -> Result<[PlanePoint; 6], CliError> {
    let raw: Vec<[Num; 3]> = parse_json(path, "list of six plane points")?;
    let exact = |n: &Num| match n {
        Num::Rational(q) => Ok(q.clone()),
        Num::Complex(_) => Err(CliError::Input("blow-up points need exact rational coordinates".into())),
    };
    let pts = raw
        .iter()
        .map(|p| Ok([exact(&p[0])?, exact(&p[1])?, exact(&p[2])?]))
        .collect::<Result<Vec<PlanePoint>, CliError>>()?;
    pts.try_into().map_err(|v: Vec<PlanePoint>| CliError::Input(format!("need six points, got {}", v.len())))
}

/// Residual above which a user-supplied line is not taken to lie on the
/// surface or to be a bitangent.
const USER_LINE_TOL: f64 = 1e-6;

#[derive(Debug, Args)]
pub struct LinesArgs {
    /// `fermat`, `clebsch`, `random` or a cubic surface JSON file.
    #[arg(long, default_value = "random")]
    surface: String,
    /// Plücker vector of one line on the surface; the other 26 follow by
    /// the pencil construction.
    #[arg(long, conflicts_with = "from_one")]
    seed_line: Option<PathBuf>,
    /// As `--seed-line`, starting from the first line of the direct solver.
    #[arg(long)]
    from_one: bool,
    /// Six plane points (exact); blow them up and label the lines.
    #[arg(long, conflicts_with_all = ["blowup", "seed_line", "from_one"])]
    from_points: Option<PathBuf>,
    /// As `--from-points`, with six random points drawn from the seed.
    #[arg(long, conflicts_with_all = ["seed_line", "from_one"])]
    blowup: bool,
}

fn blowup_report(points: &[PlanePoint; 6]) -> Result<Value, CliError> {
    let model = blowup_cubic(points)?;
    let cfg = &model.configuration;
    Ok(json!({
        "surface": model.surface,
        "points": model.points,
        "configuration": cfg,
        "exact_plucker": model.exact_plucker,
        "double_sixes": double_sixes(cfg)?.double_sixes.len(),
        "srg": srg_parameters(&cfg.adjacency, false),
    }))
}

pub fn lines(ctx: &Context, args: &LinesArgs) -> Result<Value, CliError> {
    if let Some(path) = &args.from_points {
        return blowup_report(&load_points(path)?);
    }
    if args.blowup {
        return blowup_report(&random_six_points(ctx.seed));
    }
    let surface = load_surface(&args.surface, ctx.seed)?;
    let mut out = json!({ "surface": surface });
    let start = match &args.seed_line {
        Some(path) => {
            let line = ProjLine::from_plucker(load_vector::<6>(path, "Plücker vector")?)?;
            let r = surface.line_residual(&line);
            if !(r < USER_LINE_TOL) {
                return Err(CliError::Input(format!("seed line is not on the surface (residual {r:.3e})")));
            }
            Some(line)
        }
        None => None,
    };
    let cfg = match start {
        Some(line) => {
            let (cfg, passes) = lines_from_one(&surface, &line)?;
            out["passes"] = to_value(&passes);
            cfg
        }
        None => {
            let direct = lines_on_cubic(&surface, ctx.seed)?;
            if args.from_one {
                let (cfg, passes) = lines_from_one(&surface, &direct.lines[0])?;
                out["passes"] = to_value(&passes);
                cfg
            } else {
                direct
            }
        }
    };
    let worst = cfg.lines.iter().map(|l| surface.line_residual(l)).fold(0.0, f64::max);
    out["worst_residual"] = json!(worst);
    out["double_sixes"] = json!(double_sixes(&cfg)?.double_sixes.len());
    out["srg"] = to_value(&srg_parameters(&cfg.adjacency, false));
    out["configuration"] = to_value(&cfg);
    if cfg.lines.len() != 27 || !(worst < ctx.tol) {
        return Err(CliError::Check {
            message: format!("{} lines with worst residual {worst:e}", cfg.lines.len()),
            diagnostic: out,
        });
    }
    Ok(out)
}

#[derive(Debug, Args)]
pub struct BitangentArgs {
    /// `fermat`, `random` or a plane quartic JSON file.
    #[arg(long, default_value = "random", conflicts_with = "from_cubic")]
    curve: String,
    /// Two bitangent lines `[a, b, c]`; the other 26 follow from them.
    #[arg(long, num_args = 2, value_names = ["T1", "T2"], conflicts_with = "from_cubic")]
    two: Option<Vec<PathBuf>>,
    /// Project this cubic surface (`random` or a JSON file) from a point on it.
    #[arg(long)]
    from_cubic: Option<String>,
    /// Projection point `[x0, x1, x2, x3]`; drawn from the seed if omitted.
    #[arg(long, requires = "from_cubic")]
    point: Option<PathBuf>,
    /// Count Steiner complexes, Aronhold sets and syzygetic triples.
    #[arg(long)]
    classify: bool,
}

pub fn bitangents(ctx: &Context, args: &BitangentArgs) -> Result<Value, CliError> {
    let mut out = json!({});
    let (curve, found): (PlaneQuartic, Vec<Bitangent>) = if let Some(spec) = &args.from_cubic {
        let surface = load_surface(spec, ctx.seed)?;
        let point = match &args.point {
            Some(path) => load_vector::<4>(path, "projection point")?,
            None => point_on_surface(&surface, ctx.seed)?,
        };
        let proj = quartic_from_cubic_point(&surface, &point, ctx.seed)?;
        out["surface"] = to_value(&surface);
        out["point"] = to_value(&proj.point);
        out["directions"] = to_value(&proj.directions);
        (proj.quartic, proj.bitangents)
    } else {
        let curve = load_quartic(&args.curve, ctx.seed)?;
        let found = match &args.two {
            Some(paths) => {
                let pair = paths
                    .iter()
                    .map(|p| {
                        let b = Bitangent::from_line(&curve, &load_vector::<3>(p, "bitangent line")?)?;
                        if !(b.residual < USER_LINE_TOL) {
                            return Err(CliError::Input(format!(
                                "`{}` is not a bitangent (witness residual {:.3e})",
                                p.display(),
                                b.residual
                            )));
                        }
                        Ok(b)
                    })
                    .collect::<Result<Vec<_>, CliError>>()?;
                bitangents_from_two(&curve, &pair[0], &pair[1])?.0
            }
            None => rdlab_core::quartic_bitangents::bitangents(&curve, ctx.seed)?,
        };
        (curve, found)
    };
    let worst = found.iter().map(|b| b.residual).fold(0.0, f64::max);
    out["curve"] = to_value(&curve);
    out["worst_residual"] = json!(worst);
    if args.classify && found.len() == 28 {
        out["configurations"] = to_value(&classify_configurations(&found)?);
    }
    out["bitangents"] = to_value(&found);
    if found.len() != 28 || !(worst < ctx.tol) {
        return Err(CliError::Check {
            message: format!("{} bitangents with worst witness residual {worst:e}", found.len()),
            diagnostic: out,
        });
    }
    Ok(out)
}

#[derive(Debug, Args)]
pub struct MonodromyArgs {
    /// `lines27`, `bezout:R,S` or `flex:D`.
    #[arg(long)]
    family: String,
    /// Accepted loops at most.
    #[arg(long, default_value_t = 200)]
    loops: usize,
    /// Stop once the generated group reaches this order.
    #[arg(long)]
    target: Option<u128>,
    /// Waypoint radius relative to the basepoint norm.
    #[arg(long, value_parser = crate::positive_f64, default_value_t = 1.0)]
    radius: f64,
}

fn parse_family(s: &str) -> Result<ParametricSystem, CliError> {
    let bad = || CliError::Input(format!("unknown family `{s}`; expected lines27, bezout:R,S or flex:D"));
    let small = |t: &str| t.trim().parse::<u8>().map_err(|_| bad());
    match s.split_once(':') {
        None if s == "lines27" => Ok(lines27()),
        Some(("bezout", rest)) => {
            let (r, t) = rest.split_once(',').ok_or_else(bad)?;
            Ok(bezout_system(small(r)?, small(t)?)?)
        }
        Some(("flex", d)) => Ok(flex_system(small(d)?)?),
        _ => Err(bad()),
    }
}

pub fn monodromy(ctx: &Context, args: &MonodromyArgs) -> Result<Value, CliError> {
    let system = parse_family(&args.family)?;
    let opts = MonodromyOptions { max_loops: args.loops, radius: args.radius, target: args.target, ..Default::default() };
    let cert = certify(&system, &opts, ctx.seed)?;
    if !cert.complete {
        return Err(CliError::Check {
            message: format!("found {} of {} fiber points", cert.fiber.len(), system.fiber_degree),
            diagnostic: to_value(&cert),
        });
    }
    Ok(to_value(&cert))
}

#[derive(Debug, Args)]
pub struct CountArgs {
    /// Rational plane curves of degree D through 3D - 1 points.
    #[arg(long)]
    kontsevich: u64,
}

pub fn count(args: &CountArgs) -> Result<Value, CliError> {
    let n = kontsevich_nd(args.kontsevich)?;
    Ok(json!({ "kontsevich": { "degree": args.kontsevich, "count": n.to_string() } }))
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
pub enum SelftestScale {
    #[default]
    Reduced,
    Full,
}

#[derive(Debug, Args)]
pub struct SelftestArgs {
    #[arg(long, value_enum, default_value_t)]
    scale: SelftestScale,
    /// Only these criteria (repeatable).
    #[arg(long = "only")]
    only: Vec<u8>,
    /// Validate this bound catalogue as part of the run.
    #[arg(long)]
    catalogue: Option<PathBuf>,
}

pub fn selftest(ctx: &Context, args: &SelftestArgs) -> Result<Value, CliError> {
    let scale = match args.scale {
        SelftestScale::Reduced => Scale::Reduced,
        SelftestScale::Full => Scale::Full,
    };
    let ids: Vec<u8> = if args.only.is_empty() { CRITERIA.iter().map(|c| c.0).collect() } else { args.only.clone() };
    let mut criteria = Vec::new();
    if let Some(path) = &args.catalogue {
        let (passed, detail) = match load_catalogue(Some(path)) {
            Ok(c) => (true, format!("{} entries", c.entries.len())),
            Err(e) => (false, e.to_string()),
        };
        criteria.push(json!({ "id": 0, "name": "bound catalogue", "passed": passed, "detail": detail }));
    }
    for id in ids {
        let r = acceptance::run(id, scale, ctx.seed)?;
        eprintln!("{r}");
        criteria.push(json!({ "id": r.id, "name": r.name, "passed": r.passed, "detail": r.detail }));
    }
    let passed = criteria.iter().all(|c| c["passed"] == json!(true));
    let out = json!({ "seed": ctx.seed, "scale": scale, "passed": passed, "criteria": criteria });
    if !passed {
        return Err(CliError::Check { message: "selftest failed".into(), diagnostic: out });
    }
    Ok(out)
}
