//! `horo`: command-line front end for computing finite-radius horofunction
//! boundaries of Cayley graphs and plain graphs.

mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use horoboundary::action::{
    compute_orbits, extract_character, f_subgroup_sample, kernel_injectivity_probe, power_geodesic_check,
};
use horoboundary::graphs::{
    build_grove, graph_boundary, sphere_bound_check, BlockFamily, BlockSizes, Graph, GraphSpace, GroveSpec,
    DEFAULT_VERTEX_CAP,
};
use horoboundary::horo::{
    annulus_boundary_approx, classify_boundary, enumerate_busemann_points, ray_limit_in_ball, Ray, DEFAULT_ANNULI,
    DEFAULT_WINDOW,
};
use horoboundary::pipeline::{parse_table, run_pipeline, Format, RunConfig, DEFAULT_TABLE};
use horoboundary::{Ball, Element, Error, PointedSpace, Word};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use report::{element_json, emit, function_json, Csv};

/// Largest F-sample fed to the kernel injectivity probe; larger samples are
/// subsampled with `--seed`.
const PROBE_SAMPLE: usize = 16;

#[derive(Parser, Debug)]
#[command(name = "horo", version, about = "Finite-radius horofunction boundaries of groups and graphs")]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Group: Z, Z^n, Dinf, Heis, Fk, `<base> x C<m>`, or Mat[..][..]
    #[arg(long, global = true, default_value = "Z")]
    group: String,
    /// Extra generator word over the standard generators (repeatable)
    #[arg(long = "gen", global = true)]
    generators: Vec<String>,
    /// Radius r of the ball the functions are restricted to
    #[arg(long, global = true, default_value_t = 4)]
    radius: u32,
    /// Ball radius R_max (default 3r + 4)
    #[arg(long, global = true)]
    horizon: Option<u32>,
    /// Annulus width
    #[arg(long, global = true, default_value_t = DEFAULT_WINDOW)]
    window: u32,
    /// Steps a ray value must stay constant to be certified (default 2r + 2)
    #[arg(long, global = true)]
    stability_window: Option<u32>,
    /// Number of trailing annuli in the stabilization report
    #[arg(long, global = true, default_value_t = DEFAULT_ANNULI)]
    annuli: u32,
    /// Norm bound for stabilizer and kernel samples
    #[arg(long, global = true, default_value_t = 2)]
    max_norm: u32,
    /// Element cap for ball growth
    #[arg(long, global = true, default_value_t = horoboundary::cayley::DEFAULT_ELEMENT_CAP)]
    cap: usize,
    /// Seed for subsampled probes
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: FormatArg,
}

#[derive(clap::ValueEnum, Clone, Copy, Debug)]
enum FormatArg {
    Json,
    Csv,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Sphere sizes of the Cayley ball
    Ball,
    /// Annulus approximation of the boundary
    Boundary,
    /// Busemann points from geodesic rays, classified against the annulus set
    Rays {
        /// Periodic ray given by a word of generator indices, e.g. `0,2` (repeatable)
        #[arg(long = "ray")]
        rays: Vec<String>,
    },
    /// Orbits of the boundary under the generators
    Orbits,
    /// Virtual character of a boundary function with a finite orbit
    Character {
        /// Boundary function index (default: first with a finite orbit and a witness)
        #[arg(long)]
        function: Option<usize>,
        /// Also run the kernel injectivity probe at this radius
        #[arg(long)]
        probe: Option<u32>,
    },
    /// Build a grove graph and compute its boundary
    Grove {
        #[arg(long, default_value_t = 24)]
        blocks: usize,
        #[arg(long, default_value = "complete")]
        family: String,
        /// Block sizes: a number, `linear`, `pow2`, or a comma-separated list
        #[arg(long, default_value = "4")]
        sizes: String,
        /// Mirror the spine to negative indices
        #[arg(long)]
        two_sided: bool,
        /// Also write the grove as an edge list
        #[arg(long)]
        edges: Option<PathBuf>,
    },
    /// Boundary of a graph read from an edge-list file
    GraphBoundary { file: PathBuf },
    /// Run the fixture pipeline against the expectation table
    Verify {
        /// Expectation table (default: the built-in table)
        #[arg(long)]
        table: Option<PathBuf>,
    },
}

/// Failure carrying its exit code.
struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::MemoryBudgetExceeded { .. } => 3,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure { code: 2, message: e.to_string() }
    }
}

type Outcome = Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn config(g: &Global) -> RunConfig {
    RunConfig {
        group: g.group.clone(),
        generators: g.generators.clone(),
        radius: g.radius,
        horizon: g.horizon,
        window: g.window,
        stability_window: g.stability_window,
        annuli: g.annuli,
        sample_norm: g.max_norm,
        cap: g.cap,
        seed: g.seed,
        out: g.out.as_ref().map(|p| p.display().to_string()),
        format: match g.format {
            FormatArg::Json => Format::Json,
            FormatArg::Csv => Format::Csv,
        },
    }
}

fn run(cli: Cli) -> Outcome {
    let cfg = config(&cli.global);
    cfg.validate()?;
    if cfg.group_spec().is_ok_and(|s| !s.family.has_growth_guarantee()) {
        eprintln!("warning: matrix groups have no growth guarantee; the element cap may be reached early");
    }
    match cli.command {
        Command::Ball => ball(&cfg),
        Command::Boundary => boundary(&cfg),
        Command::Rays { rays } => rays_cmd(&cfg, &rays),
        Command::Orbits => orbits(&cfg),
        Command::Character { function, probe } => character(&cfg, function, probe),
        Command::Grove { blocks, family, sizes, two_sided, edges } => {
            grove(&cfg, blocks, &family, &sizes, two_sided, edges)
        }
        Command::GraphBoundary { file } => graph_boundary_cmd(&cfg, &file),
        Command::Verify { table } => verify(&cfg, table),
    }
}

fn sphere_csv<S: PointedSpace + ?Sized>(space: &S) -> Csv {
    let mut csv = Csv::new(&["radius", "sphere_size", "ball_size"]);
    for (k, s) in space.sphere_sizes().iter().enumerate() {
        csv.row(&[k.to_string(), s.to_string(), space.ball_len(k as u32).to_string()]);
    }
    csv
}

fn ball(cfg: &RunConfig) -> Outcome {
    let ball = cfg.build_ball()?;
    let report = json!({
        "config": cfg,
        "generators": ball.gens().labels().iter().map(Word::to_string).collect::<Vec<_>>(),
        "radius": ball.radius(),
        "size": ball.len(),
        "sphere_sizes": ball.sphere_sizes(),
    });
    emit(cfg, &report, || sphere_csv(&ball))?;
    Ok(0)
}

fn boundary_json<S: PointedSpace + ?Sized>(
    space: &S,
    approx: &horoboundary::horo::BoundaryApprox,
    name: impl Fn(usize) -> Value,
) -> Value {
    json!({
        "radius": approx.radius,
        "horizon": approx.horizon,
        "window": approx.window,
        "count": approx.len(),
        "annulus_counts": approx.annulus_counts,
        "stabilized": approx.stabilized,
        "fingerprint": approx.fingerprint(),
        "functions": approx.functions.iter().map(|f| function_json(space, f, &name)).collect::<Vec<_>>(),
    })
}

fn counts_csv(space: &dyn PointedSpace, approx: &horoboundary::horo::BoundaryApprox) -> Csv {
    let mut csv = Csv::new(&["series", "radius", "value"]);
    let outer = approx.horizon - approx.radius;
    let first = outer + 1 - approx.annulus_counts.len() as u32;
    for (i, c) in approx.annulus_counts.iter().enumerate() {
        csv.row(&["annulus_count".into(), (first + i as u32).to_string(), c.to_string()]);
    }
    for (k, s) in space.sphere_sizes().iter().enumerate() {
        csv.row(&["sphere_size".into(), k.to_string(), s.to_string()]);
    }
    csv
}

fn boundary(cfg: &RunConfig) -> Outcome {
    let ball = cfg.build_ball()?;
    let approx = annulus_boundary_approx(&ball, cfg.annulus_params())?;
    let report = json!({
        "config": cfg,
        "boundary": boundary_json(&ball, &approx, |p| element_json(&ball, p)),
    });
    emit(cfg, &report, || counts_csv(&ball, &approx))?;
    Ok(0)
}

fn parse_ray(ball: &Ball, text: &str) -> Result<Ray, Failure> {
    let period = text
        .split(',')
        .map(|t| t.trim().parse::<usize>().ok().filter(|&s| s < ball.gens().len()))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Failure { code: 2, message: format!("cannot parse ray {text:?}") })?;
    Ok(Ray::Periodic { prefix: vec![], period })
}

fn rays_cmd(cfg: &RunConfig, rays: &[String]) -> Outcome {
    let ball = cfg.build_ball()?;
    let annulus = annulus_boundary_approx(&ball, cfg.annulus_params())?;
    let busemann = enumerate_busemann_points(&ball, cfg.ray_params(&ball))?;
    let classes = classify_boundary(&annulus, &busemann)?;
    let limits = rays
        .iter()
        .map(|text| {
            let ray = parse_ray(&ball, text)?;
            let lim = ray_limit_in_ball(&ball, &ray, cfg.radius, cfg.stability_window())?;
            Ok(json!({
                "ray": text,
                "certificate": lim.certificate,
                "length": lim.length,
                "values": lim.function.values(),
                "annulus_index": annulus.position(lim.function.values()),
            }))
        })
        .collect::<Result<Vec<_>, Failure>>()?;
    let sphere = sphere_bound_check(&ball, busemann.certified_count(), cfg.window + 1);
    let report = json!({
        "config": cfg,
        "busemann": boundary_json(&ball, &busemann, |p| element_json(&ball, p)),
        "annulus_count": annulus.len(),
        "classification": classes,
        "all_busemann": classes.all_busemann(),
        "sphere_bound": sphere,
        "rays": limits,
    });
    emit(cfg, &report, || counts_csv(&ball, &busemann))?;
    Ok(if sphere.holds { 0 } else { 1 })
}

fn sample_norm(cfg: &RunConfig) -> u32 {
    cfg.sample_norm.min(cfg.radius.saturating_sub(1)).max(1)
}

fn orbits(cfg: &RunConfig) -> Outcome {
    let ball = cfg.build_ball()?;
    let annulus = annulus_boundary_approx(&ball, cfg.annulus_params())?;
    let norm = sample_norm(cfg);
    let o = compute_orbits(&ball, &annulus, ball.gens().members(), norm)?;
    let orbits: Vec<Value> = o
        .orbits
        .iter()
        .map(|orb| {
            json!({
                "members": orb.members,
                "size": orb.members.len(),
                "closed": orb.closed,
                "stabilizer_size": orb.stabilizer.len(),
                "stabilizer_norms": orb.stabilizer.iter().map(|&x| ball.norm(x)).collect::<Vec<_>>(),
                "stabilizer": orb.stabilizer.iter().map(|&x| element_json(&ball, x)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let report = json!({
        "config": cfg,
        "boundary_radius": o.boundary_radius,
        "radius": o.radius,
        "functions": o.functions.len(),
        "orbit_sizes": o.orbit_sizes(),
        "finite_orbit": o.finite_orbit,
        "closed_radius": o.closed_radius,
        "stabilizer_norm": o.stabilizer_norm,
        "actions": o.actions,
        "orbits": orbits,
    });
    emit(cfg, &report, || {
        let mut csv = Csv::new(&["orbit", "size", "closed", "stabilizer_size"]);
        for (i, orb) in o.orbits.iter().enumerate() {
            csv.row(&[
                i.to_string(),
                orb.members.len().to_string(),
                orb.closed.to_string(),
                orb.stabilizer.len().to_string(),
            ]);
        }
        csv
    })?;
    Ok(0)
}

fn character(cfg: &RunConfig, function: Option<usize>, probe: Option<u32>) -> Outcome {
    let ball = cfg.build_ball()?;
    let annulus = annulus_boundary_approx(&ball, cfg.annulus_params())?;
    let norm = sample_norm(cfg);
    let o = compute_orbits(&ball, &annulus, ball.gens().members(), norm)?;
    let index = match function {
        Some(k) if k >= annulus.len() => {
            return Err(Failure { code: 2, message: format!("no boundary function {k}") });
        }
        Some(k) => k,
        None => {
            let closed: Vec<usize> = (0..annulus.len()).filter(|&k| o.orbit_of_boundary(k).closed).collect();
            let mut pick = None;
            for &k in &closed {
                if extract_character(&ball, &annulus, &o, k, norm)?.witness.is_some() {
                    pick = Some(k);
                    break;
                }
            }
            pick.or(closed.first().copied()).ok_or(Error::NoFiniteOrbit)?
        }
    };
    let c = extract_character(&ball, &annulus, &o, index, norm)?;
    let h = &annulus.functions[index].function;

    let power = match c.witness {
        Some(y) => Some(power_geodesic_check(&ball, ball.element(y), &h.negated())?),
        None => None,
    };
    let probe_report = match (probe, c.witness) {
        (Some(r), Some(y)) => Some(run_probe(cfg, &ball, &annulus, y, r, norm)?),
        _ => None,
    };
    let report = json!({
        "config": cfg,
        "function": index,
        "values": h.values(),
        "sample_norm": c.sample_norm,
        "stabilizer_size": c.stabilizer.len(),
        "kernel": c.kernel.iter().map(|&x| element_json(&ball, x)).collect::<Vec<_>>(),
        "homomorphism": {
            "checks": c.additivity_checks,
            "failures": c.additivity_failures.len(),
            "pass": c.is_homomorphism(),
        },
        "witness": c.witness.map(|y| json!({
            "element": element_json(&ball, y),
            "norm": ball.norm(y),
            "value": h.values()[y],
        })),
        "psi": c.psi.iter().map(|(x, v)| json!({"element": element_json(&ball, *x), "psi": v})).collect::<Vec<_>>(),
        "psi_failures": c.psi_failures.len(),
        "power_check": power.as_ref().map(|p| json!({
            "holds": p.holds,
            "norm": p.norm,
            "power_norms": p.power_norms,
            "ray": match &p.ray {
                Ray::Periodic { period, .. } => ball.gens().spell(period).to_string(),
                Ray::Branch(b) => format!("{b:?}"),
            },
        })),
        "probe": probe_report,
    });
    emit(cfg, &report, || {
        let mut csv = Csv::new(&["element", "psi"]);
        for (x, v) in &c.psi {
            let word = ball.gens().spell(&ball.geodesic_to_index(*x)).to_string();
            let psi: Vec<String> = v.iter().map(i64::to_string).collect();
            csv.row(&[word, psi.join(" ")]);
        }
        csv
    })?;
    let ok = c.is_homomorphism() && power.is_none_or(|p| p.holds);
    Ok(if ok { 0 } else { 1 })
}

/// Kernel injectivity probe over `U = S ∪ {y, y⁻¹}`.
fn run_probe(
    cfg: &RunConfig,
    ball: &Ball,
    annulus: &horoboundary::horo::BoundaryApprox,
    y: usize,
    r: u32,
    norm: u32,
) -> Result<Value, Failure> {
    let word = ball.gens().spell(&ball.geodesic_to_index(y));
    let mut samples: Vec<Element> =
        f_subgroup_sample(ball, annulus, norm)?.into_iter().map(|g| ball.element(g).clone()).collect();
    let subsampled = samples.len() > PROBE_SAMPLE;
    if subsampled {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed.unwrap_or(0));
        samples.shuffle(&mut rng);
        samples.truncate(PROBE_SAMPLE);
    }
    let mut ucfg = cfg.clone();
    ucfg.generators.push(word.to_string());
    // every sample lies within |g|_S <= norm, so within norm in the larger set too
    let radius = 2 * (r + norm) + 1 + ucfg.stability_window.unwrap_or(2 * r + 2);
    let ball_u = ucfg.build_ball_with_radius(radius)?;
    let x = ball.element(y);
    let p = kernel_injectivity_probe(&ball_u, x, &samples, r, ucfg.stability_window.unwrap_or(2 * r + 2))?;
    Ok(json!({
        "generator": word.to_string(),
        "radius": p.radius,
        "ball_radius": radius,
        "subsampled": subsampled,
        "entries": p.entries.iter().map(|e| json!({
            "element": element_json(&ball_u, e.element),
            "norm": e.norm,
            "differs": e.differs,
            "certified": e.certified,
        })).collect::<Vec<_>>(),
        "distinct_limits": p.distinct_limits,
        "busemann_estimate": p.busemann_estimate,
        "bound_holds": p.bound_holds,
    }))
}

fn graph_report(cfg: &RunConfig, graph: &Graph, extra: Value) -> Outcome {
    let space = GraphSpace::new(graph, cfg.horizon)?;
    let approx = graph_boundary(graph, cfg.radius, Some(space.max_radius()), cfg.window)?;
    let rcfg = RunConfig { horizon: Some(space.max_radius()), ..cfg.clone() };
    let busemann = enumerate_busemann_points(&space, rcfg.ray_params(&space))?;
    let classes = classify_boundary(&approx, &busemann)?;
    let sphere = sphere_bound_check(&space, busemann.certified_count(), cfg.window + 1);
    let vertex = |p: usize| json!(space.vertex(p));
    let report = json!({
        "config": cfg,
        "graph": extra,
        "vertices": graph.vertex_count(),
        "edges": graph.edge_count(),
        "boundary": boundary_json(&space, &approx, vertex),
        "busemann_count": busemann.certified_count(),
        "classification": classes,
        "sphere_bound": sphere,
    });
    emit(cfg, &report, || counts_csv(&space, &approx))?;
    Ok(if sphere.holds { 0 } else { 1 })
}

fn grove(
    cfg: &RunConfig,
    blocks: usize,
    family: &str,
    sizes: &str,
    two_sided: bool,
    edges: Option<PathBuf>,
) -> Outcome {
    let family: BlockFamily = family.parse()?;
    let sizes_parsed: BlockSizes = sizes.parse()?;
    let mut spec = GroveSpec::uniform(family, &sizes_parsed, blocks)?;
    spec.two_sided = two_sided;
    spec.check_frontier(cfg.radius)?;
    let grove = build_grove(&spec)?;
    if grove.graph.vertex_count() > DEFAULT_VERTEX_CAP {
        return Err(Error::MemoryBudgetExceeded { cap: DEFAULT_VERTEX_CAP, radius: 0 }.into());
    }
    if let Some(path) = edges {
        std::fs::write(path, grove.graph.to_edge_list())?;
    }
    let extra = json!({"blocks": blocks, "family": family, "sizes": sizes, "two_sided": two_sided});
    graph_report(cfg, &grove.graph, extra)
}

fn graph_boundary_cmd(cfg: &RunConfig, file: &PathBuf) -> Outcome {
    let text = std::fs::read_to_string(file)?;
    let graph = Graph::parse_edge_list(&text, DEFAULT_VERTEX_CAP)?;
    let extra = json!({"file": file.display().to_string(), "base": graph.base()});
    graph_report(cfg, &graph, extra)
}

fn verify(cfg: &RunConfig, table: Option<PathBuf>) -> Outcome {
    let text = match &table {
        Some(p) => std::fs::read_to_string(p)?,
        None => DEFAULT_TABLE.to_string(),
    };
    let fixtures = parse_table(&text)?;
    let report = run_pipeline(cfg, &fixtures)?;
    let value = serde_json::to_value(&report).expect("reports serialize");
    emit(cfg, &value, || {
        let mut csv = Csv::new(&["fixture", "boundary", "busemann", "unmatched", "pass"]);
        for f in &report.fixtures {
            csv.row(&[
                f.name.clone(),
                f.boundary_count.to_string(),
                f.certified_count.to_string(),
                f.unmatched.to_string(),
                f.pass.to_string(),
            ]);
        }
        csv
    })?;
    for f in report.fixtures.iter().filter(|f| !f.pass) {
        eprintln!("fixture {} failed", f.name);
    }
    Ok(report.exit_code() as u8)
}
