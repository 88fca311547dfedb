//! Run configuration, the fixture expectation table, and the `verify`
//! pipeline that checks the finite-boundary picture on known groups and
//! graphs.
//!
//! The expectation table is TOML data (see `fixtures/expectations.toml`), so
//! adding a fixture needs no rebuild when a table path is given.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::action::{compute_orbits, extract_character, f_subgroup_sample};
use crate::cayley::{Ball, DEFAULT_ELEMENT_CAP};
use crate::error::{Error, Result};
use crate::graphs::{build_grove, sphere_bound_check, BlockFamily, BlockSizes, GraphSpace, GroveSpec, SphereBound};
use crate::group::{make_group, symmetrize_generators, GroupSpec, Word};
use crate::horo::{
    annulus_boundary_approx, classify_boundary, default_horizon, default_stability_window, enumerate_busemann_points,
    AnnulusParams, BoundaryApprox, RayParams, DEFAULT_ANNULI, DEFAULT_WINDOW,
};
use crate::space::PointedSpace;

/// The expectation table shipped with the crate.
pub const DEFAULT_TABLE: &str = include_str!("../fixtures/expectations.toml");

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Knobs shared by every subcommand.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    pub group: String,
    pub generators: Vec<String>,
    pub radius: u32,
    /// Defaults to `3r + 4`.
    pub horizon: Option<u32>,
    /// Annulus width.
    pub window: u32,
    /// Defaults to `2r + 2`.
    pub stability_window: Option<u32>,
    pub annuli: u32,
    /// Norm bound of stabilizer and kernel samples.
    pub sample_norm: u32,
    pub cap: usize,
    pub seed: Option<u64>,
    pub out: Option<String>,
    pub format: Format,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            group: "Z".into(),
            generators: Vec::new(),
            radius: 4,
            horizon: None,
            window: DEFAULT_WINDOW,
            stability_window: None,
            annuli: DEFAULT_ANNULI,
            sample_norm: 2,
            cap: DEFAULT_ELEMENT_CAP,
            seed: None,
            out: None,
            format: Format::Json,
        }
    }
}

impl RunConfig {
    pub fn horizon(&self) -> u32 {
        self.horizon.unwrap_or_else(|| default_horizon(self.radius))
    }

    pub fn stability_window(&self) -> u32 {
        self.stability_window.unwrap_or_else(|| default_stability_window(self.radius))
    }

    pub fn validate(&self) -> Result<()> {
        let knobs = [
            ("radius", self.radius as usize),
            ("window", self.window as usize),
            ("stability window", self.stability_window() as usize),
            ("annuli", self.annuli as usize),
            ("sample norm", self.sample_norm as usize),
            ("cap", self.cap),
        ];
        if let Some((name, _)) = knobs.iter().find(|k| k.1 == 0) {
            return Err(Error::Config(format!("{name} must be at least 1")));
        }
        let needed = self.radius + self.window + 1;
        if self.horizon() < needed {
            return Err(Error::Config(format!("horizon {} is below radius + window + 1 = {needed}", self.horizon())));
        }
        Ok(())
    }

    pub fn group_spec(&self) -> Result<GroupSpec> {
        let family = self.group.parse()?;
        Ok(GroupSpec::new(family).with_generators(self.words()?))
    }

    pub fn words(&self) -> Result<Vec<Word>> {
        self.generators.iter().map(|w| w.parse()).collect()
    }

    /// Ball of radius `horizon` over the standard generators plus extras.
    pub fn build_ball(&self) -> Result<Ball> {
        self.build_ball_with_radius(self.horizon())
    }

    pub fn build_ball_with_radius(&self, radius: u32) -> Result<Ball> {
        let group = make_group(&self.group_spec()?)?;
        let gens = symmetrize_generators(&group, &self.words()?, true)?;
        Ball::grow_with_cap(&group, &gens, radius, self.cap)
    }

    pub fn annulus_params(&self) -> AnnulusParams {
        AnnulusParams { radius: self.radius, window: self.window, annuli: self.annuli }
    }

    pub fn ray_params<S: PointedSpace + ?Sized>(&self, space: &S) -> RayParams {
        RayParams {
            radius: self.radius,
            depth: space.max_radius().saturating_sub(self.radius),
            stability_window: self.stability_window(),
            annuli: self.annuli,
        }
    }
}

/// One row of the expectation table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Fixture {
    pub name: String,
    /// How the expected values were obtained: `trivial`, `derived` (brute
    /// force) or `published`.
    pub provenance: String,
    #[serde(default)]
    pub group: Option<String>,
    #[serde(default)]
    pub generators: Vec<String>,
    #[serde(default)]
    pub grove: Option<GroveFixture>,
    pub radius: u32,
    #[serde(default)]
    pub horizon: Option<u32>,
    #[serde(default)]
    pub stability_window: Option<u32>,
    pub expect: Expectation,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroveFixture {
    pub family: String,
    pub sizes: String,
    pub blocks: usize,
    #[serde(default)]
    pub two_sided: bool,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub boundary: Option<usize>,
    pub busemann: Option<usize>,
    pub unmatched: Option<usize>,
    pub finite_orbit: Option<bool>,
    pub orbit_sizes: Option<Vec<usize>>,
    /// Witness word `y` with `h(y) = -|y|`.
    pub witness: Option<String>,
    pub f_sample: Option<usize>,
    /// Annulus counts at these radii must be strictly increasing.
    pub increasing_radii: Option<Vec<u32>>,
    /// Exact annulus counts at `increasing_radii`.
    pub radius_counts: Option<Vec<usize>>,
}

#[derive(Clone, Debug, Deserialize)]
struct Table {
    fixture: Vec<Fixture>,
}

pub fn parse_table(text: &str) -> Result<Vec<Fixture>> {
    let table: Table = toml::from_str(text).map_err(|e| Error::Config(format!("expectation table: {e}")))?;
    for f in &table.fixture {
        if f.group.is_some() == f.grove.is_some() {
            return Err(Error::Config(format!("fixture {}: give exactly one of group and grove", f.name)));
        }
    }
    Ok(table.fixture)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CharacterSummary {
    pub function: usize,
    pub witness: Option<String>,
    pub witness_norm: Option<u32>,
    pub homomorphism_checks: usize,
    pub homomorphism_failures: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct FixtureReport {
    pub name: String,
    pub provenance: String,
    pub radius: u32,
    pub horizon: u32,
    pub boundary_count: usize,
    pub annulus_counts: Vec<usize>,
    pub stabilized: bool,
    pub busemann_count: usize,
    pub certified_count: usize,
    pub unmatched: usize,
    pub orbit_sizes: Option<Vec<usize>>,
    pub finite_orbit: Option<bool>,
    pub character: Option<CharacterSummary>,
    pub f_sample: Option<usize>,
    /// Norm bound actually used for the samples.
    pub sample_norm: u32,
    pub radius_counts: Vec<(u32, usize)>,
    /// Boundary counts grow with the radius.
    pub infinite_boundary_evidence: bool,
    pub sphere_bound: Option<SphereBound>,
    pub fingerprint: String,
    pub checks: Vec<Check>,
    pub error: Option<String>,
    pub resource_cap: bool,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub config: RunConfig,
    pub fixtures: Vec<FixtureReport>,
    pub pass: bool,
}

impl VerifyReport {
    /// 0 when every fixture passes, 3 if any fixture hit the element cap,
    /// 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else if self.fixtures.iter().any(|f| f.resource_cap) {
            3
        } else {
            1
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }
}

/// Runs every fixture and compares against its expectations.
///
/// Fixtures run concurrently; the report is sorted by fixture name.
pub fn run_pipeline(config: &RunConfig, fixtures: &[Fixture]) -> Result<VerifyReport> {
    config.validate()?;
    let mut reports: Vec<FixtureReport> = fixtures.par_iter().map(|f| run_fixture(config, f)).collect();
    reports.sort_by(|a, b| a.name.cmp(&b.name));
    let pass = reports.iter().all(|r| r.pass);
    Ok(VerifyReport { config: config.clone(), fixtures: reports, pass })
}

fn run_fixture(config: &RunConfig, fixture: &Fixture) -> FixtureReport {
    let mut report = FixtureReport {
        name: fixture.name.clone(),
        provenance: fixture.provenance.clone(),
        radius: fixture.radius,
        ..FixtureReport::default()
    };
    let cfg = RunConfig {
        group: fixture.group.clone().unwrap_or_default(),
        generators: fixture.generators.clone(),
        radius: fixture.radius,
        horizon: fixture.horizon,
        stability_window: fixture.stability_window.or(config.stability_window),
        ..config.clone()
    };
    let outcome = match &fixture.grove {
        Some(grove) => run_grove(&cfg, grove, &fixture.expect, &mut report),
        None => run_group(&cfg, &fixture.expect, &mut report),
    };
    match outcome {
        Ok(()) => compare(&fixture.expect, &mut report),
        Err(e) => {
            report.resource_cap = matches!(e, Error::MemoryBudgetExceeded { .. });
            report.error = Some(e.to_string());
        }
    }
    report.pass = report.error.is_none() && report.checks.iter().all(|c| c.pass);
    report
}

/// Boundary, rays, classification and sphere bound, common to both kinds.
fn boundary_stage<S: PointedSpace + ?Sized>(
    cfg: &RunConfig,
    space: &S,
    report: &mut FixtureReport,
) -> Result<BoundaryApprox> {
    cfg.validate()?;
    let annulus = annulus_boundary_approx(space, cfg.annulus_params())?;
    let rays = enumerate_busemann_points(space, cfg.ray_params(space))?;
    let classes = classify_boundary(&annulus, &rays)?;
    report.horizon = space.max_radius();
    report.boundary_count = annulus.len();
    report.annulus_counts = annulus.annulus_counts.clone();
    report.stabilized = annulus.stabilized;
    report.busemann_count = rays.len();
    report.certified_count = rays.certified_count();
    report.unmatched = classes.unmatched.len();
    report.fingerprint = annulus.fingerprint();
    report.sphere_bound = Some(sphere_bound_check(space, rays.certified_count(), cfg.window + 1));
    Ok(annulus)
}

fn radius_sweep<S: PointedSpace + ?Sized>(
    cfg: &RunConfig,
    space: &S,
    radii: &[u32],
    report: &mut FixtureReport,
) -> Result<()> {
    for &r in radii {
        let a = annulus_boundary_approx(space, AnnulusParams { radius: r, ..cfg.annulus_params() })?;
        report.radius_counts.push((r, a.len()));
    }
    report.infinite_boundary_evidence =
        report.radius_counts.len() > 1 && report.radius_counts.windows(2).all(|p| p[0].1 < p[1].1);
    Ok(())
}

fn run_group(cfg: &RunConfig, expect: &Expectation, report: &mut FixtureReport) -> Result<()> {
    let ball = cfg.build_ball()?;
    let annulus = boundary_stage(cfg, &ball, report)?;
    radius_sweep(cfg, &ball, expect.increasing_radii.as_deref().unwrap_or_default(), report)?;
    if cfg.radius < 2 {
        // the action needs one step of slack in the domain
        return Ok(());
    }
    let norm = cfg.sample_norm.min(cfg.radius - 1);
    report.sample_norm = norm;
    let orbits = compute_orbits(&ball, &annulus, ball.gens().members(), norm)?;
    report.orbit_sizes = Some(orbits.orbit_sizes());
    report.finite_orbit = Some(orbits.finite_orbit);
    report.f_sample = Some(f_subgroup_sample(&ball, &annulus, norm)?.len());

    // first function in boundary order with a closed orbit and a witness
    let mut fallback = None;
    for k in 0..annulus.len() {
        if !orbits.orbit_of_boundary(k).closed {
            continue;
        }
        let c = extract_character(&ball, &annulus, &orbits, k, norm)?;
        let summary = CharacterSummary {
            function: k,
            witness: c.witness.map(|y| ball.gens().spell(&ball.geodesic_to_index(y)).to_string()),
            witness_norm: c.witness.map(|y| ball.norm(y)),
            homomorphism_checks: c.additivity_checks,
            homomorphism_failures: c.additivity_failures.len(),
        };
        if summary.witness.is_some() {
            report.character = Some(summary);
            break;
        }
        fallback.get_or_insert(summary);
    }
    if report.character.is_none() {
        report.character = fallback;
    }
    Ok(())
}

fn run_grove(cfg: &RunConfig, grove: &GroveFixture, expect: &Expectation, report: &mut FixtureReport) -> Result<()> {
    let family: BlockFamily = grove.family.parse()?;
    let sizes: BlockSizes = grove.sizes.parse()?;
    let mut spec = GroveSpec::uniform(family, &sizes, grove.blocks)?;
    spec.two_sided = grove.two_sided;
    spec.check_frontier(cfg.radius)?;
    let graph = build_grove(&spec)?.graph;
    let space = GraphSpace::new(&graph, cfg.horizon)?;
    let cfg = RunConfig { horizon: Some(space.max_radius()), ..cfg.clone() };
    boundary_stage(&cfg, &space, report)?;
    radius_sweep(&cfg, &space, expect.increasing_radii.as_deref().unwrap_or_default(), report)
}

fn compare(expect: &Expectation, report: &mut FixtureReport) {
    fn check<T: PartialEq + std::fmt::Debug>(report: &mut FixtureReport, name: &str, expected: &Option<T>, actual: T) {
        if let Some(e) = expected {
            report.checks.push(Check {
                name: name.into(),
                expected: format!("{e:?}"),
                actual: format!("{actual:?}"),
                pass: *e == actual,
            });
        }
    }
    check(report, "boundary", &expect.boundary, report.boundary_count);
    check(report, "busemann", &expect.busemann, report.certified_count);
    check(report, "unmatched", &expect.unmatched, report.unmatched);
    check(report, "finite_orbit", &expect.finite_orbit, report.finite_orbit.unwrap_or(false));
    check(report, "orbit_sizes", &expect.orbit_sizes, report.orbit_sizes.clone().unwrap_or_default());
    let witness = report.character.as_ref().and_then(|c| c.witness.clone());
    check(report, "witness", &expect.witness.clone(), witness.unwrap_or_default());
    check(report, "f_sample", &expect.f_sample, report.f_sample.unwrap_or(0));
    if expect.increasing_radii.is_some() {
        check(report, "infinite_boundary_evidence", &Some(true), report.infinite_boundary_evidence);
    }
    let counts: Vec<usize> = report.radius_counts.iter().map(|c| c.1).collect();
    check(report, "radius_counts", &expect.radius_counts, counts);
    if let Some(c) = &report.character {
        check(report, "homomorphism", &Some(0), c.homomorphism_failures);
    }
    let bound = report.sphere_bound.as_ref().is_some_and(|b| b.holds);
    check(report, "sphere_bound", &Some(true), bound);
}
