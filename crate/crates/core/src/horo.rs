//! Busemann-function restrictions and finite-radius boundary approximations.
//!
//! A horofunction is only visible here through its restriction to a ball
//! `B_r` around the base point. Two surrogates of the boundary are computed:
//!
//! * the *annulus* surrogate: distinct restrictions `b_x|B_r` for `x` in a
//!   norm annulus just inside the horizon;
//! * the *ray* surrogate: restrictions of `b_{γ_t}` along geodesic branches
//!   from the base point, with a certificate saying whether the limit is
//!   pinned down.
//!
//! `b_x(y) = d(x, y) - d(x, o)`. Along a geodesic branch from the base point
//! the sequence `t -> b_{γ_t}(y)` is non-increasing and bounded below by
//! `-|y|`; every limit computation asserts both facts exactly.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::cayley::Ball;
use crate::error::{Error, Result};
use crate::group::Element;
use crate::space::PointedSpace;

/// Default number of trailing annuli compared by the stabilization report.
pub const DEFAULT_ANNULI: u32 = 3;
/// Default annulus width.
pub const DEFAULT_WINDOW: u32 = 2;

/// Default number of trailing steps a ray value must stay constant to be
/// certified without reaching its floor.
pub fn default_stability_window(r: u32) -> u32 {
    2 * r + 2
}

/// Default horizon for a boundary computation at radius `r`.
pub fn default_horizon(r: u32) -> u32 {
    3 * r + 4
}

/// Integer function on the ball `B_r`, indexed by point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RestrictedFunction {
    radius: u32,
    values: Vec<i64>,
}

/// A broken [`RestrictedFunction`] invariant.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NonzeroAtBase(i64),
    Lipschitz { p: usize, q: usize },
    BelowFloor { p: usize },
    WrongLength { expected: usize, found: usize },
}

impl RestrictedFunction {
    pub fn new(radius: u32, values: Vec<i64>) -> Self {
        RestrictedFunction { radius, values }
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn values(&self) -> &[i64] {
        &self.values
    }

    pub fn value(&self, p: usize) -> Option<i64> {
        self.values.get(p).copied()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Restriction to the smaller ball `B_r`.
    pub fn truncate<S: PointedSpace + ?Sized>(&self, space: &S, r: u32) -> Result<RestrictedFunction> {
        if r > self.radius {
            return Err(Error::DomainTooSmall { have: self.radius, needed: r });
        }
        Ok(RestrictedFunction { radius: r, values: self.values[..space.ball_len(r)].to_vec() })
    }

    pub fn negated(&self) -> RestrictedFunction {
        RestrictedFunction { radius: self.radius, values: self.values.iter().map(|v| -v).collect() }
    }

    /// Checks value 0 at the base point, the 1-Lipschitz condition along
    /// every edge inside the ball, and the floor `h(y) >= -|y|`.
    pub fn violations<S: PointedSpace + ?Sized>(&self, space: &S) -> Vec<Violation> {
        let n = space.ball_len(self.radius);
        if self.values.len() != n {
            return vec![Violation::WrongLength { expected: n, found: self.values.len() }];
        }
        let mut out = Vec::new();
        if self.values[0] != 0 {
            out.push(Violation::NonzeroAtBase(self.values[0]));
        }
        let mut nbrs = Vec::new();
        for p in 0..n {
            if self.values[p] < -(space.norm(p) as i64) {
                out.push(Violation::BelowFloor { p });
            }
            nbrs.clear();
            space.neighbors_into(p, &mut nbrs);
            for &q in &nbrs {
                if q > p && q < n && (self.values[p] - self.values[q]).abs() > 1 {
                    out.push(Violation::Lipschitz { p, q });
                }
            }
        }
        out
    }

    pub fn is_valid<S: PointedSpace + ?Sized>(&self, space: &S) -> bool {
        self.violations(space).is_empty()
    }

    /// Whether every sphere `S_ρ`, `ρ <= radius`, has a point with
    /// `h(x) = -|x| = -ρ`.
    pub fn realizes_floor<S: PointedSpace + ?Sized>(&self, space: &S) -> bool {
        (0..=self.radius).all(|rho| space.sphere(rho).any(|p| self.values[p] == -(rho as i64)))
    }
}

/// `y -> d(x, y) - d(x, o)` on `B_r`.
pub fn busemann_restriction<S: PointedSpace + ?Sized>(space: &S, x: usize, r: u32) -> Result<RestrictedFunction> {
    let row = space.distances_to_ball(x, r)?;
    let base = space.norm(x) as i64;
    Ok(RestrictedFunction { radius: r, values: row.into_iter().map(|d| d as i64 - base).collect() })
}

/// [`busemann_restriction`] for a group element.
pub fn busemann_restriction_of(ball: &Ball, x: &Element, r: u32) -> Result<RestrictedFunction> {
    let i = ball.index_of(x).ok_or(Error::OutOfBall { radius: ball.radius() })?;
    busemann_restriction(ball, i, r)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    Annulus,
    RayLimit,
    Certified,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Certificate {
    /// Every value reached its floor or stayed constant over the window.
    Certified,
    /// Some value was still moving; the reported value is an upper bound.
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryFunction {
    pub function: RestrictedFunction,
    pub provenance: Provenance,
    pub certified: bool,
    /// Point realizing the function: the annulus element or the ray endpoint.
    pub source: usize,
}

/// A finite set of boundary restrictions with stabilization diagnostics.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryApprox {
    pub radius: u32,
    pub horizon: u32,
    pub window: u32,
    /// Sorted by value vector.
    pub functions: Vec<BoundaryFunction>,
    /// Distinct-restriction counts for the trailing annuli (annulus
    /// surrogate) or the trailing depths (ray surrogate), innermost first.
    pub annulus_counts: Vec<usize>,
    pub stabilized: bool,
}

impl BoundaryApprox {
    pub fn len(&self) -> usize {
        self.functions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.functions.is_empty()
    }

    pub fn certified_count(&self) -> usize {
        self.functions.iter().filter(|f| f.certified).count()
    }

    pub fn function(&self, i: usize) -> &RestrictedFunction {
        &self.functions[i].function
    }

    pub fn position(&self, values: &[i64]) -> Option<usize> {
        self.functions.binary_search_by(|f| f.function.values.as_slice().cmp(values)).ok()
    }

    pub fn contains(&self, values: &[i64]) -> bool {
        self.position(values).is_some()
    }

    /// Hex SHA-256 over radius, horizon, window and every function.
    pub fn fingerprint(&self) -> String {
        let mut h = Sha256::new();
        for v in [self.radius, self.horizon, self.window] {
            h.update(v.to_le_bytes());
        }
        for f in &self.functions {
            h.update([f.provenance as u8, f.certified as u8]);
            h.update((f.function.values.len() as u64).to_le_bytes());
            for v in &f.function.values {
                h.update(v.to_le_bytes());
            }
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

/// Parameters of the annulus surrogate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct AnnulusParams {
    pub radius: u32,
    pub window: u32,
    /// Number of trailing annuli compared by the stabilization report.
    pub annuli: u32,
}

impl AnnulusParams {
    pub fn new(radius: u32) -> Self {
        AnnulusParams { radius, window: DEFAULT_WINDOW, annuli: DEFAULT_ANNULI }
    }

    pub fn with_window(mut self, window: u32) -> Self {
        self.window = window;
        self
    }
}

/// Distinct restrictions `b_x|B_r` over `H - r - w <= |x| <= H - r`, where
/// `H` is the horizon of the space.
pub fn annulus_boundary_approx<S: PointedSpace + ?Sized>(space: &S, params: AnnulusParams) -> Result<BoundaryApprox> {
    let AnnulusParams { radius: r, window: w, annuli: k } = params;
    let horizon = space.max_radius();
    let needed = r + w + 1;
    if horizon < needed {
        return Err(Error::HorizonTooSmall { horizon, needed });
    }
    let outer = horizon - r;
    let k = k.clamp(1, outer);
    let first_outer = outer + 1 - k;
    let lowest = first_outer.saturating_sub(w).max(1);

    // distinct restrictions per sphere level, each tagged with its first point
    let levels: Vec<BTreeMap<Vec<i64>, usize>> = (lowest..=outer)
        .map(|level| {
            let rows: Vec<(Vec<i64>, usize)> = space
                .sphere(level)
                .into_par_iter()
                .map(|x| busemann_restriction(space, x, r).map(|f| (f.values, x)))
                .collect::<Result<_>>()?;
            let mut set = BTreeMap::new();
            for (v, x) in rows {
                set.entry(v).or_insert(x);
            }
            Ok(set)
        })
        .collect::<Result<_>>()?;

    let union = |lo: u32, hi: u32| {
        let mut set: BTreeMap<&[i64], usize> = BTreeMap::new();
        for level in lo.max(lowest)..=hi {
            for (v, &x) in &levels[(level - lowest) as usize] {
                set.entry(v.as_slice()).and_modify(|p| *p = (*p).min(x)).or_insert(x);
            }
        }
        set
    };

    let annulus_counts: Vec<usize> =
        (first_outer..=outer).map(|rho| union(rho.saturating_sub(w).max(1), rho).len()).collect();
    let stabilized = annulus_counts.windows(2).all(|p| p[0] == p[1]);
    let functions = union(outer.saturating_sub(w).max(1), outer)
        .into_iter()
        .map(|(v, x)| BoundaryFunction {
            function: RestrictedFunction { radius: r, values: v.to_vec() },
            provenance: Provenance::Annulus,
            certified: false,
            source: x,
        })
        .collect();
    Ok(BoundaryApprox { radius: r, horizon, window: w, functions, annulus_counts, stabilized })
}

/// A geodesic ray from the base point.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ray {
    /// Explicit point indices `γ_0, γ_1, ...`.
    Branch(Vec<usize>),
    /// `prefix` followed by `period` repeated forever, as generator indices
    /// of a Cayley ball.
    Periodic { prefix: Vec<usize>, period: Vec<usize> },
}

impl Ray {
    /// Point indices of the ray inside `ball`, as long as it stays within the
    /// usable length `ball.radius() - r`.
    pub fn points(&self, ball: &Ball, r: u32) -> Vec<usize> {
        match self {
            Ray::Branch(b) => b.clone(),
            Ray::Periodic { prefix, period } => {
                let limit = ball.radius().saturating_sub(r) as usize;
                let mut word: Vec<usize> = prefix.iter().copied().take(limit).collect();
                if !period.is_empty() {
                    while word.len() < limit {
                        word.extend(period.iter().copied().take(limit - word.len()));
                    }
                }
                let mut points = vec![0];
                let mut cur = 0;
                for s in word {
                    match ball.step(cur, s) {
                        Some(q) => {
                            cur = q;
                            points.push(q);
                        }
                        None => break,
                    }
                }
                points
            }
        }
    }
}

/// Limit of `b_{γ_t}|B_r` along a finite stretch of a ray.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RayLimit {
    pub function: RestrictedFunction,
    pub certificate: Certificate,
    /// Number of steps actually used.
    pub length: usize,
}

/// Tracks `b_{γ_t}|B_r` along a branch: current values and, per point, the
/// last step at which the value dropped.
#[derive(Clone, Debug)]
struct Track {
    values: Vec<i64>,
    last_change: Vec<u32>,
}

impl Track {
    fn start(values: Vec<i64>) -> Self {
        let n = values.len();
        Track { values, last_change: vec![0; n] }
    }

    /// Advances to step `t` with new values; fails if any value increased or
    /// fell below its floor.
    fn advance<S: PointedSpace + ?Sized>(&self, space: &S, next: Vec<i64>, t: u32) -> Result<Track> {
        let mut last_change = self.last_change.clone();
        for (y, (&old, &new)) in self.values.iter().zip(&next).enumerate() {
            if new > old || new < -(space.norm(y) as i64) {
                return Err(Error::NotAGeodesic { step: t as usize });
            }
            if new < old {
                last_change[y] = t;
            }
        }
        Ok(Track { values: next, last_change })
    }

    fn stable_at<S: PointedSpace + ?Sized>(&self, space: &S, y: usize, t: u32, window: u32) -> bool {
        self.values[y] == -(space.norm(y) as i64) || t >= window && self.last_change[y] <= t - window
    }

    /// Last step at which a value not yet at its floor changed.
    fn settled_at<S: PointedSpace + ?Sized>(&self, space: &S) -> u32 {
        (0..self.values.len())
            .filter(|&y| self.values[y] != -(space.norm(y) as i64))
            .map(|y| self.last_change[y])
            .max()
            .unwrap_or(0)
    }

    fn certified<S: PointedSpace + ?Sized>(&self, space: &S, t: u32, window: u32) -> bool {
        (0..self.values.len()).all(|y| self.stable_at(space, y, t, window))
    }
}

/// Follows `b_{γ_t}|B_r` along a branch starting at the base point.
///
/// The branch is used up to step `H - r` (`H` the horizon). Fails with
/// [`Error::NotAGeodesic`] if the branch leaves the sphere sequence or a value
/// increases.
pub fn ray_limit<S: PointedSpace + ?Sized>(
    space: &S,
    branch: &[usize],
    r: u32,
    stability_window: u32,
) -> Result<RayLimit> {
    if branch.first() != Some(&0) {
        return Err(Error::PreconditionFailed("ray must start at the base point".into()));
    }
    let usable = (space.max_radius().saturating_sub(r) as usize).min(branch.len() - 1);
    if usable < r as usize + 1 {
        return Err(Error::RayTooShort { length: branch.len() - 1, radius: r });
    }
    let mut track = Track::start(busemann_restriction(space, 0, r)?.values);
    for (t, &p) in branch.iter().enumerate().take(usable + 1).skip(1) {
        if space.norm(p) as usize != t {
            return Err(Error::NotAGeodesic { step: t });
        }
        let f = busemann_restriction(space, p, r)?;
        track = track.advance(space, f.values, t as u32)?;
    }
    let certificate = if track.certified(space, usable as u32, stability_window) {
        Certificate::Certified
    } else {
        Certificate::Heuristic
    };
    Ok(RayLimit { function: RestrictedFunction { radius: r, values: track.values }, certificate, length: usable })
}

/// [`ray_limit`] for a ray given in word form on a Cayley ball.
pub fn ray_limit_in_ball(ball: &Ball, ray: &Ray, r: u32, stability_window: u32) -> Result<RayLimit> {
    ray_limit(ball, &ray.points(ball, r), r, stability_window)
}

/// Whether two rays have the same certified limit on `B_r`.
pub fn rays_equivalent<S: PointedSpace + ?Sized>(
    space: &S,
    alpha: &[usize],
    beta: &[usize],
    r: u32,
    stability_window: u32,
) -> Result<bool> {
    let a = ray_limit(space, alpha, r, stability_window)?;
    let b = ray_limit(space, beta, r, stability_window)?;
    if a.certificate != Certificate::Certified || b.certificate != Certificate::Certified {
        return Err(Error::UncertifiedLimit(r));
    }
    Ok(a.function == b.function)
}

/// Parameters of the ray surrogate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RayParams {
    pub radius: u32,
    /// Walk depth; at most `H - r`.
    pub depth: u32,
    pub stability_window: u32,
    /// Number of trailing depths in the stabilization report.
    pub annuli: u32,
}

impl RayParams {
    /// Full usable depth and the default stability window.
    pub fn for_space<S: PointedSpace + ?Sized>(space: &S, radius: u32) -> Self {
        RayParams {
            radius,
            depth: space.max_radius().saturating_sub(radius),
            stability_window: default_stability_window(radius),
            annuli: DEFAULT_ANNULI,
        }
    }

    pub fn with_stability_window(mut self, w: u32) -> Self {
        self.stability_window = w;
        self
    }
}

/// Walks geodesic branches from the base point and collects their limits on
/// `B_r`.
///
/// Only ray-viable branches (those with a descendant at `depth`) are
/// followed. Branches meeting at the same point continue as one: the branch
/// whose values off the floor settled earliest is kept, ties going to the
/// lower predecessor index. From depth `r + stability_window` on, branches whose
/// restrictions are equal and stable are merged as well.
pub fn enumerate_busemann_points<S: PointedSpace + ?Sized>(space: &S, params: RayParams) -> Result<BoundaryApprox> {
    let RayParams { radius: r, depth, stability_window: sw, annuli: k } = params;
    let horizon = space.max_radius();
    if depth + r > horizon {
        return Err(Error::HorizonTooSmall { horizon, needed: depth + r });
    }
    if depth == 0 {
        return Err(Error::Config("ray depth must be at least 1".into()));
    }

    let viable = viability(space, depth);
    let mut frontier: Vec<(usize, Track)> = vec![(0, Track::start(busemann_restriction(space, 0, r)?.values))];
    let mut counts = Vec::new();
    let mut nbrs = Vec::new();
    for t in 1..=depth {
        let base = space.sphere(t).start;
        let mut parents: Vec<Vec<usize>> = vec![Vec::new(); space.sphere(t).len()];
        for (bi, (p, _)) in frontier.iter().enumerate() {
            nbrs.clear();
            space.neighbors_into(*p, &mut nbrs);
            for &q in &nbrs {
                if space.norm(q) == t && viable[q] {
                    parents[q - base].push(bi);
                }
            }
        }
        let children: Vec<(usize, &[usize])> = parents
            .iter()
            .enumerate()
            .filter(|(_, ps)| !ps.is_empty())
            .map(|(i, ps)| (base + i, ps.as_slice()))
            .collect();
        let mut next: Vec<(usize, Track)> = children
            .par_iter()
            .map(|&(q, ps)| {
                let f = busemann_restriction(space, q, r)?;
                let mut best: Option<(u32, usize, Track)> = None;
                for &bi in ps {
                    let tr = frontier[bi].1.advance(space, f.values.clone(), t)?;
                    let key = (tr.settled_at(space), frontier[bi].0);
                    if best.as_ref().is_none_or(|b| key < (b.0, b.1)) {
                        best = Some((key.0, key.1, tr));
                    }
                }
                Ok((q, best.expect("children have a parent").2))
            })
            .collect::<Result<_>>()?;

        if t >= r + sw {
            let mut seen: BTreeMap<Vec<i64>, ()> = BTreeMap::new();
            next.retain(|(_, tr)| {
                if !tr.certified(space, t, sw) {
                    return true;
                }
                seen.insert(tr.values.clone(), ()).is_none()
            });
        }
        if t + k > depth {
            let distinct: std::collections::BTreeSet<&[i64]> =
                next.iter().map(|(_, tr)| tr.values.as_slice()).collect();
            counts.push(distinct.len());
        }
        frontier = next;
    }

    let mut found: BTreeMap<Vec<i64>, (bool, usize)> = BTreeMap::new();
    for (p, tr) in &frontier {
        let cert = tr.certified(space, depth, sw);
        found
            .entry(tr.values.clone())
            .and_modify(|e| {
                if cert && !e.0 {
                    *e = (true, *p);
                }
            })
            .or_insert((cert, *p));
    }
    let functions = found
        .into_iter()
        .map(|(values, (certified, source))| BoundaryFunction {
            function: RestrictedFunction { radius: r, values },
            provenance: if certified { Provenance::Certified } else { Provenance::RayLimit },
            certified,
            source,
        })
        .collect();
    let stabilized = counts.windows(2).all(|p| p[0] == p[1]);
    Ok(BoundaryApprox { radius: r, horizon, window: sw, functions, annulus_counts: counts, stabilized })
}

/// `viable[p]` iff `p` has a geodesic descendant at norm `depth`.
fn viability<S: PointedSpace + ?Sized>(space: &S, depth: u32) -> Vec<bool> {
    let mut viable = vec![false; space.ball_len(depth)];
    for p in space.sphere(depth) {
        viable[p] = true;
    }
    let mut nbrs = Vec::new();
    for t in (0..depth).rev() {
        for p in space.sphere(t) {
            nbrs.clear();
            space.neighbors_into(p, &mut nbrs);
            viable[p] = nbrs.iter().any(|&q| q < viable.len() && space.norm(q) == t + 1 && viable[q]);
        }
    }
    viable
}

/// Annulus functions split by whether a certified ray limit matches them.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Classification {
    pub radius: u32,
    /// Indices into the annulus function list.
    pub matched: Vec<usize>,
    pub unmatched: Vec<usize>,
    /// Certified ray limits that no annulus function matched.
    pub rays_only: Vec<usize>,
}

impl Classification {
    /// Empty `unmatched` is the finite-scale signature of every horofunction
    /// being a Busemann point.
    pub fn all_busemann(&self) -> bool {
        self.unmatched.is_empty()
    }
}

pub fn classify_boundary(annulus: &BoundaryApprox, busemann: &BoundaryApprox) -> Result<Classification> {
    if annulus.radius != busemann.radius {
        return Err(Error::RadiusMismatch(annulus.radius, busemann.radius));
    }
    let certified: Vec<&[i64]> =
        busemann.functions.iter().filter(|f| f.certified).map(|f| f.function.values.as_slice()).collect();
    let (matched, unmatched) =
        (0..annulus.len()).partition(|&i| certified.contains(&annulus.functions[i].function.values.as_slice()));
    let rays_only = (0..busemann.len())
        .filter(|&i| busemann.functions[i].certified && !annulus.contains(&busemann.functions[i].function.values))
        .collect();
    Ok(Classification { radius: annulus.radius, matched, unmatched, rays_only })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{symmetrize_generators, Group, Word};

    fn ball(family: &str, extra: &[&str], r: u32) -> Ball {
        let g = Group::new(family.parse().unwrap()).unwrap();
        let words: Vec<Word> = extra.iter().map(|w| w.parse().unwrap()).collect();
        let s = symmetrize_generators(&g, &words, true).unwrap();
        Ball::grow(&g, &s, r).unwrap()
    }

    fn z(n: i64) -> Element {
        Element::Vector([n].into_iter().collect())
    }

    /// Values on B_r of Z listed by integer y.
    fn by_int(b: &Ball, f: &RestrictedFunction) -> BTreeMap<i64, i64> {
        (0..f.len())
            .map(|i| match b.element(i) {
                Element::Vector(v) => (v[0], f.values()[i]),
                _ => unreachable!(),
            })
            .collect()
    }

    #[test]
    fn restriction_at_identity_is_norm() {
        let b = ball("Heis", &[], 6);
        let f = busemann_restriction(&b, 0, 3).unwrap();
        assert!((0..f.len()).all(|y| f.values()[y] == b.norm(y) as i64));
    }

    #[test]
    fn restriction_on_integer_line() {
        let b = ball("Z", &[], 10);
        let f = busemann_restriction_of(&b, &z(5), 2).unwrap();
        assert!(by_int(&b, &f).iter().all(|(y, v)| *v == -y));
        assert!(f.is_valid(&b));

        // S = {±1, ±2}: b(y) = ceil((10 - y)/2) - 5 = -floor(y/2)
        let b = ball("Z", &["aa"], 8);
        let f = busemann_restriction_of(&b, &z(10), 1).unwrap();
        assert!(by_int(&b, &f).iter().all(|(y, v)| *v == -y.div_euclid(2)));
        assert!(f.is_valid(&b));
    }

    #[test]
    fn restriction_needs_horizon() {
        let b = ball("Z", &[], 6);
        assert_eq!(busemann_restriction_of(&b, &z(5), 2), Err(Error::HorizonTooSmall { horizon: 6, needed: 7 }));
    }

    #[test]
    fn restriction_hits_floor_at_x() {
        let b = ball("Z^2", &[], 8);
        let x = b.sphere(3).start + 2;
        let f = busemann_restriction(&b, x, 4).unwrap();
        assert_eq!(f.values()[x], -3);
    }

    #[test]
    fn annulus_examples() {
        let b = ball("Z", &[], 12);
        let a = annulus_boundary_approx(&b, AnnulusParams::new(2)).unwrap();
        assert_eq!(a.len(), 2);
        assert!(a.stabilized);
        let fs: Vec<_> = a.functions.iter().map(|f| by_int(&b, &f.function)).collect();
        assert!(fs.iter().any(|m| m.iter().all(|(y, v)| *v == -y)));
        assert!(fs.iter().any(|m| m.iter().all(|(y, v)| *v == *y)));

        let b = ball("Z", &["aa"], 13);
        let a = annulus_boundary_approx(&b, AnnulusParams::new(3)).unwrap();
        assert_eq!(a.len(), 4);

        let b = ball("Z^2", &[], 16);
        let a = annulus_boundary_approx(&b, AnnulusParams::new(1)).unwrap();
        assert_eq!(a.len(), 8);
    }

    #[test]
    fn annulus_rejects_small_horizon() {
        let b = ball("Z", &[], 4);
        assert_eq!(
            annulus_boundary_approx(&b, AnnulusParams::new(2)),
            Err(Error::HorizonTooSmall { horizon: 4, needed: 5 })
        );
    }

    #[test]
    fn ray_limits() {
        let b = ball("Z", &[], 16);
        let plus = b.index_of(&z(1)).unwrap();
        let plus_gen = b.gens().position(&z(1)).unwrap();
        let ray = Ray::Periodic { prefix: vec![], period: vec![plus_gen] };
        let lim = ray_limit_in_ball(&b, &ray, 3, default_stability_window(3)).unwrap();
        assert_eq!(lim.certificate, Certificate::Certified);
        assert!(by_int(&b, &lim.function).iter().all(|(y, v)| *v == -y));
        assert_eq!(ray.points(&b, 3)[1], plus);

        // the limit at γ_t is -t for t <= r
        let pts = ray.points(&b, 3);
        for (t, &p) in pts.iter().enumerate().take(4) {
            assert_eq!(lim.function.values()[p], -(t as i64));
        }
    }

    #[test]
    fn ray_limit_in_free_group() {
        let b = ball("F2", &[], 8);
        let g = b.group().clone();
        let a = g.eval(&"a".parse().unwrap()).unwrap();
        let ray = Ray::Periodic { prefix: vec![], period: vec![b.gens().position(&a).unwrap()] };
        let lim = ray_limit_in_ball(&b, &ray, 2, 2).unwrap();
        let val = |w: &str| lim.function.values()[b.index_of(&g.eval(&w.parse().unwrap()).unwrap()).unwrap()];
        assert_eq!(val("a"), -1);
        assert_eq!(val("A"), 1);
        assert_eq!(val("b"), 1);
        assert_eq!(val("ab"), 0);
        assert_eq!(lim.certificate, Certificate::Certified);
    }

    #[test]
    fn ray_errors() {
        let b = ball("Z", &[], 6);
        let one = b.index_of(&z(1)).unwrap();
        let minus = b.index_of(&z(-1)).unwrap();
        // back and forth is not a geodesic
        assert_eq!(ray_limit(&b, &[0, one, 0, minus], 1, 2), Err(Error::NotAGeodesic { step: 2 }));
        assert!(matches!(ray_limit(&b, &[0, one], 2, 2), Err(Error::RayTooShort { .. })));
        assert!(matches!(ray_limit(&b, &[one], 1, 2), Err(Error::PreconditionFailed(_))));
    }

    #[test]
    fn equivalence_of_rays() {
        let b = ball("Z", &[], 12);
        let plus = Ray::Periodic { prefix: vec![], period: vec![0] }.points(&b, 1);
        let minus = Ray::Periodic { prefix: vec![], period: vec![1] }.points(&b, 1);
        assert!(rays_equivalent(&b, &plus, &plus, 1, 4).unwrap());
        assert!(!rays_equivalent(&b, &plus, &minus, 1, 4).unwrap());
        assert_eq!(rays_equivalent(&b, &plus, &minus, 1, 100), Err(Error::UncertifiedLimit(1)));

        // Z^2: east axis vs north-east staircase
        let b = ball("Z^2", &[], 16);
        let east = Ray::Periodic { prefix: vec![], period: vec![0] }.points(&b, 1);
        let stairs = Ray::Periodic { prefix: vec![], period: vec![0, 2] }.points(&b, 1);
        assert!(!rays_equivalent(&b, &east, &stairs, 1, 4).unwrap());
    }

    #[test]
    fn busemann_enumeration() {
        let b = ball("Z", &[], 16);
        let p = RayParams::for_space(&b, 4);
        let e = enumerate_busemann_points(&b, p).unwrap();
        assert_eq!((e.len(), e.certified_count()), (2, 2));

        let b = ball("Dinf", &[], 16);
        let e = enumerate_busemann_points(&b, RayParams::for_space(&b, 4)).unwrap();
        assert_eq!((e.len(), e.certified_count()), (2, 2));

        let b = ball("F2", &[], 7);
        let e = enumerate_busemann_points(&b, RayParams::for_space(&b, 1)).unwrap();
        assert_eq!(e.certified_count(), 4);
    }

    #[test]
    fn classification_signature() {
        let b = ball("Z", &[], 16);
        let a = annulus_boundary_approx(&b, AnnulusParams::new(4)).unwrap();
        let e = enumerate_busemann_points(&b, RayParams::for_space(&b, 4)).unwrap();
        let c = classify_boundary(&a, &e).unwrap();
        assert!(c.all_busemann());
        assert_eq!(c.matched.len(), 2);
        let a3 = annulus_boundary_approx(&b, AnnulusParams::new(3)).unwrap();
        assert_eq!(classify_boundary(&a3, &e), Err(Error::RadiusMismatch(3, 4)));
    }

    #[test]
    fn fingerprint_is_deterministic() {
        let a1 = annulus_boundary_approx(&ball("Heis", &[], 9), AnnulusParams::new(2)).unwrap();
        let a2 = annulus_boundary_approx(&ball("Heis", &[], 9), AnnulusParams::new(2)).unwrap();
        assert_eq!(a1.fingerprint(), a2.fingerprint());
        assert_eq!(a1, a2);
    }

    #[test]
    fn invariant_violations_are_reported() {
        let b = ball("Z", &[], 4);
        let n = b.ball_len(1);
        assert_eq!(RestrictedFunction::new(1, vec![1; n]).violations(&b)[0], Violation::NonzeroAtBase(1));
        // values indexed [0, -1, +1]
        let bad = RestrictedFunction::new(1, vec![0, 5, -1]);
        let v = bad.violations(&b);
        assert!(v.contains(&Violation::Lipschitz { p: 0, q: 1 }));
        assert!(RestrictedFunction::new(1, vec![0, -2, 0]).violations(&b).contains(&Violation::BelowFloor { p: 1 }));
    }
}
