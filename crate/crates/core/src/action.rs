//! The left action of `G` on restricted horofunctions, orbits of boundary
//! approximations, the samples of `K` and `F`, and character extraction.
//!
//! `x.h(y) = h(x⁻¹y) - h(x⁻¹)`. Acting by `x` shrinks the domain by `|x|`, so
//! every operation here takes the target radius explicitly and fails with
//! [`Error::DomainTooSmall`] instead of truncating behind the caller's back.
//!
//! Kernel subgroups are only ever sampled: every report states the norm
//! bound it was computed under.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;

use crate::cayley::Ball;
use crate::error::{Error, Result};
use crate::group::Element;
use crate::horo::{ray_limit_in_ball, BoundaryApprox, Certificate, Ray, RayParams, RestrictedFunction};
use crate::space::PointedSpace;

/// Indices of `g·y` for every `y` in `B_r`.
fn left_translate(ball: &Ball, g: &Element, r: u32) -> Result<Vec<usize>> {
    let group = ball.group();
    (0..ball.ball_len(r))
        .map(|y| {
            let gy = group.mul(g, ball.element(y))?;
            ball.index_of(&gy).ok_or(Error::OutOfBall { radius: ball.radius() })
        })
        .collect()
}

fn norm_of(ball: &Ball, x: &Element) -> Result<u32> {
    ball.index_of(x).map(|i| ball.norm(i)).ok_or(Error::OutOfBall { radius: ball.radius() })
}

/// `x.h` restricted to `B_r`. Requires `h` on `B_{r+|x|}`.
pub fn act_on_function(ball: &Ball, x: &Element, h: &RestrictedFunction, r: u32) -> Result<RestrictedFunction> {
    let needed = r + norm_of(ball, x)?;
    if h.radius() < needed {
        return Err(Error::DomainTooSmall { have: h.radius(), needed });
    }
    let xi = ball.group().inverse(x);
    let map = left_translate(ball, &xi, r)?;
    Ok(act_with_map(h, &map, r))
}

/// `x.h` given `map[y] = index(x⁻¹y)`; `map[0]` is the index of `x⁻¹`.
fn act_with_map(h: &RestrictedFunction, map: &[usize], r: u32) -> RestrictedFunction {
    let v = h.values();
    let shift = v[map[0]];
    RestrictedFunction::new(r, map.iter().map(|&i| v[i] - shift).collect())
}

/// Orbits of a boundary approximation under the generator action.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OrbitReport {
    /// Radius of the boundary approximation.
    pub boundary_radius: u32,
    /// Radius at which acted functions are matched.
    pub radius: u32,
    /// Distinct restrictions to `B_radius`, sorted.
    pub functions: Vec<RestrictedFunction>,
    /// For each distinct restriction, the boundary functions truncating to it.
    pub members: Vec<Vec<usize>>,
    /// `actions[s][i]`: index of `s.f_i`, if it is in the set.
    pub actions: Vec<Vec<Option<usize>>>,
    pub orbits: Vec<Orbit>,
    /// Closed under every generator.
    pub finite_orbit: bool,
    /// Largest radius `<= radius` at which the truncated set is closed.
    pub closed_radius: u32,
    /// Norm bound of the stabilizer samples.
    pub stabilizer_norm: u32,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Orbit {
    /// Indices into [`OrbitReport::functions`], increasing.
    pub members: Vec<usize>,
    /// No generator maps a member outside the set.
    pub closed: bool,
    /// Ball indices of `x` with `|x| <= stabilizer_norm` fixing the first
    /// member, compared at radius `boundary_radius - stabilizer_norm`.
    pub stabilizer: Vec<usize>,
}

impl OrbitReport {
    /// Orbit containing distinct restriction `i`.
    pub fn orbit_of(&self, i: usize) -> &Orbit {
        self.orbits.iter().find(|o| o.members.contains(&i)).expect("every function lies in an orbit")
    }

    /// Orbit containing boundary function `k`.
    pub fn orbit_of_boundary(&self, k: usize) -> &Orbit {
        let i = self.members.iter().position(|m| m.contains(&k)).expect("every function was truncated");
        self.orbit_of(i)
    }

    pub fn orbit_sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(|o| o.members.len()).collect()
    }
}

/// Largest norm of a generator inside `ball`.
fn max_generator_norm(ball: &Ball, gens: &[Element]) -> Result<u32> {
    gens.iter().map(|g| norm_of(ball, g)).try_fold(0, |m, n| Ok(m.max(n?)))
}

/// Distinct truncations to `B_r`, with the boundary indices behind each.
fn truncations(ball: &Ball, boundary: &BoundaryApprox, r: u32) -> Result<(Vec<RestrictedFunction>, Vec<Vec<usize>>)> {
    let mut map: BTreeMap<RestrictedFunction, Vec<usize>> = BTreeMap::new();
    for (k, f) in boundary.functions.iter().enumerate() {
        map.entry(f.function.truncate(ball, r)?).or_default().push(k);
    }
    Ok(map.into_iter().unzip())
}

type Actions = (Vec<RestrictedFunction>, Vec<Vec<usize>>, Vec<Vec<Option<usize>>>);

/// `actions[s][i]` at comparison radius `r`.
fn generator_actions(ball: &Ball, boundary: &BoundaryApprox, gens: &[Element], r: u32) -> Result<Actions> {
    let (functions, members) = truncations(ball, boundary, r)?;
    let maps: Vec<Vec<usize>> =
        gens.iter().map(|s| left_translate(ball, &ball.group().inverse(s), r)).collect::<Result<_>>()?;
    let pairs: Vec<(usize, usize)> = (0..gens.len()).flat_map(|s| (0..functions.len()).map(move |i| (s, i))).collect();
    let images: Vec<Option<usize>> = pairs
        .par_iter()
        .map(|&(s, i)| {
            let source = &boundary.functions[members[i][0]].function;
            let image = act_with_map(source, &maps[s], r);
            functions.binary_search(&image).ok()
        })
        .collect();
    let actions = images.chunks(functions.len().max(1)).map(|c| c.to_vec()).collect();
    Ok((functions, members, actions))
}

fn find(parent: &mut [usize], mut i: usize) -> usize {
    while parent[i] != i {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    i
}

/// Elements `x` with `|x| <= n` in ball order with `x.h = h` on
/// `B_{h.radius - n}`.
fn stabilizer_sample(ball: &Ball, h: &RestrictedFunction, n: u32) -> Result<Vec<usize>> {
    let r = h.radius() - n;
    let target = h.truncate(ball, r)?;
    let candidates: Vec<usize> = (0..ball.ball_len(n)).collect();
    let fixed: Vec<bool> = candidates
        .par_iter()
        .map(|&x| {
            let map = left_translate(ball, &ball.group().inverse(ball.element(x)), r)?;
            Ok(act_with_map(h, &map, r) == target)
        })
        .collect::<Result<_>>()?;
    Ok(candidates.into_iter().filter(|&x| fixed[x]).collect())
}

/// Orbits of the boundary functions under `gens`, matched at radius
/// `boundary.radius - max |s|`.
pub fn compute_orbits(
    ball: &Ball,
    boundary: &BoundaryApprox,
    gens: &[Element],
    stabilizer_norm: u32,
) -> Result<OrbitReport> {
    let rb = boundary.radius;
    let len = max_generator_norm(ball, gens)?;
    if rb <= len {
        return Err(Error::DomainTooSmall { have: rb, needed: len + 1 });
    }
    let r = rb - len;
    let (functions, members, actions) = generator_actions(ball, boundary, gens, r)?;

    let mut parent: Vec<usize> = (0..functions.len()).collect();
    for act in &actions {
        for (i, img) in act.iter().enumerate() {
            if let Some(j) = *img {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for i in 0..functions.len() {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(i);
    }

    let stabilizer_norm = stabilizer_norm.min(rb - 1);
    let orbits = groups
        .into_values()
        .map(|m| {
            let closed = m.iter().all(|&i| actions.iter().all(|a| a[i].is_some()));
            let rep = &boundary.functions[members[m[0]][0]].function;
            let stabilizer = stabilizer_sample(ball, rep, stabilizer_norm)?;
            Ok(Orbit { members: m, closed, stabilizer })
        })
        .collect::<Result<Vec<_>>>()?;
    let finite_orbit = orbits.iter().all(|o| o.closed);

    let mut closed_radius = 0;
    for rr in (1..=r).rev() {
        let (_, _, a) = generator_actions(ball, boundary, gens, rr)?;
        if a.iter().flatten().all(Option::is_some) {
            closed_radius = rr;
            break;
        }
    }

    Ok(OrbitReport {
        boundary_radius: rb,
        radius: r,
        functions,
        members,
        actions,
        orbits,
        finite_orbit,
        closed_radius,
        stabilizer_norm,
    })
}

fn comparison_radius(boundary: &BoundaryApprox, max_norm: u32) -> Result<u32> {
    if boundary.radius <= max_norm {
        return Err(Error::DomainTooSmall { have: boundary.radius, needed: max_norm + 1 });
    }
    Ok(boundary.radius - max_norm)
}

/// Elements of norm `<= max_norm` fixing every boundary function on
/// `B_{radius - max_norm}`, in ball order.
pub fn action_kernel_sample(ball: &Ball, boundary: &BoundaryApprox, max_norm: u32) -> Result<Vec<usize>> {
    let r = comparison_radius(boundary, max_norm)?;
    let targets: Vec<RestrictedFunction> =
        boundary.functions.iter().map(|f| f.function.truncate(ball, r)).collect::<Result<_>>()?;
    let candidates: Vec<usize> = (0..ball.ball_len(max_norm)).collect();
    let fixed: Vec<bool> = candidates
        .par_iter()
        .map(|&x| {
            let map = left_translate(ball, &ball.group().inverse(ball.element(x)), r)?;
            Ok(boundary.functions.iter().zip(&targets).all(|(f, t)| act_with_map(&f.function, &map, r) == *t))
        })
        .collect::<Result<_>>()?;
    Ok(candidates.into_iter().filter(|&x| fixed[x]).collect())
}

/// Kernel-sample elements on which every boundary function vanishes.
pub fn f_subgroup_sample(ball: &Ball, boundary: &BoundaryApprox, max_norm: u32) -> Result<Vec<usize>> {
    Ok(action_kernel_sample(ball, boundary, max_norm)?
        .into_iter()
        .filter(|&x| boundary.functions.iter().all(|f| f.function.values()[x] == 0))
        .collect())
}

/// `(h_1(x), ..., h_d(x))` in boundary order.
pub fn psi_map(ball: &Ball, boundary: &BoundaryApprox, x: &Element) -> Result<Vec<i64>> {
    let i = ball.index_of(x).ok_or(Error::OutOfDomain)?;
    psi_at(boundary, i)
}

fn psi_at(boundary: &BoundaryApprox, i: usize) -> Result<Vec<i64>> {
    boundary.functions.iter().map(|f| f.function.value(i).ok_or(Error::OutOfDomain)).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CharacterReport {
    /// Index of `h` among the boundary functions.
    pub function: usize,
    pub sample_norm: u32,
    /// Ball indices of the stabilizer sample of `h`.
    pub stabilizer: Vec<usize>,
    /// Ball indices of the kernel sample.
    pub kernel: Vec<usize>,
    /// Pairs `(x, y)` from the stabilizer sample with `xy` in the domain of `h`.
    pub additivity_checks: usize,
    pub additivity_failures: Vec<(usize, usize)>,
    /// First `y != 1` in the kernel sample with `h(y) = -|y|`.
    pub witness: Option<usize>,
    /// `(x, Ψ(x))` for the kernel sample.
    pub psi: Vec<(usize, Vec<i64>)>,
    pub psi_failures: Vec<(usize, usize)>,
}

impl CharacterReport {
    pub fn is_homomorphism(&self) -> bool {
        self.additivity_failures.is_empty()
    }
}

/// Additivity failures of `value` over pairs from `sample`; returns the
/// number of pairs checked.
fn additivity<F>(ball: &Ball, sample: &[usize], domain: usize, value: F) -> (usize, Vec<(usize, usize)>)
where
    F: Fn(usize) -> Vec<i64> + Sync,
{
    let group = ball.group();
    let results: Vec<(usize, Vec<(usize, usize)>)> = sample
        .par_iter()
        .map(|&x| {
            let mut checks = 0;
            let mut fails = Vec::new();
            for &y in sample {
                let Ok(xy) = group.mul(ball.element(x), ball.element(y)) else { continue };
                let Some(k) = ball.index_of(&xy).filter(|&k| k < domain) else { continue };
                checks += 1;
                let (a, b, c) = (value(x), value(y), value(k));
                if a.iter().zip(&b).zip(&c).any(|((a, b), c)| a + b != *c) {
                    fails.push((x, y));
                }
            }
            (checks, fails)
        })
        .collect();
    results.into_iter().fold((0, Vec::new()), |(n, mut f), (m, g)| {
        f.extend(g);
        (n + m, f)
    })
}

/// Checks that boundary function `index` restricts to a homomorphism on its
/// stabilizer sample, searches for a witness `h(y) = -|y|` in the kernel
/// sample and tabulates Ψ there.
pub fn extract_character(
    ball: &Ball,
    boundary: &BoundaryApprox,
    orbits: &OrbitReport,
    index: usize,
    sample_norm: u32,
) -> Result<CharacterReport> {
    if !orbits.orbit_of_boundary(index).closed {
        return Err(Error::NoFiniteOrbit);
    }
    comparison_radius(boundary, sample_norm)?;
    let h = &boundary.functions[index].function;
    let domain = h.len();
    let stabilizer = stabilizer_sample(ball, h, sample_norm)?;
    let (additivity_checks, additivity_failures) = additivity(ball, &stabilizer, domain, |x| vec![h.values()[x]]);
    let kernel = action_kernel_sample(ball, boundary, sample_norm)?;
    let witness = kernel.iter().copied().find(|&y| y != 0 && h.values()[y] == -(ball.norm(y) as i64));
    let psi = kernel.iter().map(|&x| Ok((x, psi_at(boundary, x)?))).collect::<Result<Vec<_>>>()?;
    let (_, psi_failures) = additivity(ball, &kernel, domain, |x| psi_at(boundary, x).unwrap_or_default());
    Ok(CharacterReport {
        function: index,
        sample_norm,
        stabilizer,
        kernel,
        additivity_checks,
        additivity_failures,
        witness,
        psi,
        psi_failures,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PowerCheck {
    /// `|xᵗ| = t|x|` for every checked `t` and the periodic ray is geodesic.
    pub holds: bool,
    pub norm: u32,
    /// `|xᵗ|` for `t = 1..=floor(R/|x|)`.
    pub power_norms: Vec<u32>,
    pub ray: Ray,
}

/// Verifies `|xᵗ| = t|x|` inside the ball and builds the periodic ray
/// through the powers of `x`. Requires `h(x) = |x|` and `h` 1-Lipschitz.
pub fn power_geodesic_check(ball: &Ball, x: &Element, h: &RestrictedFunction) -> Result<PowerCheck> {
    let i = ball.index_of(x).ok_or(Error::OutOfDomain)?;
    let m = ball.norm(i);
    if m == 0 {
        return Err(Error::PreconditionFailed("x must be nontrivial".into()));
    }
    if h.value(i) != Some(m as i64) {
        return Err(Error::PreconditionFailed(format!("h(x) = {:?}, |x| = {m}", h.value(i))));
    }
    if !h.is_valid(ball) {
        return Err(Error::PreconditionFailed("h is not 1-Lipschitz".into()));
    }
    let top = ball.radius() / m;
    if top < 2 {
        return Err(Error::HorizonTooSmall { horizon: ball.radius(), needed: 2 * m });
    }
    let group = ball.group();
    let mut power_norms = Vec::new();
    let mut p = group.identity();
    for _ in 1..=top {
        p = group.mul(&p, x)?;
        power_norms.push(ball.index_of(&p).map_or(u32::MAX, |k| ball.norm(k)));
    }
    let arithmetic = power_norms.iter().zip(1..).all(|(&n, t)| n == t * m);
    let period = ball.geodesic_to_index(i);
    let word: Vec<usize> = period.iter().copied().cycle().take((top * m) as usize).collect();
    let geodesic = ball.verify_geodesic(&word)?;
    Ok(PowerCheck {
        holds: arithmetic && geodesic,
        norm: m,
        power_norms,
        ray: Ray::Periodic { prefix: vec![], period },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeEntry {
    /// Index of `g` in the extended ball.
    pub element: usize,
    pub norm: u32,
    /// Limits of `(g·xᵗ)` and `(xᵗ)` differ on `B_r`.
    pub differs: bool,
    pub certified: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProbeReport {
    pub radius: u32,
    pub entries: Vec<ProbeEntry>,
    /// Distinct limits among all `(g·xᵗ)`.
    pub distinct_limits: usize,
    /// Certified Busemann points of the extended Cayley graph at radius `r`.
    pub busemann_estimate: usize,
    /// Sample size does not exceed the estimate.
    pub bound_holds: bool,
}

/// For each `g`, compares the limits of the rays `(g·xᵗ)` and `(xᵗ)` in the
/// Cayley graph of `ball_u`, whose generating set must contain `x`.
///
/// The limit along `(g·xᵗ)` is `g.γ∞`, so it is obtained by acting on the
/// limit of `(xᵗ)` taken on a ball larger by `|g|`.
pub fn kernel_injectivity_probe(
    ball_u: &Ball,
    x: &Element,
    samples: &[Element],
    r: u32,
    stability_window: u32,
) -> Result<ProbeReport> {
    let s = ball_u
        .gens()
        .position(x)
        .ok_or_else(|| Error::PreconditionFailed("x is not in the extended generating set".into()))?;
    let norms: Vec<u32> = samples.iter().map(|g| norm_of(ball_u, g)).collect::<Result<_>>()?;
    let big = r + norms.iter().copied().max().unwrap_or(0);
    let needed = 2 * big + 1;
    if ball_u.radius() < needed {
        return Err(Error::HorizonTooSmall { horizon: ball_u.radius(), needed });
    }
    let ray = Ray::Periodic { prefix: vec![], period: vec![s] };
    let limit = ray_limit_in_ball(ball_u, &ray, big, stability_window)?;
    let certified = limit.certificate == Certificate::Certified;
    let base = limit.function.truncate(ball_u, r)?;
    let mut distinct = std::collections::BTreeSet::new();
    let entries = samples
        .iter()
        .zip(&norms)
        .map(|(g, &norm)| {
            let moved = act_on_function(ball_u, g, &limit.function, r)?;
            let differs = moved != base;
            distinct.insert(moved);
            Ok(ProbeEntry { element: ball_u.index_of(g).unwrap_or(0), norm, differs, certified })
        })
        .collect::<Result<Vec<_>>>()?;
    let estimate = crate::horo::enumerate_busemann_points(
        ball_u,
        RayParams::for_space(ball_u, r).with_stability_window(stability_window),
    )?
    .certified_count();
    Ok(ProbeReport {
        radius: r,
        distinct_limits: distinct.len(),
        bound_holds: samples.len() <= estimate,
        busemann_estimate: estimate,
        entries,
    })
}
