//! Shared fixtures, brute-force oracles and randomized property checks.
//!
//! The oracles deliberately avoid the library: they run their own BFS over
//! plain integer tuples with hand-written multiplication.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, VecDeque};

use horoboundary::action::{act_on_function, action_kernel_sample, power_geodesic_check};
use horoboundary::graphs::sphere_bound_check;
use horoboundary::horo::{
    annulus_boundary_approx, busemann_restriction, enumerate_busemann_points, AnnulusParams, BoundaryApprox, RayParams,
};
use horoboundary::{symmetrize_generators, Ball, Group, PointedSpace, Word};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn ball(family: &str, extra: &[&str], radius: u32) -> Ball {
    let g = Group::new(family.parse().unwrap()).unwrap();
    let words: Vec<Word> = extra.iter().map(|w| w.parse().unwrap()).collect();
    let s = symmetrize_generators(&g, &words, true).unwrap();
    Ball::grow(&g, &s, radius).unwrap()
}

/// A fixture group for the property checks.
pub struct Fixture {
    pub name: &'static str,
    pub ball: Ball,
    pub radius: u32,
    pub boundary: BoundaryApprox,
    pub rays: BoundaryApprox,
}

pub fn fixture(name: &'static str, family: &str, extra: &[&str], radius: u32, horizon: u32) -> Fixture {
    let ball = ball(family, extra, horizon);
    let boundary = annulus_boundary_approx(&ball, AnnulusParams::new(radius)).unwrap();
    let rays = enumerate_busemann_points(&ball, RayParams::for_space(&ball, radius)).unwrap();
    Fixture { name, ball, radius, boundary, rays }
}

pub fn fixtures() -> Vec<Fixture> {
    vec![
        fixture("Z", "Z", &[], 4, 16),
        fixture("Z{1,2}", "Z", &["aa"], 4, 18),
        fixture("Dinf", "Dinf", &[], 4, 16),
        fixture("Z^2", "Z^2", &[], 2, 12),
        fixture("F2", "F2", &[], 2, 9),
        fixture("Heis", "Heis", &[], 2, 8),
        fixture("Z x C3", "Z x C3", &["ab", "abb"], 3, 14),
    ]
}

// ---------------------------------------------------------------- oracles

/// A group given by plain tuples.
pub struct Oracle {
    pub identity: Vec<i64>,
    pub gens: Vec<Vec<i64>>,
    pub mul: fn(&[i64], &[i64]) -> Vec<i64>,
    pub inv: fn(&[i64]) -> Vec<i64>,
}

fn add(a: &[i64], b: &[i64]) -> Vec<i64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn neg(a: &[i64]) -> Vec<i64> {
    a.iter().map(|x| -x).collect()
}

pub fn oracle_zn(n: usize, extra: &[Vec<i64>]) -> Oracle {
    let mut gens = Vec::new();
    for i in 0..n {
        let mut e = vec![0; n];
        e[i] = 1;
        gens.push(e.clone());
        gens.push(neg(&e));
    }
    for g in extra {
        gens.push(g.clone());
        gens.push(neg(g));
    }
    Oracle { identity: vec![0; n], gens, mul: add, inv: neg }
}

/// `[s, o]` is `x -> s x + o`; product is composition.
pub fn oracle_dinf() -> Oracle {
    fn mul(g: &[i64], h: &[i64]) -> Vec<i64> {
        vec![g[0] * h[0], g[0] * h[1] + g[1]]
    }
    fn inv(g: &[i64]) -> Vec<i64> {
        vec![g[0], -g[0] * g[1]]
    }
    Oracle { identity: vec![1, 0], gens: vec![vec![-1, 0], vec![-1, 1]], mul, inv }
}

/// `Z x C3` generated by `(±1, 0)`, `(0, ±1)`, `±(1, 1)`, `±(1, 2)`.
pub fn oracle_z_c3_diagonal() -> Oracle {
    fn mul(g: &[i64], h: &[i64]) -> Vec<i64> {
        vec![g[0] + h[0], (g[1] + h[1]).rem_euclid(3)]
    }
    fn inv(g: &[i64]) -> Vec<i64> {
        vec![-g[0], (-g[1]).rem_euclid(3)]
    }
    let mut gens = Vec::new();
    for g in [[1, 0], [0, 1], [1, 1], [1, 2]] {
        gens.push(g.to_vec());
        gens.push(inv(&g));
    }
    gens.sort();
    gens.dedup();
    Oracle { identity: vec![0, 0], gens, mul, inv }
}

/// Word lengths of every element within `radius`.
pub fn oracle_lengths(o: &Oracle, radius: u32) -> HashMap<Vec<i64>, u32> {
    let mut dist = HashMap::from([(o.identity.clone(), 0)]);
    let mut queue = VecDeque::from([o.identity.clone()]);
    while let Some(x) = queue.pop_front() {
        let d = dist[&x];
        if d == radius {
            continue;
        }
        for s in &o.gens {
            let y = (o.mul)(&x, s);
            if !dist.contains_key(&y) {
                dist.insert(y.clone(), d + 1);
                queue.push_back(y);
            }
        }
    }
    dist
}

/// Distinct `b_x|B_r` for `R - r - w <= |x| <= R - r`.
pub fn oracle_annulus_count(o: &Oracle, r: u32, horizon: u32, w: u32) -> usize {
    let len = oracle_lengths(o, horizon);
    let mut ball: Vec<&Vec<i64>> = len.iter().filter(|(_, &d)| d <= r).map(|(k, _)| k).collect();
    ball.sort();
    let lo = (horizon - r).saturating_sub(w).max(1);
    let mut seen = BTreeSet::new();
    for (x, &dx) in &len {
        if dx < lo || dx > horizon - r {
            continue;
        }
        let xi = (o.inv)(x);
        let f: Vec<i64> = ball.iter().map(|y| len[&(o.mul)(&xi, y)] as i64 - dx as i64).collect();
        seen.insert(f);
    }
    seen.len()
}

/// Reduced words of `F_k`, letters `±1..=±k`.
pub fn free_reduce(word: &[i64]) -> Vec<i64> {
    let mut out: Vec<i64> = Vec::new();
    for &l in word {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub fn reduced_words(k: i64, len: usize) -> Vec<Vec<i64>> {
    let letters: Vec<i64> = (1..=k).flat_map(|i| [i, -i]).collect();
    let mut words = vec![vec![]];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &words {
            for &l in &letters {
                if w.last() != Some(&-l) {
                    let mut v = w.clone();
                    v.push(l);
                    next.push(v);
                }
            }
        }
        words = next;
    }
    words
}

/// Distinct limits on `B_r` of rays along reduced words of `F_2`:
/// `b_w(y) = |w⁻¹y| - |w|` for words `w` long enough to be past `B_r`.
pub fn oracle_free_ray_count(r: usize) -> usize {
    let ball: Vec<Vec<i64>> = (0..=r).flat_map(|n| reduced_words(2, n)).collect();
    let mut seen = BTreeSet::new();
    for w in reduced_words(2, 2 * r + 2) {
        let wi: Vec<i64> = w.iter().rev().map(|l| -l).collect();
        let f: Vec<i64> =
            ball.iter().map(|y| free_reduce(&[wi.clone(), y.clone()].concat()).len() as i64 - w.len() as i64).collect();
        seen.insert(f);
    }
    seen.len()
}

// ---------------------------------------------------------------- properties

/// Random outward walk from the base point: each step goes to a random
/// neighbor one sphere further out.
pub fn random_branch<S: PointedSpace + ?Sized>(space: &S, len: u32, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut branch = vec![0];
    let mut nbrs = Vec::new();
    for t in 1..=len {
        nbrs.clear();
        space.neighbors_into(*branch.last().unwrap(), &mut nbrs);
        nbrs.retain(|&q| space.norm(q) == t);
        if nbrs.is_empty() {
            break;
        }
        branch.push(nbrs[rng.gen_range(0..nbrs.len())]);
    }
    branch
}

/// `t -> b_{γ_t}(y)` is non-increasing with floor `-|y|`.
pub fn check_monotone<S: PointedSpace + ?Sized>(space: &S, r: u32, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let branch = random_branch(space, space.max_radius() - r, rng);
    let mut prev: Option<Vec<i64>> = None;
    for (t, &p) in branch.iter().enumerate() {
        let f = busemann_restriction(space, p, r).map_err(|e| e.to_string())?;
        for (y, &v) in f.values().iter().enumerate() {
            if v < -(space.norm(y) as i64) {
                return Err(format!("below floor at step {t}, point {y}"));
            }
            if let Some(prev) = &prev {
                if v > prev[y] {
                    return Err(format!("increase at step {t}, point {y}"));
                }
            }
        }
        prev = Some(f.values().to_vec());
    }
    Ok(())
}

/// `x.b_y = b_{xy}` on `B_r` for random `x`, `y`.
pub fn check_equivariance(ball: &Ball, r: u32, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let big = ball.radius();
    let nx = rng.gen_range(0..=(big - r) / 2);
    let x = rng.gen_range(0..ball.ball_len(nx));
    let ny = big - r - ball.norm(x);
    let y = rng.gen_range(0..ball.ball_len(ny));
    let hy = busemann_restriction(ball, y, r + ball.norm(x)).map_err(|e| e.to_string())?;
    let moved = act_on_function(ball, ball.element(x), &hy, r).map_err(|e| e.to_string())?;
    let xy = ball.group().mul(ball.element(x), ball.element(y)).unwrap();
    let xy = ball.index_of(&xy).ok_or("xy outside the ball")?;
    let direct = busemann_restriction(ball, xy, r).map_err(|e| e.to_string())?;
    if moved != direct {
        return Err(format!("x.b_y != b_xy for x={} y={}", ball.element(x), ball.element(y)));
    }
    Ok(())
}

/// Value 0 at the base point, Lipschitz, floor, and floor realization for
/// every emitted function.
pub fn check_emitted<S: PointedSpace + ?Sized>(space: &S, approx: &BoundaryApprox) -> Result<(), String> {
    for f in &approx.functions {
        let v = f.function.violations(space);
        if !v.is_empty() {
            return Err(format!("{:?}", v[0]));
        }
        if !f.function.realizes_floor(space) {
            return Err("floor not realized".into());
        }
    }
    Ok(())
}

/// `|xᵗ| = t|x|` whenever `power_geodesic_check` accepts its preconditions,
/// for random `x` from the kernel sample and random `±h`.
pub fn check_powers(fx: &Fixture, rng: &mut ChaCha8Rng) -> Result<(), String> {
    let norm = (fx.radius - 1).min(2);
    let kernel = action_kernel_sample(&fx.ball, &fx.boundary, norm).map_err(|e| e.to_string())?;
    let x = kernel[rng.gen_range(0..kernel.len())];
    let mut h = fx.boundary.functions[rng.gen_range(0..fx.boundary.len())].function.clone();
    if rng.gen_bool(0.5) {
        h = h.negated();
    }
    match power_geodesic_check(&fx.ball, fx.ball.element(x), &h) {
        Ok(p) if !p.holds => Err(format!("|x^t| != t|x| for x = {}", fx.ball.element(x))),
        _ => Ok(()),
    }
}

pub fn check_sphere_bound(fx: &Fixture) -> Result<(), String> {
    let report = sphere_bound_check(&fx.ball, fx.rays.certified_count(), 3);
    if report.holds {
        Ok(())
    } else {
        Err(format!("{} Busemann points > min sphere {}", report.busemann_count, report.min_sphere))
    }
}
