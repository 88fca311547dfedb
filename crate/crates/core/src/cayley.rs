//! Word-metric balls in Cayley graphs.
//!
//! [`Ball::grow`] runs a breadth-first search from the identity along right
//! multiplication by generators. Within each sphere elements are sorted by
//! canonical key, so element indices (and everything derived from them) are
//! reproducible.

use hashbrown::HashTable;
use rayon::prelude::*;
use rustc_hash::FxBuildHasher;
use std::hash::BuildHasher;

use crate::error::{Error, Result};
use crate::group::{Element, GeneratingSet, Group};
use crate::space::PointedSpace;

/// Default cap on the number of ball elements.
pub const DEFAULT_ELEMENT_CAP: usize = 20_000_000;

const NONE: u32 = u32::MAX;

/// Closed ball `{x : |x|_S <= radius}` with exact word lengths.
pub struct Ball {
    group: Group,
    gens: GeneratingSet,
    radius: u32,
    elements: Vec<Element>,
    dist: Vec<u32>,
    parent: Vec<u32>,
    parent_gen: Vec<u32>,
    sphere_offsets: Vec<usize>,
    table: HashTable<u32>,
    hasher: FxBuildHasher,
    /// `neighbors[i * |S| + s]` is the index of `x_i * s`, or `NONE`.
    neighbors: Vec<u32>,
}

impl Ball {
    pub fn grow(group: &Group, gens: &GeneratingSet, radius: u32) -> Result<Ball> {
        Ball::grow_with_cap(group, gens, radius, DEFAULT_ELEMENT_CAP)
    }

    pub fn grow_with_cap(group: &Group, gens: &GeneratingSet, radius: u32, cap: usize) -> Result<Ball> {
        if radius < 1 {
            return Err(Error::Config("ball radius must be at least 1".into()));
        }
        if let Some(bad) = gens.members().iter().find(|g| !group.contains(g)) {
            return Err(Error::InvalidSpec(format!("generator {bad} is not in {}", group.name())));
        }
        let hasher = FxBuildHasher;
        let mut ball = Ball {
            group: group.clone(),
            gens: gens.clone(),
            radius,
            elements: vec![group.identity()],
            dist: vec![0],
            parent: vec![NONE],
            parent_gen: vec![NONE],
            sphere_offsets: vec![0, 1],
            table: HashTable::new(),
            hasher,
            neighbors: Vec::new(),
        };
        let h = ball.hasher.hash_one(&ball.elements[0]);
        ball.table.insert_unique(h, 0, |_| h);

        for k in 1..=radius {
            let prev = ball.sphere_offsets[k as usize - 1]..ball.sphere_offsets[k as usize];
            let mut sphere: Vec<(Element, (u32, u32))> = prev
                .into_par_iter()
                .map(|p| {
                    let mut out = Vec::new();
                    for (si, s) in gens.members().iter().enumerate() {
                        let e = group.mul(&ball.elements[p], s)?;
                        if ball.index_of(&e).is_none() {
                            out.push((e, (p as u32, si as u32)));
                        }
                    }
                    Ok(out)
                })
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .flatten()
                .collect();
            // keep the first discovery of each element
            sphere.par_sort_unstable();
            sphere.dedup_by(|a, b| a.0 == b.0);
            if ball.elements.len() + sphere.len() > cap {
                return Err(Error::MemoryBudgetExceeded { cap, radius: k });
            }
            for (e, (p, s)) in sphere {
                let idx = ball.elements.len() as u32;
                let h = ball.hasher.hash_one(&e);
                let elements = &ball.elements;
                let hasher = &ball.hasher;
                ball.table.insert_unique(h, idx, |&i| hasher.hash_one(&elements[i as usize]));
                ball.elements.push(e);
                ball.dist.push(k);
                ball.parent.push(p);
                ball.parent_gen.push(s);
            }
            ball.sphere_offsets.push(ball.elements.len());
        }

        let n_gens = gens.len();
        let neighbors: Vec<u32> = (0..ball.elements.len())
            .into_par_iter()
            .flat_map_iter(|i| {
                let ball = &ball;
                (0..n_gens).map(move |s| {
                    let e =
                        ball.group.mul(&ball.elements[i], &ball.gens.members()[s]).expect("generators checked above");
                    ball.index_of(&e).map_or(NONE, |j| j as u32)
                })
            })
            .collect();
        ball.neighbors = neighbors;
        Ok(ball)
    }

    pub fn group(&self) -> &Group {
        &self.group
    }

    pub fn gens(&self) -> &GeneratingSet {
        &self.gens
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn element(&self, i: usize) -> &Element {
        &self.elements[i]
    }

    pub fn elements(&self) -> &[Element] {
        &self.elements
    }

    pub fn index_of(&self, x: &Element) -> Option<usize> {
        let h = self.hasher.hash_one(x);
        self.table.find(h, |&i| self.elements[i as usize] == *x).map(|&i| i as usize)
    }

    fn require(&self, x: &Element) -> Result<usize> {
        self.index_of(x).ok_or(Error::OutOfBall { radius: self.radius })
    }

    /// BFS predecessor of element `i` and the generator leading from it.
    pub fn parent(&self, i: usize) -> Option<(usize, usize)> {
        (self.parent[i] != NONE).then(|| (self.parent[i] as usize, self.parent_gen[i] as usize))
    }

    /// Index of `x_i * s`, if inside the ball.
    pub fn step(&self, i: usize, s: usize) -> Option<usize> {
        let j = self.neighbors[i * self.gens.len() + s];
        (j != NONE).then_some(j as usize)
    }

    /// Word length `|x|_S`.
    pub fn distance_in_ball(&self, x: &Element) -> Result<u32> {
        Ok(self.dist[self.require(x)?])
    }

    /// `d(x, y) = |x^-1 y|`, available when `|x^-1 y| <= radius`.
    pub fn distance(&self, x: &Element, y: &Element) -> Result<u32> {
        let z = self.group.mul(&self.group.inverse(x), y)?;
        self.distance_in_ball(&z)
    }

    /// Geodesic word (as generator indices) from the identity to `x`,
    /// following BFS parents.
    pub fn geodesic_to(&self, x: &Element) -> Result<Vec<usize>> {
        Ok(self.geodesic_to_index(self.require(x)?))
    }

    pub fn geodesic_to_index(&self, mut i: usize) -> Vec<usize> {
        let mut word = Vec::with_capacity(self.dist[i] as usize);
        while let Some((p, s)) = self.parent(i) {
            word.push(s);
            i = p;
        }
        word.reverse();
        word
    }

    /// Ball indices of the prefix endpoints of `word`, starting at `start`,
    /// or `None` once the walk leaves the ball.
    pub fn walk_from(&self, start: usize, word: &[usize]) -> Option<Vec<usize>> {
        let mut out = Vec::with_capacity(word.len() + 1);
        out.push(start);
        let mut cur = start;
        for &s in word {
            cur = self.step(cur, s)?;
            out.push(cur);
        }
        Some(out)
    }

    /// Checks `d(p_m, p_k) = k - m` for every pair of prefix endpoints.
    pub fn verify_geodesic(&self, word: &[usize]) -> Result<bool> {
        let mut points = Vec::with_capacity(word.len() + 1);
        let mut cur = self.group.identity();
        points.push(cur.clone());
        for &s in word {
            let g = self
                .gens
                .members()
                .get(s)
                .ok_or_else(|| Error::InvalidSpec(format!("generator index {s} out of range")))?;
            cur = self.group.mul(&cur, g)?;
            self.require(&cur)?;
            points.push(cur.clone());
        }
        let inverses: Vec<Element> = points.iter().map(|p| self.group.inverse(p)).collect();
        for (m, inv) in inverses.iter().enumerate() {
            for (k, pk) in points.iter().enumerate().skip(m + 1) {
                let z = self.group.mul(inv, pk)?;
                if self.distance_in_ball(&z)? as usize != k - m {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// Prefix tree of all finite geodesics from the identity of length at most
    /// `depth`.
    pub fn geodesic_tree(&self, depth: u32) -> Result<GeodesicTree> {
        self.geodesic_tree_with_cap(depth, DEFAULT_ELEMENT_CAP)
    }

    pub fn geodesic_tree_with_cap(&self, depth: u32, cap: usize) -> Result<GeodesicTree> {
        if depth > self.radius {
            return Err(Error::HorizonTooSmall { horizon: self.radius, needed: depth });
        }
        let mut nodes = vec![TreeNode { point: 0, parent: NONE, generator: NONE, depth: 0, horizon: 0 }];
        let mut level = 0..1;
        for t in 0..depth {
            let start = nodes.len();
            for n in level.clone() {
                let p = nodes[n].point as usize;
                for s in 0..self.gens.len() {
                    if let Some(q) = self.step(p, s) {
                        if self.dist[q] == t + 1 {
                            nodes.push(TreeNode {
                                point: q as u32,
                                parent: n as u32,
                                generator: s as u32,
                                depth: t + 1,
                                horizon: t + 1,
                            });
                        }
                    }
                }
                if nodes.len() > cap {
                    return Err(Error::MemoryBudgetExceeded { cap, radius: t + 1 });
                }
            }
            level = start..nodes.len();
        }
        for n in (1..nodes.len()).rev() {
            let (p, h) = (nodes[n].parent as usize, nodes[n].horizon);
            nodes[p].horizon = nodes[p].horizon.max(h);
        }
        Ok(GeodesicTree { nodes, depth })
    }
}

impl std::fmt::Debug for Ball {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Ball")
            .field("group", &self.group.name())
            .field("generators", &self.gens.len())
            .field("radius", &self.radius)
            .field("elements", &self.elements.len())
            .finish()
    }
}

impl PointedSpace for Ball {
    fn point_count(&self) -> usize {
        self.elements.len()
    }

    fn norm(&self, p: usize) -> u32 {
        self.dist[p]
    }

    fn max_radius(&self) -> u32 {
        self.radius
    }

    fn sphere_offsets(&self) -> &[usize] {
        &self.sphere_offsets
    }

    fn neighbors_into(&self, p: usize, out: &mut Vec<usize>) {
        let n = self.gens.len();
        out.extend(self.neighbors[p * n..(p + 1) * n].iter().filter(|&&j| j != NONE).map(|&j| j as usize));
    }

    /// Uses left-invariance: `d(x, y) = |x^-1 y|`.
    fn distances_to_ball(&self, x: usize, r: u32) -> Result<Vec<u32>> {
        let needed = self.dist[x] + r;
        if needed > self.radius {
            return Err(Error::HorizonTooSmall { horizon: self.radius, needed });
        }
        let x_inv = self.group.inverse(&self.elements[x]);
        (0..self.ball_len(r))
            .map(|y| {
                let z = self.group.mul(&x_inv, &self.elements[y])?;
                self.distance_in_ball(&z)
            })
            .collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TreeNode {
    /// Ball index of the node's endpoint.
    pub point: u32,
    parent: u32,
    generator: u32,
    pub depth: u32,
    /// Deepest descendant depth within the tree.
    pub horizon: u32,
}

/// Prefix tree of finite geodesics from the identity.
#[derive(Clone, Debug)]
pub struct GeodesicTree {
    nodes: Vec<TreeNode>,
    depth: u32,
}

impl GeodesicTree {
    pub fn depth(&self) -> u32 {
        self.depth
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn count_at_depth(&self, t: u32) -> usize {
        self.nodes.iter().filter(|n| n.depth == t).count()
    }

    pub fn parent(&self, n: usize) -> Option<usize> {
        (self.nodes[n].parent != NONE).then_some(self.nodes[n].parent as usize)
    }

    pub fn children(&self, n: usize) -> impl Iterator<Item = usize> + '_ {
        // children are contiguous and follow their parent in BFS order
        (n + 1..self.nodes.len()).filter(move |&c| self.nodes[c].parent as usize == n)
    }

    /// Generator indices along the root-to-node path.
    pub fn word(&self, mut n: usize) -> Vec<usize> {
        let mut w = Vec::new();
        while let Some(p) = self.parent(n) {
            w.push(self.nodes[n].generator as usize);
            n = p;
        }
        w.reverse();
        w
    }

    /// Ball indices along the root-to-node path.
    pub fn branch(&self, mut n: usize) -> Vec<usize> {
        let mut b = vec![self.nodes[n].point as usize];
        while let Some(p) = self.parent(n) {
            n = p;
            b.push(self.nodes[n].point as usize);
        }
        b.reverse();
        b
    }

    /// Whether the node has a descendant at depth `h`.
    pub fn is_ray_viable(&self, n: usize, h: u32) -> bool {
        self.nodes[n].horizon >= h
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::{symmetrize_generators, Family, Word};

    fn ball(family: &str, extra: &[&str], r: u32) -> Ball {
        let g = Group::new(family.parse().unwrap()).unwrap();
        let words: Vec<Word> = extra.iter().map(|w| w.parse().unwrap()).collect();
        let s = symmetrize_generators(&g, &words, true).unwrap();
        Ball::grow(&g, &s, r).unwrap()
    }

    #[test]
    fn integer_line() {
        let b = ball("Z", &[], 3);
        assert_eq!(b.len(), 7);
        assert_eq!(b.sphere_sizes(), vec![1, 2, 2, 2]);
        let minus3 = Element::Vector([-3].into_iter().collect());
        assert_eq!(b.distance_in_ball(&minus3).unwrap(), 3);
        assert_eq!(b.distance_in_ball(&b.group().identity()).unwrap(), 0);
        // ties broken by canonical key
        assert_eq!(b.element(1), &Element::Vector([-1].into_iter().collect()));
    }

    #[test]
    fn lattice_and_free_group_spheres() {
        let b = ball("Z^2", &[], 5);
        assert_eq!(b.sphere_sizes(), vec![1, 4, 8, 12, 16, 20]);
        let f = ball("F2", &[], 5);
        assert_eq!(f.sphere_sizes(), vec![1, 4, 12, 36, 108, 324]);
        let d = ball("Dinf", &[], 3);
        assert_eq!(d.sphere_sizes(), vec![1, 2, 2, 2]);
    }

    #[test]
    fn heisenberg_commutator_length() {
        let b = ball("Heis", &[], 4);
        assert_eq!(b.distance_in_ball(&Element::Heisenberg([0, 0, 1])).unwrap(), 4);
    }

    #[test]
    fn out_of_ball() {
        let b = ball("Z", &[], 3);
        let far = Element::Vector([4].into_iter().collect());
        assert_eq!(b.distance_in_ball(&far), Err(Error::OutOfBall { radius: 3 }));
        assert!(b.geodesic_to(&far).is_err());
    }

    #[test]
    fn memory_cap() {
        let g = Group::new(Family::Free(2)).unwrap();
        let s = GeneratingSet::standard(&g);
        assert_eq!(
            Ball::grow_with_cap(&g, &s, 6, 100).unwrap_err(),
            Error::MemoryBudgetExceeded { cap: 100, radius: 4 }
        );
    }

    #[test]
    fn geodesic_words() {
        let b = ball("Z", &[], 3);
        let three = Element::Vector([3].into_iter().collect());
        let w = b.geodesic_to(&three).unwrap();
        assert_eq!(w, vec![0, 0, 0]);
        assert!(b.geodesic_to(&b.group().identity()).unwrap().is_empty());

        let d = ball("Dinf", &[], 6);
        let abab = d.group().eval(&"abab".parse().unwrap()).unwrap();
        let w = d.geodesic_to(&abab).unwrap();
        assert_eq!(d.gens().spell(&w).to_string(), "abab");
    }

    #[test]
    fn verify_geodesic_examples() {
        let b = ball("Z", &[], 3);
        assert!(b.verify_geodesic(&[]).unwrap());
        assert!(!b.verify_geodesic(&[0, 1]).unwrap());
        let d = ball("Dinf", &[], 4);
        assert!(d.verify_geodesic(&[0, 1, 0]).unwrap());
        assert!(!d.verify_geodesic(&[0, 0]).unwrap());
    }

    #[test]
    fn every_geodesic_to_verifies() {
        for fam in ["Z^2", "Heis", "Dinf", "Z x C3"] {
            let b = ball(fam, &[], 5);
            for i in 0..b.len() {
                let w = b.geodesic_to_index(i);
                assert_eq!(w.len() as u32, b.norm(i));
                assert!(b.verify_geodesic(&w).unwrap(), "{fam} {}", b.element(i));
            }
        }
    }

    #[test]
    fn tree_counts() {
        let z = ball("Z", &[], 3);
        let t = z.geodesic_tree(3).unwrap();
        assert_eq!((0..=3).map(|d| t.count_at_depth(d)).collect::<Vec<_>>(), vec![1, 2, 2, 2]);

        let f = ball("F2", &[], 3);
        let t = f.geodesic_tree(2).unwrap();
        assert_eq!(t.children(0).count(), 4);
        for c in t.children(0).collect::<Vec<_>>() {
            assert_eq!(t.children(c).count(), 3);
        }

        let z2 = ball("Z^2", &[], 3);
        let t = z2.geodesic_tree(2).unwrap();
        assert_eq!(t.count_at_depth(2), 12);
        for n in 0..t.len() {
            assert_eq!(z2.norm(t.nodes()[n].point as usize), t.nodes()[n].depth);
            assert!(z2.verify_geodesic(&t.word(n)).unwrap());
        }
        assert!(t.is_ray_viable(0, 2));
    }

    #[test]
    fn tree_horizon_marks_dead_ends() {
        // Z with S = {±2, ±3}: the element 1 has length 2 and no neighbor of length 3
        let g = Group::new(Family::FreeAbelian(1)).unwrap();
        let s = symmetrize_generators(&g, &["aa".parse().unwrap(), "aaa".parse().unwrap()], false).unwrap();
        let b = Ball::grow(&g, &s, 5).unwrap();
        let t = b.geodesic_tree(4).unwrap();
        let one = b.index_of(&Element::Vector([1].into_iter().collect())).unwrap();
        let dead: Vec<usize> = (0..t.len()).filter(|&n| t.nodes()[n].point as usize == one).collect();
        assert!(!dead.is_empty());
        assert!(dead.iter().all(|&n| t.nodes()[n].horizon == 2 && !t.is_ray_viable(n, 3)));
        assert!(t.is_ray_viable(0, 4));
    }
}
