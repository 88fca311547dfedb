//! Plain undirected graphs with a base point: groves, edge-list input, and a
//! [`PointedSpace`] view so the boundary code runs on them unchanged.
//!
//! Without left-invariance, distances from annulus vertices come from one BFS
//! per vertex over the whole graph.

use std::collections::VecDeque;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::horo::{annulus_boundary_approx, AnnulusParams, BoundaryApprox};
use crate::space::PointedSpace;

/// Default cap on the number of vertices accepted from input.
pub const DEFAULT_VERTEX_CAP: usize = 5_000_000;

const UNSEEN: u32 = u32::MAX;

/// Undirected simple graph, connected from its base point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    base: usize,
}

impl Graph {
    /// Builds a graph from an edge list; duplicate edges are merged.
    pub fn from_edges(vertices: usize, edges: &[(usize, usize)], base: usize) -> Result<Graph> {
        let mut adjacency = vec![Vec::new(); vertices];
        for &(u, v) in edges {
            if u >= vertices || v >= vertices {
                return Err(Error::InvalidSpec(format!("edge {u} {v} names a missing vertex")));
            }
            if u == v {
                return Err(Error::InvalidSpec(format!("self-loop at {u}")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        let g = Graph { adjacency, base };
        if base >= vertices {
            return Err(Error::InvalidSpec(format!("base point {base} is not a vertex")));
        }
        if let Some(v) = g.bfs(base).iter().position(|&d| d == UNSEEN) {
            return Err(Error::InvalidSpec(format!("vertex {v} is not reachable from the base point")));
        }
        Ok(g)
    }

    /// The 1-skeleton of a pointed space, vertices numbered as its points.
    pub fn from_space<S: PointedSpace + ?Sized>(space: &S) -> Result<Graph> {
        let mut edges = Vec::new();
        let mut nbrs = Vec::new();
        for p in 0..space.point_count() {
            nbrs.clear();
            space.neighbors_into(p, &mut nbrs);
            edges.extend(nbrs.iter().filter(|&&q| q > p).map(|&q| (p, q)));
        }
        Graph::from_edges(space.point_count(), &edges, 0)
    }

    pub fn vertex_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    /// Distances from `source` to every vertex; `u32::MAX` if unreachable.
    pub fn bfs(&self, source: usize) -> Vec<u32> {
        let mut dist = vec![UNSEEN; self.adjacency.len()];
        let mut queue = VecDeque::from([source]);
        dist[source] = 0;
        while let Some(u) = queue.pop_front() {
            for &v in &self.adjacency[u] {
                if dist[v] == UNSEEN {
                    dist[v] = dist[u] + 1;
                    queue.push_back(v);
                }
            }
        }
        dist
    }

    /// Parses the edge-list format: one `u v` pair per line, `#base v` sets
    /// the base point (default 0), other `#` lines are comments.
    pub fn parse_edge_list(text: &str, cap: usize) -> Result<Graph> {
        let mut edges = Vec::new();
        let mut base = 0;
        let mut vertices = 0;
        for (n, line) in text.lines().enumerate() {
            let line = line.trim();
            let bad = || Error::InvalidSpec(format!("line {}: cannot parse {line:?}", n + 1));
            if let Some(rest) = line.strip_prefix("#base") {
                base = rest.trim().parse().map_err(|_| bad())?;
                continue;
            }
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace().map(str::parse::<usize>);
            let (Some(Ok(u)), Some(Ok(v)), None) = (it.next(), it.next(), it.next()) else {
                return Err(bad());
            };
            vertices = vertices.max(u + 1).max(v + 1);
            if vertices > cap {
                return Err(Error::MemoryBudgetExceeded { cap, radius: 0 });
            }
            edges.push((u, v));
        }
        Graph::from_edges(vertices.max(base + 1), &edges, base)
    }

    /// Edge-list text accepted by [`Graph::parse_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("#base {}\n", self.base);
        for (u, list) in self.adjacency.iter().enumerate() {
            for &v in list.iter().filter(|&&v| v > u) {
                out.push_str(&format!("{u} {v}\n"));
            }
        }
        out
    }
}

/// Shape of the finite graphs hung off the spine of a grove.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockFamily {
    Complete,
    Path,
    Cycle,
}

impl FromStr for BlockFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "complete" => Ok(BlockFamily::Complete),
            "path" => Ok(BlockFamily::Path),
            "cycle" => Ok(BlockFamily::Cycle),
            _ => Err(Error::InvalidSpec(format!("unknown block family {s:?}"))),
        }
    }
}

impl fmt::Display for BlockFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BlockFamily::Complete => "complete",
            BlockFamily::Path => "path",
            BlockFamily::Cycle => "cycle",
        })
    }
}

/// Size of block `n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BlockSizes {
    Uniform(usize),
    /// `n + 1`.
    Linear,
    /// `2^n`.
    Pow2,
    Explicit(Vec<usize>),
}

impl BlockSizes {
    pub fn size(&self, n: usize) -> Result<usize> {
        match self {
            BlockSizes::Uniform(k) => Ok(*k),
            BlockSizes::Linear => Ok(n + 1),
            BlockSizes::Pow2 => 1usize
                .checked_shl(n as u32)
                .filter(|_| n < 40)
                .ok_or_else(|| Error::InvalidSpec(format!("block {n} is too large"))),
            BlockSizes::Explicit(v) => {
                v.get(n).copied().ok_or_else(|| Error::InvalidSpec(format!("no size given for block {n}")))
            }
        }
    }
}

impl FromStr for BlockSizes {
    type Err = Error;

    /// `linear`, `pow2`, a single size, or a comma-separated list.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidSpec(format!("cannot parse block sizes {s:?}"));
        match s {
            "linear" => Ok(BlockSizes::Linear),
            "pow2" => Ok(BlockSizes::Pow2),
            _ if s.contains(',') => Ok(BlockSizes::Explicit(
                s.split(',').map(|t| t.trim().parse().map_err(|_| bad())).collect::<Result<_>>()?,
            )),
            _ => Ok(BlockSizes::Uniform(s.trim().parse().map_err(|_| bad())?)),
        }
    }
}

/// A finite block: vertex count and edges on `0..vertices`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Block {
    pub vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

impl Block {
    pub fn new(family: BlockFamily, size: usize) -> Result<Block> {
        if size == 0 {
            return Err(Error::InvalidSpec("blocks need at least one vertex".into()));
        }
        let edge_count = if family == BlockFamily::Complete { size * (size - 1) / 2 } else { size };
        if size.max(edge_count) > DEFAULT_VERTEX_CAP {
            return Err(Error::MemoryBudgetExceeded { cap: DEFAULT_VERTEX_CAP, radius: 0 });
        }
        let edges = match family {
            BlockFamily::Complete => (0..size).flat_map(|i| (i + 1..size).map(move |j| (i, j))).collect(),
            BlockFamily::Path => (1..size).map(|i| (i - 1, i)).collect(),
            BlockFamily::Cycle if size < 3 => {
                return Err(Error::InvalidSpec(format!("cycle blocks need 3 vertices, got {size}")))
            }
            BlockFamily::Cycle => (0..size).map(|i| (i, (i + 1) % size)).collect(),
        };
        Ok(Block { vertices: size, edges })
    }

    /// Largest distance between two block vertices.
    pub fn diameter(&self) -> Result<u32> {
        let g = Graph::from_edges(self.vertices, &self.edges, 0)?;
        Ok((0..self.vertices).map(|v| *g.bfs(v).iter().max().unwrap_or(&0)).max().unwrap_or(0))
    }
}

/// A spine `0, 1, ..., N-1` with block `n` attached to spine vertex `n`
/// through its vertex `x_n`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GroveSpec {
    /// One entry per spine vertex; `None` leaves the spine vertex bare.
    pub blocks: Vec<Option<Block>>,
    /// Attachment vertex `x_n` inside block `n`.
    pub attach: Vec<usize>,
    /// Mirror the spine and blocks to negative indices.
    pub two_sided: bool,
}

impl GroveSpec {
    /// `n` blocks of one family, each attached through its vertex 0.
    pub fn uniform(family: BlockFamily, sizes: &BlockSizes, n: usize) -> Result<GroveSpec> {
        let mut blocks = Vec::with_capacity(n);
        let mut total = 0;
        for i in 0..n {
            let b = Block::new(family, sizes.size(i)?)?;
            total += b.vertices + b.edges.len();
            if total > DEFAULT_VERTEX_CAP {
                return Err(Error::MemoryBudgetExceeded { cap: DEFAULT_VERTEX_CAP, radius: 0 });
            }
            blocks.push(Some(b));
        }
        Ok(GroveSpec { blocks, attach: vec![0; n], two_sided: false })
    }

    /// The spine alone: a ray, or a line when two-sided.
    pub fn bare(n: usize, two_sided: bool) -> GroveSpec {
        GroveSpec { blocks: vec![None; n], attach: vec![0; n], two_sided }
    }

    pub fn spine_len(&self) -> usize {
        self.blocks.len()
    }

    /// Spine length needed at radius `r`: more than `3r` plus the largest
    /// block diameter, so the annulus stays clear of the truncation.
    pub fn min_spine_len(&self, r: u32) -> Result<usize> {
        let mut diameter = 0;
        let mut last: Option<&Block> = None;
        for b in self.blocks.iter().flatten() {
            if last != Some(b) {
                diameter = diameter.max(b.diameter()?);
                last = Some(b);
            }
        }
        Ok((3 * r + diameter) as usize + 1)
    }

    pub fn check_frontier(&self, r: u32) -> Result<()> {
        let needed = self.min_spine_len(r)?;
        if self.spine_len() < needed {
            return Err(Error::Config(format!(
                "grove needs at least {needed} blocks at radius {r}, got {}",
                self.spine_len()
            )));
        }
        Ok(())
    }
}

/// Vertex layout of a built grove.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Grove {
    pub graph: Graph,
    /// `spine[i]` is spine vertex `i`; with two sides, `spine_neg[i]` is `-i`.
    pub spine: Vec<usize>,
    pub spine_neg: Vec<usize>,
    /// `(spine index, sign, first vertex)` of each block copy.
    pub block_starts: Vec<(usize, i8, usize)>,
}

impl Grove {
    /// Block copy holding vertex `v`, if any.
    pub fn block_of(&self, v: usize) -> Option<(usize, i8, usize)> {
        self.block_starts.iter().rev().find(|b| b.2 <= v).copied().filter(|_| v >= self.first_block_vertex())
    }

    fn first_block_vertex(&self) -> usize {
        self.spine.len() + self.spine_neg.len().saturating_sub(1)
    }
}

/// Builds the grove; the base point is spine vertex 0.
pub fn build_grove(spec: &GroveSpec) -> Result<Grove> {
    let n = spec.spine_len();
    if n < 2 {
        return Err(Error::InvalidSpec("a grove needs at least 2 spine vertices".into()));
    }
    if spec.attach.len() != n {
        return Err(Error::InvalidSpec("one attachment vertex per block is required".into()));
    }
    let spine: Vec<usize> = (0..n).collect();
    let spine_neg: Vec<usize> =
        if spec.two_sided { std::iter::once(0).chain(n..2 * n - 1).collect() } else { Vec::new() };
    let mut next = n + spine_neg.len().saturating_sub(1);
    let mut edges: Vec<(usize, usize)> = (1..n).map(|i| (i - 1, i)).collect();
    edges.extend((1..spine_neg.len()).map(|i| (spine_neg[i - 1], spine_neg[i])));

    let total: usize = spec.blocks.iter().flatten().map(|b| b.vertices + b.edges.len()).sum();
    if total > DEFAULT_VERTEX_CAP {
        return Err(Error::MemoryBudgetExceeded { cap: DEFAULT_VERTEX_CAP, radius: 0 });
    }
    let mut block_starts = Vec::new();
    for (i, (block, &x)) in spec.blocks.iter().zip(&spec.attach).enumerate() {
        let Some(block) = block else { continue };
        if x >= block.vertices {
            return Err(Error::InvalidSpec(format!("attachment vertex {x} outside block {i}")));
        }
        let mut anchors = vec![(spine[i], 1i8)];
        if spec.two_sided && i > 0 {
            anchors.push((spine_neg[i], -1));
        }
        for (anchor, sign) in anchors {
            block_starts.push((i, sign, next));
            edges.extend(block.edges.iter().map(|&(u, v)| (next + u, next + v)));
            edges.push((anchor, next + x));
            next += block.vertices;
        }
    }
    let graph = Graph::from_edges(next, &edges, 0).map_err(|e| match e {
        Error::InvalidSpec(m) => Error::InvalidSpec(format!("block graph is not connected: {m}")),
        e => e,
    })?;
    Ok(Grove { graph, spine, spine_neg, block_starts })
}

/// A graph viewed from its base point up to a horizon.
#[derive(Clone, Debug)]
pub struct GraphSpace {
    /// Adjacency in point order.
    adjacency: Vec<Vec<usize>>,
    norms: Vec<u32>,
    offsets: Vec<usize>,
    /// `vertex[p]` is the graph vertex of point `p`.
    vertex: Vec<usize>,
    horizon: u32,
}

impl GraphSpace {
    /// Orders vertices by `(distance to base, vertex id)`. The horizon
    /// defaults to the eccentricity of the base point.
    pub fn new(graph: &Graph, horizon: Option<u32>) -> Result<GraphSpace> {
        let dist = graph.bfs(graph.base());
        let ecc = *dist.iter().max().unwrap_or(&0);
        let horizon = horizon.unwrap_or(ecc);
        if horizon > ecc {
            return Err(Error::HorizonTooSmall { horizon: ecc, needed: horizon });
        }
        let mut vertex: Vec<usize> = (0..graph.vertex_count()).collect();
        vertex.sort_by_key(|&v| (dist[v], v));
        let mut point = vec![0; vertex.len()];
        for (p, &v) in vertex.iter().enumerate() {
            point[v] = p;
        }
        let adjacency = vertex
            .iter()
            .map(|&v| {
                let mut l: Vec<usize> = graph.neighbors(v).iter().map(|&w| point[w]).collect();
                l.sort_unstable();
                l
            })
            .collect();
        let norms: Vec<u32> = vertex.iter().map(|&v| dist[v]).collect();
        let offsets = (0..=horizon + 1).map(|k| norms.partition_point(|&d| d < k)).collect();
        Ok(GraphSpace { adjacency, norms, offsets, vertex, horizon })
    }

    pub fn vertex(&self, p: usize) -> usize {
        self.vertex[p]
    }

    pub fn point_of(&self, v: usize) -> Option<usize> {
        self.vertex.iter().position(|&w| w == v)
    }

    fn bfs(&self, source: usize, limit: usize) -> Vec<u32> {
        let mut dist = vec![UNSEEN; self.adjacency.len()];
        let mut queue = VecDeque::from([source]);
        dist[source] = 0;
        let mut remaining = limit - usize::from(source < limit);
        while let Some(u) = queue.pop_front() {
            if remaining == 0 {
                break;
            }
            for &v in &self.adjacency[u] {
                if dist[v] == UNSEEN {
                    dist[v] = dist[u] + 1;
                    if v < limit {
                        remaining -= 1;
                    }
                    queue.push_back(v);
                }
            }
        }
        dist.truncate(limit);
        dist
    }
}

impl PointedSpace for GraphSpace {
    fn point_count(&self) -> usize {
        self.adjacency.len()
    }

    fn norm(&self, p: usize) -> u32 {
        self.norms[p]
    }

    fn max_radius(&self) -> u32 {
        self.horizon
    }

    fn sphere_offsets(&self) -> &[usize] {
        &self.offsets
    }

    fn neighbors_into(&self, p: usize, out: &mut Vec<usize>) {
        out.extend_from_slice(&self.adjacency[p]);
    }

    fn distances_to_ball(&self, x: usize, r: u32) -> Result<Vec<u32>> {
        if x >= self.point_count() {
            return Err(Error::OutOfBall { radius: self.horizon });
        }
        Ok(self.bfs(x, self.ball_len(r)))
    }
}

/// Annulus surrogate of the horoboundary of a graph.
pub fn graph_boundary(graph: &Graph, r: u32, horizon: Option<u32>, window: u32) -> Result<BoundaryApprox> {
    let space = GraphSpace::new(graph, horizon)?;
    annulus_boundary_approx(&space, AnnulusParams::new(r).with_window(window))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SphereBound {
    pub busemann_count: usize,
    /// Radii of the spheres compared against.
    pub window: (u32, u32),
    pub min_sphere: usize,
    pub holds: bool,
    /// Spheres in the upper half of the range never exceed the largest
    /// sphere of the lower half.
    pub linear_growth: bool,
    /// `|B_R| / (R + 1)`, reported for linear growth only.
    pub growth_constant: Option<f64>,
}

/// Compares a Busemann-point count with the smallest of the last `window`
/// spheres below the horizon.
pub fn sphere_bound_check<S: PointedSpace + ?Sized>(space: &S, busemann_count: usize, window: u32) -> SphereBound {
    let h = space.max_radius();
    let lo = h.saturating_sub(window.max(1) - 1).max(1).min(h);
    let sizes = space.sphere_sizes();
    let min_sphere = (lo..=h).map(|k| sizes[k as usize]).min().unwrap_or(0);
    let half = (h as usize).div_ceil(2);
    let lower = sizes[1..=half.max(1).min(h as usize)].iter().max().copied().unwrap_or(0);
    let linear_growth = sizes[half + 1..=h as usize].iter().all(|&s| s <= lower);
    let growth_constant = linear_growth.then(|| space.ball_len(h) as f64 / (h as f64 + 1.0));
    SphereBound {
        busemann_count,
        window: (lo, h),
        min_sphere,
        holds: busemann_count <= min_sphere,
        linear_growth,
        growth_constant,
    }
}
