//! Base-pointed discrete metric spaces with points ordered by distance to the
//! base point.
//!
//! Both Cayley balls and general graphs implement [`PointedSpace`], so the
//! boundary machinery in [`crate::horo`] runs unchanged on either.

use std::ops::Range;

use crate::error::Result;

/// A finite window onto a graph metric around a base point.
///
/// Points are indexed `0..point_count()` in non-decreasing order of their
/// distance to the base point, which is point `0`. The ball of radius `r` is
/// therefore always the index prefix `0..ball_len(r)`.
pub trait PointedSpace: Sync {
    fn point_count(&self) -> usize;

    /// Distance from the base point.
    fn norm(&self, p: usize) -> u32;

    /// Largest radius up to which the space is known exactly.
    fn max_radius(&self) -> u32;

    /// `offsets[k]..offsets[k + 1]` is the sphere of radius `k`;
    /// length is `max_radius() + 2`.
    fn sphere_offsets(&self) -> &[usize];

    /// Appends the neighbors of `p` that lie inside the known window.
    fn neighbors_into(&self, p: usize, out: &mut Vec<usize>);

    /// Exact distances `d(x, y)` for every `y` in the ball of radius `r`.
    fn distances_to_ball(&self, x: usize, r: u32) -> Result<Vec<u32>>;

    fn ball_len(&self, r: u32) -> usize {
        let offs = self.sphere_offsets();
        offs[(r as usize + 1).min(offs.len() - 1)]
    }

    fn sphere(&self, r: u32) -> Range<usize> {
        let offs = self.sphere_offsets();
        let r = r as usize;
        if r + 1 >= offs.len() {
            let end = offs[offs.len() - 1];
            return end..end;
        }
        offs[r]..offs[r + 1]
    }

    fn sphere_sizes(&self) -> Vec<usize> {
        self.sphere_offsets().windows(2).map(|w| w[1] - w[0]).collect()
    }

    fn neighbors(&self, p: usize) -> Vec<usize> {
        let mut out = Vec::new();
        self.neighbors_into(p, &mut out);
        out
    }
}
