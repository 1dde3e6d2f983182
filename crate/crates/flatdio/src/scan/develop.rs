//! Saddle connection enumeration by outward chart development.
//!
//! From every corner of every singularity, triangles are developed into the
//! plane across shared edges (translations only). A search cone tracks the
//! directions that still see the current entry edge through all previous
//! crossings; a developed apex strictly inside the cone and within the
//! length bound is a saddle connection, and it splits the cone in two.
//! Development is pruned once the entry edge moves past the length bound,
//! so the explored region is the disk of radius L around the source.
//!
//! Connections along triangulation edges lie on cone boundaries by
//! construction and are collected directly from the edge list; rays through
//! an intermediate singularity stay excluded because cone boundaries are
//! open.

use super::tri::Triangulation;
use super::{SaddleConnection, ScanError};
use crate::geom::PlanarVector;

/// Relative tolerance deciding "on the cone boundary": collinear within
/// 1e-9 of the spanned area counts as parallel, matching the direction
/// deduplication tolerance.
const CONE_EPS: f64 = 1e-9;

struct Frame {
    tri: usize,
    entry_edge: usize,
    /// Developed positions of the three triangle corners.
    corners: [PlanarVector; 3],
    lo: PlanarVector,
    hi: PlanarVector,
}

fn strictly_inside(lo: PlanarVector, hi: PlanarVector, d: PlanarVector) -> bool {
    lo.cross(d) > CONE_EPS * lo.norm() * d.norm() && d.cross(hi) > CONE_EPS * d.norm() * hi.norm()
}

fn dist_origin_to_segment(a: PlanarVector, b: PlanarVector) -> f64 {
    let ab = b - a;
    let t = ((-a.x) * ab.x + (-a.y) * ab.y) / ab.norm_sq();
    let t = t.clamp(0.0, 1.0);
    (a + ab.scale(t)).norm()
}

/// Distance from the origin to the part of segment [p, q] visible inside
/// the cone (every cone ray crosses the entry segment, so the clip is well
/// defined). Returns infinity when the clipped part is empty.
fn cone_clipped_distance(
    p: PlanarVector,
    q: PlanarVector,
    lo: PlanarVector,
    hi: PlanarVector,
) -> f64 {
    let ray_param = |r: PlanarVector| -> Option<f64> {
        let fp = r.cross(p);
        let fq = r.cross(q);
        if (fp - fq).abs() < 1e-300 {
            None
        } else {
            Some(fp / (fp - fq))
        }
    };
    let mut s0 = 0.0f64;
    let mut s1 = 1.0f64;
    // Order along the segment is q-side (lo) first or second; just clamp by
    // both ray crossings symmetrically.
    let mut bounds = Vec::with_capacity(2);
    if let Some(s) = ray_param(lo) {
        bounds.push(s);
    }
    if let Some(s) = ray_param(hi) {
        bounds.push(s);
    }
    if bounds.len() == 2 {
        s0 = bounds[0].min(bounds[1]).max(0.0);
        s1 = bounds[0].max(bounds[1]).min(1.0);
        if s0 > s1 {
            return f64::INFINITY;
        }
    }
    let a = p + (q - p).scale(s0);
    let b = p + (q - p).scale(s1);
    dist_origin_to_segment(a, b)
}

pub(super) struct Developer<'a> {
    pub tr: &'a Triangulation,
    pub budget: u64,
    pub nodes: u64,
    pub record_paths: bool,
}

impl<'a> Developer<'a> {
    /// All oriented saddle connections with |hol| <= bound.
    pub fn enumerate(&mut self, bound: f64) -> Result<Vec<SaddleConnection>, ScanError> {
        let mut out = Vec::new();

        // Triangulation edges are saddle connections; each unordered chart
        // edge pair contributes its two orientations.
        for t in 0..self.tr.tris.len() {
            for e in 0..3 {
                let (t2, e2) = self.tr.neighbor[t][e];
                if (t, e) > (t2, e2) {
                    continue;
                }
                let hol = self.tr.edge_vector(t, e);
                if hol.norm() > bound {
                    continue;
                }
                let s_start = self.tr.corner_sing[t][e];
                let s_end = self.tr.corner_sing[t][(e + 1) % 3];
                out.push(SaddleConnection {
                    holonomy: hol,
                    start: s_start,
                    end: s_end,
                    crossings: 0,
                    path: if self.record_paths { Some(vec![]) } else { None },
                });
                out.push(SaddleConnection {
                    holonomy: -hol,
                    start: s_end,
                    end: s_start,
                    crossings: 0,
                    path: if self.record_paths { Some(vec![]) } else { None },
                });
            }
        }

        // Interior-of-wedge connections via cone development.
        for t in 0..self.tr.tris.len() {
            for c in 0..3 {
                self.explore_corner(t, c, bound, &mut out)?;
            }
        }
        Ok(out)
    }

    fn explore_corner(
        &mut self,
        tri: usize,
        corner: usize,
        bound: f64,
        out: &mut Vec<SaddleConnection>,
    ) -> Result<(), ScanError> {
        let source = self.tr.corner_sing[tri][corner];
        let origin = self.tr.tris[tri][corner];
        let a = self.tr.tris[tri][(corner + 1) % 3] - origin;
        let b = self.tr.tris[tri][(corner + 2) % 3] - origin;

        // Path bookkeeping: a stack of (frame, crossing list) when paths are
        // recorded; otherwise only crossing counts travel along.
        let mut stack: Vec<(Frame, u32, Option<Vec<(usize, usize)>>)> = Vec::new();
        let first = self.cross_into(
            Frame {
                tri,
                entry_edge: (corner + 1) % 3,
                corners: [
                    self.tr.tris[tri][0] - origin,
                    self.tr.tris[tri][1] - origin,
                    self.tr.tris[tri][2] - origin,
                ],
                lo: a,
                hi: b,
            },
            (corner + 1) % 3,
            a,
            b,
        );
        stack.push((first, 1, self.record_paths.then(|| vec![(tri, (corner + 1) % 3)])));

        while let Some((frame, depth, path)) = stack.pop() {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(ScanError::BudgetExceeded { nodes: self.nodes });
            }

            let e = frame.entry_edge;
            let p = frame.corners[e];
            let q = frame.corners[(e + 1) % 3];
            if cone_clipped_distance(p, q, frame.lo, frame.hi) > bound {
                continue;
            }
            let apex_corner = (e + 2) % 3;
            let w = frame.corners[apex_corner];

            let w_inside = strictly_inside(frame.lo, frame.hi, w);
            if w_inside {
                if w.norm() <= bound {
                    out.push(SaddleConnection {
                        holonomy: w,
                        start: source,
                        end: self.tr.corner_sing[frame.tri][apex_corner],
                        crossings: depth,
                        path: path.clone(),
                    });
                }
                // Cone (lo, w) exits through the edge after the entry edge
                // (entry-end corner to apex); (w, hi) through the other.
                let e_low = (e + 1) % 3;
                let e_high = (e + 2) % 3;
                let low = self.cross_into(
                    clone_frame(&frame),
                    e_low,
                    frame.lo,
                    w,
                );
                let high = self.cross_into(clone_frame(&frame), e_high, w, frame.hi);
                let mut path_low = path.clone();
                if let Some(pl) = path_low.as_mut() {
                    pl.push((frame.tri, e_low));
                }
                let mut path_high = path;
                if let Some(ph) = path_high.as_mut() {
                    ph.push((frame.tri, e_high));
                }
                stack.push((low, depth + 1, path_low));
                stack.push((high, depth + 1, path_high));
            } else {
                // Entire cone passes one side of the apex.
                let exit = if frame.lo.cross(w) <= CONE_EPS * frame.lo.norm() * w.norm() {
                    // Apex at or clockwise of lo: cone exits via (apex, entry-start).
                    (e + 2) % 3
                } else {
                    (e + 1) % 3
                };
                let next = self.cross_into(clone_frame(&frame), exit, frame.lo, frame.hi);
                let mut p2 = path;
                if let Some(pl) = p2.as_mut() {
                    pl.push((frame.tri, exit));
                }
                stack.push((next, depth + 1, p2));
            }
        }
        Ok(())
    }

    /// Develop across edge `exit` of `frame.tri` and build the child frame
    /// with the given cone.
    fn cross_into(&self, frame: Frame, exit: usize, lo: PlanarVector, hi: PlanarVector) -> Frame {
        let (t2, e2) = self.tr.neighbor[frame.tri][exit];
        // Developed offset of the neighbor chart: x_chart2 = x_chart + shift,
        // so positions develop with offset' = offset - shift.
        let offset = frame.corners[0] - self.tr.tris[frame.tri][0];
        let offset2 = offset - self.tr.shift[frame.tri][exit];
        let corners = [
            self.tr.tris[t2][0] + offset2,
            self.tr.tris[t2][1] + offset2,
            self.tr.tris[t2][2] + offset2,
        ];
        Frame { tri: t2, entry_edge: e2, corners, lo, hi }
    }
}

fn clone_frame(f: &Frame) -> Frame {
    Frame {
        tri: f.tri,
        entry_edge: f.entry_edge,
        corners: f.corners,
        lo: f.lo,
        hi: f.hi,
    }
}
