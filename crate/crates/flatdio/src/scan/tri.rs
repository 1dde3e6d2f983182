//! Triangulated charts of a translation surface.
//!
//! Every polygon of the presentation is ear-clipped in place (coordinates
//! are kept), so charts are triangles and every chart transition is a pure
//! translation. Diagonals added by the clipping are genuine saddle
//! connections and carry a zero transition.

use crate::geom::PlanarVector;
use crate::surface::TranslationSurface;

#[derive(Debug, thiserror::Error)]
pub enum TriError {
    #[error("ear clipping failed on polygon {0}")]
    EarClipFailed(usize),
}

#[derive(Clone, Debug)]
pub struct Triangulation {
    /// Triangle corner positions, counterclockwise, in the coordinates of
    /// the polygon the triangle came from.
    pub tris: Vec<[PlanarVector; 3]>,
    /// Original polygon of each triangle.
    pub tri_poly: Vec<usize>,
    /// neighbor[t][e] = (t', e'): edge e of t (corner e -> corner e+1) is
    /// identified with edge e' of t'.
    pub neighbor: Vec<[(usize, usize); 3]>,
    /// Point transfer across edge e of t: x in chart t maps to
    /// x + shift[t][e] in the neighbor chart.
    pub shift: Vec<[PlanarVector; 3]>,
    /// Singularity id at each triangle corner.
    pub corner_sing: Vec<[usize; 3]>,
    pub num_singularities: usize,
    /// Shortest triangulation edge; an upper bound for the systole.
    pub min_edge: f64,
    pub area: f64,
}

fn point_in_triangle_strict(p: PlanarVector, t: &[PlanarVector; 3], tol: f64) -> bool {
    let s0 = (t[1] - t[0]).cross(p - t[0]);
    let s1 = (t[2] - t[1]).cross(p - t[1]);
    let s2 = (t[0] - t[2]).cross(p - t[2]);
    s0 > tol && s1 > tol && s2 > tol
}

fn dist_point_segment(p: PlanarVector, a: PlanarVector, b: PlanarVector) -> f64 {
    let ab = b - a;
    let t = ((p - a).dot(ab) / ab.norm_sq()).clamp(0.0, 1.0);
    (p - (a + ab.scale(t))).norm()
}

/// Ear clipping returning triangles as index triples into the vertex loop.
fn ear_clip(loop_: &[PlanarVector]) -> Option<Vec<[usize; 3]>> {
    let n = loop_.len();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut tris = Vec::with_capacity(n - 2);
    let scale = {
        let mut d = 0.0f64;
        for v in loop_ {
            for w in loop_ {
                d = d.max((*v - *w).norm());
            }
        }
        d.max(1.0)
    };
    let mut guard = n * n + 16;
    while remaining.len() > 3 {
        guard = guard.checked_sub(1)?;
        let m = remaining.len();
        let mut clipped = false;
        for i in 0..m {
            let ia = remaining[(i + m - 1) % m];
            let ib = remaining[i];
            let ic = remaining[(i + 1) % m];
            let (a, b, c) = (loop_[ia], loop_[ib], loop_[ic]);
            // Strictly convex corner only; straight corners are skipped.
            if (b - a).cross(c - b) <= 1e-12 * scale * scale {
                continue;
            }
            // No remaining vertex inside the candidate ear, and none on the
            // open diagonal (a diagonal through a vertex is not a valid
            // saddle connection).
            let mut ok = true;
            for &j in &remaining {
                if j == ia || j == ib || j == ic {
                    continue;
                }
                let p = loop_[j];
                if point_in_triangle_strict(p, &[a, b, c], -1e-12 * scale * scale)
                    || dist_point_segment(p, a, c) < 1e-12 * scale
                {
                    ok = false;
                    break;
                }
            }
            if ok {
                tris.push([ia, ib, ic]);
                remaining.remove(i);
                clipped = true;
                break;
            }
        }
        if !clipped {
            return None;
        }
    }
    tris.push([remaining[0], remaining[1], remaining[2]]);
    Some(tris)
}

impl Triangulation {
    pub fn build(x: &TranslationSurface) -> Result<Triangulation, TriError> {
        let pres = &x.presentation;
        let mut tris = Vec::new();
        let mut tri_poly = Vec::new();
        let mut corner_vertex = Vec::new(); // (poly, original vertex) per corner

        // edge_owner[(poly, edge)] = (tri, tri_edge) for the boundary edges.
        let mut edge_owner = std::collections::HashMap::new();
        // Diagonal pairing inside one polygon, keyed by sorted vertex pair.
        let mut diagonal_owner: std::collections::HashMap<(usize, usize, usize), (usize, usize)> =
            std::collections::HashMap::new();
        let mut neighbor = Vec::new();
        let mut shift = Vec::new();

        for (pi, loop_) in pres.polygons.iter().enumerate() {
            let n = loop_.len();
            let idx_tris = ear_clip(loop_).ok_or(TriError::EarClipFailed(pi))?;
            for ids in idx_tris {
                let t = tris.len();
                tris.push([loop_[ids[0]], loop_[ids[1]], loop_[ids[2]]]);
                tri_poly.push(pi);
                corner_vertex.push([(pi, ids[0]), (pi, ids[1]), (pi, ids[2])]);
                neighbor.push([(usize::MAX, usize::MAX); 3]);
                shift.push([PlanarVector::ZERO; 3]);
                for e in 0..3 {
                    let va = ids[e];
                    let vb = ids[(e + 1) % 3];
                    if (va + 1) % n == vb {
                        // Original polygon edge va.
                        edge_owner.insert((pi, va), (t, e));
                    } else {
                        // Internal diagonal, shared with exactly one other
                        // triangle of the same polygon.
                        let key = (pi, va.min(vb), va.max(vb));
                        if let Some(&(t2, e2)) = diagonal_owner.get(&key) {
                            neighbor[t][e] = (t2, e2);
                            neighbor[t2][e2] = (t, e);
                            // Same chart: zero shift.
                        } else {
                            diagonal_owner.insert(key, (t, e));
                        }
                    }
                }
            }
        }

        // Wire the presentation pairings: point transfer is x -> x + delta
        // with delta = B' - A (end of the twin edge minus start of ours).
        for &((pi, ei), (pj, ej)) in &pres.pairings {
            let (ta, ea) = edge_owner[&(pi, ei)];
            let (tb, eb) = edge_owner[&(pj, ej)];
            neighbor[ta][ea] = (tb, eb);
            neighbor[tb][eb] = (ta, ea);
            let a_start = tris[ta][ea];
            let b_end = tris[tb][(eb + 1) % 3];
            shift[ta][ea] = b_end - a_start;
            let b_start = tris[tb][eb];
            let a_end = tris[ta][(ea + 1) % 3];
            shift[tb][eb] = a_end - b_start;
        }

        let corner_sing: Vec<[usize; 3]> = corner_vertex
            .iter()
            .map(|cs| {
                [
                    x.singularity_of_corner(cs[0].0, cs[0].1),
                    x.singularity_of_corner(cs[1].0, cs[1].1),
                    x.singularity_of_corner(cs[2].0, cs[2].1),
                ]
            })
            .collect();

        let mut min_edge = f64::INFINITY;
        let mut area = 0.0;
        for t in &tris {
            for e in 0..3 {
                min_edge = min_edge.min((t[(e + 1) % 3] - t[e]).norm());
            }
            area += 0.5 * (t[1] - t[0]).cross(t[2] - t[0]);
        }

        Ok(Triangulation {
            tris,
            tri_poly,
            neighbor,
            shift,
            corner_sing,
            num_singularities: x.singularities.len(),
            min_edge,
            area,
        })
    }

    pub fn edge_vector(&self, t: usize, e: usize) -> PlanarVector {
        self.tris[t][(e + 1) % 3] - self.tris[t][e]
    }

    /// Locate the triangle containing `p` inside polygon `poly`
    /// (boundary-inclusive; ties resolved to the first match).
    pub fn locate(&self, poly: usize, p: PlanarVector) -> Option<usize> {
        let scale = self.min_edge.max(1.0);
        for (t, tri) in self.tris.iter().enumerate() {
            if self.tri_poly[t] != poly {
                continue;
            }
            if point_in_triangle_strict(p, tri, -1e-9 * scale * scale) {
                return Some(t);
            }
        }
        None
    }

    pub fn contains(&self, t: usize, p: PlanarVector) -> bool {
        let scale = self.min_edge.max(1.0);
        point_in_triangle_strict(p, &self.tris[t], -1e-9 * scale * scale)
    }
}

/// One straight chart segment of a traced ray.
#[derive(Clone, Copy, Debug)]
pub struct RaySegment {
    pub tri: usize,
    pub start: PlanarVector,
    pub end: PlanarVector,
    /// Time (= arc length) at the start of the segment.
    pub t0: f64,
    pub t1: f64,
    /// Edge through which the segment exits, unless the ray ends here.
    pub exit_edge: Option<usize>,
    /// Crossing parameter along the exit edge (position = A + s (B - A)).
    pub exit_param: f64,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum RayEnd {
    /// Time budget reached strictly inside a chart.
    Budget { tri: usize, pos: PlanarVector },
    /// The ray hit a singularity (a triangle corner) at `time`.
    Singularity { sing: usize, time: f64 },
    /// The visitor asked to stop.
    Stopped,
}

/// Trace a unit-speed straight ray from `pos` in chart `tri`, crossing
/// chart edges by translation, for at most `max_time`. `visitor` sees every
/// chart segment and may stop the trace by returning false.
///
/// `entry_edge` excludes an edge from the first exit computation (use it
/// when `pos` lies on that edge).
pub fn trace_ray(
    tr: &Triangulation,
    mut tri: usize,
    mut pos: PlanarVector,
    dir: PlanarVector,
    mut entry_edge: Option<usize>,
    max_time: f64,
    visitor: &mut dyn FnMut(&RaySegment) -> bool,
) -> RayEnd {
    let d = dir.scale(1.0 / dir.norm());
    let mut time = 0.0;
    let vertex_tol = 1e-9;
    loop {
        // Exit through the first edge hit.
        let mut best: Option<(f64, usize, f64)> = None; // (u, edge, s)
        for e in 0..3 {
            if Some(e) == entry_edge {
                continue;
            }
            let a = tr.tris[tri][e];
            let w = tr.edge_vector(tri, e);
            let denom = d.cross(w);
            if denom.abs() < 1e-14 * w.norm() {
                continue; // parallel to the edge
            }
            let rel = a - pos;
            let u = rel.cross(w) / denom;
            let s = rel.cross(d) / denom;
            if u > 1e-12 * tr.min_edge && (-1e-12..=1.0 + 1e-12).contains(&s) {
                if best.map_or(true, |(bu, _, _)| u < bu) {
                    best = Some((u, e, s.clamp(0.0, 1.0)));
                }
            }
        }
        let Some((u, e, s)) = best else {
            // Numerical corner case: no exit found. Treat as a singularity
            // hit at the nearest corner.
            let sing = nearest_corner(tr, tri, pos);
            return RayEnd::Singularity { sing, time };
        };

        if time + u >= max_time {
            let endpos = pos + d.scale(max_time - time);
            let seg = RaySegment {
                tri,
                start: pos,
                end: endpos,
                t0: time,
                t1: max_time,
                exit_edge: None,
                exit_param: 0.0,
            };
            if !visitor(&seg) {
                return RayEnd::Stopped;
            }
            return RayEnd::Budget { tri, pos: endpos };
        }

        let hit = pos + d.scale(u);
        let w_len = tr.edge_vector(tri, e).norm();
        // Vertex hit: crossing parameter within tolerance of an endpoint.
        if s * w_len < vertex_tol * tr.min_edge.max(1.0) {
            let seg = seg_to(tr, tri, pos, hit, time, u, None);
            visitor(&seg);
            return RayEnd::Singularity { sing: tr.corner_sing[tri][e], time: time + u };
        }
        if (1.0 - s) * w_len < vertex_tol * tr.min_edge.max(1.0) {
            let seg = seg_to(tr, tri, pos, hit, time, u, None);
            visitor(&seg);
            return RayEnd::Singularity {
                sing: tr.corner_sing[tri][(e + 1) % 3],
                time: time + u,
            };
        }

        let seg = RaySegment {
            tri,
            start: pos,
            end: hit,
            t0: time,
            t1: time + u,
            exit_edge: Some(e),
            exit_param: s,
        };
        if !visitor(&seg) {
            return RayEnd::Stopped;
        }

        let (t2, e2) = tr.neighbor[tri][e];
        pos = hit + tr.shift[tri][e];
        time += u;
        tri = t2;
        entry_edge = Some(e2);
    }
}

fn seg_to(
    _tr: &Triangulation,
    tri: usize,
    start: PlanarVector,
    end: PlanarVector,
    t0: f64,
    du: f64,
    exit: Option<usize>,
) -> RaySegment {
    RaySegment {
        tri,
        start,
        end,
        t0,
        t1: t0 + du,
        exit_edge: exit,
        exit_param: 0.0,
    }
}

fn nearest_corner(tr: &Triangulation, tri: usize, pos: PlanarVector) -> usize {
    let mut best = (f64::INFINITY, 0usize);
    for c in 0..3 {
        let d = (tr.tris[tri][c] - pos).norm();
        if d < best.0 {
            best = (d, c);
        }
    }
    tr.corner_sing[tri][best.1]
}
