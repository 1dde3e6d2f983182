//! Maximal cylinder detection in a fixed direction.
//!
//! The surface is rotated so the direction is vertical; chart transitions
//! are translations, so the vertical of one chart is the vertical of all.
//! Every cylinder boundary circle is a union of vertical saddle
//! connections, so marching a vertical orbit from a point displaced
//! sideways off a vertical connection either closes up (we are inside the
//! cylinder) or not. A closed orbit's crossing parameters vary affinely in
//! the displacement, so the exact width follows from one probe by linear
//! extrapolation to the first vertex hit on either side.

use super::tri::{trace_ray, RayEnd, RaySegment, Triangulation};
use super::{Cylinder, ScanError};
use crate::geom::{direction_of, rotation_matrix, Direction, PlanarVector};
use crate::surface::{apply_matrix, TranslationSurface};

/// A vertical saddle connection of the rotated surface, with one designated
/// chart segment used to anchor probes.
struct VerticalSc {
    /// Chart of the anchor segment.
    tri: usize,
    /// Anchor segment from `foot` going straight up for `seg_len`.
    foot: PlanarVector,
    seg_len: f64,
    /// Whether the anchor segment lies along a chart edge; if so probes on
    /// the far side must transfer to the twin chart first.
    on_edge: Option<usize>,
    /// Full length of the connection.
    length: f64,
}

struct Crossing {
    /// Parameter along the crossed edge.
    s: f64,
    /// d s / d delta when the orbit is displaced horizontally by delta.
    slope: f64,
    edge_len: f64,
    tri: usize,
    edge: usize,
}

struct ClosedOrbit {
    period: f64,
    crossings: Vec<Crossing>,
}

/// All vertical saddle connections of the (already rotated) triangulation
/// with length <= bound, each carrying a usable anchor segment.
fn vertical_connections(tr: &Triangulation, bound: f64) -> Vec<VerticalSc> {
    let mut out: Vec<VerticalSc> = Vec::new();
    let vertical = PlanarVector::new(0.0, 1.0);

    // Chart edges that are vertical.
    for t in 0..tr.tris.len() {
        for e in 0..3 {
            let (t2, e2) = tr.neighbor[t][e];
            if (t, e) > (t2, e2) {
                continue;
            }
            let w = tr.edge_vector(t, e);
            if w.norm() > bound || !w.is_parallel(vertical) {
                continue;
            }
            let (foot, _head) = if w.y > 0.0 {
                (tr.tris[t][e], tr.tris[t][(e + 1) % 3])
            } else {
                (tr.tris[t][(e + 1) % 3], tr.tris[t][e])
            };
            out.push(VerticalSc {
                tri: t,
                foot,
                seg_len: w.norm(),
                on_edge: Some(e),
                length: w.norm(),
            });
        }
    }

    // Interior vertical connections: shoot the vertical ray from every
    // corner whose wedge strictly contains the up or down direction; keep
    // the longest chart segment as the anchor.
    for t in 0..tr.tris.len() {
        for c in 0..3 {
            let origin = tr.tris[t][c];
            let a = tr.tris[t][(c + 1) % 3] - origin;
            let b = tr.tris[t][(c + 2) % 3] - origin;
            for dir in [vertical, -vertical] {
                let inside = a.cross(dir) > 1e-9 * a.norm() && dir.cross(b) > 1e-9 * b.norm();
                if !inside {
                    continue;
                }
                let mut best_seg: Option<(usize, PlanarVector, f64)> = None;
                let mut segs = 0u32;
                let end = trace_ray(tr, t, origin, dir, None, bound * (1.0 + 1e-9), &mut |seg: &RaySegment| {
                    segs += 1;
                    let len = seg.t1 - seg.t0;
                    if best_seg.map_or(true, |(_, _, l)| len > l) {
                        let foot = if dir.y > 0.0 { seg.start } else { seg.end };
                        best_seg = Some((seg.tri, foot, len));
                    }
                    true
                });
                if let RayEnd::Singularity { time, .. } = end {
                    // Record once per unoriented connection: keep the
                    // upward shot only, plus downward shots whose reverse
                    // was not seen (reverse leaves the target corner, also
                    // scanned, so upward-only suffices).
                    if dir.y > 0.0 {
                        if let Some((tri, foot, seg_len)) = best_seg {
                            out.push(VerticalSc { tri, foot, seg_len, on_edge: None, length: time });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Probe anchor for a vertical connection on the given side (+1 right, -1
/// left): a start chart and point displaced by delta.
fn anchor(
    tr: &Triangulation,
    sc: &VerticalSc,
    side: f64,
    delta: f64,
) -> Option<(usize, PlanarVector)> {
    let mid_y = sc.foot.y + 0.5 * sc.seg_len;
    let base = PlanarVector::new(sc.foot.x, mid_y);
    match sc.on_edge {
        None => {
            let p = base + PlanarVector::new(side * delta, 0.0);
            tr.contains(sc.tri, p).then_some((sc.tri, p))
        }
        Some(e) => {
            // The chart on the left of the upward edge is sc.tri itself
            // when its edge vector points up.
            let w = tr.edge_vector(sc.tri, e);
            let up_in_tri = w.y > 0.0;
            let left_chart = side < 0.0;
            if up_in_tri == left_chart {
                let p = base + PlanarVector::new(side * delta, 0.0);
                tr.contains(sc.tri, p).then_some((sc.tri, p))
            } else {
                let (t2, _e2) = tr.neighbor[sc.tri][e];
                let p = base + tr.shift[sc.tri][e] + PlanarVector::new(side * delta, 0.0);
                tr.contains(t2, p).then_some((t2, p))
            }
        }
    }
}

/// Trace the vertical orbit from (tri, start); if it closes within
/// `max_period`, return the period and the crossing data.
fn probe_orbit(
    tr: &Triangulation,
    tri: usize,
    start: PlanarVector,
    max_period: f64,
) -> Option<ClosedOrbit> {
    let up = PlanarVector::new(0.0, 1.0);
    let mut crossings = Vec::new();
    let mut closed: Option<f64> = None;
    let tol_x = 1e-9 * tr.min_edge.max(1.0);
    let end = trace_ray(tr, tri, start, up, None, max_period * (1.0 + 1e-9) + tol_x, &mut |seg| {
        // Closure: back in the start chart on the same vertical line, with
        // the start's height inside this segment.
        if seg.t0 > 0.0
            && seg.tri == tri
            && (seg.start.x - start.x).abs() <= tol_x
            && seg.start.y <= start.y + tol_x
            && start.y <= seg.end.y + tol_x
        {
            closed = Some(seg.t0 + (start.y - seg.start.y));
            return false;
        }
        if let Some(e) = seg.exit_edge {
            let w = tr.edge_vector(seg.tri, e);
            crossings.push(Crossing {
                s: seg.exit_param,
                slope: 1.0 / w.x,
                edge_len: w.norm(),
                tri: seg.tri,
                edge: e,
            });
        }
        true
    });
    match (closed, end) {
        (Some(period), RayEnd::Stopped) => Some(ClosedOrbit { period, crossings }),
        _ => None,
    }
}

/// Room (in horizontal displacement) before some crossing parameter leaves
/// (0, 1) when moving in the +delta direction of the probe.
fn room(crossings: &[Crossing], positive: bool) -> f64 {
    let mut r = f64::INFINITY;
    for c in crossings {
        let slope = if positive { c.slope } else { -c.slope };
        let room = if slope > 0.0 {
            (1.0 - c.s) / slope
        } else if slope < 0.0 {
            c.s / (-slope)
        } else {
            f64::INFINITY
        };
        r = r.min(room);
    }
    r
}

fn itinerary_key(crossings: &[Crossing], shift_delta: f64) -> Vec<(usize, usize, i64)> {
    let raw: Vec<(usize, usize, i64)> = crossings
        .iter()
        .map(|c| {
            let s_mid = c.s + c.slope * shift_delta;
            (c.tri, c.edge, (s_mid * c.edge_len * 1e9).round() as i64)
        })
        .collect();
    // Lexicographically minimal rotation makes the key start-independent.
    let n = raw.len();
    if n == 0 {
        return raw;
    }
    let mut best = 0usize;
    for i in 1..n {
        for k in 0..n {
            let a = &raw[(i + k) % n];
            let b = &raw[(best + k) % n];
            match a.cmp(b) {
                std::cmp::Ordering::Less => {
                    best = i;
                    break;
                }
                std::cmp::Ordering::Greater => break,
                std::cmp::Ordering::Equal => continue,
            }
        }
    }
    (0..n).map(|k| raw[(best + k) % n]).collect()
}

/// All maximal cylinders of `x` in direction `theta` with circumference <=
/// `bound`. `x` may have any area.
pub fn cylinders_in_direction(
    x: &TranslationSurface,
    theta: Direction,
    bound: f64,
) -> Result<Vec<Cylinder>, ScanError> {
    // Rotate so theta becomes vertical: hol(gamma, r_theta X) has Re = 0
    // exactly in direction theta.
    let rotated = apply_matrix(rotation_matrix(theta.angle()), x)
        .map_err(|e| ScanError::Surface(e.to_string()))?;
    let tr = Triangulation::build(&rotated).map_err(|e| ScanError::Surface(e.to_string()))?;

    let verticals = vertical_connections(&tr, bound);
    if verticals.is_empty() {
        return Ok(Vec::new());
    }
    let back = rotation_matrix(-theta.angle());

    let mut found: std::collections::HashMap<Vec<(usize, usize, i64)>, Cylinder> =
        std::collections::HashMap::new();

    for sc in &verticals {
        for side in [1.0f64, -1.0] {
            // Ladder of probe offsets; any cylinder adjacent to this
            // connection on this side is hit once delta < width.
            let delta0 = 0.45 * sc.seg_len.min(tr.min_edge);
            let mut delta = delta0;
            let delta_min = (1e-7 * tr.min_edge).max(1e-12);
            while delta > delta_min {
                if let Some((tri, p)) = anchor(&tr, sc, side, delta) {
                    if let Some(orbit) = probe_orbit(&tr, tri, p, bound) {
                        // Crossing params move with d s/d Delta = slope for a
                        // shift Delta in the +x direction, whatever the
                        // probing side; the orbit family spans
                        // Delta in [-room_minus, +room_plus].
                        let room_plus = room(&orbit.crossings, true);
                        let room_minus = room(&orbit.crossings, false);
                        let width = room_plus + room_minus;
                        if width.is_finite() && width > 0.0 && orbit.period <= bound * (1.0 + 1e-9) {
                            let mid_shift = 0.5 * (room_plus - room_minus);
                            let key = itinerary_key(&orbit.crossings, mid_shift);
                            let boundary = vec![
                                back.apply(PlanarVector::new(0.0, sc.length)),
                            ];
                            found.entry(key).or_insert_with(|| {
                                let core = back.apply(PlanarVector::new(0.0, orbit.period));
                                Cylinder {
                                    direction: theta,
                                    holonomy: core,
                                    circumference: orbit.period,
                                    width,
                                    area: orbit.period * width,
                                    boundary,
                                }
                            });
                        }
                        // Room back toward the connection line; once the
                        // family reaches it, the adjacent cylinder on this
                        // side is the one just recorded.
                        let room_in = if side > 0.0 { room_minus } else { room_plus };
                        if room_in >= delta * (1.0 - 1e-6) {
                            break;
                        }
                    }
                }
                delta *= 0.5;
            }
        }
    }

    Ok(found.into_values().collect())
}

/// Maximal cylinders over every saddle connection direction with minimal
/// length <= bound (cylinder boundaries are saddle connections no longer
/// than the circumference, so this sweep is exhaustive for
/// circumference <= bound).
pub fn enumerate_cylinders(
    x: &TranslationSurface,
    bound: f64,
    budget: crate::Budget,
) -> Result<Vec<Cylinder>, ScanError> {
    let connections = super::enumerate_saddle_connections_with(x, bound, budget, false)?;
    let mut angles: Vec<f64> = connections
        .iter()
        .map(|sc| direction_of(sc.holonomy).expect("nonzero holonomy").angle())
        .collect();
    angles.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut dirs: Vec<Direction> = Vec::new();
    for a in angles {
        if dirs.last().map_or(true, |d| (a - d.angle()).abs() > 1e-12) {
            dirs.push(Direction::new(a));
        }
    }
    let mut out = Vec::new();
    for d in dirs {
        out.extend(cylinders_in_direction(x, d, bound)?);
    }
    out.sort_by(|a, b| {
        (a.circumference, a.direction.angle())
            .partial_cmp(&(b.circumference, b.direction.angle()))
            .unwrap()
    });
    Ok(out)
}
