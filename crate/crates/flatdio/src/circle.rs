//! Interval arithmetic on the direction circle [-pi/2, pi/2).
//!
//! Balls around a direction wrap at the identified endpoints and unwrap
//! into at most two arcs; measures of finite unions are computed exactly
//! with an endpoint sweep, never by sampling.

use std::f64::consts::{FRAC_PI_2, PI};

/// Half-open subinterval [lo, hi) of [-pi/2, pi/2); never wraps.
pub type Arc = (f64, f64);

/// The ball B(theta, r) unwrapped into one or two arcs of the fundamental
/// domain. A radius >= pi/2 covers the whole circle.
pub fn ball(theta: f64, r: f64) -> Vec<Arc> {
    assert!(r >= 0.0, "negative radius");
    if r >= FRAC_PI_2 {
        return vec![(-FRAC_PI_2, FRAC_PI_2)];
    }
    let t = canonical(theta);
    let lo = t - r;
    let hi = t + r;
    let mut arcs = Vec::with_capacity(2);
    if lo < -FRAC_PI_2 {
        arcs.push((lo + PI, FRAC_PI_2));
        arcs.push((-FRAC_PI_2, hi));
    } else if hi > FRAC_PI_2 {
        arcs.push((lo, FRAC_PI_2));
        arcs.push((-FRAC_PI_2, hi - PI));
    } else {
        arcs.push((lo, hi));
    }
    arcs.retain(|a| a.1 > a.0);
    arcs
}

/// Reduce an angle mod pi into [-pi/2, pi/2).
pub fn canonical(theta: f64) -> f64 {
    let mut t = theta.rem_euclid(PI);
    if t >= FRAC_PI_2 {
        t -= PI;
    }
    t
}

/// Circle distance between two directions (circumference pi).
pub fn dist(a: f64, b: f64) -> f64 {
    let d = (canonical(a) - canonical(b)).abs();
    d.min(PI - d)
}

/// Merge arcs into a sorted family with pairwise disjoint interiors.
pub fn merge(mut arcs: Vec<Arc>) -> Vec<Arc> {
    arcs.retain(|a| a.1 > a.0);
    arcs.sort_by(|p, q| p.0.partial_cmp(&q.0).unwrap());
    let mut out: Vec<Arc> = Vec::with_capacity(arcs.len());
    for a in arcs {
        match out.last_mut() {
            Some(last) if a.0 <= last.1 => last.1 = last.1.max(a.1),
            _ => out.push(a),
        }
    }
    out
}

/// Total length of a union of arcs (merged internally, so overlaps do not
/// double count).
pub fn union_measure(arcs: &[Arc]) -> f64 {
    merge(arcs.to_vec()).iter().map(|a| a.1 - a.0).sum()
}

/// Measure of `interval` intersected with the union of `arcs`.
pub fn intersection_measure(interval: Arc, arcs: &[Arc]) -> f64 {
    let merged = merge(arcs.to_vec());
    merged
        .iter()
        .map(|a| (a.1.min(interval.1) - a.0.max(interval.0)).max(0.0))
        .sum()
}

/// True when `interval` is disjoint from every arc in the (merged) family.
/// Arcs are treated as closed for the disjointness test, matching the use
/// of closed resonance balls in hypotheses.
pub fn is_disjoint(interval: Arc, merged: &[Arc]) -> bool {
    // Binary search for the first arc with endpoint >= interval start.
    let i = merged.partition_point(|a| a.1 < interval.0);
    match merged.get(i) {
        Some(a) => a.0 > interval.1,
        None => true,
    }
}

/// Complement of the union inside `interval`, as a sorted arc family.
pub fn complement_within(interval: Arc, arcs: &[Arc]) -> Vec<Arc> {
    let merged = merge(arcs.to_vec());
    let mut out = Vec::new();
    let mut cursor = interval.0;
    for a in merged {
        if a.1 <= interval.0 || a.0 >= interval.1 {
            continue;
        }
        if a.0 > cursor {
            out.push((cursor, a.0.min(interval.1)));
        }
        cursor = cursor.max(a.1);
        if cursor >= interval.1 {
            break;
        }
    }
    if cursor < interval.1 {
        out.push((cursor, interval.1));
    }
    out.retain(|a| a.1 > a.0);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ball_wraps_into_two_arcs() {
        let arcs = ball(FRAC_PI_2 - 0.01, 0.05);
        assert_eq!(arcs.len(), 2);
        let total: f64 = arcs.iter().map(|a| a.1 - a.0).sum();
        assert!((total - 0.1).abs() < 1e-12);
        assert_eq!(ball(0.0, 0.1).len(), 1);
        assert_eq!(ball(0.3, 2.0), vec![(-FRAC_PI_2, FRAC_PI_2)]);
    }

    #[test]
    fn union_measure_merges_overlaps() {
        let arcs = vec![(0.0, 0.5), (0.25, 0.75), (1.0, 1.1)];
        assert!((union_measure(&arcs) - 0.85).abs() < 1e-12);
        assert_eq!(union_measure(&[]), 0.0);
    }

    #[test]
    fn intersection_and_complement() {
        let arcs = vec![(0.1, 0.2), (0.4, 0.6)];
        assert!((intersection_measure((0.0, 0.5), &arcs) - 0.2).abs() < 1e-12);
        let comp = complement_within((0.0, 0.5), &arcs);
        assert_eq!(comp, vec![(0.0, 0.1), (0.2, 0.4)]);
        let total: f64 = comp.iter().map(|a| a.1 - a.0).sum();
        assert!((total - 0.3).abs() < 1e-12);
    }

    #[test]
    fn disjointness_query() {
        let merged = merge(vec![(0.1, 0.2), (0.4, 0.6)]);
        assert!(is_disjoint((0.25, 0.35), &merged));
        assert!(!is_disjoint((0.15, 0.17), &merged));
        assert!(!is_disjoint((0.0, 0.1), &merged)); // closed-endpoint touch
        assert!(is_disjoint((0.7, 0.9), &merged));
    }
}
