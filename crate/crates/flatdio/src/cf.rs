//! Simple continued fractions over f64 slopes.
//!
//! Used to design direction families with a prescribed approximation
//! exponent (billiard experiments) and as an independent oracle in tests:
//! convergents p_k/q_k of a slope alpha give the best rational
//! approximations, and q_k |q_k alpha - p_k| tracks the badly-approximable
//! margin.

/// Value of the continued fraction [a0; a1, a2, ...].
pub fn value(quotients: &[u64]) -> f64 {
    let mut x = 0.0;
    for &a in quotients.iter().rev() {
        x = if x == 0.0 { a as f64 } else { a as f64 + 1.0 / x };
        if x == 0.0 {
            // Leading zero quotient inside the tail; treat as tiny.
            x = f64::MIN_POSITIVE;
        }
    }
    x
}

/// Partial quotients of `alpha` (alpha >= 0), at most `max_terms`, stopping
/// when the remainder is below f64 resolution.
pub fn quotients(alpha: f64, max_terms: usize) -> Vec<u64> {
    let mut out = Vec::new();
    let mut x = alpha;
    for _ in 0..max_terms {
        let a = x.floor();
        out.push(a as u64);
        let frac = x - a;
        if frac < 1e-12 {
            break;
        }
        x = 1.0 / frac;
        if !x.is_finite() || x > 1e15 {
            break;
        }
    }
    out
}

/// Convergents (p_k, q_k) of [a0; a1, ...].
pub fn convergents(quotients: &[u64]) -> Vec<(u64, u64)> {
    let mut out = Vec::with_capacity(quotients.len());
    let (mut p0, mut q0) = (1u64, 0u64); // p_{-1}/q_{-1}
    let (mut p1, mut q1) = (quotients.first().copied().unwrap_or(0), 1u64);
    out.push((p1, q1));
    for &a in &quotients[1.min(quotients.len())..] {
        let p2 = a.saturating_mul(p1).saturating_add(p0);
        let q2 = a.saturating_mul(q1).saturating_add(q0);
        out.push((p2, q2));
        (p0, q0) = (p1, q1);
        (p1, q1) = (p2, q2);
    }
    out
}

/// min over convergents with q in (q_min, q_max] of q * |q alpha - p|.
///
/// For badly approximable alpha this approaches liminf q ||q alpha||;
/// for the golden slope the limit is 1/sqrt(5).
pub fn margin(alpha: f64, q_min: u64, q_max: u64) -> f64 {
    let qs = quotients(alpha, 64);
    convergents(&qs)
        .iter()
        .filter(|&&(_, q)| q > q_min && q <= q_max)
        .map(|&(p, q)| q as f64 * (q as f64 * alpha - p as f64).abs())
        .fold(f64::INFINITY, f64::min)
}

/// Golden slope (sqrt(5) - 1) / 2 = [0; 1, 1, 1, ...].
pub fn golden_slope() -> f64 {
    (5f64.sqrt() - 1.0) / 2.0
}

/// Quotients for a slope with effective approximation exponent `tau`:
/// a_{k+1} ~ q_k^{tau - 2}, so |alpha - p_k/q_k| ~ q_k^{-tau} along the
/// designed subsequence. Stops once q exceeds `q_target`.
pub fn design_exponent(tau: f64, q_target: u64, first: u64) -> Vec<u64> {
    assert!(tau >= 2.0);
    let mut qs = vec![0u64, first.max(1)];
    let (mut q_prev, mut q_cur) = (1u64, first.max(1));
    while q_cur <= q_target {
        let a = (q_cur as f64).powf(tau - 2.0).round().max(1.0) as u64;
        qs.push(a);
        let q_next = a.saturating_mul(q_cur).saturating_add(q_prev);
        (q_prev, q_cur) = (q_cur, q_next);
    }
    qs
}
