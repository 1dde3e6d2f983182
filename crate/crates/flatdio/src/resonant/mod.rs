//! Diophantine approximation against a planar resonant set: badness
//! margins, the Dirichlet search, and empirical checkers for the five
//! metric properties (quadratic growth, isotropic quadratic growth,
//! ubiquity, Dirichlet property, decaying).
//!
//! Checkers run in one of two modes. Theorem mode enforces every
//! hypothesis of the corresponding statement and uses its constants;
//! empirical mode runs with user constants and reports fitted values,
//! because several hypotheses involve T0 = 2^(2^(4m)) scales that no
//! finite truncation reaches. Reports always state the mode.

mod functions;

pub use functions::{ApproximationFunction, DimensionFunction};

use crate::circle::{self, Arc};
use crate::geom::{holonomy_components, Direction};
use crate::scan::{enumerate_in_box, ResonantRecord, ResonantSet};
use crate::surface::TranslationSurface;
use crate::Budget;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, thiserror::Error)]
pub enum ResonantError {
    #[error("hypothesis not met: {reason}")]
    HypothesisNotMet { reason: String },
    #[error("no records below the length bound")]
    EmptyTruncation,
    #[error("no admissible interval at level {level}")]
    NoAdmissibleInterval { level: u32 },
    #[error(transparent)]
    Scan(#[from] crate::scan::ScanError),
}

/// S0 for total multiplicity m.
pub fn s0_of(m: usize) -> f64 {
    (2.0 / (m as f64 * 3f64.sqrt())).sqrt()
}

/// Dirichlet search hypothesis threshold for R^sc: L must exceed
/// sqrt(2) S0^2 / sys(X).
pub fn dirichlet_threshold_sc(m: usize, sys: f64) -> f64 {
    2f64.sqrt() * s0_of(m).powi(2) / sys
}

/// The analogue for R^cyl: sqrt(2) T0^2 / cyl(X). T0 = 2^(2^(4m)), so this
/// is unreachable in practice for every m >= 1; the search stays gated.
pub fn dirichlet_threshold_cyl(m: usize, cyl: f64) -> f64 {
    let t0 = 2f64.powf(2f64.powi(4 * m as i32));
    2f64.sqrt() * t0 * t0 / cyl
}

/// R(K, n): n = 0 holds l <= 1, n >= 1 holds K^(n-1) < l <= K^n.
pub fn partition(r: &ResonantSet, k: f64) -> BTreeMap<u32, Vec<ResonantRecord>> {
    assert!(k > 1.0);
    let mut out: BTreeMap<u32, Vec<ResonantRecord>> = BTreeMap::new();
    for rec in &r.records {
        out.entry(bucket_of(rec.length, k)).or_default().push(*rec);
    }
    out
}

/// Bucket index of a length under the K-adic partition.
pub fn bucket_of(l: f64, k: f64) -> u32 {
    if l <= 1.0 {
        return 0;
    }
    let mut n = (l.ln() / k.ln()).ceil().max(1.0) as u32;
    // Guard the boundaries against rounding.
    while n > 1 && l <= k.powi(n as i32 - 1) {
        n -= 1;
    }
    while l > k.powi(n as i32) {
        n += 1;
    }
    n
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct DirichletWitness {
    pub theta_v: f64,
    pub length: f64,
    pub distance: f64,
    /// |theta - theta_v| <= sqrt(2) S0^2 / (l * L).
    pub bound_ok: bool,
}

/// Best Dirichlet approximation: the record with l <= l_bound minimizing
/// |theta - theta_v| * l. `threshold` is the hypothesis lower bound on
/// l_bound (see [`dirichlet_threshold_sc`]).
pub fn dirichlet_search(
    r: &ResonantSet,
    theta: Direction,
    l_bound: f64,
    threshold: f64,
) -> Result<DirichletWitness, ResonantError> {
    if l_bound <= threshold {
        return Err(ResonantError::HypothesisNotMet {
            reason: format!("L = {l_bound} not above the Dirichlet threshold {threshold}"),
        });
    }
    let n = r.records.len();
    let t = theta.angle();
    let min_l = r
        .records
        .iter()
        .filter(|rec| rec.length <= l_bound)
        .map(|rec| rec.length)
        .fold(f64::INFINITY, f64::min);
    if !min_l.is_finite() {
        return Err(ResonantError::EmptyTruncation);
    }

    // Walk outward from theta on the circle: a record at distance d scores
    // at least d * min_l, so the scan stops early once that passes the
    // best score.
    let start = r.records.partition_point(|rec| rec.theta < t) % n;
    let mut best: Option<(f64, usize)> = None;
    let mut left = 0usize;
    let mut right = 0usize;
    while left + right < n {
        let li = ((start as i64 - 1 - left as i64).rem_euclid(n as i64)) as usize;
        let ri = (start + right) % n;
        let ld = circle::dist(r.records[li].theta, t);
        let rd = circle::dist(r.records[ri].theta, t);
        let (idx, d) = if ld <= rd {
            left += 1;
            (li, ld)
        } else {
            right += 1;
            (ri, rd)
        };
        if let Some((score, _)) = best {
            if d * min_l > score {
                break;
            }
        }
        let rec = &r.records[idx];
        if rec.length <= l_bound {
            let score = d * rec.length;
            if best.map_or(true, |(s, _)| score < s) {
                best = Some((score, idx));
            }
        }
    }

    let (_, idx) = best.ok_or(ResonantError::EmptyTruncation)?;
    let rec = &r.records[idx];
    let d = circle::dist(rec.theta, t);
    let s0 = s0_of(r.m);
    Ok(DirichletWitness {
        theta_v: rec.theta,
        length: rec.length,
        distance: d,
        bound_ok: d <= 2f64.sqrt() * s0 * s0 / (rec.length * l_bound) + 1e-15,
    })
}

/// Records with l <= l_bound and |theta - theta_v| <= psi(l(theta_v)): the
/// finite-truncation solutions of the W(R, psi) condition.
pub fn approx_solutions(
    r: &ResonantSet,
    theta: Direction,
    psi: &ApproximationFunction,
    l_bound: f64,
) -> Vec<ResonantRecord> {
    let t = theta.angle();
    r.records
        .iter()
        .filter(|rec| rec.length <= l_bound)
        .filter(|rec| circle::dist(rec.theta, t) <= psi.eval(rec.length))
        .copied()
        .collect()
}

/// min over records with L0 < l <= L of l^2 |theta - theta_v|; infinity if
/// the range is empty. theta passes eps-badness at this truncation iff the
/// margin is >= eps^2.
pub fn bad_margin(r: &ResonantSet, theta: Direction, l0: f64, l1: f64) -> f64 {
    assert!(l1 > l0 && l0 >= 0.0);
    let t = theta.angle();
    r.records
        .iter()
        .filter(|rec| rec.length > l0 && rec.length <= l1)
        .map(|rec| rec.length * rec.length * circle::dist(rec.theta, t))
        .fold(f64::INFINITY, f64::min)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PropertyKind {
    Qg,
    Iqg,
    Ubiquity,
    Dirichlet,
    Decaying,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckMode {
    Theorem,
    Empirical,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Violation {
    pub context: String,
    pub measured: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: PropertyKind,
    pub mode: CheckMode,
    pub constants: BTreeMap<String, f64>,
    pub samples: usize,
    pub skipped: usize,
    pub violations: Vec<Violation>,
    /// Fitted leading constant (M, c1, ... depending on the property).
    pub fitted: Option<f64>,
    pub notes: Vec<String>,
}

impl PropertyReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn new(property: PropertyKind, mode: CheckMode) -> Self {
        PropertyReport {
            property,
            mode,
            constants: BTreeMap::new(),
            samples: 0,
            skipped: 0,
            violations: Vec::new(),
            fitted: None,
            notes: Vec::new(),
        }
    }
}

/// Quadratic growth: fitted minimal M with #{l(theta) < R} < M R^2 over all
/// R. The supremum of count/R^2 is attained just above each record length.
pub fn qg_check(r: &ResonantSet) -> PropertyReport {
    let mut report = PropertyReport::new(PropertyKind::Qg, CheckMode::Empirical);
    let mut lengths: Vec<f64> = r.records.iter().map(|rec| rec.length).collect();
    lengths.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut fitted = 0.0f64;
    for (i, l) in lengths.iter().enumerate() {
        fitted = fitted.max((i + 1) as f64 / (l * l));
    }
    report.samples = lengths.len();
    report.fitted = Some(fitted);
    report
}

/// Isotropic quadratic growth over explicit (interval, R) pairs with
/// R^2 |I| >= 1. For R^cyl the count must stay below m(m+1) |I| R^2
/// (violations recorded against that bound); for R^sc only the fitted
/// constant is reported.
pub fn iqg_check(r: &ResonantSet, pairs: &[(Arc, f64)]) -> PropertyReport {
    let mut report = PropertyReport::new(PropertyKind::Iqg, CheckMode::Theorem);
    let m = r.m as f64;
    let theorem_m = m * (m + 1.0);
    report.constants.insert("m(m+1)".into(), theorem_m);
    let enforce = r.kind == crate::scan::ResonantKind::Cyl;
    let mut fitted = 0.0f64;
    for &((lo, hi), bound) in pairs {
        let len = hi - lo;
        if bound * bound * len < 1.0 {
            report.skipped += 1;
            continue;
        }
        report.samples += 1;
        let count = r
            .in_interval(lo, hi)
            .iter()
            .filter(|rec| rec.length < bound)
            .count() as f64;
        let ratio = count / (len * bound * bound);
        fitted = fitted.max(ratio);
        if enforce && count >= theorem_m * len * bound * bound {
            report.violations.push(Violation {
                context: format!("I=({lo:.6},{hi:.6}) R={bound}"),
                measured: count,
                bound: theorem_m * len * bound * bound,
            });
        }
    }
    report.fitted = Some(fitted);
    report
}

fn merged_ball_arcs<'a>(
    records: impl Iterator<Item = &'a ResonantRecord>,
    radius: impl Fn(f64) -> f64,
) -> Vec<Arc> {
    let mut arcs = Vec::new();
    for rec in records {
        arcs.extend(circle::ball(rec.theta, radius(rec.length)));
    }
    circle::merge(arcs)
}

/// Ubiquity over explicit intervals and levels: covered fraction of
/// I by the union of B(theta, sqrt(3) K / K^(2n)) over l <= K^n, against
/// c1 = 1/2. `cyl_x` gates the interval-size hypothesis
/// |I| >= 1/(2 m cyl K^(n-1)).
///
/// Theorem mode requires K >= sqrt(2) T0^2 / cyl(X); otherwise the checker
/// runs empirically with the same constants and also fits the smallest
/// ball-scale multiplier that keeps every fraction above 1/2.
pub fn ubiquity_check(
    r: &ResonantSet,
    k: f64,
    levels: &[u32],
    intervals: &[Arc],
    cyl_x: f64,
) -> PropertyReport {
    let m = r.m as f64;
    let theorem_k = dirichlet_threshold_cyl(r.m, cyl_x);
    let mode = if k >= theorem_k { CheckMode::Theorem } else { CheckMode::Empirical };
    let mut report = PropertyReport::new(PropertyKind::Ubiquity, mode);
    report.constants.insert("K".into(), k);
    report.constants.insert("c1".into(), 0.5);
    report.constants.insert("a".into(), 3f64.sqrt() * k);

    let mut min_fraction = f64::INFINITY;
    let mut per_sample: Vec<(Arc, u32)> = Vec::new();
    for &n in levels {
        let kn = k.powi(n as i32);
        let radius = 3f64.sqrt() * k / (kn * kn);
        let arcs = merged_ball_arcs(r.records.iter().filter(|rec| rec.length <= kn), |_| radius);
        for &(lo, hi) in intervals {
            let len = hi - lo;
            if len < 1.0 / (2.0 * m * cyl_x * k.powi(n as i32 - 1)) {
                report.skipped += 1;
                continue;
            }
            report.samples += 1;
            per_sample.push(((lo, hi), n));
            let covered = circle::intersection_measure((lo, hi), &arcs);
            let fraction = covered / len;
            min_fraction = min_fraction.min(fraction);
            if fraction < 0.5 {
                report.violations.push(Violation {
                    context: format!("I=({lo:.6},{hi:.6}) n={n}"),
                    measured: fraction,
                    bound: 0.5,
                });
            }
        }
    }
    if min_fraction.is_finite() {
        report.fitted = Some(min_fraction);
        // Fitted a: smallest multiplier lambda <= sqrt(3) keeping every
        // covered fraction at or above 1/2 at radius lambda K^(1-2n).
        if min_fraction >= 0.5 {
            let mut lo_m = 0.0f64;
            let mut hi_m = 3f64.sqrt();
            for _ in 0..30 {
                let mid = 0.5 * (lo_m + hi_m);
                let ok = per_sample.iter().all(|&((ilo, ihi), n)| {
                    let kn = k.powi(n as i32);
                    let radius = mid * k / (kn * kn);
                    let arcs = merged_ball_arcs(
                        r.records.iter().filter(|rec| rec.length <= kn),
                        |_| radius,
                    );
                    circle::intersection_measure((ilo, ihi), &arcs) / (ihi - ilo) >= 0.5
                });
                if ok {
                    hi_m = mid;
                } else {
                    lo_m = mid;
                }
            }
            report.constants.insert("a_fitted_multiplier".into(), hi_m);
        }
    }
    report
}

/// One Dirichlet-property measurement: covered fraction of I by the union
/// of B(theta, eps^2 / (2 l^2)) over l <= L. Errors when (I, L) violates
/// the hypotheses |I| >= 2U/L^2 and L >= sqrt(2) S0^2 / sys.
pub fn dirichlet_property_single(
    r: &ResonantSet,
    eps: f64,
    u: f64,
    interval: Arc,
    l_bound: f64,
    sys: f64,
) -> Result<f64, ResonantError> {
    let len = interval.1 - interval.0;
    if len < 2.0 * u / (l_bound * l_bound) {
        return Err(ResonantError::HypothesisNotMet {
            reason: format!("|I| = {len} below 2U/L^2 = {}", 2.0 * u / (l_bound * l_bound)),
        });
    }
    if l_bound < dirichlet_threshold_sc(r.m, sys) {
        return Err(ResonantError::HypothesisNotMet {
            reason: format!("L = {l_bound} below sqrt(2) S0^2/sys"),
        });
    }
    let arcs = merged_ball_arcs(r.records.iter().filter(|rec| rec.length <= l_bound), |l| {
        eps * eps / (2.0 * l * l)
    });
    Ok(circle::intersection_measure(interval, &arcs) / len)
}

/// Dirichlet property over interval/length grids, with the theorem
/// defaults U = 12/(m^2 eps^2) and tau = m eps^2 / sqrt(48) unless
/// overridden. Inadmissible pairs are skipped and counted.
pub fn dirichlet_property_check(
    r: &ResonantSet,
    eps: f64,
    u: Option<f64>,
    tau: Option<f64>,
    intervals: &[Arc],
    l_bounds: &[f64],
    sys: f64,
) -> PropertyReport {
    let m = r.m as f64;
    let u = u.unwrap_or(12.0 / (m * m * eps * eps));
    let tau = tau.unwrap_or(m * eps * eps / 48f64.sqrt());
    let mut report = PropertyReport::new(PropertyKind::Dirichlet, CheckMode::Theorem);
    report.constants.insert("eps".into(), eps);
    report.constants.insert("U".into(), u);
    report.constants.insert("tau".into(), tau);
    let mut min_fraction = f64::INFINITY;
    for &l_bound in l_bounds {
        for &interval in intervals {
            match dirichlet_property_single(r, eps, u, interval, l_bound, sys) {
                Ok(fraction) => {
                    report.samples += 1;
                    min_fraction = min_fraction.min(fraction);
                    if fraction < tau {
                        report.violations.push(Violation {
                            context: format!(
                                "I=({:.6},{:.6}) L={l_bound}",
                                interval.0, interval.1
                            ),
                            measured: fraction,
                            bound: tau,
                        });
                    }
                }
                Err(_) => report.skipped += 1,
            }
        }
    }
    if min_fraction.is_finite() {
        report.fitted = Some(min_fraction);
    }
    report
}

/// Decaying checker: samples K^(-2n)-grid intervals satisfying the
/// emptiness hypothesis against levels < n, measures the level-n mass, and
/// fits the minimal M with mass <= M eps^beta |I|. K = 1/eps. The records
/// in `r` must reach l = K^n_max.
///
/// Theorem mode requires eps < min(r0, sys); the underlying M = M(m) is
/// not explicit in the statement, so even in theorem mode only the fitted
/// M is reported. A violation is recorded only when no admissible interval
/// exists at n = 1 (the definition's final clause).
#[allow(clippy::too_many_arguments)]
pub fn decaying_check(
    r: &ResonantSet,
    eps: f64,
    beta: f64,
    n_max: u32,
    samples_per_level: usize,
    seed: u64,
    sys: Option<f64>,
    r0: Option<f64>,
) -> PropertyReport {
    assert!(eps > 0.0 && eps < 1.0);
    let k = 1.0 / eps;
    let theorem_ok = match (sys, r0) {
        (Some(s), Some(r0)) => eps < s.min(r0),
        _ => false,
    };
    let mode = if theorem_ok { CheckMode::Theorem } else { CheckMode::Empirical };
    let mut report = PropertyReport::new(PropertyKind::Decaying, mode);
    report.constants.insert("eps".into(), eps);
    report.constants.insert("K".into(), k);
    report.constants.insert("beta".into(), beta);
    if r.length_bound < k.powi(n_max as i32) * (1.0 - 1e-12) {
        report.notes.push(format!(
            "resonant set truncated at {} but level {n_max} needs {}",
            r.length_bound,
            k.powi(n_max as i32)
        ));
    }

    let buckets = partition(r, k);
    // Hypothesis arcs per level j: balls B(theta, eps^2/(l K^j)).
    let hypothesis_arcs: Vec<Vec<Arc>> = (0..n_max)
        .map(|j| {
            merged_ball_arcs(
                buckets.get(&j).into_iter().flatten(),
                |l| eps * eps / (l * k.powi(j as i32)),
            )
        })
        .collect();

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fitted = 0.0f64;
    let half = std::f64::consts::FRAC_PI_2;

    // Existence of an admissible interval at n = 1 (final clause of the
    // decaying definition): scan the full level-1 grid.
    {
        let cell = k.powi(-2);
        let cells = (std::f64::consts::PI / cell).floor() as u64;
        let merged = &hypothesis_arcs[0];
        let found = (0..cells).any(|j| {
            let lo = -half + j as f64 * cell;
            circle::is_disjoint((lo, lo + cell), merged)
        });
        if !found {
            report.violations.push(Violation {
                context: "no admissible interval at n=1".into(),
                measured: 0.0,
                bound: 1.0,
            });
            report.notes.push("NoAdmissibleInterval at level 1".into());
        }
    }

    for n in 1..=n_max {
        let cell = k.powi(-2 * n as i32);
        let cells_total = (std::f64::consts::PI / cell).floor() as u64;
        let mut merged: Vec<Arc> = Vec::new();
        for arcs in hypothesis_arcs.iter().take(n as usize) {
            merged.extend(arcs.iter().copied());
        }
        let merged = circle::merge(merged);
        let kn = k.powi(n as i32);
        let conclusion_arcs = merged_ball_arcs(
            buckets.get(&n).into_iter().flatten(),
            |l| 2.0 * eps * eps / (l * kn),
        );

        let mut accepted = 0usize;
        let mut attempts = 0usize;
        while accepted < samples_per_level && attempts < samples_per_level * 200 {
            attempts += 1;
            let j = rng.gen_range(0..cells_total);
            let lo = -half + j as f64 * cell;
            let interval = (lo, lo + cell);
            if !circle::is_disjoint(interval, &merged) {
                continue;
            }
            accepted += 1;
            report.samples += 1;
            let mass = circle::intersection_measure(interval, &conclusion_arcs);
            fitted = fitted.max(mass / (eps.powf(beta) * cell));
        }
        if accepted == 0 {
            report.notes.push(format!("no admissible interval sampled at level {n}"));
        }
    }
    report.fitted = Some(fitted);
    report
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct HorocycleFraction {
    /// Measured fraction of alpha in J with sys(u_{-alpha} X) <= rho'.
    pub fraction: f64,
    pub ratio: f64,
    /// fraction / ratio^beta, the fitted constant of the non-divergence
    /// estimate.
    pub fitted_c: f64,
    pub samples: usize,
}

/// Monte-Carlo estimate of |{alpha in J : sys(u_{-alpha} X) <= rho'}| / |J|
/// via stratified sampling, after verifying the hypothesis
/// sup_J |hol(gamma, u_{-alpha} X)| >= rho for every saddle connection.
///
/// Requires a unit-area surface and 0 < rho' <= rho < S0.
pub fn horocycle_systole_fraction(
    x: &TranslationSurface,
    j: (f64, f64),
    rho: f64,
    rho_prime: f64,
    samples: usize,
    beta: f64,
    budget: Budget,
) -> Result<HorocycleFraction, ResonantError> {
    let s0 = x.s0();
    if !(0.0 < rho_prime && rho_prime <= rho && rho < s0) {
        return Err(ResonantError::HypothesisNotMet {
            reason: format!("need 0 < rho' <= rho < S0 = {s0}"),
        });
    }
    let a_max = j.0.abs().max(j.1.abs());
    // Candidates: connections that can be short somewhere on the segment.
    // All others keep |hol(gamma, u_{-alpha} X)| > S0 >= rho on J.
    let slack = 1.0 + 1e-9;
    let re_bound = s0 * (1.0 + a_max) * slack;
    let im_bound = s0 * slack;
    let candidates = enumerate_in_box(x, Direction::new(0.0), re_bound, im_bound, budget)?;

    for sc in &candidates {
        let (xx, yy) = (sc.holonomy.x, sc.holonomy.y);
        let at = |alpha: f64| ((xx - alpha * yy).powi(2) + yy * yy).sqrt();
        let sup = at(j.0).max(at(j.1));
        if sup < rho {
            return Err(ResonantError::HypothesisNotMet {
                reason: format!(
                    "sup over J of |hol| = {sup} < rho = {rho} for hol = ({xx}, {yy})"
                ),
            });
        }
    }

    let len = j.1 - j.0;
    let mut hits = 0usize;
    for i in 0..samples {
        let alpha = j.0 + (i as f64 + 0.5) * len / samples as f64;
        let sys = candidates
            .iter()
            .map(|sc| {
                let v = sc.holonomy;
                ((v.x - alpha * v.y).powi(2) + v.y * v.y).sqrt()
            })
            .fold(f64::INFINITY, f64::min);
        if sys <= rho_prime {
            hits += 1;
        }
    }
    let fraction = hits as f64 / samples as f64;
    let ratio = rho_prime / rho;
    Ok(HorocycleFraction {
        fraction,
        ratio,
        fitted_c: fraction / ratio.powf(beta),
        samples,
    })
}

/// |hol(gamma, G_lambda u_{-alpha} X)| from the horocycle-systole closed
/// form: sqrt((K^lambda |Im| |alpha - slope|)^2 + (|Im| / K^lambda)^2).
pub fn horocycle_length_formula(
    hol: crate::geom::PlanarVector,
    k: f64,
    lambda: f64,
    alpha: f64,
) -> f64 {
    let im = hol.y.abs();
    let slope = hol.x / hol.y;
    let kl = k.powf(lambda);
    ((kl * im * (alpha - slope)).powi(2) + (im / kl).powi(2)).sqrt()
}

/// Holonomy components of a vector in direction theta (re-export for
/// checker callers).
pub fn components(theta: Direction, v: crate::geom::PlanarVector) -> (f64, f64) {
    holonomy_components(theta, v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::PlanarVector;
    use crate::scan::{resonant_sc, torus_oracle, ResonantKind};
    use crate::surface::builtin;
    use crate::Budget;

    fn torus_set(bound: f64) -> ResonantSet {
        let t = builtin("torus").unwrap();
        resonant_sc(&t, bound, Budget::default()).unwrap()
    }

    #[test]
    fn partition_buckets() {
        let r = torus_set(5.0);
        let parts = partition(&r, 2.0);
        // l = 1 lands in bucket 0.
        assert!(parts[&0].iter().any(|rec| (rec.length - 1.0).abs() < 1e-12));
        // l = sqrt(5) in bucket 2 (2 < sqrt 5 <= 4).
        let s5 = 5f64.sqrt();
        assert!(parts[&2].iter().any(|rec| (rec.length - s5).abs() < 1e-9));
        let total: usize = parts.values().map(|v| v.len()).sum();
        assert_eq!(total, r.len());
        assert_eq!(bucket_of(1.0, 2.0), 0);
        assert_eq!(bucket_of(2.0, 2.0), 1);
        assert_eq!(bucket_of(2.0 + 1e-9, 2.0), 2);
    }

    #[test]
    fn dirichlet_search_vertical_hit() {
        let r = torus_set(10.0);
        let w = dirichlet_search(&r, Direction::new(0.0), 10.0, 2.4).unwrap();
        assert_eq!(w.distance, 0.0);
        assert!((w.theta_v - 0.0).abs() < 1e-12);
        assert!(w.bound_ok);
    }

    #[test]
    fn dirichlet_search_finds_convergent() {
        // Golden slope: the minimizer is a continued fraction convergent
        // direction of the slope.
        let r = torus_set(100.0);
        let alpha = crate::cf::golden_slope();
        let theta = Direction::new(alpha.atan());
        let w = dirichlet_search(&r, theta, 100.0, 2.4).unwrap();
        assert!(w.bound_ok);
        let convs = crate::cf::convergents(&crate::cf::quotients(alpha, 30));
        let hit = convs.iter().any(|&(p, q)| {
            let dir = (p as f64 / q as f64).atan();
            (dir - w.theta_v).abs() < 1e-9
        });
        assert!(hit, "witness {w:?} is not a convergent direction");
    }

    #[test]
    fn dirichlet_hypothesis_gate() {
        let r = torus_set(10.0);
        assert!(matches!(
            dirichlet_search(&r, Direction::new(0.3), 1.0, 2.4),
            Err(ResonantError::HypothesisNotMet { .. })
        ));
        // cyl threshold is astronomically large for m = 1.
        assert!(dirichlet_threshold_cyl(1, 1.0) > 1e9);
    }

    #[test]
    fn approx_solutions_extremes() {
        let r = torus_set(5.0);
        let all = approx_solutions(
            &r,
            Direction::new(0.2),
            &ApproximationFunction::Constant(std::f64::consts::PI),
            5.0,
        );
        assert_eq!(all.len(), r.len());
        let none = approx_solutions(
            &r,
            Direction::new(0.2),
            &ApproximationFunction::Constant(0.0),
            5.0,
        );
        assert!(none.is_empty());
        // psi == 0 keeps exact hits only.
        let hit = approx_solutions(
            &r,
            Direction::new(0.0),
            &ApproximationFunction::Constant(0.0),
            5.0,
        );
        assert_eq!(hit.len(), 1);
    }

    #[test]
    fn approx_solutions_monotone_in_bound_and_psi() {
        let r = torus_set(8.0);
        let theta = Direction::new(0.37);
        let psi_small = ApproximationFunction::power(2.0);
        let psi_big = ApproximationFunction::Power { c: 2.0, tau: 2.0 };
        let a = approx_solutions(&r, theta, &psi_small, 4.0).len();
        let b = approx_solutions(&r, theta, &psi_small, 8.0).len();
        let c = approx_solutions(&r, theta, &psi_big, 8.0).len();
        assert!(a <= b && b <= c);
    }

    #[test]
    fn bad_margin_examples() {
        let r = torus_set(10.0);
        // Resonant direction has margin 0.
        assert_eq!(bad_margin(&r, Direction::new(0.0), 0.5, 10.0), 0.0);
        // Margin is non-increasing in the truncation bound.
        let theta = Direction::new(0.37);
        let m1 = bad_margin(&r, theta, 0.0, 3.0);
        let m2 = bad_margin(&r, theta, 0.0, 10.0);
        assert!(m2 <= m1);
    }

    #[test]
    fn bad_margin_golden_slope() {
        // At a modest truncation the margin already approaches
        // liminf q||q phi|| = 1/sqrt(5) (angle form within a few percent).
        let t = builtin("torus").unwrap();
        let alpha = crate::cf::golden_slope();
        let theta = Direction::new(alpha.atan());
        let r = crate::scan::resonant_sc_near(&t, theta, 300.0, 2.0, Budget::default()).unwrap();
        let margin = bad_margin(&r, theta, 1.0, 300.0);
        let target = 1.0 / 5f64.sqrt();
        assert!(
            (margin - target).abs() < 0.02,
            "margin {margin} vs 1/sqrt5 {target}"
        );
        // Certificate: records outside |Re| <= 2 score at least 2 L0/sqrt2.
        assert!(2.0 * 1.0 / 2f64.sqrt() > margin);
    }

    #[test]
    fn argmin_consistency_with_margin() {
        // dirichlet_search minimizes d*l, bad_margin d*l^2; the margin can
        // only improve on the witness record's score.
        let r = torus_set(10.0);
        let theta = Direction::new(0.61);
        let w = dirichlet_search(&r, theta, 10.0, 2.4).unwrap();
        let margin = bad_margin(&r, theta, 0.0, 10.0);
        assert!(margin <= w.distance * w.length * w.length + 1e-15);
    }

    #[test]
    fn qg_fitted_constant() {
        let r = torus_set(50.0);
        let report = qg_check(&r);
        let fitted = report.fitted.unwrap();
        // Unoriented direction density is ~0.955 with small-R spikes
        // (count 4 just above l = 1).
        assert!(fitted >= 0.9 && fitted < 8.0, "fitted {fitted}");
        let empty = ResonantSet::from_records(vec![], 1.0, ResonantKind::Sc, 1, None);
        assert_eq!(qg_check(&empty).fitted, Some(0.0));
    }

    #[test]
    fn iqg_on_torus_cylinders() {
        use rand::{Rng, SeedableRng};
        let t = builtin("torus").unwrap();
        let r = crate::scan::resonant_cyl(&t, 10.0, Budget::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        let mut pairs = Vec::new();
        for _ in 0..50 {
            let lo = rng.gen_range(-1.5..1.2);
            let len = rng.gen_range(0.05..0.3);
            pairs.push(((lo, lo + len), rng.gen_range(3.0..10.0)));
        }
        let report = iqg_check(&r, &pairs);
        assert!(report.passed(), "violations: {:?}", report.violations);
        assert!(report.fitted.unwrap() < 2.0);
    }

    #[test]
    fn ubiquity_empirical_on_torus() {
        let r = torus_set(110.0);
        let report = ubiquity_check(&r, 10.0, &[1, 2], &[(-0.5, 0.5), (0.0, 0.3)], 1.0);
        assert_eq!(report.mode, CheckMode::Empirical);
        assert!(report.passed(), "{:?}", report.violations);
        assert!(report.fitted.unwrap() >= 0.5);
    }

    #[test]
    fn ubiquity_single_direction_fraction() {
        // One record: the covered fraction of an interval around it is the
        // one ball, 2a/K^{2n} out of |I|.
        let rec = ResonantRecord { theta: 0.0, length: 9.0, kind: ResonantKind::Sc };
        let r = ResonantSet::from_records(vec![rec], 10.0, ResonantKind::Sc, 1, None);
        let k: f64 = 10.0;
        let radius = 3f64.sqrt() * k / k.powi(2);
        let report = ubiquity_check(&r, k, &[1], &[(-0.5, 0.5)], 1.0);
        let expect = 2.0 * radius / 1.0;
        let got = report.fitted.unwrap();
        assert!((got - expect).abs() < 1e-12, "{got} vs {expect}");
    }

    #[test]
    fn dirichlet_property_torus() {
        use rand::{Rng, SeedableRng};
        let r = torus_set(60.0);
        let eps = 0.5;
        // U = 48, tau ~ 0.036 for m = 1.
        let mut intervals = Vec::new();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..25 {
            let lo = rng.gen_range(-1.5..1.3);
            let len = rng.gen_range(0.2..0.26);
            intervals.push((lo, lo + len));
        }
        let report =
            dirichlet_property_check(&r, eps, None, None, &intervals, &[25.0, 50.0], 1.0);
        assert!(report.samples > 0);
        assert!(report.passed(), "{:?}", report.violations);
        // |I| below 2U/L^2 -> hypothesis error.
        let err = dirichlet_property_single(&r, eps, 48.0, (0.0, 0.01), 25.0, 1.0);
        assert!(matches!(err, Err(ResonantError::HypothesisNotMet { .. })));
    }

    #[test]
    fn decaying_fitted_on_torus() {
        let t = builtin("torus").unwrap();
        let eps = 0.2f64;
        let n_max = 2;
        let bound = (1.0 / eps).powi(n_max as i32);
        let r = resonant_sc(&t, bound, Budget::default()).unwrap();
        let report = decaying_check(&r, eps, 1.0, n_max, 40, 0, Some(1.0), Some(0.5));
        assert_eq!(report.mode, CheckMode::Theorem);
        assert!(report.passed());
        let fitted = report.fitted.unwrap();
        assert!(fitted.is_finite());
    }

    #[test]
    fn horocycle_fraction_trivial_and_formula() {
        let t = builtin("torus").unwrap();
        // rho' = rho: the fraction is trivially at most 1.
        let h = horocycle_systole_fraction(&t, (-1.0, 1.0), 0.9, 0.9, 200, 1.0, Budget::default())
            .unwrap();
        assert!(h.fraction <= 1.0);

        // Closed form against the direct matrix computation.
        use rand::{Rng, SeedableRng};
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            let v = PlanarVector::new(rng.gen_range(-3.0..3.0), rng.gen_range(0.1..3.0));
            let k: f64 = rng.gen_range(1.5..20.0);
            let lambda: f64 = rng.gen_range(0.1..2.0);
            let alpha: f64 = rng.gen_range(-2.0..2.0);
            let direct = crate::geom::geodesic_matrix(lambda * k.ln())
                .compose(crate::geom::horocycle_matrix(-alpha))
                .apply(v)
                .norm();
            let formula = horocycle_length_formula(v, k, lambda, alpha);
            assert!(
                (direct - formula).abs() <= 1e-10 * direct.max(1.0),
                "direct {direct} vs formula {formula}"
            );
        }
    }

    #[test]
    fn inclusion_chain_on_torus() {
        use rand::{Rng, SeedableRng};
        // Every cyl approx-solution has an sc solution in the same
        // direction with l_sc <= l_cyl, and margins order accordingly.
        let t = builtin("torus").unwrap();
        let rsc = resonant_sc(&t, 6.0, Budget::default()).unwrap();
        let rcyl = crate::scan::resonant_cyl(&t, 6.0, Budget::default()).unwrap();
        let psi = ApproximationFunction::power(2.0);
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let theta = Direction::new(rng.gen_range(-1.5..1.5));
            let sol_cyl = approx_solutions(&rcyl, theta, &psi, 6.0);
            for s in &sol_cyl {
                let l_sc = rsc.length_at(s.theta, 1e-9).expect("matching sc direction");
                assert!(l_sc <= s.length + 1e-9);
            }
            let m_sc = bad_margin(&rsc, theta, 0.0, 6.0);
            let m_cyl = bad_margin(&rcyl, theta, 0.0, 6.0);
            assert!(m_sc <= m_cyl + 1e-12);
        }
    }

    #[test]
    fn torus_oracle_agrees_with_approx_solutions() {
        // Brute-force count over oracle vectors for psi_3 at the golden
        // slope equals the library path.
        let t = builtin("torus").unwrap();
        let bound = 60.0;
        let r = resonant_sc(&t, bound, Budget::default()).unwrap();
        let alpha = crate::cf::golden_slope();
        let theta = Direction::new(alpha.atan());
        let psi = ApproximationFunction::power(3.0);
        let got = approx_solutions(&r, theta, &psi, bound).len();

        let oracle = torus_oracle(bound).unwrap();
        let mut dirs: Vec<(f64, f64)> = oracle
            .iter()
            .map(|v| (crate::geom::direction_of(*v).unwrap().angle(), v.norm()))
            .collect();
        dirs.sort_by(|a, b| a.partial_cmp(b).unwrap());
        dirs.dedup_by(|a, b| {
            if (a.0 - b.0).abs() < 1e-9 {
                b.1 = b.1.min(a.1);
                true
            } else {
                false
            }
        });
        let want = dirs
            .iter()
            .filter(|(th, l)| circle::dist(*th, theta.angle()) <= psi.eval(*l))
            .count();
        assert_eq!(got, want);
    }
}
