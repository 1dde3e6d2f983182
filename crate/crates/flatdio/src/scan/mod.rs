//! Saddle connection and cylinder enumeration, systole and shortest
//! cylinder, and the resonant sets built from them.

mod cylinder;
mod develop;
mod tri;

pub use cylinder::{cylinders_in_direction, enumerate_cylinders};
pub use tri::{trace_ray, RayEnd, RaySegment, Triangulation};

use crate::geom::{
    direction_of, geodesic_matrix, holonomy_components, rotation_matrix, Direction, PlanarVector,
};
use crate::surface::{apply_matrix, TranslationSurface};
use crate::Budget;
use serde::{Deserialize, Serialize};

#[derive(Debug, thiserror::Error)]
pub enum ScanError {
    #[error("enumeration budget exceeded after {nodes} nodes")]
    BudgetExceeded { nodes: u64 },
    #[error("resonant_cyl requires a unit-area surface (area = {area})")]
    NotUnitArea { area: f64 },
    #[error("torus oracle bound {0} exceeds the supported 1e4")]
    OracleBoundTooLarge(f64),
    #[error("surface preparation failed: {0}")]
    Surface(String),
    #[error("no saddle connection found within bound {0}")]
    Empty(f64),
}

/// An oriented saddle connection.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SaddleConnection {
    pub holonomy: PlanarVector,
    /// Start and end singularity ids.
    pub start: usize,
    pub end: usize,
    /// Number of chart crossings of the developing path.
    pub crossings: u32,
    /// The crossing sequence (triangle, exit edge), recorded on demand.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub path: Option<Vec<(usize, usize)>>,
}

impl SaddleConnection {
    pub fn length(&self) -> f64 {
        self.holonomy.norm()
    }

    pub fn direction(&self) -> Direction {
        direction_of(self.holonomy).expect("saddle connection has nonzero holonomy")
    }
}

/// A maximal flat cylinder.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Cylinder {
    pub direction: Direction,
    /// Core curve holonomy hol(sigma).
    pub holonomy: PlanarVector,
    pub circumference: f64,
    pub width: f64,
    pub area: f64,
    /// Holonomies of boundary saddle connections identified during
    /// detection (always parallel to the core).
    pub boundary: Vec<PlanarVector>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ResonantKind {
    Sc,
    Cyl,
}

/// One resonant direction with its minimal parallel length.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ResonantRecord {
    pub theta: f64,
    pub length: f64,
    pub kind: ResonantKind,
}

/// Finite truncation of a planar resonant set (R, l): deduplicated
/// directions sorted by angle, with l = the minimal length among parallel
/// representatives and all l <= length_bound.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResonantSet {
    pub records: Vec<ResonantRecord>,
    pub length_bound: f64,
    pub kind: ResonantKind,
    /// Total multiplicity of the generating surface.
    pub m: usize,
    pub surface: Option<String>,
}

impl ResonantSet {
    pub fn from_records(
        mut records: Vec<ResonantRecord>,
        length_bound: f64,
        kind: ResonantKind,
        m: usize,
        surface: Option<String>,
    ) -> Self {
        records.sort_by(|a, b| a.theta.partial_cmp(&b.theta).unwrap());
        ResonantSet { records, length_bound, kind, m, surface }
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// Records with theta in [lo, hi] (no wrap).
    pub fn in_interval(&self, lo: f64, hi: f64) -> &[ResonantRecord] {
        let a = self.records.partition_point(|r| r.theta < lo);
        let b = self.records.partition_point(|r| r.theta <= hi);
        &self.records[a..b]
    }

    /// Minimal length at a direction matching within the parallel
    /// tolerance, if the direction is resonant at this truncation.
    pub fn length_at(&self, theta: f64, tol: f64) -> Option<f64> {
        let lo = theta - tol;
        let hi = theta + tol;
        let mut best: Option<f64> = None;
        for r in self.in_interval(lo, hi) {
            best = Some(best.map_or(r.length, |b: f64| b.min(r.length)));
        }
        // Wrap-around near the circle seam.
        let half = std::f64::consts::FRAC_PI_2;
        if theta - tol < -half || theta + tol > half {
            for r in &self.records {
                if crate::circle::dist(r.theta, theta) <= tol {
                    best = Some(best.map_or(r.length, |b: f64| b.min(r.length)));
                }
            }
        }
        best
    }
}

fn dedup_directions(holonomies: impl Iterator<Item = PlanarVector>) -> Vec<(f64, f64)> {
    let mut pairs: Vec<(f64, f64)> = holonomies
        .map(|v| (direction_of(v).expect("nonzero").angle(), v.norm()))
        .collect();
    pairs.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let mut out: Vec<(f64, f64)> = Vec::new();
    for (theta, len) in pairs {
        match out.last_mut() {
            // Angular tolerance matching the parallel-holonomy criterion.
            Some((t, l)) if (theta - *t).abs() <= 1e-9 => *l = l.min(len),
            _ => out.push((theta, len)),
        }
    }
    // The seam -pi/2 ~ +pi/2: directions within tolerance at both ends are
    // the same class.
    if out.len() > 1 {
        let first = out[0];
        let last = *out.last().unwrap();
        if (first.0 + std::f64::consts::FRAC_PI_2).abs() <= 1e-9
            && (last.0 - std::f64::consts::FRAC_PI_2).abs() <= 1e-9
        {
            out[0].1 = first.1.min(last.1);
            out.pop();
        }
    }
    out
}

/// Exactly the oriented saddle connections with |hol| <= bound.
pub fn enumerate_saddle_connections(
    x: &TranslationSurface,
    bound: f64,
    budget: Budget,
) -> Result<Vec<SaddleConnection>, ScanError> {
    enumerate_saddle_connections_with(x, bound, budget, false)
}

pub fn enumerate_saddle_connections_with(
    x: &TranslationSurface,
    bound: f64,
    budget: Budget,
    record_paths: bool,
) -> Result<Vec<SaddleConnection>, ScanError> {
    let tr = Triangulation::build(x).map_err(|e| ScanError::Surface(e.to_string()))?;
    let mut dev = develop::Developer { tr: &tr, budget: budget.0, nodes: 0, record_paths };
    let mut out = dev.enumerate(bound)?;
    out.sort_by(|a, b| {
        (a.length(), a.holonomy.x, a.holonomy.y)
            .partial_cmp(&(b.length(), b.holonomy.x, b.holonomy.y))
            .unwrap()
    });
    Ok(out)
}

/// Saddle connections with |Re(theta, hol)| <= re_bound and
/// |Im(theta, hol)| <= im_bound: the surface is renormalized by
/// g_s r_theta with e^s = sqrt(im_bound/re_bound), turning the box into a
/// disk of radius sqrt(2 re_bound im_bound).
pub fn enumerate_in_box(
    x: &TranslationSurface,
    theta: Direction,
    re_bound: f64,
    im_bound: f64,
    budget: Budget,
) -> Result<Vec<SaddleConnection>, ScanError> {
    assert!(re_bound > 0.0 && im_bound > 0.0);
    let s = 0.5 * (im_bound / re_bound).ln();
    let g = geodesic_matrix(s).compose(rotation_matrix(theta.angle()));
    let y = apply_matrix(g, x).map_err(|e| ScanError::Surface(e.to_string()))?;
    let disk = (2.0 * re_bound * im_bound).sqrt() * (1.0 + 1e-12);
    let inv = g.inverse();
    let mut out = enumerate_saddle_connections(&y, disk, budget)?;
    out.iter_mut().for_each(|sc| sc.holonomy = inv.apply(sc.holonomy));
    out.retain(|sc| {
        let (re, im) = holonomy_components(theta, sc.holonomy);
        re.abs() <= re_bound && im.abs() <= im_bound
    });
    Ok(out)
}

/// Length of the shortest saddle connection. The shortest triangulation
/// edge is itself a saddle connection, so enumerating up to it suffices.
pub fn systole(x: &TranslationSurface, budget: Budget) -> Result<f64, ScanError> {
    let tr = Triangulation::build(x).map_err(|e| ScanError::Surface(e.to_string()))?;
    let bound = tr.min_edge * (1.0 + 1e-12);
    let scs = enumerate_saddle_connections(x, bound, budget)?;
    scs.first().map(|sc| sc.length()).ok_or(ScanError::Empty(bound))
}

/// The resonant set R^sc: every saddle connection direction with minimal
/// length <= bound.
pub fn resonant_sc(
    x: &TranslationSurface,
    bound: f64,
    budget: Budget,
) -> Result<ResonantSet, ScanError> {
    let scs = enumerate_saddle_connections(x, bound, budget)?;
    let records = dedup_directions(scs.iter().map(|sc| sc.holonomy))
        .into_iter()
        .map(|(theta, length)| ResonantRecord { theta, length, kind: ResonantKind::Sc })
        .collect();
    Ok(ResonantSet::from_records(records, bound, ResonantKind::Sc, x.m, x.name.clone()))
}

/// The resonant set R^cyl: directions carrying a cylinder of area > 1/m,
/// with l = the minimal circumference among cylinders in the direction.
/// Requires a unit-area surface (the area filter presumes area one).
pub fn resonant_cyl(
    x: &TranslationSurface,
    bound: f64,
    budget: Budget,
) -> Result<ResonantSet, ScanError> {
    if (x.area - 1.0).abs() > 1e-9 {
        return Err(ScanError::NotUnitArea { area: x.area });
    }
    let cyls = enumerate_cylinders(x, bound, budget)?;
    // Strict area filter, with a 1e-9 grace so that exact equality (the
    // torus, whose cylinders all have area exactly 1/m = 1) is kept.
    let threshold = (1.0 / x.m as f64) * (1.0 - 1e-9);
    let mut per_dir: Vec<(f64, f64, bool)> = Vec::new(); // theta, min circ, has big-area
    let mut sorted: Vec<&Cylinder> = cyls.iter().collect();
    sorted.sort_by(|a, b| a.direction.angle().partial_cmp(&b.direction.angle()).unwrap());
    for c in sorted {
        let theta = c.direction.angle();
        match per_dir.last_mut() {
            Some((t, l, big)) if (theta - *t).abs() <= 1e-9 => {
                *l = l.min(c.circumference);
                *big = *big || c.area > threshold;
            }
            _ => per_dir.push((theta, c.circumference, c.area > threshold)),
        }
    }
    let records = per_dir
        .into_iter()
        .filter(|&(_, _, big)| big)
        .map(|(theta, length, _)| ResonantRecord { theta, length, kind: ResonantKind::Cyl })
        .collect();
    Ok(ResonantSet::from_records(records, bound, ResonantKind::Cyl, x.m, x.name.clone()))
}

/// cyl(X) = min l over R^cyl, found with a doubling length search.
pub fn cyl_shortest(x: &TranslationSurface, budget: Budget) -> Result<f64, ScanError> {
    let mut bound = systole(x, budget)?.max(1e-3);
    for _ in 0..40 {
        let set = resonant_cyl(x, bound, budget)?;
        if let Some(min) = set
            .records
            .iter()
            .map(|r| r.length)
            .min_by(|a, b| a.partial_cmp(b).unwrap())
        {
            return Ok(min);
        }
        bound *= 2.0;
    }
    Err(ScanError::Empty(bound))
}

/// Primitive lattice vectors (p, q), gcd = 1, |v| <= bound: the exact
/// saddle connection holonomies of the unit square torus.
pub fn torus_oracle(bound: f64) -> Result<Vec<PlanarVector>, ScanError> {
    if bound > 1e4 {
        return Err(ScanError::OracleBoundTooLarge(bound));
    }
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 { a.abs() } else { gcd(b, a % b) }
    }
    let n = bound.floor() as i64;
    let b2 = bound * bound;
    let mut out = Vec::new();
    for p in -n..=n {
        for q in -n..=n {
            if (p == 0 && q == 0) || (p * p + q * q) as f64 > b2 {
                continue;
            }
            if gcd(p, q) == 1 {
                out.push(PlanarVector::new(p as f64, q as f64));
            }
        }
    }
    out.sort_by(|a, b| (a.norm(), a.x, a.y).partial_cmp(&(b.norm(), b.x, b.y)).unwrap());
    Ok(out)
}

/// Saddle connection records near a direction: all records of R^sc
/// (truncated at `bound`) whose representative satisfies
/// |Re(theta, hol)| <= re_bound. Records outside the window have
/// |theta_v - theta| l^2 >= re_bound * l / sqrt(2) and cannot matter for
/// margins below that certificate.
pub fn resonant_sc_near(
    x: &TranslationSurface,
    theta: Direction,
    bound: f64,
    re_bound: f64,
    budget: Budget,
) -> Result<ResonantSet, ScanError> {
    let scs = enumerate_in_box(x, theta, re_bound, bound * (1.0 + 1e-12), budget)?;
    let records = dedup_directions(
        scs.iter().filter(|sc| sc.length() <= bound).map(|sc| sc.holonomy),
    )
    .into_iter()
    .map(|(t, length)| ResonantRecord { theta: t, length, kind: ResonantKind::Sc })
    .collect();
    Ok(ResonantSet::from_records(records, bound, ResonantKind::Sc, x.m, x.name.clone()))
}

/// CSV export: kind,theta,re,im,length,width,area. Saddle connection rows
/// leave width/area empty; cylinder rows fill all columns.
pub fn to_csv(connections: &[SaddleConnection], cylinders: &[Cylinder]) -> String {
    let mut out = String::from("kind,theta,re,im,length,width,area\n");
    for sc in connections {
        let theta = sc.direction().angle();
        out.push_str(&format!(
            "sc,{},{},{},{},,\n",
            theta,
            sc.holonomy.x,
            sc.holonomy.y,
            sc.length()
        ));
    }
    for c in cylinders {
        out.push_str(&format!(
            "cyl,{},{},{},{},{},{}\n",
            c.direction.angle(),
            c.holonomy.x,
            c.holonomy.y,
            c.circumference,
            c.width,
            c.area
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::{builtin, normalize_area};

    fn holonomy_multiset(scs: &[SaddleConnection]) -> Vec<(i64, i64)> {
        let mut v: Vec<(i64, i64)> = scs
            .iter()
            .map(|sc| {
                (
                    (sc.holonomy.x * 1e6).round() as i64,
                    (sc.holonomy.y * 1e6).round() as i64,
                )
            })
            .collect();
        v.sort_unstable();
        v
    }

    #[test]
    fn torus_small_bound_exact_set() {
        let t = builtin("torus").unwrap();
        let scs = enumerate_saddle_connections(&t, 1.5, Budget::default()).unwrap();
        let expected: [(f64, f64); 8] = [
            (1.0, 0.0),
            (-1.0, 0.0),
            (0.0, 1.0),
            (0.0, -1.0),
            (1.0, 1.0),
            (-1.0, -1.0),
            (1.0, -1.0),
            (-1.0, 1.0),
        ];
        assert_eq!(scs.len(), 8);
        let got = holonomy_multiset(&scs);
        let mut want: Vec<(i64, i64)> = expected
            .iter()
            .map(|&(x, y)| ((x * 1e6).round() as i64, (y * 1e6).round() as i64))
            .collect();
        want.sort_unstable();
        assert_eq!(got, want);
    }

    #[test]
    fn torus_matches_oracle_at_ten() {
        let t = builtin("torus").unwrap();
        let scs = enumerate_saddle_connections(&t, 10.0, Budget::default()).unwrap();
        let oracle = torus_oracle(10.0).unwrap();
        let got = holonomy_multiset(&scs);
        let mut want: Vec<(i64, i64)> = oracle
            .iter()
            .map(|v| ((v.x * 1e6).round() as i64, (v.y * 1e6).round() as i64))
            .collect();
        want.sort_unstable();
        assert_eq!(got, want);
    }

    #[test]
    fn below_systole_is_empty() {
        let t = builtin("torus").unwrap();
        let scs = enumerate_saddle_connections(&t, 0.9, Budget::default()).unwrap();
        assert!(scs.is_empty());
    }

    #[test]
    fn systole_examples() {
        let t = builtin("torus").unwrap();
        assert!((systole(&t, Budget::default()).unwrap() - 1.0).abs() < 1e-12);
        let g = crate::geom::geodesic_matrix(2f64.ln());
        let squeezed = apply_matrix(g, &t).unwrap();
        assert!((systole(&squeezed, Budget::default()).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn sys_below_s0_on_unit_builtins() {
        for name in ["torus", "octagon", "double-pentagon", "L(2,3)"] {
            let x = normalize_area(&builtin(name).unwrap()).unwrap();
            let sys = systole(&x, Budget::default()).unwrap();
            assert!(sys <= x.s0() + 1e-12, "{name}: sys {sys} > S0 {}", x.s0());
        }
    }

    #[test]
    fn torus_oracle_counts() {
        let o = torus_oracle(1.0).unwrap();
        assert_eq!(o.len(), 4);
        let o = torus_oracle(2.5).unwrap();
        for v in [(1.0, 2.0), (2.0, 1.0), (1.0, -2.0), (2.0, -1.0)] {
            assert!(o.iter().any(|w| w.x == v.0 && w.y == v.1));
        }
        // Oriented density: count / L^2 ~ (6/pi^2) * pi = 1.9099.
        let ratio = torus_oracle(200.0).unwrap().len() as f64 / (200.0 * 200.0);
        assert!((1.87..=1.95).contains(&ratio), "ratio {ratio}");
    }

    #[test]
    fn torus_vertical_cylinder() {
        let t = builtin("torus").unwrap();
        let cyls = cylinders_in_direction(&t, Direction::new(0.0), 1.0 + 1e-9).unwrap();
        assert_eq!(cyls.len(), 1);
        let c = &cyls[0];
        assert!((c.circumference - 1.0).abs() < 1e-9);
        assert!((c.width - 1.0).abs() < 1e-9);
        assert!((c.area - 1.0).abs() < 1e-9);
    }

    #[test]
    fn torus_slope_two_cylinder() {
        let t = builtin("torus").unwrap();
        let v = PlanarVector::new(1.0, 2.0);
        let theta = direction_of(v).unwrap();
        let cyls = cylinders_in_direction(&t, theta, 5f64.sqrt() * (1.0 + 1e-9)).unwrap();
        assert_eq!(cyls.len(), 1);
        let c = &cyls[0];
        assert!((c.circumference - 5f64.sqrt()).abs() < 1e-9);
        assert!((c.width - 1.0 / 5f64.sqrt()).abs() < 1e-9);
        assert!((c.area - 1.0).abs() < 1e-9);
    }

    #[test]
    fn octagon_vertical_decomposition_fills_area() {
        let o = builtin("octagon").unwrap();
        // Vertical cylinders have circumference below twice the diameter.
        let cyls = cylinders_in_direction(&o, Direction::new(0.0), 8.0).unwrap();
        assert!(!cyls.is_empty());
        let total: f64 = cyls.iter().map(|c| c.area).sum();
        assert!(
            (total - o.area).abs() < 1e-6,
            "vertical cylinders fill the octagon: {total} vs {}",
            o.area
        );
        for c in &cyls {
            assert!(c.area <= o.area + 1e-9);
        }
    }

    #[test]
    fn torus_resonant_sets_coincide() {
        let t = builtin("torus").unwrap();
        let rsc = resonant_sc(&t, 5.0, Budget::default()).unwrap();
        let rcyl = resonant_cyl(&t, 5.0, Budget::default()).unwrap();
        assert_eq!(rsc.len(), rcyl.len());
        for (a, b) in rsc.records.iter().zip(&rcyl.records) {
            assert!((a.theta - b.theta).abs() < 1e-9);
            assert!((a.length - b.length).abs() < 1e-9);
        }
    }

    #[test]
    fn cyl_inclusion_in_sc() {
        // Image of R^cyl in R^sc has l_sc <= l_cyl.
        for name in ["torus", "octagon"] {
            let x = normalize_area(&builtin(name).unwrap()).unwrap();
            let bound = if name == "torus" { 6.0 } else { 4.0 };
            let rsc = resonant_sc(&x, bound, Budget::default()).unwrap();
            let rcyl = resonant_cyl(&x, bound, Budget::default()).unwrap();
            assert!(!rcyl.is_empty(), "{name} has cylinders");
            for r in &rcyl.records {
                let lsc = rsc
                    .length_at(r.theta, 1e-9)
                    .unwrap_or_else(|| panic!("{name}: cyl direction missing in sc"));
                assert!(lsc <= r.length + 1e-9);
            }
        }
    }

    #[test]
    fn cyl_shortest_examples() {
        let t = builtin("torus").unwrap();
        assert!((cyl_shortest(&t, Budget::default()).unwrap() - 1.0).abs() < 1e-9);
        let g = crate::geom::geodesic_matrix(0.4);
        let gt = apply_matrix(g, &t).unwrap();
        assert!((cyl_shortest(&gt, Budget::default()).unwrap() - (-0.4f64).exp()).abs() < 1e-9);
    }

    #[test]
    fn equivariance_under_sl2() {
        use rand::{Rng, SeedableRng};
        let t = builtin("torus").unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..5 {
            let g = crate::geom::rotation_matrix(rng.gen_range(-1.0..1.0))
                .compose(crate::geom::geodesic_matrix(rng.gen_range(-0.3..0.3)))
                .compose(crate::geom::horocycle_matrix(rng.gen_range(-0.5..0.5)));
            let gx = apply_matrix(g, &t).unwrap();
            let bound = 5.0;
            let left = enumerate_saddle_connections(&gx, bound, Budget::default()).unwrap();
            // G . (holonomies of X), filtered to length <= bound.
            let inv_norm = g.inverse().max_entry() * 2.0;
            let big =
                enumerate_saddle_connections(&t, bound * inv_norm, Budget::default()).unwrap();
            let right: Vec<PlanarVector> = big
                .iter()
                .map(|sc| g.apply(sc.holonomy))
                .filter(|v| v.norm() <= bound)
                .collect();
            assert_eq!(left.len(), right.len());
            // Multiset equality with rounding.
            let round = |v: &PlanarVector| ((v.x * 1e7).round() as i64, (v.y * 1e7).round() as i64);
            let mut a: Vec<_> = left.iter().map(|sc| round(&sc.holonomy)).collect();
            let mut b: Vec<_> = right.iter().map(round).collect();
            a.sort_unstable();
            b.sort_unstable();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn box_enumeration_matches_filtered_disk() {
        let t = builtin("torus").unwrap();
        let theta = Direction::new(0.3);
        let boxed = enumerate_in_box(&t, theta, 0.8, 12.0, Budget::default()).unwrap();
        let disk = enumerate_saddle_connections(&t, 12.5, Budget::default()).unwrap();
        let expected: Vec<PlanarVector> = disk
            .iter()
            .map(|sc| sc.holonomy)
            .filter(|v| {
                let (re, im) = holonomy_components(theta, *v);
                re.abs() <= 0.8 && im.abs() <= 12.0
            })
            .collect();
        assert_eq!(boxed.len(), expected.len());
    }

    #[test]
    fn parallel_class_sizes_small_on_builtins() {
        // Class sizes are reported; the 4g-4 bound is asserted only where
        // there are no marked points (octagon: 4g-4 = 4 unoriented).
        let o = builtin("octagon").unwrap();
        let scs = enumerate_saddle_connections(&o, 4.0, Budget::default()).unwrap();
        let mut classes: std::collections::HashMap<i64, usize> = Default::default();
        for sc in &scs {
            let theta = sc.direction().angle();
            *classes.entry((theta * 1e9).round() as i64).or_default() += 1;
        }
        for (_, oriented_count) in classes {
            let unoriented = oriented_count / 2;
            assert!(unoriented <= 4 * o.genus - 4, "class size {unoriented}");
        }
    }

    #[test]
    fn quadratic_growth_bounded() {
        let t = builtin("torus").unwrap();
        let mut last = 0.0f64;
        for bound in [25.0, 50.0, 100.0] {
            let n = enumerate_saddle_connections(&t, bound, Budget::default())
                .unwrap()
                .len();
            let ratio = n as f64 / (bound * bound);
            assert!(ratio < 3.0, "counting ratio {ratio}");
            last = ratio;
        }
        // Density approaches 6/pi^2 * pi; just check stability.
        assert!((last - 1.9099).abs() < 0.15);
    }

    #[test]
    fn csv_has_all_columns() {
        let t = builtin("torus").unwrap();
        let scs = enumerate_saddle_connections(&t, 1.5, Budget::default()).unwrap();
        let cyls = cylinders_in_direction(&t, Direction::new(0.0), 1.1).unwrap();
        let csv = to_csv(&scs, &cyls);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "kind,theta,re,im,length,width,area");
        assert_eq!(lines.len(), 1 + scs.len() + cyls.len());
        assert!(lines.iter().skip(1).all(|l| l.split(',').count() == 7));
    }
}
