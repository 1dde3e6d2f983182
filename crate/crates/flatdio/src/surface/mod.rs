//! Translation surfaces as identified polygons.
//!
//! A presentation is a list of simple, positively oriented vertex loops
//! together with edge pairings; paired edges must carry opposite edge
//! vectors (equal side vectors with the interiors on opposite sides).
//! Building a surface walks corner cycles through the identifications to
//! group vertices into conical singularities, then derives area, genus,
//! total multiplicity m and the stratum signature.

mod unfold;

pub use unfold::{unfold_rational_polygon, RationalPolygon, UnfoldOptions};

use crate::geom::{AreaPreservingMatrix, PlanarVector};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, thiserror::Error)]
pub enum SurfaceError {
    #[error("edge ({0}, {1}) appears in {2} pairings, expected exactly one")]
    UnpairedEdge(usize, usize, usize),
    #[error("invalid pairing: edges ({0}, {1}) and ({2}, {3}) do not carry opposite equal vectors")]
    InvalidPairing(usize, usize, usize, usize),
    #[error("polygon {0} is not simple")]
    NonSimplePolygon(usize),
    #[error("polygon {0} is not positively oriented")]
    InconsistentOrientation(usize),
    #[error("polygon {0} has fewer than 3 vertices")]
    DegeneratePolygon(usize),
    #[error("pairing references edge ({0}, {1}) out of range")]
    EdgeOutOfRange(usize, usize),
    #[error("unknown builtin surface `{0}`")]
    UnknownSurface(String),
    #[error("degenerate builtin parameters: {0}")]
    DegenerateParameters(String),
    #[error("angle {0}/{1} pi does not match the polygon geometry")]
    IrrationalAngle(i64, i64),
    #[error("reflection group size exceeds cap {0}")]
    GroupTooLarge(usize),
    #[error("surface io: {0}")]
    Io(#[from] std::io::Error),
    #[error("surface file parse: {0}")]
    Parse(#[from] serde_json::Error),
}

/// Identifies edge `ei` of polygon `pi` with edge `ej` of polygon `pj`.
pub type Pairing = ((usize, usize), (usize, usize));

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PolygonPresentation {
    pub polygons: Vec<Vec<PlanarVector>>,
    pub pairings: Vec<Pairing>,
}

impl PolygonPresentation {
    pub fn edge_vector(&self, poly: usize, edge: usize) -> PlanarVector {
        let loop_ = &self.polygons[poly];
        let n = loop_.len();
        loop_[(edge + 1) % n] - loop_[edge]
    }

    /// Largest pairwise vertex distance; scales the pairing tolerance.
    pub fn diameter(&self) -> f64 {
        let mut d = 0.0f64;
        for p in &self.polygons {
            for a in p {
                for b in p {
                    d = d.max((*a - *b).norm());
                }
            }
        }
        d
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Singularity {
    pub id: usize,
    /// Incident polygon corners (polygon, vertex) in cyclic walk order.
    pub corners: Vec<(usize, usize)>,
    pub cone_angle: f64,
}

impl Singularity {
    /// Zero order k with cone angle 2 pi (k + 1).
    pub fn order(&self) -> usize {
        (self.cone_angle / (2.0 * PI)).round() as usize - 1
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TranslationSurface {
    pub presentation: PolygonPresentation,
    pub singularities: Vec<Singularity>,
    pub area: f64,
    pub genus: usize,
    /// Total multiplicity m = 2g - 2 + #singularities.
    pub m: usize,
    /// Multiset of zero orders, sorted descending; marked regular points
    /// contribute a 0 so the flat torus sits in stratum H(0).
    pub stratum: Vec<usize>,
    pub name: Option<String>,
}

impl TranslationSurface {
    /// S0 = sqrt(2) / sqrt(m sqrt(3)); on unit-area surfaces sys(X) <= S0.
    pub fn s0(&self) -> f64 {
        (2.0 / (self.m as f64 * 3f64.sqrt())).sqrt()
    }

    /// T0 = 2^(2^(4m)); every unit-area surface has cyl(X) <= T0. Saturates
    /// to f64::INFINITY already for m >= 3, which is fine for gating.
    pub fn t0(&self) -> f64 {
        2f64.powf(2f64.powi(4 * self.m as i32))
    }

    /// beta = 1 / (3m - 1), the decaying exponent of the stratum.
    pub fn beta(&self) -> f64 {
        1.0 / (3.0 * self.m as f64 - 1.0)
    }

    pub fn singularity_of_corner(&self, poly: usize, vertex: usize) -> usize {
        self.singularities
            .iter()
            .find(|s| s.corners.contains(&(poly, vertex)))
            .map(|s| s.id)
            .expect("corner not assigned to a singularity")
    }
}

fn shoelace_area(loop_: &[PlanarVector]) -> f64 {
    let n = loop_.len();
    let mut a = 0.0;
    for i in 0..n {
        a += loop_[i].cross(loop_[(i + 1) % n]);
    }
    a / 2.0
}

fn segments_properly_intersect(a: PlanarVector, b: PlanarVector, c: PlanarVector, d: PlanarVector) -> bool {
    let side = |p: PlanarVector, q: PlanarVector, r: PlanarVector| (q - p).cross(r - p);
    let d1 = side(a, b, c);
    let d2 = side(a, b, d);
    let d3 = side(c, d, a);
    let d4 = side(c, d, b);
    d1 * d2 < 0.0 && d3 * d4 < 0.0
}

fn validate_polygon(idx: usize, loop_: &[PlanarVector]) -> Result<(), SurfaceError> {
    if loop_.len() < 3 {
        return Err(SurfaceError::DegeneratePolygon(idx));
    }
    if shoelace_area(loop_) <= 0.0 {
        return Err(SurfaceError::InconsistentOrientation(idx));
    }
    let n = loop_.len();
    for i in 0..n {
        if (loop_[(i + 1) % n] - loop_[i]).norm() == 0.0 {
            return Err(SurfaceError::DegeneratePolygon(idx));
        }
        for j in i + 1..n {
            // Skip adjacent edges; collinear consecutive vertices are allowed.
            if j == i || (j + 1) % n == i || (i + 1) % n == j {
                continue;
            }
            if segments_properly_intersect(
                loop_[i],
                loop_[(i + 1) % n],
                loop_[j],
                loop_[(j + 1) % n],
            ) {
                return Err(SurfaceError::NonSimplePolygon(idx));
            }
        }
    }
    Ok(())
}

/// Build a surface from a presentation: validate, walk corner cycles,
/// derive genus from the Euler characteristic of the induced cell complex.
pub fn build_surface(p: PolygonPresentation) -> Result<TranslationSurface, SurfaceError> {
    build_named(p, None)
}

pub fn build_named(
    p: PolygonPresentation,
    name: Option<String>,
) -> Result<TranslationSurface, SurfaceError> {
    for (i, loop_) in p.polygons.iter().enumerate() {
        validate_polygon(i, loop_)?;
    }

    // Every edge in exactly one pairing.
    let mut seen = std::collections::HashMap::new();
    for &((pi, ei), (pj, ej)) in &p.pairings {
        for (pp, ee) in [(pi, ei), (pj, ej)] {
            if pp >= p.polygons.len() || ee >= p.polygons[pp].len() {
                return Err(SurfaceError::EdgeOutOfRange(pp, ee));
            }
            *seen.entry((pp, ee)).or_insert(0usize) += 1;
        }
    }
    for (pi, loop_) in p.polygons.iter().enumerate() {
        for ei in 0..loop_.len() {
            let count = seen.get(&(pi, ei)).copied().unwrap_or(0);
            if count != 1 {
                return Err(SurfaceError::UnpairedEdge(pi, ei, count));
            }
        }
    }

    // Paired edges carry opposite vectors, tolerance scaled by diameter.
    let tol = 1e-9 * p.diameter().max(1.0);
    for &((pi, ei), (pj, ej)) in &p.pairings {
        let sum = p.edge_vector(pi, ei) + p.edge_vector(pj, ej);
        if sum.norm() > tol {
            return Err(SurfaceError::InvalidPairing(pi, ei, pj, ej));
        }
    }

    // twin[(poly, edge)] lookup.
    let mut twin = std::collections::HashMap::new();
    for &(a, b) in &p.pairings {
        twin.insert(a, b);
        twin.insert(b, a);
    }

    // Corner cycle walk. From corner (poly, v) follow the outgoing edge
    // (poly, v); its start vertex glues to the end vertex of the twin edge,
    // giving the next corner around the same surface point.
    let mut corner_seen = std::collections::HashSet::new();
    let mut singularities = Vec::new();
    for (pi, loop_) in p.polygons.iter().enumerate() {
        for v in 0..loop_.len() {
            if corner_seen.contains(&(pi, v)) {
                continue;
            }
            let mut corners = Vec::new();
            let mut angle = 0.0;
            let (mut cp, mut cv) = (pi, v);
            loop {
                corner_seen.insert((cp, cv));
                corners.push((cp, cv));
                let n = p.polygons[cp].len();
                let here = p.polygons[cp][cv];
                let next = p.polygons[cp][(cv + 1) % n];
                let prev = p.polygons[cp][(cv + n - 1) % n];
                let out = next - here;
                let inc = prev - here;
                // Interior angle at the corner, in (0, 2 pi).
                let raw = inc.cross(out).atan2(inc.dot(out));
                let interior = if raw <= 0.0 { -raw } else { 2.0 * PI - raw };
                angle += interior;
                let (tp, te) = twin[&(cp, cv)];
                let tn = p.polygons[tp].len();
                (cp, cv) = (tp, (te + 1) % tn);
                if (cp, cv) == (pi, v) {
                    break;
                }
            }
            let id = singularities.len();
            singularities.push(Singularity { id, corners, cone_angle: angle });
        }
    }

    // Snap cone angles to multiples of 2 pi (they are exact up to float
    // noise for a valid presentation).
    for s in &mut singularities {
        let k = (s.cone_angle / (2.0 * PI)).round();
        debug_assert!(
            (s.cone_angle - 2.0 * PI * k).abs() < 1e-6 * k.max(1.0),
            "cone angle {} far from multiple of 2pi",
            s.cone_angle
        );
        s.cone_angle = 2.0 * PI * k;
    }

    let v = singularities.len();
    let e = p.pairings.len();
    let f = p.polygons.len();
    let euler = v as i64 - e as i64 + f as i64;
    let genus = ((2 - euler) / 2) as usize;
    let area: f64 = p.polygons.iter().map(|l| shoelace_area(l)).sum();
    let mut stratum: Vec<usize> = singularities.iter().map(|s| s.order()).collect();
    stratum.sort_unstable_by(|a, b| b.cmp(a));
    let m = 2 * genus - 2 + singularities.len();

    debug_assert_eq!(
        stratum.iter().sum::<usize>(),
        2 * genus - 2,
        "Gauss-Bonnet violated"
    );

    Ok(TranslationSurface {
        presentation: p,
        singularities,
        area,
        genus,
        m,
        stratum,
        name,
    })
}

/// Affine image G.X: map all vertex coordinates, keep the pairings.
pub fn apply_matrix(
    g: AreaPreservingMatrix,
    x: &TranslationSurface,
) -> Result<TranslationSurface, SurfaceError> {
    let polygons = x
        .presentation
        .polygons
        .iter()
        .map(|l| l.iter().map(|&v| g.apply(v)).collect())
        .collect();
    build_named(
        PolygonPresentation { polygons, pairings: x.presentation.pairings.clone() },
        x.name.clone(),
    )
}

/// Scale so that area(X) = 1.
pub fn normalize_area(x: &TranslationSurface) -> Result<TranslationSurface, SurfaceError> {
    let s = 1.0 / x.area.sqrt();
    let polygons = x
        .presentation
        .polygons
        .iter()
        .map(|l| l.iter().map(|&v| v.scale(s)).collect())
        .collect();
    build_named(
        PolygonPresentation { polygons, pairings: x.presentation.pairings.clone() },
        x.name.clone(),
    )
}

fn regular_ngon(n: usize, side: f64) -> Vec<PlanarVector> {
    // Circumradius for given side length; first vertex chosen so that the
    // bottom edge is horizontal.
    let r = side / (2.0 * (PI / n as f64).sin());
    let offset = -PI / 2.0 + PI / n as f64;
    (0..n)
        .map(|k| {
            let a = offset + 2.0 * PI * k as f64 / n as f64;
            PlanarVector::new(r * a.cos(), r * a.sin())
        })
        .collect()
}

/// Library of test surfaces: `torus`, `octagon`, `double-pentagon`,
/// `L(a,b)` with a, b > 1.
pub fn builtin(name: &str) -> Result<TranslationSurface, SurfaceError> {
    let trimmed = name.trim();
    if let Some(args) = trimmed.strip_prefix("L(").and_then(|s| s.strip_suffix(')')) {
        let parts: Vec<&str> = args.split(',').collect();
        if parts.len() != 2 {
            return Err(SurfaceError::UnknownSurface(name.to_string()));
        }
        let a: f64 = parts[0]
            .trim()
            .parse()
            .map_err(|_| SurfaceError::UnknownSurface(name.to_string()))?;
        let b: f64 = parts[1]
            .trim()
            .parse()
            .map_err(|_| SurfaceError::UnknownSurface(name.to_string()))?;
        return l_shaped(a, b);
    }
    match trimmed {
        "torus" => {
            let square = vec![
                PlanarVector::new(0.0, 0.0),
                PlanarVector::new(1.0, 0.0),
                PlanarVector::new(1.0, 1.0),
                PlanarVector::new(0.0, 1.0),
            ];
            build_named(
                PolygonPresentation {
                    polygons: vec![square],
                    pairings: vec![((0, 0), (0, 2)), ((0, 1), (0, 3))],
                },
                Some("torus".into()),
            )
        }
        "octagon" => {
            let oct = regular_ngon(8, 1.0);
            build_named(
                PolygonPresentation {
                    polygons: vec![oct],
                    pairings: (0..4).map(|e| ((0, e), (0, e + 4))).collect(),
                },
                Some("octagon".into()),
            )
        }
        "double-pentagon" => {
            let pent = regular_ngon(5, 1.0);
            let flipped: Vec<PlanarVector> = pent.iter().map(|&v| -v).collect();
            // -P traversed in the same vertex order stays positively
            // oriented; edge k of P is parallel-opposite to edge k of -P.
            build_named(
                PolygonPresentation {
                    polygons: vec![pent, flipped],
                    pairings: (0..5).map(|e| ((0, e), (1, e))).collect(),
                },
                Some("double-pentagon".into()),
            )
        }
        other => Err(SurfaceError::UnknownSurface(other.to_string())),
    }
}

/// L-shaped surface: unit square extended to width a and height b, with
/// split bottom and left sides so every pairing matches in length.
fn l_shaped(a: f64, b: f64) -> Result<TranslationSurface, SurfaceError> {
    if !(a > 1.0) || !(b > 1.0) {
        return Err(SurfaceError::DegenerateParameters(format!(
            "L(a,b) requires a > 1 and b > 1, got a={a}, b={b}"
        )));
    }
    let poly = vec![
        PlanarVector::new(0.0, 0.0),
        PlanarVector::new(1.0, 0.0),
        PlanarVector::new(a, 0.0),
        PlanarVector::new(a, 1.0),
        PlanarVector::new(1.0, 1.0),
        PlanarVector::new(1.0, b),
        PlanarVector::new(0.0, b),
        PlanarVector::new(0.0, 1.0),
    ];
    build_named(
        PolygonPresentation {
            polygons: vec![poly],
            pairings: vec![
                ((0, 0), (0, 5)), // bottom-left <-> top
                ((0, 1), (0, 3)), // bottom-right <-> middle-top
                ((0, 2), (0, 7)), // right-lower <-> left-lower
                ((0, 4), (0, 6)), // right-upper <-> left-upper
            ],
        },
        Some(format!("L({a},{b})")),
    )
}

#[derive(Serialize, Deserialize)]
struct SurfaceFile {
    polygons: Vec<Vec<[f64; 2]>>,
    pairings: Vec<[usize; 4]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

/// Parse the JSON surface format: keys `polygons`, `pairings`, optional
/// `name`; pairings as [pi, ei, pj, ej].
pub fn from_json(text: &str) -> Result<TranslationSurface, SurfaceError> {
    let file: SurfaceFile = serde_json::from_str(text)?;
    let polygons = file
        .polygons
        .into_iter()
        .map(|l| l.into_iter().map(|[x, y]| PlanarVector::new(x, y)).collect())
        .collect();
    let pairings = file
        .pairings
        .into_iter()
        .map(|[pi, ei, pj, ej]| ((pi, ei), (pj, ej)))
        .collect();
    build_named(PolygonPresentation { polygons, pairings }, file.name)
}

pub fn to_json(x: &TranslationSurface) -> String {
    let file = SurfaceFile {
        polygons: x
            .presentation
            .polygons
            .iter()
            .map(|l| l.iter().map(|v| [v.x, v.y]).collect())
            .collect(),
        pairings: x
            .presentation
            .pairings
            .iter()
            .map(|&((pi, ei), (pj, ej))| [pi, ei, pj, ej])
            .collect(),
        name: x.name.clone(),
    };
    serde_json::to_string_pretty(&file).expect("surface serialization cannot fail")
}

pub fn load(path: &std::path::Path) -> Result<TranslationSurface, SurfaceError> {
    from_json(&std::fs::read_to_string(path)?)
}

pub fn save(x: &TranslationSurface, path: &std::path::Path) -> Result<(), SurfaceError> {
    Ok(std::fs::write(path, to_json(x))?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{geodesic_matrix, horocycle_matrix, rotation_matrix};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn torus_invariants() {
        let t = builtin("torus").unwrap();
        assert_eq!(t.genus, 1);
        assert_eq!(t.singularities.len(), 1);
        assert!((t.singularities[0].cone_angle - 2.0 * PI).abs() < 1e-12);
        assert_eq!(t.m, 1);
        assert!((t.area - 1.0).abs() < 1e-12);
        assert_eq!(t.stratum, vec![0]);
        assert!((t.beta() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn octagon_invariants() {
        let o = builtin("octagon").unwrap();
        assert_eq!(o.genus, 2);
        assert_eq!(o.singularities.len(), 1);
        assert!((o.singularities[0].cone_angle - 6.0 * PI).abs() < 1e-9);
        assert_eq!(o.m, 3);
        assert_eq!(o.stratum, vec![2]);
        // Gauss-Bonnet cross-check.
        let sum: usize = o.stratum.iter().sum();
        assert_eq!(sum, 2 * o.genus - 2);
        assert!((o.area - 2.0 * (1.0 + 2f64.sqrt())).abs() < 1e-9);
    }

    #[test]
    fn double_pentagon_invariants() {
        let d = builtin("double-pentagon").unwrap();
        assert_eq!(d.genus, 2);
        assert_eq!(d.m, 3);
        assert_eq!(d.stratum, vec![2]);
    }

    #[test]
    fn l_shaped_invariants() {
        let l = builtin("L(2,3)").unwrap();
        assert_eq!(l.genus, 2);
        assert_eq!(l.stratum, vec![2]);
        assert!((l.area - (2.0 * 1.0 + 1.0 * 2.0)).abs() < 1e-12);
        assert!(matches!(
            builtin("L(1,1)"),
            Err(SurfaceError::DegenerateParameters(_))
        ));
        assert!(matches!(builtin("nonsense"), Err(SurfaceError::UnknownSurface(_))));
    }

    #[test]
    fn mismatched_pairing_rejected() {
        let square = vec![
            PlanarVector::new(0.0, 0.0),
            PlanarVector::new(2.0, 0.0),
            PlanarVector::new(2.0, 1.0),
            PlanarVector::new(0.0, 1.0),
        ];
        // bottom (length 2) against right side (length 1).
        let p = PolygonPresentation {
            polygons: vec![square],
            pairings: vec![((0, 0), (0, 1)), ((0, 2), (0, 3))],
        };
        assert!(matches!(build_surface(p), Err(SurfaceError::InvalidPairing(..))));
    }

    #[test]
    fn apply_matrix_preserves_area_and_composes() {
        let t = builtin("torus").unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..100 {
            let g = rotation_matrix(rng.gen_range(-3.0..3.0))
                .compose(geodesic_matrix(rng.gen_range(-1.0..1.0)))
                .compose(horocycle_matrix(rng.gen_range(-1.0..1.0)));
            let gx = apply_matrix(g, &t).unwrap();
            assert!((gx.area - t.area).abs() < 1e-10);
        }
        let g1 = horocycle_matrix(0.7);
        let g2 = geodesic_matrix(0.3);
        let a = apply_matrix(g2, &apply_matrix(g1, &t).unwrap()).unwrap();
        let b = apply_matrix(g2.compose(g1), &t).unwrap();
        for (la, lb) in a.presentation.polygons.iter().zip(&b.presentation.polygons) {
            for (va, vb) in la.iter().zip(lb) {
                assert!((*va - *vb).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn geodesic_torus_becomes_rectangle() {
        let t = builtin("torus").unwrap();
        let gx = apply_matrix(geodesic_matrix(0.5), &t).unwrap();
        let w = gx.presentation.edge_vector(0, 0);
        let h = gx.presentation.edge_vector(0, 1);
        assert!((w.x - 0.5f64.exp()).abs() < 1e-12 && w.y.abs() < 1e-15);
        assert!((h.y - (-0.5f64).exp()).abs() < 1e-12 && h.x.abs() < 1e-15);
    }

    #[test]
    fn normalize_area_examples() {
        let side2 = PolygonPresentation {
            polygons: vec![vec![
                PlanarVector::new(0.0, 0.0),
                PlanarVector::new(2.0, 0.0),
                PlanarVector::new(2.0, 2.0),
                PlanarVector::new(0.0, 2.0),
            ]],
            pairings: vec![((0, 0), (0, 2)), ((0, 1), (0, 3))],
        };
        let t = build_surface(side2).unwrap();
        let n = normalize_area(&t).unwrap();
        assert!((n.area - 1.0).abs() < 1e-12);
        assert!((n.presentation.edge_vector(0, 0).norm() - 1.0).abs() < 1e-12);

        let o = normalize_area(&builtin("octagon").unwrap()).unwrap();
        assert!((o.area - 1.0).abs() < 1e-12);
        let t = builtin("torus").unwrap();
        let again = normalize_area(&t).unwrap();
        assert!((again.area - 1.0).abs() < 1e-12);
    }

    #[test]
    fn gauss_bonnet_on_all_builtins() {
        for name in ["torus", "octagon", "double-pentagon", "L(2,3)", "L(1.5,2.5)"] {
            let s = builtin(name).unwrap();
            let sum: i64 = s
                .singularities
                .iter()
                .map(|sg| (sg.cone_angle / (2.0 * PI)).round() as i64 - 1)
                .sum();
            assert_eq!(sum, 2 * s.genus as i64 - 2, "{name}");
            assert!(s.m >= 1);
            let beta = s.beta();
            assert!(beta > 0.0 && beta <= 1.0);
        }
    }

    #[test]
    fn json_round_trip() {
        let t = builtin("octagon").unwrap();
        let text = to_json(&t);
        let back = from_json(&text).unwrap();
        assert_eq!(back.genus, t.genus);
        assert_eq!(back.stratum, t.stratum);
        assert!((back.area - t.area).abs() < 1e-12);
        assert_eq!(back.name.as_deref(), Some("octagon"));
    }

    #[test]
    fn non_simple_polygon_rejected() {
        let bow = vec![
            PlanarVector::new(0.0, 0.0),
            PlanarVector::new(1.0, 1.0),
            PlanarVector::new(1.0, 0.0),
            PlanarVector::new(0.0, 1.0),
        ];
        let p = PolygonPresentation {
            polygons: vec![bow],
            pairings: vec![((0, 0), (0, 2)), ((0, 1), (0, 3))],
        };
        assert!(matches!(
            build_surface(p),
            Err(SurfaceError::NonSimplePolygon(_)) | Err(SurfaceError::InconsistentOrientation(_))
        ));
    }
}
