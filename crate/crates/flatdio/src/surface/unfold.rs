//! Unfolding a rational polygon into a translation surface.
//!
//! Reflections at the sides of a rational polygon generate a finite group
//! of linear isometries; the unfolded surface carries one copy of the
//! polygon per group element, and a trajectory hitting side i of copy g
//! continues straight into copy g * sigma_i. Group elements are tracked
//! exactly as rotations/reflections with rational angle offsets (in units
//! of pi), so closure detection never depends on float rounding.

use super::{build_named, PolygonPresentation, SurfaceError, TranslationSurface};
use crate::geom::PlanarVector;

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

/// Rational number of turns, reduced mod 2 (angles in units of pi).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Frac {
    num: i64,
    den: i64,
}

impl Frac {
    fn new(num: i64, den: i64) -> Self {
        assert!(den != 0);
        let (mut n, mut d) = if den < 0 { (-num, -den) } else { (num, den) };
        // Reduce mod 2 (full turn of the angle 2*pi).
        n = n.rem_euclid(2 * d);
        let g = gcd(n, d).max(1);
        n /= g;
        d /= g;
        Frac { num: n, den: d }
    }

    fn add(self, o: Frac) -> Frac {
        Frac::new(self.num * o.den + o.num * self.den, self.den * o.den)
    }

    fn sub(self, o: Frac) -> Frac {
        Frac::new(self.num * o.den - o.num * self.den, self.den * o.den)
    }

    fn as_angle(self) -> f64 {
        std::f64::consts::PI * self.num as f64 / self.den as f64
    }
}

/// Group element: rotation by r*pi, or the reflection R(base + r*pi) where
/// R(phi) reflects across the line at angle phi/2 and `base` is twice the
/// direction of edge 0 (fixed for the whole unfolding).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
enum Elt {
    Rot(Frac),
    Refl(Frac),
}

impl Elt {
    /// self * other (matrix composition order).
    fn compose(self, other: Elt) -> Elt {
        match (self, other) {
            (Elt::Rot(a), Elt::Rot(b)) => Elt::Rot(a.add(b)),
            (Elt::Rot(a), Elt::Refl(b)) => Elt::Refl(a.add(b)),
            (Elt::Refl(a), Elt::Rot(b)) => Elt::Refl(a.sub(b)),
            (Elt::Refl(a), Elt::Refl(b)) => Elt::Rot(a.sub(b)),
        }
    }

    fn det_positive(self) -> bool {
        matches!(self, Elt::Rot(_))
    }

    fn matrix(self, base: f64) -> [[f64; 2]; 2] {
        match self {
            Elt::Rot(r) => {
                let (s, c) = r.as_angle().sin_cos();
                [[c, -s], [s, c]]
            }
            Elt::Refl(r) => {
                let (s, c) = (base + r.as_angle()).sin_cos();
                [[c, s], [s, -c]]
            }
        }
    }
}

fn apply(m: [[f64; 2]; 2], v: PlanarVector) -> PlanarVector {
    PlanarVector::new(m[0][0] * v.x + m[0][1] * v.y, m[1][0] * v.x + m[1][1] * v.y)
}

/// A simple polygon with angles declared as rational multiples of pi.
#[derive(Clone, Debug)]
pub struct RationalPolygon {
    pub vertices: Vec<PlanarVector>,
    /// Interior angle at vertex i as (p, q), meaning p/q * pi.
    pub angles: Vec<(i64, i64)>,
}

impl RationalPolygon {
    /// Validates that the declared rational angles match the geometry
    /// (within 1e-9) and sum to (n - 2) pi.
    pub fn new(
        vertices: Vec<PlanarVector>,
        angles: Vec<(i64, i64)>,
    ) -> Result<Self, SurfaceError> {
        assert_eq!(vertices.len(), angles.len());
        let n = vertices.len();
        // Exact rational sum check: sum p_i/q_i == n - 2.
        let mut num = 0i64;
        let mut den = 1i64;
        for &(p, q) in &angles {
            num = num * q + p * den;
            den *= q;
            let g = gcd(num, den).max(1);
            num /= g;
            den /= g;
        }
        if num != (n as i64 - 2) * den {
            let &(p, q) = angles.last().unwrap();
            return Err(SurfaceError::IrrationalAngle(p, q));
        }
        for i in 0..n {
            let here = vertices[i];
            let prev = vertices[(i + n - 1) % n];
            let next = vertices[(i + 1) % n];
            let inc = prev - here;
            let out = next - here;
            let raw = inc.cross(out).atan2(inc.dot(out));
            let interior = if raw <= 0.0 { -raw } else { 2.0 * std::f64::consts::PI - raw };
            let declared = angles[i].0 as f64 / angles[i].1 as f64 * std::f64::consts::PI;
            if (interior - declared).abs() > 1e-9 {
                return Err(SurfaceError::IrrationalAngle(angles[i].0, angles[i].1));
            }
        }
        Ok(RationalPolygon { vertices, angles })
    }

    /// Triangle with angles p1/q1 pi at the origin and p2/q2 pi at (1, 0).
    pub fn triangle(p1: i64, q1: i64, p2: i64, q2: i64) -> Result<Self, SurfaceError> {
        let a = p1 as f64 / q1 as f64 * std::f64::consts::PI;
        let b = p2 as f64 / q2 as f64 * std::f64::consts::PI;
        let c = std::f64::consts::PI - a - b;
        if c <= 0.0 {
            return Err(SurfaceError::DegenerateParameters(
                "triangle angles exceed pi".into(),
            ));
        }
        // Law of sines with the base v0 v1 of length 1.
        let side_b = b.sin() / c.sin();
        let v2 = PlanarVector::new(side_b * a.cos(), side_b * a.sin());
        let p3num = q1 * q2 - p1 * q2 - p2 * q1;
        let q3 = q1 * q2;
        RationalPolygon::new(
            vec![PlanarVector::new(0.0, 0.0), PlanarVector::new(1.0, 0.0), v2],
            vec![(p1, q1), (p2, q2), (p3num, q3)],
        )
    }

    pub fn unit_square() -> Self {
        RationalPolygon::new(
            vec![
                PlanarVector::new(0.0, 0.0),
                PlanarVector::new(1.0, 0.0),
                PlanarVector::new(1.0, 1.0),
                PlanarVector::new(0.0, 1.0),
            ],
            vec![(1, 2); 4],
        )
        .expect("unit square is rational")
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct UnfoldOptions {
    /// Cap on the reflection group size; defaults to 4 * lcm(denominators)
    /// with a floor of 64.
    pub group_cap: Option<usize>,
}

/// Classical unfolding: one polygon copy per element of the reflection
/// group, edge i of copy g glued to edge i of copy g * sigma_i.
pub fn unfold_rational_polygon(
    q: &RationalPolygon,
    options: UnfoldOptions,
) -> Result<TranslationSurface, SurfaceError> {
    let n = q.vertices.len();
    let lcm = q
        .angles
        .iter()
        .fold(1i64, |acc, &(_, den)| acc / gcd(acc, den) * den);
    let cap = options.group_cap.unwrap_or(((4 * lcm) as usize).max(64));

    // Side reflection parameters: sigma_i = Refl(r_i) with
    // r_i = 2 (psi_i - psi_0) / pi, psi_i the direction of edge i,
    // accumulated exactly from the exterior angles.
    let mut side_refl = Vec::with_capacity(n);
    let mut offset = Frac::new(0, 1);
    side_refl.push(Elt::Refl(offset));
    for i in 1..n {
        let (p, qd) = q.angles[i];
        // Turning angle at vertex i is pi - interior = (q - p)/q * pi;
        // edge direction doubles contribute 2 * that.
        offset = offset.add(Frac::new(2 * (qd - p), qd));
        side_refl.push(Elt::Refl(offset));
    }

    // Closure under right multiplication by the generators.
    let identity = Elt::Rot(Frac::new(0, 1));
    let mut elements = vec![identity];
    let mut index = std::collections::HashMap::new();
    index.insert(identity, 0usize);
    let mut frontier = vec![identity];
    while let Some(g) = frontier.pop() {
        for &s in &side_refl {
            let h = g.compose(s);
            if !index.contains_key(&h) {
                if elements.len() >= cap {
                    return Err(SurfaceError::GroupTooLarge(cap));
                }
                index.insert(h, elements.len());
                elements.push(h);
                frontier.push(h);
            }
        }
    }

    let base = {
        let w0 = q.vertices[1 % n] - q.vertices[0];
        2.0 * w0.y.atan2(w0.x)
    };

    // Copy g: vertices M_g v_k, reversed when det < 0 to stay positively
    // oriented. Original edge i then sits at presentation index
    // (n - 2 - i) mod n.
    let polygons: Vec<Vec<PlanarVector>> = elements
        .iter()
        .map(|&g| {
            let m = g.matrix(base);
            if g.det_positive() {
                q.vertices.iter().map(|&v| apply(m, v)).collect()
            } else {
                q.vertices.iter().rev().map(|&v| apply(m, v)).collect()
            }
        })
        .collect();

    let edge_index = |g: Elt, i: usize| -> usize {
        if g.det_positive() {
            i
        } else {
            (2 * n - 2 - i) % n
        }
    };

    let mut pairings = Vec::new();
    for (gi, &g) in elements.iter().enumerate() {
        for i in 0..n {
            let h = g.compose(side_refl[i]);
            let hi = index[&h];
            let key_a = (gi, edge_index(g, i));
            let key_b = (hi, edge_index(h, i));
            if key_a < key_b {
                pairings.push((key_a, key_b));
            }
        }
    }

    build_named(
        PolygonPresentation { polygons, pairings },
        Some(format!("unfolded-{n}gon-x{}", elements.len())),
    )
}
