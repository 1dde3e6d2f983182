//! Planar linear algebra: vectors, the SL(2,R) one-parameter subgroups
//! g_t, u_s, r_theta, and directions measured from the vertical.
//!
//! Directions live on the circle [-pi/2, pi/2) with endpoints identified;
//! the direction of a vector (x, y) is atan(x/y) reduced mod pi. Everything
//! here is an immutable value and safe to share across threads.

use serde::{Deserialize, Serialize};

/// Components below this magnitude are treated as exactly resonant when
/// forming log ratios (prevents overflow in `minimizing_instant`).
const DEGENERATE_COMPONENT: f64 = 1e-300;

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum GeomError {
    #[error("zero vector has no direction")]
    ZeroVector,
    #[error("degenerate direction: Re or Im component vanishes")]
    DegenerateDirection,
    #[error("matrix determinant {det} is not 1")]
    NotAreaPreserving { det: f64 },
}

/// A vector in the plane, identified with a holonomy vector.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlanarVector {
    pub x: f64,
    pub y: f64,
}

impl PlanarVector {
    pub const ZERO: PlanarVector = PlanarVector { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        PlanarVector { x, y }
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn norm_sq(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn dot(self, other: PlanarVector) -> f64 {
        self.x * other.x + self.y * other.y
    }

    /// Signed area of the parallelogram spanned by `self` and `other`.
    pub fn cross(self, other: PlanarVector) -> f64 {
        self.x * other.y - self.y * other.x
    }

    pub fn scale(self, s: f64) -> PlanarVector {
        PlanarVector::new(self.x * s, self.y * s)
    }

    /// True when the two vectors span a parallelogram of relative area
    /// below `1e-9`, i.e. they point along the same line.
    pub fn is_parallel(self, other: PlanarVector) -> bool {
        self.cross(other).abs() <= 1e-9 * self.norm() * other.norm()
    }
}

impl std::ops::Add for PlanarVector {
    type Output = PlanarVector;
    fn add(self, rhs: PlanarVector) -> PlanarVector {
        PlanarVector::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl std::ops::Sub for PlanarVector {
    type Output = PlanarVector;
    fn sub(self, rhs: PlanarVector) -> PlanarVector {
        PlanarVector::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl std::ops::Neg for PlanarVector {
    type Output = PlanarVector;
    fn neg(self) -> PlanarVector {
        PlanarVector::new(-self.x, -self.y)
    }
}

/// An element of SL(2,R), row-major: [[a, b], [c, d]] with ad - bc = 1.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AreaPreservingMatrix {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl AreaPreservingMatrix {
    pub const IDENTITY: AreaPreservingMatrix = AreaPreservingMatrix {
        a: 1.0,
        b: 0.0,
        c: 0.0,
        d: 1.0,
    };

    /// Validates the determinant; the scale of the tolerance follows the
    /// magnitude of the products so large diagonal entries do not trip it.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self, GeomError> {
        let det = a * d - b * c;
        let scale = (a * d).abs().max((b * c).abs()).max(1.0);
        if (det - 1.0).abs() > 1e-12 * scale {
            return Err(GeomError::NotAreaPreserving { det });
        }
        Ok(AreaPreservingMatrix { a, b, c, d })
    }

    pub fn det(self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(self, v: PlanarVector) -> PlanarVector {
        PlanarVector::new(self.a * v.x + self.b * v.y, self.c * v.x + self.d * v.y)
    }

    pub fn compose(self, rhs: AreaPreservingMatrix) -> AreaPreservingMatrix {
        AreaPreservingMatrix {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }

    pub fn inverse(self) -> AreaPreservingMatrix {
        // det = 1, so the adjugate is the inverse.
        AreaPreservingMatrix {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// Operator norm bound max row/column sum; used for test bounds only.
    pub fn max_entry(self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }
}

/// Teichmüller flow matrix diag(e^t, e^{-t}).
pub fn geodesic_matrix(t: f64) -> AreaPreservingMatrix {
    AreaPreservingMatrix {
        a: t.exp(),
        b: 0.0,
        c: 0.0,
        d: (-t).exp(),
    }
}

/// Rotation by `theta` (radians, counterclockwise).
pub fn rotation_matrix(theta: f64) -> AreaPreservingMatrix {
    let (s, c) = theta.sin_cos();
    AreaPreservingMatrix { a: c, b: -s, c: s, d: c }
}

/// Horocycle matrix u_s = [[1, s], [0, 1]].
pub fn horocycle_matrix(s: f64) -> AreaPreservingMatrix {
    AreaPreservingMatrix { a: 1.0, b: s, c: 0.0, d: 1.0 }
}

/// A direction on a translation surface: the angle with the vertical,
/// canonical in [-pi/2, pi/2) with +pi/2 folded onto -pi/2.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Direction(f64);

impl Direction {
    pub fn new(theta: f64) -> Self {
        let mut t = theta.rem_euclid(std::f64::consts::PI);
        if t >= std::f64::consts::FRAC_PI_2 {
            t -= std::f64::consts::PI;
        }
        Direction(t)
    }

    pub fn angle(self) -> f64 {
        self.0
    }

    /// Unit vector in this direction (angle measured from the vertical).
    pub fn unit_vector(self) -> PlanarVector {
        PlanarVector::new(self.0.sin(), self.0.cos())
    }

    /// Distance on the circle [-pi/2, pi/2) of circumference pi.
    pub fn dist(self, other: Direction) -> f64 {
        let d = (self.0 - other.0).abs();
        d.min(std::f64::consts::PI - d)
    }
}

/// Direction of a nonzero vector: theta with r_{-theta} v vertical.
pub fn direction_of(v: PlanarVector) -> Result<Direction, GeomError> {
    if v.x == 0.0 && v.y == 0.0 {
        return Err(GeomError::ZeroVector);
    }
    Ok(Direction::new(v.x.atan2(v.y)))
}

/// Components of r_theta v: horizontal (Re) and vertical (Im) part of the
/// holonomy on the rotated surface r_theta X.
pub fn holonomy_components(theta: Direction, v: PlanarVector) -> (f64, f64) {
    let w = rotation_matrix(theta.angle()).apply(v);
    (w.x, w.y)
}

/// The instant minimizing |g_t r_theta v| and the minimal norm.
///
/// Solves e^t |Re| = e^{-t} |Im|, so t* = log(|Im|/|Re|)/2 and the minimum
/// is sqrt(2 |Re| |Im|).
pub fn minimizing_instant(theta: Direction, v: PlanarVector) -> Result<(f64, f64), GeomError> {
    let (re, im) = holonomy_components(theta, v);
    if re.abs() < DEGENERATE_COMPONENT || im.abs() < DEGENERATE_COMPONENT {
        return Err(GeomError::DegenerateDirection);
    }
    let t_star = 0.5 * (im.abs() / re.abs()).ln();
    let min_norm = (2.0 * re.abs() * im.abs()).sqrt();
    Ok((t_star, min_norm))
}
