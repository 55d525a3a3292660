//! Möbius/PSL(2,C) algebra and hyperbolic-plane primitives.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::ops::Mul;

pub const PROJ_TOL: f64 = 1e-10;

#[derive(Debug, thiserror::Error)]
pub enum MoebiusError {
    #[error("degenerate matrix: ad - bc = 0")]
    Degenerate,
    #[error("identity map has no classification")]
    NoClassification,
    #[error("points must be distinct")]
    CoincidentPoints,
    #[error("point is not in the upper half-plane (y = {0})")]
    NotInUpperHalfPlane(f64),
}

/// A point of the extended complex plane CP^1. Infinity is explicit, never a
/// large float.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ExtComplex {
    Finite(Complex64),
    Infinity,
}

impl ExtComplex {
    pub fn finite(re: f64, im: f64) -> Self {
        ExtComplex::Finite(Complex64::new(re, im))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtComplex::Infinity)
    }

    /// Chordal distance on the Riemann sphere; a metric that is finite at
    /// infinity, used for projective comparisons.
    pub fn chordal_distance(&self, other: &ExtComplex) -> f64 {
        match (self, other) {
            (ExtComplex::Infinity, ExtComplex::Infinity) => 0.0,
            (ExtComplex::Finite(z), ExtComplex::Infinity)
            | (ExtComplex::Infinity, ExtComplex::Finite(z)) => 2.0 / (1.0 + z.norm_sqr()).sqrt(),
            (ExtComplex::Finite(z), ExtComplex::Finite(w)) => {
                2.0 * (z - w).norm() / ((1.0 + z.norm_sqr()).sqrt() * (1.0 + w.norm_sqr()).sqrt())
            }
        }
    }
}

impl From<Complex64> for ExtComplex {
    fn from(z: Complex64) -> Self {
        ExtComplex::Finite(z)
    }
}

/// A Möbius transformation z -> (az + b)/(cz + d), identified up to a nonzero
/// scalar. Normalized to det = 1 eagerly; equality is projective.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MoebiusMap {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

/// Conjugacy class of a non-identity Möbius map, with translation length
/// (real part of the complex length; zero for elliptic and parabolic).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum MoebiusClass {
    Elliptic,
    Parabolic,
    Hyperbolic,
    Loxodromic,
}

impl MoebiusMap {
    pub fn new(a: Complex64, b: Complex64, c: Complex64, d: Complex64) -> Result<Self, MoebiusError> {
        let det = a * d - b * c;
        if det.norm() == 0.0 {
            return Err(MoebiusError::Degenerate);
        }
        Ok(MoebiusMap { a, b, c, d }.normalized())
    }

    pub fn from_real(a: f64, b: f64, c: f64, d: f64) -> Result<Self, MoebiusError> {
        Self::new(
            Complex64::new(a, 0.0),
            Complex64::new(b, 0.0),
            Complex64::new(c, 0.0),
            Complex64::new(d, 0.0),
        )
    }

    pub fn identity() -> Self {
        MoebiusMap {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
            c: Complex64::new(0.0, 0.0),
            d: Complex64::new(1.0, 0.0),
        }
    }

    /// Scale so that ad - bc = 1 (up to the +-I ambiguity of PSL(2,C)).
    #[must_use]
    pub fn normalized(self) -> Self {
        let det = self.a * self.d - self.b * self.c;
        let k = det.sqrt().finv();
        MoebiusMap { a: self.a * k, b: self.b * k, c: self.c * k, d: self.d * k }
    }

    pub fn trace(&self) -> Complex64 {
        self.a + self.d
    }

    pub fn apply(&self, z: ExtComplex) -> ExtComplex {
        match z {
            ExtComplex::Infinity => {
                if self.c.norm() == 0.0 {
                    ExtComplex::Infinity
                } else {
                    ExtComplex::Finite(self.a / self.c)
                }
            }
            ExtComplex::Finite(z) => {
                let den = self.c * z + self.d;
                if den.norm() == 0.0 {
                    ExtComplex::Infinity
                } else {
                    ExtComplex::Finite((self.a * z + self.b) / den)
                }
            }
        }
    }

    pub fn inverse(&self) -> Self {
        // det = 1 after normalization, so the inverse is (d, -b; -c, a)
        MoebiusMap { a: self.d, b: -self.b, c: -self.c, d: self.a }
    }

    pub fn compose(&self, rhs: &MoebiusMap) -> MoebiusMap {
        *self * *rhs
    }

    /// Projective equality via the chordal distance between the images of
    /// 0, 1 and infinity; tolerance `PROJ_TOL`.
    pub fn projectively_equal(&self, other: &MoebiusMap) -> bool {
        self.projective_distance(other) < PROJ_TOL
    }

    /// Max chordal distance between images of 0, 1, infinity.
    pub fn projective_distance(&self, other: &MoebiusMap) -> f64 {
        let probes = [
            ExtComplex::finite(0.0, 0.0),
            ExtComplex::finite(1.0, 0.0),
            ExtComplex::Infinity,
        ];
        probes
            .iter()
            .map(|p| self.apply(*p).chordal_distance(&other.apply(*p)))
            .fold(0.0, f64::max)
    }

    pub fn is_identity(&self) -> bool {
        self.projectively_equal(&MoebiusMap::identity())
    }

    /// The unique map sending (0, 1, infinity) to (z0, z1, zinf).
    pub fn taking_standard_triple(
        z0: ExtComplex,
        z1: ExtComplex,
        zinf: ExtComplex,
    ) -> Result<Self, MoebiusError> {
        // inverse of the classical map z -> (z - z0)(z1 - zinf) / ((z - zinf)(z1 - z0))
        Ok(Self::to_standard_triple(z0, z1, zinf)?.inverse())
    }

    /// The unique map sending (z0, z1, zinf) to (0, 1, infinity).
    pub fn to_standard_triple(
        z0: ExtComplex,
        z1: ExtComplex,
        zinf: ExtComplex,
    ) -> Result<Self, MoebiusError> {
        use ExtComplex::*;
        let dist_ok = |p: &ExtComplex, q: &ExtComplex| p.chordal_distance(q) > 0.0;
        if !(dist_ok(&z0, &z1) && dist_ok(&z1, &zinf) && dist_ok(&z0, &zinf)) {
            return Err(MoebiusError::CoincidentPoints);
        }
        let one = Complex64::new(1.0, 0.0);
        let m = match (z0, z1, zinf) {
            (Infinity, Finite(z1), Finite(zi)) => {
                // z -> (z1 - zi)/(z - zi)
                MoebiusMap { a: Complex64::new(0.0, 0.0), b: z1 - zi, c: one, d: -zi }
            }
            (Finite(z0), Infinity, Finite(zi)) => {
                // z -> (z - z0)/(z - zi)
                MoebiusMap { a: one, b: -z0, c: one, d: -zi }
            }
            (Finite(z0), Finite(z1), Infinity) => {
                // z -> (z - z0)/(z1 - z0)
                MoebiusMap { a: one, b: -z0, c: Complex64::new(0.0, 0.0), d: z1 - z0 }
            }
            (Finite(z0), Finite(z1), Finite(zi)) => MoebiusMap {
                a: z1 - zi,
                b: -z0 * (z1 - zi),
                c: z1 - z0,
                d: -zi * (z1 - z0),
            },
            _ => return Err(MoebiusError::CoincidentPoints),
        };
        MoebiusMap::new(m.a, m.b, m.c, m.d)
    }

    /// The unique map sending one triple of distinct points to another.
    pub fn taking_triple_to_triple(
        from: (ExtComplex, ExtComplex, ExtComplex),
        to: (ExtComplex, ExtComplex, ExtComplex),
    ) -> Result<Self, MoebiusError> {
        let s = Self::to_standard_triple(from.0, from.1, from.2)?;
        let t = Self::taking_standard_triple(to.0, to.1, to.2)?;
        Ok(t * s)
    }

    /// Classify a non-identity map by its normalized trace. For hyperbolic
    /// and loxodromic maps the translation length l satisfies
    /// |tr| = 2 cosh(l/2) (real part of the complex length).
    pub fn classify(&self) -> Result<(MoebiusClass, f64), MoebiusError> {
        if self.is_identity() {
            return Err(MoebiusError::NoClassification);
        }
        let tr = self.trace();
        let tol = 1e-9;
        if tr.im.abs() < tol {
            let t = tr.re.abs();
            if (t - 2.0).abs() < tol {
                Ok((MoebiusClass::Parabolic, 0.0))
            } else if t < 2.0 {
                Ok((MoebiusClass::Elliptic, 0.0))
            } else {
                Ok((MoebiusClass::Hyperbolic, 2.0 * (t / 2.0).acosh()))
            }
        } else {
            // complex length L: tr = 2 cosh(L/2); translation length = |Re L|
            let half = (tr / 2.0).acosh();
            Ok((MoebiusClass::Loxodromic, 2.0 * half.re.abs()))
        }
    }
}

impl Mul for MoebiusMap {
    type Output = MoebiusMap;
    fn mul(self, rhs: Self) -> Self {
        MoebiusMap {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
        .normalized()
    }
}

/// A point of the upper half-plane model of H^2, metric |dz|/y.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HPoint {
    pub x: f64,
    pub y: f64,
}

impl HPoint {
    pub fn new(x: f64, y: f64) -> Result<Self, MoebiusError> {
        if y > 0.0 {
            Ok(HPoint { x, y })
        } else {
            Err(MoebiusError::NotInUpperHalfPlane(y))
        }
    }

    pub fn to_complex(&self) -> Complex64 {
        Complex64::new(self.x, self.y)
    }

    /// Image under a Möbius map with (projectively) real coefficients.
    pub fn transform(&self, m: &MoebiusMap) -> Result<HPoint, MoebiusError> {
        match m.apply(ExtComplex::Finite(self.to_complex())) {
            ExtComplex::Finite(w) => HPoint::new(w.re, w.im),
            ExtComplex::Infinity => Err(MoebiusError::NotInUpperHalfPlane(f64::INFINITY)),
        }
    }
}

/// Hyperbolic distance in the upper half-plane.
pub fn hyp_distance(p: HPoint, q: HPoint) -> f64 {
    let dx = p.x - q.x;
    let dy = p.y - q.y;
    let arg = 1.0 + (dx * dx + dy * dy) / (2.0 * p.y * q.y);
    arg.acosh()
}

/// A boundary point of H^2: a real number or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Boundary {
    Real(f64),
    Infinity,
}

/// An unoriented geodesic of H^2 given by its distinct boundary endpoints.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Geodesic {
    pub endpoints: (Boundary, Boundary),
}

/// A horocycle: at a finite center it is the Euclidean circle tangent to the
/// real axis there with Euclidean diameter `level`; at infinity it is the
/// horizontal line at height `level`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Horocycle {
    pub center: Boundary,
    pub level: f64,
}

/// The geodesic through two distinct points of H^2.
pub fn geodesic_between(p: HPoint, q: HPoint) -> Result<Geodesic, MoebiusError> {
    if p == q {
        return Err(MoebiusError::CoincidentPoints);
    }
    if (p.x - q.x).abs() == 0.0 {
        return Ok(Geodesic { endpoints: (Boundary::Real(p.x), Boundary::Infinity) });
    }
    // circle centered on the real axis through both points
    let c = (q.x * q.x + q.y * q.y - p.x * p.x - p.y * p.y) / (2.0 * (q.x - p.x));
    let r = ((p.x - c) * (p.x - c) + p.y * p.y).sqrt();
    Ok(Geodesic { endpoints: (Boundary::Real(c - r), Boundary::Real(c + r)) })
}

/// The horocycle centered at `center` through the point `through`.
pub fn horocycle_at(center: Boundary, through: HPoint) -> Horocycle {
    match center {
        Boundary::Infinity => Horocycle { center, level: through.y },
        Boundary::Real(c) => {
            let dx = through.x - c;
            Horocycle { center, level: (dx * dx + through.y * through.y) / through.y }
        }
    }
}
