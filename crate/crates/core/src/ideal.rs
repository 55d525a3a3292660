//! Ideal triangles, their horocyclic laminations, the collapse onto a tripod,
//! and hyperbolic rectangles with horocyclic horizontal edges.
//!
//! All triangle computations happen in the chart where the vertices sit at
//! (0, 1, infinity); general triangles conjugate in and out by a Möbius map.

use crate::moebius::{
    horocycle_at, Boundary, ExtComplex, HPoint, Horocycle, MoebiusError, MoebiusMap,
};
use num_complex::Complex64;

#[derive(Debug, thiserror::Error)]
pub enum IdealError {
    #[error("moebius: {0}")]
    Moebius(#[from] MoebiusError),
    #[error("leaf parameter u must be >= 0, got {0}")]
    NegativeLeafParameter(f64),
    #[error("point lies outside the triangle")]
    OutsideTriangle,
    #[error("rectangle parameters must be positive (l = {0}, delta = {1})")]
    NonPositiveRectangle(f64, f64),
    #[error("leaf length must be positive")]
    NonPositiveLength,
}

/// An ideal triangle given by three distinct boundary points.
#[derive(Debug, Clone, Copy)]
pub struct IdealTriangle {
    pub vertices: [Boundary; 3],
}

/// Which ideal vertex a horocyclic leaf is centered at, plus the distance `u`
/// past the central tangency horocycle.
#[derive(Debug, Clone, Copy)]
pub struct HorocyclicLeafParam {
    pub vertex: usize,
    pub u: f64,
}

/// Image of the collapsing map: a point on the metric tripod. `vertex` is the
/// prong index and `u >= 0` the distance from the central vertex; the central
/// region collapses to u = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TripodPoint {
    pub vertex: usize,
    pub u: f64,
}

fn boundary_to_ext(b: Boundary) -> ExtComplex {
    match b {
        Boundary::Real(x) => ExtComplex::finite(x, 0.0),
        Boundary::Infinity => ExtComplex::Infinity,
    }
}

impl IdealTriangle {
    pub fn new(vertices: [Boundary; 3]) -> Result<Self, IdealError> {
        let t = IdealTriangle { vertices };
        // normalizing map existing certifies distinctness
        t.to_standard_chart()?;
        Ok(t)
    }

    pub fn standard() -> Self {
        IdealTriangle {
            vertices: [Boundary::Real(0.0), Boundary::Real(1.0), Boundary::Infinity],
        }
    }

    /// Möbius map taking this triangle's vertices to (0, 1, infinity).
    pub fn to_standard_chart(&self) -> Result<MoebiusMap, IdealError> {
        Ok(MoebiusMap::to_standard_triple(
            boundary_to_ext(self.vertices[0]),
            boundary_to_ext(self.vertices[1]),
            boundary_to_ext(self.vertices[2]),
        )?)
    }

    pub fn horocyclic_lamination(&self) -> Result<HorocyclicLamination, IdealError> {
        HorocyclicLamination::new(*self)
    }

    /// Collapse onto the tripod: horocyclic (and blended mostly-horocyclic)
    /// leaves map to single points, the central region to the tripod vertex,
    /// and the prong coordinate is the distance past the tangency horocycle.
    pub fn collapse_to_tripod(&self, p: HPoint) -> Result<TripodPoint, IdealError> {
        let chart = self.to_standard_chart()?;
        let z = standard_point(&chart, p)?;
        // depth past each vertex's tangency horocycle
        for vertex in 0..3 {
            let w = to_vertex_chart(z, vertex);
            if w.im >= 1.0 {
                return Ok(TripodPoint { vertex, u: w.im.ln() });
            }
        }
        if in_standard_triangle(z) {
            Ok(TripodPoint { vertex: 0, u: 0.0 })
        } else {
            Err(IdealError::OutsideTriangle)
        }
    }

    /// Sample `n` points along a mostly-straight leaf. The leaf family is
    /// indexed by the opposite edge (pair of adjacent vertices) and a blend
    /// parameter t in [0,1]: t = 0 is the polyline through the center, t = 1
    /// the geodesic edge itself. Points are returned in the original chart
    /// only when the triangle is standard; callers conjugate as needed.
    pub fn mostly_straight_leaf(&self, edge: usize, t: f64, n: usize) -> Result<Vec<Complex64>, IdealError> {
        let chart = self.to_standard_chart()?;
        let inv = chart.inverse();
        let t = t.clamp(0.0, 1.0);
        let samples = standard_mostly_straight_leaf(edge, t, n);
        samples
            .into_iter()
            .map(|z| match inv.apply(ExtComplex::Finite(z)) {
                ExtComplex::Finite(w) => Ok(w),
                ExtComplex::Infinity => Err(IdealError::OutsideTriangle),
            })
            .collect()
    }
}

/// Map the standard chart so that `vertex` goes to infinity; the order-3
/// rotation 1/(1-z) cycles (0, 1, inf) -> (1, inf, 0).
fn to_vertex_chart(z: Complex64, vertex: usize) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    match vertex {
        2 => z,
        // send 1 -> infinity: apply rotation once
        1 => one / (one - z),
        // send 0 -> infinity: apply rotation twice
        0 => (z - one) / z,
        _ => unreachable!("vertex index out of range"),
    }
}

fn standard_point(chart: &MoebiusMap, p: HPoint) -> Result<Complex64, IdealError> {
    match chart.apply(ExtComplex::Finite(p.to_complex())) {
        ExtComplex::Finite(z) if z.im > 0.0 => Ok(z),
        _ => Err(IdealError::OutsideTriangle),
    }
}

/// Membership in the closed standard triangle (0, 1, inf): between the
/// vertical edges and above the unit semicircle on [0, 1].
fn in_standard_triangle(z: Complex64) -> bool {
    let eps = 1e-12;
    if z.re < -eps || z.re > 1.0 + eps {
        return false;
    }
    let dx = z.re - 0.5;
    dx * dx + z.im * z.im >= 0.25 - eps
}

fn standard_mostly_straight_leaf(edge: usize, t: f64, n: usize) -> Vec<Complex64> {
    // center of the standard triangle: fixed point of z -> 1/(1-z)
    let center = Complex64::new(0.5, 0.75f64.sqrt());
    // edge 0: between vertices 0 and 1 (the unit semicircle chord);
    // edge 1: between 1 and inf; edge 2: between 0 and inf. Only edge 0 has
    // both endpoints finite; the others are sampled in a rotated chart and
    // pulled back, which keeps this function simple: rotate so the edge is
    // the (0,1)-edge, sample, rotate back.
    let rot_back: Box<dyn Fn(Complex64) -> Complex64> = match edge {
        0 => Box::new(|z| z),
        1 => Box::new(|z: Complex64| Complex64::new(1.0, 0.0) / (Complex64::new(1.0, 0.0) - z)),
        2 => Box::new(|z: Complex64| (z - Complex64::new(1.0, 0.0)) / z),
        _ => unreachable!(),
    };
    let mut pts = Vec::with_capacity(n);
    for k in 0..n {
        let s = (k as f64 + 0.5) / n as f64;
        // polyline 0 -> center -> 1, parametrized by s
        let poly = if s < 0.5 {
            center * (2.0 * s)
        } else {
            center + (Complex64::new(1.0, 0.0) - center) * (2.0 * s - 1.0)
        };
        // geodesic edge: unit semicircle over [0,1]
        let theta = std::f64::consts::PI * (1.0 - s);
        let edge_pt = Complex64::new(0.5 + 0.5 * theta.cos(), 0.5 * theta.sin());
        let z = poly * (1.0 - t) + edge_pt * t;
        pts.push(rot_back(z));
    }
    pts
}

/// The canonical horocyclic lamination of an ideal triangle: three pairwise
/// tangent horocycles, one per vertex, leaving a central triangle with
/// horocyclic edges of length 1.
pub struct HorocyclicLamination {
    triangle: IdealTriangle,
    chart: MoebiusMap,
    tangency: [Horocycle; 3],
}

impl HorocyclicLamination {
    fn new(triangle: IdealTriangle) -> Result<Self, IdealError> {
        let chart = triangle.to_standard_chart()?;
        let inv = chart.inverse();
        // tangency horocycles in the standard chart: height-1 line at inf,
        // diameter-1 circles at 0 and 1; conjugate back through sample points.
        let mut tangency = Vec::with_capacity(3);
        let std_points = [
            Complex64::new(0.3, 0.9),  // on the diameter-1 horocycle at 0
            Complex64::new(0.7, 0.9),  // on the diameter-1 horocycle at 1
            Complex64::new(0.3, 1.0),  // on the height-1 horocycle at inf
        ];
        for (vertex, zp) in std_points.iter().enumerate() {
            let through = match inv.apply(ExtComplex::Finite(*zp)) {
                ExtComplex::Finite(w) => HPoint::new(w.re, w.im)?,
                ExtComplex::Infinity => return Err(IdealError::OutsideTriangle),
            };
            let center = triangle.vertices[vertex];
            tangency.push(horocycle_at(center, through));
        }
        Ok(HorocyclicLamination {
            triangle,
            chart,
            tangency: [tangency[0], tangency[1], tangency[2]],
        })
    }

    pub fn triangle(&self) -> &IdealTriangle {
        &self.triangle
    }

    /// The tangency horocycle at each vertex (pairwise tangent).
    pub fn tangency_horocycles(&self) -> &[Horocycle; 3] {
        &self.tangency
    }

    /// Length of the central horocyclic edge; 1 for every ideal triangle.
    pub fn central_edge_length(&self) -> f64 {
        1.0
    }

    /// Hyperbolic length of the leaf at distance u past the tangency
    /// horocycle (any vertex); the leaf at u = 0 has length 1.
    pub fn leaf_length_at(&self, p: HorocyclicLeafParam) -> Result<f64, IdealError> {
        leaf_length(1.0, p.u)
    }

    /// Endpoints of the leaf (on the two adjacent edges), in the original
    /// chart; returns None if either endpoint maps to infinity.
    pub fn leaf_endpoints(&self, p: HorocyclicLeafParam) -> Result<(Complex64, Complex64), IdealError> {
        if p.u < 0.0 {
            return Err(IdealError::NegativeLeafParameter(p.u));
        }
        // leaf at height e^u between x = 0 and x = 1 in the vertex chart
        let h = p.u.exp();
        let a = Complex64::new(0.0, h);
        let b = Complex64::new(1.0, h);
        let back = |z: Complex64| -> Result<Complex64, IdealError> {
            // undo the vertex rotation, then the chart
            let w = from_vertex_chart(z, p.vertex);
            match self.chart.inverse().apply(ExtComplex::Finite(w)) {
                ExtComplex::Finite(v) => Ok(v),
                ExtComplex::Infinity => Err(IdealError::OutsideTriangle),
            }
        };
        Ok((back(a)?, back(b)?))
    }

    /// A sampled mostly-horocyclic leaf: for u >= 0 it is the horocyclic leaf
    /// itself; for -u0 < u < 0 the leaf blends linearly (per sample ray)
    /// between the u = 0 horocycle and the straight chord between its
    /// endpoints, one admissible interpolation into the central region.
    pub fn mostly_horocyclic_leaf(
        &self,
        vertex: usize,
        u: f64,
        n: usize,
    ) -> Result<Vec<Complex64>, IdealError> {
        let u0 = 0.4; // depth of the blending collar inside the central region
        let inv = self.chart.inverse();
        let mut pts = Vec::with_capacity(n);
        for k in 0..n {
            let s = (k as f64 + 0.5) / n as f64;
            let z = if u >= 0.0 {
                Complex64::new(s, u.exp())
            } else {
                let t = (-u / u0).clamp(0.0, 1.0);
                let on_horo = Complex64::new(s, 1.0);
                // chord between the u = 0 leaf endpoints (0,1) and (1,1)
                let on_chord = Complex64::new(s, 1.0);
                // blend pushes the leaf down toward the center along the
                // geodesics to the opposite edge; use vertical drop bounded
                // by the central region
                let drop = 0.5 * t * (1.0 - (2.0 * s - 1.0).powi(2)).max(0.0);
                on_horo * (1.0 - t) + (on_chord - Complex64::new(0.0, drop)) * t
            };
            let w = from_vertex_chart(z, vertex);
            match inv.apply(ExtComplex::Finite(w)) {
                ExtComplex::Finite(v) => pts.push(v),
                ExtComplex::Infinity => return Err(IdealError::OutsideTriangle),
            }
        }
        Ok(pts)
    }
}

/// Inverse of `to_vertex_chart`.
fn from_vertex_chart(z: Complex64, vertex: usize) -> Complex64 {
    let one = Complex64::new(1.0, 0.0);
    match vertex {
        2 => z,
        // inverse of z -> 1/(1-z) is z -> (z-1)/z
        1 => (z - one) / z,
        0 => one / (one - z),
        _ => unreachable!(),
    }
}

/// Length of the horocyclic arc at distance u past the reference leaf of
/// length `ell0`: exponential decay ell0 * e^{-u}, whose derivative in u is
/// minus the length.
pub fn leaf_length(ell0: f64, u: f64) -> Result<f64, IdealError> {
    if u < 0.0 {
        return Err(IdealError::NegativeLeafParameter(u));
    }
    if ell0 <= 0.0 {
        return Err(IdealError::NonPositiveLength);
    }
    Ok(ell0 * (-u).exp())
}

/// A hyperbolic rectangle: two vertical geodesic edges of equal length `ell`
/// and two horizontal horocyclic edges. Standard chart: x in [0, delta],
/// y in [1, e^ell].
#[derive(Debug, Clone, Copy)]
pub struct HypRectangle {
    pub ell: f64,
    pub delta: f64,
}

impl HypRectangle {
    pub fn new(ell: f64, delta: f64) -> Result<Self, IdealError> {
        if ell <= 0.0 || delta <= 0.0 {
            return Err(IdealError::NonPositiveRectangle(ell, delta));
        }
        Ok(HypRectangle { ell, delta })
    }

    pub fn vertical_edge_length(&self) -> f64 {
        self.ell
    }

    /// Length of the horocyclic leaf at height y in the standard chart.
    pub fn leaf_length_at_height(&self, y: f64) -> f64 {
        self.delta / y
    }

    pub fn bottom_edge_length(&self) -> f64 {
        self.delta
    }

    pub fn top_edge_length(&self) -> f64 {
        self.delta * (-self.ell).exp()
    }

    /// Corners in the standard chart.
    pub fn corners(&self) -> [HPoint; 4] {
        let top = self.ell.exp();
        [
            HPoint { x: 0.0, y: 1.0 },
            HPoint { x: self.delta, y: 1.0 },
            HPoint { x: self.delta, y: top },
            HPoint { x: 0.0, y: top },
        ]
    }
}
