//! Developing maps of CP^1-structures from quadratic differentials via the
//! Schwarzian ODE, their monodromy, and the z dz^2 model-map asymptotics.
//!
//! Convention: the developing map is f = w1/w2 for two independent solutions
//! of w'' + (1/2) q w = 0, so that S(f) = q. (Check: q = 2 gives w'' + w = 0,
//! f = tan z, and S(tan z) = 2.)

use crate::moebius::{MoebiusError, MoebiusMap};
use num_complex::Complex64;

pub const ODE_ATOL: f64 = 1e-12;
pub const ODE_RTOL: f64 = 1e-10;
pub const WRONSKIAN_TOL: f64 = 1e-8;

#[derive(Debug, thiserror::Error)]
pub enum SchwarzianError {
    #[error("path passes within {margin:.2e} of a zero of q at z = {z}")]
    PathThroughZero { z: Complex64, margin: f64 },
    #[error("step size underflow at z = {0}")]
    StepSizeUnderflow(Complex64),
    #[error("Wronskian drift {0:.2e} exceeds tolerance")]
    WronskianDrift(f64),
    #[error("vanishing f' on the sample grid at index {0}")]
    VanishingDerivative(usize),
    #[error("grid too small for finite differences (need at least 5 columns)")]
    GridTooSmall,
    #[error("Möbius normalization failed: residual {0:.2e}")]
    NormalizationFailed(f64),
    #[error("degenerate initial frame")]
    DegenerateFrame,
    #[error("moebius: {0}")]
    Moebius(#[from] MoebiusError),
}

/// A polynomial quadratic differential q(z) dz^2 on a plane chart.
#[derive(Debug, Clone)]
pub struct QuadraticDifferential {
    /// coefficients c0 + c1 z + c2 z^2 + ...
    pub coeffs: Vec<Complex64>,
}

impl QuadraticDifferential {
    pub fn new(coeffs: Vec<Complex64>) -> Self {
        QuadraticDifferential { coeffs }
    }

    pub fn constant(c: f64) -> Self {
        QuadraticDifferential { coeffs: vec![Complex64::new(c, 0.0)] }
    }

    /// q(z) = scale * z dz^2: coeffs [0, scale].
    pub fn linear(scale: f64) -> Self {
        QuadraticDifferential {
            coeffs: vec![Complex64::new(0.0, 0.0), Complex64::new(scale, 0.0)],
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    /// Zeros by Durand-Kerner iteration, accurate to ~1e-12 for the small
    /// degrees used here.
    pub fn zeros(&self) -> Vec<Complex64> {
        let mut cs = self.coeffs.clone();
        while cs.len() > 1 && cs.last().map(|c| c.norm() == 0.0).unwrap_or(false) {
            cs.pop();
        }
        let n = cs.len().saturating_sub(1);
        if n == 0 {
            return vec![];
        }
        let lead = cs[n];
        let monic: Vec<Complex64> = cs.iter().map(|c| c / lead).collect();
        let eval = |z: Complex64| {
            let mut acc = Complex64::new(0.0, 0.0);
            for c in monic.iter().rev() {
                acc = acc * z + c;
            }
            acc
        };
        let mut roots: Vec<Complex64> = (0..n)
            .map(|k| {
                Complex64::from_polar(
                    1.3,
                    2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.5,
                )
            })
            .collect();
        for _ in 0..200 {
            let mut delta: f64 = 0.0;
            for i in 0..n {
                let mut denom = Complex64::new(1.0, 0.0);
                for j in 0..n {
                    if i != j {
                        denom *= roots[i] - roots[j];
                    }
                }
                let step = eval(roots[i]) / denom;
                roots[i] -= step;
                delta = delta.max(step.norm());
            }
            if delta < 1e-14 {
                break;
            }
        }
        roots
    }
}

/// A path in the plane made of line segments and circular arcs.
#[derive(Debug, Clone)]
pub enum PathSeg {
    Line { from: Complex64, to: Complex64 },
    /// Arc centered at `center`, radius `radius`, from angle `theta0` to
    /// `theta1` (radians; may wind any amount in either direction).
    Arc { center: Complex64, radius: f64, theta0: f64, theta1: f64 },
}

impl PathSeg {
    fn at(&self, t: f64) -> (Complex64, Complex64) {
        match *self {
            PathSeg::Line { from, to } => (from + (to - from) * t, to - from),
            PathSeg::Arc { center, radius, theta0, theta1 } => {
                let th = theta0 + (theta1 - theta0) * t;
                let e = Complex64::from_polar(radius, th);
                (center + e, e * Complex64::new(0.0, theta1 - theta0))
            }
        }
    }

    pub fn start(&self) -> Complex64 {
        self.at(0.0).0
    }

    pub fn end(&self) -> Complex64 {
        self.at(1.0).0
    }
}

/// Frame of two solutions (w1, w1', w2, w2') of w'' + q w / 2 = 0.
#[derive(Debug, Clone, Copy)]
pub struct Frame {
    pub w1: Complex64,
    pub dw1: Complex64,
    pub w2: Complex64,
    pub dw2: Complex64,
}

impl Frame {
    pub fn identity() -> Self {
        Frame {
            w1: Complex64::new(1.0, 0.0),
            dw1: Complex64::new(0.0, 0.0),
            w2: Complex64::new(0.0, 0.0),
            dw2: Complex64::new(1.0, 0.0),
        }
    }

    pub fn wronskian(&self) -> Complex64 {
        self.w1 * self.dw2 - self.dw1 * self.w2
    }

    pub fn f(&self) -> Complex64 {
        self.w1 / self.w2
    }

    fn scaled(&self, s: f64) -> Frame {
        Frame { w1: self.w1 / s, dw1: self.dw1 / s, w2: self.w2 / s, dw2: self.dw2 / s }
    }

    fn magnitude(&self) -> f64 {
        self.w1
            .norm()
            .max(self.dw1.norm())
            .max(self.w2.norm())
            .max(self.dw2.norm())
    }
}

/// One sample of a developing solution along a path.
#[derive(Debug, Clone, Copy)]
pub struct DevSample {
    pub z: Complex64,
    pub frame: Frame,
}

impl DevSample {
    pub fn f(&self) -> Complex64 {
        self.frame.f()
    }
}

/// Solutions of the Schwarzian ODE along a path, with Wronskian bookkeeping.
#[derive(Debug, Clone)]
pub struct DevelopingSolution {
    pub samples: Vec<DevSample>,
    /// max relative drift of the Wronskian along the path (log scale)
    pub wronskian_drift: f64,
}

struct State {
    frame: Frame,
    /// log of the total projective rescaling applied so far
    log_scale: f64,
}

fn rk_step(q: &QuadraticDifferential, seg: &PathSeg, t: f64, h: f64, y: &Frame) -> (Frame, f64) {
    // Dormand-Prince 5(4)
    const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    const A: [[f64; 6]; 7] = [
        [0.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const B5: [f64; 7] =
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0, 0.0];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];

    let deriv = |t: f64, y: &Frame| -> Frame {
        let (z, dz) = seg.at(t);
        let qv = q.eval(z);
        Frame {
            w1: dz * y.dw1,
            dw1: dz * (-qv * y.w1 * 0.5),
            w2: dz * y.dw2,
            dw2: dz * (-qv * y.w2 * 0.5),
        }
    };
    let add = |y: &Frame, k: &Frame, s: f64| Frame {
        w1: y.w1 + k.w1 * s,
        dw1: y.dw1 + k.dw1 * s,
        w2: y.w2 + k.w2 * s,
        dw2: y.dw2 + k.dw2 * s,
    };

    let mut ks: Vec<Frame> = Vec::with_capacity(7);
    for i in 0..7 {
        let mut yi = *y;
        for (j, k) in ks.iter().enumerate() {
            yi = add(&yi, k, h * A[i][j]);
        }
        ks.push(deriv(t + C[i] * h, &yi));
    }
    let mut y5 = *y;
    let mut y4 = *y;
    for i in 0..7 {
        y5 = add(&y5, &ks[i], h * B5[i]);
        y4 = add(&y4, &ks[i], h * B4[i]);
    }
    let comp_err = |a: Complex64, b: Complex64, y0: Complex64, y1: Complex64| {
        let sc = ODE_ATOL + ODE_RTOL * y0.norm().max(y1.norm());
        (a - b).norm() / sc
    };
    let err = comp_err(y5.w1, y4.w1, y.w1, y5.w1)
        .max(comp_err(y5.dw1, y4.dw1, y.dw1, y5.dw1))
        .max(comp_err(y5.w2, y4.w2, y.w2, y5.w2))
        .max(comp_err(y5.dw2, y4.dw2, y.dw2, y5.dw2));
    (y5, err)
}

fn integrate_segment(
    q: &QuadraticDifferential,
    seg: &PathSeg,
    state: &mut State,
    w0_log: f64,
    drift: &mut f64,
) -> Result<(), SchwarzianError> {
    let mut t = 0.0f64;
    let mut h = 1e-3;
    let mut steps = 0usize;
    while t < 1.0 {
        h = h.min(1.0 - t);
        if h < 1e-14 {
            return Err(SchwarzianError::StepSizeUnderflow(seg.at(t).0));
        }
        let (y_new, err) = rk_step(q, seg, t, h, &state.frame);
        if err <= 1.0 {
            t += h;
            state.frame = y_new;
            let mag = state.frame.magnitude();
            if mag > 1e6 || (mag < 1e-6 && mag > 0.0) {
                state.frame = state.frame.scaled(mag);
                state.log_scale += mag.ln();
            }
            let w = state.frame.wronskian();
            let logw = w.norm().ln() + 2.0 * state.log_scale;
            *drift = drift.max((logw - w0_log).abs());
        }
        let fac = if err > 0.0 { 0.9 * err.powf(-0.2) } else { 5.0 };
        h *= fac.clamp(0.2, 5.0);
        steps += 1;
        if steps > 400_000 {
            return Err(SchwarzianError::StepSizeUnderflow(seg.at(t).0));
        }
    }
    Ok(())
}

/// Integrate the Schwarzian ODE for q along `path`, sampling the frame at
/// every segment endpoint and at `extra_per_seg` interior points of each
/// segment. The path must keep a margin of at least 1e-6 from the zeros of q.
pub fn integrate_dev(
    q: &QuadraticDifferential,
    path: &[PathSeg],
    init: Frame,
    extra_per_seg: usize,
) -> Result<DevelopingSolution, SchwarzianError> {
    if init.wronskian().norm() < 1e-14 {
        return Err(SchwarzianError::DegenerateFrame);
    }
    let zeros = q.zeros();
    let margin = 1e-6;
    for seg in path {
        for k in 0..=32 {
            let (z, _) = seg.at(k as f64 / 32.0);
            for zero in &zeros {
                if (z - zero).norm() < margin {
                    return Err(SchwarzianError::PathThroughZero { z: *zero, margin });
                }
            }
        }
    }

    let w0_log = init.wronskian().norm().ln();
    let mut state = State { frame: init, log_scale: 0.0 };
    let mut drift = 0.0f64;
    let mut samples = Vec::new();
    if let Some(first) = path.first() {
        samples.push(DevSample { z: first.start(), frame: state.frame });
    }
    for seg in path {
        let n = extra_per_seg + 1;
        for k in 0..n {
            let t0 = k as f64 / n as f64;
            let t1 = (k + 1) as f64 / n as f64;
            let sub = subsegment(seg, t0, t1);
            integrate_segment(q, &sub, &mut state, w0_log, &mut drift)?;
            samples.push(DevSample { z: sub.end(), frame: state.frame });
        }
    }
    if drift > WRONSKIAN_TOL {
        return Err(SchwarzianError::WronskianDrift(drift));
    }
    Ok(DevelopingSolution { samples, wronskian_drift: drift })
}

fn subsegment(seg: &PathSeg, t0: f64, t1: f64) -> PathSeg {
    match *seg {
        PathSeg::Line { from, to } => {
            PathSeg::Line { from: from + (to - from) * t0, to: from + (to - from) * t1 }
        }
        PathSeg::Arc { center, radius, theta0, theta1 } => PathSeg::Arc {
            center,
            radius,
            theta0: theta0 + (theta1 - theta0) * t0,
            theta1: theta0 + (theta1 - theta0) * t1,
        },
    }
}

/// Monodromy of the ODE along a closed (or deck-identified) path: the Möbius
/// map B with continuation(f) = B(f). For a contractible loop in the domain
/// of an entire q this is the identity.
pub fn monodromy(
    q: &QuadraticDifferential,
    path: &[PathSeg],
) -> Result<MoebiusMap, SchwarzianError> {
    let sol = integrate_dev(q, path, Frame::identity(), 0)?;
    let end = sol.samples.last().unwrap().frame;
    // with Y(0) = I the Möbius matrix is (Y(0)^{-1} Y(1))^T = Y(1)^T
    Ok(MoebiusMap::new(end.w1, end.dw1, end.w2, end.dw2)?)
}

/// A rectangular grid of developing-map samples with uniform spacing h.
#[derive(Debug, Clone)]
pub struct FGrid {
    pub origin: Complex64,
    pub h: f64,
    pub nx: usize,
    pub ny: usize,
    /// row-major: values[j * nx + i] = f(origin + (i + j*i_unit) h)
    pub values: Vec<Complex64>,
}

impl FGrid {
    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.values[j * self.nx + i]
    }

    pub fn point(&self, i: usize, j: usize) -> Complex64 {
        self.origin + Complex64::new(i as f64 * self.h, j as f64 * self.h)
    }
}

/// Schwarzian derivative by finite differences along the grid rows:
/// S(f) = f'''/f' - (3/2)(f''/f')^2, O(h^2) accurate. Returns samples at the
/// interior columns 2..nx-2 of every row.
pub fn schwarzian_grid(grid: &FGrid) -> Result<Vec<(Complex64, Complex64)>, SchwarzianError> {
    if grid.nx < 5 {
        return Err(SchwarzianError::GridTooSmall);
    }
    let h = grid.h;
    let mut out = Vec::new();
    for j in 0..grid.ny {
        for i in 2..grid.nx - 2 {
            let fm2 = grid.at(i - 2, j);
            let fm1 = grid.at(i - 1, j);
            let f0 = grid.at(i, j);
            let f1 = grid.at(i + 1, j);
            let f2 = grid.at(i + 2, j);
            let d1 = (f1 - fm1) / (2.0 * h);
            let d2 = (f1 - f0 * 2.0 + fm1) / (h * h);
            let d3 = (f2 - f1 * 2.0 + fm1 * 2.0 - fm2) / (2.0 * h * h * h);
            if d1.norm() < 1e-300 {
                return Err(SchwarzianError::VanishingDerivative(j * grid.nx + i));
            }
            let s = d3 / d1 - (d2 / d1) * (d2 / d1) * 1.5;
            out.push((grid.point(i, j), s));
        }
    }
    Ok(out)
}

/// Build an FGrid of f-values for q by integrating along each grid row from a
/// shared base corner.
pub fn develop_grid(
    q: &QuadraticDifferential,
    origin: Complex64,
    h: f64,
    nx: usize,
    ny: usize,
    init: Frame,
) -> Result<FGrid, SchwarzianError> {
    let mut values = vec![Complex64::new(0.0, 0.0); nx * ny];
    for j in 0..ny {
        let row_start = origin + Complex64::new(0.0, j as f64 * h);
        let row_end = row_start + Complex64::new((nx - 1) as f64 * h, 0.0);
        let mut path = Vec::new();
        if j > 0 {
            path.push(PathSeg::Line { from: origin, to: row_start });
        }
        path.push(PathSeg::Line { from: row_start, to: row_end });
        let sol = integrate_dev(q, &path, init, nx - 2)?;
        // the last nx - 1 samples are the row interior + end; the row start
        // is the sample just before them
        let row_samples = &sol.samples[sol.samples.len() - (nx - 1)..];
        let start_sample = sol.samples[sol.samples.len() - nx];
        values[j * nx] = start_sample.frame.f();
        for (k, s) in row_samples.iter().enumerate() {
            values[j * nx + k + 1] = s.f();
        }
    }
    Ok(FGrid { origin, h, nx, ny, values })
}

/// Anti-Stokes sector index for the model differential: three sectors of
/// angle 2pi/3 bounded by the vertical separatrices of z dz^2. Sector k is
/// centered on the direction 2pi/3 * (k + 1).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AntiStokesSector(pub usize);

impl AntiStokesSector {
    pub fn center_angle(&self) -> f64 {
        2.0 * std::f64::consts::PI / 3.0 * (self.0 as f64 + 1.0)
    }
}

/// The model map representative for sector k:
/// F_k(z) = exp(sqrt2 * ((w^-k z)^{3/2})_principal), which decays in the
/// interior of sector k.
pub fn model_map(sector: AntiStokesSector, z: Complex64) -> Complex64 {
    let om = Complex64::from_polar(1.0, -2.0 * std::f64::consts::PI / 3.0 * sector.0 as f64);
    let zz = om * z;
    let p = zz.powf(1.5);
    (p * 2.0f64.sqrt()).exp()
}

/// The ODE normalization matching exp(sqrt2 z^{3/2}): with our convention
/// S(f) = q the model corresponds to q(z) = -(9/4) z. (WKB: solutions of
/// w'' = (9/8) z w behave like exp(+-(sqrt2/2) z^{3/2}), so the ratio of a
/// recessive and a dominant solution is exp(sqrt2 z^{3/2}) up to Möbius.)
pub fn model_differential() -> QuadraticDifferential {
    QuadraticDifferential::linear(-2.25)
}

#[derive(Debug, Clone)]
pub struct ModelCompareReport {
    pub radius: f64,
    pub sector: usize,
    pub m: u32,
    /// sup over the middle third of the sector arc of |(f - F) z^m|
    pub sup_error: f64,
    /// sup of |f - F| / max(|f|, |F|) over the same arc, diagnostic only
    pub sup_relative: f64,
    pub fit_residual: f64,
}

/// Compare the developing map of the model differential against
/// exp(sqrt2 z^{3/2}) on the arc |z| = R in the middle third of an
/// anti-Stokes sector, after fitting the Möbius frame at anchor points in
/// the sector. Callers compare sup_error across increasing radii.
pub fn model_compare(
    radius: f64,
    sector: AntiStokesSector,
    m: u32,
) -> Result<ModelCompareReport, SchwarzianError> {
    let q = model_differential();
    let thc = sector.center_angle();
    let r_a = f64::min(3.0, radius);
    let base = Complex64::from_polar(r_a, thc);

    // anchors sit away from the sector center: near the center the f-values
    // nearly coincide and the three-point fit would be ill-conditioned
    let anchor_offsets = [0.0, 0.55, -0.55];
    let check_offsets = [0.3, -0.3];
    let f_at_offset = |off: f64| -> Result<Complex64, SchwarzianError> {
        if off == 0.0 {
            let sol = integrate_dev(
                &q,
                &[PathSeg::Line { from: base, to: base * 0.999 }],
                Frame::identity(),
                0,
            )?;
            return Ok(sol.samples[0].f());
        }
        let arc =
            PathSeg::Arc { center: Complex64::new(0.0, 0.0), radius: r_a, theta0: thc, theta1: thc + off };
        let sol = integrate_dev(&q, &[arc], Frame::identity(), 0)?;
        Ok(sol.samples.last().unwrap().f())
    };
    let fa: Vec<Complex64> = anchor_offsets
        .iter()
        .map(|&o| f_at_offset(o))
        .collect::<Result<_, _>>()?;
    let model_at = |off: f64| model_map(sector, Complex64::from_polar(r_a, thc + off));
    let fit = MoebiusMap::taking_triple_to_triple(
        (fa[0].into(), fa[1].into(), fa[2].into()),
        (
            model_at(0.0).into(),
            model_at(anchor_offsets[1]).into(),
            model_at(anchor_offsets[2]).into(),
        ),
    )?;
    let mut fit_residual = 0.0f64;
    for &off in &check_offsets {
        let got = fit.apply(f_at_offset(off)?.into());
        fit_residual = fit_residual.max(got.chordal_distance(&model_at(off).into()));
    }
    if fit_residual > 1e-6 {
        return Err(SchwarzianError::NormalizationFailed(fit_residual));
    }

    // walk out to radius R along the center ray, then sweep the middle third
    let third = std::f64::consts::PI / 9.0;
    let n_arc = 40usize;
    let mut sup_error = 0.0f64;
    let mut sup_relative = 0.0f64;
    for dir in [-1.0f64, 1.0] {
        let mut path = vec![];
        if (radius - r_a).abs() > 1e-12 {
            path.push(PathSeg::Line { from: base, to: Complex64::from_polar(radius, thc) });
        }
        path.push(PathSeg::Arc {
            center: Complex64::new(0.0, 0.0),
            radius,
            theta0: thc,
            theta1: thc + dir * third,
        });
        let sol = integrate_dev(&q, &path, Frame::identity(), n_arc)?;
        for s in &sol.samples {
            if (s.z.norm() - radius).abs() > 1e-9 {
                continue;
            }
            let fv = match fit.apply(s.f().into()) {
                crate::moebius::ExtComplex::Finite(v) => v,
                crate::moebius::ExtComplex::Infinity => continue,
            };
            let model = model_map(sector, s.z);
            let diff = (fv - model).norm();
            sup_error = sup_error.max(diff * s.z.norm().powi(m as i32));
            let denom = fv.norm().max(model.norm()).max(1e-300);
            sup_relative = sup_relative.max(diff / denom);
        }
    }
    Ok(ModelCompareReport { radius, sector: sector.0, m, sup_error, sup_relative, fit_residual })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moebius::{ExtComplex, MoebiusClass};

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn zero_differential_develops_identically() {
        // init frame with f = z at the base point: w1 = z, w2 = 1
        let q = QuadraticDifferential::constant(0.0);
        let z0 = c(0.3, 0.2);
        let init = Frame { w1: z0, dw1: c(1.0, 0.0), w2: c(1.0, 0.0), dw2: c(0.0, 0.0) };
        let path = [
            PathSeg::Line { from: z0, to: c(1.0, 1.0) },
            PathSeg::Line { from: c(1.0, 1.0), to: c(-0.5, 0.7) },
        ];
        let sol = integrate_dev(&q, &path, init, 3).unwrap();
        for s in &sol.samples {
            assert!((s.f() - s.z).norm() < 1e-9, "f(z) != z at {}", s.z);
        }
    }

    #[test]
    fn constant_two_develops_to_tangent() {
        // w'' + w = 0 with (sin, cos) frame: f = tan z, S(tan z) = 2
        let q = QuadraticDifferential::constant(2.0);
        let init = Frame { w1: c(0.0, 0.0), dw1: c(1.0, 0.0), w2: c(1.0, 0.0), dw2: c(0.0, 0.0) };
        let path = [PathSeg::Line { from: c(0.0, 0.0), to: c(0.5, 0.4) }];
        let sol = integrate_dev(&q, &path, init, 7).unwrap();
        for s in &sol.samples {
            assert!((s.f() - s.z.tan()).norm() < 1e-9);
        }
    }

    #[test]
    fn schwarzian_of_affine_and_moebius_vanishes() {
        let nx = 9;
        let ny = 2;
        let h = 1e-3;
        let origin = c(1.0, 0.5);
        let mut vals_id = Vec::new();
        let mut vals_inv = Vec::new();
        for j in 0..ny {
            for i in 0..nx {
                let z = origin + c(i as f64 * h, j as f64 * h);
                vals_id.push(z);
                vals_inv.push(1.0 / z);
            }
        }
        for values in [vals_id, vals_inv] {
            let grid = FGrid { origin, h, nx, ny, values };
            for (_, s) in schwarzian_grid(&grid).unwrap() {
                assert!(s.norm() < 1e-6, "S = {s}");
            }
        }
    }

    #[test]
    fn schwarzian_of_tangent_is_two() {
        let nx = 41;
        let ny = 3;
        let h = 1e-3;
        let origin = c(0.1, 0.0);
        let mut values = Vec::new();
        for j in 0..ny {
            for i in 0..nx {
                let z = origin + c(i as f64 * h, j as f64 * h);
                values.push(z.tan());
            }
        }
        let grid = FGrid { origin, h, nx, ny, values };
        for (_, s) in schwarzian_grid(&grid).unwrap() {
            assert!((s - c(2.0, 0.0)).norm() < 1e-5, "S = {s}");
        }
    }

    #[test]
    fn round_trip_schwarzian_recovers_q() {
        // S(integrate_dev(q)) = q within 1e-5 for q in {0, 2, z, z^2 - 1}
        let cases: Vec<QuadraticDifferential> = vec![
            QuadraticDifferential::constant(0.0),
            QuadraticDifferential::constant(2.0),
            QuadraticDifferential::new(vec![c(0.0, 0.0), c(1.0, 0.0)]),
            QuadraticDifferential::new(vec![c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]),
        ];
        for q in &cases {
            let origin = c(2.1, 0.3);
            let h = 2e-3;
            let nx = 25;
            let ny = 2;
            let init = Frame { w1: c(0.0, 0.0), dw1: c(1.0, 0.0), w2: c(1.0, 0.0), dw2: c(0.1, 0.0) };
            let grid = develop_grid(q, origin, h, nx, ny, init).unwrap();
            let svals = schwarzian_grid(&grid).unwrap();
            for (z, s) in svals {
                let expect = q.eval(z);
                assert!(
                    (s - expect).norm() < 1e-5,
                    "q = {:?} at z = {z}: S = {s}, expected {expect}",
                    q.coeffs
                );
            }
        }
    }

    #[test]
    fn monodromy_contractible_is_identity() {
        // q = z is entire, so a loop around 0 is still contractible in C
        let q = QuadraticDifferential::new(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let path = [PathSeg::Arc {
            center: c(0.0, 0.0),
            radius: 1.5,
            theta0: 0.1,
            theta1: 0.1 + 2.0 * std::f64::consts::PI,
        }];
        let m = monodromy(&q, &path).unwrap();
        assert!(m.projective_distance(&MoebiusMap::identity()) < 1e-8);
    }

    #[test]
    fn annulus_strip_monodromy_is_hyperbolic() {
        // q = -1/2 on the log chart of H^2 / <z -> e^l z>: the deck
        // translation by l transports the frame by diag(e^{l/2}, e^{-l/2})
        let ell = 0.8;
        let q = QuadraticDifferential::constant(-0.5);
        let path = [PathSeg::Line { from: c(0.0, 1.0), to: c(ell, 1.0) }];
        let m = monodromy(&q, &path).unwrap();
        let (class, len) = m.classify().unwrap();
        assert_eq!(class, MoebiusClass::Hyperbolic);
        assert!((len - ell).abs() < 1e-9);
        let expect =
            MoebiusMap::from_real((ell / 2.0f64).exp(), 0.0, 0.0, (-ell / 2.0f64).exp()).unwrap();
        assert!((m.trace() - expect.trace()).norm() < 1e-9);
    }

    #[test]
    fn double_loop_is_square() {
        let q = QuadraticDifferential::constant(-0.5);
        let ell = 0.6;
        let single =
            monodromy(&q, &[PathSeg::Line { from: c(0.0, 1.0), to: c(ell, 1.0) }]).unwrap();
        let double =
            monodromy(&q, &[PathSeg::Line { from: c(0.0, 1.0), to: c(2.0 * ell, 1.0) }]).unwrap();
        assert!(double.projective_distance(&(single * single)) < 1e-8);
    }

    #[test]
    fn moebius_equivariance_of_monodromy() {
        // post-composing the init frame by g conjugates the monodromy by g
        let q = QuadraticDifferential::constant(-0.5);
        let ell = 0.9;
        let path = [PathSeg::Line { from: c(0.0, 1.0), to: c(ell, 1.0) }];
        let m0 = monodromy(&q, &path).unwrap();

        let g = MoebiusMap::from_real(1.0, 0.7, 0.2, 1.0).unwrap();
        let id = Frame::identity();
        let init = Frame {
            w1: g.a * id.w1 + g.b * id.w2,
            dw1: g.a * id.dw1 + g.b * id.dw2,
            w2: g.c * id.w1 + g.d * id.w2,
            dw2: g.c * id.dw1 + g.d * id.dw2,
        };
        let sol = integrate_dev(&q, &path, init, 0).unwrap();
        let end = sol.samples.last().unwrap().frame;
        let m1 = MoebiusMap::new(end.w1, end.dw1, end.w2, end.dw2).unwrap();
        let conj = g * m0 * g.inverse();
        assert!(m1.projective_distance(&conj) < 1e-8);
    }

    #[test]
    fn projective_consistency_of_two_frames() {
        // f from two init frames differ by one global Möbius map
        let q = QuadraticDifferential::new(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let path = [PathSeg::Line { from: c(2.0, 0.0), to: c(3.0, 1.0) }];
        let sol1 = integrate_dev(&q, &path, Frame::identity(), 10).unwrap();
        let other = Frame { w1: c(1.0, 0.0), dw1: c(0.3, 0.1), w2: c(0.2, 0.0), dw2: c(1.0, 0.0) };
        let sol2 = integrate_dev(&q, &path, other, 10).unwrap();
        let take = |s: &DevelopingSolution, k: usize| s.samples[k].f();
        let g = MoebiusMap::taking_triple_to_triple(
            (take(&sol1, 0).into(), take(&sol1, 4).into(), take(&sol1, 9).into()),
            (take(&sol2, 0).into(), take(&sol2, 4).into(), take(&sol2, 9).into()),
        )
        .unwrap();
        for k in 0..sol1.samples.len() {
            let mapped = g.apply(take(&sol1, k).into());
            let expect: ExtComplex = take(&sol2, k).into();
            assert!(mapped.chordal_distance(&expect) < 1e-8);
        }
    }

    #[test]
    fn wronskian_is_conserved() {
        let q = QuadraticDifferential::new(vec![c(-1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        let path = [PathSeg::Line { from: c(2.0, 0.2), to: c(3.5, 0.8) }];
        let sol = integrate_dev(&q, &path, Frame::identity(), 5).unwrap();
        assert!(sol.wronskian_drift < 1e-8);
    }

    #[test]
    fn path_through_zero_rejected() {
        let q = QuadraticDifferential::new(vec![c(0.0, 0.0), c(1.0, 0.0)]);
        let path = [PathSeg::Line { from: c(-1.0, 0.0), to: c(1.0, 0.0) }];
        assert!(matches!(
            integrate_dev(&q, &path, Frame::identity(), 0),
            Err(SchwarzianError::PathThroughZero { .. })
        ));
    }

    #[test]
    fn model_sector_symmetry() {
        // rotating the sector index rotates the comparison
        let r = 4.0;
        let e0 = model_compare(r, AntiStokesSector(0), 0).unwrap();
        let e1 = model_compare(r, AntiStokesSector(1), 0).unwrap();
        let e2 = model_compare(r, AntiStokesSector(2), 0).unwrap();
        let m = e0.sup_error.max(e1.sup_error).max(e2.sup_error);
        assert!((e0.sup_error - e1.sup_error).abs() <= 1e-8 + 0.05 * m);
        assert!((e0.sup_error - e2.sup_error).abs() <= 1e-8 + 0.05 * m);
    }

    #[test]
    fn model_error_decays_with_radius() {
        let e4 = model_compare(4.0, AntiStokesSector(0), 0).unwrap();
        let e8 = model_compare(8.0, AntiStokesSector(0), 0).unwrap();
        assert!(e8.sup_error < e4.sup_error);
        assert!(e8.sup_error < 1e-3);
    }
}
