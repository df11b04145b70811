//! Transport along the normalized Poynting field `P = 2 E×B / (|E|² + |B|²)`
//! and the check that transported field lines stay field lines.

use rayon::prelude::*;

use crate::bateman::{em_sample, BatemanField};
use crate::error::{Error, Result};
use crate::flow::{detect_closure, trace, Curve, SpaceField, SpaceKind, TraceSpec};
use crate::geom::{stereo_project, R3Point, S3Point};
use crate::legendrian::torus_knot_curve;
use crate::ode::{integrate, OdeOptions, OdeSystem};
use crate::scalar::c;
use crate::vector::{cross, dist, norm};
use crate::Real;

/// Below this energy density the Poynting direction is undefined.
pub const TRANSPORT_W_MIN: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct TransportSpec<T> {
    pub field: BatemanField<T>,
    pub t0: T,
    pub t1: T,
    pub options: OdeOptions<T>,
}

impl<T: Real> TransportSpec<T> {
    pub fn new(field: BatemanField<T>, t0: T, t1: T) -> Self {
        Self { field, t0, t1, options: OdeOptions { max_step: c(0.05), ..OdeOptions::with_tol(c(1e-11)) } }
    }
}

/// Normalized Poynting vector at `(x, t)`.
pub fn poynting<T: Real>(field: &BatemanField<T>, x: &[T; 3], t: T) -> Result<[T; 3]> {
    let s = em_sample(&field.eval_at(x, t));
    match s.poynting {
        Some(p) if s.w > c(TRANSPORT_W_MIN) => Ok(p),
        _ => Err(Error::Degenerate(format!("energy density {} below {TRANSPORT_W_MIN:e}", s.w.as_f64()))),
    }
}

struct PoyntingSystem<'a, T> {
    field: &'a BatemanField<T>,
}

impl<T: Real> OdeSystem<T> for PoyntingSystem<'_, T> {
    fn dim(&self) -> usize {
        3
    }

    fn rhs(&self, t: T, y: &[T], dy: &mut [T]) -> Result<()> {
        dy.copy_from_slice(&poynting(self.field, &[y[0], y[1], y[2]], t)?);
        Ok(())
    }
}

pub fn transport_point<T: Real>(spec: &TransportSpec<T>, x: &[T; 3]) -> Result<[T; 3]> {
    if spec.t0 == spec.t1 {
        return Ok(*x);
    }
    let sol = integrate(&PoyntingSystem { field: &spec.field }, spec.t0, spec.t1, x, &spec.options)?;
    let y = sol.last();
    Ok([y[0], y[1], y[2]])
}

/// Transports every point independently, in parallel, keeping input order.
pub fn poynting_transport<T: Real>(spec: &TransportSpec<T>, points: &[[T; 3]]) -> Result<Vec<[T; 3]>> {
    points.par_iter().map(|x| transport_point(spec, x)).collect()
}

/// Transports the samples of a closed curve and recomputes tangents by
/// periodic differences.
pub fn transport_curve<T: Real>(spec: &TransportSpec<T>, curve: &Curve<T, 3>) -> Result<Curve<T, 3>> {
    if !curve.closed {
        return Err(Error::NotClosed);
    }
    let moved = poynting_transport(spec, &curve.samples)?;
    Curve::new(curve.params.clone(), moved, None, true)?.with_fd_tangents()
}

/// Largest `|E × T| / (|E||T|)` over the samples of `curve`; zero exactly when
/// the curve is an integral curve of `E(·, t)`.
pub fn tangency_at_time<T: Real>(field: &BatemanField<T>, curve: &Curve<T, 3>, t: T) -> Result<T> {
    let tangents = curve.tangents.as_ref().ok_or(Error::MissingTangents)?;
    let mut worst = T::zero();
    for (x, tg) in curve.samples.iter().zip(tangents) {
        let e = field.electric(x, t);
        let (ne, nt) = (norm(&e), norm(tg));
        if ne <= c(1e-12) {
            return Err(Error::Degenerate("electric field vanishes on the curve".into()));
        }
        if nt <= T::zero() {
            return Err(Error::Degenerate("zero tangent".into()));
        }
        worst = worst.max(norm(&cross(&e, tg)) / (ne * nt));
    }
    Ok(worst)
}

/// Distance by which the `E(·, t)` line through the first sample of `curve`
/// misses that sample after one circuit. The circuit length in the line's own
/// parameter is estimated from the curve as `Σ |Δx| / |E|`.
pub fn e_line_return<T: Real>(field: &BatemanField<T>, curve: &Curve<T, 3>, t: T) -> Result<T> {
    if !curve.closed {
        return Err(Error::NotClosed);
    }
    let mut span = T::zero();
    for w in curve.samples.windows(2) {
        let mid: [T; 3] = std::array::from_fn(|i| (w[0][i] + w[1][i]) * c(0.5));
        let e = norm(&field.electric(&mid, t));
        if e <= c(1e-12) {
            return Err(Error::Degenerate("electric field vanishes on the curve".into()));
        }
        span += dist(&w[0], &w[1]) / e;
    }
    let x0 = curve.samples[0];
    let mut spec = TraceSpec::new(SpaceField { field: field.clone(), t, kind: SpaceKind::Electric }, x0, span * c(1.3));
    spec.options = OdeOptions::with_tol(c(1e-12));
    let traj = trace(&spec)?;
    let period = detect_closure(&traj, c(1e-2)).ok_or(Error::NotClosed)?;
    Ok(dist(&traj.eval(period), &x0))
}

/// Resamples a closed curve at `n` points equally spaced in arc length, using
/// periodic cubic interpolation between the existing samples. Tangents are
/// recomputed by periodic differences over a parameter of the same period.
pub fn resample_arclength<T: Real>(curve: &Curve<T, 3>, n: usize) -> Result<Curve<T, 3>> {
    if !curve.closed {
        return Err(Error::NotClosed);
    }
    let s = curve.cyclic_samples();
    let m = s.len();
    if m < 4 || n < 5 {
        return Err(Error::InvalidArgument("need at least four samples in and five out".into()));
    }
    let at = |j: isize| s[j.rem_euclid(m as isize) as usize];
    let interp = |j: usize, u: T| -> [T; 3] {
        let (a, b, cc, d) = (at(j as isize - 1), at(j as isize), at(j as isize + 1), at(j as isize + 2));
        // Catmull-Rom through b (u = 0) and cc (u = 1)
        let half = c::<T>(0.5);
        std::array::from_fn(|k| {
            let p0 = b[k];
            let m0 = (cc[k] - a[k]) * half;
            let m1 = (d[k] - b[k]) * half;
            let u2 = u * u;
            let u3 = u2 * u;
            let two = c::<T>(2.0);
            let three = c::<T>(3.0);
            (two * u3 - three * u2 + T::one()) * p0
                + (u3 - two * u2 + u) * m0
                + (-two * u3 + three * u2) * cc[k]
                + (u3 - u2) * m1
        })
    };
    // arc length per segment from a fine subdivision
    const SUB: usize = 16;
    let mut cum = vec![T::zero(); m + 1];
    for j in 0..m {
        let mut len = T::zero();
        let mut prev = interp(j, T::zero());
        for k in 1..=SUB {
            let q = interp(j, c(k as f64 / SUB as f64));
            len += crate::vector::dist(&prev, &q);
            prev = q;
        }
        cum[j + 1] = cum[j] + len;
    }
    let total = cum[m];
    if !(total > T::zero()) {
        return Err(Error::Degenerate("curve has zero length".into()));
    }
    let mut seg = 0;
    let samples: Vec<[T; 3]> = (0..n)
        .map(|i| {
            let target = total * c(i as f64 / n as f64);
            while seg + 1 < m && cum[seg + 1] <= target {
                seg += 1;
            }
            let u = (target - cum[seg]) / (cum[seg + 1] - cum[seg]);
            interp(seg, u)
        })
        .collect();
    Curve::from_periodic(curve.period(), samples, None)?.with_fd_tangents()
}

/// Image of a tangent vector at `p` under `stereo_project`.
pub fn stereo_pushforward<T: Real>(p: &S3Point<T>, v: &[T; 4]) -> Result<[T; 3]> {
    let q = match stereo_project(p) {
        R3Point::Finite(q) => q,
        R3Point::Infinity => return Err(Error::InvalidPoint("curve passes through the pole".into())),
    };
    let [x1, y1, x2, y2] = p.coords();
    let d = if x1 > c(0.5) { (y1 * y1 + x2 * x2 + y2 * y2) / (T::one() + x1) } else { T::one() - x1 };
    let vr = [v[2], -v[3], v[1]];
    Ok(std::array::from_fn(|k| (vr[k] + q[k] * v[0]) / d))
}

/// Projects a closed curve on S³ with tangents into R³.
pub fn project_curve<T: Real>(curve: &Curve<T, 4>) -> Result<Curve<T, 3>> {
    let tangents = curve.cyclic_tangents().ok_or(Error::MissingTangents)?;
    let mut samples = Vec::with_capacity(tangents.len());
    let mut tg = Vec::with_capacity(tangents.len());
    for (x, v) in curve.cyclic_samples().iter().zip(tangents) {
        let p = S3Point::new(*x)?;
        match stereo_project(&p) {
            R3Point::Finite(q) => samples.push(q),
            R3Point::Infinity => return Err(Error::InvalidPoint("curve passes through the pole".into())),
        }
        tg.push(stereo_pushforward(&p, v)?);
    }
    Curve::from_periodic(curve.period(), samples, Some(tg))
}

/// E-line of the Hopfion (`h = 1`) at `t = 0` through the image of `p`: the
/// projection of the great circle `cos τ·p + sin τ·v1(p)`.
pub fn hopfion_e_line<T: Real>(p: &S3Point<T>, n: usize) -> Result<Curve<T, 3>> {
    let x = p.coords();
    let v = p.hopf_frame().v1;
    let s3 = Curve::sample_periodic(
        T::TAU(),
        n,
        |t: T| std::array::from_fn(|i| t.cos() * x[i] + t.sin() * v[i]),
        Some(|t: T| std::array::from_fn(|i| -t.sin() * x[i] + t.cos() * v[i])),
    )?;
    project_curve(&s3)
}

/// E-line of `h = 6 z1 z2²` at `t = 0`: the projected curve
/// `ρ z1² z2³ = e^{iψ}` with `ψ = ±π/2`.
pub fn torus_knot_e_line<T: Real>(psi: T, n: usize) -> Result<Curve<T, 3>> {
    project_curve(&torus_knot_curve(2, 3, psi, n)?)
}
