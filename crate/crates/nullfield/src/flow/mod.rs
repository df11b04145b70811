//! Field-line tracing on S³ and R³, closed-orbit detection, first-integral
//! drift, phase windings and linking numbers.

mod io;
mod linking;

use num_complex::Complex;

use crate::bateman::{em_sample, BatemanField};
use crate::error::{Error, Result};
use crate::funcspace::MixedPoly;
use crate::legendrian::{seifert_field, seifert_jacobian, torus_field, torus_jacobian, LegendrianField, SeifertSpec};
use crate::ode::{integrate, OdeOptions, OdeSystem, Solution};
use crate::scalar::c;
use crate::vector::{dist, dot, norm};
use crate::Real;

pub use io::{read_curve_csv, write_curve_csv, CurveCsv};
pub use linking::{linking_integral, linking_number};

/// Ordered samples of a path in R^D. Closed curves repeat their first sample
/// (up to the closure tolerance) as the last one.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve<T, const D: usize> {
    pub params: Vec<T>,
    pub samples: Vec<[T; D]>,
    pub tangents: Option<Vec<[T; D]>>,
    pub closed: bool,
}

impl<T: Real, const D: usize> Curve<T, D> {
    pub fn new(params: Vec<T>, samples: Vec<[T; D]>, tangents: Option<Vec<[T; D]>>, closed: bool) -> Result<Self> {
        if params.len() != samples.len() || tangents.as_ref().is_some_and(|t| t.len() != samples.len()) {
            return Err(Error::InvalidArgument("curve arrays differ in length".into()));
        }
        if samples.is_empty() {
            return Err(Error::InvalidArgument("curve has no samples".into()));
        }
        let increasing = params.windows(2).all(|w| w[1] > w[0]);
        let decreasing = params.windows(2).all(|w| w[1] < w[0]);
        if !(increasing || decreasing) {
            return Err(Error::InvalidArgument("curve parameters must be strictly monotone".into()));
        }
        if closed && samples.len() < 4 {
            return Err(Error::InvalidArgument("a closed curve needs at least four samples".into()));
        }
        Ok(Self { params, samples, tangents, closed })
    }

    /// Closed curve from `n` samples at parameters `j·period/n`; the first
    /// sample is appended at parameter `period`.
    pub fn from_periodic(period: T, mut samples: Vec<[T; D]>, mut tangents: Option<Vec<[T; D]>>) -> Result<Self> {
        let n = samples.len();
        if n < 3 {
            return Err(Error::InvalidArgument("a closed curve needs at least three distinct samples".into()));
        }
        let params = (0..=n).map(|j| period * c(j as f64 / n as f64)).collect();
        samples.push(samples[0]);
        if let Some(t) = tangents.as_mut() {
            t.push(t[0]);
        }
        Self::new(params, samples, tangents, true)
    }

    /// Closed curve sampled from a periodic map on `[0, period)`.
    pub fn sample_periodic<F, G>(period: T, n: usize, point: F, tangent: Option<G>) -> Result<Self>
    where
        F: Fn(T) -> [T; D],
        G: Fn(T) -> [T; D],
    {
        let ts: Vec<T> = (0..n).map(|j| period * c(j as f64 / n as f64)).collect();
        let samples = ts.iter().map(|&t| point(t)).collect();
        let tangents = tangent.map(|g| ts.iter().map(|&t| g(t)).collect());
        Self::from_periodic(period, samples, tangents)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Distinct samples of a closed curve (the repeated endpoint dropped).
    pub fn cyclic_samples(&self) -> &[[T; D]] {
        if self.closed {
            &self.samples[..self.samples.len() - 1]
        } else {
            &self.samples
        }
    }

    pub fn cyclic_tangents(&self) -> Option<&[[T; D]]> {
        let n = self.cyclic_samples().len();
        self.tangents.as_ref().map(|t| &t[..n])
    }

    pub fn closure_gap(&self) -> T {
        dist(&self.samples[0], self.samples.last().expect("non-empty"))
    }

    pub fn period(&self) -> T {
        *self.params.last().expect("non-empty") - self.params[0]
    }

    /// Same closed curve starting at sample `k`.
    pub fn rotated(&self, k: usize) -> Result<Self> {
        if !self.closed {
            return Err(Error::NotClosed);
        }
        let s = self.cyclic_samples();
        let n = s.len();
        let samples: Vec<[T; D]> = (0..n).map(|j| s[(j + k) % n]).collect();
        let tangents = self.cyclic_tangents().map(|t| (0..n).map(|j| t[(j + k) % n]).collect());
        Self::from_periodic(self.period(), samples, tangents)
    }

    /// Same curve traversed backwards.
    pub fn reversed(&self) -> Self {
        let mut samples = self.samples.clone();
        samples.reverse();
        let mut tangents = self.tangents.clone();
        if let Some(t) = tangents.as_mut() {
            t.reverse();
            for v in t.iter_mut() {
                *v = v.map(|x| -x);
            }
        }
        let p0 = self.params[0];
        let p1 = *self.params.last().expect("non-empty");
        let params = self.params.iter().rev().map(|&p| p0 + p1 - p).collect();
        Self { params, samples, tangents, closed: self.closed }
    }

    /// Replaces the tangents of a closed, uniformly parametrized curve by
    /// periodic fourth-order central differences.
    pub fn with_fd_tangents(&self) -> Result<Self> {
        if !self.closed {
            return Err(Error::NotClosed);
        }
        let s = self.cyclic_samples();
        let n = s.len();
        if n < 5 {
            return Err(Error::InvalidArgument("need at least five samples for difference tangents".into()));
        }
        let h = self.period() / c(n as f64);
        let t: Vec<[T; D]> = (0..n)
            .map(|j| {
                let at = |o: isize| s[(j as isize + o).rem_euclid(n as isize) as usize];
                let (m2, m1, p1, p2) = (at(-2), at(-1), at(1), at(2));
                std::array::from_fn(|k| (m2[k] - p2[k] + (p1[k] - m1[k]) * c::<T>(8.0)) / (h * c(12.0)))
            })
            .collect();
        Self::from_periodic(self.period(), s.to_vec(), Some(t))
    }
}

/// A vector field that can be traced.
pub trait VectorField<T: Real, const D: usize>: Sync {
    fn eval(&self, x: &[T; D]) -> Result<[T; D]>;

    /// Exact Jacobian `J[i][k] = ∂X_i/∂x_k`, if available.
    fn jacobian(&self, _x: &[T; D]) -> Option<[[T; D]; D]> {
        None
    }

    /// States are renormalized to the unit sphere after each accepted step.
    fn on_sphere(&self) -> bool {
        false
    }
}

/// Jacobian by central differences, used where no exact form exists.
pub fn fd_jacobian<T: Real, const D: usize, F: VectorField<T, D> + ?Sized>(
    f: &F,
    x: &[T; D],
    h: T,
) -> Result<[[T; D]; D]> {
    let mut jac = [[T::zero(); D]; D];
    for k in 0..D {
        let mut xp = *x;
        let mut xm = *x;
        xp[k] += h;
        xm[k] -= h;
        let (fp, fm) = (f.eval(&xp)?, f.eval(&xm)?);
        for i in 0..D {
            jac[i][k] = (fp[i] - fm[i]) / (h + h);
        }
    }
    Ok(jac)
}

/// Fields on S³.
#[derive(Debug, Clone)]
pub enum SphereField<T> {
    Legendrian(LegendrianField<T>),
    Seifert(SeifertSpec),
    /// `(y1|z2|², −x1|z2|², −y2|z1|², x2|z1|²)`, whose orbits lie on the tori
    /// `|z1| = const`.
    Torus,
}

impl<T: Real> VectorField<T, 4> for SphereField<T> {
    fn eval(&self, x: &[T; 4]) -> Result<[T; 4]> {
        Ok(match self {
            SphereField::Legendrian(l) => l.eval(x),
            SphereField::Seifert(s) => seifert_field(s, x),
            SphereField::Torus => torus_field(x),
        })
    }

    fn jacobian(&self, x: &[T; 4]) -> Option<[[T; 4]; 4]> {
        Some(match self {
            SphereField::Legendrian(l) => l.jacobian(x),
            SphereField::Seifert(s) => seifert_jacobian(s),
            SphereField::Torus => torus_jacobian(x),
        })
    }

    fn on_sphere(&self) -> bool {
        true
    }
}

/// Which part of a Bateman field to follow in R³.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    Electric,
    Magnetic,
    /// Normalized Poynting field at frozen time.
    Poynting,
}

/// A Bateman field at a fixed time, as a vector field on R³.
#[derive(Debug, Clone)]
pub struct SpaceField<T> {
    pub field: BatemanField<T>,
    pub t: T,
    pub kind: SpaceKind,
}

impl<T: Real> VectorField<T, 3> for SpaceField<T> {
    fn eval(&self, x: &[T; 3]) -> Result<[T; 3]> {
        let f = self.field.eval_at(x, self.t);
        match self.kind {
            SpaceKind::Electric => Ok(f.e()),
            SpaceKind::Magnetic => Ok(f.b()),
            SpaceKind::Poynting => {
                let s = em_sample(&f);
                if s.w <= c(1e-10) {
                    return Err(Error::Degenerate(format!("energy density {} below 1e-10", s.w)));
                }
                Ok(s.poynting.expect("W above threshold"))
            }
        }
    }
}

/// What to trace, from where and for how long.
#[derive(Debug, Clone)]
pub struct TraceSpec<T, F, const D: usize> {
    pub field: F,
    pub start: [T; D],
    pub max_param: T,
    pub options: OdeOptions<T>,
    /// Abort if `|x|` exceeds this (R³ tracing).
    pub bound: Option<T>,
}

impl<T: Real, F, const D: usize> TraceSpec<T, F, D> {
    pub fn new(field: F, start: [T; D], max_param: T) -> Self {
        Self { field, start, max_param, options: OdeOptions::default(), bound: None }
    }
}

struct FieldSystem<'a, T, F, const D: usize> {
    field: &'a F,
    bound: Option<T>,
}

impl<T: Real, F: VectorField<T, D>, const D: usize> OdeSystem<T> for FieldSystem<'_, T, F, D> {
    fn dim(&self) -> usize {
        D
    }

    fn rhs(&self, t: T, y: &[T], dy: &mut [T]) -> Result<()> {
        let x: [T; D] = std::array::from_fn(|i| y[i]);
        if let Some(b) = self.bound {
            if norm(&x) > b {
                return Err(Error::OutOfBounds { t: t.as_f64() });
            }
        }
        let v = self.field.eval(&x)?;
        if v.iter().any(|a| !a.is_finite()) {
            return Err(Error::NonFinite { t: t.as_f64() });
        }
        dy.copy_from_slice(&v);
        Ok(())
    }

    fn project(&self, y: &mut [T]) -> T {
        if !self.field.on_sphere() {
            return T::zero();
        }
        let n = y.iter().fold(T::zero(), |a, v| a + *v * *v).sqrt();
        for v in y.iter_mut() {
            *v /= n;
        }
        (n - T::one()).abs()
    }
}

/// A traced integral curve with its continuous extension.
#[derive(Debug, Clone)]
pub struct Trajectory<T, const D: usize> {
    pub solution: Solution<T>,
    pub start: [T; D],
    pub start_velocity: [T; D],
    /// Total displacement from renormalizing onto S³ (zero in R³).
    pub renormalization: T,
}

impl<T: Real, const D: usize> Trajectory<T, D> {
    pub fn eval(&self, tau: T) -> [T; D] {
        let v = self.solution.eval(tau);
        std::array::from_fn(|i| v[i])
    }

    pub fn velocity(&self, tau: T) -> [T; D] {
        let v = self.solution.derivative(tau);
        std::array::from_fn(|i| v[i])
    }

    pub fn max_param(&self) -> T {
        self.solution.t_end()
    }

    /// Accepted steps as an open curve, tangents from the continuous extension.
    pub fn curve(&self) -> Curve<T, D> {
        let params = self.solution.t.clone();
        let samples = self.solution.y.iter().map(|y| std::array::from_fn(|i| y[i])).collect();
        let tangents = if params.len() > 1 { Some(params.iter().map(|&t| self.velocity(t)).collect()) } else { None };
        Curve { params, samples, tangents, closed: false }
    }
}

/// Integrates `dx/dτ = X(x)` over `[0, max_param]`.
pub fn trace<T: Real, F: VectorField<T, D>, const D: usize>(spec: &TraceSpec<T, F, D>) -> Result<Trajectory<T, D>> {
    if !(spec.max_param >= T::zero()) {
        return Err(Error::InvalidArgument("max parameter must be non-negative".into()));
    }
    let mut start = spec.start;
    if spec.field.on_sphere() {
        let n = norm(&start);
        if (n - T::one()).abs() > c(1e-10) {
            return Err(Error::InvalidPoint("start point is not on the unit sphere".into()));
        }
        start = start.map(|v| v / n);
    }
    let sys = FieldSystem { field: &spec.field, bound: spec.bound };
    let start_velocity = spec.field.eval(&start)?;
    let solution = integrate(&sys, T::zero(), spec.max_param, &start, &spec.options)?;
    let renormalization = solution.projection_total;
    Ok(Trajectory { solution, start, start_velocity, renormalization })
}

/// Smallest `τ* > 0` at which the trajectory comes back to its start within
/// `tol` moving in the same direction (alignment > 0.99). The return time is
/// located as a root of `(x(τ) − x0)·x′(τ)` by bisection.
pub fn detect_closure<T: Real, const D: usize>(traj: &Trajectory<T, D>, tol: T) -> Option<T> {
    let ts = &traj.solution.t;
    let n = ts.len();
    if n < 3 {
        return None;
    }
    let x0 = traj.start;
    let d2 = |tau: T| {
        let x = traj.eval(tau);
        dot(&crate::vector::sub(&x, &x0), &crate::vector::sub(&x, &x0))
    };
    let g = |tau: T| dot(&crate::vector::sub(&traj.eval(tau), &x0), &traj.velocity(tau));
    let nodes: Vec<T> = ts.iter().map(|&t| d2(t)).collect();
    let escape = (tol * c(4.0)) * (tol * c(4.0));
    let first = nodes.iter().position(|&d| d > escape)?;
    for j in first.max(1)..n {
        let is_min = nodes[j] <= nodes[j - 1] && (j + 1 == n || nodes[j] <= nodes[j + 1]);
        if !is_min {
            continue;
        }
        let lo = ts[j - 1];
        let hi = if j + 1 < n { ts[j + 1] } else { ts[j] + (ts[j] - ts[j - 1]) };
        let (mut a, mut b) = (lo, hi);
        if !(g(a) < T::zero() && g(b) > T::zero()) {
            continue;
        }
        for _ in 0..200 {
            let m = (a + b) * c(0.5);
            if m <= a || m >= b {
                break;
            }
            if g(m) < T::zero() {
                a = m;
            } else {
                b = m;
            }
        }
        let tau = (a + b) * c(0.5);
        if d2(tau).sqrt() >= tol {
            continue;
        }
        let v = traj.velocity(tau);
        let v0 = traj.start_velocity;
        let align = dot(&v, &v0) / (norm(&v) * norm(&v0));
        if align > c(0.99) {
            return Some(tau);
        }
    }
    None
}

/// Closed curve of `n` samples over one period of a closed orbit, positions
/// from the continuous extension (renormalized on S³) and tangents from the
/// field.
pub fn closed_orbit_curve<T: Real, F: VectorField<T, D>, const D: usize>(
    traj: &Trajectory<T, D>,
    field: &F,
    period: T,
    n: usize,
) -> Result<Curve<T, D>> {
    let samples: Vec<[T; D]> = (0..n)
        .map(|j| {
            let x = traj.eval(period * c(j as f64 / n as f64));
            if field.on_sphere() {
                let r = norm(&x);
                x.map(|v| v / r)
            } else {
                x
            }
        })
        .collect();
    let tangents = samples.iter().map(|x| field.eval(x)).collect::<Result<Vec<_>>>()?;
    Curve::from_periodic(period, samples, Some(tangents))
}

/// Functions along S³ curves whose drift is measured.
#[derive(Debug, Clone)]
pub enum Invariant<T> {
    Abs2Z1,
    Abs2Z2,
    Re(MixedPoly<T>),
    Im(MixedPoly<T>),
}

impl<T: Real> Invariant<T> {
    pub fn eval(&self, x: &[T; 4]) -> T {
        let z1 = Complex::new(x[0], x[1]);
        let z2 = Complex::new(x[2], x[3]);
        match self {
            Invariant::Abs2Z1 => z1.norm_sqr(),
            Invariant::Abs2Z2 => z2.norm_sqr(),
            Invariant::Re(p) => p.eval(z1, z2).re,
            Invariant::Im(p) => p.eval(z1, z2).im,
        }
    }
}

/// `max |f(x) − f(x0)|` over the samples.
pub fn integral_drift<T: Real, const D: usize, F: Fn(&[T; D]) -> T>(curve: &Curve<T, D>, f: F) -> T {
    let f0 = f(&curve.samples[0]);
    curve.samples.iter().fold(T::zero(), |m, x| m.max((f(x) - f0).abs()))
}

/// Windings of `arg z1` and `arg z2` over a closed S³ curve.
pub fn phase_windings<T: Real>(curve: &Curve<T, 4>) -> Result<(i64, i64)> {
    if !curve.closed {
        return Err(Error::NotClosed);
    }
    let s = curve.cyclic_samples();
    let z: Vec<[Complex<T>; 2]> = s.iter().map(|x| [Complex::new(x[0], x[1]), Complex::new(x[2], x[3])]).collect();
    if z.iter().any(|w| w[0].norm() <= c(1e-6) || w[1].norm() <= c(1e-6)) {
        return Err(Error::Degenerate("curve passes within 1e-6 of a degenerate circle".into()));
    }
    let mut out = [0i64; 2];
    for (k, o) in out.iter_mut().enumerate() {
        let w = winding(&z.iter().map(|w| w[k]).collect::<Vec<_>>())?;
        *o = w;
    }
    Ok((out[0], out[1]))
}

/// Winding number about 0 of a closed loop of non-zero complex samples,
/// summing principal-value increments (each must stay below π/2).
pub(crate) fn winding<T: Real>(loop_: &[Complex<T>]) -> Result<i64> {
    let n = loop_.len();
    let mut total = T::zero();
    for j in 0..n {
        let a = loop_[j];
        let b = loop_[(j + 1) % n];
        let q = b * a.conj();
        let inc = q.im.atan2(q.re);
        if inc.abs() >= T::FRAC_PI_2() {
            return Err(Error::Undersampled { increment: inc.as_f64() });
        }
        total += inc;
    }
    let w = total / T::TAU();
    let r = w.round();
    if (w - r).abs() > c(1e-6) {
        return Err(Error::NotClosed);
    }
    Ok(r.to_i64().expect("small winding"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::Generator;
    use crate::legendrian::Polarity;
    use std::f64::consts::{PI, TAU};

    fn hopf_field() -> SphereField<f64> {
        SphereField::Legendrian(LegendrianField::new(Generator::parse("1").unwrap(), Polarity::E))
    }

    fn torus_start(a2: f64) -> [f64; 4] {
        [(1.0 - a2).sqrt(), 0.0, a2.sqrt(), 0.0]
    }

    #[test]
    fn hopf_orbit_closes_after_two_pi() {
        let spec = TraceSpec::new(hopf_field(), [1.0, 0.0, 0.0, 0.0], TAU);
        let tr = trace(&spec).unwrap();
        assert!(dist(&tr.eval(TAU), &[1.0, 0.0, 0.0, 0.0]) < 1e-8);
        let p = detect_closure(&tr, 1e-6).unwrap();
        assert!((p - TAU).abs() < 1e-8, "{p}");
        assert!(tr.renormalization <= 1e-8 * TAU);
    }

    #[test]
    fn torus_orbit_matches_closed_form() {
        let spec = TraceSpec::new(SphereField::Torus, torus_start(0.4), 10.0 * PI);
        let tr = trace(&spec).unwrap();
        let (a1, a2) = (0.6f64, 0.4f64);
        let mut worst: f64 = 0.0;
        for j in 0..=2000 {
            let tau = 10.0 * PI * j as f64 / 2000.0;
            let z1 = Complex::new(a1.sqrt(), 0.0) * Complex::new(0.0, -a2 * tau).exp();
            let z2 = Complex::new(a2.sqrt(), 0.0) * Complex::new(0.0, a1 * tau).exp();
            worst = worst.max(dist(&tr.eval(tau), &[z1.re, z1.im, z2.re, z2.im]));
        }
        assert!(worst <= 1e-8, "{worst}");
        let p = detect_closure(&tr, 1e-6).unwrap();
        assert!((p / (10.0 * PI) - 1.0).abs() < 1e-8);
        let curve = closed_orbit_curve(&tr, &SphereField::Torus, p, 400).unwrap();
        assert_eq!(phase_windings(&curve).unwrap(), (-2, 3));
        assert!(integral_drift(&curve, |x| Invariant::Abs2Z1.eval(x)) <= 1e-9);
    }

    #[test]
    fn irrational_slope_never_closes() {
        // |z2|²/|z1|² = 1/√2
        let a2 = 1.0 / (1.0 + 2f64.sqrt());
        let tr = trace(&TraceSpec::new(SphereField::Torus, torus_start(a2), 50.0)).unwrap();
        assert!(detect_closure(&tr, 1e-6).is_none());
    }

    #[test]
    fn zero_length_trace() {
        let tr = trace(&TraceSpec::new(hopf_field(), [1.0, 0.0, 0.0, 0.0], 0.0)).unwrap();
        assert_eq!(tr.curve().samples, vec![[1.0, 0.0, 0.0, 0.0]]);
        assert!(detect_closure(&tr, 1e-6).is_none());
    }

    #[test]
    fn hopf_windings() {
        let s = 0.5f64.sqrt();
        let field = hopf_field();
        let tr = trace(&TraceSpec::new(field.clone(), [s, 0.0, 0.0, s], 7.0)).unwrap();
        let p = detect_closure(&tr, 1e-6).unwrap();
        let curve = closed_orbit_curve(&tr, &field, p, 256).unwrap();
        assert_eq!(phase_windings(&curve).unwrap(), (1, -1));
        // through the pole both moduli vanish somewhere
        let tr = trace(&TraceSpec::new(field.clone(), [1.0, 0.0, 0.0, 0.0], 7.0)).unwrap();
        let curve = closed_orbit_curve(&tr, &field, TAU, 256).unwrap();
        assert!(phase_windings(&curve).is_err());
    }

    #[test]
    fn constant_curve_has_no_windings() {
        let c = Curve::new(vec![0.0, 1.0], vec![[1.0, 0.0, 0.0, 0.0]; 2], None, false).unwrap();
        assert!(phase_windings(&c).is_err());
    }

    #[test]
    fn leaving_the_box_is_an_error() {
        struct Radial;
        impl VectorField<f64, 3> for Radial {
            fn eval(&self, x: &[f64; 3]) -> Result<[f64; 3]> {
                Ok(*x)
            }
        }
        let mut spec = TraceSpec::new(Radial, [1.0, 0.0, 0.0], 10.0);
        spec.bound = Some(100.0);
        assert!(matches!(trace(&spec), Err(Error::OutOfBounds { .. })));
    }

    #[test]
    fn curve_rotation_and_reversal() {
        let c =
            Curve::sample_periodic(TAU, 16, |t: f64| [t.cos(), t.sin(), 0.0], Some(|t: f64| [-t.sin(), t.cos(), 0.0]))
                .unwrap();
        assert_eq!(c.len(), 17);
        assert!(c.closure_gap() == 0.0);
        let r = c.rotated(5).unwrap();
        assert_eq!(r.samples[0], c.samples[5]);
        let b = c.reversed();
        assert_eq!(b.samples[0], c.samples[16]);
        let fd = c.with_fd_tangents().unwrap();
        let t = fd.tangents.unwrap();
        assert!((t[3][0] + (3.0 * TAU / 16.0).sin()).abs() < 1e-2);
    }

    #[test]
    fn winding_of_simple_loops() {
        for k in -3i64..=3 {
            let l: Vec<Complex<f64>> =
                (0..64).map(|j| Complex::from_polar(2.0, k as f64 * TAU * j as f64 / 64.0)).collect();
            assert_eq!(winding(&l).unwrap(), k);
        }
        let coarse: Vec<Complex<f64>> = (0..3).map(|j| Complex::from_polar(1.0, TAU * j as f64 / 3.0)).collect();
        assert!(winding(&coarse).is_err());
    }
}
