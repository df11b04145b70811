//! Dormand–Prince 5(4) integrator with PI step-size control and the
//! standard quartic continuous extension.
//!
//! Systems may pull their state back onto a manifold after every accepted
//! step via [`OdeSystem::project`]; the total displacement is reported.

use crate::error::{Error, Result};
use crate::scalar::c;
use crate::Real;

pub trait OdeSystem<T: Real> {
    fn dim(&self) -> usize;

    fn rhs(&self, t: T, y: &[T], dy: &mut [T]) -> Result<()>;

    /// Called on every accepted state. Returns how far the state was moved.
    fn project(&self, _y: &mut [T]) -> T {
        T::zero()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeOptions<T> {
    pub rtol: T,
    pub atol: T,
    pub max_step: T,
    pub initial_step: Option<T>,
    pub max_steps: usize,
}

impl<T: Real> Default for OdeOptions<T> {
    fn default() -> Self {
        Self { rtol: c(1e-10), atol: c(1e-10), max_step: c(0.1), initial_step: None, max_steps: 2_000_000 }
    }
}

impl<T: Real> OdeOptions<T> {
    pub fn with_tol(tol: T) -> Self {
        Self { rtol: tol, atol: tol, ..Self::default() }
    }

    fn validate(&self) -> Result<()> {
        if !(self.rtol > T::zero() && self.atol > T::zero() && self.max_step > T::zero()) {
            return Err(Error::InvalidArgument("tolerances and max step must be positive".into()));
        }
        Ok(())
    }
}

// Butcher tableau
const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;
const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;
// difference between the 5th and 4th order weights
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;
// dense output
const D1: f64 = -12715105075.0 / 11282082432.0;
const D3: f64 = 87487479700.0 / 32700410799.0;
const D4: f64 = -10690763975.0 / 1880347072.0;
const D5: f64 = 701980252875.0 / 199316789632.0;
const D6: f64 = -1453857185.0 / 822651844.0;
const D7: f64 = 69997945.0 / 29380423.0;

#[derive(Debug, Clone)]
struct Segment<T> {
    t0: T,
    h: T,
    r: [Vec<T>; 5],
}

impl<T: Real> Segment<T> {
    fn eval(&self, t: T, out: &mut [T]) {
        let th = (t - self.t0) / self.h;
        let th1 = T::one() - th;
        for i in 0..out.len() {
            let r = &self.r;
            out[i] = r[0][i] + th * (r[1][i] + th1 * (r[2][i] + th * (r[3][i] + th1 * r[4][i])));
        }
    }

    fn derivative(&self, t: T, out: &mut [T]) {
        let th = (t - self.t0) / self.h;
        let th1 = T::one() - th;
        let two = c::<T>(2.0);
        for i in 0..out.len() {
            let r = &self.r;
            let q = r[2][i] + th * (r[3][i] + th1 * r[4][i]);
            let dq = r[3][i] + (T::one() - two * th) * r[4][i];
            let rr = r[1][i] + th1 * q;
            let drr = -q + th1 * dq;
            out[i] = (rr + th * drr) / self.h;
        }
    }
}

/// Accepted steps plus the continuous extension between them.
#[derive(Debug, Clone)]
pub struct Solution<T> {
    pub t: Vec<T>,
    pub y: Vec<Vec<T>>,
    segments: Vec<Segment<T>>,
    /// Sum of displacements applied by [`OdeSystem::project`].
    pub projection_total: T,
    pub rejected: usize,
    pub evaluations: usize,
}

impl<T: Real> Solution<T> {
    pub fn t_start(&self) -> T {
        self.t[0]
    }

    pub fn t_end(&self) -> T {
        *self.t.last().expect("non-empty solution")
    }

    pub fn last(&self) -> &[T] {
        self.y.last().expect("non-empty solution")
    }

    fn segment_for(&self, t: T) -> Option<&Segment<T>> {
        if self.segments.is_empty() {
            return None;
        }
        let forward = self.t_end() >= self.t_start();
        // first node strictly past t, in the direction of integration
        let idx = self.t.partition_point(|&s| if forward { s <= t } else { s >= t });
        Some(&self.segments[idx.clamp(1, self.segments.len()) - 1])
    }

    /// Dense output at `t`; times outside the integrated range are
    /// extrapolated from the nearest segment.
    pub fn eval(&self, t: T) -> Vec<T> {
        let mut out = self.y[0].clone();
        if let Some(s) = self.segment_for(t) {
            s.eval(t, &mut out);
        }
        out
    }

    /// Derivative of the dense output at `t`.
    pub fn derivative(&self, t: T) -> Vec<T> {
        let mut out = vec![T::zero(); self.y[0].len()];
        if let Some(s) = self.segment_for(t) {
            s.derivative(t, &mut out);
        }
        out
    }
}

fn weighted_rms<T: Real>(err: &[T], y0: &[T], y1: &[T], o: &OdeOptions<T>) -> T {
    let mut s = T::zero();
    for i in 0..err.len() {
        let sk = o.atol + o.rtol * y0[i].abs().max(y1[i].abs());
        let r = err[i] / sk;
        s += r * r;
    }
    (s / T::from_usize(err.len().max(1)).unwrap()).sqrt()
}

fn initial_step<T: Real, S: OdeSystem<T>>(sys: &S, t0: T, y0: &[T], f0: &[T], dir: T, o: &OdeOptions<T>) -> Result<T> {
    let zeros = vec![T::zero(); y0.len()];
    let d0 = weighted_rms(y0, &zeros, y0, o);
    let d1 = weighted_rms(f0, &zeros, y0, o);
    let mut h0 = if d0 < c(1e-5) || d1 < c(1e-5) { c(1e-6) } else { c::<T>(0.01) * d0 / d1 };
    h0 = h0.min(o.max_step);
    let y1: Vec<T> = y0.iter().zip(f0).map(|(y, f)| *y + dir * h0 * *f).collect();
    let mut f1 = vec![T::zero(); y0.len()];
    sys.rhs(t0 + dir * h0, &y1, &mut f1)?;
    let df: Vec<T> = f1.iter().zip(f0).map(|(a, b)| *a - *b).collect();
    let d2 = weighted_rms(&df, &zeros, y0, o) / h0;
    let h1 =
        if d1.max(d2) <= c(1e-15) { (h0 * c(1e-3)).max(c(1e-6)) } else { (c::<T>(0.01) / d1.max(d2)).powf(c(0.2)) };
    Ok((h0 * c(100.0)).min(h1).min(o.max_step))
}

/// Integrates from `t0` to `t1` (either direction).
pub fn integrate<T: Real, S: OdeSystem<T>>(sys: &S, t0: T, t1: T, y0: &[T], o: &OdeOptions<T>) -> Result<Solution<T>> {
    o.validate()?;
    let n = sys.dim();
    if y0.len() != n {
        return Err(Error::InvalidArgument(format!("state has length {}, system expects {n}", y0.len())));
    }
    let mut sol = Solution {
        t: vec![t0],
        y: vec![y0.to_vec()],
        segments: Vec::new(),
        projection_total: T::zero(),
        rejected: 0,
        evaluations: 0,
    };
    if t1 == t0 {
        return Ok(sol);
    }
    let dir = if t1 > t0 { T::one() } else { -T::one() };
    let span = (t1 - t0).abs();

    let mut t = t0;
    let mut y = y0.to_vec();
    let mut k: [Vec<T>; 7] = std::array::from_fn(|_| vec![T::zero(); n]);
    sys.rhs(t, &y, &mut k[0])?;
    sol.evaluations += 1;
    let mut h = match o.initial_step {
        Some(h) => h.abs().min(o.max_step),
        None => {
            sol.evaluations += 1;
            initial_step(sys, t, &y, &k[0], dir, o)?
        }
    };
    let mut facold: T = c(1e-4);
    let mut last_rejected = false;
    let mut steps = 0usize;
    let mut ytmp = vec![T::zero(); n];
    let mut ynew = vec![T::zero(); n];
    let mut err = vec![T::zero(); n];

    let cl = |x: f64| c::<T>(x);
    loop {
        let remaining = (t1 - t) * dir;
        if remaining <= T::zero() {
            break;
        }
        steps += 1;
        if steps > o.max_steps {
            return Err(Error::TooManySteps { t: t.as_f64() });
        }
        let mut last = false;
        if h >= remaining {
            h = remaining;
            last = true;
        }
        if h <= cl(10.0 * T::EPS) * t.abs().max(span) {
            return Err(Error::StepSizeUnderflow { t: t.as_f64() });
        }
        let hs = dir * h;

        let stage = |coeffs: &[(usize, f64)], k: &[Vec<T>; 7], ytmp: &mut Vec<T>| {
            for i in 0..n {
                let mut acc = T::zero();
                for &(j, a) in coeffs {
                    acc += cl(a) * k[j][i];
                }
                ytmp[i] = y[i] + hs * acc;
            }
        };
        stage(&[(0, A21)], &k, &mut ytmp);
        sys.rhs(t + cl(C2) * hs, &ytmp, &mut k[1])?;
        stage(&[(0, A31), (1, A32)], &k, &mut ytmp);
        sys.rhs(t + cl(C3) * hs, &ytmp, &mut k[2])?;
        stage(&[(0, A41), (1, A42), (2, A43)], &k, &mut ytmp);
        sys.rhs(t + cl(C4) * hs, &ytmp, &mut k[3])?;
        stage(&[(0, A51), (1, A52), (2, A53), (3, A54)], &k, &mut ytmp);
        sys.rhs(t + cl(C5) * hs, &ytmp, &mut k[4])?;
        stage(&[(0, A61), (1, A62), (2, A63), (3, A64), (4, A65)], &k, &mut ytmp);
        let tnew = if last { t1 } else { t + hs };
        sys.rhs(tnew, &ytmp, &mut k[5])?;
        stage(&[(0, A71), (2, A73), (3, A74), (4, A75), (5, A76)], &k, &mut ynew);
        sys.rhs(tnew, &ynew, &mut k[6])?;
        sol.evaluations += 6;

        for i in 0..n {
            err[i] = hs
                * (cl(E1) * k[0][i]
                    + cl(E3) * k[2][i]
                    + cl(E4) * k[3][i]
                    + cl(E5) * k[4][i]
                    + cl(E6) * k[5][i]
                    + cl(E7) * k[6][i]);
        }
        let mut e = weighted_rms(&err, &y, &ynew, o);
        if !e.is_finite() {
            e = T::infinity();
        }
        let fac11 = e.powf(cl(0.17));

        if e <= T::one() {
            let r: [Vec<T>; 5] = {
                let mut r: [Vec<T>; 5] = std::array::from_fn(|_| vec![T::zero(); n]);
                for i in 0..n {
                    let dy = ynew[i] - y[i];
                    let bspl = hs * k[0][i] - dy;
                    r[0][i] = y[i];
                    r[1][i] = dy;
                    r[2][i] = bspl;
                    r[3][i] = dy - hs * k[6][i] - bspl;
                    r[4][i] = hs
                        * (cl(D1) * k[0][i]
                            + cl(D3) * k[2][i]
                            + cl(D4) * k[3][i]
                            + cl(D5) * k[4][i]
                            + cl(D6) * k[5][i]
                            + cl(D7) * k[6][i]);
                }
                r
            };
            sol.segments.push(Segment { t0: t, h: hs, r });
            let moved = sys.project(&mut ynew);
            if moved > T::zero() {
                sol.projection_total += moved;
                sys.rhs(tnew, &ynew, &mut k[6])?;
                sol.evaluations += 1;
            }
            t = tnew;
            std::mem::swap(&mut y, &mut ynew);
            k.swap(0, 6);
            sol.t.push(t);
            sol.y.push(y.clone());

            let mut fac = fac11 / facold.powf(cl(0.04));
            fac = (fac / cl(0.9)).max(cl(0.1)).min(cl(5.0));
            let mut hnew = h / fac;
            if last_rejected {
                hnew = hnew.min(h);
            }
            facold = e.max(cl(1e-4));
            h = hnew.min(o.max_step);
            last_rejected = false;
        } else {
            sol.rejected += 1;
            let shrink = if e.is_finite() { (fac11 / cl(0.9)).min(cl(5.0)) } else { cl(5.0) };
            h /= shrink;
            last_rejected = true;
        }
    }
    Ok(sol)
}
