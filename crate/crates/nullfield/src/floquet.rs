//! Monodromy of the normal variational equation `ξ' = A(t) ξ`,
//! `A = [[0, −(1 + G)], [2, 0]]`, Floquet multipliers, Diophantine checks and
//! numeric monodromy of closed orbits on S³.

use num_complex::Complex;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::flow::{fd_jacobian, Curve, VectorField};
use crate::geom::{complex_structure, frame_at};
use crate::ode::{integrate, OdeOptions, OdeSystem};
use crate::scalar::c;
use crate::vector::{dist, dot, norm};
use crate::Real;

/// Width of the band around `|tr M| = 2` reported as parabolic.
pub const PARABOLIC_BAND: f64 = 1e-9;

/// `G(t) = g0 + Σ_k a_k cos(2πkt/P) + b_k sin(2πkt/P)` over the period `P`.
#[derive(Debug, Clone, PartialEq)]
pub struct NveSpec<T> {
    pub g0: T,
    pub cos: Vec<T>,
    pub sin: Vec<T>,
    pub period: T,
}

impl<T: Real> NveSpec<T> {
    pub fn new(g0: T, cos: Vec<T>, sin: Vec<T>, period: T) -> Result<Self> {
        if !(period > T::zero() && period.is_finite()) {
            return Err(Error::InvalidArgument("period must be positive".into()));
        }
        Ok(Self { g0, cos, sin, period })
    }

    pub fn constant(g: T) -> Self {
        Self { g0: g, cos: vec![], sin: vec![], period: T::one() }
    }

    /// `G ≡ ω²/2 − 1` over unit period, for which `M` is known in closed form.
    pub fn for_omega(omega: T) -> Self {
        Self::constant(omega * omega / c(2.0) - T::one())
    }

    pub fn g(&self, t: T) -> T {
        let w = T::TAU() * t / self.period;
        let mut g = self.g0;
        for (k, a) in self.cos.iter().enumerate() {
            g += *a * (w * c((k + 1) as f64)).cos();
        }
        for (k, b) in self.sin.iter().enumerate() {
            g += *b * (w * c((k + 1) as f64)).sin();
        }
        g
    }

    pub fn matrix(&self, t: T) -> [[T; 2]; 2] {
        [[T::zero(), -(T::one() + self.g(t))], [c(2.0), T::zero()]]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Elliptic,
    Hyperbolic,
    Parabolic,
}

/// Outcome of a bounded Diophantine check of `w` up to denominator `q_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiophantineVerdict {
    pub w: f64,
    pub gamma: f64,
    pub tau: f64,
    pub q_max: u64,
    pub pass: bool,
    /// `(p, q)` minimizing `q^τ |w − p/q| / γ`, and that ratio.
    pub worst_p: i64,
    pub worst_q: u64,
    pub worst_ratio: f64,
    /// Smallest `q` whose nearest `p` violates the bound.
    pub first_failure: Option<(i64, u64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonodromyReport<T> {
    pub matrix: [[T; 2]; 2],
    pub multipliers: [Complex<T>; 2],
    pub classification: Classification,
    /// `arccos(tr M / 2)` when elliptic.
    pub omega: Option<T>,
    pub diophantine: Option<DiophantineVerdict>,
}

impl<T: Real> MonodromyReport<T> {
    pub fn from_matrix(m: [[T; 2]; 2]) -> Self {
        let tr = m[0][0] + m[1][1];
        let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
        let half = tr / c(2.0);
        let disc = half * half - det;
        let multipliers = if disc >= T::zero() {
            let r = disc.sqrt();
            [Complex::new(half + r, T::zero()), Complex::new(half - r, T::zero())]
        } else {
            let r = (-disc).sqrt();
            [Complex::new(half, r), Complex::new(half, -r)]
        };
        let excess = tr.abs() - c(2.0);
        let (classification, omega) = if excess.abs() <= c(PARABOLIC_BAND) {
            (Classification::Parabolic, None)
        } else if excess < T::zero() {
            (Classification::Elliptic, Some(half.acos()))
        } else {
            (Classification::Hyperbolic, None)
        };
        Self { matrix: m, multipliers, classification, omega, diophantine: None }
    }

    pub fn det(&self) -> T {
        let m = &self.matrix;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }

    pub fn trace(&self) -> T {
        self.matrix[0][0] + self.matrix[1][1]
    }

    /// Attaches a Diophantine check of the rotation `ω / 2π` when elliptic.
    pub fn with_diophantine(mut self, gamma: f64, tau: f64, q_max: u64) -> Result<Self> {
        if let Some(w) = self.omega {
            self.diophantine = Some(diophantine_check(w.as_f64() / std::f64::consts::TAU, gamma, tau, q_max)?);
        }
        Ok(self)
    }
}

impl<T: Real> Serialize for MonodromyReport<T> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            matrix: [[f64; 2]; 2],
            multipliers: [[f64; 2]; 2],
            classification: Classification,
            omega: Option<f64>,
            diophantine: Option<DiophantineVerdict>,
        }
        Repr {
            matrix: self.matrix.map(|r| r.map(|v| v.as_f64())),
            multipliers: self.multipliers.map(|z| [z.re.as_f64(), z.im.as_f64()]),
            classification: self.classification,
            omega: self.omega.map(|w| w.as_f64()),
            diophantine: self.diophantine,
        }
        .serialize(s)
    }
}

struct NveSystem<'a, T> {
    spec: &'a NveSpec<T>,
}

impl<T: Real> OdeSystem<T> for NveSystem<'_, T> {
    fn dim(&self) -> usize {
        4
    }

    // y holds Φ row-major
    fn rhs(&self, t: T, y: &[T], dy: &mut [T]) -> Result<()> {
        let a = self.spec.matrix(t);
        for i in 0..2 {
            for j in 0..2 {
                dy[2 * i + j] = a[i][0] * y[j] + a[i][1] * y[2 + j];
            }
        }
        Ok(())
    }
}

/// Fundamental solution at `t = period`.
pub fn monodromy<T: Real>(spec: &NveSpec<T>, tol: T) -> Result<MonodromyReport<T>> {
    let opts = OdeOptions { max_step: spec.period / c(8.0), ..OdeOptions::with_tol(tol) };
    let y0 = [T::one(), T::zero(), T::zero(), T::one()];
    let sol = integrate(&NveSystem { spec }, T::zero(), spec.period, &y0, &opts)?;
    let y = sol.last();
    Ok(MonodromyReport::from_matrix([[y[0], y[1]], [y[2], y[3]]]))
}

/// `[[cos ω, −(ω/2) sin ω], [(2/ω) sin ω, cos ω]]`.
pub fn analytic_monodromy<T: Real>(omega: T) -> Result<[[T; 2]; 2]> {
    if omega == T::zero() || !omega.is_finite() {
        return Err(Error::InvalidArgument("omega must be finite and nonzero".into()));
    }
    let (s, co) = omega.sin_cos();
    Ok([[co, -(omega / c(2.0)) * s], [(c::<T>(2.0) / omega) * s, co]])
}

/// Checks `|w − p/q| ≥ γ/q^τ` for every `1 ≤ q ≤ q_max` with `p` nearest to
/// `wq`. A pass says nothing about denominators beyond `q_max`.
pub fn diophantine_check(w: f64, gamma: f64, tau: f64, q_max: u64) -> Result<DiophantineVerdict> {
    if !(gamma > 0.0) || !(tau > 2.0) || q_max < 1 || !w.is_finite() {
        return Err(Error::InvalidArgument("need finite w, gamma > 0, tau > 2 and q_max >= 1".into()));
    }
    let mut worst = (0i64, 1u64, f64::INFINITY);
    let mut first_failure = None;
    for q in 1..=q_max {
        let qf = q as f64;
        let p = (w * qf).round();
        let ratio = (w - p / qf).abs() * qf.powf(tau) / gamma;
        if ratio < worst.2 {
            worst = (p as i64, q, ratio);
        }
        if ratio < 1.0 && first_failure.is_none() {
            first_failure = Some((p as i64, q));
        }
    }
    Ok(DiophantineVerdict {
        w,
        gamma,
        tau,
        q_max,
        pass: first_failure.is_none(),
        worst_p: worst.0,
        worst_q: worst.1,
        worst_ratio: worst.2,
        first_failure,
    })
}

/// Tolerance on the return of the orbit to its start after one period.
pub const ORBIT_RETURN_TOL: f64 = 1e-6;

/// Step of the central-difference Jacobian used when a field has no exact one.
pub const FD_JACOBIAN_STEP: f64 = 1e-5;

struct Variational<'a, F> {
    field: &'a F,
}

impl<T: Real, F: VectorField<T, 4>> OdeSystem<T> for Variational<'_, F> {
    fn dim(&self) -> usize {
        20
    }

    fn rhs(&self, _t: T, y: &[T], dy: &mut [T]) -> Result<()> {
        let x: [T; 4] = std::array::from_fn(|i| y[i]);
        dy[..4].copy_from_slice(&self.field.eval(&x)?);
        let j = match self.field.jacobian(&x) {
            Some(j) => j,
            None => fd_jacobian(self.field, &x, c(FD_JACOBIAN_STEP))?,
        };
        for i in 0..4 {
            for k in 0..4 {
                let mut acc = T::zero();
                for m in 0..4 {
                    acc += j[i][m] * y[4 + 4 * m + k];
                }
                dy[4 + 4 * i + k] = acc;
            }
        }
        Ok(())
    }

    fn project(&self, y: &mut [T]) -> T {
        if !self.field.on_sphere() {
            return T::zero();
        }
        let n = (y[0] * y[0] + y[1] * y[1] + y[2] * y[2] + y[3] * y[3]).sqrt();
        for v in &mut y[..4] {
            *v /= n;
        }
        (n - T::one()).abs()
    }
}

/// Normal frame `(−Z, v4)` at `x` with `Z = −JX/|X|`: the unit vector
/// orthogonal to `X` inside the contact plane, and the Hopf fibre direction.
fn normal_frame<T: Real, F: VectorField<T, 4>>(field: &F, x: &[T; 4]) -> Result<[[T; 4]; 2]> {
    let v = field.eval(x)?;
    let n = norm(&v);
    if n <= c(1e-9) {
        return Err(Error::Degenerate("field vanishes on the orbit".into()));
    }
    let jx = complex_structure(&v);
    // project onto the tangent space and off X in case X leaves the contact plane
    let f = frame_at(x);
    let mut e1 = jx;
    for b in [f.v3.map(|a| a / norm(&f.v3)), v.map(|a| a / n), f.v4.map(|a| a / norm(&f.v4))] {
        let d = dot(&e1, &b);
        e1 = std::array::from_fn(|i| e1[i] - d * b[i]);
    }
    let m = norm(&e1);
    if m <= c(1e-9) {
        return Err(Error::Degenerate("normal frame degenerates".into()));
    }
    let e2 = f.v4.map(|a| a / norm(&f.v4));
    Ok([e1.map(|a| a / m), e2])
}

/// Linearized flow of `field` around the closed orbit `orbit`, integrated
/// from the identity over one period and projected onto the normal frame at
/// the base point. Jacobians are exact when the field provides them and
/// central differences otherwise.
pub fn orbit_monodromy<T: Real, F: VectorField<T, 4>>(
    field: &F,
    orbit: &Curve<T, 4>,
    tol: T,
) -> Result<MonodromyReport<T>> {
    if !orbit.closed {
        return Err(Error::NotClosed);
    }
    let x0 = orbit.samples[0];
    let period = orbit.period();
    let mut y0 = vec![T::zero(); 20];
    y0[..4].copy_from_slice(&x0);
    for i in 0..4 {
        y0[4 + 5 * i] = T::one();
    }
    let opts = OdeOptions { max_step: period / c(64.0), ..OdeOptions::with_tol(tol) };
    let sol = integrate(&Variational { field }, T::zero(), period, &y0, &opts)?;
    let y = sol.last();
    let x1: [T; 4] = std::array::from_fn(|i| y[i]);
    if dist(&x1, &x0) > c(ORBIT_RETURN_TOL) {
        return Err(Error::NotClosed);
    }
    let phi =
        |v: &[T; 4]| -> [T; 4] { std::array::from_fn(|i| (0..4).fold(T::zero(), |a, k| a + y[4 + 4 * i + k] * v[k])) };
    let start = normal_frame(field, &x0)?;
    let end = normal_frame(field, &x1)?;
    let m: [[T; 2]; 2] = std::array::from_fn(|i| std::array::from_fn(|j| dot(&end[i], &phi(&start[j]))));
    Ok(MonodromyReport::from_matrix(m))
}
