//! Hopf-type Bateman variables, Riemann–Silberstein field assembly and the
//! pointwise residuals (Bateman PDE, nullness, Maxwell).
//!
//! With `r² = x² + y² + z²` and `D = r² − (t − i)²`,
//!
//! ```text
//! α = (r² − t² − 1 + 2iz) / D,    β = 2(x − iy) / D,
//! ```
//!
//! and the tilde pair is `α̃(x, t) = conj α(x, −t)`, `β̃(x, t) = conj β(x, −t)`.
//! A holomorphic `h` gives the null field `F = h(α, β) ∇α × ∇β = E + iB`.

use std::str::FromStr;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::funcspace::Generator;
use crate::geom::{frame_at, stereo_project, S3Point};
use crate::scalar::c;
use crate::vector::{ccross, cdot, cross, dot, norm};
use crate::Real;

type C<T> = Complex<T>;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimePoint<T> {
    pub x: T,
    pub y: T,
    pub z: T,
    pub t: T,
}

impl<T: Real> SpacetimePoint<T> {
    pub fn new(x: T, y: T, z: T, t: T) -> Self {
        Self { x, y, z, t }
    }

    pub fn at(pos: [T; 3], t: T) -> Self {
        Self { x: pos[0], y: pos[1], z: pos[2], t }
    }

    pub fn space(&self) -> [T; 3] {
        [self.x, self.y, self.z]
    }

    fn shifted(&self, axis: usize, h: T) -> Self {
        let mut q = *self;
        match axis {
            0 => q.x += h,
            1 => q.y += h,
            2 => q.z += h,
            _ => q.t += h,
        }
        q
    }
}

/// Which pair of Bateman variables to use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    Hopf,
    Tilde,
}

impl Variant {
    /// The conjugated, time-reversed sibling.
    pub fn sibling(self) -> Self {
        match self {
            Variant::Hopf => Variant::Tilde,
            Variant::Tilde => Variant::Hopf,
        }
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hopf" => Ok(Variant::Hopf),
            "tilde" => Ok(Variant::Tilde),
            _ => Err(Error::InvalidArgument(format!("unknown variant '{s}' (expected hopf or tilde)"))),
        }
    }
}

/// How the generator enters the field.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// `F = h(α, β) ∇α × ∇β` for holomorphic `h`.
    Direct,
    /// For antiholomorphic `h`: `F = conj(h)(α̃, β̃) ∇α̃ × ∇β̃`, using the
    /// sibling pair of the chosen variant.
    Antiholomorphic,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Mode::Direct),
            "antiholomorphic" | "anti" => Ok(Mode::Antiholomorphic),
            _ => Err(Error::InvalidArgument(format!("unknown mode '{s}' (expected direct or antiholomorphic)"))),
        }
    }
}

/// Values and first derivatives of a Bateman pair at a spacetime point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VariableJet<T> {
    pub alpha: C<T>,
    pub beta: C<T>,
    pub grad_alpha: [C<T>; 3],
    pub grad_beta: [C<T>; 3],
    pub dt_alpha: C<T>,
    pub dt_beta: C<T>,
}

impl<T: Real> VariableJet<T> {
    /// `∇α × ∇β`.
    pub fn cross(&self) -> [C<T>; 3] {
        ccross(&self.grad_alpha, &self.grad_beta)
    }

    fn conjugate_time_reversed(&self) -> Self {
        Self {
            alpha: self.alpha.conj(),
            beta: self.beta.conj(),
            grad_alpha: self.grad_alpha.map(|v| v.conj()),
            grad_beta: self.grad_beta.map(|v| v.conj()),
            dt_alpha: -self.dt_alpha.conj(),
            dt_beta: -self.dt_beta.conj(),
        }
    }
}

fn hopf_jet<T: Real>(x: T, y: T, z: T, t: T) -> VariableJet<T> {
    let two = c::<T>(2.0);
    let zero = T::zero();
    let i: C<T> = C::i();
    let r2 = x * x + y * y + z * z;
    let d = C::new(r2 - t * t + T::one(), two * t);
    let na = C::new(r2 - t * t - T::one(), two * z);
    let nb = C::new(two * x, -two * y);
    let alpha = na / d;
    let beta = nb / d;
    // partials of D, N_α, N_β along (x, y, z, t)
    let dd = [C::new(two * x, zero), C::new(two * y, zero), C::new(two * z, zero), C::new(-two * t, two)];
    let dna = [C::new(two * x, zero), C::new(two * y, zero), C::new(two * z, two), C::new(-two * t, zero)];
    let dnb = [C::new(two, zero), -i * two, C::new(zero, zero), C::new(zero, zero)];
    let da: [C<T>; 4] = std::array::from_fn(|k| (dna[k] - alpha * dd[k]) / d);
    let db: [C<T>; 4] = std::array::from_fn(|k| (dnb[k] - beta * dd[k]) / d);
    VariableJet {
        alpha,
        beta,
        grad_alpha: [da[0], da[1], da[2]],
        grad_beta: [db[0], db[1], db[2]],
        dt_alpha: da[3],
        dt_beta: db[3],
    }
}

/// Exact values and first derivatives of the chosen Bateman pair.
pub fn variables<T: Real>(p: &SpacetimePoint<T>, variant: Variant) -> VariableJet<T> {
    match variant {
        Variant::Hopf => hopf_jet(p.x, p.y, p.z, p.t),
        Variant::Tilde => hopf_jet(p.x, p.y, p.z, -p.t).conjugate_time_reversed(),
    }
}

/// `∇α × ∇β − i(∂tα ∇β − ∂tβ ∇α)`.
pub fn bateman_pde_residual<T: Real>(p: &SpacetimePoint<T>, variant: Variant) -> [C<T>; 3] {
    let j = variables(p, variant);
    let cr = j.cross();
    let i: C<T> = C::i();
    std::array::from_fn(|k| cr[k] - i * (j.dt_alpha * j.grad_beta[k] - j.dt_beta * j.grad_alpha[k]))
}

/// Riemann–Silberstein vector `F = E + iB`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ComplexTriple<T>(pub [C<T>; 3]);

impl<T: Real> ComplexTriple<T> {
    pub fn e(&self) -> [T; 3] {
        self.0.map(|v| v.re)
    }

    pub fn b(&self) -> [T; 3] {
        self.0.map(|v| v.im)
    }

    /// `|F|` (Hermitian norm).
    pub fn norm(&self) -> T {
        crate::vector::cnorm(&self.0)
    }

    /// Bilinear square `F·F = |E|² − |B|² + 2i E·B`.
    pub fn square(&self) -> C<T> {
        cdot(&self.0, &self.0)
    }

    pub fn scale(&self, s: C<T>) -> Self {
        Self(self.0.map(|v| v * s))
    }
}

/// Derived electromagnetic quantities at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmSample<T> {
    pub e: [T; 3],
    pub b: [T; 3],
    /// Energy density `(|E|² + |B|²)/2`.
    pub w: T,
    /// Normalized Poynting vector `E × B / W`, absent where `W < 1e-14`.
    pub poynting: Option<[T; 3]>,
}

pub const POYNTING_W_MIN: f64 = 1e-14;

pub fn em_sample<T: Real>(f: &ComplexTriple<T>) -> EmSample<T> {
    let (e, b) = (f.e(), f.b());
    let w = (dot(&e, &e) + dot(&b, &b)) * c(0.5);
    let poynting = if w < c(POYNTING_W_MIN) { None } else { Some(cross(&e, &b).map(|v| v / w)) };
    EmSample { e, b, w, poynting }
}

/// `(E·B, |E|² − |B|²)`.
pub fn null_defect<T: Real>(f: &ComplexTriple<T>) -> (T, T) {
    let (e, b) = (f.e(), f.b());
    (dot(&e, &b), dot(&e, &e) - dot(&b, &b))
}

/// A generator bound to a variable pair and mode, validated once.
#[derive(Debug, Clone)]
pub struct BatemanField<T> {
    h: Generator<T>,
    /// Holomorphic function actually composed with the variables.
    g: Generator<T>,
    /// Variables actually used.
    pair: Variant,
    variant: Variant,
    mode: Mode,
}

impl<T: Real> BatemanField<T> {
    pub fn new(h: Generator<T>, variant: Variant, mode: Mode) -> Result<Self> {
        h.check_pure()?;
        let (g, pair) = match mode {
            Mode::Direct => {
                if !h.is_holomorphic() {
                    return Err(Error::NotHolomorphic);
                }
                (h.clone(), variant)
            }
            Mode::Antiholomorphic => {
                if !h.is_antiholomorphic() {
                    return Err(Error::NotAntiholomorphic);
                }
                (h.conj(), variant.sibling())
            }
        };
        Ok(Self { h, g, pair, variant, mode })
    }

    /// Direct-mode field on the Hopf pair.
    pub fn hopf(h: Generator<T>) -> Result<Self> {
        Self::new(h, Variant::Hopf, Mode::Direct)
    }

    pub fn generator(&self) -> &Generator<T> {
        &self.h
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn eval(&self, p: &SpacetimePoint<T>) -> ComplexTriple<T> {
        let j = variables(p, self.pair);
        let hv = self.g.eval(j.alpha, j.beta);
        ComplexTriple(j.cross().map(|v| v * hv))
    }

    pub fn eval_at(&self, x: &[T; 3], t: T) -> ComplexTriple<T> {
        self.eval(&SpacetimePoint::at(*x, t))
    }

    pub fn electric(&self, x: &[T; 3], t: T) -> [T; 3] {
        self.eval_at(x, t).e()
    }

    pub fn magnetic(&self, x: &[T; 3], t: T) -> [T; 3] {
        self.eval_at(x, t).b()
    }
}

/// `F` for a generator, checking it against the mode.
pub fn rs_field<T: Real>(
    h: &Generator<T>,
    p: &SpacetimePoint<T>,
    variant: Variant,
    mode: Mode,
) -> Result<ComplexTriple<T>> {
    Ok(BatemanField::new(h.clone(), variant, mode)?.eval(p))
}

/// Maxwell residuals of a field at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaxwellResidual<T> {
    /// `∂tE − curl B`
    pub ampere: [T; 3],
    /// `∂tB + curl E`
    pub faraday: [T; 3],
    pub div_e: T,
    pub div_b: T,
}

impl<T: Real> MaxwellResidual<T> {
    /// Largest of the four residual norms.
    pub fn max_norm(&self) -> T {
        norm(&self.ampere).max(norm(&self.faraday)).max(self.div_e.abs()).max(self.div_b.abs())
    }
}

/// Residuals from fourth-order central differences of `F` with step `fd_step`.
pub fn maxwell_residual<T: Real>(
    field: &BatemanField<T>,
    p: &SpacetimePoint<T>,
    fd_step: T,
) -> Result<MaxwellResidual<T>> {
    if !(fd_step > T::zero()) {
        return Err(Error::InvalidArgument("fd_step must be positive".into()));
    }
    let h = fd_step;
    // d[axis][component], axis 3 is time
    let d: [[C<T>; 3]; 4] = std::array::from_fn(|axis| {
        let f = |s: f64| field.eval(&p.shifted(axis, h * c(s))).0;
        let (m2, m1, p1, p2) = (f(-2.0), f(-1.0), f(1.0), f(2.0));
        std::array::from_fn(|k| (m2[k] - p2[k] + (p1[k] - m1[k]) * c::<T>(8.0)) / (h * c(12.0)))
    });
    let curl = |comp: fn(C<T>) -> T| -> [T; 3] {
        [comp(d[1][2]) - comp(d[2][1]), comp(d[2][0]) - comp(d[0][2]), comp(d[0][1]) - comp(d[1][0])]
    };
    let re = |v: C<T>| v.re;
    let im = |v: C<T>| v.im;
    let (curl_e, curl_b) = (curl(re), curl(im));
    Ok(MaxwellResidual {
        ampere: std::array::from_fn(|k| d[3][k].re - curl_b[k]),
        faraday: std::array::from_fn(|k| d[3][k].im + curl_e[k]),
        div_e: d[0][0].re + d[1][1].re + d[2][2].re,
        div_b: d[0][0].im + d[1][1].im + d[2][2].im,
    })
}

fn pair_coords<T: Real>(j: &VariableJet<T>) -> [T; 4] {
    [j.alpha.re, j.alpha.im, j.beta.re, j.beta.im]
}

/// Solves `(α, β)(x, t) = target` for `x ∈ R³` by Gauss–Newton, continued in
/// time from the exact `t = 0` inverse.
pub fn inverse_variables<T: Real>(target: &S3Point<T>, t: T) -> Result<[T; 3]> {
    if target.coords()[0] > c(1.0 - 1e-6) {
        return Err(Error::InvalidPoint("sample too close to the pole (1, 0)".into()));
    }
    let mut x =
        stereo_project(target).finite().ok_or_else(|| Error::InvalidPoint("sample projects to infinity".into()))?;
    let goal = target.coords();
    let stages = 16;
    for s in 1..=stages {
        let ts = t * c(s as f64 / stages as f64);
        let mut converged = false;
        for _ in 0..50 {
            let j = hopf_jet(x[0], x[1], x[2], ts);
            let r: [T; 4] = std::array::from_fn(|k| pair_coords(&j)[k] - goal[k]);
            let cols: [[T; 4]; 3] =
                std::array::from_fn(|k| [j.grad_alpha[k].re, j.grad_alpha[k].im, j.grad_beta[k].re, j.grad_beta[k].im]);
            let jtj: [[T; 3]; 3] = std::array::from_fn(|a| std::array::from_fn(|b| dot(&cols[a], &cols[b])));
            let jtr: [T; 3] = std::array::from_fn(|a| dot(&cols[a], &r));
            let step = solve3(&jtj, &jtr).ok_or_else(|| Error::Convergence("singular Gauss-Newton system".into()))?;
            for k in 0..3 {
                x[k] -= step[k];
            }
            if norm(&step) <= c::<T>(1e-14) * (T::one() + norm(&x)) {
                converged = true;
                break;
            }
        }
        if !converged && s == stages {
            return Err(Error::Convergence("inverse of (alpha, beta) did not converge".into()));
        }
    }
    Ok(x)
}

fn solve3<T: Real>(a: &[[T; 3]; 3], b: &[T; 3]) -> Option<[T; 3]> {
    let det = |m: &[[T; 3]; 3]| {
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
            + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    };
    let d = det(a);
    if d == T::zero() || !d.is_finite() {
        return None;
    }
    Some(std::array::from_fn(|k| {
        let mut m = *a;
        for r in 0..3 {
            m[r][k] = b[r];
        }
        det(&m) / d
    }))
}

/// Angle (radians) in R⁸ between the pushforward of `(E, B)` under
/// `(α, β)|_t` and `(Re, Im)` of `h(z1, z2)(v1 + i v2)` at `sample`. Zero
/// means the two pairs agree up to one positive factor.
pub fn sphere_pushforward_check<T: Real>(h: &Generator<T>, t: T, sample: &S3Point<T>) -> Result<T> {
    let field = BatemanField::hopf(h.clone())?;
    let x = inverse_variables(sample, t)?;
    let f = field.eval_at(&x, t);
    let (e, b) = (f.e(), f.b());

    // Differential of x ↦ (α, β)(x, t) by fourth-order central differences.
    let step: T = c(1e-4);
    let dmap: [[T; 4]; 3] = std::array::from_fn(|k| {
        let at = |s: f64| {
            let mut y = x;
            y[k] += step * c(s);
            pair_coords(&hopf_jet(y[0], y[1], y[2], t))
        };
        let (m2, m1, p1, p2) = (at(-2.0), at(-1.0), at(1.0), at(2.0));
        std::array::from_fn(|r| (m2[r] - p2[r] + (p1[r] - m1[r]) * c::<T>(8.0)) / (step * c(12.0)))
    });
    let push = |v: &[T; 3]| -> [T; 4] { std::array::from_fn(|r| (0..3).fold(T::zero(), |a, k| a + dmap[k][r] * v[k])) };
    let (pe, pb) = (push(&e), push(&b));

    let fr = frame_at(&sample.coords());
    let hv = h.eval(sample.z1(), sample.z2());
    let qe: [T; 4] = std::array::from_fn(|r| hv.re * fr.v1[r] - hv.im * fr.v2[r]);
    let qb: [T; 4] = std::array::from_fn(|r| hv.im * fr.v1[r] + hv.re * fr.v2[r]);

    let p8: Vec<T> = pe.iter().chain(pb.iter()).copied().collect();
    let q8: Vec<T> = qe.iter().chain(qb.iter()).copied().collect();
    let qn = q8.iter().fold(T::zero(), |a, v| a + *v * *v).sqrt();
    let pn = p8.iter().fold(T::zero(), |a, v| a + *v * *v).sqrt();
    if qn < c(1e-12) || pn < c(1e-12) {
        return Err(Error::Degenerate("field vanishes at the sample".into()));
    }
    let along = p8.iter().zip(&q8).fold(T::zero(), |a, (p, q)| a + *p * *q) / qn;
    let perp = p8.iter().zip(&q8).fold(T::zero(), |a, (p, q)| {
        let r = *p - along * *q / qn;
        a + r * r
    });
    Ok(perp.sqrt().atan2(along))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::SplitMix64;

    type Cx = Complex<f64>;

    fn cx(re: f64, im: f64) -> Cx {
        Cx::new(re, im)
    }

    fn near(a: Cx, b: Cx, tol: f64) -> bool {
        (a - b).norm() <= tol
    }

    fn gen(s: &str) -> Generator<f64> {
        Generator::parse(s).unwrap()
    }

    #[test]
    fn jet_at_origin() {
        let j = variables(&SpacetimePoint::new(0.0, 0.0, 0.0, 0.0), Variant::Hopf);
        assert!(near(j.alpha, cx(-1.0, 0.0), 1e-15));
        assert!(near(j.beta, cx(0.0, 0.0), 1e-15));
        let ga = [cx(0.0, 0.0), cx(0.0, 0.0), cx(0.0, 2.0)];
        let gb = [cx(2.0, 0.0), cx(0.0, -2.0), cx(0.0, 0.0)];
        for k in 0..3 {
            assert!(near(j.grad_alpha[k], ga[k], 1e-15));
            assert!(near(j.grad_beta[k], gb[k], 1e-15));
        }
        assert!(near(j.dt_alpha, cx(0.0, 2.0), 1e-15));
        assert!(near(j.dt_beta, cx(0.0, 0.0), 1e-15));
        let cr = j.cross();
        assert!(
            near(cr[0], cx(-4.0, 0.0), 1e-15) && near(cr[1], cx(0.0, 4.0), 1e-15) && near(cr[2], cx(0.0, 0.0), 1e-15)
        );
    }

    #[test]
    fn jet_at_unit_time() {
        let j = variables(&SpacetimePoint::new(0.0, 0.0, 0.0, 1.0), Variant::Hopf);
        assert!(near(j.alpha, cx(0.0, 1.0), 1e-15));
        assert!(near(j.beta, cx(0.0, 0.0), 1e-15));
        let t = variables(&SpacetimePoint::new(0.0, 0.0, 0.0, 0.0), Variant::Tilde);
        assert!(near(t.alpha, cx(-1.0, 0.0), 1e-15) && near(t.beta, cx(0.0, 0.0), 1e-15));
    }

    #[test]
    fn jets_match_finite_differences() {
        let mut rng = SplitMix64::new(31);
        let h = 1e-4;
        for variant in [Variant::Hopf, Variant::Tilde] {
            for _ in 0..200 {
                let p: SpacetimePoint<f64> = rng.spacetime_point(2.0, -1.0, 1.0);
                let j = variables(&p, variant);
                let exact = [j.grad_alpha[0], j.grad_alpha[1], j.grad_alpha[2], j.dt_alpha];
                let exact_b = [j.grad_beta[0], j.grad_beta[1], j.grad_beta[2], j.dt_beta];
                for axis in 0..4 {
                    let at = |s: f64| variables(&p.shifted(axis, s * h), variant);
                    let fd = |f: fn(&VariableJet<f64>) -> Cx| {
                        (f(&at(-2.0)) - f(&at(2.0)) + (f(&at(1.0)) - f(&at(-1.0))) * 8.0) / (12.0 * h)
                    };
                    let (fa, fb) = (fd(|j| j.alpha), fd(|j| j.beta));
                    assert!(near(fa, exact[axis], 1e-8 * (1.0 + exact[axis].norm())));
                    assert!(near(fb, exact_b[axis], 1e-8 * (1.0 + exact_b[axis].norm())));
                }
            }
        }
    }

    #[test]
    fn pde_and_sphere_constraint() {
        let mut rng = SplitMix64::new(37);
        for variant in [Variant::Hopf, Variant::Tilde] {
            for _ in 0..500 {
                let p: SpacetimePoint<f64> = rng.spacetime_point(2.0, -1.0, 1.0);
                let r = bateman_pde_residual(&p, variant);
                assert!(r.iter().all(|v| v.norm() <= 1e-10));
                let j = variables(&p, variant);
                assert!((j.alpha.norm_sqr() + j.beta.norm_sqr() - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn hopfion_at_origin() {
        let f = rs_field(&gen("1"), &SpacetimePoint::new(0.0, 0.0, 0.0, 0.0), Variant::Hopf, Mode::Direct).unwrap();
        assert_eq!(f.e(), [-4.0, 0.0, 0.0]);
        assert_eq!(f.b(), [0.0, 4.0, 0.0]);
        let s = em_sample(&f);
        assert_eq!(s.w, 16.0);
        assert_eq!(s.poynting, Some([0.0, 0.0, -1.0]));
    }

    #[test]
    fn em_sample_of_zero() {
        let s = em_sample(&ComplexTriple([cx(0.0, 0.0); 3]));
        assert_eq!(s.w, 0.0);
        assert!(s.poynting.is_none());
    }

    #[test]
    fn null_defect_witnesses() {
        let f = ComplexTriple([cx(2.5, 0.0), cx(0.0, 2.5), cx(0.0, 0.0)]);
        assert_eq!(null_defect(&f), (0.0, 0.0));
        let f = ComplexTriple([cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0)]);
        assert_eq!(null_defect(&f), (0.0, 1.0));
    }

    #[test]
    fn mode_validation() {
        let p = SpacetimePoint::new(0.1, 0.2, 0.3, 0.4);
        assert!(matches!(rs_field(&gen("z1 + zb1"), &p, Variant::Hopf, Mode::Direct), Err(Error::MixedGenerator)));
        assert!(matches!(
            rs_field(&gen("z1 + zb1"), &p, Variant::Hopf, Mode::Antiholomorphic),
            Err(Error::MixedGenerator)
        ));
        assert!(matches!(rs_field(&gen("zb1"), &p, Variant::Hopf, Mode::Direct), Err(Error::NotHolomorphic)));
        assert!(matches!(
            rs_field(&gen("z1"), &p, Variant::Hopf, Mode::Antiholomorphic),
            Err(Error::NotAntiholomorphic)
        ));
        // constants are both
        assert!(rs_field(&gen("2"), &p, Variant::Hopf, Mode::Antiholomorphic).is_ok());
    }

    #[test]
    fn antiholomorphic_at_time_zero_is_conjugate_of_direct() {
        let anti = BatemanField::new(gen("zb1*zb2"), Variant::Hopf, Mode::Antiholomorphic).unwrap();
        let direct = BatemanField::hopf(gen("z1*z2")).unwrap();
        // the direct counterpart keeps the coefficients and trades z̄ for z
        let anti_c =
            BatemanField::new(gen("(1+2i)*zb1^2 + (0.5-1i)*zb2"), Variant::Hopf, Mode::Antiholomorphic).unwrap();
        let direct_c = BatemanField::hopf(gen("(1+2i)*z1^2 + (0.5-1i)*z2")).unwrap();
        let mut rng = SplitMix64::new(41);
        for _ in 0..200 {
            let x: [f64; 3] = rng.ball_point(3.0);
            for (a, d) in [(&anti, &direct), (&anti_c, &direct_c)] {
                let fa = a.eval_at(&x, 0.0);
                let fd = d.eval_at(&x, 0.0);
                for k in 0..3 {
                    assert!(near(fa.0[k], fd.0[k].conj(), 1e-12 * (1.0 + fd.norm())));
                }
            }
        }
    }

    #[test]
    fn linearity_in_generator() {
        let p = SpacetimePoint::new(0.3, -0.7, 1.1, 0.4);
        let s = cx(1.5, -0.25);
        let f = rs_field(&gen("6*z1*z2^2"), &p, Variant::Hopf, Mode::Direct).unwrap();
        let g = rs_field(&gen("6*z1*z2^2").scale(s), &p, Variant::Hopf, Mode::Direct).unwrap();
        for k in 0..3 {
            assert!(near(g.0[k], f.0[k] * s, 1e-15 * (1.0 + f.norm())));
        }
    }

    #[test]
    fn maxwell_holds_for_hopfion() {
        let field = BatemanField::hopf(gen("1")).unwrap();
        let mut rng = SplitMix64::new(43);
        for _ in 0..20 {
            let p = rng.spacetime_point(2.0, -1.0, 1.0);
            let r = maxwell_residual(&field, &p, 1e-3).unwrap();
            assert!(r.max_norm() <= 1e-6 * (1.0 + field.eval(&p).norm()));
        }
        assert!(maxwell_residual(&field, &SpacetimePoint::new(0.0, 0.0, 0.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn inverse_variables_round_trip() {
        let mut rng = SplitMix64::new(47);
        for _ in 0..50 {
            let x: [f64; 3] = rng.ball_point(3.0);
            for t in [0.0, 0.3, 0.7] {
                let j = variables(&SpacetimePoint::at(x, t), Variant::Hopf);
                let s = S3Point::from_complex(j.alpha, j.beta).unwrap();
                let y = inverse_variables(&s, t).unwrap();
                assert!(norm(&crate::vector::sub(&x, &y)) < 1e-9 * (1.0 + norm(&x)), "{x:?} {y:?} t={t}");
            }
        }
    }

    #[test]
    fn pushforward_matches_sphere_field() {
        let mut rng = SplitMix64::new(53);
        for (h, t) in [("1", 0.0), ("1", 0.7), ("z1", 0.0), ("6*z1*z2^2", 0.4)] {
            let g = gen(h);
            let mut checked = 0;
            while checked < 30 {
                let s: S3Point<f64> = rng.s3_point();
                if s.coords()[0] > 0.95 || g.eval(s.z1(), s.z2()).norm() < 1e-3 {
                    continue;
                }
                let d = sphere_pushforward_check(&g, t, &s).unwrap();
                assert!(d <= 1e-6, "{h} t={t}: {d}");
                checked += 1;
            }
        }
        assert!(sphere_pushforward_check(&gen("1"), 0.0, &S3Point::new([1.0, 0.0, 0.0, 0.0]).unwrap()).is_err());
    }
}
