//! Legendrian fields on S³ from a generator Θ, their divergence identities,
//! rotation numbers, Seifert fields and contact forms, and the first-integral
//! and tangency checks for holomorphic potentials.
//!
//! In C² notation `v1 = (−z̄2, z̄1)` and `v2 = i·v1`, so the E-type field of Θ
//! is `conj(Θ)·v1` and the B-type field is `i·conj(Θ)·v1`.

use std::str::FromStr;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::flow::{winding, Curve};
use crate::funcspace::{lbar_of_jet, Generator, MixedPoly, Var, WirtingerJet};
use crate::geom::{frame_at, hopf_coords, HopfCoords, S3Point};
use crate::scalar::c;
use crate::vector::{dot, norm};
use crate::Real;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Polarity {
    /// `Re(Θ) v1 − Im(Θ) v2`
    E,
    /// `Re(Θ) v2 + Im(Θ) v1`
    B,
}

impl FromStr for Polarity {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "e" | "E" => Ok(Polarity::E),
            "b" | "B" => Ok(Polarity::B),
            _ => Err(Error::InvalidArgument(format!("unknown polarity '{s}' (expected e or b)"))),
        }
    }
}

// d v1 / dx and d v2 / dx, rows indexed by component
const DV1: [[f64; 4]; 4] = [[0., 0., -1., 0.], [0., 0., 0., 1.], [1., 0., 0., 0.], [0., -1., 0., 0.]];
const DV2: [[f64; 4]; 4] = [[0., 0., 0., -1.], [0., 0., -1., 0.], [0., 1., 0., 0.], [1., 0., 0., 0.]];

#[derive(Debug, Clone)]
pub struct LegendrianField<T> {
    pub generator: Generator<T>,
    pub polarity: Polarity,
}

impl<T: Real> LegendrianField<T> {
    pub fn new(generator: Generator<T>, polarity: Polarity) -> Self {
        Self { generator, polarity }
    }

    fn jet(&self, x: &[T; 4]) -> WirtingerJet<T> {
        self.generator.jet(Complex::new(x[0], x[1]), Complex::new(x[2], x[3]))
    }

    /// Field at any point of R⁴, extended off the sphere by the coefficient
    /// formulas.
    pub fn eval(&self, x: &[T; 4]) -> [T; 4] {
        let th = self.generator.eval(Complex::new(x[0], x[1]), Complex::new(x[2], x[3]));
        combine(self.polarity, th, x)
    }

    pub fn eval_at(&self, p: &S3Point<T>) -> [T; 4] {
        self.eval(&p.coords())
    }

    /// Exact ambient Jacobian `J[i][k] = ∂X_i/∂x_k`.
    pub fn jacobian(&self, x: &[T; 4]) -> [[T; 4]; 4] {
        let j = self.jet(x);
        let (r, im) = (j.value.re, j.value.im);
        let (gr, gi) = (j.grad_re(), j.grad_im());
        let f = frame_at(x);
        // X = a v1 + b v2 with (a, b) = (R, −I) for E, (I, R) for B
        let (a, b, ga, gb) = match self.polarity {
            Polarity::E => (r, -im, gr, gi.map(|v| -v)),
            Polarity::B => (im, r, gi, gr),
        };
        std::array::from_fn(|i| {
            std::array::from_fn(|k| ga[k] * f.v1[i] + a * c::<T>(DV1[i][k]) + gb[k] * f.v2[i] + b * c::<T>(DV2[i][k]))
        })
    }
}

fn combine<T: Real>(pol: Polarity, th: Complex<T>, x: &[T; 4]) -> [T; 4] {
    let f = frame_at(x);
    match pol {
        Polarity::E => std::array::from_fn(|i| th.re * f.v1[i] - th.im * f.v2[i]),
        Polarity::B => std::array::from_fn(|i| th.re * f.v2[i] + th.im * f.v1[i]),
    }
}

pub fn eval_field<T: Real>(l: &LegendrianField<T>, p: &S3Point<T>) -> [T; 4] {
    l.eval_at(p)
}

/// The explicit torus field `(y1|z2|², −x1|z2|², −y2|z1|², x2|z1|²)`, i.e.
/// `z1' = −i|z2|² z1`, `z2' = i|z1|² z2`.
pub fn torus_field<T: Real>(x: &[T; 4]) -> [T; 4] {
    let [x1, y1, x2, y2] = *x;
    let r1 = x1 * x1 + y1 * y1;
    let r2 = x2 * x2 + y2 * y2;
    [y1 * r2, -x1 * r2, -y2 * r1, x2 * r1]
}

pub fn torus_jacobian<T: Real>(x: &[T; 4]) -> [[T; 4]; 4] {
    let [x1, y1, x2, y2] = *x;
    let two = c::<T>(2.0);
    let r1 = x1 * x1 + y1 * y1;
    let r2 = x2 * x2 + y2 * y2;
    let z = T::zero();
    [
        [z, r2, two * y1 * x2, two * y1 * y2],
        [-r2, z, -two * x1 * x2, -two * x1 * y2],
        [-two * y2 * x1, -two * y2 * y1, z, -r1],
        [two * x2 * x1, two * x2 * y1, r1, z],
    ]
}

/// Ambient divergences of both fields of Θ and the values `2·Re(𝕃̄Θ)`,
/// `2·Im(𝕃̄Θ)` they should equal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceIdentities<T> {
    pub div_e: T,
    pub div_b: T,
    pub lbar_re2: T,
    pub lbar_im2: T,
}

pub fn divergence_identities<T: Real>(theta: &Generator<T>, p: &S3Point<T>) -> DivergenceIdentities<T> {
    let x = p.coords();
    let trace = |pol| {
        let j = LegendrianField::new(theta.clone(), pol).jacobian(&x);
        j[0][0] + j[1][1] + j[2][2] + j[3][3]
    };
    let lb = lbar_of_jet(&theta.jet(p.z1(), p.z2()), p.z1(), p.z2());
    let two = c::<T>(2.0);
    DivergenceIdentities {
        div_e: trace(Polarity::E),
        div_b: trace(Polarity::B),
        lbar_re2: two * lb.re,
        lbar_im2: two * lb.im,
    }
}

/// Tolerance on the contact and radial components of a tangent, relative to
/// its length.
pub const LEGENDRIAN_TOL: f64 = 1e-6;

/// Winding number of the tangent's coordinates in the `{v1, v2}`
/// trivialization.
pub fn rotation_number<T: Real>(curve: &Curve<T, 4>) -> Result<i64> {
    if !curve.closed {
        return Err(Error::NotClosed);
    }
    let tangents = curve.cyclic_tangents().ok_or(Error::MissingTangents)?;
    let mut coords = Vec::with_capacity(tangents.len());
    for (x, t) in curve.cyclic_samples().iter().zip(tangents) {
        let f = frame_at(x);
        let tn = norm(t);
        if tn <= c(1e-9) {
            return Err(Error::Degenerate("tangent vanishes".into()));
        }
        let off = dot(t, &f.v4).abs().max(dot(t, &f.v3).abs()) / tn;
        if off > c(LEGENDRIAN_TOL) {
            return Err(Error::NotLegendrian { defect: off.as_f64() });
        }
        let w = Complex::new(dot(t, &f.v1), dot(t, &f.v2));
        if w.norm() < c(1e-9) {
            return Err(Error::Degenerate("tangent projection onto the contact plane below 1e-9".into()));
        }
        coords.push(w);
    }
    winding(&coords)
}

/// Coprime positive integers `(p, q)` of the Seifert fibration by circles
/// `(z1 e^{ipφ}, z2 e^{iqφ})`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeifertSpec {
    p: u32,
    q: u32,
}

impl SeifertSpec {
    pub fn new(p: u32, q: u32) -> Result<Self> {
        fn gcd(a: u32, b: u32) -> u32 {
            if b == 0 {
                a
            } else {
                gcd(b, a % b)
            }
        }
        if p == 0 || q == 0 || gcd(p, q) != 1 {
            return Err(Error::InvalidArgument(format!("({p}, {q}) must be positive and coprime")));
        }
        Ok(Self { p, q })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    fn pq<T: Real>(&self) -> (T, T) {
        (T::from_u32(self.p).unwrap(), T::from_u32(self.q).unwrap())
    }
}

/// `X_{p,q} = (−p y1, p x1, −q y2, q x2)`.
pub fn seifert_field<T: Real>(s: &SeifertSpec, x: &[T; 4]) -> [T; 4] {
    let (p, q) = s.pq::<T>();
    [-p * x[1], p * x[0], -q * x[3], q * x[2]]
}

pub fn seifert_jacobian<T: Real>(s: &SeifertSpec) -> [[T; 4]; 4] {
    let (p, q) = s.pq::<T>();
    let z = T::zero();
    [[z, -p, z, z], [p, z, z, z], [z, z, z, -q], [z, z, q, z]]
}

/// Cartesian coefficients of `α_{p,q}`, valid wherever both `|z_i| > 0`
/// (also off the sphere).
pub fn seifert_form_cartesian<T: Real>(s: &SeifertSpec, x: &[T; 4]) -> [T; 4] {
    let (p, q) = s.pq::<T>();
    let [x1, y1, x2, y2] = *x;
    let r1 = x1 * x1 + y1 * y1;
    let r2 = x2 * x2 + y2 * y2;
    let k = p * r1 + q * r2;
    let a = x1 * x2 - y1 * y2;
    let b = y1 * x2 + x1 * y2;
    [
        -(k * a * x1 + q * b * y1) / r1,
        (-k * a * y1 + q * b * x1) / r1,
        (k * a * x2 + p * b * y2) / r2,
        (k * a * y2 - p * b * x2) / r2,
    ]
}

/// `α_{p,q}` at a point of S³. Near the circles `z1 = 0` or `z2 = 0` the
/// Cartesian quotient is replaced by its simplification using
/// `|z1|² + |z2|² = 1`, which is smooth there.
pub fn seifert_form<T: Real>(s: &SeifertSpec, pt: &S3Point<T>) -> [T; 4] {
    let x = pt.coords();
    let [x1, y1, x2, y2] = x;
    let r1 = x1 * x1 + y1 * y1;
    let r2 = x2 * x2 + y2 * y2;
    if r1 > c(1e-8) && r2 > c(1e-8) {
        return seifert_form_cartesian(s, &x);
    }
    let (p, q) = s.pq::<T>();
    let k = p * r1 + q * r2;
    let b = y1 * x2 + x1 * y2;
    [-k * x2 - (q - p) * b * y1, k * y2 + (q - p) * b * x1, k * x1 + (p - q) * b * y2, -k * y1 - (p - q) * b * x2]
}

/// Coefficients of `α_{p,q}` on `(ds, dφ1, dφ2)` in Hopf coordinates.
pub fn seifert_form_hopf<T: Real>(s: &SeifertSpec, h: &HopfCoords<T>) -> [T; 3] {
    let (p, q) = s.pq::<T>();
    let (cs, sn) = (h.s.cos(), h.s.sin());
    let ph = h.phi1 + h.phi2;
    let m = ph.sin() * sn * cs;
    [(p * cs * cs + q * sn * sn) * ph.cos(), q * m, -p * m]
}

/// `(ds, dφ1, dφ2)` applied to a vector at a point off the degenerate circles.
pub fn hopf_differentials<T: Real>(pt: &S3Point<T>, v: &[T; 4]) -> [T; 3] {
    let [x1, y1, x2, y2] = pt.coords();
    let r1s = x1 * x1 + y1 * y1;
    let r2s = x2 * x2 + y2 * y2;
    let (r1, r2) = (r1s.sqrt(), r2s.sqrt());
    let dr1 = (x1 * v[0] + y1 * v[1]) / r1;
    let dr2 = (x2 * v[2] + y2 * v[3]) / r2;
    [(r1 * dr2 - r2 * dr1) / (r1s + r2s), (x1 * v[1] - y1 * v[0]) / r1s, (x2 * v[3] - y2 * v[2]) / r2s]
}

/// `(p + q)(p cos² s + q sin² s)`.
pub fn contact_volume_expected<T: Real>(s: &SeifertSpec, hs: T) -> T {
    let (p, q) = s.pq::<T>();
    (p + q) * (p * hs.cos().powi(2) + q * hs.sin().powi(2))
}

/// `(α ∧ dα) / μ0` at `pt`, with `dα` from central differences of the
/// Cartesian coefficients and both forms evaluated on the frame
/// `(v1, v2, v4)`. Here `μ0 = ι_{v3}(dx1∧dy1∧dx2∧dy2)`.
pub fn contact_volume_ratio<T: Real>(s: &SeifertSpec, pt: &S3Point<T>, fd_step: T) -> Result<T> {
    let hs = hopf_coords(pt).s;
    let margin = c::<T>(1e-3);
    if hs < margin || hs > T::FRAC_PI_2() - margin {
        return Err(Error::InvalidPoint("within 1e-3 of a degenerate circle".into()));
    }
    if !(fd_step > T::zero()) {
        return Err(Error::InvalidArgument("fd_step must be positive".into()));
    }
    let x = pt.coords();
    let alpha = seifert_form_cartesian(s, &x);
    // g[i][j] = ∂α_j / ∂x_i
    let g: [[T; 4]; 4] = std::array::from_fn(|i| {
        let mut xp = x;
        let mut xm = x;
        xp[i] += fd_step;
        xm[i] -= fd_step;
        let (ap, am) = (seifert_form_cartesian(s, &xp), seifert_form_cartesian(s, &xm));
        std::array::from_fn(|j| (ap[j] - am[j]) / (fd_step + fd_step))
    });
    let d_alpha = |u: &[T; 4], w: &[T; 4]| {
        let mut acc = T::zero();
        for i in 0..4 {
            for j in 0..4 {
                acc += (g[i][j] - g[j][i]) * u[i] * w[j];
            }
        }
        acc
    };
    let f = frame_at(&x);
    let (e1, e2, e3) = (f.v1, f.v2, f.v4);
    let a = |v: &[T; 4]| dot(&alpha, v);
    let top = a(&e1) * d_alpha(&e2, &e3) - a(&e2) * d_alpha(&e1, &e3) + a(&e3) * d_alpha(&e1, &e2);
    let mu0 = det4(&[f.v3, e1, e2, e3]);
    Ok(top / mu0)
}

fn det4<T: Real>(m: &[[T; 4]; 4]) -> T {
    let minor = |r: usize, col: usize| {
        let rows: Vec<usize> = (0..4).filter(|&i| i != r).collect();
        let cols: Vec<usize> = (0..4).filter(|&j| j != col).collect();
        let e = |i: usize, j: usize| m[rows[i]][cols[j]];
        e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
            + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
    };
    (0..4).fold(T::zero(), |acc, j| {
        let s = if j % 2 == 0 { T::one() } else { -T::one() };
        acc + s * m[0][j] * minor(0, j)
    })
}

/// `h = 2 (∂G/∂z2) z̄1 − 2 (∂G/∂z1) z̄2` as a mixed polynomial. Its E-type field
/// has `Im G` as a first integral and its B-type field `Re G`.
pub fn potential_to_generator<T: Real>(g: &MixedPoly<T>) -> Result<MixedPoly<T>> {
    if !g.is_holomorphic() {
        return Err(Error::NotHolomorphic);
    }
    let two = Complex::new(c::<T>(2.0), T::zero());
    let a = &g.derivative(Var::Z2) * &MixedPoly::var(Var::Zb1);
    let b = &g.derivative(Var::Z1) * &MixedPoly::var(Var::Zb2);
    Ok((&a - &b).scale(two))
}

pub fn h_from_potential<T: Real>(g: &MixedPoly<T>, z1: Complex<T>, z2: Complex<T>) -> Result<Complex<T>> {
    Ok(potential_to_generator(g)?.eval(z1, z2))
}

/// Outcome of the tangency test at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tangency<T> {
    /// `|sin(arg Θ − arg h)|`
    pub defect: T,
    /// The arguments differ by about π rather than 0.
    pub opposite: bool,
    /// `|h|` or `|Θ|` at most 1e-9: the test says nothing here.
    pub vacuous: bool,
}

pub fn tangency_defect<T: Real>(theta: &Generator<T>, g: &MixedPoly<T>, pt: &S3Point<T>) -> Result<Tangency<T>> {
    let h = h_from_potential(g, pt.z1(), pt.z2())?;
    let th = theta.eval(pt.z1(), pt.z2());
    if h.norm() <= c(1e-9) || th.norm() <= c(1e-9) {
        return Ok(Tangency { defect: T::zero(), opposite: false, vacuous: true });
    }
    let w = th * h.conj();
    Ok(Tangency { defect: w.im.abs() / w.norm(), opposite: w.re < T::zero(), vacuous: false })
}

/// `(max |G|, max |projection of ∇Re G onto span(v1, v2)|)` along the curve.
pub fn tt_link_defect<T: Real>(g: &MixedPoly<T>, curve: &Curve<T, 4>) -> Result<(T, T)> {
    if !g.is_holomorphic() {
        return Err(Error::NotHolomorphic);
    }
    let mut worst = (T::zero(), T::zero());
    for x in &curve.samples {
        let j = g.jet(Complex::new(x[0], x[1]), Complex::new(x[2], x[3]));
        let f = frame_at(x);
        let gr = j.grad_re();
        let proj = (dot(&gr, &f.v1).powi(2) + dot(&gr, &f.v2).powi(2)).sqrt();
        worst = (worst.0.max(j.value.norm()), worst.1.max(proj));
    }
    Ok(worst)
}

/// `ρ` such that `ρ z1^p z2^q − 1` vanishes on S³ exactly where
/// `|z1|^p |z2|^q` is maximal.
pub fn torus_knot_rho<T: Real>(p: u32, q: u32) -> T {
    let (pf, qf) = (p as f64, q as f64);
    let s = pf + qf;
    T::lit(1.0 / ((pf / s).powf(pf / 2.0) * (qf / s).powf(qf / 2.0)))
}

/// `ρ z1^p z2^q − 1`.
pub fn torus_knot_potential<T: Real>(p: u32, q: u32) -> MixedPoly<T> {
    MixedPoly::from_terms([
        (Complex::new(torus_knot_rho(p, q), T::zero()), [p, q, 0, 0]),
        (Complex::new(-T::one(), T::zero()), [0, 0, 0, 0]),
    ])
}

/// The curve on `|z1|² = p/(p+q)` with `ρ z1^p z2^q = e^{iψ}`, sampled at `n`
/// points: `(r1 e^{i(qθ + ψ/p)}, r2 e^{−ipθ})`, `θ ∈ [0, 2π)`.
pub fn torus_knot_curve<T: Real>(p: u32, q: u32, psi: T, n: usize) -> Result<Curve<T, 4>> {
    let (pf, qf) = (T::from_u32(p).unwrap(), T::from_u32(q).unwrap());
    let r1 = (pf / (pf + qf)).sqrt();
    let r2 = (qf / (pf + qf)).sqrt();
    let z = move |th: T| {
        let a1 = qf * th + psi / pf;
        let a2 = -pf * th;
        (Complex::from_polar(r1, a1), Complex::from_polar(r2, a2))
    };
    Curve::sample_periodic(
        T::TAU(),
        n,
        |th| {
            let (z1, z2) = z(th);
            [z1.re, z1.im, z2.re, z2.im]
        },
        Some(|th| {
            let (z1, z2) = z(th);
            let i = Complex::new(T::zero(), T::one());
            let (d1, d2) = (i * qf * z1, -i * pf * z2);
            [d1.re, d1.im, d2.re, d2.im]
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::phase_windings;
    use crate::geom::{complex_structure, contact_pairing, from_hopf_coords};
    use crate::rng::SplitMix64;
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4, FRAC_PI_6, PI, TAU};

    fn gen(s: &str) -> Generator<f64> {
        Generator::parse(s).unwrap()
    }

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn hopf_field_at_pole() {
        let l = LegendrianField::new(gen("1"), Polarity::E);
        assert_eq!(l.eval_at(&S3Point::new([1.0, 0.0, 0.0, 0.0]).unwrap()), [0.0, 0.0, 1.0, 0.0]);
    }

    #[test]
    fn legendrian_and_j_pairing() {
        let mut rng = SplitMix64::new(59);
        for s in ["1", "z1", "6*z1*z2^2", "zb1*zb2", "exp(z1*z2)", "zb1 + 2*z2"] {
            let e = LegendrianField::new(gen(s), Polarity::E);
            let b = LegendrianField::new(gen(s), Polarity::B);
            for _ in 0..100 {
                let p: S3Point<f64> = rng.s3_point();
                let (xe, xb) = (e.eval_at(&p), b.eval_at(&p));
                assert!(contact_pairing(&p, &xe).abs() <= 1e-12);
                assert!(dot(&xe, &p.coords()).abs() <= 1e-12);
                assert!(close(&xb, &complex_structure(&xe), 1e-15));
            }
        }
    }

    #[test]
    fn torus_field_is_b_type_of_conjugate_product() {
        // The explicit torus field is J applied to the E-type field of z̄1z̄2,
        // equivalently the E-type field of −i·z̄1z̄2.
        let b = LegendrianField::new(gen("zb1*zb2"), Polarity::B);
        let e = LegendrianField::new(gen("-i*zb1*zb2"), Polarity::E);
        let e_plain = LegendrianField::new(gen("zb1*zb2"), Polarity::E);
        let mut rng = SplitMix64::new(61);
        let mut differs = false;
        for _ in 0..100 {
            let p: S3Point<f64> = rng.s3_point();
            let t = torus_field(&p.coords());
            assert!(close(&t, &b.eval_at(&p), 1e-15));
            assert!(close(&t, &e.eval_at(&p), 1e-15));
            differs |= !close(&t, &e_plain.eval_at(&p), 1e-3);
        }
        assert!(differs);
    }

    #[test]
    fn exact_jacobians_match_differences() {
        let mut rng = SplitMix64::new(67);
        let fields: Vec<LegendrianField<f64>> = ["1", "6*z1*z2^2", "zb1*zb2", "exp(z1*z2)", "zb1"]
            .iter()
            .flat_map(|s| [Polarity::E, Polarity::B].map(|p| LegendrianField::new(gen(s), p)))
            .collect();
        for _ in 0..50 {
            let x = rng.s3_point::<f64>().coords();
            for l in &fields {
                let j = l.jacobian(&x);
                for k in 0..4 {
                    let h = 1e-5;
                    let (mut xp, mut xm) = (x, x);
                    xp[k] += h;
                    xm[k] -= h;
                    let (fp, fm) = (l.eval(&xp), l.eval(&xm));
                    for i in 0..4 {
                        assert!((j[i][k] - (fp[i] - fm[i]) / (2.0 * h)).abs() < 1e-8);
                    }
                }
            }
            let j = torus_jacobian(&x);
            for k in 0..4 {
                let h = 1e-5;
                let (mut xp, mut xm) = (x, x);
                xp[k] += h;
                xm[k] -= h;
                let (fp, fm) = (torus_field(&xp), torus_field(&xm));
                for i in 0..4 {
                    assert!((j[i][k] - (fp[i] - fm[i]) / (2.0 * h)).abs() < 1e-9);
                }
            }
        }
    }

    #[test]
    fn divergence_of_holomorphic_generators_vanishes() {
        let mut rng = SplitMix64::new(71);
        for s in ["1", "z1", "z1*z2", "6*z1*z2^2", "exp(z1*z2)", "(2+1i)"] {
            for _ in 0..100 {
                let p: S3Point<f64> = rng.s3_point();
                let d = divergence_identities(&gen(s), &p);
                for v in [d.div_e, d.div_b, d.lbar_re2, d.lbar_im2] {
                    assert!(v.abs() <= 1e-12, "{s}: {d:?}");
                }
            }
        }
    }

    #[test]
    fn divergence_of_conjugate_variable() {
        let p = S3Point::new([0.0, 0.0, 1.0, 0.0]).unwrap();
        let d = divergence_identities(&gen("zb1"), &p);
        assert!((d.div_e + 2.0).abs() < 1e-15 && (d.lbar_re2 + 2.0).abs() < 1e-15);
        let mut rng = SplitMix64::new(73);
        for s in ["zb1", "zb1*z2^2 + (1-2i)*zb2", "z1*zb1"] {
            for _ in 0..200 {
                let p: S3Point<f64> = rng.s3_point();
                let d = divergence_identities(&gen(s), &p);
                assert!((d.div_e - d.lbar_re2).abs() <= 1e-12);
                assert!((d.div_b - d.lbar_im2).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn rotation_of_tt_unknot() {
        let s = FRAC_1_SQRT_2;
        let c = Curve::sample_periodic(
            TAU,
            128,
            |t: f64| [s * t.cos(), s * t.sin(), s * t.cos(), -s * t.sin()],
            Some(|t: f64| [-s * t.sin(), s * t.cos(), -s * t.sin(), -s * t.cos()]),
        )
        .unwrap();
        let x = c.samples[0];
        let t = c.tangents.as_ref().unwrap()[0];
        let f = frame_at(&x);
        assert!(dot(&t, &f.v1).abs() < 1e-15 && (dot(&t, &f.v2) + 1.0).abs() < 1e-15);
        assert_eq!(rotation_number(&c).unwrap(), 0);
    }

    #[test]
    fn torus_orbit_has_rotation_number_one() {
        // (z1 e^{-i|z2|²τ}, z2 e^{i|z1|²τ}) with |z2|² = 2/5 closes at 10π as a
        // (2,3) torus knot; the tangent reads i z1 z2 in the (v1, v2) frame,
        // which winds -2 + 3 = 1 times
        let (r1, r2) = ((0.6f64).sqrt(), (0.4f64).sqrt());
        let point = |t: f64| {
            let (a, b) = (-0.4 * t, 0.6 * t);
            [r1 * a.cos(), r1 * a.sin(), r2 * b.cos(), r2 * b.sin()]
        };
        let c = Curve::sample_periodic(10.0 * PI, 600, point, Some(|t: f64| torus_field(&point(t)))).unwrap();
        assert_eq!(rotation_number(&c).unwrap(), 1);
        assert_eq!(phase_windings(&c).unwrap(), (-2, 3));
    }

    #[test]
    fn rotation_errors() {
        let c = Curve::sample_periodic(
            TAU,
            64,
            |t: f64| [t.cos(), t.sin(), 0.0, 0.0],
            Some(|t: f64| [-t.sin(), t.cos(), 0.0, 0.0]),
        )
        .unwrap();
        // the Hopf fibre direction is transverse to the contact planes
        assert!(matches!(rotation_number(&c), Err(Error::NotLegendrian { .. })));
        let no_tangents =
            Curve::sample_periodic(TAU, 64, |t: f64| [t.cos(), t.sin(), 0.0, 0.0], None::<fn(f64) -> [f64; 4]>)
                .unwrap();
        assert!(matches!(rotation_number(&no_tangents), Err(Error::MissingTangents)));
    }

    #[test]
    fn seifert_form_values() {
        let s11 = SeifertSpec::new(1, 1).unwrap();
        let p = S3Point::new([FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, 0.0]).unwrap();
        assert!(close(&seifert_form(&s11, &p), &[-FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2, 0.0], 1e-15));
        assert!(SeifertSpec::new(2, 4).is_err() && SeifertSpec::new(0, 1).is_err());

        let mut rng = SplitMix64::new(79);
        for (a, b) in [(1, 1), (2, 3), (3, 5)] {
            let s = SeifertSpec::new(a, b).unwrap();
            for _ in 0..100 {
                let p: S3Point<f64> = rng.s3_point_in_band(0.01, 1.56);
                let x = p.coords();
                let al = seifert_form(&s, &p);
                assert!(dot(&al, &seifert_field(&s, &x)).abs() <= 1e-12);
                // Hopf-coordinate form agrees on tangent vectors
                let hc = hopf_coords(&p);
                let hf = seifert_form_hopf(&s, &hc);
                let f = frame_at(&x);
                for v in [f.v1, f.v2, f.v4] {
                    let d = hopf_differentials(&p, &v);
                    let via_hopf = hf[0] * d[0] + hf[1] * d[1] + hf[2] * d[2];
                    assert!((dot(&al, &v) - via_hopf).abs() <= 1e-10);
                }
                // smooth branch agrees with the quotient formula
                let smooth = {
                    let (pf, qf) = (a as f64, b as f64);
                    let [x1, y1, x2, y2] = x;
                    let k = pf * (x1 * x1 + y1 * y1) + qf * (x2 * x2 + y2 * y2);
                    let bb = y1 * x2 + x1 * y2;
                    [
                        -k * x2 - (qf - pf) * bb * y1,
                        k * y2 + (qf - pf) * bb * x1,
                        k * x1 + (pf - qf) * bb * y2,
                        -k * y1 - (pf - qf) * bb * x2,
                    ]
                };
                assert!(close(&smooth, &al, 1e-12));
            }
            // on the degenerate circles the form stays finite and annihilates X
            for p in [S3Point::<f64>::new([0.0, 0.0, 0.6, 0.8]).unwrap(), S3Point::new([0.6, -0.8, 0.0, 0.0]).unwrap()]
            {
                let al = seifert_form(&s, &p);
                assert!(al.iter().all(|v| v.is_finite()));
                assert!(dot(&al, &seifert_field(&s, &p.coords())).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn contact_volume_known_values() {
        let s11 = SeifertSpec::new(1, 1).unwrap();
        let s23 = SeifertSpec::new(2, 3).unwrap();
        let s35 = SeifertSpec::new(3, 5).unwrap();
        let at = |s: f64, p1: f64, p2: f64| from_hopf_coords(&HopfCoords { s, phi1: p1, phi2: p2 });
        assert!((contact_volume_ratio(&s11, &at(0.3, 0.2, 1.0), 1e-5).unwrap() - 2.0).abs() < 1e-6);
        assert!((contact_volume_ratio(&s23, &at(FRAC_PI_4, 0.7, -0.4), 1e-5).unwrap() - 12.5).abs() < 1e-6);
        assert!((contact_volume_ratio(&s35, &at(FRAC_PI_6, 2.0, 0.1), 1e-5).unwrap() - 28.0).abs() < 1e-6);
        assert!((contact_volume_expected(&s35, FRAC_PI_6) - 28.0f64).abs() < 1e-12);
        assert!(contact_volume_ratio(&s11, &at(1e-4, 0.0, 0.0), 1e-5).is_err());
    }

    #[test]
    fn potential_examples() {
        let g =
            MixedPoly::from_terms([(Complex::new(2.0, 0.0), [1, 1, 0, 0]), (Complex::new(-1.0, 0.0), [0, 0, 0, 0])]);
        let one = Complex::new(1.0, 0.0);
        let zero = Complex::new(0.0, 0.0);
        assert!((h_from_potential(&g, one, zero).unwrap() - Complex::new(4.0, 0.0)).norm() < 1e-15);
        let s = Complex::new(FRAC_1_SQRT_2, 0.0);
        let w = Complex::from_polar(FRAC_1_SQRT_2, 0.7);
        assert!(h_from_potential(&g, s, w).unwrap().norm() < 1e-15);
        // 4(|z1|² − |z2|²)
        let h = potential_to_generator(&g).unwrap();
        assert_eq!(
            h,
            MixedPoly::from_terms([(Complex::new(4.0, 0.0), [1, 0, 1, 0]), (Complex::new(-4.0, 0.0), [0, 1, 0, 1])])
        );
        assert!(potential_to_generator(&MixedPoly::<f64>::var(Var::Zb1)).is_err());
    }

    #[test]
    fn torus_knot_potential_formula() {
        let rho: f64 = torus_knot_rho(2, 3);
        assert!((rho - 1.0 / (0.4 * 0.6f64.powf(1.5))).abs() < 1e-12);
        let g = torus_knot_potential::<f64>(2, 3);
        let h = potential_to_generator(&g).unwrap();
        let mut rng = SplitMix64::new(83);
        for _ in 0..50 {
            let p: S3Point<f64> = rng.s3_point();
            let (z1, z2) = (p.z1(), p.z2());
            let want = z1 * z2 * z2 * 6.0 * (2.0 * rho * z1.norm_sqr() / 2.0 - 2.0 * rho * z2.norm_sqr() / 3.0);
            assert!((h.eval(z1, z2) - want).norm() < 1e-12);
        }
    }

    #[test]
    fn tangency_examples() {
        let g = torus_knot_potential::<f64>(2, 3);
        let h: Generator<f64> = potential_to_generator(&g).unwrap().into();
        let theta = gen("6*z1*z2^2");
        let mut rng = SplitMix64::new(89);
        let mut opposite_seen = false;
        for _ in 0..200 {
            let p: S3Point<f64> = rng.s3_point();
            let t = tangency_defect(&theta, &g, &p).unwrap();
            assert!(t.vacuous || t.defect <= 1e-10);
            opposite_seen |= t.opposite;
            assert_eq!(tangency_defect(&h, &g, &p).unwrap().defect, 0.0);
            let ih = h.scale(Complex::new(0.0, 1.0));
            let t = tangency_defect(&ih, &g, &p).unwrap();
            assert!(t.vacuous || (t.defect - 1.0).abs() < 1e-15);
        }
        assert!(opposite_seen);
    }

    #[test]
    fn tt_link_examples() {
        let g11 = torus_knot_potential::<f64>(1, 1);
        assert!((torus_knot_rho::<f64>(1, 1) - 2.0).abs() < 1e-15);
        let c11 = torus_knot_curve::<f64>(1, 1, 0.0, 128).unwrap();
        let (a, b) = tt_link_defect(&g11, &c11).unwrap();
        assert!(a <= 1e-10 && b <= 1e-10);

        let g23 = torus_knot_potential::<f64>(2, 3);
        let c23 = torus_knot_curve::<f64>(2, 3, 0.0, 64 * 5).unwrap();
        let (a, b) = tt_link_defect(&g23, &c23).unwrap();
        assert!(a <= 1e-8 && b <= 1e-8, "{a} {b}");

        // a Hopf fibre misses the zero set of z1
        let fibre = Curve::sample_periodic(
            TAU,
            64,
            |t: f64| [0.6 * t.cos(), 0.6 * t.sin(), 0.8 * t.cos(), 0.8 * t.sin()],
            None::<fn(f64) -> [f64; 4]>,
        )
        .unwrap();
        let (a, _) = tt_link_defect(&MixedPoly::var(Var::Z1), &fibre).unwrap();
        assert!(a > 0.5);
    }

    #[test]
    fn exp_generators_never_vanish() {
        let l = LegendrianField::new(gen("exp(z1*z2 + zb1)"), Polarity::E);
        let mut rng = SplitMix64::new(97);
        for _ in 0..500 {
            let p: S3Point<f64> = rng.s3_point();
            assert!(norm(&l.eval_at(&p)) > 0.0);
        }
    }
}
