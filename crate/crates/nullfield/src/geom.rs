//! The unit sphere S³ ⊂ C² ≅ R⁴, its contact frame, and the projection to
//! R³ ∪ {∞}.
//!
//! Real coordinates are ordered `(x1, y1, x2, y2)` with `z1 = x1 + i y1`,
//! `z2 = x2 + i y2`.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::c;
use crate::vector::{dot, norm};
use crate::Real;

/// A point of S³. The constructor normalizes, so the coordinates always have
/// unit norm up to rounding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct S3Point<T> {
    coords: [T; 4],
}

impl<T: Real> S3Point<T> {
    /// Normalizes `coords` onto the sphere. Rejects non-finite input and
    /// vectors too short to normalize reliably.
    pub fn new(coords: [T; 4]) -> Result<Self> {
        if coords.iter().any(|x| !x.is_finite()) {
            return Err(Error::InvalidPoint("non-finite coordinates".into()));
        }
        let n = norm(&coords);
        if n < c(1e-150) {
            return Err(Error::InvalidPoint("zero vector cannot be normalized".into()));
        }
        Ok(Self { coords: coords.map(|x| x / n) })
    }

    pub fn from_complex(z1: Complex<T>, z2: Complex<T>) -> Result<Self> {
        Self::new([z1.re, z1.im, z2.re, z2.im])
    }

    pub fn coords(&self) -> [T; 4] {
        self.coords
    }

    pub fn z1(&self) -> Complex<T> {
        Complex::new(self.coords[0], self.coords[1])
    }

    pub fn z2(&self) -> Complex<T> {
        Complex::new(self.coords[2], self.coords[3])
    }

    pub fn hopf_frame(&self) -> HopfFrame<T> {
        frame_at(&self.coords)
    }
}

/// Orthonormal frame of R⁴ attached to a point of S³: `v1, v2` span the
/// contact plane, `v3` is radial and `v4` is the Reeb (Hopf) direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfFrame<T> {
    pub v1: [T; 4],
    pub v2: [T; 4],
    pub v3: [T; 4],
    pub v4: [T; 4],
}

impl<T: Real> HopfFrame<T> {
    pub fn as_array(&self) -> [[T; 4]; 4] {
        [self.v1, self.v2, self.v3, self.v4]
    }
}

pub fn hopf_frame<T: Real>(p: &S3Point<T>) -> HopfFrame<T> {
    p.hopf_frame()
}

/// The frame formulas evaluated at an arbitrary vector of R⁴. Off the sphere
/// the vectors are scaled by `|x|` but keep their directions; field code uses
/// this extension.
pub fn frame_at<T: Real>(x: &[T; 4]) -> HopfFrame<T> {
    let [x1, y1, x2, y2] = *x;
    HopfFrame { v1: [-x2, y2, x1, -y1], v2: [-y2, -x2, y1, x1], v3: [x1, y1, x2, y2], v4: [-y1, x1, -y2, x2] }
}

/// Value of the standard contact form `-y1 dx1 + x1 dy1 - y2 dx2 + x2 dy2` at
/// `p` on `x`; equals `v4 · x`.
pub fn contact_pairing<T: Real>(p: &S3Point<T>, x: &[T; 4]) -> T {
    contact_form(&p.coords, x)
}

/// Ambient version of [`contact_pairing`].
#[inline]
pub fn contact_form<T: Real>(base: &[T; 4], x: &[T; 4]) -> T {
    let [x1, y1, x2, y2] = *base;
    -y1 * x[0] + x1 * x[1] - y2 * x[2] + x2 * x[3]
}

/// Multiplication by i on C² in real coordinates.
#[inline]
pub fn complex_structure<T: Real>(a: &[T; 4]) -> [T; 4] {
    [-a[1], a[0], -a[3], a[2]]
}

/// Point of R³ ∪ {∞}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum R3Point<T> {
    Finite([T; 3]),
    Infinity,
}

impl<T: Real> R3Point<T> {
    pub fn finite(&self) -> Option<[T; 3]> {
        match self {
            R3Point::Finite(x) => Some(*x),
            R3Point::Infinity => None,
        }
    }
}

/// Inverse of [`stereo_lift`]. The pole `(1,0,0,0)` goes to infinity.
pub fn stereo_project<T: Real>(p: &S3Point<T>) -> R3Point<T> {
    let [x1, y1, x2, y2] = p.coords;
    let rest = y1 * y1 + x2 * x2 + y2 * y2;
    if x1 > T::zero() && rest == T::zero() {
        return R3Point::Infinity;
    }
    // 1 - x1 cancels badly near the pole; on the sphere it equals rest/(1 + x1).
    let d = if x1 > c(0.5) { rest / (T::one() + x1) } else { T::one() - x1 };
    let q = [x2 / d, -y2 / d, y1 / d];
    if q.iter().any(|v| !v.is_finite()) {
        return R3Point::Infinity;
    }
    R3Point::Finite(q)
}

/// The map `(α, β)` at `t = 0`:
/// `(x, y, z) ↦ ((r² − 1 + 2iz)/(r² + 1), 2(x − iy)/(r² + 1))`.
pub fn stereo_lift<T: Real>(q: &R3Point<T>) -> S3Point<T> {
    match q {
        R3Point::Infinity => S3Point { coords: [T::one(), T::zero(), T::zero(), T::zero()] },
        R3Point::Finite([x, y, z]) => {
            let r2 = *x * *x + *y * *y + *z * *z;
            let d = r2 + T::one();
            let two = c::<T>(2.0);
            S3Point::new([(r2 - T::one()) / d, two * *z / d, two * *x / d, -two * *y / d])
                .expect("finite input lifts to a finite point")
        }
    }
}

/// Hopf coordinates `(s, φ1, φ2)` with `(z1, z2) = (cos s e^{iφ1}, sin s e^{iφ2})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HopfCoords<T> {
    pub s: T,
    pub phi1: T,
    pub phi2: T,
}

/// Angles in `(-π, π]`; an angle is reported as 0 where its modulus vanishes.
pub fn hopf_coords<T: Real>(p: &S3Point<T>) -> HopfCoords<T> {
    let (z1, z2) = (p.z1(), p.z2());
    let (r1, r2) = (z1.norm(), z2.norm());
    let angle = |z: Complex<T>, r: T| if r == T::zero() { T::zero() } else { z.im.atan2(z.re) };
    HopfCoords { s: r2.atan2(r1), phi1: angle(z1, r1), phi2: angle(z2, r2) }
}

pub fn from_hopf_coords<T: Real>(h: &HopfCoords<T>) -> S3Point<T> {
    let (cs, ss) = (h.s.cos(), h.s.sin());
    S3Point::new([cs * h.phi1.cos(), cs * h.phi1.sin(), ss * h.phi2.cos(), ss * h.phi2.sin()])
        .expect("unit by construction")
}

/// Gram matrix of the frame, used in tests and diagnostics.
pub fn gram<T: Real>(f: &HopfFrame<T>) -> [[T; 4]; 4] {
    let v = f.as_array();
    std::array::from_fn(|i| std::array::from_fn(|j| dot(&v[i], &v[j])))
}
