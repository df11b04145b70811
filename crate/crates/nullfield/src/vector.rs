//! Fixed-size array helpers. The crate deliberately works with plain arrays;
//! these cover the handful of operations needed.

use num_complex::Complex;

use crate::Real;

#[inline]
pub fn dot<T: Real, const N: usize>(a: &[T; N], b: &[T; N]) -> T {
    let mut s = T::zero();
    for i in 0..N {
        s += a[i] * b[i];
    }
    s
}

#[inline]
pub fn norm<T: Real, const N: usize>(a: &[T; N]) -> T {
    dot(a, a).sqrt()
}

#[inline]
pub fn add<T: Real, const N: usize>(a: &[T; N], b: &[T; N]) -> [T; N] {
    std::array::from_fn(|i| a[i] + b[i])
}

#[inline]
pub fn sub<T: Real, const N: usize>(a: &[T; N], b: &[T; N]) -> [T; N] {
    std::array::from_fn(|i| a[i] - b[i])
}

#[inline]
pub fn scale<T: Real, const N: usize>(s: T, a: &[T; N]) -> [T; N] {
    std::array::from_fn(|i| s * a[i])
}

/// `a + s*b`
#[inline]
pub fn axpy<T: Real, const N: usize>(a: &[T; N], s: T, b: &[T; N]) -> [T; N] {
    std::array::from_fn(|i| a[i] + s * b[i])
}

#[inline]
pub fn dist<T: Real, const N: usize>(a: &[T; N], b: &[T; N]) -> T {
    norm(&sub(a, b))
}

#[inline]
pub fn cross<T: Real>(a: &[T; 3], b: &[T; 3]) -> [T; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

#[inline]
pub fn ccross<T: Real>(a: &[Complex<T>; 3], b: &[Complex<T>; 3]) -> [Complex<T>; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

/// Bilinear (not Hermitian) product.
#[inline]
pub fn cdot<T: Real>(a: &[Complex<T>; 3], b: &[Complex<T>; 3]) -> Complex<T> {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

#[inline]
pub fn cnorm<T: Real>(a: &[Complex<T>; 3]) -> T {
    (a[0].norm_sqr() + a[1].norm_sqr() + a[2].norm_sqr()).sqrt()
}

pub fn matvec<T: Real, const N: usize>(m: &[[T; N]; N], v: &[T; N]) -> [T; N] {
    std::array::from_fn(|i| dot(&m[i], v))
}

pub fn max_abs<T: Real, const N: usize>(a: &[T; N]) -> T {
    a.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}
