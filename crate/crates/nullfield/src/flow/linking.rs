//! Gauss linking integral of two closed space curves.
//!
//! Segments are paired by the midpoint rule, which is second order in the
//! segment length; one Richardson step against the curve refined by periodic
//! four-point interpolation cancels the leading error. Refinement repeats
//! until the value sits within 1e-3 of an integer.

use super::Curve;
use crate::error::{Error, Result};
use crate::scalar::c;
use crate::vector::{cross, dist, dot, sub};
use crate::Real;

const MAX_POINTS: usize = 1 << 13;

fn gauss_midpoint<T: Real>(a: &[[T; 3]], b: &[[T; 3]]) -> T {
    let seg = |p: &[[T; 3]]| -> Vec<([T; 3], [T; 3])> {
        (0..p.len())
            .map(|i| {
                let (u, v) = (p[i], p[(i + 1) % p.len()]);
                (std::array::from_fn(|k| (u[k] + v[k]) * c(0.5)), sub(&v, &u))
            })
            .collect()
    };
    let (sa, sb) = (seg(a), seg(b));
    let mut total = T::zero();
    for (ma, da) in &sa {
        let mut row = T::zero();
        for (mb, db) in &sb {
            let r = sub(ma, mb);
            let d = dot(&r, &r);
            row += dot(&r, &cross(da, db)) / (d * d.sqrt());
        }
        total += row;
    }
    total / (c::<T>(4.0) * T::PI())
}

/// Doubles the sampling of a closed polygon with cubic midpoints.
fn refine<T: Real>(p: &[[T; 3]]) -> Vec<[T; 3]> {
    let n = p.len();
    let mut out = Vec::with_capacity(2 * n);
    for i in 0..n {
        let (a, b, cc, d) = (p[(i + n - 1) % n], p[i], p[(i + 1) % n], p[(i + 2) % n]);
        out.push(b);
        out.push(std::array::from_fn(|k| (c::<T>(9.0) * (b[k] + cc[k]) - a[k] - d[k]) / c(16.0)));
    }
    out
}

fn min_distance<T: Real>(a: &[[T; 3]], b: &[[T; 3]]) -> T {
    let mut m = T::infinity();
    for p in a {
        for q in b {
            m = m.min(dist(p, q));
        }
    }
    m
}

/// The linking integral before rounding.
pub fn linking_integral<T: Real>(a: &Curve<T, 3>, b: &Curve<T, 3>) -> Result<T> {
    if !a.closed || !b.closed {
        return Err(Error::NotClosed);
    }
    let mut pa = a.cyclic_samples().to_vec();
    let mut pb = b.cyclic_samples().to_vec();
    let d = min_distance(&pa, &pb);
    if d <= c(1e-3) {
        return Err(Error::CurvesTooClose { distance: d.as_f64() });
    }
    let mut coarse = gauss_midpoint(&pa, &pb);
    loop {
        pa = refine(&pa);
        pb = refine(&pb);
        let fine = gauss_midpoint(&pa, &pb);
        let extrapolated = (c::<T>(4.0) * fine - coarse) / c(3.0);
        let off = (extrapolated - extrapolated.round()).abs();
        let converged = (extrapolated - fine).abs() < c(1e-4);
        if (off < c(1e-3) && converged) || pa.len().max(pb.len()) * 2 > MAX_POINTS {
            return Ok(extrapolated);
        }
        coarse = fine;
    }
}

/// Gauss linking number, rounded; fails unless the integral is within 1e-3
/// of an integer.
pub fn linking_number<T: Real>(a: &Curve<T, 3>, b: &Curve<T, 3>) -> Result<i64> {
    let v = linking_integral(a, b)?;
    let r = v.round();
    if (v - r).abs() > c(1e-3) {
        return Err(Error::NonIntegerLinking { value: v.as_f64() });
    }
    Ok(r.to_i64().expect("small integer"))
}
