//! Seeded sampling. The generator is SplitMix64, defined by its recurrence
//!
//! ```text
//! s  <- s + 0x9E3779B97F4A7C15
//! z  <- (s ^ (s >> 30)) * 0xBF58476D1CE4E5B9
//! z  <- (z ^ (z >> 27)) * 0x94D049BB133111EB
//! out = z ^ (z >> 31)
//! ```
//!
//! (all arithmetic mod 2^64). Outputs are bit-for-bit reproducible across
//! platforms, which the CLI relies on.

use crate::bateman::SpacetimePoint;
use crate::geom::S3Point;
use crate::Real;

#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1) with 53 random bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.next_f64()
    }

    /// Uniform point on S³, by rejection from the cube.
    pub fn s3_point<T: Real>(&mut self) -> S3Point<T> {
        loop {
            let v: [f64; 4] = std::array::from_fn(|_| self.uniform(-1.0, 1.0));
            let r2: f64 = v.iter().map(|x| x * x).sum();
            if r2 > 1e-4 && r2 <= 1.0 {
                let r = r2.sqrt();
                return S3Point::new(v.map(|x| T::lit(x / r))).expect("nonzero sample");
            }
        }
    }

    /// Point on S³ with Hopf parameter s restricted to `[s_lo, s_hi]`, angles uniform.
    pub fn s3_point_in_band<T: Real>(&mut self, s_lo: f64, s_hi: f64) -> S3Point<T> {
        let s = self.uniform(s_lo, s_hi);
        let p1 = self.uniform(0.0, std::f64::consts::TAU);
        let p2 = self.uniform(0.0, std::f64::consts::TAU);
        S3Point::new([
            T::lit(s.cos() * p1.cos()),
            T::lit(s.cos() * p1.sin()),
            T::lit(s.sin() * p2.cos()),
            T::lit(s.sin() * p2.sin()),
        ])
        .expect("unit sample")
    }

    /// Uniform in the box [-h,h]³ × [t_lo, t_hi].
    pub fn spacetime_point<T: Real>(&mut self, h: f64, t_lo: f64, t_hi: f64) -> SpacetimePoint<T> {
        SpacetimePoint {
            x: T::lit(self.uniform(-h, h)),
            y: T::lit(self.uniform(-h, h)),
            z: T::lit(self.uniform(-h, h)),
            t: T::lit(self.uniform(t_lo, t_hi)),
        }
    }

    /// Uniform in the closed ball of the given radius.
    pub fn ball_point<T: Real>(&mut self, radius: f64) -> [T; 3] {
        loop {
            let v: [f64; 3] = std::array::from_fn(|_| self.uniform(-1.0, 1.0));
            if v.iter().map(|x| x * x).sum::<f64>() <= 1.0 {
                return v.map(|x| T::lit(radius * x));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_outputs() {
        // First outputs for seed 0, as published with the algorithm.
        let mut r = SplitMix64::new(0);
        assert_eq!(r.next_u64(), 0xE220_A839_7B1D_CDAF);
        assert_eq!(r.next_u64(), 0x6E78_9E6A_A1B9_65F4);
        assert_eq!(r.next_u64(), 0x06C4_5D18_8009_454F);
    }

    #[test]
    fn unit_interval() {
        let mut r = SplitMix64::new(42);
        for _ in 0..10_000 {
            let x = r.next_f64();
            assert!((0.0..1.0).contains(&x));
        }
    }

    #[test]
    fn s3_samples_are_unit() {
        let mut r = SplitMix64::new(1);
        for _ in 0..100 {
            let p: S3Point<f64> = r.s3_point();
            let n: f64 = p.coords().iter().map(|x| x * x).sum();
            assert!((n - 1.0).abs() < 1e-14);
        }
    }
}
