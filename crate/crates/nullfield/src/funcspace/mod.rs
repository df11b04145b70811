//! Functions near S³ as finite sums of monomials `c·z1^a z2^b z̄1^c z̄2^d`,
//! optionally plus exponentials of such sums, with exact Wirtinger
//! derivatives.

mod parse;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::geom::S3Point;
use crate::Real;

pub use parse::parse_generator;

/// Exponents `[a, b, c, d]` of `z1^a z2^b z̄1^c z̄2^d`.
pub type Exponents = [u32; 4];

/// One of the four Wirtinger variables.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    Z1,
    Z2,
    Zb1,
    Zb2,
}

impl Var {
    fn index(self) -> usize {
        match self {
            Var::Z1 => 0,
            Var::Z2 => 1,
            Var::Zb1 => 2,
            Var::Zb2 => 3,
        }
    }
}

/// Value and first Wirtinger derivatives of a function at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WirtingerJet<T> {
    pub value: Complex<T>,
    pub d_z1: Complex<T>,
    pub d_z2: Complex<T>,
    pub d_zb1: Complex<T>,
    pub d_zb2: Complex<T>,
}

impl<T: Real> WirtingerJet<T> {
    pub fn zero() -> Self {
        let z = Complex::new(T::zero(), T::zero());
        Self { value: z, d_z1: z, d_z2: z, d_zb1: z, d_zb2: z }
    }

    /// Real-coordinate partials `[∂x1, ∂y1, ∂x2, ∂y2]` of the complex-valued
    /// function, using `∂x = ∂z + ∂z̄` and `∂y = i(∂z − ∂z̄)`.
    pub fn real_partials(&self) -> [Complex<T>; 4] {
        let i: Complex<T> = Complex::i();
        [self.d_z1 + self.d_zb1, i * (self.d_z1 - self.d_zb1), self.d_z2 + self.d_zb2, i * (self.d_z2 - self.d_zb2)]
    }

    /// Gradient of the real part in R⁴.
    pub fn grad_re(&self) -> [T; 4] {
        self.real_partials().map(|d| d.re)
    }

    /// Gradient of the imaginary part in R⁴.
    pub fn grad_im(&self) -> [T; 4] {
        self.real_partials().map(|d| d.im)
    }

    fn add(&self, o: &Self) -> Self {
        Self {
            value: self.value + o.value,
            d_z1: self.d_z1 + o.d_z1,
            d_z2: self.d_z2 + o.d_z2,
            d_zb1: self.d_zb1 + o.d_zb1,
            d_zb2: self.d_zb2 + o.d_zb2,
        }
    }
}

/// Mixed polynomial in `z1, z2, z̄1, z̄2` with complex coefficients. Terms are
/// kept sorted by exponent with no zero coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct MixedPoly<T> {
    terms: BTreeMap<Exponents, Complex<T>>,
}

impl<T: Real> Default for MixedPoly<T> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<T: Real> MixedPoly<T> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn constant(c: Complex<T>) -> Self {
        Self::monomial(c, [0; 4])
    }

    pub fn monomial(c: Complex<T>, exps: Exponents) -> Self {
        let mut p = Self::zero();
        p.add_term(c, exps);
        p
    }

    pub fn var(v: Var) -> Self {
        let mut e = [0; 4];
        e[v.index()] = 1;
        Self::monomial(Complex::new(T::one(), T::zero()), e)
    }

    pub fn from_terms<I: IntoIterator<Item = (Complex<T>, Exponents)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (c, e) in terms {
            p.add_term(c, e);
        }
        p
    }

    pub fn add_term(&mut self, c: Complex<T>, exps: Exponents) {
        let entry = self.terms.entry(exps).or_insert_with(|| Complex::new(T::zero(), T::zero()));
        *entry += c;
        if *entry == Complex::new(T::zero(), T::zero()) {
            self.terms.remove(&exps);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponents, &Complex<T>)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|e| *e == [0; 4])
    }

    /// No `z̄` appears.
    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(|e| e[2] == 0 && e[3] == 0)
    }

    /// No `z` appears.
    pub fn is_antiholomorphic(&self) -> bool {
        self.terms.keys().all(|e| e[0] == 0 && e[1] == 0)
    }

    /// Total degree in each variable.
    pub fn max_exponents(&self) -> Exponents {
        let mut m = [0; 4];
        for e in self.terms.keys() {
            for k in 0..4 {
                m[k] = m[k].max(e[k]);
            }
        }
        m
    }

    /// Complex conjugate as a function: conjugates coefficients and swaps
    /// `z ↔ z̄`.
    pub fn conj(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (c.conj(), [e[2], e[3], e[0], e[1]])))
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, c)| (*c * s, *e)))
    }

    /// Exact partial derivative in one Wirtinger variable.
    pub fn derivative(&self, v: Var) -> Self {
        let k = v.index();
        Self::from_terms(self.terms.iter().filter(|(e, _)| e[k] > 0).map(|(e, c)| {
            let mut e2 = *e;
            e2[k] -= 1;
            (*c * T::from_u32(e[k]).expect("small exponent"), e2)
        }))
    }

    pub fn eval(&self, z1: Complex<T>, z2: Complex<T>) -> Complex<T> {
        let pw = Powers::new(z1, z2, self.max_exponents());
        self.terms.iter().fold(Complex::new(T::zero(), T::zero()), |acc, (e, c)| acc + *c * pw.monomial(e))
    }

    pub fn jet(&self, z1: Complex<T>, z2: Complex<T>) -> WirtingerJet<T> {
        let pw = Powers::new(z1, z2, self.max_exponents());
        let mut j = WirtingerJet::zero();
        for (e, c) in &self.terms {
            j.value += *c * pw.monomial(e);
            let mut d = [Complex::new(T::zero(), T::zero()); 4];
            for (k, dk) in d.iter_mut().enumerate() {
                if e[k] > 0 {
                    let mut e2 = *e;
                    e2[k] -= 1;
                    *dk = *c * T::from_u32(e[k]).expect("small exponent") * pw.monomial(&e2);
                }
            }
            j.d_z1 += d[0];
            j.d_z2 += d[1];
            j.d_zb1 += d[2];
            j.d_zb2 += d[3];
        }
        j
    }

    pub fn to_scalar<U: Real>(&self) -> MixedPoly<U> {
        MixedPoly::from_terms(
            self.terms.iter().map(|(e, c)| (Complex::new(U::lit(c.re.as_f64()), U::lit(c.im.as_f64())), *e)),
        )
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::constant(Complex::new(T::one(), T::zero()));
        for _ in 0..n {
            out = &out * self;
        }
        out
    }
}

/// Power tables for the four variables.
struct Powers<T> {
    tables: [Vec<Complex<T>>; 4],
}

impl<T: Real> Powers<T> {
    fn new(z1: Complex<T>, z2: Complex<T>, max: Exponents) -> Self {
        let base = [z1, z2, z1.conj(), z2.conj()];
        let tables = std::array::from_fn(|k| {
            let mut t = Vec::with_capacity(max[k] as usize + 1);
            t.push(Complex::new(T::one(), T::zero()));
            for n in 1..=max[k] as usize {
                let prev = t[n - 1];
                t.push(prev * base[k]);
            }
            t
        });
        Self { tables }
    }

    fn monomial(&self, e: &Exponents) -> Complex<T> {
        self.tables[0][e[0] as usize]
            * self.tables[1][e[1] as usize]
            * self.tables[2][e[2] as usize]
            * self.tables[3][e[3] as usize]
    }
}

impl<T: Real> Add for &MixedPoly<T> {
    type Output = MixedPoly<T>;
    fn add(self, o: &MixedPoly<T>) -> MixedPoly<T> {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(*c, *e);
        }
        p
    }
}

impl<T: Real> Sub for &MixedPoly<T> {
    type Output = MixedPoly<T>;
    fn sub(self, o: &MixedPoly<T>) -> MixedPoly<T> {
        let mut p = self.clone();
        for (e, c) in &o.terms {
            p.add_term(-*c, *e);
        }
        p
    }
}

impl<T: Real> Mul for &MixedPoly<T> {
    type Output = MixedPoly<T>;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn mul(self, o: &MixedPoly<T>) -> MixedPoly<T> {
        let mut p = MixedPoly::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &o.terms {
                p.add_term(*c1 * *c2, std::array::from_fn(|k| e1[k] + e2[k]));
            }
        }
        p
    }
}

impl<T: Real> Neg for &MixedPoly<T> {
    type Output = MixedPoly<T>;
    fn neg(self) -> MixedPoly<T> {
        self.scale(Complex::new(-T::one(), T::zero()))
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident) => {
        impl<T: Real> $tr for MixedPoly<T> {
            type Output = MixedPoly<T>;
            fn $m(self, o: MixedPoly<T>) -> MixedPoly<T> {
                (&self).$m(&o)
            }
        }
    };
}
forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

fn fmt_coeff<T: Real>(c: &Complex<T>, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if c.im < T::zero() {
        write!(f, "({}-{}i)", c.re, -c.im)
    } else {
        write!(f, "({}+{}i)", c.re, c.im)
    }
}

/// Prints in the grammar accepted by [`parse_generator`].
impl<T: Real> fmt::Display for MixedPoly<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (e, c)) in self.terms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            fmt_coeff(c, f)?;
            for (k, name) in ["z1", "z2", "zb1", "zb2"].iter().enumerate() {
                match e[k] {
                    0 => {}
                    1 => write!(f, "*{name}")?,
                    m => write!(f, "*{name}^{m}")?,
                }
            }
        }
        Ok(())
    }
}

/// `scale · e^{base}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpWrapped<T> {
    pub scale: Complex<T>,
    pub base: MixedPoly<T>,
}

impl<T: Real> ExpWrapped<T> {
    pub fn new(base: MixedPoly<T>) -> Self {
        Self { scale: Complex::new(T::one(), T::zero()), base }
    }

    pub fn jet(&self, z1: Complex<T>, z2: Complex<T>) -> WirtingerJet<T> {
        let b = self.base.jet(z1, z2);
        let v = self.scale * b.value.exp();
        WirtingerJet { value: v, d_z1: v * b.d_z1, d_z2: v * b.d_z2, d_zb1: v * b.d_zb1, d_zb2: v * b.d_zb2 }
    }

    pub fn conj(&self) -> Self {
        Self { scale: self.scale.conj(), base: self.base.conj() }
    }
}

/// A generator: a mixed polynomial plus a sum of scaled exponentials.
#[derive(Debug, Clone, PartialEq)]
pub struct Generator<T> {
    pub poly: MixedPoly<T>,
    pub exps: Vec<ExpWrapped<T>>,
}

impl<T: Real> From<MixedPoly<T>> for Generator<T> {
    fn from(poly: MixedPoly<T>) -> Self {
        Self { poly, exps: Vec::new() }
    }
}

impl<T: Real> From<ExpWrapped<T>> for Generator<T> {
    fn from(e: ExpWrapped<T>) -> Self {
        Self { poly: MixedPoly::zero(), exps: vec![e] }
    }
}

impl<T: Real> Generator<T> {
    pub fn constant(c: Complex<T>) -> Self {
        MixedPoly::constant(c).into()
    }

    /// Parses the textual grammar, e.g. `6*z1*z2^2` or `exp(z1*z2)`.
    pub fn parse(s: &str) -> Result<Self> {
        parse_generator(s)
    }

    pub fn jet(&self, z1: Complex<T>, z2: Complex<T>) -> WirtingerJet<T> {
        self.exps.iter().fold(self.poly.jet(z1, z2), |acc, e| acc.add(&e.jet(z1, z2)))
    }

    pub fn eval(&self, z1: Complex<T>, z2: Complex<T>) -> Complex<T> {
        self.exps.iter().fold(self.poly.eval(z1, z2), |acc, e| acc + e.jet(z1, z2).value)
    }

    pub fn is_holomorphic(&self) -> bool {
        self.poly.is_holomorphic() && self.exps.iter().all(|e| e.base.is_holomorphic())
    }

    pub fn is_antiholomorphic(&self) -> bool {
        self.poly.is_antiholomorphic() && self.exps.iter().all(|e| e.base.is_antiholomorphic())
    }

    pub fn conj(&self) -> Self {
        Self { poly: self.poly.conj(), exps: self.exps.iter().map(ExpWrapped::conj).collect() }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self {
            poly: self.poly.scale(s),
            exps: self.exps.iter().map(|e| ExpWrapped { scale: e.scale * s, base: e.base.clone() }).collect(),
        }
    }

    /// The plain polynomial, if there are no exponentials.
    pub fn as_poly(&self) -> Option<&MixedPoly<T>> {
        self.exps.is_empty().then_some(&self.poly)
    }

    pub fn to_scalar<U: Real>(&self) -> Generator<U> {
        Generator {
            poly: self.poly.to_scalar(),
            exps: self
                .exps
                .iter()
                .map(|e| ExpWrapped {
                    scale: Complex::new(U::lit(e.scale.re.as_f64()), U::lit(e.scale.im.as_f64())),
                    base: e.base.to_scalar(),
                })
                .collect(),
        }
    }

    /// Rejects generators with both `z` and `z̄` content.
    pub fn check_pure(&self) -> Result<()> {
        if self.is_holomorphic() || self.is_antiholomorphic() {
            Ok(())
        } else {
            Err(Error::MixedGenerator)
        }
    }
}

impl<T: Real> fmt::Display for Generator<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        if !self.poly.is_zero() || self.exps.is_empty() {
            write!(f, "{}", self.poly)?;
            first = false;
        }
        for e in &self.exps {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            fmt_coeff(&e.scale, f)?;
            write!(f, "*exp({})", e.base)?;
        }
        Ok(())
    }
}

/// Tangential Cauchy–Riemann operator `𝕃̄ = −z2 ∂/∂z̄1 + z1 ∂/∂z̄2` at `p`.
pub fn cr_defect<T: Real>(f: &Generator<T>, p: &S3Point<T>) -> Complex<T> {
    lbar_of_jet(&f.jet(p.z1(), p.z2()), p.z1(), p.z2())
}

/// `𝕃 = −z̄2 ∂/∂z1 + z̄1 ∂/∂z2` at `p`.
pub fn l_operator<T: Real>(f: &Generator<T>, p: &S3Point<T>) -> Complex<T> {
    l_of_jet(&f.jet(p.z1(), p.z2()), p.z1(), p.z2())
}

pub fn lbar_of_jet<T: Real>(j: &WirtingerJet<T>, z1: Complex<T>, z2: Complex<T>) -> Complex<T> {
    -z2 * j.d_zb1 + z1 * j.d_zb2
}

pub fn l_of_jet<T: Real>(j: &WirtingerJet<T>, z1: Complex<T>, z2: Complex<T>) -> Complex<T> {
    -z2.conj() * j.d_z1 + z1.conj() * j.d_z2
}

pub fn eval_jet<T: Real>(f: &Generator<T>, z1: Complex<T>, z2: Complex<T>) -> WirtingerJet<T> {
    f.jet(z1, z2)
}
