//! Truncated multivariate Taylor arithmetic.
//!
//! A [`Jet`] holds the Taylor coefficients of a smooth function of three
//! variables about a base point, truncated after total degree three. All
//! arithmetic and the elementary functions propagate the expansion exactly
//! (up to floating rounding), which gives every solution, transformation and
//! ansatz in the crate analytic derivatives through third order for free.
//!
//! Variable slots are positional: `0` is time, `1` and `2` are the spatial
//! coordinates (`x, y` on the plane, `λ, μ` on the sphere). Reduced equations
//! reuse slots `0` and `1` for their `(p, q)` arguments.

use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

/// Number of independent variables.
pub const NVARS: usize = 3;
/// Highest total degree retained.
pub const ORDER: usize = 3;
/// Number of stored coefficients, C(NVARS + ORDER, ORDER).
pub const LEN: usize = 20;
const NPAIRS: usize = 84;

const fn build_monomials() -> [[u8; NVARS]; LEN] {
    let mut out = [[0u8; NVARS]; LEN];
    let mut n = 0;
    let mut d = 0;
    while d <= ORDER {
        let mut i = d as i32;
        while i >= 0 {
            let mut j = (d as i32) - i;
            while j >= 0 {
                let k = d as i32 - i - j;
                out[n] = [i as u8, j as u8, k as u8];
                n += 1;
                j -= 1;
            }
            i -= 1;
        }
        d += 1;
    }
    out
}

const MONOMIALS: [[u8; NVARS]; LEN] = build_monomials();

const fn index_of(m: [u8; NVARS]) -> usize {
    let mut n = 0;
    while n < LEN {
        let e = MONOMIALS[n];
        if e[0] == m[0] && e[1] == m[1] && e[2] == m[2] {
            return n;
        }
        n += 1;
    }
    usize::MAX
}

const fn build_pairs() -> [(u8, u8, u8); NPAIRS] {
    let mut out = [(0u8, 0u8, 0u8); NPAIRS];
    let mut n = 0;
    let mut a = 0;
    while a < LEN {
        let mut b = 0;
        while b < LEN {
            let ma = MONOMIALS[a];
            let mb = MONOMIALS[b];
            let deg = ma[0] + ma[1] + ma[2] + mb[0] + mb[1] + mb[2];
            if deg as usize <= ORDER {
                let target = index_of([ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]]);
                out[n] = (a as u8, b as u8, target as u8);
                n += 1;
            }
            b += 1;
        }
        a += 1;
    }
    out
}

const PAIRS: [(u8, u8, u8); NPAIRS] = build_pairs();

const fn factorial(n: u8) -> f64 {
    match n {
        0 | 1 => 1.0,
        2 => 2.0,
        3 => 6.0,
        _ => 24.0,
    }
}

/// Truncated Taylor expansion in three variables through total degree three.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    c: [f64; LEN],
}

impl Default for Jet {
    fn default() -> Self {
        Self::constant(0.0)
    }
}

impl From<f64> for Jet {
    fn from(v: f64) -> Self {
        Self::constant(v)
    }
}

impl Jet {
    pub fn constant(v: f64) -> Self {
        let mut c = [0.0; LEN];
        c[0] = v;
        Self { c }
    }

    /// The independent variable `slot` expanded about `value`.
    pub fn var(value: f64, slot: usize) -> Self {
        assert!(slot < NVARS, "jet variable slot out of range");
        let mut j = Self::constant(value);
        j.c[1 + slot] = 1.0;
        j
    }

    /// Three independent variables expanded about `point`.
    pub fn point(point: [f64; 3]) -> [Jet; 3] {
        [
            Self::var(point[0], 0),
            Self::var(point[1], 1),
            Self::var(point[2], 2),
        ]
    }

    pub fn value(&self) -> f64 {
        self.c[0]
    }

    /// Partial derivative for the multi-index `alpha` (total order ≤ 3).
    pub fn derivative(&self, alpha: [usize; 3]) -> f64 {
        let m = [alpha[0] as u8, alpha[1] as u8, alpha[2] as u8];
        let idx = index_of(m);
        assert!(idx != usize::MAX, "derivative order exceeds jet order");
        self.c[idx] * factorial(m[0]) * factorial(m[1]) * factorial(m[2])
    }

    /// First partial derivative with respect to `slot`.
    pub fn d(&self, slot: usize) -> f64 {
        self.c[1 + slot]
    }

    /// Formal partial derivative. The result is exact through degree
    /// `ORDER - 1`; its top-degree coefficients are zero.
    pub fn diff(&self, slot: usize) -> Jet {
        let mut out = [0.0; LEN];
        for (n, m) in MONOMIALS.iter().enumerate() {
            if m[slot] == 0 {
                continue;
            }
            let mut lower = *m;
            lower[slot] -= 1;
            out[index_of(lower)] += self.c[n] * m[slot] as f64;
        }
        Jet { c: out }
    }

    pub fn is_finite(&self) -> bool {
        self.c.iter().all(|v| v.is_finite())
    }

    /// Composes a univariate function given its value and first three
    /// derivatives at `self.value()`.
    pub fn compose(&self, d: [f64; 4]) -> Jet {
        let mut h = *self;
        h.c[0] = 0.0;
        let h2 = h * h;
        let h3 = h2 * h;
        let mut out = h * d[1] + h2 * (0.5 * d[2]) + h3 * (d[3] / 6.0);
        out.c[0] += d[0];
        out
    }

    /// Composes a bivariate function `F(self, other)`; `d[a][b]` is
    /// `∂^a_u ∂^b_v F` at the base values, for `a + b ≤ 3`.
    pub fn compose2(&self, other: &Jet, d: [[f64; 4]; 4]) -> Jet {
        let mut hu = *self;
        hu.c[0] = 0.0;
        let mut hv = *other;
        hv.c[0] = 0.0;
        let pu = [Jet::constant(1.0), hu, hu * hu, hu * hu * hu];
        let pv = [Jet::constant(1.0), hv, hv * hv, hv * hv * hv];
        let mut out = Jet::constant(0.0);
        for a in 0..=ORDER {
            for b in 0..=(ORDER - a) {
                let coef = d[a][b] / (factorial(a as u8) * factorial(b as u8));
                if coef != 0.0 {
                    out += pu[a] * pv[b] * coef;
                }
            }
        }
        out
    }

    pub fn recip(&self) -> Jet {
        let u = self.value();
        let r = 1.0 / u;
        self.compose([r, -r * r, 2.0 * r * r * r, -6.0 * r * r * r * r])
    }

    pub fn sin(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        self.compose([s, c, -s, -c])
    }

    pub fn cos(&self) -> Jet {
        let (s, c) = self.value().sin_cos();
        self.compose([c, -s, -c, s])
    }

    pub fn exp(&self) -> Jet {
        let e = self.value().exp();
        self.compose([e; 4])
    }

    pub fn ln(&self) -> Jet {
        let u = self.value();
        let r = 1.0 / u;
        self.compose([u.ln(), r, -r * r, 2.0 * r * r * r])
    }

    pub fn sqrt(&self) -> Jet {
        self.powf(0.5)
    }

    /// `u^a` for a positive base value.
    pub fn powf(&self, a: f64) -> Jet {
        let u = self.value();
        let p = u.powf(a);
        self.compose([
            p,
            a * p / u,
            a * (a - 1.0) * p / (u * u),
            a * (a - 1.0) * (a - 2.0) * p / (u * u * u),
        ])
    }

    /// Integer power; valid for any nonzero base (and any base when n ≥ 0).
    pub fn powi(&self, n: i32) -> Jet {
        if n == 0 {
            return Jet::constant(1.0);
        }
        if n > 0 {
            let mut out = *self;
            for _ in 1..n {
                out *= *self;
            }
            return out;
        }
        self.powi(-n).recip()
    }

    pub fn atan(&self) -> Jet {
        let u = self.value();
        let q = 1.0 / (1.0 + u * u);
        self.compose([
            u.atan(),
            q,
            -2.0 * u * q * q,
            (6.0 * u * u - 2.0) * q * q * q,
        ])
    }

    pub fn atanh(&self) -> Jet {
        let u = self.value();
        let q = 1.0 / (1.0 - u * u);
        self.compose([
            u.atanh(),
            q,
            2.0 * u * q * q,
            (6.0 * u * u + 2.0) * q * q * q,
        ])
    }

    /// Polar angle of `(x, y)`; the value uses the `(-π, π]` branch.
    pub fn atan2(y: &Jet, x: &Jet) -> Jet {
        let (x0, y0) = (x.value(), y.value());
        let theta0 = y0.atan2(x0);
        let cross = *y * x0 - *x * y0;
        let dot = *x * x0 + *y * y0;
        let mut out = (cross / dot).atan();
        out.c[0] = theta0;
        out
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(mut self, rhs: Jet) -> Jet {
        for (a, b) in self.c.iter_mut().zip(rhs.c.iter()) {
            *a += b;
        }
        self
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: Jet) -> Jet {
        for (a, b) in self.c.iter_mut().zip(rhs.c.iter()) {
            *a -= b;
        }
        self
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let mut c = [0.0; LEN];
        for &(a, b, t) in PAIRS.iter() {
            c[t as usize] += self.c[a as usize] * rhs.c[b as usize];
        }
        Jet { c }
    }
}

impl Div for Jet {
    type Output = Jet;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: Jet) -> Jet {
        self * rhs.recip()
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(mut self) -> Jet {
        for a in self.c.iter_mut() {
            *a = -*a;
        }
        self
    }
}

impl Add<f64> for Jet {
    type Output = Jet;
    fn add(mut self, rhs: f64) -> Jet {
        self.c[0] += rhs;
        self
    }
}

impl Sub<f64> for Jet {
    type Output = Jet;
    fn sub(mut self, rhs: f64) -> Jet {
        self.c[0] -= rhs;
        self
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(mut self, rhs: f64) -> Jet {
        for a in self.c.iter_mut() {
            *a *= rhs;
        }
        self
    }
}

impl Div<f64> for Jet {
    type Output = Jet;
    fn div(self, rhs: f64) -> Jet {
        self * (1.0 / rhs)
    }
}

impl Add<Jet> for f64 {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        rhs + self
    }
}

impl Sub<Jet> for f64 {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        -rhs + self
    }
}

impl Mul<Jet> for f64 {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        rhs * self
    }
}

impl Div<Jet> for f64 {
    type Output = Jet;
    fn div(self, rhs: Jet) -> Jet {
        rhs.recip() * self
    }
}

impl AddAssign for Jet {
    fn add_assign(&mut self, rhs: Jet) {
        *self = *self + rhs;
    }
}

impl SubAssign for Jet {
    fn sub_assign(&mut self, rhs: Jet) {
        *self = *self - rhs;
    }
}

impl MulAssign for Jet {
    fn mul_assign(&mut self, rhs: Jet) {
        *self = *self * rhs;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * (1.0 + b.abs())
    }

    #[test]
    fn monomial_table_is_graded() {
        assert_eq!(MONOMIALS[0], [0, 0, 0]);
        assert_eq!(MONOMIALS[1], [1, 0, 0]);
        assert_eq!(MONOMIALS[3], [0, 0, 1]);
        assert_eq!(MONOMIALS[LEN - 1], [0, 0, 3]);
        assert_eq!(PAIRS.len(), NPAIRS);
    }

    #[test]
    fn polynomial_derivatives_are_exact() {
        let [t, x, y] = Jet::point([0.5, 2.0, -1.0]);
        // f = x^2 y t + y^3
        let f = x * x * y * t + y * y * y;
        assert!(close(f.value(), 4.0 * -1.0 * 0.5 - 1.0, 1e-15));
        assert!(close(f.derivative([1, 2, 0]), 2.0 * -1.0, 1e-15));
        assert!(close(f.derivative([1, 1, 1]), 2.0 * 2.0, 1e-15));
        assert!(close(f.derivative([0, 0, 3]), 6.0, 1e-15));
        assert!(close(f.derivative([0, 2, 1]), 2.0 * 0.5, 1e-15));
    }

    #[test]
    fn elementary_functions_match_closed_derivatives() {
        let x = Jet::var(0.3, 1);
        let s = (x * 2.0).sin();
        assert!(close(s.derivative([0, 3, 0]), -8.0 * (0.6f64).cos(), 1e-14));
        let e = x.exp().ln();
        assert!(close(e.derivative([0, 1, 0]), 1.0, 1e-14));
        assert!(e.derivative([0, 2, 0]).abs() < 1e-14);
        let a = x.atanh();
        let q = 1.0 / (1.0 - 0.09);
        assert!(close(a.derivative([0, 2, 0]), 2.0 * 0.3 * q * q, 1e-14));
        let r = x.sqrt() * x.sqrt();
        assert!(close(r.derivative([0, 1, 0]), 1.0, 1e-13));
        assert!(r.derivative([0, 3, 0]).abs() < 1e-12);
    }

    #[test]
    fn atan2_matches_polar_angle_derivatives() {
        let [_, x, y] = Jet::point([0.0, -0.7, 0.4]);
        let th = Jet::atan2(&y, &x);
        let r2 = 0.49 + 0.16;
        assert!(close(th.value(), 0.4f64.atan2(-0.7), 1e-15));
        assert!(close(th.derivative([0, 1, 0]), -0.4 / r2, 1e-14));
        assert!(close(th.derivative([0, 0, 1]), -0.7 / r2, 1e-14));
        // polar angle is harmonic
        let lap = th.derivative([0, 2, 0]) + th.derivative([0, 0, 2]);
        assert!(lap.abs() < 1e-13);
    }

    #[test]
    fn diff_lowers_order() {
        let [t, x, _] = Jet::point([1.0, 2.0, 0.0]);
        let f = t * x * x * x;
        let fx = f.diff(1);
        assert!(close(fx.value(), 3.0 * 4.0, 1e-15));
        assert!(close(fx.derivative([1, 0, 0]), 12.0, 1e-15));
        assert!(close(fx.derivative([0, 1, 0]), 12.0, 1e-15));
    }

    #[test]
    fn compose2_reproduces_product() {
        let [_, u, v] = Jet::point([0.0, 1.5, -0.5]);
        // F(u, v) = u^2 v
        let mut d = [[0.0; 4]; 4];
        d[0][0] = 1.5 * 1.5 * -0.5;
        d[1][0] = 2.0 * 1.5 * -0.5;
        d[0][1] = 1.5 * 1.5;
        d[2][0] = 2.0 * -0.5;
        d[1][1] = 2.0 * 1.5;
        d[2][1] = 2.0;
        let f = u.compose2(&v, d);
        let g = u * u * v;
        for (a, b) in f.c.iter().zip(g.c.iter()) {
            assert!((a - b).abs() < 1e-14);
        }
    }
}
