//! Finite-difference stencils on uniform grids and a second-order jet type.
//!
//! All stencils are second-order accurate. Central formulas are used in the
//! interior, one-sided ones where the central stencil would run off the end.

use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Samples of a function at uniformly spaced times.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformSeries {
    pub dt: f64,
    pub values: Vec<f64>,
}

impl UniformSeries {
    pub fn new(dt: f64, values: Vec<f64>) -> Result<Self> {
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::Config(format!("time step must be positive, got {dt}")));
        }
        Ok(Self { dt, values })
    }

    /// Samples `f` at `n` stations starting from t = 0.
    pub fn sample(dt: f64, n: usize, f: impl Fn(f64) -> f64) -> Result<Self> {
        Self::new(dt, (0..n).map(|i| f(i as f64 * dt)).collect())
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Derivative of the given order (1, 2 or 3) at every station.
    pub fn derivative(&self, order: u8) -> Result<UniformSeries> {
        derivative(self, order)
    }
}

/// Minimum series length for each derivative order.
pub fn min_len(order: u8) -> usize {
    match order {
        1 => 3,
        2 => 4,
        _ => 5,
    }
}

pub fn derivative(series: &UniformSeries, order: u8) -> Result<UniformSeries> {
    if !(1..=3).contains(&order) {
        return Err(Error::Config(format!("derivative order must be 1, 2 or 3, got {order}")));
    }
    let n = series.len();
    let needed = min_len(order);
    if n < needed {
        return Err(Error::TooShort { needed, got: n });
    }
    let f = &series.values;
    let h = series.dt;
    let out = (0..n)
        .map(|i| match order {
            1 => first(f, i, h),
            2 => second(f, i, h),
            _ => third(f, i, h),
        })
        .collect();
    Ok(UniformSeries { dt: h, values: out })
}

fn first(f: &[f64], i: usize, h: f64) -> f64 {
    let n = f.len();
    if i == 0 {
        (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h)
    } else if i == n - 1 {
        (3.0 * f[i] - 4.0 * f[i - 1] + f[i - 2]) / (2.0 * h)
    } else {
        (f[i + 1] - f[i - 1]) / (2.0 * h)
    }
}

fn second(f: &[f64], i: usize, h: f64) -> f64 {
    let n = f.len();
    let h2 = h * h;
    if i == 0 {
        (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) / h2
    } else if i == n - 1 {
        (2.0 * f[i] - 5.0 * f[i - 1] + 4.0 * f[i - 2] - f[i - 3]) / h2
    } else {
        (f[i + 1] - 2.0 * f[i] + f[i - 1]) / h2
    }
}

fn third(f: &[f64], i: usize, h: f64) -> f64 {
    let n = f.len();
    let h3 = 2.0 * h * h * h;
    if i < 2 {
        (-5.0 * f[i] + 18.0 * f[i + 1] - 24.0 * f[i + 2] + 14.0 * f[i + 3] - 3.0 * f[i + 4]) / h3
    } else if i >= n - 2 {
        (5.0 * f[i] - 18.0 * f[i - 1] + 24.0 * f[i - 2] - 14.0 * f[i - 3] + 3.0 * f[i - 4]) / h3
    } else {
        (f[i + 2] - 2.0 * f[i + 1] + 2.0 * f[i - 1] - f[i - 2]) / h3
    }
}

/// Number type the flight-mechanics formulas are written against, so the
/// same expression yields plain values (`f64`) or values with their first
/// two time derivatives (`Jet2`).
pub trait Scalar:
    Copy
    + std::fmt::Debug
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + Add<f64, Output = Self>
    + Sub<f64, Output = Self>
    + Mul<f64, Output = Self>
    + Div<f64, Output = Self>
{
    fn cst(v: f64) -> Self;
    fn value(self) -> f64;
    fn sin(self) -> Self;
    fn cos(self) -> Self;
    fn tan(self) -> Self;
    fn sqrt(self) -> Self;
    fn exp(self) -> Self;
    fn powf(self, n: f64) -> Self;
    fn atan2(self, x: Self) -> Self;

    fn sin_cos(self) -> (Self, Self) {
        (self.sin(), self.cos())
    }

    fn powi2(self) -> Self {
        self * self
    }
}

impl Scalar for f64 {
    fn cst(v: f64) -> Self {
        v
    }
    fn value(self) -> f64 {
        self
    }
    fn sin(self) -> Self {
        f64::sin(self)
    }
    fn cos(self) -> Self {
        f64::cos(self)
    }
    fn tan(self) -> Self {
        f64::tan(self)
    }
    fn sqrt(self) -> Self {
        f64::sqrt(self)
    }
    fn exp(self) -> Self {
        f64::exp(self)
    }
    fn powf(self, n: f64) -> Self {
        f64::powf(self, n)
    }
    fn atan2(self, x: Self) -> Self {
        f64::atan2(self, x)
    }
}

/// A value carried together with its first and second time derivatives.
///
/// Arithmetic applies the chain and Leibniz rules, so any expression built
/// from jets yields its exact total derivatives.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet2 {
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
}

impl Jet2 {
    pub const fn new(v: f64, d1: f64, d2: f64) -> Self {
        Self { v, d1, d2 }
    }

    pub const fn constant(v: f64) -> Self {
        Self { v, d1: 0.0, d2: 0.0 }
    }

    /// The independent variable itself: d/dt t = 1.
    pub const fn variable(v: f64) -> Self {
        Self { v, d1: 1.0, d2: 0.0 }
    }

    /// Compose with a scalar function given f(v), f'(v), f''(v).
    fn chain(self, f: f64, df: f64, d2f: f64) -> Self {
        Self {
            v: f,
            d1: df * self.d1,
            d2: d2f * self.d1 * self.d1 + df * self.d2,
        }
    }

    pub fn checked_div(self, rhs: Jet2) -> Result<Jet2> {
        if rhs.v == 0.0 {
            return Err(Error::Domain {
                quantity: "jet divisor",
                value: 0.0,
                range: "nonzero values",
            });
        }
        Ok(self / rhs)
    }

    pub fn checked_sqrt(self) -> Result<Jet2> {
        if self.v < 0.0 {
            return Err(Error::Domain {
                quantity: "jet square-root argument",
                value: self.v,
                range: "[0, inf)",
            });
        }
        Ok(Scalar::sqrt(self))
    }

    pub fn checked_tan(self) -> Result<Jet2> {
        if self.v.cos().abs() < 1e-12 {
            return Err(Error::Domain {
                quantity: "jet tangent argument",
                value: self.v,
                range: "away from odd multiples of pi/2",
            });
        }
        Ok(Scalar::tan(self))
    }
}

impl Add for Jet2 {
    type Output = Jet2;
    fn add(self, o: Jet2) -> Jet2 {
        Jet2::new(self.v + o.v, self.d1 + o.d1, self.d2 + o.d2)
    }
}

impl Sub for Jet2 {
    type Output = Jet2;
    fn sub(self, o: Jet2) -> Jet2 {
        Jet2::new(self.v - o.v, self.d1 - o.d1, self.d2 - o.d2)
    }
}

impl Mul for Jet2 {
    type Output = Jet2;
    fn mul(self, o: Jet2) -> Jet2 {
        Jet2::new(
            self.v * o.v,
            self.d1 * o.v + self.v * o.d1,
            self.d2 * o.v + 2.0 * self.d1 * o.d1 + self.v * o.d2,
        )
    }
}

impl Div for Jet2 {
    type Output = Jet2;
    fn div(self, o: Jet2) -> Jet2 {
        let v = self.v / o.v;
        let d1 = (self.d1 - v * o.d1) / o.v;
        let d2 = (self.d2 - 2.0 * d1 * o.d1 - v * o.d2) / o.v;
        Jet2::new(v, d1, d2)
    }
}

impl Neg for Jet2 {
    type Output = Jet2;
    fn neg(self) -> Jet2 {
        Jet2::new(-self.v, -self.d1, -self.d2)
    }
}

impl Add<f64> for Jet2 {
    type Output = Jet2;
    fn add(self, o: f64) -> Jet2 {
        Jet2::new(self.v + o, self.d1, self.d2)
    }
}

impl Sub<f64> for Jet2 {
    type Output = Jet2;
    fn sub(self, o: f64) -> Jet2 {
        Jet2::new(self.v - o, self.d1, self.d2)
    }
}

impl Mul<f64> for Jet2 {
    type Output = Jet2;
    fn mul(self, o: f64) -> Jet2 {
        Jet2::new(self.v * o, self.d1 * o, self.d2 * o)
    }
}

impl Div<f64> for Jet2 {
    type Output = Jet2;
    fn div(self, o: f64) -> Jet2 {
        Jet2::new(self.v / o, self.d1 / o, self.d2 / o)
    }
}

impl Scalar for Jet2 {
    fn cst(v: f64) -> Self {
        Jet2::constant(v)
    }
    fn value(self) -> f64 {
        self.v
    }
    fn sin(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(s, c, -s)
    }
    fn cos(self) -> Self {
        let (s, c) = self.v.sin_cos();
        self.chain(c, -s, -c)
    }
    fn sin_cos(self) -> (Self, Self) {
        let (s, c) = self.v.sin_cos();
        (self.chain(s, c, -s), self.chain(c, -s, -c))
    }
    fn tan(self) -> Self {
        let t = self.v.tan();
        let sec2 = 1.0 + t * t;
        self.chain(t, sec2, 2.0 * t * sec2)
    }
    fn sqrt(self) -> Self {
        let s = self.v.sqrt();
        self.chain(s, 0.5 / s, -0.25 / (s * self.v))
    }
    fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e)
    }
    fn powf(self, n: f64) -> Self {
        let p2 = self.v.powf(n - 2.0);
        let p1 = p2 * self.v;
        self.chain(p1 * self.v, n * p1, n * (n - 1.0) * p2)
    }
    fn atan2(self, x: Self) -> Self {
        let y = self;
        let r2 = x.v * x.v + y.v * y.v;
        let num = x.v * y.d1 - y.v * x.d1;
        let d1 = num / r2;
        let num_d = x.v * y.d2 - y.v * x.d2;
        let r2_d = 2.0 * (x.v * x.d1 + y.v * y.d1);
        let d2 = (num_d * r2 - num * r2_d) / (r2 * r2);
        Jet2::new(y.v.atan2(x.v), d1, d2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(dt: f64, n: usize, f: impl Fn(f64) -> f64) -> UniformSeries {
        UniformSeries::sample(dt, n, f).unwrap()
    }

    #[test]
    fn central_first_derivative_exact_on_quadratic() {
        let d = series(0.1, 11, |t| t * t).derivative(1).unwrap();
        for i in 1..10 {
            let t = i as f64 * 0.1;
            assert!((d.values[i] - 2.0 * t).abs() < 1e-12);
        }
    }

    #[test]
    fn central_first_derivative_error_on_cubic() {
        // (f(t+h) - f(t-h)) / 2h = 3t^2 + h^2 for f = t^3
        let h = 0.1;
        let d = series(h, 11, |t| t * t * t).derivative(1).unwrap();
        for i in 1..10 {
            let t = i as f64 * h;
            assert!((d.values[i] - (3.0 * t * t + h * h)).abs() < 1e-12);
        }
    }

    #[test]
    fn second_derivative_of_sine() {
        let w = std::f64::consts::PI / 10.0;
        let dt = 0.001;
        let d = series(dt, 2001, |t| (w * t).sin()).derivative(2).unwrap();
        for (i, v) in d.values.iter().enumerate().skip(1).take(1998) {
            let t = i as f64 * dt;
            assert!((v + w * w * (w * t).sin()).abs() < 1e-6);
        }
    }

    #[test]
    fn central_third_derivative_positive_on_cubic() {
        let d = series(0.5, 9, |t| t * t * t).derivative(3).unwrap();
        for v in &d.values {
            assert!((v - 6.0).abs() < 1e-9, "{v}");
        }
    }

    #[test]
    fn short_series_reports_minimum() {
        let s = series(1.0, 4, |t| t);
        match s.derivative(3) {
            Err(Error::TooShort { needed: 5, got: 4 }) => {}
            other => panic!("{other:?}"),
        }
        assert!(s.derivative(2).is_ok());
    }

    #[test]
    fn jet_sin_of_identity() {
        let x = 0.7;
        let j = Jet2::variable(x).sin();
        assert_eq!(j, Jet2::new(x.sin(), x.cos(), -x.sin()));
    }

    #[test]
    fn jet_product_rule() {
        let f = Jet2::new(1.5, -0.3, 2.0);
        let g = Jet2::new(-0.4, 0.9, 0.25);
        let p = f * g;
        assert!((p.d2 - (2.0 * -0.4 + 2.0 * -0.3 * 0.9 + 1.5 * 0.25)).abs() < 1e-15);
    }

    #[test]
    fn jet_domain_errors() {
        assert!(Jet2::constant(1.0).checked_div(Jet2::constant(0.0)).is_err());
        assert!(Jet2::constant(-1.0).checked_sqrt().is_err());
        assert!(Jet2::constant(4.0).checked_sqrt().is_ok());
    }

    /// Runs a scalar expression along t -> (t, 1, 0) and checks the jet
    /// channels against five-point central differences of the value.
    fn check_against_fdm(f: impl Fn(Jet2) -> Jet2, t: f64) {
        let h = 1e-3;
        let val = |s: f64| f(Jet2::constant(s)).v;
        let fm2 = val(t - 2.0 * h);
        let fm1 = val(t - h);
        let f0 = val(t);
        let fp1 = val(t + h);
        let fp2 = val(t + 2.0 * h);
        let d1 = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
        let d2 = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h * h);
        let j = f(Jet2::variable(t));
        let scale1 = j.d1.abs().max(1.0);
        let scale2 = j.d2.abs().max(1.0);
        assert!((j.d1 - d1).abs() / scale1 < 1e-6, "d1 {} vs {}", j.d1, d1);
        assert!((j.d2 - d2).abs() / scale2 < 1e-6, "d2 {} vs {}", j.d2, d2);
    }

    #[test]
    fn jet_composites_match_differences() {
        check_against_fdm(|t| (t * t).sin() / (t + 2.0), 0.8);
        check_against_fdm(|t| (t.cos() * 3.0).atan2(t + 0.5), 1.1);
        check_against_fdm(|t| (t * t + 1.0).sqrt().powf(1.7), 0.3);
        check_against_fdm(|t| (t * 0.5).tan() * (-t).exp(), 0.9);
        check_against_fdm(|t| Scalar::atan2(-t, -t * t - 1.0), 0.4);
    }
}
