//! Truncated Taylor series ("jets") of fixed order.
//!
//! `coeffs[k] = f^(k)(s0) / k!`. Arithmetic and the elementary functions
//! propagate coefficients with the usual univariate recurrences, so
//! derivatives come out exact to rounding.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::JetError;

/// Highest Taylor coefficient kept.
pub const ORDER: usize = 5;
pub const LEN: usize = ORDER + 1;

/// Elementary functions understood by jets and by the expression language.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Func {
    Sin,
    Cos,
    Tan,
    Exp,
    Log,
    Sqrt,
    Sinh,
    Cosh,
    Neg,
}

impl Func {
    pub const CALLABLE: [Func; 8] = [
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Exp,
        Func::Log,
        Func::Sqrt,
        Func::Sinh,
        Func::Cosh,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sqrt => "sqrt",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Neg => "neg",
        }
    }

    /// Looks up a callable function by name (`neg` is an operator, not a call).
    pub fn from_name(name: &str) -> Option<Func> {
        Func::CALLABLE.iter().copied().find(|f| f.name() == name)
    }

    pub fn eval_real(self, x: f64) -> Result<f64, JetError> {
        self.check_domain(x)?;
        Ok(match self {
            Func::Sin => x.sin(),
            Func::Cos => x.cos(),
            Func::Tan => x.tan(),
            Func::Exp => x.exp(),
            Func::Log => x.ln(),
            Func::Sqrt => x.sqrt(),
            Func::Sinh => x.sinh(),
            Func::Cosh => x.cosh(),
            Func::Neg => -x,
        })
    }

    fn check_domain(self, x: f64) -> Result<(), JetError> {
        let ok = match self {
            Func::Log | Func::Sqrt => x > 0.0,
            Func::Tan => x.cos().abs() > TAN_POLE_TOL,
            _ => x.is_finite(),
        };
        if ok {
            Ok(())
        } else {
            Err(JetError::Domain {
                func: self,
                value: x,
            })
        }
    }
}

impl fmt::Display for Func {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

const TAN_POLE_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Jet {
    pub coeffs: [f64; LEN],
}

impl Default for Jet {
    fn default() -> Self {
        Jet::constant(0.0)
    }
}

impl Jet {
    pub const fn new(coeffs: [f64; LEN]) -> Self {
        Self { coeffs }
    }

    pub const fn constant(v: f64) -> Self {
        let mut coeffs = [0.0; LEN];
        coeffs[0] = v;
        Self { coeffs }
    }

    /// Jet of the identity function at `s0`.
    pub const fn var(s0: f64) -> Self {
        let mut coeffs = [0.0; LEN];
        coeffs[0] = s0;
        coeffs[1] = 1.0;
        Self { coeffs }
    }

    pub fn value(&self) -> f64 {
        self.coeffs[0]
    }

    /// `k! * coeffs[k]`, the k-th derivative at the expansion point.
    pub fn derivative(&self, k: usize) -> Result<f64, JetError> {
        if k > ORDER {
            return Err(JetError::OrderOutOfRange(k));
        }
        let fact: f64 = (1..=k).map(|i| i as f64).product();
        Ok(fact * self.coeffs[k])
    }

    /// Jet of the derivative. The top coefficient is lost, so the result is
    /// valid to one order less than `self`.
    pub fn diff(&self) -> Jet {
        let mut out = [0.0; LEN];
        for (k, slot) in out.iter_mut().take(ORDER).enumerate() {
            *slot = (k + 1) as f64 * self.coeffs[k + 1];
        }
        Jet::new(out)
    }

    pub fn scale(&self, k: f64) -> Jet {
        Jet::new(self.coeffs.map(|c| c * k))
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_finite())
    }

    pub fn max_abs_diff(&self, other: &Jet) -> f64 {
        self.coeffs
            .iter()
            .zip(other.coeffs.iter())
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }

    pub fn try_div(&self, b: &Jet) -> Result<Jet, JetError> {
        let b0 = b.coeffs[0];
        if b0 == 0.0 {
            return Err(JetError::DivisionByZero);
        }
        let mut q = [0.0; LEN];
        for k in 0..LEN {
            let acc: f64 = (0..k).map(|j| q[j] * b.coeffs[k - j]).sum();
            q[k] = (self.coeffs[k] - acc) / b0;
        }
        Ok(Jet::new(q))
    }

    pub fn recip(&self) -> Result<Jet, JetError> {
        Jet::constant(1.0).try_div(self)
    }

    pub fn apply(&self, f: Func) -> Result<Jet, JetError> {
        f.check_domain(self.coeffs[0])?;
        Ok(match f {
            Func::Sin => self.sin_cos().0,
            Func::Cos => self.sin_cos().1,
            Func::Tan => {
                let (s, c) = self.sin_cos();
                s.try_div(&c)?
            }
            Func::Exp => self.exp(),
            Func::Log => self.ln(),
            Func::Sqrt => self.sqrt(),
            Func::Sinh => self.sinh_cosh().0,
            Func::Cosh => self.sinh_cosh().1,
            Func::Neg => -*self,
        })
    }

    fn sin_cos(&self) -> (Jet, Jet) {
        let a = &self.coeffs;
        let mut s = [0.0; LEN];
        let mut c = [0.0; LEN];
        s[0] = a[0].sin();
        c[0] = a[0].cos();
        for k in 1..LEN {
            let mut ds = 0.0;
            let mut dc = 0.0;
            for j in 1..=k {
                let w = j as f64 * a[j];
                ds += w * c[k - j];
                dc += w * s[k - j];
            }
            s[k] = ds / k as f64;
            c[k] = -dc / k as f64;
        }
        (Jet::new(s), Jet::new(c))
    }

    fn sinh_cosh(&self) -> (Jet, Jet) {
        let a = &self.coeffs;
        let mut sh = [0.0; LEN];
        let mut ch = [0.0; LEN];
        sh[0] = a[0].sinh();
        ch[0] = a[0].cosh();
        for k in 1..LEN {
            let mut ds = 0.0;
            let mut dc = 0.0;
            for j in 1..=k {
                let w = j as f64 * a[j];
                ds += w * ch[k - j];
                dc += w * sh[k - j];
            }
            sh[k] = ds / k as f64;
            ch[k] = dc / k as f64;
        }
        (Jet::new(sh), Jet::new(ch))
    }

    fn exp(&self) -> Jet {
        let a = &self.coeffs;
        let mut e = [0.0; LEN];
        e[0] = a[0].exp();
        for k in 1..LEN {
            let acc: f64 = (1..=k).map(|j| j as f64 * a[j] * e[k - j]).sum();
            e[k] = acc / k as f64;
        }
        Jet::new(e)
    }

    fn ln(&self) -> Jet {
        let a = &self.coeffs;
        let mut l = [0.0; LEN];
        l[0] = a[0].ln();
        for k in 1..LEN {
            let acc: f64 = (1..k).map(|j| j as f64 * l[j] * a[k - j]).sum();
            l[k] = (a[k] - acc / k as f64) / a[0];
        }
        Jet::new(l)
    }

    fn sqrt(&self) -> Jet {
        let a = &self.coeffs;
        let mut r = [0.0; LEN];
        r[0] = a[0].sqrt();
        for k in 1..LEN {
            let acc: f64 = (1..k).map(|j| r[j] * r[k - j]).sum();
            r[k] = (a[k] - acc) / (2.0 * r[0]);
        }
        Jet::new(r)
    }

    /// Integer power by repeated squaring; negative exponents go through division.
    pub fn powi(&self, n: i64) -> Result<Jet, JetError> {
        let mut base = *self;
        let mut e = n.unsigned_abs();
        let mut acc = Jet::constant(1.0);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base;
            }
            e >>= 1;
            if e > 0 {
                base = base * base;
            }
        }
        if n < 0 {
            acc.recip()
        } else {
            Ok(acc)
        }
    }

    /// Real power. Integral exponents use [`Jet::powi`]; any other exponent
    /// needs a positive constant term.
    pub fn powf(&self, r: f64) -> Result<Jet, JetError> {
        if r.fract() == 0.0 && r.abs() <= i64::MAX as f64 {
            return self.powi(r as i64);
        }
        let a = &self.coeffs;
        if !(a[0] > 0.0) {
            return Err(JetError::PowDomain {
                exponent: r,
                value: a[0],
            });
        }
        let mut p = [0.0; LEN];
        p[0] = a[0].powf(r);
        for k in 1..LEN {
            let acc: f64 = (1..=k)
                .map(|j| ((r + 1.0) * j as f64 - k as f64) * a[j] * p[k - j])
                .sum();
            p[k] = acc / (k as f64 * a[0]);
        }
        Ok(Jet::new(p))
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, b: Jet) -> Jet {
        let mut out = self.coeffs;
        for (o, c) in out.iter_mut().zip(b.coeffs) {
            *o += c;
        }
        Jet::new(out)
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, b: Jet) -> Jet {
        let mut out = self.coeffs;
        for (o, c) in out.iter_mut().zip(b.coeffs) {
            *o -= c;
        }
        Jet::new(out)
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, b: Jet) -> Jet {
        let mut out = [0.0; LEN];
        for (k, o) in out.iter_mut().enumerate() {
            *o = (0..=k).map(|j| self.coeffs[j] * b.coeffs[k - j]).sum();
        }
        Jet::new(out)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, k: f64) -> Jet {
        self.scale(k)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}
