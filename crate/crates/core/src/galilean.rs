//! Vectors, points, metric and motion group of Galilean 4-space.
//!
//! Coordinates are stored with the absolute (time-like) coordinate first:
//! `(x1, x2, x3, x4)`. A vector with `x1 = 0` is isotropic; only isotropic
//! vectors carry a Euclidean-style length, everything else is measured by
//! its absolute part.

use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::MotionError;

/// Relative tolerance used to classify computed vectors as isotropic.
pub const ISOTROPY_TOL: f64 = 1e-12;

/// Tolerance on `cos²δ₁ + cos²δ₂ + cos²δ₃ = 1` for boost directions.
pub const DIRECTION_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GVector4 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
}

impl GVector4 {
    pub const ZERO: GVector4 = GVector4::new(0.0, 0.0, 0.0, 0.0);

    pub const fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        Self { x1, x2, x3, x4 }
    }

    /// Isotropic vector from a spatial triple.
    pub const fn spatial(v: [f64; 3]) -> Self {
        Self::new(0.0, v[0], v[1], v[2])
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x1, self.x2, self.x3, self.x4]
    }

    pub fn spatial_part(self) -> [f64; 3] {
        [self.x2, self.x3, self.x4]
    }

    /// `|x1| <= 1e-12 * (1 + max |component|)`; literal zeros are always isotropic.
    pub fn is_isotropic(self) -> bool {
        let scale = self.to_array().iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        self.x1.abs() <= ISOTROPY_TOL * (1.0 + scale)
    }

    pub fn is_finite(self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }

    pub fn max_abs_diff(self, other: GVector4) -> f64 {
        let d = self - other;
        d.to_array().iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }
}

impl Add for GVector4 {
    type Output = GVector4;
    fn add(self, o: GVector4) -> GVector4 {
        GVector4::new(
            self.x1 + o.x1,
            self.x2 + o.x2,
            self.x3 + o.x3,
            self.x4 + o.x4,
        )
    }
}

impl Sub for GVector4 {
    type Output = GVector4;
    fn sub(self, o: GVector4) -> GVector4 {
        GVector4::new(
            self.x1 - o.x1,
            self.x2 - o.x2,
            self.x3 - o.x3,
            self.x4 - o.x4,
        )
    }
}

impl Neg for GVector4 {
    type Output = GVector4;
    fn neg(self) -> GVector4 {
        GVector4::new(-self.x1, -self.x2, -self.x3, -self.x4)
    }
}

impl Mul<f64> for GVector4 {
    type Output = GVector4;
    fn mul(self, k: f64) -> GVector4 {
        GVector4::new(self.x1 * k, self.x2 * k, self.x3 * k, self.x4 * k)
    }
}

impl Mul<GVector4> for f64 {
    type Output = GVector4;
    fn mul(self, v: GVector4) -> GVector4 {
        v * self
    }
}

/// Affine point of G₄.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct GPoint4 {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
}

impl GPoint4 {
    pub const fn new(x1: f64, x2: f64, x3: f64, x4: f64) -> Self {
        Self { x1, x2, x3, x4 }
    }

    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.x1, self.x2, self.x3, self.x4]
    }

    pub fn is_finite(self) -> bool {
        self.to_array().iter().all(|c| c.is_finite())
    }
}

impl Sub for GPoint4 {
    type Output = GVector4;
    fn sub(self, o: GPoint4) -> GVector4 {
        GVector4::new(
            self.x1 - o.x1,
            self.x2 - o.x2,
            self.x3 - o.x3,
            self.x4 - o.x4,
        )
    }
}

impl Add<GVector4> for GPoint4 {
    type Output = GPoint4;
    fn add(self, v: GVector4) -> GPoint4 {
        GPoint4::new(
            self.x1 + v.x1,
            self.x2 + v.x2,
            self.x3 + v.x3,
            self.x4 + v.x4,
        )
    }
}

fn spatial_dot(a: GVector4, b: GVector4) -> f64 {
    a.x2 * b.x2 + a.x3 * b.x3 + a.x4 * b.x4
}

/// Galilean scalar product of vectors.
///
/// Both non-isotropic: product of absolute parts. Exactly one isotropic: 0.
/// Both isotropic: Euclidean product of the spatial parts.
pub fn g_dot(a: GVector4, b: GVector4) -> f64 {
    match (a.is_isotropic(), b.is_isotropic()) {
        (false, false) => a.x1 * b.x1,
        (true, true) => spatial_dot(a, b),
        _ => 0.0,
    }
}

pub fn g_norm(a: GVector4) -> f64 {
    if a.is_isotropic() {
        spatial_dot(a, a).sqrt()
    } else {
        a.x1.abs()
    }
}

/// Galilean distance between points: absolute separation when the absolute
/// coordinates differ, Euclidean spatial distance otherwise.
pub fn g_distance(p: GPoint4, q: GPoint4) -> f64 {
    if p.x1 != q.x1 {
        (q.x1 - p.x1).abs()
    } else {
        let d = q - p;
        spatial_dot(d, d).sqrt()
    }
}

/// Ternary cross product: the determinant with first row `(0, e2, e3, e4)`
/// followed by rows `a`, `b`, `c`, expanded along the first row.
pub fn g_cross(a: GVector4, b: GVector4, c: GVector4) -> GVector4 {
    let m = [a.to_array(), b.to_array(), c.to_array()];
    let minor = |skip: usize| -> f64 {
        let cols: Vec<usize> = (0..4).filter(|&j| j != skip).collect();
        let e = |r: usize, k: usize| m[r][cols[k]];
        e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1))
            - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
            + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
    };
    // cofactor sign (-1)^(1+j) for 1-based column j = 2, 3, 4
    GVector4::new(0.0, -minor(1), minor(2), -minor(3))
}

/// Swap `(x, y, z, t)` into curve order `(t, x, y, z)`.
pub fn to_curve_order(p: [f64; 4]) -> [f64; 4] {
    [p[3], p[0], p[1], p[2]]
}

/// Swap curve order `(t, x, y, z)` back into `(x, y, z, t)`.
pub fn from_curve_order(p: [f64; 4]) -> [f64; 4] {
    [p[1], p[2], p[3], p[0]]
}

pub type Mat3 = [[f64; 3]; 3];

pub fn mat3_mul_vec(m: &Mat3, v: [f64; 3]) -> [f64; 3] {
    [
        m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
        m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
        m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
    ]
}

/// General Galilean motion: spatial rotation by Euler angles, a uniform boost
/// of speed `v` along direction cosines `(cos d1, cos d2, cos d3)`, and
/// translations `(ta, tb, tc)` in space and `td` in time.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GalileanMotion {
    pub alpha: f64,
    pub beta: f64,
    pub gamma_angle: f64,
    pub v: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub ta: f64,
    pub tb: f64,
    pub tc: f64,
    pub td: f64,
}

impl GalileanMotion {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        alpha: f64,
        beta: f64,
        gamma_angle: f64,
        v: f64,
        d1: f64,
        d2: f64,
        d3: f64,
        ta: f64,
        tb: f64,
        tc: f64,
        td: f64,
    ) -> Result<Self, MotionError> {
        let m = Self {
            alpha,
            beta,
            gamma_angle,
            v,
            d1,
            d2,
            d3,
            ta,
            tb,
            tc,
            td,
        };
        m.validate()?;
        Ok(m)
    }

    /// Parameters in the order `alpha, beta, gamma, v, d1, d2, d3, a, b, c, d`.
    pub fn from_slice(p: &[f64]) -> Result<Self, MotionError> {
        if p.len() != 11 {
            return Err(MotionError::ParameterCount(p.len()));
        }
        Self::new(
            p[0], p[1], p[2], p[3], p[4], p[5], p[6], p[7], p[8], p[9], p[10],
        )
    }

    pub fn to_vec(&self) -> Vec<f64> {
        vec![
            self.alpha,
            self.beta,
            self.gamma_angle,
            self.v,
            self.d1,
            self.d2,
            self.d3,
            self.ta,
            self.tb,
            self.tc,
            self.td,
        ]
    }

    pub fn identity() -> Self {
        // boost direction along the first spatial axis; irrelevant with v = 0
        Self {
            alpha: 0.0,
            beta: 0.0,
            gamma_angle: 0.0,
            v: 0.0,
            d1: 0.0,
            d2: std::f64::consts::FRAC_PI_2,
            d3: std::f64::consts::FRAC_PI_2,
            ta: 0.0,
            tb: 0.0,
            tc: 0.0,
            td: 0.0,
        }
    }

    pub fn validate(&self) -> Result<(), MotionError> {
        if self.to_vec().iter().any(|x| !x.is_finite()) {
            return Err(MotionError::NonFinite);
        }
        let c = self.boost_direction();
        let sum = c[0] * c[0] + c[1] * c[1] + c[2] * c[2];
        if (sum - 1.0).abs() > DIRECTION_TOL {
            return Err(MotionError::DirectionCosines { sum });
        }
        Ok(())
    }

    /// Spatial rotation block acting on `(x, y, z)`.
    pub fn rotation(&self) -> Mat3 {
        let (sa, ca) = self.alpha.sin_cos();
        let (sb, cb) = self.beta.sin_cos();
        let (sg, cg) = self.gamma_angle.sin_cos();
        [
            [cb * ca - cg * sb * sa, sb * ca + cg * cb * sa, sg * sa],
            [-(cb * sa + cg * sb * ca), -sb * sa + cg * cb * ca, sg * ca],
            [sg * sb, -sg * cb, cg],
        ]
    }

    pub fn boost_direction(&self) -> [f64; 3] {
        [self.d1.cos(), self.d2.cos(), self.d3.cos()]
    }

    /// Boost velocity `v * (cos d1, cos d2, cos d3)`.
    pub fn boost(&self) -> [f64; 3] {
        let c = self.boost_direction();
        [self.v * c[0], self.v * c[1], self.v * c[2]]
    }

    pub fn translation(&self) -> [f64; 3] {
        [self.ta, self.tb, self.tc]
    }

    /// Apply the motion to a point given as `(x, y, z, t)`.
    pub fn apply_xyzt(&self, p: [f64; 4]) -> [f64; 4] {
        let r = self.rotation();
        let rot = mat3_mul_vec(&r, [p[0], p[1], p[2]]);
        let u = self.boost();
        let t = p[3];
        [
            rot[0] + u[0] * t + self.ta,
            rot[1] + u[1] * t + self.tb,
            rot[2] + u[2] * t + self.tc,
            t + self.td,
        ]
    }
}

/// Apply a motion to a point stored in curve order.
pub fn apply_motion(m: &GalileanMotion, p: GPoint4) -> GPoint4 {
    GPoint4::from_array(to_curve_order(m.apply_xyzt(from_curve_order(p.to_array()))))
}

/// Linear part of the motion: rotation plus boost, translations dropped.
pub fn apply_motion_to_vector(m: &GalileanMotion, v: GVector4) -> GVector4 {
    let rot = mat3_mul_vec(&m.rotation(), v.spatial_part());
    let u = m.boost();
    GVector4::new(
        v.x1,
        rot[0] + u[0] * v.x1,
        rot[1] + u[1] * v.x1,
        rot[2] + u[2] * v.x1,
    )
}
