//! Frenet apparatus `{t, n, b, e; κ, τ, σ}` of admissible curves.
//!
//! Everything is computed from jets of the curve at a single parameter
//! value, differentiating normalized quantities through jet arithmetic:
//!
//! ```text
//! t = α′            κ = |α″|        n = α″ / κ
//! τ = |n′|          b = n′ / τ      e = t ∧ n ∧ b      σ = ⟨b′, e⟩
//! ```

use serde::{Deserialize, Serialize};

use crate::curve::Curve;
use crate::error::{CurveError, FrenetError};
use crate::galilean::{apply_motion_to_vector, g_cross, g_dot, g_norm, GVector4, GalileanMotion};
use crate::jet::Jet;

pub const DEFAULT_EPS_DEGENERATE: f64 = 1e-9;
pub const DEFAULT_RESIDUAL_STEP: f64 = 1e-4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Degeneracy {
    KappaZero,
    TauZero,
}

impl Degeneracy {
    pub fn as_str(self) -> &'static str {
        match self {
            Degeneracy::KappaZero => "kappa_zero",
            Degeneracy::TauZero => "tau_zero",
        }
    }
}

/// A vector-valued jet: one [`Jet`] per coordinate.
pub type VecJet = [Jet; 4];

pub fn vj_value(v: &VecJet) -> GVector4 {
    GVector4::new(v[0].value(), v[1].value(), v[2].value(), v[3].value())
}

pub fn vj_diff(v: &VecJet) -> VecJet {
    v.map(|c| c.diff())
}

fn vj_spatial_norm_sq(v: &VecJet) -> Jet {
    v[1] * v[1] + v[2] * v[2] + v[3] * v[3]
}

fn vj_div(v: &VecJet, d: &Jet) -> VecJet {
    let r = d
        .recip()
        .expect("normalizer checked above the degeneracy threshold");
    v.map(|c| c * r)
}

/// Frame data as jets in `s`, used where derivatives of frame fields are needed.
#[derive(Debug, Clone)]
pub struct FrameJets {
    pub s: f64,
    pub alpha: VecJet,
    pub t: VecJet,
    pub kappa: Jet,
    pub n: Option<VecJet>,
    pub tau: Option<Jet>,
    pub b: Option<VecJet>,
    pub e: Option<GVector4>,
    pub sigma: Option<f64>,
    pub degenerate: Option<Degeneracy>,
}

pub fn frame_jets(c: &Curve, s: f64, eps: f64) -> Result<FrameJets, CurveError> {
    let alpha = c.jets(s)?;
    let t = vj_diff(&alpha);
    // the absolute part of α″ vanishes identically, so n is isotropic
    let acc = vj_diff(&t);
    let kappa_sq = vj_spatial_norm_sq(&acc);
    let mut frame = FrameJets {
        s,
        alpha,
        t,
        kappa: Jet::constant(kappa_sq.value().sqrt()),
        n: None,
        tau: None,
        b: None,
        e: None,
        sigma: None,
        degenerate: None,
    };
    if frame.kappa.value() <= eps {
        frame.degenerate = Some(Degeneracy::KappaZero);
        return Ok(frame);
    }
    frame.kappa = kappa_sq.apply(crate::jet::Func::Sqrt).expect("positive");
    let n = vj_div(&acc, &frame.kappa);
    let dn = vj_diff(&n);
    frame.n = Some(n);
    let tau_sq = vj_spatial_norm_sq(&dn);
    if tau_sq.value().sqrt() <= eps {
        frame.tau = Some(Jet::constant(tau_sq.value().sqrt()));
        frame.degenerate = Some(Degeneracy::TauZero);
        return Ok(frame);
    }
    let tau = tau_sq.apply(crate::jet::Func::Sqrt).expect("positive");
    let b = vj_div(&dn, &tau);
    let e = g_cross(vj_value(&frame.t), vj_value(&n), vj_value(&b));
    let db = vj_value(&vj_diff(&b));
    frame.sigma = Some(g_dot(db, e));
    frame.tau = Some(tau);
    frame.b = Some(b);
    frame.e = Some(e);
    Ok(frame)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrenetData {
    pub s: f64,
    pub t: GVector4,
    pub n: Option<GVector4>,
    pub b: Option<GVector4>,
    pub e: Option<GVector4>,
    pub kappa: f64,
    pub tau: Option<f64>,
    pub sigma: Option<f64>,
    pub degenerate: Option<Degeneracy>,
}

impl FrenetData {
    pub fn is_degenerate(&self) -> bool {
        self.degenerate.is_some()
    }

    /// `(t, n, b, e, κ, τ, σ)` of a non-degenerate frame.
    pub fn full(&self) -> Option<(GVector4, GVector4, GVector4, GVector4, f64, f64, f64)> {
        Some((
            self.t,
            self.n?,
            self.b?,
            self.e?,
            self.kappa,
            self.tau?,
            self.sigma?,
        ))
    }

    /// The ten scalar-product relations of an orthonormal Galilean frame,
    /// returned as `(label, value, expected)`.
    pub fn orthonormality(&self) -> Option<[(&'static str, f64, f64); 10]> {
        let (t, n, b, e, ..) = self.full()?;
        Some([
            ("<t,t>", g_dot(t, t), 1.0),
            ("<n,n>", g_dot(n, n), 1.0),
            ("<b,b>", g_dot(b, b), 1.0),
            ("<e,e>", g_dot(e, e), 1.0),
            ("<t,n>", g_dot(t, n), 0.0),
            ("<t,b>", g_dot(t, b), 0.0),
            ("<t,e>", g_dot(t, e), 0.0),
            ("<n,b>", g_dot(n, b), 0.0),
            ("<n,e>", g_dot(n, e), 0.0),
            ("<b,e>", g_dot(b, e), 0.0),
        ])
    }

    /// Largest deviation over the ten orthonormality relations.
    pub fn orthonormality_error(&self) -> Option<f64> {
        Some(
            self.orthonormality()?
                .iter()
                .fold(0.0_f64, |m, (_, v, want)| m.max((v - want).abs())),
        )
    }
}

impl From<&FrameJets> for FrenetData {
    fn from(f: &FrameJets) -> Self {
        FrenetData {
            s: f.s,
            t: vj_value(&f.t),
            n: f.n.as_ref().map(vj_value),
            b: f.b.as_ref().map(vj_value),
            e: f.e,
            kappa: f.kappa.value(),
            tau: f.tau.map(|j| j.value()),
            sigma: f.sigma,
            degenerate: f.degenerate,
        }
    }
}

pub fn frenet_at(c: &Curve, s: f64, eps_degenerate: f64) -> Result<FrenetData, CurveError> {
    Ok(FrenetData::from(&frame_jets(c, s, eps_degenerate)?))
}

pub fn frenet_grid(c: &Curve, eps_degenerate: f64) -> Result<Vec<FrenetData>, CurveError> {
    c.grid()
        .into_iter()
        .map(|s| frenet_at(c, s, eps_degenerate))
        .collect()
}

/// Norms of the four Frenet-equation defects, using central differences of
/// the frame fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FrenetResiduals {
    pub t: f64,
    pub n: f64,
    pub b: f64,
    pub e: f64,
}

impl FrenetResiduals {
    pub fn as_array(&self) -> [f64; 4] {
        [self.t, self.n, self.b, self.e]
    }

    pub fn max(&self) -> f64 {
        self.as_array().into_iter().fold(0.0, f64::max)
    }
}

pub fn frenet_residuals(c: &Curve, s: f64, h: f64) -> Result<FrenetResiduals, FrenetError> {
    let full = |at: f64| -> Result<_, FrenetError> {
        let f = frenet_at(c, at, DEFAULT_EPS_DEGENERATE)?;
        f.full().ok_or(FrenetError::DegenerateStencil {
            s: at,
            reason: f.degenerate.map_or("incomplete", Degeneracy::as_str),
        })
    };
    let (tm, nm, bm, em, ..) = full(s - h)?;
    let (_, n, b, e, kappa, tau, sigma) = full(s)?;
    let (tp, np, bp, ep, ..) = full(s + h)?;
    let d = |p: GVector4, m: GVector4| (p - m) * (0.5 / h);
    Ok(FrenetResiduals {
        t: g_norm(d(tp, tm) - kappa * n),
        n: g_norm(d(np, nm) - tau * b),
        b: g_norm(d(bp, bm) + tau * n - sigma * e),
        e: g_norm(d(ep, em) + sigma * b),
    })
}

/// Differences between the Frenet data of a curve and of its image under a
/// Galilean motion, evaluated at corresponding parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct InvarianceRecord {
    pub s: f64,
    pub d_kappa: f64,
    pub d_tau: f64,
    pub d_sigma: f64,
    /// Max-component deviation of the moved tangent from the motion's linear part applied to `t`.
    pub d_t: f64,
    /// Max-component deviation of moved `n`, `b`, `e` from `R` applied to the originals.
    pub d_n: f64,
    pub d_b: f64,
    pub d_e: f64,
}

impl InvarianceRecord {
    pub fn max_curvature_delta(&self) -> f64 {
        self.d_kappa.max(self.d_tau).max(self.d_sigma)
    }

    pub fn max_frame_delta(&self) -> f64 {
        self.d_t.max(self.d_n).max(self.d_b).max(self.d_e)
    }
}

pub fn invariance_check(
    c: &Curve,
    m: &GalileanMotion,
    s: f64,
) -> Result<InvarianceRecord, FrenetError> {
    m.validate()
        .map_err(|e| FrenetError::Curve(CurveError::Family(format!("invalid motion: {e}"))))?;
    let moved = c.transformed(m)?;
    invariance_against(c, &moved, m, s)
}

/// Same as [`invariance_check`] with the moved curve built by the caller.
pub fn invariance_against(
    c: &Curve,
    moved: &Curve,
    m: &GalileanMotion,
    s: f64,
) -> Result<InvarianceRecord, FrenetError> {
    let full = |curve: &Curve, at: f64| -> Result<_, FrenetError> {
        let f = frenet_at(curve, at, DEFAULT_EPS_DEGENERATE)?;
        f.full().ok_or(FrenetError::Degenerate {
            s: at,
            reason: f.degenerate.map_or("incomplete", Degeneracy::as_str),
        })
    };
    let (t0, n0, b0, e0, k0, tau0, sig0) = full(c, s)?;
    let (t1, n1, b1, e1, k1, tau1, sig1) = full(moved, s + m.td)?;
    let lin = |v: GVector4| apply_motion_to_vector(m, v);
    Ok(InvarianceRecord {
        s,
        d_kappa: (k1 - k0).abs(),
        d_tau: (tau1 - tau0).abs(),
        d_sigma: (sig1 - sig0).abs(),
        d_t: t1.max_abs_diff(lin(t0)),
        d_n: n1.max_abs_diff(lin(n0)),
        d_b: b1.max_abs_diff(lin(b0)),
        d_e: e1.max_abs_diff(lin(e0)),
    })
}
