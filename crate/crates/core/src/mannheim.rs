//! Generalized Mannheim curves: the condition `κ = γτ²`, the mate
//! `α* = α + γn`, and numerical checks of the mate's tangent and of the
//! normal-plane decomposition
//!
//! ```text
//! dt*/ds = (κ − γτ²) n + (γτ)′ b + γτσ e
//! ```

use serde::{Deserialize, Serialize};

use crate::curve::Curve;
use crate::error::MannheimError;
use crate::frenet::{frame_jets, vj_diff, vj_value, Degeneracy, FrameJets, DEFAULT_EPS_DEGENERATE};
use crate::galilean::{g_dot, g_norm, GPoint4, GVector4};

pub const DEFAULT_CONDITION_TOL: f64 = 1e-8;
pub const DEFAULT_SUITE_TOL: f64 = 1e-8;
pub const DEFAULT_MATE_DEGENERATE: f64 = 1e-9;
/// Minimum fraction of samples with a non-degenerate mate for the suite to pass.
pub const MATE_COVERAGE: f64 = 0.9;

/// Least-squares constant `γ` minimizing `Σ (κᵢ − γτᵢ²)²`.
pub fn fit_gamma(samples: &[(f64, f64)]) -> Result<f64, MannheimError> {
    let (num, den) = samples
        .iter()
        .fold((0.0, 0.0), |(num, den), &(kappa, tau)| {
            let t2 = tau * tau;
            (num + kappa * t2, den + t2 * t2)
        });
    if !(den > 0.0) {
        return Err(MannheimError::AllTauZero);
    }
    Ok(num / den)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionSample {
    pub s: f64,
    pub kappa: f64,
    pub tau: f64,
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MateSummary {
    /// sup |(dα*/ds).x1 − 1|
    pub velocity_x1_defect_sup: f64,
    /// sup |⟨dt*/ds, n⟩_G|
    pub normal_coefficient_sup: f64,
    pub degenerate_samples: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MannheimReport {
    pub name: String,
    pub gamma_fit: f64,
    pub condition_residual_sup: f64,
    pub kappa_sup: f64,
    pub tol: f64,
    pub is_mannheim: bool,
    pub degenerate_samples: usize,
    pub samples: Vec<ConditionSample>,
    pub mate: MateSummary,
}

fn grid_frames(c: &Curve) -> Result<Vec<FrameJets>, MannheimError> {
    c.grid()
        .into_iter()
        .map(|s| frame_jets(c, s, DEFAULT_EPS_DEGENERATE).map_err(MannheimError::from))
        .collect()
}

fn kappa_tau(f: &FrameJets) -> Option<(f64, f64)> {
    match (f.degenerate, f.tau) {
        (None, Some(tau)) => Some((f.kappa.value(), tau.value())),
        _ => None,
    }
}

/// Fits `γ` over the curve's grid and reports how well `κ = γτ²` holds.
pub fn check_condition(c: &Curve, tol: f64) -> Result<MannheimReport, MannheimError> {
    let frames = grid_frames(c)?;
    let pairs: Vec<(f64, (f64, f64))> = frames
        .iter()
        .filter_map(|f| kappa_tau(f).map(|kt| (f.s, kt)))
        .collect();
    if pairs.is_empty() {
        return Err(MannheimError::FullyDegenerate);
    }
    let kt: Vec<(f64, f64)> = pairs.iter().map(|(_, kt)| *kt).collect();
    let gamma = fit_gamma(&kt)?;
    let samples: Vec<ConditionSample> = pairs
        .iter()
        .map(|&(s, (kappa, tau))| ConditionSample {
            s,
            kappa,
            tau,
            residual: (kappa - gamma * tau * tau).abs(),
        })
        .collect();
    let sup = samples.iter().fold(0.0_f64, |m, r| m.max(r.residual));
    let kappa_sup = samples.iter().fold(0.0_f64, |m, r| m.max(r.kappa));

    let tangent = tangent_diagnostics(&frames, gamma);
    let plane = normal_plane_diagnostics(&frames, gamma, DEFAULT_MATE_DEGENERATE);
    let mate = MateSummary {
        velocity_x1_defect_sup: sup_of(tangent.iter().filter_map(|d| d.speed_defect)),
        normal_coefficient_sup: sup_of(plane.iter().filter_map(|d| d.n_coefficient)),
        degenerate_samples: plane
            .iter()
            .filter(|d| d.mate_degenerate != Some(false))
            .count(),
    };
    Ok(MannheimReport {
        name: c.name.clone(),
        gamma_fit: gamma,
        condition_residual_sup: sup,
        kappa_sup,
        tol,
        is_mannheim: sup <= tol * (1.0 + kappa_sup),
        degenerate_samples: frames.len() - samples.len(),
        samples,
        mate,
    })
}

fn sup_of(it: impl Iterator<Item = f64>) -> f64 {
    it.fold(0.0_f64, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MateSample {
    pub s: f64,
    /// `α(s) + γ n(s)`; absent where `n` is undefined.
    pub point: Option<GPoint4>,
    /// `d(α + γn)/ds` at `s`.
    pub velocity: Option<GVector4>,
    pub degenerate: Option<Degeneracy>,
}

fn mate_sample(f: &FrameJets, gamma: f64) -> MateSample {
    let alpha = vj_value(&f.alpha);
    let t = vj_value(&f.t);
    let (point, velocity) = match (&f.n, gamma == 0.0) {
        (_, true) => (Some(GPoint4::from_array(alpha.to_array())), Some(t)),
        (Some(n), false) => {
            let dn = vj_value(&vj_diff(n));
            let n = vj_value(n);
            (
                Some(GPoint4::from_array((alpha + gamma * n).to_array())),
                Some(t + gamma * dn),
            )
        }
        (None, false) => (None, None),
    };
    MateSample {
        s: f.s,
        point,
        velocity,
        degenerate: f.degenerate,
    }
}

/// Samples of the mate `α + γn` on the curve's grid.
pub fn mannheim_mate(c: &Curve, gamma: f64) -> Result<Vec<MateSample>, MannheimError> {
    Ok(grid_frames(c)?
        .iter()
        .map(|f| mate_sample(f, gamma))
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TangentDiagnostic {
    pub s: f64,
    /// |v.x1 − 1| for the mate velocity `v`.
    pub speed_defect: Option<f64>,
    /// g_norm(v − t − γτb).
    pub tangent_residual: Option<f64>,
    /// |⟨v − t, n⟩_G|, the coefficient that forces γ′ = 0.
    pub normal_coefficient: Option<f64>,
    pub degenerate: Option<Degeneracy>,
}

fn tangent_diagnostics(frames: &[FrameJets], gamma: f64) -> Vec<TangentDiagnostic> {
    frames
        .iter()
        .map(|f| {
            let mut d = TangentDiagnostic {
                s: f.s,
                speed_defect: None,
                tangent_residual: None,
                normal_coefficient: None,
                degenerate: f.degenerate,
            };
            let t = vj_value(&f.t);
            let Some(v) = mate_sample(f, gamma).velocity else {
                return d;
            };
            d.speed_defect = Some((v.x1 - 1.0).abs());
            if let Some(n) = &f.n {
                d.normal_coefficient = Some(g_dot(v - t, vj_value(n)).abs());
            }
            if let (Some(tau), Some(b)) = (f.tau, &f.b) {
                let predicted = t + (gamma * tau.value()) * vj_value(b);
                d.tangent_residual = Some(g_norm(v - predicted));
            } else if gamma == 0.0 {
                d.tangent_residual = Some(g_norm(v - t));
            }
            d
        })
        .collect()
}

pub fn verify_mate_tangent(c: &Curve, gamma: f64) -> Result<Vec<TangentDiagnostic>, MannheimError> {
    Ok(tangent_diagnostics(&grid_frames(c)?, gamma))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalPlaneDiagnostic {
    pub s: f64,
    /// |⟨dt*/ds, n⟩_G|
    pub n_coefficient: Option<f64>,
    /// g_norm(dt*/ds − [(κ − γτ²)n + (γτ)′b + γτσe])
    pub decomposition_residual: Option<f64>,
    /// g_norm(dt*/ds), the mate's first curvature.
    pub mate_kappa: Option<f64>,
    /// `None` where the curve's own frame is degenerate.
    pub mate_degenerate: Option<bool>,
    pub degenerate: Option<Degeneracy>,
}

fn normal_plane_diagnostics(
    frames: &[FrameJets],
    gamma: f64,
    mate_eps: f64,
) -> Vec<NormalPlaneDiagnostic> {
    frames
        .iter()
        .map(|f| {
            let mut d = NormalPlaneDiagnostic {
                s: f.s,
                n_coefficient: None,
                decomposition_residual: None,
                mate_kappa: None,
                mate_degenerate: None,
                degenerate: f.degenerate,
            };
            let Some(n_jet) = &f.n else {
                return d;
            };
            let mate: [_; 4] = std::array::from_fn(|i| f.alpha[i] + n_jet[i] * gamma);
            let w = vj_value(&vj_diff(&vj_diff(&mate)));
            let n = vj_value(n_jet);
            let mate_kappa = g_norm(w);
            d.n_coefficient = Some(g_dot(w, n).abs());
            d.mate_kappa = Some(mate_kappa);
            d.mate_degenerate = Some(mate_kappa <= mate_eps);
            if let (Some(tau), Some(b), Some(e), Some(sigma)) = (f.tau, &f.b, f.e, f.sigma) {
                let kappa = f.kappa.value();
                let tau0 = tau.value();
                let dgt = gamma * tau.diff().value();
                let predicted = (kappa - gamma * tau0 * tau0) * n
                    + dgt * vj_value(b)
                    + (gamma * tau0 * sigma) * e;
                d.decomposition_residual = Some(g_norm(w - predicted));
            }
            d
        })
        .collect()
}

pub fn verify_normal_plane(
    c: &Curve,
    gamma: f64,
    mate_eps: f64,
) -> Result<Vec<NormalPlaneDiagnostic>, MannheimError> {
    Ok(normal_plane_diagnostics(&grid_frames(c)?, gamma, mate_eps))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TheoremOutcome {
    Pass,
    MateDegenerate,
    Fail,
}

impl TheoremOutcome {
    pub fn describe(self) -> &'static str {
        match self {
            TheoremOutcome::Pass => "pass",
            TheoremOutcome::MateDegenerate => "condition holds, mate degenerate",
            TheoremOutcome::Fail => "fail",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremResiduals {
    pub condition: f64,
    pub speed_defect: f64,
    pub tangent: f64,
    pub tangent_normal_coefficient: f64,
    pub n_coefficient: f64,
    pub decomposition: f64,
}

impl TheoremResiduals {
    pub fn max(&self) -> f64 {
        [
            self.condition,
            self.speed_defect,
            self.tangent,
            self.tangent_normal_coefficient,
            self.n_coefficient,
            self.decomposition,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TheoremReport {
    pub name: String,
    pub gamma: f64,
    pub outcome: TheoremOutcome,
    pub verdict: String,
    pub tol: f64,
    pub residuals: TheoremResiduals,
    pub samples: usize,
    pub mate_nondegenerate_samples: usize,
    pub mate_coverage: f64,
}

/// Runs the condition check, builds the mate with the fitted `γ`, and checks
/// the mate's tangent and the normal-plane decomposition at every sample.
pub fn mate_theorem_suite(
    c: &Curve,
    condition_tol: f64,
    suite_tol: f64,
) -> Result<TheoremReport, MannheimError> {
    let report = check_condition(c, condition_tol)?;
    if !report.is_mannheim {
        return Err(MannheimError::ConditionFails {
            residual: report.condition_residual_sup,
        });
    }
    let gamma = report.gamma_fit;
    let frames = grid_frames(c)?;
    let tangent = tangent_diagnostics(&frames, gamma);
    let plane = normal_plane_diagnostics(&frames, gamma, DEFAULT_MATE_DEGENERATE);
    let residuals = TheoremResiduals {
        condition: report.condition_residual_sup,
        speed_defect: sup_of(tangent.iter().filter_map(|d| d.speed_defect)),
        tangent: sup_of(tangent.iter().filter_map(|d| d.tangent_residual)),
        tangent_normal_coefficient: sup_of(tangent.iter().filter_map(|d| d.normal_coefficient)),
        n_coefficient: sup_of(plane.iter().filter_map(|d| d.n_coefficient)),
        decomposition: sup_of(plane.iter().filter_map(|d| d.decomposition_residual)),
    };
    let samples = frames.len();
    let good = plane
        .iter()
        .filter(|d| d.mate_degenerate == Some(false))
        .count();
    let coverage = good as f64 / samples as f64;
    let residuals_ok = residuals.max() <= suite_tol
        && tangent.iter().all(|d| d.tangent_residual.is_some())
        && plane.iter().all(|d| d.decomposition_residual.is_some());
    let outcome = if !residuals_ok {
        TheoremOutcome::Fail
    } else if coverage >= MATE_COVERAGE {
        TheoremOutcome::Pass
    } else {
        TheoremOutcome::MateDegenerate
    };
    Ok(TheoremReport {
        name: c.name.clone(),
        gamma,
        outcome,
        verdict: outcome.describe().to_string(),
        tol: suite_tol,
        residuals,
        samples,
        mate_nondegenerate_samples: good,
        mate_coverage: coverage,
    })
}
