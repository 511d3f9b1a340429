//! Run configuration, dispatch to the solvers, and the JSON report.
//!
//! The report is deterministic for a given configuration and input. Wall
//! clock timings are only included on request.

use serde::Serialize;
use subtraj_core::candidates::Candidate;
use subtraj_core::fast::solve_sc_fast;
use subtraj_core::sc::{solve_sc, Center, Solution, CERT_TOL};
use subtraj_core::scm::{solve_scm, ScmSolution, VERIFY_TOL};
use subtraj_core::{IntervalUnion, PolygonalCurve};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Cover,
    Maximize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunConfig {
    pub mode: Mode,
    pub delta: f64,
    pub ell: usize,
    /// maximize only
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    /// maximize only
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    /// cover only
    #[serde(skip_serializing_if = "Option::is_none")]
    pub fast: Option<bool>,
    /// recorded for reproducibility; the solvers are deterministic
    pub seed: u64,
    #[serde(skip)]
    pub timings: bool,
}

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("--delta must be positive and finite, got {0}")]
    Delta(f64),
    #[error("--ell must be at least 2, got {0}")]
    Ell(usize),
    #[error("--k must be at least 1")]
    K,
    #[error("--epsilon must be positive and finite, got {0}")]
    Epsilon(f64),
    #[error("{0}")]
    Mode(&'static str),
}

impl RunConfig {
    pub fn cover(delta: f64, ell: usize, fast: bool) -> Self {
        RunConfig {
            mode: Mode::Cover,
            delta,
            ell,
            k: None,
            epsilon: None,
            fast: Some(fast),
            seed: 0,
            timings: false,
        }
    }

    pub fn maximize(delta: f64, ell: usize, k: usize, epsilon: f64) -> Self {
        RunConfig {
            mode: Mode::Maximize,
            delta,
            ell,
            k: Some(k),
            epsilon: Some(epsilon),
            fast: None,
            seed: 0,
            timings: false,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if !(self.delta > 0.0 && self.delta.is_finite()) {
            return Err(ConfigError::Delta(self.delta));
        }
        if self.ell < 2 {
            return Err(ConfigError::Ell(self.ell));
        }
        match self.mode {
            Mode::Cover => {
                if self.k.is_some() || self.epsilon.is_some() {
                    return Err(ConfigError::Mode("k and epsilon belong to maximize mode"));
                }
            }
            Mode::Maximize => {
                if self.fast.is_some() {
                    return Err(ConfigError::Mode("fast belongs to cover mode"));
                }
                match self.k {
                    Some(k) if k >= 1 => {}
                    _ => return Err(ConfigError::K),
                }
                let eps = self.epsilon.ok_or(ConfigError::Epsilon(f64::NAN))?;
                if !(eps > 0.0 && eps.is_finite()) {
                    return Err(ConfigError::Epsilon(eps));
                }
            }
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CandidateReport {
    /// `I`, `II` or `III`
    #[serde(rename = "type")]
    pub kind: &'static str,
    /// Type I: first and last vertex of the simplification (0-based)
    #[serde(skip_serializing_if = "Option::is_none")]
    pub start_vertex: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub end_vertex: Option<usize>,
    /// Type II/III: edge of the simplification (0-based) and local parameters
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edge: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reversed: Option<bool>,
}

impl From<&Candidate> for CandidateReport {
    fn from(c: &Candidate) -> Self {
        let none = CandidateReport {
            kind: "I",
            start_vertex: None,
            end_vertex: None,
            edge: None,
            s: None,
            t: None,
            reversed: None,
        };
        match *c {
            Candidate::TypeI { start, end } => CandidateReport {
                start_vertex: Some(start),
                end_vertex: Some(end),
                ..none
            },
            Candidate::TypeII { edge, s, t, reversed } | Candidate::TypeIII { edge, s, t, reversed } => CandidateReport {
                kind: if matches!(c, Candidate::TypeII { .. }) { "II" } else { "III" },
                edge: Some(edge),
                s: Some(s),
                t: Some(t),
                reversed: Some(reversed),
                ..none
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CenterReport {
    pub candidate: CandidateReport,
    pub vertices: Vec<Vec<f64>>,
    /// proxy coverage the greedy selection used
    pub proxy: Vec<(f64, f64)>,
}

impl From<&Center> for CenterReport {
    fn from(c: &Center) -> Self {
        CenterReport {
            candidate: (&c.candidate).into(),
            vertices: c.curve.vertices().iter().map(|p| p.coords().to_vec()).collect(),
            proxy: c.proxy.parts().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verification {
    pub verified: bool,
    pub method: &'static str,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub proxy_measure: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approx_measure: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_measure: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StatsReport {
    pub rounds: usize,
    pub simplified_vertices: usize,
    pub type1_candidates: usize,
    pub sweep_windows: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_k: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gains: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings: Option<Vec<(String, f64)>>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputReport {
    pub vertices: usize,
    pub dimension: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SolutionReport {
    pub config: RunConfig,
    pub input: InputReport,
    /// `4Δ` for cover, at most `(4+ε)Δ` for maximize
    pub radius: f64,
    pub centers: Vec<CenterReport>,
    /// coverage of the output curves at `radius`, sorted and disjoint
    pub coverage: Vec<(f64, f64)>,
    pub coverage_measure: f64,
    pub verification: Verification,
    pub stats: StatsReport,
}

impl SolutionReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

fn parts(u: &IntervalUnion) -> Vec<(f64, f64)> {
    u.parts().to_vec()
}

fn cover_report(cfg: &RunConfig, p: &PolygonalCurve, sol: &Solution) -> SolutionReport {
    SolutionReport {
        config: cfg.clone(),
        input: InputReport {
            vertices: p.len(),
            dimension: p.dim(),
        },
        radius: sol.radius,
        centers: sol.centers.iter().map(CenterReport::from).collect(),
        coverage: parts(&sol.coverage),
        coverage_measure: sol.coverage.measure(),
        verification: Verification {
            verified: sol.verified,
            method: "union of reachable intervals of each output curve against the input at 4Δ covers [0,1]",
            tolerance: CERT_TOL,
            proxy_measure: None,
            approx_measure: None,
            exact_measure: None,
        },
        stats: StatsReport {
            rounds: sol.stats.rounds,
            simplified_vertices: sol.stats.simplified_vertices,
            type1_candidates: sol.stats.type1_candidates,
            sweep_windows: sol.stats.sweep_windows,
            points: Some(sol.stats.points),
            final_k: sol.stats.final_k,
            gains: None,
            timings: cfg.timings.then(|| sol.stats.timings.clone()),
        },
    }
}

fn maximize_report(cfg: &RunConfig, p: &PolygonalCurve, sol: &ScmSolution) -> SolutionReport {
    SolutionReport {
        config: cfg.clone(),
        input: InputReport {
            vertices: p.len(),
            dimension: p.dim(),
        },
        radius: sol.radius,
        centers: sol.centers.iter().map(CenterReport::from).collect(),
        coverage: parts(&sol.coverage),
        coverage_measure: sol.exact_measure,
        verification: Verification {
            verified: sol.verified,
            method: "proxy coverage within the approximate free-space coverage within the exact coverage at the reported radius",
            tolerance: VERIFY_TOL,
            proxy_measure: Some(sol.proxy_measure),
            approx_measure: Some(sol.approx_measure),
            exact_measure: Some(sol.exact_measure),
        },
        stats: StatsReport {
            rounds: sol.stats.rounds,
            simplified_vertices: sol.stats.simplified_vertices,
            type1_candidates: sol.stats.type1_candidates,
            sweep_windows: sol.stats.sweep_windows,
            points: None,
            final_k: None,
            gains: Some(sol.gains.clone()),
            timings: cfg.timings.then(|| sol.stats.timings.clone()),
        },
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("invalid configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("solver failed: {0}")]
    Solver(#[from] subtraj_core::Error),
}

pub fn run(cfg: &RunConfig, p: &PolygonalCurve) -> Result<SolutionReport, RunError> {
    cfg.validate()?;
    match cfg.mode {
        Mode::Cover => {
            let sol = if cfg.fast == Some(true) {
                solve_sc_fast(p, cfg.delta, cfg.ell)?
            } else {
                solve_sc(p, cfg.delta, cfg.ell)?
            };
            log::info!("cover: {} centers, verified = {}", sol.centers.len(), sol.verified);
            Ok(cover_report(cfg, p, &sol))
        }
        Mode::Maximize => {
            let (k, eps) = (cfg.k.expect("validated"), cfg.epsilon.expect("validated"));
            let sol = solve_scm(p, cfg.delta, cfg.ell, k, eps)?;
            log::info!("maximize: {} centers, measure {:.6}", sol.centers.len(), sol.exact_measure);
            Ok(maximize_report(cfg, p, &sol))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn segment() -> PolygonalCurve {
        PolygonalCurve::from_coords(&[&[0.0, 0.0], &[3.0, 1.0]]).unwrap()
    }

    #[test]
    fn cover_single_segment() {
        let r = run(&RunConfig::cover(0.3, 2, false), &segment()).unwrap();
        assert_eq!(r.centers.len(), 1);
        assert!(r.verification.verified);
        assert_eq!(r.coverage, vec![(0.0, 1.0)]);
    }

    #[test]
    fn zero_k_is_rejected() {
        let cfg = RunConfig::maximize(0.3, 2, 0, 0.1);
        assert_eq!(cfg.validate(), Err(ConfigError::K));
        assert!(matches!(run(&cfg, &segment()), Err(RunError::Config(ConfigError::K))));
    }

    #[test]
    fn mode_fields_are_checked() {
        let mut cfg = RunConfig::cover(0.3, 2, false);
        cfg.k = Some(2);
        assert!(cfg.validate().is_err());
        assert_eq!(RunConfig::cover(-1.0, 2, false).validate(), Err(ConfigError::Delta(-1.0)));
        assert_eq!(RunConfig::cover(1.0, 1, false).validate(), Err(ConfigError::Ell(1)));
        assert!(RunConfig::maximize(1.0, 2, 1, 0.0).validate().is_err());
    }

    #[test]
    fn report_is_deterministic_without_timings() {
        let p = PolygonalCurve::from_coords(&[&[0.0, 0.0], &[2.0, 0.5], &[3.0, -1.0], &[5.0, 0.0]]).unwrap();
        let cfg = RunConfig::maximize(0.3, 3, 2, 0.1);
        let a = run(&cfg, &p).unwrap().to_json();
        let b = run(&cfg, &p).unwrap().to_json();
        assert_eq!(a, b);
        assert!(!a.contains("timings"));
    }

    #[test]
    fn candidate_descriptors() {
        let c = CandidateReport::from(&Candidate::TypeIII {
            edge: 2,
            s: 0.25,
            t: 0.5,
            reversed: true,
        });
        assert_eq!(c.kind, "III");
        assert_eq!(c.edge, Some(2));
        assert_eq!(c.start_vertex, None);
    }
}
