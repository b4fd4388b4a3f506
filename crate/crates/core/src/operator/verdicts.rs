use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::sup_norm_estimate;
use crate::bloch::{bloch_norm_certified, check_arity};
use crate::constants::{bloch_constant, in_class_d, standard_form};
use crate::domain::{sample_interior, Domain, MetricScale, Point};
use crate::error::{BlochError, Result};
use crate::estimate::EstimateInterval;
use crate::search::SamplingConfig;
use crate::symbols::SymbolExpr;

/// Slack in the numerical isometry conditions.
pub const ISOMETRY_TOL: f64 = 1e-6;
/// Below this the numeric fallback treats a symbol as zero.
const ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompactnessVerdict {
    Compact,
    NotCompact,
}

impl CompactnessVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            CompactnessVerdict::Compact => "compact",
            CompactnessVerdict::NotCompact => "not-compact",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CompactnessWitness {
    /// Two points with distinct values: the range is not a singleton.
    TwoPoints { a: Point, va: Complex64, b: Point, vb: Complex64 },
    /// The range is the singleton `{value}` with `value != 0`.
    NonzeroSingleton { value: Complex64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompactnessReport {
    pub verdict: CompactnessVerdict,
    /// Decided on the symbol itself rather than on samples.
    pub symbolic: bool,
    pub witness: Option<CompactnessWitness>,
}

fn two_point_witness(d: &Domain, psi: &SymbolExpr, cfg: &SamplingConfig) -> Result<Option<CompactnessWitness>> {
    let n = d.ambient_dim();
    let origin = Point::origin(n);
    let v0 = psi.evaluate(&origin)?;
    let mut candidates: Vec<Point> = (0..n)
        .map(|k| {
            let mut c = vec![Complex64::new(0.0, 0.0); n];
            c[k] = Complex64::new(0.5, 0.0);
            Point(c)
        })
        .filter(|p| d.contains(p).unwrap_or(false))
        .collect();
    if let Ok(s) = sample_interior(d, 64, cfg.seed) {
        candidates.extend(s);
    }
    for p in candidates {
        let v = psi.evaluate(&p)?;
        if (v - v0).norm() > ZERO_TOL {
            return Ok(Some(CompactnessWitness::TwoPoints { a: origin, va: v0, b: p, vb: v }));
        }
    }
    Ok(None)
}

/// `M_psi` is compact only for `psi = 0`: a nonconstant symbol has a range
/// with two distinct values and a nonzero constant has the singleton range
/// `{c} != {0}`. Decided symbolically; a symbol too large to expand falls
/// back to the sampled `max |psi| <= 1e-12`.
pub fn compactness_verdict(d: &Domain, psi: &SymbolExpr, cfg: &SamplingConfig) -> Result<CompactnessReport> {
    check_arity(d, psi)?;
    let (constant, symbolic) = match psi.constant_value() {
        Ok(c) => (c, true),
        Err(_) => {
            let pts = sample_interior(d, cfg.samples.max(1), cfg.seed)?;
            let mut m: f64 = 0.0;
            for p in &pts {
                m = m.max(psi.evaluate(p)?.norm());
            }
            (if m <= ZERO_TOL { Some(Complex64::new(0.0, 0.0)) } else { None }, false)
        }
    };
    Ok(match constant {
        Some(c) if c.norm() == 0.0 => CompactnessReport { verdict: CompactnessVerdict::Compact, symbolic, witness: None },
        Some(c) => CompactnessReport {
            verdict: CompactnessVerdict::NotCompact,
            symbolic,
            witness: Some(CompactnessWitness::NonzeroSingleton { value: c }),
        },
        None => CompactnessReport {
            verdict: CompactnessVerdict::NotCompact,
            symbolic,
            witness: two_point_witness(d, psi, cfg)?,
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum IsometryVerdict {
    Isometry,
    NotIsometry,
    NotIsometryEvidence,
    Inconclusive,
}

impl IsometryVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            IsometryVerdict::Isometry => "isometry",
            IsometryVerdict::NotIsometry => "not-isometry",
            IsometryVerdict::NotIsometryEvidence => "not-isometry-evidence",
            IsometryVerdict::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IsometryReport {
    pub verdict: IsometryVerdict,
    pub c_d: Option<f64>,
    pub in_class: Option<bool>,
    /// `|psi(0)|`
    pub at_origin: f64,
    /// `|psi(0)|^k` for `k = 1..=K`.
    pub powers: Vec<f64>,
    /// `1 - c_D`; an isometry needs `|psi(0)|^k >= 1 - c_D` for every `k`.
    pub threshold: Option<f64>,
    /// First `k` with `|psi(0)|^k < 1 - c_D`.
    pub crossing: Option<usize>,
    /// `||psi^k||_B` for `k = 1..`, in the normalization of the Bloch constants.
    pub power_norms: Vec<EstimateInterval>,
    /// Necessary conditions found to fail.
    pub violations: Vec<String>,
}

fn has_exceptional_factor(d: &Domain) -> bool {
    standard_form(d)
        .map(|fs| fs.iter().any(|f| matches!(f, Domain::Exceptional1 | Domain::Exceptional2)))
        .unwrap_or(false)
}

/// Whether `M_psi` is an isometry of the Bloch space.
///
/// Constant symbols are decided exactly (isometry iff `|psi| = 1`). For a
/// nonconstant symbol on a domain with `c_D < 1` the answer is no; the
/// report carries the evidence `|psi(0)|^k` against `1 - c_D` and the
/// sampled norms of the powers. On domains with a disk factor only
/// necessary conditions can be checked: `||psi^k||_B = 1` for all `k` and
/// `||psi||_inf <= 1`.
pub fn isometry_verdict(d: &Domain, psi: &SymbolExpr, k: usize, cfg: &SamplingConfig) -> Result<IsometryReport> {
    check_arity(d, psi)?;
    let n = d.ambient_dim();
    let a = psi.evaluate(&Point::origin(n))?.norm();
    let mut report = IsometryReport {
        verdict: IsometryVerdict::Inconclusive,
        c_d: None,
        in_class: None,
        at_origin: a,
        powers: (1..=k).map(|j| a.powi(j as i32)).collect(),
        threshold: None,
        crossing: None,
        power_norms: Vec::new(),
        violations: Vec::new(),
    };
    if let Some(c) = psi.constant_value()? {
        report.verdict = if (c.norm() - 1.0).abs() <= 1e-12 {
            IsometryVerdict::Isometry
        } else {
            report.violations.push(format!("constant of modulus {} != 1", c.norm()));
            IsometryVerdict::NotIsometry
        };
        return Ok(report);
    }
    if has_exceptional_factor(d) {
        return Err(BlochError::Unsupported(
            "the two exceptional Bloch constants are not assigned to specific domains".into(),
        ));
    }
    let c_d = bloch_constant(d)?;
    let class = in_class_d(d)?;
    report.c_d = Some(c_d);
    report.in_class = Some(class);
    report.threshold = Some(1.0 - c_d);
    report.crossing = report.powers.iter().position(|&p| p < 1.0 - c_d).map(|i| i + 1);
    if class {
        report.verdict = IsometryVerdict::NotIsometry;
        report.violations.push(format!("nonconstant symbol on a domain with c_D = {c_d:.6} < 1"));
        if d.has_metric() {
            for j in 1..=k {
                report.power_norms.push(bloch_norm_certified(d, &psi.pow(j as u32), cfg, MetricScale::BlochConstant)?);
            }
        }
        return Ok(report);
    }
    if !d.has_metric() {
        return Ok(report);
    }
    let sup = sup_norm_estimate(d, psi, cfg)?;
    if sup.lower > 1.0 + ISOMETRY_TOL {
        report.violations.push(format!("sup |psi| >= {} > 1", sup.lower));
    }
    for j in 1..=k {
        if !report.violations.is_empty() {
            break;
        }
        let nb = bloch_norm_certified(d, &psi.pow(j as u32), cfg, MetricScale::BlochConstant)?;
        if nb.lower > 1.0 + ISOMETRY_TOL {
            report.violations.push(format!("||psi^{j}||_B >= {} > 1", nb.lower));
        } else if let Some(u) = nb.upper.filter(|&u| u < 1.0 - ISOMETRY_TOL) {
            report.violations.push(format!("||psi^{j}||_B <= {u} < 1"));
        }
        report.power_norms.push(nb);
    }
    if !report.violations.is_empty() {
        report.verdict = IsometryVerdict::NotIsometryEvidence;
    }
    Ok(report)
}
