use serde::{Deserialize, Serialize};

use crate::domain::Point;

/// How an estimate was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Closed form; `lower == upper`.
    Exact,
    /// Lower bound from sampling a supremum; the upper end is whatever a
    /// separate certified argument supplies, else unbounded.
    SampledLower,
    /// Both ends come from analytic bounds (possibly combined with sampling
    /// for the lower end).
    AnalyticBounds,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::SampledLower => "sampled-lower",
            Mode::AnalyticBounds => "analytic-bounds",
        }
    }
}

/// A quantity reported as `[lower, upper]`; `upper == None` means `+inf`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateInterval {
    pub lower: f64,
    pub upper: Option<f64>,
    pub mode: Mode,
    pub samples: usize,
    pub seed: u64,
    /// Point at which the sampled lower end was attained, when meaningful.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmax: Option<Point>,
}

impl EstimateInterval {
    pub fn exact(value: f64) -> Self {
        EstimateInterval {
            lower: value,
            upper: Some(value),
            mode: Mode::Exact,
            samples: 0,
            seed: 0,
            argmax: None,
        }
    }

    pub fn bounds(lower: f64, upper: f64) -> Self {
        EstimateInterval {
            lower,
            upper: Some(upper.max(lower)),
            mode: Mode::AnalyticBounds,
            samples: 0,
            seed: 0,
            argmax: None,
        }
    }

    pub fn sampled(lower: f64, samples: usize, seed: u64) -> Self {
        EstimateInterval {
            lower,
            upper: None,
            mode: Mode::SampledLower,
            samples,
            seed,
            argmax: None,
        }
    }

    /// Attaches a certified upper bound, widening it to the lower end if
    /// round-off put it below.
    pub fn with_upper(mut self, upper: Option<f64>) -> Self {
        self.upper = upper.map(|u| u.max(self.lower));
        if self.upper.is_some() && self.mode == Mode::SampledLower {
            self.mode = Mode::AnalyticBounds;
        }
        self
    }

    pub fn with_argmax(mut self, p: Option<Point>) -> Self {
        self.argmax = p;
        self
    }

    pub fn upper_or_inf(&self) -> f64 {
        self.upper.unwrap_or(f64::INFINITY)
    }

    pub fn is_well_formed(&self) -> bool {
        let ordered = self.lower <= self.upper_or_inf();
        let exact_ok = self.mode != Mode::Exact || self.upper == Some(self.lower);
        ordered && exact_ok && !self.lower.is_nan()
    }

    /// Interval shifted by a known constant.
    pub fn shift(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.lower += c;
        out.upper = self.upper.map(|u| u + c);
        out
    }

    /// Midpoint-free "value" used in reports: the certified lower end.
    pub fn value(&self) -> f64 {
        self.lower
    }
}
