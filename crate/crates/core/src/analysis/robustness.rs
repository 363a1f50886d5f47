use serde::{Deserialize, Serialize};

use super::{AnalysisError, Solved};

/// Out-of-sample matching performance.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct Robustness {
    /// Hours with unmatched electrolyzer consumption.
    pub unmet_hours: usize,
    /// Unmatched energy over electrolyzer consumption in those hours; 0 when
    /// no hour is unmet.
    pub unmatched_share: f64,
}

/// Counts hours with `slack > tol` and the share of `load` they leave unmatched.
pub fn robustness_from_series(slack: &[f64], load: &[f64], tol: f64) -> Robustness {
    let (mut hours, mut s_sum, mut l_sum) = (0, 0.0, 0.0);
    for (&s, &l) in slack.iter().zip(load) {
        if s > tol {
            hours += 1;
            s_sum += s;
            l_sum += l;
        }
    }
    let unmatched_share = if hours == 0 || l_sum <= 0.0 { 0.0 } else { s_sum / l_sum };
    Robustness { unmet_hours: hours, unmatched_share }
}

/// Robustness of a dispatch solution, pooling all its scenarios.
pub fn robustness_metrics(v: &Solved, tol: f64) -> Result<Robustness, AnalysisError> {
    let (slack, load) = matching_series(v)?;
    Ok(robustness_from_series(&slack, &load, tol))
}

/// Matching slack and matched load (MW) of a dispatch solution, scenario by
/// scenario, hour by hour.
pub fn matching_series(v: &Solved) -> Result<(Vec<f64>, Vec<f64>), AnalysisError> {
    let vars = &v.model.vars;
    let slack =
        vars.tmr_slack.as_ref().ok_or_else(|| AnalysisError::InvalidInput("solution has no matching slack".into()))?;
    let (Some(h), Some(spec)) = (&vars.h2, &v.case.h2_project) else {
        return Err(AnalysisError::InvalidInput("case has no hydrogen project".into()));
    };
    let comp = if v.case.policy.tmr_includes_compressor { spec.compressor_power_per_tonne } else { 0.0 };
    let mut sl = Vec::with_capacity(vars.scenarios * vars.hours);
    let mut load = Vec::with_capacity(sl.capacity());
    for s in 0..vars.scenarios {
        for t in 0..vars.hours {
            sl.push(v.x(slack.at(s, t)));
            load.push(spec.electrolyzer_power_per_tonne * v.x(h.gen.at(s, t)) + comp * v.x(h.charge.at(s, t)));
        }
    }
    Ok((sl, load))
}
