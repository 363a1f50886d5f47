use serde::{Deserialize, Serialize};

use crate::lp::{dual_series, LpError, Solution};
use crate::model::Model;

use super::AnalysisError;

/// Row duals of the priced constraint families, in objective units (already
/// carrying the `σ_s · hour_weight` factor). Use [`Prices::per_unit`] for
/// $/MWh or $/MW values.
#[derive(Debug, Clone, PartialEq)]
pub struct Prices {
    /// `σ_s · hour_weight` per scenario.
    pub weights: Vec<f64>,
    pub energy: Vec<Vec<f64>>,
    pub capacity: Option<Vec<Vec<f64>>>,
    pub rps: Option<Vec<f64>>,
    pub tmr_hourly: Option<Vec<Vec<f64>>>,
    pub tmr_annual: Option<Vec<f64>>,
    pub excess_cap: Option<Vec<f64>>,
}

fn family(sol: &Solution, prefix: &str) -> Result<Option<Vec<Vec<f64>>>, AnalysisError> {
    match dual_series(sol, prefix) {
        Ok(d) => {
            if d.values.iter().flatten().any(Option::is_none) {
                return Err(AnalysisError::MissingDuals(format!("gaps in `{prefix}`")));
            }
            Ok(Some((0..d.values.len()).map(|s| d.dense(s)).collect()))
        }
        Err(LpError::UnknownPrefix(_)) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn per_scenario(v: Option<Vec<Vec<f64>>>) -> Option<Vec<f64>> {
    v.map(|rows| rows.into_iter().map(|r| r[0]).collect())
}

impl Prices {
    pub fn extract(sol: &Solution, model: &Model) -> Result<Self, AnalysisError> {
        sol.ensure_optimal()?;
        let weights = (0..model.vars.scenarios).map(|s| model.op_weight(s)).collect();
        let energy =
            family(sol, "power_balance")?.ok_or_else(|| AnalysisError::MissingDuals("power_balance".into()))?;
        Ok(Prices {
            weights,
            energy,
            capacity: family(sol, "crm")?,
            rps: per_scenario(family(sol, "rps")?),
            tmr_hourly: family(sol, "tmr_hourly")?,
            tmr_annual: per_scenario(family(sol, "tmr_annual")?),
            excess_cap: per_scenario(family(sol, "excess_cap")?),
        })
    }

    /// Converts a raw dual of scenario `s` to a price per unit.
    pub fn per_unit(&self, s: usize, raw: f64) -> f64 {
        let w = self.weights[s];
        if w > 0.0 {
            raw / w
        } else {
            0.0
        }
    }

    fn sigma_share(&self, s: usize) -> f64 {
        let total: f64 = self.weights.iter().sum();
        if total > 0.0 {
            self.weights[s] / total
        } else {
            0.0
        }
    }
}

/// Price histogram with fixed-width bins and a terminal open bin.
///
/// Values below zero are counted in the first bin; values at or above `cap`
/// in the last.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin_width: f64,
    pub cap: f64,
    /// `cap / bin_width` regular bins followed by the `cap+` bin.
    pub mass: Vec<f64>,
}

impl Histogram {
    pub const BIN_WIDTH: f64 = 10.0;
    pub const CAP: f64 = 250.0;

    pub fn new(bin_width: f64, cap: f64) -> Self {
        let n = (cap / bin_width).ceil() as usize;
        Histogram { bin_width, cap, mass: vec![0.0; n + 1] }
    }

    pub fn add(&mut self, value: f64, weight: f64) {
        let last = self.mass.len() - 1;
        let i =
            if value >= self.cap { last } else { ((value.max(0.0) / self.bin_width).floor() as usize).min(last - 1) };
        self.mass[i] += weight;
    }

    /// Histogram of `values` with unit weight each.
    pub fn of(values: &[f64]) -> Self {
        let mut h = Histogram::new(Self::BIN_WIDTH, Self::CAP);
        for &v in values {
            h.add(v, 1.0);
        }
        h
    }

    pub fn labels(&self) -> Vec<String> {
        let n = self.mass.len() - 1;
        let mut out: Vec<String> =
            (0..n).map(|i| format!("{}-{}", i as f64 * self.bin_width, (i + 1) as f64 * self.bin_width)).collect();
        out.push(format!("{}+", self.cap));
        out
    }
}

/// Average prices and the hourly matching-price histogram.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceReport {
    /// Load-weighted, $/MWh.
    pub avg_energy_price: f64,
    /// Mean hourly capacity price, $/MW per hour.
    pub avg_capacity_price: f64,
    /// Sum of hourly capacity prices over a year, $/MW-yr.
    pub annual_capacity_price: f64,
    /// $/MWh of eligible generation.
    pub rps_price: f64,
    /// $/MWh of matched consumption (mean over hours for hourly matching).
    pub tmr_price: f64,
    /// σ-weighted hours per price bin; hourly matching only.
    pub tmr_histogram: Option<Histogram>,
}

/// Scenario-weighted price summary. `load` weights the energy average.
pub fn price_report(prices: &Prices, load: &[f64], hour_weight: f64) -> PriceReport {
    let ns = prices.weights.len();
    let (mut e_num, mut e_den) = (0.0, 0.0);
    for s in 0..ns {
        let p = prices.sigma_share(s);
        for (t, &d) in load.iter().enumerate() {
            e_num += p * prices.per_unit(s, prices.energy[s][t]) * d;
            e_den += p * d;
        }
    }
    let hourly_mean = |series: &Vec<Vec<f64>>| {
        let mut acc = 0.0;
        for s in 0..ns {
            let row = &series[s];
            let mean = row.iter().map(|&r| prices.per_unit(s, r)).sum::<f64>() / row.len().max(1) as f64;
            acc += prices.sigma_share(s) * mean;
        }
        acc
    };
    let scalar_mean = |series: &Vec<f64>| (0..ns).map(|s| prices.sigma_share(s) * prices.per_unit(s, series[s])).sum();
    let avg_capacity_price = prices.capacity.as_ref().map_or(0.0, hourly_mean);
    let hours = load.len() as f64;
    let tmr_histogram = prices.tmr_hourly.as_ref().map(|series| {
        let mut h = Histogram::new(Histogram::BIN_WIDTH, Histogram::CAP);
        for (s, row) in series.iter().enumerate() {
            for &r in row {
                h.add(prices.per_unit(s, r), prices.sigma_share(s));
            }
        }
        h
    });
    PriceReport {
        avg_energy_price: if e_den > 0.0 { e_num / e_den } else { 0.0 },
        avg_capacity_price,
        annual_capacity_price: avg_capacity_price * hours * hour_weight,
        rps_price: prices.rps.as_ref().map_or(0.0, scalar_mean),
        tmr_price: match (&prices.tmr_hourly, &prices.tmr_annual) {
            (Some(h), _) => hourly_mean(h),
            (None, Some(a)) => scalar_mean(a),
            _ => 0.0,
        },
        tmr_histogram,
    }
}
