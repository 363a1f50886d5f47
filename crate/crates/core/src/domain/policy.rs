use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TmrKind {
    #[default]
    None,
    Annual,
    Hourly,
}

/// Slack penalties.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Penalties {
    /// $/MWh of unserved grid load.
    pub voll: f64,
    /// $/t of unserved hydrogen demand.
    pub unserved_h2: f64,
    /// $/MWh of renewable-standard shortfall.
    pub rps_slack: f64,
    /// $/MWh of unmatched electrolyzer consumption (out-of-sample dispatch only).
    pub tmr_slack: f64,
}

impl Default for Penalties {
    fn default() -> Self {
        Self { voll: 9000.0, unserved_h2: 5e7, rps_slack: 1000.0, tmr_slack: 500.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PolicyConfig {
    pub tmr: TmrKind,
    /// Share of electrolyzer consumption that must be matched each hour.
    pub alpha_tmr: f64,
    /// Excess-sales allowance on annual PPA output (hourly matching only);
    /// `None` removes the cap.
    pub excess_sales_beta: Option<f64>,
    /// Minimum annual renewable share of grid demand; `None` disables the standard.
    pub rps_kappa: Option<f64>,
    /// Include electrolyzer and compressor consumption in the standard's base.
    pub rps_covers_h2: bool,
    /// Reserve margin; `None` disables the capacity reserve rows.
    pub crm_alpha: Option<f64>,
    /// Count compressor consumption in matched load (off: electrolyzer only).
    pub tmr_includes_compressor: bool,
    pub penalties: Penalties,
}

impl Default for PolicyConfig {
    fn default() -> Self {
        Self {
            tmr: TmrKind::None,
            alpha_tmr: 1.0,
            excess_sales_beta: None,
            rps_kappa: None,
            rps_covers_h2: false,
            crm_alpha: Some(0.1375),
            tmr_includes_compressor: false,
            penalties: Penalties::default(),
        }
    }
}

impl PolicyConfig {
    pub fn annual() -> Self {
        Self { tmr: TmrKind::Annual, ..Self::default() }
    }

    /// Hourly matching at compliance `alpha` with the 20% excess-sales allowance.
    pub fn hourly(alpha: f64) -> Self {
        Self { tmr: TmrKind::Hourly, alpha_tmr: alpha, excess_sales_beta: Some(0.2), ..Self::default() }
    }
}
