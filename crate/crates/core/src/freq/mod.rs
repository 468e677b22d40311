//! Frequency-selective CF/DF allocation.
//!
//! The band `[0, W]` is split into `N` equal sub-bands. For a pair of
//! prices `(lambda_c, lambda_s)` on fronthaul and power, every sub-band gets
//! its stationary DF and CF allocations in closed form; a small LP then
//! chooses the time fractions of each mode subject to the global budgets.
//! The optimizer scans a grid of prices and keeps the plan with the highest
//! achieved rate.
//!
//! Units: gains are `|H(f)|`, power densities are SNR per real channel use,
//! fronthaul and rate densities are bits/(s Hz). Each hertz carries two real
//! channel uses per second, so a band of width `df` with density `r`
//! contributes `2 r df` bits/s of rate, `c df` bits/s of fronthaul and
//! `2 s df` of power. With that power accounting a flat band of width 1/2
//! reproduces the per-channel-use numbers of [`crate::flat`] exactly.

mod bounds;
mod optimize;
mod plan;
mod stationary;

pub use bounds::cutset_bound;
pub use optimize::{optimize, optimize_with, DualGrid, KktReport, ModeSet, Optimum, LAMBDA_S_SPAN};
pub use plan::{dual_value, lp_time_fractions, AllocationPlan, BandAllocation, BandCandidates, DualValue};
pub use stationary::{
    cf_stationary, cf_stationary_numeric, df_stationary, mode_lagrangian, r_cf_freq, r_df_freq, LagrangePoint, Mode,
    ModeAllocation,
};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Channel description for the frequency-selective problem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelSpec {
    bandwidth: f64,
    gains: Vec<f64>,
    power: f64,
    fronthaul: f64,
}

impl ChannelSpec {
    /// `gains[i]` is `|H|` at the centre of the i-th of `gains.len()` equal
    /// sub-bands of `[0, bandwidth]`.
    pub fn new(bandwidth: f64, gains: Vec<f64>, power: f64, fronthaul: f64) -> Result<Self> {
        if !(bandwidth > 0.0) || !bandwidth.is_finite() {
            return Err(Error::InvalidArgument(format!("bandwidth must be positive, got {bandwidth}")));
        }
        if gains.is_empty() {
            return Err(Error::InvalidArgument("at least one band is required".into()));
        }
        if let Some((i, g)) = gains.iter().enumerate().find(|(_, g)| !(**g >= 0.0) || !g.is_finite()) {
            return Err(Error::InvalidArgument(format!("gain of band {i} must be finite and >= 0, got {g}")));
        }
        for (name, v) in [("power", power), ("fronthaul", fronthaul)] {
            if !(v >= 0.0) || !v.is_finite() {
                return Err(Error::InvalidArgument(format!("{name} must be finite and >= 0, got {v}")));
            }
        }
        Ok(Self { bandwidth, gains, power, fronthaul })
    }

    /// Constant gain over `bands` sub-bands.
    pub fn flat(bandwidth: f64, gain: f64, bands: usize, power: f64, fronthaul: f64) -> Result<Self> {
        Self::new(bandwidth, vec![gain; bands], power, fronthaul)
    }

    pub fn bandwidth(&self) -> f64 {
        self.bandwidth
    }

    pub fn gains(&self) -> &[f64] {
        &self.gains
    }

    pub fn num_bands(&self) -> usize {
        self.gains.len()
    }

    /// Total power budget.
    pub fn power(&self) -> f64 {
        self.power
    }

    /// Per-relay fronthaul budget in bits/s.
    pub fn fronthaul(&self) -> f64 {
        self.fronthaul
    }

    /// Width of one sub-band.
    pub fn band_width(&self) -> f64 {
        self.bandwidth / self.gains.len() as f64
    }

    pub fn band_center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) * self.band_width()
    }

    pub fn with_budgets(&self, power: f64, fronthaul: f64) -> Result<Self> {
        Self::new(self.bandwidth, self.gains.clone(), power, fronthaul)
    }
}
