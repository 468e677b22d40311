use diamond_core::flat::{FlatPlan, FlatReferences, FlatSweepPoint};
use diamond_core::freq::{AllocationPlan, KktReport, LagrangePoint};
use diamond_core::superposition::SpcSolution;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct References {
    pub cf_only: f64,
    pub df_only: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub superposition: Option<f64>,
    pub cutset: f64,
}

impl From<FlatReferences> for References {
    fn from(r: FlatReferences) -> Self {
        Self { cf_only: r.cf_only, df_only: r.df_only, superposition: Some(r.superposition), cutset: r.cutset }
    }
}

/// One row of the per-band table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BandRow {
    pub f: f64,
    pub h: f64,
    pub t_df: f64,
    pub t_cf: f64,
    pub s_df: f64,
    pub s_cf: f64,
    pub c_df: f64,
    pub c_cf: f64,
    pub r_df: f64,
    pub r_cf: f64,
}

impl BandRow {
    /// Rows of `plan`, with frequencies shifted by `offset`. Unused modes
    /// report zero power, fronthaul and rate.
    pub fn from_plan(plan: &AllocationPlan, offset: f64) -> Vec<BandRow> {
        plan.bands
            .iter()
            .map(|b| {
                let (df, cf) = (b.t_df > 0.0, b.t_cf > 0.0);
                let pick = |on: bool, v: f64| if on { v } else { 0.0 };
                BandRow {
                    f: offset + b.frequency,
                    h: b.gain,
                    t_df: b.t_df,
                    t_cf: b.t_cf,
                    s_df: pick(df, b.df.s),
                    s_cf: pick(cf, b.cf.s),
                    c_df: pick(df, b.df.c),
                    c_cf: pick(cf, b.cf.c),
                    r_df: pick(df, b.df.r),
                    r_cf: pick(cf, b.cf.r),
                }
            })
            .collect()
    }
}

/// Result of `flat`, `spc` or `freq`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateReport {
    pub config: RunConfig,
    pub achieved: f64,
    pub references: References,
    pub power_used: f64,
    pub fronthaul_used: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lagrange: Option<LagrangePoint>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dual_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kkt: Option<KktReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flat: Option<FlatPlan>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub spc: Option<SpcSolution>,
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub bands: Vec<BandRow>,
}

impl RateReport {
    /// Every number in the report is finite.
    pub fn is_finite(&self) -> bool {
        let r = &self.references;
        let mut v = vec![self.achieved, self.power_used, self.fronthaul_used, r.cf_only, r.df_only, r.cutset];
        v.extend(r.superposition);
        v.extend(self.dual_value);
        v.extend(self.lagrange.iter().flat_map(|l| [l.lambda_c, l.lambda_s]));
        v.extend(
            self.bands.iter().flat_map(|b| [b.f, b.h, b.t_df, b.t_cf, b.s_df, b.s_cf, b.c_df, b.c_cf, b.r_df, b.r_cf]),
        );
        v.iter().all(|x| x.is_finite())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub config: RunConfig,
    pub points: Vec<FlatSweepPoint>,
}

/// Flat CSV row for a sweep point.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SweepRow {
    pub power: f64,
    pub fronthaul: f64,
    pub rate: f64,
    pub t_df: f64,
    pub t_cf: f64,
    pub p_df: f64,
    pub p_cf: f64,
    pub c_df: f64,
    pub c_cf: f64,
    pub cf_only: f64,
    pub df_only: f64,
    pub superposition: f64,
    pub cutset: f64,
}

impl From<&FlatSweepPoint> for SweepRow {
    fn from(p: &FlatSweepPoint) -> Self {
        let (plan, r) = (&p.plan, &p.references);
        SweepRow {
            power: p.p_total,
            fronthaul: p.c_total,
            rate: plan.rate,
            t_df: plan.t_df,
            t_cf: plan.t_cf,
            p_df: plan.p_df,
            p_cf: plan.p_cf,
            c_df: plan.c_df,
            c_cf: plan.c_cf,
            cf_only: r.cf_only,
            df_only: r.df_only,
            superposition: r.superposition,
            cutset: r.cutset,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtlasRow {
    pub line: String,
    pub lambda_c: f64,
    pub lambda_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AtlasReport {
    pub config: RunConfig,
    pub gain: f64,
    pub equal_power_junction: f64,
    pub equal_relay_junction: f64,
    pub rows: Vec<AtlasRow>,
}

#[derive(Debug, Clone, PartialEq)]
#[allow(clippy::large_enum_variant)]
pub enum Output {
    Rate(RateReport),
    Sweep(SweepReport),
    Atlas(AtlasReport),
}
