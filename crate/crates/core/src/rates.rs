//! Single-letter rates and bounds for the symmetric diamond channel.
//!
//! All quantities are per real channel use: `snr` is the SNR of each
//! source-relay AWGN link, `fronthaul` is the bit budget of each relay's
//! link to the destination, and rates are in bits. Logarithms are base 2.
//!
//! The public functions validate their arguments. The `*_unchecked`
//! kernels skip validation and are what the grid searches call in their
//! inner loops.

use std::f64::consts::LN_2;

use crate::error::{check_nonneg, Error, Result};
use crate::numeric::golden_max;

/// Search bracket for the compression-noise variance, on a log scale.
const SIGMA2_MIN: f64 = 1e-8;
const SIGMA2_MAX: f64 = 1e8;
const SIGMA2_SCAN: usize = 400;
const SIGMA2_TOL: f64 = 1e-10;

#[inline]
pub fn df_rate_unchecked(snr: f64) -> f64 {
    snr.ln_1p() / (2.0 * LN_2)
}

/// Oblivious CF rate with distributed compression.
///
/// Evaluated as `1/2 log2(1 + q)` with
/// `q = 2p(1 - y) / (1 + p y + sqrt(p^2 y^2 + (1 + 2p) y))`, `y = 2^(-4c)`,
/// which is the textbook form with the `2^(4c) + p - sqrt(..)` difference
/// rationalised away. It stays accurate for large `c` and reaches the
/// full-cooperation limit `1/2 log2(1 + 2p)` when `y` underflows.
#[inline]
pub fn cf_rate_unchecked(snr: f64, fronthaul: f64) -> f64 {
    if snr == 0.0 || fronthaul == 0.0 {
        return 0.0;
    }
    let a = 4.0 * fronthaul * LN_2;
    let y = (-a).exp();
    let one_minus_y = -(-a).exp_m1();
    let p = snr;
    let root = (p * p * y * y + (1.0 + 2.0 * p) * y).sqrt();
    let q = 2.0 * p * one_minus_y / (1.0 + p * y + root);
    q.ln_1p() / (2.0 * LN_2)
}

/// Partial derivatives `(dR/dsnr, dR/dfronthaul)` of [`cf_rate_unchecked`].
pub fn cf_rate_grad_unchecked(snr: f64, fronthaul: f64) -> (f64, f64) {
    let p = snr;
    let a = 4.0 * fronthaul * LN_2;
    let y = (-a).exp();
    if y == 0.0 {
        return (1.0 / (LN_2 * (1.0 + 2.0 * p)), 0.0);
    }
    let one_minus_y = -(-a).exp_m1();
    let s = (p * p * y * y + (1.0 + 2.0 * p) * y).sqrt();
    let num = 2.0 * p * one_minus_y;
    let den = 1.0 + p * y + s;
    let q = num / den;

    let ds_dp = (p * y * y + y) / s;
    let ds_dy = (2.0 * p * p * y + 1.0 + 2.0 * p) / (2.0 * s);
    let dq_dp = (2.0 * one_minus_y * den - num * (y + ds_dp)) / (den * den);
    let dq_dy = (-2.0 * p * den - num * (p + ds_dy)) / (den * den);
    let dy_dc = -4.0 * LN_2 * y;

    let dr_dq = 1.0 / (2.0 * LN_2 * (1.0 + q));
    (dr_dq * dq_dp, dr_dq * dq_dy * dy_dc)
}

/// The three oblivious cut expressions for compression-noise variance
/// `sigma2`.
pub fn cf_cut_terms(snr: f64, fronthaul: f64, sigma2: f64) -> [f64; 3] {
    let p = snr;
    let inv = (1.0 / sigma2).ln_1p() / LN_2;
    let both = 0.5 * (2.0 * p / (1.0 + sigma2)).ln_1p() / LN_2;
    let one = 0.5 * (p / (1.0 + sigma2)).ln_1p() / LN_2 + fronthaul - 0.5 * inv;
    let links = 2.0 * fronthaul - inv;
    [both, one, links]
}

/// DF rate `1/2 log2(1 + snr)`.
pub fn df_rate(snr: f64) -> Result<f64> {
    check_nonneg("snr", snr)?;
    Ok(df_rate_unchecked(snr))
}

/// Minimal per-relay fronthaul for DF: each relay forwards half the
/// message, `1/4 log2(1 + snr)`.
pub fn df_min_fronthaul(snr: f64) -> Result<f64> {
    Ok(0.5 * df_rate(snr)?)
}

/// Largest DF rate supportable with power `snr` and fronthaul `fronthaul`
/// when DF may use any fraction of time: `min(1/2 log2(1+snr), 2 fronthaul)`.
pub fn df_only_rate(snr: f64, fronthaul: f64) -> Result<f64> {
    check_nonneg("fronthaul", fronthaul)?;
    Ok(df_rate(snr)?.min(2.0 * fronthaul))
}

/// CF rate for SNR `snr` and per-relay fronthaul `fronthaul`.
pub fn cf_rate(snr: f64, fronthaul: f64) -> Result<f64> {
    check_nonneg("snr", snr)?;
    check_nonneg("fronthaul", fronthaul)?;
    Ok(cf_rate_unchecked(snr, fronthaul))
}

/// Gradient of [`cf_rate`] with respect to `(snr, fronthaul)`.
pub fn cf_rate_grad(snr: f64, fronthaul: f64) -> Result<(f64, f64)> {
    check_nonneg("snr", snr)?;
    check_nonneg("fronthaul", fronthaul)?;
    Ok(cf_rate_grad_unchecked(snr, fronthaul))
}

/// CF rate at a fixed compression-noise variance: the minimum of the three
/// cut expressions. The value may be negative for small `sigma2`.
pub fn cf_rate_sigma(snr: f64, fronthaul: f64, sigma2: f64) -> Result<f64> {
    check_nonneg("snr", snr)?;
    check_nonneg("fronthaul", fronthaul)?;
    if sigma2.is_nan() || sigma2 <= 0.0 {
        return Err(Error::Domain(format!("sigma2 must be positive, got {sigma2}")));
    }
    let t = cf_cut_terms(snr, fronthaul, sigma2);
    Ok(t[0].min(t[1]).min(t[2]))
}

/// Maximise [`cf_rate_sigma`] over `sigma2`.
///
/// Scans `log sigma2` over `[1e-8, 1e8]`, then golden-section refines the
/// best cell. Returns `(sigma2, rate)`.
pub fn cf_rate_sigma_max(snr: f64, fronthaul: f64) -> Result<(f64, f64)> {
    check_nonneg("snr", snr)?;
    check_nonneg("fronthaul", fronthaul)?;
    let obj = |log_s: f64| {
        let t = cf_cut_terms(snr, fronthaul, log_s.exp());
        t[0].min(t[1]).min(t[2])
    };
    let (lo, hi) = (SIGMA2_MIN.ln(), SIGMA2_MAX.ln());
    let step = (hi - lo) / SIGMA2_SCAN as f64;
    let mut best = (lo, obj(lo));
    for i in 1..=SIGMA2_SCAN {
        let x = lo + step * i as f64;
        let v = obj(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    let (x, v) = golden_max(obj, (best.0 - step).max(lo), (best.0 + step).min(hi), SIGMA2_TOL);
    let (x, v) = if v >= best.1 { (x, v) } else { best };
    Ok((x.exp(), v))
}

/// Superposition rate: the DF layer sees the CF layer as noise.
pub fn spc_rate(p_df: f64, p_cf: f64, c_cf: f64) -> Result<f64> {
    check_nonneg("p_df", p_df)?;
    check_nonneg("p_cf", p_cf)?;
    check_nonneg("c_cf", c_cf)?;
    Ok(df_rate_unchecked(p_df / (1.0 + p_cf)) + cf_rate_unchecked(p_cf, c_cf))
}

/// Cut-set upper bound `min(1/2 log2(1+2p), 1/2 log2(1+p) + c, 2c)`.
pub fn cutset(snr: f64, fronthaul: f64) -> Result<f64> {
    check_nonneg("snr", snr)?;
    check_nonneg("fronthaul", fronthaul)?;
    let both = df_rate_unchecked(2.0 * snr);
    let one = df_rate_unchecked(snr) + fronthaul;
    Ok(both.min(one).min(2.0 * fronthaul))
}
