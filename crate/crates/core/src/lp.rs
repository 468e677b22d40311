//! Dense tableau simplex for small packing LPs.
//!
//! Solves `max c.x  s.t.  A x <= b, x >= 0` with `b >= 0`, so the slack
//! basis is feasible and no phase one is needed. Pivoting uses Dantzig's
//! rule with lowest-index tie breaking and falls back to Bland's rule after
//! a run of degenerate pivots, which makes the result a deterministic
//! function of the input.

use crate::error::{Error, Result};

const EPS: f64 = 1e-12;
const DEGENERATE_RUN: usize = 50;

#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub x: Vec<f64>,
    pub objective: f64,
    pub pivots: usize,
}

/// A packing LP in inequality form.
#[derive(Debug, Clone, Default)]
pub struct PackingLp {
    n: usize,
    objective: Vec<f64>,
    rows: Vec<Vec<(usize, f64)>>,
    rhs: Vec<f64>,
}

impl PackingLp {
    pub fn new(objective: Vec<f64>) -> Self {
        Self { n: objective.len(), objective, rows: Vec::new(), rhs: Vec::new() }
    }

    pub fn num_vars(&self) -> usize {
        self.n
    }

    /// Add `sum coef * x[idx] <= rhs`.
    pub fn add_row(&mut self, coefs: Vec<(usize, f64)>, rhs: f64) -> Result<()> {
        if rhs.is_nan() || rhs < 0.0 {
            return Err(Error::InvalidArgument(format!("row bound must be nonnegative, got {rhs}")));
        }
        if let Some(&(i, _)) = coefs.iter().find(|(i, _)| *i >= self.n) {
            return Err(Error::InvalidArgument(format!("variable index {i} out of range")));
        }
        self.rows.push(coefs);
        self.rhs.push(rhs);
        Ok(())
    }

    pub fn solve(&self) -> Result<LpSolution> {
        let m = self.rows.len();
        let n = self.n;
        let width = n + m + 1;
        let mut t = vec![0.0; (m + 1) * width];
        for (r, row) in self.rows.iter().enumerate() {
            for &(j, a) in row {
                t[r * width + j] += a;
            }
            t[r * width + n + r] = 1.0;
            t[r * width + width - 1] = self.rhs[r];
        }
        let obj = m * width;
        for j in 0..n {
            t[obj + j] = -self.objective[j];
        }
        let mut basis: Vec<usize> = (n..n + m).collect();

        let max_pivots = 50 * (n + m) + 100;
        let mut pivots = 0;
        let mut degenerate = 0;
        loop {
            let bland = degenerate >= DEGENERATE_RUN;
            let mut enter = None;
            let mut most = -EPS;
            for j in 0..n + m {
                let d = t[obj + j];
                if d < most {
                    enter = Some(j);
                    if bland {
                        break;
                    }
                    most = d;
                }
            }
            let Some(e) = enter else { break };

            let mut leave: Option<usize> = None;
            let mut best_ratio = f64::INFINITY;
            for r in 0..m {
                let a = t[r * width + e];
                if a > EPS {
                    let ratio = t[r * width + width - 1] / a;
                    let better = match leave {
                        None => true,
                        Some(l) => {
                            ratio < best_ratio - EPS * best_ratio.abs().max(1.0)
                                || (ratio <= best_ratio + EPS * best_ratio.abs().max(1.0) && basis[r] < basis[l])
                        }
                    };
                    if better {
                        leave = Some(r);
                        best_ratio = ratio;
                    }
                }
            }
            let Some(l) = leave else {
                return Err(Error::InvalidArgument("LP is unbounded".into()));
            };
            if best_ratio <= EPS {
                degenerate += 1;
            } else {
                degenerate = 0;
            }

            let pv = t[l * width + e];
            for k in 0..width {
                t[l * width + k] /= pv;
            }
            for r in 0..=m {
                if r == l {
                    continue;
                }
                let f = t[r * width + e];
                if f != 0.0 {
                    for k in 0..width {
                        t[r * width + k] -= f * t[l * width + k];
                    }
                }
            }
            basis[l] = e;
            pivots += 1;
            if pivots > max_pivots {
                return Err(Error::InvalidArgument("simplex iteration limit reached".into()));
            }
        }

        let mut x = vec![0.0; n];
        for (r, &b) in basis.iter().enumerate() {
            if b < n {
                x[b] = t[r * width + width - 1].max(0.0);
            }
        }
        let objective = x.iter().zip(&self.objective).map(|(a, b)| a * b).sum();
        Ok(LpSolution { x, objective, pivots })
    }
}
