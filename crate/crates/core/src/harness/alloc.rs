//! Weighted-sum power allocation across subcarriers.
//!
//! Maximizes
//! `sum_k alpha log2(1 + p_k g_c[k] / s2) + (1 - alpha) log2(1 + p_k g_s[k] / s2)`
//! subject to `sum_k p_k = P`, `p_k >= 0`. Both terms are log-rate
//! surrogates for the communication rate and the sensing information; the
//! objective is concave, so the KKT point found by bisection on the dual
//! variable is the global optimum.

use std::f64::consts::LN_2;

use crate::error::{config, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct AllocationProblem {
    pub gains_comm: Vec<f64>,
    pub gains_sense: Vec<f64>,
    pub noise_variance: f64,
    pub total_power: f64,
    /// Weight on the communication term, in `[0, 1]`.
    pub weight: f64,
}

impl AllocationProblem {
    pub fn validate(&self) -> Result<()> {
        let mut errs = Vec::new();
        if self.gains_comm.is_empty() {
            errs.push("at least one subcarrier is required".to_string());
        }
        if self.gains_comm.len() != self.gains_sense.len() {
            errs.push(format!(
                "gains_comm has {} entries but gains_sense has {}",
                self.gains_comm.len(),
                self.gains_sense.len()
            ));
        }
        if self
            .gains_comm
            .iter()
            .chain(&self.gains_sense)
            .any(|g| !(*g >= 0.0 && g.is_finite()))
        {
            errs.push("gains must be finite and >= 0".to_string());
        }
        if !(self.noise_variance > 0.0 && self.noise_variance.is_finite()) {
            errs.push(format!(
                "noise_variance must be > 0, got {}",
                self.noise_variance
            ));
        }
        if !(self.total_power > 0.0 && self.total_power.is_finite()) {
            errs.push(format!("total_power must be > 0, got {}", self.total_power));
        }
        if !(0.0..=1.0).contains(&self.weight) {
            errs.push(format!("weight_alpha must be in [0, 1], got {}", self.weight));
        }
        if errs.is_empty()
            && self
                .gains_comm
                .iter()
                .chain(&self.gains_sense)
                .all(|&g| g == 0.0)
        {
            errs.push("all gains are zero".to_string());
        }
        if errs.is_empty() {
            Ok(())
        } else {
            config(errs.join("; "))
        }
    }

    pub fn len(&self) -> usize {
        self.gains_comm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gains_comm.is_empty()
    }

    fn snrs(&self, k: usize) -> (f64, f64) {
        (
            self.gains_comm[k] / self.noise_variance,
            self.gains_sense[k] / self.noise_variance,
        )
    }

    /// d(objective)/d(p_k) at power `p`.
    pub fn marginal_utility(&self, k: usize, p: f64) -> f64 {
        let (a, b) = self.snrs(k);
        let w = self.weight;
        (w * a / (1.0 + p * a) + (1.0 - w) * b / (1.0 + p * b)) / LN_2
    }

    pub fn objective(&self, powers: &[f64]) -> f64 {
        powers
            .iter()
            .enumerate()
            .map(|(k, &p)| {
                let (a, b) = self.snrs(k);
                self.weight * (p * a).ln_1p() / LN_2
                    + (1.0 - self.weight) * (p * b).ln_1p() / LN_2
            })
            .sum()
    }

    /// Power on subcarrier `k` whose marginal utility equals `level`
    /// (zero if even the first unit of power is worth less).
    fn power_at_level(&self, k: usize, level: f64) -> f64 {
        if self.marginal_utility(k, 0.0) <= level {
            return 0.0;
        }
        let (a, b) = self.snrs(k);
        let w = self.weight;
        let l = level * LN_2;
        // l (1 + pa)(1 + pb) = w a (1 + pb) + (1 - w) b (1 + pa)
        let qa = l * a * b;
        let qb = l * (a + b) - a * b;
        let qc = l - w * a - (1.0 - w) * b;
        let p = if qa == 0.0 {
            -qc / qb
        } else {
            let disc = (qb * qb - 4.0 * qa * qc).max(0.0).sqrt();
            if qb > 0.0 {
                -2.0 * qc / (qb + disc)
            } else {
                (disc - qb) / (2.0 * qa)
            }
        };
        p.max(0.0)
    }

    fn total_at_level(&self, level: f64) -> f64 {
        (0..self.len()).map(|k| self.power_at_level(k, level)).sum()
    }

    /// Largest relative spread of marginal utilities over active
    /// subcarriers, or the largest relative excess of an idle subcarrier's
    /// marginal utility over the active level. Zero at an exact KKT point.
    pub fn kkt_violation(&self, powers: &[f64]) -> f64 {
        let active: Vec<f64> = powers
            .iter()
            .enumerate()
            .filter(|(_, &p)| p > 0.0)
            .map(|(k, &p)| self.marginal_utility(k, p))
            .collect();
        if active.is_empty() {
            return f64::INFINITY;
        }
        let level = active.iter().sum::<f64>() / active.len() as f64;
        let spread = active
            .iter()
            .map(|m| (m - level).abs() / level)
            .fold(0.0, f64::max);
        let idle = powers
            .iter()
            .enumerate()
            .filter(|(_, &p)| p == 0.0)
            .map(|(k, _)| ((self.marginal_utility(k, 0.0) - level) / level).max(0.0))
            .fold(0.0, f64::max);
        spread.max(idle)
    }
}

pub fn allocate_power(problem: &AllocationProblem) -> Result<Vec<f64>> {
    problem.validate()?;
    let n = problem.len();
    let p_total = problem.total_power;
    let top = (0..n)
        .map(|k| problem.marginal_utility(k, 0.0))
        .fold(0.0, f64::max);
    if top == 0.0 {
        // Every subcarrier with a positive gain carries zero weight.
        return Ok(vec![p_total / n as f64; n]);
    }
    // total_at_level is decreasing in the level and 0 at `top`.
    let mut hi = top;
    let mut lo = top / 2.0;
    while problem.total_at_level(lo) < p_total {
        hi = lo;
        lo /= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if problem.total_at_level(mid) >= p_total {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut powers: Vec<f64> = (0..n).map(|k| problem.power_at_level(k, lo)).collect();
    // Remove the last few ulps of bisection error from the budget.
    let sum: f64 = powers.iter().sum();
    let scale = p_total / sum;
    for p in &mut powers {
        *p *= scale;
    }
    Ok(powers)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn problem(gc: &[f64], gs: &[f64], weight: f64) -> AllocationProblem {
        AllocationProblem {
            gains_comm: gc.to_vec(),
            gains_sense: gs.to_vec(),
            noise_variance: 1.0,
            total_power: 1.0,
            weight,
        }
    }

    #[test]
    fn equal_gains_split_evenly() {
        let p = problem(&[2.0; 8], &[0.0; 8], 1.0);
        let x = allocate_power(&p).unwrap();
        for v in x {
            assert!((v - 0.125).abs() < 1e-12);
        }
    }

    #[test]
    fn two_carrier_water_filling() {
        let p = problem(&[1.0, 4.0], &[0.0, 0.0], 1.0);
        let x = allocate_power(&p).unwrap();
        assert!((x[0] - 0.125).abs() < 1e-9);
        assert!((x[1] - 0.875).abs() < 1e-9);
    }

    #[test]
    fn weak_carrier_stays_dark() {
        let p = problem(&[0.1, 10.0], &[0.0, 0.0], 1.0);
        let x = allocate_power(&p).unwrap();
        assert_eq!(x[0], 0.0);
        assert!((x[1] - 1.0).abs() < 1e-12);
        assert!(p.kkt_violation(&x) < 1e-9);
    }

    #[test]
    fn invalid_problems() {
        assert!(allocate_power(&problem(&[0.0, 0.0], &[0.0, 0.0], 0.5)).is_err());
        assert!(allocate_power(&problem(&[1.0], &[1.0, 2.0], 0.5)).is_err());
        assert!(allocate_power(&problem(&[1.0], &[1.0], 1.5)).is_err());
        assert!(allocate_power(&problem(&[], &[], 0.5)).is_err());
        assert!(allocate_power(&problem(&[-1.0], &[1.0], 0.5)).is_err());
    }

    #[test]
    fn zero_weighted_gains_fall_back_to_uniform() {
        let p = problem(&[0.0, 0.0], &[1.0, 3.0], 1.0);
        assert_eq!(allocate_power(&p).unwrap(), vec![0.5, 0.5]);
    }

    proptest! {
        #[test]
        fn kkt_and_budget_hold(
            gains in proptest::collection::vec((0.0f64..20.0, 0.0f64..20.0), 1..24),
            weight in 0.0f64..=1.0,
            total in 0.01f64..50.0,
            noise in 0.01f64..10.0,
        ) {
            prop_assume!(gains.iter().any(|(a, b)| *a > 1e-3 && *b > 1e-3));
            let p = AllocationProblem {
                gains_comm: gains.iter().map(|g| g.0).collect(),
                gains_sense: gains.iter().map(|g| g.1).collect(),
                noise_variance: noise,
                total_power: total,
                weight,
            };
            let x = allocate_power(&p).unwrap();
            let sum: f64 = x.iter().sum();
            prop_assert!((sum - total).abs() <= 1e-6 * total);
            prop_assert!(x.iter().all(|&v| v >= 0.0));
            prop_assert!(p.kkt_violation(&x) < 1e-6);
            let uniform = vec![total / x.len() as f64; x.len()];
            prop_assert!(p.objective(&x) >= p.objective(&uniform) - 1e-9);
        }
    }
}
