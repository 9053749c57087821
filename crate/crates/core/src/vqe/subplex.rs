//! Rowan's subplex: Nelder-Mead on a sequence of low-dimensional subspaces
//! chosen from the most recent movement of each coordinate.

use super::nelder_mead::{search, Stop};
use super::{Evaluator, OptimizerConfig};
use crate::error::Result;

/// Simplex reduction factor per subspace search.
const PSI: f64 = 0.25;
/// Bounds on the step rescaling factor.
const OMEGA: f64 = 0.1;
const NS_MIN: usize = 2;
const NS_MAX: usize = 5;

fn partitionable(r: usize) -> bool {
    r == 0 || (r >= NS_MIN && r <= NS_MAX * (r / NS_MIN))
}

/// Coordinates sorted by descending `|step|`, cut into subspaces of size
/// `NS_MIN..=NS_MAX`, each cut maximizing the drop in average magnitude.
pub(crate) fn subspaces(step: &[f64]) -> Vec<Vec<usize>> {
    let n = step.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| step[b].abs().total_cmp(&step[a].abs()));
    if n <= NS_MIN {
        return vec![order];
    }
    let mut out = Vec::new();
    let mut start = 0;
    while start < n {
        let rest = n - start;
        let total: f64 = order[start..].iter().map(|&i| step[i].abs()).sum();
        let mut best: Option<(usize, f64)> = None;
        let mut head = 0.0;
        for k in 1..=NS_MAX.min(rest) {
            head += step[order[start + k - 1]].abs();
            if k < NS_MIN || !partitionable(rest - k) {
                continue;
            }
            let score = if k == rest { head / k as f64 } else { head / k as f64 - (total - head) / (rest - k) as f64 };
            if best.is_none_or(|(_, s)| score > s) {
                best = Some((k, score));
            }
        }
        let k = best.map_or(rest, |(k, _)| k);
        out.push(order[start..start + k].to_vec());
        start += k;
    }
    out
}

pub(crate) fn run(ev: &mut Evaluator, x0: &[f64], cfg: &OptimizerConfig) -> Result<()> {
    let n = x0.len();
    let mut x = x0.to_vec();
    let mut fx = ev.history[0].1;
    let mut step = vec![cfg.initial_step; n];

    while !ev.exhausted() {
        let start = x.clone();
        let parts = subspaces(&step);
        for coords in &parts {
            let steps: Vec<f64> = coords.iter().map(|&i| step[i]).collect();
            let initial: f64 = steps.iter().map(|s| s.abs()).sum::<f64>().max(f64::MIN_POSITIVE);
            let stop = Stop { xtol: cfg.xtol, ftol: cfg.ftol, size: Some(PSI * initial) };
            let out = search(ev, &x, fx, coords, &steps, &stop)?;
            if out.f < fx {
                x = out.x;
                fx = out.f;
            }
            if ev.exhausted() {
                return Ok(());
            }
        }

        let moved: Vec<f64> = x.iter().zip(&start).map(|(a, b)| a - b).collect();
        let scale = if parts.len() > 1 {
            let moved_1: f64 = moved.iter().map(|d| d.abs()).sum();
            let step_1: f64 = step.iter().map(|d| d.abs()).sum();
            (moved_1 / step_1).clamp(OMEGA, 1.0 / OMEGA)
        } else {
            PSI
        };
        for (s, d) in step.iter_mut().zip(&moved) {
            *s = if *d == 0.0 { -*s * scale } else { d.signum() * s.abs() * scale };
        }

        let converged = step.iter().zip(&x).all(|(s, xi)| (s.abs() * PSI) / xi.abs().max(1.0) <= cfg.xtol);
        if converged {
            break;
        }
    }
    Ok(())
}
