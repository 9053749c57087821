use super::{Evaluator, OptimizerConfig};
use crate::error::Result;

const ALPHA: f64 = 1.0;
const GAMMA: f64 = 2.0;
const RHO: f64 = 0.5;
const SIGMA: f64 = 0.5;

/// When to leave the simplex loop, besides an exhausted budget.
pub(crate) struct Stop {
    pub xtol: f64,
    pub ftol: f64,
    /// Also stop once the simplex size falls to this value.
    pub size: Option<f64>,
}

/// Result of a subspace search: the best point (full coordinates) and value.
pub(crate) struct Outcome {
    pub x: Vec<f64>,
    pub f: f64,
}

fn size(simplex: &[Vec<f64>]) -> f64 {
    let best = &simplex[0];
    simplex[1..].iter().map(|v| v.iter().zip(best).map(|(a, b)| (a - b).abs()).sum::<f64>()).fold(0.0, f64::max)
}

fn diameter(simplex: &[Vec<f64>]) -> f64 {
    let best = &simplex[0];
    simplex[1..].iter().flat_map(|v| v.iter().zip(best).map(|(a, b)| (a - b).abs())).fold(0.0, f64::max)
}

/// Nelder-Mead over the coordinates `coords` of `base`, starting from a simplex
/// with axis offsets `steps`. Other coordinates stay fixed.
pub(crate) fn search(
    ev: &mut Evaluator,
    base: &[f64],
    f_base: f64,
    coords: &[usize],
    steps: &[f64],
    stop: &Stop,
) -> Result<Outcome> {
    let n = coords.len();
    let mut full = base.to_vec();
    let mut eval = |ev: &mut Evaluator, y: &[f64]| -> Result<Option<f64>> {
        for (&c, &v) in coords.iter().zip(y) {
            full[c] = v;
        }
        ev.eval(&full)
    };

    let y0: Vec<f64> = coords.iter().map(|&c| base[c]).collect();
    let mut simplex = vec![y0.clone()];
    let mut values = vec![f_base];
    for k in 0..n {
        let mut y = y0.clone();
        y[k] += steps[k];
        let Some(v) = eval(ev, &y)? else { break };
        simplex.push(y);
        values.push(v);
    }

    let finish = |simplex: &[Vec<f64>], values: &[f64]| {
        let (k, &f) = values.iter().enumerate().min_by(|a, b| a.1.total_cmp(b.1)).expect("non-empty");
        let mut x = base.to_vec();
        for (&c, &v) in coords.iter().zip(&simplex[k]) {
            x[c] = v;
        }
        Outcome { x, f }
    };
    if simplex.len() < n + 1 {
        return Ok(finish(&simplex, &values));
    }

    let mut order: Vec<usize> = (0..=n).collect();
    loop {
        // stable sort keeps ties in insertion order, so runs are reproducible
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&k| simplex[k].clone()).collect();
        values = order.iter().map(|&k| values[k]).collect();
        order = (0..=n).collect();

        let spread = values[n] - values[0];
        if diameter(&simplex) < stop.xtol && spread < stop.ftol {
            break;
        }
        if stop.size.is_some_and(|s| size(&simplex) <= s) {
            break;
        }

        let mut centroid = vec![0.0; n];
        for v in &simplex[..n] {
            for (c, x) in centroid.iter_mut().zip(v) {
                *c += x / n as f64;
            }
        }
        let toward = |t: f64| -> Vec<f64> { centroid.iter().zip(&simplex[n]).map(|(c, w)| c + t * (w - c)).collect() };

        let xr = toward(-ALPHA);
        let Some(fr) = eval(ev, &xr)? else { break };
        if fr < values[0] {
            let xe = toward(-ALPHA * GAMMA);
            let Some(fe) = eval(ev, &xe)? else {
                (simplex[n], values[n]) = (xr, fr);
                break;
            };
            if fe < fr {
                (simplex[n], values[n]) = (xe, fe);
            } else {
                (simplex[n], values[n]) = (xr, fr);
            }
            continue;
        }
        if fr < values[n - 1] {
            (simplex[n], values[n]) = (xr, fr);
            continue;
        }
        let (xc, outside) = if fr < values[n] { (toward(-ALPHA * RHO), true) } else { (toward(RHO), false) };
        let Some(fc) = eval(ev, &xc)? else { break };
        if (outside && fc <= fr) || (!outside && fc < values[n]) {
            (simplex[n], values[n]) = (xc, fc);
            continue;
        }
        for k in 1..=n {
            let shrunk: Vec<f64> = simplex[0].iter().zip(&simplex[k]).map(|(b, v)| b + SIGMA * (v - b)).collect();
            let Some(v) = eval(ev, &shrunk)? else {
                return Ok(finish(&simplex, &values));
            };
            simplex[k] = shrunk;
            values[k] = v;
        }
    }
    Ok(finish(&simplex, &values))
}

pub(crate) fn run(ev: &mut Evaluator, x0: &[f64], cfg: &OptimizerConfig) -> Result<()> {
    let coords: Vec<usize> = (0..x0.len()).collect();
    let steps = vec![cfg.initial_step; x0.len()];
    let f0 = ev.history[0].1;
    search(ev, x0, f0, &coords, &steps, &Stop { xtol: cfg.xtol, ftol: cfg.ftol, size: None })?;
    Ok(())
}
