use rand::Rng;
use serde::Serialize;

use crate::linalg::{rng, substream};

/// Coordinates probed per sweep.
pub const COORDINATES_PER_SWEEP: usize = 20;
/// Initial step, relative to the root-mean-square size of the start point.
pub const INITIAL_STEP: f64 = 0.5;

/// One accepted coordinate move.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Move {
    pub coordinate: usize,
    pub delta: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HillClimb {
    pub params: Vec<f64>,
    pub value: f64,
    /// `(sweep, best value)`; entry 0 is the start.
    pub trace: Vec<(usize, f64)>,
    pub moves: Vec<Move>,
}

/// Derivative-free coordinate hill climbing.
///
/// Each sweep probes [`COORDINATES_PER_SWEEP`] coordinates drawn from a
/// seeded stream, trying `+step` then `-step` (in units of the start
/// point's root-mean-square entry) and keeping the first strict improvement.
/// The step halves after a sweep without improvement. Objectives returning
/// `None` (e.g. a witness leaving the domain) reject the move.
pub fn hill_climb<F>(start: Vec<f64>, objective: F, sweeps: usize, seed: u64) -> HillClimb
where
    F: Fn(&[f64]) -> Option<f64>,
{
    let mut params = start;
    let mut value = objective(&params).unwrap_or(0.0);
    let mut trace = vec![(0, value)];
    let mut moves = Vec::new();
    if params.is_empty() {
        trace.extend((1..=sweeps).map(|s| (s, value)));
        return HillClimb { params, value, trace, moves };
    }
    let rms = (params.iter().map(|x| x * x).sum::<f64>() / params.len() as f64).sqrt();
    let unit = if rms > 0.0 { rms } else { 1.0 };
    let mut step = INITIAL_STEP;
    let mut stream = rng(substream(seed, &[0x5ea7c4]));

    for sweep in 1..=sweeps {
        let mut improved = false;
        for _ in 0..COORDINATES_PER_SWEEP {
            let c = stream.random_range(0..params.len());
            for sign in [1.0, -1.0] {
                let delta = sign * step * unit;
                let old = params[c];
                params[c] = old + delta;
                match objective(&params) {
                    Some(v) if v > value => {
                        value = v;
                        moves.push(Move { coordinate: c, delta });
                        improved = true;
                        break;
                    }
                    _ => params[c] = old,
                }
            }
        }
        if !improved {
            step *= 0.5;
        }
        trace.push((sweep, value));
    }
    HillClimb { params, value, trace, moves }
}

/// Replays recorded moves on a start point.
pub fn replay(start: &[f64], moves: &[Move]) -> Vec<f64> {
    let mut p = start.to_vec();
    for m in moves {
        p[m.coordinate] += m.delta;
    }
    p
}
