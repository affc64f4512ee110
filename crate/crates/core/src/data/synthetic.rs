use std::f64::consts::PI;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use super::{DataError, Dataset};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SyntheticKind {
    /// Two Gaussian blobs centred at (-1, -1) and (1, 1), stdev `noise + 0.5`.
    LinSep,
    /// Outer circle of radius 1.0 (class 0) around an inner circle of radius 0.5 (class 1).
    Circles,
    /// Two interleaving half circles.
    Moons,
}

impl SyntheticKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SyntheticKind::LinSep => "linsep",
            SyntheticKind::Circles => "circles",
            SyntheticKind::Moons => "moons",
        }
    }
}

impl FromStr for SyntheticKind {
    type Err = DataError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "linsep" => Ok(SyntheticKind::LinSep),
            "circles" => Ok(SyntheticKind::Circles),
            "moons" => Ok(SyntheticKind::Moons),
            other => Err(DataError::InvalidKind(other.to_string())),
        }
    }
}

fn spaced(k: usize, m: usize, span: f64, closed: bool) -> f64 {
    let denom = if closed { m.saturating_sub(1).max(1) } else { m.max(1) };
    span * k as f64 / denom as f64
}

/// Class 0 gets ⌈n/2⌉ points and class 1 ⌊n/2⌋; rows are shuffled under `seed`.
pub fn gen_synthetic(kind: SyntheticKind, n: usize, noise: f64, seed: u64) -> Result<Dataset, DataError> {
    if n < 4 {
        return Err(DataError::InvalidArgument(format!("need n >= 4, got {n}")));
    }
    if !(noise >= 0.0 && noise.is_finite()) {
        return Err(DataError::InvalidArgument(format!("noise must be >= 0, got {noise}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gauss = move || -> f64 { StandardNormal.sample(&mut rng) };
    let n0 = n.div_ceil(2);
    let n1 = n / 2;
    let mut points: Vec<(f64, f64, u8)> = Vec::with_capacity(n);

    match kind {
        SyntheticKind::LinSep => {
            let sd = noise + 0.5;
            for (label, count, centre) in [(0u8, n0, -1.0), (1, n1, 1.0)] {
                for _ in 0..count {
                    points.push((centre + sd * gauss(), centre + sd * gauss(), label));
                }
            }
        }
        SyntheticKind::Circles => {
            for (label, count, radius) in [(0u8, n0, 1.0), (1, n1, 0.5)] {
                for k in 0..count {
                    let t = spaced(k, count, 2.0 * PI, false);
                    let r = radius + noise * gauss();
                    points.push((r * t.cos(), r * t.sin(), label));
                }
            }
        }
        SyntheticKind::Moons => {
            for k in 0..n0 {
                let t = spaced(k, n0, PI, true);
                points.push((t.cos(), t.sin(), 0));
            }
            for k in 0..n1 {
                let t = spaced(k, n1, PI, true);
                points.push((1.0 - t.cos(), 0.5 - t.sin(), 1));
            }
            for p in &mut points {
                p.0 += noise * gauss();
                p.1 += noise * gauss();
            }
        }
    }

    let mut order_rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed_5eed_5eed_5eed);
    points.shuffle(&mut order_rng);
    let rows = points.iter().map(|p| vec![p.0, p.1]).collect();
    let labels = points.iter().map(|p| p.2).collect();
    Dataset::new(kind.as_str(), vec!["x0".into(), "x1".into()], rows, labels)
}
