//! Decision-boundary grids for two-feature models.

use std::fmt::Write as _;

use sgp_core::genetics::DECISION_THRESHOLD;
use sgp_core::{Dataset, ExprTree};

use crate::CliError;

/// `(x_range, y_range)`.
pub type GridBounds = ((f64, f64), (f64, f64));

/// Open interval counted as "not strictly 0 or 1".
pub const BORDER_BAND: (f64, f64) = (0.01, 0.99);

/// Model activations on a `resolution × resolution` lattice.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundaryGrid {
    pub resolution: usize,
    pub x_range: (f64, f64),
    pub y_range: (f64, f64),
    /// Row-major with `x` varying fastest.
    pub activations: Vec<f64>,
}

impl BoundaryGrid {
    pub fn compute(
        model: &ExprTree,
        n_features: usize,
        resolution: usize,
        x_range: (f64, f64),
        y_range: (f64, f64),
    ) -> Result<Self, CliError> {
        if n_features != 2 {
            return Err(CliError::Usage(format!(
                "boundary grids need a 2-feature model, this one has {n_features}"
            )));
        }
        if resolution < 2 {
            return Err(CliError::Usage("grid resolution must be at least 2".into()));
        }
        for (lo, hi) in [x_range, y_range] {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(CliError::Usage(format!("bad grid bounds [{lo}, {hi}]")));
            }
        }
        let xs = linspace(x_range, resolution);
        let ys = linspace(y_range, resolution);
        let mut col_x = Vec::with_capacity(resolution * resolution);
        let mut col_y = Vec::with_capacity(resolution * resolution);
        for &y in &ys {
            for &x in &xs {
                col_x.push(x);
                col_y.push(y);
            }
        }
        let activations = model.eval_columns(&[col_x, col_y], resolution * resolution);
        Ok(BoundaryGrid {
            resolution,
            x_range,
            y_range,
            activations,
        })
    }

    pub fn point(&self, k: usize) -> (f64, f64) {
        let (i, j) = (k % self.resolution, k / self.resolution);
        (
            lerp(self.x_range, i, self.resolution),
            lerp(self.y_range, j, self.resolution),
        )
    }

    /// Fraction of activations strictly inside [`BORDER_BAND`].
    pub fn strict_border_fraction(&self) -> f64 {
        let (lo, hi) = BORDER_BAND;
        let inside = self.activations.iter().filter(|&&a| a > lo && a < hi).count();
        inside as f64 / self.activations.len() as f64
    }

    /// CSV with columns `x,y,activation,label`.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("x,y,activation,label\n");
        for (k, &a) in self.activations.iter().enumerate() {
            let (x, y) = self.point(k);
            let _ = writeln!(s, "{x},{y},{a},{}", u8::from(a >= DECISION_THRESHOLD));
        }
        s
    }
}

fn lerp((lo, hi): (f64, f64), i: usize, n: usize) -> f64 {
    if i + 1 == n {
        hi
    } else {
        lo + (hi - lo) * i as f64 / (n - 1) as f64
    }
}

fn linspace(range: (f64, f64), n: usize) -> Vec<f64> {
    (0..n).map(|i| lerp(range, i, n)).collect()
}

/// Per-feature bounds of a 2-feature dataset, padded by 10% on each side.
pub fn bounds_from_data(ds: &Dataset) -> Result<GridBounds, CliError> {
    if ds.n_features() != 2 {
        return Err(CliError::Usage(format!(
            "boundary data must have 2 features, found {}",
            ds.n_features()
        )));
    }
    let mut r = [(f64::INFINITY, f64::NEG_INFINITY); 2];
    for row in ds.rows() {
        for (b, &v) in r.iter_mut().zip(row) {
            b.0 = b.0.min(v);
            b.1 = b.1.max(v);
        }
    }
    let pad = |(lo, hi): (f64, f64)| {
        let p = if hi > lo { 0.1 * (hi - lo) } else { 1.0 };
        (lo - p, hi + p)
    };
    Ok((pad(r[0]), pad(r[1])))
}

/// Parses `xmin,xmax,ymin,ymax`.
pub fn parse_bounds(text: &str) -> Result<GridBounds, CliError> {
    let vals: Result<Vec<f64>, _> = text.split(',').map(|v| v.trim().parse::<f64>()).collect();
    match vals.as_deref() {
        Ok([a, b, c, d]) => Ok(((*a, *b), (*c, *d))),
        _ => Err(CliError::Usage(format!("expected xmin,xmax,ymin,ymax, got `{text}`"))),
    }
}
