//! Sample statistics.

/// Mean and sample standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub count: usize,
    pub mean: f64,
    /// With `count - 1` in the denominator; 0 for a single sample.
    pub stddev: f64,
}

impl Summary {
    pub fn of(xs: &[f64]) -> Self {
        let count = xs.len();
        if count == 0 {
            return Summary {
                count,
                mean: f64::NAN,
                stddev: f64::NAN,
            };
        }
        let mean = xs.iter().sum::<f64>() / count as f64;
        let stddev = if count > 1 {
            let ss: f64 = xs.iter().map(|x| (x - mean) * (x - mean)).sum();
            (ss / (count - 1) as f64).sqrt()
        } else {
            0.0
        };
        Summary {
            count,
            mean,
            stddev,
        }
    }

    /// Standard error of the mean.
    pub fn sem(&self) -> f64 {
        self.stddev / (self.count as f64).sqrt()
    }
}

/// `|x - theory| / |theory|`, `None` when `theory == 0`.
pub fn rel_dev(x: f64, theory: f64) -> Option<f64> {
    (theory != 0.0).then(|| (x - theory).abs() / theory.abs())
}
