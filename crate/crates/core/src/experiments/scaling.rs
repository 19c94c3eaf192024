use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use super::runner::ResultRow;
use super::ExperimentError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Model {
    #[serde(rename = "n")]
    Linear,
    #[serde(rename = "n*log^2")]
    NLog2,
    #[serde(rename = "n^2")]
    Quadratic,
    #[serde(rename = "n^3")]
    Cubic,
}

impl Model {
    pub const ALL: [Model; 4] = [Model::Linear, Model::NLog2, Model::Quadratic, Model::Cubic];

    pub fn name(self) -> &'static str {
        match self {
            Model::Linear => "n",
            Model::NLog2 => "n*log^2",
            Model::Quadratic => "n^2",
            Model::Cubic => "n^3",
        }
    }

    pub fn eval(self, n: f64) -> f64 {
        match self {
            Model::Linear => n,
            Model::NLog2 => n * n.ln().powi(2),
            Model::Quadratic => n * n,
            Model::Cubic => n * n * n,
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Model {
    type Err = ExperimentError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Model::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| ExperimentError::Spec(format!("unknown model '{s}' (expected n, n*log^2, n^2 or n^3)")))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FitPoint {
    pub n: f64,
    pub messages: f64,
    pub fitted: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Fit {
    pub model: Model,
    /// Free slope of `log messages` against `log n`.
    pub exponent: f64,
    /// Least-squares `a` in `messages ≈ a·model(n)` on log scale.
    pub coefficient: f64,
    /// Root mean square of the log residuals of the model fit.
    pub log_rmse: f64,
    pub points: Vec<FitPoint>,
}

/// Fits `(n, messages)` points; needs at least three distinct `n`.
pub fn fit(points: &[(f64, f64)], model: Model) -> Result<Fit, ExperimentError> {
    let mut by_n: BTreeMap<u64, Vec<f64>> = BTreeMap::new();
    for &(n, msgs) in points {
        if n <= 0.0 || msgs <= 0.0 {
            return Err(ExperimentError::Spec(format!("cannot fit non-positive point ({n}, {msgs})")));
        }
        by_n.entry(n.to_bits()).or_default().push(msgs);
    }
    if by_n.len() < 3 {
        return Err(ExperimentError::Spec(format!("scaling fit needs at least 3 scale points, got {}", by_n.len())));
    }
    let mean: Vec<(f64, f64)> =
        by_n.iter().map(|(n, v)| (f64::from_bits(*n), v.iter().sum::<f64>() / v.len() as f64)).collect();
    let xs: Vec<f64> = mean.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = mean.iter().map(|p| p.1.ln()).collect();
    let k = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / k, ys.iter().sum::<f64>() / k);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let exponent = sxy / sxx;
    let shifts: Vec<f64> = mean.iter().map(|&(n, m)| m.ln() - model.eval(n).ln()).collect();
    let log_a = shifts.iter().sum::<f64>() / k;
    let log_rmse = (shifts.iter().map(|s| (s - log_a).powi(2)).sum::<f64>() / k).sqrt();
    let coefficient = log_a.exp();
    let points =
        mean.iter().map(|&(n, messages)| FitPoint { n, messages, fitted: coefficient * model.eval(n) }).collect();
    Ok(Fit { model, exponent, coefficient, log_rmse, points })
}

/// Fits the rows of a result CSV; failed rows are left out.
pub fn fit_rows(rows: &[ResultRow], model: Model) -> Result<Fit, ExperimentError> {
    let pts: Vec<(f64, f64)> = rows.iter().filter(|r| !r.failed).map(|r| (r.n as f64, r.messages as f64)).collect();
    fit(&pts, model)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn recovers_exponents() {
        for e in [1.0, 2.0, 3.0] {
            let pts: Vec<(f64, f64)> = [16.0, 32.0, 64.0, 128.0].iter().map(|&n: &f64| (n, 5.0 * n.powf(e))).collect();
            let f = fit(&pts, Model::Quadratic).unwrap();
            assert!((f.exponent - e).abs() < 1e-9);
        }
        let pts: Vec<(f64, f64)> = [16.0, 64.0, 256.0].iter().map(|&n| (n, 3.0 * Model::NLog2.eval(n))).collect();
        let f = fit(&pts, Model::NLog2).unwrap();
        assert!((f.coefficient - 3.0).abs() < 1e-9 && f.log_rmse < 1e-9);
        assert!((f.points[1].fitted - pts[1].1).abs() < 1e-6);
    }

    #[test]
    fn averages_repeated_scales() {
        let pts = [(10.0, 10.0), (10.0, 30.0), (20.0, 40.0), (40.0, 80.0)];
        let f = fit(&pts, Model::Linear).unwrap();
        assert_eq!(f.points[0].messages, 20.0);
    }

    #[test]
    fn too_few_points() {
        assert!(fit(&[(10.0, 5.0)], Model::Linear).unwrap_err().to_string().contains("at least 3"));
        assert!(fit(&[(10.0, 5.0), (10.0, 6.0), (20.0, 9.0)], Model::Linear).is_err());
        assert!("n^4".parse::<Model>().is_err());
        assert_eq!("n*log^2".parse::<Model>().unwrap(), Model::NLog2);
    }
}
