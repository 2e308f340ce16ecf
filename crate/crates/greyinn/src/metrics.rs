//! Forecast accuracy metrics: MAPE, MSE, MAE, RMSE.

use crate::series::{Error, Result, TimeSeries};

/// One evaluated point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointError {
    pub actual: f64,
    pub predicted: f64,
    pub abs_error: f64,
}

/// Aggregate report over one actual/predicted pair of series.
///
/// MAPE is reported in percent. `rmse` is the square root of `mse`, and
/// `mae <= rmse` always holds.
#[derive(Debug, Clone)]
pub struct MetricReport {
    pub mape: f64,
    pub mse: f64,
    pub mae: f64,
    pub rmse: f64,
    pub n: usize,
    pub per_point: Vec<PointError>,
}

/// Evaluate predictions against actuals. MAPE requires every actual value to
/// be nonzero; a zero actual is a domain error naming the offending index.
pub fn evaluate(actual: &TimeSeries, predicted: &TimeSeries) -> Result<MetricReport> {
    if actual.len() != predicted.len() {
        return Err(Error::Shape(format!(
            "{} actual values vs {} predictions",
            actual.len(),
            predicted.len()
        )));
    }
    let n = actual.len();
    let mut per_point = Vec::with_capacity(n);
    let (mut ape_sum, mut sq_sum, mut abs_sum) = (0.0, 0.0, 0.0);
    for (idx, (&a, &p)) in actual.values().iter().zip(predicted.values()).enumerate() {
        if a == 0.0 {
            return Err(Error::Domain(format!(
                "MAPE undefined: actual value is zero at index {}",
                idx + 1
            )));
        }
        let err = a - p;
        ape_sum += (err / a).abs();
        sq_sum += err * err;
        abs_sum += err.abs();
        per_point.push(PointError {
            actual: a,
            predicted: p,
            abs_error: err.abs(),
        });
    }
    let nf = n as f64;
    let mse = sq_sum / nf;
    Ok(MetricReport {
        mape: 100.0 * ape_sum / nf,
        mse,
        mae: abs_sum / nf,
        rmse: mse.sqrt(),
        n,
        per_point,
    })
}
