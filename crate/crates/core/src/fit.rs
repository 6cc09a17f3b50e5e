use crate::error::{Error, Result};

/// Least-squares slope of `log errs` against `log ts`.
pub fn fit_order(ts: &[f64], errs: &[f64]) -> Result<f64> {
    if ts.len() != errs.len() {
        return Err(Error::DegenerateFit(format!("{} times but {} errors", ts.len(), errs.len())));
    }
    if ts.len() < 3 {
        return Err(Error::DegenerateFit(format!("need at least 3 points, got {}", ts.len())));
    }
    if ts.iter().chain(errs).any(|v| !(v.is_finite() && *v > 0.0)) {
        return Err(Error::DegenerateFit("times and errors must be positive".into()));
    }
    let xs: Vec<f64> = ts.iter().map(|t| t.ln()).collect();
    let ys: Vec<f64> = errs.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::DegenerateFit("times are not distinct".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    Ok(sxy / sxx)
}
