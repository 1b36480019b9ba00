use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Least-squares line through `(ln T, ln metric)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    /// RMS of the log residuals.
    pub residual: f64,
}

pub fn scaling_fit(points: &[(f64, f64)]) -> Result<ScalingFit> {
    if points.len() < 3 {
        return Err(Error::param(format!(
            "scaling fit needs at least 3 points, got {}",
            points.len()
        )));
    }
    if let Some((t, m)) = points.iter().find(|(t, m)| !(*t > 0.0 && *m > 0.0 && t.is_finite() && m.is_finite())) {
        return Err(Error::param(format!("non-positive point ({t}, {m})")));
    }
    let logs: Vec<(f64, f64)> = points.iter().map(|(t, m)| (t.ln(), m.ln())).collect();
    let k = logs.len() as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / k;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = logs.iter().map(|p| (p.0 - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::param("scaling fit needs at least two distinct T values"));
    }
    let sxy: f64 = logs.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let residual = (logs
        .iter()
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum::<f64>()
        / k)
        .sqrt();
    Ok(ScalingFit {
        slope,
        intercept,
        residual,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::RngSeed;
    use rand::Rng;

    fn grid() -> Vec<f64> {
        (10..=16).map(|e| 2f64.powi(e)).collect()
    }

    #[test]
    fn square_root() {
        let pts: Vec<_> = grid().into_iter().map(|t| (t, t.sqrt())).collect();
        let fit = scaling_fit(&pts).unwrap();
        assert!((fit.slope - 0.5).abs() < 1e-9);
        assert!(fit.intercept.abs() < 1e-9);
        assert!(fit.residual < 1e-9);
    }

    #[test]
    fn constant() {
        let pts: Vec<_> = grid().into_iter().map(|t| (t, 7.0)).collect();
        let fit = scaling_fit(&pts).unwrap();
        assert!(fit.slope.abs() < 1e-12);
        assert!((fit.intercept - 7f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn noisy_power_law() {
        let mut rng = RngSeed::new(45, 0).rng();
        let pts: Vec<_> = grid()
            .into_iter()
            .map(|t| (t, t.powf(0.45) * (1.0 + rng.random_range(-0.01..0.01))))
            .collect();
        let fit = scaling_fit(&pts).unwrap();
        assert!((0.43..=0.47).contains(&fit.slope), "{fit:?}");
    }

    #[test]
    fn rejects_bad_input() {
        assert!(scaling_fit(&[(1.0, 1.0), (2.0, 2.0)]).is_err());
        assert!(scaling_fit(&[(1.0, 1.0), (2.0, 0.0), (3.0, 1.0)]).is_err());
        assert!(scaling_fit(&[(-1.0, 1.0), (2.0, 1.0), (3.0, 1.0)]).is_err());
        assert!(scaling_fit(&[(2.0, 1.0), (2.0, 3.0), (2.0, 1.0)]).is_err());
    }
}
