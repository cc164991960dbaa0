//! Log-log power-law regression. Scaling claims are checked by fitting
//! `y = A x^p` and testing the exponent against its analytic window, so the
//! fit also reports the slope standard error and the coefficient of
//! determination.

use crate::error::{Error, Result};

/// Least-squares fit of `y = amplitude * x^exponent` in log-log coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLawFit {
    pub exponent: f64,
    pub amplitude: f64,
    /// OLS standard error of the exponent.
    pub stderr: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

/// Fit paired samples. Requires at least three points (two parameters plus
/// one residual degree of freedom) and strictly positive data on both axes.
pub fn fit_powerlaw_xy(xs: &[f64], ys: &[f64]) -> Result<PowerLawFit> {
    if xs.len() != ys.len() {
        return Err(Error::InvalidInput(format!(
            "fit_powerlaw: {} xs vs {} ys",
            xs.len(),
            ys.len()
        )));
    }
    let n = xs.len();
    if n < 3 {
        return Err(Error::InsufficientData(format!(
            "fit_powerlaw: need at least 3 points, got {n}"
        )));
    }
    for (&x, &y) in xs.iter().zip(ys) {
        if !(x > 0.0) || !(y > 0.0) || !x.is_finite() || !y.is_finite() {
            return Err(Error::InvalidInput(format!(
                "fit_powerlaw: nonpositive or nonfinite sample ({x}, {y})"
            )));
        }
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let nf = n as f64;
    let mx = lx.iter().sum::<f64>() / nf;
    let my = ly.iter().sum::<f64>() / nf;
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::InvalidInput(
            "fit_powerlaw: all x values identical".into(),
        ));
    }
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ly.iter().map(|y| (y - my).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ssr = (syy - slope * sxy).max(0.0);
    let stderr = (ssr / (nf - 2.0) / sxx).sqrt();
    let r_squared = if syy == 0.0 { 1.0 } else { 1.0 - ssr / syy };
    Ok(PowerLawFit {
        exponent: slope,
        amplitude: intercept.exp(),
        stderr,
        r_squared,
        n_points: n,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn exact_powerlaw_is_recovered() {
        let xs: Vec<f64> = (1..=8).map(|i| 2f64.powi(i)).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 3.5 * x.powf(1.75)).collect();
        let fit = fit_powerlaw_xy(&xs, &ys).unwrap();
        assert!((fit.exponent - 1.75).abs() < 1e-12);
        assert!((fit.amplitude - 3.5).abs() < 1e-10);
        assert!(fit.stderr < 1e-12);
        assert!((fit.r_squared - 1.0).abs() < 1e-12);
        assert_eq!(fit.n_points, 8);
    }

    #[test]
    fn noisy_samples_land_within_reported_error() {
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let mut hits = 0;
        let trials = 100;
        for _ in 0..trials {
            let xs: Vec<f64> = (0..12).map(|i| 10f64.powf(i as f64 / 4.0)).collect();
            let ys: Vec<f64> = xs
                .iter()
                .map(|x| 2.0 * x.powf(0.6) * (0.02 * rng.gen_range(-1.0..1.0f64)).exp())
                .collect();
            let fit = fit_powerlaw_xy(&xs, &ys).unwrap();
            if (fit.exponent - 0.6).abs() <= 3.0 * fit.stderr {
                hits += 1;
            }
        }
        // slope error is t-distributed with 10 dof here; 3-sigma coverage ~98.7%
        assert!(hits >= trials - 5, "only {hits}/{trials} within 3 sigma");
    }

    #[test]
    fn rejects_degenerate_inputs() {
        assert!(fit_powerlaw_xy(&[1.0, 2.0], &[1.0, 2.0]).is_err());
        assert!(fit_powerlaw_xy(&[1.0, 2.0, 3.0], &[1.0, -2.0, 3.0]).is_err());
        assert!(fit_powerlaw_xy(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0]).is_err());
        assert!(fit_powerlaw_xy(&[1.0, 2.0, 3.0], &[1.0, 2.0]).is_err());
    }
}
