use std::f64::consts::PI;

use crate::error::{domain, Result};

const PI2_6: f64 = PI * PI / 6.0;

fn series(x: f64) -> f64 {
    // |x| ≤ 1/2: terms fall like 2^{-n}/n², 60 terms is past f64 precision.
    let mut sum = 0.0;
    let mut p = x;
    for n in 1..=60 {
        let k = n as f64;
        sum += p / (k * k);
        p *= x;
        if p.abs() < 1e-18 * k * k {
            break;
        }
    }
    sum
}

/// Real dilogarithm `Li₂(x) = Σ xⁿ/n²` on `[−1, 1]`.
pub fn dilog(x: f64) -> Result<f64> {
    if !(-1.0..=1.0).contains(&x) {
        return Err(domain("dilog", x));
    }
    Ok(if x == 1.0 {
        PI2_6
    } else if x > 0.5 {
        PI2_6 - x.ln() * (-x).ln_1p() - series(1.0 - x)
    } else if x >= -0.5 {
        series(x)
    } else {
        // Landen: x/(x−1) lands in [1/3, 1/2].
        let l = (-x).ln_1p();
        -series(x / (x - 1.0)) - 0.5 * l * l
    })
}

/// `Li₂(x) − Li₂(−x)`, twice the Legendre chi function.
pub fn dilog_odd(x: f64) -> Result<f64> {
    Ok(dilog(x)? - dilog(-x)?)
}
