//! Accuracy aggregation and the two-tailed paired t-test used to compare
//! classifiers trained on identical splits.
//!
//! The t CDF is evaluated through the regularized incomplete beta
//! function (Lentz-style continued fraction), so significance needs no
//! critical-value tables and is testable against published ones.

use crate::error::{Error, Result};

/// Outcome of a paired t-test at level `alpha`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct SignificanceResult {
    pub t: f64,
    pub df: usize,
    pub p: f64,
    pub significant: bool,
}

/// Arithmetic mean and sample standard deviation (n-1 denominator).
/// The sd is `None` for a single observation.
pub fn mean_and_interval(xs: &[f64]) -> Result<(f64, Option<f64>)> {
    if xs.is_empty() {
        return Err(Error::TooFewSamples { needed: 1, got: 0 });
    }
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return Ok((mean, None));
    }
    let ss = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>();
    Ok((mean, Some((ss / (n - 1.0)).sqrt())))
}

/// Two-tailed paired t-test on per-trial differences `a_i - b_i`.
///
/// Degenerate spreads get sentinels rather than NaN: identical paired
/// values give t=0, p=1; constant nonzero differences give t=±inf, p=0.
pub fn paired_t_test(a: &[f64], b: &[f64], alpha: f64) -> Result<SignificanceResult> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    if a.len() < 2 {
        return Err(Error::TooFewSamples {
            needed: 2,
            got: a.len(),
        });
    }
    let d: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let (mean, sd) = mean_and_interval(&d)?;
    let sd = sd.expect("n >= 2");
    let n = d.len() as f64;
    let df = d.len() - 1;

    let (t, p) = if sd == 0.0 {
        if mean == 0.0 {
            (0.0, 1.0)
        } else {
            (mean.signum() * f64::INFINITY, 0.0)
        }
    } else {
        let t = mean * n.sqrt() / sd;
        (t, two_tailed_p(t, df))
    };

    Ok(SignificanceResult {
        t,
        df,
        p,
        significant: p <= alpha,
    })
}

/// P(|T| >= |t|) for Student's t with `df` degrees of freedom, via
/// I_x(df/2, 1/2) at x = df/(df + t^2).
pub fn two_tailed_p(t: f64, df: usize) -> f64 {
    assert!(df >= 1, "degrees of freedom must be positive");
    if t == 0.0 {
        return 1.0;
    }
    if t.is_infinite() {
        return 0.0;
    }
    let dff = df as f64;
    let x = dff / (dff + t * t);
    incomplete_beta_regularized(dff / 2.0, 0.5, x).clamp(0.0, 1.0)
}

/// ln Γ(x), Lanczos approximation (g=7, 9 coefficients). Accurate to
/// ~1e-13 over the arguments used here (x ≥ 0.5 after reflection).
#[allow(clippy::excessive_precision)] // published coefficients, kept verbatim
pub fn ln_gamma(x: f64) -> f64 {
    const COEFFS: [f64; 8] = [
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        // Reflection: Γ(x)Γ(1-x) = π / sin(πx).
        return std::f64::consts::PI.ln()
            - (std::f64::consts::PI * x).sin().ln()
            - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut acc = 0.99999999999980993;
    for (i, &c) in COEFFS.iter().enumerate() {
        acc += c / (x + (i + 1) as f64);
    }
    let t = x + 7.5;
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + acc.ln()
}

/// Regularized incomplete beta I_x(a, b) by continued fraction, with the
/// symmetry switch at x = (a+1)/(a+b+2) for convergence.
pub fn incomplete_beta_regularized(a: f64, b: f64, x: f64) -> f64 {
    assert!((0.0..=1.0).contains(&x), "x out of [0,1]");
    if x == 0.0 {
        return 0.0;
    }
    if x == 1.0 {
        return 1.0;
    }
    let ln_front = ln_gamma(a + b) - ln_gamma(a) - ln_gamma(b) + a * x.ln() + b * (1.0 - x).ln();
    if x < (a + 1.0) / (a + b + 2.0) {
        (ln_front.exp() * beta_cf(a, b, x)) / a
    } else {
        1.0 - (ln_front.exp() * beta_cf(b, a, 1.0 - x)) / b
    }
}

/// Continued fraction for the incomplete beta, modified Lentz iteration.
fn beta_cf(a: f64, b: f64, x: f64) -> f64 {
    const MAX_ITER: usize = 300;
    const EPS: f64 = 1e-15;
    const TINY: f64 = 1e-30;

    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;

    for m in 1..=MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;

        // Even step.
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;

        // Odd step.
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    h
}
