use crate::error::{Error, Result};
use crate::scalar::Complex64;

const MAX_ITERATIONS: usize = 500;

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

fn magnitude_scale(coeffs: &[Complex64], z: Complex64) -> f64 {
    let r = z.norm();
    coeffs.iter().rev().fold(0.0, |acc, c| acc * r + c.norm())
}

/// All complex roots, with multiplicity, of `Σ coeffs[i]·z^i`.
///
/// Aberth–Ehrlich simultaneous iteration from points on a slightly rotated
/// circle, followed by Newton polishing. Exact zero roots are split off first.
pub fn univariate_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut coeffs: Vec<Complex64> = coeffs.to_vec();
    while coeffs.last().is_some_and(|c| *c == Complex64::new(0.0, 0.0)) {
        coeffs.pop();
    }
    if coeffs.len() < 2 {
        return Err(Error::ConstantPolynomial);
    }
    let zeros = coeffs.iter().take_while(|c| c.norm() == 0.0).count();
    let coeffs = &coeffs[zeros..];
    let mut roots = vec![Complex64::new(0.0, 0.0); zeros];
    let n = coeffs.len() - 1;
    if n == 0 {
        return Ok(roots);
    }
    let lead = coeffs[n];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();

    // Initial guesses on a circle around the centroid, radius from the
    // Fujiwara bound.
    let center = -monic[n - 1] / n as f64;
    let radius = (0..n)
        .map(|i| monic[i].norm().powf(1.0 / (n - i) as f64))
        .fold(0.0f64, f64::max)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| center + Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.4))
        .collect();

    let eps = f64::EPSILON;
    let mut converged = vec![false; n];
    let mut iterations = 0;
    while converged.iter().any(|c| !c) {
        if iterations == MAX_ITERATIONS {
            roots.extend(z);
            return Err(Error::NoConvergence { iterations, partial: roots });
        }
        iterations += 1;
        for k in 0..n {
            if converged[k] {
                continue;
            }
            let (p, dp) = horner(&monic, z[k]);
            if p.norm() <= 4.0 * eps * magnitude_scale(&monic, z[k]) {
                converged[k] = true;
                continue;
            }
            let ratio = p / dp;
            let repulsion: Complex64 = (0..n).filter(|&j| j != k).map(|j| 1.0 / (z[k] - z[j])).sum();
            let step = ratio / (1.0 - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
            } else {
                z[k] += Complex64::new(radius * 1e-3, radius * 1e-3);
            }
        }
    }
    for r in &mut z {
        newton_polish(&monic, r);
    }
    roots.extend(z);
    Ok(roots)
}

fn newton_polish(coeffs: &[Complex64], z: &mut Complex64) {
    for _ in 0..3 {
        let (p, dp) = horner(coeffs, *z);
        if dp.norm() == 0.0 {
            return;
        }
        let candidate = *z - p / dp;
        if horner(coeffs, candidate).0.norm() < p.norm() {
            *z = candidate;
        } else {
            return;
        }
    }
}
