//! Samples of `p(x + iy, x − iy)` on a square window, as CSV.

use moment_forge::poly::Polynomial;
use moment_forge::scalar::format_f64;
use moment_forge::{Complex64, Scalar};

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GridSpec {
    pub center: Complex64,
    pub half_width: f64,
    /// Samples per axis.
    pub n: usize,
}

impl GridSpec {
    pub fn new(center: Complex64, half_width: f64, n: usize) -> Result<GridSpec, CliError> {
        if n < 2 {
            return Err(CliError::Usage(format!("grid needs at least 2 samples per axis, got {n}")));
        }
        if !(half_width.is_finite() && half_width > 0.0) {
            return Err(CliError::Usage(format!("grid half-width must be positive, got {half_width}")));
        }
        Ok(GridSpec { center, half_width, n })
    }

    /// Sample coordinates along one axis, endpoints included.
    fn axis(&self, c: f64) -> Vec<f64> {
        let step = 2.0 * self.half_width / (self.n - 1) as f64;
        (0..self.n).map(|i| if i + 1 == self.n { c + self.half_width } else { c - self.half_width + step * i as f64 }).collect()
    }
}

/// Header plus `n²` rows, `y` in the outer loop, both axes ascending.
pub fn grid_sample<F: Scalar>(p: &Polynomial<F>, spec: &GridSpec) -> String {
    let p = p.to_approx();
    let xs = spec.axis(spec.center.re);
    let ys = spec.axis(spec.center.im);
    let mut out = String::from("x,y,re,im,abs\n");
    for y in &ys {
        for x in &xs {
            let z = Complex64::new(*x, *y);
            let v = p.evaluate_c64(z, z.conj());
            out.push_str(&format!("{},{},{},{},{}\n", format_f64(*x), format_f64(*y), format_f64(v.re), format_f64(v.im), format_f64(v.norm())));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_degenerate_windows() {
        assert!(GridSpec::new(Complex64::new(0.0, 0.0), 1.0, 1).is_err());
        assert!(GridSpec::new(Complex64::new(0.0, 0.0), 0.0, 4).is_err());
    }

    #[test]
    fn endpoints_are_exact() {
        let spec = GridSpec::new(Complex64::new(0.5, 0.0), 0.3, 7).unwrap();
        let xs = spec.axis(0.5);
        assert_eq!(xs.len(), 7);
        assert_eq!(xs[0], 0.5 - 0.3);
        assert_eq!(xs[6], 0.5 + 0.3);
    }
}
