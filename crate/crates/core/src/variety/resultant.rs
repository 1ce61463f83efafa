use crate::error::{Error, Result};
use crate::poly::PlanePoly;
use crate::scalar::{c64_to_exact, GaussianRational, Scalar};

/// Univariate polynomial in `x`, ascending coefficients, no trailing zeros.
type UPoly = Vec<GaussianRational>;

fn trim(mut p: UPoly) -> UPoly {
    while p.last().is_some_and(Scalar::is_zero) {
        p.pop();
    }
    p
}

fn mul(a: &UPoly, b: &UPoly) -> UPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![GaussianRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] = out[i + j].clone() + x.clone() * y.clone();
        }
    }
    trim(out)
}

fn sub(a: &UPoly, b: &UPoly) -> UPoly {
    let n = a.len().max(b.len());
    let zero = GaussianRational::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&zero).clone() - b.get(i).unwrap_or(&zero).clone()).collect())
}

/// Division known to be exact.
fn div_exact(a: &UPoly, b: &UPoly) -> UPoly {
    let mut rem = a.clone();
    let db = b.len() - 1;
    let lead = b[db].clone();
    if rem.len() < b.len() {
        return Vec::new();
    }
    let mut q = vec![GaussianRational::zero(); rem.len() - db];
    for k in (0..q.len()).rev() {
        let c = rem[k + db].clone() / lead.clone();
        if c.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            rem[k + j] = rem[k + j].clone() - c.clone() * bj.clone();
        }
        q[k] = c;
    }
    debug_assert!(rem.iter().all(Scalar::is_zero));
    trim(q)
}

/// Determinant over `F[x]` by Bareiss fraction-free elimination.
fn determinant(mut m: Vec<Vec<UPoly>>) -> UPoly {
    let n = m.len();
    let mut sign = false;
    let mut prev: UPoly = vec![GaussianRational::one()];
    for k in 0..n {
        if m[k][k].is_empty() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_empty()) else {
                return Vec::new();
            };
            m.swap(k, r);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = sub(&mul(&m[i][j], &m[k][k]), &mul(&m[i][k], &m[k][j]));
                m[i][j] = div_exact(&t, &prev);
            }
            m[i][k] = Vec::new();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        det.into_iter().map(|c| -c).collect()
    } else {
        det
    }
}

fn to_exact<F: Scalar>(p: &PlanePoly<F>) -> PlanePoly<GaussianRational> {
    p.map(|c| c.as_exact().or_else(|| c64_to_exact(c.to_c64())).unwrap_or_else(GaussianRational::zero))
}

/// Resultant of `f` and `g` with respect to `y`, as ascending coefficients in `x`.
///
/// Computed exactly; floating coefficients are converted to their exact binary
/// values first, so the only rounding is in the final conversion back.
pub fn sylvester_resultant<F: Scalar>(f: &PlanePoly<F>, g: &PlanePoly<F>) -> Result<Vec<F>> {
    let (f, g) = (to_exact(f), to_exact(g));
    let (m, n) = (f.degree_y() as usize, g.degree_y() as usize);
    if f.is_zero() || g.is_zero() || m == 0 || n == 0 {
        return Err(Error::DegreeZero);
    }
    let fc: Vec<UPoly> = f.coefficients_in_y().into_iter().map(trim).collect();
    let gc: Vec<UPoly> = g.coefficients_in_y().into_iter().map(trim).collect();
    let size = m + n;
    let mut rows = vec![vec![Vec::new(); size]; size];
    for r in 0..n {
        for (i, c) in fc.iter().enumerate() {
            rows[r][r + m - i] = c.clone();
        }
    }
    for r in 0..m {
        for (j, c) in gc.iter().enumerate() {
            rows[n + r][r + n - j] = c.clone();
        }
    }
    Ok(determinant(rows).iter().map(F::from_exact).collect())
}
