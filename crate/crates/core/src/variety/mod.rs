//! The finite zero set `𝒵(p) = {z : p(z, z̄) = 0}` of a polynomial.
//!
//! `p` is split into real and imaginary parts over `ℝ²`, `y` is eliminated by a
//! Sylvester resultant, real roots of the resultant are back-substituted into
//! the fibres, and every candidate is polished by Newton's method on the real
//! system and kept only if `p` nearly vanishes there.

mod resultant;
mod roots;

pub use resultant::sylvester_resultant;
pub use roots::univariate_roots;

use crate::error::{Error, Result};
use crate::poly::{realify, ApproxPoly, PlanePoly, Polynomial};
use crate::scalar::{Complex64, Scalar};

pub const DEFAULT_TOL: f64 = 1e-9;

/// Relative size of the imaginary part below which a root of an intermediate
/// univariate polynomial is treated as a real candidate. Deliberately loose:
/// repeated resultant roots lose half their digits, and every candidate is
/// verified afterwards.
const SCREEN: f64 = 1e-4;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Multiplicity {
    Simple,
    Multiple,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VarietyPoint {
    pub z: Complex64,
    /// `max(|p|, |p̄|)` at `(z, z̄)`.
    pub residual: f64,
    pub multiplicity: Multiplicity,
}

impl VarietyPoint {
    /// The point `(z, z̄)` of ℂ².
    pub fn coordinates(&self) -> (Complex64, Complex64) {
        (self.z, self.z.conj())
    }

    pub fn is_simple(&self) -> bool {
        self.multiplicity == Multiplicity::Simple
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Variety {
    points: Vec<VarietyPoint>,
    source: ApproxPoly,
    tol: f64,
}

impl Variety {
    pub fn points(&self) -> &[VarietyPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn source(&self) -> &ApproxPoly {
        &self.source
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn all_simple(&self) -> bool {
        self.points.iter().all(VarietyPoint::is_simple)
    }

    pub fn zs(&self) -> Vec<Complex64> {
        self.points.iter().map(|p| p.z).collect()
    }

    pub fn coordinates(&self) -> Vec<(Complex64, Complex64)> {
        self.points.iter().map(VarietyPoint::coordinates).collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Cluster {
    pub center: Complex64,
    pub size: usize,
}

impl Cluster {
    pub fn is_flagged(&self) -> bool {
        self.size > 1
    }
}

fn cmp_complex(a: &Complex64, b: &Complex64) -> std::cmp::Ordering {
    a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im))
}

/// Union-find clustering: points within `tol` of each other (transitively)
/// are merged into their centroid. Sorted by real, then imaginary part.
pub fn cluster_points(raw: &[Complex64], tol: f64) -> Vec<Cluster> {
    let n = raw.len();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for i in 0..n {
        for j in i + 1..n {
            if (raw[i] - raw[j]).norm() <= tol {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                parent[a.max(b)] = a.min(b);
            }
        }
    }
    let mut groups: std::collections::BTreeMap<usize, Vec<Complex64>> = Default::default();
    for (i, z) in raw.iter().enumerate() {
        let root = find(&mut parent, i);
        groups.entry(root).or_default().push(*z);
    }
    let mut out: Vec<Cluster> = groups
        .into_values()
        .map(|g| Cluster { center: g.iter().sum::<Complex64>() / g.len() as f64, size: g.len() })
        .collect();
    out.sort_by(|a, b| cmp_complex(&a.center, &b.center));
    out
}

/// Real system `(Re p, Im p)` in double precision with its Jacobian.
struct RealSystem {
    f: PlanePoly<Complex64>,
    g: PlanePoly<Complex64>,
    fx: PlanePoly<Complex64>,
    fy: PlanePoly<Complex64>,
    gx: PlanePoly<Complex64>,
    gy: PlanePoly<Complex64>,
}

fn eval(p: &PlanePoly<Complex64>, x: f64, y: f64) -> f64 {
    p.evaluate_c64(Complex64::new(x, 0.0), Complex64::new(y, 0.0)).re
}

impl RealSystem {
    fn new<F: Scalar>(f: &PlanePoly<F>, g: &PlanePoly<F>) -> Self {
        let f = f.map(|c| Complex64::new(c.to_c64().re, 0.0));
        let g = g.map(|c| Complex64::new(c.to_c64().re, 0.0));
        RealSystem { fx: f.partial_x(), fy: f.partial_y(), gx: g.partial_x(), gy: g.partial_y(), f, g }
    }

    fn jacobian(&self, x: f64, y: f64) -> [[f64; 2]; 2] {
        [[eval(&self.fx, x, y), eval(&self.fy, x, y)], [eval(&self.gx, x, y), eval(&self.gy, x, y)]]
    }

    fn residual(&self, x: f64, y: f64) -> f64 {
        eval(&self.f, x, y).hypot(eval(&self.g, x, y))
    }

    fn newton(&self, mut x: f64, mut y: f64) -> (f64, f64) {
        let mut r = self.residual(x, y);
        for _ in 0..50 {
            if r == 0.0 {
                break;
            }
            let [[a, b], [c, d]] = self.jacobian(x, y);
            let det = a * d - b * c;
            if det == 0.0 || !det.is_finite() {
                break;
            }
            let (fv, gv) = (eval(&self.f, x, y), eval(&self.g, x, y));
            let dx = (d * fv - b * gv) / det;
            let dy = (a * gv - c * fv) / det;
            let (nx, ny) = (x - dx, y - dy);
            let nr = self.residual(nx, ny);
            if !(nr < r) {
                break;
            }
            (x, y, r) = (nx, ny, nr);
            if dx.hypot(dy) <= 1e-16 * x.hypot(y).max(1.0) {
                break;
            }
        }
        (x, y)
    }

    fn is_simple(&self, x: f64, y: f64, tol: f64) -> bool {
        let [[a, b], [c, d]] = self.jacobian(x, y);
        let frob = a * a + b * b + c * c + d * d;
        (a * d - b * c).abs() > tol.sqrt() * frob
    }
}

fn is_real_candidate(r: &Complex64) -> bool {
    r.im.abs() <= SCREEN * r.norm().max(1.0)
}

/// Drops leading coefficients negligible against the largest one.
fn trim_numeric(mut c: Vec<Complex64>) -> Vec<Complex64> {
    let max = c.iter().map(|x| x.norm()).fold(0.0, f64::max);
    while c.last().is_some_and(|x| x.norm() <= 1e-13 * max) {
        c.pop();
    }
    c
}

fn real_roots(coeffs: &[Complex64]) -> Result<Vec<f64>> {
    let c = trim_numeric(coeffs.to_vec());
    if c.len() < 2 {
        return Ok(Vec::new());
    }
    Ok(univariate_roots(&c)?.iter().filter(|r| is_real_candidate(r)).map(|r| r.re).collect())
}

/// Real candidates `(x, y)` of `f = g = 0`, eliminating `y`; `None` if the
/// resultant vanishes identically.
fn candidates_eliminating_y<F: Scalar>(f: &PlanePoly<F>, g: &PlanePoly<F>) -> Result<Option<Vec<(f64, f64)>>> {
    let (dfy, dgy) = (f.degree_y(), g.degree_y());
    let xs: Vec<f64> = match (dfy, dgy) {
        (0, 0) => {
            // Both depend on x alone: common real roots give whole vertical lines.
            let fx: Vec<Complex64> = f.coefficients_in_y()[0].iter().map(Scalar::to_c64).collect();
            let xs = real_roots(&fx)?;
            let gsys = g.map(|c| c.to_c64());
            let scale = g.terms().map(|(_, c)| c.abs()).sum::<f64>().max(1.0);
            if xs.iter().any(|x| gsys.evaluate_c64(Complex64::new(*x, 0.0), Complex64::new(0.0, 0.0)).norm() <= 1e-9 * scale) {
                return Err(Error::NonFiniteVariety);
            }
            return Ok(Some(Vec::new()));
        }
        (0, _) => real_roots(&f.coefficients_in_y()[0].iter().map(Scalar::to_c64).collect::<Vec<_>>())?,
        (_, 0) => real_roots(&g.coefficients_in_y()[0].iter().map(Scalar::to_c64).collect::<Vec<_>>())?,
        _ => {
            let r: Vec<Complex64> = sylvester_resultant(f, g)?.iter().map(Scalar::to_c64).collect();
            if r.iter().all(|c| c.norm() == 0.0) {
                return Ok(None);
            }
            real_roots(&r)?
        }
    };
    let mut out = Vec::new();
    for x0 in xs {
        let x = Complex64::new(x0, 0.0);
        let fy = trim_numeric(f.fiber_in_y(x));
        let gy = trim_numeric(g.fiber_in_y(x));
        let usable: Vec<&Vec<Complex64>> = [&fy, &gy].into_iter().filter(|c| c.len() >= 2).collect();
        let vanishes = |c: &Vec<Complex64>| c.is_empty() || c.iter().all(|a| a.norm() == 0.0);
        if usable.is_empty() {
            if vanishes(&fy) && vanishes(&gy) {
                return Err(Error::NonFiniteVariety);
            }
            continue;
        }
        // Over a repeated root one fibre can be numerically zero with a
        // spurious root, so candidates come from both.
        for fiber in usable {
            for y in real_roots(fiber)? {
                out.push((x0, y));
            }
        }
    }
    Ok(Some(out))
}

fn candidates<F: Scalar>(f: &PlanePoly<F>, g: &PlanePoly<F>) -> Result<Vec<(f64, f64)>> {
    if let Some(c) = candidates_eliminating_y(f, g)? {
        return Ok(c);
    }
    match candidates_eliminating_y(&f.swap_xy(), &g.swap_xy())? {
        Some(c) => Ok(c.into_iter().map(|(y, x)| (x, y)).collect()),
        None => Err(Error::NonFiniteVariety),
    }
}

/// Isolated zeros of a single real polynomial are critical points; a
/// polynomial taking both signs vanishes on a curve.
fn single_equation_candidates<F: Scalar>(f: &PlanePoly<F>) -> Result<Vec<(f64, f64)>> {
    let approx = f.map(|c| Complex64::new(c.to_c64().re, 0.0));
    let scale = approx.terms().map(|(_, c)| c.norm()).sum::<f64>();
    let (mut pos, mut neg) = (false, false);
    for i in 0..=40 {
        for j in 0..=40 {
            let (x, y) = (-4.0 + 0.2 * i as f64 + 0.013, -4.0 + 0.2 * j as f64 + 0.007);
            let v = eval(&approx, x, y);
            pos |= v > 1e-9 * scale;
            neg |= v < -1e-9 * scale;
        }
    }
    if pos && neg {
        return Err(Error::NonFiniteVariety);
    }
    let mut out = candidates(f, &f.partial_x())?;
    out.extend(candidates(f, &f.partial_y())?);
    Ok(out)
}

/// The finite set `𝒵(p)`, each point verified by `max(|p|, |p̄|) ≤ 10·tol·scale`.
pub fn solve_conjugate_system<F: Scalar>(p: &Polynomial<F>, tol: f64) -> Result<Variety> {
    if p.is_zero() {
        return Err(Error::NonFiniteVariety);
    }
    if p.degree() == Some(0) {
        return Err(Error::ConstantPolynomial);
    }
    let (re, im) = realify(p);
    let raw = match (re.is_zero(), im.is_zero()) {
        (false, false) => candidates(&re, &im)?,
        (false, true) => single_equation_candidates(&re)?,
        (true, false) => single_equation_candidates(&im)?,
        (true, true) => unreachable!("nonzero polynomial"),
    };
    let system = RealSystem::new(&re, &im);
    let pa = p.to_approx();
    let pc = pa.conjugate();
    let coeff_scale = pa.max_abs_coeff();
    let mut accepted = Vec::new();
    for (x, y) in raw {
        let (x, y) = system.newton(x, y);
        let z = Complex64::new(x, y);
        let residual = pa.evaluate_c64(z, z.conj()).norm().max(pc.evaluate_c64(z, z.conj()).norm());
        let scale = pa.evaluation_scale(z, z.conj()).max(coeff_scale);
        if residual <= 10.0 * tol * scale {
            accepted.push(z);
        }
    }
    let spread = accepted.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let points = cluster_points(&accepted, tol * spread)
        .into_iter()
        .map(|c| {
            let z = c.center;
            let residual = pa.evaluate_c64(z, z.conj()).norm().max(pc.evaluate_c64(z, z.conj()).norm());
            let multiplicity = if system.is_simple(z.re, z.im, tol) { Multiplicity::Simple } else { Multiplicity::Multiple };
            VarietyPoint { z, residual, multiplicity }
        })
        .collect();
    Ok(Variety { points, source: pa, tol })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ExactPoly;

    fn ex(s: &str) -> ExactPoly {
        s.parse().unwrap()
    }

    #[test]
    fn clustering_examples() {
        let c = cluster_points(&[Complex64::new(1.0, 0.0), Complex64::new(1.0, 1e-12)], 1e-9);
        assert_eq!(c.len(), 1);
        assert!(c[0].is_flagged());
        let c = cluster_points(&[Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)], 1e-9);
        assert_eq!(c.iter().map(|c| c.center).collect::<Vec<_>>(), vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]);
        assert!(c.iter().all(|c| !c.is_flagged()));
    }

    #[test]
    fn simple_varieties() {
        let v = solve_conjugate_system(&ex("z"), DEFAULT_TOL).unwrap();
        assert_eq!(v.zs(), vec![Complex64::new(0.0, 0.0)]);
        assert_eq!(solve_conjugate_system(&ex("z - w"), DEFAULT_TOL), Err(Error::NonFiniteVariety));
        assert_eq!(solve_conjugate_system(&ex("3"), DEFAULT_TOL), Err(Error::ConstantPolynomial));
        assert!(solve_conjugate_system(&ex("zw + 1"), DEFAULT_TOL).unwrap().is_empty());
        assert_eq!(solve_conjugate_system(&ex("zw - 1"), DEFAULT_TOL), Err(Error::NonFiniteVariety));
        let v = solve_conjugate_system(&ex("zw"), DEFAULT_TOL).unwrap();
        assert_eq!(v.len(), 1);
        assert!(v.points()[0].z.norm() < 1e-6);
    }

    #[test]
    fn q7_has_seven_points() {
        let v = solve_conjugate_system(&ex("z^3 - 8iz - 5w"), DEFAULT_TOL).unwrap();
        let r = 1.5f64.sqrt();
        let mut expected = vec![
            Complex64::new(0.0, 0.0),
            Complex64::new(1.0, 2.0),
            Complex64::new(-1.0, -2.0),
            Complex64::new(2.0, 1.0),
            Complex64::new(-2.0, -1.0),
            Complex64::new(r, r),
            Complex64::new(-r, -r),
        ];
        expected.sort_by(cmp_complex);
        assert_eq!(v.len(), 7, "{:?}", v.zs());
        for (a, b) in v.zs().iter().zip(&expected) {
            assert!((a - b).norm() < 1e-10, "{a} vs {b}");
        }
        assert!(v.all_simple());
        for p in v.points() {
            assert_eq!(p.coordinates().1, p.z.conj());
        }
    }
}
