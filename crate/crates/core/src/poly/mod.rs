//! Sparse polynomials in two commuting indeterminates `z` and `w`.
//!
//! `w` stands in for the conjugate variable: a polynomial `p(z, z̄)` is stored
//! as its image `p(z, w)` in `ℂ[z, w]`, and evaluating at `(z, conj z)` recovers
//! the original function on the plane.

mod division;
mod monomial;
mod real;
mod text;

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::scalar::{Complex64, GaussianRational, Scalar};

pub use division::{divide, Division};
pub use monomial::{labels_up_to, monomial_compare, Monomial};
pub use real::{realify, PlanePoly};

pub type ExactPoly = Polynomial<GaussianRational>;
pub type ApproxPoly = Polynomial<Complex64>;

/// A polynomial in canonical form: no stored zero coefficients.
#[derive(Clone, PartialEq)]
pub struct Polynomial<F> {
    terms: BTreeMap<Monomial, F>,
}

impl<F: Scalar> Polynomial<F> {
    pub fn zero() -> Self {
        Polynomial { terms: BTreeMap::new() }
    }

    pub fn constant(c: F) -> Self {
        Self::term(Monomial::ONE, c)
    }

    pub fn one() -> Self {
        Self::constant(F::one())
    }

    pub fn term(m: Monomial, c: F) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        Polynomial { terms }
    }

    pub fn monomial(m: Monomial) -> Self {
        Self::term(m, F::one())
    }

    pub fn z() -> Self {
        Self::monomial(Monomial::new(0, 1))
    }

    pub fn w() -> Self {
        Self::monomial(Monomial::new(1, 0))
    }

    /// Sums coefficients of repeated monomials and drops zeros.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, F)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &F)> + ExactSizeIterator {
        self.terms.iter()
    }

    pub fn monomials(&self) -> impl DoubleEndedIterator<Item = &Monomial> {
        self.terms.keys()
    }

    pub fn coeff(&self, m: &Monomial) -> F {
        self.terms.get(m).cloned().unwrap_or_else(F::zero)
    }

    pub fn leading_monomial(&self) -> Option<Monomial> {
        self.terms.keys().next_back().copied()
    }

    pub fn leading_term(&self) -> Option<(Monomial, &F)> {
        self.terms.iter().next_back().map(|(m, c)| (*m, c))
    }

    pub fn leading_coefficient(&self) -> Option<&F> {
        self.terms.values().next_back()
    }

    pub fn try_leading_monomial(&self) -> Result<Monomial> {
        self.leading_monomial().ok_or(Error::ZeroPolynomial)
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_z(&self) -> u32 {
        self.terms.keys().map(|m| m.z).max().unwrap_or(0)
    }

    pub fn degree_w(&self) -> u32 {
        self.terms.keys().map(|m| m.w).max().unwrap_or(0)
    }

    pub fn add_term(&mut self, m: Monomial, c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&m) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(m, sum);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    /// Removes a monomial outright, regardless of rounding.
    pub(crate) fn remove_term(&mut self, m: &Monomial) -> Option<F> {
        self.terms.remove(m)
    }

    pub fn scale(&self, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_terms(self.terms.iter().map(|(m, a)| (*m, a.clone() * c.clone())))
    }

    pub fn mul_term(&self, m: Monomial, c: &F) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::from_terms(self.terms.iter().map(|(n, a)| (n.mul(m), a.clone() * c.clone())))
    }

    /// Scales so the leading coefficient is one. The zero polynomial is returned unchanged.
    pub fn monic(&self) -> Self {
        match self.leading_coefficient() {
            Some(lc) => self.scale(&(F::one() / lc.clone())),
            None => self.clone(),
        }
    }

    /// `p̄`: conjugate every coefficient and swap the exponents of `z` and `w`.
    pub fn conjugate(&self) -> Self {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (m.swap(), c.conj())).collect(),
        }
    }

    /// True iff no monomial mixes `z` and `w`.
    pub fn is_harmonic(&self) -> bool {
        self.terms.keys().all(|m| m.z == 0 || m.w == 0)
    }

    pub fn partial_z(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.z > 0)
                .map(|(m, c)| (Monomial::new(m.w, m.z - 1), c.clone() * F::from_i64(m.z as i64))),
        )
    }

    pub fn partial_w(&self) -> Self {
        Self::from_terms(
            self.terms
                .iter()
                .filter(|(m, _)| m.w > 0)
                .map(|(m, c)| (Monomial::new(m.w - 1, m.z), c.clone() * F::from_i64(m.w as i64))),
        )
    }

    /// `∂²p/∂z∂w`.
    pub fn mixed_partial(&self) -> Self {
        self.partial_z().partial_w()
    }

    /// Substitutes `(z, w) ← point` in the coefficient field.
    pub fn evaluate(&self, z: &F, w: &F) -> F {
        let max_z = self.degree_z() as usize;
        let max_w = self.degree_w() as usize;
        let zp = powers(z, max_z);
        let wp = powers(w, max_w);
        self.terms.iter().fold(F::zero(), |acc, (m, c)| {
            acc + c.clone() * zp[m.z as usize].clone() * wp[m.w as usize].clone()
        })
    }

    pub fn evaluate_c64(&self, z: Complex64, w: Complex64) -> Complex64 {
        self.terms.iter().fold(Complex64::new(0.0, 0.0), |acc, (m, c)| {
            acc + c.to_c64() * z.powu(m.z) * w.powu(m.w)
        })
    }

    /// `Σ |c| |z|^b |w|^a`: the magnitude rounding errors in an evaluation scale with.
    pub fn evaluation_scale(&self, z: Complex64, w: Complex64) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| c.abs() * z.norm().powi(m.z as i32) * w.norm().powi(m.w as i32))
            .sum()
    }

    pub fn max_abs_coeff(&self) -> f64 {
        self.terms.values().map(Scalar::abs).fold(0.0, f64::max)
    }

    pub fn norm1(&self) -> f64 {
        self.terms.values().map(Scalar::abs).sum()
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Polynomial<G> {
        Polynomial::from_terms(self.terms.iter().map(|(m, c)| (*m, f(c))))
    }

    pub fn try_map<G: Scalar>(&self, f: impl Fn(&F) -> Option<G>) -> Option<Polynomial<G>> {
        let mut out = Polynomial::zero();
        for (m, c) in &self.terms {
            out.add_term(*m, f(c)?);
        }
        Some(out)
    }

    pub fn to_approx(&self) -> ApproxPoly {
        self.map(Scalar::to_c64)
    }

    /// The exact polynomial, when the coefficient field is exact.
    pub fn as_exact(&self) -> Option<ExactPoly> {
        self.try_map(Scalar::as_exact)
    }

    pub fn from_exact(p: &ExactPoly) -> Self {
        p.map(F::from_exact)
    }

    /// Drops coefficients with `|c| <= tol * max|c|`.
    pub fn chop(&self, tol: f64) -> Self {
        let cutoff = tol * self.max_abs_coeff();
        Polynomial {
            terms: self
                .terms
                .iter()
                .filter(|(_, c)| c.abs() > cutoff)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::one(), |acc, _| &acc * self)
    }
}

fn powers<F: Scalar>(x: &F, n: usize) -> Vec<F> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(F::one());
    for i in 0..n {
        out.push(out[i].clone() * x.clone());
    }
    out
}

impl ApproxPoly {
    /// Largest coefficient distance to another polynomial.
    pub fn max_coeff_distance(&self, other: &ApproxPoly) -> f64 {
        (self - other).max_abs_coeff()
    }
}

impl<F: Scalar> Default for Polynomial<F> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<F: Scalar> Add for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn add(self, rhs: &Polynomial<F>) -> Polynomial<F> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, c.clone());
        }
        out
    }
}

impl<F: Scalar> Sub for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn sub(self, rhs: &Polynomial<F>) -> Polynomial<F> {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(*m, -c.clone());
        }
        out
    }
}

impl<F: Scalar> Mul for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn mul(self, rhs: &Polynomial<F>) -> Polynomial<F> {
        let mut out = Polynomial::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(*m2), c1.clone() * c2.clone());
            }
        }
        out
    }
}

impl<F: Scalar> Neg for &Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        Polynomial {
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident :: $f:ident),*) => {$(
        impl<F: Scalar> $tr for Polynomial<F> {
            type Output = Polynomial<F>;
            fn $f(self, rhs: Polynomial<F>) -> Polynomial<F> {
                (&self).$f(&rhs)
            }
        }
        impl<F: Scalar> $tr<&Polynomial<F>> for Polynomial<F> {
            type Output = Polynomial<F>;
            fn $f(self, rhs: &Polynomial<F>) -> Polynomial<F> {
                (&self).$f(rhs)
            }
        }
    )*};
}
forward_owned!(Add::add, Sub::sub, Mul::mul);

impl<F: Scalar> Neg for Polynomial<F> {
    type Output = Polynomial<F>;
    fn neg(self) -> Polynomial<F> {
        -&self
    }
}

impl<F: Scalar> fmt::Debug for Polynomial<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Polynomial({self})")
    }
}
