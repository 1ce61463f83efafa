use std::collections::BTreeMap;
use std::fmt;

use crate::poly::{Monomial, Polynomial};
use crate::scalar::{Complex64, Scalar};

/// Polynomial in the real coordinates `x`, `y` of `z = x + iy`.
///
/// Keys are `(deg_x, deg_y)`. Coefficients live in the same field as the
/// complex polynomial they came from; after [`realify`] their imaginary parts
/// are zero.
#[derive(Clone, PartialEq, Debug)]
pub struct PlanePoly<F> {
    terms: BTreeMap<(u32, u32), F>,
}

impl<F: Scalar> PlanePoly<F> {
    pub fn zero() -> Self {
        PlanePoly { terms: BTreeMap::new() }
    }

    pub fn x() -> Self {
        Self::from_terms([((1, 0), F::one())])
    }

    pub fn y() -> Self {
        Self::from_terms([((0, 1), F::one())])
    }

    pub fn constant(c: F) -> Self {
        Self::from_terms([((0, 0), c)])
    }

    pub fn from_terms<I: IntoIterator<Item = ((u32, u32), F)>>(terms: I) -> Self {
        let mut p = Self::zero();
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: (u32, u32), c: F) {
        if c.is_zero() {
            return;
        }
        match self.terms.remove(&e) {
            Some(old) => {
                let sum = old + c;
                if !sum.is_zero() {
                    self.terms.insert(e, sum);
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &F)> {
        self.terms.iter()
    }

    pub fn coeff(&self, x_deg: u32, y_deg: u32) -> F {
        self.terms.get(&(x_deg, y_deg)).cloned().unwrap_or_else(F::zero)
    }

    pub fn degree_x(&self) -> u32 {
        self.terms.keys().map(|e| e.0).max().unwrap_or(0)
    }

    pub fn degree_y(&self) -> u32 {
        self.terms.keys().map(|e| e.1).max().unwrap_or(0)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, -c.clone());
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((a, b), c) in &self.terms {
            for ((d, e), f) in &other.terms {
                out.add_term((a + d, b + e), c.clone() * f.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &F) -> Self {
        Self::from_terms(self.terms.iter().map(|(e, a)| (*e, a.clone() * c.clone())))
    }

    pub fn pow(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(F::one()), |acc, _| acc.mul(self))
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> PlanePoly<G> {
        PlanePoly::from_terms(self.terms.iter().map(|(e, c)| (*e, f(c))))
    }

    pub fn partial_x(&self) -> Self {
        Self::from_terms(
            self.terms.iter().filter(|((a, _), _)| *a > 0).map(|((a, b), c)| ((a - 1, *b), c.clone() * F::from_i64(*a as i64))),
        )
    }

    pub fn partial_y(&self) -> Self {
        self.swap_xy().partial_x().swap_xy()
    }

    pub fn swap_xy(&self) -> Self {
        Self::from_terms(self.terms.iter().map(|((a, b), c)| ((*b, *a), c.clone())))
    }

    pub fn evaluate(&self, x: &F, y: &F) -> F {
        self.terms.iter().fold(F::zero(), |acc, ((a, b), c)| {
            acc + c.clone() * x.pow(*a) * y.pow(*b)
        })
    }

    /// Coefficients of `y^0, y^1, ...`, each a univariate polynomial in `x`
    /// listed by ascending power.
    pub fn coefficients_in_y(&self) -> Vec<Vec<F>> {
        let dy = self.degree_y() as usize;
        let dx = self.degree_x() as usize;
        let mut out = vec![vec![F::zero(); dx + 1]; dy + 1];
        for ((a, b), c) in &self.terms {
            out[*b as usize][*a as usize] = c.clone();
        }
        out
    }

    /// The univariate polynomial in `y` obtained by fixing `x = x0`, ascending powers.
    pub fn fiber_in_y(&self, x0: Complex64) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.degree_y() as usize + 1];
        for ((a, b), c) in &self.terms {
            out[*b as usize] += c.to_c64() * x0.powu(*a);
        }
        out
    }

    /// Evaluation at a complex point, in double precision.
    pub fn evaluate_c64(&self, x: Complex64, y: Complex64) -> Complex64 {
        self.terms.iter().fold(Complex64::new(0.0, 0.0), |acc, ((a, b), c)| acc + c.to_c64() * x.powu(*a) * y.powu(*b))
    }

    /// Substitutes `x = (z + w)/2`, `y = (z - w)/(2i)`, inverting [`realify`].
    pub fn to_complex_form(&self) -> Polynomial<F> {
        let half = F::one() / F::from_i64(2);
        let x = Polynomial::from_terms([(Monomial::Z, half.clone()), (Monomial::W, half.clone())]);
        let inv_2i = F::one() / (F::from_i64(2) * F::imag_unit());
        let y = Polynomial::from_terms([(Monomial::Z, inv_2i.clone()), (Monomial::W, -inv_2i)]);
        self.terms.iter().fold(Polynomial::zero(), |acc, ((a, b), c)| {
            &acc + &(&x.pow(*a) * &y.pow(*b)).scale(c)
        })
    }
}

/// Splits `p(x + iy, x - iy)` into real and imaginary parts, each a polynomial
/// in `x, y` with real coefficients.
pub fn realify<F: Scalar>(p: &Polynomial<F>) -> (PlanePoly<F>, PlanePoly<F>) {
    let i = F::imag_unit();
    let z = PlanePoly::from_terms([((1, 0), F::one()), ((0, 1), i.clone())]);
    let w = PlanePoly::from_terms([((1, 0), F::one()), ((0, 1), -i)]);
    let mut full = PlanePoly::zero();
    for (m, c) in p.terms() {
        full = full.add(&z.pow(m.z).mul(&w.pow(m.w)).scale(c));
    }
    (full.map(Scalar::re), full.map(Scalar::im))
}

impl<F: Scalar> fmt::Display for PlanePoly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let ordered = self.terms.iter().rev().map(|((a, b), c)| {
            let mut mono = String::new();
            for (name, e) in [("x", *a), ("y", *b)] {
                match e {
                    0 => {}
                    1 => mono.push_str(name),
                    _ => mono.push_str(&format!("{name}^{e}")),
                }
            }
            (mono, c)
        });
        super::text::write_terms(f, ordered)
    }
}
