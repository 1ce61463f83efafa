//! The moment conditions attached to a Gröbner basis: `Λ(g) = 0`, `Λ(z·g) = 0`
//! for each element, and the full consistency check `Λ(m·g) = 0`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::Result;
use crate::groebner::GroebnerBasis;
use crate::moment::{riesz, MomentSequence};
use crate::poly::{ExactPoly, Monomial, Polynomial};
use crate::scalar::{Complex64, GaussianRational, Scalar};

/// What a term of a [`LinearForm`] refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum MomentRef {
    /// `γᵢⱼ` itself.
    Raw(u32, u32),
    Re(u32, u32),
    Im(u32, u32),
}

impl MomentRef {
    fn indices(&self) -> (u32, u32) {
        match *self {
            MomentRef::Raw(i, j) | MomentRef::Re(i, j) | MomentRef::Im(i, j) => (i, j),
        }
    }

    pub fn evaluate<F: Scalar>(&self, gamma: &MomentSequence<F>) -> F {
        match *self {
            MomentRef::Raw(i, j) => gamma.get(i, j).clone(),
            MomentRef::Re(i, j) => gamma.get(i, j).re(),
            MomentRef::Im(i, j) => gamma.get(i, j).im(),
        }
    }
}

fn gamma_name(i: u32, j: u32) -> String {
    if i < 10 && j < 10 {
        format!("γ{i}{j}")
    } else {
        format!("γ({i},{j})")
    }
}

impl fmt::Display for MomentRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            MomentRef::Raw(i, j) => write!(f, "{}", gamma_name(i, j)),
            MomentRef::Re(i, j) => write!(f, "Re({})", gamma_name(i, j)),
            MomentRef::Im(i, j) => write!(f, "Im({})", gamma_name(i, j)),
        }
    }
}

/// `Σ cₜ·refₜ`, a linear form in the moments.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearForm<F: Scalar> {
    pub terms: Vec<(MomentRef, F)>,
}

impl<F: Scalar> LinearForm<F> {
    /// The form `Λ(q)`, with every conjugate pair `γₚq, γqp` that both occur
    /// rewritten through `Re γₚq` and `Im γₚq` (`p > q`). Terms follow the
    /// moment-matrix label order of their monomials.
    pub fn riesz_of(q: &Polynomial<F>) -> Self {
        let raw: BTreeMap<(u32, u32), F> = q.terms().map(|(m, c)| ((m.w, m.z), c.clone())).collect();
        let mut terms: Vec<(Monomial, MomentRef, F)> = Vec::new();
        for (&(i, j), a) in &raw {
            match raw.get(&(j, i)) {
                Some(b) if i != j => {
                    if i < j {
                        continue;
                    }
                    let alpha = a.clone() + b.clone();
                    let beta = F::imag_unit() * (a.clone() - b.clone());
                    let m = Monomial::new(i, j);
                    if !alpha.is_zero() {
                        terms.push((m, MomentRef::Re(i, j), alpha));
                    }
                    if !beta.is_zero() {
                        terms.push((m, MomentRef::Im(i, j), beta));
                    }
                }
                _ => terms.push((Monomial::new(i, j), MomentRef::Raw(i, j), a.clone())),
            }
        }
        terms.sort_by(|x, y| label_order(&x.0, &y.0).then(x.1.cmp(&y.1)));
        LinearForm { terms: terms.into_iter().map(|(_, r, c)| (r, c)).collect() }
    }

    pub fn evaluate(&self, gamma: &MomentSequence<F>) -> F {
        self.terms.iter().fold(F::zero(), |acc, (r, c)| acc + c.clone() * r.evaluate(gamma))
    }

    /// `Σ |cₜ|·s_{i+j}` with `s` from [`magnitude`].
    pub fn scale(&self, gamma: &MomentSequence<F>) -> f64 {
        self.terms
            .iter()
            .map(|(r, c)| {
                let (i, j) = r.indices();
                c.abs() * magnitude(gamma, i + j)
            })
            .sum()
    }

    /// Coefficients keyed by reference, for comparisons up to a scalar.
    pub fn coefficients(&self) -> BTreeMap<MomentRef, F> {
        self.terms.iter().cloned().collect()
    }
}

/// Degree ascending, then larger power of `z` first.
fn label_order(a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
    a.degree().cmp(&b.degree()).then(b.z.cmp(&a.z))
}

fn is_negative_leading<F: Scalar>(c: &F) -> bool {
    let c = c.to_c64();
    c.re < 0.0 || (c.re == 0.0 && c.im < 0.0)
}

impl<F: Scalar> fmt::Display for LinearForm<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, (r, c)) in self.terms.iter().enumerate() {
            let negative = is_negative_leading(c);
            let shown = if negative && n > 0 { -c.clone() } else { c.clone() };
            let coeff = if shown.is_one() {
                String::new()
            } else if (-shown.clone()).is_one() {
                "-".to_string()
            } else {
                format!("{}·", shown.format_coeff())
            };
            if n > 0 {
                write!(f, " {} ", if negative { '-' } else { '+' })?;
            }
            write!(f, "{coeff}{r}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Multiplier {
    One,
    Z,
}

/// `Λ(g) = 0` or `Λ(z·g) = 0` for a basis element.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericalCondition<F: Scalar> {
    pub element: usize,
    pub multiplier: Multiplier,
    pub form: LinearForm<F>,
}

impl<F: Scalar> fmt::Display for NumericalCondition<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = 0", self.form)
    }
}

/// Smallest Gaussian-integer multiple of `g` with coprime integer parts and a
/// leading coefficient with positive real part (or positive imaginary part
/// when real part is zero). Approximate polynomials are returned unchanged.
pub fn primitive_form<F: Scalar>(g: &Polynomial<F>) -> Polynomial<F> {
    let Some(exact) = g.as_exact() else {
        return g.clone();
    };
    Polynomial::from_exact(&primitive_exact(&exact))
}

fn primitive_exact(g: &ExactPoly) -> ExactPoly {
    let parts: Vec<&num_rational::BigRational> = g.terms().flat_map(|(_, c)| [&c.re, &c.im]).collect();
    let lcm = parts.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = parts.iter().map(|q| (*q * num_rational::BigRational::from(lcm.clone())).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, n| acc.gcd(n));
    if gcd.is_zero() {
        return g.clone();
    }
    let factor = num_rational::BigRational::new(lcm, gcd);
    let mut scaled = g.scale(&GaussianRational::new(factor, num_rational::BigRational::zero()));
    if let Some(lc) = scaled.leading_coefficient() {
        if lc.re.is_negative() || (lc.re.is_zero() && lc.im.is_negative()) {
            scaled = -scaled;
        }
    }
    scaled
}

/// The two conditions `Λ(g) = 0`, `Λ(z·g) = 0` for every basis element, with
/// `g` in primitive form.
pub fn numerical_conditions<F: Scalar>(basis: &GroebnerBasis<F>) -> Vec<NumericalCondition<F>> {
    let z = Polynomial::<F>::z();
    basis
        .elements()
        .iter()
        .enumerate()
        .flat_map(|(n, g)| {
            let g = primitive_form(g);
            [
                NumericalCondition { element: n, multiplier: Multiplier::One, form: LinearForm::riesz_of(&g) },
                NumericalCondition { element: n, multiplier: Multiplier::Z, form: LinearForm::riesz_of(&(&z * &g)) },
            ]
        })
        .collect()
}

/// Size of the degree-`n` moments: `γₕₕ` for `n = 2h`, the geometric mean of
/// the neighbours for odd `n`. For a measure this bounds `∫|z|ⁿ dμ ≥ |γᵢⱼ|`,
/// so it is the scale at which rounding in `γᵢⱼ` happens even when the
/// moment itself cancels to zero.
pub fn magnitude<F: Scalar>(gamma: &MomentSequence<F>, n: u32) -> f64 {
    let diag = |h: u32| gamma.get(h, h).abs();
    if n % 2 == 0 {
        diag(n / 2)
    } else {
        (diag(n / 2) * diag(n / 2 + 1)).sqrt()
    }
}

/// A vanishing test on a Riesz value: exact zero for exact fields, otherwise
/// `|Λ(q)| ≤ tol·Σ|cₘ|·s_{deg m}` with `s` from [`magnitude`].
#[derive(Clone, Debug, PartialEq)]
pub struct ConditionResult {
    pub value: Complex64,
    pub scale: f64,
    pub passed: bool,
}

pub fn vanishing_test<F: Scalar>(gamma: &MomentSequence<F>, q: &Polynomial<F>, tol: f64) -> Result<ConditionResult> {
    let value = riesz(gamma, q)?;
    let scale: f64 = q.terms().map(|(m, c)| c.abs() * magnitude(gamma, m.degree())).sum();
    let passed = if F::EXACT { value.is_zero() } else { value.abs() <= tol * scale };
    Ok(ConditionResult { value: value.to_c64(), scale, passed })
}

#[derive(Clone, Debug, PartialEq)]
pub struct StrictReport {
    pub passed: bool,
    pub checked: usize,
    /// `(element, multiplier monomial, |Λ(m·g)|)` for every failed check.
    pub failures: Vec<(usize, Monomial, f64)>,
}

/// `Λ(m·g) = 0` for every basis element `g` and every monomial `m` with
/// `deg(m·g) ≤ 2k`.
pub fn strict_consistency<F: Scalar>(gamma: &MomentSequence<F>, basis: &GroebnerBasis<F>, tol: f64) -> Result<StrictReport> {
    let limit = 2 * gamma.k();
    let mut checked = 0;
    let mut failures = Vec::new();
    for (n, g) in basis.elements().iter().enumerate() {
        let dg = g.degree().unwrap_or(0);
        if dg > limit {
            continue;
        }
        for d in 0..=limit - dg {
            for m in Monomial::of_degree(d) {
                let r = vanishing_test(gamma, &g.mul_term(m, &F::one()), tol)?;
                checked += 1;
                if !r.passed {
                    failures.push((n, m, r.value.norm()));
                }
            }
        }
    }
    Ok(StrictReport { passed: failures.is_empty(), checked, failures })
}
