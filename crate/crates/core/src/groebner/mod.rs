//! Gröbner bases under deglex.
//!
//! [`buchberger`] computes the reduced basis of an ideal given by generators;
//! [`vanishing_ideal`] computes the reduced basis of the ideal of a finite point
//! set in ℂ² by the Buchberger–Möller evaluation method.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::incremental_basis;
use crate::poly::{divide, Monomial, Polynomial};
use crate::scalar::{c64_to_exact, rationalize_c64, Complex64, GaussianRational, Scalar};

/// Where a basis came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Generators,
    Points,
}

/// A reduced monic Gröbner basis under deglex, sorted by ascending leading monomial.
#[derive(Clone, Debug, PartialEq)]
pub struct GroebnerBasis<F: Scalar> {
    elements: Vec<Polynomial<F>>,
    provenance: Provenance,
}

/// Monomials outside the leading-monomial ideal, ascending in deglex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StandardMonomialSet {
    monomials: Vec<Monomial>,
}

impl StandardMonomialSet {
    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.monomials.binary_search(m).is_ok()
    }

    pub fn max_degree(&self) -> Option<u32> {
        self.monomials.iter().map(Monomial::degree).max()
    }
}

impl<F: Scalar> GroebnerBasis<F> {
    /// Wraps polynomials already known to form a reduced basis; they are made
    /// monic and sorted.
    pub fn from_reduced(elements: Vec<Polynomial<F>>, provenance: Provenance) -> Self {
        let mut elements: Vec<_> = elements.into_iter().filter(|g| !g.is_zero()).map(|g| g.monic()).collect();
        elements.sort_by_key(|g| g.leading_monomial());
        GroebnerBasis { elements, provenance }
    }

    pub fn elements(&self) -> &[Polynomial<F>] {
        &self.elements
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        self.elements.iter().filter_map(Polynomial::leading_monomial).collect()
    }

    pub fn is_unit_ideal(&self) -> bool {
        self.leading_monomials().contains(&Monomial::ONE)
    }

    pub fn normal_form(&self, p: &Polynomial<F>) -> Polynomial<F> {
        divide(p, &self.elements).remainder
    }

    /// Exact membership over exact fields; over approximate fields the normal
    /// form must be negligible relative to `p`.
    pub fn contains(&self, p: &Polynomial<F>, tol: f64) -> bool {
        let nf = self.normal_form(p);
        if F::EXACT {
            nf.is_zero()
        } else {
            nf.max_abs_coeff() <= tol * p.max_abs_coeff().max(1.0)
        }
    }

    pub fn standard_monomials(&self) -> Result<StandardMonomialSet> {
        let lms = self.leading_monomials();
        let zmax = lms.iter().filter(|m| m.is_pure_z()).map(|m| m.z).min().ok_or(Error::InfiniteVariety("z"))?;
        let wmax = lms.iter().filter(|m| m.is_pure_w()).map(|m| m.w).min().ok_or(Error::InfiniteVariety("w"))?;
        let mut monomials: Vec<Monomial> = (0..wmax)
            .flat_map(|w| (0..zmax).map(move |z| Monomial::new(w, z)))
            .filter(|m| !lms.iter().any(|l| l.divides(m)))
            .collect();
        monomials.sort();
        Ok(StandardMonomialSet { monomials })
    }

    /// Every S-polynomial reduces to zero (to within `tol` of its scale over
    /// approximate fields).
    pub fn satisfies_buchberger_criterion(&self, tol: f64) -> bool {
        let g = &self.elements;
        (0..g.len()).all(|i| {
            (i + 1..g.len()).all(|j| {
                let s = s_polynomial(&g[i], &g[j]);
                let nf = self.normal_form(&s);
                if F::EXACT {
                    nf.is_zero()
                } else {
                    nf.max_abs_coeff() <= tol * g[i].max_abs_coeff().max(g[j].max_abs_coeff())
                }
            })
        })
    }

    /// No monomial of any element is divisible by another element's leading monomial.
    pub fn is_reduced(&self) -> bool {
        let lms = self.leading_monomials();
        self.elements.iter().enumerate().all(|(i, g)| {
            g.leading_coefficient().is_some_and(Scalar::is_one)
                && g.monomials().all(|m| lms.iter().enumerate().all(|(j, l)| j == i || !l.divides(m)))
        })
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> GroebnerBasis<G> {
        GroebnerBasis { elements: self.elements.iter().map(|g| g.map(&f)).collect(), provenance: self.provenance }
    }

    pub fn to_approx(&self) -> GroebnerBasis<Complex64> {
        self.map(Scalar::to_c64)
    }
}

impl<F: Scalar> fmt::Display for GroebnerBasis<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, g) in self.elements.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, "]")
    }
}

pub fn normal_form<F: Scalar>(p: &Polynomial<F>, g: &GroebnerBasis<F>) -> Polynomial<F> {
    g.normal_form(p)
}

pub fn standard_monomials<F: Scalar>(g: &GroebnerBasis<F>) -> Result<StandardMonomialSet> {
    g.standard_monomials()
}

/// `S(f, g) = (L/LT(f))·f − (L/LT(g))·g` with `L = lcm(LM f, LM g)`; zero if
/// either argument is zero.
pub fn s_polynomial<F: Scalar>(f: &Polynomial<F>, g: &Polynomial<F>) -> Polynomial<F> {
    let (Some((mf, cf)), Some((mg, cg))) = (f.leading_term(), g.leading_term()) else {
        return Polynomial::zero();
    };
    let l = mf.lcm(&mg);
    let a = f.mul_term(mf.quotient_of(&l).expect("lcm"), &(F::one() / cf.clone()));
    let b = g.mul_term(mg.quotient_of(&l).expect("lcm"), &(F::one() / cg.clone()));
    let mut s = &a - &b;
    s.remove_term(&l);
    s
}

/// Reduced monic Gröbner basis of the ideal generated by `gens`.
///
/// Over an approximate field the generators are first rationalised and the
/// basis is computed exactly.
pub fn buchberger<F: Scalar>(gens: &[Polynomial<F>]) -> Result<GroebnerBasis<F>> {
    if gens.iter().all(Polynomial::is_zero) {
        return Err(Error::ZeroIdeal);
    }
    if F::EXACT {
        return Ok(buchberger_exact_field(gens));
    }
    let exact: Vec<Polynomial<GaussianRational>> = gens.iter().map(|g| g.map(rationalize_coefficient)).collect();
    Ok(buchberger_exact_field(&exact).map(F::from_exact))
}

fn rationalize_coefficient<F: Scalar>(c: &F) -> GaussianRational {
    if let Some(q) = c.as_exact() {
        return q;
    }
    let c = c.to_c64();
    rationalize_c64(c, 1_000_000, 1e-12 * c.norm().max(1.0))
        .or_else(|| c64_to_exact(c))
        .unwrap_or_else(GaussianRational::zero)
}

fn buchberger_exact_field<F: Scalar>(gens: &[Polynomial<F>]) -> GroebnerBasis<F> {
    let mut basis: Vec<Polynomial<F>> = gens.iter().filter(|g| !g.is_zero()).map(|g| g.monic()).collect();
    let mut pending: BTreeSet<(usize, usize)> = BTreeSet::new();
    for j in 0..basis.len() {
        for i in 0..j {
            pending.insert((i, j));
        }
    }
    while let Some(pair) = pending.pop_first() {
        let (i, j) = pair;
        let (li, lj) = (lm(&basis[i]), lm(&basis[j]));
        if li.is_coprime(&lj) {
            continue;
        }
        let l = li.lcm(&lj);
        let chain = (0..basis.len()).any(|k| {
            k != i
                && k != j
                && lm(&basis[k]).divides(&l)
                && !pending.contains(&ordered(i, k))
                && !pending.contains(&ordered(j, k))
        });
        if chain {
            continue;
        }
        let r = divide(&s_polynomial(&basis[i], &basis[j]), &basis).remainder;
        if r.is_zero() {
            continue;
        }
        let n = basis.len();
        basis.push(r.monic());
        for k in 0..n {
            pending.insert((k, n));
        }
    }
    GroebnerBasis::from_reduced(reduce_basis(basis), Provenance::Generators)
}

fn lm<F: Scalar>(p: &Polynomial<F>) -> Monomial {
    p.leading_monomial().expect("nonzero basis element")
}

fn ordered(a: usize, b: usize) -> (usize, usize) {
    (a.min(b), a.max(b))
}

/// Minimalises, then interreduces, a Gröbner basis.
fn reduce_basis<F: Scalar>(mut basis: Vec<Polynomial<F>>) -> Vec<Polynomial<F>> {
    basis.sort_by_key(lm);
    let mut minimal: Vec<Polynomial<F>> = Vec::new();
    for g in basis {
        if !minimal.iter().any(|h| lm(h).divides(&lm(&g))) {
            minimal.push(g);
        }
    }
    let mut reduced = Vec::with_capacity(minimal.len());
    for i in 0..minimal.len() {
        let others: Vec<_> = minimal.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, g)| g.clone()).collect();
        let g = &minimal[i];
        let (m, c) = g.leading_term().map(|(m, c)| (m, c.clone())).expect("nonzero");
        let mut tail = g.clone();
        tail.remove_term(&m);
        let mut r = divide(&tail, &others).remainder;
        r.add_term(m, c);
        reduced.push(r.monic());
    }
    reduced
}

/// Reduced monic basis of the ideal of `points` ⊂ ℂ² (Buchberger–Möller).
///
/// Monomials are visited in ascending deglex order; one whose evaluation
/// vector depends on those of the standard monomials found so far yields a
/// basis element. Over approximate fields a vector counts as dependent when
/// its orthogonal residual is at most `tol` times the largest accepted one.
pub fn vanishing_ideal<F: Scalar>(points: &[(F, F)], tol: f64) -> Result<GroebnerBasis<F>> {
    if points.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    check_distinct(points, tol)?;
    let mut independent = incremental_basis::<F>(tol);
    let mut standard: Vec<Monomial> = Vec::new();
    let mut elements: Vec<Polynomial<F>> = Vec::new();
    for d in 0.. {
        let mut any_new = false;
        let mut degree: Vec<Monomial> = Monomial::of_degree(d).collect();
        degree.sort();
        for m in degree {
            if elements.iter().any(|g| lm(g).divides(&m)) {
                continue;
            }
            any_new = true;
            let v: Vec<F> = points.iter().map(|(z, w)| z.pow(m.z) * w.pow(m.w)).collect();
            match independent.insert(v) {
                None => standard.push(m),
                Some(coeffs) => {
                    let mut g = Polynomial::monomial(m);
                    for (s, c) in standard.iter().zip(coeffs) {
                        g.add_term(*s, -c);
                    }
                    elements.push(g);
                }
            }
        }
        if !any_new {
            break;
        }
    }
    Ok(GroebnerBasis::from_reduced(elements, Provenance::Points))
}

fn check_distinct<F: Scalar>(points: &[(F, F)], tol: f64) -> Result<()> {
    for (j, (zj, wj)) in points.iter().enumerate() {
        for (i, (zi, wi)) in points[..j].iter().enumerate() {
            let same = if F::EXACT {
                zi == zj && wi == wj
            } else {
                let (a, b) = (zi.to_c64(), wi.to_c64());
                let (c, d) = (zj.to_c64(), wj.to_c64());
                let scale = 1.0f64.max(a.norm()).max(b.norm()).max(c.norm()).max(d.norm());
                (a - c).norm() + (b - d).norm() <= tol * scale
            };
            if same {
                return Err(Error::NonSimplePoints(i, j));
            }
        }
    }
    Ok(())
}

/// Attempts to recover an exact basis from a numerically computed one.
///
/// Each coefficient is replaced by a nearby rational with small denominator;
/// the candidate is accepted only if it is exactly a reduced Gröbner basis,
/// has as many standard monomials as there are points, and vanishes on the
/// points to within `tol`.
pub fn refine_to_exact(
    approx: &GroebnerBasis<Complex64>,
    points: &[(Complex64, Complex64)],
    tol: f64,
) -> Option<GroebnerBasis<GaussianRational>> {
    let elements = approx
        .elements()
        .iter()
        .map(|g| g.chop(1e-12).try_map(|c| rationalize_c64(*c, 1_000_000_000, 1e-11 * c.norm().max(1.0))))
        .collect::<Option<Vec<_>>>()?;
    let exact = GroebnerBasis::from_reduced(elements, approx.provenance());
    if exact.leading_monomials() != approx.leading_monomials()
        || !exact.is_reduced()
        || !exact.satisfies_buchberger_criterion(0.0)
    {
        return None;
    }
    if exact.standard_monomials().ok()?.len() != points.len() {
        return None;
    }
    let vanishes = exact.elements().iter().all(|g| {
        points.iter().all(|(z, w)| g.evaluate_c64(*z, *w).norm() <= tol * g.evaluation_scale(*z, *w).max(1.0))
    });
    vanishes.then_some(exact)
}
