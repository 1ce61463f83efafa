//! Existence of a representing measure for a moment sequence with a column
//! relation, and its extraction.

mod conditions;

use std::fmt;

use nalgebra::{DMatrix, DVector};

pub use conditions::{
    magnitude, numerical_conditions, primitive_form, strict_consistency, vanishing_test, ConditionResult, LinearForm, MomentRef,
    Multiplier, NumericalCondition, StrictReport,
};

use crate::error::{Error, Result};
use crate::groebner::{refine_to_exact, vanishing_ideal, GroebnerBasis};
use crate::moment::{build_moment_matrix, column_relations, numeric_rank, psd_check, MomentMatrix, MomentSequence, PsdReport};
use crate::poly::{divide, Monomial, Polynomial};
use crate::scalar::{rationalize_c64, Complex64, GaussianRational, Scalar};
use crate::variety::{solve_conjugate_system, Variety};

#[derive(Clone, Debug, PartialEq)]
pub struct Atom<F: Scalar> {
    pub z: F,
    /// Real and positive.
    pub density: F,
}

/// A finitely atomic positive measure `Σ ρₗ δ_{zₗ}`.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomicMeasure<F: Scalar> {
    atoms: Vec<Atom<F>>,
}

fn same_point<F: Scalar>(a: &F, b: &F) -> bool {
    if F::EXACT {
        a == b
    } else {
        (a.clone() - b.clone()).abs() <= 1e-12 * a.abs().max(b.abs()).max(1.0)
    }
}

impl<F: Scalar> AtomicMeasure<F> {
    /// Atoms with zero density are dropped; negative or non-real densities and
    /// repeated points are rejected.
    pub fn new(atoms: impl IntoIterator<Item = (F, F)>) -> Result<Self> {
        let mut kept: Vec<Atom<F>> = Vec::new();
        for (z, density) in atoms {
            let d = density.to_c64();
            let real = if F::EXACT { density.im().is_zero() } else { d.im.abs() <= 1e-12 * d.re.abs().max(1.0) };
            if !real || !d.re.is_finite() {
                return Err(Error::InvalidMeasure(format!("density {} is not real", density.format_coeff())));
            }
            if density.is_zero() {
                continue;
            }
            if d.re < 0.0 {
                return Err(Error::InvalidMeasure(format!("negative density {}", density.format_coeff())));
            }
            if kept.iter().any(|a| same_point(&a.z, &z)) {
                return Err(Error::InvalidMeasure(format!("repeated atom {}", z.format_coeff())));
            }
            kept.push(Atom { z, density: density.re() });
        }
        if kept.is_empty() {
            return Err(Error::InvalidMeasure("no atoms with positive density".into()));
        }
        Ok(AtomicMeasure { atoms: kept })
    }

    pub fn atoms(&self) -> &[Atom<F>] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn zs(&self) -> Vec<F> {
        self.atoms.iter().map(|a| a.z.clone()).collect()
    }

    pub fn densities(&self) -> Vec<F> {
        self.atoms.iter().map(|a| a.density.clone()).collect()
    }

    pub fn total_mass(&self) -> F {
        self.atoms.iter().fold(F::zero(), |acc, a| acc + a.density.clone())
    }

    pub fn to_approx(&self) -> AtomicMeasure<Complex64> {
        AtomicMeasure { atoms: self.atoms.iter().map(|a| Atom { z: a.z.to_c64(), density: a.density.to_c64() }).collect() }
    }

    /// The density of the atom at `z`, if there is one.
    pub fn density_at(&self, z: &F) -> Option<&F> {
        self.atoms.iter().find(|a| same_point(&a.z, z)).map(|a| &a.density)
    }
}

impl<F: Scalar> fmt::Display for AtomicMeasure<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (n, a) in self.atoms.iter().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}·δ[{}]", a.density.format_coeff(), a.z.format_coeff())?;
        }
        Ok(())
    }
}

/// `γᵢⱼ = Σₗ ρₗ conj(zₗ)ⁱ zₗʲ` for `i + j ≤ 2k`.
pub fn generate_moments<F: Scalar>(measure: &AtomicMeasure<F>, k: u32) -> Result<MomentSequence<F>> {
    let n = 2 * k as usize;
    let powers: Vec<(Vec<F>, Vec<F>)> = measure
        .atoms
        .iter()
        .map(|a| {
            let mut zp = vec![F::one()];
            let mut wp = vec![F::one()];
            for e in 1..=n {
                zp.push(zp[e - 1].clone() * a.z.clone());
                wp.push(wp[e - 1].clone() * a.z.conj());
            }
            (wp, zp)
        })
        .collect();
    MomentSequence::from_fn(k, |i, j| {
        measure.atoms.iter().zip(&powers).fold(F::zero(), |acc, (a, (wp, zp))| {
            acc + a.density.clone() * wp[i as usize].clone() * zp[j as usize].clone()
        })
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Yes,
    No,
    /// The input lies outside the hypotheses under which the check decides.
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Yes => "yes",
            Verdict::No => "no",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

/// The basis used for the conditions: exact when it could be recovered
/// exactly, otherwise floating point.
#[derive(Clone, Debug, PartialEq)]
pub enum BasisData {
    Exact(GroebnerBasis<GaussianRational>),
    Approx(GroebnerBasis<Complex64>),
}

impl BasisData {
    pub fn len(&self) -> usize {
        match self {
            BasisData::Exact(g) => g.len(),
            BasisData::Approx(g) => g.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, BasisData::Exact(_))
    }

    pub fn leading_monomials(&self) -> Vec<Monomial> {
        match self {
            BasisData::Exact(g) => g.leading_monomials(),
            BasisData::Approx(g) => g.leading_monomials(),
        }
    }

    pub fn to_approx(&self) -> GroebnerBasis<Complex64> {
        match self {
            BasisData::Exact(g) => g.to_approx(),
            BasisData::Approx(g) => g.clone(),
        }
    }

    /// Elements in primitive form, as text.
    pub fn element_strings(&self) -> Vec<String> {
        match self {
            BasisData::Exact(g) => g.elements().iter().map(|e| primitive_form(e).to_string()).collect(),
            BasisData::Approx(g) => g.elements().iter().map(|e| tidy(e, 1e-12).to_string()).collect(),
        }
    }
}

/// Zeroes real and imaginary parts below `tol·max|c|`, for display.
pub fn tidy(p: &Polynomial<Complex64>, tol: f64) -> Polynomial<Complex64> {
    let cutoff = tol * p.max_abs_coeff();
    let part = |x: f64| if x.abs() <= cutoff { 0.0 } else { x };
    p.map(|c| Complex64::new(part(c.re), part(c.im)))
}

/// Conditions attached to one basis element `g`.
#[derive(Clone, Debug, PartialEq)]
pub struct ElementReport {
    pub polynomial: String,
    pub lambda_g: ConditionResult,
    pub lambda_zg: ConditionResult,
    /// `‖M ĝ‖`; `None` when `deg g > k` and `ĝ` is not a column vector of `M(k)`.
    pub relation_residual: Option<f64>,
    pub relation_holds: Option<bool>,
}

#[derive(Clone, Debug)]
pub struct CheckReport {
    pub k: u32,
    pub psd: PsdReport,
    pub relation_residual: f64,
    pub is_relation: bool,
    pub rank: usize,
    pub nullity: usize,
    /// Leading monomials of the column relations of `M(k)`.
    pub relation_leading: Vec<Monomial>,
    pub variety: Option<Variety>,
    pub extremal: bool,
    pub basis: Option<BasisData>,
    pub elements: Vec<ElementReport>,
    /// `Λ(g) = Λ(z·g) = 0` for every basis element.
    pub condition2: Option<bool>,
    /// `g(Z, Z̄) ≡ 0` for every basis element of degree at most `k`.
    pub condition3: Option<bool>,
    pub strict: Option<StrictReport>,
    pub measure: Option<AtomicMeasure<Complex64>>,
    /// The measure with rational atoms and densities, when one reproduces `γ` exactly.
    pub exact_measure: Option<AtomicMeasure<GaussianRational>>,
    pub verdict: Verdict,
    pub reason: String,
    pub warnings: Vec<String>,
}

impl CheckReport {
    pub fn v(&self) -> Option<usize> {
        self.variety.as_ref().map(Variety::len)
    }

    fn finish(mut self, verdict: Verdict, reason: impl Into<String>) -> Self {
        self.verdict = verdict;
        self.reason = reason.into();
        self
    }
}

fn evaluate_basis<G: Scalar>(
    gamma: &MomentSequence<G>,
    m: &MomentMatrix<G>,
    basis: &GroebnerBasis<G>,
    tol: f64,
) -> Result<(Vec<ElementReport>, StrictReport)> {
    let k = gamma.k();
    let z = Polynomial::<G>::z();
    let mut out = Vec::new();
    for g in basis.elements() {
        let lambda_g = vanishing_test(gamma, g, tol)?;
        let lambda_zg = vanishing_test(gamma, &(&z * g), tol)?;
        let (relation_residual, relation_holds) = if g.degree().unwrap_or(0) <= k {
            (Some(m.relation_residual(g)?), Some(m.is_column_relation(g, tol)?))
        } else {
            (None, None)
        };
        let polynomial = if G::EXACT { primitive_form(g).to_string() } else { tidy(&g.to_approx(), 1e-12).to_string() };
        out.push(ElementReport { polynomial, lambda_g, lambda_zg, relation_residual, relation_holds });
    }
    Ok((out, strict_consistency(gamma, basis, tol)?))
}

/// Runs the full decision procedure for `γ` with column relation `p`.
///
/// The answer concerns measures supported in the zero set of `p`: when `p` is
/// not a column relation of `M(k)` no such measure exists. When `p` is one,
/// `rank M(k) ≤ card supp μ ≤ card 𝒱` for every representing measure, so a rank
/// above `card 𝒱` also means no. A rank below `card 𝒱` is outside the range the
/// conditions decide. In the extremal case the verdict is yes exactly when the
/// moment conditions hold for the whole Gröbner basis of the vanishing ideal of
/// `𝒱` and a measure on `𝒱` is recovered.
///
/// Every stage that can be evaluated is, whatever the verdict, so the report
/// shows which conditions a rejected sequence violates.
pub fn check_extremal<F: Scalar>(gamma: &MomentSequence<F>, p: &Polynomial<F>, tol: f64) -> Result<CheckReport> {
    check_extremal_on(gamma, p, &solve_conjugate_system(p, tol)?, tol)
}

/// [`check_extremal`] with `𝒵(p)` already computed.
pub fn check_extremal_on<F: Scalar>(
    gamma: &MomentSequence<F>,
    p: &Polynomial<F>,
    variety: &Variety,
    tol: f64,
) -> Result<CheckReport> {
    let k = gamma.k();
    let m = build_moment_matrix(gamma);
    let psd = psd_check(&m, tol);
    let relation_residual = m.relation_residual(p)?;
    let is_relation = m.is_column_relation(p, tol)?;
    let rank = numeric_rank(&m, tol);
    let nullity = m.size() - rank;
    let relation_leading = column_relations(&m, tol).iter().filter_map(|r| r.polynomial.leading_monomial()).collect();
    let v = variety.len();
    let mut report = CheckReport {
        k,
        psd,
        relation_residual,
        is_relation,
        rank,
        nullity,
        relation_leading,
        variety: Some(variety.clone()),
        extremal: rank == v,
        basis: None,
        elements: Vec::new(),
        condition2: None,
        condition3: None,
        strict: None,
        measure: None,
        exact_measure: None,
        verdict: Verdict::Inconclusive,
        reason: String::new(),
        warnings: Vec::new(),
    };
    if !report.psd.strict_inner {
        report.warnings.push(format!("M({}) is not positive definite", k.saturating_sub(1)));
    }

    let mut degree_too_high = false;
    if v > 0 && variety.all_simple() {
        let coords = variety.coordinates();
        let approx_basis = vanishing_ideal::<Complex64>(&coords, tol)?;
        degree_too_high = approx_basis.elements().iter().any(|g| g.degree().unwrap_or(0) + 1 > 2 * k);
        if degree_too_high {
            report.basis = Some(BasisData::Approx(approx_basis));
        } else {
            evaluate_conditions(&mut report, gamma, approx_basis, &coords, tol)?;
        }
    }

    let conditions_hold = report.condition2 == Some(true)
        && report.condition3 == Some(true)
        && report.strict.as_ref().is_some_and(|s| s.passed);
    if !report.psd.psd {
        return Ok(report.finish(Verdict::No, "M(k) is not positive semidefinite"));
    }
    if !is_relation {
        return Ok(report.finish(Verdict::No, "p is not a column relation of M(k)"));
    }
    if rank > v {
        return Ok(report.finish(Verdict::No, format!("rank M(k) = {rank} exceeds card V = {v}")));
    }
    if !variety.all_simple() {
        return Ok(report.finish(Verdict::Inconclusive, "the variety has a multiple point"));
    }
    if rank < v {
        return Ok(report.finish(Verdict::Inconclusive, format!("not extremal: rank M(k) = {rank} < card V = {v}")));
    }
    if degree_too_high {
        return Ok(report.finish(Verdict::Inconclusive, "a basis element has degree above 2k − 1"));
    }
    if !conditions_hold {
        return Ok(report.finish(Verdict::No, "a moment condition on the vanishing ideal fails"));
    }
    match extract_measure(gamma, &variety.zs(), tol) {
        Ok(mu) => {
            if mu.len() < v {
                report.warnings.push(format!("measure supported on {} of the {v} points", mu.len()));
            }
            if F::EXACT {
                report.exact_measure = gamma.as_exact().and_then(|g| exact_measure(&mu, &g));
            }
            report.measure = Some(mu);
            Ok(report.finish(Verdict::Yes, "extremal, consistent, measure recovered"))
        }
        Err(e) => {
            report.warnings.push("conditions hold but extraction failed".into());
            Ok(report.finish(Verdict::No, e.to_string()))
        }
    }
}

/// Fills in the basis and the conditions (2), (3) and full consistency,
/// exactly when both `γ` and the basis can be made exact.
fn evaluate_conditions<F: Scalar>(
    report: &mut CheckReport,
    gamma: &MomentSequence<F>,
    approx_basis: GroebnerBasis<Complex64>,
    coords: &[(Complex64, Complex64)],
    tol: f64,
) -> Result<()> {
    let exact = if F::EXACT { gamma.as_exact().zip(refine_to_exact(&approx_basis, coords, tol)) } else { None };
    let (basis, (elements, strict)) = match exact {
        Some((gamma_exact, basis)) => {
            let mx = build_moment_matrix(&gamma_exact);
            let eval = evaluate_basis(&gamma_exact, &mx, &basis, tol)?;
            (BasisData::Exact(basis), eval)
        }
        None => {
            let ga = gamma.to_approx();
            let ma = build_moment_matrix(&ga);
            let eval = evaluate_basis(&ga, &ma, &approx_basis, tol)?;
            (BasisData::Approx(approx_basis), eval)
        }
    };
    let condition2 = elements.iter().all(|e| e.lambda_g.passed && e.lambda_zg.passed);
    let condition3 = elements.iter().all(|e| e.relation_holds != Some(false));
    if condition2 != strict.passed {
        report.warnings.push(format!(
            "condition (2) {} but full consistency {}",
            if condition2 { "holds" } else { "fails" },
            if strict.passed { "holds" } else { "fails" }
        ));
    }
    if condition2 != condition3 {
        report.warnings.push("conditions (2) and (3) disagree".into());
    }
    report.basis = Some(basis);
    report.elements = elements;
    report.condition2 = Some(condition2);
    report.condition3 = Some(condition3);
    report.strict = Some(strict);
    Ok(())
}

/// Rationalises a floating measure and keeps it when it reproduces `γ` exactly.
pub fn exact_measure(mu: &AtomicMeasure<Complex64>, gamma: &MomentSequence<GaussianRational>) -> Option<AtomicMeasure<GaussianRational>> {
    let atoms = mu
        .atoms
        .iter()
        .map(|a| {
            let z = rationalize_c64(a.z, 1_000_000, 1e-9 * a.z.norm().max(1.0))?;
            let rho = rationalize_c64(Complex64::new(a.density.re, 0.0), 1_000_000, 1e-9 * a.density.re.abs().max(1.0))?;
            Some((z, rho))
        })
        .collect::<Option<Vec<_>>>()?;
    let exact = AtomicMeasure::new(atoms).ok()?;
    (generate_moments(&exact, gamma.k()).ok()? == *gamma).then_some(exact)
}

/// Densities of a measure on the points `zs` reproducing `γ`, by least squares
/// over every moment.
///
/// Accepted when the residual is at most `tol·‖γ‖` and no density is below
/// `−tol·γ₀₀`; densities of magnitude at most `tol·γ₀₀` are dropped.
pub fn extract_measure<F: Scalar>(gamma: &MomentSequence<F>, zs: &[Complex64], tol: f64) -> Result<AtomicMeasure<Complex64>> {
    if zs.is_empty() {
        return Err(Error::NoMeasureOnVariety("the variety is empty".into()));
    }
    let keys: Vec<(u32, u32)> = gamma.entries().keys().copied().collect();
    let n = zs.len();
    let mut a = DMatrix::<f64>::zeros(2 * keys.len(), n);
    let mut b = DVector::<f64>::zeros(2 * keys.len());
    for (r, &(i, j)) in keys.iter().enumerate() {
        for (l, z) in zs.iter().enumerate() {
            let v = z.conj().powu(i) * z.powu(j);
            a[(2 * r, l)] = v.re;
            a[(2 * r + 1, l)] = v.im;
        }
        let g = gamma.get(i, j).to_c64();
        b[2 * r] = g.re;
        b[2 * r + 1] = g.im;
    }
    let scales: Vec<f64> = (0..n).map(|l| a.column(l).norm().max(f64::MIN_POSITIVE)).collect();
    let mut scaled = a.clone();
    for (l, s) in scales.iter().enumerate() {
        scaled.column_mut(l).scale_mut(1.0 / s);
    }
    let svd = scaled.clone().svd(true, true);
    let cutoff = 1e-13 * svd.singular_values.max();
    let solve = |rhs: &DVector<f64>| svd.solve(rhs, cutoff).map_err(|e| Error::NoMeasureOnVariety(e.to_string()));
    // The SVD factors are only accurate to ~1e-8 on some inputs; refinement
    // recovers the remaining digits.
    let mut y = solve(&b)?;
    for _ in 0..3 {
        y += solve(&(&b - &scaled * &y))?;
    }
    let rho: Vec<f64> = (0..n).map(|l| y[l] / scales[l]).collect();
    let residual = (&a * DVector::from_vec(rho.clone()) - &b).norm();
    if residual > tol * b.norm() {
        return Err(Error::NoMeasureOnVariety(format!("residual {residual:e} exceeds tol·‖γ‖")));
    }
    let mass = gamma.get(0, 0).to_c64().re;
    if let Some((l, r)) = rho.iter().enumerate().find(|(_, r)| **r < -tol * mass) {
        return Err(Error::NoMeasureOnVariety(format!("negative density {r:e} at {}", zs[l])));
    }
    let atoms = zs
        .iter()
        .zip(&rho)
        .filter(|(_, r)| r.abs() > tol * mass)
        .map(|(z, r)| (*z, Complex64::new(*r, 0.0)));
    AtomicMeasure::new(atoms).map_err(|e| Error::NoMeasureOnVariety(e.to_string()))
}

/// `p = Σ aⱼ gⱼ` from division by `G`.
#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition<F: Scalar> {
    pub quotients: Vec<Polynomial<F>>,
    /// Largest quotient degree; `None` when every quotient is zero.
    pub max_degree: Option<u32>,
    /// `deg aⱼ ≤ k` for every quotient.
    pub within_bound: bool,
}

/// Writes `p` over the basis by division. Fails with the normal form when `p`
/// is not in the ideal; over approximate fields remainder coefficients below
/// `tol·max(1, max|p|)` are ignored.
pub fn representation_decompose<F: Scalar>(
    p: &Polynomial<F>,
    basis: &GroebnerBasis<F>,
    k: u32,
    tol: f64,
) -> Result<Decomposition<F>> {
    let d = divide(p, basis.elements());
    let scale = p.max_abs_coeff().max(1.0);
    if d.remainder.terms().any(|(_, c)| !c.is_negligible(scale, tol)) {
        return Err(Error::NotInIdeal(d.remainder.to_string()));
    }
    let max_degree = d.quotients.iter().filter_map(Polynomial::degree).max();
    Ok(Decomposition { within_bound: max_degree.is_none_or(|m| m <= k), max_degree, quotients: d.quotients })
}
