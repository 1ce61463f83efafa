//! Truncated moment sequences `γᵢⱼ = ∫ z̄ⁱzʲ dμ`, the moment matrix `M(k)`,
//! the Riesz functional, and rank / positivity / kernel computations.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, incremental_basis};
use crate::poly::{labels_up_to, Monomial, Polynomial};
use crate::scalar::{Complex64, GaussianRational, Scalar};

/// A complete, Hermitian moment sequence of order `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentSequence<F: Scalar> {
    k: u32,
    entries: BTreeMap<(u32, u32), F>,
}

impl<F: Scalar> MomentSequence<F> {
    /// Validates `entries`, which must cover every `(i, j)` with `i + j <= 2k`.
    pub fn new(k: u32, entries: BTreeMap<(u32, u32), F>) -> Result<Self> {
        if k == 0 {
            return Err(Error::ZeroOrder);
        }
        if let Some(&(i, j)) = entries.keys().find(|(i, j)| i + j > 2 * k) {
            return Err(Error::IndexOutOfRange(i, j, 2 * k));
        }
        for d in 0..=2 * k {
            for i in 0..=d {
                let j = d - i;
                let Some(v) = entries.get(&(i, j)) else {
                    return Err(Error::MissingMoment(i, j));
                };
                if i < j && entries[&(j, i)] != v.conj() {
                    return Err(Error::Asymmetric(i, j));
                }
                if i == j && !v.im().is_zero() {
                    return Err(Error::Asymmetric(i, j));
                }
            }
        }
        let g00 = &entries[&(0, 0)];
        if g00.to_c64().re <= 0.0 {
            return Err(Error::NonPositiveMass);
        }
        Ok(MomentSequence { k, entries })
    }

    /// Builds the sequence from `f(i, j)` for `i <= j`, completing the rest
    /// by conjugation.
    pub fn from_fn(k: u32, f: impl Fn(u32, u32) -> F) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for i in 0..=2 * k {
            for j in i..=2 * k - i {
                let v = f(i, j);
                if i == j {
                    entries.insert((i, i), v.re());
                } else {
                    entries.insert((j, i), v.conj());
                    entries.insert((i, j), v);
                }
            }
        }
        Self::new(k, entries)
    }

    pub fn k(&self) -> u32 {
        self.k
    }

    /// `γᵢⱼ`; panics outside `i + j <= 2k`.
    pub fn get(&self, i: u32, j: u32) -> &F {
        &self.entries[&(i, j)]
    }

    pub fn try_get(&self, i: u32, j: u32) -> Option<&F> {
        self.entries.get(&(i, j))
    }

    /// All entries, keyed by `(i, j)`.
    pub fn entries(&self) -> &BTreeMap<(u32, u32), F> {
        &self.entries
    }

    /// Euclidean norm over all entries.
    pub fn norm(&self) -> f64 {
        self.entries.values().map(|v| v.abs().powi(2)).sum::<f64>().sqrt()
    }

    /// Replaces `γᵢⱼ` by `value` and `γⱼᵢ` by its conjugate, skipping validation
    /// of positivity but keeping the Hermitian structure.
    pub fn with_entry(&self, i: u32, j: u32, value: F) -> Result<Self> {
        let mut entries = self.entries.clone();
        if !entries.contains_key(&(i, j)) {
            return Err(Error::IndexOutOfRange(i, j, 2 * self.k));
        }
        entries.insert((j, i), value.conj());
        entries.insert((i, j), value);
        Self::new(self.k, entries)
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> MomentSequence<G> {
        MomentSequence { k: self.k, entries: self.entries.iter().map(|(key, v)| (*key, f(v))).collect() }
    }

    pub fn to_approx(&self) -> MomentSequence<Complex64> {
        self.map(Scalar::to_c64)
    }

    pub fn as_exact(&self) -> Option<MomentSequence<GaussianRational>> {
        let entries = self.entries.iter().map(|(key, v)| Some((*key, v.as_exact()?))).collect::<Option<_>>()?;
        Some(MomentSequence { k: self.k, entries })
    }
}

/// `Λ(p) = Σ c_{ab} γ_{ab}` for `p = Σ c_{ab} z̄ᵃzᵇ`.
pub fn riesz<F: Scalar>(gamma: &MomentSequence<F>, p: &Polynomial<F>) -> Result<F> {
    let limit = 2 * gamma.k;
    if let Some(d) = p.degree().filter(|d| *d > limit) {
        return Err(Error::DegreeOverflow { degree: d, limit });
    }
    Ok(p.terms().fold(F::zero(), |acc, (m, c)| acc + c.clone() * gamma.get(m.w, m.z).clone()))
}

/// `M(k)` with rows and columns labelled by [`labels_up_to`]`(k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentMatrix<F: Scalar> {
    k: u32,
    labels: Vec<Monomial>,
    rows: Vec<Vec<F>>,
}

/// Entry at row `z̄ᵃzᵇ`, column `z̄ᶜzᵈ` is `γ_{b+c, a+d}`.
pub fn build_moment_matrix<F: Scalar>(gamma: &MomentSequence<F>) -> MomentMatrix<F> {
    moment_matrix_of_order(gamma, gamma.k)
}

/// `M(j)` for `j <= k`: the leading principal block of `M(k)`.
pub fn moment_matrix_of_order<F: Scalar>(gamma: &MomentSequence<F>, order: u32) -> MomentMatrix<F> {
    let labels = labels_up_to(order);
    let rows = labels
        .iter()
        .map(|r| labels.iter().map(|c| gamma.get(r.z + c.w, r.w + c.z).clone()).collect())
        .collect();
    MomentMatrix { k: order, labels, rows }
}

impl<F: Scalar> MomentMatrix<F> {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[Monomial] {
        &self.labels
    }

    pub fn rows(&self) -> &[Vec<F>] {
        &self.rows
    }

    pub fn entry(&self, i: usize, j: usize) -> &F {
        &self.rows[i][j]
    }

    /// The leading principal submatrix of the given order.
    pub fn principal(&self, order: u32) -> MomentMatrix<F> {
        let n = labels_up_to(order).len();
        MomentMatrix {
            k: order,
            labels: self.labels[..n].to_vec(),
            rows: self.rows[..n].iter().map(|r| r[..n].to_vec()).collect(),
        }
    }

    /// Coefficient vector of `p` in label order.
    pub fn coefficient_vector(&self, p: &Polynomial<F>) -> Result<Vec<F>> {
        if let Some((m, _)) = p.terms().find(|(m, _)| m.degree() > self.k) {
            return Err(Error::DegreeBound { monomial: *m, bound: self.k });
        }
        Ok(self.labels.iter().map(|m| p.coeff(m)).collect())
    }

    pub fn apply(&self, v: &[F]) -> Vec<F> {
        self.rows
            .iter()
            .map(|row| row.iter().zip(v).fold(F::zero(), |acc, (a, b)| acc + a.clone() * b.clone()))
            .collect()
    }

    /// `‖M p̂‖₂`.
    pub fn relation_residual(&self, p: &Polynomial<F>) -> Result<f64> {
        let v = self.coefficient_vector(p)?;
        Ok(norm2(&self.apply(&v)))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.rows.iter().flatten().map(|x| x.abs().powi(2)).sum::<f64>().sqrt()
    }

    pub fn to_approx(&self) -> MomentMatrix<Complex64> {
        MomentMatrix { k: self.k, labels: self.labels.clone(), rows: self.rows.iter().map(|r| r.iter().map(Scalar::to_c64).collect()).collect() }
    }

    /// Whether `p` is a column relation: exactly for exact fields, otherwise
    /// `‖M p̂‖ ≤ tol·‖M‖·‖p̂‖`.
    pub fn is_column_relation(&self, p: &Polynomial<F>, tol: f64) -> Result<bool> {
        let v = self.coefficient_vector(p)?;
        let mv = self.apply(&v);
        if F::EXACT {
            Ok(mv.iter().all(Scalar::is_zero))
        } else {
            Ok(norm2(&mv) <= tol * self.frobenius_norm() * norm2(&v))
        }
    }
}

fn norm2<F: Scalar>(v: &[F]) -> f64 {
    v.iter().map(|x| x.abs().powi(2)).sum::<f64>().sqrt()
}

impl<F: Scalar> fmt::Display for MomentMatrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.labels.iter().map(label_name).collect();
        writeln!(f, "{}", names.join("\t"))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Scalar::format_coeff).collect();
            writeln!(f, "{}", cells.join("\t"))?;
        }
        Ok(())
    }
}

/// Column label in the `Z`, `Z̄` notation: `1`, `Z`, `Zb`, `Z^2`, `ZZb`, ...
pub fn label_name(m: &Monomial) -> String {
    if m.degree() == 0 {
        return "1".into();
    }
    let mut s = String::new();
    for (name, e) in [("Z", m.z), ("Zb", m.w)] {
        match e {
            0 => {}
            1 => s.push_str(name),
            _ => s.push_str(&format!("{name}^{e}")),
        }
    }
    s
}

#[derive(Clone, Debug, PartialEq)]
pub struct PsdReport {
    pub psd: bool,
    /// `M(k−1)` is positive definite.
    pub strict_inner: bool,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

/// Positive semidefiniteness of `M(k)` and definiteness of `M(k−1)`.
///
/// Exact matrices are decided by pivoted symmetric elimination; approximate
/// ones by eigenvalues, `λ_min ≥ −tol·λ_max`.
pub fn psd_check<F: Scalar>(m: &MomentMatrix<F>, tol: f64) -> PsdReport {
    let eig = linalg::hermitian_eigenvalues(&linalg::to_dmatrix(&m.rows));
    let min_eigenvalue = eig.first().copied().unwrap_or(0.0);
    let max_eigenvalue = eig.last().copied().unwrap_or(0.0);
    let inner = m.principal(m.k.saturating_sub(1));
    let exact = |mat: &MomentMatrix<F>| -> Option<Vec<Vec<GaussianRational>>> {
        mat.rows.iter().map(|r| r.iter().map(Scalar::as_exact).collect()).collect()
    };
    let (psd, strict_inner) = match (F::EXACT, exact(m), exact(&inner)) {
        (true, Some(outer), Some(inner_rows)) => {
            let d = linalg::exact_definiteness(&outer);
            let di = linalg::exact_definiteness(&inner_rows);
            (d.psd, di.psd && di.rank == inner_rows.len())
        }
        _ => {
            let psd = min_eigenvalue >= -tol * max_eigenvalue.abs();
            let ie = linalg::hermitian_eigenvalues(&linalg::to_dmatrix(&inner.rows));
            let strict = ie.first().copied().unwrap_or(0.0) > tol * ie.last().copied().unwrap_or(0.0).abs();
            (psd, strict)
        }
    };
    PsdReport { psd, strict_inner, min_eigenvalue, max_eigenvalue }
}

/// Rank: exact elimination for exact fields, otherwise the number of singular
/// values above `tol·σ_max`.
pub fn numeric_rank<F: Scalar>(m: &MomentMatrix<F>, tol: f64) -> usize {
    if F::EXACT {
        return linalg::exact_rank(&m.rows);
    }
    let s = linalg::singular_values(&linalg::to_dmatrix(&m.rows));
    let cutoff = tol * s.first().copied().unwrap_or(0.0);
    s.iter().filter(|x| **x > cutoff).count()
}

/// A column relation `p(Z, Z̄) ≡ 0`: monic, with `M p̂ ≈ 0`.
#[derive(Clone, Debug, PartialEq)]
pub struct ColumnRelation<F: Scalar> {
    pub polynomial: Polynomial<F>,
    /// `p̂` in label order.
    pub kernel: Vec<F>,
    /// `‖M p̂‖₂`.
    pub residual: f64,
}

/// Kernel of `M(k)` as monic column relations.
///
/// Columns are visited in ascending deglex order; each column dependent on the
/// independent columns before it yields the relation `m − Σ c_q q`, so relation
/// leading monomials are distinct and appear in no other relation.
pub fn column_relations<F: Scalar>(m: &MomentMatrix<F>, tol: f64) -> Vec<ColumnRelation<F>> {
    let n = m.size();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| m.labels[i]);
    let column = |j: usize| -> Vec<F> { m.rows.iter().map(|r| r[j].clone()).collect() };
    let mut basis = incremental_basis::<F>(tol);
    let mut independent: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    for j in order {
        match basis.insert(column(j)) {
            None => independent.push(j),
            Some(coeffs) => {
                let mut p = Polynomial::monomial(m.labels[j]);
                for (q, c) in independent.iter().zip(coeffs) {
                    p.add_term(m.labels[*q], -c);
                }
                let kernel = m.coefficient_vector(&p).expect("labels within degree k");
                let residual = norm2(&m.apply(&kernel));
                out.push(ColumnRelation { polynomial: p, kernel, residual });
            }
        }
    }
    out
}
