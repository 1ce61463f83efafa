//! Small dense linear-algebra kernels shared by the Gröbner and moment code.

use nalgebra::DMatrix;

use crate::scalar::{Complex64, Scalar};

/// Vectors inserted one at a time, in a fixed order; each is either accepted
/// as independent of its predecessors or expressed in terms of the accepted ones.
pub(crate) trait IncrementalBasis<F> {
    /// `None` if `v` was accepted; otherwise the coefficients `c` with
    /// `v = Σ c[j]·accepted[j]`.
    fn insert(&mut self, v: Vec<F>) -> Option<Vec<F>>;
    fn len(&self) -> usize;
}

/// Exact zero test, so only sensible over an exact field.
pub(crate) struct ExactEchelon<F> {
    rows: Vec<(usize, Vec<F>, Vec<F>)>,
}

impl<F: Scalar> ExactEchelon<F> {
    pub fn new() -> Self {
        ExactEchelon { rows: Vec::new() }
    }
}

impl<F: Scalar> IncrementalBasis<F> for ExactEchelon<F> {
    fn insert(&mut self, mut v: Vec<F>) -> Option<Vec<F>> {
        let n = self.rows.len();
        let mut comb = vec![F::zero(); n];
        for (pivot, row, transform) in &self.rows {
            if v[*pivot].is_zero() {
                continue;
            }
            let factor = v[*pivot].clone() / row[*pivot].clone();
            for (x, r) in v.iter_mut().zip(row) {
                if !r.is_zero() {
                    *x = x.clone() - factor.clone() * r.clone();
                }
            }
            for (c, t) in comb.iter_mut().zip(transform) {
                if !t.is_zero() {
                    *c = c.clone() + factor.clone() * t.clone();
                }
            }
        }
        match v.iter().position(|x| !x.is_zero()) {
            None => Some(comb),
            Some(pivot) => {
                let mut transform: Vec<F> = comb.into_iter().map(|c| -c).collect();
                transform.push(F::one());
                for (_, _, t) in &mut self.rows {
                    t.push(F::zero());
                }
                self.rows.push((pivot, v, transform));
                None
            }
        }
    }

    fn len(&self) -> usize {
        self.rows.len()
    }
}

/// Modified Gram–Schmidt with one re-orthogonalisation pass. A vector is
/// dependent when its orthogonal residual is at most `tol` times the largest
/// residual accepted so far (or its own norm, if larger).
pub(crate) struct OrthoBasis {
    q: Vec<Vec<Complex64>>,
    r: Vec<Vec<Complex64>>,
    largest_pivot: f64,
    tol: f64,
}

impl OrthoBasis {
    pub fn new(tol: f64) -> Self {
        OrthoBasis { q: Vec::new(), r: Vec::new(), largest_pivot: 0.0, tol }
    }
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

impl<F: Scalar> IncrementalBasis<F> for OrthoBasis {
    fn insert(&mut self, v: Vec<F>) -> Option<Vec<F>> {
        let original: Vec<Complex64> = v.iter().map(Scalar::to_c64).collect();
        let mut resid = original.clone();
        let k = self.q.len();
        let mut coords = vec![Complex64::new(0.0, 0.0); k];
        for _ in 0..2 {
            for (j, qj) in self.q.iter().enumerate() {
                let c = dot(qj, &resid);
                coords[j] += c;
                for (x, y) in resid.iter_mut().zip(qj) {
                    *x -= c * y;
                }
            }
        }
        let rn = norm(&resid);
        let reference = self.largest_pivot.max(norm(&original));
        if rn <= self.tol * reference || rn == 0.0 {
            // Back-substitute R x = coords.
            let mut x = coords;
            for j in (0..k).rev() {
                x[j] /= self.r[j][j];
                let xj = x[j];
                for i in 0..j {
                    x[i] -= self.r[i][j] * xj;
                }
            }
            return Some(x.into_iter().map(|c| F::from_c64(c).expect("approximate field")).collect());
        }
        for row in &mut self.r {
            row.push(Complex64::new(0.0, 0.0));
        }
        for (j, c) in coords.iter().enumerate() {
            self.r[j][k] = *c;
        }
        let mut new_row = vec![Complex64::new(0.0, 0.0); k + 1];
        new_row[k] = Complex64::new(rn, 0.0);
        self.r.push(new_row);
        self.q.push(resid.into_iter().map(|x| x / rn).collect());
        self.largest_pivot = self.largest_pivot.max(rn);
        None
    }

    fn len(&self) -> usize {
        self.q.len()
    }
}

/// The exact basis for exact fields, the orthogonal one otherwise.
pub(crate) fn incremental_basis<F: Scalar>(tol: f64) -> Box<dyn IncrementalBasis<F>> {
    if F::EXACT {
        Box::new(ExactEchelon::new())
    } else {
        Box::new(OrthoBasis::new(tol))
    }
}

/// Rank by Gaussian elimination with an exact zero test.
pub(crate) fn exact_rank<F: Scalar>(rows: &[Vec<F>]) -> usize {
    let mut basis = ExactEchelon::new();
    for row in rows {
        let _ = IncrementalBasis::<F>::insert(&mut basis, row.clone());
    }
    basis.len()
}

/// Outcome of a pivoted LDL* sweep over an exact Hermitian matrix.
pub(crate) struct ExactDefiniteness {
    pub psd: bool,
    pub rank: usize,
}

/// Decides positive semidefiniteness exactly by symmetric Gaussian elimination.
///
/// At each step the largest remaining diagonal entry is used as pivot. A
/// negative diagonal entry, or a zero diagonal entry with a nonzero row,
/// certifies indefiniteness.
pub(crate) fn exact_definiteness(a: &[Vec<crate::scalar::GaussianRational>]) -> ExactDefiniteness {
    use num_traits::{Signed, Zero};
    let zero = |x: &crate::scalar::GaussianRational| Scalar::is_zero(x);
    let n = a.len();
    let mut m: Vec<Vec<_>> = a.to_vec();
    let mut active: Vec<usize> = (0..n).collect();
    let mut rank = 0;
    loop {
        if active.iter().any(|&i| m[i][i].re.is_negative()) {
            return ExactDefiniteness { psd: false, rank };
        }
        let pivot = active
            .iter()
            .copied()
            .filter(|&i| !Zero::is_zero(&m[i][i].re))
            .max_by(|&i, &j| m[i][i].re.cmp(&m[j][j].re));
        let Some(p) = pivot else {
            // All remaining diagonal entries vanish: the rest must vanish too.
            let psd = active.iter().all(|&i| active.iter().all(|&j| zero(&m[i][j])));
            return ExactDefiniteness { psd, rank };
        };
        active.retain(|&i| i != p);
        rank += 1;
        let d = m[p][p].clone();
        for &i in &active {
            if zero(&m[i][p]) {
                continue;
            }
            let f = m[i][p].clone() / d.clone();
            for &j in &active {
                let delta = f.clone() * m[p][j].clone();
                m[i][j] = m[i][j].clone() - delta;
            }
        }
        if active.is_empty() {
            return ExactDefiniteness { psd: true, rank };
        }
    }
}

pub(crate) fn to_dmatrix<F: Scalar>(rows: &[Vec<F>]) -> DMatrix<Complex64> {
    let n = rows.len();
    let m = rows.first().map_or(0, Vec::len);
    DMatrix::from_fn(n, m, |i, j| rows[i][j].to_c64())
}

/// Singular values, largest first.
pub(crate) fn singular_values(a: &DMatrix<Complex64>) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    let mut s: Vec<f64> = a.clone().singular_values().iter().copied().collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub(crate) fn hermitian_eigenvalues(a: &DMatrix<Complex64>) -> Vec<f64> {
    if a.is_empty() {
        return Vec::new();
    }
    let sym = (a + a.adjoint()) * Complex64::new(0.5, 0.0);
    let mut e: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}
