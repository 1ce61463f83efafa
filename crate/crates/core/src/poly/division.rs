use crate::poly::Polynomial;
use crate::scalar::Scalar;

/// `f = Σ quotients[i]·divisors[i] + remainder`.
#[derive(Clone, Debug, PartialEq)]
pub struct Division<F: Scalar> {
    pub quotients: Vec<Polynomial<F>>,
    pub remainder: Polynomial<F>,
}

/// Multivariate division under deglex.
///
/// The largest monomial of the running dividend is reduced by the first divisor
/// (in list order) whose leading monomial divides it; otherwise it moves to the
/// remainder. Zero divisors are skipped and receive a zero quotient.
pub fn divide<F: Scalar>(f: &Polynomial<F>, divisors: &[Polynomial<F>]) -> Division<F> {
    let leads: Vec<_> = divisors
        .iter()
        .map(|g| g.leading_term().map(|(m, c)| (m, c.clone())))
        .collect();
    let mut quotients = vec![Polynomial::zero(); divisors.len()];
    let mut remainder = Polynomial::zero();
    let mut rest = f.clone();

    while let Some((m, c)) = rest.leading_term().map(|(m, c)| (m, c.clone())) {
        let reducer = leads.iter().enumerate().find_map(|(i, lead)| {
            let (lm, lc) = lead.as_ref()?;
            lm.quotient_of(&m).map(|q| (i, q, lc))
        });
        match reducer {
            Some((i, q, lc)) => {
                let factor = c / lc.clone();
                quotients[i].add_term(q, factor.clone());
                rest = &rest - &divisors[i].mul_term(q, &factor);
                // The cancelled monomial must leave even if rounding kept a residue.
                rest.remove_term(&m);
            }
            None => {
                rest.remove_term(&m);
                remainder.add_term(m, c);
            }
        }
    }
    Division { quotients, remainder }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{ApproxPoly, ExactPoly, Monomial};
    use crate::scalar::{gaussian, Complex64, GaussianRational};
    use proptest::prelude::*;

    fn ex(s: &str) -> ExactPoly {
        s.parse().unwrap()
    }

    fn recombine<F: Scalar>(d: &Division<F>, gs: &[Polynomial<F>]) -> Polynomial<F> {
        d.quotients
            .iter()
            .zip(gs)
            .fold(d.remainder.clone(), |acc, (q, g)| &acc + &(q * g))
    }

    #[test]
    fn substitution_examples() {
        let gs = [ex("z - w"), ex("w^2 - 1")];
        assert_eq!(divide(&ex("z^2w"), &gs).remainder, ex("w"));
        assert_eq!(divide(&ex("z^3"), &gs).remainder, ex("w"));
        let d = divide(&ex("z - w"), &[ex("z - w")]);
        assert_eq!(d.quotients, vec![ExactPoly::one()]);
        assert!(d.remainder.is_zero());
    }

    #[test]
    fn first_divisor_wins_ties() {
        let d = divide(&ex("zw"), &[ex("z - 1"), ex("w - 1")]);
        assert_eq!(d.quotients[0], ex("w"));
        assert_eq!(d.quotients[1], ex("1"));
        assert_eq!(d.remainder, ex("1"));
    }

    #[test]
    fn remainder_is_irreducible_and_degrees_bounded() {
        let f = ex("3z^3w - 2iz^2 + w^4 - 5");
        let gs = [ex("z^2 - iw"), ex("w^3 + z"), ex("zw - 1")];
        let d = divide(&f, &gs);
        assert_eq!(recombine(&d, &gs), f);
        for m in d.remainder.monomials() {
            assert!(gs.iter().all(|g| !g.leading_monomial().unwrap().divides(m)));
        }
        for (q, g) in d.quotients.iter().zip(&gs) {
            if !q.is_zero() {
                assert!((q * g).degree() <= f.degree());
            }
        }
    }

    fn small_poly() -> impl Strategy<Value = ExactPoly> {
        proptest::collection::vec(((0u32..4, 0u32..4), -4i64..5, -3i64..4), 1..6).prop_map(|ts| {
            ExactPoly::from_terms(ts.into_iter().map(|((w, z), re, im)| {
                (Monomial::new(w, z), gaussian(re, im))
            }))
        })
    }

    fn point() -> impl Strategy<Value = (GaussianRational, GaussianRational)> {
        (-5i64..6, -5i64..6, -5i64..6, -5i64..6).prop_map(|(a, b, c, d)| {
            (gaussian(a, b), gaussian(c, d))
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn division_identity_holds_pointwise(
            f in small_poly(),
            gs in proptest::collection::vec(small_poly(), 1..4),
            pts in proptest::collection::vec(point(), 100),
        ) {
            let gs: Vec<_> = gs.into_iter().filter(|g| !g.is_zero()).collect();
            prop_assume!(!gs.is_empty());
            let d = divide(&f, &gs);
            for (z, w) in &pts {
                let lhs = f.evaluate(z, w);
                let rhs = d.quotients.iter().zip(&gs).fold(d.remainder.evaluate(z, w), |acc, (q, g)| {
                    acc + q.evaluate(z, w) * g.evaluate(z, w)
                });
                prop_assert_eq!(lhs, rhs);
            }

            let fa = f.to_approx();
            let ga: Vec<ApproxPoly> = gs.iter().map(ExactPoly::to_approx).collect();
            let da = divide(&fa, &ga);
            for (z, w) in &pts {
                let (z, w) = (z.to_c64() / 3.0, w.to_c64() / 3.0);
                let lhs = fa.evaluate(&z, &w);
                let rhs = da.quotients.iter().zip(&ga).fold(da.remainder.evaluate(&z, &w), |acc: Complex64, (q, g)| {
                    acc + q.evaluate(&z, &w) * g.evaluate(&z, &w)
                });
                let scale = 1.0 + fa.evaluation_scale(z, w)
                    + da.quotients.iter().zip(&ga).map(|(q, g)| q.evaluation_scale(z, w) * g.evaluation_scale(z, w)).sum::<f64>();
                prop_assert!((lhs - rhs).norm() <= 1e-10 * scale);
            }
        }
    }
}
