//! Generated extremal instances shared by the solver and acceptance tests.
#![allow(dead_code)]

use moment_forge::moment::MomentSequence;
use moment_forge::poly::{ApproxPoly, Monomial, Polynomial};
use moment_forge::scalar::Complex64;
use moment_forge::solver::{generate_moments, AtomicMeasure};
use moment_forge::variety::solve_conjugate_system;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub const TOL: f64 = 1e-9;

pub struct Instance {
    pub name: String,
    pub p: ApproxPoly,
    pub k: u32,
    pub measure: AtomicMeasure<Complex64>,
    pub gamma: MomentSequence<Complex64>,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// `p(a·z + b, ā·w + b̄)`, whose zero set is `(𝒱 − b)/a`.
pub fn affine(p: &ApproxPoly, a: Complex64, b: Complex64) -> ApproxPoly {
    let zs = &Polynomial::term(Monomial::Z, a) + &Polynomial::constant(b);
    let ws = &Polynomial::term(Monomial::W, a.conj()) + &Polynomial::constant(b.conj());
    p.terms().fold(Polynomial::zero(), |acc, (m, coeff)| {
        &acc + &(&zs.pow(m.z) * &ws.pow(m.w)).scale(coeff)
    })
}

fn small_rational(rng: &mut ChaCha8Rng, range: i32) -> f64 {
    rng.gen_range(-range..=range) as f64 / rng.gen_range(1..=4) as f64
}

/// `z³ − i t z − u z̄` with `0 < u < t < 2u`.
pub fn q7_family(u: f64, t: f64) -> ApproxPoly {
    let mut p = Polynomial::monomial(Monomial::new(0, 3));
    p.add_term(Monomial::Z, c(0.0, -t));
    p.add_term(Monomial::W, c(-u, 0.0));
    p
}

/// The quartic `z⁴ + 4/3z³ + 2z² + 4z + 11/5 + 3z̄` with each coefficient
/// moved by a random real rational of size at most 1/10.
fn random_harmonic_quartic(rng: &mut ChaCha8Rng) -> ApproxPoly {
    let base = [(0, 11.0 / 5.0), (1, 4.0), (2, 2.0), (3, 4.0 / 3.0)];
    let mut p = Polynomial::monomial(Monomial::new(0, 4));
    for (d, a) in base {
        p.add_term(Monomial::new(0, d), c(a + small_rational(rng, 1) / 10.0, 0.0));
    }
    p.add_term(Monomial::W, c(3.0 + small_rational(rng, 1) / 10.0, 0.0));
    p
}

/// `z³ − i t z − u z̄` plus random lower-order analytic terms of size at most 1/2.
fn random_harmonic_cubic(rng: &mut ChaCha8Rng) -> ApproxPoly {
    let u = rng.gen_range(2.0..6.0);
    let mut p = q7_family(u, u * rng.gen_range(1.2..1.8));
    for d in 0..3 {
        p.add_term(Monomial::new(0, d), c(small_rational(rng, 2) / 4.0, small_rational(rng, 2) / 4.0));
    }
    p
}

/// Generated instance for `p` with random positive densities, or `None` when
/// the variety does not have `3k − 2` simple points or is badly scaled.
pub fn instance(name: String, p: ApproxPoly, k: u32, rng: &mut ChaCha8Rng) -> Option<Instance> {
    let v = solve_conjugate_system(&p, TOL).ok()?;
    if v.len() != (3 * k - 2) as usize || !v.all_simple() {
        return None;
    }
    let zs = v.zs();
    let radius = zs.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let min_gap = zs
        .iter()
        .enumerate()
        .flat_map(|(i, a)| zs[i + 1..].iter().map(move |b| (a - b).norm()))
        .fold(f64::INFINITY, f64::min);
    if !(0.3..=3.5).contains(&radius) || min_gap < 0.05 * radius {
        return None;
    }
    let measure = AtomicMeasure::new(zs.into_iter().map(|z| (z, c(rng.gen_range(0.5..3.0), 0.0)))).ok()?;
    let gamma = generate_moments(&measure, k).ok()?;
    Some(Instance { name, p, k, measure, gamma })
}

/// At least `count` extremal instances: the `q₇` family, random harmonic
/// cubics and quartics, and affine images of the worked examples.
pub fn generated_instances(rng: &mut ChaCha8Rng, count: usize) -> Vec<Instance> {
    let quartic: ApproxPoly = "z^4 + 4/3z^3 + 2z^2 + 3w + 4z + 11/5".parse().unwrap();
    let wilmshurst: ApproxPoly = "w + 3z^2 + 2z^3".parse().unwrap();
    let mut out = Vec::new();
    let mut attempt = 0;
    while out.len() < count && attempt < 50 * count {
        attempt += 1;
        let (name, p, k) = match attempt % 5 {
            0 => {
                let u = rng.gen_range(1.0..6.0);
                let t = u * rng.gen_range(1.05..1.95);
                (format!("q7(u={u:.3},t={t:.3})"), q7_family(u, t), 3)
            }
            1 => ("random cubic".to_string(), random_harmonic_cubic(rng), 3),
            2 => ("random quartic".to_string(), random_harmonic_quartic(rng), 4),
            3 => {
                let a = c(small_rational(rng, 3), small_rational(rng, 3));
                if a.norm() < 0.5 {
                    continue;
                }
                let b = c(small_rational(rng, 2), small_rational(rng, 2));
                (format!("affine quartic a={a} b={b}"), affine(&quartic, a, b), 4)
            }
            _ => {
                let a = c(small_rational(rng, 3), small_rational(rng, 3));
                if a.norm() < 0.3 {
                    continue;
                }
                let b = c(small_rational(rng, 2), small_rational(rng, 2));
                (format!("affine wilmshurst a={a} b={b}"), affine(&wilmshurst, a, b), 3)
            }
        };
        if let Some(i) = instance(name, p, k, rng) {
            out.push(i);
        }
    }
    out
}
