#![allow(dead_code)]

use clifford_obstruct::blade::Blade;
use clifford_obstruct::linalg::Matrix;
use clifford_obstruct::metric::{GramMetric, LinearMap};
use clifford_obstruct::multivector::{Multivector, RationalMultivector};
use clifford_obstruct::scalar::{int, rational, Rational};
use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn small_rational(rng: &mut impl Rng) -> Rational {
    let num = rng.gen_range(-6..=6);
    let den = rng.gen_range(1..=4);
    rational(num, den)
}

fn nonzero_rational(rng: &mut impl Rng) -> Rational {
    loop {
        let r = small_rational(rng);
        if !r.is_zero() {
            return r;
        }
    }
}

/// Sparse random multivector over all grades.
pub fn multivector(rng: &mut impl Rng, n: usize, max_terms: usize) -> RationalMultivector {
    let terms = rng.gen_range(1..=max_terms);
    let mut out = Multivector::zero(n);
    for _ in 0..terms {
        let blade = Blade::from_bits(rng.gen_range(0..(1u32 << n)));
        out.add_term(blade, nonzero_rational(rng));
    }
    out
}

/// Sparse random nonzero form of grade `k`.
pub fn form(rng: &mut impl Rng, n: usize, k: usize, max_terms: usize) -> RationalMultivector {
    let blades = Blade::of_grade(n, k);
    loop {
        let mut out = Multivector::zero(n);
        for _ in 0..rng.gen_range(1..=max_terms) {
            out.add_term(*blades.choose(rng).unwrap(), nonzero_rational(rng));
        }
        if !out.is_zero() {
            return out;
        }
    }
}

pub fn float_form(rng: &mut impl Rng, n: usize, k: usize) -> Multivector<f64> {
    let terms = Blade::of_grade(n, k).into_iter().map(|b| (b, rng.gen_range(-2.0..2.0)));
    Multivector::from_terms(n, terms).unwrap()
}

/// `AᵀA + I` with a small random rational `A`.
pub fn rational_metric(rng: &mut impl Rng, n: usize) -> GramMetric<Rational> {
    let a = Matrix::from_fn(n, n, |_, _| if rng.gen_bool(0.5) { small_rational(rng) } else { int(0) });
    let gram = a.transpose().matmul(&a).unwrap();
    let gram = Matrix::from_fn(n, n, |i, j| if i == j { gram[(i, j)].clone() + int(1) } else { gram[(i, j)].clone() });
    GramMetric::new(gram).unwrap()
}

pub fn float_metric(rng: &mut impl Rng, n: usize) -> GramMetric<f64> {
    let a = Matrix::from_fn(n, n, |_, _| rng.gen_range(-1.0..1.0));
    let gram = a.transpose().matmul(&a).unwrap();
    GramMetric::new(Matrix::from_fn(n, n, |i, j| gram[(i, j)] + if i == j { 0.5 } else { 0.0 })).unwrap()
}

/// Invertible rational map: a unit triangular factor times a random
/// diagonal times another, with a random permutation of rows.
pub fn rational_map(rng: &mut impl Rng, n: usize) -> LinearMap<Rational> {
    let lower = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => int(1),
        std::cmp::Ordering::Greater => small_rational(rng),
        std::cmp::Ordering::Less => int(0),
    });
    let upper = Matrix::from_fn(n, n, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Equal => nonzero_rational(rng),
        std::cmp::Ordering::Less => small_rational(rng),
        std::cmp::Ordering::Greater => int(0),
    });
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let p = Matrix::from_fn(n, n, |i, j| if perm[i] == j { int(1) } else { int(0) });
    LinearMap::new(p.matmul(&lower).unwrap().matmul(&upper).unwrap()).unwrap()
}

/// `I + εA`, comfortably invertible.
pub fn float_map(rng: &mut impl Rng, n: usize) -> LinearMap<f64> {
    let m = Matrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 } + rng.gen_range(-0.4..0.4));
    LinearMap::new(m).unwrap()
}

/// Product of random Givens rotations (an element of SO(n)).
pub fn rotation(rng: &mut impl Rng, n: usize) -> LinearMap<f64> {
    let mut m = Matrix::from_fn(n, n, |i, j| if i == j { 1.0 } else { 0.0 });
    for _ in 0..2 * n {
        let p = rng.gen_range(0..n);
        let q = (p + rng.gen_range(1..n)) % n;
        let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let g = Matrix::from_fn(n, n, |i, j| match (i, j) {
            _ if i == p && j == p => t.cos(),
            _ if i == q && j == q => t.cos(),
            _ if i == p && j == q => -t.sin(),
            _ if i == q && j == p => t.sin(),
            _ if i == j => 1.0,
            _ => 0.0,
        });
        m = m.matmul(&g).unwrap();
    }
    LinearMap::new(m).unwrap()
}

/// Float eigenvalue sign count with a relative zero tolerance.
pub fn eigen_signature(m: &Matrix<Rational>) -> (usize, usize, usize) {
    use num_traits::ToPrimitive;
    let n = m.rows();
    let dm = nalgebra::DMatrix::from_fn(n, n, |i, j| m[(i, j)].to_f64().unwrap());
    let eig = nalgebra::SymmetricEigen::new(dm.clone());
    let scale = dm.iter().fold(0.0f64, |a, x| a.max(x.abs())).max(1.0);
    let tol = 1e-9 * scale * n as f64;
    let mut s = (0, 0, 0);
    for &e in eig.eigenvalues.iter() {
        if e > tol {
            s.0 += 1;
        } else if e < -tol {
            s.1 += 1;
        } else {
            s.2 += 1;
        }
    }
    s
}
