//! Metric Clifford products, the conformal scaling law and the scaled
//! product ⊙ under pullbacks.

use clifford_obstruct::linalg::Matrix;
use clifford_obstruct::metric::{
    check_pullback_naturality, clifford_metric, hodge_star_metric, scaled_clifford, GramMetric, LinearMap,
};
use clifford_obstruct::multivector::{Multivector, RationalMultivector as Mv};
use clifford_obstruct::scalar::{int, rational};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let gram = Matrix::from_rows(vec![
        vec![int(2), int(1), int(0)],
        vec![int(1), int(3), rational(1, 2)],
        vec![int(0), rational(1, 2), int(1)],
    ])?;
    let g = GramMetric::new(gram)?;
    let a = Mv::parse(3, "e1 - e3")?;
    let b = Mv::parse(3, "e12 - 2*e13")?;

    let product = clifford_metric(&g, &a, &b)?;
    println!("a ·_g b        = {product}");

    // Under g ↦ ρ²g the grade-k part scales by ρ^(k - l - m).
    let rho = rational(3, 2);
    let scaled = clifford_metric(&g.conformal(&rho)?, &a, &b)?;
    for k in 0..=3 {
        println!("grade {k}: {:<24} vs {}", product.grade_project(k)?, scaled.grade_project(k)?);
    }

    let gf = g.to_f64();
    let (af, bf) = (a.to_f64(), b.to_f64());
    println!("⋆_g a          = {}", hodge_star_metric(&gf, &af)?);
    println!("a ⊙_g b        = {}", scaled_clifford(&gf, &af, &bf)?);
    println!("a ⊙_(ρ²g) b    = {}", scaled_clifford(&gf.conformal(&1.5)?, &af, &bf)?);
    println!("e1 ⊙ e1        = {}", scaled_clifford(&GramMetric::identity(3), &Multivector::basis(3, 1), &Multivector::basis(3, 1))?);

    let map = LinearMap::new(Matrix::from_rows(vec![
        vec![int(1), int(2), int(0)],
        vec![int(0), int(1), rational(-1, 3)],
        vec![int(1), int(0), int(2)],
    ])?)?;
    println!("pullback naturality: {}", check_pullback_naturality(&map, &g, &a, &b)?);
    Ok(())
}
