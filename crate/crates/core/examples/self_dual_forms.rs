//! Self-dual 2-forms on ℝ⁴, the middle-grade product P and why no plane in
//! Λ⁺ is closed under it.

use clifford_obstruct::obstructions::selfdual::{cross_product_structure_holds, lagrange_identity_holds};
use clifford_obstruct::obstructions::{build_eigen_split, check_p_closure, cross_product_certificate, p_map, Duality};
use clifford_obstruct::scalar::int;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let split = build_eigen_split(1)?;
    for (i, f) in split.positive.iter().enumerate() {
        println!("f{}  = {f}   ⋆f{} = {}", i + 1, i + 1, f.hodge_star());
    }
    for (i, f) in split.negative.iter().enumerate() {
        println!("f{}' = {f}", i + 1);
    }

    let f = &split.positive;
    println!();
    for i in 0..3 {
        let row: Vec<String> = (0..3).map(|j| p_map(1, &f[i], &f[j]).map(|p| p.to_string())).collect::<Result<_, _>>()?;
        println!("P(f{}, ·) = [{}]", i + 1, row.join(", "));
    }

    println!();
    println!("P closes Λ± (m = 1, 2): {}, {}", check_p_closure(1)?, check_p_closure(2)?);
    println!("dim Λ+ for m = 2: {}", build_eigen_split(2)?.positive.len());
    println!(
        "cross-product structure on Λ+ / Λ-: {} / {}",
        cross_product_structure_holds(Duality::SelfDual)?,
        cross_product_structure_holds(Duality::AntiSelfDual)?
    );

    let u = &f[0] + &f[1].scale(&int(2));
    let w = &f[2] - &f[0];
    if let Some(cert) = cross_product_certificate(&u, &w)? {
        println!("span{{u, w}} is not P-closed: P(u, w) has ⊥-component {}", cert.orthogonal);
    }
    println!("Lagrange identity: {}", lagrange_identity_holds(&u, &w)?);
    Ok(())
}
