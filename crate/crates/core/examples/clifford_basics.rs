//! Wedge, Clifford and Hodge star on exact multivectors.

use clifford_obstruct::multivector::RationalMultivector as Mv;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = Mv::parse(4, "e1 + 2*e2")?;
    let b = Mv::parse(4, "e2 - 1/3*e34")?;

    println!("a        = {a}");
    println!("b        = {b}");
    println!("a ∧ b    = {}", a.wedge(&b)?);
    println!("a · b    = {}", a.clifford(&b)?);
    println!("⋆b       = {}", b.hodge_star());
    println!("⋆⋆(e12)  = {}", Mv::parse(4, "e12")?.hodge_star().hodge_star());

    // The top-grade part of a Clifford product is the wedge product.
    let x = Mv::parse(4, "e12 + e23")?;
    let y = Mv::parse(4, "3*e4")?;
    assert_eq!(x.clifford(&y)?.grade_project(3)?, x.wedge(&y)?);

    for k in 0..=4 {
        let part = a.clifford(&b)?.grade_project(k)?;
        println!(
            "grade {k}: {part:<20} within 2ⁿ|a||b|: {}",
            a.clifford_grade_bound_check(&b, k)?
        );
    }
    Ok(())
}
