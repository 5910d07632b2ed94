//! Building cohomology rings and reading off intersection forms.

use clifford_obstruct::preset::parse_preset;
use clifford_obstruct::ring::{intersection_form, make_connected_sum, make_cp2, make_product, make_sphere, GradedRing};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let s2xs2 = make_product(&make_sphere(2)?, &make_sphere(2)?)?;
    let rings = [
        make_sphere(4)?,
        s2xs2.clone(),
        make_connected_sum(&s2xs2, &s2xs2)?,
        make_connected_sum(&make_cp2(), &make_cp2())?,
        parse_preset("T4")?,
    ];
    for ring in &rings {
        let form = intersection_form(ring)?;
        println!(
            "{:<36} betti {:?}  (b+, b-) = ({}, {})",
            ring.name(),
            ring.betti(),
            form.signature.positive,
            form.signature.negative
        );
    }

    let six = parse_preset("connsum^15(prod(S2,S4))")?;
    println!("{}: n = {}, b2 = {}", six.name(), six.dim(), six.betti()[2]);

    let json = s2xs2.to_json_string();
    println!("{json}");
    assert_eq!(GradedRing::from_json_str(&json)?, s2xs2);

    if let Err(e) = GradedRing::from_json_str(r#"{"name": "bad", "n": 4, "betti": [1, 2, 0, 1, 1], "cup": []}"#) {
        println!("rejected: {e}");
    }
    Ok(())
}
