//! Exact obstruction reports for a handful of manifolds.

use clifford_obstruct::obstructions::full_report;
use clifford_obstruct::preset::parse_preset;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let presets = [
        "S4",
        "prod(S2,S2)",
        "T4",
        "connsum(prod(S2,S2),prod(S2,S2))",
        "connsum^4(CP2)",
        "connsum^3(prod(T1,S3))",
        "connsum^15(prod(S2,S4))",
    ];
    for expr in presets {
        let report = full_report(&parse_preset(expr)?)?;
        println!("{expr}");
        for check in &report.checks {
            println!("  {:<20} {:<13} {}", check.id.as_str(), check.verdict.to_string(), check.witness);
        }
        let o = &report.overall;
        println!(
            "  conformally formal possible: {}, Clifford formal possible: {}, UQR-elliptic possible: {}",
            o.conformally_formal_possible,
            o.clifford_formal_possible,
            o.uqr_elliptic_possible.map_or("n/a".to_string(), |b| b.to_string())
        );
    }
    Ok(())
}
