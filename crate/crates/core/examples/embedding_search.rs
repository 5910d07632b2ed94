//! Numerical search for Clifford-closed realizations of cohomology rings.
//!
//! Pass a restart count to change the budget (default 100).

use std::time::Instant;

use clifford_obstruct::embedding::{residual, search, SearchConfig, SearchMode};
use clifford_obstruct::preset::parse_preset;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let restarts = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(100);
    let cases = [
        ("T4", SearchMode::WedgeStarClifford),
        ("prod(S2,S2)", SearchMode::WedgeStar),
        ("prod(S2,S2)", SearchMode::WedgeStarClifford),
        ("connsum(prod(S2,S2),prod(S2,S2))", SearchMode::WedgeStarClifford),
    ];
    for (expr, mode) in cases {
        let ring = parse_preset(expr)?;
        let cfg = SearchConfig {
            mode,
            restarts,
            seed: 7,
            ..SearchConfig::default()
        };
        let started = Instant::now();
        let report = search(&ring, &cfg)?;
        println!(
            "{expr:<34} {mode:<20} {:?}: residual {:.3e}, margin {:.3e}, {} restart(s), {:.2?}",
            report.status,
            report.residual,
            report.terms.injectivity_margin,
            report.restarts_run,
            started.elapsed()
        );
        if report.is_certificate() {
            let again = residual(&ring, &report.candidate()?)?;
            println!("  re-verified residual {:.3e}", again.total(mode));
            for (k, cols) in report.phi.iter().enumerate().filter(|(_, c)| !c.is_empty()) {
                println!("  Φ_{k}: {}", cols.join(" | "));
            }
        }
    }
    Ok(())
}
