//! Driving the batch runner from code, as the binary does.

use clifford_obstruct::cli::{run, Format, RunConfig};
use clifford_obstruct::embedding::SearchMode;

fn main() {
    let mut cfg = RunConfig::preset("connsum(prod(S2,S2),prod(S2,S2))");
    let out = run(&cfg);
    print!("{}", out.stdout);
    println!("exit code {}", out.exit_code);

    cfg = RunConfig::preset("prod(S2,S2)");
    cfg.format = Format::Json;
    cfg.seed = Some(1);
    cfg.search.mode = Some(SearchMode::WedgeStarClifford);
    cfg.search.restarts = Some(5);
    let out = run(&cfg);
    print!("{}", out.stdout);
    println!("exit code {}", out.exit_code);
}
