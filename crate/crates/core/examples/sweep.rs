//! `λ±(a, 30)` across the definite/indefinite boundary.

use sturm_branches::harness::config::GridSection;
use sturm_branches::harness::{sweep_transition, RunConfig};

fn main() {
    let mut config = RunConfig::canonical(Vec::new(), 30, 30);
    config.grid = Some(GridSection { a_min: Some(0.7), a_max: Some(1.3), a_step: Some(0.05), ..config.grid.unwrap() });
    let report = sweep_transition(&config).expect("valid sweep");
    for pair in report.rows.chunks(2) {
        println!(
            "a = {:.2}  b₂ = {:>7.3}  λ- = {:.8} ({:.8})  λ+ = {:.8} ({:.8})",
            pair[0].a, pair[0].b2, pair[0].lambda_asym, pair[0].lambda_oracle, pair[1].lambda_asym, pair[1].lambda_oracle
        );
    }
    if let (Some(p), Some(m)) = (report.jumps_plus, report.jumps_minus) {
        println!("jump ratio: λ+ {:.2}, λ- {:.2}", p.ratio(), m.ratio());
    }
}
