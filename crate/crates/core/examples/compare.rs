//! Oracle against asymptotics on both sides of `a₂`, printing the worst
//! residual-to-budget ratio per `a`.

use sturm_branches::harness::{compare, RunConfig};

fn main() {
    let config = RunConfig::canonical(vec![0.5, 1.0, 2.0], 10, 30);
    let report = compare(&config).expect("valid config");
    for a in [0.5, 1.0, 2.0] {
        let rows: Vec<_> = report.rows.iter().filter(|r| r.a == a).collect();
        let worst = rows.iter().map(|r| r.residual_scaled / r.budget).fold(0.0, f64::max);
        let gap = rows
            .iter()
            .filter_map(|r| Some((r.gap_observed? - r.gap_predicted?).abs()))
            .fold(0.0, f64::max);
        println!("a = {a}: {} rows, max residual/budget {worst:.3}, max gap error {gap:.2e}", rows.len());
    }
    if !report.unmatched.is_empty() {
        println!("unmatched: {:?}", report.unmatched);
    }
}
