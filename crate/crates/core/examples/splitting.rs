//! Exponentially small D/N splittings at `a = 0.5`, resolved in double-double.

use sturm_branches::oracle::extended::{splitting, ExtendedShooter};
use sturm_branches::oracle::{Oracle, OracleConfig, Symmetry};
use sturm_branches::Potential;

fn main() {
    let p = Potential::canonical();
    let a = 0.5;
    let oracle = Oracle::new(&p, a, OracleConfig::default()).expect("valid a");
    for pp in [10u32, 20, 30, 40] {
        let guess = 0.843 * pp as f64;
        let d = oracle.find_by_nodes(Symmetry::Dirichlet, pp - 1, guess).expect("D eigenvalue");
        let n = oracle.find_by_nodes(Symmetry::Neumann, pp, guess).expect("N eigenvalue");
        let shooter = ExtendedShooter::new(p.spec(), a, 1.05 * n.lambda.max(d.lambda));
        let s = splitting(&shooter, d.lambda, n.lambda).expect("secant converges");
        println!(
            "p = {pp:>2}  λ = {:.12}  f64 gap {:>10.3e}  double-double gap {:.6e}",
            d.lambda,
            n.lambda - d.lambda,
            s.gap
        );
    }
}
