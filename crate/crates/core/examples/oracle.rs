//! Periodic spectrum of `u'' + λ²(2 − cos x − a)u = 0` from the shooting oracle.

use sturm_branches::oracle::{Oracle, OracleConfig};
use sturm_branches::Potential;

fn main() {
    let p = Potential::canonical();
    for a in [0.5, 2.0] {
        let oracle = Oracle::new(&p, a, OracleConfig::default()).expect("valid a");
        println!("a = {a}");
        for e in oracle.periodic_spectrum((5.0, 20.0)).expect("window below λ_max") {
            println!(
                "  λ = {:>18.12}  {}  zeros {:>2}  |tr/2 - 1| = {:.1e}  det drift = {:.1e}",
                e.eigen.lambda, e.eigen.symmetry, e.eigen.nodes_full, e.discriminant_residual, e.wronskian_error
            );
        }
    }
}
