//! Asymptotic branch values at `a = 2`, with and without refinement of `b₂`.

use sturm_branches::actions::Thresholds;
use sturm_branches::asymptotics::{Branches, Refinement, RemainderConstants};
use sturm_branches::harness::config::CALIBRATED;
use sturm_branches::{Branch, Potential};

fn main() {
    let p = Potential::canonical();
    let branches = Branches::new(&p, 2.0, &Thresholds::default()).expect("a inside (0, a₁)").with_p_min(1);
    let c: RemainderConstants = CALIBRATED;
    println!("F(2) = {:.12}", branches.action());
    for pp in [10, 20, 40, 80] {
        for sign in [Branch::Minus, Branch::Plus] {
            let plain = branches.branch(pp, sign, Refinement::None, &c).expect("p ≥ 1");
            let fixed = branches.branch(pp, sign, Refinement::FixedPoint, &c).expect("p ≥ 1");
            println!(
                "p = {pp:>3} {}  λ⁰ = {:>12.6}  λ = {:>12.6}  refined = {:>12.6}  b₂ = {:>8.3}  region {}",
                sign.symbol(),
                plain.lambda0,
                plain.lambda,
                fixed.lambda,
                plain.b2_used,
                branches.fine_region(plain.lambda0)
            );
        }
    }
}
