//! The self-test, then again with a biased `arg Γ` to show it is caught.

use sturm_branches::harness::selftest::{selftest, selftest_with};
use sturm_branches::specfun;

fn main() {
    println!("{}\n", selftest());
    let biased = selftest_with(&|x| specfun::arg_gamma(x) + 1e-3);
    for c in biased.failures() {
        println!("with bias: FAIL {} ({})", c.name, c.detail);
    }
}
