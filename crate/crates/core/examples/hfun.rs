//! `H±(x)` between the definite (`x → −∞`) and indefinite (`x → +∞`) limits.

use sturm_branches::specfun::{self, Branch};

fn main() {
    println!("{:>6} {:>12} {:>12} {:>12}", "x", "H+", "H-", "H+ - H-");
    for i in -8..=8 {
        let x = 0.5 * i as f64;
        let h = specfun::h_pm(x);
        println!("{x:>6.2} {:>12.8} {:>12.8} {:>12.8}", h.h_plus, h.h_minus, h.h_plus - h.h_minus);
    }
    for b in [Branch::Plus, Branch::Minus] {
        let m = specfun::h_minimum(b);
        println!("min H{}: x* = {:.6}, H* = {:.6}", b.symbol(), m.x_star, m.h_star);
    }
}
