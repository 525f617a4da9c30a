//! Turning point, normalized actions and ζ₂ across `(0, a₁)` for `2 − cos x`.

use sturm_branches::actions::Thresholds;
use sturm_branches::harness::tables;
use sturm_branches::Potential;

fn main() {
    let p = Potential::canonical();
    let a: Vec<f64> = (1..15).map(|i| 0.2 * i as f64).collect();
    let t = tables::geometry(&p, &a, &Thresholds::default()).expect("a inside (0, a₁)");
    print!("{}", t.to_string(false));
}
