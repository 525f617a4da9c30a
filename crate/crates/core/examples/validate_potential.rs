//! Class checks for a few cosine series, including one that must be reflected
//! and one with two wells.

use sturm_branches::harness::tables;
use sturm_branches::PotentialSpec;

fn main() {
    let cases = [
        ("2 - cos x", vec![2.0, -1.0]),
        ("2 + cos x", vec![2.0, 1.0]),
        ("3 - cos x - 0.2 cos 2x", vec![3.0, -1.0, -0.2]),
        ("2 - cos 2x", vec![2.0, 0.0, -1.0]),
    ];
    for (name, c) in cases {
        let spec = PotentialSpec::new(c).expect("finite coefficients").with_name(name);
        let (table, report) = tables::validate(&spec);
        println!("== {name}: {}", if report.passed() { "admissible" } else { "rejected" });
        print!("{}", table.to_string(false));
    }
}
