//! ν(a) = min_{n ≥ a} (n − v_p(n!)) and the bound ν(pa) ≥ a + 1.

use breuil::tframe::nu;

fn main() {
    for p in [3u64, 5, 7] {
        let row: Vec<String> = (1..=10).map(|a| nu(a, p).to_string()).collect();
        println!("p = {}: nu(1..10) = {}", p, row.join(" "));
        let worst = (1..=50).map(|a| nu(p * a, p) - a).min().unwrap();
        println!("  min over a <= 50 of nu(pa) - a = {}", worst);
    }
}
