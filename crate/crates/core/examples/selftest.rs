//! The built-in invariant suite, as run by `breuil selftest`.

fn main() {
    for (name, ok) in breuil::selftest::run_selftest(1) {
        println!("{:<24} {}", name, if ok { "pass" } else { "FAIL" });
    }
}
