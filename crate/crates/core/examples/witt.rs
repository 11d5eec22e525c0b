//! Truncated Witt vectors, the section δ, κ = δ mod E and the unit τ.

use breuil::random::{self, Shape};
use breuil::witt::{delta, kappa, tau, WittVec};
use breuil::{Frame, Ring};

fn main() {
    let f = Frame::from_params(3, 0, 1, 2, 6, 0, 3, "u + 3").unwrap();
    let r = Ring::reduced(&f, 2);
    let x = WittVec::new(vec![r.from_int(2), r.from_int(1), r.zero()]).unwrap();
    let y = WittVec::teichmuller(&r.from_int(4), 3);
    let s = x.add(&y).unwrap();
    println!("x + y = {}", s);
    println!("x * y = {}", x.mul(&y).unwrap());
    println!("ghost(x + y) = {:?}", s.ghost().iter().map(|g| g.to_string()).collect::<Vec<_>>());
    println!("F(V(x)) = {}", x.verschiebung().frobenius().unwrap());

    let series = Ring::series(&f, 2);
    let z = &series.one() + &series.u();
    let d = delta(&z, 3).unwrap();
    println!("delta(1 + u) = {}", d);
    for (n, g) in d.ghost().iter().enumerate() {
        println!("  w_{} = {}   sigma^{}(1 + u) = {}", n, g, n, z.frobenius_iter(n).unwrap());
    }
    println!("kappa(1 + u) = {}", kappa(&z, 3).unwrap());

    let t = tau(&f, 2, 3).unwrap();
    println!("tau = {} (unit: {})", t, t.is_unit());

    // τ on a random frame
    let mut g = random::rng(7);
    let rf = random::random_frame(&mut g, Shape { p: 5, r: 1, e: 2, a: 2, prec: 6, tdeg: 1, witt_len: 2 });
    println!("random frame tau unit: {}", tau(&rf, 2, 2).unwrap().is_unit());
}
