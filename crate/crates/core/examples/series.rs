//! Arithmetic in 𝔖_a = W(k)[t][[u]]/(u^{ae}) mod p^N and in R/p^aR.

use breuil::{Frame, Ring};

fn main() {
    let f = Frame::from_params(3, 1, 2, 2, 6, 2, 2, "u^2 + 3t1*u + 3(1 + t1)").unwrap();
    println!("frame: {}", f.validate().is_valid());

    let s = Ring::series(&f, 2);
    let x = &(&s.one() + &s.t(0)) + &s.u();
    let y = &s.u() - &s.from_int(2);
    println!("x = {}", x);
    println!("x * y = {}", &x * &y);
    println!("sigma(x) = {}", x.frobenius().unwrap());
    println!("1/x = {}", x.invert().unwrap());

    let e = s.e_elem();
    println!("E = {}", e);
    println!("E mod E = {}", e.reduce_mod_e().unwrap());
    println!("x mod E = {}", x.reduce_mod_e().unwrap());
}
