//! Breuil modules as cokernels of isogenies of windows.

use breuil::module::{make_module, validate_breuil_module};
use breuil::random;
use breuil::{Frame, Matrix, Ring, Window};

fn main() {
    let f = Frame::from_params(3, 0, 1, 2, 6, 0, 2, "u + 3").unwrap();
    let s = Ring::series(&f, 2);
    let a = Matrix::from_rows(&s, vec![vec![s.one(), s.zero()], vec![s.one(), s.one()]]);
    let w = Window::new(1, 1, a).unwrap();
    let p = Matrix::identity(&s, 2).scale(&s.from_int(3));
    let m = make_module(&w, &w, &p).unwrap();
    println!("[p]: length {}, order {}", m.p_length(), m.group_order());
    println!("annihilator U W = p^m I:\n{}", p.mul(&m.annihilator_witness()));
    println!("report: {:?}", validate_breuil_module(&w, &w, &p));

    let mut g = random::rng(9);
    let m1 = random::random_isogeny(&mut g, &f, 2, 1, 1, 2);
    let m2 = random::random_isogeny_after(&mut g, &m1, 2);
    let c = m1.compose(&m2).unwrap();
    println!("lengths {} + {} = {}", m1.p_length(), m2.p_length(), c.p_length());
}
