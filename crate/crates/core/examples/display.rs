//! From a window to its Dieudonné display over W_L(R/p^aR).

use breuil::display::{display_lie, to_display, validate_display};
use breuil::random;
use breuil::window::lie;
use breuil::{Frame, Matrix, Ring, Window};

fn main() {
    let f = Frame::from_params(3, 0, 1, 2, 6, 0, 2, "u + 3").unwrap();
    let s = Ring::series(&f, 2);
    let a = Matrix::from_rows(&s, vec![vec![s.one(), s.u()], vec![s.from_int(2), s.one()]]);
    let w = Window::new(1, 1, a).unwrap();
    let dd = to_display(&w).unwrap();
    println!("{}", dd);
    println!("valid: {}", validate_display(&dd).is_valid());
    println!("Lie ranks: display {}, window {}", display_lie(&dd), lie(&w).rank);
    println!("commutes with reduction: {}", to_display(&w.reduce(1).unwrap()).unwrap() == dd.reduce(1).unwrap());

    let mut g = random::rng(11);
    let rf = random::random_frame(&mut g, random::Shape { p: 5, r: 1, e: 2, a: 2, prec: 6, tdeg: 2, witt_len: 2 });
    let rw = random::random_window(&mut g, &rf, 2, 2, 1);
    println!("random rank-3 window gives a valid display: {}", validate_display(&to_display(&rw).unwrap()).is_valid());
}
