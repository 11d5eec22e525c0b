//! Windows in normal form, triples, normal decomposition, special fiber and Lie.

use breuil::window::{check_morphism, lie, normal_decompose, special_fiber, triple_of, window_of};
use breuil::{Frame, Matrix, Ring, Window};

fn main() {
    let f = Frame::from_params(3, 0, 1, 2, 6, 0, 2, "u + 3").unwrap();
    let s = Ring::series(&f, 2);
    let a = Matrix::from_rows(&s, vec![vec![s.one(), s.u()], vec![s.from_int(2), s.one()]]);
    let w = Window::new(1, 1, a).unwrap();
    println!("A =\n{}", w.a());
    println!("phi = A C =\n{}", w.phi_matrix());

    let t = triple_of(&w);
    println!("triple axioms: {}", t.check_axioms().unwrap());
    println!("roundtrip: {}", window_of(&t).unwrap() == w);

    // hide the normal form behind a change of basis and recover it
    let v = Matrix::from_rows(&s, vec![vec![s.one(), s.one()], vec![s.zero(), s.one()]]);
    let m = v.frobenius().unwrap().mul(&w.phi_matrix()).mul(&v.inverse().unwrap());
    let nf = normal_decompose(&m).unwrap();
    println!("recovered (d, c) = ({}, {})", nf.d, nf.c);
    let w2 = Window::new(nf.d, nf.c, nf.a.clone()).unwrap();
    let u = nf.basis_change.inverse().unwrap().mul(&v);
    println!("isomorphic: {}", check_morphism(&w, &w2, &u).unwrap());

    let sf = special_fiber(&w);
    println!("height {}, dim {}, nilpotent {}", sf.height, sf.dim, sf.is_nilpotent);
    println!("Lie rank {}", lie(&w).rank);
    println!("lift to level 3 and back: {}", w.lift().unwrap().reduce(2).unwrap() == w);
}
