//! The unique isomorphism over 𝒯_a between windows whose matrices agree mod u^e.

use breuil::random;
use breuil::tframe::{base_change_t, solve_iso, TRing};
use breuil::{Frame, Matrix, Ring, Window};

fn main() {
    let f = Frame::from_params(3, 0, 1, 2, 6, 0, 2, "u + 3").unwrap();
    let s = Ring::series(&f, 2);
    let t = TRing::new(&f, 2);
    println!("u = {} in T_2", t.u());
    println!("E = {} = 3(v + eps)", t.e_elem().unwrap());
    println!("sigma(v) = {}", t.v().sigma());

    let a1 = Matrix::identity(&s, 1);
    let a2 = Matrix::from_rows(&s, vec![vec![&s.one() + &s.u()]]);
    println!("A2 over T: {}", base_change_t(&Window::new(1, 0, a2.clone()).unwrap()).unwrap().a.get(0, 0));
    let sol = solve_iso(&a1, &a2, 1, 0, 2).unwrap();
    println!("X = {} (that is 1 - 3v)", sol.x.get(0, 0));
    println!("residual zero: {}", sol.residual_zero);

    // windows that are already isomorphic over 𝔖: X comes from 𝔖_a
    let mut g = random::rng(5);
    let b1 = random::random_invertible(&mut g, &s, 2);
    let (u, b2) = random::random_congruent_transport(&mut g, &b1, 1, 1);
    let sol = solve_iso(&b1, &b2, 1, 1, 2).unwrap();
    let image = (0..2).all(|i| (0..2).all(|j| sol.x.get(i, j).in_series_image()));
    println!("X in the image of S_2: {}", image);
    println!("X = U: {}", sol.x == breuil::tframe::TMatrix::from_matrix(&t, &u).unwrap());
}
