//! Morphisms over 𝔖_{ap} that vanish over 𝔖_a: the search finds none.

use breuil::random::{self, Shape};
use breuil::rigidity::hom_search;

fn main() {
    let mut g = random::rng(21);
    let f = random::random_frame(&mut g, Shape { p: 3, r: 0, e: 1, a: 1, prec: 6, tdeg: 0, witt_len: 2 });
    for _ in 0..3 {
        let w1 = random::random_window(&mut g, &f, 3, 1, 1);
        let w2 = random::random_window(&mut g, &f, 3, 1, 1);
        let hs = hom_search(&w1, &w2, f.e()).unwrap();
        println!("unknowns {}, rank {}, vanishing morphisms {}", hs.unknowns, hs.rank, hs.kernel_dim());
    }
    let w = random::random_window(&mut g, &f, 3, 1, 1);
    println!("endomorphisms with no vanishing condition: {}", hom_search(&w, &w, 0).unwrap().kernel_dim());
}
