//! A quick invariant suite over random desk-scale instances, run as
//! independent threads. Reports in a fixed order.

use std::thread;

use crate::display::{display_lie, to_display, validate_display};
use crate::matrix::Matrix;
use crate::random::{self, Shape};
use crate::rigidity::hom_search;
use crate::series::Ring;
use crate::tframe::{nu, solve_iso};
use crate::window::{lie, special_fiber, triple_of, window_of};
use crate::witt::{delta, kappa, tau, WittVec};

type Check = fn(u64) -> bool;

const SHAPE: Shape = Shape { p: 3, r: 1, e: 2, a: 2, prec: 6, tdeg: 2, witt_len: 3 };

fn witt_ghost(seed: u64) -> bool {
    let mut g = random::rng(seed);
    let f = random::random_frame(&mut g, SHAPE);
    let ring = Ring::reduced(&f, 2);
    (0..10).all(|_| {
        let x = WittVec::new((0..3).map(|_| random::random_elem(&mut g, &ring)).collect()).unwrap();
        let y = WittVec::new((0..3).map(|_| random::random_elem(&mut g, &ring)).collect()).unwrap();
        let (gx, gy) = (x.ghost(), y.ghost());
        let sum = x.add(&y).unwrap().ghost();
        let prod = x.mul(&y).unwrap().ghost();
        (0..3).all(|n| sum[n] == &gx[n] + &gy[n] && prod[n] == &gx[n] * &gy[n])
    })
}

fn delta_section(seed: u64) -> bool {
    let mut g = random::rng(seed);
    let f = random::random_frame(&mut g, SHAPE);
    let ring = Ring::series(&f, 2);
    (0..10).all(|_| {
        let x = random::random_elem(&mut g, &ring);
        let gh = delta(&x, 3).unwrap().ghost();
        (0..3).all(|n| gh[n] == x.frobenius_iter(n).unwrap())
    })
}

fn tau_unit(seed: u64) -> bool {
    let mut g = random::rng(seed);
    (0..5).all(|_| {
        let f = random::random_frame(&mut g, SHAPE);
        let t = tau(&f, 2, 3).unwrap();
        let se = Ring::series(&f, 2).e_elem().frobenius().unwrap();
        let p = WittVec::from_int(t.ring(), 3, 3);
        t.is_unit() && p.mul(&t).unwrap() == kappa(&se, 3).unwrap()
    })
}

fn triple_roundtrip(seed: u64) -> bool {
    let mut g = random::rng(seed);
    let f = random::random_frame(&mut g, SHAPE);
    (0..10).all(|_| {
        let w = random::random_window(&mut g, &f, 2, 1, 1);
        let t = triple_of(&w);
        t.check_axioms().unwrap() && window_of(&t).unwrap() == w
    })
}

fn solver_residual(seed: u64) -> bool {
    let mut g = random::rng(seed);
    let f = random::random_frame(&mut g, SHAPE);
    let ring = Ring::series(&f, 2);
    (0..5).all(|_| {
        let a1 = random::random_invertible(&mut g, &ring, 2);
        let z = random::random_matrix(&mut g, &ring, 2, 2);
        let a2 = a1.mul(&Matrix::identity(&ring, 2).add(&z.scale(&ring.u().pow(2))));
        let sol = solve_iso(&a1, &a2, 1, 1, 2).unwrap();
        sol.residual_zero
    })
}

fn nu_bound(_: u64) -> bool {
    [3u64, 5, 7].iter().all(|&p| (1..=50).all(|a| nu(p * a, p) > a))
}

fn display_valid(seed: u64) -> bool {
    let mut g = random::rng(seed);
    let f = random::random_frame(&mut g, SHAPE);
    (0..5).all(|_| {
        let w = random::random_window(&mut g, &f, 2, 1, 1);
        let dd = to_display(&w).unwrap();
        validate_display(&dd).is_valid() && display_lie(&dd) == lie(&w).rank
    })
}

fn rigidity(seed: u64) -> bool {
    let mut g = random::rng(seed);
    let shape = Shape { p: 3, r: 0, e: 1, a: 1, prec: 6, tdeg: 0, witt_len: 2 };
    let f = random::random_frame(&mut g, shape);
    (0..3).all(|_| {
        let w1 = random::random_window(&mut g, &f, 3, 1, 1);
        let w2 = random::random_window(&mut g, &f, 3, 1, 1);
        hom_search(&w1, &w2, 1).unwrap().kernel_dim() == 0
    })
}

fn isogeny_length(seed: u64) -> bool {
    let mut g = random::rng(seed);
    let f = random::random_frame(&mut g, SHAPE);
    (0..5).all(|_| {
        let m1 = random::random_isogeny(&mut g, &f, 2, 1, 1, 2);
        let m2 = random::random_isogeny_after(&mut g, &m1, 2);
        m1.compose(&m2).map(|m| m.p_length() == m1.p_length() + m2.p_length()).unwrap_or(false)
    })
}

fn nilpotence_invariance(seed: u64) -> bool {
    let mut g = random::rng(seed);
    let f = random::random_frame(&mut g, SHAPE);
    (0..5).all(|_| {
        let w = random::random_window(&mut g, &f, 2, 1, 1);
        let v = random::random_invertible(&mut g, w.ring(), 2);
        let (w2, _) = w.transport(&v).unwrap();
        special_fiber(&w).is_nilpotent == special_fiber(&w2).is_nilpotent
    })
}

const CHECKS: [(&str, Check); 10] = [
    ("witt-ghost", witt_ghost),
    ("delta-section", delta_section),
    ("tau-unit", tau_unit),
    ("triple-roundtrip", triple_roundtrip),
    ("solver-residual", solver_residual),
    ("nu-bound", nu_bound),
    ("display-valid", display_valid),
    ("rigidity", rigidity),
    ("isogeny-length", isogeny_length),
    ("nilpotence-invariance", nilpotence_invariance),
];

/// Run every check with the given seed; a panicking check counts as a failure.
pub fn run_selftest(seed: u64) -> Vec<(&'static str, bool)> {
    thread::scope(|s| {
        let handles: Vec<_> = CHECKS
            .iter()
            .enumerate()
            .map(|(i, &(name, f))| (name, s.spawn(move || f(seed.wrapping_add(i as u64)))))
            .collect();
        handles.into_iter().map(|(name, h)| (name, h.join().unwrap_or(false))).collect()
    })
}
