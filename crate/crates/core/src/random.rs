//! Seeded generators for frames, windows, isomorphisms and isogenies.

use std::sync::Arc;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::frame::{Frame, FrameSpec};
use crate::matrix::Matrix;
use crate::module::IsogenyModule;
use crate::poly::IntPoly;
use crate::series::{Ring, SeriesElem};
use crate::window::Window;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Shape parameters of a frame; `E` is drawn at random.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Shape {
    pub p: u64,
    pub r: usize,
    pub e: usize,
    pub a: usize,
    pub prec: u32,
    pub tdeg: usize,
    pub witt_len: usize,
}

/// A frame with `E = u^e + p·Σ c_j(t) u^j`, `c_0(0)` a unit mod `p`.
pub fn random_frame(rng: &mut impl Rng, s: Shape) -> Arc<Frame> {
    let p = s.p as i128;
    let mut e_poly = IntPoly::zero(s.r);
    let mut top = vec![0u32; s.r + 1];
    top[s.r] = s.e as u32;
    e_poly.add_term(top, 1);
    for j in 0..s.e {
        let mut exp = vec![0u32; s.r + 1];
        exp[s.r] = j as u32;
        let c0 = if j == 0 { rng.gen_range(1..p) } else { rng.gen_range(0..p) };
        e_poly.add_term(exp.clone(), p * c0);
        for i in 0..s.r {
            if s.tdeg > 0 && rng.gen_bool(0.5) {
                let mut ex = exp.clone();
                ex[i] = 1;
                e_poly.add_term(ex, p * rng.gen_range(-p..=p));
            }
        }
    }
    let spec = FrameSpec {
        p: s.p,
        r: s.r,
        e: s.e,
        a: s.a,
        prec: s.prec,
        tdeg: s.tdeg,
        witt_len: s.witt_len,
        max_level: None,
        e_poly,
    };
    Frame::checked(spec).expect("generated frames are valid")
}

pub fn random_elem(rng: &mut impl Rng, ring: &Ring) -> SeriesElem {
    let m = ring.modulus() as i128;
    let mut x = ring.zero();
    for j in 0..ring.nu() {
        for ti in 0..ring.nt() {
            let texp = ring.frame().tbasis().exponent(ti).to_vec();
            x = &x + &ring.monomial(&texp, j, rng.gen_range(0..m));
        }
    }
    x
}

/// Random element divisible by `u^k`.
pub fn random_elem_u(rng: &mut impl Rng, ring: &Ring, k: usize) -> SeriesElem {
    &random_elem(rng, ring) * &ring.u().pow(k as u64)
}

pub fn random_unit(rng: &mut impl Rng, ring: &Ring) -> SeriesElem {
    loop {
        let x = random_elem(rng, ring);
        if x.is_unit() {
            return x;
        }
    }
}

pub fn random_matrix(rng: &mut impl Rng, ring: &Ring, rows: usize, cols: usize) -> Matrix {
    Matrix::from_fn(ring, rows, cols, |_, _| random_elem(rng, ring))
}

pub fn random_invertible(rng: &mut impl Rng, ring: &Ring, n: usize) -> Matrix {
    loop {
        let m = random_matrix(rng, ring, n, n);
        if m.det().is_unit() {
            return m;
        }
    }
}

pub fn random_window(rng: &mut impl Rng, frame: &Arc<Frame>, level: usize, d: usize, c: usize) -> Window {
    let ring = Ring::series(frame, level);
    Window::new(d, c, random_invertible(rng, &ring, d + c)).expect("invertible")
}

/// Multiply the `LJ` block (rows `≥ d`, columns `< d`) by `E`.
fn e_scale_lj(m: &Matrix, d: usize) -> Matrix {
    let e = m.ring().e_elem();
    let mut out = m.clone();
    for i in d..m.rows() {
        for j in 0..d {
            out.set(i, j, m.get(i, j) * &e);
        }
    }
    out
}

/// Invertible `V` whose `LJ` block is divisible by `E`, so that transport
/// along `V` keeps windows in normal form: `A' = σ(V)·A·C·V^{-1}·C^{-1}`.
pub fn random_stabilizer(rng: &mut impl Rng, ring: &Ring, d: usize, c: usize) -> Matrix {
    loop {
        let v = e_scale_lj(&random_matrix(rng, ring, d + c, d + c), d);
        if v.det().is_unit() {
            return v;
        }
    }
}

/// `U = I + u^e·V` with the `LJ` block of `V` divisible by `E`, together with
/// `A_2 = σ(U)·A_1·C·U^{-1}·C^{-1}`. The conjugate is formed from the
/// undivided `V`, so `A_2 ≡ A_1 mod u^e` holds on the nose rather than up
/// to `Ann(E)`.
pub fn random_congruent_transport(rng: &mut impl Rng, a1: &Matrix, d: usize, c: usize) -> (Matrix, Matrix) {
    let ring = a1.ring();
    let h = d + c;
    let ue = ring.u().pow(ring.frame().e() as u64);
    let w = random_matrix(rng, ring, h, h);
    let u = Matrix::identity(ring, h).add(&e_scale_lj(&w, d).scale(&ue));
    // C·V·C^{-1}: LJ block W, JL block E·W
    let mut wc = w.clone();
    for i in 0..d {
        for j in d..h {
            wc.set(i, j, w.get(i, j) * &ring.e_elem());
        }
    }
    let conj = Matrix::identity(ring, h).add(&wc.scale(&ue)).inverse().expect("unipotent mod u");
    let a2 = u.frobenius().expect("series").mul(a1).mul(&conj);
    (u, a2)
}

/// `A_2 = σ(V)·A_1·C·V^{-1}·C^{-1}` for a stabilizer `V`, the normal form of
/// the window obtained by transporting along `V`.
pub fn transport_stabilizer(a1: &Matrix, v: &Matrix, d: usize, c: usize) -> Matrix {
    let ring = a1.ring();
    let vinv = v.inverse().expect("invertible");
    // C·V^{-1}·C^{-1} divides the LJ block of V^{-1} by E
    let mut conj = vinv.clone();
    for i in 0..d + c {
        for j in 0..d + c {
            let x = vinv.get(i, j);
            let y = if i < d && j >= d {
                x * &ring.e_elem()
            } else if i >= d && j < d {
                x.div_by_e().expect("stabilizer")
            } else {
                x.clone()
            };
            conj.set(i, j, y);
        }
    }
    v.frobenius().expect("series").mul(a1).mul(&conj)
}

/// Lower-triangular `A'` with unit diagonal.
fn random_lower(rng: &mut impl Rng, ring: &Ring, h: usize) -> Matrix {
    Matrix::from_fn(ring, h, h, |i, j| match i.cmp(&j) {
        std::cmp::Ordering::Greater => random_elem(rng, ring),
        std::cmp::Ordering::Equal => random_unit(rng, ring),
        std::cmp::Ordering::Less => ring.zero(),
    })
}

fn p_diagonal(ring: &Ring, ks: &[u32]) -> Matrix {
    let p = ring.p() as i128;
    let diag: Vec<SeriesElem> = ks.iter().map(|&k| ring.from_int(p.pow(k))).collect();
    Matrix::diagonal(ring, &diag)
}

fn conj_by_p_diagonal(a: &Matrix, ks: &[u32]) -> Matrix {
    let p = a.ring().p() as i128;
    Matrix::from_fn(a.ring(), a.rows(), a.cols(), |i, j| {
        // lower triangular, so k_i ≥ k_j
        a.get(i, j).scale(p.pow(ks[i].saturating_sub(ks[j])))
    })
}

/// Random nondecreasing exponents with sum at most `budget`.
fn random_ks(rng: &mut impl Rng, h: usize, budget: u32) -> Vec<u32> {
    let mut ks: Vec<u32> = (0..h).map(|_| rng.gen_range(0..=budget / h.max(1) as u32)).collect();
    ks.sort_unstable();
    ks
}

/// An isogeny `D = diag(p^{k_i})` from `(d, c, A')` to `(d, c, D·A'·D^{-1})`,
/// with `A'` lower triangular, then conjugated by random stabilizers on both
/// sides. The total `p`-exponent is at most `budget`.
pub fn random_isogeny(rng: &mut impl Rng, frame: &Arc<Frame>, level: usize, d: usize, c: usize, budget: u32) -> IsogenyModule {
    let ring = Ring::series(frame, level);
    let h = d + c;
    let a1 = random_lower(rng, &ring, h);
    let ks = random_ks(rng, h, budget);
    let a2 = conj_by_p_diagonal(&a1, &ks);
    let dm = p_diagonal(&ring, &ks);
    let v1 = random_stabilizer(rng, &ring, d, c);
    let v2 = random_stabilizer(rng, &ring, d, c);
    let src = Window::new(d, c, transport_stabilizer(&a1, &v1, d, c)).expect("invertible");
    let tgt = Window::new(d, c, transport_stabilizer(&a2, &v2, d, c)).expect("invertible");
    let u = v2.mul(&dm).mul(&v1.inverse().expect("invertible"));
    crate::module::make_module(&src, &tgt, &u).expect("constructed isogeny")
}

/// A second isogeny `p^k·V` out of the target of `first`, `V` a stabilizer,
/// with p-length at most `budget`.
pub fn random_isogeny_after(rng: &mut impl Rng, first: &IsogenyModule, budget: u32) -> IsogenyModule {
    let w = first.target();
    let (d, c) = (w.d(), w.c());
    let ring = w.ring().clone();
    let k = rng.gen_range(0..=budget / (d + c).max(1) as u32);
    let v = random_stabilizer(rng, &ring, d, c);
    let tgt = Window::new(d, c, transport_stabilizer(w.a(), &v, d, c)).expect("invertible");
    let u = v.scale(&ring.from_int((ring.p() as i128).pow(k)));
    crate::module::make_module(w, &tgt, &u).expect("constructed isogeny")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::window::check_morphism;

    fn shape() -> Shape {
        Shape { p: 3, r: 1, e: 2, a: 2, prec: 6, tdeg: 2, witt_len: 2 }
    }

    #[test]
    fn generators_are_deterministic() {
        let f1 = random_frame(&mut rng(7), shape());
        let f2 = random_frame(&mut rng(7), shape());
        assert_eq!(f1.e_poly(), f2.e_poly());
        let w1 = random_window(&mut rng(1), &f1, 2, 1, 1);
        let w2 = random_window(&mut rng(1), &f1, 2, 1, 1);
        assert_eq!(w1, w2);
    }

    #[test]
    fn stabilizer_transport_is_isomorphism() {
        let mut g = rng(3);
        let f = random_frame(&mut g, shape());
        let w = random_window(&mut g, &f, 2, 1, 1);
        let v = random_stabilizer(&mut g, w.ring(), 1, 1);
        let a2 = transport_stabilizer(w.a(), &v, 1, 1);
        let w2 = Window::new(1, 1, a2).unwrap();
        assert!(check_morphism(&w, &w2, &v).unwrap());
    }

    #[test]
    fn isogenies_are_morphisms() {
        let mut g = rng(5);
        let f = random_frame(&mut g, shape());
        for _ in 0..3 {
            let m = random_isogeny(&mut g, &f, 2, 1, 1, 2);
            assert!(check_morphism(m.source(), m.target(), m.u()).unwrap());
            let n = random_isogeny_after(&mut g, &m, 2);
            let comp = m.compose(&n).unwrap();
            assert_eq!(comp.p_length(), m.p_length() + n.p_length());
        }
    }
}
