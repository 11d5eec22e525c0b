//! Rigidity of morphisms over `𝔖_{ap}` and the hom-space search used as
//! its oracle.
//!
//! The search works on an integer lift of the two windows, i.e. over the
//! p-torsion-free ring `W(k)[t, u]/(t-degree > D, u^{ape})`, and decides
//! whether the morphism equation has a nonzero rational solution by a rank
//! computation modulo the prime `2^61 - 1`. Working modulo `p^N` instead
//! would produce spurious solutions killed by `E` at finite precision.

use crate::matrix::Matrix;
use crate::series::{mulmod, SeriesElem};
use crate::window::{check_morphism, Window, WindowError};

/// The auxiliary prime used for rank computations.
pub const ELL: u64 = (1 << 61) - 1;

fn add_l(a: u64, b: u64) -> u64 {
    let s = a + b;
    if s >= ELL {
        s - ELL
    } else {
        s
    }
}

fn sub_l(a: u64, b: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + ELL - b
    }
}

fn red_l(c: i128) -> u64 {
    c.rem_euclid(ELL as i128) as u64
}

fn pow_l(mut b: u64, mut k: u64) -> u64 {
    let mut r = 1;
    while k > 0 {
        if k & 1 == 1 {
            r = mulmod(r, b, ELL);
        }
        b = mulmod(b, b, ELL);
        k >>= 1;
    }
    r
}

/// Rank of a dense matrix over `Z/ELL`.
pub fn rank_mod_ell(mut rows: Vec<Vec<u64>>) -> usize {
    let ncols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(piv) = (rank..rows.len()).find(|&r| rows[r][col] != 0) else { continue };
        rows.swap(rank, piv);
        let inv = pow_l(rows[rank][col], ELL - 2);
        let pivot_row: Vec<u64> = rows[rank].iter().map(|&x| mulmod(x, inv, ELL)).collect();
        for r in 0..rows.len() {
            if r != rank && rows[r][col] != 0 {
                let f = rows[r][col];
                for k in col..ncols {
                    rows[r][k] = sub_l(rows[r][k], mulmod(f, pivot_row[k], ELL));
                }
            }
        }
        rows[rank] = pivot_row;
        rank += 1;
    }
    rank
}

/// Result of a hom-space search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HomSearch {
    pub unknowns: usize,
    pub equations: usize,
    pub rank: usize,
}

impl HomSearch {
    /// Dimension of the solution space over `Q`.
    pub fn kernel_dim(&self) -> usize {
        self.unknowns - self.rank
    }
}

/// Integer lift of `φ = A·C` modulo `ELL`, entry layout as in `SeriesElem`.
fn phi_lift(w: &Window) -> Vec<Vec<Vec<u64>>> {
    let ring = w.ring();
    let frame = w.frame();
    let (nt, nu) = (ring.nt(), ring.nu());
    let tb = frame.tbasis();
    let r = frame.r();
    let mut e = vec![0u64; nt * nu];
    for (exp, c) in frame.e_poly().terms() {
        let j = exp[r] as usize;
        if let Some(ti) = tb.index_of(&exp[..r]) {
            if j < nu && ti < nt {
                e[j * nt + ti] = add_l(e[j * nt + ti], red_l(c));
            }
        }
    }
    let h = w.height();
    (0..h)
        .map(|i| {
            (0..h)
                .map(|k| {
                    let a: Vec<u64> = w.a().get(i, k).coeffs().to_vec();
                    if k >= w.d() {
                        return a;
                    }
                    let mut out = vec![0u64; nt * nu];
                    for (x, &ax) in a.iter().enumerate().filter(|(_, &v)| v != 0) {
                        for (y, &ey) in e.iter().enumerate().filter(|(_, &v)| v != 0) {
                            let j = x / nt + y / nt;
                            if j >= nu {
                                continue;
                            }
                            if let Some(t) = tb.mul(x % nt, y % nt) {
                                if t < nt {
                                    out[j * nt + t] = add_l(out[j * nt + t], mulmod(ax, ey, ELL));
                                }
                            }
                        }
                    }
                    out
                })
                .collect()
        })
        .collect()
}

/// Search for morphisms `U: src → tgt` over the torsion-free lift of
/// `𝔖_level` whose entries only involve `u^j` with `j ≥ min_u`.
///
/// Unknowns are ordered layer by layer in the u-degree.
pub fn hom_search(src: &Window, tgt: &Window, min_u: usize) -> Result<HomSearch, WindowError> {
    if src.ring() != tgt.ring() {
        return Err(WindowError::Incompatible);
    }
    let ring = src.ring();
    let tb = src.frame().tbasis();
    let p = ring.p() as usize;
    let (nt, nu) = (ring.nt(), ring.nu());
    let (h1, h2) = (src.height(), tgt.height());
    let m1 = phi_lift(src);
    let m2 = phi_lift(tgt);

    let eq_index = |r: usize, s: usize, t: usize, j: usize| ((r * h1 + s) * nu + j) * nt + t;
    let equations = h2 * h1 * nu * nt;
    let mut columns: Vec<Vec<u64>> = Vec::new();
    for j in min_u..nu {
        for ti in 0..nt {
            for i in 0..h2 {
                for k in 0..h1 {
                    let mut col = vec![0u64; equations];
                    // φ_2·U: entry (r, k) gains φ_2[r][i]·t^ti u^j
                    for (r, row) in m2.iter().enumerate() {
                        for (x, &c) in row[i].iter().enumerate().filter(|(_, &v)| v != 0) {
                            let jj = x / nt + j;
                            if jj >= nu {
                                continue;
                            }
                            if let Some(t) = tb.mul(x % nt, ti).filter(|&t| t < nt) {
                                let q = eq_index(r, k, t, jj);
                                col[q] = add_l(col[q], c);
                            }
                        }
                    }
                    // σ(U)·φ_1: entry (i, s) loses t^{p·ti} u^{pj}·φ_1[k][s]
                    if let Some(ft) = tb.frob(ti).filter(|&t| t < nt) {
                        if p * j < nu {
                            for s in 0..h1 {
                                for (x, &c) in m1[k][s].iter().enumerate().filter(|(_, &v)| v != 0) {
                                    let jj = x / nt + p * j;
                                    if jj >= nu {
                                        continue;
                                    }
                                    if let Some(t) = tb.mul(x % nt, ft).filter(|&t| t < nt) {
                                        let q = eq_index(i, s, t, jj);
                                        col[q] = sub_l(col[q], c);
                                    }
                                }
                            }
                        }
                    }
                    columns.push(col);
                }
            }
        }
    }
    let unknowns = columns.len();
    // rank of the transpose equals rank of the system
    let rank = rank_mod_ell(columns);
    Ok(HomSearch { unknowns, equations, rank })
}

fn vanishes_below(x: &SeriesElem, j: usize) -> bool {
    x.u_valuation().is_none_or(|v| v >= j)
}

/// Rigidity at an instance: `src`, `tgt` live over `𝔖_{ap}`, `u` is a morphism
/// between them and `low` is `a`. Returns whether "U ≡ 0 mod u^{ae} implies
/// U = 0" held, which is vacuous when `U` does not vanish over `𝔖_a`.
pub fn check_rigidity(src: &Window, tgt: &Window, u: &Matrix, low: usize) -> Result<bool, WindowError> {
    if !check_morphism(src, tgt, u)? {
        return Err(WindowError::NotMorphism);
    }
    let cut = low * src.frame().e();
    if !u.entries().all(|x| vanishes_below(x, cut)) {
        return Ok(true);
    }
    Ok(u.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::Frame;
    use crate::series::Ring;

    #[test]
    fn rank_examples() {
        assert_eq!(rank_mod_ell(vec![vec![1, 2], vec![2, 4]]), 1);
        assert_eq!(rank_mod_ell(vec![vec![0, 1], vec![1, 0], vec![1, 1]]), 2);
        assert_eq!(rank_mod_ell(vec![vec![0, 0]]), 0);
    }

    #[test]
    fn identity_morphisms_found() {
        // Over the whole ring, the connected window of height 1 has
        // endomorphisms: at least the scalars.
        let f = Frame::from_params(3, 0, 1, 1, 6, 0, 2, "u + 3").unwrap();
        let s = Ring::series(&f, 3);
        let w = Window::new(1, 0, Matrix::identity(&s, 1)).unwrap();
        assert!(hom_search(&w, &w, 0).unwrap().kernel_dim() >= 1);
        let hs = hom_search(&w, &w, 1).unwrap();
        assert_eq!(hs.kernel_dim(), 0);
        assert_eq!(hs.unknowns, 2);
    }

    #[test]
    fn rigidity_instances() {
        let f = Frame::from_params(3, 0, 1, 1, 6, 0, 2, "u + 3").unwrap();
        let s = Ring::series(&f, 3);
        let w = Window::new(1, 1, Matrix::identity(&s, 2)).unwrap();
        assert!(check_rigidity(&w, &w, &Matrix::zeros(&s, 2, 2), 1).unwrap());
        assert!(check_rigidity(&w, &w, &Matrix::identity(&s, 2).scale_int(9), 1).unwrap());
        // 243·u^2 on the J-block is killed by E mod 3^6 but is not a
        // morphism of the torsion-free lift
        let mut u = Matrix::zeros(&s, 2, 2);
        u.set(0, 0, s.monomial(&[], 2, 243));
        assert!(check_morphism(&w, &w, &u).unwrap());
        assert!(!check_rigidity(&w, &w, &u, 1).unwrap());
        assert_eq!(hom_search(&w, &w, 1).unwrap().kernel_dim(), 0);
    }
}
