//! Breuil modules presented as cokernels of isogenies of windows.

use thiserror::Error;

use crate::matrix::Matrix;
use crate::series::SeriesElem;
use crate::window::{check_morphism, Window, WindowError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModuleError {
    #[error(transparent)]
    Window(#[from] WindowError),
    #[error("U is not a morphism of windows")]
    NotMorphism,
    #[error("det(U) vanishes at the working precision")]
    DetZero,
    #[error("det(U) is not a unit times a power of p")]
    NotPTorsion,
    #[error("det(U) = unit * p^{m} needs precision above N = {prec}")]
    Precision { m: u32, prec: u32 },
}

/// `M = Q / U(Q')` for an isogeny `U: W' → W`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsogenyModule {
    source: Window,
    target: Window,
    u: Matrix,
    m: u32,
}

/// Write `det = unit · p^m`, returning `m`.
pub fn det_exponent(det: &SeriesElem) -> Result<u32, ModuleError> {
    let prec = det.ring().prec();
    let m = det.p_valuation().ok_or(ModuleError::DetZero)?;
    if m >= prec {
        return Err(ModuleError::Precision { m, prec });
    }
    let unit = det.div_p_pow(m).expect("valuation divides");
    if !unit.is_unit() {
        return Err(ModuleError::NotPTorsion);
    }
    Ok(m)
}

pub fn make_module(source: &Window, target: &Window, u: &Matrix) -> Result<IsogenyModule, ModuleError> {
    if !check_morphism(source, target, u)? {
        return Err(ModuleError::NotMorphism);
    }
    let m = det_exponent(&u.det())?;
    Ok(IsogenyModule { source: source.clone(), target: target.clone(), u: u.clone(), m })
}

impl IsogenyModule {
    pub fn source(&self) -> &Window {
        &self.source
    }
    pub fn target(&self) -> &Window {
        &self.target
    }
    pub fn u(&self) -> &Matrix {
        &self.u
    }

    /// Length of `M` at the prime `(p)`.
    pub fn p_length(&self) -> u32 {
        self.m
    }

    /// Order `p^m` of the associated group scheme.
    pub fn group_order(&self) -> u128 {
        (self.source.ring().p() as u128).pow(self.m)
    }

    /// `W` with `U·W = p^m·I`, showing that `p^m` kills the cokernel.
    pub fn annihilator_witness(&self) -> Matrix {
        let det = self.u.det();
        let unit = det.div_p_pow(self.m).expect("valuation divides").invert().expect("unit");
        self.u.adjugate().scale(&unit)
    }

    /// `U_2·U_1` for `self = U_1: W_1 → W_2` and `next = U_2: W_2 → W_3`.
    pub fn compose(&self, next: &IsogenyModule) -> Result<IsogenyModule, ModuleError> {
        if self.target != next.source {
            return Err(ModuleError::Window(WindowError::Incompatible));
        }
        make_module(&self.source, &next.target, &next.u.mul(&self.u))
    }
}

pub fn p_length(m: &IsogenyModule) -> u32 {
    m.p_length()
}

pub fn group_order(m: &IsogenyModule) -> u128 {
    m.group_order()
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ModuleReport {
    pub m: Option<u32>,
    pub violations: Vec<String>,
}

impl ModuleReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Check the presentation `0 → Q' → Q → M → 0` of a Breuil module: `U` is a
/// morphism, `φ` and `U` are injective, `det(U)` is a unit times `p^m`,
/// `adj(U)·U = det(U)·I`, and the Lie ranks `d'`, `d` agree.
pub fn validate_breuil_module(source: &Window, target: &Window, u: &Matrix) -> ModuleReport {
    let mut violations = Vec::new();
    if source.d() != target.d() || source.c() != target.c() {
        violations.push(format!(
            "rank mismatch: d' = {}, c' = {} but d = {}, c = {}",
            source.d(),
            source.c(),
            target.d(),
            target.c()
        ));
        return ModuleReport { m: None, violations };
    }
    match check_morphism(source, target, u) {
        Ok(true) => {}
        Ok(false) => violations.push("U is not a morphism".to_string()),
        Err(e) => {
            violations.push(e.to_string());
            return ModuleReport { m: None, violations };
        }
    }
    for (name, w) in [("source", source), ("target", target)] {
        if w.phi_matrix().det().is_zero() {
            violations.push(format!("det(phi) of the {} vanishes", name));
        }
    }
    let det = u.det();
    let m = match det_exponent(&det) {
        Ok(m) => Some(m),
        Err(e) => {
            violations.push(e.to_string());
            None
        }
    };
    let h = u.rows();
    if u.adjugate().mul(u) != Matrix::identity(u.ring(), h).scale(&det) {
        violations.push("adj(U)·U differs from det(U)·I".to_string());
    }
    ModuleReport { m, violations }
}
