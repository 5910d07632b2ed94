//! Self-dual / anti-self-dual middle forms of `ℝ^{4m}` and the middle-grade
//! Clifford map `P(v, w) = ⟨v·w⟩_{2m}`.

use serde::{Deserialize, Serialize};

use crate::blade::Blade;
use crate::error::{Error, Result};
use crate::multivector::RationalMultivector as Mv;
use crate::scalar::{int, rational, Rational};
use num_traits::{One, Zero};

/// Which `⋆`-eigenspace of `∧^{2m}ℝ^{4m}`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Duality {
    SelfDual,
    AntiSelfDual,
}

impl Duality {
    pub fn eigenvalue(self) -> i64 {
        match self {
            Duality::SelfDual => 1,
            Duality::AntiSelfDual => -1,
        }
    }
}

/// Bases of `Λ⁺` and `Λ⁻`, each of size `C(4m, 2m) / 2`.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenSplit {
    pub m: usize,
    pub positive: Vec<Mv>,
    pub negative: Vec<Mv>,
}

impl EigenSplit {
    pub fn dim(&self) -> usize {
        4 * self.m
    }

    pub fn basis(&self, side: Duality) -> &[Mv] {
        match side {
            Duality::SelfDual => &self.positive,
            Duality::AntiSelfDual => &self.negative,
        }
    }
}

fn check_m(m: usize) -> Result<()> {
    if (1..=2).contains(&m) {
        Ok(())
    } else {
        Err(Error::Unsupported(format!("eigen split is available for m = 1, 2; got {m}")))
    }
}

fn half_sum(blade: Blade, n: usize, sign: i64) -> Mv {
    let e = Mv::from_blade(n, blade, rational(1, 2));
    let star = e.hodge_star().scale(&int(sign));
    &e + &star
}

/// Builds `(e_I ± ⋆e_I) / 2` over middle blades `I` containing index 1.
///
/// For `m = 1` the order is `f₁ = (e12+e34)/2, f₂ = (e14+e23)/2,
/// f₃ = (e13+e42)/2` and `f₁' = (e12−e34)/2, f₂' = (e13−e42)/2,
/// f₃' = (e14−e23)/2`, under which `P` is the cross product on both sides.
pub fn build_eigen_split(m: usize) -> Result<EigenSplit> {
    check_m(m)?;
    let n = 4 * m;
    let pick = |order: &[&[usize]], sign: i64| -> Vec<Mv> {
        order
            .iter()
            .map(|idx| half_sum(Blade::from_indices(idx).expect("distinct").1, n, sign))
            .collect()
    };
    if m == 1 {
        return Ok(EigenSplit {
            m,
            positive: pick(&[&[1, 2], &[1, 4], &[1, 3]], 1),
            negative: pick(&[&[1, 2], &[1, 3], &[1, 4]], -1),
        });
    }
    let leading: Vec<Blade> = Blade::of_grade(n, 2 * m).into_iter().filter(|b| b.bits() & 1 == 1).collect();
    Ok(EigenSplit {
        m,
        positive: leading.iter().map(|&b| half_sum(b, n, 1)).collect(),
        negative: leading.iter().map(|&b| half_sum(b, n, -1)).collect(),
    })
}

fn check_middle(m: usize, v: &Mv) -> Result<()> {
    if v.dim() != 4 * m {
        return Err(Error::DimensionMismatch {
            left: 4 * m,
            right: v.dim(),
        });
    }
    if !v.is_homogeneous_of(2 * m) {
        return Err(Error::WrongGrade { expected: 2 * m });
    }
    Ok(())
}

/// `P(v, w) = ⟨v · w⟩_{2m}` for middle forms of `ℝ^{4m}`.
pub fn p_map(m: usize, v: &Mv, w: &Mv) -> Result<Mv> {
    check_middle(m, v)?;
    check_middle(m, w)?;
    v.clifford(w)?.grade_project(2 * m)
}

/// On middle forms, `⋆v = ⟨(−1)^m e_{12…n} · v⟩_{2m}`; checked on every blade.
pub fn hodge_is_left_clifford(m: usize) -> Result<bool> {
    check_m(m)?;
    let n = 4 * m;
    let sign = if m.is_multiple_of(2) { 1 } else { -1 };
    let left = Mv::pseudoscalar(n).scale(&int(sign));
    for blade in Blade::of_grade(n, 2 * m) {
        let v = Mv::from_blade(n, blade, Rational::one());
        if left.clifford(&v)?.grade_project(2 * m)? != v.hodge_star() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exhaustive exact check that `P(Λ^±, Λ^±) ⊂ Λ^±` on the full bases, and that
/// `⋆P(v, w) = P(⋆v, w)` on all pairs of middle blades.
pub fn check_p_closure(m: usize) -> Result<bool> {
    let split = build_eigen_split(m)?;
    for side in [Duality::SelfDual, Duality::AntiSelfDual] {
        let basis = split.basis(side);
        let ev = int(side.eigenvalue());
        for u in basis {
            for w in basis {
                let p = p_map(m, u, w)?;
                if p.hodge_star() != p.scale(&ev) {
                    return Ok(false);
                }
            }
        }
    }
    let n = 4 * m;
    let blades: Vec<Mv> = Blade::of_grade(n, 2 * m)
        .into_iter()
        .map(|b| Mv::from_blade(n, b, Rational::one()))
        .collect();
    for v in &blades {
        let star_v = v.hodge_star();
        for w in &blades {
            if p_map(m, v, w)?.hodge_star() != p_map(m, &star_v, w)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Coordinates of `v` in an orthogonal basis (`⟨v, b_i⟩ / ⟨b_i, b_i⟩`).
pub fn coordinates(basis: &[Mv], v: &Mv) -> Result<Vec<Rational>> {
    basis
        .iter()
        .map(|b| Ok(v.euclidean_inner(b)? / b.norm_squared()))
        .collect()
}

/// `c[i][j][k]`: the `f_k`-coordinate of `P(f_i, f_j)` for `m = 1`.
pub fn structure_constants(side: Duality) -> Result<Vec<Vec<Vec<Rational>>>> {
    let split = build_eigen_split(1)?;
    let basis = split.basis(side);
    basis
        .iter()
        .map(|u| basis.iter().map(|w| coordinates(basis, &p_map(1, u, w)?)).collect())
        .collect()
}

fn levi_civita(i: usize, j: usize, k: usize) -> i64 {
    match (i, j, k) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1,
        _ => 0,
    }
}

/// Verifies that `P` restricted to `Λ^±` (m = 1) has the structure constants
/// of the cross product on `ℝ³`, and that those constants satisfy
/// `Σ_k ε_ijk ε_lmk = δ_il δ_jm − δ_im δ_jl`. The latter is the coefficient
/// form of the Lagrange identity `|u×w|² = |u|²|w|² − (u·w)²`, so together
/// they show no 2-dimensional subspace of `Λ^±` is closed under `P`.
pub fn cross_product_structure_holds(side: Duality) -> Result<bool> {
    let c = structure_constants(side)?;
    for i in 0..3 {
        for j in 0..3 {
            for k in 0..3 {
                if c[i][j][k] != int(levi_civita(i, j, k)) {
                    return Ok(false);
                }
            }
        }
    }
    let delta = |a: usize, b: usize| if a == b { int(1) } else { int(0) };
    for i in 0..3 {
        for j in 0..3 {
            for l in 0..3 {
                for mm in 0..3 {
                    let lhs = (0..3).fold(Rational::zero(), |acc, k| acc + c[i][j][k].clone() * c[l][mm][k].clone());
                    let rhs = delta(i, l) * delta(j, mm) - delta(i, mm) * delta(j, l);
                    if lhs != rhs {
                        return Ok(false);
                    }
                }
            }
        }
    }
    Ok(true)
}

/// `P(u, w)` and its component orthogonal to `span{u, w}`.
#[derive(Clone, Debug, PartialEq)]
pub struct CrossProductCertificate {
    pub side: Duality,
    pub product: Mv,
    pub orthogonal: Mv,
}

fn eigen_side(v: &Mv) -> Option<Duality> {
    let star = v.hodge_star();
    if star == *v {
        Some(Duality::SelfDual)
    } else if star == -v {
        Some(Duality::AntiSelfDual)
    } else {
        None
    }
}

/// Certificate that `span{u, w}` is not closed under `P`, for `u, w` in the
/// same `⋆`-eigenspace of `∧²ℝ⁴`. Returns `None` when `u, w` are dependent.
pub fn cross_product_certificate(u: &Mv, w: &Mv) -> Result<Option<CrossProductCertificate>> {
    check_middle(1, u)?;
    check_middle(1, w)?;
    let gram = u.norm_squared() * w.norm_squared() - u.euclidean_inner(w)?.pow(2);
    if gram.is_zero() {
        return Ok(None);
    }
    let side = match (eigen_side(u), eigen_side(w)) {
        (Some(a), Some(b)) if a == b => a,
        _ => {
            return Err(Error::Unsupported(
                "cross-product certificates need both forms in the same eigenspace of ⋆".into(),
            ))
        }
    };
    let product = p_map(1, u, w)?;
    // Project onto span{u, w} by solving the 2x2 Gram system.
    let (uu, ww, uw) = (u.norm_squared(), w.norm_squared(), u.euclidean_inner(w)?);
    let (pu, pw) = (product.euclidean_inner(u)?, product.euclidean_inner(w)?);
    let alpha = (pu.clone() * ww.clone() - pw.clone() * uw.clone()) / gram.clone();
    let beta = (pw * uu - pu * uw) / gram;
    let projection = &u.scale(&alpha) + &w.scale(&beta);
    let orthogonal = &product - &projection;
    Ok(Some(CrossProductCertificate {
        side,
        product,
        orthogonal,
    }))
}

/// Lagrange identity for `u, w ∈ Λ^±` in `f`-coordinates.
pub fn lagrange_identity_holds(u: &Mv, w: &Mv) -> Result<bool> {
    let side = eigen_side(u).ok_or(Error::WrongGrade { expected: 2 })?;
    let split = build_eigen_split(1)?;
    let basis = split.basis(side);
    let dot = |x: &[Rational], y: &[Rational]| -> Rational {
        x.iter().zip(y).fold(Rational::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    };
    let (cu, cw) = (coordinates(basis, u)?, coordinates(basis, w)?);
    let cp = coordinates(basis, &p_map(1, u, w)?)?;
    Ok(dot(&cp, &cp) == dot(&cu, &cu) * dot(&cw, &cw) - dot(&cu, &cw).pow(2))
}
