//! Euclidean exterior and Clifford products on `∧*ℝⁿ`.
//!
//! The standard basis is orthonormal, the orientation is `e_{12…n}`, and
//! `⋆` is fixed by `e_I ∧ ⋆e_I = e_{12…n}`.

use crate::blade::{reorder_sign, Blade};
use crate::error::{Error, Result};
use crate::multivector::Multivector;
use crate::scalar::Scalar;

/// Bilinear extension of a blade-pair rule. `rule` returns the output blade
/// and the factor multiplying `a_I b_J`, or `None` when the pair vanishes.
pub(crate) fn bilinear<T: Scalar>(
    a: &Multivector<T>,
    b: &Multivector<T>,
    rule: impl Fn(Blade, Blade) -> Option<(Blade, T)>,
) -> Result<Multivector<T>> {
    a.ensure_same_dim(b)?;
    let mut out = Multivector::zero(a.dim());
    for (ba, va) in a.terms() {
        for (bb, vb) in b.terms() {
            if let Some((blade, factor)) = rule(ba, bb) {
                out.add_term(blade, factor * va.clone() * vb.clone());
            }
        }
    }
    Ok(out)
}

fn sign<T: Scalar>(s: i32) -> T {
    if s > 0 {
        T::one()
    } else {
        -T::one()
    }
}

impl<T: Scalar> Multivector<T> {
    pub fn wedge(&self, other: &Self) -> Result<Self> {
        bilinear(self, other, |x, y| {
            (x.bits() & y.bits() == 0)
                .then(|| (Blade::from_bits(x.bits() | y.bits()), sign(reorder_sign(x.bits(), y.bits()))))
        })
    }

    /// Clifford product for the Euclidean inner product: `e_i e_i = 1`,
    /// `e_i e_j = -e_j e_i`.
    pub fn clifford(&self, other: &Self) -> Result<Self> {
        bilinear(self, other, |x, y| {
            Some((Blade::from_bits(x.bits() ^ y.bits()), sign(reorder_sign(x.bits(), y.bits()))))
        })
    }

    /// The `∧ᵏ`-component `⟨a⟩_k`.
    pub fn grade_project(&self, k: usize) -> Result<Self> {
        if k > self.dim() {
            return Err(Error::GradeOutOfRange { grade: k, dim: self.dim() });
        }
        let mut out = Multivector::zero(self.dim());
        for (b, v) in self.terms().filter(|(b, _)| b.grade() == k) {
            out.add_term(b, v.clone());
        }
        Ok(out)
    }

    /// `Σ_I a_I b_I`; induced basis blades are orthonormal.
    pub fn euclidean_inner(&self, other: &Self) -> Result<T> {
        self.ensure_same_dim(other)?;
        let mut acc = T::zero();
        for (b, v) in self.terms() {
            acc = acc + v.clone() * other.coeff(b);
        }
        Ok(acc)
    }

    pub fn norm_squared(&self) -> T {
        self.terms().fold(T::zero(), |acc, (_, v)| acc + v.clone() * v.clone())
    }

    pub fn hodge_star(&self) -> Self {
        let n = self.dim();
        let mut out = Multivector::zero(n);
        for (b, v) in self.terms() {
            let c = b.complement(n);
            out.add_term(c, sign::<T>(reorder_sign(b.bits(), c.bits())) * v.clone());
        }
        out
    }

    /// Checks `|⟨a·b⟩_k| ≤ 2ⁿ |a| |b|`, squared so it stays exact.
    pub fn clifford_grade_bound_check(&self, other: &Self, k: usize) -> Result<bool> {
        let part = self.clifford(other)?.grade_project(k)?;
        let bound = T::from_int(1i64 << (2 * self.dim()));
        Ok(part.norm_squared() <= bound * self.norm_squared() * other.norm_squared())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multivector::RationalMultivector as Mv;
    use crate::scalar::{int, Rational};

    fn mv(dim: usize, s: &str) -> Mv {
        Mv::parse(dim, s).unwrap()
    }

    #[test]
    fn wedge_examples() {
        assert_eq!(mv(4, "e1").wedge(&mv(4, "e2")).unwrap(), mv(4, "e12"));
        assert!(mv(4, "e1").wedge(&mv(4, "e1")).unwrap().is_zero());
        assert_eq!(mv(4, "e1 + e2").wedge(&mv(4, "e34")).unwrap(), mv(4, "e134 + e234"));
        assert_eq!(mv(4, "e2").wedge(&mv(4, "e1")).unwrap(), mv(4, "-e12"));
    }

    #[test]
    fn wedge_rejects_dimension_mismatch() {
        assert_eq!(
            mv(3, "e1").wedge(&mv(4, "e2")),
            Err(Error::DimensionMismatch { left: 3, right: 4 })
        );
    }

    #[test]
    fn grade_projection_examples() {
        assert_eq!(mv(4, "3 + e1 + e12").grade_project(1).unwrap(), mv(4, "e1"));
        assert!(mv(4, "e12").grade_project(0).unwrap().is_zero());
        let sq = mv(4, "e1").clifford(&mv(4, "e1")).unwrap();
        assert_eq!(sq.grade_project(0).unwrap(), mv(4, "1"));
        assert!(matches!(mv(4, "e1").grade_project(5), Err(Error::GradeOutOfRange { .. })));
    }

    #[test]
    fn inner_examples() {
        assert_eq!(mv(4, "e12").euclidean_inner(&mv(4, "e12")).unwrap(), int(1));
        assert_eq!(mv(4, "e12").euclidean_inner(&mv(4, "e13")).unwrap(), int(0));
        assert_eq!(mv(4, "2*e1 + 3*e2").euclidean_inner(&mv(4, "e1 - e2")).unwrap(), int(-1));
    }

    #[test]
    fn hodge_examples() {
        assert_eq!(mv(4, "e12").hodge_star(), mv(4, "e34"));
        assert_eq!(mv(4, "e13").hodge_star(), mv(4, "-e24"));
        assert_eq!(mv(4, "e12").hodge_star().hodge_star(), mv(4, "e12"));
        assert_eq!(mv(3, "e1").hodge_star(), mv(3, "e23"));
        assert_eq!(mv(3, "e2").hodge_star(), mv(3, "-e13"));
        assert_eq!(mv(4, "1").hodge_star(), Mv::pseudoscalar(4));
    }

    #[test]
    fn clifford_examples() {
        assert_eq!(mv(4, "e1").clifford(&mv(4, "e1")).unwrap(), mv(4, "1"));
        assert_eq!(mv(4, "e1").clifford(&mv(4, "e2")).unwrap(), mv(4, "e12"));
        assert_eq!(mv(4, "e2").clifford(&mv(4, "e1")).unwrap(), mv(4, "-e12"));
        // (e1 e2)(e2 e3) = e1 (e2 e2) e3 = e1 e3
        let chain = mv(4, "e1").clifford(&mv(4, "e2")).unwrap()
            .clifford(&mv(4, "e2").clifford(&mv(4, "e3")).unwrap()).unwrap();
        assert_eq!(chain, mv(4, "e13"));
        assert_eq!(mv(4, "e12").clifford(&mv(4, "e23")).unwrap(), chain);
        // e12 e12 = -1
        assert_eq!(mv(4, "e12").clifford(&mv(4, "e12")).unwrap(), mv(4, "-1"));
    }

    #[test]
    fn bound_check_examples() {
        assert!(mv(4, "e1").clifford_grade_bound_check(&mv(4, "e2"), 2).unwrap());
        let z = Mv::zero(4);
        for k in 0..=4 {
            assert!(z.clifford_grade_bound_check(&z, k).unwrap());
        }
    }

    #[test]
    fn anticommutator_of_vectors() {
        let v = mv(3, "2*e1 - e2 + 1/3*e3");
        let w = mv(3, "e1 + 5*e2 - e3");
        let s = &v.clifford(&w).unwrap() + &w.clifford(&v).unwrap();
        let ip: Rational = v.euclidean_inner(&w).unwrap();
        assert_eq!(s, Mv::scalar(3, ip * int(2)));
    }
}
