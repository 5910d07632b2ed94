//! Exact obstructions to realizing a cohomology ring inside `∧*ℝⁿ`.

pub mod selfdual;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::blade::Blade;
use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::multivector::RationalMultivector as Mv;
use crate::ring::{intersection_form, GradedRing};
use crate::scalar::Rational;
use num_traits::One;

pub use selfdual::{
    build_eigen_split, check_p_closure, cross_product_certificate, hodge_is_left_clifford, p_map,
    CrossProductCertificate, Duality, EigenSplit,
};

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k.min(n - k)).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Obstruction,
    Inapplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "pass",
            Verdict::Obstruction => "obstruction",
            Verdict::Inapplicable => "inapplicable",
        })
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckId {
    BettiBound,
    B1,
    MiddleSplit,
    WedgeSurjectivity,
    Dim4Clifford,
}

impl CheckId {
    pub const ALL: [CheckId; 5] = [
        CheckId::BettiBound,
        CheckId::B1,
        CheckId::MiddleSplit,
        CheckId::WedgeSurjectivity,
        CheckId::Dim4Clifford,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CheckId::BettiBound => "betti_bound",
            CheckId::B1 => "b1",
            CheckId::MiddleSplit => "middle_split",
            CheckId::WedgeSurjectivity => "wedge_surjectivity",
            CheckId::Dim4Clifford => "dim4_clifford",
        }
    }
}

impl fmt::Display for CheckId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CheckId::ALL
            .into_iter()
            .find(|id| id.as_str() == s.trim())
            .ok_or_else(|| {
                let known: Vec<_> = CheckId::ALL.iter().map(|c| c.as_str()).collect();
                Error::Unsupported(format!("unknown check `{s}` (known: {})", known.join(", ")))
            })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BettiExcess {
    pub k: usize,
    pub betti: usize,
    pub binomial: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankComparison {
    pub k: usize,
    pub cup_rank: usize,
    pub wedge_rank: usize,
}

/// Why `span{u, w}` is not closed under `P`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaneCertificate {
    pub side: Duality,
    pub u: String,
    pub w: String,
    pub product: String,
    pub orthogonal: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    BettiBound {
        violations: Vec<BettiExcess>,
    },
    B1 {
        b1: usize,
        n: usize,
    },
    MiddleSplit {
        b_plus: usize,
        b_minus: usize,
        bound: usize,
    },
    WedgeSurjectivity {
        degrees: Vec<RankComparison>,
    },
    Dim4Clifford {
        b_plus: usize,
        b_minus: usize,
        /// Present when either value is 2.
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        certificates: Vec<PlaneCertificate>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        cross_product_identity: Option<bool>,
    },
    NotApplicable {
        reason: String,
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::BettiBound { violations } if violations.is_empty() => write!(f, "b_k <= C(n,k) for all k"),
            Witness::BettiBound { violations } => {
                let parts: Vec<String> = violations
                    .iter()
                    .map(|v| format!("b_{} = {} > C(n,{}) = {}", v.k, v.betti, v.k, v.binomial))
                    .collect();
                f.write_str(&parts.join("; "))
            }
            Witness::B1 { b1, n } => write!(f, "b_1 = {b1}, n - 1 = {}", n - 1),
            Witness::MiddleSplit { b_plus, b_minus, bound } => {
                write!(f, "(b+, b-) = ({b_plus}, {b_minus}), bound {bound}")
            }
            Witness::WedgeSurjectivity { degrees } if degrees.is_empty() => {
                write!(f, "no degree 0 < k < n with b_k = C(n,k)")
            }
            Witness::WedgeSurjectivity { degrees } => {
                let parts: Vec<String> = degrees
                    .iter()
                    .map(|d| format!("k={}: cup rank {}, wedge rank {}", d.k, d.cup_rank, d.wedge_rank))
                    .collect();
                f.write_str(&parts.join("; "))
            }
            Witness::Dim4Clifford {
                b_plus,
                b_minus,
                certificates,
                ..
            } => {
                write!(f, "(b+, b-) = ({b_plus}, {b_minus})")?;
                if !certificates.is_empty() {
                    write!(f, ", {} cross-product certificate(s)", certificates.len())?;
                }
                Ok(())
            }
            Witness::NotApplicable { reason } => f.write_str(reason),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckResult {
    pub id: CheckId,
    pub verdict: Verdict,
    pub witness: Witness,
}

/// Overall flags; `true` means no obstruction was found, not that a
/// realization exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Overall {
    pub conformally_formal_possible: bool,
    pub clifford_formal_possible: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub uqr_elliptic_possible: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionReport {
    pub ring: String,
    pub n: usize,
    pub betti: Vec<usize>,
    pub checks: Vec<CheckResult>,
    pub overall: Overall,
}

impl ObstructionReport {
    pub fn has_obstruction(&self) -> bool {
        self.checks.iter().any(|c| c.verdict == Verdict::Obstruction)
    }

    pub fn check(&self, id: CheckId) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }
}

pub fn check_betti_bound(ring: &GradedRing) -> CheckResult {
    let n = ring.dim();
    let violations: Vec<BettiExcess> = ring
        .betti()
        .iter()
        .enumerate()
        .filter(|&(k, &b)| b > binomial(n, k))
        .map(|(k, &b)| BettiExcess {
            k,
            betti: b,
            binomial: binomial(n, k),
        })
        .collect();
    CheckResult {
        id: CheckId::BettiBound,
        verdict: if violations.is_empty() { Verdict::Pass } else { Verdict::Obstruction },
        witness: Witness::BettiBound { violations },
    }
}

pub fn check_b1(ring: &GradedRing) -> CheckResult {
    let n = ring.dim();
    let b1 = ring.betti()[1];
    CheckResult {
        id: CheckId::B1,
        verdict: if b1 + 1 == n { Verdict::Obstruction } else { Verdict::Pass },
        witness: Witness::B1 { b1, n },
    }
}

fn inapplicable(id: CheckId, reason: String) -> CheckResult {
    CheckResult {
        id,
        verdict: Verdict::Inapplicable,
        witness: Witness::NotApplicable { reason },
    }
}

fn middle_signature(ring: &GradedRing) -> Result<(usize, usize)> {
    let form = intersection_form(ring)?;
    if form.is_degenerate() {
        return Err(Error::DegenerateForm {
            zero: form.signature.zero,
        });
    }
    Ok((form.signature.positive, form.signature.negative))
}

/// Errors on a degenerate intersection form.
pub fn check_middle_split(ring: &GradedRing) -> Result<CheckResult> {
    let n = ring.dim();
    if !n.is_multiple_of(4) {
        return Ok(inapplicable(
            CheckId::MiddleSplit,
            format!("n = {n} is not divisible by 4"),
        ));
    }
    let (b_plus, b_minus) = middle_signature(ring)?;
    let bound = binomial(n, n / 2) / 2;
    Ok(CheckResult {
        id: CheckId::MiddleSplit,
        verdict: if b_plus > bound || b_minus > bound { Verdict::Obstruction } else { Verdict::Pass },
        witness: Witness::MiddleSplit {
            b_plus,
            b_minus,
            bound,
        },
    })
}

/// Rank of the wedge pairing `∧ᵏℝⁿ × ∧ᵏℝⁿ → ∧^{2k}ℝⁿ`.
pub fn wedge_rank(n: usize, k: usize) -> usize {
    if 2 * k > n {
        return 0;
    }
    let basis = Blade::of_grade(n, k);
    let target = Blade::of_grade(n, 2 * k);
    let mut rows = Vec::with_capacity(basis.len() * basis.len());
    for &a in &basis {
        for &b in &basis {
            let p = Mv::from_blade(n, a, Rational::one())
                .wedge(&Mv::from_blade(n, b, Rational::one()))
                .expect("same dimension");
            rows.push(target.iter().map(|&t| p.coeff(t)).collect());
        }
    }
    Matrix::from_rows(rows).map(|m| m.rank()).unwrap_or(0)
}

/// Rank of the cup pairing `H^k × H^k → H^{2k}`.
pub fn cup_rank(ring: &GradedRing, k: usize) -> usize {
    let n = ring.dim();
    let b = ring.betti()[k];
    if 2 * k > n || b == 0 || ring.betti()[2 * k] == 0 {
        return 0;
    }
    let mut rows = Vec::with_capacity(b * b);
    for i in 0..b {
        for j in 0..b {
            rows.push(ring.cup_basis(k, i, k, j));
        }
    }
    Matrix::from_rows(rows).map(|m| m.rank()).unwrap_or(0)
}

/// Compares bilinear-map ranks in every degree where `Φ_k` would have to be
/// onto; this is weaker than deciding whether a subalgebra embedding exists.
pub fn check_wedge_surjectivity(ring: &GradedRing) -> CheckResult {
    let n = ring.dim();
    let degrees: Vec<RankComparison> = (1..n)
        .filter(|&k| ring.betti()[k] == binomial(n, k))
        .map(|k| RankComparison {
            k,
            cup_rank: cup_rank(ring, k),
            wedge_rank: wedge_rank(n, k),
        })
        .collect();
    let blocked = degrees.iter().any(|d| d.cup_rank < d.wedge_rank);
    CheckResult {
        id: CheckId::WedgeSurjectivity,
        verdict: if blocked { Verdict::Obstruction } else { Verdict::Pass },
        witness: Witness::WedgeSurjectivity { degrees },
    }
}

fn plane_certificates(side: Duality) -> Result<Vec<PlaneCertificate>> {
    let split = build_eigen_split(1)?;
    let f = split.basis(side);
    let mut out = Vec::new();
    for (i, j) in [(0, 1), (1, 2), (2, 0)] {
        let cert = cross_product_certificate(&f[i], &f[j])?.expect("basis vectors are independent");
        out.push(PlaneCertificate {
            side,
            u: f[i].to_string(),
            w: f[j].to_string(),
            product: cert.product.to_string(),
            orthogonal: cert.orthogonal.to_string(),
        });
    }
    Ok(out)
}

/// `b₂^± ∈ {0, 1, 3}` for 4-manifolds with Clifford-closed realizations.
pub fn check_dim4_clifford(ring: &GradedRing) -> Result<CheckResult> {
    if ring.dim() != 4 {
        return Ok(inapplicable(
            CheckId::Dim4Clifford,
            format!("n = {} is not 4", ring.dim()),
        ));
    }
    let (b_plus, b_minus) = middle_signature(ring)?;
    let allowed = |b: usize| matches!(b, 0 | 1 | 3);
    let mut certificates = Vec::new();
    let mut identity = None;
    for (b, side) in [(b_plus, Duality::SelfDual), (b_minus, Duality::AntiSelfDual)] {
        if b == 2 {
            certificates.extend(plane_certificates(side)?);
            let holds = selfdual::cross_product_structure_holds(side)?;
            identity = Some(identity.unwrap_or(true) && holds);
        }
    }
    Ok(CheckResult {
        id: CheckId::Dim4Clifford,
        verdict: if allowed(b_plus) && allowed(b_minus) { Verdict::Pass } else { Verdict::Obstruction },
        witness: Witness::Dim4Clifford {
            b_plus,
            b_minus,
            certificates,
            cross_product_identity: identity,
        },
    })
}

pub fn run_check(ring: &GradedRing, id: CheckId) -> Result<CheckResult> {
    match id {
        CheckId::BettiBound => Ok(check_betti_bound(ring)),
        CheckId::B1 => Ok(check_b1(ring)),
        CheckId::MiddleSplit => check_middle_split(ring),
        CheckId::WedgeSurjectivity => Ok(check_wedge_surjectivity(ring)),
        CheckId::Dim4Clifford => check_dim4_clifford(ring),
    }
}

fn overall(n: usize, checks: &[CheckResult]) -> Overall {
    let clear = |ids: &[CheckId]| {
        !checks
            .iter()
            .any(|c| ids.contains(&c.id) && c.verdict == Verdict::Obstruction)
    };
    let conformal = clear(&[
        CheckId::BettiBound,
        CheckId::B1,
        CheckId::MiddleSplit,
        CheckId::WedgeSurjectivity,
    ]);
    let clifford = conformal && clear(&[CheckId::Dim4Clifford]);
    Overall {
        conformally_formal_possible: conformal,
        clifford_formal_possible: clifford,
        uqr_elliptic_possible: (n == 4).then_some(clifford),
    }
}

/// Runs the selected checks in canonical order, dropping duplicates.
pub fn report_with(ring: &GradedRing, ids: &[CheckId]) -> Result<ObstructionReport> {
    let checks = CheckId::ALL
        .into_iter()
        .filter(|id| ids.contains(id))
        .map(|id| run_check(ring, id))
        .collect::<Result<Vec<_>>>()?;
    Ok(ObstructionReport {
        ring: ring.name().to_string(),
        n: ring.dim(),
        betti: ring.betti().to_vec(),
        overall: overall(ring.dim(), &checks),
        checks,
    })
}

pub fn full_report(ring: &GradedRing) -> Result<ObstructionReport> {
    report_with(ring, &CheckId::ALL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::*;

    fn s2xs2() -> GradedRing {
        make_product(&make_sphere(2).unwrap(), &make_sphere(2).unwrap()).unwrap()
    }

    fn verdict(r: &ObstructionReport, id: CheckId) -> Verdict {
        r.check(id).unwrap().verdict
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(6, 2), 15);
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(binomial(4, 5), 0);
        assert_eq!(binomial(12, 0), 1);
    }

    #[test]
    fn headline_four_manifold() {
        let m = make_connected_sum(&s2xs2(), &s2xs2()).unwrap();
        let r = full_report(&m).unwrap();
        assert_eq!(verdict(&r, CheckId::Dim4Clifford), Verdict::Obstruction);
        assert_eq!(verdict(&r, CheckId::MiddleSplit), Verdict::Pass);
        assert_eq!(r.overall.uqr_elliptic_possible, Some(false));
        assert!(r.overall.conformally_formal_possible);
        match &r.check(CheckId::Dim4Clifford).unwrap().witness {
            Witness::Dim4Clifford {
                b_plus,
                b_minus,
                certificates,
                cross_product_identity,
            } => {
                assert_eq!((*b_plus, *b_minus), (2, 2));
                assert_eq!(certificates.len(), 6);
                assert!(certificates.iter().all(|c| c.orthogonal != "0"));
                assert_eq!(*cross_product_identity, Some(true));
            }
            other => panic!("unexpected witness {other:?}"),
        }
    }

    #[test]
    fn known_elliptic_examples_pass() {
        for ring in [make_sphere(4).unwrap(), s2xs2(), make_torus(4).unwrap()] {
            let r = full_report(&ring).unwrap();
            assert!(!r.has_obstruction(), "{}", ring.name());
            assert_eq!(r.overall.uqr_elliptic_possible, Some(true));
        }
        let t4 = full_report(&make_torus(4).unwrap()).unwrap();
        assert_eq!(
            t4.check(CheckId::MiddleSplit).unwrap().witness,
            Witness::MiddleSplit {
                b_plus: 3,
                b_minus: 3,
                bound: 3
            }
        );
    }

    #[test]
    fn wedge_surjectivity_six_manifold() {
        let s2s4 = make_product(&make_sphere(2).unwrap(), &make_sphere(4).unwrap()).unwrap();
        let m = make_connected_sum_power(&s2s4, 15).unwrap();
        let r = full_report(&m).unwrap();
        assert_eq!(verdict(&r, CheckId::BettiBound), Verdict::Pass);
        assert_eq!(verdict(&r, CheckId::WedgeSurjectivity), Verdict::Obstruction);
        assert_eq!(verdict(&r, CheckId::MiddleSplit), Verdict::Inapplicable);
        assert_eq!(verdict(&r, CheckId::Dim4Clifford), Verdict::Inapplicable);
        assert!(!r.overall.conformally_formal_possible);
        assert_eq!(r.overall.uqr_elliptic_possible, None);
        assert_eq!(wedge_rank(6, 2), 15);
        assert_eq!(cup_rank(&m, 2), 0);
    }

    #[test]
    fn torus_wedge_ranks_match() {
        for n in 2..=5 {
            let r = check_wedge_surjectivity(&make_torus(n).unwrap());
            assert_eq!(r.verdict, Verdict::Pass);
        }
        let s6 = check_wedge_surjectivity(&make_sphere(6).unwrap());
        assert_eq!(s6.witness, Witness::WedgeSurjectivity { degrees: vec![] });
    }

    #[test]
    fn first_betti_rule() {
        let s1s3 = make_product(&make_circle(), &make_sphere(3).unwrap()).unwrap();
        let m = make_connected_sum_power(&s1s3, 3).unwrap();
        assert_eq!(m.betti(), &[1, 3, 0, 3, 1]);
        assert_eq!(check_b1(&m).verdict, Verdict::Obstruction);
        assert_eq!(check_b1(&make_torus(4).unwrap()).verdict, Verdict::Pass);
        assert_eq!(check_b1(&make_sphere(4).unwrap()).verdict, Verdict::Pass);
    }

    #[test]
    fn middle_split_cp2_sums() {
        let m = make_connected_sum_power(&make_cp2(), 4).unwrap();
        let r = full_report(&m).unwrap();
        assert_eq!(verdict(&r, CheckId::MiddleSplit), Verdict::Obstruction);
        assert!(!r.overall.conformally_formal_possible);
        let s6 = check_middle_split(&make_sphere(6).unwrap()).unwrap();
        assert_eq!(s6.verdict, Verdict::Inapplicable);
    }

    #[test]
    fn cp2_summands_cross_the_allowed_set() {
        let expected = [Verdict::Pass, Verdict::Obstruction, Verdict::Pass, Verdict::Obstruction];
        let mut ring = make_cp2();
        for (k, want) in expected.iter().enumerate() {
            let r = check_dim4_clifford(&ring).unwrap();
            match r.witness {
                Witness::Dim4Clifford { b_plus, b_minus, .. } => assert_eq!((b_plus, b_minus), (k + 1, 0)),
                _ => unreachable!(),
            }
            assert_eq!(r.verdict, *want, "b+ = {}", k + 1);
            ring = make_connected_sum(&ring, &make_cp2()).unwrap();
        }
    }

    #[test]
    fn betti_bound_violation() {
        let s2s4 = make_product(&make_sphere(2).unwrap(), &make_sphere(4).unwrap()).unwrap();
        let m = make_connected_sum_power(&s2s4, 16).unwrap();
        let r = check_betti_bound(&m);
        assert_eq!(r.verdict, Verdict::Obstruction);
        assert_eq!(
            r.witness,
            Witness::BettiBound {
                violations: vec![
                    BettiExcess { k: 2, betti: 16, binomial: 15 },
                    BettiExcess { k: 4, betti: 16, binomial: 15 }
                ]
            }
        );
        for n in 2..=12 {
            assert_eq!(check_betti_bound(&make_sphere(n).unwrap()).verdict, Verdict::Pass);
        }
    }

    #[test]
    fn subset_and_parsing() {
        let r = report_with(&make_sphere(4).unwrap(), &[CheckId::Dim4Clifford, CheckId::B1, CheckId::B1]).unwrap();
        let ids: Vec<_> = r.checks.iter().map(|c| c.id).collect();
        assert_eq!(ids, [CheckId::B1, CheckId::Dim4Clifford]);
        assert_eq!("middle_split".parse::<CheckId>().unwrap(), CheckId::MiddleSplit);
        assert!("nope".parse::<CheckId>().is_err());
    }

    #[test]
    fn report_json_roundtrip() {
        let m = make_connected_sum(&s2xs2(), &s2xs2()).unwrap();
        let r = full_report(&m).unwrap();
        let text = serde_json::to_string_pretty(&r).unwrap();
        let back: ObstructionReport = serde_json::from_str(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(serde_json::to_string_pretty(&back).unwrap(), text);
    }
}
