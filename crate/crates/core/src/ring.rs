//! Real cohomology rings of closed oriented manifolds, presented by graded
//! bases and cup-product structure constants.
//!
//! Degree 0 is spanned by the unit and degree `n` by the orientation class;
//! products with the unit are implicit and never stored.

use std::collections::{BTreeMap, HashMap};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::json_rational;
use crate::linalg::{signature, Matrix, Signature};
use crate::multivector::MAX_DIM;
use crate::scalar::Rational;

type CupKey = (usize, usize, usize, usize);

#[derive(Clone, Debug, PartialEq)]
pub struct GradedRing {
    name: String,
    n: usize,
    betti: Vec<usize>,
    /// `(k, l, i, j) ↦ x^k_i ∪ x^l_j` in the basis of `H^{k+l}`, for
    /// `k, l ≥ 1`, `k + l ≤ n`; absent keys are zero products.
    cup: BTreeMap<CupKey, Vec<Rational>>,
}

/// One nonzero structure-constant entry of the ring JSON schema.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CupEntry {
    pub k: usize,
    pub l: usize,
    pub i: usize,
    pub j: usize,
    #[serde(with = "json_rational::vec")]
    pub coeffs: Vec<Rational>,
}

/// `{name, n, betti, cup: [{k, l, i, j, coeffs}]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RingJson {
    pub name: String,
    pub n: usize,
    pub betti: Vec<usize>,
    #[serde(default)]
    pub cup: Vec<CupEntry>,
}

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidRing(msg.into())
}

impl GradedRing {
    /// Validates and builds a ring from explicit structure constants.
    ///
    /// Checks: `b₀ = b_n = 1`, Poincaré symmetry `b_k = b_{n−k}`, index and
    /// length bounds, and graded commutativity `x∪y = (−1)^{kl} y∪x`.
    pub fn new(name: impl Into<String>, n: usize, betti: Vec<usize>, entries: Vec<CupEntry>) -> Result<Self> {
        if n == 0 || n > MAX_DIM {
            return Err(invalid(format!("dimension {n} outside 1..={MAX_DIM}")));
        }
        if betti.len() != n + 1 {
            return Err(invalid(format!("expected {} Betti numbers, found {}", n + 1, betti.len())));
        }
        if betti[0] != 1 || betti[n] != 1 {
            return Err(invalid("b_0 and b_n must both be 1 for a closed connected oriented manifold"));
        }
        for k in 0..=n {
            if betti[k] != betti[n - k] {
                return Err(invalid(format!(
                    "Poincaré duality violated: b_{k} = {} but b_{} = {}",
                    betti[k],
                    n - k,
                    betti[n - k]
                )));
            }
        }
        let mut cup = BTreeMap::new();
        for e in entries {
            if e.k == 0 || e.l == 0 {
                return Err(invalid("products with the unit are implicit and must not be listed"));
            }
            if e.k + e.l > n {
                return Err(invalid(format!("product of degrees {} and {} exceeds dimension {n}", e.k, e.l)));
            }
            if e.i >= betti[e.k] || e.j >= betti[e.l] {
                return Err(invalid(format!("basis index out of range in entry ({}, {}, {}, {})", e.k, e.l, e.i, e.j)));
            }
            if e.coeffs.len() != betti[e.k + e.l] {
                return Err(invalid(format!(
                    "entry ({}, {}, {}, {}) needs {} coefficients, found {}",
                    e.k,
                    e.l,
                    e.i,
                    e.j,
                    betti[e.k + e.l],
                    e.coeffs.len()
                )));
            }
            let key = (e.k, e.l, e.i, e.j);
            if e.coeffs.iter().all(Zero::is_zero) {
                continue;
            }
            if cup.insert(key, e.coeffs).is_some() {
                return Err(invalid(format!("duplicate entry {key:?}")));
            }
        }
        let ring = GradedRing {
            name: name.into(),
            n,
            betti,
            cup,
        };
        ring.check_graded_commutativity()?;
        Ok(ring)
    }

    fn check_graded_commutativity(&self) -> Result<()> {
        for k in 1..self.n {
            for l in 1..=self.n - k {
                for i in 0..self.betti[k] {
                    for j in 0..self.betti[l] {
                        let xy = self.cup_basis(k, i, l, j);
                        let mut yx = self.cup_basis(l, j, k, i);
                        if (k * l) % 2 == 1 {
                            yx.iter_mut().for_each(|v| *v = -v.clone());
                        }
                        if xy != yx {
                            return Err(invalid(format!(
                                "graded commutativity fails for x^{k}_{i} and x^{l}_{j}"
                            )));
                        }
                    }
                }
            }
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn betti(&self) -> &[usize] {
        &self.betti
    }

    /// Product of basis classes `x^k_i ∪ x^l_j` including unit factors,
    /// as coordinates in `H^{k+l}` (empty when `k + l > n`).
    pub fn cup_basis(&self, k: usize, i: usize, l: usize, j: usize) -> Vec<Rational> {
        if k + l > self.n {
            return Vec::new();
        }
        let len = self.betti[k + l];
        let unit = |idx: usize| {
            let mut v = vec![Rational::zero(); len];
            v[idx] = Rational::one();
            v
        };
        if k == 0 {
            return unit(j);
        }
        if l == 0 {
            return unit(i);
        }
        self.cup
            .get(&(k, l, i, j))
            .cloned()
            .unwrap_or_else(|| vec![Rational::zero(); len])
    }

    /// Cup product of arbitrary classes given by coordinates.
    pub fn cup(&self, k: usize, x: &[Rational], l: usize, y: &[Rational]) -> Vec<Rational> {
        if k + l > self.n {
            return Vec::new();
        }
        let mut out = vec![Rational::zero(); self.betti[k + l]];
        for (i, xi) in x.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
            for (j, yj) in y.iter().enumerate().filter(|(_, v)| !v.is_zero()) {
                for (o, c) in out.iter_mut().zip(self.cup_basis(k, i, l, j)) {
                    *o += xi.clone() * yj.clone() * c;
                }
            }
        }
        out
    }

    pub fn entries(&self) -> Vec<CupEntry> {
        self.cup
            .iter()
            .map(|(&(k, l, i, j), coeffs)| CupEntry {
                k,
                l,
                i,
                j,
                coeffs: coeffs.clone(),
            })
            .collect()
    }

    pub fn to_json_schema(&self) -> RingJson {
        RingJson {
            name: self.name.clone(),
            n: self.n,
            betti: self.betti.clone(),
            cup: self.entries(),
        }
    }

    pub fn from_json_schema(schema: RingJson) -> Result<Self> {
        Self::new(schema.name, schema.n, schema.betti, schema.cup)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let schema: RingJson = serde_json::from_str(text).map_err(|e| invalid(format!("malformed ring JSON: {e}")))?;
        Self::from_json_schema(schema)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_json_schema()).expect("ring JSON serializes")
    }
}

/// `Sⁿ` for `n ≥ 2`.
pub fn make_sphere(n: usize) -> Result<GradedRing> {
    if n < 2 {
        return Err(invalid(format!("sphere dimension must be at least 2, got {n}")));
    }
    sphere_unchecked(n)
}

/// The circle, used as the factor of tori.
pub fn make_circle() -> GradedRing {
    sphere_unchecked(1).expect("valid")
}

fn sphere_unchecked(n: usize) -> Result<GradedRing> {
    let mut betti = vec![0; n + 1];
    betti[0] = 1;
    betti[n] = 1;
    GradedRing::new(format!("S{n}"), n, betti, Vec::new())
}

/// `CP²`: one class `x ∈ H²` with `x ∪ x` the orientation class.
pub fn make_cp2() -> GradedRing {
    GradedRing::new(
        "CP2",
        4,
        vec![1, 0, 1, 0, 1],
        vec![CupEntry {
            k: 2,
            l: 2,
            i: 0,
            j: 0,
            coeffs: vec![Rational::one()],
        }],
    )
    .expect("valid")
}

/// `Tⁿ` as the `n`-fold product of circles.
pub fn make_torus(n: usize) -> Result<GradedRing> {
    if n == 0 {
        return Err(invalid("torus dimension must be positive"));
    }
    let mut ring = make_circle();
    for _ in 1..n {
        ring = make_product(&ring, &make_circle())?;
    }
    Ok(ring.with_name(format!("T{n}")))
}

/// Künneth ring of `A × B`.
///
/// The degree-`k` basis lists pairs `a^p_i ⊗ b^q_j` with `p + q = k`, ordered
/// by `p`, then `i`, then `j`. Products carry the Koszul sign:
/// `(a ⊗ b) ∪ (a' ⊗ b') = (−1)^{|b||a'|} (a ∪ a') ⊗ (b ∪ b')`.
pub fn make_product(a: &GradedRing, b: &GradedRing) -> Result<GradedRing> {
    let n = a.n + b.n;
    if n > MAX_DIM {
        return Err(invalid(format!("product dimension {n} exceeds {MAX_DIM}")));
    }
    let mut basis: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); n + 1];
    for p in 0..=a.n {
        for q in 0..=b.n {
            for i in 0..a.betti[p] {
                for j in 0..b.betti[q] {
                    basis[p + q].push((p, i, j));
                }
            }
        }
    }
    let index: Vec<HashMap<(usize, usize, usize), usize>> = basis
        .iter()
        .map(|row| row.iter().enumerate().map(|(idx, &key)| (key, idx)).collect())
        .collect();
    let betti: Vec<usize> = basis.iter().map(Vec::len).collect();
    let mut entries = Vec::new();
    for k in 1..n {
        for l in 1..=n - k {
            for (xi, &(p, i, j)) in basis[k].iter().enumerate() {
                for (yi, &(p2, i2, j2)) in basis[l].iter().enumerate() {
                    let (q, q2) = (k - p, l - p2);
                    if p + p2 > a.n || q + q2 > b.n {
                        continue;
                    }
                    let ax = a.cup_basis(p, i, p2, i2);
                    let by = b.cup_basis(q, j, q2, j2);
                    let negative = (q * p2) % 2 == 1;
                    let mut coeffs = vec![Rational::zero(); betti[k + l]];
                    for (s, cs) in ax.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                        for (t, ct) in by.iter().enumerate().filter(|(_, c)| !c.is_zero()) {
                            let target = index[k + l][&(p + p2, s, t)];
                            let v = cs.clone() * ct.clone();
                            coeffs[target] += if negative { -v } else { v };
                        }
                    }
                    if coeffs.iter().any(|c| !c.is_zero()) {
                        entries.push(CupEntry {
                            k,
                            l,
                            i: xi,
                            j: yi,
                            coeffs,
                        });
                    }
                }
            }
        }
    }
    GradedRing::new(format!("prod({},{})", a.name, b.name), n, betti, entries)
}

/// Cohomology ring of `A # B`.
///
/// Convention: for `0 < k < n` the basis of `H^k` is that of `A` followed by
/// that of `B`; the two orientation classes are identified; products of
/// positive-degree classes from different summands vanish. Each summand keeps
/// its own products, including its Poincaré pairing into the shared top class.
pub fn make_connected_sum(a: &GradedRing, b: &GradedRing) -> Result<GradedRing> {
    if a.n != b.n {
        return Err(Error::DimensionMismatch {
            left: a.n,
            right: b.n,
        });
    }
    let n = a.n;
    let betti: Vec<usize> = (0..=n)
        .map(|k| if k == 0 || k == n { 1 } else { a.betti[k] + b.betti[k] })
        .collect();
    let mut entries = Vec::new();
    for (summand, ring) in [a, b].into_iter().enumerate() {
        let offset = |deg: usize| if summand == 0 || deg == n { 0 } else { a.betti[deg] };
        for (&(k, l, i, j), coeffs) in &ring.cup {
            let mut full = vec![Rational::zero(); betti[k + l]];
            for (s, c) in coeffs.iter().enumerate() {
                full[offset(k + l) + s] = c.clone();
            }
            entries.push(CupEntry {
                k,
                l,
                i: offset(k) + i,
                j: offset(l) + j,
                coeffs: full,
            });
        }
    }
    GradedRing::new(format!("connsum({},{})", a.name, b.name), n, betti, entries)
}

/// `#ᵏ A` for `k ≥ 1`.
pub fn make_connected_sum_power(a: &GradedRing, k: usize) -> Result<GradedRing> {
    if k == 0 {
        return Err(invalid("connected-sum power must be at least 1"));
    }
    let mut ring = a.clone();
    for _ in 1..k {
        ring = make_connected_sum(&ring, a)?;
    }
    Ok(ring.with_name(format!("connsum^{k}({})", a.name)))
}

/// Intersection form of a `4m`-manifold with its signature.
#[derive(Clone, Debug, PartialEq)]
pub struct IntersectionForm {
    pub m: usize,
    pub matrix: Matrix<Rational>,
    pub signature: Signature,
}

impl IntersectionForm {
    /// A closed oriented manifold always has a nondegenerate form.
    pub fn is_degenerate(&self) -> bool {
        self.signature.zero > 0
    }
}

/// `Q[i][j]` is the orientation-class coefficient of `x_i ∪ x_j` on `H^{2m}`.
pub fn intersection_form(ring: &GradedRing) -> Result<IntersectionForm> {
    if !ring.n.is_multiple_of(4) {
        return Err(Error::Unsupported(format!(
            "intersection form needs dimension divisible by 4, got {}",
            ring.n
        )));
    }
    let mid = ring.n / 2;
    let b = ring.betti[mid];
    let matrix = Matrix::from_fn(b, b, |i, j| ring.cup_basis(mid, i, mid, j)[0].clone());
    let signature = signature(&matrix)?;
    Ok(IntersectionForm {
        m: ring.n / 4,
        matrix,
        signature,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;

    fn s2xs2() -> GradedRing {
        make_product(&make_sphere(2).unwrap(), &make_sphere(2).unwrap()).unwrap()
    }

    #[test]
    fn spheres() {
        assert_eq!(make_sphere(4).unwrap().betti(), &[1, 0, 0, 0, 1]);
        assert_eq!(make_sphere(2).unwrap().betti(), &[1, 0, 1]);
        assert!(make_sphere(1).is_err());
        let s4 = make_sphere(4).unwrap();
        assert!(s4.cup_basis(4, 0, 4, 0).is_empty());
    }

    #[test]
    fn products() {
        assert_eq!(s2xs2().betti(), &[1, 0, 2, 0, 1]);
        assert_eq!(make_torus(4).unwrap().betti(), &[1, 4, 6, 4, 1]);
        let s2s4 = make_product(&make_sphere(2).unwrap(), &make_sphere(4).unwrap()).unwrap();
        assert_eq!(s2s4.betti()[2], 1);
    }

    #[test]
    fn torus_degree_one_classes_anticommute() {
        let t = make_torus(3).unwrap();
        let xy = t.cup_basis(1, 0, 1, 1);
        let yx = t.cup_basis(1, 1, 1, 0);
        assert!(xy.iter().any(|c| !c.is_zero()));
        assert_eq!(xy, yx.iter().map(|c| -c.clone()).collect::<Vec<_>>());
        assert!(t.cup_basis(1, 0, 1, 0).iter().all(Zero::is_zero));
    }

    #[test]
    fn intersection_forms_of_basic_manifolds() {
        let q = intersection_form(&s2xs2()).unwrap();
        assert_eq!(q.matrix, Matrix::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(0)]]).unwrap());
        assert_eq!(q.signature.zero, 0);
        let s4 = intersection_form(&make_sphere(4).unwrap()).unwrap();
        assert_eq!(s4.matrix.rows(), 0);
        let t4 = intersection_form(&make_torus(4).unwrap()).unwrap();
        assert_eq!(t4.matrix.rows(), 6);
        assert_eq!((t4.signature.positive, t4.signature.negative), (3, 3));
        let cp2 = intersection_form(&make_cp2()).unwrap();
        assert_eq!((cp2.signature.positive, cp2.signature.negative), (1, 0));
        assert!(intersection_form(&make_sphere(6).unwrap()).is_err());
    }

    #[test]
    fn connected_sums() {
        let m = make_connected_sum(&s2xs2(), &s2xs2()).unwrap();
        assert_eq!(m.betti(), &[1, 0, 4, 0, 1]);
        let q = intersection_form(&m).unwrap();
        let h = |a: i64| vec![int(a)];
        let _ = h;
        let expected = Matrix::from_rows(vec![
            vec![int(0), int(1), int(0), int(0)],
            vec![int(1), int(0), int(0), int(0)],
            vec![int(0), int(0), int(0), int(1)],
            vec![int(0), int(0), int(1), int(0)],
        ])
        .unwrap();
        assert_eq!(q.matrix, expected);
        assert_eq!((q.signature.positive, q.signature.negative), (2, 2));

        let s2s4 = make_product(&make_sphere(2).unwrap(), &make_sphere(4).unwrap()).unwrap();
        let big = make_connected_sum_power(&s2s4, 15).unwrap();
        assert_eq!(big.betti()[2], 15);
        for i in 0..15 {
            for j in 0..15 {
                assert!(big.cup_basis(2, i, 2, j).iter().all(Zero::is_zero));
            }
        }
        assert!(make_connected_sum(&s2xs2(), &make_sphere(6).unwrap()).is_err());
    }

    #[test]
    fn sphere_is_identity_for_connected_sum() {
        let m = s2xs2();
        let ms = make_connected_sum(&m, &make_sphere(4).unwrap()).unwrap();
        assert_eq!(ms.betti(), m.betti());
        assert_eq!(ms.entries(), m.entries());
    }

    #[test]
    fn validation_rejects_bad_rings() {
        let err = GradedRing::new("bad", 4, vec![1, 1, 0, 0, 1], vec![]).unwrap_err();
        assert!(err.to_string().contains("Poincaré"));
        assert!(GradedRing::new("bad", 4, vec![2, 0, 0, 0, 2], vec![]).is_err());
        assert!(GradedRing::new("bad", 4, vec![1, 0, 0, 1], vec![]).is_err());
        // x∪y listed without y∪x
        let one_sided = vec![CupEntry { k: 2, l: 2, i: 0, j: 1, coeffs: vec![int(1)] }];
        let err = GradedRing::new("bad", 4, vec![1, 0, 2, 0, 1], one_sided).unwrap_err();
        assert!(err.to_string().contains("commutativity"));
        // odd classes must anticommute
        let sym = vec![
            CupEntry { k: 1, l: 2, i: 0, j: 0, coeffs: vec![int(1)] },
            CupEntry { k: 2, l: 1, i: 0, j: 0, coeffs: vec![int(1)] },
        ];
        assert!(GradedRing::new("ok", 3, vec![1, 1, 1, 1], sym).is_ok());
        let asym = vec![
            CupEntry { k: 1, l: 1, i: 0, j: 1, coeffs: vec![int(1)] },
            CupEntry { k: 1, l: 1, i: 1, j: 0, coeffs: vec![int(1)] },
        ];
        assert!(GradedRing::new("bad", 2, vec![1, 2, 1], asym).is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = make_connected_sum(&s2xs2(), &make_cp2()).unwrap();
        let text = m.to_json_string();
        let back = GradedRing::from_json_str(&text).unwrap();
        assert_eq!(back, m);
        let parsed = GradedRing::from_json_str(
            r#"{"name": "half", "n": 4, "betti": [1,0,1,0,1], "cup": [{"k":2,"l":2,"i":0,"j":0,"coeffs":["1/2"]}]}"#,
        )
        .unwrap();
        assert_eq!(parsed.cup_basis(2, 0, 2, 0), vec![crate::scalar::rational(1, 2)]);
    }
}
