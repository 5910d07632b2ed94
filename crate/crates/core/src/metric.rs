//! Metric-dependent products at a single tangent space.
//!
//! A [`GramMetric`] holds the Gram matrix `⟨e_i, e_j⟩_g` of the covector basis.
//! Under the conformal change `g ↦ ρ²g` covectors shrink, so the Gram matrix
//! of `ρ²g` is `ρ⁻²G`; see [`GramMetric::conformal`].
//!
//! `·_g` and `⟨·,·⟩_g` are exact over rationals. `⋆_g` and `⊙_g` need square
//! roots and fractional powers and are only offered for `f64`.

use crate::blade::{reorder_sign, Blade};
use crate::error::{Error, Result};
use crate::exterior::bilinear;
use crate::linalg::Matrix;
use crate::multivector::{check_dim, Multivector};
use crate::scalar::{Rational, Scalar};

pub const NATURALITY_TOLERANCE: f64 = 1e-9;

/// LDLᵀ data of the metric: rows of `basis` are the coefficients of an
/// orthogonal covector basis `u_i = Σ_j C_ij e_j`, `squares[i] = ⟨u_i, u_i⟩_g`.
#[derive(Clone, Debug, PartialEq)]
struct OrthogonalFrame<T> {
    basis: Matrix<T>,
    basis_inv: Matrix<T>,
    squares: Vec<T>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GramMetric<T> {
    gram: Matrix<T>,
    frame: OrthogonalFrame<T>,
}

impl<T: Scalar> GramMetric<T> {
    pub fn new(gram: Matrix<T>) -> Result<Self> {
        if !gram.is_square() {
            return Err(Error::NotSquare {
                rows: gram.rows(),
                cols: gram.cols(),
            });
        }
        check_dim(gram.rows())?;
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        let frame = gram_schmidt(&gram)?;
        Ok(GramMetric { gram, frame })
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(Matrix::identity(dim)).expect("identity is SPD")
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix<T> {
        &self.gram
    }

    /// The metric `ρ²g`, whose covector Gram matrix is `ρ⁻² G`.
    pub fn conformal(&self, rho: &T) -> Result<Self> {
        if !rho.is_positive() {
            return Err(Error::Unsupported("conformal factor must be positive".into()));
        }
        let inv_sq = T::one() / (rho.clone() * rho.clone());
        Self::new(self.gram.scale(&inv_sq))
    }

    pub fn to_f64(&self) -> GramMetric<f64> {
        GramMetric::new(Matrix::from_fn(self.dim(), self.dim(), |i, j| self.gram[(i, j)].to_float()))
            .expect("rounding keeps a well-conditioned metric SPD")
    }

    fn check(&self, a: &Multivector<T>) -> Result<()> {
        if a.dim() == self.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.dim(),
                right: a.dim(),
            })
        }
    }
}

/// Non-normalizing Gram–Schmidt in natural order. Every pivot must be
/// positive; this is the leading-minor test for positive definiteness.
fn gram_schmidt<T: Scalar>(g: &Matrix<T>) -> Result<OrthogonalFrame<T>> {
    let n = g.rows();
    let mut c = Matrix::<T>::identity(n);
    let mut squares: Vec<T> = Vec::with_capacity(n);
    let inner = |x: &[T], y: &[T]| {
        let mut acc = T::zero();
        for i in 0..n {
            for j in 0..n {
                acc = acc + x[i].clone() * g[(i, j)].clone() * y[j].clone();
            }
        }
        acc
    };
    for i in 0..n {
        let e_i: Vec<T> = (0..n).map(|k| if k == i { T::one() } else { T::zero() }).collect();
        let mut row = e_i.clone();
        for j in 0..i {
            let u_j = c.row(j).to_vec();
            let f = inner(&e_i, &u_j) / squares[j].clone();
            for k in 0..n {
                row[k] = row[k].clone() - f.clone() * u_j[k].clone();
            }
        }
        let d = inner(&row, &row);
        if !d.is_positive() {
            return Err(Error::NotPositiveDefinite { pivot: i });
        }
        for k in 0..n {
            c[(i, k)] = row[k].clone();
        }
        squares.push(d);
    }
    let basis_inv = c.inverse()?;
    Ok(OrthogonalFrame {
        basis: c,
        basis_inv,
        squares,
    })
}

/// Invertible (or not) linear map on covectors: row `i` holds the image of `e_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap<T> {
    matrix: Matrix<T>,
}

impl<T: Scalar> LinearMap<T> {
    pub fn new(matrix: Matrix<T>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        check_dim(matrix.rows())?;
        Ok(LinearMap { matrix })
    }

    pub fn identity(dim: usize) -> Self {
        Self::new(Matrix::identity(dim)).expect("valid dimension")
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &Matrix<T> {
        &self.matrix
    }

    pub fn det(&self) -> T {
        self.matrix.det().expect("square")
    }

    /// Matrix of `pullback(other) ∘ pullback(self)`, which is `self · other`.
    pub fn then(&self, other: &Self) -> Result<Self> {
        Self::new(self.matrix.matmul(&other.matrix)?)
    }

    pub fn to_f64(&self) -> LinearMap<f64> {
        LinearMap {
            matrix: Matrix::from_fn(self.dim(), self.dim(), |i, j| self.matrix[(i, j)].to_float()),
        }
    }
}

/// Applies `∧ᵏ` of the row map `e_i ↦ Σ_j m_ij e_j` to every grade:
/// `(out)_J = Σ_I a_I det m[I, J]`.
fn apply_rows<T: Scalar>(m: &Matrix<T>, a: &Multivector<T>) -> Multivector<T> {
    let n = a.dim();
    let images: Vec<Multivector<T>> = (0..n)
        .map(|i| {
            Multivector::from_terms(n, (0..n).map(|j| (Blade::vector(j + 1), m[(i, j)].clone())))
                .expect("valid dimension")
        })
        .collect();
    let mut out = Multivector::zero(n);
    for (blade, v) in a.terms() {
        let mut image = Multivector::scalar(n, v.clone());
        for i in blade.indices() {
            image = image.wedge(&images[i - 1]).expect("same dimension");
        }
        out = &out + &image;
    }
    out
}

/// `⟨a, b⟩_g`, with `⟨e_I, e_J⟩_g = det G[I, J]` and distinct grades orthogonal.
pub fn metric_inner<T: Scalar>(g: &GramMetric<T>, a: &Multivector<T>, b: &Multivector<T>) -> Result<T> {
    g.check(a)?;
    g.check(b)?;
    let mut acc = T::zero();
    for (ba, va) in a.terms() {
        let rows: Vec<usize> = ba.indices().iter().map(|i| i - 1).collect();
        for (bb, vb) in b.terms().filter(|(bb, _)| bb.grade() == ba.grade()) {
            let cols: Vec<usize> = bb.indices().iter().map(|i| i - 1).collect();
            let minor = if rows.is_empty() {
                T::one()
            } else {
                g.gram.submatrix(&rows, &cols).det()?
            };
            acc = acc + minor * va.clone() * vb.clone();
        }
    }
    Ok(acc)
}

/// Clifford product of `Cl(ℝⁿ, ⟨·,·⟩_g)` on `∧*ℝⁿ`.
///
/// Both factors are rewritten in the orthogonal frame `u`, multiplied with
/// `u_i u_i = d_i` and `u_i u_j = -u_j u_i`, and rewritten back.
pub fn clifford_metric<T: Scalar>(
    g: &GramMetric<T>,
    a: &Multivector<T>,
    b: &Multivector<T>,
) -> Result<Multivector<T>> {
    g.check(a)?;
    g.check(b)?;
    let frame = &g.frame;
    let a_u = apply_rows(&frame.basis_inv, a);
    let b_u = apply_rows(&frame.basis_inv, b);
    let prod = bilinear(&a_u, &b_u, |x, y| {
        let mut factor = if reorder_sign(x.bits(), y.bits()) > 0 { T::one() } else { -T::one() };
        for i in Blade::from_bits(x.bits() & y.bits()).indices() {
            factor = factor * frame.squares[i - 1].clone();
        }
        Some((Blade::from_bits(x.bits() ^ y.bits()), factor))
    })?;
    Ok(apply_rows(&frame.basis, &prod))
}

/// The raw `⟨a ·_g b⟩₀` that `⊙_g` replaces by the constant 1.
pub fn clifford_scalar_part<T: Scalar>(g: &GramMetric<T>, a: &Multivector<T>, b: &Multivector<T>) -> Result<T> {
    Ok(clifford_metric(g, a, b)?.coeff(Blade::SCALAR))
}

/// `⋆_g`, the linear map with `a ∧ ⋆_g b = ⟨a, b⟩_g vol_g` where
/// `vol_g = e_{12…n} / √det G`.
pub fn hodge_star_metric(g: &GramMetric<f64>, a: &Multivector<f64>) -> Result<Multivector<f64>> {
    g.check(a)?;
    let n = g.dim();
    let scale = 1.0 / g.gram.det()?.sqrt();
    let mut out = Multivector::zero(n);
    for k in a.grades() {
        let part = a.grade_project(k)?;
        for blade in Blade::of_grade(n, k) {
            let ip = metric_inner(g, &Multivector::from_blade(n, blade, 1.0), &part)?;
            if ip == 0.0 {
                continue;
            }
            let comp = blade.complement(n);
            let sigma = reorder_sign(blade.bits(), comp.bits()) as f64;
            out.add_term(comp, sigma * ip * scale);
        }
    }
    Ok(out)
}

fn homogeneous_grade<T: Scalar>(a: &Multivector<T>) -> Result<usize> {
    if a.is_zero() {
        return Ok(0);
    }
    a.grade().ok_or(Error::NotHomogeneous)
}

/// The conformally invariant product `⊙_g` for homogeneous `a` (grade `l`)
/// and `b` (grade `m`):
///
/// `a ⊙_g b = 1 + Σ_{k≥1} ⟨a·_g b⟩_k / |⟨a·_g b⟩_k|_g^{(l+m-k)/(l+m)}`,
///
/// with vanishing components contributing 0, and `a ⊙_g b = ab` when
/// `l = m = 0`. The zero multivector is treated as a 0-form.
pub fn scaled_clifford(g: &GramMetric<f64>, a: &Multivector<f64>, b: &Multivector<f64>) -> Result<Multivector<f64>> {
    scaled_clifford_in(g, a, b)
}

/// `⊙_g` with the Clifford components and their norms computed in `T`; only
/// the fractional powers are taken in floating point.
fn scaled_clifford_in<T: Scalar>(g: &GramMetric<T>, a: &Multivector<T>, b: &Multivector<T>) -> Result<Multivector<f64>> {
    g.check(a)?;
    g.check(b)?;
    let l = homogeneous_grade(a)?;
    let m = homogeneous_grade(b)?;
    let n = g.dim();
    if l == 0 && m == 0 {
        return Ok(Multivector::scalar(n, (a.coeff(Blade::SCALAR) * b.coeff(Blade::SCALAR)).to_float()));
    }
    let product = clifford_metric(g, a, b)?;
    let total = (l + m) as f64;
    let mut out = Multivector::one(n);
    for k in 1..=n {
        let part = product.grade_project(k)?;
        if part.is_zero() {
            continue;
        }
        let norm = metric_inner(g, &part, &part)?.to_float().sqrt();
        let exponent = (l + m) as f64 - k as f64;
        out = &out + &part.to_f64().scale(&norm.powf(-exponent / total));
    }
    Ok(out)
}

/// Extends [`scaled_clifford`] to arbitrary inputs by summing over all pairs
/// of homogeneous components.
pub fn scaled_clifford_sum(
    g: &GramMetric<f64>,
    a: &Multivector<f64>,
    b: &Multivector<f64>,
) -> Result<Multivector<f64>> {
    g.check(a)?;
    g.check(b)?;
    let mut out = Multivector::zero(g.dim());
    for l in a.grades() {
        let al = a.grade_project(l)?;
        for m in b.grades() {
            out = &out + &scaled_clifford(g, &al, &b.grade_project(m)?)?;
        }
    }
    Ok(out)
}

/// `f*a` with `f*(e_I) = Σ_J det T[I, J] e_J`.
///
/// Composition: `pullback_form(T2, &pullback_form(T1, a)) ==
/// pullback_form(&T1.then(&T2), a)`.
pub fn pullback_form<T: Scalar>(map: &LinearMap<T>, a: &Multivector<T>) -> Result<Multivector<T>> {
    if map.dim() != a.dim() {
        return Err(Error::DimensionMismatch {
            left: map.dim(),
            right: a.dim(),
        });
    }
    Ok(apply_rows(&map.matrix, a))
}

/// The metric `f*g`, making `f*` an isometry: Gram matrix `T⁻¹ G T⁻ᵀ`.
pub fn pullback_metric<T: Scalar>(map: &LinearMap<T>, g: &GramMetric<T>) -> Result<GramMetric<T>> {
    if map.dim() != g.dim() {
        return Err(Error::DimensionMismatch {
            left: map.dim(),
            right: g.dim(),
        });
    }
    let inv = map.matrix.inverse()?;
    let m = inv.matmul(&g.gram)?.matmul(&inv.transpose())?;
    // Exact for rationals; removes float rounding asymmetry otherwise.
    let half = T::from_int(1) / T::from_int(2);
    let sym = Matrix::from_fn(m.rows(), m.cols(), |i, j| (m[(i, j)].clone() + m[(j, i)].clone()) * half.clone());
    GramMetric::new(sym)
}

fn ensure_homogeneous<T: Scalar>(a: &Multivector<T>) -> Result<()> {
    homogeneous_grade(a).map(|_| ())
}

/// Checks `(f*a) ·_{f*g} (f*b) = f*(a ·_g b)` exactly, and the same identity for
/// `⊙` to [`NATURALITY_TOLERANCE`] relative error (norms exact, powers in
/// floating point).
pub fn check_pullback_naturality(
    map: &LinearMap<Rational>,
    g: &GramMetric<Rational>,
    a: &Multivector<Rational>,
    b: &Multivector<Rational>,
) -> Result<bool> {
    ensure_homogeneous(a)?;
    ensure_homogeneous(b)?;
    let pulled_metric = pullback_metric(map, g)?;
    let lhs = clifford_metric(&pulled_metric, &pullback_form(map, a)?, &pullback_form(map, b)?)?;
    let rhs = pullback_form(map, &clifford_metric(g, a, b)?)?;
    if lhs != rhs {
        return Ok(false);
    }
    let scaled_lhs = scaled_clifford_in(&pulled_metric, &pullback_form(map, a)?, &pullback_form(map, b)?)?;
    let scaled_rhs = pullback_form(&map.to_f64(), &scaled_clifford_in(g, a, b)?)?;
    Ok(scaled_lhs.approx_eq(&scaled_rhs, NATURALITY_TOLERANCE))
}

/// Floating-point form of [`check_pullback_naturality`] for both products.
pub fn check_pullback_naturality_f64(
    map: &LinearMap<f64>,
    g: &GramMetric<f64>,
    a: &Multivector<f64>,
    b: &Multivector<f64>,
    tol: f64,
) -> Result<bool> {
    ensure_homogeneous(a)?;
    ensure_homogeneous(b)?;
    let pulled_metric = pullback_metric(map, g)?;
    let fa = pullback_form(map, a)?;
    let fb = pullback_form(map, b)?;
    let clifford_ok = clifford_metric(&pulled_metric, &fa, &fb)?
        .approx_eq(&pullback_form(map, &clifford_metric(g, a, b)?)?, tol);
    let scaled_ok = scaled_clifford(&pulled_metric, &fa, &fb)?
        .approx_eq(&pullback_form(map, &scaled_clifford(g, a, b)?)?, tol);
    Ok(clifford_ok && scaled_ok)
}
