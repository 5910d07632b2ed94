//! Numerical search for graded-algebra embeddings `Φ: H*(M; ℝ) → ∧*ℝⁿ`
//! whose image is closed under `⋆` and, optionally, the Clifford product.
//!
//! A found candidate is a numerical certificate; failure is evidence only.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::blade::{reorder_sign, Blade};
use crate::error::{Error, Result};
use crate::multivector::{check_dim, Multivector};
use crate::obstructions::{check_betti_bound, Verdict};
use crate::ring::GradedRing;
use crate::scalar::Scalar;

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub enum SearchMode {
    #[serde(rename = "wedge")]
    Wedge,
    #[serde(rename = "wedge+star")]
    WedgeStar,
    #[serde(rename = "wedge+star+clifford")]
    WedgeStarClifford,
}

impl SearchMode {
    pub fn as_str(self) -> &'static str {
        match self {
            SearchMode::Wedge => "wedge",
            SearchMode::WedgeStar => "wedge+star",
            SearchMode::WedgeStarClifford => "wedge+star+clifford",
        }
    }

    fn star(self) -> bool {
        self != SearchMode::Wedge
    }

    fn clifford(self) -> bool {
        self == SearchMode::WedgeStarClifford
    }
}

impl fmt::Display for SearchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SearchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "wedge" => Ok(SearchMode::Wedge),
            "wedge+star" => Ok(SearchMode::WedgeStar),
            "wedge+star+clifford" | "clifford" => Ok(SearchMode::WedgeStarClifford),
            other => Err(Error::Unsupported(format!(
                "unknown search mode `{other}` (expected wedge, wedge+star or wedge+star+clifford)"
            ))),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct Thresholds {
    pub residual: f64,
    pub margin: f64,
}

impl Default for Thresholds {
    fn default() -> Self {
        Thresholds {
            residual: 1e-8,
            margin: 1e-4,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Debug, Serialize, Deserialize)]
pub struct SearchConfig {
    pub mode: SearchMode,
    pub restarts: usize,
    pub iterations: usize,
    pub seed: u64,
    #[serde(default)]
    pub thresholds: Thresholds,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            mode: SearchMode::WedgeStar,
            restarts: 100,
            iterations: 5000,
            seed: 0,
            thresholds: Thresholds::default(),
        }
    }
}

/// `phi[k][i]` is the image of the `i`-th basis class of `H^k`.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbeddingCandidate {
    pub n: usize,
    pub phi: Vec<Vec<Multivector<f64>>>,
}

#[derive(Clone, Copy, PartialEq, Debug, Default, Serialize, Deserialize)]
pub struct Residuals {
    pub cup: f64,
    pub star: f64,
    pub clifford: f64,
    /// Smallest singular value of any nonempty `Φ_k`.
    pub injectivity_margin: f64,
}

impl Residuals {
    pub fn total(&self, mode: SearchMode) -> f64 {
        let mut t = self.cup;
        if mode.star() {
            t += self.star;
        }
        if mode.clifford() {
            t += self.clifford;
        }
        t
    }

    pub fn certifies(&self, mode: SearchMode, th: &Thresholds) -> bool {
        self.total(mode) < th.residual && self.injectivity_margin > th.margin
    }
}

impl EmbeddingCandidate {
    /// `Φ_0 = 1`, `Φ_n = e_{1…n}` and zero images in between.
    pub fn skeleton(ring: &GradedRing) -> Result<Self> {
        let n = ring.dim();
        check_dim(n)?;
        let phi = (0..=n)
            .map(|k| {
                let fill = match k {
                    0 => Multivector::one(n),
                    k if k == n => Multivector::pseudoscalar(n),
                    _ => Multivector::zero(n),
                };
                vec![fill; ring.betti()[k]]
            })
            .collect();
        Ok(EmbeddingCandidate { n, phi })
    }

    /// Extends degree-1 images to all degrees through the cup relations
    /// `Φ(x ∪ y) = Φx ∧ Φy`, solved by least squares degree by degree. Only
    /// meaningful for rings generated in degree 1, such as tori.
    /// If the orientation class lands on a negative multiple of `e_{1…n}`,
    /// the first image is negated.
    pub fn from_degree_one(ring: &GradedRing, images: Vec<Multivector<f64>>) -> Result<Self> {
        let cand = Self::extend(ring, images)?;
        let n = cand.n;
        if ring.betti()[n] == 1 && cand.phi[n][0].coeff(Blade::pseudoscalar(n)) < 0.0 {
            let mut images = cand.phi[1].clone();
            if let Some(first) = images.first_mut() {
                *first = -&*first;
                return Self::extend(ring, images);
            }
        }
        Ok(cand)
    }

    fn extend(ring: &GradedRing, images: Vec<Multivector<f64>>) -> Result<Self> {
        let mut cand = Self::skeleton(ring)?;
        let n = cand.n;
        cand.phi[1] = images;
        cand.validate(ring)?;
        for g in 2..=n {
            let b = ring.betti()[g];
            if b == 0 {
                continue;
            }
            let targets = Blade::of_grade(n, g);
            let mut lhs = Vec::new();
            let mut rhs = Vec::new();
            for k in 1..g {
                let l = g - k;
                for i in 0..ring.betti()[k] {
                    for j in 0..ring.betti()[l] {
                        lhs.push(ring.cup_basis(k, i, l, j).iter().map(|c| c.to_float()).collect::<Vec<_>>());
                        let w = cand.phi[k][i].wedge(&cand.phi[l][j])?;
                        rhs.push(targets.iter().map(|&t| w.coeff(t)).collect::<Vec<_>>());
                    }
                }
            }
            if lhs.is_empty() {
                return Err(Error::Unsupported(format!("degree {g} is not reached by cup products")));
            }
            let a = DMatrix::from_fn(lhs.len(), b, |r, c| lhs[r][c]);
            let y = DMatrix::from_fn(rhs.len(), targets.len(), |r, c| rhs[r][c]);
            let x = a
                .svd(true, true)
                .solve(&y, 1e-12)
                .map_err(|e| Error::Unsupported(e.to_string()))?;
            cand.phi[g] = (0..b)
                .map(|i| {
                    let terms = targets.iter().enumerate().map(|(t, &blade)| (blade, x[(i, t)]));
                    Multivector::from_terms(n, terms)
                })
                .collect::<Result<_>>()?;
        }
        Ok(cand)
    }

    fn validate(&self, ring: &GradedRing) -> Result<()> {
        if self.n != ring.dim() {
            return Err(Error::DimensionMismatch {
                left: ring.dim(),
                right: self.n,
            });
        }
        if self.phi.len() != self.n + 1 {
            return Err(Error::DimensionMismatch {
                left: self.n + 1,
                right: self.phi.len(),
            });
        }
        for (k, cols) in self.phi.iter().enumerate() {
            if cols.len() != ring.betti()[k] {
                return Err(Error::DimensionMismatch {
                    left: ring.betti()[k],
                    right: cols.len(),
                });
            }
            for v in cols {
                if v.dim() != self.n {
                    return Err(Error::DimensionMismatch { left: self.n, right: v.dim() });
                }
                if !v.is_zero() && !v.is_homogeneous_of(k) {
                    return Err(Error::WrongGrade { expected: k });
                }
            }
        }
        Ok(())
    }

    /// Text form: one list of multivectors per degree.
    pub fn to_text(&self) -> Vec<Vec<String>> {
        self.phi.iter().map(|cols| cols.iter().map(|v| v.to_string()).collect()).collect()
    }

    pub fn from_text(n: usize, text: &[Vec<String>]) -> Result<Self> {
        let phi = text
            .iter()
            .map(|cols| cols.iter().map(|s| Multivector::<f64>::parse(n, s)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(EmbeddingCandidate { n, phi })
    }
}

/// `(a, b, target, sign)`, indexed by factor grades.
type WedgeTable = Vec<Vec<Vec<(u16, u16, u16, f64)>>>;
/// `(a, b, product grade, target, sign)`, indexed by factor grades.
type CliffordTable = Vec<Vec<Vec<(u16, u16, u8, u16, f64)>>>;

/// Blade layout and product tables for dense evaluation on `∧*ℝⁿ`.
struct Layout {
    n: usize,
    blades: Vec<Vec<Blade>>,
    /// `index[bits]` = position of the blade within its grade.
    index: Vec<usize>,
    /// Nonzero wedges of grade `k` × grade `l`.
    wedge: WedgeTable,
    clifford: CliffordTable,
    /// `⋆` on grade `k`: `(target in grade n-k, sign)`.
    star: Vec<Vec<(u16, f64)>>,
}

impl Layout {
    fn new(n: usize) -> Self {
        let blades: Vec<Vec<Blade>> = (0..=n).map(|k| Blade::of_grade(n, k)).collect();
        let mut index = vec![0; 1 << n];
        for grade in &blades {
            for (i, b) in grade.iter().enumerate() {
                index[b.bits() as usize] = i;
            }
        }
        let mut wedge = vec![vec![Vec::new(); n + 1]; n + 1];
        let mut clifford = vec![vec![Vec::new(); n + 1]; n + 1];
        for k in 0..=n {
            for l in 0..=n {
                for (ia, a) in blades[k].iter().enumerate() {
                    for (ib, b) in blades[l].iter().enumerate() {
                        let (x, y) = (a.bits(), b.bits());
                        let sign = reorder_sign(x, y) as f64;
                        let prod = x ^ y;
                        clifford[k][l].push((
                            ia as u16,
                            ib as u16,
                            prod.count_ones() as u8,
                            index[prod as usize] as u16,
                            sign,
                        ));
                        if x & y == 0 {
                            wedge[k][l].push((ia as u16, ib as u16, index[prod as usize] as u16, sign));
                        }
                    }
                }
            }
        }
        let full = Blade::pseudoscalar(n).bits();
        let star = blades
            .iter()
            .map(|grade| {
                grade
                    .iter()
                    .map(|b| {
                        let c = full ^ b.bits();
                        (index[c as usize] as u16, reorder_sign(b.bits(), c) as f64)
                    })
                    .collect()
            })
            .collect();
        Layout {
            n,
            blades,
            index,
            wedge,
            clifford,
            star,
        }
    }

    fn size(&self, k: usize) -> usize {
        self.blades[k].len()
    }
}

/// Ring data flattened for dense evaluation.
struct Problem {
    layout: Layout,
    betti: Vec<usize>,
    /// `(k, i, l, j, coefficients in H^{k+l})` over all ordered pairs.
    cup: Vec<(usize, usize, usize, usize, Vec<f64>)>,
    mode: SearchMode,
}

impl Problem {
    fn new(ring: &GradedRing, mode: SearchMode) -> Result<Self> {
        let n = ring.dim();
        check_dim(n)?;
        let betti = ring.betti().to_vec();
        let mut cup = Vec::new();
        for k in 1..n {
            for l in 1..=(n - k) {
                for i in 0..betti[k] {
                    for j in 0..betti[l] {
                        let c = ring.cup_basis(k, i, l, j).iter().map(|x| x.to_float()).collect();
                        cup.push((k, i, l, j, c));
                    }
                }
            }
        }
        Ok(Problem {
            layout: Layout::new(n),
            betti,
            cup,
            mode,
        })
    }

    fn n(&self) -> usize {
        self.layout.n
    }

    /// Dense columns per degree from the free parameters.
    fn unpack(&self, theta: &[f64]) -> Vec<Vec<Vec<f64>>> {
        let n = self.n();
        let mut out = Vec::with_capacity(n + 1);
        let mut pos = 0;
        for k in 0..=n {
            let size = self.layout.size(k);
            let cols = (0..self.betti[k])
                .map(|_| {
                    if k == 0 || k == n {
                        vec![1.0]
                    } else {
                        let c = theta[pos..pos + size].to_vec();
                        pos += size;
                        c
                    }
                })
                .collect();
            out.push(cols);
        }
        out
    }

    fn dense(&self, cand: &EmbeddingCandidate) -> Vec<Vec<Vec<f64>>> {
        cand.phi
            .iter()
            .enumerate()
            .map(|(k, cols)| {
                cols.iter()
                    .map(|v| {
                        let mut d = vec![0.0; self.layout.size(k)];
                        for (b, c) in v.terms() {
                            d[self.layout.index[b.bits() as usize]] = *c;
                        }
                        d
                    })
                    .collect()
            })
            .collect()
    }

    fn pack(&self, phi: &[Vec<Vec<f64>>]) -> Vec<f64> {
        (1..self.n()).flat_map(|k| phi[k].iter().flatten().copied()).collect()
    }

    fn to_candidate(&self, phi: &[Vec<Vec<f64>>]) -> EmbeddingCandidate {
        let n = self.n();
        let phi = phi
            .iter()
            .enumerate()
            .map(|(k, cols)| {
                cols.iter()
                    .map(|c| {
                        let terms = self.layout.blades[k].iter().zip(c).map(|(&b, &x)| (b, x));
                        Multivector::from_terms(n, terms).expect("blades fit")
                    })
                    .collect()
            })
            .collect();
        EmbeddingCandidate { n, phi }
    }

    /// Mode-dependent terms; `cup`, `star`, `clifford` are always reported.
    fn terms(&self, phi: &[Vec<Vec<f64>>], all: bool) -> Residuals {
        let n = self.n();
        let lay = &self.layout;
        let mut res = Residuals::default();

        let mut buf = Vec::new();
        for (k, i, l, j, coeffs) in &self.cup {
            let (k, l) = (*k, *l);
            let g = k + l;
            buf.clear();
            buf.resize(lay.size(g), 0.0);
            for (c, col) in coeffs.iter().zip(&phi[g]) {
                if *c != 0.0 {
                    for (t, x) in buf.iter_mut().zip(col) {
                        *t += c * x;
                    }
                }
            }
            let (a, b) = (&phi[k][*i], &phi[l][*j]);
            for &(ia, ib, t, s) in &lay.wedge[k][l] {
                buf[t as usize] -= s * a[ia as usize] * b[ib as usize];
            }
            res.cup += buf.iter().map(|x| x * x).sum::<f64>();
        }

        let want_star = all || self.mode.star();
        let want_clifford = all || self.mode.clifford();
        if !want_star && !want_clifford {
            return res;
        }
        let bases: Vec<Vec<Vec<f64>>> = phi.iter().map(|cols| orthonormal_basis(cols)).collect();

        if want_star {
            for k in 0..=n {
                for col in &phi[k] {
                    let mut v = vec![0.0; lay.size(n - k)];
                    for (x, &(t, s)) in col.iter().zip(&lay.star[k]) {
                        v[t as usize] = s * x;
                    }
                    res.star += defect(&mut v, &bases[n - k]);
                }
            }
        }

        if want_clifford {
            // ⟨b·a⟩_j = ±⟨a·b⟩_j for homogeneous a, b, so unordered pairs
            // suffice; products with Φ_0 and Φ_n reduce to scalars and ⋆.
            let mut parts: Vec<Vec<f64>> = (0..=n).map(|g| vec![0.0; lay.size(g)]).collect();
            for k in 1..n {
                for l in k..n {
                    for (i, a) in phi[k].iter().enumerate() {
                        let from = if k == l { i } else { 0 };
                        for b in &phi[l][from..] {
                            for g in (l - k..=(k + l).min(2 * n - k - l)).step_by(2) {
                                parts[g].iter_mut().for_each(|x| *x = 0.0);
                            }
                            for &(ia, ib, g, t, s) in &lay.clifford[k][l] {
                                parts[g as usize][t as usize] += s * a[ia as usize] * b[ib as usize];
                            }
                            for g in (l - k..=(k + l).min(2 * n - k - l)).step_by(2) {
                                res.clifford += defect(&mut parts[g], &bases[g]);
                            }
                        }
                    }
                }
            }
        }
        res
    }

    fn objective(&self, theta: &[f64]) -> f64 {
        self.terms(&self.unpack(theta), false).total(self.mode)
    }

    fn evaluate(&self, phi: &[Vec<Vec<f64>>]) -> Residuals {
        let mut r = self.terms(phi, true);
        r.injectivity_margin = injectivity_margin(phi);
        r
    }
}

/// Modified Gram–Schmidt, dropping directions below a relative tolerance.
fn orthonormal_basis(cols: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let scale = cols
        .iter()
        .map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt())
        .fold(0.0, f64::max);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    for c in cols {
        let mut v = c.clone();
        for q in &basis {
            let d: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(q).for_each(|(a, b)| *a -= d * b);
        }
        let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if norm > 1e-12 * scale.max(1e-300) && norm > 0.0 {
            v.iter_mut().for_each(|x| *x /= norm);
            basis.push(v);
        }
    }
    basis
}

/// Squared distance from `v` to the span of an orthonormal basis; `v` is
/// overwritten with the residual vector.
fn defect(v: &mut [f64], basis: &[Vec<f64>]) -> f64 {
    for q in basis {
        let d: f64 = v.iter().zip(q).map(|(a, b)| a * b).sum();
        v.iter_mut().zip(q).for_each(|(a, b)| *a -= d * b);
    }
    v.iter().map(|x| x * x).sum()
}

fn injectivity_margin(phi: &[Vec<Vec<f64>>]) -> f64 {
    phi.iter()
        .filter(|cols| !cols.is_empty())
        .map(|cols| {
            let rows = cols[0].len();
            let m = DMatrix::from_fn(rows, cols.len(), |r, c| cols[c][r]);
            if rows < cols.len() {
                return 0.0;
            }
            m.singular_values().iter().copied().fold(f64::INFINITY, f64::min)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Residual terms of `cand` against the ring's cup structure.
pub fn residual(ring: &GradedRing, cand: &EmbeddingCandidate) -> Result<Residuals> {
    cand.validate(ring)?;
    let problem = Problem::new(ring, SearchMode::WedgeStarClifford)?;
    Ok(problem.evaluate(&problem.dense(cand)))
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SearchStatus {
    /// Residual and margin both within thresholds.
    Certificate,
    /// Budget exhausted; the residual floor is evidence, not a verdict.
    NoCertificate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchReport {
    pub config: SearchConfig,
    pub status: SearchStatus,
    /// Total residual for the configured mode (the floor on failure).
    pub residual: f64,
    pub terms: Residuals,
    pub restart: usize,
    pub restarts_run: usize,
    /// Best candidate, one multivector per basis class and degree.
    pub phi: Vec<Vec<String>>,
}

impl SearchReport {
    pub fn is_certificate(&self) -> bool {
        self.status == SearchStatus::Certificate
    }

    pub fn candidate(&self) -> Result<EmbeddingCandidate> {
        EmbeddingCandidate::from_text(self.phi.len().saturating_sub(1), &self.phi)
    }
}

struct RestartResult {
    theta: Vec<f64>,
    value: f64,
    certified: bool,
}

fn random_start(problem: &Problem, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let n = problem.n();
    let mut phi: Vec<Vec<Vec<f64>>> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let size = problem.layout.size(k);
        let b = problem.betti[k];
        if k == 0 || k == n || b == 0 {
            phi.push(vec![vec![1.0]; b]);
            continue;
        }
        let mut cols = Vec::new();
        while cols.len() < b {
            let raw: Vec<Vec<f64>> = (0..b - cols.len())
                .map(|_| (0..size).map(|_| rng.gen_range(-1.0..1.0)).collect())
                .collect();
            let mut all = cols.clone();
            all.extend(raw);
            cols = orthonormal_basis(&all);
        }
        phi.push(cols);
    }
    problem.pack(&phi)
}

/// A restart stops once a window of iterations improves the objective by
/// less than this fraction.
const STAGNATION_WINDOW: usize = 250;
const STAGNATION_RATIO: f64 = 1e-3;

/// Hooke–Jeeves pattern search with step halving. One iteration is one
/// exploratory sweep over all coordinates (plus a pattern move on success).
fn descend(problem: &Problem, cfg: &SearchConfig, start: Vec<f64>, abort: &dyn Fn() -> bool) -> RestartResult {
    let mut x = start;
    let mut fx = problem.objective(&x);
    let mut step = 0.25;
    let target = cfg.thresholds.residual * 1e-2;

    let explore = |base: &[f64], f_base: f64, step: f64| -> (Vec<f64>, f64) {
        let mut y = base.to_vec();
        let mut fy = f_base;
        for i in 0..y.len() {
            let orig = y[i];
            y[i] = orig + step;
            let up = problem.objective(&y);
            if up < fy {
                fy = up;
                continue;
            }
            y[i] = orig - step;
            let down = problem.objective(&y);
            if down < fy {
                fy = down;
                continue;
            }
            y[i] = orig;
        }
        (y, fy)
    };

    let certified = |theta: &[f64], value: f64| {
        value < cfg.thresholds.residual && injectivity_margin(&problem.unpack(theta)) > cfg.thresholds.margin
    };

    let mut checkpoint = fx;
    for it in 0..cfg.iterations {
        if fx < target && certified(&x, fx) {
            break;
        }
        if it % STAGNATION_WINDOW == STAGNATION_WINDOW - 1 {
            if abort() || checkpoint - fx < STAGNATION_RATIO * checkpoint {
                break;
            }
            checkpoint = fx;
        }
        let (y, fy) = explore(&x, fx, step);
        if fy < fx {
            let pattern: Vec<f64> = y.iter().zip(&x).map(|(a, b)| 2.0 * a - b).collect();
            let fp = problem.objective(&pattern);
            let (z, fz) = explore(&pattern, fp, step);
            if fz < fy {
                x = z;
                fx = fz;
            } else {
                x = y;
                fx = fy;
            }
        } else {
            step *= 0.5;
            if step < 1e-13 {
                break;
            }
        }
    }
    let ok = certified(&x, fx);
    RestartResult {
        theta: x,
        value: fx,
        certified: ok,
    }
}

fn restart_rng(seed: u64, restart: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(restart as u64);
    rng
}

/// Multistart search. Deterministic in `cfg.seed` and `cfg.restarts`: the
/// certificate with the smallest restart index wins, otherwise the lowest
/// residual floor.
pub fn search(ring: &GradedRing, cfg: &SearchConfig) -> Result<SearchReport> {
    if check_betti_bound(ring).verdict == Verdict::Obstruction {
        return Err(Error::SearchRefused(
            "Betti numbers exceed the binomial bound; see the betti_bound check".into(),
        ));
    }
    if cfg.restarts == 0 {
        return Err(Error::Unsupported("search needs at least one restart".into()));
    }
    let problem = Problem::new(ring, cfg.mode)?;
    let first_cert = AtomicUsize::new(usize::MAX);
    let results: Vec<Option<RestartResult>> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            if first_cert.load(Ordering::Relaxed) < r {
                return None;
            }
            let mut rng = restart_rng(cfg.seed, r);
            let start = random_start(&problem, &mut rng);
            let abort = || first_cert.load(Ordering::Relaxed) < r;
            let out = descend(&problem, cfg, start, &abort);
            if out.certified {
                first_cert.fetch_min(r, Ordering::Relaxed);
            }
            Some(out)
        })
        .collect();

    let winner = first_cert.load(Ordering::Relaxed);
    let (restart, best) = if winner != usize::MAX {
        (winner, results[winner].as_ref().expect("certifying restart ran"))
    } else {
        results
            .iter()
            .enumerate()
            .filter_map(|(i, r)| r.as_ref().map(|r| (i, r)))
            .min_by(|a, b| a.1.value.total_cmp(&b.1.value).then(a.0.cmp(&b.0)))
            .expect("at least one restart")
    };
    let phi = problem.unpack(&best.theta);
    let terms = problem.evaluate(&phi);
    let restarts_run = if winner != usize::MAX { winner + 1 } else { cfg.restarts };
    Ok(SearchReport {
        config: *cfg,
        status: if terms.certifies(cfg.mode, &cfg.thresholds) {
            SearchStatus::Certificate
        } else {
            SearchStatus::NoCertificate
        },
        residual: terms.total(cfg.mode),
        terms,
        restart,
        restarts_run,
        phi: problem.to_candidate(&phi).to_text(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::obstructions::build_eigen_split;
    use crate::ring::*;

    fn s2xs2() -> GradedRing {
        make_product(&make_sphere(2).unwrap(), &make_sphere(2).unwrap()).unwrap()
    }

    #[test]
    fn torus_coordinate_embedding_is_exact() {
        let t4 = make_torus(4).unwrap();
        let images = (1..=4).map(|i| Multivector::basis(4, i)).collect();
        let cand = EmbeddingCandidate::from_degree_one(&t4, images).unwrap();
        assert!((cand.phi[4][0].coeff(Blade::pseudoscalar(4)) - 1.0).abs() < 1e-12);
        let r = residual(&t4, &cand).unwrap();
        for mode in [SearchMode::Wedge, SearchMode::WedgeStar, SearchMode::WedgeStarClifford] {
            assert!(r.total(mode) < 1e-12, "{mode}: {r:?}");
        }
        assert!((r.injectivity_margin - 1.0).abs() < 1e-12);
    }

    #[test]
    fn s2xs2_from_eigenvectors() {
        let ring = s2xs2();
        let split = build_eigen_split(1).unwrap();
        // x ↦ f1 + f1', y ↦ f1 - f1' gives e12, e34: a hyperbolic pair.
        let x = (&split.positive[0] + &split.negative[0]).to_f64();
        let y = (&split.positive[0] - &split.negative[0]).to_f64();
        let mut cand = EmbeddingCandidate::skeleton(&ring).unwrap();
        cand.phi[2] = vec![x, y];
        let r = residual(&ring, &cand).unwrap();
        assert!(r.total(SearchMode::WedgeStarClifford) < 1e-12, "{r:?}");
    }

    #[test]
    fn zero_map_has_no_margin() {
        let ring = s2xs2();
        let mut cand = EmbeddingCandidate::skeleton(&ring).unwrap();
        cand.phi[2] = vec![Multivector::zero(4), Multivector::zero(4)];
        let r = residual(&ring, &cand).unwrap();
        assert_eq!(r.injectivity_margin, 0.0);
        assert!(!r.certifies(SearchMode::Wedge, &Thresholds::default()));
    }

    #[test]
    fn candidate_shape_is_checked() {
        let ring = s2xs2();
        let mut cand = EmbeddingCandidate::skeleton(&ring).unwrap();
        cand.phi[2].pop();
        assert!(residual(&ring, &cand).is_err());
        let mut cand = EmbeddingCandidate::skeleton(&ring).unwrap();
        cand.phi[2][0] = Multivector::basis(4, 1);
        assert!(matches!(residual(&ring, &cand), Err(Error::WrongGrade { expected: 2 })));
    }

    #[test]
    fn refuses_rings_over_the_betti_bound() {
        let s2s4 = make_product(&make_sphere(2).unwrap(), &make_sphere(4).unwrap()).unwrap();
        let ring = make_connected_sum_power(&s2s4, 16).unwrap();
        assert!(matches!(search(&ring, &SearchConfig::default()), Err(Error::SearchRefused(_))));
    }

    #[test]
    fn mode_names() {
        for mode in [SearchMode::Wedge, SearchMode::WedgeStar, SearchMode::WedgeStarClifford] {
            assert_eq!(mode.as_str().parse::<SearchMode>().unwrap(), mode);
            assert_eq!(serde_json::to_string(&mode).unwrap(), format!("\"{mode}\""));
        }
    }
}
