//! Elliptic special functions, dynamical variables, coefficient functions and the
//! algebra `D_h` of shifted multiplication operators.

use std::collections::HashMap;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{EllError, Result};

pub type C64 = Complex64;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// Numerical parameters shared by every kernel.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Params {
    pub p: f64,
    pub q: f64,
    pub n: usize,
    pub theta_tol: f64,
    pub eq_tol: f64,
    pub samples: usize,
    pub pole_guard: f64,
    pub seed: u64,
}

impl Default for Params {
    fn default() -> Self {
        Params {
            p: 0.31,
            q: 0.43,
            n: 3,
            theta_tol: 1e-16,
            eq_tol: 1e-8,
            samples: 8,
            pole_guard: 1e-4,
            seed: 20240611,
        }
    }
}

impl Params {
    pub fn with_n(n: usize) -> Self {
        Params {
            n,
            ..Params::default()
        }
    }

    // Negated comparisons so that NaN parameters are rejected too.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<()> {
        if !(self.p > 0.0 && self.p < 1.0) {
            return Err(EllError::Config(format!(
                "p must lie in (0,1), got {}",
                self.p
            )));
        }
        if !(self.q > 0.0 && self.q < 1.0) {
            return Err(EllError::Config(format!(
                "q must lie in (0,1), got {}",
                self.q
            )));
        }
        if self.n == 0 {
            return Err(EllError::Config("n must be positive".into()));
        }
        if !(self.theta_tol > 0.0 && self.theta_tol < 1.0) {
            return Err(EllError::Config(format!(
                "theta_tol out of range: {}",
                self.theta_tol
            )));
        }
        if !(self.eq_tol > 0.0) {
            return Err(EllError::Config(format!(
                "eq_tol must be positive: {}",
                self.eq_tol
            )));
        }
        if self.samples == 0 {
            return Err(EllError::Config("samples must be positive".into()));
        }
        if !(self.pole_guard > 0.0) {
            return Err(EllError::Config("pole_guard must be positive".into()));
        }
        Ok(())
    }

    /// `q^x` for complex `x`, with the real branch of `ln q`.
    pub fn qpow(&self, x: C64) -> C64 {
        (x * self.q.ln()).exp()
    }

    /// `p^a q^b` for integer exponents.
    pub fn pq(&self, a: i32, b: i32) -> f64 {
        self.p.powi(a) * self.q.powi(b)
    }
}

/// Deterministic RNG stream derived from a seed and a textual label.
pub fn rng_for(seed: u64, label: &str) -> ChaCha8Rng {
    // FNV-1a over the label, folded into the seed.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h.rotate_left(17))
}

/// Theta function without the `z = 0` check.
///
/// The product is truncated adaptively: factor `j` differs from 1 by at most
/// `p^j max(|z|, 1/|z|)`, so stopping once `p^(J+1) max(|z|,1/|z|) < theta_tol` leaves a
/// relative tail error below `2 theta_tol / (1 - p)`. For `|z| = 1` this is the index
/// `J = ceil(log theta_tol / log p)`; away from the unit circle more factors are kept.
pub fn theta_raw(z: C64, prm: &Params) -> C64 {
    let p = prm.p;
    let az = z.norm();
    let scale = az.max(1.0 / az);
    let inv = z.inv();
    let one = C64::new(1.0, 0.0);
    let mut r = one;
    let mut pj = 1.0;
    for _ in 0..100_000 {
        r *= (one - z * pj) * (one - inv * (pj * p));
        pj *= p;
        if pj * scale < prm.theta_tol {
            break;
        }
    }
    r
}

/// The normalized Jacobi theta function `θ(z) = ∏_{j≥0}(1 − z p^j)(1 − p^{j+1}/z)`.
pub fn theta(z: C64, prm: &Params) -> Result<C64> {
    if z == C64::new(0.0, 0.0) || !z.is_finite() {
        return Err(EllError::Domain(format!("theta undefined at z = {z}")));
    }
    Ok(theta_raw(z, prm))
}

/// Index where the product truncation stops for a given `z` (diagnostic helper).
pub fn theta_truncation_index(z: C64, prm: &Params) -> usize {
    let scale = z.norm().max(1.0 / z.norm());
    let mut pj = 1.0;
    let mut j = 0;
    loop {
        pj *= prm.p;
        if pj * scale < prm.theta_tol || j > 100_000 {
            return j;
        }
        j += 1;
    }
}

/// Independent oracle for θ through the triple-product series
/// `Σ_k (−z)^k p^{k(k−1)/2} / ∏_{j≥1}(1 − p^j)`.
pub fn theta_series_oracle(z: C64, prm: &Params) -> Result<C64> {
    if z == C64::new(0.0, 0.0) || !z.is_finite() {
        return Err(EllError::Domain(format!(
            "theta oracle undefined at z = {z}"
        )));
    }
    let lp = prm.p.ln();
    let lz = z.ln();
    let term = |k: i64| -> C64 {
        let kf = k as f64;
        let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
        (lz * kf + kf * (kf - 1.0) / 2.0 * lp).exp() * sign
    };
    // log|term| is concave in k with its maximum near k* = 1/2 − ln|z|/ln p.
    let kstar = (0.5 - z.norm().ln() / lp).round() as i64;
    let peak = term(kstar).norm();
    let mut sum = term(kstar);
    for dir in [1i64, -1] {
        let mut k = kstar + dir;
        loop {
            let t = term(k);
            sum += t;
            if t.norm() < prm.theta_tol * peak * 1e-3 || (k - kstar).abs() > 10_000 {
                break;
            }
            k += dir;
        }
    }
    let mut denom = 1.0;
    let mut pj = prm.p;
    while pj > prm.theta_tol * 1e-3 {
        denom *= 1.0 - pj;
        pj *= prm.p;
    }
    Ok(sum / denom)
}

/// `E(s) = q^s θ(q^{−2s})`; an odd entire function of `s`.
pub fn e_fn(s: C64, prm: &Params) -> C64 {
    prm.qpow(s) * theta_raw(prm.qpow(-2.0 * s), prm)
}

/// Point of `h*`, stored through its `n` coordinates `(λ_1, …, λ_n)`.
///
/// Only the differences `λ_ij = λ_i − λ_j` enter any formula built in this crate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DynVar {
    pub coords: Vec<C64>,
}

impl DynVar {
    pub fn new(coords: Vec<C64>) -> Self {
        DynVar { coords }
    }

    pub fn zero(n: usize) -> Self {
        DynVar {
            coords: vec![C64::new(0.0, 0.0); n],
        }
    }

    pub fn n(&self) -> usize {
        self.coords.len()
    }

    /// `λ_ij = λ_i − λ_j` (0-based indices).
    pub fn ij(&self, i: usize, j: usize) -> C64 {
        self.coords[i] - self.coords[j]
    }

    pub fn shifted(&self, w: &Weight) -> DynVar {
        self.shifted_by(w, 1)
    }

    /// `λ + t·w` for an integer multiplier `t`.
    pub fn shifted_by(&self, w: &Weight, t: i64) -> DynVar {
        let coords = self
            .coords
            .iter()
            .zip(&w.coeffs)
            .map(|(x, &k)| x + C64::new((t * k) as f64, 0.0))
            .collect();
        DynVar { coords }
    }

    pub fn add_constant(&self, a: C64) -> DynVar {
        DynVar {
            coords: self.coords.iter().map(|x| x + a).collect(),
        }
    }

    pub fn neg(&self) -> DynVar {
        DynVar {
            coords: self.coords.iter().map(|x| -x).collect(),
        }
    }

    /// Coordinates `k ↦ λ_{σ(k)}`; this is `λ ∘ L_σ`.
    pub fn permuted(&self, sigma: &[usize]) -> DynVar {
        DynVar {
            coords: (0..self.n()).map(|k| self.coords[sigma[k]]).collect(),
        }
    }
}

/// Integral weight `Σ c_i ω(i)`.
///
/// Weights live in the dual of the traceless Cartan subalgebra, so two coefficient
/// vectors that differ by a multiple of `(1, …, 1)` denote the same weight; equality and
/// hashing use the representative whose last coordinate is zero.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Weight {
    pub coeffs: Vec<i64>,
}

impl Weight {
    pub fn zero(n: usize) -> Self {
        Weight { coeffs: vec![0; n] }
    }

    /// `ω(i)` for a 0-based index.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut w = Weight::zero(n);
        w.coeffs[i] = 1;
        w
    }

    /// `ω(I) = Σ_{i∈I} ω(i)` (with multiplicity).
    pub fn of_indices(n: usize, idx: &[usize]) -> Self {
        let mut w = Weight::zero(n);
        for &i in idx {
            w.coeffs[i] += 1;
        }
        w
    }

    pub fn n(&self) -> usize {
        self.coeffs.len()
    }

    pub fn add(&self, o: &Weight) -> Weight {
        Weight {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn sub(&self, o: &Weight) -> Weight {
        Weight {
            coeffs: self
                .coeffs
                .iter()
                .zip(&o.coeffs)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }

    pub fn neg(&self) -> Weight {
        Weight {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn canonical(&self) -> Vec<i64> {
        let last = *self.coeffs.last().unwrap_or(&0);
        self.coeffs.iter().map(|a| a - last).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.canonical().iter().all(|&a| a == 0)
    }
}

impl PartialEq for Weight {
    fn eq(&self, o: &Self) -> bool {
        self.canonical() == o.canonical()
    }
}
impl Eq for Weight {}
impl Hash for Weight {
    fn hash<H: Hasher>(&self, h: &mut H) {
        self.canonical().hash(h)
    }
}

type Fn1 = Arc<dyn Fn(&DynVar) -> C64 + Send + Sync>;

/// Black-box meromorphic function of the dynamical variable, with a formula tag for
/// diagnostics.
#[derive(Clone)]
pub struct ScalarFn {
    f: Fn1,
    pub tag: Arc<str>,
}

impl fmt::Debug for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ScalarFn({})", self.tag)
    }
}

impl ScalarFn {
    pub fn new(tag: impl Into<String>, f: impl Fn(&DynVar) -> C64 + Send + Sync + 'static) -> Self {
        ScalarFn {
            f: Arc::new(f),
            tag: Arc::from(tag.into()),
        }
    }

    pub fn constant(a: C64) -> Self {
        ScalarFn::new(format!("{a}"), move |_| a)
    }

    pub fn one() -> Self {
        ScalarFn::constant(C64::new(1.0, 0.0))
    }

    pub fn eval(&self, x: &DynVar) -> C64 {
        (self.f)(x)
    }

    pub fn add(&self, o: &ScalarFn) -> ScalarFn {
        let (a, b) = (self.f.clone(), o.f.clone());
        ScalarFn::new(format!("({} + {})", self.tag, o.tag), move |x| a(x) + b(x))
    }

    pub fn sub(&self, o: &ScalarFn) -> ScalarFn {
        let (a, b) = (self.f.clone(), o.f.clone());
        ScalarFn::new(format!("({} - {})", self.tag, o.tag), move |x| a(x) - b(x))
    }

    pub fn mul(&self, o: &ScalarFn) -> ScalarFn {
        let (a, b) = (self.f.clone(), o.f.clone());
        ScalarFn::new(format!("{}*{}", self.tag, o.tag), move |x| a(x) * b(x))
    }

    pub fn div(&self, o: &ScalarFn) -> ScalarFn {
        let (a, b) = (self.f.clone(), o.f.clone());
        ScalarFn::new(format!("{}/{}", self.tag, o.tag), move |x| a(x) / b(x))
    }

    pub fn scale(&self, s: C64) -> ScalarFn {
        let a = self.f.clone();
        ScalarFn::new(format!("{s}*{}", self.tag), move |x| a(x) * s)
    }

    /// `(T_μ f)(λ) = f(λ + μ)`.
    pub fn shift(&self, mu: &Weight) -> ScalarFn {
        if mu.is_zero() {
            return self.clone();
        }
        let a = self.f.clone();
        let m = mu.clone();
        ScalarFn::new(format!("T{:?}[{}]", mu.coeffs, self.tag), move |x| {
            a(&x.shifted(&m))
        })
    }

    /// Probabilistic identity test at `samples` pole-guarded points; returns the largest
    /// relative discrepancy seen.
    pub fn compare(&self, o: &ScalarFn, prm: &Params, rng: &mut ChaCha8Rng) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for _ in 0..prm.samples {
            let x = sample_dynvar(prm, rng)?;
            let (a, b) = (self.eval(&x), o.eval(&x));
            worst = worst.max(rel_diff(a, b));
        }
        Ok(worst)
    }
}

/// Maximum that propagates NaN, unlike `f64::max`.
pub fn nan_max(a: f64, b: f64) -> f64 {
    if a.is_nan() || b.is_nan() {
        f64::NAN
    } else {
        a.max(b)
    }
}

/// `|a − b| / max(|a|, |b|, 1e-300)`, or 0 when both vanish.
pub fn rel_diff(a: C64, b: C64) -> f64 {
    let s = a.norm().max(b.norm());
    if s == 0.0 {
        0.0
    } else {
        (a - b).norm() / s
    }
}

/// Finite sum `Σ f_i T_{α_i}` acting on functions of the dynamical variable.
#[derive(Clone, Debug)]
pub struct DhElement {
    pub n: usize,
    pub terms: Vec<(ScalarFn, Weight)>,
}

impl DhElement {
    pub fn zero(n: usize) -> Self {
        DhElement { n, terms: vec![] }
    }

    pub fn identity(n: usize) -> Self {
        DhElement {
            n,
            terms: vec![(ScalarFn::one(), Weight::zero(n))],
        }
    }

    pub fn single(f: ScalarFn, alpha: Weight) -> Self {
        DhElement {
            n: alpha.n(),
            terms: vec![(f, alpha)],
        }
    }

    pub fn shift_op(alpha: Weight) -> Self {
        DhElement::single(ScalarFn::one(), alpha)
    }

    fn push_merge(terms: &mut Vec<(ScalarFn, Weight)>, f: ScalarFn, a: Weight) {
        if let Some(slot) = terms.iter_mut().find(|(_, b)| *b == a) {
            slot.0 = slot.0.add(&f);
        } else {
            terms.push((f, a));
        }
    }

    pub fn add(&self, o: &DhElement) -> DhElement {
        let mut terms = self.terms.clone();
        for (f, a) in &o.terms {
            Self::push_merge(&mut terms, f.clone(), a.clone());
        }
        DhElement { n: self.n, terms }
    }

    pub fn scale(&self, s: C64) -> DhElement {
        DhElement {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(f, a)| (f.scale(s), a.clone()))
                .collect(),
        }
    }

    /// Left multiplication by the function `g` (that is, `g T_0 ∘ self`).
    pub fn premul(&self, g: &ScalarFn) -> DhElement {
        DhElement {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|(f, a)| (g.mul(f), a.clone()))
                .collect(),
        }
    }

    /// Composition `(f T_α)(g T_β) = f·(T_α g)·T_{α+β}`, extended bilinearly.
    pub fn compose(&self, o: &DhElement) -> DhElement {
        let mut terms = Vec::new();
        for (f, a) in &self.terms {
            for (g, b) in &o.terms {
                Self::push_merge(&mut terms, f.mul(&g.shift(a)), a.add(b));
            }
        }
        DhElement { n: self.n, terms }
    }

    /// Merged `(weight, value)` pairs at a point.
    pub fn eval(&self, x: &DynVar) -> Vec<(Weight, C64)> {
        let mut out: Vec<(Weight, C64)> = Vec::new();
        for (f, a) in &self.terms {
            let v = f.eval(x);
            if let Some(slot) = out.iter_mut().find(|(b, _)| b == a) {
                slot.1 += v;
            } else {
                out.push((a.clone(), v));
            }
        }
        out
    }

    /// The function obtained by letting the operator act on the constant function 1.
    pub fn apply_to_one(&self, x: &DynVar) -> C64 {
        self.terms.iter().map(|(f, _)| f.eval(x)).sum()
    }

    pub fn support(&self) -> Vec<Weight> {
        let mut s: Vec<Weight> = Vec::new();
        for (_, a) in &self.terms {
            if !s.contains(a) {
                s.push(a.clone());
            }
        }
        s
    }

    /// Largest relative coefficient mismatch over the union of shift supports at random
    /// guarded points.
    pub fn compare(&self, o: &DhElement, prm: &Params, rng: &mut ChaCha8Rng) -> Result<f64> {
        let mut worst: f64 = 0.0;
        for _ in 0..prm.samples {
            let x = sample_dynvar(prm, rng)?;
            worst = worst.max(dh_values_diff(&self.eval(&x), &o.eval(&x)));
        }
        Ok(worst)
    }
}

/// Relative difference of two merged evaluations.
pub fn dh_values_diff(a: &[(Weight, C64)], b: &[(Weight, C64)]) -> f64 {
    let mut map: HashMap<Weight, (C64, C64)> = HashMap::new();
    for (w, v) in a {
        map.entry(w.clone()).or_default().0 += v;
    }
    for (w, v) in b {
        map.entry(w.clone()).or_default().1 += v;
    }
    let scale = map
        .values()
        .map(|(x, y)| x.norm().max(y.norm()))
        .fold(0.0, f64::max);
    if scale == 0.0 {
        return 0.0;
    }
    map.values()
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
        / scale
}

/// Random point of `h*` kept away from the poles of the R-matrix coefficients and the
/// `E`-functions in the minors.
///
/// Coordinates are uniform on `Re ∈ [−2, 2]`, `Im ∈ [−0.5, 0.5]`. A draw is rejected if
/// `|θ(q^{2λ_ij})|` or `|θ(q^{2(λ_ij+1)})|` falls below `pole_guard` for some ordered pair
/// `i ≠ j`; the first family covers `θ(q^{±2λ_ij})` and the second keeps `E(λ_ij ± 1)` away
/// from zero.
pub fn sample_dynvar(prm: &Params, rng: &mut ChaCha8Rng) -> Result<DynVar> {
    let n = prm.n;
    for _ in 0..1000 {
        let coords: Vec<C64> = (0..n)
            .map(|_| C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-0.5..0.5)))
            .collect();
        let x = DynVar::new(coords);
        if dynvar_is_guarded(&x, prm) {
            return Ok(x);
        }
    }
    Err(EllError::Config(format!(
        "could not sample a dynamical variable within 1000 attempts (pole_guard = {})",
        prm.pole_guard
    )))
}

pub fn dynvar_is_guarded(x: &DynVar, prm: &Params) -> bool {
    let n = x.n();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let l = x.ij(i, j);
            let a = theta_raw(prm.qpow(2.0 * l), prm).norm();
            let b = theta_raw(prm.qpow(2.0 * (l + 1.0)), prm).norm();
            if a < prm.pole_guard || b < prm.pole_guard {
                return false;
            }
        }
    }
    true
}

/// Random spectral value on the annulus `0.6 < |z| < 1.6`.
pub fn sample_spectral(rng: &mut ChaCha8Rng) -> C64 {
    let r: f64 = rng.gen_range(0.6..1.6);
    let phi: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    C64::from_polar(r, phi)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn prm() -> Params {
        Params::with_n(3)
    }

    #[test]
    fn theta_vanishes_on_p_powers() {
        let p = prm();
        for k in -2..=2 {
            let z = C64::new(p.p.powi(k), 0.0);
            assert!(theta(z, &p).unwrap().norm() < 1e-10, "k={k}");
        }
        assert_eq!(theta(C64::new(1.0, 0.0), &p).unwrap(), C64::new(0.0, 0.0));
    }

    #[test]
    fn theta_rejects_zero() {
        assert!(theta(C64::new(0.0, 0.0), &prm()).is_err());
        assert!(theta_series_oracle(C64::new(0.0, 0.0), &prm()).is_err());
    }

    #[test]
    fn theta_matches_oracle_at_minus_one() {
        let p = prm();
        let z = C64::new(-1.0, 0.0);
        let d = theta(z, &p).unwrap() - theta_series_oracle(z, &p).unwrap();
        assert!(d.norm() < 1e-12, "{d}");
    }

    #[test]
    fn theta_functional_equations() {
        let p = prm();
        let mut rng = rng_for(1, "thetaid");
        for _ in 0..50 {
            let z = sample_spectral(&mut rng) * 1.5;
            let t = theta_raw(z, &p);
            let pz = theta_raw(z * p.p, &p);
            let inv = theta_raw(z.inv(), &p);
            let target = -t / z;
            assert!(rel_diff(pz, target) < 1e-10);
            assert!(rel_diff(inv, target) < 1e-10);
        }
    }

    #[test]
    fn e_is_odd() {
        let p = prm();
        let mut rng = rng_for(2, "Eodd");
        for _ in 0..20 {
            let s = C64::new(rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0));
            assert!((e_fn(s, &p) + e_fn(-s, &p)).norm() < 1e-10);
        }
        assert!(e_fn(C64::new(0.0, 0.0), &p).norm() < 1e-15);
        assert!(e_fn(C64::new(1.0, 0.0), &p).norm() > 1e-3);
    }

    #[test]
    fn weights_compare_modulo_trace() {
        let a = Weight {
            coeffs: vec![1, 0, 0],
        };
        let b = Weight {
            coeffs: vec![0, -1, -1],
        };
        assert_eq!(a, b);
        assert!(Weight {
            coeffs: vec![2, 2, 2]
        }
        .is_zero());
        assert_ne!(Weight::unit(3, 0), Weight::unit(3, 1));
    }

    #[test]
    fn sampling_is_deterministic_and_guarded() {
        let p = prm();
        let a = sample_dynvar(&p, &mut rng_for(7, "x")).unwrap();
        let b = sample_dynvar(&p, &mut rng_for(7, "x")).unwrap();
        assert_eq!(a, b);
        assert!(dynvar_is_guarded(&a, &p));
        let bad = Params {
            pole_guard: 1e6,
            ..p
        };
        assert!(sample_dynvar(&bad, &mut rng_for(7, "x")).is_err());
    }

    #[test]
    fn dh_composition_rules() {
        let p = prm();
        let n = 3;
        let f = ScalarFn::new("f", |x: &DynVar| x.ij(0, 1).sin() + 2.0);
        let g = ScalarFn::new("g", |x: &DynVar| x.ij(1, 2).cos());
        let h = ScalarFn::new("h", |x: &DynVar| x.ij(0, 2) * 0.3 + 1.0);
        let a = Weight::unit(n, 0);
        let b = Weight::unit(n, 2).neg();
        let fa = DhElement::single(f.clone(), a.clone());
        let gb = DhElement::single(g.clone(), b.clone());
        let hc = DhElement::single(h.clone(), Weight::unit(n, 1));
        let mut rng = rng_for(3, "dh");
        let left = fa.compose(&gb).compose(&hc);
        let right = fa.compose(&gb.compose(&hc));
        assert!(left.compare(&right, &p, &mut rng).unwrap() < 1e-12);
        let f0 = DhElement::single(f.clone(), Weight::zero(n));
        let g0 = DhElement::single(g.clone(), Weight::zero(n));
        let prod = DhElement::single(f.mul(&g), Weight::zero(n));
        assert!(f0.compose(&g0).compare(&prod, &p, &mut rng).unwrap() < 1e-14);
        let s = DhElement::shift_op(a.clone()).compose(&DhElement::shift_op(b.clone()));
        assert_eq!(s.support(), vec![a.add(&b)]);
    }
}
