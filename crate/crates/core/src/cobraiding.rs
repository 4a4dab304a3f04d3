//! The cobraiding `⟨·,·⟩ : A × A → D_h` on the elliptic FRST algebra.
//!
//! On generators `⟨e_ij(z), e_kl(w)⟩ = R̃^{jl}_{ik}(ζ, z/w) T_{−ω(i)−ω(k)}`, with `R̃ = θ(q²z)R`.
//! Longer words are reduced with
//!
//! ```text
//! ⟨ab, c⟩ = Σ ⟨a, c′⟩ T_{β} ⟨b, c″⟩,    c″ of row weight β,
//! ⟨a, bc⟩ = Σ ⟨a″, b⟩ T_{β} ⟨a′, c⟩,    a″ of row weight β,
//! ```
//!
//! down to generator pairings. A pairing of two words `u`, `v` is homogeneous with the single
//! shift `−(rows u + rows v)`, so the recursion only carries scalar values; the coefficient
//! functions of the arguments are moved into `D_h` with the moment-map rules.

use rand_chacha::ChaCha8Rng;

use crate::algebra::{
    determinant, gen, left_minor, row_weight, AlgElement, BiFn, Gen, SpectralPoint, Term,
};
use crate::error::{EllError, Result};
use crate::evalrep::check_identity;
use crate::numerics::{
    dh_values_diff, nan_max, sample_dynvar, theta_raw, DhElement, DynVar, Params, ScalarFn, Weight,
    C64,
};
use crate::rmatrix::r_entry;

/// Largest allowed product of word lengths in one pairing.
pub const PAIRING_CAP: usize = 12;

/// Default perturbation pair `(ε₁, ε₂)` for primed pairings.
pub const DEFAULT_EPS: (f64, f64) = (1e-4, 1e-5);

/// A letter with its spectral value resolved.
#[derive(Clone, Copy, Debug)]
struct Letter {
    i: usize,
    j: usize,
    z: C64,
}

fn letters(word: &[Gen], prm: &Params) -> Vec<Letter> {
    word.iter()
        .map(|g| Letter {
            i: g.i,
            j: g.j,
            z: g.z.value(prm),
        })
        .collect()
}

fn rows(n: usize, w: &[Letter]) -> Weight {
    Weight::of_indices(n, &w.iter().map(|l| l.i).collect::<Vec<_>>())
}

fn cols(n: usize, w: &[Letter]) -> Weight {
    Weight::of_indices(n, &w.iter().map(|l| l.j).collect::<Vec<_>>())
}

/// Multiset of spectral values of a homogeneous word.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectralDegree(pub Vec<C64>);

impl SpectralDegree {
    pub fn of_word(word: &[Gen], prm: &Params) -> Self {
        SpectralDegree(word.iter().map(|g| g.z.value(prm)).collect())
    }

    /// `φ̂(a, b) = ∏ φ(z_i/w_j)` with `φ(z) = θ(q²z)`.
    pub fn regularizing_factor(&self, other: &SpectralDegree, prm: &Params) -> C64 {
        let q2 = prm.q * prm.q;
        let mut r = C64::new(1.0, 0.0);
        for z in &self.0 {
            for w in &other.0 {
                r *= theta_raw(z / w * q2, prm);
            }
        }
        r
    }
}

/// `⟨e_ij(z), e_kl(w)⟩` as a single-term element of `D_h`.
pub fn pair_generators(
    n: usize,
    (i, j, z): (usize, usize, C64),
    (k, l, w): (usize, usize, C64),
    prm: &Params,
) -> DhElement {
    let p = *prm;
    let f = ScalarFn::new(format!("Rt[{i}{k},{j}{l}]"), move |zeta| {
        r_entry(i, k, j, l, zeta, z / w, &p, true)
    });
    DhElement::single(f, Weight::of_indices(n, &[i, k]).neg())
}

fn counit_value(w: &[Letter]) -> C64 {
    if w.iter().all(|l| l.i == l.j) {
        C64::new(1.0, 0.0)
    } else {
        C64::new(0.0, 0.0)
    }
}

/// Coefficient of `T_{−(rows u + rows v)}` in `⟨u, v⟩` at `ζ`, for coefficient-free words.
fn pure_value(n: usize, u: &[Letter], v: &[Letter], zeta: &DynVar, prm: &Params) -> C64 {
    if u.is_empty() {
        return counit_value(v);
    }
    if v.is_empty() {
        return counit_value(u);
    }
    if rows(n, u).add(&rows(n, v)) != cols(n, u).add(&cols(n, v)) {
        return C64::new(0.0, 0.0);
    }
    if u.len() == 1 && v.len() == 1 {
        let (a, b) = (u[0], v[0]);
        return r_entry(a.i, b.i, a.j, b.j, zeta, a.z / b.z, prm, true);
    }
    let mut acc = C64::new(0.0, 0.0);
    if u.len() > 1 {
        // ⟨g·rest, v⟩ = Σ_x ⟨g, v′_x⟩ T_{rows v″_x} ⟨rest, v″_x⟩
        let (g, rest) = (&u[..1], &u[1..]);
        let base = rows(n, g).add(&rows(n, v)).neg();
        for xs in crate::evalrep::multi_indices(n, v.len()) {
            let v1: Vec<Letter> = v
                .iter()
                .zip(&xs)
                .map(|(l, &x)| Letter {
                    i: l.i,
                    j: x,
                    z: l.z,
                })
                .collect();
            let a = pure_value(n, g, &v1, zeta, prm);
            if a == C64::new(0.0, 0.0) {
                continue;
            }
            let v2: Vec<Letter> = v
                .iter()
                .zip(&xs)
                .map(|(l, &x)| Letter {
                    i: x,
                    j: l.j,
                    z: l.z,
                })
                .collect();
            let shift = base.add(&rows(n, &v2));
            acc += a * pure_value(n, rest, &v2, &zeta.shifted(&shift), prm);
        }
    } else {
        // ⟨g, h·rest⟩ = Σ_y ⟨e_yj, h⟩ T_{ω(y)} ⟨e_iy, rest⟩
        let (g, h, rest) = (u[0], &v[..1], &v[1..]);
        for y in 0..n {
            let a = pure_value(
                n,
                &[Letter {
                    i: y,
                    j: g.j,
                    z: g.z,
                }],
                h,
                zeta,
                prm,
            );
            if a == C64::new(0.0, 0.0) {
                continue;
            }
            let shift = Weight::of_indices(n, &[h[0].i]).neg();
            acc += a * pure_value(
                n,
                &[Letter {
                    i: g.i,
                    j: y,
                    z: g.z,
                }],
                rest,
                &zeta.shifted(&shift),
                prm,
            );
        }
    }
    acc
}

fn check_cap(a: &AlgElement, b: &AlgElement) -> Result<()> {
    let la = a.terms.iter().map(|t| t.word.len()).max().unwrap_or(0);
    let lb = b.terms.iter().map(|t| t.word.len()).max().unwrap_or(0);
    if la * lb > PAIRING_CAP {
        return Err(EllError::Expansion(format!(
            "word lengths {la} x {lb} exceed the pairing cap {PAIRING_CAP}"
        )));
    }
    Ok(())
}

/// `⟨c w, d v⟩` for one pair of terms.
///
/// Writing `c(λ,ρ) w = g(ρ) w f(λ + ω(rows w))` and `d(λ,ρ) v = f′(λ) v g′(ρ + ω(cols v))`, the
/// outer factors compose on the left of `⟨w, v⟩ = h T_α` and the inner ones on the right, so
/// the coefficient is `c(ζ + α + rows w, ζ) d(ζ, ζ + α + cols v) h(ζ)`.
fn pair_terms(n: usize, ta: &Term, tb: &Term, prm: &Params) -> DhElement {
    let (u, v) = (letters(&ta.word, prm), letters(&tb.word, prm));
    let alpha = rows(n, &u).add(&rows(n, &v)).neg();
    let (ra, cb) = (alpha.add(&rows(n, &u)), alpha.add(&cols(n, &v)));
    let (ca, db, p) = (ta.coeff.clone(), tb.coeff.clone(), *prm);
    let f = ScalarFn::new("pair", move |zeta| {
        let h = pure_value(n, &u, &v, zeta, &p);
        if h == C64::new(0.0, 0.0) {
            return h;
        }
        ca.eval(&zeta.shifted(&ra), zeta) * db.eval(zeta, &zeta.shifted(&cb)) * h
    });
    DhElement::single(f, alpha)
}

/// `⟨a, b⟩` for arbitrary elements, as a sum over term pairs.
pub fn pair_words(a: &AlgElement, b: &AlgElement, prm: &Params) -> Result<DhElement> {
    check_cap(a, b)?;
    let mut out = DhElement::zero(a.n);
    for ta in &a.terms {
        for tb in &b.terms {
            out = out.add(&pair_terms(a.n, ta, tb, prm));
        }
    }
    Ok(out)
}

fn term_values(a: &AlgElement, b: &AlgElement, zeta: &DynVar, prm: &Params) -> Vec<C64> {
    let mut out = Vec::with_capacity(a.terms.len() * b.terms.len());
    for ta in &a.terms {
        for tb in &b.terms {
            out.push(pair_terms(a.n, ta, tb, prm).apply_to_one(zeta));
        }
    }
    out
}

/// Size of `⟨a, b⟩` relative to the largest term-pair contribution of `⟨a_ref, b_ref⟩`.
///
/// At a zero of the pairing single terms may vanish through a `θ` factor instead of
/// cancelling, so their own size is no scale; `a_ref`, `b_ref` are the same elements at a
/// nearby generic spectral point.
pub fn pairing_vanishing_residual(
    a: &AlgElement,
    b: &AlgElement,
    a_ref: &AlgElement,
    b_ref: &AlgElement,
    prm: &Params,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    check_cap(a, b)?;
    check_cap(a_ref, b_ref)?;
    let mut worst: f64 = 0.0;
    for _ in 0..prm.samples {
        let zeta = sample_dynvar(prm, rng)?;
        let sum: C64 = term_values(a, b, &zeta, prm).iter().sum();
        let scale = term_values(a_ref, b_ref, &zeta, prm)
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        if scale == 0.0 {
            if sum.norm() > 0.0 {
                return Ok(f64::INFINITY);
            }
            continue;
        }
        worst = nan_max(worst, sum.norm() / scale);
    }
    Ok(worst)
}

/// The two vanishing statements for quadratic minors: `⟨ξ_I^J(w), e_ij(z)⟩ = 0` at
/// `w = p^k z`, and `⟨e_ij(z), ξ_I^J(w)⟩ = 0` at `w = p^k q^{−2} z`. Returns both residuals.
pub fn pairing_zero_residuals(
    n: usize,
    i_set: &[usize],
    j_set: &[usize],
    (i, j): (usize, usize),
    z: SpectralPoint,
    k: i32,
    prm: &Params,
    rng: &mut ChaCha8Rng,
) -> Result<(f64, f64)> {
    let e = AlgElement::generator(n, i, j, z);
    let nearby = |w: SpectralPoint| SpectralPoint::fresh(w.value(prm) * C64::new(1.01, 0.01));
    let w1 = z.shift(k, 0);
    let first = pairing_vanishing_residual(
        &left_minor(n, i_set, j_set, w1, prm),
        &e,
        &left_minor(n, i_set, j_set, nearby(w1), prm),
        &e,
        prm,
        rng,
    )?;
    let w2 = z.shift(k, -2);
    let second = pairing_vanishing_residual(
        &e,
        &left_minor(n, i_set, j_set, w2, prm),
        &e,
        &left_minor(n, i_set, j_set, nearby(w2), prm),
        prm,
        rng,
    )?;
    Ok((first, second))
}

/// `⟨det(w), e_ij(z)⟩` at `w = p^m q^{−2k} z`, `k ∈ {0, …, n−2}`, against a nearby generic `w`.
pub fn det_pairing_zero_residual(
    n: usize,
    (i, j): (usize, usize),
    z: SpectralPoint,
    m: i32,
    k: i32,
    prm: &Params,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let e = AlgElement::generator(n, i, j, z);
    let w = z.shift(m, -2 * k);
    let near = SpectralPoint::fresh(w.value(prm) * C64::new(1.01, 0.01));
    pairing_vanishing_residual(
        &determinant(n, w, prm),
        &e,
        &determinant(n, near, prm),
        &e,
        prm,
        rng,
    )
}

/// Unitarity with respect to `φ(z) = θ(q²z)` for two coefficient-free words:
/// `φ̂(a,b)φ̂(b,a)ε(ab) = Σ ⟨b′, a′⟩ T_{rows a″ + rows b″} ⟨a″, b″⟩`.
///
/// Returns the relative residual against the largest of the two sides' term values.
pub fn unitarity_residual(n: usize, a: &[Gen], b: &[Gen], prm: &Params, zetas: &[DynVar]) -> f64 {
    let (ua, ub) = (letters(a, prm), letters(b, prm));
    let (da, db) = (
        SpectralDegree::of_word(a, prm),
        SpectralDegree::of_word(b, prm),
    );
    let phi = da.regularizing_factor(&db, prm) * db.regularizing_factor(&da, prm);
    let mut ab = ua.clone();
    ab.extend_from_slice(&ub);
    let eps = counit_value(&ab);
    let base = rows(n, &ua).add(&rows(n, &ub)).neg();
    let mut worst: f64 = 0.0;
    for zeta in zetas {
        let lhs = phi * eps;
        let mut scale = lhs.norm();
        let mut sum = C64::new(0.0, 0.0);
        for xa in crate::evalrep::multi_indices(n, ua.len()) {
            let a1: Vec<Letter> = ua
                .iter()
                .zip(&xa)
                .map(|(l, &x)| Letter {
                    i: l.i,
                    j: x,
                    z: l.z,
                })
                .collect();
            let a2: Vec<Letter> = ua
                .iter()
                .zip(&xa)
                .map(|(l, &x)| Letter {
                    i: x,
                    j: l.j,
                    z: l.z,
                })
                .collect();
            for xb in crate::evalrep::multi_indices(n, ub.len()) {
                let b1: Vec<Letter> = ub
                    .iter()
                    .zip(&xb)
                    .map(|(l, &x)| Letter {
                        i: l.i,
                        j: x,
                        z: l.z,
                    })
                    .collect();
                let b2: Vec<Letter> = ub
                    .iter()
                    .zip(&xb)
                    .map(|(l, &x)| Letter {
                        i: x,
                        j: l.j,
                        z: l.z,
                    })
                    .collect();
                let first = pure_value(n, &b1, &a1, zeta, prm);
                if first == C64::new(0.0, 0.0) {
                    continue;
                }
                let shift = base.add(&rows(n, &a2)).add(&rows(n, &b2));
                let t = first * pure_value(n, &a2, &b2, &zeta.shifted(&shift), prm);
                scale = scale.max(t.norm());
                sum += t;
            }
        }
        if scale > 0.0 {
            worst = nan_max(worst, (sum - lhs).norm() / scale);
        }
    }
    worst
}

/// The three regularized pairings.
#[derive(Clone, Debug, PartialEq)]
pub enum PrimedKind {
    /// `⟨ξ_I^J(w), e_ij(z)⟩′`, divided by `θ(z/w)`.
    MinorGen {
        i_set: Vec<usize>,
        j_set: Vec<usize>,
        i: usize,
        j: usize,
    },
    /// `⟨e_ij(z), ξ_I^J(w)⟩′`, divided by `θ(q²w/z)`.
    GenMinor {
        i: usize,
        j: usize,
        i_set: Vec<usize>,
        j_set: Vec<usize>,
    },
    /// `⟨det(w), e_ij(z)⟩′`, divided by `∏_{k=0}^{n−2} θ(q^{2k}w/z)`.
    DetGen { i: usize, j: usize },
}

/// A primed pairing computed at two perturbation sizes.
///
/// Each value is the average over `z(1 ± ε)`, whose error is an even series `c ε² + O(ε⁴)`.
/// The returned value is the Richardson combination of the two averages. It is accepted
/// when the error estimate of the finer average, `|fine − coarse| · ε₂² / (ε₁² − ε₂²)`, is
/// within `10·eq_tol` relative to the value.
#[derive(Clone, Debug)]
pub struct PrimedPair {
    pub kind: PrimedKind,
    coarse: DhElement,
    fine: DhElement,
    extrapolated: DhElement,
    eps: (f64, f64),
    tol: f64,
}

impl PrimedPair {
    pub fn eval(&self, zeta: &DynVar) -> Result<Vec<(Weight, C64)>> {
        let (a, b) = (self.coarse.eval(zeta), self.fine.eval(zeta));
        let (e1, e2) = (self.eps.0 * self.eps.0, self.eps.1 * self.eps.1);
        let estimate = dh_values_diff(&a, &b) * e2 / (e1 - e2);
        if estimate.is_nan() || estimate > self.tol {
            return Err(EllError::Limit(format!(
                "{:?}: estimated perturbation error {estimate:.3e}",
                self.kind
            )));
        }
        Ok(self.extrapolated.eval(zeta))
    }

    /// The function `⟨·,·⟩′ 1`.
    pub fn apply_to_one(&self, zeta: &DynVar) -> Result<C64> {
        Ok(self.eval(zeta)?.iter().map(|(_, v)| v).sum())
    }
}

fn primed_at(
    n: usize,
    kind: &PrimedKind,
    z: C64,
    w: SpectralPoint,
    prm: &Params,
) -> Result<DhElement> {
    let zp = SpectralPoint::fresh(z);
    let wv = w.value(prm);
    let q2 = prm.q * prm.q;
    let (pairing, divisor) = match kind {
        PrimedKind::MinorGen { i_set, j_set, i, j } => {
            let m = left_minor(n, i_set, j_set, w, prm);
            (
                pair_words(&m, &AlgElement::generator(n, *i, *j, zp), prm)?,
                theta_raw(z / wv, prm),
            )
        }
        PrimedKind::GenMinor { i, j, i_set, j_set } => {
            let m = left_minor(n, i_set, j_set, w, prm);
            (
                pair_words(&AlgElement::generator(n, *i, *j, zp), &m, prm)?,
                theta_raw(wv / z * q2, prm),
            )
        }
        PrimedKind::DetGen { i, j } => {
            let d = determinant(n, w, prm);
            let div = (0..n.saturating_sub(1))
                .map(|k| theta_raw(wv / z * q2.powi(k as i32), prm))
                .product();
            (
                pair_words(&d, &AlgElement::generator(n, *i, *j, zp), prm)?,
                div,
            )
        }
    };
    Ok(pairing.scale(C64::new(1.0, 0.0) / divisor))
}

/// Primed pairing of the given kind at `(z, w)`, with perturbations `eps = (ε₁, ε₂)`, `ε₁ > ε₂`.
pub fn primed_pair(
    n: usize,
    kind: PrimedKind,
    z: SpectralPoint,
    w: SpectralPoint,
    eps: (f64, f64),
    prm: &Params,
) -> Result<PrimedPair> {
    if !(eps.0 > eps.1 && eps.1 > 0.0) {
        return Err(EllError::Config(format!(
            "need eps1 > eps2 > 0, got {eps:?}"
        )));
    }
    let zv = z.value(prm);
    let avg = |e: f64| -> Result<DhElement> {
        let up = primed_at(n, &kind, zv * (1.0 + e), w, prm)?;
        let down = primed_at(n, &kind, zv * (1.0 - e), w, prm)?;
        Ok(up.add(&down).scale(C64::new(0.5, 0.0)))
    };
    let (coarse, fine) = (avg(eps.0)?, avg(eps.1)?);
    let (e1, e2) = (eps.0 * eps.0, eps.1 * eps.1);
    let extrapolated = fine
        .scale(C64::new(e1 / (e1 - e2), 0.0))
        .add(&coarse.scale(C64::new(-e2 / (e1 - e2), 0.0)));
    Ok(PrimedPair {
        coarse,
        fine,
        extrapolated,
        eps,
        tol: 10.0 * prm.eq_tol,
        kind,
    })
}

/// Relative deviation of `⟨det(w), e_11(z)⟩′ 1` from `q^{n−1} θ(q^{2n} w/z)`.
pub fn det_pairing_residual(
    n: usize,
    z: SpectralPoint,
    w: SpectralPoint,
    prm: &Params,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let pp = primed_pair(n, PrimedKind::DetGen { i: 0, j: 0 }, z, w, DEFAULT_EPS, prm)?;
    let target = theta_raw(w.value(prm) / z.value(prm) * prm.q.powi(2 * n as i32), prm)
        * prm.q.powi(n as i32 - 1);
    let mut worst: f64 = 0.0;
    for _ in 0..prm.samples {
        let zeta = sample_dynvar(prm, rng)?;
        worst = nan_max(
            worst,
            crate::numerics::rel_diff(pp.apply_to_one(&zeta)?, target),
        );
    }
    Ok(worst)
}

/// `ψ(z, w) = θ(q²z/w) θ(q⁴w/z)`.
pub fn psi(z: C64, w: C64, prm: &Params) -> C64 {
    let q2 = prm.q * prm.q;
    theta_raw(z / w * q2, prm) * theta_raw(w / z * q2 * q2, prm)
}

fn primed_coefficient(pp: PrimedPair, on_rho: bool) -> BiFn {
    let f = move |x: &DynVar| pp.apply_to_one(x).unwrap_or(C64::new(f64::NAN, f64::NAN));
    if on_rho {
        BiFn::of_rho(f)
    } else {
        BiFn::of_lambda(f)
    }
}

/// Both sides of the key identity for quadratic minors:
///
/// ```text
/// ψ Σ_{x,X} μ_l(⟨ξ_I^X(w), e_ix(z)⟩′1) ξ_X^J(w) e_xj(z) = ψ Σ_{x,X} μ_r(⟨ξ_X^J(w), e_xj(z)⟩′1) e_ix(z) ξ_I^X(w)
/// ```
pub fn key_identity(
    n: usize,
    i: usize,
    j: usize,
    i_set: &[usize],
    j_set: &[usize],
    z: SpectralPoint,
    w: SpectralPoint,
    prm: &Params,
) -> Result<(AlgElement, AlgElement)> {
    let ps = psi(z.value(prm), w.value(prm), prm);
    let mut lhs = AlgElement::zero(n);
    let mut rhs = AlgElement::zero(n);
    for x in 0..n {
        for xs in crate::efactors::two_subsets(n) {
            let left = primed_pair(
                n,
                PrimedKind::MinorGen {
                    i_set: i_set.to_vec(),
                    j_set: xs.clone(),
                    i,
                    j: x,
                },
                z,
                w,
                DEFAULT_EPS,
                prm,
            )?;
            let term = left_minor(n, &xs, j_set, w, prm).mul(&AlgElement::generator(n, x, j, z));
            lhs = lhs.add(&term.premul(&primed_coefficient(left, false)));
            let right = primed_pair(
                n,
                PrimedKind::MinorGen {
                    i_set: xs.clone(),
                    j_set: j_set.to_vec(),
                    i: x,
                    j,
                },
                z,
                w,
                DEFAULT_EPS,
                prm,
            )?;
            let term = AlgElement::generator(n, i, x, z).mul(&left_minor(n, i_set, &xs, w, prm));
            rhs = rhs.add(&term.premul(&primed_coefficient(right, true)));
        }
    }
    Ok((lhs.scale(ps), rhs.scale(ps)))
}

/// Both sides of the cobraiding identity for `a = e_ij(z)`, `b = e_kl(w)`:
/// `Σ μ_l(⟨a′, b′⟩1) a″ b″ = Σ μ_r(⟨a″, b″⟩1) b′ a′`.
pub fn cobraiding_identity(
    n: usize,
    (i, j): (usize, usize),
    (k, l): (usize, usize),
    z: SpectralPoint,
    w: SpectralPoint,
    prm: &Params,
) -> (AlgElement, AlgElement) {
    let p = *prm;
    let ratio = z.value(prm) / w.value(prm);
    let mut lhs = AlgElement::zero(n);
    let mut rhs = AlgElement::zero(n);
    for x in 0..n {
        for y in 0..n {
            let c = BiFn::of_lambda(move |lam| r_entry(i, k, x, y, lam, ratio, &p, true));
            lhs = lhs.add(&AlgElement::word(n, c, vec![gen(x, j, z), gen(y, l, w)]));
            let c = BiFn::of_rho(move |rho| r_entry(x, y, j, l, rho, ratio, &p, true));
            rhs = rhs.add(&AlgElement::word(n, c, vec![gen(k, y, w), gen(i, x, z)]));
        }
    }
    (lhs, rhs)
}

/// Largest residual of the key identity over all `i, j` and 2-subsets `I, J`, in the `k`-point
/// evaluation representation.
pub fn key_identity_residual(
    n: usize,
    z: SpectralPoint,
    w: SpectralPoint,
    k: usize,
    prm: &Params,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for i_set in crate::efactors::two_subsets(n) {
        for j_set in crate::efactors::two_subsets(n) {
            for i in 0..n {
                for j in 0..n {
                    let (l, r) = key_identity(n, i, j, &i_set, &j_set, z, w, prm)?;
                    worst = nan_max(worst, check_identity(&l, &r, k, 1, prm, rng)?);
                }
            }
        }
    }
    Ok(worst)
}

/// `true` when every term pair of `⟨det(w), e_xy(z)⟩` is structurally zero (`x ≠ y`).
pub fn det_offdiagonal_is_structural_zero(
    n: usize,
    x: usize,
    y: usize,
    z: SpectralPoint,
    w: SpectralPoint,
    prm: &Params,
) -> bool {
    let d = determinant(n, w, prm);
    let e = AlgElement::generator(n, x, y, z);
    d.terms.iter().all(|t| {
        let (u, v) = (letters(&t.word, prm), letters(&e.terms[0].word, prm));
        rows(n, &u).add(&rows(n, &v)) != cols(n, &u).add(&cols(n, &v))
    })
}

/// Shift weight of `⟨a, b⟩` for homogeneous words, `−(rows a + rows b)`.
pub fn expected_shift(n: usize, a: &[Gen], b: &[Gen]) -> Weight {
    row_weight(n, a).add(&row_weight(n, b)).neg()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::gen;
    use crate::evalrep::multi_indices;
    use crate::numerics::{rng_for, sample_spectral};

    fn sp(rng: &mut ChaCha8Rng) -> SpectralPoint {
        SpectralPoint::fresh(sample_spectral(rng))
    }

    #[test]
    fn generator_pairings() {
        let prm = Params::with_n(2);
        let mut rng = rng_for(1, "pairgen");
        let (z, w) = (sample_spectral(&mut rng), sample_spectral(&mut rng));
        let zeta = sample_dynvar(&prm, &mut rng).unwrap();
        let d = pair_generators(2, (0, 0, z), (0, 0, w), &prm);
        let q2 = prm.q * prm.q;
        assert!((d.apply_to_one(&zeta) - theta_raw(z / w * q2, &prm)).norm() < 1e-14);
        assert_eq!(d.terms[0].1, Weight::of_indices(2, &[0, 0]).neg());
        let e = pair_generators(2, (0, 1, z), (1, 0, w), &prm);
        let b = crate::rmatrix::beta_tilde_raw(zeta.ij(0, 1), z / w, &prm);
        assert!((e.apply_to_one(&zeta) - b).norm() < 1e-14);
        let a = AlgElement::generator(2, 0, 1, SpectralPoint::fresh(z));
        let b = AlgElement::generator(2, 1, 0, SpectralPoint::fresh(w));
        let v = pair_words(&a, &b, &prm).unwrap().apply_to_one(&zeta);
        assert!((v - e.apply_to_one(&zeta)).norm() < 1e-14);
        assert_eq!(
            pair_words(&a, &a, &prm).unwrap().apply_to_one(&zeta),
            C64::new(0.0, 0.0)
        );
    }

    #[test]
    fn pairing_with_unit_is_counit() {
        let prm = Params::with_n(2);
        let mut rng = rng_for(2, "pairunit");
        let z = sp(&mut rng);
        let a = AlgElement::word(2, BiFn::one(), vec![gen(0, 0, z), gen(1, 1, z.shift(0, 2))]);
        let zeta = sample_dynvar(&prm, &mut rng).unwrap();
        let v = pair_words(&a, &AlgElement::one(2), &prm)
            .unwrap()
            .eval(&zeta);
        assert_eq!(v.len(), 1);
        assert!((v[0].1 - 1.0).norm() < 1e-15);
        let off = AlgElement::generator(2, 0, 1, z);
        assert_eq!(
            pair_words(&AlgElement::one(2), &off, &prm)
                .unwrap()
                .apply_to_one(&zeta),
            C64::new(0.0, 0.0)
        );
    }

    /// Brute-force expansion of `⟨e_ij(z₁)e_kl(z₂), e_ab(w)⟩ = Σ_x ⟨e_ij, e_ax⟩ T_{ω(x)} ⟨e_kl, e_xb⟩`.
    #[test]
    fn two_letter_against_hand_expansion() {
        let n = 2;
        let prm = Params::with_n(n);
        let mut rng = rng_for(3, "pairhand");
        let (z1, z2, w) = (
            sample_spectral(&mut rng),
            sample_spectral(&mut rng),
            sample_spectral(&mut rng),
        );
        let zeta = sample_dynvar(&prm, &mut rng).unwrap();
        for idx in multi_indices(n, 6) {
            let (i, j, k, l, a, b) = (idx[0], idx[1], idx[2], idx[3], idx[4], idx[5]);
            let lhs = AlgElement::word(
                n,
                BiFn::one(),
                vec![
                    gen(i, j, SpectralPoint::fresh(z1)),
                    gen(k, l, SpectralPoint::fresh(z2)),
                ],
            );
            let rhs = AlgElement::generator(n, a, b, SpectralPoint::fresh(w));
            let got = pair_words(&lhs, &rhs, &prm).unwrap().apply_to_one(&zeta);
            let mut want = C64::new(0.0, 0.0);
            for x in 0..n {
                let first = pair_generators(n, (i, j, z1), (a, x, w), &prm);
                let second = pair_generators(n, (k, l, z2), (x, b, w), &prm);
                want += first
                    .compose(&DhElement::shift_op(Weight::unit(n, x)))
                    .compose(&second)
                    .apply_to_one(&zeta);
            }
            assert!((got - want).norm() < 1e-13, "{idx:?}");
        }
    }

    #[test]
    fn coefficients_move_by_moment_rules() {
        let n = 2;
        let prm = Params::with_n(n);
        let mut rng = rng_for(4, "paircoef");
        let (z, w) = (sp(&mut rng), sp(&mut rng));
        let zeta = sample_dynvar(&prm, &mut rng).unwrap();
        let f = |x: &DynVar| x.ij(0, 1) * 0.3 + 1.0;
        // ⟨f(ρ) e_00(z), e_00(w)⟩ = f(ζ) ⟨e_00, e_00⟩ and ⟨e_00(z), e_00(w) f(ρ)⟩ = ⟨e_00, e_00⟩ f(ζ + α).
        let plain = pair_words(
            &AlgElement::generator(n, 0, 0, z),
            &AlgElement::generator(n, 0, 0, w),
            &prm,
        )
        .unwrap()
        .apply_to_one(&zeta);
        let a = AlgElement::generator(n, 0, 0, z).premul(&BiFn::of_rho(f));
        let v = pair_words(&a, &AlgElement::generator(n, 0, 0, w), &prm)
            .unwrap()
            .apply_to_one(&zeta);
        assert!((v - f(&zeta) * plain).norm() < 1e-13);
        let b = AlgElement::generator(n, 0, 0, w).premul(&BiFn::of_lambda(f));
        let v = pair_words(&AlgElement::generator(n, 0, 0, z), &b, &prm)
            .unwrap()
            .apply_to_one(&zeta);
        assert!((v - f(&zeta) * plain).norm() < 1e-13);
    }

    #[test]
    fn shifts_are_homogeneous() {
        let n = 3;
        let prm = Params::with_n(n);
        let mut rng = rng_for(5, "pairhom");
        let w = sp(&mut rng);
        let z = sp(&mut rng);
        let m = left_minor(n, &[0, 2], &[1, 2], w, &prm);
        let e = AlgElement::generator(n, 1, 0, z);
        let d = pair_words(&m, &e, &prm).unwrap();
        let expected = expected_shift(n, &m.terms[0].word, &e.terms[0].word);
        assert!(d.support().iter().all(|s| *s == expected));
    }

    #[test]
    fn cap_is_enforced() {
        let prm = Params::with_n(2);
        let mut rng = rng_for(6, "paircap");
        let z = sp(&mut rng);
        let long = AlgElement::word(
            2,
            BiFn::one(),
            (0..4).map(|k| gen(0, 0, z.shift(0, 2 * k))).collect(),
        );
        assert!(matches!(
            pair_words(&long, &long, &prm),
            Err(EllError::Expansion(_))
        ));
    }

    #[test]
    fn unitarity_for_short_words() {
        let n = 2;
        let prm = Params {
            samples: 2,
            ..Params::with_n(n)
        };
        let mut rng = rng_for(7, "unitarity");
        let zs: Vec<SpectralPoint> = (0..4).map(|_| sp(&mut rng)).collect();
        let zetas: Vec<DynVar> = (0..2)
            .map(|_| sample_dynvar(&prm, &mut rng).unwrap())
            .collect();
        for idx in multi_indices(n, 4) {
            let a = vec![gen(idx[0], idx[1], zs[0])];
            let b = vec![gen(idx[2], idx[3], zs[1])];
            let r = unitarity_residual(n, &a, &b, &prm, &zetas);
            assert!(r < 1e-8, "{idx:?}: {r}");
        }
        for idx in multi_indices(n, 6) {
            let a = vec![gen(idx[0], idx[1], zs[0]), gen(idx[2], idx[3], zs[2])];
            let b = vec![gen(idx[4], idx[5], zs[1])];
            assert!(
                unitarity_residual(n, &a, &b, &prm, &zetas) < 1e-8,
                "{idx:?}"
            );
            assert!(
                unitarity_residual(n, &b, &a, &prm, &zetas) < 1e-8,
                "{idx:?} swapped"
            );
        }
    }

    #[test]
    fn pairing_zero_lemma() {
        for n in [2usize, 3] {
            let prm = Params {
                samples: 2,
                ..Params::with_n(n)
            };
            let mut rng = rng_for(8, "pairzero");
            let z = sp(&mut rng);
            for k in [-1, 0, 1] {
                for i_set in crate::efactors::two_subsets(n) {
                    for j_set in crate::efactors::two_subsets(n) {
                        for (i, j) in [(0, 0), (0, 1), (1, 0), (n - 1, n - 1)] {
                            let (a, b) = pairing_zero_residuals(
                                n,
                                &i_set,
                                &j_set,
                                (i, j),
                                z,
                                k,
                                &prm,
                                &mut rng,
                            )
                            .unwrap();
                            assert!(
                                a < 1e-8 && b < 1e-8,
                                "n={n} k={k} {i_set:?} {j_set:?} {i}{j}: {a} {b}"
                            );
                        }
                    }
                }
            }
        }
        // Off the locus the pairing is generically nonzero.
        let prm = Params {
            samples: 2,
            ..Params::with_n(2)
        };
        let mut rng = rng_for(8, "pairzero-off");
        let z = sp(&mut rng);
        let e = AlgElement::generator(2, 0, 0, z);
        let m = left_minor(2, &[0, 1], &[0, 1], z.shift(0, -2), &prm);
        assert!(pairing_vanishing_residual(&m, &e, &m, &e, &prm, &mut rng).unwrap() > 1e-3);
    }

    #[test]
    fn determinant_pairing_vanishes_on_ladder() {
        let n = 3;
        let prm = Params {
            samples: 2,
            ..Params::with_n(n)
        };
        let mut rng = rng_for(12, "detzero");
        let z = sp(&mut rng);
        for k in 0..=1 {
            for m in [-1, 0, 1] {
                for (i, j) in [(0, 0), (1, 1), (2, 2)] {
                    let r = det_pairing_zero_residual(n, (i, j), z, m, k, &prm, &mut rng).unwrap();
                    assert!(r < 1e-8, "k={k} m={m} {i}{j}: {r}");
                }
            }
        }
    }

    #[test]
    fn determinant_pairing_value() {
        for n in [2usize, 3] {
            let prm = Params {
                samples: 3,
                ..Params::with_n(n)
            };
            let mut rng = rng_for(9, "detpair");
            let (z, w) = (sp(&mut rng), sp(&mut rng));
            let r = det_pairing_residual(n, z, w, &prm, &mut rng).unwrap();
            assert!(r < 1e-7, "n={n}: {r}");
            assert!(det_offdiagonal_is_structural_zero(n, 0, 1, z, w, &prm));
        }
    }

    #[test]
    fn degree_one_cobraiding_identity() {
        let n = 2;
        let prm = Params {
            samples: 2,
            ..Params::with_n(n)
        };
        let mut rng = rng_for(10, "cobid");
        for _ in 0..3 {
            let (z, w) = (sp(&mut rng), sp(&mut rng));
            for idx in multi_indices(n, 4) {
                let (l, r) = cobraiding_identity(n, (idx[0], idx[1]), (idx[2], idx[3]), z, w, &prm);
                let res = check_identity(&l, &r, 1, 1, &prm, &mut rng).unwrap();
                assert!(res < 1e-8, "{idx:?}: {res}");
            }
        }
    }

    #[test]
    fn key_identity_at_n2() {
        let n = 2;
        let prm = Params {
            samples: 2,
            ..Params::with_n(n)
        };
        let mut rng = rng_for(11, "keyid");
        let (z, w) = (sp(&mut rng), sp(&mut rng));
        let r = key_identity_residual(n, z, w, 1, &prm, &mut rng).unwrap();
        assert!(r < 1e-7, "{r}");
    }
}
