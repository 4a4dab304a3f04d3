//! Vector-valued difference operators and the evaluation representation.
//!
//! At one evaluation point `w` the generator acts on `V`-valued functions of `λ` by
//!
//! ```text
//! π(e_ij(z))[k, l] = R̃^{jl}_{ik}(λ + ω(k), z/w) T_{−ω(i)}
//! ```
//!
//! (the coefficient of `e_i ⊗ e_k` in `R̃(e_j ⊗ e_l)`), and `c(λ, ρ)` acts by the diagonal
//! operator `diag_K c(λ, λ + ω(K))`. This choice is not written down in the literature;
//! it is selected from a small family of candidates by [`calibrate_convention`], which
//! demands that every defining relation maps to zero.
//!
//! At `k` points the representation is built from the coproduct: `e_ij(z)` acts on
//! `V ⊗ V^{⊗(k−1)}` through `Σ_x π_{w₁}(e_xj) ⊠ π_{w₂…}(e_ix)`, where the first factor is
//! evaluated at `λ + ω(K)` on the block indexed by the remaining legs `K`.

use std::collections::HashMap;
use std::sync::Arc;

use itertools::Itertools;
use nalgebra::DMatrix;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{determinant, AlgElement, BiFn, Gen, SpectralPoint};
use crate::error::{EllError, Result};
use crate::numerics::{sample_dynvar, sample_spectral, DynVar, Params, Weight, C64};
use crate::rmatrix::{digits, max_abs, r_entry};

/// Candidate conventions for the evaluation representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct RepConvention {
    /// Whether the generator indices `(i, j)` sit on the first leg of `R̃`.
    pub leg_first: bool,
    /// Sign `s` of the generator shift `T_{s ω(i)}`; the matrix is evaluated at `λ − s ω(k)`.
    pub shift_sign: i64,
    /// Sign `r` of the right moment rule `c(λ, λ + r ω(K))`.
    pub rho_sign: i64,
}

impl RepConvention {
    pub const CALIBRATED: RepConvention = RepConvention {
        leg_first: true,
        shift_sign: -1,
        rho_sign: 1,
    };

    pub fn family() -> Vec<RepConvention> {
        let mut out = Vec::with_capacity(8);
        for leg_first in [true, false] {
            for shift_sign in [1, -1] {
                for rho_sign in [1, -1] {
                    out.push(RepConvention {
                        leg_first,
                        shift_sign,
                        rho_sign,
                    });
                }
            }
        }
        out
    }
}

/// `(shift, matrix)` pairs of a difference operator evaluated at one `λ`.
pub type OpValue = Vec<(Weight, DMatrix<C64>)>;

fn merge_into(acc: &mut OpValue, w: Weight, m: DMatrix<C64>) {
    if let Some(slot) = acc.iter_mut().find(|(v, _)| *v == w) {
        slot.1 += m;
    } else {
        acc.push((w, m));
    }
}

/// `Σ_i A_i(λ) T_{μ_i}` acting on `V^{⊗k}`-valued functions.
#[derive(Clone)]
pub struct DiffOp {
    pub dim: usize,
    f: Arc<dyn Fn(&DynVar) -> OpValue + Send + Sync>,
}

impl DiffOp {
    pub fn new(dim: usize, f: impl Fn(&DynVar) -> OpValue + Send + Sync + 'static) -> Self {
        DiffOp {
            dim,
            f: Arc::new(f),
        }
    }

    pub fn identity(n: usize, dim: usize) -> Self {
        DiffOp::new(dim, move |_| {
            vec![(Weight::zero(n), DMatrix::identity(dim, dim))]
        })
    }

    /// Merged value at `λ`.
    pub fn eval(&self, lam: &DynVar) -> OpValue {
        let mut out = Vec::new();
        for (w, m) in (self.f)(lam) {
            merge_into(&mut out, w, m);
        }
        out
    }

    pub fn add(&self, o: &DiffOp) -> DiffOp {
        let (a, b) = (self.f.clone(), o.f.clone());
        DiffOp::new(self.dim, move |l| {
            let mut v = a(l);
            v.extend(b(l));
            v
        })
    }

    pub fn scale(&self, s: C64) -> DiffOp {
        let a = self.f.clone();
        DiffOp::new(self.dim, move |l| {
            a(l).into_iter().map(|(w, m)| (w, m * s)).collect()
        })
    }

    pub fn sub(&self, o: &DiffOp) -> DiffOp {
        self.add(&o.scale(C64::new(-1.0, 0.0)))
    }

    /// `(A T_μ)(B T_ν) = A(λ) B(λ + μ) T_{μ+ν}`.
    pub fn compose(&self, o: &DiffOp) -> DiffOp {
        let (a, b) = (self.f.clone(), o.f.clone());
        DiffOp::new(self.dim, move |l| {
            let mut out = Vec::new();
            for (mu, am) in a(l) {
                for (nu, bm) in b(&l.shifted(&mu)) {
                    out.push((mu.add(&nu), &am * bm));
                }
            }
            out
        })
    }

    /// Pointwise inverse of an operator with a single zero shift.
    pub fn inverse(&self) -> DiffOp {
        let a = self.f.clone();
        let dim = self.dim;
        DiffOp::new(dim, move |l| {
            let mut v = Vec::new();
            for (w, m) in a(l) {
                merge_into(&mut v, w, m);
            }
            match v.as_slice() {
                [(w, m)] if w.is_zero() => {
                    let inv = m.clone().try_inverse().unwrap_or_else(|| {
                        DMatrix::from_element(dim, dim, C64::new(f64::NAN, 0.0))
                    });
                    vec![(w.clone(), inv)]
                }
                _ => vec![(
                    Weight::zero(l.n()),
                    DMatrix::from_element(dim, dim, C64::new(f64::NAN, 0.0)),
                )],
            }
        })
    }
}

/// Norm of a merged operator value: the largest entry over all shifts.
pub fn value_norm(v: &OpValue) -> f64 {
    v.iter().map(|(_, m)| max_abs(m)).fold(0.0, f64::max)
}

/// `‖Σ parts‖ / max_i ‖part_i‖` (0 if every part vanishes).
pub fn relative_sum(parts: &[OpValue]) -> f64 {
    let mut acc: OpValue = Vec::new();
    let mut scale: f64 = 0.0;
    for p in parts {
        let v = value_norm(p);
        if v.is_nan() {
            return f64::INFINITY;
        }
        scale = scale.max(v);
        for (w, m) in p {
            merge_into(&mut acc, w.clone(), m.clone());
        }
    }
    let num = value_norm(&acc);
    if scale == 0.0 {
        0.0
    } else if num.is_nan() {
        f64::INFINITY
    } else {
        num / scale
    }
}

/// The evaluation representation at the points `ws`.
#[derive(Clone, Debug)]
pub struct EvalRep {
    pub n: usize,
    pub prm: Params,
    pub conv: RepConvention,
    pub ws: Vec<C64>,
}

impl EvalRep {
    pub fn new(n: usize, prm: &Params, conv: RepConvention, ws: Vec<C64>) -> Self {
        EvalRep {
            n,
            prm: Params { n, ..*prm },
            conv,
            ws,
        }
    }

    pub fn calibrated(n: usize, prm: &Params, ws: Vec<C64>) -> Self {
        EvalRep::new(n, prm, RepConvention::CALIBRATED, ws)
    }

    pub fn k(&self) -> usize {
        self.ws.len()
    }

    pub fn dim(&self) -> usize {
        self.n.pow(self.k() as u32)
    }

    fn gen1(&self, i: usize, j: usize, z: C64, w: C64, lam: &DynVar) -> DMatrix<C64> {
        let n = self.n;
        let s = self.conv.shift_sign;
        let mut m = DMatrix::<C64>::zeros(n, n);
        for k in 0..n {
            let l_s = lam.shifted_by(&Weight::unit(n, k), -s);
            for l in 0..n {
                m[(k, l)] = if self.conv.leg_first {
                    r_entry(i, k, j, l, &l_s, z / w, &self.prm, true)
                } else {
                    r_entry(k, i, l, j, &l_s, z / w, &self.prm, true)
                };
            }
        }
        m
    }

    /// Matrix of `e_ij(z)` on the points `ws`, at `λ`; the shift is `s ω(i)`.
    fn gen_matrix(&self, i: usize, j: usize, z: C64, ws: &[C64], lam: &DynVar) -> DMatrix<C64> {
        let n = self.n;
        if ws.len() == 1 {
            return self.gen1(i, j, z, ws[0], lam);
        }
        let m = ws.len() - 1;
        let d = n.pow(m as u32);
        let r = self.conv.rho_sign;
        let mut out = DMatrix::<C64>::zeros(n * d, n * d);
        let blocks: Vec<Weight> = (0..d)
            .map(|kk| Weight::of_indices(n, &digits(kk, n, m)))
            .collect();
        for x in 0..n {
            let q = self.gen_matrix(i, x, z, &ws[1..], lam);
            // Block-diagonal first-leg factor A_x(λ + r ω(K)) ⊗ E_KK.
            let mut p = DMatrix::<C64>::zeros(n * d, n * d);
            for (kk, wk) in blocks.iter().enumerate() {
                let a = self.gen1(x, j, z, ws[0], &lam.shifted_by(wk, r));
                for k1 in 0..n {
                    for l1 in 0..n {
                        p[(k1 * d + kk, l1 * d + kk)] = a[(k1, l1)];
                    }
                }
            }
            // I_n ⊗ Q.
            let mut iq = DMatrix::<C64>::zeros(n * d, n * d);
            for b in 0..n {
                iq.view_mut((b * d, b * d), (d, d)).copy_from(&q);
            }
            out += p * iq;
        }
        out
    }

    fn gen_shift(&self, i: usize) -> Weight {
        Weight::unit(self.n, i).neg_if(self.conv.shift_sign < 0)
    }

    /// Value of a single word with coefficient at `λ`.
    fn word_value(&self, coeff: &BiFn, word: &[Gen], lam: &DynVar) -> (Weight, DMatrix<C64>) {
        let n = self.n;
        let k = self.k();
        let dim = self.dim();
        let r = self.conv.rho_sign;
        let mut m = DMatrix::<C64>::zeros(dim, dim);
        for kk in 0..dim {
            let wk = Weight::of_indices(n, &digits(kk, n, k));
            m[(kk, kk)] = coeff.eval(lam, &lam.shifted_by(&wk, r));
        }
        let mut mu = Weight::zero(n);
        for g in word {
            let at = lam.shifted(&mu);
            let a = self.gen_matrix(g.i, g.j, g.z.value(&self.prm), &self.ws, &at);
            m *= a;
            mu = mu.add(&self.gen_shift(g.i));
        }
        (mu, m)
    }

    /// Per-term values of an element at `λ`.
    pub fn term_values(&self, a: &AlgElement, lam: &DynVar) -> Vec<OpValue> {
        a.terms
            .iter()
            .map(|t| vec![self.word_value(&t.coeff, &t.word, lam)])
            .collect()
    }

    pub fn represent(&self, a: &AlgElement) -> DiffOp {
        let me = self.clone();
        let a = a.clone();
        DiffOp::new(self.dim(), move |lam| {
            me.term_values(&a, lam).into_iter().flatten().collect()
        })
    }

    /// Relative residual of `a` at `λ`: `‖π(a)‖ / max_t ‖π(term_t)‖`.
    pub fn residual_at(&self, a: &AlgElement, lam: &DynVar) -> f64 {
        relative_sum(&self.term_values(a, lam))
    }
}

trait NegIf {
    fn neg_if(self, flag: bool) -> Self;
}

impl NegIf for Weight {
    fn neg_if(self, flag: bool) -> Self {
        if flag {
            self.neg()
        } else {
            self
        }
    }
}

/// Random evaluation points on the sampling annulus.
pub fn sample_points(k: usize, rng: &mut ChaCha8Rng) -> Vec<C64> {
    (0..k).map(|_| sample_spectral(rng)).collect()
}

/// Largest relative residual of `lhs − rhs` over `trials` random choices of evaluation
/// points and `prm.samples` guarded dynamical points for each, at `k` points.
pub fn check_identity(
    lhs: &AlgElement,
    rhs: &AlgElement,
    k: usize,
    trials: usize,
    prm: &Params,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let diff = lhs.sub(rhs);
    let n = lhs.n;
    let p = Params { n, ..*prm };
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let rep = EvalRep::calibrated(n, &p, sample_points(k, rng));
        for _ in 0..p.samples {
            let lam = sample_dynvar(&p, rng)?;
            worst = worst.max(rep.residual_at(&diff, &lam));
        }
    }
    Ok(worst)
}

/// Relative residual of a sum of operators at `prm.samples` guarded points.
pub fn check_operator_sum(parts: &[DiffOp], prm: &Params, rng: &mut ChaCha8Rng) -> Result<f64> {
    let mut worst: f64 = 0.0;
    for _ in 0..prm.samples {
        let lam = sample_dynvar(prm, rng)?;
        let vals: Vec<OpValue> = parts.iter().map(|p| p.eval(&lam)).collect();
        worst = worst.max(relative_sum(&vals));
    }
    Ok(worst)
}

/// Calibration result: residual per convention and the unique passing one.
#[derive(Clone, Debug, Serialize)]
pub struct Calibration {
    pub residuals: Vec<(RepConvention, f64)>,
    pub chosen: RepConvention,
}

/// Relations used by the calibration: every index pattern at a generic ratio, on the
/// residual locus and on `p^Z`, at `n = 2`.
pub fn calibration_relations(prm: &Params, rng: &mut ChaCha8Rng) -> Vec<AlgElement> {
    let n = 2;
    let z1 = SpectralPoint::fresh(sample_spectral(rng));
    let z2 = SpectralPoint::fresh(sample_spectral(rng));
    let mut out = Vec::new();
    for (a, b) in [
        (z1, z2),
        (z1, z1.shift(1, 2)),
        (z1, z1.shift(0, 2)),
        (z1, z1.shift(-1, 2)),
        (z1, z1.shift(1, 0)),
    ] {
        for (_, rel) in crate::algebra::all_relations(n, a, b, prm) {
            out.push(rel);
        }
    }
    out
}

/// Runs every candidate convention against the defining relations at `n = 2` over 10
/// random spectral instances; exactly one must pass at `1e−8`.
pub fn calibrate_convention(prm: &Params, rng: &mut ChaCha8Rng) -> Result<Calibration> {
    let p = Params { n: 2, ..*prm };
    let instances: Vec<(Vec<AlgElement>, C64, DynVar)> = (0..10)
        .map(|_| {
            let rels = calibration_relations(&p, rng);
            let w = sample_spectral(rng);
            let lam = sample_dynvar(&p, rng)?;
            Ok((rels, w, lam))
        })
        .collect::<Result<_>>()?;
    let mut residuals = Vec::new();
    for conv in RepConvention::family() {
        let mut worst: f64 = 0.0;
        for (rels, w, lam) in &instances {
            let rep = EvalRep::new(2, &p, conv, vec![*w]);
            for rel in rels {
                worst = worst.max(rep.residual_at(rel, lam));
            }
        }
        residuals.push((conv, worst));
    }
    let passing: Vec<RepConvention> = residuals
        .iter()
        .filter(|(_, r)| *r < 1e-8)
        .map(|(c, _)| *c)
        .collect();
    match passing.as_slice() {
        [c] => Ok(Calibration {
            residuals,
            chosen: *c,
        }),
        _ => Err(EllError::Calibration(format!(
            "{} conventions pass the relation suite",
            passing.len()
        ))),
    }
}

/// Residual of `[π(det(w)), π(e_ij(z))]` at the given evaluation points.
pub fn check_centrality(
    n: usize,
    i: usize,
    j: usize,
    z: SpectralPoint,
    w: SpectralPoint,
    ws: Vec<C64>,
    prm: &Params,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let p = Params { n, ..*prm };
    let det = determinant(n, w, &p);
    let e = AlgElement::generator(n, i, j, z);
    let comm = det.mul(&e).sub(&e.mul(&det));
    let rep = EvalRep::calibrated(n, &p, ws);
    let mut worst: f64 = 0.0;
    for _ in 0..p.samples {
        let lam = sample_dynvar(&p, rng)?;
        worst = worst.max(rep.residual_at(&comm, &lam));
    }
    Ok(worst)
}

/// The operator `π(S(e_ij(z)))`, with `det` inverted pointwise.
pub fn antipode_operator(rep: &EvalRep, i: usize, j: usize, z: SpectralPoint) -> DiffOp {
    let (num, u) = crate::algebra::antipode_image(rep.n, i, j, z, &rep.prm);
    let det = rep.represent(&determinant(rep.n, u, &rep.prm));
    det.inverse().compose(&rep.represent(&num))
}

/// Residuals of `Σ_x S(e_ix)e_xj − δ_ij` and `Σ_x e_ix S(e_xj) − δ_ij`.
pub fn check_antipode(
    rep: &EvalRep,
    i: usize,
    j: usize,
    z: SpectralPoint,
    rng: &mut ChaCha8Rng,
) -> Result<(f64, f64)> {
    let n = rep.n;
    let dim = rep.dim();
    let mut first = Vec::new();
    let mut second = Vec::new();
    for x in 0..n {
        let e_xj = rep.represent(&AlgElement::generator(n, x, j, z));
        let e_ix = rep.represent(&AlgElement::generator(n, i, x, z));
        first.push(antipode_operator(rep, i, x, z).compose(&e_xj));
        second.push(e_ix.compose(&antipode_operator(rep, x, j, z)));
    }
    if i == j {
        let id = DiffOp::identity(n, dim).scale(C64::new(-1.0, 0.0));
        first.push(id.clone());
        second.push(id);
    }
    Ok((
        check_operator_sum(&first, &rep.prm, rng)?,
        check_operator_sum(&second, &rep.prm, rng)?,
    ))
}

/// Box product of two single-point operators with zero shift in the first factor:
/// `(P ⊠ Q)_{(k₁,K),(l₁,L)} = P_{k₁l₁}(λ + ω(K)) Q_{KL}(λ)`.
pub fn box_product(n: usize, p1: &DiffOp, q: &DiffOp, q_legs: usize) -> DiffOp {
    let (p1, q) = (p1.clone(), q.clone());
    let d = n.pow(q_legs as u32);
    DiffOp::new(n * d, move |lam| {
        let mut out = Vec::new();
        let blocks: Vec<OpValue> = (0..d)
            .map(|kk| p1.eval(&lam.shifted(&Weight::of_indices(n, &digits(kk, n, q_legs)))))
            .collect();
        for (nu, qm) in q.eval(lam) {
            let mut pm = DMatrix::<C64>::zeros(n * d, n * d);
            for (kk, bv) in blocks.iter().enumerate() {
                for (_, a) in bv {
                    for k1 in 0..n {
                        for l1 in 0..n {
                            pm[(k1 * d + kk, l1 * d + kk)] += a[(k1, l1)];
                        }
                    }
                }
            }
            let mut iq = DMatrix::<C64>::zeros(n * d, n * d);
            for b in 0..n {
                iq.view_mut((b * d, b * d), (d, d)).copy_from(&qm);
            }
            out.push((nu, pm * iq));
        }
        out
    })
}

/// Grouplike residual: `π_{w₁,w₂}(det(z))` against `π_{w₁}(det(z)) ⊠ π_{w₂}(det(z))`.
pub fn check_grouplike(
    n: usize,
    z: SpectralPoint,
    ws: [C64; 2],
    prm: &Params,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let p = Params { n, ..*prm };
    let det = determinant(n, z, &p);
    let two = EvalRep::calibrated(n, &p, ws.to_vec()).represent(&det);
    let a = EvalRep::calibrated(n, &p, vec![ws[0]]).represent(&det);
    let b = EvalRep::calibrated(n, &p, vec![ws[1]]).represent(&det);
    let boxed = box_product(n, &a, &b, 1);
    let mut worst: f64 = 0.0;
    for _ in 0..p.samples {
        let lam = sample_dynvar(&p, rng)?;
        let x = two.eval(&lam);
        let y = boxed.eval(&lam);
        let diff: OpValue = {
            let mut acc = x.clone();
            for (w, m) in y {
                merge_into(&mut acc, w, -m);
            }
            acc
        };
        let scale = value_norm(&x).max(1e-300);
        worst = worst.max(value_norm(&diff) / scale);
    }
    Ok(worst)
}

/// Residual of the antipode applied to the RLL relation at `n` with free indices
/// `(i, j, k, l)`:
///
/// ```text
/// Σ_{a,c} R^{lk}_{ac}(λ − ω(â) − ω(ĉ), z₁/z₂) S(e_ja(z₁)) S(e_ic(z₂))
///   = Σ_{b,d} R^{bd}_{ji}(ρ − ω(ĵ) − ω(î), z₁/z₂) S(e_dk(z₂)) S(e_bl(z₁))
/// ```
pub fn antipode_rll_residual(
    rep: &EvalRep,
    (i, j, k, l): (usize, usize, usize, usize),
    z1: SpectralPoint,
    z2: SpectralPoint,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let n = rep.n;
    let prm = rep.prm;
    let ratio = z1.value(&prm) / z2.value(&prm);
    let hat = |x: usize| Weight::of_indices(n, &crate::efactors::complement(n, &[x]));
    let mut parts = Vec::new();
    for a in 0..n {
        for c in 0..n {
            let w = hat(a).add(&hat(c));
            let coeff = BiFn::of_lambda(move |lam| {
                r_entry(a, c, l, k, &lam.shifted_by(&w, -1), ratio, &prm, false)
            });
            let op = rep.represent(&AlgElement::scalar(n, coeff));
            parts.push(
                op.compose(&antipode_operator(rep, j, a, z1))
                    .compose(&antipode_operator(rep, i, c, z2)),
            );
        }
    }
    let w = hat(j).add(&hat(i));
    for b in 0..n {
        for d in 0..n {
            let w = w.clone();
            let coeff = BiFn::of_rho(move |rho| {
                r_entry(j, i, b, d, &rho.shifted_by(&w, -1), ratio, &prm, false)
            });
            let op = rep
                .represent(&AlgElement::scalar(n, coeff))
                .scale(C64::new(-1.0, 0.0));
            parts.push(
                op.compose(&antipode_operator(rep, d, k, z2))
                    .compose(&antipode_operator(rep, b, l, z1)),
            );
        }
    }
    check_operator_sum(&parts, &prm, rng)
}

/// Residual of `T(det(z)) = det(q^{−2(n−1)} z^{−1})` in the representation `rep`.
pub fn t_map_det_residual(rep: &EvalRep, z: SpectralPoint, rng: &mut ChaCha8Rng) -> Result<f64> {
    let n = rep.n;
    let lhs = crate::algebra::t_map(&determinant(n, z, &rep.prm));
    let rhs = determinant(n, z.inverse().shift(0, -2 * (n as i32 - 1)), &rep.prm);
    let diff = lhs.sub(&rhs);
    let mut worst: f64 = 0.0;
    for _ in 0..rep.prm.samples {
        let lam = sample_dynvar(&rep.prm, rng)?;
        worst = worst.max(rep.residual_at(&diff, &lam));
    }
    Ok(worst)
}

/// Largest residual of `left_minor(I, J) − right_minor(I, J)` over all `I`, `J` of size `d`.
pub fn minors_residual(
    rep: &EvalRep,
    d: usize,
    z: SpectralPoint,
    rng: &mut ChaCha8Rng,
) -> Result<f64> {
    let n = rep.n;
    let sets: Vec<Vec<usize>> = (0..n).combinations(d).collect();
    let lams: Vec<DynVar> = (0..rep.prm.samples)
        .map(|_| sample_dynvar(&rep.prm, rng))
        .collect::<Result<_>>()?;
    let mut worst: f64 = 0.0;
    for i_set in &sets {
        for j_set in &sets {
            let l = crate::algebra::left_minor(n, i_set, j_set, z, &rep.prm);
            let r = crate::algebra::right_minor(n, i_set, j_set, z, &rep.prm);
            let diff = l.sub(&r);
            for lam in &lams {
                worst = worst.max(rep.residual_at(&diff, lam));
            }
        }
    }
    Ok(worst)
}

/// Every index tuple of length `k` over `[0, n)`.
pub fn multi_indices(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    (0..k).map(|_| 0..n).multi_cartesian_product().collect()
}

/// Counts of equal shifts in a merged value; used to check the shift support.
pub fn shift_support(v: &OpValue) -> HashMap<Vec<i64>, usize> {
    let mut m = HashMap::new();
    for (w, _) in v {
        *m.entry(w.canonical()).or_insert(0) += 1;
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{all_relations, rll_matrix_relation};
    use crate::numerics::rng_for;

    #[test]
    fn calibration_selects_a_unique_convention() {
        let prm = Params::with_n(2);
        let mut rng = rng_for(prm.seed, "calibration-test");
        let cal = calibrate_convention(&prm, &mut rng).unwrap();
        assert_eq!(cal.chosen, RepConvention::CALIBRATED);
    }

    #[test]
    fn relations_vanish_at_two_points() {
        let prm = Params::with_n(3);
        let mut rng = rng_for(prm.seed, "rel-k2");
        let z1 = SpectralPoint::fresh(sample_spectral(&mut rng));
        let z2 = SpectralPoint::fresh(sample_spectral(&mut rng));
        let rep = EvalRep::calibrated(3, &prm, sample_points(2, &mut rng));
        let lam = sample_dynvar(&prm, &mut rng).unwrap();
        for (b, c) in [(z2, z1.shift(1, 2)), (z1.shift(0, 2), z1.shift(-1, 0))] {
            for (idx, rel) in all_relations(3, z1, b, &prm)
                .into_iter()
                .chain(all_relations(3, c, z1, &prm))
            {
                let r = rep.residual_at(&rel, &lam);
                assert!(r < 1e-8, "{idx:?}: {r}");
            }
        }
    }

    #[test]
    fn matrix_form_of_rll_vanishes() {
        let prm = Params::with_n(2);
        let mut rng = rng_for(prm.seed, "rll-matrix");
        let z1 = SpectralPoint::fresh(sample_spectral(&mut rng));
        let z2 = SpectralPoint::fresh(sample_spectral(&mut rng));
        let rep = EvalRep::calibrated(2, &prm, sample_points(1, &mut rng));
        let lam = sample_dynvar(&prm, &mut rng).unwrap();
        for idx in multi_indices(2, 4) {
            let rel = rll_matrix_relation(2, idx[0], idx[1], idx[2], idx[3], z1, z2, &prm);
            assert!(rep.residual_at(&rel, &lam) < 1e-9);
        }
    }

    #[test]
    fn determinant_is_shift_free_and_invertible() {
        let prm = Params::with_n(2);
        let mut rng = rng_for(prm.seed, "det-rep");
        let z = SpectralPoint::fresh(sample_spectral(&mut rng));
        let rep = EvalRep::calibrated(2, &prm, sample_points(1, &mut rng));
        let lam = sample_dynvar(&prm, &mut rng).unwrap();
        let v = rep.represent(&determinant(2, z, &prm)).eval(&lam);
        assert_eq!(v.len(), 1);
        assert!(v[0].0.is_zero());
        assert!(v[0].1.clone().try_inverse().is_some());
    }

    #[test]
    fn antipode_at_n2() {
        let prm = Params::with_n(2);
        let mut rng = rng_for(prm.seed, "antipode-test");
        let z = SpectralPoint::fresh(sample_spectral(&mut rng));
        let rep = EvalRep::calibrated(2, &prm, sample_points(1, &mut rng));
        for i in 0..2 {
            for j in 0..2 {
                let (a, b) = check_antipode(&rep, i, j, z, &mut rng).unwrap();
                assert!(a < 1e-7 && b < 1e-7, "{i}{j}: {a} {b}");
            }
        }
    }

    #[test]
    fn antipode_respects_rll_at_n2() {
        let prm = Params::with_n(2);
        let mut rng = rng_for(prm.seed, "sproof4-test");
        let z1 = SpectralPoint::fresh(sample_spectral(&mut rng));
        let z2 = SpectralPoint::fresh(sample_spectral(&mut rng));
        let rep = EvalRep::calibrated(2, &prm, sample_points(1, &mut rng));
        for idx in [(0, 0, 0, 0), (0, 1, 1, 0), (1, 0, 0, 1), (0, 1, 0, 1)] {
            let r = antipode_rll_residual(&rep, idx, z1, z2, &mut rng).unwrap();
            assert!(r < 1e-7, "{idx:?}: {r}");
        }
    }

    #[test]
    fn t_map_of_determinant() {
        for n in [2usize, 3] {
            let prm = Params::with_n(n);
            let mut rng = rng_for(prm.seed, "tdet-test");
            let z = SpectralPoint::fresh(sample_spectral(&mut rng));
            let rep = EvalRep::calibrated(n, &prm, sample_points(1, &mut rng));
            let r = t_map_det_residual(&rep, z, &mut rng).unwrap();
            assert!(r < 1e-8, "n={n}: {r}");
        }
    }

    #[test]
    fn left_and_right_minors_agree() {
        let prm = Params::with_n(3);
        let mut rng = rng_for(prm.seed, "minors-test");
        let z = SpectralPoint::fresh(sample_spectral(&mut rng));
        let rep = EvalRep::calibrated(3, &prm, sample_points(1, &mut rng));
        for d in 1..=3 {
            let r = minors_residual(&rep, d, z, &mut rng).unwrap();
            assert!(r < 1e-8, "d={d}: {r}");
        }
    }

    #[test]
    fn determinant_is_central_and_grouplike() {
        let prm = Params::with_n(2);
        let mut rng = rng_for(prm.seed, "det-test");
        let z = SpectralPoint::fresh(sample_spectral(&mut rng));
        let w = SpectralPoint::fresh(sample_spectral(&mut rng));
        for (i, j) in [(0, 0), (0, 1), (1, 0)] {
            let r = check_centrality(2, i, j, z, w, sample_points(2, &mut rng), &prm, &mut rng)
                .unwrap();
            assert!(r < 1e-8, "{i}{j}: {r}");
        }
        let ws = [sample_spectral(&mut rng), sample_spectral(&mut rng)];
        let g = check_grouplike(2, z, ws, &prm, &mut rng).unwrap();
        assert!(g < 1e-8, "{g}");
    }
}
