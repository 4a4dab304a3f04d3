//! Formal words in the generators `e_ij(z)` of the elliptic FRST algebra, with
//! coefficients in the two copies `f(λ)`, `f(ρ)` of the meromorphic function field kept to
//! the left of each word.
//!
//! No normal form for the algebra is attempted. Two elements are compared only through
//! their images in the evaluation representation (see [`crate::evalrep`]); a passing
//! comparison is strong evidence, not proof, since faithfulness of finite tensor powers of
//! that representation is not known.

use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use itertools::Itertools;

use crate::braid;
use crate::cherednik::che_word;
use crate::efactors::{complement, f_low, f_up, s_left, s_right, sgn_low, sgn_up};
use crate::numerics::{DhElement, DynVar, Params, ScalarFn, Weight, C64};
use crate::perm::{self, Perm};
use crate::rmatrix::{alpha_raw, beta_raw, r_entry, undigits};

static NEXT_BASE: AtomicU64 = AtomicU64::new(1);

/// Spectral parameter `base · p^pexp · q^qexp`, with the base tracked symbolically so that
/// membership of a ratio in `p^Z q^{2m}` is decided exactly. `base_value` always holds
/// the uninverted base.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpectralPoint {
    pub base: u64,
    pub inverted: bool,
    pub base_value: C64,
    pub pexp: i32,
    pub qexp: i32,
}

impl SpectralPoint {
    /// A point on a fresh base symbol.
    pub fn fresh(value: C64) -> Self {
        SpectralPoint {
            base: NEXT_BASE.fetch_add(1, Ordering::Relaxed),
            inverted: false,
            base_value: value,
            pexp: 0,
            qexp: 0,
        }
    }

    pub fn value(&self, prm: &Params) -> C64 {
        let b = if self.inverted {
            C64::new(1.0, 0.0) / self.base_value
        } else {
            self.base_value
        };
        b * prm.pq(self.pexp, self.qexp)
    }

    /// `p^dp q^dq · z`.
    pub fn shift(&self, dp: i32, dq: i32) -> Self {
        SpectralPoint {
            pexp: self.pexp + dp,
            qexp: self.qexp + dq,
            ..*self
        }
    }

    /// `z^{-1}`.
    pub fn inverse(&self) -> Self {
        SpectralPoint {
            base: self.base,
            inverted: !self.inverted,
            base_value: self.base_value,
            pexp: -self.pexp,
            qexp: -self.qexp,
        }
    }

    /// Exponents `(a, b)` with `self / other = p^a q^b`, or `None` for unrelated bases.
    pub fn ratio(&self, other: &SpectralPoint) -> Option<(i32, i32)> {
        if self.base == other.base && self.inverted == other.inverted {
            Some((self.pexp - other.pexp, self.qexp - other.qexp))
        } else {
            None
        }
    }
}

/// How the ratio `z1/z2` of two spectral points sits relative to the singular loci.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RatioClass {
    /// `z1/z2 = p^k` for some integer `k`.
    PPower(i32),
    /// `z2 = p^k q² z1`, the residual locus of the R-matrix.
    Residual(i32),
    Generic,
}

pub fn classify(z1: &SpectralPoint, z2: &SpectralPoint) -> RatioClass {
    match z2.ratio(z1) {
        Some((k, 2)) => RatioClass::Residual(k),
        Some((k, 0)) => RatioClass::PPower(-k),
        _ => RatioClass::Generic,
    }
}

/// Coefficient `c(λ, ρ)`.
#[derive(Clone)]
pub struct BiFn {
    f: Arc<dyn Fn(&DynVar, &DynVar) -> C64 + Send + Sync>,
}

impl fmt::Debug for BiFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BiFn")
    }
}

impl BiFn {
    pub fn new(f: impl Fn(&DynVar, &DynVar) -> C64 + Send + Sync + 'static) -> Self {
        BiFn { f: Arc::new(f) }
    }

    pub fn constant(a: C64) -> Self {
        BiFn::new(move |_, _| a)
    }

    pub fn one() -> Self {
        BiFn::constant(C64::new(1.0, 0.0))
    }

    pub fn of_lambda(g: impl Fn(&DynVar) -> C64 + Send + Sync + 'static) -> Self {
        BiFn::new(move |l, _| g(l))
    }

    pub fn of_rho(g: impl Fn(&DynVar) -> C64 + Send + Sync + 'static) -> Self {
        BiFn::new(move |_, r| g(r))
    }

    pub fn eval(&self, lam: &DynVar, rho: &DynVar) -> C64 {
        (self.f)(lam, rho)
    }

    pub fn mul(&self, o: &BiFn) -> BiFn {
        let (a, b) = (self.f.clone(), o.f.clone());
        BiFn::new(move |l, r| a(l, r) * b(l, r))
    }

    pub fn scale(&self, s: C64) -> BiFn {
        let a = self.f.clone();
        BiFn::new(move |l, r| a(l, r) * s)
    }

    /// `(λ, ρ) ↦ c(g(λ, ρ))` for an argument transformation `g`.
    pub fn remap(
        &self,
        g: impl Fn(&DynVar, &DynVar) -> (DynVar, DynVar) + Send + Sync + 'static,
    ) -> BiFn {
        let a = self.f.clone();
        BiFn::new(move |l, r| {
            let (l2, r2) = g(l, r);
            a(&l2, &r2)
        })
    }
}

/// The generator `e_ij(z)` (0-based indices).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Gen {
    pub i: usize,
    pub j: usize,
    pub z: SpectralPoint,
}

pub fn gen(i: usize, j: usize, z: SpectralPoint) -> Gen {
    Gen { i, j, z }
}

pub type Word = Vec<Gen>;

pub fn row_weight(n: usize, w: &[Gen]) -> Weight {
    Weight::of_indices(n, &w.iter().map(|g| g.i).collect::<Vec<_>>())
}

pub fn col_weight(n: usize, w: &[Gen]) -> Weight {
    Weight::of_indices(n, &w.iter().map(|g| g.j).collect::<Vec<_>>())
}

#[derive(Clone, Debug)]
pub struct Term {
    pub coeff: BiFn,
    pub word: Word,
}

/// Finite sum `Σ c_t(λ, ρ) w_t`.
#[derive(Clone, Debug)]
pub struct AlgElement {
    pub n: usize,
    pub terms: Vec<Term>,
}

impl AlgElement {
    pub fn zero(n: usize) -> Self {
        AlgElement { n, terms: vec![] }
    }

    pub fn one(n: usize) -> Self {
        AlgElement::scalar(n, BiFn::one())
    }

    pub fn scalar(n: usize, c: BiFn) -> Self {
        AlgElement {
            n,
            terms: vec![Term {
                coeff: c,
                word: vec![],
            }],
        }
    }

    pub fn word(n: usize, c: BiFn, word: Word) -> Self {
        AlgElement {
            n,
            terms: vec![Term { coeff: c, word }],
        }
    }

    pub fn generator(n: usize, i: usize, j: usize, z: SpectralPoint) -> Self {
        AlgElement::word(n, BiFn::one(), vec![gen(i, j, z)])
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, o: &AlgElement) -> AlgElement {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        AlgElement { n: self.n, terms }
    }

    pub fn scale(&self, s: C64) -> AlgElement {
        AlgElement {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: t.coeff.scale(s),
                    word: t.word.clone(),
                })
                .collect(),
        }
    }

    pub fn sub(&self, o: &AlgElement) -> AlgElement {
        self.add(&o.scale(C64::new(-1.0, 0.0)))
    }

    /// `c(λ, ρ) · a`.
    pub fn premul(&self, c: &BiFn) -> AlgElement {
        AlgElement {
            n: self.n,
            terms: self
                .terms
                .iter()
                .map(|t| Term {
                    coeff: c.mul(&t.coeff),
                    word: t.word.clone(),
                })
                .collect(),
        }
    }

    /// Product, moving the coefficients of the right factor across the left word:
    /// `c₁w₁ · c₂w₂ = c₁(λ,ρ) c₂(λ − ω(rows w₁), ρ − ω(cols w₁)) w₁w₂`.
    pub fn mul(&self, o: &AlgElement) -> AlgElement {
        let n = self.n;
        let mut terms = Vec::with_capacity(self.terms.len() * o.terms.len());
        for a in &self.terms {
            let rw = row_weight(n, &a.word);
            let cw = col_weight(n, &a.word);
            for b in &o.terms {
                let c2 = if rw.is_zero() && cw.is_zero() {
                    b.coeff.clone()
                } else {
                    let (rw, cw) = (rw.clone(), cw.clone());
                    b.coeff
                        .remap(move |l, r| (l.shifted_by(&rw, -1), r.shifted_by(&cw, -1)))
                };
                let mut word = a.word.clone();
                word.extend_from_slice(&b.word);
                terms.push(Term {
                    coeff: a.coeff.mul(&c2),
                    word,
                });
            }
        }
        AlgElement { n, terms }
    }

    /// Spectral multiset check: all terms carry the same spectral points.
    pub fn is_spectrally_homogeneous(&self, prm: &Params) -> bool {
        let key = |t: &Term| {
            let mut v: Vec<(i64, i64)> = t
                .word
                .iter()
                .map(|g| {
                    let z = g.z.value(prm);
                    ((z.re * 1e9).round() as i64, (z.im * 1e9).round() as i64)
                })
                .collect();
            v.sort_unstable();
            v
        };
        match self.terms.first() {
            None => true,
            Some(t0) => {
                let k0 = key(t0);
                self.terms.iter().all(|t| key(t) == k0)
            }
        }
    }

    /// Bidegree check: every word has the same row and column weights.
    pub fn is_bihomogeneous(&self) -> bool {
        match self.terms.first() {
            None => true,
            Some(t0) => {
                let (r0, c0) = (row_weight(self.n, &t0.word), col_weight(self.n, &t0.word));
                self.terms
                    .iter()
                    .all(|t| row_weight(self.n, &t.word) == r0 && col_weight(self.n, &t.word) == c0)
            }
        }
    }
}

/// One summand `c(λ₁, ρ₂) · w′ ⊗ w″` of a coproduct, where `λ₁` is the left moment of the
/// first tensor factor and `ρ₂` the right moment of the second.
#[derive(Clone, Debug)]
pub struct CoproductTerm {
    pub coeff: BiFn,
    pub left: Word,
    pub right: Word,
}

/// `Δ(e_ij(z)) = Σ_x e_ix(z) ⊗ e_xj(z)` extended multiplicatively; `f(λ) ↦ f(λ) ⊗ 1` and
/// `f(ρ) ↦ 1 ⊗ f(ρ)`.
pub fn coproduct(a: &AlgElement) -> Vec<CoproductTerm> {
    let n = a.n;
    let mut out = Vec::new();
    for t in &a.terms {
        let m = t.word.len();
        for xs in index_tuples(n, m) {
            let left = t
                .word
                .iter()
                .zip(&xs)
                .map(|(g, &x)| gen(g.i, x, g.z))
                .collect();
            let right = t
                .word
                .iter()
                .zip(&xs)
                .map(|(g, &x)| gen(x, g.j, g.z))
                .collect();
            out.push(CoproductTerm {
                coeff: t.coeff.clone(),
                left,
                right,
            });
        }
    }
    out
}

/// Every tuple in `[0, n)^m`, including the empty tuple when `m = 0`.
fn index_tuples(n: usize, m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    (0..m).map(|_| 0..n).multi_cartesian_product().collect()
}

/// Words of `(Δ ⊗ id)Δ` and `(id ⊗ Δ)Δ` for a single word, as index triples per letter.
pub fn iterated_coproduct_words(w: &[Gen], n: usize, left_first: bool) -> Vec<(Word, Word, Word)> {
    let m = w.len();
    let mut out = Vec::new();
    for xs in index_tuples(n, m) {
        for ys in index_tuples(n, m) {
            // (Δ⊗id)Δ: e_ij → Σ_x Δ(e_ix) ⊗ e_xj = e_iy ⊗ e_yx ⊗ e_xj.
            // (id⊗Δ)Δ: e_ij → Σ_x e_ix ⊗ Δ(e_xj) = e_ix ⊗ e_xy ⊗ e_yj.
            let (mut a, mut b, mut c) = (vec![], vec![], vec![]);
            for (k, g) in w.iter().enumerate() {
                let (x, y) = (xs[k], ys[k]);
                if left_first {
                    a.push(gen(g.i, y, g.z));
                    b.push(gen(y, x, g.z));
                    c.push(gen(x, g.j, g.z));
                } else {
                    a.push(gen(g.i, x, g.z));
                    b.push(gen(x, y, g.z));
                    c.push(gen(y, g.j, g.z));
                }
            }
            out.push((a, b, c));
        }
    }
    out
}

/// Counit into `D_h`: `ε(e_ij(z)) = δ_ij T_{−ω(i)}` and `ε(f(λ)) = ε(f(ρ)) = f T_0`.
pub fn counit(a: &AlgElement) -> DhElement {
    let n = a.n;
    let mut out = DhElement::zero(n);
    for t in &a.terms {
        if t.word.iter().any(|g| g.i != g.j) {
            continue;
        }
        let mu = row_weight(n, &t.word).neg();
        // c(λ, ρ) w with ρ moved to the right: ε(w) = T_μ, and f(ρ) w = w f(ρ + ω(cols)).
        let shift = mu.add(&col_weight(n, &t.word));
        let c = t.coeff.clone();
        let f = ScalarFn::new("counit", move |z| c.eval(z, &z.shifted(&shift)));
        out = out.add(&DhElement::single(f, mu));
    }
    out
}

fn lam_fn(prm: Params, g: impl Fn(&DynVar, &Params) -> C64 + Send + Sync + 'static) -> BiFn {
    BiFn::of_lambda(move |l| g(l, &prm))
}

fn rho_fn(prm: Params, g: impl Fn(&DynVar, &Params) -> C64 + Send + Sync + 'static) -> BiFn {
    BiFn::of_rho(move |r| g(r, &prm))
}

fn two(n: usize, c: BiFn, g1: Gen, g2: Gen) -> AlgElement {
    AlgElement::word(n, c, vec![g1, g2])
}

/// The relation attached to `(a, b, c, d)` and `(z1, z2)` written as `LHS − RHS`.
///
/// Generic ratios give the four quadratic families. On the residual locus
/// `z2 = p^k q² z1` the residual relation (or its degenerate forms when `a = c` or `b = d`)
/// is emitted. For `z1/z2 ∈ p^Z` the `α` coefficients vanish identically and the `β`
/// coefficients are replaced by their exact values `q^{2k(l+1)}`.
pub fn rll_relation(
    n: usize,
    a: usize,
    b: usize,
    c: usize,
    d: usize,
    z1: SpectralPoint,
    z2: SpectralPoint,
    prm: &Params,
) -> AlgElement {
    let p = *prm;
    let m1 = C64::new(-1.0, 0.0);
    match classify(&z1, &z2) {
        RatioClass::Residual(k) => {
            let kf = k as f64;
            let q2 = C64::new(p.q * p.q, 0.0);
            if a == c && b == d {
                two(n, BiFn::one(), gen(a, b, z1), gen(a, b, z2)).sub(&two(
                    n,
                    BiFn::one(),
                    gen(a, b, z2),
                    gen(a, b, z1),
                ))
            } else if a == c {
                let coef = rho_fn(p, move |r, p| {
                    let l = r.ij(b, d);
                    -p.qpow(2.0 * kf * l) * crate::numerics::e_fn(l - 1.0, p)
                        / crate::numerics::e_fn(l + 1.0, p)
                });
                two(n, BiFn::one(), gen(a, d, z2), gen(a, b, z1)).add(&two(
                    n,
                    coef,
                    gen(a, b, z2),
                    gen(a, d, z1),
                ))
            } else if b == d {
                let coef = lam_fn(p, move |l, p| -p.qpow(2.0 * kf * l.ij(c, a)));
                two(n, BiFn::one(), gen(a, b, z1), gen(c, b, z2)).add(&two(
                    n,
                    coef,
                    gen(c, b, z1),
                    gen(a, d, z2),
                ))
            } else {
                let al = lam_fn(p, move |l, p| alpha_raw(l.ij(a, c), q2, p));
                let al2 = lam_fn(p, move |l, p| {
                    -alpha_raw(l.ij(a, c), q2, p) * p.qpow(2.0 * kf * l.ij(c, a))
                });
                let ar = rho_fn(p, move |r, p| -alpha_raw(r.ij(b, d), q2, p));
                let br = rho_fn(p, move |r, p| {
                    p.qpow(2.0 * kf * r.ij(b, d)) * beta_raw(r.ij(b, d), q2, p)
                });
                two(n, al, gen(a, b, z1), gen(c, d, z2))
                    .add(&two(n, al2, gen(c, b, z1), gen(a, d, z2)))
                    .add(&two(n, ar, gen(c, d, z2), gen(a, b, z1)))
                    .add(&two(n, br, gen(c, b, z2), gen(a, d, z1)))
            }
        }
        RatioClass::PPower(k) => {
            let kf = k as f64;
            // β(l, p^k) = q^{2k(l+1)}, α(l, p^k) = 0.
            let bexp = move |l: C64, p: &Params| p.qpow(2.0 * kf * (l + 1.0));
            if a == c && b == d {
                two(n, BiFn::one(), gen(a, b, z1), gen(a, b, z2)).sub(&two(
                    n,
                    BiFn::one(),
                    gen(a, b, z2),
                    gen(a, b, z1),
                ))
            } else if a == c {
                two(n, BiFn::one(), gen(a, b, z1), gen(a, d, z2)).add(&two(
                    n,
                    rho_fn(p, move |r, p| -bexp(r.ij(d, b), p)),
                    gen(a, b, z2),
                    gen(a, d, z1),
                ))
            } else if b == d {
                two(
                    n,
                    lam_fn(p, move |l, p| bexp(l.ij(a, c), p)),
                    gen(c, b, z1),
                    gen(a, b, z2),
                )
                .sub(&two(n, BiFn::one(), gen(c, b, z2), gen(a, b, z1)))
            } else {
                two(
                    n,
                    lam_fn(p, move |l, p| bexp(l.ij(a, c), p)),
                    gen(c, b, z1),
                    gen(a, d, z2),
                )
                .add(&two(
                    n,
                    rho_fn(p, move |r, p| -bexp(r.ij(d, b), p)),
                    gen(c, b, z2),
                    gen(a, d, z1),
                ))
            }
        }
        RatioClass::Generic => {
            let r = z1.value(prm) / z2.value(prm);
            if a == c && b == d {
                two(n, BiFn::one(), gen(a, b, z1), gen(a, b, z2)).sub(&two(
                    n,
                    BiFn::one(),
                    gen(a, b, z2),
                    gen(a, b, z1),
                ))
            } else if a == c {
                two(n, BiFn::one(), gen(a, b, z1), gen(a, d, z2))
                    .add(&two(
                        n,
                        rho_fn(p, move |x, p| -alpha_raw(x.ij(b, d), r, p)),
                        gen(a, d, z2),
                        gen(a, b, z1),
                    ))
                    .add(&two(
                        n,
                        rho_fn(p, move |x, p| -beta_raw(x.ij(d, b), r, p)),
                        gen(a, b, z2),
                        gen(a, d, z1),
                    ))
            } else if b == d {
                two(
                    n,
                    lam_fn(p, move |x, p| alpha_raw(x.ij(a, c), r, p)),
                    gen(a, b, z1),
                    gen(c, b, z2),
                )
                .add(&two(
                    n,
                    lam_fn(p, move |x, p| beta_raw(x.ij(a, c), r, p)),
                    gen(c, b, z1),
                    gen(a, b, z2),
                ))
                .add(&two(n, BiFn::constant(m1), gen(c, b, z2), gen(a, b, z1)))
            } else {
                two(
                    n,
                    lam_fn(p, move |x, p| alpha_raw(x.ij(a, c), r, p)),
                    gen(a, b, z1),
                    gen(c, d, z2),
                )
                .add(&two(
                    n,
                    lam_fn(p, move |x, p| beta_raw(x.ij(a, c), r, p)),
                    gen(c, b, z1),
                    gen(a, d, z2),
                ))
                .add(&two(
                    n,
                    rho_fn(p, move |x, p| -alpha_raw(x.ij(b, d), r, p)),
                    gen(c, d, z2),
                    gen(a, b, z1),
                ))
                .add(&two(
                    n,
                    rho_fn(p, move |x, p| -beta_raw(x.ij(d, b), r, p)),
                    gen(c, b, z2),
                    gen(a, d, z1),
                ))
            }
        }
    }
}

/// The full matrix-element form
/// `Σ_{x,y} R_{ac}^{xy}(λ, z1/z2) e_xb(z1) e_yd(z2) − Σ_{x,y} R_{xy}^{bd}(ρ, z1/z2) e_cy(z2) e_ax(z1)`,
/// valid off the pole set of `R`. Structurally vanishing entries are dropped.
pub fn rll_matrix_relation(
    n: usize,
    a: usize,
    b: usize,
    c: usize,
    d: usize,
    z1: SpectralPoint,
    z2: SpectralPoint,
    prm: &Params,
) -> AlgElement {
    let r = z1.value(prm) / z2.value(prm);
    let p = *prm;
    let mut out = AlgElement::zero(n);
    for x in 0..n {
        for y in 0..n {
            // Coefficient of e_a ⊗ e_c in R(e_x ⊗ e_y).
            let allowed_l = (x == a && y == c) || (x == c && y == a);
            if allowed_l && !(x == y && a != x) {
                let coef = lam_fn(p, move |l, p| r_entry(a, c, x, y, l, r, p, false));
                out = out.add(&two(n, coef, gen(x, b, z1), gen(y, d, z2)));
            }
            let allowed_r = (b == x && d == y) || (b == y && d == x);
            if allowed_r && !(b == d && x != b) {
                let coef = rho_fn(p, move |rr, p| -r_entry(x, y, b, d, rr, r, p, false));
                out = out.add(&two(n, coef, gen(c, y, z2), gen(a, x, z1)));
            }
        }
    }
    out
}

/// All relation instances for a pair of spectral points: one per `(a, b, c, d)`.
pub fn all_relations(
    n: usize,
    z1: SpectralPoint,
    z2: SpectralPoint,
    prm: &Params,
) -> Vec<((usize, usize, usize, usize), AlgElement)> {
    let mut out = Vec::new();
    for idx in (0..4).map(|_| 0..n).multi_cartesian_product() {
        let (a, b, c, d) = (idx[0], idx[1], idx[2], idx[3]);
        out.push(((a, b, c, d), rll_relation(n, a, b, c, d, z1, z2, prm)));
    }
    out
}

/// Left minor `ξ_I^J(z)` written through a permutation `σ ∈ S_I`:
/// `Σ_{τ∈S_J} F_J(ρ)/F_I(λ) · sgn_J(τ;ρ)/sgn_I(σ;λ) · e_{σ(i_d)τ(j_d)}(q^{2(d−1)}z) ⋯ e_{σ(i_1)τ(j_1)}(z)`.
pub fn left_minor_with(
    n: usize,
    i_set: &[usize],
    j_set: &[usize],
    sigma: &Perm,
    z: SpectralPoint,
    prm: &Params,
) -> AlgElement {
    if i_set.len() != j_set.len() {
        return AlgElement::zero(n);
    }
    let d = i_set.len();
    let p = *prm;
    let mut out = AlgElement::zero(n);
    for tau in perm::of_subset(n, j_set) {
        let (iv, jv, s, t) = (i_set.to_vec(), j_set.to_vec(), sigma.clone(), tau.clone());
        let coef = BiFn::new(move |l, r| {
            f_low(&jv, r, &p) / f_low(&iv, l, &p) * sgn_low(&jv, &t, r, &p)
                / sgn_low(&iv, &s, l, &p)
        });
        let word = (0..d)
            .rev()
            .map(|m| gen(sigma[i_set[m]], tau[j_set[m]], z.shift(0, 2 * m as i32)))
            .collect();
        out.terms.push(Term { coeff: coef, word });
    }
    out
}

pub fn left_minor(
    n: usize,
    i_set: &[usize],
    j_set: &[usize],
    z: SpectralPoint,
    prm: &Params,
) -> AlgElement {
    left_minor_with(n, i_set, j_set, &perm::identity(n), z, prm)
}

/// Right minor through `τ ∈ S_J`:
/// `Σ_{σ∈S_I} F^J(ρ)/F^I(λ) · sgn^J(τ;ρ)/sgn^I(σ;λ) · e_{σ(i_1)τ(j_1)}(z) ⋯ e_{σ(i_d)τ(j_d)}(q^{2(d−1)}z)`.
pub fn right_minor_with(
    n: usize,
    i_set: &[usize],
    j_set: &[usize],
    tau: &Perm,
    z: SpectralPoint,
    prm: &Params,
) -> AlgElement {
    if i_set.len() != j_set.len() {
        return AlgElement::zero(n);
    }
    let d = i_set.len();
    let p = *prm;
    let mut out = AlgElement::zero(n);
    for sigma in perm::of_subset(n, i_set) {
        let (iv, jv, s, t) = (i_set.to_vec(), j_set.to_vec(), sigma.clone(), tau.clone());
        let coef = BiFn::new(move |l, r| {
            f_up(&jv, r, &p) / f_up(&iv, l, &p) * sgn_up(&jv, &t, r, &p) / sgn_up(&iv, &s, l, &p)
        });
        let word = (0..d)
            .map(|m| gen(sigma[i_set[m]], tau[j_set[m]], z.shift(0, 2 * m as i32)))
            .collect();
        out.terms.push(Term { coeff: coef, word });
    }
    out
}

pub fn right_minor(
    n: usize,
    i_set: &[usize],
    j_set: &[usize],
    z: SpectralPoint,
    prm: &Params,
) -> AlgElement {
    right_minor_with(n, i_set, j_set, &perm::identity(n), z, prm)
}

/// `det(z) = ξ_{[1,n]}^{[1,n]}(z)` in its right-minor form.
pub fn determinant(n: usize, z: SpectralPoint, prm: &Params) -> AlgElement {
    let all: Vec<usize> = (0..n).collect();
    right_minor(n, &all, &all, z, prm)
}

/// Ordered splittings `(A, B)` of `set` into disjoint parts with `#A = a`.
pub fn splittings(set: &[usize], a: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    set.iter()
        .copied()
        .combinations(a)
        .map(|x| {
            let y = set.iter().copied().filter(|s| !x.contains(s)).collect();
            (x, y)
        })
        .collect()
}

/// Both sides of the left Laplace expansion
/// `S_l(I₁,I₂;λ) ξ_I^J(z) = Σ_{J₁⊔J₂=J} S_l(J₁,J₂;ρ) ξ_{I₁}^{J₁}(q^{2#I₂}z) ξ_{I₂}^{J₂}(z)`.
pub fn left_laplace(
    n: usize,
    i1: &[usize],
    i2: &[usize],
    j_set: &[usize],
    z: SpectralPoint,
    prm: &Params,
) -> (AlgElement, AlgElement) {
    let p = *prm;
    let i_set = sorted_union(i1, i2);
    let (a, b) = (i1.to_vec(), i2.to_vec());
    let lhs = left_minor(n, &i_set, j_set, z, prm)
        .premul(&BiFn::of_lambda(move |l| s_left(&a, &b, l, &p)));
    let mut rhs = AlgElement::zero(n);
    for (j1, j2) in splittings(j_set, i1.len()) {
        let first = left_minor(n, i1, &j1, z.shift(0, 2 * i2.len() as i32), prm);
        let second = left_minor(n, i2, &j2, z, prm);
        let c = BiFn::of_rho(move |r| s_left(&j1, &j2, r, &p));
        rhs = rhs.add(&first.mul(&second).premul(&c));
    }
    (lhs, rhs)
}

/// Both sides of the right Laplace expansion
/// `S_r(J₁,J₂;ρ) ξ_I^J(z) = Σ_{I₁⊔I₂=I} S_r(I₁,I₂;λ) ξ_{I₁}^{J₁}(z) ξ_{I₂}^{J₂}(q^{2#J₁}z)`.
pub fn right_laplace(
    n: usize,
    j1: &[usize],
    j2: &[usize],
    i_set: &[usize],
    z: SpectralPoint,
    prm: &Params,
) -> (AlgElement, AlgElement) {
    let p = *prm;
    let j_set = sorted_union(j1, j2);
    let (a, b) = (j1.to_vec(), j2.to_vec());
    let lhs = right_minor(n, i_set, &j_set, z, prm)
        .premul(&BiFn::of_rho(move |r| s_right(&a, &b, r, &p)));
    let mut rhs = AlgElement::zero(n);
    for (i1, i2) in splittings(i_set, j1.len()) {
        let first = right_minor(n, &i1, j1, z, prm);
        let second = right_minor(n, &i2, j2, z.shift(0, 2 * j1.len() as i32), prm);
        let c = BiFn::of_lambda(move |l| s_right(&i1, &i2, l, &p));
        rhs = rhs.add(&first.mul(&second).premul(&c));
    }
    (lhs, rhs)
}

/// `det(w)` expanded by applying the right Laplace expansion twice, with column blocks
/// `J₁ = [0,k)`, `J₂ = {k, k+1}`, `J₃ = [k+2, n)`. Requires `k + 2 ≤ n`.
pub fn det_expansion(n: usize, k: usize, w: SpectralPoint, prm: &Params) -> AlgElement {
    let p = *prm;
    let all: Vec<usize> = (0..n).collect();
    let j1: Vec<usize> = (0..k).collect();
    let j2: Vec<usize> = vec![k, k + 1];
    let j3: Vec<usize> = (k + 2..n).collect();
    let j23 = sorted_union(&j2, &j3);
    let mut out = AlgElement::zero(n);
    for (i1, rest) in splittings(&all, j1.len()) {
        for (i2, i3) in splittings(&rest, 2) {
            let inner = right_minor(n, &i2, &j2, w.shift(0, 2 * k as i32), prm).mul(&right_minor(
                n,
                &i3,
                &j3,
                w.shift(0, 2 * (k as i32 + 2)),
                prm,
            ));
            let (a, b, c, d) = (i2.clone(), i3.clone(), j2.clone(), j3.clone());
            let inner = inner.premul(&BiFn::new(move |l, r| {
                s_right(&a, &b, l, &p) / s_right(&c, &d, r, &p)
            }));
            let (a, b, c, d) = (i1.clone(), rest.clone(), j1.clone(), j23.clone());
            let outer = right_minor(n, &i1, &j1, w, prm).mul(&inner);
            out = out.add(&outer.premul(&BiFn::new(move |l, r| {
                s_right(&a, &b, l, &p) / s_right(&c, &d, r, &p)
            })));
        }
    }
    out
}

fn sorted_union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut v: Vec<usize> = a.iter().chain(b).copied().collect();
    v.sort_unstable();
    v
}

/// `(σ, τ)`: `e_ij(z) ↦ e_{σ(i)τ(j)}(z)`, `f(λ) ↦ f(λ ∘ L_σ)`, `f(ρ) ↦ f(ρ ∘ L_τ)`.
pub fn sn_action(sigma: &Perm, tau: &Perm, a: &AlgElement) -> AlgElement {
    let terms = a
        .terms
        .iter()
        .map(|t| {
            let (s, u) = (sigma.clone(), tau.clone());
            Term {
                coeff: t.coeff.remap(move |l, r| (l.permuted(&s), r.permuted(&u))),
                word: t
                    .word
                    .iter()
                    .map(|g| gen(sigma[g.i], tau[g.j], g.z))
                    .collect(),
            }
        })
        .collect();
    AlgElement { n: a.n, terms }
}

/// The anti-automorphism `T`: reverses words, `e_ij(z) ↦ e_ij(z^{-1})`,
/// `f(λ, ρ) ↦ f(−λ, −ρ)`. With coefficients kept on the left the image of `c·w` is
/// `c(ω_r − λ, ω_c − ρ) · T(w)`, where `ω_r`, `ω_c` are the row and column weights of `w`.
pub fn t_map(a: &AlgElement) -> AlgElement {
    let n = a.n;
    let terms = a
        .terms
        .iter()
        .map(|t| {
            let (wr, wc) = (row_weight(n, &t.word), col_weight(n, &t.word));
            Term {
                coeff: t
                    .coeff
                    .remap(move |l, r| (l.neg().shifted(&wr), r.neg().shifted(&wc))),
                word: t
                    .word
                    .iter()
                    .rev()
                    .map(|g| gen(g.i, g.j, g.z.inverse()))
                    .collect(),
            }
        })
        .collect();
    AlgElement { n, terms }
}

/// Numerator of the antipode image
/// `S(e_ij(z)) = det(u)^{-1} · S_r(ĵ,{j};λ)/S_r(î,{i};ρ) · ξ_ĵ^î(u)` with
/// `u = q^{−2(n−1)} z`, returned together with `u`.
pub fn antipode_image(
    n: usize,
    i: usize,
    j: usize,
    z: SpectralPoint,
    prm: &Params,
) -> (AlgElement, SpectralPoint) {
    let u = z.shift(0, -2 * (n as i32 - 1));
    let (ih, jh) = (complement(n, &[i]), complement(n, &[j]));
    let p = *prm;
    let (ihc, jhc) = (ih.clone(), jh.clone());
    let pre = BiFn::new(move |l, r| s_right(&jhc, &[j], l, &p) / s_right(&ihc, &[i], r, &p));
    (left_minor(n, &jh, &ih, u, prm).premul(&pre), u)
}

/// Matrix element `(row → col)` of both sides of
/// `C_{t_d}(λ, z) L¹(z₁)⋯L^d(z_d) = L^d(z_d)⋯L¹(z₁) C_{t_d}(ρ + h^{≤d}, z)`.
///
/// The Cherednik operator is built on `d` legs; the right-hand coefficient is moved to the
/// left of its word, which absorbs the `h^{≤d}` shift.
pub fn wll_identity(
    n: usize,
    row: &[usize],
    col: &[usize],
    z: &[SpectralPoint],
    prm: &Params,
) -> (AlgElement, AlgElement) {
    let d = z.len();
    let zv: Vec<C64> = z.iter().map(|s| s.value(prm)).collect();
    let p = *prm;
    let td = braid::build_td(d, d).expect("1 <= d");
    let multiset = |v: &[usize]| {
        let mut s = v.to_vec();
        s.sort_unstable();
        s
    };
    let (row_ms, col_ms) = (multiset(row), multiset(col));
    let mut lhs = AlgElement::zero(n);
    let mut rhs = AlgElement::zero(n);
    for y in (0..d).map(|_| 0..n).multi_cartesian_product() {
        let yi = undigits(&y, n);
        if multiset(&y) == row_ms {
            let (zc, w, r) = (zv.clone(), td.clone(), undigits(row, n));
            let coef = BiFn::of_lambda(move |l| {
                che_word(n, &w, l, &zc, &p)
                    .map(|m| m[(r, yi)])
                    .unwrap_or(C64::new(f64::NAN, 0.0))
            });
            let word = (0..d).map(|m| gen(y[m], col[m], z[m])).collect();
            lhs.terms.push(Term { coeff: coef, word });
        }
        if multiset(&y) == col_ms {
            let (zc, w, c) = (zv.clone(), td.clone(), undigits(col, n));
            let coef = BiFn::of_rho(move |r| {
                che_word(n, &w, r, &zc, &p)
                    .map(|m| m[(yi, c)])
                    .unwrap_or(C64::new(f64::NAN, 0.0))
            });
            let word = (0..d).rev().map(|m| gen(row[m], y[m], z[m])).collect();
            rhs.terms.push(Term { coeff: coef, word });
        }
    }
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rng_for, sample_dynvar};

    fn sp(re: f64, im: f64) -> SpectralPoint {
        SpectralPoint::fresh(C64::new(re, im))
    }

    #[test]
    fn ratio_classes_are_exact() {
        let z = sp(0.9, 0.2);
        assert_eq!(classify(&z, &z.shift(1, 2)), RatioClass::Residual(1));
        assert_eq!(classify(&z, &z.shift(-2, 2)), RatioClass::Residual(-2));
        assert_eq!(classify(&z.shift(3, 0), &z), RatioClass::PPower(3));
        assert_eq!(classify(&z, &z.shift(0, -2)), RatioClass::Generic);
        assert_eq!(classify(&z, &sp(0.9, 0.2)), RatioClass::Generic);
        assert_eq!(classify(&z, &z.inverse()), RatioClass::Generic);
        let prm = Params::default();
        let v = z.shift(2, -3).value(&prm);
        assert!((v - C64::new(0.9, 0.2) * prm.p.powi(2) * prm.q.powi(-3)).norm() < 1e-12);
    }

    #[test]
    fn coproduct_of_generator_and_unit() {
        let z = sp(1.0, 0.0);
        let d = coproduct(&AlgElement::generator(3, 0, 2, z));
        assert_eq!(d.len(), 3);
        for (x, t) in d.iter().enumerate() {
            assert_eq!(
                (t.left[0].i, t.left[0].j, t.right[0].i, t.right[0].j),
                (0, x, x, 2)
            );
        }
        let u = coproduct(&AlgElement::one(3));
        assert_eq!(u.len(), 1);
        assert!(u[0].left.is_empty() && u[0].right.is_empty());
    }

    #[test]
    fn coassociativity_on_degree_two_word() {
        let w = vec![gen(0, 1, sp(1.1, 0.0)), gen(1, 0, sp(0.7, 0.3))];
        let key = |t: &(Word, Word, Word)| {
            [&t.0, &t.1, &t.2]
                .iter()
                .flat_map(|w| w.iter().flat_map(|g| [g.i, g.j]))
                .collect::<Vec<_>>()
        };
        let mut a: Vec<_> = iterated_coproduct_words(&w, 2, true)
            .iter()
            .map(key)
            .collect();
        let mut b: Vec<_> = iterated_coproduct_words(&w, 2, false)
            .iter()
            .map(key)
            .collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn counit_values() {
        let prm = Params::with_n(3);
        let mut rng = rng_for(3, "counit");
        let z = sp(1.2, 0.1);
        let e = counit(&AlgElement::generator(3, 1, 1, z));
        assert_eq!(e.terms.len(), 1);
        assert_eq!(e.terms[0].1, Weight::unit(3, 1).neg());
        assert!(counit(&AlgElement::generator(3, 0, 1, z)).terms.is_empty());
        let det = counit(&determinant(3, z, &prm));
        let r = det
            .compare(&DhElement::identity(3), &prm, &mut rng)
            .unwrap();
        assert!(r < 1e-9, "{r}");
    }

    #[test]
    fn minors_shapes() {
        let prm = Params::with_n(2);
        let z = sp(0.8, 0.1);
        let m = left_minor(2, &[1], &[0], z, &prm);
        assert_eq!(m.terms.len(), 1);
        assert_eq!((m.terms[0].word[0].i, m.terms[0].word[0].j), (1, 0));
        assert_eq!(left_minor(2, &[0, 1], &[0, 1], z, &prm).terms.len(), 2);
        assert!(left_minor(3, &[0], &[0, 1], z, &prm).is_zero());
        let d = determinant(3, z, &prm);
        assert_eq!(d.terms.len(), 6);
        assert!(d.is_bihomogeneous());
        assert!(row_weight(3, &d.terms[0].word) == Weight::zero(3));
    }

    #[test]
    fn t_map_is_an_involution() {
        let prm = Params::with_n(2);
        let mut rng = rng_for(4, "tmap");
        let z = sp(0.8, 0.1);
        let a = left_minor(2, &[0, 1], &[0, 1], z, &prm);
        let tt = t_map(&t_map(&a));
        let l = sample_dynvar(&prm, &mut rng).unwrap();
        let r = sample_dynvar(&prm, &mut rng).unwrap();
        for (x, y) in a.terms.iter().zip(&tt.terms) {
            assert!((x.coeff.eval(&l, &r) - y.coeff.eval(&l, &r)).norm() < 1e-12);
            assert_eq!(x.word, y.word);
        }
        let t1 = t_map(&AlgElement::generator(2, 0, 1, z));
        assert_eq!(t1.terms[0].word[0].z, z.inverse());
    }

    #[test]
    fn relation_families_have_expected_sizes() {
        let prm = Params::with_n(3);
        let z1 = sp(0.9, 0.4);
        let z2 = sp(1.1, -0.2);
        assert_eq!(rll_relation(3, 0, 1, 0, 1, z1, z2, &prm).terms.len(), 2);
        assert_eq!(rll_relation(3, 0, 1, 2, 0, z1, z2, &prm).terms.len(), 4);
        assert_eq!(
            rll_relation(3, 0, 1, 2, 0, z1, z1.shift(1, 2), &prm)
                .terms
                .len(),
            4
        );
        assert_eq!(
            rll_relation(3, 0, 1, 0, 2, z1, z1.shift(1, 2), &prm)
                .terms
                .len(),
            2
        );
        assert_eq!(
            rll_relation(3, 0, 1, 2, 0, z1, z1.shift(2, 0), &prm)
                .terms
                .len(),
            2
        );
    }
}
