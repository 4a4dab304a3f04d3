//! The left and right elliptic exterior algebras `Λ` (generators `v_i(z)`) and `Λ′`
//! (generators `w^i(z)`), their normal forms, and the coactions that define minors.
//!
//! A monomial is a word of `(index, spectral point)` letters with a scalar `f(ζ)` on the
//! left. Moving a scalar past a letter uses `f(ζ) x_i(z) = x_i(z) f(ζ + ω(i))`, so a rule
//! applied after a prefix `u` has its coefficient evaluated at `ζ − ω(u)`.
//!
//! Basis words of `Λ` have strictly decreasing indices read left to right
//! (`v_{i_d}(z_d) ⋯ v_{i_1}(z_1)` with `i_1 < ⋯ < i_d`); basis words of `Λ′` have strictly
//! increasing indices. Adjacent letters whose spectral ratio is not in `p^Z q^{±2}`
//! annihilate the word, as do repeated indices and ladders that change `q`-direction
//! (see [`ladder_turns`]). Surviving basis words therefore sit on monotone ladders.

use itertools::Itertools;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{gen, AlgElement, BiFn, SpectralPoint, Term};
use crate::efactors::{f_low, f_up};
use crate::numerics::{e_fn, DynVar, Params, ScalarFn, Weight, C64};

/// Which exterior algebra a word lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// `Λ`, generated by `v_i(z)`.
    Left,
    /// `Λ′`, generated by `w^i(z)`.
    Right,
}

/// Order in which out-of-order adjacent pairs are resolved.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SwapStrategy {
    Leftmost,
    Rightmost,
}

pub type ExtWord = Vec<(usize, SpectralPoint)>;

/// `Σ f_t(ζ) · word_t`.
#[derive(Clone, Debug)]
pub struct ExtElement {
    pub n: usize,
    pub side: Side,
    pub terms: Vec<(ScalarFn, ExtWord)>,
}

fn word_weight(n: usize, w: &[(usize, SpectralPoint)]) -> Weight {
    Weight::of_indices(n, &w.iter().map(|x| x.0).collect::<Vec<_>>())
}

fn words_equal(a: &ExtWord, b: &ExtWord) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.0 == y.0 && x.1 == y.1)
}

impl ExtElement {
    pub fn zero(n: usize, side: Side) -> Self {
        ExtElement {
            n,
            side,
            terms: vec![],
        }
    }

    pub fn monomial(n: usize, side: Side, coeff: ScalarFn, word: ExtWord) -> Self {
        ExtElement {
            n,
            side,
            terms: vec![(coeff, word)],
        }
    }

    pub fn word(n: usize, side: Side, word: ExtWord) -> Self {
        ExtElement::monomial(n, side, ScalarFn::one(), word)
    }

    pub fn add(&self, o: &ExtElement) -> ExtElement {
        let mut terms = self.terms.clone();
        terms.extend(o.terms.iter().cloned());
        ExtElement {
            n: self.n,
            side: self.side,
            terms,
        }
    }

    pub fn scale(&self, s: C64) -> ExtElement {
        ExtElement {
            n: self.n,
            side: self.side,
            terms: self
                .terms
                .iter()
                .map(|(c, w)| (c.scale(s), w.clone()))
                .collect(),
        }
    }

    /// `(f a)(g b) = f(ζ) g(ζ − ω(a)) ab`.
    pub fn mul(&self, o: &ExtElement) -> ExtElement {
        let mut terms = Vec::new();
        for (f, a) in &self.terms {
            for (g, b) in &o.terms {
                let shifted = g.shift(&word_weight(self.n, a).neg());
                let mut w = a.clone();
                w.extend(b.iter().copied());
                terms.push((f.mul(&shifted), w));
            }
        }
        ExtElement {
            n: self.n,
            side: self.side,
            terms,
        }
    }

    /// Normal form with the default (rightmost) strategy, like words merged.
    pub fn normal_form(&self, prm: &Params) -> ExtElement {
        self.normal_form_with(SwapStrategy::Rightmost, prm)
    }

    pub fn normal_form_with(&self, strategy: SwapStrategy, prm: &Params) -> ExtElement {
        let mut out: Vec<(ScalarFn, ExtWord)> = Vec::new();
        for (c, w) in &self.terms {
            if let Some((g, basis)) = normal_form_word(self.n, self.side, w, strategy, prm) {
                let coeff = c.mul(&g);
                match out.iter_mut().find(|(_, b)| words_equal(b, &basis)) {
                    Some(slot) => slot.0 = slot.0.add(&coeff),
                    None => out.push((coeff, basis)),
                }
            }
        }
        ExtElement {
            n: self.n,
            side: self.side,
            terms: out,
        }
    }

    /// Coefficient of a basis word after normal-forming (zero function if absent).
    pub fn coefficient_of(&self, basis: &ExtWord, prm: &Params) -> ScalarFn {
        self.normal_form(prm)
            .terms
            .into_iter()
            .find(|(_, w)| words_equal(w, basis))
            .map(|(c, _)| c)
            .unwrap_or_else(|| ScalarFn::constant(C64::new(0.0, 0.0)))
    }

    /// `σ(f(ζ) x_{i_1}(z_1) ⋯) = f(ζ ∘ L_σ) x_{σ(i_1)}(z_1) ⋯`.
    pub fn permute(&self, sigma: &[usize]) -> ExtElement {
        let terms = self
            .terms
            .iter()
            .map(|(c, w)| {
                let (c, s) = (c.clone(), sigma.to_vec());
                let f = ScalarFn::new("permuted", move |z: &DynVar| c.eval(&z.permuted(&s)));
                (f, w.iter().map(|&(i, z)| (sigma[i], z)).collect())
            })
            .collect();
        ExtElement {
            n: self.n,
            side: self.side,
            terms,
        }
    }
}

/// Whether an adjacent pair of spectral points can be nonzero: `left/right ∈ p^Z q^{±2}`.
fn compatible(a: &SpectralPoint, b: &SpectralPoint) -> bool {
    matches!(a.ratio(b), Some((_, 2)) | Some((_, -2)))
}

/// Swap coefficient `g(ζ)` for the out-of-order pair `x_k(a) x_j(b) = g(ζ) x_j(a) x_k(b)`.
fn swap_coefficient(
    side: Side,
    k: usize,
    j: usize,
    a: SpectralPoint,
    b: SpectralPoint,
    prm: Params,
) -> ScalarFn {
    let (s, qe) = a.ratio(&b).expect("compatible pair");
    let s = s as f64;
    match (side, qe) {
        // v_k(p^s q² z) v_j(z)
        (Side::Left, 2) => ScalarFn::new("left-swap-a", move |z: &DynVar| {
            let x = z.ij(k, j);
            -prm.qpow(2.0 * s * x) * e_fn(x - 1.0, &prm) / e_fn(x + 1.0, &prm)
        }),
        // v_k(z) v_j(p^{s'} q² z) with s' = −s
        (Side::Left, _) => ScalarFn::new("left-swap-b", move |z: &DynVar| {
            prm.qpow(-2.0 * s * z.ij(j, k))
        }),
        // w^k(z) w^j(p^{s'} q² z) with s' = −s
        (Side::Right, -2) => ScalarFn::new("right-swap-a", move |z: &DynVar| {
            -prm.qpow(-2.0 * s * z.ij(k, j))
        }),
        // w^k(p^s q² z) w^j(z)
        (Side::Right, _) => ScalarFn::new("right-swap-b", move |z: &DynVar| {
            let x = z.ij(k, j);
            prm.qpow(-2.0 * s * x) * e_fn(x + 1.0, &prm) / e_fn(x - 1.0, &prm)
        }),
    }
}

fn out_of_order(side: Side, left: usize, right: usize) -> bool {
    match side {
        Side::Left => left < right,
        Side::Right => left > right,
    }
}

/// Whether the spectral ladder of a word turns: two consecutive ratios with `q`-exponents of
/// opposite sign.
///
/// The swap rules alone are not confluent on such words. For a turning triple the two ways
/// of sorting it reach the same basis word with coefficients that differ as functions of
/// `ζ`, so the relations force that word to be zero. Since sorting moves only indices, the
/// ladder of the sorted word is that of the input, and any word with a turn vanishes.
pub fn ladder_turns(word: &ExtWord) -> bool {
    let signs: Vec<i32> = word
        .windows(2)
        .filter_map(|pair| pair[0].1.ratio(&pair[1].1).map(|(_, e)| e.signum()))
        .collect();
    signs.windows(2).any(|s| s[0] != s[1])
}

/// Rewrites one word into `g(ζ) · basis word`, or `None` if it vanishes.
pub fn normal_form_word(
    n: usize,
    side: Side,
    word: &ExtWord,
    strategy: SwapStrategy,
    prm: &Params,
) -> Option<(ScalarFn, ExtWord)> {
    if ladder_turns(word) {
        return None;
    }
    sort_word(n, side, word, strategy, prm)
}

/// The swap and annihilation rules without the turning-ladder rule.
fn sort_word(
    n: usize,
    side: Side,
    word: &ExtWord,
    strategy: SwapStrategy,
    prm: &Params,
) -> Option<(ScalarFn, ExtWord)> {
    for pair in word.windows(2) {
        if pair[0].0 == pair[1].0 || !compatible(&pair[0].1, &pair[1].1) {
            return None;
        }
    }
    let mut w = word.clone();
    let mut coeff = ScalarFn::one();
    loop {
        let positions: Vec<usize> = (0..w.len().saturating_sub(1))
            .filter(|&m| out_of_order(side, w[m].0, w[m + 1].0))
            .collect();
        let m = match strategy {
            SwapStrategy::Leftmost => positions.first(),
            SwapStrategy::Rightmost => positions.last(),
        };
        let Some(&m) = m else { break };
        let (k, a) = w[m];
        let (j, b) = w[m + 1];
        let g = swap_coefficient(side, k, j, a, b, *prm).shift(&word_weight(n, &w[..m]).neg());
        coeff = coeff.mul(&g);
        w[m] = (j, a);
        w[m + 1] = (k, b);
    }
    // Sorting brings repeated indices next to each other.
    if w.windows(2).any(|pair| pair[0].0 == pair[1].0) {
        return None;
    }
    Some((coeff, w))
}

/// `(q^{2(d−1)} z, …, q² z, z)` paired with the indices of `set` in decreasing order.
pub fn left_basis_word(set: &[usize], z: SpectralPoint) -> ExtWord {
    let d = set.len();
    (0..d)
        .rev()
        .map(|m| (set[m], z.shift(0, 2 * m as i32)))
        .collect()
}

/// `(z, q² z, …)` paired with the indices of `set` in increasing order.
pub fn right_basis_word(set: &[usize], z: SpectralPoint) -> ExtWord {
    set.iter()
        .enumerate()
        .map(|(m, &i)| (i, z.shift(0, 2 * m as i32)))
        .collect()
}

/// `v_I(z) = F_I(ζ)^{-1} v_{i_d}(q^{2(d−1)}z) ⋯ v_{i_1}(z)`.
pub fn v_normalized(n: usize, set: &[usize], z: SpectralPoint, prm: &Params) -> ExtElement {
    let (s, p) = (set.to_vec(), *prm);
    let c = ScalarFn::new("1/F_I", move |x: &DynVar| {
        C64::new(1.0, 0.0) / f_low(&s, x, &p)
    });
    ExtElement::monomial(n, Side::Left, c, left_basis_word(set, z))
}

/// `w^I(z) = F^I(ζ) w^{i_1}(z) ⋯ w^{i_d}(q^{2(d−1)}z)`.
pub fn w_normalized(n: usize, set: &[usize], z: SpectralPoint, prm: &Params) -> ExtElement {
    let (s, p) = (set.to_vec(), *prm);
    let c = ScalarFn::new("F^I", move |x: &DynVar| f_up(&s, x, &p));
    ExtElement::monomial(n, Side::Right, c, right_basis_word(set, z))
}

fn sorted_union(a: &[usize], b: &[usize]) -> Vec<usize> {
    a.iter().chain(b).copied().sorted().collect()
}

/// `S_l(I, J; ζ)` from `v_I(q^{2#J}z) v_J(z) = S_l v_{I∪J}(z)`.
pub fn s_left_extracted(
    n: usize,
    i_set: &[usize],
    j_set: &[usize],
    z: SpectralPoint,
    prm: &Params,
) -> ScalarFn {
    let prod = v_normalized(n, i_set, z.shift(0, 2 * j_set.len() as i32), prm)
        .mul(&v_normalized(n, j_set, z, prm));
    let u = sorted_union(i_set, j_set);
    if u.iter().dedup().count() != u.len() {
        return ScalarFn::constant(C64::new(0.0, 0.0));
    }
    let c = prod.coefficient_of(&left_basis_word(&u, z), prm);
    let p = *prm;
    c.mul(&ScalarFn::new("F_IJ", move |x: &DynVar| f_low(&u, x, &p)))
}

/// `S_r(I, J; ζ)` from `w^I(z) w^J(q^{2#I}z) = S_r w^{I∪J}(z)`.
pub fn s_right_extracted(
    n: usize,
    i_set: &[usize],
    j_set: &[usize],
    z: SpectralPoint,
    prm: &Params,
) -> ScalarFn {
    let prod = w_normalized(n, i_set, z, prm).mul(&w_normalized(
        n,
        j_set,
        z.shift(0, 2 * i_set.len() as i32),
        prm,
    ));
    let u = sorted_union(i_set, j_set);
    if u.iter().dedup().count() != u.len() {
        return ScalarFn::constant(C64::new(0.0, 0.0));
    }
    let c = prod.coefficient_of(&right_basis_word(&u, z), prm);
    let p = *prm;
    c.mul(&ScalarFn::new("1/F^IJ", move |x: &DynVar| {
        C64::new(1.0, 0.0) / f_up(&u, x, &p)
    }))
}

/// `Δ_Λ` of a `Λ` element, collected by basis word of the `Λ` leg:
/// `Δ(v_i(z)) = Σ_j e_ij(z) ⊗ v_j(z)`, `Δ(f(ζ)) = f(λ) ⊗ 1`, and a scalar `g(ζ)` produced on
/// the `Λ` leg crosses the tensor sign as `a ⊗ g(ζ) b = a g(ρ) ⊗ b`.
pub fn left_coaction(x: &ExtElement, prm: &Params) -> Vec<(ExtWord, AlgElement)> {
    assert_eq!(x.side, Side::Left);
    let n = x.n;
    let mut out: Vec<(ExtWord, AlgElement)> = Vec::new();
    for (f, word) in &x.terms {
        for ks in (0..word.len())
            .map(|_| 0..n)
            .multi_cartesian_product()
            .chain(word.is_empty().then(Vec::new))
        {
            let lam_word: ExtWord = word.iter().zip(&ks).map(|(&(_, z), &k)| (k, z)).collect();
            let Some((g, basis)) =
                normal_form_word(n, Side::Left, &lam_word, SwapStrategy::Rightmost, prm)
            else {
                continue;
            };
            let cols = Weight::of_indices(n, &ks);
            let f = f.clone();
            let coeff = BiFn::new(move |l, r| f.eval(l) * g.eval(&r.shifted(&cols.neg())));
            let alg_word = word
                .iter()
                .zip(&ks)
                .map(|(&(i, z), &k)| gen(i, k, z))
                .collect();
            let term = AlgElement {
                n,
                terms: vec![Term {
                    coeff,
                    word: alg_word,
                }],
            };
            match out.iter_mut().find(|(b, _)| words_equal(b, &basis)) {
                Some(slot) => slot.1 = slot.1.add(&term),
                None => out.push((basis, term)),
            }
        }
    }
    out
}

/// `Δ_{Λ′}` of a `Λ′` element, collected by basis word of the `Λ′` leg:
/// `Δ(w^j(z)) = Σ_i w^i(z) ⊗ e_ij(z)`, `Δ(f(ζ)) = 1 ⊗ f(ρ)`, and `b g(ζ) ⊗ a = b ⊗ g(λ) a`.
pub fn right_coaction(x: &ExtElement, prm: &Params) -> Vec<(ExtWord, AlgElement)> {
    assert_eq!(x.side, Side::Right);
    let n = x.n;
    let mut out: Vec<(ExtWord, AlgElement)> = Vec::new();
    for (f, word) in &x.terms {
        for is in (0..word.len())
            .map(|_| 0..n)
            .multi_cartesian_product()
            .chain(word.is_empty().then(Vec::new))
        {
            let w_word: ExtWord = word.iter().zip(&is).map(|(&(_, z), &i)| (i, z)).collect();
            let Some((g, basis)) =
                normal_form_word(n, Side::Right, &w_word, SwapStrategy::Rightmost, prm)
            else {
                continue;
            };
            // g(ζ) b = b g(ζ + ω(b)), then b g(ζ) ⊗ a = b ⊗ g(λ) a.
            let rows = Weight::of_indices(n, &is);
            let f = f.clone();
            let coeff = BiFn::new(move |l, r| f.eval(r) * g.eval(&l.shifted(&rows)));
            let alg_word = word
                .iter()
                .zip(&is)
                .map(|(&(j, z), &i)| gen(i, j, z))
                .collect();
            let term = AlgElement {
                n,
                terms: vec![Term {
                    coeff,
                    word: alg_word,
                }],
            };
            match out.iter_mut().find(|(b, _)| words_equal(b, &basis)) {
                Some(slot) => slot.1 = slot.1.add(&term),
                None => out.push((basis, term)),
            }
        }
    }
    out
}

/// The left minor read off from `Δ_Λ(v_I(z)) = Σ_J ξ_I^J(z) ⊗ v_J(z)`.
pub fn coaction_extract_minor(
    n: usize,
    i_set: &[usize],
    j_set: &[usize],
    z: SpectralPoint,
    prm: &Params,
) -> AlgElement {
    if i_set.len() != j_set.len() {
        return AlgElement::zero(n);
    }
    let basis = left_basis_word(j_set, z);
    let Some((_, a)) = left_coaction(&v_normalized(n, i_set, z, prm), prm)
        .into_iter()
        .find(|(b, _)| words_equal(b, &basis))
    else {
        return AlgElement::zero(n);
    };
    // basis = F_J(ζ) v_J, and a ⊗ F_J(ζ) v_J = a F_J(ρ) ⊗ v_J.
    let (jv, p) = (j_set.to_vec(), *prm);
    let cols = Weight::of_indices(n, j_set);
    let fj = BiFn::of_rho(move |r| f_low(&jv, &r.shifted(&cols.neg()), &p));
    AlgElement {
        n,
        terms: a
            .terms
            .into_iter()
            .map(|t| Term {
                coeff: t.coeff.mul(&fj),
                word: t.word,
            })
            .collect(),
    }
}

/// The right minor read off from `Δ_{Λ′}(w^J(z)) = Σ_I w^I(z) ⊗ ξ_I^J(z)`.
pub fn coaction_extract_right_minor(
    n: usize,
    i_set: &[usize],
    j_set: &[usize],
    z: SpectralPoint,
    prm: &Params,
) -> AlgElement {
    if i_set.len() != j_set.len() {
        return AlgElement::zero(n);
    }
    let basis = right_basis_word(i_set, z);
    let Some((_, a)) = right_coaction(&w_normalized(n, j_set, z, prm), prm)
        .into_iter()
        .find(|(b, _)| words_equal(b, &basis))
    else {
        return AlgElement::zero(n);
    };
    // basis = F^I(ζ)^{-1} w^I, and F^I(ζ)^{-1} w^I ⊗ a = w^I ⊗ F^I(λ + ω(I))^{-1} a.
    let (iv, p) = (i_set.to_vec(), *prm);
    let rows = Weight::of_indices(n, i_set);
    let fi = BiFn::of_lambda(move |l| C64::new(1.0, 0.0) / f_up(&iv, &l.shifted(&rows), &p));
    AlgElement {
        n,
        terms: a
            .terms
            .into_iter()
            .map(|t| Term {
                coeff: t.coeff.mul(&fi),
                word: t.word,
            })
            .collect(),
    }
}

/// Whether `x_i(a) x_i(b) = 0` is a defining relation: it is imposed only off the locus
/// `a/b ∈ p^Z q^{−2}` for `Λ` (`a/b ∈ p^Z q^{2}` for `Λ′`). On that locus the coaction
/// image of `x_i(a) x_i(b)` does not vanish, although the normal form still discards the
/// word.
pub fn square_relation_imposed(side: Side, a: &SpectralPoint, b: &SpectralPoint) -> bool {
    let excluded = match side {
        Side::Left => -2,
        Side::Right => 2,
    };
    !matches!(a.ratio(b), Some((_, e)) if e == excluded)
}

/// The two-letter defining relations of `Λ` (or `Λ′`) at the spectral pair `(a, b)`:
/// `x_k(a) x_j(b) − g(ζ) x_j(a) x_k(b)` for every out-of-order pair, and `x_i(a) x_i(b)`
/// where [`square_relation_imposed`] holds.
pub fn quadratic_relations(
    n: usize,
    side: Side,
    a: SpectralPoint,
    b: SpectralPoint,
    prm: &Params,
) -> Vec<ExtElement> {
    let mut out = Vec::new();
    if square_relation_imposed(side, &a, &b) {
        for i in 0..n {
            out.push(ExtElement::word(n, side, vec![(i, a), (i, b)]));
        }
    }
    if !compatible(&a, &b) {
        return out;
    }
    for (k, j) in (0..n)
        .tuple_combinations::<(usize, usize)>()
        .flat_map(|(x, y)| [(x, y), (y, x)])
    {
        if !out_of_order(side, k, j) {
            continue;
        }
        let g = swap_coefficient(side, k, j, a, b, *prm);
        let lhs = ExtElement::word(n, side, vec![(k, a), (j, b)]);
        let rhs = ExtElement::monomial(n, side, g, vec![(j, a), (k, b)]);
        out.push(lhs.add(&rhs.scale(C64::new(-1.0, 0.0))));
    }
    out
}

/// Largest represented residual of the coaction images of the quadratic relations at the
/// spectral pair `(a, b)`: each coefficient of a basis word must vanish.
pub fn comodule_residual(
    n: usize,
    side: Side,
    a: SpectralPoint,
    b: SpectralPoint,
    rep: &crate::evalrep::EvalRep,
    lams: &[DynVar],
    prm: &Params,
) -> f64 {
    let mut worst: f64 = 0.0;
    for rel in quadratic_relations(n, side, a, b, prm) {
        let parts = match side {
            Side::Left => left_coaction(&rel, prm),
            Side::Right => right_coaction(&rel, prm),
        };
        for (_, coeff) in parts {
            for lam in lams {
                worst = worst.max(rep.residual_at(&coeff, lam));
            }
        }
    }
    worst
}

/// Confluence residual of one word: both rewriting strategies must agree on whether the
/// word vanishes, on the basis word reached, and on its coefficient. Disagreement on the
/// first two is reported as an infinite residual.
pub fn confluence_residual(
    n: usize,
    side: Side,
    word: &ExtWord,
    prm: &Params,
    rng: &mut ChaCha8Rng,
) -> crate::error::Result<f64> {
    let a = normal_form_word(n, side, word, SwapStrategy::Leftmost, prm);
    let b = normal_form_word(n, side, word, SwapStrategy::Rightmost, prm);
    match (a, b) {
        (None, None) => Ok(0.0),
        (Some((ga, wa)), Some((gb, wb))) if words_equal(&wa, &wb) => {
            ga.compare(&gb, &Params { n, ..*prm }, rng)
        }
        _ => Ok(f64::INFINITY),
    }
}

/// A random word of length in `[1, max_len]` over `[0, n)` whose spectral points form a
/// ladder `z · p^{a_m} q^{2 b_m}` on one base. Most ladders are monotone in `q` (the words
/// that can survive); one in five steps at random, and the occasional step is a pure
/// `p`-shift.
pub fn random_word(n: usize, max_len: usize, rng: &mut ChaCha8Rng) -> ExtWord {
    let len = rng.gen_range(1..=max_len);
    let base = SpectralPoint::fresh(crate::numerics::sample_spectral(rng));
    let monotone = rng.gen_bool(0.8);
    let up = rng.gen_bool(0.5);
    let mut z = base;
    let mut out = Vec::with_capacity(len);
    for m in 0..len {
        if m > 0 {
            let dq = match (monotone, up) {
                (true, true) => 2,
                (true, false) => -2,
                (false, _) => {
                    if rng.gen_bool(0.5) {
                        2
                    } else {
                        -2
                    }
                }
            };
            let dp = rng.gen_range(-1..=1);
            z = if rng.gen_bool(0.95) {
                z.shift(dp, dq)
            } else {
                z.shift(dp, 0)
            };
        }
        out.push((rng.gen_range(0..n), z));
    }
    out
}
