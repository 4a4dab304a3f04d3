//! Products of `E`-functions attached to ordered index sets: the normalizations `F_I`,
//! `F^I`, the elliptic signs of a permutation and the Laplace factors `S_l`, `S_r`.
//!
//! Index sets are strictly increasing lists of 0-based indices; permutations are full
//! image vectors on `{0, …, n−1}`.

use crate::numerics::{e_fn, DynVar, Params, C64};

fn one() -> C64 {
    C64::new(1.0, 0.0)
}

/// `F_I(ζ) = ∏_{i<j in I} E(ζ_ij + 1)`.
pub fn f_low(set: &[usize], v: &DynVar, prm: &Params) -> C64 {
    let mut r = one();
    for x in 0..set.len() {
        for y in x + 1..set.len() {
            r *= e_fn(v.ij(set[x], set[y]) + 1.0, prm);
        }
    }
    r
}

/// `F^I(ζ) = ∏_{i<j in I} E(ζ_ij)`.
pub fn f_up(set: &[usize], v: &DynVar, prm: &Params) -> C64 {
    let mut r = one();
    for x in 0..set.len() {
        for y in x + 1..set.len() {
            r *= e_fn(v.ij(set[x], set[y]), prm);
        }
    }
    r
}

/// Lower elliptic sign: `∏ E(ζ_{σiσj}+1)/E(ζ_{σjσi}+1)` over inversions `i<j`, `σi>σj`.
pub fn sgn_low(set: &[usize], sigma: &[usize], v: &DynVar, prm: &Params) -> C64 {
    let mut r = one();
    for x in 0..set.len() {
        for y in x + 1..set.len() {
            let (si, sj) = (sigma[set[x]], sigma[set[y]]);
            if si > sj {
                r *= e_fn(v.ij(si, sj) + 1.0, prm) / e_fn(v.ij(sj, si) + 1.0, prm);
            }
        }
    }
    r
}

/// Upper elliptic sign: `∏ E(ζ_{σjσi})/E(ζ_{σiσj})` over inversions.
pub fn sgn_up(set: &[usize], sigma: &[usize], v: &DynVar, prm: &Params) -> C64 {
    let mut r = one();
    for x in 0..set.len() {
        for y in x + 1..set.len() {
            let (si, sj) = (sigma[set[x]], sigma[set[y]]);
            if si > sj {
                r *= e_fn(v.ij(sj, si), prm) / e_fn(v.ij(si, sj), prm);
            }
        }
    }
    r
}

/// `S_l(I, J; ζ) = ∏_{i∈I, j∈J} E(ζ_ji + 1)`.
pub fn s_left(i_set: &[usize], j_set: &[usize], v: &DynVar, prm: &Params) -> C64 {
    let mut r = one();
    for &i in i_set {
        for &j in j_set {
            r *= e_fn(v.ij(j, i) + 1.0, prm);
        }
    }
    r
}

/// `S_r(I, J; ζ) = ∏_{i∈I, j∈J} E(ζ_ij)^{-1}`.
pub fn s_right(i_set: &[usize], j_set: &[usize], v: &DynVar, prm: &Params) -> C64 {
    let mut r = one();
    for &i in i_set {
        for &j in j_set {
            r /= e_fn(v.ij(i, j), prm);
        }
    }
    r
}

/// All 2-element subsets of `{0, …, n−1}`, in lexicographic order.
pub fn two_subsets(n: usize) -> Vec<Vec<usize>> {
    (0..n)
        .flat_map(|a| (a + 1..n).map(move |b| vec![a, b]))
        .collect()
}

/// Complement of a set in `{0, …, n−1}`.
pub fn complement(n: usize, set: &[usize]) -> Vec<usize> {
    (0..n).filter(|x| !set.contains(x)).collect()
}

/// Residual of `S_l(I, J; ζ + ω(I)) = S_r(J, I; ζ)^{-1}` for disjoint `I`, `J`.
pub fn sl_sr_residual(i_set: &[usize], j_set: &[usize], v: &DynVar, prm: &Params) -> f64 {
    let n = v.n();
    let shifted = v.shifted(&crate::numerics::Weight::of_indices(n, i_set));
    let lhs = s_left(i_set, j_set, &shifted, prm);
    let rhs = one() / s_right(j_set, i_set, v, prm);
    crate::numerics::rel_diff(lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{rng_for, sample_dynvar};
    use crate::perm;

    #[test]
    fn signs_are_trivial_on_identity_and_multiplicative_on_transpositions() {
        let prm = Params::with_n(3);
        let mut rng = rng_for(1, "efactors");
        let v = sample_dynvar(&prm, &mut rng).unwrap();
        let id = perm::identity(3);
        assert_eq!(sgn_low(&[0, 1, 2], &id, &v, &prm), one());
        let s = perm::adjacent(3, 0);
        let expect = e_fn(v.ij(1, 0) + 1.0, &prm) / e_fn(v.ij(0, 1) + 1.0, &prm);
        assert!((sgn_low(&[0, 1, 2], &s, &v, &prm) - expect).norm() < 1e-12);
    }

    #[test]
    fn sl_sr_relation_holds() {
        let prm = Params::with_n(3);
        let mut rng = rng_for(2, "slsr");
        let v = sample_dynvar(&prm, &mut rng).unwrap();
        assert!(sl_sr_residual(&[0], &[1, 2], &v, &prm) < 1e-12);
        assert!(sl_sr_residual(&[0, 2], &[1], &v, &prm) < 1e-12);
    }
}
