//! The elliptic dynamical R-matrix, its θ(q²z)-regularized form and the identity checks
//! that live at the level of `V ⊗ V` and `V^{⊗3}`.
//!
//! Index conventions: all indices are 0-based. The basis tensor `e_x ⊗ e_y` of `V ⊗ V`
//! sits at position `n·x + y`; a matrix entry `(row, col)` is the coefficient of the row
//! basis tensor in the image of the column basis tensor.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{EllError, Result};
use crate::numerics::{theta_raw, DynVar, Params, Weight, C64};

fn check_pole(v: C64, prm: &Params, what: impl FnOnce() -> String) -> Result<()> {
    if v.norm() < prm.pole_guard {
        Err(EllError::Pole {
            location: what(),
            magnitude: v.norm(),
        })
    } else {
        Ok(())
    }
}

fn q2(prm: &Params) -> C64 {
    C64::new(prm.q * prm.q, 0.0)
}

/// `α(l, z) = θ(z)θ(q^{2(l+1)}) / (θ(q²z)θ(q^{2l}))` without pole checks.
pub fn alpha_raw(l: C64, z: C64, prm: &Params) -> C64 {
    theta_raw(z, prm) * theta_raw(prm.qpow(2.0 * (l + 1.0)), prm)
        / (theta_raw(q2(prm) * z, prm) * theta_raw(prm.qpow(2.0 * l), prm))
}

/// `β(l, z) = θ(q²)θ(q^{−2l}z) / (θ(q²z)θ(q^{−2l}))` without pole checks.
pub fn beta_raw(l: C64, z: C64, prm: &Params) -> C64 {
    theta_raw(q2(prm), prm) * theta_raw(prm.qpow(-2.0 * l) * z, prm)
        / (theta_raw(q2(prm) * z, prm) * theta_raw(prm.qpow(-2.0 * l), prm))
}

/// `α̃(l, z) = θ(z)θ(q^{2(l+1)}) / θ(q^{2l})`, the limit of `θ(q²w)α(l, w)` as `w → z`.
pub fn alpha_tilde_raw(l: C64, z: C64, prm: &Params) -> C64 {
    theta_raw(z, prm) * theta_raw(prm.qpow(2.0 * (l + 1.0)), prm)
        / theta_raw(prm.qpow(2.0 * l), prm)
}

/// `β̃(l, z) = θ(q²)θ(q^{−2l}z) / θ(q^{−2l})`.
pub fn beta_tilde_raw(l: C64, z: C64, prm: &Params) -> C64 {
    theta_raw(q2(prm), prm) * theta_raw(prm.qpow(-2.0 * l) * z, prm)
        / theta_raw(prm.qpow(-2.0 * l), prm)
}

fn spectral_guard(z: C64, prm: &Params) -> Result<()> {
    if z.norm() == 0.0 {
        return Err(EllError::Domain("spectral argument 0".into()));
    }
    check_pole(theta_raw(q2(prm) * z, prm), prm, || {
        format!("θ(q²z), z = {z}")
    })
}

fn dynamical_guard(l: C64, prm: &Params) -> Result<()> {
    check_pole(theta_raw(prm.qpow(2.0 * l), prm), prm, || {
        format!("θ(q^(2l)), l = {l}")
    })?;
    check_pole(theta_raw(prm.qpow(-2.0 * l), prm), prm, || {
        format!("θ(q^(-2l)), l = {l}")
    })
}

pub fn alpha(l: C64, z: C64, prm: &Params) -> Result<C64> {
    spectral_guard(z, prm)?;
    dynamical_guard(l, prm)?;
    Ok(alpha_raw(l, z, prm))
}

pub fn beta(l: C64, z: C64, prm: &Params) -> Result<C64> {
    spectral_guard(z, prm)?;
    dynamical_guard(l, prm)?;
    Ok(beta_raw(l, z, prm))
}

pub fn alpha_tilde(l: C64, z: C64, prm: &Params) -> Result<C64> {
    dynamical_guard(l, prm)?;
    Ok(alpha_tilde_raw(l, z, prm))
}

pub fn beta_tilde(l: C64, z: C64, prm: &Params) -> Result<C64> {
    dynamical_guard(l, prm)?;
    Ok(beta_tilde_raw(l, z, prm))
}

/// Coefficient `R^{ab}_{xy}(λ, z)` of `e_x ⊗ e_y` in `R(λ, z)(e_a ⊗ e_b)`; with
/// `regularized` it is the corresponding entry of `R̃ = θ(q²z)R`.
///
/// Structural zeros are returned as exact zeros.
pub fn r_entry(
    x: usize,
    y: usize,
    a: usize,
    b: usize,
    lam: &DynVar,
    z: C64,
    prm: &Params,
    regularized: bool,
) -> C64 {
    if a == b {
        if x == a && y == b {
            return if regularized {
                theta_raw(q2(prm) * z, prm)
            } else {
                C64::new(1.0, 0.0)
            };
        }
        return C64::new(0.0, 0.0);
    }
    let l = lam.ij(x, y);
    if x == a && y == b {
        if regularized {
            alpha_tilde_raw(l, z, prm)
        } else {
            alpha_raw(l, z, prm)
        }
    } else if x == b && y == a {
        if regularized {
            beta_tilde_raw(l, z, prm)
        } else {
            beta_raw(l, z, prm)
        }
    } else {
        C64::new(0.0, 0.0)
    }
}

/// Value of the R-matrix (or its regularization) as an `n² × n²` matrix.
#[derive(Clone, Debug)]
pub struct RMatrixVal {
    pub n: usize,
    pub m: DMatrix<C64>,
}

impl RMatrixVal {
    pub fn entry(&self, x: usize, y: usize, a: usize, b: usize) -> C64 {
        self.m[(self.n * x + y, self.n * a + b)]
    }

    /// `R^{(21)} = P R P`.
    pub fn flipped(&self) -> RMatrixVal {
        let p = flip(self.n);
        RMatrixVal {
            n: self.n,
            m: &p * &self.m * &p,
        }
    }

    /// True when every entry outside the pattern `{x, y} = {a, b}` is exactly zero.
    pub fn respects_weight_pattern(&self) -> bool {
        let n = self.n;
        for x in 0..n {
            for y in 0..n {
                for a in 0..n {
                    for b in 0..n {
                        let allowed = (x == a && y == b) || (x == b && y == a);
                        if !allowed && self.entry(x, y, a, b) != C64::new(0.0, 0.0) {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }
}

fn build(lam: &DynVar, z: C64, prm: &Params, regularized: bool) -> RMatrixVal {
    let n = lam.n();
    let mut m = DMatrix::<C64>::zeros(n * n, n * n);
    for a in 0..n {
        for b in 0..n {
            for (x, y) in [(a, b), (b, a)] {
                m[(n * x + y, n * a + b)] = r_entry(x, y, a, b, lam, z, prm, regularized);
            }
        }
    }
    RMatrixVal { n, m }
}

fn lambda_guard(lam: &DynVar, prm: &Params) -> Result<()> {
    for i in 0..lam.n() {
        for j in 0..lam.n() {
            if i != j {
                dynamical_guard(lam.ij(i, j), prm)?;
            }
        }
    }
    Ok(())
}

pub fn r_matrix(lam: &DynVar, z: C64, prm: &Params) -> Result<RMatrixVal> {
    spectral_guard(z, prm)?;
    lambda_guard(lam, prm)?;
    Ok(build(lam, z, prm, false))
}

pub fn r_tilde(lam: &DynVar, z: C64, prm: &Params) -> Result<RMatrixVal> {
    if z.norm() == 0.0 {
        return Err(EllError::Domain("spectral argument 0".into()));
    }
    lambda_guard(lam, prm)?;
    Ok(build(lam, z, prm, true))
}

/// The flip `P(e_a ⊗ e_b) = e_b ⊗ e_a`.
pub fn flip(n: usize) -> DMatrix<C64> {
    let mut p = DMatrix::<C64>::zeros(n * n, n * n);
    for a in 0..n {
        for b in 0..n {
            p[(n * b + a, n * a + b)] = C64::new(1.0, 0.0);
        }
    }
    p
}

/// Multi-index of a basis tensor of `V^{⊗k}`; leg 0 is the most significant digit.
pub fn digits(mut idx: usize, n: usize, k: usize) -> Vec<usize> {
    let mut d = vec![0; k];
    for slot in (0..k).rev() {
        d[slot] = idx % n;
        idx /= n;
    }
    d
}

pub fn undigits(d: &[usize], n: usize) -> usize {
    d.iter().fold(0, |acc, &x| acc * n + x)
}

/// `R(λ − Σ_{l∈shift_legs} h^l, z)` acting on legs `(i, j)` of `V^{⊗k}`.
///
/// The dynamical shift is read off from the basis tensor the operator acts on; the legs in
/// `shift_legs` are untouched by the operator so input and output agree there.
pub fn r_on_legs(
    n: usize,
    k: usize,
    legs: (usize, usize),
    lam: &DynVar,
    z: C64,
    shift_legs: &[usize],
    prm: &Params,
    regularized: bool,
) -> DMatrix<C64> {
    let dim = n.pow(k as u32);
    let mut m = DMatrix::<C64>::zeros(dim, dim);
    let (li, lj) = legs;
    for col in 0..dim {
        let a = digits(col, n, k);
        let idx: Vec<usize> = shift_legs.iter().map(|&l| a[l]).collect();
        let lam_s = lam.shifted_by(&Weight::of_indices(n, &idx), -1);
        let (ai, aj) = (a[li], a[lj]);
        for (xi, xj) in [(ai, aj), (aj, ai)] {
            if ai == aj && xi != ai {
                continue;
            }
            let mut x = a.clone();
            x[li] = xi;
            x[lj] = xj;
            let v = r_entry(xi, xj, ai, aj, &lam_s, z, prm, regularized);
            m[(undigits(&x, n), col)] = v;
            if ai == aj {
                break;
            }
        }
    }
    m
}

pub fn max_abs(m: &DMatrix<C64>) -> f64 {
    m.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// Residual of the dynamical Yang–Baxter equation
/// `R²³(λ, z₂/z₃) R¹³(λ−h², z₁/z₃) R¹²(λ, z₁/z₂) = R¹²(λ−h³, z₁/z₂) R¹³(λ, z₁/z₃) R²³(λ−h¹, z₂/z₃)`,
/// as `‖LHS − RHS‖_max / max(1, ‖LHS‖_max)`.
pub fn qdybe_residual(lam: &DynVar, z1: C64, z2: C64, z3: C64, prm: &Params) -> Result<f64> {
    for r in [z1 / z2, z1 / z3, z2 / z3] {
        spectral_guard(r, prm)?;
    }
    lambda_guard(lam, prm)?;
    let n = lam.n();
    let r = |legs, z, shift: &[usize]| r_on_legs(n, 3, legs, lam, z, shift, prm, false);
    let lhs = r((1, 2), z2 / z3, &[]) * r((0, 2), z1 / z3, &[1]) * r((0, 1), z1 / z2, &[]);
    let rhs = r((0, 1), z1 / z2, &[2]) * r((0, 2), z1 / z3, &[]) * r((1, 2), z2 / z3, &[0]);
    Ok(max_abs(&(&lhs - &rhs)) / max_abs(&lhs).max(1.0))
}

/// Residual of `R(λ, z) R(λ, z^{−1})^{(21)} = Id`.
pub fn unitarity_residual(lam: &DynVar, z: C64, prm: &Params) -> Result<f64> {
    let a = r_matrix(lam, z, prm)?;
    let b = r_matrix(lam, z.inv(), prm)?.flipped();
    let prod = &a.m * &b.m;
    let id = DMatrix::<C64>::identity(prod.nrows(), prod.ncols());
    Ok(max_abs(&(prod - id)))
}

/// First Jacobi theta function `θ₁(x; τ) = −Σ_{j∈Z+1/2} exp(πi j²τ + 2πi j(x + 1/2))`,
/// summed directly from its series.
pub fn theta1(x: C64, tau: C64) -> Result<C64> {
    let i_pi = Complex64::new(0.0, std::f64::consts::PI);
    let term = |j: f64| (i_pi * (tau * (j * j)) + i_pi * 2.0 * j * (x + 0.5)).exp();
    let mut sum = C64::new(0.0, 0.0);
    let mut m: i64 = 0;
    loop {
        let jp = m as f64 + 0.5;
        let jm = -(m as f64) - 0.5;
        let (tp, tm) = (term(jp), term(jm));
        sum += tp + tm;
        if m > 3 && tp.norm().max(tm.norm()) < 1e-18 * sum.norm().max(1e-300) {
            return Ok(-sum);
        }
        m += 1;
        if m > 400 {
            return Err(EllError::Limit(format!(
                "theta1 series did not converge at x = {x}, tau = {tau}"
            )));
        }
    }
}

/// `(τ, γ)` with `p = e^{πiτ}`, `q = e^{πiγ}` for real `p, q ∈ (0,1)`.
pub fn additive_parameters(prm: &Params) -> (C64, C64) {
    let pi = std::f64::consts::PI;
    (
        C64::new(0.0, -prm.p.ln() / pi),
        C64::new(0.0, -prm.q.ln() / pi),
    )
}

/// Felder's `α₁(λ, x; τ, γ)`.
pub fn alpha1(l: C64, x: C64, tau: C64, gamma: C64) -> Result<C64> {
    Ok(theta1(x, tau)? * theta1(l + gamma, tau)? / (theta1(x - gamma, tau)? * theta1(l, tau)?))
}

/// Felder's `β₁(λ, x; τ, γ)`.
pub fn beta1(l: C64, x: C64, tau: C64, gamma: C64) -> Result<C64> {
    Ok(-(theta1(x + l, tau)? * theta1(gamma, tau)?) / (theta1(x - gamma, tau)? * theta1(l, tau)?))
}

/// Felder's R-matrix `R₁(γλ, −x; τ/2, γ)` assembled entrywise.
pub fn felder_r_matrix(lam: &DynVar, x: C64, prm: &Params) -> Result<RMatrixVal> {
    let (tau, gamma) = additive_parameters(prm);
    let n = lam.n();
    let mut m = DMatrix::<C64>::zeros(n * n, n * n);
    for a in 0..n {
        for b in 0..n {
            if a == b {
                m[(n * a + a, n * a + a)] = C64::new(1.0, 0.0);
                continue;
            }
            m[(n * a + b, n * a + b)] = alpha1(gamma * lam.ij(a, b), -x, tau / 2.0, gamma)?;
            m[(n * b + a, n * a + b)] = beta1(gamma * lam.ij(b, a), -x, tau / 2.0, gamma)?;
        }
    }
    Ok(RMatrixVal { n, m })
}

/// Largest entry difference between `R(λ, e^{2πix})` and Felder's `R₁(γλ, −x; τ/2, γ)`.
pub fn felder_crosscheck(lam: &DynVar, x: C64, prm: &Params) -> Result<f64> {
    let z = (C64::new(0.0, 2.0 * std::f64::consts::PI) * x).exp();
    let r = r_matrix(lam, z, prm)?;
    let r1 = felder_r_matrix(lam, x, prm)?;
    Ok(max_abs(&(&r.m - &r1.m)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{e_fn, rel_diff, rng_for, sample_dynvar, sample_spectral};

    fn prm(n: usize) -> Params {
        Params::with_n(n)
    }

    #[test]
    fn alpha_beta_special_values() {
        let p = prm(2);
        let mut rng = rng_for(11, "ab");
        let q2 = C64::new(p.q * p.q, 0.0);
        for _ in 0..10 {
            let lam = sample_dynvar(&p, &mut rng).unwrap();
            let l = lam.ij(0, 1);
            let z = sample_spectral(&mut rng);
            assert!(alpha(l, C64::new(1.0, 0.0), &p).unwrap().norm() < 1e-14);
            assert!(rel_diff(beta(l, C64::new(1.0, 0.0), &p).unwrap(), C64::new(1.0, 0.0)) < 1e-12);
            assert!(rel_diff(alpha_raw(l, q2, &p), beta_raw(-l, q2, &p)) < 1e-10);
            for k in -2..=2 {
                let pk = p.p.powi(k);
                assert!(
                    rel_diff(
                        alpha_raw(l, z * pk, &p),
                        alpha_raw(l, z, &p) * p.q.powi(2 * k)
                    ) < 1e-9
                );
                let f = p.qpow((l + 1.0) * (2.0 * k as f64));
                assert!(rel_diff(beta_raw(l, z * pk, &p), beta_raw(l, z, &p) * f) < 1e-9);
            }
            let lhs = alpha_raw(l, z, &p) * alpha_raw(-l, z, &p)
                - beta_raw(l, z, &p) * beta_raw(-l, z, &p);
            let rhs = q2 * theta_raw(z / q2, &p) / theta_raw(q2 * z, &p);
            assert!(rel_diff(lhs, rhs) < 1e-9);
            assert!(
                rel_diff(
                    theta_raw(q2 * z, &p) * alpha_raw(l, z, &p),
                    alpha_tilde_raw(l, z, &p)
                ) < 1e-12
            );
        }
    }

    #[test]
    fn alpha_pole_is_reported() {
        let p = prm(2);
        let z = C64::new(1.0 / (p.q * p.q), 0.0);
        assert!(matches!(
            alpha(C64::new(0.3, 0.1), z, &p),
            Err(EllError::Pole { .. })
        ));
    }

    #[test]
    fn r_at_one_is_flip() {
        let p = prm(3);
        let lam = sample_dynvar(&p, &mut rng_for(1, "flip")).unwrap();
        let r = r_matrix(&lam, C64::new(1.0, 0.0), &p).unwrap();
        assert!(max_abs(&(&r.m - flip(3))) < 1e-12);
        assert!(r.respects_weight_pattern());
    }

    #[test]
    fn r_tilde_at_p_powers() {
        let p = prm(3);
        let lam = sample_dynvar(&p, &mut rng_for(2, "pz")).unwrap();
        let n = 3;
        for k in -1..=2 {
            let z = C64::new(p.p.powi(k), 0.0);
            let r = r_tilde(&lam, z, &p).unwrap();
            let t = theta_raw(z * p.q * p.q, &p);
            for a in 0..n {
                for b in 0..n {
                    let d = if a == b { 1.0 } else { 0.0 };
                    let expect = t * p.qpow((lam.ij(b, a) + 1.0 - d) * (2.0 * k as f64));
                    assert!(rel_diff(r.entry(b, a, a, b), expect) < 1e-9);
                    if a != b {
                        assert!(r.entry(a, b, a, b).norm() < 1e-12 * t.norm().max(1.0));
                    }
                }
            }
        }
    }

    #[test]
    fn qdybe_and_unitarity_small() {
        for n in [2, 3] {
            let p = prm(n);
            let mut rng = rng_for(5, "qdybe");
            for _ in 0..4 {
                let lam = sample_dynvar(&p, &mut rng).unwrap();
                let zs: Vec<C64> = (0..3).map(|_| sample_spectral(&mut rng)).collect();
                assert!(qdybe_residual(&lam, zs[0], zs[1], zs[2], &p).unwrap() < 1e-9);
                assert!(unitarity_residual(&lam, zs[0], &p).unwrap() < 1e-9);
            }
        }
    }

    #[test]
    fn qdybe_at_equal_spectral_values() {
        let p = prm(2);
        let lam = sample_dynvar(&p, &mut rng_for(9, "eq")).unwrap();
        let z = C64::new(0.8, 0.3);
        assert!(qdybe_residual(&lam, z, z, z, &p).unwrap() < 1e-10);
    }

    #[test]
    fn felder_agrees() {
        let p = prm(2);
        let mut rng = rng_for(6, "felder");
        for _ in 0..3 {
            let lam = sample_dynvar(&p, &mut rng).unwrap();
            let x = C64::new(0.13, 0.02);
            assert!(felder_crosscheck(&lam, x, &p).unwrap() < 1e-8);
        }
    }

    #[test]
    fn e_form_of_alpha_tilde_at_q_minus_two() {
        // θ(q^{-2}) α-numerator rewritten through E: α̃(l, q^{-2}) = E(1)E(l+1)/E(l).
        let p = prm(2);
        let l = C64::new(0.37, 0.21);
        let z = C64::new(1.0 / (p.q * p.q), 0.0);
        let one = C64::new(1.0, 0.0);
        let e = |s| e_fn(s, &p);
        assert!(rel_diff(alpha_tilde_raw(l, z, &p), e(one) * e(l + 1.0) / e(l)) < 1e-10);
        assert!(rel_diff(beta_tilde_raw(l, z, &p), -e(one) * e(l + 1.0) / e(l)) < 1e-10);
    }
}
