//! Named verification suites. A suite is a list of checks; each check computes one
//! residual against one tolerance with its own RNG stream, derived from the seed and the
//! check id, so results do not depend on scheduling.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use itertools::Itertools;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::algebra::{
    all_relations, det_expansion, determinant, gen, left_laplace, left_minor, left_minor_with,
    right_laplace, right_minor, right_minor_with, splittings, Gen, SpectralPoint,
};
use crate::error::{EllError, Result};
use crate::evalrep::{
    antipode_rll_residual, calibrate_convention, check_antipode, check_centrality, check_grouplike,
    check_identity, minors_residual, multi_indices, sample_points, t_map_det_residual, EvalRep,
};
use crate::exterior::{self, Side, SwapStrategy};
use crate::numerics::{
    nan_max, rel_diff, rng_for, sample_dynvar, sample_spectral, theta_raw, theta_series_oracle,
    DynVar, Params, C64,
};
use crate::{braid, cherednik, cobraiding, efactors, perm, rmatrix};

/// Every suite name accepted by [`run_suite`], in the order `all` runs them.
pub const SUITES: [&str; 10] = [
    "theta",
    "rmatrix",
    "relations",
    "exterior",
    "minors",
    "cherednik",
    "laplace",
    "cobraiding",
    "determinant",
    "antipode",
];

/// Tolerances are quoted for `eq_tol = 1e−8` and scale linearly with `eq_tol`.
const REFERENCE_EQ_TOL: f64 = 1e-8;

/// Outcome of one check.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct CheckRecord {
    pub id: String,
    pub anchor: String,
    /// `None` when the check raised an error or produced a non-finite residual.
    pub residual: Option<f64>,
    pub tol: f64,
    pub pass: bool,
    pub ms: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// Results of one suite run.
#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct SuiteReport {
    pub suite: String,
    pub params: Params,
    pub n_override: Option<usize>,
    pub checks: Vec<CheckRecord>,
    pub pass: bool,
}

/// Parameters of a run: the numerical parameters plus an optional restriction of every
/// size loop to a single `n`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SuiteConfig {
    pub params: Params,
    pub n_override: Option<usize>,
    /// Worker threads; `0` uses the available parallelism.
    pub threads: usize,
}


impl SuiteConfig {
    fn sizes(&self, default: &[usize]) -> Vec<usize> {
        match self.n_override {
            Some(n) => vec![n],
            None => default.to_vec(),
        }
    }

    /// Whether a check written for one fixed size runs under the current override.
    fn includes(&self, n: usize) -> bool {
        self.n_override.is_none_or(|m| m == n)
    }

    fn tol(&self, reference: f64) -> f64 {
        reference * self.params.eq_tol / REFERENCE_EQ_TOL
    }
}

type CheckFn = Box<dyn FnOnce(&mut ChaCha8Rng) -> Result<f64> + Send>;

struct Check {
    id: String,
    anchor: &'static str,
    tol: f64,
    run: CheckFn,
}

#[derive(Default)]
struct Plan {
    checks: Vec<Check>,
}

impl Plan {
    fn add(
        &mut self,
        id: impl Into<String>,
        anchor: &'static str,
        tol: f64,
        run: impl FnOnce(&mut ChaCha8Rng) -> Result<f64> + Send + 'static,
    ) {
        self.checks.push(Check {
            id: id.into(),
            anchor,
            tol,
            run: Box::new(run),
        });
    }
}

/// Runs the named suite (or `all`) and collects the per-check records.
pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport> {
    cfg.params.validate()?;
    if let Some(n) = cfg.n_override {
        if !(2..=4).contains(&n) {
            return Err(EllError::Config(format!(
                "n must lie in 2..=4 for the suites, got {n}"
            )));
        }
    }
    let names: Vec<&str> = match name {
        "all" => SUITES.to_vec(),
        s if SUITES.contains(&s) => vec![s],
        other => return Err(EllError::UnknownSuite(other.to_string())),
    };
    let mut plan = Plan::default();
    for s in names {
        build(s, cfg, &mut plan);
    }
    let checks = execute(plan, cfg);
    let pass = checks.iter().all(|c| c.pass);
    Ok(SuiteReport {
        suite: name.to_string(),
        params: cfg.params,
        n_override: cfg.n_override,
        checks,
        pass,
    })
}

fn build(name: &str, cfg: &SuiteConfig, plan: &mut Plan) {
    match name {
        "theta" => theta_suite(cfg, plan),
        "rmatrix" => rmatrix_suite(cfg, plan),
        "relations" => relations_suite(cfg, plan),
        "exterior" => exterior_suite(cfg, plan),
        "minors" => minors_suite(cfg, plan),
        "cherednik" => cherednik_suite(cfg, plan),
        "laplace" => laplace_suite(cfg, plan),
        "cobraiding" => cobraiding_suite(cfg, plan),
        "determinant" => determinant_suite(cfg, plan),
        "antipode" => antipode_suite(cfg, plan),
        _ => unreachable!("suite names are validated by run_suite"),
    }
}

fn execute(plan: Plan, cfg: &SuiteConfig) -> Vec<CheckRecord> {
    let seed = cfg.params.seed;
    let total = plan.checks.len();
    let slots: Vec<Mutex<Option<Check>>> = plan
        .checks
        .into_iter()
        .map(|c| Mutex::new(Some(c)))
        .collect();
    let results: Vec<Mutex<Option<CheckRecord>>> = (0..total).map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    let workers = match cfg.threads {
        0 => std::thread::available_parallelism()
            .map(|x| x.get())
            .unwrap_or(1),
        t => t,
    }
    .min(total.max(1));
    std::thread::scope(|s| {
        for _ in 0..workers {
            s.spawn(|| loop {
                let idx = next.fetch_add(1, Ordering::SeqCst);
                if idx >= total {
                    break;
                }
                let check = slots[idx]
                    .lock()
                    .unwrap()
                    .take()
                    .expect("each check runs once");
                let record = run_check(check, seed);
                *results[idx].lock().unwrap() = Some(record);
            });
        }
    });
    results
        .into_iter()
        .map(|m| {
            m.into_inner()
                .unwrap()
                .expect("every check produced a record")
        })
        .collect()
}

fn run_check(check: Check, seed: u64) -> CheckRecord {
    let mut rng = rng_for(seed, &check.id);
    let start = Instant::now();
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| (check.run)(&mut rng)));
    let ms = start.elapsed().as_millis() as u64;
    let (residual, error) = match outcome {
        Ok(Ok(r)) if r.is_finite() => (Some(r), None),
        Ok(Ok(r)) => (None, Some(format!("non-finite residual {r}"))),
        Ok(Err(e)) => (None, Some(e.to_string())),
        Err(_) => (None, Some("check panicked".to_string())),
    };
    let pass = residual.is_some_and(|r| r <= check.tol);
    CheckRecord {
        id: check.id,
        anchor: check.anchor.to_string(),
        residual,
        tol: check.tol,
        pass,
        ms,
        error,
    }
}

fn sp(rng: &mut ChaCha8Rng) -> SpectralPoint {
    SpectralPoint::fresh(sample_spectral(rng))
}

/// A point with `lo < |z| < hi`, log-uniform in the radius.
fn annulus_point(lo: f64, hi: f64, rng: &mut ChaCha8Rng) -> C64 {
    let r = rng.gen_range(lo.ln()..hi.ln()).exp();
    C64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
}

fn at(prm: &Params, n: usize) -> Params {
    Params { n, ..*prm }
}

fn dynvars(prm: &Params, count: usize, rng: &mut ChaCha8Rng) -> Result<Vec<DynVar>> {
    (0..count).map(|_| sample_dynvar(prm, rng)).collect()
}

fn subsets(n: usize, d: usize) -> Vec<Vec<usize>> {
    (0..n).combinations(d).collect()
}

fn theta_suite(cfg: &SuiteConfig, plan: &mut Plan) {
    let prm = cfg.params;
    plan.add(
        "theta.oracle",
        "theta: truncated product against the triple-product series",
        cfg.tol(1e-12),
        move |rng| {
            let mut worst: f64 = 0.0;
            for _ in 0..50 {
                let z = annulus_point(0.3, 3.0, rng);
                let t = theta_raw(z, &prm);
                worst = nan_max(
                    worst,
                    (t - theta_series_oracle(z, &prm)?).norm() / t.norm().max(1.0),
                );
            }
            Ok(worst)
        },
    );
    plan.add(
        "theta.quasiperiodicity",
        "theta: inversion and p-shift",
        cfg.tol(1e-9),
        move |rng| {
            let mut worst: f64 = 0.0;
            for _ in 0..50 {
                let z = annulus_point(0.3, 3.0, rng);
                let target = -theta_raw(z, &prm) / z;
                worst = nan_max(
                    nan_max(worst, rel_diff(theta_raw(z.inv(), &prm), target)),
                    rel_diff(theta_raw(z * prm.p, &prm), target),
                );
            }
            Ok(worst)
        },
    );
    plan.add(
        "theta.addition",
        "theta: four-term addition formula",
        cfg.tol(1e-9),
        move |rng| {
            let t = |z: C64| theta_raw(z, &prm);
            let mut worst: f64 = 0.0;
            for _ in 0..50 {
                let [x, y, z, w] = [0; 4].map(|_| annulus_point(0.6, 1.6, rng));
                let lhs = t(x * y) * t(x / y) * t(z * w) * t(z / w);
                let a = t(x * w) * t(x / w) * t(z * y) * t(z / y);
                let b = z / y * t(x * z) * t(x / z) * t(y * w) * t(y / w);
                let scale = lhs.norm().max(a.norm()).max(b.norm());
                worst = nan_max(worst, (lhs - a - b).norm() / scale);
            }
            Ok(worst)
        },
    );
    plan.add(
        "theta.iterated_shift",
        "theta: shift by p^s for |s| <= 3",
        cfg.tol(1e-9),
        move |rng| {
            let mut worst: f64 = 0.0;
            for _ in 0..50 {
                let z = annulus_point(0.3, 3.0, rng);
                for s in -3i32..=3 {
                    let sign = if s.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                    let factor = prm.p.powf(-(s * (s - 1)) as f64 / 2.0) * z.powi(-s) * sign;
                    worst = nan_max(
                        worst,
                        rel_diff(
                            theta_raw(z * prm.p.powi(s), &prm),
                            factor * theta_raw(z, &prm),
                        ),
                    );
                }
            }
            Ok(worst)
        },
    );
    plan.add(
        "theta.zeros",
        "theta: zeros at integer powers of p",
        cfg.tol(1e-10),
        move |_| {
            Ok((-2..=2)
                .map(|k| theta_raw(C64::new(prm.p.powi(k), 0.0), &prm).norm())
                .fold(0.0, f64::max))
        },
    );
}

fn rmatrix_suite(cfg: &SuiteConfig, plan: &mut Plan) {
    let prm = cfg.params;
    for n in cfg.sizes(&[2, 3]) {
        plan.add(
            format!("rmatrix.qdybe.n{n}"),
            "R-matrix: dynamical Yang-Baxter equation",
            cfg.tol(1e-8),
            move |rng| {
                let p = at(&prm, n);
                let mut worst: f64 = 0.0;
                for _ in 0..20 {
                    let lam = sample_dynvar(&p, rng)?;
                    let [a, b, c] = [0; 3].map(|_| sample_spectral(rng));
                    worst = nan_max(worst, rmatrix::qdybe_residual(&lam, a, b, c, &p)?);
                }
                Ok(worst)
            },
        );
    }
    for n in cfg.sizes(&[2, 3, 4]) {
        plan.add(
            format!("rmatrix.unitarity.n{n}"),
            "R-matrix: unitarity",
            cfg.tol(1e-9),
            move |rng| {
                let p = at(&prm, n);
                let mut worst: f64 = 0.0;
                for _ in 0..50 {
                    let lam = sample_dynvar(&p, rng)?;
                    worst = nan_max(
                        worst,
                        rmatrix::unitarity_residual(&lam, sample_spectral(rng), &p)?,
                    );
                }
                Ok(worst)
            },
        );
        plan.add(
            format!("rmatrix.weight_zeros.n{n}"),
            "R-matrix: weight-zero pattern is exact",
            0.0,
            move |rng| {
                let p = at(&prm, n);
                let lam = sample_dynvar(&p, rng)?;
                let r = rmatrix::r_matrix(&lam, sample_spectral(rng), &p)?;
                Ok(if r.respects_weight_pattern() {
                    0.0
                } else {
                    1.0
                })
            },
        );
    }
    if cfg.includes(2) {
        plan.add(
            "rmatrix.felder.n2",
            "R-matrix: agreement with the additive theta_1 convention",
            cfg.tol(1e-8),
            move |rng| {
                let p = at(&prm, 2);
                let mut worst: f64 = 0.0;
                for _ in 0..10 {
                    let lam = sample_dynvar(&p, rng)?;
                    let x = C64::new(rng.gen_range(-0.45..0.45), rng.gen_range(-0.05..0.05));
                    worst = nan_max(worst, rmatrix::felder_crosscheck(&lam, x, &p)?);
                }
                Ok(worst)
            },
        );
    }
    plan.add(
        "rmatrix.alpha_beta",
        "R-matrix: quasi-periodicity and quadratic identity of the entries",
        cfg.tol(1e-9),
        move |rng| {
            let p = at(&prm, 2);
            let q2 = C64::new(p.q * p.q, 0.0);
            let mut worst: f64 = 0.0;
            for _ in 0..20 {
                let l = sample_dynvar(&p, rng)?.ij(0, 1);
                let z = sample_spectral(rng);
                worst = nan_max(
                    worst,
                    rel_diff(rmatrix::alpha_raw(l, q2, &p), rmatrix::beta_raw(-l, q2, &p)),
                );
                for k in -2..=2 {
                    let zk = z * p.p.powi(k);
                    worst = nan_max(
                        worst,
                        rel_diff(
                            rmatrix::alpha_raw(l, zk, &p),
                            rmatrix::alpha_raw(l, z, &p) * p.q.powi(2 * k),
                        ),
                    );
                    let f = p.qpow((l + 1.0) * (2.0 * k as f64));
                    worst = nan_max(
                        worst,
                        rel_diff(
                            rmatrix::beta_raw(l, zk, &p),
                            rmatrix::beta_raw(l, z, &p) * f,
                        ),
                    );
                }
                let lhs = rmatrix::alpha_raw(l, z, &p) * rmatrix::alpha_raw(-l, z, &p)
                    - rmatrix::beta_raw(l, z, &p) * rmatrix::beta_raw(-l, z, &p);
                worst = nan_max(
                    worst,
                    rel_diff(lhs, q2 * theta_raw(z / q2, &p) / theta_raw(q2 * z, &p)),
                );
            }
            Ok(worst)
        },
    );
}

/// Spectral pairs covering the generic case and every degenerate ratio class.
fn relation_pairs(z1: SpectralPoint, z2: SpectralPoint) -> Vec<(SpectralPoint, SpectralPoint)> {
    let mut out = vec![(z1, z2), (z2, z1)];
    for (dp, dq) in [(0, 2), (1, 2), (-1, 2), (0, -2), (1, -2), (1, 0), (-1, 0)] {
        out.push((z1, z1.shift(dp, dq)));
    }
    out
}

fn relations_suite(cfg: &SuiteConfig, plan: &mut Plan) {
    let prm = cfg.params;
    for n in cfg.sizes(&[2, 3]) {
        for k in 1..=2usize {
            plan.add(
                format!("relations.all.n{n}.k{k}"),
                "relations: every defining and residual relation vanishes",
                cfg.tol(1e-8),
                move |rng| {
                    let p = at(&prm, n);
                    let rep = EvalRep::calibrated(n, &p, sample_points(k, rng));
                    let lams = dynvars(&p, p.samples, rng)?;
                    let (z1, z2) = (sp(rng), sp(rng));
                    let mut worst: f64 = 0.0;
                    for (a, b) in relation_pairs(z1, z2) {
                        for (_, rel) in all_relations(n, a, b, &p) {
                            for lam in &lams {
                                worst = nan_max(worst, rep.residual_at(&rel, lam));
                            }
                        }
                    }
                    Ok(worst)
                },
            );
        }
    }
    plan.add(
        "relations.calibration",
        "evaluation representation: exactly one convention satisfies the relations",
        0.0,
        move |rng| match calibrate_convention(&prm, rng) {
            Ok(_) => Ok(0.0),
            Err(EllError::Calibration(_)) => Ok(1.0),
            Err(e) => Err(e),
        },
    );
}

fn exterior_suite(cfg: &SuiteConfig, plan: &mut Plan) {
    let prm = cfg.params;
    plan.add(
        "exterior.confluence",
        "exterior algebras: both rewriting orders reach the same normal form",
        cfg.tol(1e-9),
        move |rng| {
            let mut worst: f64 = 0.0;
            for _ in 0..200 {
                let n = rng.gen_range(2..=4);
                let word = exterior::random_word(n, 5, rng);
                for side in [Side::Left, Side::Right] {
                    worst = nan_max(
                        worst,
                        exterior::confluence_residual(n, side, &word, &prm, rng)?,
                    );
                }
            }
            Ok(worst)
        },
    );
    plan.add(
        "exterior.deterministic_basis",
        "exterior algebras: repeated reduction is bitwise reproducible",
        0.0,
        move |rng| {
            let p = at(&prm, 3);
            let lam = sample_dynvar(&p, rng)?;
            let mut worst: f64 = 0.0;
            for _ in 0..50 {
                let word = exterior::random_word(3, 4, rng);
                for side in [Side::Left, Side::Right] {
                    let a = exterior::normal_form_word(3, side, &word, SwapStrategy::Leftmost, &p);
                    let b = exterior::normal_form_word(3, side, &word, SwapStrategy::Leftmost, &p);
                    worst = nan_max(
                        worst,
                        match (a, b) {
                            (None, None) => 0.0,
                            (Some((ga, wa)), Some((gb, wb))) if wa == wb => {
                                (ga.eval(&lam) - gb.eval(&lam)).norm()
                            }
                            _ => f64::INFINITY,
                        },
                    );
                }
            }
            Ok(worst)
        },
    );
    for n in cfg.sizes(&[2, 3]) {
        plan.add(
            format!("exterior.comodule.n{n}"),
            "exterior algebras: coaction respects the quadratic relations",
            cfg.tol(1e-8),
            move |rng| {
                let p = at(&prm, n);
                let rep = EvalRep::calibrated(n, &p, sample_points(1, rng));
                let lams = dynvars(&p, p.samples, rng)?;
                let z = sp(rng);
                let mut worst: f64 = 0.0;
                for side in [Side::Left, Side::Right] {
                    for (dp, dq) in [(0, 2), (1, 2), (-1, 2), (-1, -2), (0, -2), (2, -2), (2, 0)] {
                        worst = nan_max(
                            worst,
                            exterior::comodule_residual(
                                n,
                                side,
                                z.shift(dp, dq),
                                z,
                                &rep,
                                &lams,
                                &p,
                            ),
                        );
                    }
                }
                Ok(worst)
            },
        );
    }
}

fn minors_suite(cfg: &SuiteConfig, plan: &mut Plan) {
    let prm = cfg.params;
    for n in cfg.sizes(&[2, 3]) {
        plan.add(
            format!("minors.left_equals_right.n{n}.k2"),
            "minors: left and right closed forms coincide",
            cfg.tol(1e-8),
            move |rng| {
                let p = at(&prm, n);
                let rep = EvalRep::calibrated(n, &p, sample_points(2, rng));
                let z = sp(rng);
                let mut worst: f64 = 0.0;
                for d in 1..=n {
                    worst = nan_max(worst, minors_residual(&rep, d, z, rng)?);
                }
                Ok(worst)
            },
        );
        plan.add(
            format!("minors.coaction.n{n}"),
            "minors: coaction on the exterior algebras produces the closed forms",
            cfg.tol(1e-8),
            move |rng| {
                let p = at(&prm, n);
                let rep = EvalRep::calibrated(n, &p, sample_points(1, rng));
                let lams = dynvars(&p, p.samples, rng)?;
                let z = sp(rng);
                let mut worst: f64 = 0.0;
                for d in 1..=n {
                    for i_set in subsets(n, d) {
                        for j_set in subsets(n, d) {
                            let l = exterior::coaction_extract_minor(n, &i_set, &j_set, z, &p)
                                .sub(&left_minor(n, &i_set, &j_set, z, &p));
                            let r =
                                exterior::coaction_extract_right_minor(n, &i_set, &j_set, z, &p)
                                    .sub(&right_minor(n, &i_set, &j_set, z, &p));
                            for lam in &lams {
                                worst = nan_max(
                                    nan_max(worst, rep.residual_at(&l, lam)),
                                    rep.residual_at(&r, lam),
                                );
                            }
                        }
                    }
                }
                Ok(worst)
            },
        );
        plan.add(
            format!("minors.auxiliary_permutation.n{n}"),
            "minors: independence of the auxiliary permutation",
            cfg.tol(1e-8),
            move |rng| {
                let p = at(&prm, n);
                let z = sp(rng);
                let mut worst: f64 = 0.0;
                for d in 2..=n {
                    for i_set in subsets(n, d) {
                        for j_set in subsets(n, d) {
                            let l0 = left_minor(n, &i_set, &j_set, z, &p);
                            for s in perm::of_subset(n, &i_set).iter().skip(1) {
                                worst = nan_max(
                                    worst,
                                    check_identity(
                                        &left_minor_with(n, &i_set, &j_set, s, z, &p),
                                        &l0,
                                        1,
                                        1,
                                        &p,
                                        rng,
                                    )?,
                                );
                            }
                            let r0 = right_minor(n, &i_set, &j_set, z, &p);
                            for t in perm::of_subset(n, &j_set).iter().skip(1) {
                                worst = nan_max(
                                    worst,
                                    check_identity(
                                        &right_minor_with(n, &i_set, &j_set, t, z, &p),
                                        &r0,
                                        1,
                                        1,
                                        &p,
                                        rng,
                                    )?,
                                );
                            }
                        }
                    }
                }
                Ok(worst)
            },
        );
    }
}

fn cherednik_suite(cfg: &SuiteConfig, plan: &mut Plan) {
    let prm = cfg.params;
    for n in cfg.sizes(&[2, 3, 4]) {
        plan.add(
            format!("cherednik.corner.n{n}"),
            "Cherednik operator: factorized corner entry",
            cfg.tol(1e-8),
            move |rng| {
                let p = at(&prm, n);
                let mut worst: f64 = 0.0;
                for _ in 0..5 {
                    let lam = sample_dynvar(&p, rng)?;
                    let z: Vec<C64> = (0..n).map(|_| sample_spectral(rng)).collect();
                    worst = nan_max(worst, cherednik::corner_residual(&lam, &z, &p)?);
                }
                Ok(worst)
            },
        );
    }
    if cfg.includes(3) {
        plan.add(
            "cherednik.sign_identity.n3",
            "Cherednik operator: sign identity on the geometric progression",
            cfg.tol(1e-8),
            move |rng| {
                let p = at(&prm, 3);
                let lam = sample_dynvar(&p, rng)?;
                let z0 = sample_spectral(rng);
                let mut worst: f64 = 0.0;
                for s in perm::all(3) {
                    for t in perm::all(3) {
                        worst = nan_max(
                            worst,
                            cherednik::sign_identity_residual(&s, &t, &lam, z0, &p)?,
                        );
                    }
                }
                Ok(worst)
            },
        );
    }
    for n in cfg.sizes(&[2, 3]) {
        plan.add(
            format!("cherednik.braid_relations.n{n}"),
            "Cherednik operator: braid relations on three and four legs",
            cfg.tol(1e-8),
            move |rng| {
                let p = at(&prm, n);
                let lam = sample_dynvar(&p, rng)?;
                let mut worst: f64 = 0.0;
                for d in 3..=4 {
                    let z: Vec<C64> = (0..d).map(|_| sample_spectral(rng)).collect();
                    worst = nan_max(
                        worst,
                        cherednik::braid_relation_residual(n, d, &lam, &z, &p)?,
                    );
                }
                Ok(worst)
            },
        );
    }
    plan.add(
        "cherednik.extraction",
        "braid monoid: every s_i can be extracted from t_d on both sides, d <= 5",
        0.0,
        |_| {
            let mut failures = 0usize;
            for d in 2..=5 {
                let td = braid::build_td(d, d)?;
                for i in 1..d {
                    let s = braid::BraidWord::new(vec![i]);
                    let left = s.concat(&braid::extract_left(d, i)?);
                    let right = braid::extract_right(d, i)?.concat(&s);
                    failures += usize::from(!braid::equivalent(&left, &td)?)
                        + usize::from(!braid::equivalent(&right, &td)?);
                }
            }
            Ok(failures as f64)
        },
    );
}

fn laplace_suite(cfg: &SuiteConfig, plan: &mut Plan) {
    let prm = cfg.params;
    let n = cfg.n_override.unwrap_or(3);
    for side in ["left", "right"] {
        plan.add(
            format!("laplace.{side}.n{n}"),
            "minors: Laplace expansion over every splitting",
            cfg.tol(1e-7),
            move |rng| {
                let p = at(&prm, n);
                let z = sp(rng);
                let mut worst: f64 = 0.0;
                for d in 2..=n {
                    for big in subsets(n, d) {
                        for other in subsets(n, d) {
                            for a in 1..d {
                                for (p1, p2) in splittings(&big, a) {
                                    let (l, r) = if side == "left" {
                                        left_laplace(n, &p1, &p2, &other, z, &p)
                                    } else {
                                        right_laplace(n, &p1, &p2, &other, z, &p)
                                    };
                                    worst = nan_max(worst, check_identity(&l, &r, 1, 1, &p, rng)?);
                                }
                            }
                        }
                    }
                }
                Ok(worst)
            },
        );
    }
    plan.add(
        format!("laplace.determinant_expansion.n{n}"),
        "determinant: iterated expansion in adjacent columns",
        cfg.tol(1e-8),
        move |rng| {
            let p = at(&prm, n);
            let w = sp(rng);
            let mut worst: f64 = 0.0;
            for k in 0..n.saturating_sub(1) {
                worst = nan_max(
                    worst,
                    check_identity(
                        &det_expansion(n, k, w, &p),
                        &determinant(n, w, &p),
                        1,
                        2,
                        &p,
                        rng,
                    )?,
                );
            }
            Ok(worst)
        },
    );
    plan.add(
        format!("laplace.sl_sr_closed_forms.n{n}"),
        "exterior algebras: extracted Laplace factors match the closed forms",
        cfg.tol(1e-8),
        move |rng| {
            let p = at(&prm, n);
            let z = sp(rng);
            let lams = dynvars(&p, p.samples, rng)?;
            let mut worst: f64 = 0.0;
            for (i_set, j_set) in disjoint_pairs(n) {
                let sl = exterior::s_left_extracted(n, &i_set, &j_set, z, &p);
                let sr = exterior::s_right_extracted(n, &i_set, &j_set, z, &p);
                for lam in &lams {
                    worst = nan_max(
                        worst,
                        rel_diff(sl.eval(lam), efactors::s_left(&i_set, &j_set, lam, &p)),
                    );
                    worst = nan_max(
                        worst,
                        rel_diff(sr.eval(lam), efactors::s_right(&i_set, &j_set, lam, &p)),
                    );
                }
            }
            Ok(worst)
        },
    );
    plan.add(
        format!("laplace.sl_sr_relation.n{n}"),
        "Laplace factors: relation between the left and right factors",
        cfg.tol(1e-8),
        move |rng| {
            let p = at(&prm, n);
            let lams = dynvars(&p, p.samples, rng)?;
            let mut worst: f64 = 0.0;
            for (i_set, j_set) in disjoint_pairs(n) {
                for lam in &lams {
                    worst = nan_max(worst, efactors::sl_sr_residual(&i_set, &j_set, lam, &p));
                }
            }
            Ok(worst)
        },
    );
}

/// Nonempty disjoint pairs `(I, J)` of subsets of `[0, n)`.
fn disjoint_pairs(n: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let all: Vec<Vec<usize>> = (1..n).flat_map(|d| subsets(n, d)).collect();
    all.iter()
        .cartesian_product(all.iter())
        .filter(|(a, b)| a.iter().all(|x| !b.contains(x)))
        .map(|(a, b)| (a.clone(), b.clone()))
        .collect()
}

fn words_up_to_two(n: usize, zs: [SpectralPoint; 2]) -> Vec<Vec<Gen>> {
    let mut out: Vec<Vec<Gen>> = multi_indices(n, 2)
        .into_iter()
        .map(|x| vec![gen(x[0], x[1], zs[0])])
        .collect();
    out.extend(
        multi_indices(n, 4)
            .into_iter()
            .map(|x| vec![gen(x[0], x[1], zs[0]), gen(x[2], x[3], zs[1])]),
    );
    out
}

fn cobraiding_suite(cfg: &SuiteConfig, plan: &mut Plan) {
    let prm = cfg.params;
    if cfg.includes(2) {
        plan.add(
            "cobraiding.unitarity.n2",
            "cobraiding: unitarity with respect to phi, words of length <= 2",
            cfg.tol(1e-7),
            move |rng| {
                let p = at(&prm, 2);
                let [a0, a1, b0, b1] = [0; 4].map(|_| sp(rng));
                let zetas = dynvars(&p, p.samples, rng)?;
                let mut worst: f64 = 0.0;
                for a in words_up_to_two(2, [a0, a1]) {
                    for b in words_up_to_two(2, [b0, b1]) {
                        worst =
                            nan_max(worst, cobraiding::unitarity_residual(2, &a, &b, &p, &zetas));
                    }
                }
                Ok(worst)
            },
        );
    }
    for n in cfg.sizes(&[2, 3]) {
        plan.add(
            format!("cobraiding.pairing_zeros.n{n}"),
            "cobraiding: pairings of minors with generators vanish on the ladder",
            cfg.tol(1e-8),
            move |rng| {
                let p = at(&prm, n);
                let z = sp(rng);
                let mut worst: f64 = 0.0;
                for k in [-1, 0, 1] {
                    for i_set in efactors::two_subsets(n) {
                        for j_set in efactors::two_subsets(n) {
                            for (i, j) in (0..n).cartesian_product(0..n) {
                                let (a, b) = cobraiding::pairing_zero_residuals(
                                    n,
                                    &i_set,
                                    &j_set,
                                    (i, j),
                                    z,
                                    k,
                                    &p,
                                    rng,
                                )?;
                                worst = nan_max(nan_max(worst, a), b);
                            }
                        }
                    }
                }
                Ok(worst)
            },
        );
        plan.add(
            format!("cobraiding.determinant_pairing.n{n}"),
            "cobraiding: primed pairing of the determinant with e_11",
            cfg.tol(1e-7),
            move |rng| {
                let p = at(&prm, n);
                let (z, w) = (sp(rng), sp(rng));
                cobraiding::det_pairing_residual(n, z, w, &p, rng)
            },
        );
    }
    if cfg.includes(3) {
        plan.add(
            "cobraiding.determinant_zeros.n3",
            "cobraiding: determinant pairing vanishes on the ladder",
            cfg.tol(1e-8),
            move |rng| {
                let p = at(&prm, 3);
                let z = sp(rng);
                let mut worst: f64 = 0.0;
                for k in 0..=1 {
                    for m in [-1, 0, 1] {
                        for i in 0..3 {
                            worst = nan_max(
                                worst,
                                cobraiding::det_pairing_zero_residual(3, (i, i), z, m, k, &p, rng)?,
                            );
                        }
                    }
                }
                Ok(worst)
            },
        );
    }
    if cfg.includes(2) {
        plan.add(
            "cobraiding.exchange.n2",
            "cobraiding: exchange identity for two generators",
            cfg.tol(1e-8),
            move |rng| {
                let p = at(&prm, 2);
                let (z, w) = (sp(rng), sp(rng));
                let mut worst: f64 = 0.0;
                for idx in multi_indices(2, 4) {
                    let (l, r) = cobraiding::cobraiding_identity(
                        2,
                        (idx[0], idx[1]),
                        (idx[2], idx[3]),
                        z,
                        w,
                        &p,
                    );
                    worst = nan_max(worst, check_identity(&l, &r, 1, 1, &p, rng)?);
                }
                Ok(worst)
            },
        );
    }
    if cfg.includes(2) {
        plan.add(
            "cobraiding.minor_generator_exchange.n2",
            "cobraiding: exchange of a minor with a generator",
            cfg.tol(1e-7),
            move |rng| {
                let p = at(&prm, 2);
                let (z, w) = (sp(rng), sp(rng));
                cobraiding::key_identity_residual(2, z, w, 1, &p, rng)
            },
        );
    }
}

fn determinant_suite(cfg: &SuiteConfig, plan: &mut Plan) {
    let prm = cfg.params;
    for n in cfg.sizes(&[2, 3]) {
        plan.add(
            format!("determinant.grouplike.n{n}"),
            "determinant: grouplike under the two-point representation",
            cfg.tol(1e-8),
            move |rng| {
                let p = at(&prm, n);
                let mut worst: f64 = 0.0;
                for _ in 0..3 {
                    let z = sp(rng);
                    let ws = [sample_spectral(rng), sample_spectral(rng)];
                    worst = nan_max(worst, check_grouplike(n, z, ws, &p, rng)?);
                }
                Ok(worst)
            },
        );
        let (instances, reference, k) = if n == 2 { (20, 1e-8, 2) } else { (10, 1e-7, 1) };
        plan.add(
            format!("determinant.central.n{n}"),
            "determinant: commutes with every generator",
            cfg.tol(reference),
            move |rng| {
                let p = at(&prm, n);
                let mut worst: f64 = 0.0;
                for _ in 0..instances {
                    let (z, w) = (sp(rng), sp(rng));
                    let ws = sample_points(k, rng);
                    for (i, j) in (0..n).cartesian_product(0..n) {
                        worst =
                            nan_max(worst, check_centrality(n, i, j, z, w, ws.clone(), &p, rng)?);
                    }
                }
                Ok(worst)
            },
        );
        plan.add(
            format!("determinant.t_map.n{n}"),
            "determinant: image under the anti-automorphism T",
            cfg.tol(1e-8),
            move |rng| {
                let p = at(&prm, n);
                let rep = EvalRep::calibrated(n, &p, sample_points(1, rng));
                t_map_det_residual(&rep, sp(rng), rng)
            },
        );
    }
}

fn antipode_suite(cfg: &SuiteConfig, plan: &mut Plan) {
    let prm = cfg.params;
    for n in cfg.sizes(&[2, 3]) {
        plan.add(
            format!("antipode.inverse.n{n}"),
            "antipode: S(L) is a two-sided inverse of L",
            cfg.tol(1e-7),
            move |rng| {
                let p = at(&prm, n);
                let rep = EvalRep::calibrated(n, &p, sample_points(1, rng));
                let z = sp(rng);
                let mut worst: f64 = 0.0;
                for (i, j) in (0..n).cartesian_product(0..n) {
                    let (a, b) = check_antipode(&rep, i, j, z, rng)?;
                    worst = nan_max(nan_max(worst, a), b);
                }
                Ok(worst)
            },
        );
    }
    if cfg.includes(2) {
        plan.add(
            "antipode.rll.n2",
            "antipode: images satisfy the reversed RLL relation",
            cfg.tol(1e-7),
            move |rng| {
                let p = at(&prm, 2);
                let rep = EvalRep::calibrated(2, &p, sample_points(1, rng));
                let (z1, z2) = (sp(rng), sp(rng));
                let mut worst: f64 = 0.0;
                for idx in multi_indices(2, 4) {
                    worst = nan_max(
                        worst,
                        antipode_rll_residual(&rep, (idx[0], idx[1], idx[2], idx[3]), z1, z2, rng)?,
                    );
                }
                Ok(worst)
            },
        );
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(matches!(
            run_suite("nope", &SuiteConfig::default()),
            Err(EllError::UnknownSuite(_))
        ));
    }

    #[test]
    fn invalid_params_are_rejected() {
        let cfg = SuiteConfig {
            params: Params {
                p: 1.5,
                ..Params::default()
            },
            ..SuiteConfig::default()
        };
        assert!(matches!(run_suite("theta", &cfg), Err(EllError::Config(_))));
    }

    #[test]
    fn theta_suite_passes_and_is_reproducible() {
        let cfg = SuiteConfig::default();
        let a = run_suite("theta", &cfg).unwrap();
        let b = run_suite("theta", &SuiteConfig { threads: 1, ..cfg }).unwrap();
        assert!(a.pass, "{a:?}");
        let strip = |r: &SuiteReport| {
            r.checks
                .iter()
                .map(|c| (c.id.clone(), c.residual))
                .collect::<Vec<_>>()
        };
        assert_eq!(strip(&a), strip(&b));
    }

    #[test]
    fn failing_check_is_recorded_not_raised() {
        let mut plan = Plan::default();
        plan.add("x.err", "synthetic", 1.0, |_| {
            Err(EllError::Domain("boom".into()))
        });
        plan.add("x.big", "synthetic", 1.0, |_| Ok(2.0));
        plan.add("x.nan", "synthetic", 1.0, |_| Ok(f64::NAN));
        plan.add("x.ok", "synthetic", 1.0, |_| Ok(0.5));
        let recs = execute(plan, &SuiteConfig::default());
        assert_eq!(
            recs.iter().map(|r| r.pass).collect::<Vec<_>>(),
            vec![false, false, false, true]
        );
        assert_eq!(recs[0].error.as_deref(), Some("domain error: boom"));
        assert!(recs[2].residual.is_none());
    }

    #[test]
    fn size_override_drops_checks_of_other_sizes() {
        let cfg = SuiteConfig { n_override: Some(4), ..SuiteConfig::default() };
        let r = run_suite("rmatrix", &cfg).unwrap();
        assert!(!r.checks.is_empty());
        for c in &r.checks {
            assert!(!c.id.contains(".n2") && !c.id.contains(".n3"), "{}", c.id);
        }
    }

    #[test]
    fn disjoint_pairs_at_three() {
        // 6 nonempty proper subsets; disjoint ordered pairs: singletons 6, singleton-pair 3 each way.
        assert_eq!(disjoint_pairs(3).len(), 12);
    }
}
