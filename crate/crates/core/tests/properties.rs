//! Randomised properties of the theta kernel and the config parser.

use ellq::config::{self, Overrides};
use ellq::numerics::{c, e_fn, theta, theta_series_oracle, Params};
use ellq::C64;
use proptest::prelude::*;

fn params(p: f64) -> Params {
    Params {
        p,
        ..Params::default()
    }
}

fn point(r: f64, arg: f64) -> C64 {
    C64::from_polar(r, arg)
}

fn close(a: C64, b: C64, tol: f64) -> bool {
    (a - b).norm() <= tol * a.norm().max(b.norm()).max(1e-300)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn product_matches_series(p in 0.05f64..0.6, r in 0.3f64..3.0, arg in -3.1f64..3.1) {
        let prm = params(p);
        let z = point(r, arg);
        prop_assume!((z - c(1.0, 0.0)).norm() > 1e-3);
        let a = theta(z, &prm).unwrap();
        let b = theta_series_oracle(z, &prm).unwrap();
        prop_assert!(close(a, b, 1e-10), "{a} vs {b}");
    }

    #[test]
    fn shift_and_inversion(p in 0.05f64..0.6, r in 0.5f64..2.0, arg in -3.1f64..3.1) {
        let prm = params(p);
        let z = point(r, arg);
        let t = theta(z, &prm).unwrap();
        prop_assert!(close(theta(z * p, &prm).unwrap(), -t / z, 1e-10));
        prop_assert!(close(theta(z.inv(), &prm).unwrap(), -t / z, 1e-10));
    }

    #[test]
    fn e_is_odd(re in -2.0f64..2.0, im in -1.0f64..1.0) {
        let prm = Params::default();
        let s = c(re, im);
        prop_assert!(close(e_fn(-s, &prm), -e_fn(s, &prm), 1e-10));
    }

    #[test]
    fn config_round_trips(
        p in proptest::option::of(0.01f64..0.9),
        q in proptest::option::of(0.1f64..0.9),
        n in proptest::option::of(2usize..5),
        seed in proptest::option::of(any::<u64>()),
        samples in proptest::option::of(1usize..50),
        tol in proptest::option::of(1e-14f64..1e-4),
    ) {
        let o = Overrides { p, q, n, seed, samples, eq_tol: tol, ..Overrides::default() };
        let mut text = String::from("# generated\n");
        let fields: [(&str, Option<String>); 6] = [
            ("p", p.map(|v| format!("{v:?}"))),
            ("q", q.map(|v| format!("{v:?}"))),
            ("n", n.map(|v| v.to_string())),
            ("seed", seed.map(|v| v.to_string())),
            ("samples", samples.map(|v| v.to_string())),
            ("tol", tol.map(|v| format!("{v:e}"))),
        ];
        for (k, v) in fields {
            if let Some(v) = v {
                text.push_str(&format!("  {k} = {v}\n"));
            }
        }
        prop_assert_eq!(config::parse(&text).unwrap(), o);
    }
}
