use fis_core::domain::{INPUT_TABLES, TACTIC};
use fis_core::{MembershipFunction, MfKind};
use proptest::prelude::*;

/// Reference values computed independently at 50-digit precision from the
/// textbook formulas, then rounded to f64.
/// Family, parameters, then `(x, degree)` pairs.
type HandRow = (MfKind, &'static [f64], &'static [(f64, f64)]);

#[rustfmt::skip]
const HAND_VALUES: [HandRow; 8] = [
    (MfKind::Triangular, &[0.0, 1.0, 9.0], &[(-1.0, 0.0), (0.5, 0.5), (1.0, 1.0), (5.0, 0.5), (8.2, 0.10000000000000009)]),
    (MfKind::Trapezoidal, &[6.0, 9.5, 16.5, 20.0], &[(5.0, 0.0), (7.0, 0.2857142857142857), (12.0, 1.0), (17.0, 0.8571428571428571), (19.9, 0.028571428571428976)]),
    (MfKind::Gaussian, &[13.0, 2.0], &[(13.0, 1.0), (14.0, 0.8824969025845955), (10.5, 0.45783336177161427), (20.0, 0.002187491118182885), (-3.0, 1.2664165549094176e-14)]),
    (MfKind::TwoSideGaussian, &[1.5, 0.4, 2.0, 0.9], &[(0.2, 0.005086069231012704), (1.1, 0.6065306597126336), (1.7, 1.0), (2.5, 0.8569968914352789), (4.0, 0.08465798862252998)]),
    (MfKind::BellShape, &[0.6, 2.0, 1.5], &[(1.5, 1.0), (1.0, 0.674648620510151), (2.1, 0.49999999999999983), (0.2, 0.04340690625313996), (3.9, 0.0038910505836575876)]),
    (MfKind::ProductTwoSigmoid, &[6.5, 0.9, -6.5, 2.1], &[(0.0, 0.002871625767195142), (0.9, 0.49979521641750696), (1.5, 0.9607130262634667), (2.4, 0.12454609781452546), (3.5, 0.00011165333552104443)]),
    (MfKind::DiffTwoSigmoid, &[6.5, 0.9, 4.0, 2.1], &[(0.0, 0.0026468123854671032), (0.9, 0.4918374288468401), (1.5, 0.8969869977720002), (2.4, 0.23141692523532134), (3.5, 0.003684194146050388)]),
    (MfKind::PiShape, &[0.3, 0.9, 2.1, 2.7], &[(0.4, 0.05555555555555559), (0.75, 0.875), (1.5, 1.0), (2.2, 0.9444444444444443), (2.6, 0.055555555555555636)]),
];

#[test]
fn hand_computed_values() {
    for (kind, params, points) in HAND_VALUES {
        let mf = MembershipFunction::new(kind, params.to_vec()).unwrap();
        for &(x, want) in points {
            let got = mf.eval(x);
            assert!((got - want).abs() <= 1e-12, "{kind:?} at {x}: {got} vs {want}");
        }
    }
}

#[test]
fn every_table_row_peaks_at_its_mean() {
    let rows = INPUT_TABLES.iter().flat_map(|t| t.terms.iter()).chain(TACTIC.terms);
    for &(label, l, m, r) in rows {
        for kind in MfKind::ALL {
            let mf = MembershipFunction::from_bounds(kind, l, m, r).unwrap();
            assert!((mf.eval(m) - 1.0).abs() <= 1e-9, "{label} {kind:?}: {}", mf.eval(m));
        }
    }
}

#[test]
fn spot_values() {
    let tri = MembershipFunction::triangular(0.0, 1.0, 9.0).unwrap();
    assert_eq!(tri.eval(5.0), 0.5);
    let g = MembershipFunction::gaussian(13.0, 2.0).unwrap();
    assert_eq!(g.eval(13.0), 1.0);
    let g = MembershipFunction::gaussian(0.0, 1.0).unwrap();
    let grad = g.grad_params(1.0);
    assert!((grad[1] - (-0.5f64).exp()).abs() < 1e-15);
}

fn kind_strategy() -> impl Strategy<Value = MfKind> {
    (0..MfKind::ALL.len()).prop_map(|i| MfKind::ALL[i])
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

/// Valid parameters for every family, built directly rather than from bounds.
fn mf_strategy() -> impl Strategy<Value = MembershipFunction> {
    let center = -10.0..10.0f64;
    let width = 0.05..5.0f64;
    let slope = prop_oneof![-20.0..-0.2f64, 0.2..20.0f64];
    (
        kind_strategy(),
        prop::collection::vec(center, 4),
        prop::collection::vec(width, 2),
        prop::collection::vec(slope, 2),
    )
        .prop_map(|(kind, c, w, s)| {
            let params = match kind {
                MfKind::Triangular => sorted(c[..3].to_vec()),
                MfKind::Trapezoidal | MfKind::PiShape => sorted(c),
                MfKind::Gaussian => vec![c[0], w[0]],
                MfKind::TwoSideGaussian => {
                    let m = sorted(c[..2].to_vec());
                    vec![m[0], w[0], m[1], w[1]]
                }
                MfKind::BellShape => vec![w[0], w[1], c[0]],
                MfKind::ProductTwoSigmoid | MfKind::DiffTwoSigmoid => vec![s[0], c[0], s[1], c[1]],
            };
            MembershipFunction::new(kind, params).unwrap()
        })
}

fn bounds_strategy() -> impl Strategy<Value = (f64, f64, f64)> {
    prop::collection::vec(-20.0..20.0f64, 3).prop_map(|v| {
        let v = sorted(v);
        (v[0], v[1], v[2])
    })
}

/// Relative error with a floor: central differences at h = 1e-6 carry about
/// 1e-10 of rounding noise, which swamps gradients smaller than ~1e-5.
fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1e-5)
}

/// Distance from `x` to the places where a smooth family is not
/// differentiable in its parameters.
fn knot_distance(mf: &MembershipFunction, x: f64) -> f64 {
    let p = mf.params();
    let knots: &[f64] = match mf.kind() {
        MfKind::TwoSideGaussian => &[p[0], p[2]],
        MfKind::BellShape => &[p[2]],
        _ => &[],
    };
    knots.iter().map(|k| (x - k).abs()).fold(f64::INFINITY, f64::min)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn values_stay_in_unit_interval(mf in mf_strategy(), xs in prop::collection::vec(-40.0..40.0f64, 40)) {
        for x in xs {
            let v = mf.eval(x);
            prop_assert!((0.0..=1.0).contains(&v), "{:?} at {x}: {v}", mf);
        }
    }

    #[test]
    fn from_bounds_peaks_at_mean(kind in kind_strategy(), (l, m, r) in bounds_strategy()) {
        let mf = MembershipFunction::from_bounds(kind, l, m, r).unwrap();
        prop_assert!((mf.eval(m) - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn smooth_gradients_match_central_differences(mf in mf_strategy(), x in -12.0..12.0f64) {
        prop_assume!(mf.kind().is_smooth());
        prop_assume!(knot_distance(&mf, x) > 1e-3);
        let h = 1e-6;
        let analytic = mf.grad_params(x);
        for (j, &g) in analytic.iter().enumerate() {
            let mut up = mf.params().to_vec();
            let mut down = up.clone();
            up[j] += h;
            down[j] -= h;
            let (Ok(a), Ok(b)) = (
                MembershipFunction::new(mf.kind(), up),
                MembershipFunction::new(mf.kind(), down),
            ) else {
                continue;
            };
            let fd = (a.eval(x) - b.eval(x)) / (2.0 * h);
            prop_assert!(rel_err(g, fd) <= 1e-4, "{:?} x={x} j={j}: {g} vs {fd}", mf);
        }
    }

    #[test]
    fn flanks_are_monotone(mf in mf_strategy(), ts in prop::collection::vec(0.0..1.0f64, 2)) {
        let p = mf.params().to_vec();
        let (a, b, c, d) = match mf.kind() {
            MfKind::Triangular => (p[0], p[1], p[1], p[2]),
            MfKind::Trapezoidal | MfKind::PiShape => (p[0], p[1], p[2], p[3]),
            _ => return Ok(()),
        };
        let (t0, t1) = if ts[0] <= ts[1] { (ts[0], ts[1]) } else { (ts[1], ts[0]) };
        let rise = |t: f64| a + t * (b - a);
        prop_assert!(mf.eval(rise(t0)) <= mf.eval(rise(t1)));
        let fall = |t: f64| c + t * (d - c);
        prop_assert!(mf.eval(fall(t0)) >= mf.eval(fall(t1)));
    }

    #[test]
    fn bounds_round_trip(kind in kind_strategy(), (l, m, r) in bounds_strategy()) {
        prop_assume!(m - l > 1e-3 && r - m > 1e-3);
        let b = MembershipFunction::from_bounds(kind, l, m, r).unwrap().bounds();
        prop_assert!((b.mean - m).abs() < 1e-9);
        if matches!(kind, MfKind::Gaussian | MfKind::BellShape) {
            // Symmetric shapes keep only the span.
            prop_assert!(((b.right - b.left) - (r - l)).abs() < 1e-9);
        } else {
            prop_assert!((b.left - l).abs() < 1e-9 && (b.right - r).abs() < 1e-9);
        }
    }

    #[test]
    fn continuous_away_from_shoulders(mf in mf_strategy(), x in -12.0..12.0f64) {
        let p = mf.params();
        let steep = match mf.kind() {
            MfKind::Triangular => p[1] - p[0] < 1e-3 || p[2] - p[1] < 1e-3,
            MfKind::Trapezoidal | MfKind::PiShape => p[1] - p[0] < 1e-3 || p[3] - p[2] < 1e-3,
            _ => false,
        };
        prop_assume!(!steep);
        let eps = 1e-9;
        prop_assert!((mf.eval(x + eps) - mf.eval(x)).abs() < 1e-5);
    }
}
