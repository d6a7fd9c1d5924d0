//! Property tests across module boundaries.

use proptest::prelude::*;

use atfkit::atf_diagram::{affine_area, agl_equivalent, from_json, mutate, nodal_trade, to_json, validate, BaseDiagram, Orientation};
use atfkit::exact_core::{fmt_rational, int, parse_rational, rat, Point, Rational};
use atfkit::period_solver::{apply_basis, mu_closed_forms, solve_periods, PeriodAssignment};

fn ratio() -> impl Strategy<Value = Rational> {
    (1i64..=40, 1i64..=9).prop_map(|(n, d)| rat(n, d))
}

/// Rectangle or Hirzebruch trapezoid with one node traded in at a corner.
fn traded() -> impl Strategy<Value = BaseDiagram> {
    (ratio(), ratio(), 0i64..=2, 0usize..4, 1i64..=9).prop_filter_map("trade did not fit", |(a, b, k, v, t)| {
        let top = &b + &a * int(k);
        let p = BaseDiagram::polygon(vec![Point::origin(), Point::new(a.clone(), int(0)), Point::new(a, b), Point::new(int(0), top)]);
        let short = std::cmp::min(p.edge_length((v + 3) % 4), p.edge_length(v));
        nodal_trade(&p, v, &(short * rat(t, 20))).ok()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rational_text_round_trip(n in -10_000i64..10_000, d in 1i64..500) {
        let r = rat(n, d);
        prop_assert_eq!(parse_rational(&fmt_rational(&r)).unwrap(), r);
    }

    #[test]
    fn diagram_json_round_trip(d in traded()) {
        prop_assert_eq!(from_json(&to_json(&d)).unwrap(), d);
    }

    #[test]
    fn mutation_keeps_area_and_validity(d in traded(), ccw in any::<bool>()) {
        let (o, back) = if ccw { (Orientation::Ccw, Orientation::Cw) } else { (Orientation::Cw, Orientation::Ccw) };
        prop_assume!(validate(&d).is_valid());
        let m = mutate(&d, 0, o).unwrap();
        prop_assert!(validate(&m).is_valid());
        prop_assert_eq!(affine_area(&m).unwrap(), affine_area(&d).unwrap());
        prop_assert!(agl_equivalent(&mutate(&m, 0, back).unwrap(), &d));
    }

    #[test]
    fn periods_solve_inverts_basis(n in 3usize..10, h in ratio(), mus in prop::collection::vec(ratio(), 9)) {
        let p = PeriodAssignment { h, mu: mus[..n].to_vec() };
        let areas = apply_basis(n, &p).unwrap();
        let back = solve_periods(n, &areas).unwrap();
        prop_assert_eq!(&back.h, &p.h);
        prop_assert_eq!(&back.mu, &p.mu);
        let (m1, m2) = mu_closed_forms(n, &areas).unwrap();
        prop_assert_eq!((&m1, &m2), (&p.mu[n - 2], &p.mu[n - 1]));
    }
}
