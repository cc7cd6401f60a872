use proptest::prelude::*;
use richbound::tower::{Cmp3, Level, TowerReal};
use richbound::verify::{tower_property, TowerProperty};
use richbound::Interval;

fn lnln(x: &TowerReal) -> Interval {
    x.ln().unwrap().ln().unwrap().to_interval().unwrap()
}

fn near(iv: Interval, want: f64, tol: f64) -> bool {
    iv.lo <= want + tol && iv.hi >= want - tol && iv.width() < 1e-6 * want.abs().max(1.0)
}

#[test]
fn contains_high_precision_references() {
    let x = TowerReal::from_real(3.7)
        .unwrap()
        .pow(&TowerReal::from_real(12.9).unwrap());
    assert!(x.contains_f64(21369887.726417452), "{x}");

    assert!(TowerReal::e_tower(3).contains_f64(3814279.1047602206));

    let t4 = TowerReal::e_tower(4);
    assert!(near(lnln(&t4.mul(&t4)), 15.847409422039209, 1e-12));
    assert!(near(
        lnln(&t4.add(&TowerReal::from_real(1e300).unwrap())),
        15.154262241479264,
        1e-12
    ));

    let s = TowerReal::from_u64(1 << 50)
        .mul(&TowerReal::from_u64(1 << 50))
        .add(&TowerReal::from_u64(3).pow(&TowerReal::from_u64(70)));
    let ln_s = s.ln().unwrap().to_interval().unwrap();
    assert!(near(ln_s, 76.90336649961427, 1e-12), "{ln_s}");

    let p = TowerReal::from_real(1e200)
        .unwrap()
        .pow(&TowerReal::from_real(1e5).unwrap());
    assert!(near(lnln(&p), 17.64527527676622, 1e-12));
}

#[test]
fn tetration_iter_log_exact() {
    for n in 0..=6 {
        let t = TowerReal::tetrate(&TowerReal::e(), n).unwrap();
        assert_eq!(t.iter_log(), Some(n));
        assert!(t.is_point());
    }
}

#[test]
fn sampled_properties_hold() {
    for p in TowerProperty::ALL {
        let s = tower_property(p, 1000, 3);
        assert!(s.passed(), "{s}");
        assert_eq!(s.checked, 1000);
        assert!(s.indeterminate_rate() < 0.05, "{s}");
    }
}

fn level() -> impl Strategy<Value = TowerReal> {
    (1u32..4, 0.0f64..1.0).prop_map(|(h, r)| TowerReal::point(Level::new(h, r).unwrap()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn operations_stay_under_tower(x in level(), y in level()) {
        prop_assume!(x.cmp(&TowerReal::ONE) == Cmp3::Greater && y.cmp(&TowerReal::ONE) == Cmp3::Greater);
        let cap = TowerReal::e_tower(x.iter_log().unwrap() + y.iter_log().unwrap());
        for v in [x.add(&y), x.mul(&y), x.pow(&y)] {
            prop_assert_ne!(v.cmp(&cap), Cmp3::Greater);
        }
    }

    #[test]
    fn ln_exp_round_trip(x in level()) {
        let back = x.exp().ln().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn operations_are_monotone(x in level(), y in level(), z in level()) {
        if x.cmp(&y) == Cmp3::Less {
            prop_assert_ne!(x.add(&z).cmp(&y.add(&z)), Cmp3::Greater);
            prop_assert_ne!(x.mul(&z).cmp(&y.mul(&z)), Cmp3::Greater);
            prop_assert_ne!(x.exp().cmp(&y.exp()), Cmp3::Greater);
        }
    }

    #[test]
    fn small_values_match_f64(a in 1.0f64..1e6, b in 1.0f64..1e3) {
        let ta = TowerReal::from_real(a).unwrap();
        let tb = TowerReal::from_real(b).unwrap();
        let sum = ta.add(&tb).to_interval().unwrap();
        prop_assert!(sum.lo <= (a + b) * (1.0 + 1e-12) && sum.hi >= (a + b) * (1.0 - 1e-12));
        let prod = ta.mul(&tb).to_interval().unwrap();
        prop_assert!(prod.lo <= (a * b) * (1.0 + 1e-12) && prod.hi >= (a * b) * (1.0 - 1e-12));
    }

    #[test]
    fn text_round_trip(x in level(), y in level()) {
        let t = x.add(&y);
        let back: TowerReal = t.to_string().parse().unwrap();
        prop_assert_eq!(back, t);
    }
}
