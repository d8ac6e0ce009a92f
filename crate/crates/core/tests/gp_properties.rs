use num_rational::BigRational;
use proptest::prelude::*;

use sumprod::exponent::is_power_of;
use sumprod::gpunion::{
    check_gp8_bound, count_family_solutions, gp8_lower_bound, rep_spectrum, sumset_breakdown, EquationInstance,
    EquationKind, GpError, GpUnion,
};
use sumprod::num::{int, ratio};
use sumprod::sets::{sumset, RatSet};

fn ratio_strategy() -> impl Strategy<Value = BigRational> {
    (2i64..10, 1i64..9).prop_filter_map("r > 1", |(p, q)| (p > q).then(|| ratio(p, q)))
}

fn union_strategy() -> impl Strategy<Value = GpUnion> {
    (ratio_strategy(), 1i64..12, 1i64..12, 1i64..4, 1usize..6, 1usize..6)
        .prop_filter_map("disjoint", |(r, x, y, d, m, n)| GpUnion::new(int(x), ratio(y, d), r, m, n).ok())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn breakdown_total_is_sumset(u in union_strategy()) {
        let mut all = u.b();
        all.extend(u.c());
        prop_assert_eq!(sumset_breakdown(&u).total, sumset(&RatSet::new(all).unwrap()).size);
    }

    #[test]
    fn r_neq_2_inequalities(u in union_strategy()) {
        prop_assume!(u.r != int(2));
        let c = check_gp8_bound(&u).unwrap();
        prop_assert!(c.passes(), "{} {:?}", u, c);
        prop_assert!(c.total as i64 >= gp8_lower_bound(u.m, u.n));
    }

    #[test]
    fn doubled_sums_form_a_progression(u in union_strategy()) {
        let s = match rep_spectrum(&u) {
            Ok(s) => s,
            Err(GpError::SingleProgression) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        prop_assert!(s.max_count <= 2);
        if u.r != int(2) {
            for w in s.doubled.windows(2) {
                prop_assert_eq!(&w[1] / &w[0], u.r.clone());
            }
        }
    }

    #[test]
    fn single_progression_is_sidon(r in ratio_strategy(), x in 1i64..6, t in 1usize..6, m in 1usize..5, n in 1usize..5) {
        let y = int(x) * sumprod::num::rational_pow(&r, (m + t) as i64);
        let u = GpUnion::new(int(x), y, r, m, n).unwrap();
        prop_assert!(u.single_progression());
        let k = u.k();
        prop_assert_eq!(sumset_breakdown(&u).total, (k * k + k) / 2);
    }

    #[test]
    fn kind_three_unique_even_at_two(z in (1i64..30, 1i64..30)) {
        let z = ratio(z.0, z.1);
        prop_assume!(!is_power_of(&z, &int(2)));
        let e = EquationInstance::new(EquationKind::III, int(2), z).unwrap();
        prop_assert!(count_family_solutions(&e, 8).unwrap().len() <= 1);
    }
}
