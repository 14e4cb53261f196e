//! Randomized invariants over strings and bands for e ≤ 4, p ∈ {3, 5, 7}.

use std::sync::Arc;

use proptest::prelude::*;

use brauer_udr::catalog::RingVerdict;
use brauer_udr::coeff::Fp;
use brauer_udr::deform::{paper_lift_family, udr_evidence, verify_lift, Family, LiftRecord, LiftVerdict};
use brauer_udr::homalg::{hom_space, iso_test, projective_cover, stable_end_dim, syzygy, IsoVerdict};
use brauer_udr::presentation::Presentation;
use brauer_udr::repbuild::{enumerate_strings, ModuleSpec, Representation};

const PRIMES: [u32; 3] = [3, 5, 7];

fn setup(e: usize, pi: usize) -> (Arc<Presentation>, Fp) {
    (Arc::new(Presentation::new(e).unwrap()), Fp::new(PRIMES[pi]).unwrap())
}

/// A string module of length ≤ 6 or a band with n ≤ 2, chosen by `pick`.
fn pick_module(pres: &Arc<Presentation>, f: Fp, pick: usize) -> (String, Representation) {
    let strings = enumerate_strings(pres, 6);
    let units: Vec<u32> = f.units().collect();
    let total = strings.len() + 2 * units.len();
    let i = pick % total;
    let spec = if i < strings.len() {
        ModuleSpec::String(strings[i].clone())
    } else {
        let j = i - strings.len();
        ModuleSpec::Band {
            n: 1 + j / units.len(),
            lambda: units[j % units.len()],
        }
    };
    (spec.canonical_text(pres), spec.build(pres, f).unwrap())
}

fn isomorphic(a: &Representation, b: &Representation) -> bool {
    matches!(iso_test(a, b).unwrap(), IsoVerdict::Isomorphic(_))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projectives_count_composition_factors(e in 1usize..=4, pi in 0usize..3, pick in any::<usize>()) {
        let (pres, f) = setup(e, pi);
        let (name, m) = pick_module(&pres, f, pick);
        let mult = m.composition_multiplicities();
        for v in 0..e {
            let p = Representation::projective(&pres, f, v).unwrap();
            prop_assert_eq!(hom_space(&p, &m).unwrap().dim(), mult[v], "{} at {}", name, v + 1);
            prop_assert_eq!(hom_space(&m, &p).unwrap().dim(), mult[v], "{} at {}", name, v + 1);
        }
    }

    #[test]
    fn hom_is_additive(e in 1usize..=4, pi in 0usize..3, a in any::<usize>(), b in any::<usize>(), c in any::<usize>()) {
        let (pres, f) = setup(e, pi);
        let (_, x) = pick_module(&pres, f, a);
        let (_, y) = pick_module(&pres, f, b);
        let (_, z) = pick_module(&pres, f, c);
        let xy = x.direct_sum(&y).unwrap();
        let d = |m: &Representation, n: &Representation| hom_space(m, n).unwrap().dim();
        prop_assert_eq!(d(&xy, &z), d(&x, &z) + d(&y, &z));
        prop_assert_eq!(d(&z, &xy), d(&z, &x) + d(&z, &y));
    }

    #[test]
    fn syzygy_dimension_and_stable_end(e in 1usize..=4, pi in 0usize..3, pick in any::<usize>()) {
        let (pres, f) = setup(e, pi);
        let (name, m) = pick_module(&pres, f, pick);
        let om = syzygy(&m);
        prop_assert_eq!(om.total_dim() + m.total_dim(), projective_cover(&m).cover.total_dim(), "{}", name);
        prop_assert!(om.check_relations().is_ok());
        prop_assert_eq!(stable_end_dim(&m).unwrap(), stable_end_dim(&om).unwrap(), "{}", name);
    }

    #[test]
    fn socle_is_annihilated_and_matches_loewy_data(e in 1usize..=4, pi in 0usize..3, pick in any::<usize>()) {
        let (pres, f) = setup(e, pi);
        let (name, m) = pick_module(&pres, f, pick);
        let soc = m.socle_basis();
        prop_assert!(!soc.is_empty(), "{}", name);
        for a in 0..pres.num_arrows() {
            let g = m.global_arrow(a);
            for v in &soc {
                prop_assert!(g.mul_vec(v).iter().all(|&x| x == 0), "{}", name);
            }
        }
        let ll = m.loewy_length();
        prop_assert_eq!(m.radical_power_dim(ll), 0);
        prop_assert!(m.radical_power_dim(ll - 1) > 0);
        prop_assert_eq!(m.radical_power_dim(1), m.radical_basis().len());
    }

    #[test]
    fn spec_text_and_inverse_words_give_isomorphic_modules(e in 1usize..=4, pi in 0usize..3, pick in any::<usize>()) {
        let (pres, f) = setup(e, pi);
        let strings = enumerate_strings(&pres, 6);
        let w = &strings[pick % strings.len()];
        let m = Representation::string(&pres, f, w).unwrap();
        let inv = Representation::string(&pres, f, &w.inverse(&pres)).unwrap();
        prop_assert!(isomorphic(&m, &inv));
        let text = ModuleSpec::String(w.clone()).canonical_text(&pres);
        let again = ModuleSpec::parse(&pres, f, &text).unwrap().build(&pres, f).unwrap();
        prop_assert!(isomorphic(&m, &again), "{}", text);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn verdict_is_constant_on_syzygy_orbits(e in 1usize..=3, pi in 0usize..3, pick in any::<usize>()) {
        let (pres, f) = setup(e, pi);
        let (name, m) = pick_module(&pres, f, pick);
        prop_assume!(stable_end_dim(&m).unwrap() == 1);
        let v0: RingVerdict = udr_evidence(&m, &name, 6).unwrap().verdict;
        let om = syzygy(&m);
        let v1 = udr_evidence(&om, "translate", 6).unwrap().verdict;
        prop_assert_eq!(v0, v1, "{}", name);
    }

    #[test]
    fn lift_records_round_trip(e in 1usize..=4, pi in 0usize..3, fam in 0usize..6, level in 2u32..5, lam in any::<usize>()) {
        let (pres, f) = setup(e, pi);
        let units: Vec<u32> = f.units().collect();
        let family = Family::ALL[fam];
        let Ok(l) = paper_lift_family(family, &pres, f, level, units[lam % units.len()]) else {
            return Ok(());
        };
        let rec = LiftRecord::from_lift(&l);
        let back = LiftRecord::from_json(&rec.to_json()).unwrap();
        prop_assert_eq!(&back, &rec);
        let l2 = back.to_lift().unwrap();
        prop_assert_eq!(verify_lift(&l2), verify_lift(&l));
        // Se, V and the printed W form only survive while t² = 0.
        let expect_valid = match family {
            Family::Se | Family::VNonPeriodic | Family::WStarPrinted => level == 2,
            _ => true,
        };
        prop_assert_eq!(verify_lift(&l) == LiftVerdict::Valid, expect_valid, "{} at level {}", family.as_str(), level);
    }
}
