use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::coeff::Fp;
use crate::presentation::Presentation;
use crate::repbuild::ModuleSpec;

fn setup(e: usize, p: u32) -> (Arc<Presentation>, Fp) {
    (Arc::new(Presentation::new(e).unwrap()), Fp::new(p).unwrap())
}

fn module(pres: &Arc<Presentation>, f: Fp, spec: &str) -> Representation {
    ModuleSpec::parse(pres, f, spec).unwrap().build(pres, f).unwrap()
}

#[test]
fn hom_from_projective_into_band() {
    for e in 1..=3 {
        let (pres, f) = setup(e, 7);
        let b = module(&pres, f, "band:1,2");
        let pe = module(&pres, f, &format!("P({e})"));
        assert_eq!(hom_space(&pe, &b).unwrap().dim(), 2);
    }
}

#[test]
fn band_endomorphism_dimension() {
    for e in 2..=3 {
        let (pres, f) = setup(e, 7);
        for n in 1..=3 {
            let b = Representation::band(&pres, f, n, 2).unwrap();
            assert_eq!(hom_space(&b, &b).unwrap().dim(), n * n + n, "e={e} n={n}");
        }
    }
}

#[test]
fn hom_between_simples() {
    let (pres, f) = setup(3, 5);
    for i in 0..3 {
        for j in 0..3 {
            let a = Representation::simple(&pres, f, i).unwrap();
            let b = Representation::simple(&pres, f, j).unwrap();
            assert_eq!(hom_space(&a, &b).unwrap().dim(), usize::from(i == j));
        }
    }
}

#[test]
fn cover_hom_space_agrees_with_commutation_oracle() {
    for (e, p) in [(1, 3), (2, 5), (3, 7)] {
        let (pres, f) = setup(e, p);
        let mut mods: Vec<Representation> = crate::repbuild::enumerate_strings(&pres, 4)
            .into_iter()
            .map(|w| Representation::string(&pres, f, &w).unwrap())
            .collect();
        mods.push(Representation::band(&pres, f, 1, 2).unwrap());
        mods.push(Representation::band(&pres, f, 2, 2).unwrap());
        mods.push(Representation::projective(&pres, f, e - 1).unwrap());
        for m in mods.iter().step_by(3) {
            for n in mods.iter().step_by(2) {
                let a = hom_space(m, n).unwrap();
                let b = hom_space_by_commutation(m, n).unwrap();
                assert_eq!(a.dim(), b.dim());
                for x in &a.basis {
                    assert!(x.is_homomorphism(m, n));
                }
            }
        }
    }
}

#[test]
fn stable_end_of_band_depends_on_lambda_squared() {
    let (pres, f5) = setup(3, 5);
    let b = Representation::band(&pres, f5, 1, 2).unwrap();
    assert_eq!(stable_end_dim(&b).unwrap(), 2);
    let f7 = Fp::new(7).unwrap();
    for l in 1..7 {
        let b = Representation::band(&pres, f7, 1, l).unwrap();
        assert_eq!(stable_end_dim(&b).unwrap(), 1, "lambda={l}");
    }
}

#[test]
fn radical_to_socle_endomorphism_factors_iff_lambda_squared_not_minus_one() {
    for (p, expect_factor) in [(5, false), (7, true)] {
        let (pres, f) = setup(3, p);
        let b = Representation::band(&pres, f, 1, 2).unwrap();
        let mut g = HomMap::zero(&b, &b);
        g.0[2].set(1, 0, 1);
        assert!(g.is_homomorphism(&b, &b));
        let h = hom_space(&b, &b).unwrap();
        let ph = proj_factoring_subspace(&h).unwrap();
        assert_eq!(hom::in_span(f, &ph, &g), expect_factor, "p={p}");
        assert!(!hom::in_span(f, &ph, &HomMap::identity(&b)));
    }
}

#[test]
fn stable_end_catalog_e3() {
    let (pres, f) = setup(3, 7);
    for s in ["S(2)", "str:a1", "str:a1*a3*d~"] {
        assert_eq!(stable_end_dim(&module(&pres, f, s)).unwrap(), 1, "{s}");
    }
    assert!(stable_end_dim(&module(&pres, f, "str:a1*a3*d~*a2*a1*a3*d~")).unwrap() >= 2);
    let (pres1, f3) = setup(1, 3);
    assert_eq!(stable_end_dim(&module(&pres1, f3, "str:a1")).unwrap(), 1);
    assert!(stable_end_dim(&module(&pres1, f3, "str:a1*d~*a1")).unwrap() >= 2);
}

#[test]
fn projective_covers() {
    let (pres, f) = setup(3, 7);
    let b = module(&pres, f, "band:1,2");
    assert_eq!(projective_cover(&b).multiplicities(), vec![0, 0, 1]);
    assert_eq!(
        projective_cover(&module(&pres, f, "S(3)")).multiplicities(),
        vec![0, 0, 1]
    );
    assert_eq!(
        projective_cover(&module(&pres, f, "S(1)+S(2)")).multiplicities(),
        vec![1, 1, 0]
    );
}

#[test]
fn syzygy_of_band_is_band_with_parameter_minus_inverse() {
    let (pres, f) = setup(3, 7);
    let om = syzygy(&module(&pres, f, "band:1,2"));
    match iso_test(&om, &module(&pres, f, "band:1,3")).unwrap() {
        IsoVerdict::Isomorphic(w) => {
            assert!(w.is_homomorphism(&om, &module(&pres, f, "band:1,3")));
            assert!(w.is_invertible());
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn syzygy_of_simple_and_projective() {
    let (pres, f) = setup(3, 7);
    let om = syzygy(&module(&pres, f, "S(2)"));
    assert_eq!(om.total_dim(), 6);
    assert!(iso_test(&om, &module(&pres, f, "str:a1*a3*a2*a1*a3"))
        .unwrap()
        .is_isomorphic());
    for v in 1..=3 {
        assert!(syzygy(&module(&pres, f, &format!("P({v})"))).is_zero());
    }
}

#[test]
fn iso_test_examples() {
    let (pres, f) = setup(3, 7);
    let b2 = module(&pres, f, "band:1,2");
    assert!(iso_test(&b2, &b2).unwrap().is_isomorphic());
    assert!(!iso_test(&b2, &module(&pres, f, "band:1,3")).unwrap().is_isomorphic());
    let m = module(&pres, f, "str:a1");
    let s = module(&pres, f, "S(1)+S(2)");
    assert_eq!(m.dims(), s.dims());
    assert!(!iso_test(&m, &s).unwrap().is_isomorphic());
}

#[test]
fn non_local_endomorphism_ring_still_decides() {
    let (pres, f) = setup(3, 5);
    let a = module(&pres, f, "S(1)+str:a1");
    let b = module(&pres, f, "str:a1+S(1)");
    assert!(iso_test(&a, &b).unwrap().is_isomorphic());
    let c = module(&pres, f, "S(1)+S(1)+S(2)");
    assert!(!iso_test(&a, &c).unwrap().is_isomorphic());
}

#[test]
fn ext1_examples() {
    let (pres, f) = setup(3, 7);
    for (s, d) in [
        ("S(2)", 0),
        ("str:a1", 0),
        ("str:a1*a3*d~", 1),
        ("S(3)", 1),
        ("str:a2*a1", 1),
        ("str:a2", 0),
    ] {
        assert_eq!(ext1_dim(&module(&pres, f, s)).unwrap(), d, "{s}");
    }
    let (pres1, f3) = setup(1, 3);
    assert_eq!(ext1_dim(&module(&pres1, f3, "S(1)")).unwrap(), 2);
}

#[test]
fn omega_orbits() {
    let (pres, f) = setup(1, 7);
    let o = omega_orbit(&module(&pres, f, "str:a1"), 6).unwrap();
    assert_eq!(o.period, Some(2));
    assert!(iso_test(&o.members[1], &module(&pres, f, "str:d"))
        .unwrap()
        .is_isomorphic());

    let (pres, f) = setup(3, 7);
    let o = omega_orbit(&module(&pres, f, "band:1,2"), 6).unwrap();
    assert_eq!(o.period, Some(2));
    assert!(iso_test(&o.members[1], &module(&pres, f, "band:1,3"))
        .unwrap()
        .is_isomorphic());

    let f5 = Fp::new(5).unwrap();
    let o = omega_orbit(&module(&pres, f5, "band:1,2"), 6).unwrap();
    assert_eq!(o.period, Some(1));
}

#[test]
fn component_labels() {
    for e in 2..=4 {
        let (pres, f) = setup(e, 7);
        assert_eq!(
            classify_component(&module(&pres, f, &format!("S({e})"))).unwrap(),
            ComponentLabel::NonPeriodic
        );
        assert_eq!(
            classify_component(&module(&pres, f, &format!("S({})", e - 1))).unwrap(),
            ComponentLabel::ExceptionalTube
        );
        assert_eq!(
            classify_component(&module(&pres, f, "band:2,3")).unwrap(),
            ComponentLabel::HomogeneousTube
        );
        assert_eq!(
            classify_component(&module(&pres, f, "P(1)")).unwrap(),
            ComponentLabel::Projective
        );
    }
}

#[test]
fn seeds_match_their_own_orbits() {
    let (pres, f) = setup(3, 7);
    let b = module(&pres, f, "S(1)");
    let c = Classifier::new(&b).unwrap();
    for (i, s) in c.seeds().iter().enumerate() {
        let m = s.spec.build(&pres, f).unwrap();
        let om = syzygy(&syzygy(&m));
        let got = c.classify(&om).unwrap();
        assert_eq!(got.label, s.component);
        assert_eq!(got.seed.unwrap().0, i, "{}", s.name);
    }
}

/// Catalog used by the property checks: short strings, small bands, simples.
fn small_catalog(pres: &Arc<Presentation>, f: Fp) -> Vec<Representation> {
    let mut out: Vec<Representation> = crate::repbuild::enumerate_strings(pres, 3)
        .into_iter()
        .map(|w| Representation::string(pres, f, &w).unwrap())
        .collect();
    for v in 0..pres.e() {
        out.push(Representation::simple(pres, f, v).unwrap());
    }
    out.push(Representation::band(pres, f, 1, 2).unwrap());
    out
}

#[test]
fn symmetric_hom_counting() {
    for (e, p) in [(1, 3), (2, 5), (3, 7)] {
        let (pres, f) = setup(e, p);
        for u in small_catalog(&pres, f) {
            let mult = u.composition_multiplicities();
            for i in 0..e {
                let pi = Representation::projective(&pres, f, i).unwrap();
                assert_eq!(hom_space(&pi, &u).unwrap().dim(), mult[i]);
                assert_eq!(hom_space(&u, &pi).unwrap().dim(), mult[i]);
            }
        }
    }
}

#[test]
fn projectively_factoring_endomorphisms_land_in_socle() {
    for (e, p) in [(2, 3), (3, 5)] {
        let (pres, f) = setup(e, p);
        for m in small_catalog(&pres, f) {
            if m.radical_power_dim(e + 1) != 0 {
                continue;
            }
            let h = hom_space(&m, &m).unwrap();
            let soc = m.socle_basis();
            for g in proj_factoring_subspace(&h).unwrap() {
                let image = g.global(&m, &m).column_space();
                let mut all = soc.clone();
                let r = crate::coeff::matrix::span_rank(f, m.total_dim(), &all);
                all.extend(image);
                assert_eq!(crate::coeff::matrix::span_rank(f, m.total_dim(), &all), r);
            }
        }
    }
}

#[test]
fn syzygy_dimension_and_stable_end_invariance() {
    for (e, p) in [(1, 3), (2, 5), (3, 7)] {
        let (pres, f) = setup(e, p);
        for m in small_catalog(&pres, f) {
            let om = syzygy(&m);
            let cover = projective_cover(&m);
            assert_eq!(om.total_dim(), cover.cover.total_dim() - m.total_dim());
            assert!(is_projective_free(&om));
            assert_eq!(stable_end_dim(&om).unwrap(), stable_end_dim(&m).unwrap());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn reversed_string_is_isomorphic(e in 1usize..=4, pick in 0usize..10_000) {
        let (pres, f) = setup(e, 5);
        let words = crate::repbuild::enumerate_strings(&pres, 6);
        let w = &words[pick % words.len()];
        let a = Representation::string(&pres, f, w).unwrap();
        let b = Representation::string(&pres, f, &w.inverse(&pres)).unwrap();
        prop_assert!(iso_test(&a, &b).unwrap().is_isomorphic());
    }

    #[test]
    fn composition_of_homs_is_a_hom(e in 1usize..=3, i in 0usize..50, j in 0usize..50, k in 0usize..50) {
        let (pres, f) = setup(e, 3);
        let mods = small_catalog(&pres, f);
        let (a, b, c) = (&mods[i % mods.len()], &mods[j % mods.len()], &mods[k % mods.len()]);
        let h1 = hom_space(a, b).unwrap();
        let h2 = hom_space(b, c).unwrap();
        for x in &h1.basis {
            for y in &h2.basis {
                prop_assert!(y.compose(x).is_homomorphism(a, c));
            }
        }
    }
}
