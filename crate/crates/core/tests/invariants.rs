use proptest::prelude::*;

use nilcomm_core::deciders::{classify, is_nil_semicommutative, is_weakly_semicommutative, Property, Verdict};
use nilcomm_core::hom::verify_theta_iso;
use nilcomm_core::localization::{localize_module, localize_ring, multiplicative_closure};
use nilcomm_core::module::cyclic_submodule;
use nilcomm_core::nilpotency::{is_nil_module, is_nilpotent_power, is_nilpotent_squared, nil_set, torsion_sets, is_torsion_free};
use nilcomm_core::{build_module, build_ring, AlgebraError, FiniteModule, Limits};

fn lim() -> Limits {
    Limits::default()
}

fn module_text() -> impl Strategy<Value = String> {
    prop_oneof![
        (2usize..=24).prop_map(|n| format!("regular(Z({n}))")),
        (2usize..=4).prop_map(|q| format!("regular(T(2, Z({q})))")),
        (2usize..=3, 2usize..=3).prop_map(|(n, q)| format!("regular(V({n}, Z({q})))")),
        (2usize..=4, 2usize..=4).prop_map(|(a, b)| format!("regular(prod(Z({a}), Z({b})))")),
        (2usize..=3, 2usize..=3).prop_map(|(q, n)| format!("regular(polyq(Z({q}), {n}))")),
        (2usize..=5).prop_map(|q| format!("prodmod(regular(Z({q})), regular(Z({q})))")),
        (2usize..=16, 0usize..16).prop_map(|(n, g)| format!("cyclic(regular(Z({n})), {})", g % n)),
        (2usize..=16, 0usize..16).prop_map(|(n, g)| format!("quot(regular(Z({n})), cyclic(regular(Z({n})), {}))", g % n)),
        Just("matmod(2, regular(Z(2)))".to_string()),
        Just("trimod(2, regular(Z(2)))".to_string()),
        Just("vmod(2, regular(Z(3)))".to_string()),
        Just("regular(S(3, Z(2)))".to_string()),
        Just("regular(M(2, Z(2)))".to_string()),
    ]
}

fn holds(vs: &[Verdict], p: Property) -> bool {
    vs.iter().find(|v| v.property == p).is_some_and(Verdict::holds)
}

fn built(text: &str) -> FiniteModule {
    build_module(text, &lim()).unwrap_or_else(|e| panic!("{text}: {e}"))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn nilpotency_criteria_agree(text in module_text()) {
        let m = built(&text);
        for x in m.elements() {
            prop_assert_eq!(is_nilpotent_squared(&m, x).is_nilpotent(), is_nilpotent_power(&m, x).is_nilpotent());
        }
    }

    #[test]
    fn torsion_sets_nest(text in module_text()) {
        let m = built(&text);
        let ts = torsion_sets(&m, &lim()).unwrap();
        prop_assert!(ts.t_set.is_subset(&ts.tor));
        if is_torsion_free(&m, &lim()).unwrap() {
            prop_assert_eq!(nil_set(&m, &lim()).unwrap().members.to_vec(), vec![0]);
        }
    }

    #[test]
    fn cyclic_submodule_nil_sets_embed(text in module_text(), pick in any::<prop::sample::Index>()) {
        let m = built(&text);
        let g = pick.index(m.size());
        let sub = cyclic_submodule(&m, g).unwrap();
        let (parent, image) = sub.embedding().unwrap();
        prop_assert_eq!(parent.descriptor(), m.descriptor());
        let outer = nil_set(&m, &lim()).unwrap();
        let inner = nil_set(&sub, &lim()).unwrap();
        for x in inner.members.iter() {
            prop_assert!(outer.contains(image[x]), "{} nilpotent in {} but not in {}", sub.render(x), sub.descriptor(), text);
        }
    }

    #[test]
    fn hierarchy_holds(text in module_text()) {
        let m = built(&text);
        let vs = classify(&m, &lim()).unwrap();
        use Property::*;
        prop_assert!(!holds(&vs, NilSemicommutative) || holds(&vs, WeaklySemicommutative));
        prop_assert!(!holds(&vs, ReducedI) || holds(&vs, Semicommutative));
        prop_assert!(!holds(&vs, Semicommutative) || holds(&vs, WeaklySemicommutative));
        if is_torsion_free(&m, &lim()).unwrap() {
            let three = [holds(&vs, Semicommutative), holds(&vs, NilSemicommutative), holds(&vs, WeaklySemicommutative)];
            prop_assert!(three.iter().all(|&b| b == three[0]), "{:?}", three);
        }
        if is_nil_module(&m, &lim()).unwrap() {
            prop_assert!(holds(&vs, NilSemicommutative) && holds(&vs, WeaklySemicommutative));
        }
    }

    #[test]
    fn verdicts_ignore_thread_count(text in module_text()) {
        let m = built(&text);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let many = rayon::ThreadPoolBuilder::new().num_threads(3).build().unwrap();
        let a = serde_json::to_string(&one.install(|| classify(&m, &lim())).unwrap()).unwrap();
        let b = serde_json::to_string(&many.install(|| classify(&m, &lim())).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn ring_regular_and_nil_are_disjoint(text in module_text()) {
        let ring = built(&text).ring().clone();
        prop_assert!(ring.regular_elements().is_disjoint(ring.nil_ring_set()));
        prop_assert!(ring.regular_elements().contains(ring.one()));
    }

    #[test]
    fn localization_projections_are_homomorphisms(n in 2usize..=24, gens in prop::collection::vec(0usize..24, 0..3)) {
        let m = built(&format!("regular(Z({n}))"));
        let gens: Vec<usize> = gens.into_iter().map(|g| g % n).collect();
        let set = match multiplicative_closure(m.ring(), &gens) {
            Ok(s) => s,
            Err(AlgebraError::ZeroAbsorbed { .. }) => return Ok(()),
            Err(e) => panic!("{e}"),
        };
        let loc = localize_module(&m, &set, &lim()).unwrap();
        let (r, lr, lm, proj) = (m.ring(), &loc.ring.ring, &loc.module, &loc.projection);
        let pr = &loc.ring.projection;
        for a in r.elements() {
            for b in r.elements() {
                prop_assert_eq!(pr.apply(r.add(a, b)), lr.add(pr.apply(a), pr.apply(b)));
                prop_assert_eq!(pr.apply(r.mul(a, b)), lr.mul(pr.apply(a), pr.apply(b)));
                prop_assert_eq!(proj[m.add(a, b)], lm.add(proj[a], proj[b]));
                prop_assert_eq!(proj[m.act(a, b)], lm.act(pr.apply(a), proj[b]));
            }
        }
        if set.members().to_vec() == vec![1] {
            prop_assert_eq!(lm.size(), m.size());
            let mut image = proj.clone();
            image.sort_unstable();
            image.dedup();
            prop_assert_eq!(image.len(), m.size());
        }
    }
}

#[test]
fn matrix_shapes_count_elements() {
    for q in [2u128, 3, 4] {
        for n in 1u32..=3 {
            let nn = n as u128;
            let cases = [
                ("M", nn * nn),
                ("T", nn * (nn + 1) / 2),
                ("S", nn * (nn - 1) / 2 + 1),
                ("V", nn),
            ];
            for (kind, free) in cases {
                let expected = q.pow(free as u32);
                if expected > 1 << 20 {
                    continue;
                }
                let text = format!("{kind}({n}, Z({q}))");
                let ring = build_ring(&text, &lim()).unwrap_or_else(|e| panic!("{text}: {e}"));
                assert_eq!(ring.size() as u128, expected, "{text}");
            }
            if q.pow(n * n) <= 1 << 12 {
                let m = built(&format!("matmod({n}, regular(Z({q})))"));
                assert_eq!(m.size() as u128, q.pow(n * n));
            }
        }
    }
}

#[test]
fn theta_is_an_isomorphism_for_small_bases() {
    let bases = ["Z(2)", "Z(3)", "Z(4)", "Z(5)", "Z(6)", "Z(7)", "Z(8)", "prod(Z(2), Z(2))", "prod(Z(2), Z(3))", "polyq(Z(2), 2)", "T(2, Z(2))", "prod(Z(2), Z(4))"];
    for text in bases {
        let base = build_ring(text, &lim()).unwrap();
        assert!(base.size() <= 8);
        for n in 1..=3 {
            assert!(verify_theta_iso(&base, n, &lim()).unwrap(), "{text}, n = {n}");
        }
    }
}

#[test]
fn nil_modules_satisfy_the_nil_properties() {
    for text in ["matmod(2, regular(Z(2)))", "regular(M(2, Z(2)))", "cyclic(regular(Z(8)), 2)"] {
        let m = built(text);
        if !is_nil_module(&m, &lim()).unwrap() {
            continue;
        }
        assert!(is_nil_semicommutative(&m, &lim()).unwrap().holds(), "{text}");
        assert!(is_weakly_semicommutative(&m, &lim()).unwrap().holds(), "{text}");
    }
}

#[test]
fn localizing_z12_at_two() {
    let z12 = build_ring("Z(12)", &lim()).unwrap();
    let s = multiplicative_closure(&z12, &[2]).unwrap();
    let loc = localize_ring(&s, &lim()).unwrap();
    assert_eq!(loc.ring.size(), 3);
    // 4 * 3 = 0 with 4 in S
    assert_eq!(loc.fraction(3, 1), Some(loc.ring.zero()));
    let half = loc.fraction(1, 2).unwrap();
    assert_eq!(loc.ring.mul(half, loc.projection.apply(2)), loc.ring.one());
}

#[test]
fn identical_descriptors_build_identical_structures() {
    for text in ["regular(T(2, Z(4)))", "locmod(regular(Z(12)), {2})", "quot(regular(Z(12)), cyclic(regular(Z(12)), 4))"] {
        let (a, b) = (built(text), built(text));
        assert_eq!(a.descriptor(), b.descriptor());
        assert_eq!(a.size(), b.size());
        for x in a.elements() {
            for y in a.elements() {
                assert_eq!(a.add(x, y), b.add(x, y));
            }
            for r in a.ring().elements() {
                assert_eq!(a.act(r, x), b.act(r, x));
            }
        }
    }
}
