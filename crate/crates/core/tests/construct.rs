use homkit::complexes::{disk, is_exact, sphere, Complex};
use homkit::construct::*;
use homkit::exactalg::Ring;
use homkit::lifting::{x_injective_complex, x_injective_module, Evidence};
use homkit::modules::{free_cover, injective_hull, FpModule, ModuleMap};
use homkit::xclass::{Caps, ComplexUniverse, ModuleUniverse, XClass};

const Z4: Ring = Ring::IntegersMod(4);

fn m(f: &[i64]) -> FpModule {
    FpModule::new(Z4, f.to_vec()).unwrap()
}

fn universe() -> ModuleUniverse {
    ModuleUniverse::new(Z4, 8, &Caps::default()).unwrap()
}

#[test]
fn module_precover_examples() {
    let caps = Caps::default();
    let u = universe();
    let (p, q) = module_epi_precover(&m(&[2]), &XClass::All, &u, &caps).unwrap();
    assert_eq!(p, m(&[4]));
    assert!(q.is_epi().unwrap());
    assert!(module_precover_defects(&q, &XClass::All, &u, &caps).unwrap().is_empty());

    let (p, q) = module_epi_precover(&m(&[4]), &XClass::All, &u, &caps).unwrap();
    assert_eq!(p, m(&[4]));
    assert_eq!(q, ModuleMap::identity(&p));

    let zero = FpModule::zero(Z4);
    let (p, q) = module_epi_precover(&zero, &XClass::All, &u, &caps).unwrap();
    assert!(p.is_zero() && q.is_zero());
}

#[test]
fn module_search_oracles_agree_with_builtins() {
    let caps = Caps::default();
    let small = universe();
    let search = UniverseSearch { class: XClass::All, universe: small, caps };
    let err = PrecoverOracle::precover(&search, &m(&[2, 2])).unwrap_err();
    assert!(matches!(err, homkit::Error::Hypothesis(_)));

    let u = ModuleUniverse::new(Z4, 16, &caps).unwrap();
    let search = UniverseSearch { class: XClass::All, universe: u.clone(), caps };
    for target in [m(&[2]), m(&[4]), m(&[2, 2]), m(&[2, 4])] {
        let q = PrecoverOracle::precover(&search, &target).unwrap();
        assert_eq!(q.source().order(), free_cover(&target).source().order());
        assert!(module_precover_defects(&q, &XClass::All, &u, &caps).unwrap().is_empty(), "{target}");
        let e = PreenvelopeOracle::preenvelope(&search, &target).unwrap();
        assert_eq!(e.target().order(), injective_hull(&target).unwrap().0.order());
        assert!(module_preenvelope_defects(&e, &XClass::All, &u, &caps).unwrap().is_empty(), "{target}");
    }
}

#[test]
fn precover_of_zero_and_sphere() {
    let caps = Caps::default();
    let u = universe();
    let z = Complex::zero(Z4);
    let r = precover_bounded(&z, &XClass::All, &u, &caps).unwrap();
    assert!(r.cover.is_zero());

    let y = sphere(0, &m(&[2]));
    let r = precover_bounded(&y, &XClass::All, &u, &caps).unwrap();
    assert_eq!(r.cover, disk(0, &m(&[4])));
    assert_eq!(r.kernel[0].1, m(&[2]));
    let mut v = BuildVerifier::new(Z4, XClass::All, 8, caps).unwrap();
    let rep = v.verify_precover(&y, &r).unwrap();
    assert!(rep.holds(), "{:?}", rep.violations);
    assert!(rep.competitors > 0);
}

#[test]
fn precover_two_step_first_constraint_recomputed() {
    let caps = Caps::default();
    let z2 = m(&[2]);
    let y = Complex::new(Z4, 0, vec![z2.clone(), z2.clone()], vec![ModuleMap::identity(&z2)]).unwrap();
    let r = precover_bounded(&y, &XClass::All, &universe(), &caps).unwrap();
    assert_eq!(r.steps.len(), 1);
    let st = &r.steps[0];
    // Both sides of f s1 = a (0,f), element by element.
    for x in st.s1.source().elements().unwrap() {
        let lhs = st.f_next.apply(&st.s1.apply(&x).unwrap()).unwrap();
        let rhs = st.a.apply(&st.g.apply(&x).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
    }
    let checks = r.constraint_checks().unwrap();
    assert!(checks.iter().filter(|c| c.constraint != F_S2).all(|c| c.holds));
    // a (0,f) != 0 here, so f s2 = 0 cannot hold together with s2 lambda = s1.
    assert_eq!(st.dropped, vec![F_S2.to_string()]);
    assert!(checks.iter().any(|c| c.constraint == F_S2 && !c.holds));
    let mut v = BuildVerifier::new(Z4, XClass::All, 8, caps).unwrap();
    let rep = v.verify_precover(&y, &r).unwrap();
    assert!(rep.exact && rep.degreewise && rep.class_membership && rep.components && rep.factorization);
}

#[test]
fn precover_is_deterministic() {
    let caps = Caps::default();
    let y = homkit::construct::fixture_injective_components_not_injective_complex();
    let a = precover_bounded(&y, &XClass::All, &universe(), &caps).unwrap();
    let b = precover_bounded(&y, &XClass::All, &universe(), &caps).unwrap();
    assert_eq!(a.cover, b.cover);
    assert_eq!(a.map, b.map);
}

#[test]
fn preenvelope_examples() {
    let caps = Caps::default();
    let u = universe();
    let z = Complex::zero(Z4);
    assert!(preenvelope_bounded(&z, &XClass::All, &u, &caps).unwrap().envelope.is_zero());

    let y = sphere(0, &m(&[2]));
    let r = preenvelope_bounded(&y, &XClass::All, &u, &caps).unwrap();
    assert_eq!(r.envelope, disk(-1, &m(&[4])));
    assert_eq!(r.cokernel.iter().find(|(k, _)| *k == 0).unwrap().1, m(&[2]));
    let mut v = BuildVerifier::new(Z4, XClass::All, 8, caps).unwrap();
    let rep = v.verify_preenvelope(&y, &r).unwrap();
    assert!(rep.holds(), "{:?}", rep.violations);

    let y = disk(0, &m(&[2]));
    let r = preenvelope_bounded(&y, &XClass::All, &u, &caps).unwrap();
    assert_eq!(r.steps.len(), 1);
    assert!(r.constraint_checks().unwrap().iter().all(|c| c.holds));
    let rep = v.verify_preenvelope(&y, &r).unwrap();
    assert!(rep.holds(), "{:?}", rep.violations);
}

#[test]
fn preenvelope_of_fixture() {
    let caps = Caps::default();
    let y = fixture_injective_components_not_injective_complex();
    let r = preenvelope_bounded(&y, &XClass::All, &universe(), &caps).unwrap();
    let mut v = BuildVerifier::new(Z4, XClass::All, 8, caps).unwrap();
    let rep = v.verify_preenvelope(&y, &r).unwrap();
    assert!(rep.holds(), "{:?}", rep.violations);
}

#[test]
fn envelope_of_sphere() {
    let caps = Caps::default();
    let b = sphere(0, &m(&[2]));
    let r = x_injective_envelope(&b, &XClass::All, 8, &caps).unwrap().unwrap();
    assert_eq!(r.envelope.total_order(), Some(16));
    assert_eq!(r.envelope, disk(-1, &m(&[4])));
    assert!(r.maximal);
    assert!(r.x_injective.holds());
    assert!(r.factorization_failures.is_empty());
    assert!(r.competitors > 0);
    assert!(r.inclusion.is_degreewise_mono().unwrap());
    assert!(r.certificate.elements_checked > 0);
}

#[test]
fn envelope_trivial_cases() {
    let caps = Caps::default();
    let z = Complex::zero(Z4);
    let r = x_injective_envelope(&z, &XClass::All, 8, &caps).unwrap().unwrap();
    assert!(r.envelope.is_zero());

    let b = disk(0, &m(&[4]));
    let r = x_injective_envelope(&b, &XClass::All, 8, &caps).unwrap().unwrap();
    assert_eq!(r.envelope, b);
    assert!(r.inclusion.is_degreewise_epi().unwrap());
}

#[test]
fn envelope_rejects_unclosed_class() {
    let caps = Caps::default();
    // Free modules over Z/4 are not closed under quotients.
    let b = sphere(0, &m(&[4]));
    let err = x_injective_envelope(&b, &XClass::Free, 8, &caps).unwrap_err();
    assert!(matches!(err, homkit::Error::Hypothesis(_)));
}

#[test]
fn fixture_regression() {
    let caps = Caps::default();
    let c = fixture_injective_components_not_injective_complex();
    let u = universe();
    for k in c.degrees() {
        assert!(x_injective_module(c.component(k), &XClass::All, &u, &caps).unwrap().holds());
    }
    let rep = is_exact(&c).unwrap();
    assert_eq!(rep.first_nonexact(), Some(0));
    for (_, h) in &rep.homology {
        assert_eq!(h, &m(&[2]));
    }
    let cu = ComplexUniverse::around(&c, 8, &caps).unwrap();
    let v1 = x_injective_complex(&c, &XClass::All, &cu, &caps).unwrap();
    let v2 = x_injective_complex(&c, &XClass::All, &cu, &caps).unwrap();
    assert!(!v1.holds());
    match (&v1.evidence, &v2.evidence) {
        (Evidence::NoExtension { mono: a, map: f }, Evidence::NoExtension { mono: b, map: g }) => {
            assert_eq!(a, b);
            assert_eq!(f, g);
        }
        other => panic!("unexpected evidence {other:?}"),
    }
}
