use nielsen_core::homotopy::format::{EntryDecl, GammaDecl, GenDecl, NameDecl, ProductDecl, StemDecl};
use nielsen_core::homotopy::{default_tables, load_tables, parse, validate, LoadError, Membership, TableFile, DEFAULT_TABLES};
use nielsen_core::projective::Field;
use proptest::prelude::*;

fn mutated(old: &str, new: &str) -> TableFile {
    assert_eq!(DEFAULT_TABLES.matches(old).count(), 1, "`{old}` must occur once");
    parse(&DEFAULT_TABLES.replacen(old, new, 1)).unwrap()
}

#[test]
fn shipped_dataset_is_clean() {
    let r = validate(&default_tables().file().clone());
    assert!(r.is_clean(), "{:#?}", r.violations);
}

#[test]
fn fault_hopf_diagram() {
    let r = validate(&mutated("name hopfC 3 2 1", "name hopfC 3 2 2"));
    assert!(r.has("hopf-diagram"), "{:#?}", r.violations);
}

#[test]
fn fault_divisibility() {
    let r = validate(&mutated("stem 8 0 2,2", "stem 8 0 4,2"));
    assert!(r.has("divisibility"), "{:#?}", r.violations);
}

#[test]
fn fault_degree() {
    let r = validate(&mutated("prod nu nu -> 6 1", "prod nu nu -> 7 1"));
    assert!(r.has("degree"), "{:#?}", r.violations);
}

#[test]
fn fault_antipodal_parity() {
    let mut f = parse(DEFAULT_TABLES).unwrap();
    let e = f.entries.iter_mut().find(|e| (e.m, e.q) == (6, 3)).unwrap();
    e.generators[0].antip = Some(vec![-1]);
    let r = validate(&f);
    assert!(r.has("antipodal-parity"), "{:#?}", r.violations);
}

#[test]
fn fault_whitehead_order() {
    let r = validate(&mutated("name whitehead(3) 5 3 0", "name whitehead(3) 5 3 1"));
    assert!(r.has("whitehead-order"), "{:#?}", r.violations);
}

#[test]
fn load_rejects_structural_faults_only() {
    let bad = DEFAULT_TABLES.replacen("stem 8 0 2,2", "stem 8 0 4,2", 1);
    assert!(matches!(load_tables(bad.as_bytes()), Err(LoadError::Semantic { .. })));
    let odd = DEFAULT_TABLES.replacen("name hopfC 3 2 1", "name hopfC 3 2 2", 1);
    assert!(load_tables(odd.as_bytes()).is_ok());
    let err = load_tables(b"group 4 3 0 2\ngen eta_3\nsusp 1 2 x\n").unwrap_err();
    assert!(matches!(err, LoadError::Syntax(_)));
}

#[test]
fn pi_9_3_gamma_vanishes() {
    let t = default_tables();
    let chain = t.kernel_chain(9, 3, Field::R).unwrap();
    assert!(chain.ker_gamma.is_whole().unwrap());
    for c in 0..3 {
        let x = t.element(9, 3, vec![c]).unwrap();
        assert_eq!(t.gamma(&x).unwrap().is_zero(), Some(true));
    }
}

#[test]
fn suspension_and_stabilization() {
    let t = default_tables();
    let h = t.named("hopfC").unwrap();
    let e = t.suspend(&h).unwrap();
    assert_eq!((e.m, e.q), (4, 3));
    assert_eq!(t.stabilize(&h).unwrap(), t.stable().named("eta").unwrap());
    let nu5 = t.suspend_n(&t.named("alpha1_3").unwrap(), 0).unwrap();
    assert_eq!(t.stabilize(&nu5).unwrap().order(), nielsen_core::fgab::ElementOrder::Finite(3));
    let w = t.named("whitehead(2)").unwrap();
    assert_eq!(t.suspension_image_contains(3, 2, &w).unwrap(), Membership::No);
    assert!(t.lookup(30, 3).is_err());
}

#[test]
fn antipodal_action_is_identity_for_odd_spheres() {
    let t = default_tables();
    for e in t.entries().filter(|e| e.q % 2 == 1) {
        for x in e.group.generators() {
            let x = nielsen_core::homotopy::SphereElement { m: e.m, q: e.q, value: x };
            assert_eq!(t.antipodal_compose(&x).unwrap(), x);
        }
    }
}

fn ident() -> impl Strategy<Value = String> {
    "[a-z][a-z0-9_']{0,6}"
}

fn coeffs() -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-50i64..50, 0..4)
}

fn source() -> impl Strategy<Value = Option<String>> {
    prop::option::of("[A-Za-z0-9][A-Za-z0-9 ,.()]{0,20}")
}

fn gen_decl() -> impl Strategy<Value = GenDecl> {
    (
        ident(),
        prop::option::of(coeffs()),
        prop::option::of((0u32..20, coeffs())),
        prop::collection::btree_map(2u32..9, (0u32..20, coeffs()), 0..3),
        prop::option::of(coeffs()),
        source(),
    )
        .prop_map(|(name, susp, stab, gamma, antip, source)| GenDecl {
            name,
            susp,
            stab,
            gamma: gamma.into_iter().map(|(k, (degree, coeffs))| GammaDecl { k, degree, coeffs }).collect(),
            antip,
            source,
        })
}

fn table_file() -> impl Strategy<Value = TableFile> {
    let stems = prop::collection::vec(
        (0u32..20, 0usize..2, prop::collection::vec(1i64..30, 0..3), prop::collection::vec(ident(), 0..3), source())
            .prop_map(|(degree, free_rank, torsion, generators, source)| StemDecl { degree, free_rank, torsion, generators, source }),
        0..4,
    );
    let products = prop::collection::vec(
        (ident(), ident(), 0u32..20, coeffs(), source())
            .prop_map(|(left, right, degree, coeffs, source)| ProductDecl { left, right, degree, coeffs, source }),
        0..4,
    );
    let entries = prop::collection::vec(
        (1u32..30, 0u32..10, 0usize..2, prop::collection::vec(1i64..30, 0..3), prop::collection::vec(gen_decl(), 0..3), source())
            .prop_map(|(m, q, free_rank, torsion, generators, source)| EntryDecl { m, q, free_rank, torsion, generators, source }),
        0..4,
    );
    let names = prop::collection::vec(
        (ident(), 1u32..30, 0u32..10, coeffs(), source())
            .prop_map(|(name, m, q, coeffs, source)| NameDecl { name, m, q, coeffs, source }),
        0..4,
    );
    (stems, products, entries, names).prop_map(|(stems, products, entries, names)| TableFile { stems, products, entries, names })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn serialize_parse_round_trip(f in table_file()) {
        let text = f.serialize();
        prop_assert_eq!(parse(&text).unwrap(), f);
    }
}

#[test]
fn shipped_dataset_round_trips() {
    let f = parse(DEFAULT_TABLES).unwrap();
    assert_eq!(parse(&f.serialize()).unwrap(), f);
}
