//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

use std::cell::RefCell;
use std::collections::{BTreeMap, BTreeSet};
use std::panic::{self, AssertUnwindSafe};
use std::process::Command;
use std::time::Instant;

use nielsen_core::fgab::{smith_normal_form, ElementOrder, FgAbGroup, GroupElement, Homomorphism, IntMatrix};
use nielsen_core::homotopy::{default_tables, parse, validate, SphereElement, TableSet, DEFAULT_TABLES};
use nielsen_core::invariants::{
    chain_check, dichotomy_holds, equivalence_scan, kervaire_exception, projective_report, sphere_report,
    wecken_status, InvariantValue, Kervaire, Report, Status, WeckenStatus,
};
use nielsen_core::projective::{space, Field, MapClass, ProjSpace};
use nielsen_core::selfcoincidence::{
    fiber_projection_self_loose, quaternion_counterexample, residual_not_parallel, sample_unit_vector, selfmap_s,
    self_loose, Quaternion, Verdict,
};
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use InvariantValue::{Finite, Infinite};

type Outcome = Result<String, String>;

thread_local! {
    static REPORTS: RefCell<Vec<Report>> = const { RefCell::new(Vec::new()) };
}

fn keep(r: Report) -> Report {
    REPORTS.with(|v| v.borrow_mut().push(r.clone()));
    r
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn proj(t: &TableSet, s: &ProjSpace, m: u32, a: &SphereElement, b: &SphereElement) -> Report {
    let f1 = MapClass::new(t, *s, m, a.clone()).unwrap();
    let f2 = MapClass::new(t, *s, m, b.clone()).unwrap();
    keep(projective_report(t, s, m, &f1, &f2, false).unwrap())
}

fn sph(t: &TableSet, m: u32, n: u32, a: &SphereElement, b: &SphereElement) -> Report {
    keep(sphere_report(t, m, n, a, b).unwrap())
}

/// Reference table, transcribed by hand.
const REFERENCE_ROWS: [&str; 5] = [
    "m=2: N^# ≡ Ñ ≡ N ≡ N^Z ≢ 0",
    "m=3: N^# ≡ Ñ ≢ N ≢ N^Z ≡ 0",
    "m=4,5: N^# ≡ Ñ ≡ N ≢ N^Z ≡ 0",
    "m=6,7,8: N^# ≡ Ñ ≢ N ≡ N^Z ≡ 0",
    "m=9: N^# ≢ Ñ ≡ N ≡ N^Z ≡ 0",
];

fn c1(_: &TableSet) -> Outcome {
    let out = Command::new(env!("CARGO_BIN_EXE_nielsen"))
        .args(["compare", "--surface", "CP1", "--m-range", "2..9"])
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(out.status.success(), "exit status {}", out.status);
    let stdout = String::from_utf8(out.stdout).map_err(|e| e.to_string())?;
    let golden = include_str!("golden/compare_cp1.txt");
    ensure!(stdout == golden, "output differs from golden file:\n{stdout}");
    let expected: String = REFERENCE_ROWS.iter().map(|r| format!("{r}\n")).collect();
    ensure!(golden == expected, "golden file differs from the reference rows");
    Ok("CP1 m=2..9 matches the golden file and the reference rows".into())
}

fn c2(t: &TableSet) -> Outcome {
    let rp2 = space(Field::R, 2).unwrap();
    let h = t.named("hopfC").unwrap();
    let r = proj(t, &rp2, 3, &h, &t.zero(3, 2).unwrap());
    ensure!(
        (&r.n_sharp, &r.n_tilde, &r.n_plain, &r.n_z) == (&Finite(2), &Finite(2), &Finite(0), &Finite(0)),
        "values {} {} {} {}",
        r.n_sharp,
        r.n_tilde,
        r.n_plain,
        r.n_z
    );
    let lifts = [t.zero(3, 2).unwrap(), h.clone(), h.neg().unwrap()];
    let mut pairs = 0;
    for a in &lifts {
        for b in &lifts {
            let down = proj(t, &rp2, 3, a, b);
            let up = sph(t, 3, 2, a, b);
            let twice = |v: &InvariantValue| v.finite().map(|x| Finite(2 * x));
            ensure!(Some(down.n_sharp.clone()) == twice(&up.n_sharp), "N^# factor 2 fails for {a}, {b}");
            ensure!(Some(down.n_tilde.clone()) == twice(&up.n_tilde), "Ñ factor 2 fails for {a}, {b}");
            pairs += 1;
        }
    }
    Ok(format!("N^# = Ñ = 2, N = N^Z = 0; factor-2 relations on {pairs} pairs"))
}

fn c3(t: &TableSet) -> Outcome {
    let cp1 = space(Field::C, 1).unwrap();
    for m in [4, 5] {
        let els: Vec<SphereElement> = t
            .lookup(m, 3)
            .unwrap()
            .group
            .elements()
            .unwrap()
            .into_iter()
            .map(|value| SphereElement { m, q: 3, value })
            .collect();
        ensure!(els.len() == 2, "π_{m}(S^3) has {} elements", els.len());
        let mut nonzero = false;
        for a in &els {
            for b in &els {
                let r = proj(t, &cp1, m, a, b);
                ensure!(r.n_sharp == r.n_tilde && r.n_tilde == r.n_plain, "pointwise mismatch at m = {m}");
                nonzero |= r.n_plain != Finite(0);
            }
        }
        let v = equivalence_scan(t, &cp1, m).unwrap();
        let scan = (v.sharp_tilde.status, v.tilde_plain.status, v.plain_zero.status);
        ensure!(scan == (Status::Holds, Status::Holds, Status::Fails), "scan at m = {m}: {scan:?}");
        ensure!(nonzero, "N ≡ 0 pointwise at m = {m}");
    }
    Ok("m = 4, 5: pointwise (4 pairs each) and kernel scan agree on N^# ≡ Ñ ≡ N ≢ 0".into())
}

fn c4(t: &TableSet) -> Outcome {
    let chain = t.kernel_chain(9, 3, Field::R).map_err(|e| e.to_string())?;
    ensure!(chain.ker_gamma.is_whole().unwrap(), "Ker Γ ≠ Z_3");
    for c in 0..3 {
        let x = t.element(9, 3, vec![c]).unwrap();
        ensure!(t.gamma(&x).unwrap().is_zero() == Some(true), "Γ({c}) ≠ 0");
    }
    let rp3 = space(Field::R, 3).unwrap();
    let g = t.element(9, 3, vec![1]).unwrap();
    let r = proj(t, &rp3, 9, &t.zero(9, 3).unwrap(), &g);
    ensure!(r.n_tilde == Finite(0), "Ñ = {}", r.n_tilde);
    Ok("Ker Γ = π_9(S^3) = Z_3, Γ vanishes on all 3 elements".into())
}

fn c5(t: &TableSet) -> Outcome {
    let w = t.named("whitehead(5)").unwrap();
    let a = sph(t, 9, 5, &t.zero(9, 5).unwrap(), &w);
    ensure!(a.n_sharp == Finite(1) && a.n_tilde == Finite(0), "(a) N^# = {}, Ñ = {}", a.n_sharp, a.n_tilde);

    let eta5 = t.suspend_n(&t.named("hopfC").unwrap(), 3).unwrap();
    let zero = t.zero(6, 5).unwrap();
    let lifted = t.gamma(&eta5).unwrap();
    ensure!(lifted.is_zero() == Some(false), "(b) Γ(Eη) vanishes");
    let rp5 = space(Field::R, 5).unwrap();
    let b = proj(t, &rp5, 6, &zero, &eta5);
    ensure!(b.n_tilde == Finite(2) && b.n_plain == Finite(0), "(b) RP(5): Ñ = {}, N = {}", b.n_tilde, b.n_plain);
    let h = t.named("hopfH").unwrap().scale(24).unwrap();
    let b2 = sph(t, 7, 4, &t.zero(7, 4).unwrap(), &h);
    ensure!(b2.n_tilde == Finite(1) && b2.n_plain == Finite(0), "(b) HP(1): Ñ = {}, N = {}", b2.n_tilde, b2.n_plain);

    let ea = t.suspend(&t.named("alpha1_3").unwrap()).unwrap();
    let c = sph(t, 7, 4, &t.zero(7, 4).unwrap(), &ea);
    ensure!(c.n_plain == Finite(1) && c.n_z == Finite(0), "(c) N = {}, N^Z = {}", c.n_plain, c.n_z);
    Ok("(a) N^# = 1, Ñ = 0; (b) Ñ(f̃) = 1 so Ñ = R·1 = 2 on RP(5) with N = 0, HP(1) Ñ = 1, N = 0; (c) N = 1, N^Z = 0".into())
}

fn c6(_: &TableSet) -> Outcome {
    let mut cases = 0;
    for field in Field::ALL {
        for n_prime in 1..=48u32 {
            let congruence = match field {
                Field::R | Field::C => n_prime % 2 == 1,
                Field::H => n_prime % 24 == 23,
            };
            let fiber = fiber_projection_self_loose(field, n_prime).unwrap().verdict;
            ensure!(fiber == if congruence { Verdict::Loose } else { Verdict::NotLoose }, "{field}P({n_prime}) fiber");
            let n = field.d() * n_prime;
            for m in 1..=2 * n + 2 {
                let expected = (congruence || n <= 3) && (m, n) != (2, 2);
                ensure!(self_loose(field, m, n_prime).is_loose() == expected, "{field}P({n_prime}), m = {m}");
                cases += 1;
            }
        }
    }
    Ok(format!("{cases} (K, n', m) cases and 144 fiber cases"))
}

fn c7(_: &TableSet) -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for field in [Field::R, Field::C] {
        for n_prime in [1, 3, 5] {
            for i in 0..1000 {
                let x = sample_unit_vector(&mut rng, field, n_prime);
                let r = residual_not_parallel(&x).unwrap();
                ensure!(r > BigRational::zero(), "{field}P({n_prime}) sample {i}: residual 0 at {x}");
            }
        }
    }
    let (x, lambda) = quaternion_counterexample();
    ensure!(lambda == Quaternion::i(), "λ = {lambda}");
    ensure!(selfmap_s(&x).unwrap() == x.left_mul(&lambda), "s(x) ≠ i·x");
    Ok("6000 samples with positive residual; s(j, k) = i·(j, k) exactly".into())
}

fn c8(_: &TableSet) -> Outcome {
    let Kervaire::Exception(r) = kervaire_exception(Field::R, 16, 30) else {
        return Err("no exception at (R, 16, 30)".into());
    };
    ensure!((&r.r, &r.mcc, &r.n_sharp) == (&Finite(2), &Finite(1), &Finite(0)), "values {} {} {}", r.r, r.mcc, r.n_sharp);
    ensure!(r.hypothesis_notes.iter().any(|n| n.contains("non-Wecken")), "no non-Wecken flag");
    keep(*r);
    ensure!(
        matches!(wecken_status(&space(Field::R, 16).unwrap(), 30), WeckenStatus::FailsWithWitness(_)),
        "RP(16), m = 30 not failing"
    );
    let mut sampled = 0;
    for (field, n_prime) in [(Field::C, 1), (Field::C, 3), (Field::C, 5), (Field::H, 23), (Field::H, 47)] {
        for m in 1..=12 {
            if (m, field.d() * n_prime) == (2, 2) {
                continue;
            }
            ensure!(wecken_status(&space(field, n_prime).unwrap(), m) == WeckenStatus::Holds, "{field}P({n_prime}), m = {m}");
            sampled += 1;
        }
    }
    Ok(format!("exception at (R, 16, 30) flagged; Wecken holds on {sampled} sampled (K, n', m)"))
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 { a.abs() } else { gcd(b, a % b) }
}

fn tuples(orders: &[i64]) -> Vec<Vec<i64>> {
    orders.iter().fold(vec![vec![]], |acc, &c| {
        acc.into_iter().flat_map(|t| (0..c).map(move |a| [t.clone(), vec![a]].concat())).collect()
    })
}

fn fgab_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..200 {
        let orders: Vec<i64> = (0..rng.gen_range(0..=4)).map(|_| rng.gen_range(1..=10)).collect();
        let g = FgAbGroup::from_cyclic_orders(&orders).unwrap();
        let mut want = BTreeMap::new();
        for t in tuples(&orders) {
            let o = t.iter().zip(&orders).fold(1, |acc: i64, (&a, &c)| {
                let k = c / gcd(a, c);
                acc / gcd(acc, k) * k
            });
            *want.entry(o as u64).or_insert(0) += 1;
        }
        let mut got = BTreeMap::new();
        for x in g.elements().unwrap() {
            let ElementOrder::Finite(o) = x.order() else { return Err("infinite order in a finite group".into()) };
            *got.entry(o).or_insert(0) += 1;
        }
        ensure!(got == want, "element orders differ for {orders:?}");

        let e = g.torsion().last().copied().unwrap_or(1);
        let images: Vec<GroupElement> = g
            .moduli()
            .iter()
            .map(|&t| {
                let c = g.moduli().iter().map(|&m| rng.gen_range(0..m)).collect();
                g.element(c).unwrap().scale(e / gcd(e, t)).unwrap()
            })
            .collect();
        let h = Homomorphism::from_images(g.clone(), g.clone(), &images).unwrap();
        let ker = h.kernel().unwrap();
        let mut image = BTreeSet::new();
        let mut ker_size = 0;
        for x in tuples(&g.moduli()) {
            let y: Vec<i64> = (0..x.len())
                .map(|i| (0..x.len()).map(|j| h.matrix().get(i, j) * x[j]).sum::<i64>().rem_euclid(g.moduli()[i]))
                .collect();
            let zero = y.iter().all(|&c| c == 0);
            ensure!(ker.contains(&g.element(x).unwrap()).unwrap() == zero, "kernel membership differs");
            ker_size += zero as u64;
            image.insert(y);
        }
        ensure!(ker_size * image.len() as u64 == g.order().unwrap(), "|ker|·|im| ≠ |G|");
    }
    Ok("200 groups".into())
}

fn snf_identity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..500 {
        let (r, c) = (rng.gen_range(1..=6), rng.gen_range(1..=6));
        let rows: Vec<Vec<i64>> = (0..r).map(|_| (0..c).map(|_| rng.gen_range(-9..=9)).collect()).collect();
        let m = IntMatrix::from_rows(&rows, c).unwrap();
        let s = smith_normal_form(&m).map_err(|e| e.to_string())?;
        let d = s.u.mul(&m).and_then(|x| x.mul(&s.v)).map_err(|e| e.to_string())?;
        ensure!(d == s.d, "U·M·V ≠ D for {m:?}");
        let diag = s.diagonal();
        ensure!(diag.windows(2).all(|w| w[1] == 0 || (w[0] != 0 && w[1] % w[0] == 0)), "divisibility fails for {m:?}");
    }
    Ok("500 matrices".into())
}

fn validator() -> Outcome {
    let clean = validate(&parse(DEFAULT_TABLES).unwrap());
    ensure!(clean.is_clean(), "shipped dataset: {} violations", clean.violations.len());
    let faults = [
        ("hopf-diagram", "name hopfC 3 2 1", "name hopfC 3 2 2"),
        ("divisibility", "stem 8 0 2,2", "stem 8 0 4,2"),
        ("degree", "prod nu nu -> 6 1", "prod nu nu -> 7 1"),
        ("whitehead-order", "name whitehead(3) 5 3 0", "name whitehead(3) 5 3 1"),
    ];
    for (check, old, new) in faults {
        let text = DEFAULT_TABLES.replacen(old, new, 1);
        ensure!(text != DEFAULT_TABLES, "fault `{old}` not applied");
        let r = validate(&parse(&text).unwrap());
        ensure!(r.has(check), "{check} fault not detected");
    }
    let mut f = parse(DEFAULT_TABLES).unwrap();
    let e = f.entries.iter_mut().find(|e| (e.m, e.q) == (6, 3)).ok_or("no (6, 3) entry")?;
    e.generators[0].antip = Some(vec![-1]);
    ensure!(validate(&f).has("antipodal-parity"), "antipodal-parity fault not detected");
    Ok("shipped clean, 5 injected faults detected".into())
}

fn c9(t: &TableSet) -> Outcome {
    let a = fgab_oracle()?;
    let b = snf_identity()?;
    // reports from the remaining criteria plus every pair over the finite lift groups
    for (field, n_prime) in [(Field::R, 2), (Field::C, 1), (Field::R, 3), (Field::R, 5)] {
        let s = space(field, n_prime).unwrap();
        for m in 3..=9 {
            let Ok(e) = t.lookup(m, s.q) else { continue };
            let Ok(els) = e.group.elements() else { continue };
            let els: Vec<SphereElement> = els.into_iter().map(|value| SphereElement { m, q: s.q, value }).collect();
            for x in &els {
                for y in &els {
                    proj(t, &s, m, x, y);
                }
            }
        }
    }
    let reports = REPORTS.with(|v| v.borrow().clone());
    for r in &reports {
        let c = chain_check(r);
        ensure!(c.pass, "chain fails: {:?} on {} {} {}", c.violations, r.target, r.f1, r.f2);
        ensure!(dichotomy_holds(r), "dichotomy fails on {} {} {}", r.target, r.f1, r.f2);
    }
    let d = validator()?;
    Ok(format!("(i) {a}; (ii) {b}; (iii) chain and dichotomy on {} reports; (iv) {d}", reports.len()))
}

fn c10(t: &TableSet) -> Outcome {
    let r = sph(t, 1, 1, &t.element(1, 1, vec![3]).unwrap(), &t.element(1, 1, vec![5]).unwrap());
    ensure!(r.mcc == Finite(2) && r.mc == Finite(2), "m = n = 1: MCC = {}, MC = {}", r.mcc, r.mc);
    let w = t.named("whitehead(2)").unwrap();
    let r = sph(t, 3, 2, &w, &t.zero(3, 2).unwrap());
    ensure!(r.mc == Infinite, "whitehead(2): MC = {}", r.mc);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for _ in 0..10 {
        let n = rng.gen_range(2..=8);
        let a = t.element(n, n, vec![rng.gen_range(-4..=4)]).unwrap();
        let b = t.element(n, n, vec![rng.gen_range(-4..=4)]).unwrap();
        let r = sph(t, n, n, &a, &b);
        ensure!(r.chain().iter().all(|(_, v)| **v == r.mcc), "m = n = {n}: numbers differ");
    }
    Ok("MCC = MC = 2 for degrees 3, 5; MC = ∞ for [ι_2, ι_2]; 10 pairs with m = n agree".into())
}

type Criterion = (u32, &'static str, fn(&TableSet) -> Outcome);

fn main() {
    let start = Instant::now();
    let t = default_tables();
    // quiet the default panic printer; failures are reported below
    panic::set_hook(Box::new(|_| {}));
    let criteria: [Criterion; 10] = [
        (1, "CP1 equivalence table", c1),
        (2, "RP(2) chain at (3, 2)", c2),
        (3, "CP(1) m = 4, 5 oracle", c3),
        (4, "forced vanishing on π_9(S^3)", c4),
        (5, "separating witnesses", c5),
        (6, "looseness truth table", c6),
        (7, "self-map geometry", c7),
        (8, "Kervaire exception", c8),
        (9, "property suites", c9),
        (10, "sphere closed forms", c10),
    ];
    let mut failed = 0;
    for (n, title, f) in criteria {
        let outcome = panic::catch_unwind(AssertUnwindSafe(|| f(&t)))
            .unwrap_or_else(|p| Err(p.downcast_ref::<String>().cloned().unwrap_or_else(|| "panicked".into())));
        match outcome {
            Ok(detail) => println!("PASS {n:>2} {title}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL {n:>2} {title}: {why}");
            }
        }
    }
    println!("{} of 10 criteria pass ({:.1} s)", 10 - failed, start.elapsed().as_secs_f64());
    if failed > 0 {
        std::process::exit(1);
    }
}
