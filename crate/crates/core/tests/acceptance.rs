//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the lines are always printed; exits nonzero when the set of failing
//! criteria differs from `EXPECTED_FAILURES`.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use marked_groups::construct;
use marked_groups::detect::{betti, detect, verify_witness, Property, Verdict};
use marked_groups::gog;
use marked_groups::homo::{
    self, injective_radius_value, injectivity_radius, make_hom, Hom, HomMode,
};
use marked_groups::metric::{agreement_radius, Agreement};
use marked_groups::mr::{self, abelian_shortest_length};
use marked_groups::oracle::{small_cancellation_check, AbelianData};
use marked_groups::sl2::SL2Rep;
use marked_groups::surface::{lyndon_scan, SurfaceSpec};
use marked_groups::{MarkedGroup, Word};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criterion 3 asks for C'(1/8) words of lengths 6, 10 and 14 over two
/// letters, which do not exist (see the criterion's report line).
const EXPECTED_FAILURES: &[u32] = &[3];

const SEED: u64 = 0x5eed_2024;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

/// Pinned runtime bounds, in seconds, per criterion.
fn limit(id: u32) -> Duration {
    Duration::from_secs(match id {
        1 | 5 | 12 => 1,
        2 | 3 | 6 => 60,
        4 => 10,
        7 | 8 | 10 | 11 => 60,
        9 => 180,
        _ => 60,
    })
}

fn comm(a: &Word, b: &Word) -> Word {
    Word::commutator(a, b)
}

fn g(i: usize) -> Word {
    Word::gen(i)
}

// ---------- independent oracles ----------

/// Shortlex key in the letter order s1, s1^-1, s2, s2^-1, ...
fn key(raw: &[i32]) -> (usize, Vec<usize>) {
    let rank = |x: i32| 2 * (x.unsigned_abs() as usize - 1) + usize::from(x < 0);
    (raw.len(), raw.iter().map(|&x| rank(x)).collect())
}

/// All freely reduced raw words over `n` letters of length exactly `len`.
fn raw_words(n: i32, len: usize) -> Vec<Vec<i32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::new();
        for w in &out {
            for i in 1..=n {
                for x in [i, -i] {
                    if w.last() != Some(&-x) {
                        let mut v = w.clone();
                        v.push(x);
                        next.push(v);
                    }
                }
            }
        }
        out = next;
    }
    out
}

fn exponent_vector(raw: &[i32], n: usize) -> Vec<i64> {
    let mut e = vec![0; n];
    for &x in raw {
        e[x.unsigned_abs() as usize - 1] += i64::from(x.signum());
    }
    e
}

/// Naive free reduction with a stack.
fn free_reduce(raw: &[i32]) -> Vec<i32> {
    let mut st: Vec<i32> = Vec::new();
    for &x in raw {
        if st.last() == Some(&-x) {
            st.pop();
        } else {
            st.push(x);
        }
    }
    st
}

/// First length with a discrepancy between two relation predicates, and the
/// shortlex-least discrepancy there.
fn first_discrepancy(
    n: i32,
    max_len: usize,
    rel_a: impl Fn(&[i32]) -> bool,
    rel_b: impl Fn(&[i32]) -> bool,
) -> Option<Vec<i32>> {
    (1..=max_len).find_map(|len| {
        raw_words(n, len)
            .into_iter()
            .filter(|w| rel_a(w) != rel_b(w))
            .min_by_key(|w| key(w))
    })
}

fn agreement_text(a: &Agreement) -> String {
    match a {
        Agreement::Exact { v, witness } => format!("Exact({v}, {witness})"),
        Agreement::AtLeast { bound } => format!("AtLeast({bound})"),
    }
}

// ---------- criteria ----------

fn c1() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for i in 3..=9i64 {
        let got = agreement_radius(
            &MarkedGroup::cyclic(i),
            &MarkedGroup::integers_marked(&[1]),
            10,
        )
        .unwrap();
        let w = first_discrepancy(
            1,
            10,
            |r| exponent_vector(r, 1)[0] % i == 0,
            |r| exponent_vector(r, 1)[0] == 0,
        )
        .expect("discrepancy within 10");
        let want = Agreement::Exact {
            v: (i - 1) as usize,
            witness: Word::from_raw(&w),
        };
        ok &= got == want && w == vec![1; i as usize];
        parts.push(format!("i={i}:{}", agreement_text(&got)));
    }
    outcome(ok, parts.join(" "))
}

fn c2() -> Outcome {
    let mut parts = Vec::new();
    let mut ok = true;
    for i in 2..=7i64 {
        let got = agreement_radius(
            &MarkedGroup::integers_marked(&[1, i]),
            &MarkedGroup::free_abelian(2),
            8,
        )
        .unwrap();
        let w = first_discrepancy(
            2,
            i as usize + 1,
            |r| {
                let e = exponent_vector(r, 2);
                e[0] + i * e[1] == 0
            },
            |r| exponent_vector(r, 2) == [0, 0],
        )
        .expect("discrepancy within i+1");
        let want = Agreement::Exact {
            v: i as usize,
            witness: Word::from_raw(&w),
        };
        // the witness is s2 s1^-i up to the shortlex choice among its
        // inverse and rotations; check the exponent vector too
        let e = exponent_vector(&w, 2);
        ok &= got == want && e[0] == -i * e[1] && e[1].abs() == 1;
        parts.push(format!("i={i}:{}", agreement_text(&got)));
    }
    outcome(ok, parts.join(" "))
}

fn random_reduced(rng: &mut ChaCha8Rng, n: i32, len: usize) -> Word {
    loop {
        let mut raw: Vec<i32> = Vec::with_capacity(len);
        while raw.len() < len {
            let i = rng.gen_range(1..=n);
            let x = if rng.gen_bool(0.5) { i } else { -i };
            if raw.last() != Some(&-x) {
                raw.push(x);
            }
        }
        let w = Word::from_raw(&raw);
        if w.is_cyclically_reduced() {
            return w;
        }
    }
}

fn c3() -> Outcome {
    const TRIALS: usize = 20;
    const ATTEMPTS: usize = 2000;
    const LENGTHS: [usize; 4] = [6, 10, 14, 18];
    const RMAX: usize = 5;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let f3 = MarkedGroup::free(3);
    let mut good = 0;
    let mut exceeds = 0;
    let mut found_per_len = [0usize; 4];
    for _ in 0..TRIALS {
        let mut radii = Vec::new();
        for (li, &len) in LENGTHS.iter().enumerate() {
            let w = (0..ATTEMPTS)
                .map(|_| random_reduced(&mut rng, 2, len))
                .find(|w| {
                    w.primitive_root().map(|(_, k)| k == 1).unwrap_or(false)
                        && small_cancellation_check(std::slice::from_ref(w), 1.0 / 8.0)
                            .unwrap()
                            .holds
                });
            let Some(w) = w else {
                radii.push(None);
                continue;
            };
            found_per_len[li] += 1;
            let m = MarkedGroup::free(2)
                .remark_subgroup(&[g(1), g(2), w])
                .unwrap();
            radii.push(Some(agreement_radius(&m, &f3, RMAX).unwrap().radius()));
        }
        let complete: Option<Vec<usize>> = radii.iter().copied().collect();
        if let Some(r) = &complete {
            if r.windows(2).all(|p| p[0] <= p[1]) {
                good += 1;
            }
        }
        if radii[3].is_some_and(|r| r > 3) {
            exceeds += 1;
        }
    }
    outcome(
        good >= 18 && exceeds == TRIALS,
        format!(
            "C'(1/8) words found per length {LENGTHS:?}: {found_per_len:?} of {TRIALS} (<= {ATTEMPTS} samples each); \
             nondecreasing complete families {good}/{TRIALS} (need 18); radius > 3 at |w|=18 in {exceeds}/{TRIALS}; \
             a two-letter C'(1/8) word needs pieces < |w|/8, impossible for |w| in {{6,10,14}}"
        ),
    )
}

fn c4() -> Outcome {
    let f2z =
        construct::direct_product(&MarkedGroup::free(2), &MarkedGroup::free_abelian(1)).unwrap();
    let ct = (1..=2).find_map(|r| {
        let v = detect(&f2z, Property::CommutativeTransitive, r).unwrap();
        v.witness()
            .filter(|w| verify_witness(&f2z, Property::CommutativeTransitive, w))
            .map(|_| r)
    });
    let klein = construct::hnn(&MarkedGroup::free(1), &[g(1)], &[g(1).inverse()]).unwrap();
    let csa = (1..=4).find_map(|r| {
        let v = detect(&klein, Property::Csa, r).unwrap();
        v.witness()
            .filter(|w| verify_witness(&klein, Property::Csa, w))
            .map(|_| r)
    });
    let f2 = MarkedGroup::free(2);
    let free_ct = detect(&f2, Property::CommutativeTransitive, 6).unwrap();
    let free_csa = detect(&f2, Property::Csa, 6).unwrap();
    outcome(
        ct.is_some() && csa.is_some() && !free_ct.is_violated() && !free_csa.is_violated(),
        format!(
            "F2xZ CT witness at R={ct:?}; Klein CSA witness at R={csa:?}; F2 at R=6: CT {}, CSA {}",
            if free_ct.is_violated() {
                "violated"
            } else {
                "none"
            },
            if free_csa.is_violated() {
                "violated"
            } else {
                "none"
            }
        ),
    )
}

fn c5() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    let z = MarkedGroup::integers_marked(&[1]);
    let lim1 = betti(1, &[]);
    for i in 3..=9i64 {
        let b = betti(1, &[g(1).pow(i)]);
        ok &= b <= lim1;
        parts.push(format!("Z/{i}:{b}"));
    }
    let lim2 = betti(2, &[comm(&g(1), &g(2))]);
    for i in 2..=7i64 {
        // (Z,(1,i)) = <s1,s2 | s1^i s2^-1, [s1,s2]>
        let rels = [g(1).pow(i).mul(&g(2).inverse()), comm(&g(1), &g(2))];
        let m = MarkedGroup::integers_marked(&[1, i]);
        ok &= rels.iter().all(|r| m.relation_test(r));
        let b = betti(2, &rels);
        ok &= b <= lim2;
        parts.push(format!("(Z,(1,{i})):{b}"));
    }
    ok &= z.relation_test(&Word::empty());
    outcome(
        ok,
        format!("{} <= {lim1}; limits Z:{lim1} Z^2:{lim2}", parts.join(" ")),
    )
}

fn c6() -> Outcome {
    const INSTANCES: usize = 25;
    const SAMPLES: usize = 100;
    const W: u32 = 4;
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let mut ok = true;
    let mut no_witness = 0;
    let mut spot_ok = 0;
    for _ in 0..INSTANCES {
        let q = rng.gen_range(1..=3);
        let c = {
            let len = rng.gen_range(1..=4);
            random_reduced_any(&mut rng, len)
        };
        let a: Vec<Word> = (0..q)
            .map(|_| loop {
                let x = {
                    let len = rng.gen_range(1..=4);
                    random_reduced_any(&mut rng, len)
                };
                // non-commuting, checked by free reduction
                let raw: Vec<i32> =
                    [c.raw(), x.raw(), c.inverse().raw(), x.inverse().raw()].concat();
                if !free_reduce(&raw).is_empty() {
                    break x;
                }
            })
            .collect();
        let k = 2 * a.iter().map(Word::len).max().unwrap() as u32 + c.len() as u32;
        let rep = homo::baumslag_window_check(&a, &c, k, W).unwrap();
        if !rep.verdict.is_violated() {
            no_witness += 1;
        } else {
            ok = false;
        }
        let mut all = true;
        for _ in 0..SAMPLES {
            let mut raw = Vec::new();
            for j in 0..=q {
                let e = rng.gen_range(k..=k + W);
                for _ in 0..e {
                    raw.extend(c.raw());
                }
                if j < q {
                    raw.extend(a[j].raw());
                }
            }
            all &= !free_reduce(&raw).is_empty();
        }
        if all {
            spot_ok += 1;
        }
        ok &= all;
    }
    outcome(
        ok,
        format!("NoWitnessWithin({W}) on {no_witness}/{INSTANCES}; spot checks agree on {spot_ok}/{INSTANCES} ({SAMPLES} tuples each)"),
    )
}

fn random_reduced_any(rng: &mut ChaCha8Rng, len: usize) -> Word {
    let mut raw: Vec<i32> = Vec::new();
    while raw.len() < len {
        let i = rng.gen_range(1..=2);
        let x = if rng.gen_bool(0.5) { i } else { -i };
        if raw.last() != Some(&-x) {
            raw.push(x);
        }
    }
    Word::from_raw(&raw)
}

/// The genus-2 double, its retraction onto F2 and the twist along [a,b].
fn genus_two() -> (MarkedGroup, Hom, Word) {
    let f2 = MarkedGroup::free(2);
    let c = comm(&g(1), &g(2));
    let d = construct::double(&f2, &c).unwrap();
    let phi = make_hom(&d, &f2, vec![g(1), g(2), g(1), g(2)], HomMode::Presentation).unwrap();
    (d, phi, c)
}

const TWIST_RADIUS: usize = 4;

fn c7() -> Outcome {
    let (d, phi, c) = genus_two();
    let mut radii = Vec::new();
    for m in 0..=6i64 {
        let h = homo::dehn_twist(&d, &c, m).unwrap().then(&phi).unwrap();
        radii.push(injective_radius_value(
            &injectivity_radius(&h, TWIST_RADIUS).unwrap(),
        ));
    }
    let monotone = radii.windows(2).all(|p| p[0] <= p[1]);
    outcome(
        monotone && radii.iter().any(|&r| r >= 2),
        format!("injectivity radius of phi.tau^m, m=0..6, searched to R={TWIST_RADIUS}: {radii:?}"),
    )
}

fn c8() -> Outcome {
    let f2 = MarkedGroup::free(2);
    let m = construct::extend_centralizer(&f2, &comm(&g(1), &g(2)), 1).unwrap();
    let mut radii = Vec::new();
    for k in [1i64, 3, 10] {
        let h = homo::ec_discriminator(&m, &[k]).unwrap();
        radii.push(injective_radius_value(
            &injectivity_radius(&h, TWIST_RADIUS).unwrap(),
        ));
    }
    outcome(
        radii.windows(2).all(|p| p[0] <= p[1]) && radii[2] >= 2,
        format!("injectivity radius for k=1,3,10 searched to R={TWIST_RADIUS}: {radii:?}"),
    )
}

/// Largest radius at most 6 whose ball stays within this many elements.
const DETECT_BALL_BUDGET: usize = 1000;

fn c9() -> Outcome {
    let f2 = MarkedGroup::free(2);
    let z2 = MarkedGroup::free_abelian(2);
    let c = comm(&g(1), &g(2));
    let before = construct::amalgam(&f2, &z2, &[g(1).pow(2)], &[g(1)]).unwrap();
    let pulled = gog::pull_centralizers(
        &before.oracle().graph_oracle().unwrap().spec().clone(),
        0,
        true,
    )
    .unwrap();
    let corpus = vec![
        (
            "Z2*_Z Z2",
            construct::amalgam(&z2, &z2, &[g(1)], &[g(1)]).unwrap(),
        ),
        ("genus-2 double", construct::double(&f2, &c).unwrap()),
        (
            "centralizer-extension HNN",
            construct::hnn(&f2, &[c.clone()], &[c.clone()]).unwrap(),
        ),
        (
            "free product Z2*Z",
            construct::free_product(&z2, &MarkedGroup::free(1)).unwrap(),
        ),
        ("a^2 amalgam", before),
        ("a^2 amalgam pulled", gog::marked_group(&pulled).unwrap()),
    ];
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, m) in &corpus {
        let spec = m.oracle().graph_oracle().unwrap().spec().clone();
        let pass = gog::csa_criterion(&spec).unwrap().pass;
        let mut seen = None;
        let mut radius = 0;
        for r in 1..=6 {
            if m.ball_vertices(r).unwrap().len() > DETECT_BALL_BUDGET {
                break;
            }
            radius = r;
            let v = detect(m, Property::Csa, r).unwrap();
            if let Verdict::Violated(w) = v {
                assert!(
                    verify_witness(m, Property::Csa, &w)
                        || verify_witness(m, Property::CommutativeTransitive, &w)
                );
                seen = Some(r);
                break;
            }
        }
        ok &= pass == seen.is_none();
        parts.push(format!(
            "{name}: {} / {}",
            if pass { "PASS" } else { "FAIL" },
            match seen {
                Some(r) => format!("witness at R={r}"),
                None => format!("none to R={radius}"),
            }
        ));
    }
    outcome(ok, parts.join("; "))
}

/// Minimal l1 norm over the orbit of `v` under elementary moves, by BFS in
/// the box `[-6, 6]^d`.
fn brute_shortest(v: &[i64], memo: &mut HashMap<Vec<i64>, i64>) -> i64 {
    if let Some(&x) = memo.get(v) {
        return x;
    }
    let d = v.len();
    let mut seen: BTreeSet<Vec<i64>> = BTreeSet::from([v.to_vec()]);
    let mut queue = VecDeque::from([v.to_vec()]);
    let mut best = i64::MAX;
    while let Some(x) = queue.pop_front() {
        best = best.min(x.iter().map(|t| t.abs()).sum());
        let mut moves = Vec::new();
        for i in 0..d {
            let mut y = x.clone();
            y[i] = -y[i];
            moves.push(y);
            for j in 0..d {
                if i != j {
                    for s in [1, -1] {
                        let mut y = x.clone();
                        y[i] += s * x[j];
                        moves.push(y);
                    }
                }
            }
        }
        for y in moves {
            if y.iter().all(|t| t.abs() <= 6) && seen.insert(y.clone()) {
                queue.push_back(y);
            }
        }
    }
    for s in &seen {
        memo.insert(s.clone(), best);
    }
    best
}

fn c10() -> Outcome {
    let data = AbelianData::from_moduli(&[0, 0, 4]);
    let d = mr::abelian_mr(&data).unwrap();
    let chain = d.vertices.len() == 3
        && d.edges.len() == 2
        && (
            d.edges[0].from,
            d.edges[0].to,
            d.edges[1].from,
            d.edges[1].to,
        ) == (0, 1, 1, 2);
    // Smith check: s1, s2 map to a basis of Z^2, s3 (order 4) to zero;
    // then onto Z
    let first = &d.edges[0].hom;
    let img: Vec<Vec<i64>> = first.images.iter().map(|w| w.exponent_sums(2)).collect();
    let det = img[0][0] * img[1][1] - img[0][1] * img[1][0];
    let maps_ok = det.abs() == 1 && img[2] == [0, 0];
    let second: Vec<i64> = d.edges[1]
        .hom
        .images
        .iter()
        .map(|w| w.exponent_sums(1)[0])
        .collect();
    let onto_z = second.iter().fold(0i64, |a, &b| num_gcd(a, b)) == 1;
    let revalidate = d.edges.iter().all(|e| {
        make_hom(
            &e.hom.source,
            &e.hom.target,
            e.hom.images.clone(),
            HomMode::Presentation,
        )
        .is_ok()
    });
    let leaves = |s: SurfaceSpec| {
        let dg = mr::surface_mr(s).unwrap();
        let ls = dg.leaves();
        (ls.len(), dg.vertices[ls[0]].name.clone())
    };
    let (o2, _) = leaves(SurfaceSpec::orientable(2));
    let (n4, _) = leaves(SurfaceSpec::non_orientable_chi(-2).unwrap());
    let (n3, n3_leaf) = leaves(SurfaceSpec::non_orientable_chi(-1).unwrap());
    let counts_ok = o2 == 1 && n4 == 2 && n3 == 1 && n3_leaf == "Z^2";
    let mut memo = HashMap::new();
    let mut checked = 0;
    let mut gcd_ok = true;
    for dim in 1..=3u32 {
        for idx in 0..13i64.pow(dim) {
            let v: Vec<i64> = (0..dim).map(|k| (idx / 13i64.pow(k)) % 13 - 6).collect();
            if v.iter().all(|&x| x == 0) {
                continue;
            }
            checked += 1;
            gcd_ok &= abelian_shortest_length(&v).unwrap() == brute_shortest(&v, &mut memo);
        }
    }
    outcome(
        chain && maps_ok && onto_z && revalidate && counts_ok && gcd_ok,
        format!(
            "abelian chain {} (Smith maps {}, onto Z {}); leaves S_2:{o2} N_4:{n4} N_3:{n3} ({n3_leaf}); \
             shortest length = brute force on {checked} vectors: {gcd_ok}",
            if chain { "3-vertex" } else { "malformed" },
            if maps_ok { "ok" } else { "bad" },
            onto_z
        ),
    )
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        num_gcd(b, a % b)
    }
}

fn c11() -> Outcome {
    let v = lyndon_scan(3).unwrap();
    outcome(
        v == Verdict::NoWitnessWithin(3),
        format!("lyndon_scan(3) = {v:?}"),
    )
}

fn c12() -> Outcome {
    let (d, phi, c) = genus_two();
    // the plain retraction kills a abar^-1; twisting once first keeps it alive
    let h = homo::dehn_twist(&d, &c, 1).unwrap().then(&phi).unwrap();
    let rep = SL2Rep::sanov();
    let aab = g(1).mul(&g(3).inverse());
    let witnesses = vec![
        g(1),
        comm(&g(1), &g(2)),
        aab.clone(),
        aab.conjugate_by(&g(2)),
        aab.conjugate_by(&g(2).inverse()),
        aab.conjugate_by(&g(2).pow(2)),
    ];
    let certified = homo::sl2_certify(&h, &rep, &witnesses).unwrap();
    // exact re-verification with big integers, independent of the certifier
    let rels = d.presentation().unwrap().to_vec();
    let rel_ok = rels.iter().all(|r| rep.eval(&h.apply(r)).is_identity());
    let wit_ok = witnesses
        .iter()
        .all(|w| !rep.eval(&h.apply(w)).is_identity());
    let plain_kills = rep.eval(&phi.apply(&aab)).is_identity();
    outcome(
        certified && rel_ok && wit_ok && plain_kills,
        format!(
            "twisted retraction certifies {} witnesses over p={}; relators map to I: {rel_ok}; untwisted retraction kills a abar^-1: {plain_kills}",
            witnesses.len(),
            rep.modulus()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: Vec<(u32, &str, fn() -> Outcome)> = vec![
        (1, "metric exactness, cyclic family", c1),
        (2, "metric exactness, (Z,(1,i)) family", c2),
        (3, "random-marking convergence", c3),
        (4, "CT/CSA detectors", c4),
        (5, "Betti monotonicity", c5),
        (6, "Baumslag window", c6),
        (7, "Dehn-twist convergence", c7),
        (8, "centralizer-extension discrimination", c8),
        (9, "CSA criterion cross-validation", c9),
        (10, "MR diagrams", c10),
        (11, "Lyndon scan", c11),
        (12, "SL2 certificates", c12),
    ];
    let filter: Option<u32> = std::env::args()
        .skip(1)
        .find_map(|a| a.strip_prefix("C").and_then(|x| x.parse().ok()));
    let mut failed = Vec::new();
    for (id, name, f) in criteria {
        if filter.is_some_and(|x| x != id) {
            continue;
        }
        let t = Instant::now();
        let o = f();
        let el = t.elapsed();
        let in_time = el <= limit(id);
        let pass = o.pass && in_time;
        println!(
            "C{id:<2} {} {name}: {} [{:.2}s, limit {}s{}]",
            if pass { "PASS" } else { "FAIL" },
            o.detail,
            el.as_secs_f64(),
            limit(id).as_secs(),
            if in_time { "" } else { ", over time" }
        );
        if !pass {
            failed.push(id);
        }
    }
    let expected: Vec<u32> = EXPECTED_FAILURES
        .iter()
        .copied()
        .filter(|x| filter.is_none_or(|f| f == *x))
        .collect();
    if failed == expected {
        println!("acceptance: failures match the expected set {expected:?}");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failing {failed:?}, expected {expected:?}");
        ExitCode::FAILURE
    }
}
