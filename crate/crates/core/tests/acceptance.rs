//! Acceptance gate: one line per criterion.
//!
//! Run with `cargo test --test acceptance`; add `-- --extended` (or set
//! `LINGEO_EXTENDED=1`) to include the q = 3 Baer instance.

use std::collections::{HashSet, VecDeque};
use std::process::ExitCode;
use std::time::Instant;

use lingeo::claims::{run_claim, ClaimReport, Verdict};
use lingeo::geomaut::{barlotti_cofman, fold_map_default, geometric_group, phi_shear, qarc_duality};
use lingeo::gf::field_of_order;
use lingeo::graphauto::{are_isomorphic, canonical_form, ColoredGraph};
use lingeo::linrep::{nvt_check, LinRep};
use lingeo::permgrp::{Perm, PermGroup};
use lingeo::pointsets::{closure, construct_named, PointSet};
use lingeo::projspace::{ProjPoint, ProjSpace};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Exact equality is the tolerance for every group order below.
const RELABELINGS_PER_GRAPH: usize = 20;
const MAX_BRUTE_FORCE_ORDER: usize = 10_000;
const SEED: u64 = 0x5eed;

enum Outcome {
    Pass,
    Fail(String),
    /// The literal statement is false; the string records what was observed.
    KnownFalse(String),
    Skipped(&'static str),
    Documented(&'static str),
}

fn claim(id: &str, extended: bool) -> ClaimReport {
    run_claim(id, extended).unwrap().report
}

fn claim_outcome(r: &ClaimReport) -> Outcome {
    if r.verdict == Verdict::Pass {
        Outcome::Pass
    } else {
        let failed: Vec<&str> = r.checks.iter().filter(|c| !c.pass).map(|c| c.name.as_str()).collect();
        Outcome::Fail(failed.join("; "))
    }
}

fn rep(name: &str, n: usize, q: u32) -> LinRep {
    LinRep::build(&construct_named(name, n, &field_of_order(q).unwrap(), None).unwrap()).unwrap()
}

fn c1() -> Outcome {
    let r = claim("two-lines-q3", false);
    let i = &r.instances[0];
    match (claim_outcome(&r), i.aut_order, i.geometric_order) {
        (Outcome::Pass, Some(11664), Some(3888)) => Outcome::Pass,
        (Outcome::Pass, a, g) => Outcome::Fail(format!("orders {a:?} / {g:?}")),
        (other, _, _) => other,
    }
}

fn c4() -> Outcome {
    // the literal criterion, instance by instance
    let mut holds = Vec::new();
    for name in ["conic_arc", "two_lines", "frame"] {
        let r = nvt_check(&rep(name, 2, 3));
        holds.push((name, r.applicable(), r.certificate_holds(), r.points_with_witness.len()));
    }
    let census = vec![("conic_arc", false, false, 27), ("two_lines", true, true, 0), ("frame", false, false, 27)];
    if holds != census {
        return Outcome::Fail(format!("unexpected census {holds:?}"));
    }
    match claim_outcome(&claim("nvt-suite", false)) {
        Outcome::Pass => Outcome::KnownFalse(
            "tangent cover fails for conic_arc and frame at q=3 and the certificate then appears at all 27 points; \
             two_lines q=3 (and the extra premise-satisfying instances) pass"
                .into(),
        ),
        other => other,
    }
}

/// Brute-force |Aut(T*_2(K))| at q = 2 over all 8! permutations of AG(3, 2),
/// and the geometric order as 8 times the number of invertible matrices fixing K.
fn q2_oracle(k: &[Vec<u32>]) -> (u64, u64) {
    let aff: Vec<[u32; 3]> = (0..8).map(|i| [i & 1, i >> 1 & 1, i >> 2 & 1]).collect();
    let idx = |v: [u32; 3]| (v[0] | v[1] << 1 | v[2] << 2) as usize;
    let mut lines: HashSet<(usize, usize)> = HashSet::new();
    for d in k {
        for (i, a) in aff.iter().enumerate() {
            let j = idx([a[0] ^ d[0], a[1] ^ d[1], a[2] ^ d[2]]);
            lines.insert((i.min(j), i.max(j)));
        }
    }
    let line_list: Vec<(usize, usize)> = lines.iter().copied().collect();
    let mut perm: Vec<usize> = (0..8).collect();
    let mut aut = 0u64;
    heap_permutations(&mut perm, 8, &mut |p| {
        if line_list.iter().all(|&(a, b)| lines.contains(&(p[a].min(p[b]), p[a].max(p[b])))) {
            aut += 1;
        }
    });
    let kset: HashSet<[u32; 3]> = k.iter().map(|v| [v[0], v[1], v[2]]).collect();
    let mut geo = 0u64;
    for m in 0u32..512 {
        let row = |r: u32| [(m >> (3 * r)) & 1, (m >> (3 * r + 1)) & 1, (m >> (3 * r + 2)) & 1];
        let apply = |v: &[u32; 3]| {
            let mut out = [0u32; 3];
            for (i, x) in v.iter().enumerate() {
                let r = row(i as u32);
                for j in 0..3 {
                    out[j] ^= x & r[j];
                }
            }
            out
        };
        let images: HashSet<[u32; 3]> = aff.iter().map(apply).collect();
        if images.len() == 8 && kset.iter().all(|v| kset.contains(&apply(v))) {
            geo += 1;
        }
    }
    (aut, 8 * geo)
}

fn heap_permutations(a: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == 1 {
        f(a);
        return;
    }
    for i in 0..k {
        heap_permutations(a, k - 1, f);
        let j = if k % 2 == 0 { i } else { 0 };
        a.swap(j, k - 1);
    }
}

fn c6() -> Outcome {
    let r = claim("q2-exhaustive", false);
    let field = field_of_order(2).unwrap();
    let plane = ProjSpace::new(2, &field).unwrap();
    let pts: Vec<Vec<u32>> = plane.all_points().iter().map(|p| p.indices()).collect();
    let mut equal = Vec::new();
    for (mask, inst) in (1u32..128).zip(&r.instances) {
        let k: Vec<Vec<u32>> = (0..7).filter(|i| mask >> i & 1 == 1).map(|i| pts[i].clone()).collect();
        let (aut, geo) = q2_oracle(&k);
        if inst.aut_order != Some(aut as u128) || inst.geometric_order != Some(geo as u128) {
            return Outcome::Fail(format!("{} disagrees with brute force ({aut}, {geo})", inst.set));
        }
        if aut == geo {
            // over GF(2) three points are collinear iff they sum to zero
            let m = k.len();
            let mut collinear_triples = 0;
            for a in 0..m {
                for b in a + 1..m {
                    for c in b + 1..m {
                        collinear_triples += (0..3).all(|i| k[a][i] ^ k[b][i] ^ k[c][i] == 0) as usize;
                    }
                }
            }
            equal.push((k.len(), aut, collinear_triples));
        }
    }
    let triangles = equal.iter().filter(|e| **e == (3, 48, 0)).count();
    let line_plus_point = equal.iter().filter(|e| **e == (4, 48, 1)).count();
    if r.verdict == Verdict::Fail && equal.len() == 56 && triangles == 28 && line_plus_point == 28 {
        Outcome::KnownFalse(
            "56 of 127 sets have |Aut| = |geometric| = 48: the 28 triangles and their complements, the 28 sets of a line plus one point off it; \
             brute force over S_8 and AGL(3,2) agrees on all 127 sets"
                .into(),
        )
    } else if r.verdict == Verdict::Pass {
        Outcome::Pass
    } else {
        Outcome::Fail(format!("unexpected census: {} equal sets, {triangles} triangles, {line_plus_point} line-plus-point sets, verdict {:?}", equal.len(), r.verdict))
    }
}

fn field_axioms() -> Result<(), String> {
    for q in [2u32, 3, 4, 5, 7, 8, 9, 11, 13, 16] {
        let f = field_of_order(q).unwrap();
        let els: Vec<_> = f.elements().collect();
        let (zero, one) = (els[0], els[1]);
        for &a in &els {
            let ok_unit = f.add(a, zero) == a && f.mul(a, one) == a && f.add(a, f.neg(a)) == zero;
            let ok_inv = a == zero || f.mul(a, f.inv(a).unwrap()) == one;
            if !ok_unit || !ok_inv {
                return Err(format!("GF({q}) identities fail at {a:?}"));
            }
            for &b in &els {
                if f.add(a, b) != f.add(b, a) || f.mul(a, b) != f.mul(b, a) {
                    return Err(format!("GF({q}) commutativity"));
                }
                for &c in &els {
                    let assoc = f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
                        && f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c));
                    let dist = f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c));
                    if !assoc || !dist {
                        return Err(format!("GF({q}) associativity or distributivity"));
                    }
                }
            }
        }
    }
    Ok(())
}

fn subset(a: &PointSet, b: &PointSet) -> bool {
    a.members().iter().all(|p| b.contains(p))
}

fn closure_laws(rng: &mut ChaCha8Rng) -> Result<(), String> {
    for q in [2u32, 3, 4] {
        let field = field_of_order(q).unwrap();
        let plane = ProjSpace::new(2, &field).unwrap();
        let all = plane.all_points();
        let frame = construct_named("frame", 2, &field, None).unwrap().hyperplane_points();
        for _ in 0..10 {
            let mut s = frame.clone();
            let extra = rng.gen_range(0..3);
            s.extend(all.choose_multiple(rng, extra).cloned());
            let mut t = s.clone();
            let extra = rng.gen_range(0..4);
            t.extend(all.choose_multiple(rng, extra).cloned());
            let (s, t) = (
                PointSet::from_hyperplane_points(2, &field, s).unwrap(),
                PointSet::from_hyperplane_points(2, &field, t).unwrap(),
            );
            let cs = closure(&s).map_err(|e| e.to_string())?;
            let ct = closure(&t).map_err(|e| e.to_string())?;
            if !subset(&s, &cs) || closure(&cs).unwrap() != cs || !subset(&cs, &ct) {
                return Err(format!("closure law fails in PG(2,{q})"));
            }
        }
    }
    Ok(())
}

fn petersen() -> ColoredGraph {
    let mut e = Vec::new();
    for i in 0..5u32 {
        e.push((i, (i + 1) % 5));
        e.push((i, i + 5));
        e.push((i + 5, (i + 2) % 5 + 5));
    }
    ColoredGraph::uncolored(10, &e).unwrap()
}

fn canonical_invariance(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let mut random_edges = Vec::new();
    for a in 0..30u32 {
        for b in a + 1..30 {
            if rng.gen_bool(0.2) {
                random_edges.push((a, b));
            }
        }
    }
    let graphs = vec![
        ("petersen", petersen()),
        ("random", ColoredGraph::uncolored(30, &random_edges).unwrap()),
        ("two_lines q=3", rep("two_lines", 2, 3).incidence_graph().colored(true)),
        ("hyperoval q=4", rep("hyperoval", 2, 4).incidence_graph().colored(false)),
    ];
    for (name, g) in graphs {
        let cf = canonical_form(&g);
        let n = g.num_vertices();
        for _ in 0..RELABELINGS_PER_GRAPH {
            let mut images: Vec<u32> = (0..n as u32).collect();
            images.shuffle(rng);
            let h = g.relabel(&Perm::from_images(images).unwrap());
            if canonical_form(&h) != cf {
                return Err(format!("{name}: canonical form changed under relabeling"));
            }
            match are_isomorphic(&g, &h) {
                Some(m) if g.relabel(&m) == h => {}
                _ => return Err(format!("{name}: isomorphism not found")),
            }
        }
    }
    Ok(())
}

fn closure_size(gens: &[Perm], degree: usize) -> Option<usize> {
    let id = Perm::identity(degree);
    let mut seen: HashSet<Perm> = HashSet::from([id.clone()]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.then(g);
            if seen.insert(y.clone()) {
                if seen.len() > MAX_BRUTE_FORCE_ORDER {
                    return None;
                }
                queue.push_back(y);
            }
        }
    }
    Some(seen.len())
}

fn group_orders(rng: &mut ChaCha8Rng) -> Result<(), String> {
    let mut tested = 0;
    while tested < 60 {
        let degree = rng.gen_range(2..=8);
        let gens: Vec<Perm> = (0..rng.gen_range(1..=3))
            .map(|_| {
                let mut v: Vec<u32> = (0..degree as u32).collect();
                // sparse permutations keep many groups small
                for _ in 0..rng.gen_range(1..=2) {
                    let (a, b) = (rng.gen_range(0..degree), rng.gen_range(0..degree));
                    v.swap(a, b);
                }
                Perm::from_images(v).unwrap()
            })
            .collect();
        let Some(size) = closure_size(&gens, degree) else { continue };
        let g = PermGroup::new(degree, gens).unwrap();
        if g.order() != size.into() {
            return Err(format!("order {} differs from closure size {size}", g.order()));
        }
        tested += 1;
    }
    Ok(())
}

fn equivariance() -> Result<(), String> {
    let mut produced = Vec::new();
    for (name, n, q) in [
        ("two_lines", 2, 3),
        ("two_lines", 2, 4),
        ("hyperoval", 2, 4),
        ("three_lines_rem3", 3, 3),
        ("baer_subplane", 2, 4),
    ] {
        let t = rep(name, n, q);
        for a in geometric_group(&t).generators {
            produced.push((format!("{name} q={q} geometric"), t.clone(), a));
        }
    }
    for q in [3u32, 4] {
        let t = rep("two_lines", 2, q);
        for m in t.field().elements().collect::<Vec<_>>() {
            produced.push((format!("shear q={q}"), t.clone(), phi_shear(&t, m).unwrap()));
        }
    }
    let t = rep("point", 2, 4);
    let qp = ProjPoint::from_indices(t.field(), &[0, 0, 1, 0]).unwrap();
    produced.push(("fold q=4".into(), t.clone(), fold_map_default(&t, &qp).unwrap()));
    let t = rep("baer_subplane", 2, 4);
    for a in barlotti_cofman(&t).unwrap().stabilizer(&t).generators {
        produced.push(("PΓL(7,2)_B".into(), t.clone(), a));
    }
    for (label, t, a) in &produced {
        if !a.verify(t) || !t.incidence_graph().colored(false).is_automorphism(&a.vertex_perm()) {
            return Err(format!("{label}: incidence not preserved"));
        }
    }
    for q in [2u32, 4] {
        let t = rep("qarc_parabola", 2, q);
        if !t.incidence_graph().colored(true).is_automorphism(&qarc_duality(&t).unwrap()) {
            return Err(format!("duality q={q}: edges not preserved"));
        }
    }
    Ok(())
}

fn c14() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let suites: [(&str, Result<(), String>); 5] = [
        ("field axioms", field_axioms()),
        ("closure laws", closure_laws(&mut rng)),
        ("canonical form", canonical_invariance(&mut rng)),
        ("group orders", group_orders(&mut rng)),
        ("equivariance", equivariance()),
    ];
    let failed: Vec<String> = suites.into_iter().filter_map(|(n, r)| r.err().map(|e| format!("{n}: {e}"))).collect();
    if failed.is_empty() {
        Outcome::Pass
    } else {
        Outcome::Fail(failed.join("; "))
    }
}

fn main() -> ExitCode {
    let extended = std::env::args().any(|a| a == "--extended" || a == "--ignored" || a == "--include-ignored")
        || std::env::var("LINGEO_EXTENDED").is_ok_and(|v| v == "1");
    let criteria: Vec<(u32, &str, Box<dyn Fn() -> Outcome>)> = vec![
        (1, "two-lines-q3", Box::new(c1)),
        (2, "phi-family", Box::new(|| claim_outcome(&claim("phi-family", false)))),
        (3, "rem1-duality", Box::new(|| claim_outcome(&claim("rem1-duality", false)))),
        (4, "nvt-suite", Box::new(c4)),
        (5, "hoofd1-hyperoval-q4", Box::new(|| claim_outcome(&claim("hoofd1-hyperoval-q4", false)))),
        (6, "q2-exhaustive", Box::new(c6)),
        (7, "planes-q3", Box::new(|| claim_outcome(&claim("planes-q3", false)))),
        (8, "threelines-q3", Box::new(|| claim_outcome(&claim("threelines-q3", false)))),
        (9, "baer-q2", Box::new(|| claim_outcome(&claim("baer-q2", false)))),
        (10, "fano-in-q8", Box::new(|| claim_outcome(&claim("fano-in-q8", false)))),
        (11, "split-isom", Box::new(|| claim_outcome(&claim("split-isom", false)))),
        (
            12,
            "baer-q3",
            Box::new(move || {
                if extended {
                    claim_outcome(&claim("baer-q3", true))
                } else {
                    Outcome::Skipped("extended; pass --extended or set LINGEO_EXTENDED=1")
                }
            }),
        ),
        (
            13,
            "pg33-in-pg39",
            Box::new(|| match claim("pg33-in-pg39", false).verdict {
                Verdict::Documented => Outcome::Documented("expected ratio 3, not computed"),
                _ => Outcome::Fail("expected a documented-only report".into()),
            }),
        ),
        (14, "property-suites", Box::new(c14)),
    ];
    let mut unexpected = 0;
    for (num, id, run) in &criteria {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        let line = match &outcome {
            Outcome::Pass => "PASS".to_string(),
            Outcome::Fail(why) => {
                unexpected += 1;
                format!("FAIL {why}")
            }
            Outcome::KnownFalse(why) => format!("FAIL (statement false as written) {why}"),
            Outcome::Skipped(why) => format!("SKIPPED {why}"),
            Outcome::Documented(why) => format!("DOCUMENTED {why}"),
        };
        println!("criterion {num:>2} {id}: {line} [{secs:.2} s]");
    }
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
