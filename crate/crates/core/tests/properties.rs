use num_bigint::BigUint;
use num_traits::Zero;
use proptest::prelude::*;

use lingeo::geomaut::{extend_to_infinity, geometric_group, induced_action, is_geometric, GeomAut};
use lingeo::gf::{field_of_order, FieldElement};
use lingeo::graphauto::{automorphism_group, canonical_form, ColoredGraph};
use lingeo::linrep::{nvt_check, LinRep};
use lingeo::permgrp::{Perm, PermGroup};
use lingeo::pointsets::{closure, construct_named, PointSet};
use lingeo::projspace::{ProjPoint, ProjSpace, SemilinearMap, Subspace};

const FIELDS: [u32; 10] = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16];

fn rep(name: &str, n: usize, q: u32) -> LinRep {
    LinRep::build(&construct_named(name, n, &field_of_order(q).unwrap(), None).unwrap()).unwrap()
}

fn shuffle(n: usize, seed: u64) -> Perm {
    let mut v: Vec<u32> = (0..n as u32).collect();
    let mut s = seed;
    for i in (1..n).rev() {
        s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        v.swap(i, (s >> 33) as usize % (i + 1));
    }
    Perm::from_images(v).unwrap()
}

fn word(gens: &[GeomAut], letters: &[usize], t: &LinRep) -> GeomAut {
    letters.iter().fold(GeomAut::identity(t), |acc, &i| acc.then(&gens[i % gens.len()]))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_laws(qi in 0usize..FIELDS.len(), a in 0u32..256, b in 0u32..256, c in 0u32..256, e in 0u32..8) {
        let f = field_of_order(FIELDS[qi]).unwrap();
        let q = f.q();
        let (a, b, c) = (f.element(a % q).unwrap(), f.element(b % q).unwrap(), f.element(c % q).unwrap());
        prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
        prop_assert_eq!(f.mul(f.mul(a, b), c), f.mul(a, f.mul(b, c)));
        let e = e % f.h();
        prop_assert_eq!(f.frob(f.mul(a, b), e), f.mul(f.frob(a, e), f.frob(b, e)));
        prop_assert_eq!(f.frob(f.add(a, b), e), f.add(f.frob(a, e), f.frob(b, e)));
        let mut x = a;
        for _ in 0..f.h() {
            x = f.frob(x, 1);
        }
        prop_assert_eq!(x, a);
    }

    #[test]
    fn semilinear_maps_preserve_lines(qi in 0usize..4, entries in proptest::collection::vec(0u32..256, 9), e in 0u32..4, pts in proptest::collection::vec(0usize..1000, 3)) {
        let f = field_of_order([2u32, 3, 4, 9][qi]).unwrap();
        let q = f.q();
        let m: Vec<Vec<FieldElement>> = entries.chunks(3).map(|r| r.iter().map(|x| f.element(x % q).unwrap()).collect()).collect();
        let Ok(g) = SemilinearMap::new(&f, m, e % f.h()) else { return Ok(()) };
        let space = ProjSpace::new(2, &f).unwrap();
        let n = space.num_points();
        let (a, b, c) = (space.point(pts[0] % n), space.point(pts[1] % n), space.point(pts[2] % n));
        let collinear = |x: &ProjPoint, y: &ProjPoint, z: &ProjPoint| Subspace::span_points(&f, [x, y, z]).unwrap().dim() <= 1;
        let (ga, gb, gc) = (g.apply_point(&f, &a), g.apply_point(&f, &b), g.apply_point(&f, &c));
        prop_assert_eq!(collinear(&a, &b, &c), collinear(&ga, &gb, &gc));
        let back = g.then(&f, &g.inverse(&f));
        prop_assert!(back.is_identity(&f));
    }

    #[test]
    fn closure_is_idempotent(qi in 0usize..3, extra in proptest::collection::vec(0usize..100, 0..4)) {
        let f = field_of_order([2u32, 3, 4][qi]).unwrap();
        let space = ProjSpace::new(2, &f).unwrap();
        let mut pts = construct_named("frame", 2, &f, None).unwrap().hyperplane_points();
        pts.extend(extra.iter().map(|&i| space.point(i % space.num_points())));
        let s = PointSet::from_hyperplane_points(2, &f, pts).unwrap();
        let c = closure(&s).unwrap();
        prop_assert!(s.members().iter().all(|p| c.contains(p)));
        prop_assert_eq!(closure(&c).unwrap(), c);
    }

    #[test]
    fn canonical_form_and_order_survive_relabeling(seed in any::<u64>()) {
        let g = rep("two_lines", 2, 3).incidence_graph().colored(true);
        let h = g.relabel(&shuffle(g.num_vertices(), seed));
        prop_assert!(canonical_form(&g) == canonical_form(&h));
        prop_assert_eq!(automorphism_group(&g).order, automorphism_group(&h).order);
    }

    #[test]
    fn geometric_elements_round_trip(letters in proptest::collection::vec(0usize..64, 1..6)) {
        let t = rep("hyperoval", 2, 4);
        let gens = geometric_group(&t).generators;
        let a = word(&gens, &letters, &t);
        prop_assert!(a.verify(&t));
        prop_assert!(extend_to_infinity(&t, &a).is_total());
        let f = is_geometric(&t, &a).unwrap();
        prop_assert_eq!(induced_action(&t, &f).unwrap(), a);
    }

    #[test]
    fn group_order_divides_factorial(seeds in proptest::collection::vec(any::<u64>(), 1..4), degree in 2usize..9) {
        let gens: Vec<Perm> = seeds.iter().map(|&s| shuffle(degree, s)).collect();
        let g = PermGroup::new(degree, gens.clone()).unwrap();
        let fact: BigUint = (1..=degree as u32).map(BigUint::from).product();
        prop_assert!((fact % g.order()).is_zero());
        let sizes: BigUint = g.chain().orbit_sizes().into_iter().map(BigUint::from).product();
        prop_assert_eq!(sizes, g.order());
        for a in &gens {
            for b in &gens {
                prop_assert!(g.contains(&a.then(b)).unwrap());
            }
        }
    }

    #[test]
    fn graph6_round_trip(n in 1usize..40, bits in proptest::collection::vec(any::<bool>(), 780)) {
        let mut edges = Vec::new();
        let mut k = 0;
        for a in 0..n as u32 {
            for b in a + 1..n as u32 {
                if bits[k] {
                    edges.push((a, b));
                }
                k += 1;
            }
        }
        let g = ColoredGraph::uncolored(n, &edges).unwrap();
        prop_assert_eq!(ColoredGraph::from_graph6(&g.to_graph6()).unwrap(), g);
    }
}

#[test]
fn certificate_rules_out_class_swaps() {
    for (name, q) in [("two_lines", 3u32), ("two_lines", 4), ("conic_arc", 2), ("conic_arc", 4)] {
        let t = rep(name, 2, q);
        assert!(nvt_check(&t).certificate_holds());
        let inc = t.incidence_graph();
        let swap = automorphism_group(&inc.colored(true)).order;
        let keep = automorphism_group(&inc.colored(false)).order;
        assert_eq!(swap, keep, "{name} q={q}");
    }
}

#[test]
fn geometric_group_sits_inside_aut() {
    for (name, n, q) in
        [("two_lines", 2, 3u32), ("hyperoval", 2, 4), ("three_lines_rem3", 3, 3), ("baer_subplane", 2, 4)]
    {
        let t = rep(name, n, q);
        let aut = automorphism_group(&t.incidence_graph().colored(true));
        for g in geometric_group(&t).group.generators() {
            assert!(aut.group.contains(g).unwrap(), "{name}");
        }
    }
}
