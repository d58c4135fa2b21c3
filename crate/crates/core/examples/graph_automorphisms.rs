// Automorphism group, canonical form and isomorphism of a small graph.

use lingeo::graphauto::{are_isomorphic, automorphism_group, canonical_form, ColoredGraph};
use lingeo::permgrp::Perm;

pub fn run_example() -> String {
    let mut edges = Vec::new();
    for i in 0..5u32 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((i + 5, (i + 2) % 5 + 5));
    }
    let petersen = ColoredGraph::uncolored(10, &edges).unwrap();
    let aut = automorphism_group(&petersen);
    let mut out = format!("Petersen graph: |Aut| = {}, orbit lengths {:?}\n", aut.order, aut.orbit_lengths);
    let shuffled = petersen.relabel(&Perm::from_images(vec![3, 7, 1, 9, 0, 2, 8, 4, 6, 5]).unwrap());
    let same = canonical_form(&petersen) == canonical_form(&shuffled);
    out += &format!("canonical forms agree after relabeling: {same}\n");
    out += &format!("isomorphism found: {}\n", are_isomorphic(&petersen, &shuffled).is_some());
    out
}

fn main() {
    print!("{}", run_example());
}
