// Schreier–Sims orders, membership and a split-extension check.

use lingeo::permgrp::{split_extension_check, Perm, PermGroup};

pub fn run_example() -> String {
    let rot = Perm::from_cycles(4, &[&[0, 1, 2, 3]]).unwrap();
    let flip = Perm::from_cycles(4, &[&[1, 3]]).unwrap();
    let d8 = PermGroup::new(4, vec![rot.clone(), flip.clone()]).unwrap();
    let c4 = PermGroup::new(4, vec![rot]).unwrap();
    let c2 = PermGroup::new(4, vec![flip]).unwrap();
    let mut out = format!("|D8| = {}, base {:?}\n", d8.order(), d8.chain().base());
    let cross = Perm::from_cycles(4, &[&[0, 1]]).unwrap();
    out += &format!("(0 1) in D8: {}\n", d8.contains(&cross).unwrap());
    let verdict = split_extension_check(&d8, &c4, &c2);
    out += &format!("D8 = C4 ⋊ C2: {}\n", verdict.split);
    out
}

fn main() {
    print!("{}", run_example());
}
