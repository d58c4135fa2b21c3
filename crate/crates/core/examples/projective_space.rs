// Points, subspaces and collineations of PG(d, q).

use lingeo::gf::field_of_order;
use lingeo::projspace::{
    group_order_formula, pgammal_generators, GroupFlavor, ProjPoint, ProjSpace, SemilinearMap, Subspace,
};

pub fn run_example() -> String {
    let f = field_of_order(4).unwrap();
    let space = ProjSpace::new(2, &f).unwrap();
    let mut out = format!("PG(2,4): {} points, {} lines\n", space.num_points(), space.subspaces(1).len());
    let a = ProjPoint::from_indices(&f, &[1, 0, 0]).unwrap();
    let b = ProjPoint::from_indices(&f, &[0, 1, 2]).unwrap();
    let line = Subspace::span_points(&f, [&a, &b]).unwrap();
    let ranks = space.subspace_ranks(&line);
    out += &format!("line through {:?} and {:?} has point ranks {ranks:?}\n", a.indices(), b.indices());
    let g = pgammal_generators(2, &f).into_iter().find(|g| g.apply_point(&f, &b) != b).unwrap();
    let moved = SemilinearMap::identity(&f, 3).then(&f, &g).apply_point(&f, &b);
    out += &format!("a PΓL generator sends {:?} to {:?}\n", b.indices(), moved.indices());
    out += &format!("|PΓL(3,4)| = {}\n", group_order_formula(2, &f, GroupFlavor::Pgammal));
    out
}

fn main() {
    print!("{}", run_example());
}
