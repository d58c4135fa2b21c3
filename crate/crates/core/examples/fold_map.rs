// The fold automorphism swapping two affine subspaces along a point at infinity.

use lingeo::geomaut::{fold_map_default, is_geometric};
use lingeo::gf::field_of_order;
use lingeo::linrep::LinRep;
use lingeo::pointsets::construct_named;
use lingeo::projspace::ProjPoint;

pub fn run_example() -> String {
    let f = field_of_order(4).unwrap();
    let t = LinRep::build(&construct_named("point", 2, &f, None).unwrap()).unwrap();
    let q = ProjPoint::from_indices(&f, &[0, 0, 1, 0]).unwrap();
    let phi = fold_map_default(&t, &q).unwrap();
    let moved = (0..t.num_points() as u32).filter(|&p| phi.point_perm().apply(p) != p).count();
    let mut out = format!("fold moves {moved} of {} points\n", t.num_points());
    out += &format!("involution: {}\n", phi.then(&phi).is_identity());
    out += &format!("geometric: {}\n", is_geometric(&t, &phi).is_some());
    out
}

fn main() {
    print!("{}", run_example());
}
