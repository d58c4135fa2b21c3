// Compare the full automorphism group of T*_2(K) with the subgroup induced
// by collineations, for two intersecting lines in PG(2,3).

use lingeo::geomaut::{geometric_group, hyperplane_stabilizer};
use lingeo::gf::field_of_order;
use lingeo::graphauto::automorphism_group;
use lingeo::linrep::LinRep;
use lingeo::pointsets::construct_named;

pub fn run_example() -> String {
    let f = field_of_order(3).unwrap();
    let t = LinRep::build(&construct_named("two_lines", 2, &f, None).unwrap()).unwrap();
    let full = automorphism_group(&t.incidence_graph().colored(true)).order;
    let geo = geometric_group(&t);
    let stab = hyperplane_stabilizer(t.k()).unwrap().order;
    let mut out =
        format!("|Aut(Γ)| = {full}\n|geometric| = {} (auxiliary graph on {} vertices)\n", geo.order, geo.aux_vertices);
    out += &format!("|PΓL(3,3)_K| = {stab}, ratio {}\n", &full / &geo.order);
    out
}

fn main() {
    print!("{}", run_example());
}
