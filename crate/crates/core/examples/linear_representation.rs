// Build T*_2(K) for two intersecting lines, export its incidence graph and
// check the distance-4 certificate.

use lingeo::gf::field_of_order;
use lingeo::linrep::{nvt_check, LinRep};
use lingeo::pointsets::construct_named;

pub fn run_example() -> String {
    let f = field_of_order(3).unwrap();
    let t = LinRep::build(&construct_named("two_lines", 2, &f, None).unwrap()).unwrap();
    let inc = t.incidence_graph();
    let mut out = format!("T*_2(two lines), q = 3: {} points, {} lines\n", t.num_points(), t.num_lines());
    out += &format!("incidence graph: {} vertices, {} edges\n", inc.num_vertices(), inc.graph().num_edges());
    out += &format!("graph6 prefix: {}\n", &inc.graph().to_graph6()[..12]);
    let report = nvt_check(&t);
    out += &format!("certificate separates lines from points: {}\n", report.certificate_holds());
    out
}

fn main() {
    print!("{}", run_example());
}
