// Field reduction of T*_2(Baer subplane of PG(2,4)) into PG(6,2) and the
// group stabilizing the spread lines of the subplane.

use lingeo::geomaut::{barlotti_cofman, geometric_group};
use lingeo::gf::field_of_order;
use lingeo::linrep::LinRep;
use lingeo::pointsets::construct_named;

pub fn run_example() -> String {
    let f = field_of_order(4).unwrap();
    let t = LinRep::build(&construct_named("baer_subplane", 2, &f, None).unwrap()).unwrap();
    let sd = barlotti_cofman(&t).unwrap();
    let mut out = format!("spread: {} lines, B: {} lines\n", sd.spread.len(), sd.b.len());
    out += &format!("T* lines become planes through B: {}\n", sd.lines_match_planes(&t));
    let stab = sd.stabilizer(&t);
    out += &format!("|PΓL(7,2)_B| = {} (auxiliary graph on {} vertices)\n", stab.order, stab.aux_vertices);
    out += &format!("|geometric| = {}\n", geometric_group(&t).order);
    out
}

fn main() {
    print!("{}", run_example());
}
