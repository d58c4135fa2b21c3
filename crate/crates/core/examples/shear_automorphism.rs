// The shear family φ_m on T*_2 of two lines: automorphisms that no
// collineation induces.

use lingeo::geomaut::{extend_to_infinity, is_geometric, phi_shear};
use lingeo::gf::field_of_order;
use lingeo::linrep::LinRep;
use lingeo::pointsets::construct_named;

pub fn run_example() -> String {
    let f = field_of_order(4).unwrap();
    let t = LinRep::build(&construct_named("two_lines", 2, &f, None).unwrap()).unwrap();
    let mut out = String::new();
    for m in f.elements() {
        let phi = phi_shear(&t, m).unwrap();
        let coherent = extend_to_infinity(&t, &phi).images.iter().filter(|x| x.is_some()).count();
        out += &format!(
            "m = {}: automorphism {}, geometric {}, coherent points at infinity {coherent}\n",
            m.index(),
            phi.verify(&t),
            is_geometric(&t, &phi).is_some()
        );
    }
    out
}

fn main() {
    print!("{}", run_example());
}
