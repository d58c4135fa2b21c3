// Named point sets, subgeometry closure, Property (*) and tangent cover.

use lingeo::gf::field_of_order;
use lingeo::pointsets::{closure, construct_named, property_star, tangent_cover, StarVerdict, TangentVerdict};

pub fn run_example() -> String {
    let f4 = field_of_order(4).unwrap();
    let frame = construct_named("frame", 2, &f4, None).unwrap();
    let mut out =
        format!("frame of PG(2,4): {} points, closure {} points\n", frame.len(), closure(&frame).unwrap().len());
    let f3 = field_of_order(3).unwrap();
    for name in ["two_lines", "conic_arc", "frame"] {
        let k = construct_named(name, 2, &f3, None).unwrap();
        let star = property_star(&k).unwrap() == StarVerdict::Holds;
        let tangent = tangent_cover(&k) == TangentVerdict::Holds;
        out += &format!("{name} in PG(2,3): property (*) {star}, tangent cover {tangent}\n");
    }
    out
}

fn main() {
    print!("{}", run_example());
}
