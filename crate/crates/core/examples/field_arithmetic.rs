// Arithmetic in GF(q): tables, inverses, Frobenius and subfields.

use lingeo::gf::field_of_order;

pub fn run_example() -> String {
    let f = field_of_order(9).unwrap();
    let mut out = format!("GF({}) = GF({})[x]/({:?}), constant term first\n", f.q(), f.p(), f.modulus());
    let g = f.primitive_element();
    let powers: Vec<u8> = (0..8).map(|e| f.pow(g, e).index() as u8).collect();
    out += &format!("powers of the primitive element {}: {:?}\n", g.index(), powers);
    let a = f.element(5).unwrap();
    out += &format!("5^-1 = {}, frobenius(5) = {}\n", f.inv(a).unwrap().index(), f.frob(a, 1).index());
    let sub: Vec<usize> = f.subfield(3).unwrap().iter().map(|x| x.index()).collect();
    out += &format!("GF(3) inside GF(9): {sub:?}\n");
    out
}

fn main() {
    print!("{}", run_example());
}
