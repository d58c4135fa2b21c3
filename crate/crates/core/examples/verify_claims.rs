// Run the fast claims and print their verdicts.

use lingeo::claims::run_claim;

pub fn run_example() -> String {
    let mut out = String::new();
    for id in ["two-lines-q3", "hoofd1-hyperoval-q4", "threelines-q3", "baer-q2"] {
        let r = run_claim(id, false).unwrap().report;
        let i = &r.instances[0];
        out += &format!(
            "{id}: {:?}, |Aut| {:?}, |geometric| {:?}, ratio {:?}\n",
            r.verdict, i.aut_order, i.geometric_order, i.ratio
        );
    }
    out
}

fn main() {
    print!("{}", run_example());
}
