//! Obstructed extensions: the simple module at the exceptional vertex from
//! k[t]/(t^2) to k[t]/(t^3), and for e = 1 the two-variable lift of S_1.
//! Each refusal is confirmed by exhaustive enumeration over GF(3).

use std::sync::Arc;

use brauer_udr::coeff::{Fp, LocalAlgebra, RingSurjection};
use brauer_udr::deform::{exhaustive_extension_count, extend_search, paper_lift_family, ExtendOutcome, Family, Lift};
use brauer_udr::presentation::Presentation;

fn attempt(l: &Lift, target: &str, f: Fp) {
    let upper = LocalAlgebra::from_spec(target, f).expect("ring");
    let s = RingSurjection::natural(&upper, l.ring()).expect("surjection");
    match extend_search(l, target, &s).expect("search") {
        ExtendOutcome::Extended(_) => println!("{} over {} extends to {target}", l.base_spec, l.ring_spec),
        ExtendOutcome::NoExtension(o) => {
            println!(
                "{} over {} does not extend to {target}: {} at ({},{}), residue {}, obstruction {}",
                l.base_spec, l.ring_spec, o.relation, o.row, o.col, o.residue, o.obstruction
            );
            println!("  certificate {:?}", o.certificate);
        }
    }
    let count = exhaustive_extension_count(l, &s, 10_000_000)
        .map(|c| c.to_string())
        .unwrap_or_else(|e| e.to_string());
    println!("  exhaustive count of extensions: {count}");
}

fn main() {
    let f = Fp::new(3).expect("prime");
    for e in 2..=3 {
        let pres = Arc::new(Presentation::new(e).expect("e"));
        let l = paper_lift_family(Family::Se, &pres, f, 2, 1).expect("lift");
        attempt(&l, "k[t]/(t^3)", f);
    }
    let pres = Arc::new(Presentation::new(1).expect("e"));
    let l = paper_lift_family(Family::S1E1, &pres, f, 2, 1).expect("lift");
    attempt(&l, "k[t1,t2]/((t1,t2)*(t1^2-t2^2,t1t2))", f);
}
