//! Hom spaces, endomorphism rings of bands, and stable endomorphism rings
//! of the catalog modules.
//!
//! cargo run --example hom_spaces -- 3 7

use std::sync::Arc;

use brauer_udr::catalog::{large_stable_end, seeds};
use brauer_udr::coeff::Fp;
use brauer_udr::homalg::{hom_space, hom_space_by_commutation, stable_end_dim};
use brauer_udr::presentation::Presentation;
use brauer_udr::repbuild::Representation;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let e: usize = args.first().and_then(|s| s.parse().ok()).unwrap_or(3);
    let p: u32 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let pres = Arc::new(Presentation::new(e).expect("e >= 1"));
    let f = Fp::new(p).expect("prime");
    for n in 1..=3 {
        let b = Representation::band(&pres, f, n, 2).expect("band");
        let end = hom_space(&b, &b).expect("hom");
        let check = hom_space_by_commutation(&b, &b).expect("hom");
        println!("dim End B({n},2) = {} (commutation: {})", end.dim(), check.dim());
    }
    for lambda in f.units() {
        let b = Representation::band(&pres, f, 1, lambda).expect("band");
        println!(
            "stable End B(1,{lambda}) has dimension {}",
            stable_end_dim(&b).expect("stable end")
        );
    }
    for s in seeds(&pres) {
        let m = s.spec.build(&pres, f).expect("seed");
        println!(
            "{:<20} stable End dimension {}",
            s.name,
            stable_end_dim(&m).expect("stable end")
        );
    }
    for (name, spec) in large_stable_end(&pres) {
        let m = spec.build(&pres, f).expect("module");
        println!(
            "{:<20} stable End dimension {}",
            name,
            stable_end_dim(&m).expect("stable end")
        );
    }
}
