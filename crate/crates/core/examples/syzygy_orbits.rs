//! Syzygies, Ω-orbits and component labels.
//!
//! cargo run --example syzygy_orbits -- 3 7

use std::sync::Arc;

use brauer_udr::catalog::seeds;
use brauer_udr::coeff::Fp;
use brauer_udr::homalg::{iso_test, omega_orbit, syzygy, Classifier};
use brauer_udr::presentation::Presentation;
use brauer_udr::repbuild::Representation;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let e: usize = args.first().and_then(|s| s.parse().ok()).unwrap_or(3);
    let p: u32 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let pres = Arc::new(Presentation::new(e).expect("e >= 1"));
    let f = Fp::new(p).expect("prime");
    for lambda in f.units() {
        let b = Representation::band(&pres, f, 1, lambda).expect("band");
        let mu = f.neg(f.inv(lambda).expect("unit"));
        let target = Representation::band(&pres, f, 1, mu).expect("band");
        let iso = iso_test(&syzygy(&b), &target).expect("iso test").is_isomorphic();
        println!("Ω B(1,{lambda}) ≅ B(1,{mu}): {iso}");
    }
    let probe = Representation::simple(&pres, f, 0).expect("simple");
    let classifier = Classifier::new(&probe).expect("classifier");
    for s in seeds(&pres) {
        let m = s.spec.build(&pres, f).expect("seed");
        let orbit = omega_orbit(&m, 2 * e + 2).expect("orbit");
        let dims: Vec<usize> = orbit.members.iter().map(|x| x.total_dim()).collect();
        let c = classifier.classify(&m).expect("classify");
        println!(
            "{:<20} {:<16} period {:?}  dims {:?}",
            s.name,
            c.label.as_str(),
            orbit.period,
            dims
        );
    }
}
