//! Build simples, projectives, strings and bands and print their shape.
//!
//! cargo run --example build_modules -- 3 7

use std::sync::Arc;

use brauer_udr::coeff::Fp;
use brauer_udr::presentation::Presentation;
use brauer_udr::repbuild::{enumerate_strings, ModuleSpec};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let e: usize = args.first().and_then(|s| s.parse().ok()).unwrap_or(3);
    let p: u32 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let pres = Arc::new(Presentation::new(e).expect("e >= 1"));
    let f = Fp::new(p).expect("prime");
    println!("e = {e}, p = {p}, dim Λ = {}", pres.algebra_dim());
    for r in pres.relations() {
        println!("  relation {}", pres.relation_name(r));
    }
    let mut specs: Vec<String> = (1..=e).flat_map(|i| [format!("S({i})"), format!("P({i})")]).collect();
    specs.extend(["band:1,2".to_string(), "band:2,3".to_string()]);
    specs.extend(
        enumerate_strings(&pres, 3)
            .iter()
            .take(6)
            .map(|w| format!("str:{}", w.text(&pres))),
    );
    for s in specs {
        let spec = ModuleSpec::parse(&pres, f, &s).expect("spec");
        let m = spec.build(&pres, f).expect("module");
        m.check_relations().expect("relations hold");
        println!(
            "{:<24} dims {:?}  Loewy length {}  socle dim {}",
            spec.display_name(&pres),
            m.dims(),
            m.loewy_length(),
            m.socle_basis().len()
        );
    }
}
