//! Deformation-ring evidence for every catalog module and admissible band.
//!
//! cargo run --example udr_evidence -- 3 7

use std::sync::Arc;

use brauer_udr::catalog::seeds;
use brauer_udr::coeff::Fp;
use brauer_udr::deform::{udr_evidence, DEFAULT_MAX_LEVEL};
use brauer_udr::presentation::Presentation;
use brauer_udr::repbuild::ModuleSpec;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let e: usize = args.first().and_then(|s| s.parse().ok()).unwrap_or(3);
    let p: u32 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let pres = Arc::new(Presentation::new(e).expect("e >= 1"));
    let f = Fp::new(p).expect("prime");
    let mut specs: Vec<ModuleSpec> = seeds(&pres).into_iter().map(|s| s.spec).collect();
    specs.extend(f.units().map(|lambda| ModuleSpec::Band { n: 1, lambda }));
    for spec in specs {
        let m = spec.build(&pres, f).expect("module");
        let text = spec.canonical_text(&pres);
        match udr_evidence(&m, &text, DEFAULT_MAX_LEVEL) {
            Ok(ev) => println!(
                "{:<24} r = {}  {:<28} {}",
                spec.display_name(&pres),
                ev.r,
                ev.verdict.as_str(),
                ev.summary
            ),
            Err(err) => println!("{:<24} {err}", spec.display_name(&pres)),
        }
    }
}
