//! Ext¹ by syzygies against the tangent space of the linearized relations
//! and, for small cases, exhaustive enumeration of first-order lifts.
//!
//! cargo run --example ext1_tangent -- 3 3

use std::sync::Arc;

use brauer_udr::catalog::seeds;
use brauer_udr::coeff::Fp;
use brauer_udr::deform::{first_order_classes, first_order_exhaustive};
use brauer_udr::homalg::ext1_dim;
use brauer_udr::presentation::Presentation;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let e: usize = args.first().and_then(|s| s.parse().ok()).unwrap_or(3);
    let p: u32 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let pres = Arc::new(Presentation::new(e).expect("e >= 1"));
    let f = Fp::new(p).expect("prime");
    for s in seeds(&pres) {
        let m = s.spec.build(&pres, f).expect("seed");
        let r = ext1_dim(&m).expect("ext1");
        let fo = first_order_classes(&m);
        let count = first_order_exhaustive(&m, 2_000_000)
            .map(|c| c.to_string())
            .unwrap_or_else(|err| format!("({err})"));
        println!(
            "{:<20} Ext^1 {r}  linearized {}  lifts over k[ε] {count}  p^r = {}",
            s.name,
            fo.r,
            fo.count(f)
        );
    }
}
