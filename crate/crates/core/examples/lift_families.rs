//! Build an explicit lift family, verify it level by level, and optionally
//! save one member as a lift file.
//!
//! cargo run --example lift_families -- W-star 3 7 6
//! cargo run --example lift_families -- Se 3 7 2 se_t2.lift

use std::sync::Arc;

use brauer_udr::coeff::Fp;
use brauer_udr::deform::{paper_lift_family, verify_lift, Family, LiftRecord};
use brauer_udr::presentation::Presentation;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let family: Family = args
        .first()
        .map(String::as_str)
        .unwrap_or("W-star")
        .parse()
        .expect("family name");
    let e: usize = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(3);
    let p: u32 = args.get(2).and_then(|s| s.parse().ok()).unwrap_or(7);
    let top: u32 = args.get(3).and_then(|s| s.parse().ok()).unwrap_or(6);
    let pres = Arc::new(Presentation::new(e).expect("e >= 1"));
    let f = Fp::new(p).expect("prime");
    for level in 2..=top {
        let l = paper_lift_family(family, &pres, f, level, 2).expect("family member");
        println!("{family} over {}: {:?}", l.ring_spec, verify_lift(&l));
    }
    if let Some(path) = args.get(4) {
        let l = paper_lift_family(family, &pres, f, top, 2).expect("family member");
        std::fs::write(path, LiftRecord::from_lift(&l).to_json()).expect("write lift");
        println!("wrote {path}");
    }
}
