//! Run the full analysis for one algebra and print the checked claims.
//!
//! cargo run --release --example analyze_report -- 4 7

use brauer_udr::cli::{analyze, verify_report, AnalyzeConfig, AnalyzeOptions, DEFAULT_MAX_DIM};
use brauer_udr::deform::DEFAULT_MAX_LEVEL;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let e: usize = args.first().and_then(|s| s.parse().ok()).unwrap_or(3);
    let p: u32 = args.get(1).and_then(|s| s.parse().ok()).unwrap_or(7);
    let opts = AnalyzeOptions {
        e,
        p,
        config: AnalyzeConfig {
            max_string_len: 12,
            bands: 2,
            max_level: DEFAULT_MAX_LEVEL,
            max_dim: DEFAULT_MAX_DIM,
        },
        reproducible: true,
    };
    let report = analyze(&opts).expect("analysis");
    for c in report.claims.iter().chain(&report.notes) {
        println!("{:<5} {:<30} {}", if c.holds { "ok" } else { "no" }, c.id, c.statement);
    }
    let v = verify_report(&report).expect("verification");
    println!(
        "{} rows, {} verdicts, {} certificate failures",
        report.rows.len(),
        v.checked,
        v.failures.len()
    );
}
