//! Committed reports for e = 1..4 and p ∈ {3, 5, 7}, regenerated and
//! compared byte for byte. Set `BRAUER_UDR_BLESS=1` to rewrite them.

use std::path::Path;

use rayon::prelude::*;

use brauer_udr::cli::{analyze, verify_report, AnalyzeConfig, AnalyzeOptions, Report, DEFAULT_MAX_DIM};
use brauer_udr::deform::DEFAULT_MAX_LEVEL;

fn options(e: usize, p: u32) -> AnalyzeOptions {
    AnalyzeOptions {
        e,
        p,
        config: AnalyzeConfig {
            max_string_len: 12,
            bands: 2,
            max_level: DEFAULT_MAX_LEVEL,
            max_dim: DEFAULT_MAX_DIM,
        },
        reproducible: true,
    }
}

#[test]
fn golden_reports_match() {
    let bless = std::env::var_os("BRAUER_UDR_BLESS").is_some();
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let cases: Vec<(usize, u32)> = (1..=4).flat_map(|e| [3, 5, 7].map(|p| (e, p))).collect();
    let mismatches: Vec<String> = cases
        .par_iter()
        .filter_map(|&(e, p)| {
            let path = dir.join(format!("e{e}_p{p}.json"));
            let fresh = analyze(&options(e, p)).unwrap().to_json();
            if bless {
                std::fs::write(&path, &fresh).unwrap();
                return None;
            }
            let stored = std::fs::read_to_string(&path).unwrap_or_default();
            (stored != fresh).then(|| path.display().to_string())
        })
        .collect();
    assert!(mismatches.is_empty(), "reports differ: {mismatches:?}");
}

#[test]
fn golden_reports_verify() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    for e in 1..=4 {
        for p in [3, 5, 7] {
            let text = std::fs::read_to_string(dir.join(format!("e{e}_p{p}.json"))).unwrap();
            let r = Report::from_json(&text).unwrap();
            assert!(r.summary.theorem_holds, "e={e} p={p}");
            assert_eq!(r.summary.inconclusive, 0);
            let v = verify_report(&r).unwrap();
            assert!(v.failures.is_empty(), "e={e} p={p}: {:?}", v.failures);
            assert_eq!(v.checked, r.summary.verdicts);
        }
    }
}
