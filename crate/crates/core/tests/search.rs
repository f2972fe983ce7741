use std::time::Instant;

use raycurves::curve::{parse_curve, parse_place};
use raycurves::records::RecordTable;
use raycurves::search::{read_findings, search_curve, SearchConfig};

const EX1: &str = "y^2 + (x^2 + x + 1)y + x^5 + x^4 + x^2 + x";

fn smoke_config() -> SearchConfig {
    let c = parse_curve(2, EX1).unwrap();
    SearchConfig {
        max_conductor_degree: Some(3),
        support: Some(vec![parse_place(&c, "(x + 1, y + x + 1)").unwrap()]),
        split_sizes: Some(vec![2]),
        ..Default::default()
    }
}

#[test]
fn base_curve_smoke_search() {
    let c = parse_curve(2, EX1).unwrap();
    let t = Instant::now();
    let report = search_curve(&c, &smoke_config(), &RecordTable::builtin()).unwrap();
    for f in &report.findings {
        eprintln!("{} {} d={} g={} N={} improved={} upper={}", f.modulus, f.split, f.degree, f.genus, f.rational_places, f.improved, f.meets_upper);
    }
    eprintln!("{} moduli, {} skipped, {:.2?}", report.moduli, report.skipped.len(), t.elapsed());
    assert!(report.skipped.is_empty());
    let g7 = report.findings.iter().find(|f| (f.genus, f.rational_places) == (7, 10)).expect("(7, 10)");
    assert_eq!(g7.degree, 4);
    let g17 = report.findings.iter().find(|f| (f.genus, f.rational_places) == (17, 18)).expect("(17, 18)");
    assert_eq!(g17.degree, 8);
    assert!(g17.improved && g17.meets_upper);
    for f in &report.findings {
        assert!(f.rational_places >= 2 * f.degree);
    }
}

#[test]
fn resumed_search_matches_uninterrupted_run() {
    let c = parse_curve(2, EX1).unwrap();
    let records = RecordTable::builtin();
    let dir = tempfile::tempdir().unwrap();
    let whole = SearchConfig { out: Some(dir.path().join("whole.jsonl")), ..smoke_config() };
    let full = search_curve(&c, &whole, &records).unwrap();

    let ckpt = dir.path().join("ckpt.txt");
    let out = dir.path().join("parts.jsonl");
    let mut runs = 0;
    loop {
        let cfg = SearchConfig { checkpoint: Some(ckpt.clone()), out: Some(out.clone()), stop_after: Some(1), workers: 2, ..smoke_config() };
        let r = search_curve(&c, &cfg, &records).unwrap();
        runs += 1;
        if r.moduli == 0 {
            break;
        }
    }
    assert_eq!(runs, full.total_moduli + 1);
    assert_eq!(read_findings(&out).unwrap(), full.findings);
    assert_eq!(read_findings(&dir.path().join("whole.jsonl")).unwrap(), full.findings);
}
