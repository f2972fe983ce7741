//! One line per acceptance criterion. Criteria listed in `UNATTAINABLE` are
//! reported as FAIL without failing the run; their failure mode is pinned so
//! any change in behaviour is noticed.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;

use raycurves::curve::{parse_curve, parse_divisor, parse_place};
use raycurves::fixtures::{self, Status, Verification, FIXTURES};
use raycurves::invariants::{subgroup_of_places, ClassField};
use raycurves::rayclass::{RayClassGroup, RayClassOptions};
use raycurves::records::RecordTable;
use raycurves::search::{read_findings, search_curve, SearchConfig};

const EX1: &str = "y^2 + (x^2 + x + 1)y + x^5 + x^4 + x^2 + x";

/// The stated moduli of these fixtures have exponent 2 at a single place; the
/// stated genus and point count belong to the subfield of conductor exponent 1.
const ERRATA: &[&str] = &["f5-g45", "f5-g46"];
const UNATTAINABLE: &[u32] = &[3];

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn criterion_1() -> Check {
    let c = parse_curve(2, EX1).map_err(|e| e.to_string())?;
    let mut seen = Vec::new();
    for (n, want) in [(2, "Z/28 + Z"), (3, "Z/56 + Z"), (5, "Z/2 + Z/112 + Z")] {
        let d = parse_divisor(&c, &format!("{n}(x + 1, y + x + 1)")).map_err(|e| e.to_string())?;
        let rcg = RayClassGroup::compute(&c, &d, &RayClassOptions::default()).map_err(|e| e.to_string())?;
        let got = rcg.group().to_string();
        ensure(got == want, || format!("Cl_{n}P = {got}, expected {want}"))?;
        seen.push(got);
    }
    Ok(seen.join("; "))
}

fn criterion_2(results: &[Verification]) -> Check {
    let mut out = Vec::new();
    for (name, index) in [("f2-g7", 4), ("f2-g17", 8), ("f2-g45", 12)] {
        let v = results.iter().find(|v| v.fixture.name == name).unwrap();
        ensure(v.invariants.degree == index, || format!("{name}: index {}, expected {index}", v.invariants.degree))?;
        out.push(format!("{name}: {index}"));
    }
    Ok(out.join(", "))
}

fn criterion_3(results: &[Verification]) -> Check {
    let matched = results.iter().filter(|v| v.status() == Status::Match).count();
    let mut problems = Vec::new();
    for v in results.iter().filter(|v| v.status() != Status::Match) {
        let inv = &v.invariants;
        let mut s = format!(
            "{} with modulus {} gives (g, N) = ({}, {}), stated ({}, {})",
            v.fixture.name, v.fixture.modulus, inv.genus, inv.rational_places, v.fixture.genus, v.fixture.points
        );
        if let (Some(c), Some(m)) = (&v.corrected, v.fixture.attained_with) {
            s.push_str(&format!("; modulus {m} gives ({}, {})", c.genus, c.rational_places));
        }
        problems.push(s);
    }
    if problems.is_empty() {
        Ok(format!("{matched}/{} fixtures", results.len()))
    } else {
        Err(format!("{matched}/{} fixtures reproduce from the stated data; {}", results.len(), problems.join("; ")))
    }
}

fn criterion_4() -> Check {
    let table = RecordTable::builtin();
    let mut n = 0;
    for f in FIXTURES {
        let Some((lower, upper)) = f.old_interval else { continue };
        let iv = table.query(f.q, f.genus).map_err(|e| e.to_string())?;
        ensure((iv.lower, iv.upper) == (lower, upper), || format!("{}: table has {iv}", f.name))?;
        let better = table.is_improvement(f.q, f.genus, f.points).map_err(|e| e.to_string())?;
        ensure(better, || format!("{}: {} is not an improvement over {iv}", f.name, f.points))?;
        n += 1;
    }
    ensure(n == 18, || format!("{n} rows checked, expected 18"))?;
    Ok(format!("{n} rows improve on their old intervals"))
}

fn criterion_5(results: &[Verification]) -> Check {
    for f in FIXTURES {
        let (c, d, _) = f.parse().map_err(|e| e.to_string())?;
        let rcg = RayClassGroup::compute(&c, &d, &RayClassOptions::default()).map_err(|e| e.to_string())?;
        let cert = rcg.certificate();
        // class number from the zeta function, unit group order from its formula
        let h = c.class_number();
        let q = f.q as i128;
        let units: i128 = d
            .iter()
            .map(|(p, n)| {
                let qq = q.pow(p.degree() as u32);
                (qq - 1) * qq.pow(n as u32 - 1)
            })
            .product();
        let expected = if d.is_zero() { h as i128 } else { h as i128 * units / (q - 1) };
        ensure(cert.class_number == h && cert.unit_order == units, || format!("{}: certificate inputs differ", f.name))?;
        ensure(rcg.torsion().torsion_order() as i128 == expected && cert.holds(), || {
            format!("{}: torsion {} but h |U_D| / (q - 1) = {expected}", f.name, rcg.torsion().torsion_order())
        })?;
    }
    ensure(results.iter().all(|v| v.certificate_holds), || "certificate failed".into())?;
    Ok(format!("{} fixtures", FIXTURES.len()))
}

fn criterion_6() -> Check {
    let mut sums = Vec::new();
    for f in FIXTURES {
        let (c, d, s) = f.parse().map_err(|e| e.to_string())?;
        let rcg = RayClassGroup::compute(&c, &d, &RayClassOptions::default()).map_err(|e| e.to_string())?;
        let cf = ClassField::new(&rcg, &subgroup_of_places(&rcg, &s).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        let inv = cf.invariants().map_err(|e| e.to_string())?;
        let chars = cf.characters().map_err(|e| e.to_string())?;
        let sum: i64 = chars.iter().map(|chi| cf.character_conductor(chi).degree()).sum();
        let lhs = 2 * inv.genus - 2 - inv.degree * (2 * c.genus() as i64 - 2);
        ensure(lhs == sum && sum >= 0 && sum % 2 == 0, || format!("{}: 2g - 2 - d(2g_F - 2) = {lhs}, Σ deg f(χ) = {sum}", f.name))?;
        if f.name == "f2-g7" || f.name == "f2-g17" {
            sums.push(format!("{}: d={} Σ={sum}", f.name, inv.degree));
        }
    }
    let want = ["f2-g7: d=4 Σ=4", "f2-g17: d=8 Σ=16"];
    ensure(sums == want, || format!("{sums:?}"))?;
    Ok(sums.join(", "))
}

fn smoke_config() -> SearchConfig {
    let c = parse_curve(2, EX1).unwrap();
    SearchConfig {
        max_conductor_degree: Some(3),
        support: Some(vec![parse_place(&c, "(x + 1, y + x + 1)").unwrap()]),
        split_sizes: Some(vec![2]),
        ..Default::default()
    }
}

fn criterion_7() -> Check {
    let c = parse_curve(2, EX1).map_err(|e| e.to_string())?;
    let report = search_curve(&c, &smoke_config(), &RecordTable::builtin()).map_err(|e| e.to_string())?;
    let found = |g, n| report.findings.iter().find(|f| (f.genus, f.rational_places) == (g, n));
    let g7 = found(7, 10).ok_or("no (7, 10) finding")?;
    let g17 = found(17, 18).ok_or("no (17, 18) finding")?;
    ensure(g17.meets_upper && g17.improved, || "(17, 18) not flagged as meeting the upper bound".into())?;
    ensure(report.skipped.is_empty(), || format!("{} moduli skipped", report.skipped.len()))?;
    Ok(format!(
        "{} findings over {} moduli, (7,10) from {}, (17,18) from {} meets the upper bound",
        report.findings.len(),
        report.moduli,
        g7.modulus,
        g17.modulus
    ))
}

fn criterion_8() -> Check {
    let curves = common::sample_curves();
    for c in &curves {
        common::place_counts(c)?;
        for a in [&[1u32, 1][..], &[0, 2, 1, 3], &[4, 0, 0, 1, 1, 2]] {
            for b in [&[][..], &[1], &[2, 1, 3]] {
                common::principal_degree_zero(c, a, b)?;
            }
        }
    }
    for m in [vec![vec![2i128, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]], vec![vec![0, 3], vec![5, 0], vec![7, 7]], vec![vec![28, 0]]] {
        common::snf_postcondition(&m)?;
    }
    for inv in [vec![2, 2, 4], vec![4, 8], vec![2, 6, 12], vec![16, 16], vec![3, 9], vec![2, 2, 2, 2]] {
        common::subgroup_counts(&inv)?;
    }
    for (p, k, n) in [(2, 1, 6), (2, 2, 4), (3, 1, 5), (3, 2, 3), (5, 1, 4), (5, 2, 2)] {
        common::unit_group_orders(p, k, n)?;
    }
    // resumption
    let c = parse_curve(2, EX1).map_err(|e| e.to_string())?;
    let records = RecordTable::builtin();
    let full = search_curve(&c, &smoke_config(), &records).map_err(|e| e.to_string())?;
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let (ckpt, out) = (dir.path().join("ckpt"), dir.path().join("out.jsonl"));
    loop {
        let cfg = SearchConfig { checkpoint: Some(ckpt.clone()), out: Some(out.clone()), stop_after: Some(1), ..smoke_config() };
        if search_curve(&c, &cfg, &records).map_err(|e| e.to_string())?.moduli == 0 {
            break;
        }
    }
    let resumed = read_findings(&out).map_err(|e| e.to_string())?;
    ensure(resumed == full.findings, || "resumed search differs from a single run".into())?;
    Ok(format!("{} curves; SNF, subgroup counts, unit groups, filtration, resume", curves.len()))
}

fn main() -> ExitCode {
    let results: Vec<Verification> = FIXTURES
        .iter()
        .map(|f| fixtures::verify(f, &RayClassOptions::default()).expect("fixture computes"))
        .collect();
    let checks: Vec<(u32, &str, Check)> = vec![
        (1, "ray class structures", criterion_1()),
        (2, "subgroup indices", criterion_2(&results)),
        (3, "genus and rational places of all fixtures", criterion_3(&results)),
        (4, "record improvements", criterion_4()),
        (5, "class group certificates", criterion_5(&results)),
        (6, "conductor-discriminant formula", criterion_6()),
        (7, "search smoke test", criterion_7()),
        (8, "property suites", criterion_8()),
    ];
    let mut unexpected = false;
    for (id, name, r) in &checks {
        match r {
            Ok(detail) => println!("PASS criterion {id} ({name}): {detail}"),
            Err(detail) => {
                println!("FAIL criterion {id} ({name}): {detail}");
                unexpected |= !UNATTAINABLE.contains(id);
            }
        }
    }
    // the known failure must stay exactly the documented one
    let failing: BTreeSet<&str> = results.iter().filter(|v| v.status() != Status::Match).map(|v| v.fixture.name).collect();
    let errata_hold = results.iter().filter(|v| ERRATA.contains(&v.fixture.name)).all(|v| v.status() == Status::Erratum);
    if failing != ERRATA.iter().copied().collect() || !errata_hold {
        println!("unexpected set of failing fixtures: {failing:?}");
        unexpected = true;
    }
    if unexpected {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
