//! Search for abelian extensions with many rational places.
//!
//! For a base curve with `N` rational places, triples `(d, s, m)` describe an
//! extension of degree `d` in which exactly `s` rational places split
//! completely and whose conductor has `m` rational places in its support.
//! Such a field has at most `d s + d_max m` rational places, `d_max` the
//! largest proper divisor of `d`. Comparing with the record table bounds the
//! genus, which in turn bounds the degree of the conductor.
//!
//! Each extension is reported once, from the modulus equal to its conductor.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs::OpenOptions;
use std::io::Write as _;
use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{FgAbGroup, GroupElement};
use crate::curve::{CurveModel, Divisor, Place};
use crate::invariants::{subgroup_of_places, ClassField, InvariantError};
use crate::rayclass::{RayClassError, RayClassGroup, RayClassOptions};
use crate::records::{Interval, RecordTable};

#[derive(Debug, Error)]
pub enum SearchError {
    #[error("genus {genus} field with {points} rational places exceeds the upper bound {upper} ({modulus})")]
    BoundViolation { genus: i64, points: i64, upper: i64, modulus: String },
    #[error("checkpoint: {0}")]
    Checkpoint(String),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

pub type Result<T> = std::result::Result<T, SearchError>;

#[derive(Debug, Clone)]
pub struct SearchConfig {
    pub max_genus: i64,
    /// Bound on `d s`; defaults to the largest upper bound in the record
    /// table for genus at most `max_genus`.
    pub ds_cap: Option<i64>,
    /// Ceiling on `deg D`, applied on top of the computed bounds.
    pub max_conductor_degree: Option<i64>,
    /// Only use these places in the support of `D`.
    pub support: Option<Vec<Place>>,
    /// Only use these values of `s`.
    pub split_sizes: Option<Vec<usize>>,
    pub rcg: RayClassOptions,
    pub workers: usize,
    /// Text file holding, per curve, the number of completed moduli.
    pub checkpoint: Option<PathBuf>,
    /// JSON-lines file the findings are appended to.
    pub out: Option<PathBuf>,
    /// Stop after this many moduli in this run (for testing resumption).
    pub stop_after: Option<usize>,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            max_genus: 50,
            ds_cap: None,
            max_conductor_degree: None,
            support: None,
            split_sizes: None,
            rcg: RayClassOptions::default(),
            workers: 1,
            checkpoint: None,
            out: None,
            stop_after: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Finding {
    pub q: u32,
    pub curve: String,
    pub modulus: String,
    pub split: String,
    pub degree: i64,
    pub galois_group: String,
    pub genus: i64,
    pub rational_places: i64,
    pub old_interval: Option<Interval>,
    /// Beats the lower bound of the table entry without exceeding its upper bound.
    pub improved: bool,
    /// Attains the upper bound, so it determines `N_q(g)`.
    pub meets_upper: bool,
}

/// A modulus that could not be processed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Skipped {
    pub modulus: String,
    pub reason: String,
}

/// Per-triple bounds used by a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TripleBound {
    pub d: i64,
    pub s: usize,
    pub m: usize,
    pub genus_ceiling: i64,
    pub degree_bound: i64,
}

#[derive(Debug, Clone, Default)]
pub struct SearchReport {
    pub findings: Vec<Finding>,
    pub skipped: Vec<Skipped>,
    pub bounds: Vec<TripleBound>,
    /// Moduli completed in this run.
    pub moduli: usize,
    /// Moduli completed before this run, from the checkpoint.
    pub resumed_from: usize,
    /// Total number of moduli for this curve.
    pub total_moduli: usize,
}

/// All `(d, s, m)` with `d >= 2`, `0 < s <= n`, `0 <= m <= n - s` and
/// `d s <= ds_cap`, ordered by `d`, then `s`, then `m`.
pub fn triple_schedule(n: usize, ds_cap: i64) -> Vec<(i64, usize, usize)> {
    let mut out = Vec::new();
    for d in 2..=ds_cap.max(1) {
        for s in 1..=n {
            if d * s as i64 > ds_cap {
                break;
            }
            for m in 0..=n - s {
                out.push((d, s, m));
            }
        }
    }
    out
}

/// Largest proper divisor of `d`.
pub fn largest_proper_divisor(d: i64) -> i64 {
    (2..=d).find(|p| d % p == 0).map_or(1, |p| d / p)
}

fn is_prime(d: i64) -> bool {
    d >= 2 && (2..).take_while(|p| p * p <= d).all(|p| d % p != 0)
}

/// Largest genus `g <= max_genus` for which a field with `d s + d_max m`
/// rational places would beat the known lower bound.
pub fn genus_ceiling(q: u32, d: i64, s: usize, m: usize, max_genus: i64, records: &RecordTable) -> Option<i64> {
    let nmax = d * s as i64 + largest_proper_divisor(d) * m as i64;
    (0..=max_genus).rev().find(|&g| records.get(q, g).is_none_or(|iv| iv.lower.is_none_or(|l| nmax > l)))
}

/// Bound on the degree of the conductor of a degree-`d` extension of genus
/// at most `genus_ceiling` of a base field of genus `g_f`. For prime `d`
/// every nontrivial character has the full conductor; otherwise only the
/// largest character conductor at each place is known to reach `D`.
pub fn conductor_degree_bound(d: i64, g_f: i64, genus_ceiling: i64) -> Option<i64> {
    let room = 2 * genus_ceiling - 2 - d * (2 * g_f - 2);
    if room < 0 {
        return None;
    }
    Some(if is_prime(d) { room / (d - 1) } else { room })
}

/// Effective divisors supported on `places` of degree at most `b` with
/// exactly `m` rational places in the support (any number if `m` is
/// `None`), ordered by degree and then lexicographically by support.
pub fn enumerate_moduli(places: &[Place], b: i64, m: Option<usize>) -> Vec<Divisor> {
    let mut sorted: Vec<Place> = places.iter().filter(|p| p.degree() as i64 <= b).cloned().collect();
    sorted.sort_by(|a, c| (a.degree(), a).cmp(&(c.degree(), c)));
    sorted.dedup();
    let mut out: Vec<(i64, Vec<(usize, i64)>)> = Vec::new();
    let mut cur = Vec::new();
    fn rec(places: &[Place], i: usize, rem: i64, cur: &mut Vec<(usize, i64)>, out: &mut Vec<(i64, Vec<(usize, i64)>)>, b: i64) {
        if i == places.len() {
            out.push((b - rem, cur.clone()));
            return;
        }
        rec(places, i + 1, rem, cur, out, b);
        let deg = places[i].degree() as i64;
        let mut k = 1;
        while k * deg <= rem {
            cur.push((i, k));
            rec(places, i + 1, rem - k * deg, cur, out, b);
            cur.pop();
            k += 1;
        }
    }
    rec(&sorted, 0, b, &mut cur, &mut out, b);
    out.retain(|(_, terms)| m.is_none_or(|m| terms.iter().filter(|(i, _)| sorted[*i].is_rational()).count() == m));
    out.sort();
    out.into_iter()
        .map(|(_, terms)| {
            let mut d = Divisor::zero();
            for (i, k) in terms {
                d.add_term(sorted[i].clone(), k);
            }
            d
        })
        .collect()
}

/// Subgroups of `g` (finite index) containing `base` whose quotient is of
/// order `d`, each given by generators in `g`.
fn subgroups_above(g: &FgAbGroup, base: &[GroupElement], d: i64) -> std::result::Result<Vec<Vec<GroupElement>>, InvariantError> {
    let q = g.quotient(base)?;
    let qg = &q.group;
    if qg.order().is_none_or(|o| o % d != 0) {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    for sub in qg.subgroups_of_index(d) {
        let r = qg.quotient(&sub.generators)?;
        let images: Vec<GroupElement> = q.gen_images.iter().map(|x| r.image(&x.0)).collect();
        let mut gens = base.to_vec();
        gens.extend(kernel_generators(&r.group, &images).into_iter().map(|v| g.element(v)));
        out.push(gens);
    }
    Ok(out)
}

/// Generators of the kernel of `Z^n -> h`, `e_i -> images[i]`, for a finite
/// group `h`.
fn kernel_generators(h: &FgAbGroup, images: &[GroupElement]) -> Vec<Vec<i64>> {
    let n = images.len();
    // representatives of the image of the first i generators
    let mut reps: HashMap<GroupElement, Vec<i64>> = HashMap::new();
    reps.insert(h.zero(), vec![0; n]);
    let mut order = vec![h.zero()];
    let mut out = Vec::new();
    for (i, g) in images.iter().enumerate() {
        let mut k = 1;
        let mut x = g.clone();
        while !reps.contains_key(&x) {
            x = h.add(&x, g);
            k += 1;
        }
        let mut rel = reps[&x].iter().map(|c| -c).collect::<Vec<_>>();
        rel[i] += k;
        if rel.iter().any(|&c| c != 0) {
            out.push(rel);
        }
        let old = order.clone();
        for j in 1..k {
            for e in &old {
                let y = h.add(e, &h.scale(g, j));
                let mut v = reps[e].clone();
                v[i] += j;
                reps.insert(y.clone(), v);
                order.push(y);
            }
        }
    }
    out
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

fn format_set(curve: &CurveModel, places: &[Place]) -> String {
    let items: Vec<String> = places.iter().map(|p| curve.format_place(p)).collect();
    format!("{{{}}}", items.join(", "))
}

struct Plan<'a> {
    curve: &'a CurveModel,
    records: &'a RecordTable,
    rational: Vec<Place>,
    /// `(d, s)` pairs and their conductor degree bound, per `m`.
    by_m: BTreeMap<usize, Vec<(i64, usize, i64)>>,
    rcg: &'a RayClassOptions,
    max_genus: i64,
}

enum Outcome {
    Done(Vec<Finding>),
    Skipped(Skipped),
}

impl Plan<'_> {
    fn process(&self, modulus: &Divisor) -> Result<Outcome> {
        let c = self.curve;
        let q = c.q();
        let m = modulus.support().filter(|p| p.is_rational()).count();
        let deg = modulus.degree();
        let pairs: Vec<(i64, usize)> = self.by_m.get(&m).map_or(Vec::new(), |v| {
            v.iter().filter(|&&(_, _, b)| deg <= b).map(|&(d, s, _)| (d, s)).collect()
        });
        if pairs.is_empty() {
            return Ok(Outcome::Done(Vec::new()));
        }
        let mtext = c.format_divisor(modulus);
        let rcg = match RayClassGroup::compute(c, modulus, self.rcg) {
            Ok(r) => r,
            Err(e @ (RayClassError::CertificateFailed { .. } | RayClassError::NoRationalPlace | RayClassError::DescentFailed(_))) => {
                return Ok(Outcome::Skipped(Skipped { modulus: mtext, reason: e.to_string() }))
            }
            Err(e) => return Err(InvariantError::from(e).into()),
        };
        let outside: Vec<Place> = self.rational.iter().filter(|p| modulus.coeff(p) == 0).cloned().collect();
        let classes: Vec<GroupElement> = subgroup_of_places(&rcg, &outside)?;
        let mut findings = Vec::new();
        for (d, s) in pairs {
            for idx in subsets(outside.len(), s) {
                let split: Vec<Place> = idx.iter().map(|&i| outside[i].clone()).collect();
                let base: Vec<GroupElement> = idx.iter().map(|&i| classes[i].clone()).collect();
                for gens in subgroups_above(rcg.group(), &base, d)? {
                    let cf = ClassField::new(&rcg, &gens)?;
                    // exactly the places of S split
                    let mut exact = true;
                    for (i, p) in outside.iter().enumerate() {
                        if !idx.contains(&i) && cf.splits_completely(p)? {
                            exact = false;
                            break;
                        }
                    }
                    if !exact {
                        continue;
                    }
                    let inv = cf.invariants()?;
                    if inv.conductor != *modulus || inv.genus > self.max_genus {
                        continue;
                    }
                    let upper = self.records.upper(q, inv.genus);
                    if inv.rational_places > upper {
                        return Err(SearchError::BoundViolation {
                            genus: inv.genus,
                            points: inv.rational_places,
                            upper,
                            modulus: mtext,
                        });
                    }
                    let old = self.records.get(q, inv.genus);
                    findings.push(Finding {
                        q,
                        curve: c.display(),
                        modulus: mtext.clone(),
                        split: format_set(c, &split),
                        degree: inv.degree,
                        galois_group: inv.galois_group.to_string(),
                        genus: inv.genus,
                        rational_places: inv.rational_places,
                        old_interval: old,
                        improved: old.is_some_and(|iv| iv.lower.is_none_or(|l| inv.rational_places > l) && inv.rational_places <= iv.upper),
                        meets_upper: inv.rational_places == upper,
                    });
                }
            }
        }
        Ok(Outcome::Done(findings))
    }
}

fn read_checkpoint(path: &PathBuf) -> Result<BTreeMap<String, usize>> {
    let mut map = BTreeMap::new();
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => return Ok(map),
        Err(e) => return Err(e.into()),
    };
    for line in text.lines().filter(|l| !l.trim().is_empty()) {
        let (curve, n) = line.rsplit_once('\t').ok_or_else(|| SearchError::Checkpoint(format!("malformed line {line:?}")))?;
        let n = n.trim().parse().map_err(|_| SearchError::Checkpoint(format!("bad count in {line:?}")))?;
        map.insert(curve.to_string(), n);
    }
    Ok(map)
}

fn write_checkpoint(path: &PathBuf, map: &BTreeMap<String, usize>) -> Result<()> {
    let text: String = map.iter().map(|(c, n)| format!("{c}\t{n}\n")).collect();
    let tmp = path.with_extension("tmp");
    std::fs::write(&tmp, text)?;
    std::fs::rename(&tmp, path)?;
    Ok(())
}

/// Bounds per triple for a curve; triples that cannot beat the table are
/// left out.
pub fn triple_bounds(curve: &CurveModel, config: &SearchConfig, records: &RecordTable) -> Vec<TripleBound> {
    let q = curve.q();
    let n = curve.rational_places().len();
    let cap = config.ds_cap.unwrap_or_else(|| {
        records.max_points_cap(q, config.max_genus).unwrap_or_else(|_| records.upper(q, config.max_genus))
    });
    let g_f = curve.genus() as i64;
    triple_schedule(n, cap)
        .into_iter()
        .filter(|&(_, s, _)| config.split_sizes.as_ref().is_none_or(|v| v.contains(&s)))
        .filter_map(|(d, s, m)| {
            let g = genus_ceiling(q, d, s, m, config.max_genus, records)?;
            let mut b = conductor_degree_bound(d, g_f, g)?;
            if let Some(c) = config.max_conductor_degree {
                b = b.min(c);
            }
            Some(TripleBound { d, s, m, genus_ceiling: g, degree_bound: b })
        })
        .collect()
}

pub fn search_curve(curve: &CurveModel, config: &SearchConfig, records: &RecordTable) -> Result<SearchReport> {
    let bounds = triple_bounds(curve, config, records);
    let mut by_m: BTreeMap<usize, Vec<(i64, usize, i64)>> = BTreeMap::new();
    for t in &bounds {
        by_m.entry(t.m).or_default().push((t.d, t.s, t.degree_bound));
    }
    let bmax = bounds.iter().map(|t| t.degree_bound).max().unwrap_or(-1);
    let places = match &config.support {
        Some(p) => p.clone(),
        None => curve.places_up_to(bmax.max(0) as usize),
    };
    let mbound: BTreeMap<usize, i64> = by_m.iter().map(|(&m, v)| (m, v.iter().map(|t| t.2).max().unwrap())).collect();
    let moduli: Vec<Divisor> = if bmax < 0 {
        Vec::new()
    } else {
        enumerate_moduli(&places, bmax, None)
            .into_iter()
            .filter(|d| {
                let m = d.support().filter(|p| p.is_rational()).count();
                mbound.get(&m).is_some_and(|&b| d.degree() <= b)
            })
            .collect()
    };
    let plan = Plan {
        curve,
        records,
        rational: curve.rational_places(),
        by_m,
        rcg: &config.rcg,
        max_genus: config.max_genus,
    };
    let key = curve.display();
    let mut checkpoint = match &config.checkpoint {
        Some(p) => read_checkpoint(p)?,
        None => BTreeMap::new(),
    };
    let start = checkpoint.get(&key).copied().unwrap_or(0).min(moduli.len());
    let end = config.stop_after.map_or(moduli.len(), |k| (start + k).min(moduli.len()));
    let mut report = SearchReport { bounds, resumed_from: start, total_moduli: moduli.len(), ..Default::default() };
    let pool = rayon::ThreadPoolBuilder::new().num_threads(config.workers.max(1)).build()?;
    let chunk = 4 * config.workers.max(1);
    let mut seen = BTreeSet::new();
    let mut pos = start;
    while pos < end {
        let batch = &moduli[pos..(pos + chunk).min(end)];
        let results: Vec<Result<Outcome>> = pool.install(|| batch.par_iter().map(|d| plan.process(d)).collect());
        let mut lines = String::new();
        for r in results {
            match r? {
                Outcome::Done(fs) => {
                    for f in fs {
                        if seen.insert((f.genus, f.rational_places, f.modulus.clone(), f.split.clone(), f.galois_group.clone(), f.degree)) {
                            lines.push_str(&serde_json::to_string(&f)?);
                            lines.push('\n');
                            report.findings.push(f);
                        }
                    }
                }
                Outcome::Skipped(s) => report.skipped.push(s),
            }
        }
        if let Some(out) = &config.out {
            OpenOptions::new().create(true).append(true).open(out)?.write_all(lines.as_bytes())?;
        }
        pos += batch.len();
        report.moduli += batch.len();
        if let Some(p) = &config.checkpoint {
            checkpoint.insert(key.clone(), pos);
            write_checkpoint(p, &checkpoint)?;
        }
    }
    Ok(report)
}

/// Reads findings written by [`search_curve`].
pub fn read_findings(path: &std::path::Path) -> Result<Vec<Finding>> {
    let text = std::fs::read_to_string(path)?;
    text.lines().filter(|l| !l.trim().is_empty()).map(|l| Ok(serde_json::from_str(l)?)).collect()
}
