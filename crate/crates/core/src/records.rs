//! Known intervals for `N_q(g)`, the maximal number of rational places of a
//! curve of genus `g` over `F_q`.
//!
//! The builtin table holds the intervals that were known before the
//! constructions in [`crate::fixtures`]. Larger tables are loaded from CSV
//! files with lines `q,g,lower,upper`, where `lower` may be empty.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RecordError {
    #[error("no record for q = {q}, g = {g}")]
    MissingEntry { q: u32, g: i64 },
    #[error("line {line}: {msg}")]
    Format { line: usize, msg: String },
    #[error("q = {q}, g = {g}: lower bound {lower} exceeds upper bound {upper}")]
    Inverted { q: u32, g: i64, lower: i64, upper: i64 },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, RecordError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Interval {
    pub lower: Option<i64>,
    pub upper: i64,
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.lower {
            Some(l) => write!(f, "[{l},{}]", self.upper),
            None => write!(f, "[,{}]", self.upper),
        }
    }
}

const BUILTIN: &[(u32, i64, Option<i64>, i64)] = &[
    (2, 17, Some(17), 18),
    (2, 45, Some(33), 37),
    (2, 46, Some(34), 38),
    (2, 48, Some(34), 39),
    (3, 17, Some(25), 30),
    (3, 22, Some(30), 36),
    (3, 33, Some(46), 49),
    (3, 46, Some(55), 63),
    (4, 41, Some(65), 78),
    (5, 8, Some(22), 28),
    (5, 10, Some(27), 33),
    (5, 12, Some(33), 38),
    (5, 26, None, 68),
    (5, 35, Some(68), 85),
    (5, 37, Some(72), 89),
    (5, 40, None, 94),
    (5, 45, Some(88), 104),
    (5, 46, Some(75), 106),
];

/// Integer square root.
fn isqrt(n: i64) -> i64 {
    let mut r = (n as f64).sqrt() as i64;
    while r * r > n {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= n {
        r += 1;
    }
    r
}

/// The Hasse-Weil-Serre bound `q + 1 + g⌊2√q⌋`.
pub fn serre_upper(q: u32, g: i64) -> i64 {
    let q = q as i64;
    q + 1 + g * isqrt(4 * q)
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RecordTable {
    rows: BTreeMap<(u32, i64), Interval>,
}

impl RecordTable {
    pub fn empty() -> RecordTable {
        RecordTable::default()
    }

    pub fn builtin() -> RecordTable {
        let mut t = RecordTable::empty();
        for &(q, g, lower, upper) in BUILTIN {
            t.rows.insert((q, g), Interval { lower, upper });
        }
        t
    }

    pub fn insert(&mut self, q: u32, g: i64, iv: Interval) -> Result<()> {
        if let Some(l) = iv.lower {
            if l > iv.upper {
                return Err(RecordError::Inverted { q, g, lower: l, upper: iv.upper });
            }
        }
        self.rows.insert((q, g), iv);
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn rows(&self) -> impl Iterator<Item = (u32, i64, Interval)> + '_ {
        self.rows.iter().map(|(&(q, g), &iv)| (q, g, iv))
    }

    pub fn get(&self, q: u32, g: i64) -> Option<Interval> {
        self.rows.get(&(q, g)).copied()
    }

    pub fn query(&self, q: u32, g: i64) -> Result<Interval> {
        self.get(q, g).ok_or(RecordError::MissingEntry { q, g })
    }

    /// `N` beats the lower bound and does not exceed the upper one.
    pub fn is_improvement(&self, q: u32, g: i64, n: i64) -> Result<bool> {
        let iv = self.query(q, g)?;
        Ok(iv.lower.is_none_or(|l| n > l) && n <= iv.upper)
    }

    /// Upper bound for `N_q(g)`: the table entry if present, otherwise the
    /// Serre bound.
    pub fn upper(&self, q: u32, g: i64) -> i64 {
        self.get(q, g).map_or_else(|| serre_upper(q, g), |iv| iv.upper.min(serre_upper(q, g)))
    }

    /// Largest upper bound over the rows with `g <= g_max`.
    pub fn max_points_cap(&self, q: u32, g_max: i64) -> Result<i64> {
        self.rows
            .range((q, i64::MIN)..=(q, g_max))
            .map(|(_, iv)| iv.upper)
            .max()
            .ok_or(RecordError::MissingEntry { q, g: g_max })
    }

    /// Raise the lower bound to `n` if that improves it; returns whether the
    /// table changed. Rows are created with the Serre bound as upper bound.
    pub fn record(&mut self, q: u32, g: i64, n: i64) -> bool {
        let upper = serre_upper(q, g);
        let iv = self.rows.entry((q, g)).or_insert(Interval { lower: None, upper });
        if iv.lower.is_none_or(|l| n > l) && n <= iv.upper {
            iv.lower = Some(n);
            true
        } else {
            false
        }
    }

    pub fn parse(text: &str) -> Result<RecordTable> {
        let mut t = RecordTable::empty();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let err = |msg: &str| RecordError::Format { line: i + 1, msg: msg.to_string() };
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 4 {
                return Err(err("expected q,g,lower,upper"));
            }
            if fields[0] == "q" {
                continue;
            }
            let q: u32 = fields[0].parse().map_err(|_| err("bad q"))?;
            let g: i64 = fields[1].parse().map_err(|_| err("bad genus"))?;
            let lower = match fields[2] {
                "" => None,
                s => Some(s.parse().map_err(|_| err("bad lower bound"))?),
            };
            let upper: i64 = fields[3].parse().map_err(|_| err("bad upper bound"))?;
            t.insert(q, g, Interval { lower, upper })?;
        }
        Ok(t)
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("q,g,lower,upper\n");
        for (q, g, iv) in self.rows() {
            let lower = iv.lower.map(|l| l.to_string()).unwrap_or_default();
            s.push_str(&format!("{q},{g},{lower},{}\n", iv.upper));
        }
        s
    }

    pub fn load(path: &Path) -> Result<RecordTable> {
        RecordTable::parse(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        Ok(std::fs::write(path, self.to_csv())?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn builtin_rows() {
        let t = RecordTable::builtin();
        assert_eq!(t.len(), 18);
        assert_eq!(t.query(2, 17).unwrap(), Interval { lower: Some(17), upper: 18 });
        assert_eq!(t.query(5, 26).unwrap().to_string(), "[,68]");
        assert!(t.is_improvement(2, 17, 18).unwrap());
        assert!(!t.is_improvement(2, 17, 17).unwrap());
        assert!(!t.is_improvement(2, 17, 19).unwrap());
        assert!(t.is_improvement(5, 40, 1).unwrap());
        assert!(matches!(t.query(2, 1), Err(RecordError::MissingEntry { q: 2, g: 1 })));
        for (q, g, iv) in t.rows() {
            assert!(iv.upper <= serre_upper(q, g));
        }
    }

    #[test]
    fn serre_bound() {
        assert_eq!(serre_upper(2, 0), 3);
        assert_eq!(serre_upper(2, 17), 37);
        assert_eq!(serre_upper(5, 10), 46);
        assert_eq!(serre_upper(4, 1), 9);
        assert_eq!(serre_upper(3, 1), 7);
    }

    #[test]
    fn caps() {
        let t = RecordTable::builtin();
        assert_eq!(t.max_points_cap(2, 50).unwrap(), 39);
        assert_eq!(t.max_points_cap(2, 20).unwrap(), 18);
        assert_eq!(t.max_points_cap(5, 12).unwrap(), 38);
        let one = RecordTable::parse("2,17,17,18").unwrap();
        assert_eq!(one.max_points_cap(2, 50).unwrap(), 18);
        assert!(matches!(RecordTable::empty().max_points_cap(2, 50), Err(RecordError::MissingEntry { .. })));
    }

    #[test]
    fn csv_round_trip() {
        let t = RecordTable::builtin();
        let csv = t.to_csv();
        assert_eq!(RecordTable::parse(&csv).unwrap(), t);
        assert_eq!(RecordTable::parse(&csv).unwrap().to_csv(), csv);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("records.csv");
        t.save(&path).unwrap();
        assert_eq!(std::fs::read_to_string(&path).unwrap(), csv);
        assert_eq!(RecordTable::load(&path).unwrap(), t);
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(RecordTable::parse("2,17,18"), Err(RecordError::Format { line: 1, .. })));
        assert!(matches!(RecordTable::parse("\n2,x,1,2"), Err(RecordError::Format { line: 2, .. })));
        assert!(matches!(RecordTable::parse("2,17,19,18"), Err(RecordError::Inverted { .. })));
    }

    #[test]
    fn recording_raises_lower_bound_only() {
        let mut t = RecordTable::builtin();
        assert!(!t.record(2, 17, 16));
        assert!(t.record(2, 17, 18));
        assert_eq!(t.query(2, 17).unwrap(), Interval { lower: Some(18), upper: 18 });
        assert!(!t.record(2, 17, 19));
        assert!(t.record(2, 3, 7));
        assert_eq!(t.query(2, 3).unwrap(), Interval { lower: Some(7), upper: serre_upper(2, 3) });
    }

    proptest! {
        #[test]
        fn records_never_lower(q in 2u32..6, g in 1i64..51, ns in prop::collection::vec(0i64..120, 1..8)) {
            let mut t = RecordTable::builtin();
            let upper = t.upper(q, g);
            for n in ns {
                let before = t.get(q, g).and_then(|iv| iv.lower);
                t.record(q, g, n);
                let iv = t.get(q, g).unwrap();
                prop_assert!(iv.lower >= before);
                prop_assert!(iv.upper >= upper);
                prop_assert!(iv.lower.unwrap_or(0) <= iv.upper);
            }
        }
    }
}
