//! Published constructions of curves with many points: base curve, modulus,
//! places required to split, and the resulting genus and point count.
//! Strings are kept in their original notation and parsed on use.

use crate::curve::{self, CurveModel, Divisor, Place};
use crate::invariants::{self, ClassFieldInvariants};
use crate::rayclass::{RayClassGroup, RayClassOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fixture {
    pub name: &'static str,
    pub q: u32,
    pub genus: i64,
    pub points: i64,
    pub curve: &'static str,
    pub modulus: &'static str,
    pub split: &'static str,
    /// Defining polynomials of the extension, if known.
    pub polys: &'static [&'static str],
    /// Known interval for `N_q(g)` before this construction (`None` for
    /// intermediate fields that are not records).
    pub old_interval: Option<(Option<i64>, i64)>,
    /// Index of the subgroup, when stated alongside the construction.
    pub index: Option<i64>,
    /// Modulus at which the stated genus and point count are actually
    /// attained, when the stated modulus admits a larger wildly ramified
    /// extension in which the same places split.
    pub attained_with: Option<&'static str>,
}

impl Fixture {
    /// The fixture with `attained_with` as its modulus.
    pub fn corrected(&self) -> Option<Fixture> {
        self.attained_with.map(|m| Fixture { modulus: m, attained_with: None, ..*self })
    }

    pub fn parse(&self) -> curve::Result<(CurveModel, Divisor, Vec<Place>)> {
        let c = curve::parse_curve(self.q, self.curve)?;
        let d = curve::parse_divisor(&c, self.modulus)?;
        let s = curve::parse_place_set(&c, self.split)?;
        Ok((c, d, s))
    }

    /// Name of the base variable used in the strings.
    pub fn base_variable(&self) -> &'static str {
        if self.curve.contains('z') {
            "z"
        } else {
            "x"
        }
    }
}

const EX1: &str = "y^2 + (x^2 + x + 1)y + x^5 + x^4 + x^2 + x";
const EX1_SPLIT: &str = "{(1/x, y/x^3), (x + 1, y + 1)}";
const F3_G22: &str = "y^2 + 2x^6 + x^5 + 2x^4 + x^3 + 2x^2 + x + 2";

const G7_POLY: &str = "T^4 + (x^3 +x)T^2 + (x^4 + 1)T + (x^6 + x^3 + x^2 + x)y + x^{16} + x^{12} + x^{11}
    + x^{10} + x^9 + x^8 + x^7 + x^5 + x^4 + 1";

const G17_POLY: &str = "T^8 + (x^5 + x^4 + x + 1)T^6 + (x^7 + x^6 + x^5 + x^4 + x^3 + x^2 + x + 1)T^5
    + ((x^{17} + x^{15} + x^{14} + x^{13} + x^{12} + x^{10} + x^7 + x^5 + x + 1)y + (x^{22}
    + x^{20} + x^{19} + x^{14} + x^{12} + x^{11} + x^{10} + x^7 + x^5 + x^3 + x^2 + x))T^4
    + (x^{11} + x^{10} + x^9 + x^8 + x^3 + x^2 + x + 1)T^3
    + ((x^{31} + x^{29} + x^{28} + x^{27} + x^{24} + x^{23} + x^{21}
    + x^{16} + x^{13} + x^{10} + x^9 + x^5 + x^4 + x^3 + x^2 + x)y
    + (x^{35} + x^{32} + x^{31} + x^{30} + x^{29} + x^{27} + x^{26} + x^{25} + x^{24}
    + x^{19} + x^{15} + x^{12} + x^{10} + x^6 + x^5 + x^4 + x^3 + x))T^2
    + ((x^{33} + x^{30} + x^{28} + x^{27} + x^{26} + x^{25} + x^{24} + x^{23}
    + x^{21} + x^{20} + x^{19} + x^{18} + x^{17} + x^{15} + x^{14} + x^{13}
    + x^{12} + x^{11} + x^9 + x^4 + x^3 + 1)y + (x^{37} + x^{35} + x^{34}
    + x^{33} + x^{30} + x^{24} + x^{23} + x^{16} + x^{15} + x^{13} + x^6 + x^3 + x^2 + x))T
    + (x^{54} + x^{53} + x^{51} + x^{50} + x^{47} + x^{45} + x^{44} + x^{43} + x^{42}
    + x^{41} + x^{39} + x^{38} + x^{37} + x^{36} + x^{29} + x^{24} + x^{22} + x^{19} + x^{17} + x^{16}
    + x^{15}+ x^{11} + x^{10} + x^7 + x^6 + x^2)y + x^{60} + x^{58} + x^{57} + x^{55} + x^{54}
    + x^{53}+ x^{52} + x^{51} + x^{47} + x^{46} + x^{45} + x^{40} + x^{39} + x^{37}+ x^{35} + x^{33}
    + x^{32} + x^{30} + x^{29} + x^{28} + x^{26} + x^{21} + x^{19} + x^{18} + x^{17} + x^{16} + x^{15}
    + x^{13}+ x^{11} + x^9 + x^6 + x^4 + x^2 + 1";

/// A second published equation for `T_2` in the genus 22 field, differing
/// from the one in its fixture.
pub const F3_G22_ALT_POLY: &str = "T_2^3 + 2T_2 + (x^3 + 2x^2 + x + 2/x)y + x^6 + 2x^3 + 2x^2 + 2 + 2/x";

pub const FIXTURES: &[Fixture] = &[
    Fixture {
        name: "f2-g7",
        q: 2,
        genus: 7,
        points: 10,
        curve: EX1,
        modulus: "2(x + 1, y + x + 1)",
        split: EX1_SPLIT,
        polys: &[G7_POLY],
        old_interval: None,
        index: Some(4),
        attained_with: None,
    },
    Fixture {
        name: "f2-g17",
        q: 2,
        genus: 17,
        points: 18,
        curve: EX1,
        modulus: "3(z + 1, y + z + 1)",
        split: "{(1/z, y/z^3), (z + 1, y + 1)}",
        polys: &[G17_POLY],
        old_interval: Some((Some(17), 18)),
        index: Some(8),
        attained_with: None,
    },
    Fixture {
        name: "f2-g45-34",
        q: 2,
        genus: 45,
        points: 34,
        curve: EX1,
        modulus: "5(x + 1, y + x + 1)",
        split: EX1_SPLIT,
        polys: &[],
        old_interval: None,
        index: None,
        attained_with: None,
    },
    Fixture {
        name: "f2-g45",
        q: 2,
        genus: 45,
        points: 36,
        curve: "y^2 + (x^3 + x + 1)y + x^6 + x^5 + x^4 + x^2",
        modulus: "(x^2 + x + 1, y + x + 1) + 3(x^2 + x + 1, y + x^2 + x)",
        split: "{(x, y + x), (x + 1, y), (x + 1, y + 1)}",
        polys: &[],
        old_interval: Some((Some(33), 37)),
        index: Some(12),
        attained_with: None,
    },
    Fixture {
        name: "f2-g46",
        q: 2,
        genus: 46,
        points: 36,
        curve: "y^2 + xy + x^5 + x^3 + x^2 + x",
        modulus: "(x^3 + x + 1) + (x^2 + x + 1, y + x + 1) + (x^2 + x + 1, y + 1)",
        split: "{(1/x, y/x^3), (x, y), (x + 1, y), (x + 1, y + x)}",
        polys: &[],
        old_interval: Some((Some(34), 38)),
        index: None,
        attained_with: None,
    },
    Fixture {
        name: "f2-g48",
        q: 2,
        genus: 48,
        points: 35,
        curve: "y^2 + xy + x^5 + x",
        modulus: "(x^4 + x + 1, y + x^3 + x^2) + (x^4 + x + 1, y + x^3 + x^2 + x) + 2(1/x,y/x^3)",
        split: "{(x, y), (x + 1, y + x + 1), (x + 1, y + 1), (x^2 + x + 1)}",
        polys: &[],
        old_interval: Some((Some(34), 39)),
        index: None,
        attained_with: None,
    },
    Fixture {
        name: "f3-g17",
        q: 3,
        genus: 17,
        points: 28,
        curve: "y^2 + x^5 + x^4 + x^2 + 2x",
        modulus: "(1/x, y/x^3) + (x + 1, y + 1) + 2(x^2 + 1, y)",
        split: "{(x + 1, y + 2), (x + 2, y + 1), (x + 2, y + 2)}",
        polys: &["T_1^4 + (x^3 + x)T_1^2 + 2x^6 + 2x^5 + x^4 + 2x^3 + 2x^2", "T_2^2 + (x + 1)y + x^3 + x^2 + x + 1"],
        old_interval: Some((Some(25), 30)),
        index: None,
        attained_with: None,
    },
    Fixture {
        name: "f3-g22",
        q: 3,
        genus: 22,
        points: 33,
        curve: F3_G22,
        modulus: "2(1/x, y/x^3+ 1) + 2(x, y + 2)",
        split: "{(x + 1, y + x + 2), (x + 2, y + x), (x + 2, y + x + 1), (x^5 + x^3 + x + 1, y + 2x^4 + x^3 + 2x)}",
        polys: &[
            "T_1^3 + 2T_1 + (x^3 + 2x^2 + x + 1 + 1/x)y + x^6 + 2x^2 + 2x + 1/x",
            "T_2^3 + 2T_2 + (x^4 + 2x^3 + x^2 + 2)y/x + (x^7 + 2x^4 + 2x^3 + 2x + 2)/x",
        ],
        old_interval: Some((Some(30), 36)),
        index: None,
        attained_with: None,
    },
    Fixture {
        name: "f3-g33",
        q: 3,
        genus: 33,
        points: 48,
        curve: "y^2 + 2x^6 + x^5 + 2x^4 + x",
        modulus: "(x^2 + 1, y + x + 2) + (x^2 + 1, y + 2x + 1)",
        split: "{(1/x, y/x^3 + 1), (1/x, y/x^3 + 2), (x, y)}",
        polys: &[],
        old_interval: Some((Some(46), 49)),
        index: None,
        attained_with: None,
    },
    Fixture {
        name: "f3-g46",
        q: 3,
        genus: 46,
        points: 60,
        curve: F3_G22,
        modulus: "2(1/x, y/x^3 + 1) + 2(x, y + 2)",
        split: "{(x + 1, y + x + 2), (x + 2, y + x), (x + 2, y + x + 1)}",
        polys: &[],
        old_interval: Some((Some(55), 63)),
        index: None,
        attained_with: None,
    },
    Fixture {
        name: "f4-g41",
        q: 4,
        genus: 41,
        points: 72,
        curve: "y^2 + (x^2 + x)y + x^5 + x^3 + a^2x^2 + a^2x",
        modulus: "(x + a, y + x) + (x + a, y + a^2)",
        split: "{(1/x, y/x^3), (x, y), (x + 1, y)}",
        polys: &[],
        old_interval: Some((Some(65), 78)),
        index: None,
        attained_with: None,
    },
    Fixture {
        name: "f5-g8",
        q: 5,
        genus: 8,
        points: 24,
        curve: "y^2 + 4z^6 + 2z^5 + 2z^3 + z^2 + 2z",
        modulus: "(z^2 + 2z + 3, y + 4z + 4) + (z^2 + 4z + 2, y + 3z + 2)",
        split: "{(1/z, y/z^3 + 1), (1/z, y/z^3 + 4), (z, y), (z + 3, y + 4), (z + 1, y + 4), (z + 2, y + 2), (z + 4, y + 2), (z + 4, y + 3)}",
        polys: &["T^3 + ((4z + 3)y + (3z^4 + 3z^2 + 2))T + (4z^3 + 3z^2 + 4z + 2)y + 4z^6 + z^4 + z^3 + z^2 + 2z + 2"],
        old_interval: Some((Some(22), 28)),
        index: None,
        attained_with: None,
    },
    Fixture {
        name: "f5-g10",
        q: 5,
        genus: 10,
        points: 31,
        curve: "y^2 + 4z^6 + 2z^5 + 3z^3 + 4z^2 + 1",
        modulus: "3(z + 3, y + z)",
        split: "{(1/z, 1/z^3y + 1), (1/z, y/z^3 + 4), (z, y + z + 2), (z + 3, y + z + 1), (z + 1, y + 1), (z + 4, y + 4)}",
        polys: &["T^5 + 4T + (4z^3 + z^2 + 3z + 4)y/(z + 3) + (z^6 + 3z^5 + 4z^2 + 2z + 3)/(z + 3)"],
        old_interval: Some((Some(27), 33)),
        index: None,
        attained_with: None,
    },
    Fixture {
        name: "f5-g12",
        q: 5,
        genus: 12,
        points: 36,
        curve: "y^2 + 3z^6 + z^5 + 2z^4 + 4z^3 + 4z^2 + 3z + 4",
        modulus: "2(1/z)",
        split: "{(z, y + 1), (z, y + 4), (z + 2, y + z + 3), (z + 2, y + z + 1), (z + 4, y + 2), (z + 4, y + 3)}",
        polys: &["x^2 + 4z^3 + 2z^2 + 4z + 1", "w^3 + (3z^3 + z^2 + 2z + 1)w + z^5 + 3z^3 + 3z"],
        old_interval: Some((Some(33), 38)),
        index: None,
        attained_with: None,
    },
    Fixture {
        name: "f5-g26",
        q: 5,
        genus: 26,
        points: 60,
        curve: "y^2 + z^6 + z^5 + 4z^4 + 4z^3 + 4z^2 + z + 1",
        modulus: "(z^2 + z + 1, y + 3) + (z^2 + 3, y + 3z + 2)",
        split: "{(1/z, y/z^3 + 2), (z, y + 2), (z + 3, y + z), (z + 2, y + 4)}",
        polys: &[],
        old_interval: Some((None, 68)),
        index: None,
        attained_with: None,
    },
    Fixture {
        name: "f5-g35",
        q: 5,
        genus: 35,
        points: 72,
        curve: "y^2 + z^6 + 4z^5 + 2z^4 + 2z^2 + 4z + 1",
        modulus: "(z^2 + z + 1, y + 2) + (z + 1)",
        split: "{(1/z, y/z^3 + 2), (z, y + 2), (z + 3, y + 2), (z + 2, y + z + 1), (z + 4, y + 1), (z + 4, y + 4)}",
        polys: &[],
        old_interval: Some((Some(68), 85)),
        index: None,
        attained_with: None,
    },
    Fixture {
        name: "f5-g37",
        q: 5,
        genus: 37,
        points: 80,
        curve: "y^2 + z^5 + z^4 + 2z^3 + z^2 + 4z",
        modulus: "3(z, y)",
        split: "{(1/z, y/z^3), (z + 1, y), (z + 4, y + 1), (z + 4, y + 4)}",
        polys: &[],
        old_interval: Some((Some(72), 89)),
        index: None,
        attained_with: None,
    },
    Fixture {
        name: "f5-g40",
        q: 5,
        genus: 40,
        points: 72,
        curve: "y^2 + 2z^5 + z^4 + 2",
        modulus: "(z + 3) + (z)",
        split: "{(1/z, y/z^3), (z + 1, y + 2), (z + 1, y + 3), (z + 4, y)}",
        polys: &[],
        old_interval: Some((None, 94)),
        index: None,
        attained_with: None,
    },
    Fixture {
        name: "f5-g45",
        q: 5,
        genus: 45,
        points: 96,
        curve: "y^2 + 2z^6 + 4z^4 + 3z^2 + 1",
        modulus: "2(1/z)",
        split: "{(z + 3, y), (z + 1, y), (z + 2, y), (z + 4, y)}",
        polys: &[],
        old_interval: Some((Some(88), 104)),
        index: None,
        attained_with: Some("(1/z)"),
    },
    Fixture {
        name: "f5-g46",
        q: 5,
        genus: 46,
        points: 81,
        curve: "y^2 + z^6 + 2z^5 + 2z^4 + z^3 + 2z^2 + 2z + 1",
        modulus: "2(z^2 + 4z + 2, y + z^2 + 4)",
        split: "{(z, y + 2), (z + 3, y + 3), (z + 1, y + 3)}",
        polys: &[],
        old_interval: Some((Some(75), 106)),
        index: None,
        attained_with: Some("(z^2 + 4z + 2, y + z^2 + 4)"),
    },
];

pub fn fixture(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name)
}

/// Result of recomputing one fixture.
#[derive(Debug, Clone)]
pub struct Verification {
    pub fixture: &'static Fixture,
    /// Structure of the ray class group as a string.
    pub group: String,
    pub certificate_holds: bool,
    pub invariants: ClassFieldInvariants,
    /// Invariants with the corrected modulus, for fixtures that have one.
    pub corrected: Option<ClassFieldInvariants>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Match,
    /// The stated modulus gives a different field, but the stated values are
    /// reproduced with `attained_with`.
    Erratum,
    Mismatch,
}

impl Verification {
    pub fn status(&self) -> Status {
        let f = self.fixture;
        let want = (f.genus, f.points);
        let got = |inv: &ClassFieldInvariants| (inv.genus, inv.rational_places);
        let index_ok = f.index.is_none_or(|i| i == self.invariants.degree);
        if !self.certificate_holds {
            Status::Mismatch
        } else if got(&self.invariants) == want && index_ok {
            Status::Match
        } else if self.corrected.as_ref().is_some_and(|c| got(c) == want) {
            Status::Erratum
        } else {
            Status::Mismatch
        }
    }
}

fn class_field(f: &Fixture, opts: &RayClassOptions) -> invariants::Result<(RayClassGroup, ClassFieldInvariants)> {
    let (c, d, s) = f.parse()?;
    let rcg = RayClassGroup::compute(&c, &d, opts)?;
    let inv = invariants::invariants_for_places(&rcg, &s)?;
    Ok((rcg, inv))
}

pub fn verify(f: &'static Fixture, opts: &RayClassOptions) -> invariants::Result<Verification> {
    let (rcg, inv) = class_field(f, opts)?;
    let corrected = match f.corrected() {
        Some(g) => Some(class_field(&g, opts)?.1),
        None => None,
    };
    Ok(Verification {
        fixture: f,
        group: rcg.group().to_string(),
        certificate_holds: rcg.certificate().holds(),
        invariants: inv,
        corrected,
    })
}
