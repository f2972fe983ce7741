//! Places of the function field, grouped by the prime of k[x] (or k[1/x])
//! below them.

use crate::algebra::residue::quadratic_roots;
use crate::algebra::{irreducibles, Poly, ResidueField};

use super::CurveModel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Chart {
    /// Coordinates (x, y).
    Finite,
    /// Coordinates (u, w) = (1/x, y/x^{g+1}); places over u = 0.
    Infinite,
}

/// How the prime below decomposes. The polynomial is the residue of the
/// chart's y-coordinate modulo the prime, of degree below the prime's.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Fiber {
    Split(Poly),
    Ramified(Poly),
    Inert,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Place {
    pub chart: Chart,
    /// Monic irreducible in the chart's first coordinate (x, or u for the
    /// infinite chart, where it is always `u`).
    pub prime: Poly,
    pub fiber: Fiber,
}

impl Place {
    pub fn degree(&self) -> usize {
        let d = self.prime.degree().expect("prime is nonconstant");
        match self.fiber {
            Fiber::Inert => 2 * d,
            _ => d,
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.chart == Chart::Infinite
    }

    pub fn is_rational(&self) -> bool {
        self.degree() == 1
    }

    /// Valuation of the prime element below (ramification index over k(x)).
    pub fn ramification(&self) -> u32 {
        match self.fiber {
            Fiber::Ramified(_) => 2,
            _ => 1,
        }
    }
}

impl CurveModel {
    /// All places over the monic irreducible `p` of the given chart, sorted.
    pub fn places_over(&self, chart: Chart, p: &Poly) -> Vec<Place> {
        let k = self.field();
        let (h, f) = self.chart(chart);
        let rf = ResidueField::new(k, p, 1);
        let big = rf.field();
        let roots = quadratic_roots(rf.reduce(h), big.neg(rf.reduce(f)), big);
        let lift = |e| rf.lift(e, k).expect("root lies in the residue field");
        let mk = |fiber| Place { chart, prime: p.clone(), fiber };
        let mut out: Vec<Place> = match roots.len() {
            0 => vec![mk(Fiber::Inert)],
            1 => vec![mk(Fiber::Ramified(lift(roots[0])))],
            _ => roots.iter().map(|&r| mk(Fiber::Split(lift(r)))).collect(),
        };
        out.sort();
        out
    }

    /// The places at infinity.
    pub fn infinite_places(&self) -> Vec<Place> {
        self.places_over(Chart::Infinite, &Poly::x())
    }

    /// All places of degree exactly `r`, finite ones first, sorted.
    pub fn places_of_degree(&self, r: usize) -> Vec<Place> {
        let k = self.field();
        let mut out = Vec::new();
        for p in irreducibles(k, r) {
            let d = p.degree().unwrap();
            if d != r && 2 * d != r {
                continue;
            }
            out.extend(self.places_over(Chart::Finite, &p).into_iter().filter(|pl| pl.degree() == r));
        }
        out.sort();
        out.extend(self.infinite_places().into_iter().filter(|pl| pl.degree() == r));
        out
    }

    /// All places of degree at most `r`, ordered by degree.
    pub fn places_up_to(&self, r: usize) -> Vec<Place> {
        (1..=r).flat_map(|d| self.places_of_degree(d)).collect()
    }

    pub fn rational_places(&self) -> Vec<Place> {
        self.places_of_degree(1)
    }

    /// The conjugate of a split place under `y -> -y - h`; other places are
    /// their own conjugates.
    pub fn conjugate(&self, place: &Place) -> Place {
        match &place.fiber {
            Fiber::Split(c) => {
                let k = self.field();
                let (h, _) = self.chart(place.chart);
                let other = c.neg(k).sub(h, k).rem(&place.prime, k);
                Place { chart: place.chart, prime: place.prime.clone(), fiber: Fiber::Split(other) }
            }
            _ => place.clone(),
        }
    }

    /// The ideal notation used by the parser, e.g. `(x + 1, y + 1)` or
    /// `(1/x, y/x^3 + 2)`.
    pub fn format_place(&self, place: &Place) -> String {
        let k = self.field();
        let (gen1, yvar) = match place.chart {
            Chart::Finite => (place.prime.display("x", k).to_string(), "y".to_string()),
            Chart::Infinite => {
                let e = self.genus() + 1;
                ("1/x".to_string(), if e == 1 { "y/x".to_string() } else { format!("y/x^{e}") })
            }
        };
        match &place.fiber {
            Fiber::Inert => format!("({gen1})"),
            Fiber::Split(c) | Fiber::Ramified(c) => {
                let nc = c.neg(k);
                if nc.is_zero() {
                    format!("({gen1}, {yvar})")
                } else {
                    format!("({gen1}, {yvar} + {})", nc.display("x", k))
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_curve() -> CurveModel {
        CurveModel::new(2, Poly::new(vec![1, 1, 1]), Poly::new(vec![0, 1, 1, 0, 1, 1]), 2).unwrap()
    }

    #[test]
    fn base_curve_rational_places() {
        let c = base_curve();
        let names: Vec<String> = c.rational_places().iter().map(|p| c.format_place(p)).collect();
        assert_eq!(names, vec!["(x, y)", "(x, y + 1)", "(x + 1, y)", "(x + 1, y + 1)", "(1/x, y/x^3)"]);
        assert_eq!(c.infinite_places()[0].fiber, Fiber::Ramified(Poly::zero()));
    }

    #[test]
    fn conjugates_pair_up() {
        let c = base_curve();
        for r in 1..=3 {
            for p in c.places_of_degree(r) {
                let q = c.conjugate(&p);
                assert_eq!(c.conjugate(&q), p);
                assert_eq!(p == q, !matches!(p.fiber, Fiber::Split(_)));
            }
        }
    }

    /// Curves over each base field used in the property test below.
    fn sample_curves() -> Vec<CurveModel> {
        let mut out = vec![base_curve()];
        // y^2 + xy = x^5 + x over F_2
        out.push(CurveModel::new(2, Poly::x(), Poly::new(vec![0, 1, 0, 0, 0, 1]), 2).unwrap());
        // y^2 = x^5 + 2x over F_3, and a sextic model over F_5
        out.push(CurveModel::new(3, Poly::zero(), Poly::new(vec![0, 2, 0, 0, 0, 1]), 2).unwrap());
        out.push(CurveModel::new(5, Poly::zero(), Poly::new(vec![1, 2, 1, 1, 3, 4, 2]), 2).unwrap());
        // F_4 fixture curve: y^2 + (x^2 + x) y = x^5 + x^3 + a^2 x^2 + a^2 x
        out.push(CurveModel::new(4, Poly::new(vec![0, 1, 1]), Poly::new(vec![0, 3, 3, 1, 0, 1]), 2).unwrap());
        out
    }

    #[test]
    fn place_degrees_match_point_counts() {
        for c in sample_curves() {
            let counts: Vec<usize> = (1..=4).map(|r| c.places_of_degree(r).len()).collect();
            for i in 1..=4 {
                let lhs: usize = (1..=i).filter(|d| i % d == 0).map(|d| d * counts[d - 1]).sum();
                assert_eq!(lhs as u64, c.count_points(i as u32), "q = {}, i = {}", c.q(), i);
            }
        }
    }
}
