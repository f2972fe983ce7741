//! Divisors and principal divisors of functions `a(x) + b(x) y`.

use std::collections::BTreeMap;

use crate::algebra::Poly;

use super::{Chart, CurveModel, Fiber, Place};

#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Divisor {
    terms: BTreeMap<Place, i64>,
}

impl Divisor {
    pub fn zero() -> Divisor {
        Divisor::default()
    }

    pub fn from_place(p: Place, n: i64) -> Divisor {
        let mut d = Divisor::zero();
        d.add_term(p, n);
        d
    }

    pub fn add_term(&mut self, p: Place, n: i64) {
        if n == 0 {
            return;
        }
        let e = self.terms.entry(p.clone()).or_insert(0);
        *e += n;
        if *e == 0 {
            self.terms.remove(&p);
        }
    }

    pub fn add(&self, other: &Divisor) -> Divisor {
        let mut d = self.clone();
        for (p, &n) in &other.terms {
            d.add_term(p.clone(), n);
        }
        d
    }

    pub fn scale(&self, k: i64) -> Divisor {
        let mut d = Divisor::zero();
        for (p, &n) in &self.terms {
            d.add_term(p.clone(), n * k);
        }
        d
    }

    pub fn sub(&self, other: &Divisor) -> Divisor {
        self.add(&other.scale(-1))
    }

    pub fn coeff(&self, p: &Place) -> i64 {
        self.terms.get(p).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.terms.iter().map(|(p, n)| n * p.degree() as i64).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.terms.values().all(|&n| n > 0)
    }

    pub fn support(&self) -> impl Iterator<Item = &Place> {
        self.terms.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Place, i64)> {
        self.terms.iter().map(|(p, &n)| (p, n))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &Divisor) -> bool {
        self.terms.iter().all(|(p, &n)| n <= other.coeff(p)) && other.terms.iter().all(|(p, &n)| self.coeff(p) <= n)
    }
}

impl CurveModel {
    /// Norm `a^2 - a b h - b^2 f` of `a + b y` in the given chart.
    pub fn norm(&self, chart: Chart, a: &Poly, b: &Poly) -> Poly {
        let k = self.field();
        let (h, f) = self.chart(chart);
        a.mul(a, k).sub(&a.mul(b, k).mul(h, k), k).sub(&b.mul(b, k).mul(f, k), k)
    }

    /// `(a*, b*, M)` with `u^M (a + b y) = a*(u) + b*(u) w`.
    pub fn to_infinite_chart(&self, a: &Poly, b: &Poly) -> (Poly, Poly, usize) {
        let e = self.genus() + 1;
        let m = (a.deg_i()).max(if b.is_zero() { -1 } else { b.deg_i() + e as i64 }).max(0) as usize;
        let bs = if b.is_zero() { Poly::zero() } else { b.reversed(m - e) };
        (a.reversed(m), bs, m)
    }

    /// Valuations of `a + b y` (chart coordinates) at the places over the
    /// prime `p`, where `e` is the multiplicity of `p` in the chart norm.
    pub fn valuations_over(&self, places: &[Place], a: &Poly, b: &Poly, e: u32) -> Vec<(Place, i64)> {
        let e = e as i64;
        match places {
            [p] => match p.fiber {
                Fiber::Inert => {
                    debug_assert_eq!(e % 2, 0, "norm has odd valuation at an inert prime");
                    vec![(p.clone(), e / 2)]
                }
                _ => vec![(p.clone(), e)],
            },
            [p1, p2] => {
                let k = self.field();
                let pr = &p1.prime;
                let vz = |g: &Poly| if g.is_zero() { u32::MAX } else { g.valuation(pr, k) };
                let kk = vz(a).min(vz(b)) as i64;
                let extra = e - 2 * kk;
                if extra == 0 {
                    return vec![(p1.clone(), kk), (p2.clone(), kk)];
                }
                let pk = pr.pow(kk as u32, k);
                let (a1, b1) = (a.div_exact(&pk, k), b.div_exact(&pk, k));
                let vanishes = |pl: &Place| match &pl.fiber {
                    Fiber::Split(c) => a1.add(&b1.mul(c, k), k).rem(pr, k).is_zero(),
                    _ => unreachable!(),
                };
                if vanishes(p1) {
                    vec![(p1.clone(), kk + extra), (p2.clone(), kk)]
                } else {
                    debug_assert!(vanishes(p2));
                    vec![(p1.clone(), kk), (p2.clone(), kk + extra)]
                }
            }
            _ => unreachable!("one or two places lie over each prime"),
        }
    }

    /// Valuations of `a + b y` at the infinite places.
    pub fn valuations_at_infinity(&self, a: &Poly, b: &Poly) -> Vec<(Place, i64)> {
        let (as_, bs, m) = self.to_infinite_chart(a, b);
        let n = self.norm(Chart::Infinite, &as_, &bs);
        let e = n.valuation(&Poly::x(), self.field());
        let places = self.infinite_places();
        self.valuations_over(&places, &as_, &bs, e)
            .into_iter()
            .map(|(p, v)| {
                let vu = p.ramification() as i64;
                (p, v - m as i64 * vu)
            })
            .collect()
    }

    /// Valuation of `a + b y` at one place.
    pub fn valuation_at(&self, place: &Place, a: &Poly, b: &Poly) -> i64 {
        let vals = match place.chart {
            Chart::Infinite => self.valuations_at_infinity(a, b),
            Chart::Finite => {
                let n = self.norm(Chart::Finite, a, b);
                let e = n.valuation(&place.prime, self.field());
                let places = self.places_over(Chart::Finite, &place.prime);
                self.valuations_over(&places, a, b, e)
            }
        };
        vals.into_iter().find(|(p, _)| p == place).map(|(_, v)| v).expect("place lies over its prime")
    }

    /// Principal divisor of `a + b y` (not both zero).
    pub fn function_divisor(&self, a: &Poly, b: &Poly) -> Divisor {
        let k = self.field();
        let n = self.norm(Chart::Finite, a, b);
        assert!(!n.is_zero(), "divisor of zero");
        let mut d = Divisor::zero();
        if !n.is_constant() {
            for (p, e) in n.factor(k).1 {
                let places = self.places_over(Chart::Finite, &p);
                for (pl, v) in self.valuations_over(&places, a, b, e) {
                    d.add_term(pl, v);
                }
            }
        }
        for (pl, v) in self.valuations_at_infinity(a, b) {
            d.add_term(pl, v);
        }
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn base_curve() -> CurveModel {
        CurveModel::new(2, Poly::new(vec![1, 1, 1]), Poly::new(vec![0, 1, 1, 0, 1, 1]), 2).unwrap()
    }

    #[test]
    fn divisor_of_x() {
        let c = base_curve();
        let d = c.function_divisor(&Poly::x(), &Poly::zero());
        let r = c.rational_places();
        let mut expected = Divisor::from_place(r[0].clone(), 1);
        expected.add_term(r[1].clone(), 1);
        expected.add_term(r[4].clone(), -2);
        assert_eq!(d, expected);
        assert!(c.function_divisor(&Poly::one(), &Poly::zero()).is_zero());
    }

    #[test]
    fn divisor_of_y() {
        // y vanishes where y = 0 and has a pole of order 5 at the ramified infinite place
        let c = base_curve();
        let d = c.function_divisor(&Poly::zero(), &Poly::one());
        assert_eq!(d.degree(), 0);
        assert_eq!(d.coeff(&c.infinite_places()[0]), -5);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn principal_divisors_have_degree_zero(
            q_idx in 0usize..3,
            a in prop::collection::vec(0u32..5, 0..6),
            b in prop::collection::vec(0u32..5, 0..4),
        ) {
            let curves = [
                base_curve(),
                CurveModel::new(3, Poly::zero(), Poly::new(vec![0, 2, 0, 0, 0, 1]), 2).unwrap(),
                CurveModel::new(4, Poly::new(vec![0, 1, 1]), Poly::new(vec![0, 3, 3, 1, 0, 1]), 2).unwrap(),
            ];
            let c = &curves[q_idx];
            let q = c.q();
            let a = Poly::new(a.into_iter().map(|x| x % q).collect());
            let b = Poly::new(b.into_iter().map(|x| x % q).collect());
            prop_assume!(!(a.is_zero() && b.is_zero()));
            let d = c.function_divisor(&a, &b);
            prop_assert_eq!(d.degree(), 0);
            // valuations over each finite prime add up to the norm's multiplicity
            let n = c.norm(Chart::Finite, &a, &b);
            let factors = if n.is_constant() { vec![] } else { n.factor(c.field()).1 };
            for (p, e) in factors {
                let s: i64 = d.iter().filter(|(pl, _)| pl.chart == Chart::Finite && pl.prime == p)
                    .map(|(pl, v)| v * pl.degree() as i64).sum();
                prop_assert_eq!(s, e as i64 * p.degree().unwrap() as i64);
            }
        }
    }
}
