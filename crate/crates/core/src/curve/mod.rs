//! Hyperelliptic function fields `y^2 + h(x) y = f(x)` of genus at most 2.

mod divisor;
mod parse;
mod place;

pub use divisor::Divisor;
pub use parse::{parse_curve, parse_divisor, parse_place, parse_place_set, Evaluator, Expr, RatFn, YPoly};
pub use place::{Chart, Fiber, Place};

use std::sync::Arc;

use thiserror::Error;

use crate::algebra::residue::{cached_field, quadratic_roots};
use crate::algebra::{Elt, Embedding, Gf, Poly};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("unsupported base field size {0} (expected 2, 3, 4 or 5)")]
    UnsupportedField(u32),
    #[error("model is singular on the {0} chart")]
    SingularModel(&'static str),
    #[error("odd characteristic models must have h = 0")]
    CrossTermInOddCharacteristic,
    #[error("degrees of h and f do not match genus {0}")]
    DegreeMismatch(usize),
    #[error("point count N_{i} = {n} violates the Weil bound")]
    WeilBoundViolation { i: u32, n: i64 },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("more than one place lies over {0}")]
    AmbiguousPlace(String),
    #[error("no place matches {0}")]
    UnknownPlace(String),
}

pub type Result<T> = std::result::Result<T, CurveError>;

/// A nonsingular model over F_q together with its chart at infinity
/// `w^2 + h*(u) w = f*(u)`, `u = 1/x`, `w = y/x^{g+1}`.
#[derive(Clone, Debug)]
pub struct CurveModel {
    field: Arc<Gf>,
    h: Poly,
    f: Poly,
    genus: usize,
    h_inf: Poly,
    f_inf: Poly,
}

impl PartialEq for CurveModel {
    fn eq(&self, other: &Self) -> bool {
        self.field.size() == other.field.size() && self.h == other.h && self.f == other.f && self.genus == other.genus
    }
}
impl Eq for CurveModel {}

/// The base field F_q as a table-driven field.
pub fn base_field(q: u32) -> Result<Arc<Gf>> {
    match q {
        2 | 3 | 5 => Ok(cached_field(q, 1)),
        4 => Ok(cached_field(2, 2)),
        _ => Err(CurveError::UnsupportedField(q)),
    }
}

fn smooth_chart(k: &Gf, h: &Poly, f: &Poly) -> bool {
    if k.characteristic() == 2 {
        if h.is_zero() {
            return false;
        }
        let dh = h.derivative(k);
        let df = f.derivative(k);
        let t = dh.mul(&dh, k).mul(f, k).add(&df.mul(&df, k), k);
        return h.gcd(&t, k).is_one();
    }
    let disc = h.mul(h, k).add(&f.scale(k.from_int(4), k), k);
    if disc.is_zero() {
        return false;
    }
    disc.gcd(&disc.derivative(k), k).is_one()
}

impl CurveModel {
    /// Validates the model and builds the chart at infinity.
    pub fn new(q: u32, h: Poly, f: Poly, genus: usize) -> Result<CurveModel> {
        let field = base_field(q)?;
        if genus > 2 || h.deg_i() > genus as i64 + 1 || f.deg_i() > 2 * genus as i64 + 2 {
            return Err(CurveError::DegreeMismatch(genus));
        }
        if q % 2 == 1 && !h.is_zero() {
            return Err(CurveError::CrossTermInOddCharacteristic);
        }
        let h_inf = h.reversed(genus + 1);
        let f_inf = f.reversed(2 * genus + 2);
        if !smooth_chart(&field, &h, &f) {
            return Err(CurveError::SingularModel("affine"));
        }
        if !smooth_chart(&field, &h_inf, &f_inf) {
            return Err(CurveError::SingularModel("infinite"));
        }
        let c = CurveModel { field, h, f, genus, h_inf, f_inf };
        for i in 1..=genus.max(1) as u32 {
            c.weil_check(i)?;
        }
        Ok(c)
    }

    pub fn q(&self) -> u32 {
        self.field.size()
    }

    pub fn field(&self) -> &Gf {
        &self.field
    }

    pub fn field_arc(&self) -> Arc<Gf> {
        self.field.clone()
    }

    pub fn h(&self) -> &Poly {
        &self.h
    }

    pub fn f(&self) -> &Poly {
        &self.f
    }

    pub fn genus(&self) -> usize {
        self.genus
    }

    /// `(h, f)` of the given chart.
    pub fn chart(&self, chart: Chart) -> (&Poly, &Poly) {
        match chart {
            Chart::Finite => (&self.h, &self.f),
            Chart::Infinite => (&self.h_inf, &self.f_inf),
        }
    }

    /// Number of rational places of the constant field extension of degree `i`.
    pub fn count_points(&self, i: u32) -> u64 {
        let k = &self.field;
        let big = cached_field(k.characteristic(), k.degree() * i);
        let emb = Embedding::new(k, &big);
        let fiber = |h: &Poly, f: &Poly, x: Elt| -> u64 {
            let b = h.eval_in(x, &emb, &big);
            let c = big.neg(f.eval_in(x, &emb, &big));
            quadratic_roots(b, c, &big).len() as u64
        };
        let affine: u64 = big.elements().map(|x| fiber(&self.h, &self.f, x)).sum();
        affine + fiber(&self.h_inf, &self.f_inf, 0)
    }

    fn weil_check(&self, i: u32) -> Result<()> {
        let n = self.count_points(i) as i64;
        let qi = (self.q() as i64).pow(i);
        let dev = n - qi - 1;
        let g = self.genus as i64;
        if dev * dev > 4 * g * g * qi {
            return Err(CurveError::WeilBoundViolation { i, n });
        }
        Ok(())
    }

    /// Coefficients `a_0 .. a_{2g}` of the L-polynomial.
    pub fn zeta_numerator(&self) -> Vec<i64> {
        let g = self.genus;
        let q = self.q() as i64;
        // power sums of the reciprocal roots
        let s: Vec<i64> = (1..=g as u32).map(|n| q.pow(n) + 1 - self.count_points(n) as i64).collect();
        // elementary symmetric functions by Newton's identities
        let mut e = vec![1i64];
        for k in 1..=g {
            let mut acc = 0;
            for i in 1..=k {
                let sign = if i % 2 == 1 { 1 } else { -1 };
                acc += sign * e[k - i] * s[i - 1];
            }
            debug_assert_eq!(acc % k as i64, 0);
            e.push(acc / k as i64);
        }
        let mut a = vec![0i64; 2 * g + 1];
        for k in 0..=g {
            a[k] = if k % 2 == 0 { e[k] } else { -e[k] };
            a[2 * g - k] = q.pow((g - k) as u32) * a[k];
        }
        a
    }

    /// `h = L(1)`, the order of the degree-zero class group.
    pub fn class_number(&self) -> i64 {
        self.zeta_numerator().iter().sum()
    }

    /// The curve in the input syntax, e.g. `y^2 + (x^2 + x + 1)*y + x^5 + x`.
    pub fn display(&self) -> String {
        let k = &self.field;
        let mut s = String::from("y^2");
        if !self.h.is_zero() {
            if self.h.is_one() {
                s.push_str(" + y");
            } else {
                s.push_str(&format!(" + ({})*y", self.h.display("x", k)));
            }
        }
        // the input form is an equation `... = 0`, so print -f
        let nf = self.f.neg(k);
        if !nf.is_zero() {
            s.push_str(&format!(" + {}", nf.display("x", k)));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base_curve() -> CurveModel {
        // y^2 + (x^2+x+1) y = x^5 + x^4 + x^2 + x over F_2
        CurveModel::new(2, Poly::new(vec![1, 1, 1]), Poly::new(vec![0, 1, 1, 0, 1, 1]), 2).unwrap()
    }

    #[test]
    fn base_curve_counts_and_zeta() {
        let c = base_curve();
        assert_eq!(c.count_points(1), 5);
        assert_eq!(c.count_points(2), 7);
        assert_eq!(c.zeta_numerator(), vec![1, 2, 3, 4, 4]);
        assert_eq!(c.class_number(), 14);
    }

    #[test]
    fn singular_models_rejected() {
        assert_eq!(
            CurveModel::new(2, Poly::zero(), Poly::new(vec![0, 1, 0, 0, 0, 1]), 2),
            Err(CurveError::SingularModel("affine"))
        );
        // y^2 = x^2 (x - 1)^... over F_5: repeated root
        assert!(CurveModel::new(5, Poly::zero(), Poly::new(vec![0, 0, 1, 0, 0, 1]), 2).is_err());
        // degree of f too large for genus 1
        assert_eq!(
            CurveModel::new(5, Poly::zero(), Poly::new(vec![1, 0, 0, 0, 0, 1]), 1),
            Err(CurveError::DegreeMismatch(1))
        );
    }

    #[test]
    fn low_genus_class_numbers() {
        // projective line: y^2 = x over F_3 is rational
        let c = CurveModel::new(3, Poly::zero(), Poly::x(), 0).unwrap();
        assert_eq!(c.count_points(1), 4);
        assert_eq!(c.zeta_numerator(), vec![1]);
        assert_eq!(c.class_number(), 1);
        // elliptic curve y^2 = x^3 + x + 1 over F_5: h = N_1
        let e = CurveModel::new(5, Poly::zero(), Poly::new(vec![1, 1, 0, 1]), 1).unwrap();
        assert_eq!(e.class_number(), e.count_points(1) as i64);
    }

    /// Brute-force point count over all (x, y) pairs, independent of the
    /// quadratic-root shortcut.
    fn brute_count(c: &CurveModel, i: u32) -> u64 {
        let k = c.field();
        let big = Gf::new(k.characteristic(), k.degree() * i);
        let emb = Embedding::new(k, &big);
        let on = |h: &Poly, f: &Poly, x: Elt| {
            big.elements()
                .filter(|&y| {
                    let lhs = big.add(big.mul(y, y), big.mul(h.eval_in(x, &emb, &big), y));
                    lhs == f.eval_in(x, &emb, &big)
                })
                .count() as u64
        };
        let (hi, fi) = c.chart(Chart::Infinite);
        big.elements().map(|x| on(c.h(), c.f(), x)).sum::<u64>() + on(hi, fi, 0)
    }

    #[test]
    fn counts_match_brute_force() {
        let c = base_curve();
        for i in 1..=3 {
            assert_eq!(c.count_points(i), brute_count(&c, i));
        }
        let c5 = CurveModel::new(5, Poly::zero(), Poly::new(vec![2, 1, 4, 1, 2, 1, 4]), 2);
        if let Ok(c5) = c5 {
            for i in 1..=2 {
                assert_eq!(c5.count_points(i), brute_count(&c5, i));
            }
        }
    }

    #[test]
    fn zeta_functional_equation() {
        let c = base_curve();
        let a = c.zeta_numerator();
        let q = c.q() as i64;
        for k in 0..=2 {
            assert_eq!(a[4 - k], q.pow(2 - k as u32) * a[k]);
        }
    }
}
