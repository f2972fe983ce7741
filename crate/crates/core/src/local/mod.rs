//! Completions at places: expansions of the coordinates in a uniformizer and
//! the unit groups `(O_P / P^n)^*`.

pub mod series;
mod units;

pub use series::Series;
pub use units::UnitGroup;

use std::sync::{Arc, Mutex};

use thiserror::Error;

use crate::algebra::residue::quadratic_roots;
use crate::algebra::{Elt, Gf, Poly, ResidueField};
use crate::curve::{Chart, CurveModel, Fiber, Place};
use series::{ps_add, ps_inv, ps_mul, ps_sub, EXACT};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LocalError {
    #[error("function has valuation {0} at the place, not a unit")]
    NotAUnit(i64),
}

/// Chart coordinates as power series in the uniformizer, mod t^m.
#[derive(Clone, Debug)]
struct Expansion {
    m: usize,
    x: Vec<Elt>,
    y: Vec<Elt>,
}

/// The completion at a place, with lazily extended expansions.
///
/// Uniformizers: `p(x)` (or `u = 1/x`) at unramified places, `y - c(x)` (or
/// `w - c`) at ramified ones.
#[derive(Debug)]
pub struct LocalField {
    place: Place,
    curve: CurveModel,
    residue: ResidueField,
    ybar: Elt,
    expansion: Mutex<Expansion>,
}

fn eval_poly(p: &Poly, x: &[Elt], n: usize, rf: &ResidueField) -> Vec<Elt> {
    let big = rf.field();
    let emb = rf.embedding();
    let mut acc = vec![0; n];
    for &c in p.coeffs().iter().rev() {
        acc = ps_mul(&acc, x, n, big);
        if n > 0 {
            acc[0] = big.add(acc[0], emb.apply(c));
        }
    }
    acc
}

impl LocalField {
    pub fn new(curve: &CurveModel, place: &Place) -> LocalField {
        let k = curve.field();
        let ext = if place.fiber == Fiber::Inert { 2 } else { 1 };
        let residue = ResidueField::new(k, &place.prime, ext);
        let (h, f) = curve.chart(place.chart);
        let big = residue.field();
        let ybar = match &place.fiber {
            Fiber::Split(c) | Fiber::Ramified(c) => residue.reduce(c),
            Fiber::Inert => quadratic_roots(residue.reduce(h), big.neg(residue.reduce(f)), big)[0],
        };
        let lf = LocalField {
            place: place.clone(),
            curve: curve.clone(),
            residue,
            ybar,
            expansion: Mutex::new(Expansion { m: 0, x: vec![], y: vec![] }),
        };
        lf.ensure(8);
        lf
    }

    pub fn place(&self) -> &Place {
        &self.place
    }

    pub fn residue_field(&self) -> &Gf {
        self.residue.field()
    }

    pub fn residue_field_arc(&self) -> Arc<Gf> {
        self.residue.field_arc()
    }

    fn compute(&self, m: usize) -> Expansion {
        let rf = &self.residue;
        let big = rf.field();
        let (h, f) = self.curve.chart(self.place.chart);
        let k = self.curve.field();
        let theta = rf.theta();
        // Newton iteration count sufficient for precision m
        let iters = 2 + (usize::BITS - m.leading_zeros()) as usize;
        let mut t = vec![0; m];
        if m > 1 {
            t[1] = 1;
        }
        match &self.place.fiber {
            Fiber::Ramified(c) => {
                // solve G(X) = (t + c(X))^2 + h(X)(t + c(X)) - f(X) = 0 for X
                let (dc, dh, df) = (c.derivative(k), h.derivative(k), f.derivative(k));
                let mut x = vec![0; m];
                x[0] = theta;
                for _ in 0..iters {
                    let yv = ps_add(&t, &eval_poly(c, &x, m, rf), m, big);
                    let hx = eval_poly(h, &x, m, rf);
                    let g = ps_sub(&ps_add(&ps_mul(&yv, &yv, m, big), &ps_mul(&hx, &yv, m, big), m, big), &eval_poly(f, &x, m, rf), m, big);
                    let two_y_h = ps_add(&ps_add(&yv, &yv, m, big), &hx, m, big);
                    let dg = ps_sub(
                        &ps_add(&ps_mul(&two_y_h, &eval_poly(&dc, &x, m, rf), m, big), &ps_mul(&eval_poly(&dh, &x, m, rf), &yv, m, big), m, big),
                        &eval_poly(&df, &x, m, rf),
                        m,
                        big,
                    );
                    x = ps_sub(&x, &ps_mul(&g, &ps_inv(&dg, m, big), m, big), m, big);
                }
                let y = ps_add(&t, &eval_poly(c, &x, m, rf), m, big);
                Expansion { m, x, y }
            }
            _ => {
                // solve p(X) = t, then Y^2 + h(X) Y - f(X) = 0 from ybar
                let p = &self.place.prime;
                let dp = p.derivative(k);
                let mut x = vec![0; m];
                x[0] = theta;
                for _ in 0..iters {
                    let g = ps_sub(&eval_poly(p, &x, m, rf), &t, m, big);
                    x = ps_sub(&x, &ps_mul(&g, &ps_inv(&eval_poly(&dp, &x, m, rf), m, big), m, big), m, big);
                }
                let hx = eval_poly(h, &x, m, rf);
                let fx = eval_poly(f, &x, m, rf);
                let mut y = vec![0; m];
                y[0] = self.ybar;
                for _ in 0..iters {
                    let g = ps_sub(&ps_add(&ps_mul(&y, &y, m, big), &ps_mul(&hx, &y, m, big), m, big), &fx, m, big);
                    let dg = ps_add(&ps_add(&y, &y, m, big), &hx, m, big);
                    y = ps_sub(&y, &ps_mul(&g, &ps_inv(&dg, m, big), m, big), m, big);
                }
                Expansion { m, x, y }
            }
        }
    }

    fn ensure(&self, m: usize) -> Expansion {
        let mut guard = self.expansion.lock().unwrap();
        if guard.m < m {
            let target = m.max(2 * guard.m);
            *guard = self.compute(target);
        }
        guard.clone()
    }

    /// Chart coordinates `(X, Y)` as series to absolute precision at least `m`.
    pub fn chart_series(&self, m: usize) -> (Series, Series) {
        let e = self.ensure(m);
        (Series::new(0, e.x, e.m as i64), Series::new(0, e.y, e.m as i64))
    }

    /// Series of a polynomial in the chart's first coordinate.
    fn poly_at(&self, p: &Poly, x: &Series) -> Series {
        let big = self.residue.field();
        let emb = self.residue.embedding();
        let mut acc = Series::new(0, vec![], EXACT);
        for &c in p.coeffs().iter().rev() {
            acc = acc.mul(x, big).add(&Series::constant(emb.apply(c)), big);
        }
        acc
    }

    fn eval_at_precision(&self, a: &Poly, b: &Poly, m: usize) -> Series {
        let big = self.residue.field();
        let (x, y) = self.chart_series(m);
        match self.place.chart {
            Chart::Finite => self.poly_at(a, &x).add(&self.poly_at(b, &x).mul(&y, big), big),
            Chart::Infinite => {
                let (as_, bs, mm) = self.curve.to_infinite_chart(a, b);
                let z = self.poly_at(&as_, &x).add(&self.poly_at(&bs, &x).mul(&y, big), big);
                let ui = x.inv(big, EXACT).expect("u is nonzero");
                z.mul(&ui.pow(mm as i64, big, EXACT).unwrap(), big)
            }
        }
    }

    /// Series of `a(x) + b(x) y` (not zero) with relative precision at least
    /// `rel`.
    pub fn eval(&self, a: &Poly, b: &Poly, rel: usize) -> Series {
        let mut m = (rel + 4).max(self.expansion.lock().unwrap().m);
        loop {
            let s = self.eval_at_precision(a, b, m);
            if s.valuation().is_some() && s.relative_precision() >= rel as i64 {
                return s;
            }
            m *= 2;
            assert!(m < 1 << 16, "function vanishes identically at the place");
        }
    }

    /// Class of `a + b y` in `(O_P/P^n)^*`.
    pub fn evaluate_unit(&self, a: &Poly, b: &Poly, n: usize) -> Result<Vec<Elt>, LocalError> {
        let s = self.eval(a, b, n.max(1));
        let v = s.valuation().unwrap();
        if v != 0 {
            return Err(LocalError::NotAUnit(v));
        }
        Ok(s.unit_digits(n).unwrap())
    }

    /// Expansions of the original coordinates x and y (Laurent series at
    /// infinite places).
    pub fn xy_series(&self, rel: usize) -> (Series, Series) {
        (self.eval(&Poly::x(), &Poly::zero(), rel), self.eval(&Poly::zero(), &Poly::one(), rel))
    }

    /// Substitutes the chart expansion into the chart equation (should vanish).
    pub fn residual(&self, m: usize) -> Series {
        let big = self.residue.field();
        let (h, f) = self.curve.chart(self.place.chart);
        let (x, y) = self.chart_series(m);
        y.mul(&y, big).add(&self.poly_at(h, &x).mul(&y, big), big).sub(&self.poly_at(f, &x), big)
    }

    /// The unit group `(O_P/P^n)^*` for this place.
    pub fn unit_group(&self, n: usize) -> UnitGroup {
        UnitGroup::new(self.residue.field_arc(), n)
    }
}
