//! Truncated Laurent series over a finite field with absolute precision.

use crate::algebra::{Elt, Gf};

/// Precision of exactly known series (polynomials in t).
pub const EXACT: i64 = 1 << 40;

/// `sum c[i] t^(start + i)`; coefficients past `c` are zero up to `prec`,
/// unknown from `prec` on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    start: i64,
    c: Vec<Elt>,
    prec: i64,
}

fn sat_add(a: i64, b: i64) -> i64 {
    (a + b).min(EXACT)
}

impl Series {
    pub fn new(start: i64, c: Vec<Elt>, prec: i64) -> Series {
        let mut s = Series { start, c, prec };
        s.truncate();
        s
    }

    pub fn constant(a: Elt) -> Series {
        Series::new(0, vec![a], EXACT)
    }

    pub fn monomial(a: Elt, e: i64) -> Series {
        Series::new(e, vec![a], EXACT)
    }

    fn truncate(&mut self) {
        let keep = (self.prec - self.start).max(0) as usize;
        if self.c.len() > keep {
            self.c.truncate(keep);
        }
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    /// Valuation, or `None` if every known coefficient vanishes.
    pub fn valuation(&self) -> Option<i64> {
        self.c.iter().position(|&x| x != 0).map(|i| self.start + i as i64)
    }

    /// Number of known coefficients from the valuation on.
    pub fn relative_precision(&self) -> i64 {
        match self.valuation() {
            Some(v) => self.prec - v,
            None => 0,
        }
    }

    /// Coefficient of `t^e` (must be below the precision).
    pub fn coeff(&self, e: i64) -> Elt {
        debug_assert!(e < self.prec, "coefficient beyond precision");
        if e < self.start {
            return 0;
        }
        self.c.get((e - self.start) as usize).copied().unwrap_or(0)
    }

    pub fn add(&self, o: &Series, k: &Gf) -> Series {
        let prec = self.prec.min(o.prec);
        let ends = |s: &Series| if s.c.is_empty() { None } else { Some((s.start, s.start + s.c.len() as i64)) };
        let (start, end) = match (ends(self), ends(o)) {
            (None, None) => return Series::new(self.start.min(o.start).min(prec), vec![], prec),
            (Some(a), None) | (None, Some(a)) => a,
            (Some(a), Some(b)) => (a.0.min(b.0), a.1.max(b.1)),
        };
        let end = end.min(prec);
        let c = (start..end.max(start)).map(|e| k.add(self.coeff(e), o.coeff(e))).collect();
        Series::new(start, c, prec)
    }

    pub fn neg(&self, k: &Gf) -> Series {
        Series { start: self.start, c: self.c.iter().map(|&x| k.neg(x)).collect(), prec: self.prec }
    }

    pub fn sub(&self, o: &Series, k: &Gf) -> Series {
        self.add(&o.neg(k), k)
    }

    pub fn mul(&self, o: &Series, k: &Gf) -> Series {
        let vf = self.valuation().unwrap_or(self.prec);
        let vg = o.valuation().unwrap_or(o.prec);
        let prec = sat_add(self.prec, vg).min(sat_add(o.prec, vf));
        let (Some(vf), Some(vg)) = (self.valuation(), o.valuation()) else {
            return Series::new(prec.min(sat_add(vf, vg)), vec![], prec);
        };
        let a = &self.c[(vf - self.start) as usize..];
        let b = &o.c[(vg - o.start) as usize..];
        let start = vf + vg;
        let n = ((a.len() + b.len()).saturating_sub(1) as i64).min((prec - start).max(0)) as usize;
        let mut c = vec![0; n];
        for (i, &x) in a.iter().enumerate().take(n) {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate().take(n - i) {
                c[i + j] = k.add(c[i + j], k.mul(x, y));
            }
        }
        Series::new(start, c, prec)
    }

    pub fn scale(&self, a: Elt, k: &Gf) -> Series {
        Series::new(self.start, self.c.iter().map(|&x| k.mul(x, a)).collect(), self.prec)
    }

    /// Multiplication by `t^e`.
    pub fn shift(&self, e: i64) -> Series {
        Series { start: self.start + e, c: self.c.clone(), prec: sat_add(self.prec, e) }
    }

    /// Inverse; exact inputs are inverted to relative precision `cap`.
    pub fn inv(&self, k: &Gf, cap: i64) -> Option<Series> {
        let v = self.valuation()?;
        let r = (self.prec - v).min(cap);
        let u: Vec<Elt> = (0..r).map(|i| self.coeff(v + i)).collect();
        Some(Series::new(-v, ps_inv(&u, r as usize, k), r - v))
    }

    pub fn pow(&self, e: i64, k: &Gf, cap: i64) -> Option<Series> {
        let base = if e < 0 { self.inv(k, cap)? } else { self.clone() };
        let mut acc = Series::constant(1);
        for _ in 0..e.unsigned_abs() {
            acc = acc.mul(&base, k);
        }
        Some(acc)
    }

    /// Unit part `t^-v * self` truncated to `n` coefficients.
    pub fn unit_digits(&self, n: usize) -> Option<Vec<Elt>> {
        let v = self.valuation()?;
        if self.prec - v < n as i64 {
            return None;
        }
        Some((0..n as i64).map(|i| self.coeff(v + i)).collect())
    }
}

/// Power series helpers on coefficient vectors of a fixed length.
pub fn ps_mul(a: &[Elt], b: &[Elt], n: usize, k: &Gf) -> Vec<Elt> {
    let mut c = vec![0; n];
    for (i, &x) in a.iter().enumerate().take(n) {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate().take(n - i) {
            c[i + j] = k.add(c[i + j], k.mul(x, y));
        }
    }
    c
}

pub fn ps_add(a: &[Elt], b: &[Elt], n: usize, k: &Gf) -> Vec<Elt> {
    (0..n).map(|i| k.add(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0))).collect()
}

pub fn ps_sub(a: &[Elt], b: &[Elt], n: usize, k: &Gf) -> Vec<Elt> {
    (0..n).map(|i| k.sub(a.get(i).copied().unwrap_or(0), b.get(i).copied().unwrap_or(0))).collect()
}

/// Inverse of a power series with nonzero constant term, mod t^n.
pub fn ps_inv(a: &[Elt], n: usize, k: &Gf) -> Vec<Elt> {
    let a0inv = k.inv(a[0]);
    let mut b = vec![0; n];
    if n == 0 {
        return b;
    }
    b[0] = a0inv;
    for i in 1..n {
        let mut s = 0;
        for j in 1..=i.min(a.len().saturating_sub(1)) {
            s = k.add(s, k.mul(a[j], b[i - j]));
        }
        b[i] = k.neg(k.mul(s, a0inv));
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_times_self_is_one() {
        let k = Gf::new(5, 2);
        let s = Series::new(-2, vec![3, 1, 0, 7, 2], 10);
        let inv = s.inv(&k, 100).unwrap();
        let one = s.mul(&inv, &k);
        assert_eq!(one.valuation(), Some(0));
        assert_eq!(one.unit_digits(12), Some([1].into_iter().chain(std::iter::repeat_n(0, 11)).collect()));
        assert_eq!(one.precision(), 12);
    }

    #[test]
    fn precision_tracks_cancellation() {
        let k = Gf::new(3, 1);
        let a = Series::new(0, vec![1, 2, 1], 5);
        let b = Series::new(0, vec![1, 2], 5);
        let d = a.sub(&b, &k);
        assert_eq!(d.valuation(), Some(2));
        assert_eq!(d.relative_precision(), 3);
    }
}
