//! Dense univariate polynomials over a [`Gf`].
//!
//! A `Poly` does not carry its field; every operation that needs arithmetic
//! takes the field as an argument. Coefficients are stored in ascending
//! degree and the vector is kept trimmed, so the zero polynomial is empty.

use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use super::field::{Elt, Embedding, Gf};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly {
    coeffs: Vec<Elt>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<Elt>) -> Poly {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly { coeffs: vec![1] }
    }

    pub fn constant(c: Elt) -> Poly {
        Poly::new(vec![c])
    }

    /// The monomial `c * x^d`.
    pub fn monomial(c: Elt, d: usize) -> Poly {
        let mut v = vec![0; d + 1];
        v[d] = c;
        Poly::new(v)
    }

    pub fn x() -> Poly {
        Poly::monomial(1, 1)
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Degree with the zero polynomial mapped to -1.
    pub fn deg_i(&self) -> i64 {
        self.coeffs.len() as i64 - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [1]
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn coeffs(&self) -> &[Elt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Elt {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn lead(&self) -> Elt {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn is_monic(&self) -> bool {
        self.lead() == 1
    }

    pub fn add(&self, other: &Poly, k: &Gf) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| k.add(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn sub(&self, other: &Poly, k: &Gf) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new((0..n).map(|i| k.sub(self.coeff(i), other.coeff(i))).collect())
    }

    pub fn neg(&self, k: &Gf) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| k.neg(c)).collect())
    }

    pub fn scale(&self, c: Elt, k: &Gf) -> Poly {
        Poly::new(self.coeffs.iter().map(|&a| k.mul(a, c)).collect())
    }

    pub fn shift(&self, d: usize) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let mut v = vec![0; d];
        v.extend_from_slice(&self.coeffs);
        Poly { coeffs: v }
    }

    pub fn mul(&self, other: &Poly, k: &Gf) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![0; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = k.add(out[i + j], k.mul(a, b));
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, e: u32, k: &Gf) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc.mul(self, k);
        }
        acc
    }

    /// Euclidean division; panics on division by zero.
    pub fn divrem(&self, d: &Poly, k: &Gf) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = k.inv(d.lead());
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![0; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = k.mul(r[i], inv);
            if c == 0 {
                continue;
            }
            q[i - dd] = c;
            for (j, &b) in d.coeffs.iter().enumerate() {
                r[i - dd + j] = k.sub(r[i - dd + j], k.mul(c, b));
            }
        }
        r.truncate(dd);
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, d: &Poly, k: &Gf) -> Poly {
        self.divrem(d, k).1
    }

    /// Quotient when `d` is known to divide `self`.
    pub fn div_exact(&self, d: &Poly, k: &Gf) -> Poly {
        let (q, r) = self.divrem(d, k);
        debug_assert!(r.is_zero(), "inexact division");
        q
    }

    pub fn divides(&self, other: &Poly, k: &Gf) -> bool {
        other.rem(self, k).is_zero()
    }

    pub fn monic(&self, k: &Gf) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        self.scale(k.inv(self.lead()), k)
    }

    /// Monic gcd (zero if both inputs are zero).
    pub fn gcd(&self, other: &Poly, k: &Gf) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(&b, k);
            a = b;
            b = r;
        }
        a.monic(k)
    }

    /// Returns `(g, s, t)` with `s*self + t*other = g`, `g` monic.
    pub fn ext_gcd(&self, other: &Poly, k: &Gf) -> (Poly, Poly, Poly) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Poly::one(), Poly::zero());
        let (mut t0, mut t1) = (Poly::zero(), Poly::one());
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1, k);
            r0 = std::mem::replace(&mut r1, r);
            let s = s0.sub(&q.mul(&s1, k), k);
            s0 = std::mem::replace(&mut s1, s);
            let t = t0.sub(&q.mul(&t1, k), k);
            t0 = std::mem::replace(&mut t1, t);
        }
        if r0.is_zero() {
            return (r0, s0, t0);
        }
        let inv = k.inv(r0.lead());
        (r0.scale(inv, k), s0.scale(inv, k), t0.scale(inv, k))
    }

    /// Inverse modulo `m`, if it exists.
    pub fn inv_mod(&self, m: &Poly, k: &Gf) -> Option<Poly> {
        let (g, s, _) = self.rem(m, k).ext_gcd(m, k);
        g.is_one().then(|| s.rem(m, k))
    }

    pub fn mul_mod(&self, other: &Poly, m: &Poly, k: &Gf) -> Poly {
        self.mul(other, k).rem(m, k)
    }

    pub fn pow_mod(&self, e: &[u64], m: &Poly, k: &Gf) -> Poly {
        // e is a little-endian multi-limb exponent
        let mut result = Poly::one().rem(m, k);
        let base = self.rem(m, k);
        for limb in e.iter().rev() {
            for bit in (0..64).rev() {
                result = result.mul_mod(&result, m, k);
                if (limb >> bit) & 1 == 1 {
                    result = result.mul_mod(&base, m, k);
                }
            }
        }
        result
    }

    pub fn pow_mod_u64(&self, e: u64, m: &Poly, k: &Gf) -> Poly {
        self.pow_mod(&[e], m, k)
    }

    /// `self^(q^n) mod m` by repeated q-th powering.
    pub fn frobenius_mod(&self, n: u32, m: &Poly, k: &Gf) -> Poly {
        let q = k.size() as u64;
        let mut r = self.rem(m, k);
        for _ in 0..n {
            r = r.pow_mod_u64(q, m, k);
        }
        r
    }

    pub fn derivative(&self, k: &Gf) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| k.mul(c, k.from_int(i as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, x: Elt, k: &Gf) -> Elt {
        self.coeffs.iter().rev().fold(0, |acc, &c| k.add(k.mul(acc, x), c))
    }

    /// Evaluates at `x` in an extension field `big`, embedding the coefficients.
    pub fn eval_in(&self, x: Elt, emb: &Embedding, big: &Gf) -> Elt {
        self.coeffs
            .iter()
            .rev()
            .fold(0, |acc, &c| big.add(big.mul(acc, x), emb.apply(c)))
    }

    /// Maps coefficients through an embedding.
    pub fn embed(&self, emb: &Embedding) -> Poly {
        Poly::new(self.coeffs.iter().map(|&c| emb.apply(c)).collect())
    }

    /// `self(g(x))`.
    pub fn compose(&self, g: &Poly, k: &Gf) -> Poly {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, &c| acc.mul(g, k).add(&Poly::constant(c), k))
    }

    /// Exponent of the largest power of `p` dividing `self` (self nonzero).
    pub fn valuation(&self, p: &Poly, k: &Gf) -> u32 {
        let mut v = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.divrem(p, k);
            if !r.is_zero() {
                return v;
            }
            v += 1;
            cur = q;
        }
    }

    /// `x^n * self(1/x)` for `n >= deg self`.
    pub fn reversed(&self, n: usize) -> Poly {
        debug_assert!(self.coeffs.len() <= n + 1);
        let mut v = vec![0; n + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            v[n - i] = c;
        }
        Poly::new(v)
    }

    /// Rabin irreducibility test.
    pub fn is_irreducible(&self, k: &Gf) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n as u32,
        };
        let f = self.monic(k);
        let x = Poly::x();
        let xqn = x.frobenius_mod(n, &f, k);
        if !xqn.sub(&x, k).rem(&f, k).is_zero() {
            return false;
        }
        let primes: Vec<u32> = (2..=n).filter(|d| n % d == 0 && (2..*d).all(|e| d % e != 0)).collect();
        primes.iter().all(|&r| {
            let h = x.frobenius_mod(n / r, &f, k).sub(&x, k);
            h.gcd(&f, k).is_one()
        })
    }

    /// Roots in the coefficient field, each listed once.
    pub fn roots(&self, k: &Gf) -> Vec<Elt> {
        if self.is_zero() {
            return k.elements().collect();
        }
        k.elements().filter(|&x| self.eval(x, k) == 0).collect()
    }

    /// Complete factorization into monic irreducibles with multiplicity,
    /// sorted. The leading coefficient is returned separately.
    pub fn factor(&self, k: &Gf) -> (Elt, Vec<(Poly, u32)>) {
        assert!(!self.is_zero(), "factoring zero");
        let lc = self.lead();
        let mut out: Vec<(Poly, u32)> = Vec::new();
        let mut rng = StdRng::seed_from_u64(0x5eed);
        for (sqf, mult) in squarefree_decomposition(&self.monic(k), k) {
            for (d, prod) in distinct_degree(&sqf, k) {
                for f in equal_degree(&prod, d, k, &mut rng) {
                    out.push((f, mult));
                }
            }
        }
        out.sort();
        // merge duplicates (possible across squarefree parts)
        let mut merged: Vec<(Poly, u32)> = Vec::new();
        for (f, m) in out {
            match merged.last_mut() {
                Some((g, n)) if *g == f => *n += m,
                _ => merged.push((f, m)),
            }
        }
        (lc, merged)
    }

    /// Formats with the given variable name. Elements of F_4 print as
    /// `a` and `a^2`.
    pub fn display<'a>(&'a self, var: &'a str, k: &'a Gf) -> PolyDisplay<'a> {
        PolyDisplay { poly: self, var, field: k }
    }
}

/// Squarefree decomposition of a monic polynomial: pairs (factor, multiplicity).
fn squarefree_decomposition(f: &Poly, k: &Gf) -> Vec<(Poly, u32)> {
    let p = k.characteristic();
    let mut out = Vec::new();
    if f.is_constant() {
        return out;
    }
    let df = f.derivative(k);
    if df.is_zero() {
        // f = g(x^p)^(1) with coefficients p-th powers: take the p-th root
        let root = pth_root(f, k);
        for (g, m) in squarefree_decomposition(&root, k) {
            out.push((g, m * p));
        }
        return out;
    }
    let mut c = f.gcd(&df, k);
    let mut w = f.div_exact(&c, k);
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(&c, k);
        let z = w.div_exact(&y, k);
        if !z.is_one() {
            out.push((z, i));
        }
        i += 1;
        w = y;
        c = c.div_exact(&w, k);
    }
    if !c.is_one() {
        let root = pth_root(&c, k);
        for (g, m) in squarefree_decomposition(&root, k) {
            out.push((g, m * p));
        }
    }
    out
}

fn pth_root(f: &Poly, k: &Gf) -> Poly {
    let p = k.characteristic() as usize;
    let e = (k.size() / k.characteristic()) as u64;
    let d = f.degree().unwrap_or(0);
    Poly::new((0..=d / p).map(|i| k.pow(f.coeff(i * p), e)).collect())
}

fn distinct_degree(f: &Poly, k: &Gf) -> Vec<(u32, Poly)> {
    let mut out = Vec::new();
    let mut f = f.clone();
    let x = Poly::x();
    let mut h = x.rem(&f, k);
    let mut d = 0;
    while let Some(n) = f.degree() {
        if n < 2 * (d + 1) {
            if n > 0 {
                out.push((n as u32, f.clone()));
            }
            break;
        }
        d += 1;
        h = h.pow_mod_u64(k.size() as u64, &f, k);
        let g = h.sub(&x, k).gcd(&f, k);
        if !g.is_one() {
            f = f.div_exact(&g, k);
            h = h.rem(&f, k);
            out.push((d as u32, g));
        }
    }
    out
}

fn equal_degree(f: &Poly, d: u32, k: &Gf, rng: &mut StdRng) -> Vec<Poly> {
    let n = f.degree().unwrap_or(0) as u32;
    if n == d {
        return vec![f.clone()];
    }
    loop {
        let a = Poly::new((0..n).map(|_| rng.gen_range(0..k.size())).collect());
        if a.is_constant() {
            continue;
        }
        let candidate = if k.characteristic() == 2 {
            // trace map from F_{q^d} to F_2
            let bits = k.degree() * d;
            let mut t = a.rem(f, k);
            let mut acc = t.clone();
            for _ in 1..bits {
                t = t.mul_mod(&t, f, k);
                acc = acc.add(&t, k);
            }
            acc
        } else {
            let e = big_exponent_half(k.size() as u64, d);
            a.pow_mod(&e, f, k).sub(&Poly::one(), k)
        };
        let g = candidate.gcd(f, k);
        if !g.is_one() && g.degree() != f.degree() {
            let h = f.div_exact(&g, k);
            let mut out = equal_degree(&g, d, k, rng);
            out.extend(equal_degree(&h, d, k, rng));
            return out;
        }
    }
}

/// (q^d - 1) / 2 as little-endian u64 limbs.
fn big_exponent_half(q: u64, d: u32) -> Vec<u64> {
    let mut v: u128 = 1;
    for _ in 0..d {
        v = v.checked_mul(q as u128).expect("exponent overflow");
    }
    let e = (v - 1) / 2;
    vec![e as u64, (e >> 64) as u64]
}

/// Formats an F_q element: integers for prime fields, `a`-powers for F_4.
pub fn fmt_elt(c: Elt, k: &Gf) -> String {
    if k.degree() == 1 {
        return c.to_string();
    }
    if c == 0 {
        return "0".into();
    }
    if c == 1 {
        return "1".into();
    }
    match k.log(c) {
        1 => "a".into(),
        e => format!("a^{e}"),
    }
}

pub struct PolyDisplay<'a> {
    poly: &'a Poly,
    var: &'a str,
    field: &'a Gf,
}

impl fmt::Display for PolyDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.poly.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, &c) in self.poly.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = fmt_elt(c, self.field);
            let coef = if c == 1 && i > 0 {
                String::new()
            } else if i > 0 && self.field.degree() > 1 {
                format!("{cs}*")
            } else {
                cs
            };
            match i {
                0 => write!(f, "{coef}")?,
                1 => write!(f, "{coef}{}", self.var)?,
                _ => write!(f, "{coef}{}^{i}", self.var)?,
            }
        }
        Ok(())
    }
}
