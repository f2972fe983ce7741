//! Small finite fields F_{p^k} with table-driven multiplication.
//!
//! Elements are encoded as integers in `[0, p^k)`: the base-p digits of the
//! code are the coordinates in the polynomial basis `1, a, a^2, ...` where
//! `a` is a root of the field's defining polynomial. The defining polynomial
//! is always primitive, so `a` also generates the multiplicative group and
//! the log/exp tables are indexed by powers of `a`.

use std::fmt;

/// Encoded field element.
pub type Elt = u32;

/// Largest field size for which tables are built.
pub const MAX_FIELD_SIZE: u64 = 1 << 22;

#[derive(Clone)]
pub struct Gf {
    p: u32,
    k: u32,
    size: u32,
    /// Monic primitive polynomial over F_p, ascending coefficients, length k + 1.
    modulus: Vec<u32>,
    exp: Vec<Elt>,
    log: Vec<u32>,
}

impl fmt::Debug for Gf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{})", self.p, self.k)
    }
}

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.k == other.k && self.modulus == other.modulus
    }
}
impl Eq for Gf {}

fn is_prime(p: u32) -> bool {
    p >= 2 && (2..p).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

impl Gf {
    /// Builds F_{p^k} using the lexicographically first primitive polynomial.
    ///
    /// For (2, 2) this is a^2 + a + 1, the only irreducible quadratic over F_2.
    pub fn new(p: u32, k: u32) -> Gf {
        assert!(is_prime(p), "characteristic {p} is not prime");
        assert!(k >= 1);
        let size = (p as u64).pow(k);
        assert!(size <= MAX_FIELD_SIZE, "field of size {size} is too large");
        let size = size as u32;
        if k == 1 {
            // any generator of (Z/p)^*; modulus is x - g
            let g = (1..p)
                .find(|&g| {
                    let mut v = 1u64;
                    (1..p - 1).all(|_| {
                        v = v * g as u64 % p as u64;
                        v != 1
                    })
                })
                .unwrap_or(1);
            let modulus = vec![(p - g) % p, 1];
            return Self::with_modulus(p, k, modulus).expect("generator is primitive");
        }
        // enumerate monic polynomials of degree k by their low coefficients
        let count = size;
        for code in 0..count {
            let mut m = Vec::with_capacity(k as usize + 1);
            let mut c = code;
            for _ in 0..k {
                m.push(c % p);
                c /= p;
            }
            m.push(1);
            if m[0] == 0 {
                continue;
            }
            if let Some(f) = Self::with_modulus(p, k, m) {
                return f;
            }
        }
        unreachable!("a primitive polynomial of every degree exists")
    }

    /// Builds the field from a given monic polynomial if it is primitive.
    pub fn with_modulus(p: u32, k: u32, modulus: Vec<u32>) -> Option<Gf> {
        let size = (p as u64).pow(k) as u32;
        let ku = k as usize;
        debug_assert_eq!(modulus.len(), ku + 1);
        let mut exp = vec![0u32; size as usize];
        let mut log = vec![u32::MAX; size as usize];
        // current power of a as coordinate vector
        let mut cur = vec![0u32; ku];
        cur[0] = 1;
        let encode = |v: &[u32]| v.iter().rev().fold(0u32, |acc, &d| acc * p + d);
        for i in 0..size - 1 {
            let code = encode(&cur);
            if log[code as usize] != u32::MAX {
                return None;
            }
            log[code as usize] = i;
            exp[i as usize] = code;
            // multiply by a
            let top = cur[ku - 1];
            for j in (1..ku).rev() {
                cur[j] = cur[j - 1];
            }
            cur[0] = 0;
            if top != 0 {
                for j in 0..ku {
                    cur[j] = (cur[j] + p * p - top * modulus[j] % p) % p;
                }
            }
        }
        if encode(&cur) != 1 {
            return None;
        }
        exp[(size - 1) as usize] = 1;
        Some(Gf { p, k, size, modulus, exp, log })
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    /// Degree over the prime field.
    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    /// The primitive element `a` (a root of the defining polynomial).
    pub fn generator(&self) -> Elt {
        self.exp[1 % (self.size as usize - 1).max(1)]
    }

    pub fn elements(&self) -> impl Iterator<Item = Elt> {
        0..self.size
    }

    #[inline]
    pub fn add(&self, a: Elt, b: Elt) -> Elt {
        if self.p == 2 {
            return a ^ b;
        }
        if self.k == 1 {
            return (a + b) % self.p;
        }
        let (mut a, mut b) = (a, b);
        let mut out = 0;
        let mut place = 1;
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn neg(&self, a: Elt) -> Elt {
        if self.p == 2 {
            return a;
        }
        if self.k == 1 {
            return (self.p - a) % self.p;
        }
        let mut a = a;
        let mut out = 0;
        let mut place = 1;
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out
    }

    #[inline]
    pub fn sub(&self, a: Elt, b: Elt) -> Elt {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(&self, a: Elt, b: Elt) -> Elt {
        if a == 0 || b == 0 {
            return 0;
        }
        let n = self.size - 1;
        let s = self.log[a as usize] + self.log[b as usize];
        self.exp[(if s >= n { s - n } else { s }) as usize]
    }

    pub fn inv(&self, a: Elt) -> Elt {
        assert!(a != 0, "inverse of zero");
        let n = self.size - 1;
        self.exp[((n - self.log[a as usize]) % n) as usize]
    }

    pub fn div(&self, a: Elt, b: Elt) -> Elt {
        self.mul(a, self.inv(b))
    }

    pub fn pow(&self, a: Elt, e: u64) -> Elt {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let n = (self.size - 1) as u64;
        self.exp[((self.log[a as usize] as u64 * (e % n)) % n) as usize]
    }

    /// Discrete logarithm to the base `generator()`.
    pub fn log(&self, a: Elt) -> u32 {
        assert!(a != 0, "log of zero");
        self.log[a as usize]
    }

    /// `generator()^e`.
    pub fn exp(&self, e: u64) -> Elt {
        self.exp[(e % (self.size as u64 - 1)) as usize]
    }

    /// Image of an integer under Z -> F_p.
    pub fn from_int(&self, n: i64) -> Elt {
        n.rem_euclid(self.p as i64) as Elt
    }

    /// F_p-coordinates of an element (length `degree()`).
    pub fn digits(&self, a: Elt) -> Vec<u32> {
        let mut a = a;
        (0..self.k)
            .map(|_| {
                let d = a % self.p;
                a /= self.p;
                d
            })
            .collect()
    }

    /// The element with F_p-coordinate vector `digits`.
    pub fn from_digits(&self, digits: &[u32]) -> Elt {
        digits.iter().rev().fold(0, |acc, &d| acc * self.p + d % self.p)
    }

    /// F_p-basis `1, a, a^2, ...` as encoded elements.
    pub fn basis(&self) -> Vec<Elt> {
        (0..self.k).map(|i| self.p.pow(i)).collect()
    }

    /// Square root in characteristic 2 (Frobenius is bijective).
    pub fn sqrt_char2(&self, a: Elt) -> Elt {
        assert_eq!(self.p, 2);
        self.pow(a, (self.size / 2) as u64)
    }

    pub fn is_square(&self, a: Elt) -> bool {
        a == 0 || self.p == 2 || self.log(a).is_multiple_of(2)
    }
}

/// A field embedding K -> L, tabulated on all of K.
#[derive(Clone, Debug)]
pub struct Embedding {
    image: Vec<Elt>,
}

impl Embedding {
    /// Finds an embedding of `small` into `large`; the degree of `small` must
    /// divide that of `large`.
    pub fn new(small: &Gf, large: &Gf) -> Embedding {
        assert_eq!(small.p, large.p);
        assert_eq!(large.k % small.k, 0, "{small:?} does not embed in {large:?}");
        if small.k == 1 || small == large {
            // prime field elements have the same codes in every extension
            return Embedding { image: (0..small.size).collect() };
        }
        let step = (large.size as u64 - 1) / (small.size as u64 - 1);
        let n = small.size as u64 - 1;
        let root = (1..n.max(2))
            .filter(|j| gcd_u64(*j, n) == 1 || n == 1)
            .map(|j| large.exp(j * step))
            .find(|&beta| {
                // evaluate small's defining polynomial (F_p coefficients) at beta
                let mut acc = 0;
                for &c in small.modulus.iter().rev() {
                    acc = large.add(large.mul(acc, beta), c);
                }
                acc == 0
            })
            .expect("embedding exists when degrees divide");
        let mut image = vec![0; small.size as usize];
        for e in 1..small.size {
            image[e as usize] = large.pow(root, small.log(e) as u64);
        }
        Embedding { image }
    }

    pub fn identity(k: &Gf) -> Embedding {
        Embedding { image: (0..k.size).collect() }
    }

    #[inline]
    pub fn apply(&self, a: Elt) -> Elt {
        self.image[a as usize]
    }
}

fn gcd_u64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u64(b, a % b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f4_uses_a2_plus_a_plus_1() {
        let k = Gf::new(2, 2);
        assert_eq!(k.modulus(), &[1, 1, 1]);
        let a = 2;
        // a^2 = a + 1
        assert_eq!(k.mul(a, a), 3);
    }

    #[test]
    fn field_axioms_small() {
        for (p, e) in [(2, 1), (3, 1), (5, 1), (2, 2), (2, 4), (3, 2), (5, 2)] {
            let k = Gf::new(p, e);
            for a in k.elements() {
                assert_eq!(k.add(a, k.neg(a)), 0);
                if a != 0 {
                    assert_eq!(k.mul(a, k.inv(a)), 1);
                }
                for b in k.elements() {
                    for c in [0, 1, k.generator()] {
                        let lhs = k.mul(a, k.add(b, c));
                        let rhs = k.add(k.mul(a, b), k.mul(a, c));
                        assert_eq!(lhs, rhs);
                    }
                }
            }
        }
    }

    #[test]
    fn embedding_is_a_ring_map() {
        let small = Gf::new(2, 2);
        let large = Gf::new(2, 4);
        let emb = Embedding::new(&small, &large);
        for a in small.elements() {
            for b in small.elements() {
                assert_eq!(emb.apply(small.add(a, b)), large.add(emb.apply(a), emb.apply(b)));
                assert_eq!(emb.apply(small.mul(a, b)), large.mul(emb.apply(a), emb.apply(b)));
            }
        }
        let f5 = Gf::new(5, 1);
        let f25 = Gf::new(5, 2);
        let e = Embedding::new(&f5, &f25);
        for a in f5.elements() {
            for b in f5.elements() {
                assert_eq!(e.apply(f5.mul(a, b)), f25.mul(e.apply(a), e.apply(b)));
            }
        }
    }
}
