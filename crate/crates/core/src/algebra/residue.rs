//! Residue fields F_q[x]/p(x) realized inside table-driven fields.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use super::{Elt, Embedding, Gf, Poly};

/// Shared table-driven field F_{p^k}; tables are built once per process.
pub fn cached_field(p: u32, k: u32) -> Arc<Gf> {
    static CACHE: OnceLock<Mutex<HashMap<(u32, u32), Arc<Gf>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(f) = cache.lock().unwrap().get(&(p, k)) {
        return f.clone();
    }
    // built outside the lock: large tables take a moment
    let f = Arc::new(Gf::new(p, k));
    cache.lock().unwrap().entry((p, k)).or_insert(f).clone()
}

/// A root of `poly` (coefficients already in `big`), if it has one.
pub fn some_root(poly: &Poly, big: &Gf) -> Option<Elt> {
    if poly.degree() == Some(0) {
        return None;
    }
    if big.size() <= 4096 {
        return big.elements().find(|&x| poly.eval(x, big) == 0);
    }
    let (_, factors) = poly.factor(big);
    factors.iter().find(|(g, _)| g.degree() == Some(1)).map(|(g, _)| big.neg(g.coeff(0)))
}

/// All roots of a quadratic `T^2 + bT + c` in `big`, sorted.
pub fn quadratic_roots(b: Elt, c: Elt, big: &Gf) -> Vec<Elt> {
    if big.characteristic() == 2 {
        if b == 0 {
            return vec![big.sqrt_char2(c)];
        }
        // T = b*s with s^2 + s = c / b^2
        let a = big.div(c, big.mul(b, b));
        let s = match solve_artin_schreier(a, big) {
            Some(s) => s,
            None => return vec![],
        };
        let mut r = vec![big.mul(b, s), big.mul(b, big.add(s, 1))];
        r.sort();
        return r;
    }
    // odd characteristic: (-b +- sqrt(b^2 - 4c)) / 2
    let four = big.from_int(4);
    let disc = big.sub(big.mul(b, b), big.mul(four, c));
    let half = big.inv(big.from_int(2));
    if disc == 0 {
        return vec![big.mul(big.neg(b), half)];
    }
    let l = big.log(disc);
    if l % 2 == 1 {
        return vec![];
    }
    let s = big.exp(l as u64 / 2);
    let mut r = vec![
        big.mul(big.add(big.neg(b), s), half),
        big.mul(big.sub(big.neg(b), s), half),
    ];
    r.sort();
    r
}

/// Some `s` with `s^2 + s = a` in characteristic 2.
fn solve_artin_schreier(a: Elt, big: &Gf) -> Option<Elt> {
    // trace must vanish
    let mut t = a;
    let mut tr = a;
    for _ in 1..big.degree() {
        t = big.mul(t, t);
        tr = big.add(tr, t);
    }
    if tr != 0 {
        return None;
    }
    if big.degree() % 2 == 1 {
        // half-trace
        let mut s = a;
        let mut cur = a;
        for _ in 0..(big.degree() - 1) / 2 {
            cur = big.mul(big.mul(cur, cur), big.mul(cur, cur));
            s = big.add(s, cur);
        }
        return Some(s);
    }
    // linear algebra over F_2: the map s -> s^2 + s
    let n = big.degree() as usize;
    let cols: Vec<Vec<u32>> = big.basis().iter().map(|&e| big.digits(big.add(big.mul(e, e), e))).collect();
    let sol = solve_mod_p(&cols, &big.digits(a), 2)?;
    debug_assert_eq!(sol.len(), n);
    Some(big.from_digits(&sol))
}

/// Solves `sum_j x_j * cols[j] = rhs` over F_p; any solution.
pub fn solve_mod_p(cols: &[Vec<u32>], rhs: &[u32], p: u32) -> Option<Vec<u32>> {
    let n = cols.len();
    let m = rhs.len();
    // augmented rows
    let mut a: Vec<Vec<u32>> = (0..m)
        .map(|i| {
            let mut row: Vec<u32> = cols.iter().map(|c| c[i] % p).collect();
            row.push(rhs[i] % p);
            row
        })
        .collect();
    let inv = |x: u32| (1..p).find(|y| x * y % p == 1).unwrap();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(pr) = (r..m).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, pr);
        let iv = inv(a[r][c]);
        for x in a[r].iter_mut() {
            *x = *x * iv % p;
        }
        for i in 0..m {
            if i != r && a[i][c] != 0 {
                let f = a[i][c];
                for j in 0..=n {
                    a[i][j] = (a[i][j] + p * p - f * a[r][j] % p) % p;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    if a[r..].iter().any(|row| row[n] != 0) {
        return None;
    }
    let mut x = vec![0; n];
    for (i, &c) in pivots.iter().enumerate() {
        x[c] = a[i][n];
    }
    Some(x)
}

/// F_q[x]/p(x) identified with a table-driven field of size q^{deg p} (or an
/// extension of it) by sending x to a fixed root `theta` of p.
#[derive(Clone, Debug)]
pub struct ResidueField {
    modulus: Poly,
    big: Arc<Gf>,
    emb: Embedding,
    theta: Elt,
    /// F_p-coordinates of `x^i * b_j` (b_j the F_p-basis of F_q), for inversion.
    cols: Vec<Vec<u32>>,
}

impl ResidueField {
    /// `ext` is the extra degree over F_q[x]/p (1 for the residue field itself).
    pub fn new(base: &Gf, modulus: &Poly, ext: u32) -> ResidueField {
        let r = modulus.degree().expect("nonzero modulus") as u32;
        let big = cached_field(base.characteristic(), base.degree() * r * ext);
        let emb = Embedding::new(base, &big);
        let theta = if r == 1 {
            emb.apply(base.neg(modulus.coeff(0)))
        } else {
            some_root(&modulus.embed(&emb), &big).expect("irreducible splits in its extension")
        };
        let mut cols = Vec::new();
        let mut pw = 1;
        for _ in 0..r {
            for &b in &base.basis() {
                cols.push(big.digits(big.mul(pw, emb.apply(b))));
            }
            pw = big.mul(pw, theta);
        }
        ResidueField { modulus: modulus.clone(), big, emb, theta, cols }
    }

    pub fn field(&self) -> &Gf {
        &self.big
    }

    pub fn field_arc(&self) -> Arc<Gf> {
        self.big.clone()
    }

    pub fn embedding(&self) -> &Embedding {
        &self.emb
    }

    pub fn theta(&self) -> Elt {
        self.theta
    }

    pub fn modulus(&self) -> &Poly {
        &self.modulus
    }

    /// Image of a polynomial in x.
    pub fn reduce(&self, c: &Poly) -> Elt {
        c.eval_in(self.theta, &self.emb, &self.big)
    }

    /// Inverse of `reduce` on the image of F_q[x]/p; `None` for elements
    /// outside it.
    pub fn lift(&self, e: Elt, base: &Gf) -> Option<Poly> {
        let sol = solve_mod_p(&self.cols, &self.big.digits(e), base.characteristic())?;
        let kb = base.degree() as usize;
        let coeffs: Vec<Elt> = sol.chunks(kb).map(|ch| base.from_digits(ch)).collect();
        let p = Poly::new(coeffs);
        (self.reduce(&p) == e).then_some(p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn quadratic_roots_brute_force() {
        for (p, k) in [(2, 1), (2, 2), (2, 3), (3, 2), (5, 1), (2, 4)] {
            let f = Gf::new(p, k);
            for b in f.elements() {
                for c in f.elements() {
                    let brute: Vec<Elt> =
                        f.elements().filter(|&t| f.add(f.add(f.mul(t, t), f.mul(b, t)), c) == 0).collect();
                    assert_eq!(quadratic_roots(b, c, &f), brute, "GF({p}^{k}) b={b} c={c}");
                }
            }
        }
    }

    #[test]
    fn reduce_and_lift_roundtrip() {
        let f4 = Gf::new(2, 2);
        let p = Poly::new(vec![2, 1, 1]); // x^2 + x + a, irreducible over F_4
        assert!(p.is_irreducible(&f4));
        let rf = ResidueField::new(&f4, &p, 1);
        assert_eq!(rf.field().size(), 16);
        for c0 in f4.elements() {
            for c1 in f4.elements() {
                let c = Poly::new(vec![c0, c1]);
                assert_eq!(rf.lift(rf.reduce(&c), &f4), Some(c));
            }
        }
        assert_eq!(rf.reduce(&p), 0);
    }
}
