//! `(O_P / P^n)^*` for a place with residue field `L`, as truncated power
//! series `u_0 + u_1 t + ... + u_{n-1} t^{n-1}` with `u_0 != 0`.

use std::sync::Arc;

use crate::algebra::group::group_from_presentation;
use crate::algebra::{Elt, FgAbGroup, Gf, GroupElement, Presented};

use super::series::{ps_inv, ps_mul};

/// Generators: a primitive root `γ` of `L^*`, then `1 + β_i t^j` for
/// `1 <= j < n` and the F_p-basis `β_i` of `L`.
#[derive(Debug, Clone)]
pub struct UnitGroup {
    field: Arc<Gf>,
    n: usize,
    presented: Presented,
}

impl UnitGroup {
    pub fn new(field: Arc<Gf>, n: usize) -> UnitGroup {
        assert!(n >= 1, "modulus exponent must be positive");
        let mut ug = UnitGroup {
            field,
            n,
            presented: Presented { group: FgAbGroup::new(vec![], 0), gen_images: vec![] },
        };
        let rels = ug.relations();
        ug.presented = group_from_presentation(ug.ngens(), &rels).expect("unit group presentation");
        ug
    }

    pub fn field(&self) -> &Gf {
        &self.field
    }

    pub fn exponent(&self) -> usize {
        self.n
    }

    fn f(&self) -> usize {
        self.field.degree() as usize
    }

    /// Number of presentation generators.
    pub fn ngens(&self) -> usize {
        1 + (self.n - 1) * self.f()
    }

    fn gen_index(&self, j: usize, i: usize) -> usize {
        1 + (j - 1) * self.f() + i
    }

    /// The generator as a truncated series.
    pub fn generator(&self, idx: usize) -> Vec<Elt> {
        let mut u = vec![0; self.n];
        if idx == 0 {
            u[0] = self.field.exp(1);
        } else {
            let (j, i) = (1 + (idx - 1) / self.f(), (idx - 1) % self.f());
            u[0] = 1;
            u[j] = self.field.basis()[i];
        }
        u
    }

    /// Defining relations among the generators.
    pub fn relations(&self) -> Vec<Vec<i64>> {
        let k = &*self.field;
        let p = k.characteristic() as usize;
        let mut rels = Vec::new();
        let mut r = vec![0; self.ngens()];
        r[0] = k.size() as i64 - 1;
        rels.push(r);
        for j in 1..self.n {
            for (i, &b) in k.basis().iter().enumerate() {
                // (1 + b t^j)^p = 1 + b^p t^{jp}
                let mut up = vec![0; self.n];
                up[0] = 1;
                if j * p < self.n {
                    up[j * p] = k.pow(b, p as u64);
                }
                let mut r: Vec<i64> = self.dlog_raw(&up).iter().map(|&x| -x).collect();
                r[self.gen_index(j, i)] += p as i64;
                rels.push(r);
            }
        }
        rels
    }

    /// Exponents `e` with `u = prod gen_i^{e_i}`.
    pub fn dlog_raw(&self, u: &[Elt]) -> Vec<i64> {
        let k = &*self.field;
        let n = self.n;
        assert!(u.len() >= n && u[0] != 0, "not a unit");
        let mut out = vec![0; self.ngens()];
        out[0] = k.log(u[0]) as i64;
        let inv0 = k.inv(u[0]);
        let mut u: Vec<Elt> = u[..n].iter().map(|&c| k.mul(c, inv0)).collect();
        for m in 1..n {
            let d = k.digits(u[m]);
            for (i, &di) in d.iter().enumerate() {
                if di == 0 {
                    continue;
                }
                let mut g = vec![0; n];
                g[0] = 1;
                g[m] = k.basis()[i];
                let gi = ps_inv(&g, n, k);
                for _ in 0..di {
                    u = ps_mul(&u, &gi, n, k);
                }
                out[self.gen_index(m, i)] = di as i64;
            }
            debug_assert_eq!(u[m], 0);
        }
        out
    }

    pub fn group(&self) -> &FgAbGroup {
        &self.presented.group
    }

    pub fn presented(&self) -> &Presented {
        &self.presented
    }

    pub fn order(&self) -> i64 {
        let q = self.field.size() as i64;
        (q - 1) * q.pow(self.n as u32 - 1)
    }

    /// The class of a unit in `group()`.
    pub fn dlog(&self, u: &[Elt]) -> GroupElement {
        self.presented.image(&self.dlog_raw(u))
    }

    /// Generators of the image of `{u : u ≡ 1 mod t^m}` (all units for `m = 0`).
    pub fn level_generators(&self, m: usize) -> Vec<GroupElement> {
        let g = self.presented.gen_images.iter();
        if m == 0 {
            return g.cloned().collect();
        }
        g.enumerate().filter(|&(idx, _)| idx >= 1 && 1 + (idx - 1) / self.f() >= m).map(|(_, x)| x.clone()).collect()
    }

    pub fn mul(&self, a: &[Elt], b: &[Elt]) -> Vec<Elt> {
        ps_mul(a, b, self.n, &self.field)
    }
}
