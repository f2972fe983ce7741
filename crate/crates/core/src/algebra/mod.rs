//! Exact arithmetic: finite fields, polynomials, integer normal forms and
//! finitely generated abelian groups.

pub mod field;
pub mod group;
pub mod matrix;
pub mod poly;
pub mod residue;

pub use field::{Elt, Embedding, Gf};
pub use group::{Character, FgAbGroup, GroupElement, Presented, Subgroup};
pub use poly::Poly;
pub use residue::ResidueField;

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("integer overflow during exact elimination")]
    Overflow,
    #[error("relation has {found} entries, expected {expected}")]
    DimensionMismatch { expected: usize, found: usize },
}

/// All monic irreducible polynomials of degree `1..=max_deg`, ordered by
/// degree and then by the base-q code of the non-leading coefficients.
pub fn irreducibles(k: &Gf, max_deg: usize) -> Vec<Poly> {
    let q = k.size() as u64;
    let mut out = Vec::new();
    for d in 1..=max_deg {
        let count = q.pow(d as u32);
        for code in 0..count {
            let mut c = code;
            let mut v: Vec<Elt> = (0..d)
                .map(|_| {
                    let r = (c % q) as Elt;
                    c /= q;
                    r
                })
                .collect();
            v.push(1);
            if d > 1 && v[0] == 0 {
                continue;
            }
            let p = Poly::new(v);
            if p.is_irreducible(k) {
                out.push(p);
            }
        }
    }
    out
}
