//! Finitely generated abelian groups in invariant-factor form.

use std::fmt;

use super::matrix::{self, Matrix};
use super::AlgebraError;

/// `Z/d_1 + ... + Z/d_k + Z^rank` with `d_1 | d_2 | ... | d_k`, all `d_i > 1`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FgAbGroup {
    invariants: Vec<i64>,
    rank: usize,
}

/// Coordinates: one entry per invariant factor (reduced into `[0, d_i)`),
/// followed by one entry per free generator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(pub Vec<i64>);

/// A subgroup given by generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgroup {
    pub generators: Vec<GroupElement>,
}

/// A group produced from a presentation together with the image of each
/// presentation generator.
#[derive(Debug, Clone)]
pub struct Presented {
    pub group: FgAbGroup,
    pub gen_images: Vec<GroupElement>,
}

impl Presented {
    /// Image of an integer combination of the presentation generators.
    pub fn image(&self, combo: &[i64]) -> GroupElement {
        let g = &self.group;
        let mut acc = g.zero();
        for (c, img) in combo.iter().zip(&self.gen_images) {
            if *c != 0 {
                acc = g.add(&acc, &g.scale(img, *c));
            }
        }
        acc
    }
}

impl fmt::Display for FgAbGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = self.invariants.iter().map(|d| format!("Z/{d}")).collect();
        parts.extend((0..self.rank).map(|_| "Z".to_string()));
        if parts.is_empty() {
            return write!(f, "0");
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl FgAbGroup {
    /// Builds a group from explicit invariants; panics if the chain is invalid.
    pub fn new(invariants: Vec<i64>, rank: usize) -> FgAbGroup {
        assert!(invariants.iter().all(|&d| d > 1), "invariant factors must exceed 1");
        assert!(invariants.windows(2).all(|w| w[1] % w[0] == 0), "not a divisibility chain");
        FgAbGroup { invariants, rank }
    }

    /// Finite cyclic group helper; `Z/1` is the trivial group.
    pub fn cyclic(n: i64) -> FgAbGroup {
        if n == 1 {
            FgAbGroup::new(vec![], 0)
        } else {
            FgAbGroup::new(vec![n], 0)
        }
    }

    pub fn invariants(&self) -> &[i64] {
        &self.invariants
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn is_finite(&self) -> bool {
        self.rank == 0
    }

    /// Number of coordinates of an element.
    pub fn ngens(&self) -> usize {
        self.invariants.len() + self.rank
    }

    pub fn torsion_order(&self) -> i64 {
        self.invariants.iter().product()
    }

    /// Order of a finite group.
    pub fn order(&self) -> Option<i64> {
        self.is_finite().then(|| self.torsion_order())
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement(vec![0; self.ngens()])
    }

    pub fn basis(&self, i: usize) -> GroupElement {
        let mut v = vec![0; self.ngens()];
        v[i] = 1;
        GroupElement(v)
    }

    pub fn normalize(&self, mut x: GroupElement) -> GroupElement {
        for (c, d) in x.0.iter_mut().zip(&self.invariants) {
            *c = c.rem_euclid(*d);
        }
        x
    }

    pub fn element(&self, coords: Vec<i64>) -> GroupElement {
        assert_eq!(coords.len(), self.ngens());
        self.normalize(GroupElement(coords))
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.normalize(GroupElement(a.0.iter().zip(&b.0).map(|(x, y)| x + y).collect()))
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        self.normalize(GroupElement(a.0.iter().map(|x| -x).collect()))
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, a: &GroupElement, n: i64) -> GroupElement {
        let t = self.invariants.len();
        self.normalize(GroupElement(
            a.0.iter()
                .enumerate()
                .map(|(i, x)| if i < t { (x * n.rem_euclid(self.invariants[i])) % self.invariants[i] } else { x * n })
                .collect(),
        ))
    }

    pub fn is_zero(&self, a: &GroupElement) -> bool {
        a.0.iter().all(|&x| x == 0)
    }

    /// Least `n >= 1` with `n*a = 0`; `None` if `a` has infinite order.
    pub fn element_order(&self, a: &GroupElement) -> Option<i64> {
        let t = self.invariants.len();
        if a.0[t..].iter().any(|&x| x != 0) {
            return None;
        }
        Some(
            a.0[..t]
                .iter()
                .zip(&self.invariants)
                .map(|(&x, &d)| d / gcd(x, d))
                .fold(1, lcm),
        )
    }

    /// Quotient by the subgroup generated by `gens`, with the images of this
    /// group's coordinate basis.
    pub fn quotient(&self, gens: &[GroupElement]) -> Result<Presented, AlgebraError> {
        let n = self.ngens();
        let mut rels: Vec<Vec<i64>> = self
            .invariants
            .iter()
            .enumerate()
            .map(|(i, &d)| {
                let mut v = vec![0; n];
                v[i] = d;
                v
            })
            .collect();
        rels.extend(gens.iter().map(|g| g.0.clone()));
        group_from_presentation(n, &rels)
    }

    /// Order of the subgroup generated by `gens` in a finite group.
    pub fn subgroup_order(&self, gens: &[GroupElement]) -> Result<i64, AlgebraError> {
        let total = self.order().expect("subgroup order in an infinite group");
        let q = self.quotient(gens)?;
        Ok(total / q.group.order().expect("quotient of a finite group"))
    }

    /// Whether `x` lies in the subgroup generated by `gens` (finite groups).
    pub fn contains(&self, gens: &[GroupElement], x: &GroupElement) -> Result<bool, AlgebraError> {
        let q = self.quotient(gens)?;
        Ok(q.group.is_zero(&q.image(&x.0)))
    }

    /// All subgroups of index `d` of a finite group, each exactly once.
    ///
    /// Writes the group as `Z^k / diag(d_i)` and enumerates row-style Hermite
    /// matrices of determinant `d` whose lattice contains `diag(d_i)`.
    pub fn subgroups_of_index(&self, d: i64) -> Vec<Subgroup> {
        assert!(self.is_finite(), "subgroup enumeration needs a finite group");
        let order = self.torsion_order();
        if d < 1 || order % d != 0 {
            return Vec::new();
        }
        let k = self.invariants.len();
        let mut out = Vec::new();
        let mut diag = vec![0i64; k];
        self.hnf_diagonals(0, d, &mut diag, &mut out);
        out
    }

    fn hnf_diagonals(&self, i: usize, rest: i64, diag: &mut Vec<i64>, out: &mut Vec<Subgroup>) {
        let k = self.invariants.len();
        if i == k {
            if rest == 1 {
                let mut h = vec![vec![0i64; k]; k];
                for j in 0..k {
                    h[j][j] = diag[j];
                }
                self.hnf_offdiag(&mut h, 0, 1, out);
            }
            return;
        }
        // the lattice contains d_i e_i, so its pivot in column i divides d_i
        for h in 1..=rest {
            if rest % h == 0 && self.invariants[i] % h == 0 {
                diag[i] = h;
                self.hnf_diagonals(i + 1, rest / h, diag, out);
            }
        }
    }

    fn hnf_offdiag(&self, h: &mut Vec<Vec<i64>>, row: usize, col: usize, out: &mut Vec<Subgroup>) {
        let k = self.invariants.len();
        if row >= k {
            if self.lattice_contains_relations(h) {
                let gens = h.iter().map(|r| self.normalize(GroupElement(r.clone()))).filter(|g| !self.is_zero(g)).collect();
                out.push(Subgroup { generators: gens });
            }
            return;
        }
        if col >= k {
            self.hnf_offdiag(h, row + 1, row + 2, out);
            return;
        }
        for v in 0..h[col][col] {
            h[row][col] = v;
            self.hnf_offdiag(h, row, col + 1, out);
        }
        h[row][col] = 0;
    }

    fn lattice_contains_relations(&self, h: &[Vec<i64>]) -> bool {
        let k = self.invariants.len();
        (0..k).all(|i| {
            let mut v = vec![0i64; k];
            v[i] = self.invariants[i];
            for c in 0..k {
                if v[c] % h[c][c] != 0 {
                    return false;
                }
                let q = v[c] / h[c][c];
                for j in c..k {
                    v[j] -= q * h[c][j];
                }
            }
            true
        })
    }

    /// All characters of a finite group that vanish on `h`.
    pub fn characters_trivial_on(&self, h: &[GroupElement]) -> Result<Vec<Character>, AlgebraError> {
        assert!(self.is_finite());
        let q = self.quotient(h)?;
        let qi = q.group.invariants().to_vec();
        let l = qi.iter().copied().fold(1, lcm);
        let mut out = Vec::new();
        let total: i64 = qi.iter().product();
        for code in 0..total {
            let mut c = code;
            let ks: Vec<i64> = qi
                .iter()
                .map(|&d| {
                    let r = c % d;
                    c /= d;
                    r
                })
                .collect();
            // value on each basis vector of self, as a / d_j
            let values = self
                .invariants
                .iter()
                .enumerate()
                .map(|(j, &dj)| {
                    let img = &q.gen_images[j].0;
                    let num: i64 = ks.iter().zip(img).zip(&qi).map(|((k, x), d)| k * x * (l / d)).sum();
                    // num / l has denominator dividing dj
                    let a = (num.rem_euclid(l) * dj) / l;
                    debug_assert_eq!((num.rem_euclid(l) * dj) % l, 0);
                    a.rem_euclid(dj)
                })
                .collect();
            out.push(Character { values, moduli: self.invariants.clone() });
        }
        Ok(out)
    }
}

/// A homomorphism to Q/Z, stored as `values[j] / moduli[j]` on basis vector j.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Character {
    values: Vec<i64>,
    moduli: Vec<i64>,
}

impl Character {
    pub fn trivial(moduli: &[i64]) -> Character {
        Character { values: vec![0; moduli.len()], moduli: moduli.to_vec() }
    }

    /// The value at `x` as a reduced fraction in `[0, 1)`.
    pub fn eval(&self, x: &GroupElement) -> (i64, i64) {
        let l = self.moduli.iter().copied().fold(1, lcm);
        let num: i64 = self
            .values
            .iter()
            .zip(&self.moduli)
            .zip(&x.0)
            .map(|((a, d), c)| (a * c.rem_euclid(*d)) % d * (l / d))
            .sum::<i64>()
            .rem_euclid(l);
        let g = gcd(num, l);
        (num / g, l / g)
    }

    pub fn is_trivial_on(&self, gens: &[GroupElement]) -> bool {
        gens.iter().all(|g| self.eval(g).0 == 0)
    }

    pub fn is_trivial(&self) -> bool {
        self.values.iter().all(|&a| a == 0)
    }

    pub fn order(&self) -> i64 {
        self.values.iter().zip(&self.moduli).map(|(&a, &d)| d / gcd(a, d)).fold(1, lcm)
    }
}

pub fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub fn lcm(a: i64, b: i64) -> i64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

/// `Z^n_gens / <relations>` in invariant-factor form.
pub fn group_from_presentation(n_gens: usize, relations: &[Vec<i64>]) -> Result<Presented, AlgebraError> {
    for r in relations {
        if r.len() != n_gens {
            return Err(AlgebraError::DimensionMismatch { expected: n_gens, found: r.len() });
        }
    }
    if n_gens == 0 {
        return Ok(Presented { group: FgAbGroup::new(vec![], 0), gen_images: vec![] });
    }
    let m: Matrix = if relations.is_empty() {
        vec![vec![0; n_gens]]
    } else {
        relations.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect()
    };
    let s = matrix::smith_normal_form(&m)?;
    let mut diag: Vec<i128> = s.diagonal();
    diag.resize(n_gens, 0);
    let torsion: Vec<usize> = (0..n_gens).filter(|&i| diag[i] > 1).collect();
    let free: Vec<usize> = (0..n_gens).filter(|&i| diag[i] == 0).collect();
    let invariants: Vec<i64> = torsion.iter().map(|&i| i64::try_from(diag[i]).map_err(|_| AlgebraError::Overflow)).collect::<Result<_, _>>()?;
    let group = FgAbGroup::new(invariants, free.len());
    let gen_images = (0..n_gens)
        .map(|j| {
            let row = &s.v[j];
            let mut coords: Vec<i64> = torsion.iter().map(|&i| row[i].rem_euclid(diag[i]) as i64).collect();
            for &i in &free {
                coords.push(i64::try_from(row[i]).map_err(|_| AlgebraError::Overflow)?);
            }
            Ok(GroupElement(coords))
        })
        .collect::<Result<Vec<_>, AlgebraError>>()?;
    Ok(Presented { group, gen_images })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::BTreeSet;

    #[test]
    fn presentation_examples() {
        let g = group_from_presentation(2, &[vec![28, 0]]).unwrap();
        assert_eq!(g.group, FgAbGroup::new(vec![28], 1));
        let g = group_from_presentation(1, &[]).unwrap();
        assert_eq!(g.group, FgAbGroup::new(vec![], 1));
        let g = group_from_presentation(2, &[vec![2, 0], vec![0, 2]]).unwrap();
        assert_eq!(g.group, FgAbGroup::new(vec![2, 2], 0));
        assert_eq!(g.group.to_string(), "Z/2 + Z/2");
    }

    #[test]
    fn element_orders() {
        let g = FgAbGroup::new(vec![28], 0);
        assert_eq!(g.element_order(&g.zero()), Some(1));
        assert_eq!(g.element_order(&g.element(vec![7])), Some(4));
        let z = FgAbGroup::new(vec![], 1);
        assert_eq!(z.element_order(&z.element(vec![1])), None);
    }

    #[test]
    fn subgroup_counts_small() {
        assert_eq!(FgAbGroup::cyclic(28).subgroups_of_index(4).len(), 1);
        assert_eq!(FgAbGroup::new(vec![2, 2], 0).subgroups_of_index(2).len(), 3);
        assert_eq!(FgAbGroup::cyclic(56).subgroups_of_index(8).len(), 1);
        assert!(FgAbGroup::cyclic(28).subgroups_of_index(3).is_empty());
        let g = FgAbGroup::cyclic(28);
        let s = &g.subgroups_of_index(4)[0];
        assert_eq!(g.subgroup_order(&s.generators).unwrap(), 7);
    }

    #[test]
    fn characters_of_cyclic() {
        let g = FgAbGroup::cyclic(8);
        let chars = g.characters_trivial_on(&[]).unwrap();
        assert_eq!(chars.len(), 8);
        let mut by_order = std::collections::BTreeMap::new();
        for c in &chars {
            *by_order.entry(c.order()).or_insert(0) += 1;
        }
        assert_eq!(by_order.into_iter().collect::<Vec<_>>(), vec![(1, 1), (2, 1), (4, 2), (8, 4)]);
        let only = g.characters_trivial_on(&[g.element(vec![1])]).unwrap();
        assert_eq!(only.len(), 1);
        assert!(only[0].is_trivial());
        let g56 = FgAbGroup::cyclic(56);
        let h = [g56.element(vec![8])];
        let chars = g56.characters_trivial_on(&h).unwrap();
        assert_eq!(chars.len(), 8);
        assert!(chars.iter().all(|c| c.is_trivial_on(&h)));
    }

    /// Brute force: every subgroup of a small finite group, as a set of elements.
    fn all_subgroups(g: &FgAbGroup) -> BTreeSet<BTreeSet<GroupElement>> {
        let n = g.order().unwrap();
        let elems: Vec<GroupElement> = (0..n)
            .map(|code| {
                let mut c = code;
                g.element(
                    g.invariants()
                        .iter()
                        .map(|&d| {
                            let r = c % d;
                            c /= d;
                            r
                        })
                        .collect(),
                )
            })
            .collect();
        let close = |gens: &[GroupElement]| -> BTreeSet<GroupElement> {
            let mut set: BTreeSet<GroupElement> = [g.zero()].into();
            loop {
                let mut grew = false;
                let cur: Vec<_> = set.iter().cloned().collect();
                for a in &cur {
                    for b in gens {
                        if set.insert(g.add(a, b)) {
                            grew = true;
                        }
                    }
                }
                if !grew {
                    return set;
                }
            }
        };
        let mut found: BTreeSet<BTreeSet<GroupElement>> = BTreeSet::new();
        let mut frontier: Vec<Vec<GroupElement>> = vec![vec![]];
        found.insert(close(&[]));
        while let Some(gens) = frontier.pop() {
            for e in &elems {
                let mut next = gens.clone();
                next.push(e.clone());
                let s = close(&next);
                if found.insert(s) {
                    frontier.push(next);
                }
            }
        }
        found
    }

    fn chain_strategy() -> impl Strategy<Value = Vec<i64>> {
        // cumulative products form a divisibility chain
        prop::collection::vec(prop::sample::select(vec![2i64, 3, 4, 6]), 0..4).prop_map(|ms| {
            ms.iter()
                .scan(1i64, |cur, m| {
                    *cur *= m;
                    Some(*cur)
                })
                .collect()
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(40))]
        #[test]
        fn subgroup_enumeration_matches_brute_force(inv in chain_strategy()) {
            let g = FgAbGroup::new(inv, 0);
            prop_assume!(g.torsion_order() <= 256);
            let brute = all_subgroups(&g);
            let n = g.torsion_order();
            for d in 1..=n {
                if n % d != 0 { continue; }
                let expected = brute.iter().filter(|s| s.len() as i64 * d == n).count();
                let fast = g.subgroups_of_index(d);
                prop_assert_eq!(fast.len(), expected, "index {} in {}", d, g);
                for s in &fast {
                    prop_assert_eq!(g.subgroup_order(&s.generators).unwrap() * d, n);
                }
            }
        }

        #[test]
        fn presentation_is_idempotent(inv in chain_strategy(), rank in 0usize..2) {
            let g = FgAbGroup::new(inv.clone(), rank);
            let n = g.ngens();
            let rels: Vec<Vec<i64>> = inv.iter().enumerate().map(|(i, &d)| {
                let mut v = vec![0; n]; v[i] = d; v
            }).collect();
            let p = group_from_presentation(n, &rels).unwrap();
            prop_assert_eq!(p.group, g);
        }

        #[test]
        fn snf_postcondition(m in prop::collection::vec(prop::collection::vec(-9i128..10, 3), 1..5)) {
            let s = matrix::smith_normal_form(&m).unwrap();
            let prod = matrix::mat_mul(&matrix::mat_mul(&s.u, &m).unwrap(), &s.v).unwrap();
            prop_assert_eq!(prod, s.s.clone());
            let d = s.diagonal();
            for w in d.windows(2) {
                if w[1] != 0 { prop_assert_eq!(w[1] % w[0], 0); }
                if w[0] == 0 { prop_assert_eq!(w[1], 0); }
            }
        }
    }
}
