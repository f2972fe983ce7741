//! Integer matrix normal forms.
//!
//! Two entry points: [`smith_normal_form`] for small dense matrices (exact,
//! with both transforms), and [`RelationLattice`], an incremental Hermite
//! basis for large relation sets that switches to arithmetic modulo the
//! lattice determinant as soon as the lattice has full rank.

use super::AlgebraError;

pub type Matrix = Vec<Vec<i128>>;

type Res<T> = Result<T, AlgebraError>;

fn cmul(a: i128, b: i128) -> Res<i128> {
    a.checked_mul(b).ok_or(AlgebraError::Overflow)
}

fn cadd(a: i128, b: i128) -> Res<i128> {
    a.checked_add(b).ok_or(AlgebraError::Overflow)
}

/// `(g, s, t)` with `s*a + t*b = g = gcd(a, b) >= 0`.
pub fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 < 0 {
        (-r0, -s0, -t0)
    } else {
        (r0, s0, t0)
    }
}

pub fn gcd(a: i128, b: i128) -> i128 {
    ext_gcd(a, b).0
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Res<Matrix> {
    let n = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..n)
                .map(|j| {
                    row.iter()
                        .zip(b.iter())
                        .try_fold(0i128, |acc, (&x, brow)| cadd(acc, cmul(x, brow[j])?))
                })
                .collect()
        })
        .collect()
}

/// Result of [`smith_normal_form`]: `u * m * v = s`.
#[derive(Debug, Clone)]
pub struct Smith {
    pub s: Matrix,
    pub u: Matrix,
    pub v: Matrix,
}

impl Smith {
    /// Diagonal entries `d_1 | d_2 | ...`, including trailing zeros up to
    /// `min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<i128> {
        let k = self.s.len().min(self.s.first().map_or(0, |r| r.len()));
        (0..k).map(|i| self.s[i][i]).collect()
    }
}

/// Exact Smith normal form with unimodular transforms.
pub fn smith_normal_form(m: &Matrix) -> Res<Smith> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut a = m.clone();
    let mut u = identity(rows);
    let mut v = identity(cols);
    snf_core(&mut a, Some(&mut u), &mut v, None)?;
    Ok(Smith { s: a, u, v })
}

/// Smith form of a row lattice taken modulo `modulus * Z^n`: returns the
/// invariant factors `gcd(d_i, modulus)` (one per column, possibly 1) and the
/// column transform `v`, whose entries are reduced modulo `modulus`.
pub fn smith_mod(rows: &Matrix, ncols: usize, modulus: i128) -> Res<(Vec<i128>, Matrix)> {
    let mut a: Matrix = rows.clone();
    if a.len() < ncols {
        a.resize(ncols, vec![0; ncols]);
    }
    let mut v = identity(ncols);
    snf_core(&mut a, None, &mut v, Some(modulus))?;
    let diag = (0..ncols)
        .map(|i| {
            gcd(a[i][i], modulus)
        })
        .collect();
    Ok((diag, v))
}

fn sym_mod(x: i128, m: i128) -> i128 {
    let r = x.rem_euclid(m);
    if r > m / 2 {
        r - m
    } else {
        r
    }
}

fn row_axpy(a: &mut Matrix, dst: usize, src: usize, q: i128, modulus: Option<i128>) -> Res<()> {
    // row[dst] -= q * row[src]
    for j in 0..a[dst].len() {
        let mut x = a[dst][j] - cmul(q, a[src][j])?;
        if let Some(m) = modulus {
            x = sym_mod(x, m);
        }
        a[dst][j] = x;
    }
    Ok(())
}

fn col_axpy(a: &mut Matrix, dst: usize, src: usize, q: i128, modulus: Option<i128>) -> Res<()> {
    for row in a.iter_mut() {
        let mut x = row[dst] - cmul(q, row[src])?;
        if let Some(m) = modulus {
            x = sym_mod(x, m);
        }
        row[dst] = x;
    }
    Ok(())
}

/// Min-pivot Smith elimination. With a modulus `m`, rows and `v` are kept
/// reduced into `(-m/2, m/2]`; this is sound because the lattice being
/// diagonalized always contains `m * Z^n`.
fn snf_core(
    a: &mut Matrix,
    mut u: Option<&mut Matrix>,
    v: &mut Matrix,
    modulus: Option<i128>,
) -> Res<()> {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    if let Some(m) = modulus {
        for row in a.iter_mut() {
            for x in row.iter_mut() {
                *x = sym_mod(*x, m);
            }
        }
    }
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j] != 0 && best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { return Ok(()) };
            a.swap(t, bi);
            if let Some(u) = u.as_deref_mut() {
                u.swap(t, bi);
            }
            for row in a.iter_mut() {
                row.swap(t, bj);
            }
            for row in v.iter_mut() {
                row.swap(t, bj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t] == 0 {
                    continue;
                }
                let q = a[i][t].div_euclid(p);
                row_axpy(a, i, t, q, modulus)?;
                if let Some(u) = u.as_deref_mut() {
                    row_axpy(u, i, t, q, None)?;
                }
                clean &= a[i][t] == 0;
            }
            for j in t + 1..cols {
                if a[t][j] == 0 {
                    continue;
                }
                let q = a[t][j].div_euclid(p);
                col_axpy(a, j, t, q, modulus)?;
                col_axpy(v, j, t, q, modulus)?;
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
            match bad {
                Some(i) => {
                    row_axpy(a, t, i, -1, modulus)?;
                    if let Some(u) = u.as_deref_mut() {
                        row_axpy(u, t, i, -1, None)?;
                    }
                }
                None => {
                    if a[t][t] < 0 {
                        for x in a[t].iter_mut() {
                            *x = -*x;
                        }
                        if let Some(u) = u.as_deref_mut() {
                            for x in u[t].iter_mut() {
                                *x = -*x;
                            }
                        }
                    }
                    break;
                }
            }
        }
    }
    Ok(())
}

/// Incrementally maintained triangular basis of a sublattice of `Z^n`.
///
/// Once the basis reaches full rank with determinant below 2^62, all further
/// arithmetic is done modulo that determinant. Relations that would overflow
/// before that point are dropped, so the stored lattice is always a
/// sublattice of the one generated by the inserted vectors.
#[derive(Debug, Clone)]
pub struct RelationLattice {
    n: usize,
    rows: Vec<Option<Vec<i128>>>,
    modulus: Option<i128>,
    dropped: usize,
    inserted: usize,
}

const MODULUS_LIMIT: i128 = 1 << 62;

impl RelationLattice {
    pub fn new(n: usize) -> Self {
        RelationLattice { n, rows: vec![None; n], modulus: None, dropped: 0, inserted: 0 }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.rows.iter().filter(|r| r.is_some()).count()
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.n
    }

    /// Number of relations discarded because of overflow.
    pub fn dropped(&self) -> usize {
        self.dropped
    }

    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Index `[Z^n : L]` when the lattice has full rank.
    pub fn determinant(&self) -> Option<i128> {
        if !self.is_full_rank() {
            return None;
        }
        self.rows
            .iter()
            .enumerate()
            .try_fold(1i128, |acc, (i, r)| acc.checked_mul(r.as_ref().unwrap()[i].abs()))
    }

    pub fn insert(&mut self, v: &[i64]) {
        debug_assert_eq!(v.len(), self.n);
        self.inserted += 1;
        let v: Vec<i128> = v.iter().map(|&x| x as i128).collect();
        if self.insert_inner(v).is_err() {
            self.dropped += 1;
        }
    }

    fn reduce(&self, v: &mut [i128], from: usize) {
        if let Some(m) = self.modulus {
            for x in v[from..].iter_mut() {
                *x = x.rem_euclid(m);
            }
        }
    }

    fn insert_inner(&mut self, mut v: Vec<i128>) -> Res<()> {
        self.reduce(&mut v, 0);
        for col in 0..self.n {
            if v[col] == 0 {
                continue;
            }
            let Some(row) = self.rows[col].as_ref() else {
                if v[col] < 0 {
                    for x in v.iter_mut() {
                        *x = -*x;
                    }
                    self.reduce(&mut v, col + 1);
                }
                self.rows[col] = Some(v);
                self.refresh_modulus();
                return Ok(());
            };
            let a = row[col];
            let b = v[col];
            if b % a == 0 {
                let q = b / a;
                for j in col..self.n {
                    v[j] = cadd(v[j], -cmul(q, row[j])?)?;
                }
                self.reduce(&mut v, col + 1);
                continue;
            }
            let (g, s, t) = ext_gcd(a, b);
            let (ag, bg) = (a / g, b / g);
            let mut new_row = vec![0i128; self.n];
            let mut new_v = vec![0i128; self.n];
            for j in col..self.n {
                new_row[j] = cadd(cmul(s, row[j])?, cmul(t, v[j])?)?;
                new_v[j] = cadd(cmul(ag, v[j])?, -cmul(bg, row[j])?)?;
            }
            debug_assert_eq!(new_v[col], 0);
            self.reduce(&mut new_row, col + 1);
            self.reduce(&mut new_v, col + 1);
            self.rows[col] = Some(new_row);
            v = new_v;
            self.refresh_modulus();
        }
        Ok(())
    }

    fn refresh_modulus(&mut self) {
        if let Some(d) = self.determinant() {
            if d < MODULUS_LIMIT && self.modulus.is_none_or(|m| d < m) {
                self.modulus = Some(d);
                for i in 0..self.n {
                    let mut r = self.rows[i].take().unwrap();
                    self.reduce(&mut r, i + 1);
                    self.rows[i] = Some(r);
                }
            }
        }
    }

    /// Structure of `Z^n / L` for a full-rank lattice: invariant factors
    /// (all > 1) and the coordinates of each standard basis vector.
    pub fn quotient_structure(&self) -> Res<Option<(Vec<i64>, Vec<Vec<i64>>)>> {
        let Some(delta) = self.determinant() else { return Ok(None) };
        if delta >= MODULUS_LIMIT {
            return Err(AlgebraError::Overflow);
        }
        let n = self.n;
        let pivots: Vec<i128> = (0..n).map(|i| self.rows[i].as_ref().unwrap()[i]).collect();
        let kept: Vec<usize> = (0..n).filter(|&i| pivots[i] != 1).collect();
        let kidx: Vec<Option<usize>> = {
            let mut v = vec![None; n];
            for (pos, &i) in kept.iter().enumerate() {
                v[i] = Some(pos);
            }
            v
        };
        let k = kept.len();
        // express each basis vector in the generators indexed by `kept`
        let mut expr = vec![vec![0i128; k]; n];
        let mut rels: Matrix = Vec::with_capacity(k);
        for i in (0..n).rev() {
            let row = self.rows[i].as_ref().unwrap();
            let mut acc = vec![0i128; k];
            for j in i + 1..n {
                let c = row[j].rem_euclid(delta);
                if c == 0 {
                    continue;
                }
                for (x, e) in acc.iter_mut().zip(expr[j].iter()) {
                    *x = (*x + c * e) % delta;
                }
            }
            match kidx[i] {
                None => {
                    expr[i] = acc.iter().map(|x| (-x).rem_euclid(delta)).collect();
                }
                Some(pos) => {
                    acc[pos] = (acc[pos] + pivots[i]) % delta;
                    rels.push(acc);
                    expr[i] = (0..k).map(|j| i128::from(j == pos)).collect();
                }
            }
        }
        let (diag, v) = smith_mod(&rels, k, delta)?;
        let keep: Vec<usize> = (0..k).filter(|&i| diag[i] != 1).collect();
        let invariants: Vec<i64> = keep.iter().map(|&i| diag[i] as i64).collect();
        let coords = expr
            .iter()
            .map(|e| {
                keep.iter()
                    .map(|&c| {
                        let s: i128 = e.iter().zip(v.iter()).fold(0i128, |acc, (x, vr)| (acc + x * vr[c]) % delta);
                        s.rem_euclid(diag[c]) as i64
                    })
                    .collect()
            })
            .collect();
        Ok(Some((invariants, coords)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &Matrix) -> Smith {
        let s = smith_normal_form(m).unwrap();
        let prod = mat_mul(&mat_mul(&s.u, m).unwrap(), &s.v).unwrap();
        assert_eq!(prod, s.s);
        let d = s.diagonal();
        for w in d.windows(2) {
            if w[1] != 0 {
                assert_eq!(w[1] % w[0], 0, "{d:?}");
            }
        }
        for (i, row) in s.s.iter().enumerate() {
            for (j, &x) in row.iter().enumerate() {
                if i != j {
                    assert_eq!(x, 0);
                }
            }
        }
        s
    }

    #[test]
    fn snf_examples() {
        assert_eq!(check(&vec![vec![2, 0], vec![0, 3]]).diagonal(), vec![1, 6]);
        assert_eq!(check(&identity(3)).diagonal(), vec![1, 1, 1]);
        assert_eq!(check(&vec![vec![0, 0], vec![0, 0]]).diagonal(), vec![0, 0]);
        assert_eq!(check(&vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]).diagonal(), vec![2, 6, 12]);
    }

    #[test]
    fn lattice_matches_snf() {
        let rels: Vec<Vec<i64>> = vec![vec![4, 2, 0], vec![0, 6, 3], vec![2, 0, 5], vec![8, 8, 8]];
        let mut lat = RelationLattice::new(3);
        for r in &rels {
            lat.insert(r);
        }
        let (inv, _) = lat.quotient_structure().unwrap().unwrap();
        let m: Matrix = rels.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
        let d: Vec<i64> = check(&m).diagonal().into_iter().filter(|&x| x != 1).map(|x| x as i64).collect();
        assert_eq!(inv, d);
    }
}
