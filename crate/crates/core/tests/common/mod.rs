//! Checks shared by the property suite and the acceptance target.
#![allow(dead_code)]

use std::collections::BTreeSet;

use raycurves::algebra::matrix::{mat_mul, smith_normal_form};
use raycurves::algebra::residue::cached_field;
use raycurves::algebra::{FgAbGroup, Poly};
use raycurves::curve::CurveModel;
use raycurves::fixtures::FIXTURES;
use raycurves::local::UnitGroup;

/// One base curve per fixture curve string, deduplicated.
pub fn sample_curves() -> Vec<CurveModel> {
    let mut seen = BTreeSet::new();
    FIXTURES
        .iter()
        .filter(|f| seen.insert((f.q, f.curve)))
        .map(|f| f.parse().unwrap().0)
        .collect()
}

/// `N_i = Σ_{r | i} r B_r` for `i <= 4`.
pub fn place_counts(c: &CurveModel) -> Result<(), String> {
    let counts: Vec<usize> = (1..=4).map(|r| c.places_of_degree(r).len()).collect();
    for i in 1..=4usize {
        let lhs: usize = (1..=i).filter(|r| i % r == 0).map(|r| r * counts[r - 1]).sum();
        let n = c.count_points(i as u32);
        if lhs as u64 != n {
            return Err(format!("{}: Σ r B_r = {lhs} but N_{i} = {n}", c.display()));
        }
    }
    Ok(())
}

pub fn principal_degree_zero(c: &CurveModel, a: &[u32], b: &[u32]) -> Result<(), String> {
    let q = c.q();
    let a = Poly::new(a.iter().map(|x| x % q).collect());
    let b = Poly::new(b.iter().map(|x| x % q).collect());
    if a.is_zero() && b.is_zero() {
        return Ok(());
    }
    let d = c.function_divisor(&a, &b);
    if d.degree() != 0 {
        return Err(format!("deg div({a:?} + {b:?} y) = {}", d.degree()));
    }
    Ok(())
}

pub fn snf_postcondition(m: &[Vec<i128>]) -> Result<(), String> {
    let m = m.to_vec();
    let s = smith_normal_form(&m).map_err(|e| e.to_string())?;
    let prod = mat_mul(&mat_mul(&s.u, &m).unwrap(), &s.v).unwrap();
    if prod != s.s {
        return Err(format!("U M V != S for {m:?}"));
    }
    for (i, row) in s.s.iter().enumerate() {
        for (j, &x) in row.iter().enumerate() {
            if i != j && x != 0 {
                return Err(format!("off-diagonal entry in {:?}", s.s));
            }
        }
    }
    let d = s.diagonal();
    for w in d.windows(2) {
        if w[0] < 0 || (w[0] == 0 && w[1] != 0) || (w[1] != 0 && w[1] % w[0] != 0) {
            return Err(format!("diagonal {d:?} is not a divisor chain"));
        }
    }
    Ok(())
}

/// Every subgroup of a finite group, as membership bitsets over the elements
/// in mixed-radix order.
pub fn brute_force_subgroups(g: &FgAbGroup) -> BTreeSet<Vec<bool>> {
    let inv = g.invariants().to_vec();
    let n: usize = inv.iter().product::<i64>() as usize;
    let digits = |mut i: usize| -> Vec<i64> {
        inv.iter()
            .map(|&d| {
                let r = (i % d as usize) as i64;
                i /= d as usize;
                r
            })
            .collect()
    };
    let index = |v: &[i64]| -> usize { v.iter().zip(&inv).rev().fold(0usize, |acc, (&x, &d)| acc * d as usize + x as usize) };
    let add: Vec<Vec<usize>> = (0..n)
        .map(|i| {
            let a = digits(i);
            (0..n)
                .map(|j| {
                    let b = digits(j);
                    let s: Vec<i64> = a.iter().zip(&b).zip(&inv).map(|((x, y), d)| (x + y) % d).collect();
                    index(&s)
                })
                .collect()
        })
        .collect();
    // H + <x> for a subgroup H
    let join = |h: &[bool], x: usize| -> Vec<bool> {
        let mut out = h.to_vec();
        let mut shift = x;
        while !h[shift] {
            for i in 0..n {
                if h[i] {
                    out[add[i][shift]] = true;
                }
            }
            shift = add[shift][x];
        }
        out
    };
    let mut trivial = vec![false; n];
    trivial[0] = true;
    let mut found: BTreeSet<Vec<bool>> = [trivial.clone()].into();
    let mut frontier = vec![trivial];
    while let Some(h) = frontier.pop() {
        for x in 0..n {
            if !h[x] {
                let k = join(&h, x);
                if found.insert(k.clone()) {
                    frontier.push(k);
                }
            }
        }
    }
    found
}

pub fn subgroup_counts(inv: &[i64]) -> Result<(), String> {
    let g = FgAbGroup::new(inv.to_vec(), 0);
    let n = g.torsion_order();
    let brute = brute_force_subgroups(&g);
    for d in (1..=n).filter(|d| n % d == 0) {
        let expected = brute.iter().filter(|h| h.iter().filter(|&&b| b).count() as i64 * d == n).count();
        let got = g.subgroups_of_index(d);
        if got.len() != expected {
            return Err(format!("{g}: {} subgroups of index {d}, brute force {expected}", got.len()));
        }
    }
    Ok(())
}

/// `|(O/P^n)^*| = (Q - 1) Q^{n-1}` and `[U^(m) : U^(m+1)] = Q` for a residue
/// field of size `Q = p^k`.
pub fn unit_group_orders(p: u32, k: u32, n: usize) -> Result<(), String> {
    let ug = UnitGroup::new(cached_field(p, k), n);
    let qq = (p as i64).pow(k);
    let expected = (qq - 1) * qq.pow(n as u32 - 1);
    let g = ug.group();
    if g.order() != Some(expected) {
        return Err(format!("F_{qq}, n = {n}: order {:?}, expected {expected}", g.order()));
    }
    for m in 1..=n {
        let level = g.subgroup_order(&ug.level_generators(m)).unwrap();
        if level != qq.pow((n - m) as u32) {
            return Err(format!("F_{qq}, n = {n}: |U^({m})| = {level}"));
        }
    }
    Ok(())
}
