//! Invariants of the class field `K/F` attached to a finite-index subgroup
//! `U` of a ray class group: degree, genus, ramification and splitting of
//! places, and the number of rational places.

use thiserror::Error;

use crate::algebra::group::gcd;
use crate::algebra::{AlgebraError, Character, Elt, FgAbGroup, Gf, GroupElement, Poly, Presented};
use crate::curve::{Chart, CurveError, Divisor, Evaluator, Expr, Fiber, Place};
use crate::rayclass::{RayClassError, RayClassGroup};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum InvariantError {
    #[error("subgroup has infinite index")]
    InfiniteIndex,
    #[error("extension of constants of degree {0}")]
    ConstantFieldExtension(i64),
    #[error("odd degree {0} of the different")]
    OddDifferent(i64),
    #[error(transparent)]
    RayClass(#[from] RayClassError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

pub type Result<T> = std::result::Result<T, InvariantError>;

/// Behaviour of a place of `F` in `K`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub place: Place,
    pub ramification: i64,
    pub residue_degree: i64,
    pub count: i64,
    /// Exponent of the place in the conductor.
    pub conductor: usize,
    /// Exponent of the place in the discriminant (degree of the different
    /// above it, divided by the degree of the place).
    pub discriminant: i64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClassFieldInvariants {
    pub degree: i64,
    pub genus: i64,
    pub rational_places: i64,
    pub galois_group: FgAbGroup,
    pub conductor: Divisor,
    /// Support places of the modulus.
    pub ramified: Vec<Decomposition>,
    /// Rational places outside the modulus and whether they split completely.
    pub rational_splitting: Vec<(Place, bool)>,
    /// `Σ deg P · d_P` over the support of the modulus.
    pub different_degree: i64,
}

/// The subgroup generated by the classes of a set of places.
pub fn subgroup_of_places(rcg: &RayClassGroup, places: &[Place]) -> Result<Vec<GroupElement>> {
    Ok(places.iter().map(|p| rcg.class_of_place(p)).collect::<std::result::Result<_, _>>()?)
}

/// `Cl_D / U` together with the projection.
pub struct ClassField<'a> {
    rcg: &'a RayClassGroup,
    quotient: Presented,
}

impl<'a> ClassField<'a> {
    pub fn new(rcg: &'a RayClassGroup, subgroup: &[GroupElement]) -> Result<ClassField<'a>> {
        let quotient = rcg.group().quotient(subgroup)?;
        if !quotient.group.is_finite() {
            return Err(InvariantError::InfiniteIndex);
        }
        let r = subgroup.iter().fold(0, |acc, u| gcd(acc, rcg.degree_of(u)));
        if r != 1 {
            return Err(InvariantError::ConstantFieldExtension(r));
        }
        Ok(ClassField { rcg, quotient })
    }

    /// `Gal(K/F) ≅ Cl_D / U`.
    pub fn galois_group(&self) -> &FgAbGroup {
        &self.quotient.group
    }

    pub fn degree(&self) -> i64 {
        self.quotient.group.torsion_order()
    }

    pub fn project(&self, x: &GroupElement) -> GroupElement {
        self.quotient.image(&x.0)
    }

    /// Order of the image of `U_P^{(m)}` for the `i`-th support place.
    pub fn level_order(&self, i: usize, m: usize) -> Result<i64> {
        let imgs: Vec<GroupElement> = self.rcg.level_image(i, m).iter().map(|x| self.project(x)).collect();
        Ok(self.quotient.group.subgroup_order(&imgs)?)
    }

    /// Whether a place outside the modulus splits completely.
    pub fn splits_completely(&self, p: &Place) -> Result<bool> {
        let x = self.project(&self.rcg.class_of_place(p)?);
        Ok(self.quotient.group.is_zero(&x))
    }

    pub fn decomposition(&self, p: &Place) -> Result<Decomposition> {
        let d = self.degree();
        let a = &self.quotient.group;
        let Some(i) = self.rcg.local_units().iter().position(|l| &l.place == p) else {
            let x = self.project(&self.rcg.class_of_place(p)?);
            let f = a.element_order(&x).expect("finite group");
            return Ok(Decomposition { place: p.clone(), ramification: 1, residue_degree: f, count: d / f, conductor: 0, discriminant: 0 });
        };
        let n = self.rcg.local_units()[i].exponent;
        let orders: Vec<i64> = (0..=n).map(|m| self.level_order(i, m)).collect::<Result<_>>()?;
        let e = orders[0];
        let conductor = orders.iter().position(|&o| o == 1).unwrap_or(n);
        let discriminant = orders[..n].iter().map(|&o| d - d / o).sum();
        let inertia: Vec<GroupElement> = self.rcg.level_image(i, 0).iter().map(|x| self.project(x)).collect();
        let frob = self.project(&self.rcg.presentation_class(p)?);
        let decomp = a.quotient(&inertia)?;
        let f = decomp.group.element_order(&decomp.image(&frob.0)).expect("finite group");
        Ok(Decomposition { place: p.clone(), ramification: e, residue_degree: f, count: d / (e * f), conductor, discriminant })
    }

    /// All characters of `Gal(K/F)`.
    pub fn characters(&self) -> Result<Vec<Character>> {
        Ok(self.quotient.group.characters_trivial_on(&[])?)
    }

    /// Conductor of a character of `Gal(K/F)`: at each support place the
    /// least level whose unit image the character kills.
    pub fn character_conductor(&self, chi: &Character) -> Divisor {
        let mut out = Divisor::zero();
        for (i, lu) in self.rcg.local_units().iter().enumerate() {
            let m = (0..=lu.exponent)
                .find(|&m| {
                    let imgs: Vec<GroupElement> = self.rcg.level_image(i, m).iter().map(|x| self.project(x)).collect();
                    chi.is_trivial_on(&imgs)
                })
                .unwrap_or(lu.exponent);
            out.add_term(lu.place.clone(), m as i64);
        }
        out
    }

    pub fn invariants(&self) -> Result<ClassFieldInvariants> {
        let curve = self.rcg.curve();
        let d = self.degree();
        let mut ramified = Vec::new();
        let mut different = 0;
        let mut rational = 0;
        for lu in self.rcg.local_units() {
            let dec = self.decomposition(&lu.place)?;
            different += lu.place.degree() as i64 * dec.discriminant;
            if lu.place.is_rational() && dec.residue_degree == 1 {
                rational += dec.count;
            }
            ramified.push(dec);
        }
        let mut conductor = Divisor::zero();
        for dec in &ramified {
            conductor.add_term(dec.place.clone(), dec.conductor as i64);
        }
        let mut rational_splitting = Vec::new();
        for p in curve.rational_places() {
            if self.rcg.modulus().coeff(&p) != 0 {
                continue;
            }
            let s = self.splits_completely(&p)?;
            if s {
                rational += d;
            }
            rational_splitting.push((p, s));
        }
        let two_g_minus_two = d * (2 * curve.genus() as i64 - 2) + different;
        if two_g_minus_two % 2 != 0 {
            return Err(InvariantError::OddDifferent(different));
        }
        Ok(ClassFieldInvariants {
            degree: d,
            genus: two_g_minus_two / 2 + 1,
            rational_places: rational,
            galois_group: self.quotient.group.clone(),
            conductor,
            ramified,
            rational_splitting,
            different_degree: different,
        })
    }
}

/// Invariants of the class field in which the given places split completely.
pub fn invariants_for_places(rcg: &RayClassGroup, places: &[Place]) -> Result<ClassFieldInvariants> {
    let u = subgroup_of_places(rcg, places)?;
    ClassField::new(rcg, &u)?.invariants()
}

/// Outcome of comparing a defining equation with the predicted splitting at
/// one rational place.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SplitCheck {
    /// Root counts of the reduced polynomials, their product, and the
    /// prediction from the class group.
    Agrees { place: Place, roots: Vec<usize>, predicted_split: bool },
    Disagrees { place: Place, roots: Vec<usize>, predicted_split: bool },
    /// A coefficient has a pole, the leading coefficient vanishes or the
    /// reduction is inseparable.
    Inapplicable { place: Place },
}

impl SplitCheck {
    pub fn is_disagreement(&self) -> bool {
        matches!(self, SplitCheck::Disagrees { .. })
    }
}

/// Values of an expression at a point: a polynomial in the extension
/// variable, or `None` after division by zero.
struct PointEval<'a> {
    k: &'a Gf,
    base_var: &'a str,
    x: Elt,
    y: Elt,
}

impl Evaluator for PointEval<'_> {
    type V = Option<Poly>;

    fn number(&self, n: u64) -> std::result::Result<Option<Poly>, String> {
        Ok(Some(Poly::constant(self.k.from_int((n % self.k.characteristic() as u64) as i64))))
    }

    fn variable(&self, name: &str) -> std::result::Result<Option<Poly>, String> {
        Ok(Some(match name {
            n if n == self.base_var => Poly::constant(self.x),
            "y" => Poly::constant(self.y),
            "a" if self.k.size() == 4 => Poly::constant(self.k.generator()),
            _ => Poly::x(),
        }))
    }

    fn add(&self, a: &Option<Poly>, b: &Option<Poly>) -> Option<Poly> {
        Some(a.as_ref()?.add(b.as_ref()?, self.k))
    }

    fn sub(&self, a: &Option<Poly>, b: &Option<Poly>) -> Option<Poly> {
        Some(a.as_ref()?.sub(b.as_ref()?, self.k))
    }

    fn mul(&self, a: &Option<Poly>, b: &Option<Poly>) -> Option<Poly> {
        Some(a.as_ref()?.mul(b.as_ref()?, self.k))
    }

    fn div(&self, a: &Option<Poly>, b: &Option<Poly>) -> std::result::Result<Option<Poly>, String> {
        let (Some(a), Some(b)) = (a, b) else { return Ok(None) };
        if !b.is_constant() {
            return Err("division by the extension variable".into());
        }
        if b.is_zero() {
            return Ok(None);
        }
        Ok(Some(a.scale(self.k.inv(b.coeffs()[0]), self.k)))
    }
}

/// Extension variable of a defining polynomial (anything other than the
/// base variable, `y` and the F_4 generator).
fn extension_variable(e: &Expr, base_var: &str, q: u32) -> Option<String> {
    let vars: Vec<String> = e.variables().into_iter().filter(|v| v != base_var && v != "y" && !(q == 4 && v == "a")).collect();
    match vars.as_slice() {
        [v] => Some(v.clone()),
        _ => None,
    }
}

/// Compares root counts of defining polynomials (one extension variable
/// each, generating `K` together) at the finite rational places outside the
/// modulus with the splitting predicted by the class group.
pub fn splitting_crosscheck(cf: &ClassField<'_>, polys: &[&str], base_var: &str) -> Result<Vec<SplitCheck>> {
    let curve = cf.rcg.curve();
    let k = curve.field();
    let mut parsed = Vec::new();
    for text in polys {
        let e = Expr::parse(text)?;
        if extension_variable(&e, base_var, curve.q()).is_none() {
            return Err(CurveError::Parse { pos: 0, msg: format!("expected one extension variable in {text}") }.into());
        }
        parsed.push(e);
    }
    let mut out = Vec::new();
    for p in curve.rational_places() {
        if p.chart != Chart::Finite || cf.rcg.modulus().coeff(&p) != 0 {
            continue;
        }
        let (Fiber::Split(c) | Fiber::Ramified(c)) = &p.fiber else { continue };
        let x = k.neg(p.prime.coeffs()[0]);
        let y = c.coeffs().first().copied().unwrap_or(0);
        let ev = PointEval { k, base_var, x, y };
        let mut roots = Vec::new();
        let mut ok = true;
        for e in &parsed {
            let v = e.eval(&ev).map_err(|msg| CurveError::Parse { pos: 0, msg })?;
            let Some(v) = v else {
                ok = false;
                break;
            };
            let separable = v.degree().is_some_and(|d| d > 0) && v.gcd(&v.derivative(k), k).is_constant();
            if !separable {
                ok = false;
                break;
            }
            roots.push(v.roots(k).len());
        }
        if !ok {
            out.push(SplitCheck::Inapplicable { place: p });
            continue;
        }
        let predicted_split = cf.splits_completely(&p)?;
        let full: bool = parsed
            .iter()
            .zip(&roots)
            .all(|(e, &r)| e.eval(&ev).ok().flatten().and_then(|v| v.degree()) == Some(r));
        let agrees = predicted_split == full;
        out.push(if agrees {
            SplitCheck::Agrees { place: p, roots, predicted_split }
        } else {
            SplitCheck::Disagrees { place: p, roots, predicted_split }
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::fixture;
    use crate::rayclass::RayClassOptions;

    fn setup(name: &str) -> RayClassGroup {
        let f = fixture(name).unwrap();
        let (c, d, _) = f.parse().unwrap();
        RayClassGroup::compute(&c, &d, &RayClassOptions::default()).unwrap()
    }

    #[test]
    fn base_curve_tower() {
        for (name, d, g, n, sum) in [("f2-g7", 4, 7, 10, 4), ("f2-g17", 8, 17, 18, 16)] {
            let f = fixture(name).unwrap();
            let rcg = setup(name);
            let (_, _, s) = f.parse().unwrap();
            let cf = ClassField::new(&rcg, &subgroup_of_places(&rcg, &s).unwrap()).unwrap();
            let inv = cf.invariants().unwrap();
            assert_eq!((inv.degree, inv.genus, inv.rational_places, inv.different_degree), (d, g, n, sum));
            // conductor-discriminant: the same sum over characters
            let chars = cf.characters().unwrap();
            assert_eq!(chars.len() as i64, d);
            let total: i64 = chars.iter().map(|chi| cf.character_conductor(chi).degree()).sum();
            assert_eq!(total, sum);
        }
    }

    #[test]
    fn character_conductors_at_three_p() {
        let f = fixture("f2-g17").unwrap();
        let rcg = setup("f2-g17");
        let (_, _, s) = f.parse().unwrap();
        let cf = ClassField::new(&rcg, &subgroup_of_places(&rcg, &s).unwrap()).unwrap();
        for chi in cf.characters().unwrap() {
            let expected = match chi.order() {
                1 | 2 => 0,
                4 => 2,
                _ => 3,
            };
            assert_eq!(cf.character_conductor(&chi).degree(), expected, "order {}", chi.order());
        }
    }

    #[test]
    fn whole_group_is_trivial_extension() {
        let rcg = setup("f2-g17");
        let gens: Vec<GroupElement> = (0..rcg.group().ngens()).map(|i| rcg.group().basis(i)).collect();
        let inv = ClassField::new(&rcg, &gens).unwrap().invariants().unwrap();
        assert_eq!((inv.degree, inv.genus, inv.rational_places), (1, 2, 5));
    }

    #[test]
    fn defining_polynomial_splitting() {
        for name in ["f2-g7", "f2-g17", "f3-g17", "f3-g22", "f5-g8", "f5-g10", "f5-g12"] {
            let f = fixture(name).unwrap();
            let rcg = setup(name);
            let (_, _, s) = f.parse().unwrap();
            let cf = ClassField::new(&rcg, &subgroup_of_places(&rcg, &s).unwrap()).unwrap();
            let checks = splitting_crosscheck(&cf, f.polys, f.base_variable()).unwrap();
            assert!(checks.iter().all(|c| !c.is_disagreement()), "{name}: {checks:?}");
            let split_seen = checks.iter().any(|c| matches!(c, SplitCheck::Agrees { predicted_split: true, .. }));
            assert_eq!(split_seen, !name.starts_with("f2") && name != "f3-g17", "{name}");
        }
    }

    #[test]
    fn alternative_genus_22_equation() {
        let f = fixture("f3-g22").unwrap();
        let rcg = setup("f3-g22");
        let (_, _, s) = f.parse().unwrap();
        let cf = ClassField::new(&rcg, &subgroup_of_places(&rcg, &s).unwrap()).unwrap();
        let checks = splitting_crosscheck(&cf, &[f.polys[0], crate::fixtures::F3_G22_ALT_POLY], "x").unwrap();
        assert!(checks.iter().all(|c| !c.is_disagreement()));
    }
}
