//! The triple torsion linking form `lambda_3`.
//!
//! On classes annihilated by `t` and pairwise unlinked under `lambda_2`,
//! the triple pairing takes values in Q/Z. It can be computed three ways,
//! all exact and all implemented here so they can police each other:
//!
//! * from surface data: `(1/t) sum_i (C_i.y)(D_i.z) - (C_i.z)(D_i.y)`,
//!   where `C_i, D_i` is a symplectic basis of a surface bounding `t x`
//!   and `.` is the intersection number in the ambient manifold;
//! * as a cup product `(1/t)(Phi u Psi)` of the cocycles recording those
//!   intersections, paired symplectically on the same surface;
//! * as `(1/t) <X, Y, Z>`, the integer Matsumoto-style triple pairing of
//!   rational chains, reduced mod 1.
//!
//! A [`TripleForm`] then models `lambda_3` on a whole group: a fully
//! alternating trilinear tensor over the invariant-factor generators,
//! evaluated through 3x3 coordinate minors. Pairwise `lambda_2`-isotropy of
//! the arguments is a *precondition* (the pairing is undefined otherwise)
//! and is enforced on every evaluation.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::abelian::{FiniteAbelianGroup, GroupElement, Subgroup};
use crate::linking::{LinkingError, LinkingForm, QmodZ};

/// Errors from triple-form construction and evaluation.
#[derive(Debug, thiserror::Error)]
pub enum TripleError {
    /// Structurally invalid input data.
    #[error("invalid data: {0}")]
    InvalidData(String),
    /// Parallel vectors in surface data must share one length (the genus).
    #[error("length mismatch: expected {expected} intersection numbers, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    /// Elements or subgroups from a different group were supplied.
    #[error("group mismatch: expected rank {expected}, got {got}")]
    GroupMismatch { expected: usize, got: usize },
    /// The pairing is only defined on pairwise `lambda_2`-unlinked triples.
    #[error("triple is not pairwise isotropic: lambda_2{pair} = {value} != 0")]
    NotPairwiseIsotropic { pair: String, value: String },
    /// `vanishes_on` requires a subgroup on which `lambda_2` vanishes.
    #[error("subgroup is not isotropic: lambda_2({x}, {y}) = {value} != 0")]
    NotIsotropicSubgroup { x: String, y: String, value: String },
    /// An underlying linking-form computation failed.
    #[error(transparent)]
    Linking(#[from] LinkingError),
}

/// Intersection data of surfaces bounding `t x`, `t y`, `t z`.
///
/// `C_i, D_i` run over a symplectic basis of the surface bounding `t x`
/// (genus = vector length); the four vectors record its intersection
/// numbers with cycles representing `y` and `z`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SurfaceIntersectionData {
    t: BigInt,
    c_dot_y: Vec<BigInt>,
    d_dot_y: Vec<BigInt>,
    c_dot_z: Vec<BigInt>,
    d_dot_z: Vec<BigInt>,
}

impl SurfaceIntersectionData {
    pub fn new(
        t: BigInt,
        c_dot_y: Vec<BigInt>,
        d_dot_y: Vec<BigInt>,
        c_dot_z: Vec<BigInt>,
        d_dot_z: Vec<BigInt>,
    ) -> Result<Self, TripleError> {
        if !t.is_positive() {
            return Err(TripleError::InvalidData(format!(
                "annihilator t must be positive, got {t}"
            )));
        }
        let g = c_dot_y.len();
        for v in [&d_dot_y, &c_dot_z, &d_dot_z] {
            if v.len() != g {
                return Err(TripleError::LengthMismatch {
                    expected: g,
                    got: v.len(),
                });
            }
        }
        Ok(SurfaceIntersectionData {
            t,
            c_dot_y,
            d_dot_y,
            c_dot_z,
            d_dot_z,
        })
    }

    /// Convenience constructor from machine integers.
    pub fn from_i64(
        t: i64,
        c_dot_y: &[i64],
        d_dot_y: &[i64],
        c_dot_z: &[i64],
        d_dot_z: &[i64],
    ) -> Result<Self, TripleError> {
        let big = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect();
        SurfaceIntersectionData::new(
            BigInt::from(t),
            big(c_dot_y),
            big(d_dot_y),
            big(c_dot_z),
            big(d_dot_z),
        )
    }

    pub fn genus(&self) -> usize {
        self.c_dot_y.len()
    }

    pub fn annihilator(&self) -> &BigInt {
        &self.t
    }

    /// The cocycles `Phi` (intersections with `y`) and `Psi` (with `z`)
    /// restricted to the symplectic basis of the bounding surface.
    pub fn cocycle_pair(&self) -> (CocycleVector, CocycleVector) {
        (
            CocycleVector {
                on_c: self.c_dot_y.clone(),
                on_d: self.d_dot_y.clone(),
            },
            CocycleVector {
                on_c: self.c_dot_z.clone(),
                on_d: self.d_dot_z.clone(),
            },
        )
    }

    /// The integer triple pairing of rational chains:
    /// `sum_i (C_i.y)(D_i.z) - (C_i.z)(D_i.y)`.
    pub fn matsumoto_term(&self) -> BigInt {
        let mut acc = BigInt::zero();
        for i in 0..self.genus() {
            acc += &self.c_dot_y[i] * &self.d_dot_z[i];
            acc -= &self.c_dot_z[i] * &self.d_dot_y[i];
        }
        acc
    }
}

/// A cocycle restricted to a symplectic surface basis: its values on the
/// `C_i` and `D_i` curves.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CocycleVector {
    pub on_c: Vec<BigInt>,
    pub on_d: Vec<BigInt>,
}

/// The cup product `(Phi u Psi)` evaluated on the surface: the symplectic
/// pairing `sum_i Phi(C_i) Psi(D_i) - Phi(D_i) Psi(C_i)`.
pub fn cup_product_eval(phi: &CocycleVector, psi: &CocycleVector) -> Result<BigInt, TripleError> {
    let g = phi.on_c.len();
    for v in [&phi.on_d, &psi.on_c, &psi.on_d] {
        if v.len() != g {
            return Err(TripleError::LengthMismatch {
                expected: g,
                got: v.len(),
            });
        }
    }
    let mut acc = BigInt::zero();
    for i in 0..g {
        acc += &phi.on_c[i] * &psi.on_d[i];
        acc -= &phi.on_d[i] * &psi.on_c[i];
    }
    Ok(acc)
}

/// `lambda_3` from surface data, accumulated term by term in Q/Z.
pub fn lambda3_from_surface_data(data: &SurfaceIntersectionData) -> QmodZ {
    let mut acc = QmodZ::zero();
    for i in 0..data.genus() {
        let pos = QmodZ::from_fraction(&data.c_dot_y[i] * &data.d_dot_z[i], data.t.clone())
            .expect("validated positive t");
        let neg = QmodZ::from_fraction(&data.c_dot_z[i] * &data.d_dot_y[i], data.t.clone())
            .expect("validated positive t");
        acc = acc.add(&pos).sub(&neg);
    }
    acc
}

/// `lambda_3` as the cup-product route: `(1/t)(Phi u Psi)` mod 1.
pub fn lambda3_from_cup_product(data: &SurfaceIntersectionData) -> QmodZ {
    let (phi, psi) = data.cocycle_pair();
    let cup = cup_product_eval(&phi, &psi).expect("cocycle pair shares the surface basis");
    QmodZ::from_fraction(cup, data.t.clone()).expect("validated positive t")
}

/// `lambda_3` as the rational-chain route: the integer triple pairing
/// divided by `t`, reduced mod 1.
pub fn lambda3_from_matsumoto(data: &SurfaceIntersectionData) -> QmodZ {
    QmodZ::from_fraction(data.matsumoto_term(), data.t.clone()).expect("validated positive t")
}

/// A fully alternating trilinear form refining a linking form.
///
/// Coefficients are stored on strictly increasing generator triples
/// `(i, j, k)`; evaluation expands arguments through 3x3 coordinate minors,
/// which builds in alternation and trilinearity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TripleForm {
    form: LinkingForm,
    /// The modeling denominator: a positive multiple of the group exponent.
    t: BigInt,
    /// `coeffs[(i,j,k)] = lambda_3(e_i, e_j, e_k)` on increasing triples.
    coeffs: BTreeMap<(usize, usize, usize), QmodZ>,
}

impl TripleForm {
    /// Builds and validates a triple form over `form` with denominator `t`.
    ///
    /// `t` must be a positive multiple of the group exponent (it plays the
    /// annihilator role), and each coefficient must be well-defined: its
    /// denominator must divide the order of each generator in its triple
    /// (equivalently the smallest, by the divisibility chain).
    pub fn new(
        form: LinkingForm,
        t: BigInt,
        coeffs: BTreeMap<(usize, usize, usize), QmodZ>,
    ) -> Result<Self, TripleError> {
        let group = form.group();
        let r = group.rank();
        if !t.is_positive() || !(&t % group.exponent()).is_zero() {
            return Err(TripleError::InvalidData(format!(
                "t = {t} must be a positive multiple of the group exponent {}",
                group.exponent()
            )));
        }
        for (&(i, j, k), c) in &coeffs {
            if !(i < j && j < k) || k >= r {
                return Err(TripleError::InvalidData(format!(
                    "coefficient triple ({i},{j},{k}) must be strictly increasing \
                     and within rank {r}"
                )));
            }
            if !c.annihilated_by(&group.factors()[i]) {
                return Err(TripleError::InvalidData(format!(
                    "coefficient {c} at ({i},{j},{k}) is not annihilated by the \
                     generator order {}",
                    group.factors()[i]
                )));
            }
        }
        Ok(TripleForm { form, t, coeffs })
    }

    /// The triple form that refines `form` with all coefficients zero.
    pub fn zero(form: LinkingForm) -> Self {
        let t = form.group().exponent();
        TripleForm {
            form,
            t,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn linking_form(&self) -> &LinkingForm {
        &self.form
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        self.form.group()
    }

    pub fn denominator(&self) -> &BigInt {
        &self.t
    }

    /// Nonzero coefficients on increasing generator triples.
    pub fn coefficients(&self) -> impl Iterator<Item = (&(usize, usize, usize), &QmodZ)> {
        self.coeffs.iter().filter(|(_, c)| !c.is_zero())
    }

    /// Evaluates `lambda_3(x, y, z)`.
    ///
    /// The arguments must be pairwise unlinked (`lambda_2 = 0`); the pairing
    /// is not defined otherwise and the offending pair is reported.
    pub fn evaluate(
        &self,
        x: &GroupElement,
        y: &GroupElement,
        z: &GroupElement,
    ) -> Result<QmodZ, TripleError> {
        let group = self.group();
        let r = group.rank();
        for e in [x, y, z] {
            if e.len() != r {
                return Err(TripleError::GroupMismatch {
                    expected: r,
                    got: e.len(),
                });
            }
        }
        for (name, a, b) in [("(x,y)", x, y), ("(x,z)", x, z), ("(y,z)", y, z)] {
            let v = self.form.eval(a, b)?;
            if !v.is_zero() {
                return Err(TripleError::NotPairwiseIsotropic {
                    pair: name.to_string(),
                    value: v.to_string(),
                });
            }
        }
        let x = group.reduce(x.coords());
        let y = group.reduce(y.coords());
        let z = group.reduce(z.coords());
        let mut acc = QmodZ::zero();
        for (&(i, j, k), c) in &self.coeffs {
            if c.is_zero() {
                continue;
            }
            let minor = det3(
                [&x.coords()[i], &x.coords()[j], &x.coords()[k]],
                [&y.coords()[i], &y.coords()[j], &y.coords()[k]],
                [&z.coords()[i], &z.coords()[j], &z.coords()[k]],
            );
            acc = acc.add(&c.scale(&minor));
        }
        Ok(acc)
    }

    /// True when `lambda_3` vanishes identically on `L x L x L`.
    ///
    /// `L` must be isotropic for the underlying `lambda_2` (otherwise the
    /// triple pairing is not even defined on all of `L^3`). By alternation
    /// and trilinearity, vanishing on increasing generator triples is
    /// equivalent to vanishing everywhere.
    pub fn vanishes_on(&self, l: &Subgroup) -> Result<bool, TripleError> {
        let group = self.group();
        if l.ambient_factors() != group.factors() {
            return Err(TripleError::GroupMismatch {
                expected: group.rank(),
                got: l.ambient_factors().len(),
            });
        }
        let gens = l.generators(group);
        for (a, x) in gens.iter().enumerate() {
            for y in &gens[a..] {
                let v = self.form.eval(x, y)?;
                if !v.is_zero() {
                    return Err(TripleError::NotIsotropicSubgroup {
                        x: x.to_string(),
                        y: y.to_string(),
                        value: v.to_string(),
                    });
                }
            }
        }
        for a in 0..gens.len() {
            for b in a + 1..gens.len() {
                for c in b + 1..gens.len() {
                    if !self.evaluate(&gens[a], &gens[b], &gens[c])?.is_zero() {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

impl fmt::Display for TripleForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "lambda_3 over {} with t = {}:", self.group(), self.t)?;
        let mut any = false;
        for (&(i, j, k), c) in &self.coeffs {
            if c.is_zero() {
                continue;
            }
            any = true;
            write!(f, " ({},{},{}) -> {c}", i + 1, j + 1, k + 1)?;
        }
        if !any {
            write!(f, " 0")?;
        }
        Ok(())
    }
}

/// Exact 3x3 determinant of borrowed big integers.
fn det3(r0: [&BigInt; 3], r1: [&BigInt; 3], r2: [&BigInt; 3]) -> BigInt {
    r0[0] * (r1[1] * r2[2] - r1[2] * r2[1]) - r0[1] * (r1[0] * r2[2] - r1[2] * r2[0])
        + r0[2] * (r1[0] * r2[1] - r1[1] * r2[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linking::diagonal_linking_form;

    fn hyperbolic_triple_form() -> TripleForm {
        // (Z/3)^6 base form with a single coefficient 1/3 on (0,1,2).
        let (form, _) = diagonal_linking_form(&[3, 3, 3, -3, -3, -3]).unwrap();
        let mut coeffs = BTreeMap::new();
        coeffs.insert((0usize, 1usize, 2usize), QmodZ::of(1, 3));
        TripleForm::new(form, BigInt::from(3), coeffs).unwrap()
    }

    #[test]
    fn surface_data_routes_agree_on_a_known_value() {
        // genus 1, t = 3: C.y = 1, D.z = 1, C.z = 0, D.y = 0 gives 1/3.
        let data = SurfaceIntersectionData::from_i64(3, &[1], &[0], &[0], &[1]).unwrap();
        assert_eq!(data.matsumoto_term(), BigInt::from(1));
        assert_eq!(lambda3_from_surface_data(&data), QmodZ::of(1, 3));
        assert_eq!(lambda3_from_cup_product(&data), QmodZ::of(1, 3));
        assert_eq!(lambda3_from_matsumoto(&data), QmodZ::of(1, 3));
    }

    #[test]
    fn surface_data_validation() {
        assert!(matches!(
            SurfaceIntersectionData::from_i64(0, &[1], &[0], &[0], &[1]),
            Err(TripleError::InvalidData(_))
        ));
        assert!(matches!(
            SurfaceIntersectionData::from_i64(3, &[1, 2], &[0], &[0], &[1]),
            Err(TripleError::LengthMismatch { .. })
        ));
        // genus 0 is legal: a disk bounds, all routes give zero
        let data = SurfaceIntersectionData::from_i64(5, &[], &[], &[], &[]).unwrap();
        assert_eq!(lambda3_from_surface_data(&data), QmodZ::zero());
    }

    #[test]
    fn triple_form_construction_validation() {
        let (form, _) = diagonal_linking_form(&[3, 3, 3, -3, -3, -3]).unwrap();
        // t not a multiple of the exponent
        assert!(matches!(
            TripleForm::new(form.clone(), BigInt::from(2), BTreeMap::new()),
            Err(TripleError::InvalidData(_))
        ));
        // multiple of the exponent is fine
        assert!(TripleForm::new(form.clone(), BigInt::from(6), BTreeMap::new()).is_ok());
        // non-increasing triple
        let mut bad = BTreeMap::new();
        bad.insert((1usize, 1usize, 2usize), QmodZ::of(1, 3));
        assert!(matches!(
            TripleForm::new(form.clone(), BigInt::from(3), bad),
            Err(TripleError::InvalidData(_))
        ));
        // out-of-range index
        let mut bad = BTreeMap::new();
        bad.insert((3usize, 4usize, 6usize), QmodZ::of(1, 3));
        assert!(matches!(
            TripleForm::new(form.clone(), BigInt::from(3), bad),
            Err(TripleError::InvalidData(_))
        ));
        // coefficient with denominator not dividing the generator order
        let mut bad = BTreeMap::new();
        bad.insert((0usize, 1usize, 2usize), QmodZ::of(1, 2));
        assert!(matches!(
            TripleForm::new(form, BigInt::from(3), bad),
            Err(TripleError::InvalidData(_))
        ));
    }

    #[test]
    fn evaluation_requires_pairwise_isotropy() {
        let tf = hyperbolic_triple_form();
        let g = tf.group().clone();
        // meridian x_1 = e_0 pairs with itself to 2/3; (x_1, x_1, anything)
        // is rejected before any tensor arithmetic happens.
        let e0 = g.element(&[1, 0, 0, 0, 0, 0]);
        let e3 = g.element(&[0, 0, 0, 1, 0, 0]);
        let err = tf.evaluate(&e0, &e0, &e3).unwrap_err();
        assert!(matches!(err, TripleError::NotPairwiseIsotropic { .. }));
        // x = e_0 + e_3 is isotropic: 2/3 + 1/3 = 0
        let x = g.element(&[1, 0, 0, 1, 0, 0]);
        let y = g.element(&[0, 1, 0, 0, 1, 0]);
        let z = g.element(&[0, 0, 1, 0, 0, 1]);
        assert_eq!(tf.evaluate(&x, &y, &z).unwrap(), QmodZ::of(1, 3));
    }

    #[test]
    fn evaluation_is_alternating() {
        let tf = hyperbolic_triple_form();
        let g = tf.group().clone();
        let x = g.element(&[1, 0, 0, 1, 0, 0]);
        let y = g.element(&[0, 1, 0, 0, 1, 0]);
        let z = g.element(&[0, 0, 1, 0, 0, 1]);
        let v = tf.evaluate(&x, &y, &z).unwrap();
        assert_eq!(tf.evaluate(&y, &x, &z).unwrap(), v.neg());
        assert_eq!(tf.evaluate(&z, &y, &x).unwrap(), v.neg());
        assert_eq!(tf.evaluate(&y, &z, &x).unwrap(), v);
        // repeated argument kills the value
        assert!(tf.evaluate(&x, &x, &y).unwrap().is_zero());
    }

    #[test]
    fn vanishing_on_subgroups() {
        let tf = hyperbolic_triple_form();
        let g = tf.group().clone();
        let x = g.element(&[1, 0, 0, 1, 0, 0]);
        let y = g.element(&[0, 1, 0, 0, 1, 0]);
        let z = g.element(&[0, 0, 1, 0, 0, 1]);
        let span_xyz = Subgroup::from_generators(&g, &[x, y, z]);
        assert!(!tf.vanishes_on(&span_xyz).unwrap());

        let l1 = g.element(&[0, 0, 0, 1, 1, 1]);
        let l2 = g.element(&[0, 1, 2, 0, 1, 2]);
        let l3 = g.element(&[1, 1, 1, 0, 0, 0]);
        let span_l = Subgroup::from_generators(&g, &[l1, l2, l3]);
        assert!(tf.vanishes_on(&span_l).unwrap());

        // non-isotropic subgroup is a precondition failure, not `false`
        let bad = Subgroup::from_generators(&g, &[g.element(&[1, 0, 0, 0, 0, 0])]);
        assert!(matches!(
            tf.vanishes_on(&bad),
            Err(TripleError::NotIsotropicSubgroup { .. })
        ));
    }

    #[test]
    fn zero_form_vanishes_everywhere() {
        let (form, _) = diagonal_linking_form(&[3, -3]).unwrap();
        let tf = TripleForm::zero(form);
        let g = tf.group().clone();
        let l = Subgroup::from_generators(&g, &[g.element(&[1, 1])]);
        assert!(tf.vanishes_on(&l).unwrap());
    }
}
