//! Clasper-surgery families of rational homology spheres.
//!
//! `family(p, n)` models the manifolds obtained from a fixed 2n-component
//! base surgery — n parallel strands with framing `+p` (generators
//! `a_1..a_n`, self-linking `-1/p`) and n with framing `-p` (generators
//! `b_1..b_n`, self-linking `+1/p`) — by clasper surgeries that do not
//! change `lambda_2` but shift `lambda_3` by an arbitrary alternating
//! tensor with entries in `(1/p)Z / Z`. A [`ParameterVector`] picks one
//! manifold of the family: coordinate `v_T` on the lex-ordered generator
//! triple `T` contributes `v_T / p` to `lambda_3` on `T`.
//!
//! `m0_model()` is the distinguished member used throughout: `p = 3`,
//! `n = 3`, with the single coefficient `1/3` on `(x_1, y_1, z_1)`, and the
//! named classes `x = x_1 + x_2`, `y = y_1 + y_2`, `z = z_1 + z_2`,
//! `l_1 = x_2 + y_2 + z_2`, `l_2 = y_1 - z_1 + y_2 - z_2`,
//! `l_3 = x_1 + y_1 + z_1`.

use std::collections::BTreeMap;

use num_bigint::BigInt;

use crate::abelian::{FiniteAbelianGroup, GroupElement};
use crate::linking::{diagonal_linking_form, LinkingError, LinkingForm, QmodZ};
use crate::triple::{TripleError, TripleForm};

/// Errors from family construction and parameter handling.
#[derive(Debug, thiserror::Error)]
pub enum ClasperError {
    /// `p` must be prime and `n` at least 1 (and small enough that the
    /// underlying group stays within exact-checking bounds).
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    /// A parameter vector's length must be the family's parameter dimension.
    #[error("parameter vector has {got} coordinates but the family has dimension {expected}")]
    DimensionMismatch { expected: usize, got: usize },
    /// Building the base linking form failed (e.g. the group is too large).
    #[error(transparent)]
    Linking(#[from] LinkingError),
    /// Building a member's triple form failed.
    #[error(transparent)]
    Triple(#[from] TripleError),
}

fn is_small_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

/// A clasper-surgery family over `(Z/p)^{2n}`.
#[derive(Clone, Debug)]
pub struct ClasperFamily {
    p: u64,
    n: usize,
    base: LinkingForm,
}

/// One member's clasper parameters: a vector over `Z/p` indexed by the
/// lex-ordered generator triples.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParameterVector {
    digits: Vec<u64>,
}

impl ParameterVector {
    /// Validates entries into `[0, p)`.
    pub fn new(digits: Vec<u64>, p: u64) -> Result<Self, ClasperError> {
        if let Some(bad) = digits.iter().find(|&&d| d >= p) {
            return Err(ClasperError::InvalidParameters(format!(
                "parameter entry {bad} is not a residue mod {p}"
            )));
        }
        Ok(ParameterVector { digits })
    }

    pub fn zero(len: usize) -> Self {
        ParameterVector {
            digits: vec![0; len],
        }
    }

    pub fn digits(&self) -> &[u64] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }
}

/// Builds the family for a prime `p` and `n >= 1` strand pairs.
pub fn family(p: u64, n: usize) -> Result<ClasperFamily, ClasperError> {
    if !is_small_prime(p) {
        return Err(ClasperError::InvalidParameters(format!(
            "p = {p} is not prime"
        )));
    }
    if n == 0 {
        return Err(ClasperError::InvalidParameters(
            "n must be at least 1".to_string(),
        ));
    }
    let fp = i64::try_from(p).map_err(|_| {
        ClasperError::InvalidParameters(format!("p = {p} is too large for a framing"))
    })?;
    let framings: Vec<i64> = std::iter::repeat(fp)
        .take(n)
        .chain(std::iter::repeat(-fp).take(n))
        .collect();
    let (base, _meridians) = diagonal_linking_form(&framings)?;
    Ok(ClasperFamily { p, n, base })
}

impl ClasperFamily {
    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// The number of surgery curves, `2n` (the group rank).
    pub fn curve_count(&self) -> usize {
        2 * self.n
    }

    /// The parameter dimension `m = C(2n, 3)`.
    pub fn parameter_dimension(&self) -> usize {
        let c = self.curve_count();
        if c < 3 {
            0
        } else {
            c * (c - 1) * (c - 2) / 6
        }
    }

    /// The shared linking form of every member.
    pub fn base_form(&self) -> &LinkingForm {
        &self.base
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        self.base.group()
    }

    /// Lex-ordered strictly increasing generator triples; the parameter
    /// coordinates follow this order.
    pub fn generator_triples(&self) -> Vec<(usize, usize, usize)> {
        let c = self.curve_count();
        let mut out = Vec::with_capacity(self.parameter_dimension());
        for i in 0..c {
            for j in i + 1..c {
                for k in j + 1..c {
                    out.push((i, j, k));
                }
            }
        }
        out
    }

    /// The member's triple form: coefficient `v_T / p` on each triple `T`.
    pub fn lambda3_of(&self, v: &ParameterVector) -> Result<TripleForm, ClasperError> {
        let m = self.parameter_dimension();
        if v.len() != m {
            return Err(ClasperError::DimensionMismatch {
                expected: m,
                got: v.len(),
            });
        }
        let p = i64::try_from(self.p).expect("validated small prime");
        let mut coeffs = BTreeMap::new();
        for (triple, &digit) in self.generator_triples().into_iter().zip(v.digits()) {
            if digit != 0 {
                coeffs.insert(triple, QmodZ::of(digit as i64, p));
            }
        }
        Ok(TripleForm::new(
            self.base.clone(),
            BigInt::from(self.p),
            coeffs,
        )?)
    }
}

/// The distinguished family member with its named homology classes.
pub struct M0Model {
    pub family: ClasperFamily,
    pub triple: TripleForm,
    /// Named classes: the six meridian generators `x1, y1, z1, x2, y2, z2`,
    /// the diagonal classes `x, y, z`, and the Lagrangian triple
    /// `l1, l2, l3`.
    pub named: BTreeMap<String, GroupElement>,
}

impl M0Model {
    pub fn element(&self, name: &str) -> Option<&GroupElement> {
        self.named.get(name)
    }
}

/// Builds the `p = 3`, `n = 3` member with the single clasper coefficient
/// `1/3` on `(x_1, y_1, z_1)` and its distinguished named classes.
pub fn m0_model() -> M0Model {
    let fam = family(3, 3).expect("3 is prime and (Z/3)^6 is in scope");
    // Parameter vector: 1 on the lex-first triple (0,1,2) = (x1,y1,z1).
    let mut digits = vec![0u64; fam.parameter_dimension()];
    digits[0] = 1;
    let v = ParameterVector::new(digits, 3).expect("residues mod 3");
    let triple = fam.lambda3_of(&v).expect("dimension matches");

    let g = fam.group().clone();
    // Generator order is (x1, y1, z1, x2, y2, z2).
    let mut named = BTreeMap::new();
    let mut def = |name: &str, coords: [i64; 6]| {
        named.insert(name.to_string(), g.element(&coords));
    };
    def("x1", [1, 0, 0, 0, 0, 0]);
    def("y1", [0, 1, 0, 0, 0, 0]);
    def("z1", [0, 0, 1, 0, 0, 0]);
    def("x2", [0, 0, 0, 1, 0, 0]);
    def("y2", [0, 0, 0, 0, 1, 0]);
    def("z2", [0, 0, 0, 0, 0, 1]);
    def("x", [1, 0, 0, 1, 0, 0]);
    def("y", [0, 1, 0, 0, 1, 0]);
    def("z", [0, 0, 1, 0, 0, 1]);
    def("l1", [0, 0, 0, 1, 1, 1]);
    def("l2", [0, 1, -1, 0, 1, -1]);
    def("l3", [1, 1, 1, 0, 0, 0]);

    M0Model {
        family: fam,
        triple,
        named,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::Subgroup;
    use crate::linking::split_form_lagrangian_count;

    #[test]
    fn family_validation() {
        assert!(matches!(
            family(4, 3),
            Err(ClasperError::InvalidParameters(_))
        ));
        assert!(matches!(
            family(1, 3),
            Err(ClasperError::InvalidParameters(_))
        ));
        assert!(matches!(
            family(3, 0),
            Err(ClasperError::InvalidParameters(_))
        ));
        // (Z/7)^8 has order 5764801 > 10^6: rejected through the form bound
        assert!(matches!(family(7, 4), Err(ClasperError::Linking(_))));
    }

    #[test]
    fn family_shape() {
        let fam = family(3, 3).unwrap();
        assert_eq!(fam.curve_count(), 6);
        assert_eq!(fam.parameter_dimension(), 20);
        assert_eq!(fam.group(), &FiniteAbelianGroup::elementary(3, 6));
        let triples = fam.generator_triples();
        assert_eq!(triples.len(), 20);
        assert_eq!(triples[0], (0, 1, 2));
        assert_eq!(triples[19], (3, 4, 5));
        // n = 1: no triples at all
        let small = family(5, 1).unwrap();
        assert_eq!(small.parameter_dimension(), 0);
        assert!(small.generator_triples().is_empty());

        let fam2 = family(2, 3).unwrap();
        assert_eq!(fam2.parameter_dimension(), 20);
    }

    #[test]
    fn parameter_vector_validation() {
        assert!(ParameterVector::new(vec![0, 1, 2], 3).is_ok());
        assert!(matches!(
            ParameterVector::new(vec![0, 3], 3),
            Err(ClasperError::InvalidParameters(_))
        ));
        let fam = family(3, 3).unwrap();
        let short = ParameterVector::zero(5);
        assert!(matches!(
            fam.lambda3_of(&short),
            Err(ClasperError::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn lambda3_is_linear_in_the_parameters() {
        let fam = family(3, 3).unwrap();
        let g = fam.group().clone();
        // a pairwise-unlinked independent triple (the diagonal classes)
        let a = g.element(&[1, 0, 0, 1, 0, 0]);
        let b = g.element(&[0, 1, 0, 0, 1, 0]);
        let c = g.element(&[0, 0, 1, 0, 0, 1]);
        // coefficients on (0,1,2) and (1,2,3) pair the triple (a,b,c) with
        // determinant +1; the extra entries sit on triples whose minors
        // vanish for these arguments
        let mut d1 = vec![0u64; 20];
        d1[0] = 1; // (0,1,2)
        d1[1] = 2; // (0,1,3): zero minor for (a,b,c)
        let mut d2 = vec![0u64; 20];
        d2[10] = 1; // (1,2,3)
        d2[18] = 1; // (2,4,5): zero minor for (a,b,c)
        let ds: Vec<u64> = d1.iter().zip(&d2).map(|(x, y)| (x + y) % 3).collect();
        let v1 = ParameterVector::new(d1, 3).unwrap();
        let v2 = ParameterVector::new(d2, 3).unwrap();
        let sum = ParameterVector::new(ds, 3).unwrap();
        let e1 = fam.lambda3_of(&v1).unwrap().evaluate(&a, &b, &c).unwrap();
        let e2 = fam.lambda3_of(&v2).unwrap().evaluate(&a, &b, &c).unwrap();
        let es = fam.lambda3_of(&sum).unwrap().evaluate(&a, &b, &c).unwrap();
        assert_eq!(e1.add(&e2), es);
        assert!(!es.is_zero(), "chosen parameters give a nonzero value");
    }

    #[test]
    fn m0_published_values() {
        let m0 = m0_model();
        let x = m0.element("x").unwrap();
        let y = m0.element("y").unwrap();
        let z = m0.element("z").unwrap();
        assert_eq!(
            m0.triple.evaluate(x, y, z).unwrap(),
            QmodZ::of(1, 3),
            "lambda_3(x, y, z) = 1/3"
        );
        let l1 = m0.element("l1").unwrap();
        let l2 = m0.element("l2").unwrap();
        let l3 = m0.element("l3").unwrap();
        assert!(
            m0.triple.evaluate(l1, l2, l3).unwrap().is_zero(),
            "lambda_3(l_1, l_2, l_3) = 0"
        );
    }

    #[test]
    fn m0_spans_are_lagrangian() {
        let m0 = m0_model();
        let g = m0.family.group().clone();
        let form = m0.family.base_form();
        let span_xyz = Subgroup::from_generators(
            &g,
            &[
                m0.element("x").unwrap().clone(),
                m0.element("y").unwrap().clone(),
                m0.element("z").unwrap().clone(),
            ],
        );
        let span_l = Subgroup::from_generators(
            &g,
            &[
                m0.element("l1").unwrap().clone(),
                m0.element("l2").unwrap().clone(),
                m0.element("l3").unwrap().clone(),
            ],
        );
        assert!(form.is_lagrangian(&span_xyz).unwrap());
        assert!(form.is_lagrangian(&span_l).unwrap());
        assert_eq!(form.orthogonal_complement(&span_xyz).unwrap(), span_xyz);
        // the triple form distinguishes them
        assert!(!m0.triple.vanishes_on(&span_xyz).unwrap());
        assert!(m0.triple.vanishes_on(&span_l).unwrap());
        assert_ne!(span_xyz, span_l);
    }

    #[test]
    fn m0_lagrangian_count_matches_split_form_oracle() {
        let m0 = m0_model();
        let ls = m0.family.base_form().enumerate_lagrangians().unwrap();
        assert_eq!(BigInt::from(ls.len()), split_form_lagrangian_count(3, 3));
        assert_eq!(ls.len(), 80);
    }

    #[test]
    fn framing_sign_assignment_does_not_change_outcomes() {
        // Swap the framing blocks: -3 on the first three strands, +3 on the
        // rest. Published outcomes must be invariant under this relabeling.
        let (form, _) = diagonal_linking_form(&[-3, -3, -3, 3, 3, 3]).unwrap();
        let mut coeffs = BTreeMap::new();
        coeffs.insert((0usize, 1usize, 2usize), QmodZ::of(1, 3));
        let triple = TripleForm::new(form.clone(), BigInt::from(3), coeffs).unwrap();
        let g = form.group().clone();
        let x = g.element(&[1, 0, 0, 1, 0, 0]);
        let y = g.element(&[0, 1, 0, 0, 1, 0]);
        let z = g.element(&[0, 0, 1, 0, 0, 1]);
        assert_eq!(triple.evaluate(&x, &y, &z).unwrap(), QmodZ::of(1, 3));
        let span = Subgroup::from_generators(&g, &[x, y, z]);
        assert!(form.is_lagrangian(&span).unwrap());
        assert_eq!(form.enumerate_lagrangians().unwrap().len(), 80);
    }
}
