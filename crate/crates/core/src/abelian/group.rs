//! Finite abelian groups presented by invariant factors.
//!
//! A group is `Z/t_1 x ... x Z/t_r` with `t_1 | t_2 | ... | t_r` and every
//! `t_i >= 2`; the trivial group has rank zero. Elements are coordinate
//! vectors reduced into `[0, t_i)`. This is the normal form every other
//! module works in: surgery presentations land here through
//! [`cokernel_presentation`].

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use super::snf::smith_normal_form;
use super::AbelianError;

/// A finite abelian group in invariant-factor normal form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteAbelianGroup {
    factors: Vec<BigInt>,
}

/// An element of a [`FiniteAbelianGroup`], stored as reduced coordinates.
///
/// Elements carry no back-reference to their group; all arithmetic goes
/// through the group so reduction is never skipped. Coordinate length acts
/// as the compatibility check.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct GroupElement {
    coords: Vec<BigInt>,
}

impl GroupElement {
    pub fn coords(&self) -> &[BigInt] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl FiniteAbelianGroup {
    /// Builds a group from invariant factors `t_1 | t_2 | ... | t_r`, each at
    /// least 2. An empty list gives the trivial group.
    pub fn new(factors: Vec<BigInt>) -> Result<Self, AbelianError> {
        if let Some(bad) = factors.iter().find(|t| **t < BigInt::from(2)) {
            return Err(AbelianError::InvalidInvariantFactors(format!(
                "invariant factor {bad} is below 2; drop unit factors instead"
            )));
        }
        for w in factors.windows(2) {
            if !(&w[1] % &w[0]).is_zero() {
                return Err(AbelianError::InvalidInvariantFactors(format!(
                    "{} does not divide {}",
                    w[0], w[1]
                )));
            }
        }
        Ok(FiniteAbelianGroup { factors })
    }

    /// The trivial group.
    pub fn trivial() -> Self {
        FiniteAbelianGroup { factors: Vec::new() }
    }

    /// Convenience constructor: `(Z/p)^r`.
    pub fn elementary(p: u64, rank: usize) -> Self {
        assert!(p >= 2);
        FiniteAbelianGroup {
            factors: vec![BigInt::from(p); rank],
        }
    }

    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    /// Group order (product of the invariant factors).
    pub fn order(&self) -> BigInt {
        self.factors.iter().product()
    }

    /// The exponent: the largest invariant factor, or 1 for the trivial group.
    pub fn exponent(&self) -> BigInt {
        self.factors.last().cloned().unwrap_or_else(BigInt::one)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }

    /// Reduces arbitrary integer coordinates into the group.
    ///
    /// Panics if the coordinate count differs from the rank; that is a
    /// programming error, unlike cross-group data which public entry points
    /// reject with `GroupMismatch`.
    pub fn reduce(&self, coords: &[BigInt]) -> GroupElement {
        assert_eq!(
            coords.len(),
            self.rank(),
            "coordinate count {} does not match group rank {}",
            coords.len(),
            self.rank()
        );
        GroupElement {
            coords: coords
                .iter()
                .zip(&self.factors)
                .map(|(c, t)| c.mod_floor(t))
                .collect(),
        }
    }

    /// Convenience element constructor from machine integers.
    pub fn element(&self, coords: &[i64]) -> GroupElement {
        let coords: Vec<BigInt> = coords.iter().map(|&c| BigInt::from(c)).collect();
        self.reduce(&coords)
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement {
            coords: vec![BigInt::zero(); self.rank()],
        }
    }

    /// True when the element's coordinate vector is shaped for this group.
    pub fn contains(&self, e: &GroupElement) -> bool {
        e.len() == self.rank()
            && e.coords
                .iter()
                .zip(&self.factors)
                .all(|(c, t)| !c.is_negative() && c < t)
    }

    pub fn add(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.checked_pair(a, b);
        GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&b.coords)
                .zip(&self.factors)
                .map(|((x, y), t)| (x + y).mod_floor(t))
                .collect(),
        }
    }

    pub fn neg(&self, a: &GroupElement) -> GroupElement {
        self.checked(a);
        GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&self.factors)
                .map(|(x, t)| (-x).mod_floor(t))
                .collect(),
        }
    }

    pub fn sub(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        self.add(a, &self.neg(b))
    }

    pub fn scale(&self, c: &BigInt, a: &GroupElement) -> GroupElement {
        self.checked(a);
        GroupElement {
            coords: a
                .coords
                .iter()
                .zip(&self.factors)
                .map(|(x, t)| (c * x).mod_floor(t))
                .collect(),
        }
    }

    /// The additive order of `a`: the least `k >= 1` with `k * a = 0`.
    pub fn element_order(&self, a: &GroupElement) -> BigInt {
        self.checked(a);
        // lcm over coordinates of t_i / gcd(t_i, a_i)
        a.coords
            .iter()
            .zip(&self.factors)
            .map(|(x, t)| t / x.gcd(t))
            .fold(BigInt::one(), |acc, o| acc.lcm(&o))
    }

    /// Iterates every element in lexicographic coordinate order.
    ///
    /// Only sensible for small groups; enumeration callers bound the order
    /// before using this.
    pub fn elements(&self) -> impl Iterator<Item = GroupElement> + '_ {
        let rank = self.rank();
        let mut next: Option<Vec<BigInt>> = Some(vec![BigInt::zero(); rank]);
        std::iter::from_fn(move || {
            let cur = next.take()?;
            let elem = GroupElement { coords: cur.clone() };
            // odometer increment, most significant digit first
            let mut cur = cur;
            let mut i = rank;
            loop {
                if i == 0 {
                    next = None;
                    break;
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < self.factors[i] {
                    next = Some(cur);
                    break;
                }
                cur[i] = BigInt::zero();
            }
            Some(elem)
        })
    }

    fn checked(&self, a: &GroupElement) {
        assert_eq!(
            a.len(),
            self.rank(),
            "element has {} coordinates but group has rank {}",
            a.len(),
            self.rank()
        );
    }

    fn checked_pair(&self, a: &GroupElement, b: &GroupElement) {
        self.checked(a);
        self.checked(b);
    }
}

impl fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        for (i, t) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " x ")?;
            }
            write!(f, "Z/{t}")?;
        }
        Ok(())
    }
}

/// Presents the cokernel of a square nonsingular integer matrix.
///
/// For a surgery presentation `A`, the first homology of the surgered
/// manifold is `Z^n / A Z^n`. The result is that quotient in invariant-factor
/// form together with the images of the presentation basis vectors (the
/// meridians): `meridians[i]` is the class of `e_i`.
pub fn cokernel_presentation(
    a: &IntMatrix,
) -> Result<(FiniteAbelianGroup, Vec<GroupElement>), AbelianError> {
    if !a.is_square() {
        return Err(AbelianError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        });
    }
    let s = smith_normal_form(a);
    let diag = s.diagonal();
    if diag.iter().any(Zero::is_zero) {
        return Err(AbelianError::SingularMatrix);
    }
    // Unit factors present trivial summands; keep only moduli >= 2. The
    // divisibility chain puts units first, so the kept block is a suffix.
    let kept: Vec<usize> = (0..diag.len()).filter(|&i| !diag[i].is_one()).collect();
    let group = FiniteAbelianGroup::new(kept.iter().map(|&i| diag[i].clone()).collect())?;
    // x in Z^n maps to U x in the diagonal presentation; e_i maps to column
    // i of U restricted to the kept coordinates.
    let meridians = (0..a.cols())
        .map(|i| {
            let col = s.u.column(i);
            let coords: Vec<BigInt> = kept.iter().map(|&k| col[k].clone()).collect();
            group.reduce(&coords)
        })
        .collect();
    Ok((group, meridians))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_normal_form_is_validated() {
        assert!(FiniteAbelianGroup::new(vec![BigInt::from(2), BigInt::from(4)]).is_ok());
        assert!(FiniteAbelianGroup::new(vec![BigInt::from(2), BigInt::from(3)]).is_err());
        assert!(FiniteAbelianGroup::new(vec![BigInt::from(1)]).is_err());
        assert!(FiniteAbelianGroup::new(vec![BigInt::from(0)]).is_err());
        assert!(FiniteAbelianGroup::new(Vec::new()).is_ok());
    }

    #[test]
    fn arithmetic_reduces_coordinates() {
        let g = FiniteAbelianGroup::elementary(3, 2);
        let a = g.element(&[2, 2]);
        let b = g.element(&[2, 1]);
        assert_eq!(g.add(&a, &b), g.element(&[1, 0]));
        assert_eq!(g.neg(&a), g.element(&[1, 1]));
        assert_eq!(g.scale(&BigInt::from(-4), &b), g.element(&[1, 2]));
        assert_eq!(g.sub(&a, &a), g.zero());
        // negative inputs reduce into range
        assert_eq!(g.element(&[-1, -5]), g.element(&[2, 1]));
    }

    #[test]
    fn order_exponent_and_element_order() {
        let g = FiniteAbelianGroup::new(vec![BigInt::from(2), BigInt::from(6)]).unwrap();
        assert_eq!(g.order(), BigInt::from(12));
        assert_eq!(g.exponent(), BigInt::from(6));
        assert_eq!(g.element_order(&g.element(&[1, 2])), BigInt::from(6));
        assert_eq!(g.element_order(&g.zero()), BigInt::from(1));
        assert_eq!(FiniteAbelianGroup::trivial().order(), BigInt::from(1));
        assert_eq!(FiniteAbelianGroup::trivial().exponent(), BigInt::from(1));
    }

    #[test]
    fn elements_iterator_covers_group_once() {
        let g = FiniteAbelianGroup::new(vec![BigInt::from(2), BigInt::from(4)]).unwrap();
        let all: Vec<_> = g.elements().collect();
        assert_eq!(all.len(), 8);
        let dedup: std::collections::BTreeSet<_> = all.iter().cloned().collect();
        assert_eq!(dedup.len(), 8);
        assert_eq!(all[0], g.zero());
        // trivial group iterates exactly its zero element
        let t = FiniteAbelianGroup::trivial();
        assert_eq!(t.elements().count(), 1);
    }

    #[test]
    fn cokernel_of_symmetric_2x2() {
        // Frozen oracle: coker [[2,1],[1,2]] = Z/3, meridians both generate.
        let a = IntMatrix::from_i64_rows(&[&[2, 1], &[1, 2]]);
        let (g, mer) = cokernel_presentation(&a).unwrap();
        assert_eq!(g.factors(), &[BigInt::from(3)]);
        assert_eq!(mer.len(), 2);
        for m in &mer {
            assert_eq!(g.element_order(m), BigInt::from(3), "meridian generates");
        }
        // presentation relation: columns of A map to zero
        let rel0 = g.add(&g.scale(&BigInt::from(2), &mer[0]), &mer[1]);
        assert!(rel0.is_zero());
    }

    #[test]
    fn cokernel_of_surgery_diagonal_is_z3_to_the_6() {
        let a = IntMatrix::diagonal(&[3, 3, 3, -3, -3, -3].map(BigInt::from));
        let (g, mer) = cokernel_presentation(&a).unwrap();
        assert_eq!(g, FiniteAbelianGroup::elementary(3, 6));
        // each meridian must be (up to sign) a standard generator
        for (i, m) in mer.iter().enumerate() {
            let mut expect = vec![0i64; 6];
            expect[i] = 1;
            let e = g.element(&expect);
            assert!(
                *m == e || *m == g.neg(&e),
                "meridian {i} should be a signed generator, got {m}"
            );
        }
    }

    #[test]
    fn cokernel_rejects_bad_input() {
        let singular = IntMatrix::from_i64_rows(&[&[1, 2], &[2, 4]]);
        assert!(matches!(
            cokernel_presentation(&singular),
            Err(AbelianError::SingularMatrix)
        ));
        let rect = IntMatrix::zero(2, 3);
        assert!(matches!(
            cokernel_presentation(&rect),
            Err(AbelianError::NotSquare { .. })
        ));
    }

    #[test]
    fn cokernel_of_identity_is_trivial() {
        let (g, mer) = cokernel_presentation(&IntMatrix::identity(3)).unwrap();
        assert!(g.is_trivial());
        assert_eq!(mer.len(), 3);
        assert!(mer.iter().all(GroupElement::is_zero));
    }
}
