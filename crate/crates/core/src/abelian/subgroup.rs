//! Subgroups in a canonical form that makes equality testing trivial.
//!
//! A subgroup `S` of `G = Z/t_1 x ... x Z/t_r` is stored as the Hermite
//! normal form of the full preimage lattice `L = span(lifts of generators)
//! + diag(t_1..t_r) Z^r` in `Z^r`. Because the relation lattice is included,
//! `L` always has full rank, so the HNF is a unique upper-triangular `r x r`
//! matrix: two generating sets span the same subgroup exactly when their
//! canonical matrices agree. The diagonal also hands us the order for free:
//! `|S| = prod(t_i) / prod(h_ii)`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::group::{FiniteAbelianGroup, GroupElement};
use super::matrix::IntMatrix;

/// A subgroup of a [`FiniteAbelianGroup`] in canonical (HNF) form.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subgroup {
    /// Invariant factors of the ambient group (identifies the ambient).
    ambient_factors: Vec<BigInt>,
    /// Upper-triangular full-rank HNF basis of the preimage lattice.
    basis: IntMatrix,
    order: BigInt,
}

/// Row-style Hermite normal form of a full-column-rank integer lattice.
///
/// `rows` must span a rank-`ncols` lattice (callers guarantee this by
/// including the ambient relation lattice). Returns the unique basis that is
/// upper triangular with positive diagonal, the entries above each pivot
/// reduced into `[0, pivot)`.
fn hermite_normal_form(mut rows: Vec<Vec<BigInt>>, ncols: usize) -> IntMatrix {
    debug_assert!(rows.iter().all(|r| r.len() == ncols));
    for col in 0..ncols {
        // Clear column `col` below the pivot row by gcd elimination on rows
        // col.. : repeatedly reduce the larger entry by the smaller until one
        // survives.
        loop {
            let mut nonzero: Vec<usize> = (col..rows.len())
                .filter(|&i| !rows[i][col].is_zero())
                .collect();
            if nonzero.len() <= 1 {
                break;
            }
            // pick the smallest-magnitude entry as the reducer
            nonzero.sort_by_key(|&i| rows[i][col].abs());
            let pivot = nonzero[0];
            for &i in &nonzero[1..] {
                let q = rows[i][col].div_floor(&rows[pivot][col]);
                if !q.is_zero() {
                    for j in 0..ncols {
                        let t = &q * &rows[pivot][j];
                        rows[i][j] -= t;
                    }
                }
            }
        }
        let pivot_row = (col..rows.len())
            .find(|&i| !rows[i][col].is_zero())
            .expect("lattice must have full column rank");
        rows.swap(col, pivot_row);
        if rows[col][col].is_negative() {
            for v in &mut rows[col] {
                *v = -std::mem::take(v);
            }
        }
        // Reduce the entries above the pivot into [0, pivot).
        for i in 0..col {
            let q = rows[i][col].div_floor(&rows[col][col]);
            if !q.is_zero() {
                for j in 0..ncols {
                    let t = &q * &rows[col][j];
                    rows[i][j] -= t;
                }
            }
        }
    }
    rows.truncate(ncols);
    IntMatrix::from_rows(rows)
}

impl Subgroup {
    /// The subgroup of `group` generated by `gens`.
    ///
    /// Generators are arbitrary elements of `group`; order and redundancy do
    /// not affect the canonical result.
    pub fn from_generators(group: &FiniteAbelianGroup, gens: &[GroupElement]) -> Subgroup {
        let r = group.rank();
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(gens.len() + r);
        for g in gens {
            let g = group.reduce(g.coords()); // tolerate unreduced input
            rows.push(g.coords().to_vec());
        }
        for (i, t) in group.factors().iter().enumerate() {
            let mut rel = vec![BigInt::zero(); r];
            rel[i] = t.clone();
            rows.push(rel);
        }
        let basis = hermite_normal_form(rows, r);
        let mut order = BigInt::from(1);
        for (i, t) in group.factors().iter().enumerate() {
            let h = &basis[(i, i)];
            debug_assert!((t % h).is_zero(), "HNF diagonal must divide the modulus");
            order *= t / h;
        }
        Subgroup {
            ambient_factors: group.factors().to_vec(),
            basis,
            order,
        }
    }

    /// The trivial subgroup of `group`.
    pub fn trivial(group: &FiniteAbelianGroup) -> Subgroup {
        Subgroup::from_generators(group, &[])
    }

    /// The whole group as a subgroup of itself.
    pub fn whole(group: &FiniteAbelianGroup) -> Subgroup {
        let gens: Vec<GroupElement> = (0..group.rank())
            .map(|i| {
                let mut c = vec![0i64; group.rank()];
                c[i] = 1;
                group.element(&c)
            })
            .collect();
        Subgroup::from_generators(group, &gens)
    }

    /// Invariant factors of the ambient group.
    pub fn ambient_factors(&self) -> &[BigInt] {
        &self.ambient_factors
    }

    /// True when `self` and `other` live in the same ambient group.
    pub fn same_ambient(&self, other: &Subgroup) -> bool {
        self.ambient_factors == other.ambient_factors
    }

    pub fn order(&self) -> &BigInt {
        &self.order
    }

    /// Index of the subgroup in its ambient group.
    pub fn index(&self) -> BigInt {
        let ambient: BigInt = self.ambient_factors.iter().product();
        ambient / &self.order
    }

    /// The canonical HNF basis matrix (rows are lattice basis vectors).
    pub fn canonical_basis(&self) -> &IntMatrix {
        &self.basis
    }

    /// Membership test by forward substitution against the triangular basis.
    ///
    /// The element must be shaped for the ambient group (same rank);
    /// violating that is a programming error and panics.
    pub fn contains(&self, e: &GroupElement) -> bool {
        let r = self.ambient_factors.len();
        assert_eq!(
            e.len(),
            r,
            "element has {} coordinates but ambient rank is {r}",
            e.len()
        );
        // Any lift works since the relation lattice lies inside the basis
        // lattice; solve y * H = lift(e) over Z column by column.
        let mut v: Vec<BigInt> = e.coords().to_vec();
        for i in 0..r {
            let (q, rem) = v[i].div_mod_floor(&self.basis[(i, i)]);
            if !rem.is_zero() {
                return false;
            }
            if !q.is_zero() {
                for j in i..r {
                    let t = &q * &self.basis[(i, j)];
                    v[j] -= t;
                }
            }
        }
        debug_assert!(v.iter().all(Zero::is_zero));
        true
    }

    /// Generators of the subgroup inside the ambient group: the basis rows
    /// reduced mod the relations, with zero rows dropped.
    pub fn generators(&self, group: &FiniteAbelianGroup) -> Vec<GroupElement> {
        assert_eq!(group.factors(), self.ambient_factors.as_slice());
        (0..self.basis.rows())
            .map(|i| group.reduce(&self.basis.row(i)))
            .filter(|g| !g.is_zero())
            .collect()
    }

    /// Iterates every element of the subgroup exactly once.
    ///
    /// Representatives are `sum_i c_i * basis_row_i mod relations` with
    /// `0 <= c_i < t_i / h_ii`; triangularity makes these pairwise distinct.
    pub fn elements<'a>(
        &'a self,
        group: &'a FiniteAbelianGroup,
    ) -> impl Iterator<Item = GroupElement> + 'a {
        assert_eq!(group.factors(), self.ambient_factors.as_slice());
        let r = self.ambient_factors.len();
        let limits: Vec<BigInt> = (0..r)
            .map(|i| &self.ambient_factors[i] / &self.basis[(i, i)])
            .collect();
        let mut counter: Option<Vec<BigInt>> = Some(vec![BigInt::zero(); r]);
        std::iter::from_fn(move || {
            let c = counter.take()?;
            let mut coords = vec![BigInt::zero(); r];
            for i in 0..r {
                if c[i].is_zero() {
                    continue;
                }
                for j in 0..r {
                    coords[j] += &c[i] * &self.basis[(i, j)];
                }
            }
            let elem = group.reduce(&coords);
            let mut c = c;
            let mut i = r;
            loop {
                if i == 0 {
                    counter = None;
                    break;
                }
                i -= 1;
                c[i] += 1;
                if c[i] < limits[i] {
                    counter = Some(c);
                    break;
                }
                c[i] = BigInt::zero();
            }
            Some(elem)
        })
    }

    /// True if every element of `self` lies in `other` (same ambient).
    pub fn is_contained_in(&self, other: &Subgroup, group: &FiniteAbelianGroup) -> bool {
        assert!(self.same_ambient(other));
        self.generators(group).iter().all(|g| other.contains(g))
    }

    /// The subgroup generated by `self` and `other` together.
    pub fn join(&self, other: &Subgroup, group: &FiniteAbelianGroup) -> Subgroup {
        assert!(self.same_ambient(other));
        let mut gens = self.generators(group);
        gens.extend(other.generators(group));
        Subgroup::from_generators(group, &gens)
    }
}

impl PartialOrd for Subgroup {
    fn partial_cmp(&self, other: &Subgroup) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Deterministic total order: ambient first, then the canonical basis
/// entries row-major. Used to fix enumeration output order.
impl Ord for Subgroup {
    fn cmp(&self, other: &Subgroup) -> Ordering {
        self.ambient_factors
            .cmp(&other.ambient_factors)
            .then_with(|| {
                let r = self.ambient_factors.len();
                for i in 0..r {
                    for j in 0..r {
                        let c = self.basis[(i, j)].cmp(&other.basis[(i, j)]);
                        if c != Ordering::Equal {
                            return c;
                        }
                    }
                }
                Ordering::Equal
            })
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // Display the generators it contributes over the relation lattice.
        let group = FiniteAbelianGroup::new(self.ambient_factors.clone())
            .expect("stored ambient factors are valid");
        let gens = self.generators(&group);
        if gens.is_empty() {
            return write!(f, "<0>");
        }
        write!(f, "<")?;
        for (i, g) in gens.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{g}")?;
        }
        write!(f, ">")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z3_6() -> FiniteAbelianGroup {
        FiniteAbelianGroup::elementary(3, 6)
    }

    #[test]
    fn canonical_form_ignores_generator_presentation() {
        let g = z3_6();
        let x = g.element(&[1, 0, 0, 1, 0, 0]);
        let y = g.element(&[0, 1, 0, 0, 1, 0]);
        let z = g.element(&[0, 0, 1, 0, 0, 1]);
        let s1 = Subgroup::from_generators(&g, &[x.clone(), y.clone(), z.clone()]);
        // shuffled, scaled, and with redundant sums thrown in
        let s2 = Subgroup::from_generators(
            &g,
            &[
                g.scale(&BigInt::from(2), &z),
                g.add(&x, &y),
                y.clone(),
                g.add(&g.add(&x, &y), &z),
            ],
        );
        assert_eq!(s1, s2);
        assert_eq!(s1.order(), &BigInt::from(27));
        assert_eq!(s1.index(), BigInt::from(27));
    }

    #[test]
    fn membership_matches_brute_force_closure() {
        let g = FiniteAbelianGroup::new(vec![BigInt::from(2), BigInt::from(4), BigInt::from(8)])
            .unwrap();
        let gens = [g.element(&[1, 2, 0]), g.element(&[0, 0, 4])];
        let s = Subgroup::from_generators(&g, &gens);
        // brute-force closure oracle
        let mut closure = std::collections::BTreeSet::new();
        closure.insert(g.zero());
        loop {
            let mut grew = false;
            let snapshot: Vec<_> = closure.iter().cloned().collect();
            for a in &snapshot {
                for gen in &gens {
                    if closure.insert(g.add(a, gen)) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        assert_eq!(BigInt::from(closure.len()), *s.order());
        for e in g.elements() {
            assert_eq!(s.contains(&e), closure.contains(&e), "element {e}");
        }
        // elements() agrees with the closure
        let listed: std::collections::BTreeSet<_> = s.elements(&g).collect();
        assert_eq!(listed, closure);
    }

    #[test]
    fn trivial_and_whole_subgroups() {
        let g = z3_6();
        let t = Subgroup::trivial(&g);
        let w = Subgroup::whole(&g);
        assert_eq!(t.order(), &BigInt::from(1));
        assert_eq!(w.order(), &BigInt::from(729));
        assert!(t.contains(&g.zero()));
        assert!(!t.contains(&g.element(&[1, 0, 0, 0, 0, 0])));
        assert!(t.generators(&g).is_empty());
        assert!(t.is_contained_in(&w, &g));
        assert!(!w.is_contained_in(&t, &g));
        assert_eq!(t.elements(&g).count(), 1);
        assert_eq!(w.join(&t, &g), w);
    }

    #[test]
    fn element_listing_is_exact_and_duplicate_free() {
        let g = FiniteAbelianGroup::new(vec![BigInt::from(4), BigInt::from(4)]).unwrap();
        let s = Subgroup::from_generators(&g, &[g.element(&[1, 2])]);
        let listed: Vec<_> = s.elements(&g).collect();
        let set: std::collections::BTreeSet<_> = listed.iter().cloned().collect();
        assert_eq!(BigInt::from(listed.len()), *s.order());
        assert_eq!(set.len(), listed.len(), "no duplicates");
        for e in &listed {
            assert!(s.contains(e));
        }
    }

    #[test]
    fn mixed_torsion_subgroup_order() {
        // In Z/2 x Z/6, the diagonal (1,3) generates an order-2 subgroup.
        let g = FiniteAbelianGroup::new(vec![BigInt::from(2), BigInt::from(6)]).unwrap();
        let s = Subgroup::from_generators(&g, &[g.element(&[1, 3])]);
        assert_eq!(s.order(), &BigInt::from(2));
        assert!(s.contains(&g.element(&[1, 3])));
        assert!(!s.contains(&g.element(&[1, 0])));
    }

    #[test]
    fn subgroup_display_lists_generators() {
        let g = FiniteAbelianGroup::elementary(3, 2);
        let s = Subgroup::from_generators(&g, &[g.element(&[1, 1])]);
        assert_eq!(s.to_string(), "<(1,1)>");
        assert_eq!(Subgroup::trivial(&g).to_string(), "<0>");
    }
}
