//! The torsion linking form `lambda_2` on a finite abelian group.
//!
//! A form is stored by its Gram matrix on the invariant-factor generators.
//! Construction validates symmetry, well-definedness (each Gram entry is
//! annihilated by the orders of both generators it pairs), and
//! nondegeneracy; a linking form of a rational homology sphere always
//! satisfies all three, so a failure means the input data does not describe
//! such a manifold.
//!
//! From a surgery presentation `A` (symmetric, nonsingular) the form on
//! `coker(A)` is the classical `-A^{-1}` pairing of the meridians, carried
//! to invariant-factor coordinates along the Smith decomposition.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::abelian::{
    cokernel_presentation, smith_normal_form, FiniteAbelianGroup, GroupElement, IntMatrix,
    Subgroup,
};

use super::rational::QmodZ;
use super::LinkingError;

/// Largest group order for which construction-time nondegeneracy checking
/// (and thus the general enumeration path) stays brute-force tractable.
pub const MAX_FORM_ORDER: u64 = 1_000_000;

/// A nondegenerate symmetric bilinear form `G x G -> Q/Z`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinkingForm {
    group: FiniteAbelianGroup,
    /// Gram matrix on the invariant-factor generators, `gram[i][j] =
    /// lambda_2(e_i, e_j)`.
    gram: Vec<Vec<QmodZ>>,
}

impl LinkingForm {
    /// Builds and fully validates a linking form.
    pub fn new(group: FiniteAbelianGroup, gram: Vec<Vec<QmodZ>>) -> Result<Self, LinkingError> {
        let r = group.rank();
        if gram.len() != r || gram.iter().any(|row| row.len() != r) {
            return Err(LinkingError::GramShape {
                rank: r,
                rows: gram.len(),
            });
        }
        for i in 0..r {
            for j in 0..i {
                if gram[i][j] != gram[j][i] {
                    return Err(LinkingError::NonSymmetric);
                }
            }
        }
        // Well-definedness: lambda(t_i e_i, e_j) = 0 forces t_i g_ij = 0,
        // and symmetrically for t_j.
        for i in 0..r {
            for j in 0..r {
                let t = &group.factors()[i.min(j)]; // divides the other factor
                if !gram[i][j].annihilated_by(t) {
                    return Err(LinkingError::NotWellDefined {
                        i,
                        j,
                        value: gram[i][j].to_string(),
                        modulus: t.to_string(),
                    });
                }
            }
        }
        if group.order() > BigInt::from(MAX_FORM_ORDER) {
            return Err(LinkingError::GroupTooLarge {
                order: group.order().to_string(),
                max: MAX_FORM_ORDER,
            });
        }
        let form = LinkingForm { group, gram };
        // Nondegeneracy by brute force: the adjoint map x -> lambda(x, .)
        // must have trivial kernel; generators suffice as test functionals.
        if let Some(x) = form.radical_witness() {
            return Err(LinkingError::Degenerate {
                witness: x.to_string(),
            });
        }
        Ok(form)
    }

    /// Some nonzero element pairing to zero with the whole group, if any.
    fn radical_witness(&self) -> Option<GroupElement> {
        self.group.elements().skip(1).find(|x| {
            (0..self.group.rank()).all(|j| self.eval_basis(x, j).is_zero())
        })
    }

    /// `lambda_2(x, e_j)` for a basis generator.
    fn eval_basis(&self, x: &GroupElement, j: usize) -> QmodZ {
        let mut acc = QmodZ::zero();
        for (i, c) in x.coords().iter().enumerate() {
            if !c.is_zero() {
                acc = acc.add(&self.gram[i][j].scale(c));
            }
        }
        acc
    }

    pub fn group(&self) -> &FiniteAbelianGroup {
        &self.group
    }

    pub fn gram(&self) -> &[Vec<QmodZ>] {
        &self.gram
    }

    /// Evaluates `lambda_2(x, y)`.
    ///
    /// Elements must be shaped for this form's group; data from another
    /// group is rejected rather than silently reduced.
    pub fn eval(&self, x: &GroupElement, y: &GroupElement) -> Result<QmodZ, LinkingError> {
        let r = self.group.rank();
        if x.len() != r || y.len() != r {
            return Err(LinkingError::GroupMismatch {
                expected: r,
                got: if x.len() != r { x.len() } else { y.len() },
            });
        }
        let x = self.group.reduce(x.coords());
        let y = self.group.reduce(y.coords());
        let mut acc = QmodZ::zero();
        for (i, xi) in x.coords().iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (j, yj) in y.coords().iter().enumerate() {
                if yj.is_zero() {
                    continue;
                }
                acc = acc.add(&self.gram[i][j].scale(&(xi * yj)));
            }
        }
        Ok(acc)
    }

    /// The orthogonal complement `S^perp = { y : lambda_2(s, y) = 0 for all
    /// s in S }`, computed exactly as an integer kernel.
    pub fn orthogonal_complement(&self, s: &Subgroup) -> Result<Subgroup, LinkingError> {
        if s.ambient_factors() != self.group.factors() {
            return Err(LinkingError::GroupMismatch {
                expected: self.group.rank(),
                got: s.ambient_factors().len(),
            });
        }
        let r = self.group.rank();
        let gens = s.generators(&self.group);
        if gens.is_empty() {
            return Ok(Subgroup::whole(&self.group));
        }
        let t = self.group.exponent();
        // Condition on y: for each generator g, sum_j lambda(g, e_j) y_j = 0
        // in Q/Z. Scaling by the exponent t makes each coefficient an
        // integer: M y = 0 (mod t). Solve via the integer kernel of
        // [M | t I]: its projection to the y-block generates the solution
        // group (the relation lattice is inside it automatically).
        let k = gens.len();
        let mut m = IntMatrix::zero(k, r + k);
        for (a, g) in gens.iter().enumerate() {
            for j in 0..r {
                let c = self.eval_basis(g, j);
                // c = num/den with den | t, so t*c is the integer num*(t/den)
                let scaled = c.numer() * (&t / c.denom());
                m[(a, j)] = scaled;
            }
            m[(a, r + a)] = t.clone();
        }
        let snf = smith_normal_form(&m);
        // Kernel basis: columns of V whose diagonal entry is zero (or which
        // lie beyond the diagonal entirely).
        let diag = snf.diagonal();
        let mut kernel_gens: Vec<GroupElement> = Vec::new();
        for col in 0..r + k {
            let in_rank = col < diag.len() && !diag[col].is_zero();
            if in_rank {
                continue;
            }
            let coords: Vec<BigInt> = (0..r).map(|i| snf.v[(i, col)].clone()).collect();
            kernel_gens.push(self.group.reduce(&coords));
        }
        Ok(Subgroup::from_generators(&self.group, &kernel_gens))
    }

    /// True when `L` is a Lagrangian: `L = L^perp` (equivalently for a
    /// nondegenerate form, `|L|^2 = |G|` with `L` isotropic).
    pub fn is_lagrangian(&self, l: &Subgroup) -> Result<bool, LinkingError> {
        if l.ambient_factors() != self.group.factors() {
            return Err(LinkingError::GroupMismatch {
                expected: self.group.rank(),
                got: l.ambient_factors().len(),
            });
        }
        if l.order() * l.order() != self.group.order() {
            return Ok(false);
        }
        Ok(self.orthogonal_complement(l)? == *l)
    }

    /// True when `lambda_2` vanishes identically on `S x S`.
    pub fn is_isotropic(&self, s: &Subgroup) -> Result<bool, LinkingError> {
        let gens = s.generators(&self.group);
        for (a, x) in gens.iter().enumerate() {
            for y in &gens[a..] {
                if !self.eval(x, y)?.is_zero() {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// Builds the linking form of the rational homology sphere presented by a
/// symmetric nonsingular integer matrix `A` (e.g. a surgery linking matrix).
///
/// Returns the form on `coker(A)` in invariant-factor coordinates together
/// with the images of the presentation meridians. The pairing follows the
/// `-A^{-1}` convention: on meridian classes, `lambda_2([e_i], [e_j]) =
/// -(A^{-1})_{ij} mod 1`.
pub fn linking_form_from_matrix(
    a: &IntMatrix,
) -> Result<(LinkingForm, Vec<GroupElement>), LinkingError> {
    if !a.is_square() {
        return Err(LinkingError::Abelian(crate::abelian::AbelianError::NotSquare {
            rows: a.rows(),
            cols: a.cols(),
        }));
    }
    if !a.is_symmetric() {
        return Err(LinkingError::NonSymmetric);
    }
    let det = a.det();
    if det.is_zero() {
        return Err(LinkingError::Abelian(crate::abelian::AbelianError::SingularMatrix));
    }
    let (group, meridians) = cokernel_presentation(a).map_err(LinkingError::Abelian)?;

    // Carry -A^{-1} to the invariant-factor generators: generator epsilon_k
    // is the class of w_k = U^{-1} e_k (restricted to non-unit factors), so
    // gram[k][l] = -w_k^T A^{-1} w_l = -(W^T adj(A) W)_{kl} / det(A).
    let snf = smith_normal_form(a);
    let w = snf.u_inv();
    let gram_int = w.transpose().mul(&a.adjugate()).mul(w);
    let diag = snf.diagonal();
    let kept: Vec<usize> = (0..diag.len()).filter(|&i| !diag[i].is_one()).collect();
    let gram: Vec<Vec<QmodZ>> = kept
        .iter()
        .map(|&i| {
            kept.iter()
                .map(|&j| {
                    QmodZ::from_fraction(-gram_int[(i, j)].clone(), det.clone())
                        .expect("nonzero determinant")
                })
                .collect()
        })
        .collect();
    let form = LinkingForm::new(group, gram)?;
    Ok((form, meridians))
}

/// Convenience: the diagonal form `sum -1/a_i` of a diagonal surgery.
pub fn diagonal_linking_form(framings: &[i64]) -> Result<(LinkingForm, Vec<GroupElement>), LinkingError> {
    let entries: Vec<BigInt> = framings.iter().map(|&f| BigInt::from(f)).collect();
    linking_form_from_matrix(&IntMatrix::diagonal(&entries))
}
