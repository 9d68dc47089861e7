//! The rational-homology-ball obstruction.
//!
//! If a rational homology sphere bounds a rational homology 4-ball `W`
//! with `H₂(W) = 0`, the kernel of the inclusion on first homology is a
//! Lagrangian `L` for the linking form, and the triple form vanishes
//! identically on `L`. Reading that contrapositively, each Lagrangian on
//! which the triple form does *not* vanish is ruled out as such a kernel;
//! if no Lagrangian survives, the manifold bounds no such ball at all,
//! and if the linking form has no Lagrangians in the first place, the
//! classical square-order obstruction already applies.
//!
//! [`obstruct`] evaluates the triple form on every Lagrangian and reports
//! one verdict row per Lagrangian plus the overall summary.

use std::fmt;

use crate::abelian::Subgroup;
use crate::linking::LinkingError;
use crate::triple::{TripleError, TripleForm};

/// Suffix of the per-Lagrangian verdict: the manifold cannot bound a ball
/// whose inclusion kernel is this particular Lagrangian.
pub const CONTRAPOSITIVE_VERDICT: &str =
    "cannot bound a rational homology 4-ball W with H₂(W)=0 realizing L";

/// Suffix of the overall verdict when no Lagrangian survives.
pub const STRONG_VERDICT: &str = "bounds no rational homology 4-ball with H₂(W)=0 at all";

#[derive(Debug, thiserror::Error)]
pub enum ObstructError {
    #[error(transparent)]
    Linking(#[from] LinkingError),
    #[error(transparent)]
    Triple(#[from] TripleError),
}

/// One Lagrangian together with whether the triple form vanishes on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LagrangianVerdict {
    pub lagrangian: Subgroup,
    pub vanishes: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObstructionSummary {
    /// At least one Lagrangian survives; the obstruction is inconclusive
    /// overall, though each non-surviving Lagrangian is still ruled out.
    SomeLagrangianVanishes,
    /// Lagrangians exist and the triple form is nonzero on every one:
    /// the manifold bounds no rational homology ball with `H₂ = 0`.
    NoLagrangianVanishes,
    /// The linking form has no Lagrangians; the square-order obstruction
    /// applies before the triple form is ever consulted.
    NoLagrangiansExist,
}

impl fmt::Display for ObstructionSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ObstructionSummary::SomeLagrangianVanishes => "SomeLagrangianVanishes",
            ObstructionSummary::NoLagrangianVanishes => "NoLagrangianVanishes",
            ObstructionSummary::NoLagrangiansExist => "NoLagrangiansExist",
        })
    }
}

/// The full result: one row per Lagrangian, in the canonical enumeration
/// order, plus the overall summary.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ObstructionVerdict {
    pub rows: Vec<LagrangianVerdict>,
    pub summary: ObstructionSummary,
}

impl ObstructionVerdict {
    /// The verdict row for a specific subgroup, if it is one of the
    /// enumerated Lagrangians.
    pub fn row_for(&self, lagrangian: &Subgroup) -> Option<&LagrangianVerdict> {
        self.rows.iter().find(|row| &row.lagrangian == lagrangian)
    }
}

/// Evaluates the obstruction for a triple form (on its own linking form).
pub fn obstruct(triple: &TripleForm) -> Result<ObstructionVerdict, ObstructError> {
    let lagrangians = triple.linking_form().enumerate_lagrangians()?;
    let mut rows = Vec::with_capacity(lagrangians.len());
    for lagrangian in lagrangians {
        let vanishes = triple.vanishes_on(&lagrangian)?;
        rows.push(LagrangianVerdict { lagrangian, vanishes });
    }
    let summary = summarize(&rows);
    Ok(ObstructionVerdict { rows, summary })
}

fn summarize(rows: &[LagrangianVerdict]) -> ObstructionSummary {
    if rows.is_empty() {
        ObstructionSummary::NoLagrangiansExist
    } else if rows.iter().any(|row| row.vanishes) {
        ObstructionSummary::SomeLagrangianVanishes
    } else {
        ObstructionSummary::NoLagrangianVanishes
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::Subgroup;
    use crate::linking::diagonal_linking_form;
    use crate::model::ManifoldModel;
    use crate::triple::TripleForm;

    #[test]
    fn m0_rules_out_the_diagonal_lagrangian_but_not_all_of_them() {
        let model = ManifoldModel::m0();
        let verdict = obstruct(model.triple().unwrap()).unwrap();
        assert_eq!(verdict.rows.len(), 80);
        assert_eq!(verdict.summary, ObstructionSummary::SomeLagrangianVanishes);

        let group = model.group();
        let span = |names: [&str; 3]| {
            let gens: Vec<_> = names.iter().map(|n| model.element(n).unwrap().clone()).collect();
            Subgroup::from_generators(group, &gens)
        };

        // The diagonal classes span a Lagrangian the triple form does not
        // vanish on, so no ball can realize it as the inclusion kernel.
        let diagonal = span(["x", "y", "z"]);
        assert!(model.form().is_lagrangian(&diagonal).unwrap());
        let row = verdict.row_for(&diagonal).expect("the diagonal span is enumerated");
        assert!(!row.vanishes);

        // The distinguished classes l1, l2, l3 span a surviving Lagrangian.
        let surviving = span(["l1", "l2", "l3"]);
        let row = verdict.row_for(&surviving).expect("the l-span is enumerated");
        assert!(row.vanishes);
    }

    #[test]
    fn verdict_rows_match_direct_evaluation() {
        let model = ManifoldModel::m0();
        let triple = model.triple().unwrap();
        let verdict = obstruct(triple).unwrap();
        for row in &verdict.rows {
            assert_eq!(row.vanishes, triple.vanishes_on(&row.lagrangian).unwrap());
        }
    }

    #[test]
    fn forms_of_non_square_order_have_no_lagrangians() {
        let (lens, _) = diagonal_linking_form(&[-3]).unwrap();
        let verdict = obstruct(&TripleForm::zero(lens)).unwrap();
        assert!(verdict.rows.is_empty());
        assert_eq!(verdict.summary, ObstructionSummary::NoLagrangiansExist);
    }

    #[test]
    fn summary_covers_all_three_branches() {
        let model = ManifoldModel::m0();
        let verdict = obstruct(model.triple().unwrap()).unwrap();
        let some_lagrangian = verdict.rows[0].lagrangian.clone();

        assert_eq!(summarize(&[]), ObstructionSummary::NoLagrangiansExist);
        assert_eq!(
            summarize(&[LagrangianVerdict { lagrangian: some_lagrangian.clone(), vanishes: false }]),
            ObstructionSummary::NoLagrangianVanishes
        );
        assert_eq!(
            summarize(&[
                LagrangianVerdict { lagrangian: some_lagrangian.clone(), vanishes: false },
                LagrangianVerdict { lagrangian: some_lagrangian, vanishes: true },
            ]),
            ObstructionSummary::SomeLagrangianVanishes
        );
    }

    #[test]
    fn summary_tokens_are_stable() {
        assert_eq!(ObstructionSummary::SomeLagrangianVanishes.to_string(), "SomeLagrangianVanishes");
        assert_eq!(ObstructionSummary::NoLagrangianVanishes.to_string(), "NoLagrangianVanishes");
        assert_eq!(ObstructionSummary::NoLagrangiansExist.to_string(), "NoLagrangiansExist");
    }
}
