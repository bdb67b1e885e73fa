use thiserror::Error;

use crate::setexpr::{SetExpr, Var};

/// Which recurrence shape was reduced.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseRule {
    /// `x = x` to `x = 0`.
    SelfAlias,
    /// `x = x /\ e` to `x = 0`.
    Inter,
    /// `x = x \/ e` to `x = e`.
    Union,
    /// `x = (x /\ e1) \/ e2` to `x = e2`.
    Mixed,
}

impl CaseRule {
    pub fn number(self) -> u8 {
        match self {
            CaseRule::SelfAlias => 1,
            CaseRule::Inter => 2,
            CaseRule::Union => 3,
            CaseRule::Mixed => 4,
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CaseError {
    #[error("recurrence for variable {0:?} is not in disjunctive normal form")]
    NotDnf(Var),
}

/// Reduces a recurrence `x = e` (with `e` in DNF) to its least solution by
/// dropping every disjunct that has `x` as a conjunct. Non-recurrences are
/// returned unchanged with no rule.
pub fn case_reduce(x: Var, rhs: &SetExpr) -> Result<(SetExpr, Option<CaseRule>), CaseError> {
    if !rhs.occurs_top_level(x) {
        return Ok((rhs.clone(), None));
    }
    let xe = SetExpr::Var(x);
    let mut kept = Vec::new();
    let mut plain = false;
    let mut factored = false;
    for d in rhs.disjuncts() {
        match d {
            SetExpr::Var(v) if *v == x => plain = true,
            SetExpr::Inter(ops) if ops.contains(&xe) => factored = true,
            SetExpr::Inter(ops) if ops.iter().any(|o| o.occurs_top_level(x)) => {
                return Err(CaseError::NotDnf(x))
            }
            SetExpr::Union(_) => return Err(CaseError::NotDnf(x)),
            other => kept.push(other.clone()),
        }
    }
    let rule = match (kept.is_empty(), plain, factored) {
        (true, true, false) => CaseRule::SelfAlias,
        (true, _, _) => CaseRule::Inter,
        (false, true, false) => CaseRule::Union,
        (false, _, _) => CaseRule::Mixed,
    };
    Ok((SetExpr::union(kept), Some(rule)))
}
