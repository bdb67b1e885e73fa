use std::collections::HashMap;

use serde::Serialize;

use super::types::{
    appearance_order, display_names, ordered_alternatives, prettify, render_alternative,
};
use crate::frontend::Pred;
use crate::setexpr::{EquationSystem, SetExpr, Var};
use crate::solver::{Analysis, NonEmpty};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ArgReport {
    pub position: usize,
    pub type_symbol: String,
    pub any: bool,
    pub empty: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeDef {
    pub symbol: String,
    pub alternatives: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ReportStats {
    pub descriptors: usize,
    pub non_any: usize,
    pub empty_detected: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PredicateReport {
    pub predicate: String,
    pub arity: usize,
    pub args: Vec<ArgReport>,
    pub types: Vec<TypeDef>,
    pub parameters: Vec<String>,
    pub stats: ReportStats,
    #[serde(skip)]
    pub text: String,
}

/// Types and precision flags for a set of predicates.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct TypeReport {
    pub predicates: Vec<PredicateReport>,
}

impl TypeReport {
    pub fn stats(&self) -> ReportStats {
        let mut s = ReportStats::default();
        for p in &self.predicates {
            s.descriptors += p.stats.descriptors;
            s.non_any += p.stats.non_any;
            s.empty_detected += p.stats.empty_detected;
        }
        s
    }

    pub fn get(&self, name: &str, arity: usize) -> Option<&PredicateReport> {
        self.predicates
            .iter()
            .find(|p| p.predicate == name && p.arity == arity)
    }

    /// `:- type` lines for every predicate, each block headed by a comment.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for p in &self.predicates {
            let syms: Vec<&str> = p.args.iter().map(|a| a.type_symbol.as_str()).collect();
            if syms.is_empty() {
                out.push_str(&format!("% {}\n", p.predicate));
            } else {
                out.push_str(&format!("% {}({})\n", p.predicate, syms.join(",")));
            }
            out.push_str(&p.text);
        }
        out
    }
}

/// Reports one predicate from its solved, projected system. Names for
/// parameters come from `names`, which should cover the whole component
/// so that shared parameters keep one name.
pub fn predicate_report(
    pred: &Pred,
    sig: &[Var],
    sys: &EquationSystem,
    names: &HashMap<Var, String>,
) -> PredicateReport {
    let ne = NonEmpty::compute(sys);
    let args: Vec<ArgReport> = sig
        .iter()
        .enumerate()
        .map(|(i, v)| ArgReport {
            position: i + 1,
            type_symbol: names[v].clone(),
            any: !sys.defines(*v) && !sys.iter().any(|(_, e)| e.vars().contains(v)),
            empty: ne.is_empty(*v),
        })
        .collect();
    let order = appearance_order(sys, sig);
    let types = order
        .iter()
        .filter(|v| sig.contains(v) || sys.defines(**v))
        .map(|v| TypeDef {
            symbol: names[v].clone(),
            alternatives: match sys.get(*v) {
                None | Some(SetExpr::Empty) => Vec::new(),
                Some(e) => ordered_alternatives(e)
                    .into_iter()
                    .map(|d| render_alternative(d, names))
                    .collect(),
            },
        })
        .collect();
    let parameters = order
        .iter()
        .filter(|v| !sys.defines(**v))
        .map(|v| names[v].clone())
        .collect();
    let stats = ReportStats {
        descriptors: sig.len(),
        non_any: args.iter().filter(|a| !a.any).count(),
        empty_detected: args.iter().filter(|a| a.empty).count(),
    };
    PredicateReport {
        predicate: pred.name.clone(),
        arity: pred.arity,
        args,
        types,
        parameters,
        stats,
        text: prettify(sys, sig, names),
    }
}

/// Builds the report for `preds` (all analyzed predicates when `None`),
/// in plan order.
pub fn classify(analysis: &Analysis, preds: Option<&[Pred]>) -> TypeReport {
    let mut out = TypeReport::default();
    for scc in &analysis.sccs {
        let names = display_names(&scc.projection.system, &scc.roots, &analysis.vars);
        for p in &scc.preds {
            if preds.is_some_and(|ps| !ps.contains(p)) {
                continue;
            }
            let sol = &analysis.solutions[p];
            out.predicates
                .push(predicate_report(p, &sol.sig, &sol.system, &names));
        }
    }
    out
}
