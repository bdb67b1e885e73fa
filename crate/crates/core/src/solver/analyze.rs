use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::generate::{GenError, SccEquations, Solution};
use super::solve::{solve, SolveConfig, SolveError, SolveStats, Trace};
use crate::callgraph::{build_call_graph, condense_and_level, CallGraph, LevelPlan};
use crate::frontend::{make_signatures, Pred, Program, Signature};
use crate::report::{project, Projection};
use crate::setexpr::{EquationSystem, Memo, Var, VarTable};

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error("while solving {{{scc}}}: {source}")]
    Solve {
        scc: String,
        #[source]
        source: SolveError,
    },
}

/// Everything computed for one strongly connected component.
#[derive(Clone, Debug)]
pub struct SccResult {
    pub preds: Vec<Pred>,
    pub roots: Vec<Var>,
    pub initial: EquationSystem,
    pub top_level: EquationSystem,
    pub solved: EquationSystem,
    pub projection: Projection,
    pub failed: BTreeSet<usize>,
    pub restarts: usize,
    pub memo: Memo,
    pub stats: SolveStats,
}

#[derive(Clone, Debug)]
pub struct Analysis {
    pub program: Program,
    pub vars: VarTable,
    pub signatures: BTreeMap<Pred, Signature>,
    pub graph: CallGraph,
    pub plan: LevelPlan,
    pub sccs: Vec<SccResult>,
    pub solutions: BTreeMap<Pred, Solution>,
    /// Clauses found to have no solutions.
    pub failed: BTreeSet<usize>,
}

impl Analysis {
    pub fn scc_of(&self, p: &Pred) -> Option<&SccResult> {
        self.sccs.iter().find(|s| s.preds.contains(p))
    }
}

/// Analyzes a renamed, head-normalized program bottom-up over its call
/// graph. Each component is solved, restarted without its failed clauses
/// while new failures show up, and projected onto its signatures.
pub fn analyze(
    program: &Program,
    config: &SolveConfig,
    trace: Trace<'_>,
) -> Result<Analysis, AnalysisError> {
    let mut vars = VarTable::new();
    let signatures = make_signatures(program, &mut vars);
    let graph = build_call_graph(program);
    let plan = condense_and_level(&graph);
    let mut solutions = BTreeMap::new();
    let mut sccs = Vec::new();
    let mut failed_all = BTreeSet::new();

    for preds in plan.sccs() {
        let name = preds
            .iter()
            .map(Pred::to_string)
            .collect::<Vec<_>>()
            .join(", ");
        trace(&format!("component {{{name}}}"));
        let eqs = SccEquations::build(program, preds, &signatures, &solutions, &mut vars)?;
        let roots: Vec<Var> = preds
            .iter()
            .flat_map(|p| eqs.signature(p).to_vec())
            .collect();
        let mut failed = BTreeSet::new();
        let mut restarts = 0;
        let res = loop {
            let top = eqs.top_level(&failed);
            let res = solve(
                &top,
                &roots,
                &eqs.info,
                &failed,
                &mut vars,
                config,
                &mut *trace,
            )
            .map_err(|source| AnalysisError::Solve {
                scc: name.clone(),
                source,
            })?;
            if res.restart {
                failed.extend(res.failed.iter().copied());
                restarts += 1;
                continue;
            }
            break res;
        };
        failed.extend(res.failed.iter().copied());
        failed_all.extend(failed.iter().copied());

        let projection = project(&res.solved, &roots, &mut vars);
        for p in preds {
            let sig = eqs.signature(p).to_vec();
            let keep = projection.system.reachable(sig.iter().copied());
            solutions.insert(
                p.clone(),
                Solution {
                    sig,
                    system: projection.system.restrict(&keep),
                },
            );
        }
        sccs.push(SccResult {
            preds: preds.clone(),
            roots,
            initial: eqs.initial(&failed),
            top_level: eqs.top_level(&failed),
            solved: res.solved,
            projection,
            failed,
            restarts,
            memo: res.memo,
            stats: res.stats,
        });
    }

    Ok(Analysis {
        program: program.clone(),
        vars,
        signatures,
        graph,
        plan,
        sccs,
        solutions,
        failed: failed_all,
    })
}
