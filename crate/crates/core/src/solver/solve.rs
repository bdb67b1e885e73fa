use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use super::bind::{bind, BindState, Synthesis};
use super::case::{case_reduce, CaseError};
use super::emptiness::NonEmpty;
use super::generate::ClauseInfo;
use crate::setexpr::{
    simp, EquationSystem, Memo, Origin, Provenance, SetExpr, SimpContext, Var, VarTable,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SolveConfig {
    pub max_iterations: usize,
    pub bind: bool,
    pub propagate_failure: bool,
    pub bind_dnf_limit: usize,
    pub synthesis: Synthesis,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            max_iterations: 100,
            bind: true,
            propagate_failure: true,
            bind_dnf_limit: 4096,
            synthesis: Synthesis::default(),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("solver did not finish within {limit} iterations; state:\n{state}")]
    IterationLimit { limit: usize, state: String },
    #[error(transparent)]
    Case(#[from] CaseError),
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SolveStats {
    pub iterations: usize,
    pub steps: usize,
    pub base_vars: usize,
    pub memo_entries: usize,
    pub bind_rounds: usize,
    pub bindings: usize,
    pub bind_overflow: bool,
}

#[derive(Clone, Debug)]
pub struct SolveResult {
    pub solved: EquationSystem,
    pub memo: Memo,
    pub provenance: Provenance,
    /// Clauses with an empty variable in the final system.
    pub failed: BTreeSet<usize>,
    /// Set when solving stopped early because clauses not in `known_failed`
    /// failed; the caller regenerates without them.
    pub restart: bool,
    pub stats: SolveStats,
}

/// Sink for one-line progress messages.
pub type Trace<'a> = &'a mut dyn FnMut(&str);

/// Clauses whose variables include one with an empty equation in `s`.
pub fn failed_clauses(s: &EquationSystem, clauses: &[ClauseInfo]) -> BTreeSet<usize> {
    clauses
        .iter()
        .filter(|c| {
            c.vars
                .iter()
                .any(|v| s.get(*v).is_some_and(SetExpr::is_empty_set))
        })
        .map(|c| c.clause)
        .collect()
}

/// Empties the head variables of every clause that has an empty variable
/// and returns the clauses that were not already in `known`.
pub fn propagate_failure(
    s: &mut EquationSystem,
    clauses: &[ClauseInfo],
    known: &BTreeSet<usize>,
) -> BTreeSet<usize> {
    let failed = failed_clauses(s, clauses);
    for c in clauses.iter().filter(|c| failed.contains(&c.clause)) {
        for &y in &c.head_vars {
            if let Some(e) = s.get_mut(y) {
                *e = SetExpr::Empty;
            }
        }
    }
    failed.difference(known).copied().collect()
}

struct State<'a> {
    e: VecDeque<(Var, SetExpr)>,
    c: EquationSystem,
    s: EquationSystem,
    memo: Memo,
    provenance: Provenance,
    vars: &'a mut VarTable,
}

impl State<'_> {
    fn simp(&mut self, x: Var, rhs: &SetExpr) -> SetExpr {
        let mut ctx = SimpContext {
            vars: self.vars,
            memo: &mut self.memo,
            provenance: &mut self.provenance,
        };
        let (q, new) = simp(x, rhs, &mut ctx, &self.s);
        for (m, e) in new {
            self.c.insert(m, e);
        }
        q
    }

    fn dump(&self) -> String {
        let mut out = String::from("E:\n");
        for (x, e) in &self.e {
            out.push_str(&format!(
                "  {} = {}.\n",
                self.vars.name(*x),
                e.display(self.vars)
            ));
        }
        out.push_str("S:\n");
        for (x, e) in self.s.iter() {
            out.push_str(&format!(
                "  {} = {}.\n",
                self.vars.name(x),
                e.display(self.vars)
            ));
        }
        out
    }
}

/// Solves a top-level system `eqp` with signature variables `roots` into
/// leaf-linear form.
///
/// Runs the main subtraction loop (FIFO on `eqp`), the emptiness loop,
/// failure propagation, the update of auxiliary equations and, when
/// nothing is left, binding of free variables. With failure propagation
/// enabled the solve stops as soon as a clause outside `known_failed`
/// fails, reporting `restart`.
pub fn solve(
    eqp: &EquationSystem,
    roots: &[Var],
    clauses: &[ClauseInfo],
    known_failed: &BTreeSet<usize>,
    vars: &mut VarTable,
    config: &SolveConfig,
    trace: Trace<'_>,
) -> Result<SolveResult, SolveError> {
    let mut provenance = Provenance::new();
    for x in eqp.lhs() {
        provenance.record(x, Origin::Original);
    }
    let generated: BTreeSet<Var> = clauses
        .iter()
        .flat_map(|c| c.vars.iter().copied())
        .collect();
    let mut originals: Vec<Var> = eqp.lhs().filter(|x| generated.contains(x)).collect();
    let mut stats = SolveStats {
        base_vars: {
            let mut all: BTreeSet<Var> = eqp.lhs().collect();
            all.extend(eqp.free_vars());
            all.len()
        },
        ..SolveStats::default()
    };
    let mut st = State {
        e: eqp.iter().map(|(x, e)| (x, e.clone())).collect(),
        c: EquationSystem::new(),
        s: EquationSystem::new(),
        memo: Memo::new(),
        provenance,
        vars,
    };
    let mut bind_state = BindState {
        pinned: clauses
            .iter()
            .flat_map(|c| c.pinned.iter().copied())
            .collect(),
        owner: clauses
            .iter()
            .flat_map(|c| c.local.iter().map(|v| (*v, c.clause)))
            .collect(),
        roots: roots.iter().copied().collect(),
        ..BindState::default()
    };

    loop {
        stats.iterations += 1;
        if stats.iterations > config.max_iterations {
            return Err(SolveError::IterationLimit {
                limit: config.max_iterations,
                state: st.dump(),
            });
        }
        st.c = EquationSystem::new();

        while let Some((x, q)) = st.e.pop_front() {
            stats.steps += 1;
            let q1 = st.simp(x, &q);
            let (q2, rule) = case_reduce(x, &q1)?;
            trace(&format!(
                "select {} = {} | simp {} | case {} | subst {} = {}",
                st.vars.name(x),
                q.display(st.vars),
                q1.display(st.vars),
                rule.map_or("-".to_string(), |r| r.number().to_string()),
                st.vars.name(x),
                q2.display(st.vars),
            ));
            for (_, e) in st.e.iter_mut() {
                if e.occurs_top_level(x) {
                    *e = e.subst_top_level(x, &q2);
                }
            }
            st.s.subst_top_level(x, &q2);
            st.s.insert(x, q2);
        }

        loop {
            let lhs: Vec<Var> = st.s.lhs().collect();
            for x in lhs {
                let rhs = st.s.get(x).cloned().expect("lhs of S");
                let q = st.simp(x, &rhs);
                st.s.insert(x, q);
            }
            let ne = NonEmpty::compute(&st.s);
            let emptied: Vec<Var> = ne
                .empty_vars()
                .filter(|v| !st.s.get(*v).is_some_and(SetExpr::is_empty_set))
                .collect();
            if emptied.is_empty() {
                break;
            }
            for x in emptied {
                trace(&format!("empty {}", st.vars.name(x)));
                st.s.insert(x, SetExpr::Empty);
            }
        }

        if config.propagate_failure {
            let new = propagate_failure(&mut st.s, clauses, known_failed);
            if !new.is_empty() {
                trace(&format!("failed clauses {new:?}; restarting"));
                stats.memo_entries = st.memo.len();
                return Ok(SolveResult {
                    failed: failed_clauses(&st.s, clauses),
                    solved: st.s,
                    memo: st.memo,
                    provenance: st.provenance,
                    restart: true,
                    stats,
                });
            }
        }

        let solved: Vec<(Var, SetExpr)> = st.s.iter().map(|(x, e)| (x, e.clone())).collect();
        for (x, e) in &solved {
            st.c.subst_top_level(*x, e);
        }
        let c = std::mem::take(&mut st.c);
        st.e.extend(c);

        if st.e.is_empty() {
            if !config.bind {
                break;
            }
            let out = bind(
                &st.s,
                &st.provenance,
                &originals,
                &mut bind_state,
                st.vars,
                config.bind_dnf_limit,
                config.synthesis,
            );
            if out.equations.is_empty() {
                break;
            }
            if !out.formula.clauses.is_empty() {
                trace(&format!("bind formula {}", out.formula.display(st.vars)));
            }
            stats.bind_rounds += 1;
            stats.bindings += out.equations.len();
            stats.bind_overflow |= out.overflow;
            for (x, e) in out.equations {
                trace(&format!(
                    "bind {} = {}",
                    st.vars.name(x),
                    e.display(st.vars)
                ));
                st.provenance.record(x, Origin::Bound);
                originals.push(x);
                st.e.push_back((x, e));
            }
        }
    }

    stats.memo_entries = st.memo.len();
    Ok(SolveResult {
        failed: failed_clauses(&st.s, clauses),
        solved: st.s,
        memo: st.memo,
        provenance: st.provenance,
        restart: false,
        stats,
    })
}
