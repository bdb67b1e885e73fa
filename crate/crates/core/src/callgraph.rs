//! Predicate call graph, strongly connected components and bottom-up levels.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;

use crate::frontend::{Pred, Program};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CallGraph {
    pub nodes: BTreeSet<Pred>,
    pub edges: BTreeSet<(Pred, Pred)>,
}

impl CallGraph {
    pub fn successors<'a>(&'a self, p: &'a Pred) -> impl Iterator<Item = &'a Pred> + 'a {
        self.edges
            .iter()
            .filter(move |(a, _)| a == p)
            .map(|(_, b)| b)
    }
}

/// One node per defined predicate, one edge per distinct caller/callee
/// pair. Calls to undefined predicates are left out.
pub fn build_call_graph(p: &Program) -> CallGraph {
    let nodes = p.predicates();
    let mut edges = BTreeSet::new();
    for c in &p.clauses {
        for a in &c.body {
            let callee = a.key();
            if nodes.contains(&callee) {
                edges.insert((c.head.key(), callee));
            }
        }
    }
    CallGraph { nodes, edges }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LevelPlan {
    /// `levels[0]` is level 1. Each SCC is sorted, and SCCs within a level
    /// are ordered by their first predicate.
    pub levels: Vec<Vec<Vec<Pred>>>,
}

impl LevelPlan {
    pub fn sccs(&self) -> impl Iterator<Item = &Vec<Pred>> {
        self.levels.iter().flatten()
    }

    pub fn level_of(&self, p: &Pred) -> Option<usize> {
        self.levels
            .iter()
            .position(|l| l.iter().any(|s| s.contains(p)))
            .map(|i| i + 1)
    }
}

struct Tarjan<'a> {
    succ: &'a [Vec<usize>],
    index: Vec<Option<usize>>,
    low: Vec<usize>,
    on_stack: Vec<bool>,
    stack: Vec<usize>,
    next: usize,
    comps: Vec<Vec<usize>>,
}

impl Tarjan<'_> {
    fn visit(&mut self, v: usize) {
        self.index[v] = Some(self.next);
        self.low[v] = self.next;
        self.next += 1;
        self.stack.push(v);
        self.on_stack[v] = true;
        for &w in &self.succ[v] {
            match self.index[w] {
                None => {
                    self.visit(w);
                    self.low[v] = self.low[v].min(self.low[w]);
                }
                Some(iw) if self.on_stack[w] => self.low[v] = self.low[v].min(iw),
                _ => {}
            }
        }
        if Some(self.low[v]) == self.index[v] {
            let mut comp = Vec::new();
            loop {
                let w = self.stack.pop().expect("tarjan stack");
                self.on_stack[w] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            self.comps.push(comp);
        }
    }
}

/// Strongly connected components of a graph on `0..n`, in reverse
/// topological order (callees before callers).
pub fn tarjan_scc(n: usize, succ: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let mut t = Tarjan {
        succ,
        index: vec![None; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        next: 0,
        comps: Vec::new(),
    };
    for v in 0..n {
        if t.index[v].is_none() {
            t.visit(v);
        }
    }
    t.comps
}

/// Condenses SCCs and assigns each the level 1 + max level of the SCCs it
/// calls.
pub fn condense_and_level(g: &CallGraph) -> LevelPlan {
    let nodes: Vec<&Pred> = g.nodes.iter().collect();
    let idx: BTreeMap<&Pred, usize> = nodes.iter().enumerate().map(|(i, p)| (*p, i)).collect();
    let mut succ = vec![Vec::new(); nodes.len()];
    for (a, b) in &g.edges {
        succ[idx[a]].push(idx[b]);
    }
    let comps = tarjan_scc(nodes.len(), &succ);
    let mut comp_of = vec![0; nodes.len()];
    for (ci, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v] = ci;
        }
    }
    // Tarjan emits callees first, so one pass suffices.
    let mut level = vec![0usize; comps.len()];
    for (ci, c) in comps.iter().enumerate() {
        let mut l = 1;
        for &v in c {
            for &w in &succ[v] {
                if comp_of[w] != ci {
                    l = l.max(level[comp_of[w]] + 1);
                }
            }
        }
        level[ci] = l;
    }
    let depth = level.iter().copied().max().unwrap_or(0);
    let mut levels: Vec<Vec<Vec<Pred>>> = vec![Vec::new(); depth];
    for (ci, c) in comps.iter().enumerate() {
        let mut scc: Vec<Pred> = c.iter().map(|&v| nodes[v].clone()).collect();
        scc.sort();
        levels[level[ci] - 1].push(scc);
    }
    for l in &mut levels {
        l.sort();
    }
    LevelPlan { levels }
}

#[derive(Serialize)]
struct GraphJson {
    nodes: Vec<String>,
    edges: Vec<[String; 2]>,
    sccs: Vec<Vec<String>>,
    levels: Vec<Vec<Vec<String>>>,
}

/// JSON document with `nodes`, `edges`, `sccs` and `levels`.
pub fn to_json(g: &CallGraph, plan: &LevelPlan) -> serde_json::Value {
    let name = |p: &Pred| p.to_string();
    let doc = GraphJson {
        nodes: g.nodes.iter().map(name).collect(),
        edges: g.edges.iter().map(|(a, b)| [name(a), name(b)]).collect(),
        sccs: plan.sccs().map(|s| s.iter().map(name).collect()).collect(),
        levels: plan
            .levels
            .iter()
            .map(|l| l.iter().map(|s| s.iter().map(name).collect()).collect())
            .collect(),
    };
    serde_json::to_value(doc).expect("call graph serializes")
}
