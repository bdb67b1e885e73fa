use std::collections::{BTreeMap, BTreeSet};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::Rng;
use rti_core::report::project;
use rti_core::setexpr::{
    dnf, herbrand_universe, meaning, simp, to_top_level_form, Assignment, EquationSystem, Functor,
    Ground, Memo, Provenance, SetExpr, SimpContext, Var, VarTable,
};

pub const DEPTH: usize = 3;

pub type Check = fn(&mut StdRng, &[Ground], usize) -> Vec<String>;

pub fn functors() -> Vec<Functor> {
    vec![
        Functor::constant("a"),
        Functor::new("f", 1),
        Functor::new("g", 2),
    ]
}

pub fn universe() -> Vec<Ground> {
    herbrand_universe(&functors(), DEPTH).into_iter().collect()
}

/// Non-empty random sets for `free`.
pub fn assignment(rng: &mut StdRng, free: &[Var], universe: &[Ground]) -> Assignment {
    free.iter()
        .map(|v| {
            let mut set: BTreeSet<Ground> = universe
                .iter()
                .filter(|_| rng.gen_bool(0.25))
                .cloned()
                .collect();
            if set.is_empty() {
                set.insert(universe.choose(rng).unwrap().clone());
            }
            (*v, set)
        })
        .collect()
}

fn cons(rng: &mut StdRng, arg: &mut dyn FnMut(&mut StdRng) -> SetExpr) -> SetExpr {
    match rng.gen_range(0..3) {
        0 => SetExpr::constant("a"),
        1 => SetExpr::app("f", vec![arg(rng)]),
        _ => SetExpr::app("g", vec![arg(rng), arg(rng)]),
    }
}

/// Arbitrary nested expression over `vars`.
pub fn expr(rng: &mut StdRng, vars: &[Var], depth: usize) -> SetExpr {
    let leaf = depth == 0;
    match rng.gen_range(0..if leaf { 2 } else { 6 }) {
        0 => SetExpr::Var(*vars.choose(rng).unwrap()),
        1 if rng.gen_bool(0.1) => SetExpr::Empty,
        1 => SetExpr::constant("a"),
        2 => cons(rng, &mut |r| expr(r, vars, depth - 1)),
        3 | 4 => {
            let ops: Vec<SetExpr> = (0..rng.gen_range(2..=3))
                .map(|_| expr(rng, vars, depth - 1))
                .collect();
            SetExpr::union(ops)
        }
        _ => {
            let ops: Vec<SetExpr> = (0..2).map(|_| expr(rng, vars, depth - 1)).collect();
            SetExpr::inter(ops)
        }
    }
}

/// Expression in top-level form: constructor arguments are variables.
pub fn top_expr(rng: &mut StdRng, vars: &[Var], depth: usize) -> SetExpr {
    let pick = |r: &mut StdRng| SetExpr::Var(*vars.choose(r).unwrap());
    if depth == 0 {
        return if rng.gen_bool(0.5) {
            pick(rng)
        } else {
            cons(rng, &mut |r| pick(r))
        };
    }
    match rng.gen_range(0..4) {
        0 => pick(rng),
        1 => cons(rng, &mut |r| pick(r)),
        2 => SetExpr::union((0..rng.gen_range(2..=3)).map(|_| top_expr(rng, vars, depth - 1))),
        _ => SetExpr::inter((0..2).map(|_| top_expr(rng, vars, depth - 1))),
    }
}

/// A random leaf-linear system: defined variables `defs`, parameters `free`.
pub fn leaf_linear(rng: &mut StdRng, defs: &[Var], free: &[Var]) -> EquationSystem {
    let all: Vec<Var> = defs.iter().chain(free).copied().collect();
    let mut sys = EquationSystem::new();
    for &d in defs {
        let alts: Vec<SetExpr> = (0..rng.gen_range(1..=3))
            .map(|_| match rng.gen_range(0..4) {
                0 => SetExpr::Var(*free.choose(rng).unwrap()),
                1 if free.len() > 1 => {
                    let two: Vec<SetExpr> = free
                        .choose_multiple(rng, 2)
                        .map(|v| SetExpr::Var(*v))
                        .collect();
                    SetExpr::inter(
                        two.into_iter()
                            .chain([cons(rng, &mut |r| SetExpr::Var(*all.choose(r).unwrap()))]),
                    )
                }
                _ => cons(rng, &mut |r| SetExpr::Var(*all.choose(r).unwrap())),
            })
            .collect();
        sys.insert(d, SetExpr::union(alts));
    }
    sys
}

fn meaning_of(e: &SetExpr, sigma: &Assignment, sys: &EquationSystem) -> BTreeSet<Ground> {
    meaning(e, sigma, sys, DEPTH).expect("every free variable is assigned")
}

pub struct Setup {
    pub vars: VarTable,
    pub free: Vec<Var>,
    pub defs: Vec<Var>,
}

pub fn setup(n_free: usize, n_defs: usize) -> Setup {
    let mut vars = VarTable::new();
    let free = (0..n_free).map(|_| vars.fresh("F")).collect();
    let defs = (0..n_defs).map(|_| vars.fresh("D")).collect();
    Setup { vars, free, defs }
}

/// Each check generates one input from `rng` and compares meanings under
/// `assignments` random assignments, returning a description per mismatch.
pub fn check_dnf(rng: &mut StdRng, universe: &[Ground], assignments: usize) -> Vec<String> {
    let st = setup(3, 0);
    let e = expr(rng, &st.free, 3);
    let d = dnf(&e);
    let sys = EquationSystem::new();
    let mut out = Vec::new();
    for _ in 0..assignments {
        let sigma = assignment(rng, &st.free, universe);
        if meaning_of(&e, &sigma, &sys) != meaning_of(&d, &sigma, &sys) {
            out.push(format!(
                "dnf: {} vs {}",
                e.display(&st.vars),
                d.display(&st.vars)
            ));
        }
    }
    out
}

pub fn check_simp(rng: &mut StdRng, universe: &[Ground], assignments: usize) -> Vec<String> {
    let mut st = setup(3, 3);
    let s = leaf_linear(rng, &st.defs, &st.free);
    let all: Vec<Var> = st.defs.iter().chain(&st.free).copied().collect();
    let rhs = top_expr(rng, &all, 2);
    let x = st.vars.fresh("X");
    let mut memo = Memo::new();
    let mut provenance = Provenance::new();
    let mut ctx = SimpContext {
        vars: &mut st.vars,
        memo: &mut memo,
        provenance: &mut provenance,
    };
    let (q, new) = simp(x, &rhs, &mut ctx, &s);
    let mut extended = s.clone();
    extended.extend(new);
    let mut out = Vec::new();
    for _ in 0..assignments {
        let sigma = assignment(rng, &st.free, universe);
        if meaning_of(&rhs, &sigma, &s) != meaning_of(&q, &sigma, &extended) {
            out.push(format!(
                "simp: {} vs {} over\n{}",
                rhs.display(&st.vars),
                q.display(&st.vars),
                extended.display(&st.vars)
            ));
        }
    }
    out
}

pub fn check_top_level(rng: &mut StdRng, universe: &[Ground], assignments: usize) -> Vec<String> {
    let mut st = setup(2, 3);
    let all: Vec<Var> = st.defs.iter().chain(&st.free).copied().collect();
    let sys: EquationSystem = st.defs.iter().map(|d| (*d, expr(rng, &all, 3))).collect();
    let top = to_top_level_form(&sys, &mut st.vars);
    let mut out = Vec::new();
    for _ in 0..assignments {
        let sigma = assignment(rng, &st.free, universe);
        for d in &st.defs {
            if meaning_of(&SetExpr::Var(*d), &sigma, &sys)
                != meaning_of(&SetExpr::Var(*d), &sigma, &top)
            {
                out.push(format!("top-level form of\n{}", sys.display(&st.vars)));
            }
        }
    }
    out
}

pub fn check_project(rng: &mut StdRng, universe: &[Ground], assignments: usize) -> Vec<String> {
    let mut st = setup(3, 4);
    let mut s = leaf_linear(rng, &st.defs, &st.free);
    // Aliases between roots and other variables exercise alias chasing.
    let r = st.vars.fresh("R");
    let target = *st
        .defs
        .iter()
        .chain(&st.free)
        .collect::<Vec<_>>()
        .choose(rng)
        .unwrap();
    s.insert(r, SetExpr::Var(*target));
    let roots = vec![r, st.defs[0]];
    let p = project(&s, &roots, &mut st.vars);
    let mut out = Vec::new();
    for _ in 0..assignments {
        let sigma = assignment(rng, &st.free, universe);
        let mut renamed: Assignment = sigma.clone();
        for (from, to) in &p.renamed {
            renamed.insert(*to, sigma[from].clone());
        }
        for root in &roots {
            let before = meaning_of(&SetExpr::Var(*root), &sigma, &s);
            let after = meaning(&SetExpr::Var(*root), &renamed, &p.system, DEPTH);
            if after.as_ref() != Ok(&before) {
                out.push(format!(
                    "project on {}:\n{}=>\n{}",
                    st.vars.name(*root),
                    s.display(&st.vars),
                    p.system.display(&st.vars)
                ));
            }
        }
    }
    out
}

/// Runs `check` on `systems` seeded inputs and collects mismatches.
pub fn run(check: Check, systems: u64, assignments: usize, seed: u64) -> Vec<String> {
    use rand::SeedableRng;
    let universe = universe();
    let mut out = Vec::new();
    for i in 0..systems {
        let mut rng = StdRng::seed_from_u64(seed.wrapping_mul(1_000_003).wrapping_add(i));
        out.extend(check(&mut rng, &universe, assignments));
    }
    out
}

#[allow(dead_code)]
pub fn by_name() -> BTreeMap<&'static str, Check> {
    BTreeMap::from([
        ("dnf", check_dnf as Check),
        ("simp", check_simp),
        ("to_top_level_form", check_top_level),
        ("project", check_project),
    ])
}
