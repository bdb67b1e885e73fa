#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};

use rand::rngs::StdRng;
use rand::Rng;
use rti_core::frontend::{parse_program, Atom, Pred, Program, Term};
use rti_core::setexpr::{herbrand_universe, member, Functor, Ground, SetExpr};
use rti_core::solver::{Analysis, SolveConfig};
use rti_core::{infer, Options};

pub mod iso;
pub mod rewrite;

pub type Fact = (Pred, Vec<Ground>);

fn functors_of(t: &Term, out: &mut BTreeSet<Functor>) {
    if let Term::Compound(f, args) = t {
        out.insert(Functor::new(f, args.len()));
        for a in args {
            functors_of(a, out);
        }
    }
}

/// Function symbols occurring anywhere in the program.
pub fn program_functors(p: &Program) -> Vec<Functor> {
    let mut out = BTreeSet::new();
    for c in &p.clauses {
        for a in std::iter::once(&c.head).chain(&c.body) {
            for t in &a.args {
                functors_of(t, &mut out);
            }
        }
    }
    out.into_iter().collect()
}

fn matches(t: &Term, g: &Ground, env: &mut BTreeMap<String, Ground>) -> bool {
    match t {
        Term::Var(v) => match env.get(v) {
            Some(bound) => bound == g,
            None => {
                env.insert(v.clone(), g.clone());
                true
            }
        },
        Term::Compound(f, args) => {
            &*g.functor.name == f.as_str()
                && g.functor.arity == args.len()
                && args.iter().zip(&g.args).all(|(a, s)| matches(a, s, env))
        }
    }
}

fn ground(t: &Term, env: &BTreeMap<String, Ground>) -> Ground {
    match t {
        Term::Var(v) => env[v].clone(),
        Term::Compound(f, args) => Ground {
            functor: Functor::new(f, args.len()),
            args: args.iter().map(|a| ground(a, env)).collect(),
        },
    }
}

fn vars_of(a: &Atom) -> Vec<String> {
    let mut out = Vec::new();
    a.vars_into(&mut out);
    out
}

/// Naive bottom-up evaluation for `rounds` rounds. Head variables not bound
/// by the body range over the terms of `universe`; facts with an argument
/// deeper than `max_depth` are dropped.
pub fn bottom_up(
    p: &Program,
    universe: &BTreeSet<Ground>,
    rounds: usize,
    max_depth: usize,
) -> BTreeSet<Fact> {
    let mut facts: BTreeSet<Fact> = BTreeSet::new();
    for _ in 0..rounds {
        let mut next = facts.clone();
        for c in &p.clauses {
            let mut envs: Vec<BTreeMap<String, Ground>> = vec![BTreeMap::new()];
            for b in &c.body {
                let key = b.key();
                let mut out = Vec::new();
                for env in &envs {
                    for (q, args) in facts.iter().filter(|(q, _)| *q == key) {
                        let _ = q;
                        let mut e = env.clone();
                        if b.args.iter().zip(args).all(|(t, g)| matches(t, g, &mut e)) {
                            out.push(e);
                        }
                    }
                }
                envs = out;
                if envs.is_empty() {
                    break;
                }
            }
            for env in envs {
                let open: Vec<String> = {
                    let mut seen = BTreeSet::new();
                    vars_of(&c.head)
                        .into_iter()
                        .filter(|v| !env.contains_key(v) && seen.insert(v.clone()))
                        .collect()
                };
                let mut full = vec![env];
                for v in &open {
                    full = full
                        .into_iter()
                        .flat_map(|e| {
                            universe.iter().map(move |g| {
                                let mut e2 = e.clone();
                                e2.insert(v.clone(), g.clone());
                                e2
                            })
                        })
                        .collect();
                }
                for env in full {
                    let args: Vec<Ground> = c.head.args.iter().map(|t| ground(t, &env)).collect();
                    if args.iter().all(|g| g.depth() <= max_depth) {
                        next.insert((c.head.key(), args));
                    }
                }
            }
        }
        if next.len() == facts.len() {
            break;
        }
        facts = next;
    }
    facts
}

/// Facts whose arguments fall outside the inferred types when every free
/// parameter stands for the whole universe.
pub fn violations(analysis: &Analysis, facts: &BTreeSet<Fact>) -> Vec<String> {
    let mut out = Vec::new();
    for (p, args) in facts {
        let Some(sol) = analysis.solutions.get(p) else {
            out.push(format!("{p}: no solution"));
            continue;
        };
        for (i, g) in args.iter().enumerate() {
            if !member(g, &SetExpr::Var(sol.sig[i]), &sol.system, &|_, _| true) {
                out.push(format!("{p} argument {} = {g}", i + 1));
            }
        }
    }
    out
}

/// Shape limits for random programs.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub preds: usize,
    pub clauses: usize,
    pub arity: usize,
    pub depth: usize,
    pub body: usize,
}

pub const SMALL: Shape = Shape {
    preds: 4,
    clauses: 3,
    arity: 2,
    depth: 2,
    body: 2,
};

const VARS: [&str; 3] = ["X", "Y", "Z"];

fn random_term(rng: &mut StdRng, depth: usize) -> String {
    let pick = if depth == 0 {
        rng.gen_range(0..5)
    } else {
        rng.gen_range(0..8)
    };
    match pick {
        0..=2 => VARS[pick].to_string(),
        3 => "a".into(),
        4 => "b".into(),
        5 => format!("f({})", random_term(rng, depth - 1)),
        6 => format!(
            "g({},{})",
            random_term(rng, depth - 1),
            random_term(rng, depth - 1)
        ),
        _ => format!(
            "[{}|{}]",
            random_term(rng, depth - 1),
            random_term(rng, depth - 1)
        ),
    }
}

fn random_atom(rng: &mut StdRng, name: &str, arity: usize, depth: usize) -> String {
    if arity == 0 {
        return name.to_string();
    }
    let args: Vec<String> = (0..arity).map(|_| random_term(rng, depth)).collect();
    format!("{name}({})", args.join(","))
}

/// Source text of a random pure program within `shape`. Every predicate
/// gets at least one clause so no call is undefined.
pub fn random_program(rng: &mut StdRng, shape: Shape) -> String {
    let n = rng.gen_range(1..=shape.preds);
    let preds: Vec<(String, usize)> = (0..n)
        .map(|i| (format!("p{i}"), rng.gen_range(0..=shape.arity)))
        .collect();
    let mut out = String::new();
    for (name, arity) in &preds {
        for _ in 0..rng.gen_range(1..=shape.clauses) {
            let head = random_atom(rng, name, *arity, shape.depth);
            let body: Vec<String> = (0..rng.gen_range(0..=shape.body))
                .map(|_| {
                    let (b, ba) = &preds[rng.gen_range(0..preds.len())];
                    random_atom(rng, b, *ba, shape.depth)
                })
                .collect();
            if body.is_empty() {
                out.push_str(&format!("{head}.\n"));
            } else {
                out.push_str(&format!("{head} :- {}.\n", body.join(", ")));
            }
        }
    }
    out
}

/// Herbrand universe over the program's symbols plus `a`, to depth `depth`.
pub fn universe_for(p: &Program, depth: usize) -> BTreeSet<Ground> {
    let mut fs = program_functors(p);
    if !fs.iter().any(|f| f.arity == 0) {
        fs.push(Functor::constant("a"));
    }
    herbrand_universe(&fs, depth)
}

pub fn parse(text: &str) -> Program {
    parse_program(text).expect("generated program parses")
}

/// Seeds among `0..programs` whose random program is typed unsoundly, with
/// the program text and the offending facts.
pub fn unsound_programs(config: &SolveConfig, programs: u64) -> Vec<(u64, String, Vec<String>)> {
    use rand::SeedableRng;
    let opts = Options {
        solve: config.clone(),
        allow_unknown: false,
    };
    let mut bad = Vec::new();
    for seed in 0..programs {
        let mut rng = StdRng::seed_from_u64(seed);
        let text = random_program(&mut rng, SMALL);
        let program = parse(&text);
        let analysis = match infer(&text, &opts, &mut |_| {}) {
            Ok((a, _)) => a,
            Err(e) => {
                bad.push((seed, text, vec![format!("analysis error: {e}")]));
                continue;
            }
        };
        let facts = bottom_up(&program, &universe_for(&program, 1), 4, 3);
        let v = violations(&analysis, &facts);
        if !v.is_empty() {
            bad.push((seed, text, v));
        }
    }
    bad
}
