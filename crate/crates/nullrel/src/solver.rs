//! Herbrand stable model enumeration for ground programs.
//!
//! Rules are read as first-order sentences: a choice construct `{A}` reads
//! as `A ∨ ¬A`, a cardinality-choice `1{A1,...,Ar}` as
//! `⋀(Ai ∨ ¬Ai) ∧ ⋁Ai`, a constraint as the negation of its body, and the
//! program as the conjunction of these sentences.  A candidate model `M` is
//! stable when it satisfies the program and no proper sub-valuation `u`
//! (pointwise smaller on the predicate extensions) satisfies the star
//! transformation of the program evaluated at `M`:
//!
//! * intensional atoms go to their `u`-version,
//! * `⊤`, `⊥`, and equality are untouched,
//! * conjunction and disjunction commute with the transformation,
//! * `(F → G)*` is `(F* → G*) ∧ (F → G)`, with the unstarred part taken
//!   at `M`, and `¬F` is treated as `F → ⊥`.
//!
//! Enumeration branches only on the atoms a stable model can choose
//! freely: atoms in cardinality and choice rules, heads of multi-atom
//! disjunctive rules, and atoms under negation.  Everything else must be
//! derivable from facts and single-head rules once those are fixed; a
//! candidate with a true atom beyond that closure always has a smaller
//! sub-valuation witnessing instability, so no model is missed.  Each
//! complete candidate still goes through the full stability check.

use std::collections::BTreeSet;

use thiserror::Error;

use crate::fo::Formula;
use crate::theory::{Atom, ConstId, PredId, Signature};
use crate::translate::{GroundProgram, GroundRule, Literal};

/// A Herbrand interpretation, identified with its set of true atoms.
pub type CandidateModel = BTreeSet<Atom>;

#[derive(Debug, Clone, Copy)]
pub struct SolveLimits {
    pub max_herbrand_base: usize,
    pub force: bool,
}

impl Default for SolveLimits {
    fn default() -> Self {
        SolveLimits { max_herbrand_base: 24, force: false }
    }
}

impl SolveLimits {
    pub fn forced() -> Self {
        SolveLimits { force: true, ..SolveLimits::default() }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolveError {
    #[error("program has {ground_atoms} ground atoms, over the solver guardrail {max}; use --force to run it anyway")]
    GuardrailExceeded { ground_atoms: usize, max: usize },
    #[error("the reduct check only covers programs without choice or cardinality rules")]
    NotChoiceFree,
}

fn body_formula(body: &[Literal]) -> Formula {
    Formula::and_of(
        body.iter()
            .map(|l| match l {
                Literal::Pos(a) => Formula::ground_atom(a),
                Literal::Neg(a) => Formula::not(Formula::ground_atom(a)),
            })
            .collect(),
    )
}

/// The first-order sentence a ground rule stands for.
pub fn rule_to_formula(rule: &GroundRule) -> Formula {
    match rule {
        GroundRule::Fact(a) => Formula::ground_atom(a),
        GroundRule::Disjunctive { head, body } => {
            let h = Formula::or_of(head.iter().map(Formula::ground_atom).collect());
            if body.is_empty() {
                h
            } else {
                Formula::implies(body_formula(body), h)
            }
        }
        GroundRule::Constraint { body } => Formula::not(body_formula(body)),
        GroundRule::Choice { atom, body } => {
            let a = Formula::ground_atom(atom);
            let free = Formula::Or(vec![a.clone(), Formula::not(a)]);
            if body.is_empty() {
                free
            } else {
                Formula::implies(body_formula(body), free)
            }
        }
        GroundRule::CardinalityChoice { atoms } => {
            let mut parts: Vec<Formula> = atoms
                .iter()
                .map(|a| {
                    let f = Formula::ground_atom(a);
                    Formula::Or(vec![f.clone(), Formula::not(f)])
                })
                .collect();
            parts.push(Formula::or_of(atoms.iter().map(Formula::ground_atom).collect()));
            Formula::and_of(parts)
        }
    }
}

/// Classical truth of a ground formula in a Herbrand interpretation.
fn classical_ground(f: &Formula, m: &CandidateModel) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(crate::fo::PredRef::Sig(p), args) => {
            let atom = ground_atom_of(*p, args);
            m.contains(&atom)
        }
        Formula::Eq(crate::fo::Term::Const(a), crate::fo::Term::Const(b)) => a == b,
        Formula::Not(g) => !classical_ground(g, m),
        Formula::And(fs) => fs.iter().all(|g| classical_ground(g, m)),
        Formula::Or(fs) => fs.iter().any(|g| classical_ground(g, m)),
        Formula::Implies(a, b) => !classical_ground(a, m) || classical_ground(b, m),
        _ => unreachable!("rule formulas are ground and first-order"),
    }
}

/// The star transformation of a ground formula, evaluated at the candidate
/// `m` with sub-valuation `u`.
fn star_ground(f: &Formula, m: &CandidateModel, u: &CandidateModel) -> bool {
    match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Atom(crate::fo::PredRef::Sig(p), args) => {
            let atom = ground_atom_of(*p, args);
            u.contains(&atom)
        }
        Formula::Eq(crate::fo::Term::Const(a), crate::fo::Term::Const(b)) => a == b,
        Formula::Not(g) => !star_ground(g, m, u) && !classical_ground(g, m),
        Formula::And(fs) => fs.iter().all(|g| star_ground(g, m, u)),
        Formula::Or(fs) => fs.iter().any(|g| star_ground(g, m, u)),
        Formula::Implies(a, b) => {
            (!star_ground(a, m, u) || star_ground(b, m, u)) && classical_ground(f, m)
        }
        _ => unreachable!("rule formulas are ground and first-order"),
    }
}

fn ground_atom_of(pred: PredId, args: &[crate::fo::Term]) -> Atom {
    Atom {
        pred,
        args: args
            .iter()
            .map(|t| match t {
                crate::fo::Term::Const(c) => *c,
                crate::fo::Term::Var(_) => unreachable!("rule formulas are ground"),
            })
            .collect(),
    }
}

/// Indexing of the Herbrand base of a signature: atoms are numbered by
/// predicate (declaration order), then by argument tuple, lexicographically.
struct AtomSpace {
    offsets: Vec<usize>,
    arities: Vec<usize>,
    n_consts: usize,
    total: usize,
}

impl AtomSpace {
    fn new(sig: &Signature) -> Self {
        let n = sig.num_consts();
        let mut offsets = Vec::with_capacity(sig.num_preds());
        let mut arities = Vec::with_capacity(sig.num_preds());
        let mut total = 0usize;
        for p in sig.pred_ids() {
            offsets.push(total);
            let arity = sig.pred_arity(p);
            arities.push(arity);
            total = total.saturating_add(n.checked_pow(arity as u32).unwrap_or(usize::MAX));
        }
        AtomSpace { offsets, arities, n_consts: n, total }
    }

    fn index(&self, a: &Atom) -> usize {
        let mut ix = self.offsets[a.pred.0 as usize];
        let mut scale = 1usize;
        for &arg in a.args.iter().rev() {
            ix += arg.0 as usize * scale;
            scale *= self.n_consts;
        }
        ix
    }

    fn atom(&self, ix: usize) -> Atom {
        let pred = match self.offsets.binary_search(&ix) {
            Ok(p) => {
                // several 0-ary predicates may share an offset; take the last
                let mut p = p;
                while p + 1 < self.offsets.len() && self.offsets[p + 1] == ix {
                    p += 1;
                }
                p
            }
            Err(p) => p - 1,
        };
        let arity = self.arities[pred];
        let mut rest = ix - self.offsets[pred];
        let mut args = vec![ConstId(0); arity];
        for slot in (0..arity).rev() {
            args[slot] = ConstId((rest % self.n_consts) as u32);
            rest /= self.n_consts;
        }
        Atom { pred: PredId(pred as u32), args }
    }
}

/// Rules with atoms replaced by their indices.
enum CRule {
    Fact(usize),
    Horn { pos: Vec<usize>, neg: Vec<usize>, head: usize },
    Disj { pos: Vec<usize>, neg: Vec<usize>, heads: Vec<usize> },
    Constraint { pos: Vec<usize>, neg: Vec<usize> },
    Choice { neg: Vec<usize>, atom: usize },
    Card { atoms: Vec<usize> },
}

fn compile_rules(p: &GroundProgram, space: &AtomSpace) -> Vec<CRule> {
    let split = |body: &[Literal]| {
        let mut pos = Vec::new();
        let mut neg = Vec::new();
        for l in body {
            let ix = space.index(l.atom());
            if l.is_positive() {
                pos.push(ix);
            } else {
                neg.push(ix);
            }
        }
        (pos, neg)
    };
    p.rules()
        .iter()
        .map(|r| match r {
            GroundRule::Fact(a) => CRule::Fact(space.index(a)),
            GroundRule::Disjunctive { head, body } => {
                let (pos, neg) = split(body);
                if head.len() == 1 {
                    CRule::Horn { pos, neg, head: space.index(&head[0]) }
                } else {
                    CRule::Disj { pos, neg, heads: head.iter().map(|a| space.index(a)).collect() }
                }
            }
            GroundRule::Constraint { body } => {
                let (pos, neg) = split(body);
                CRule::Constraint { pos, neg }
            }
            GroundRule::Choice { atom, body } => {
                let (_, neg) = split(body);
                CRule::Choice { neg, atom: space.index(atom) }
            }
            GroundRule::CardinalityChoice { atoms } => {
                CRule::Card { atoms: atoms.iter().map(|a| space.index(a)).collect() }
            }
        })
        .collect()
}

const UNKNOWN: u8 = 0;
const TRUE: u8 = 1;
const FALSE: u8 = 2;

struct Search<'a> {
    program: &'a GroundProgram,
    space: AtomSpace,
    rules: Vec<CRule>,
    choice_points: Vec<usize>,
    state: Vec<u8>,
    trail: Vec<usize>,
    models: Vec<CandidateModel>,
}

impl<'a> Search<'a> {
    fn set(&mut self, ix: usize, value: u8) -> bool {
        match self.state[ix] {
            UNKNOWN => {
                self.state[ix] = value;
                self.trail.push(ix);
                true
            }
            v => v == value,
        }
    }

    fn undo_to(&mut self, mark: usize) {
        while self.trail.len() > mark {
            let ix = self.trail.pop().unwrap();
            self.state[ix] = UNKNOWN;
        }
    }

    /// Fire single-head rules whose bodies are settled and detect settled
    /// constraint violations.  Returns false on conflict.
    fn propagate(&mut self) -> bool {
        let Search { rules, state, trail, .. } = self;
        loop {
            let mut changed = false;
            for rule in rules.iter() {
                match rule {
                    CRule::Horn { pos, neg, head } => {
                        if state[*head] != TRUE
                            && pos.iter().all(|&b| state[b] == TRUE)
                            && neg.iter().all(|&b| state[b] == FALSE)
                        {
                            if state[*head] == FALSE {
                                return false;
                            }
                            state[*head] = TRUE;
                            trail.push(*head);
                            changed = true;
                        }
                    }
                    CRule::Constraint { pos, neg } => {
                        if pos.iter().all(|&b| state[b] == TRUE)
                            && neg.iter().all(|&b| state[b] == FALSE)
                        {
                            return false;
                        }
                    }
                    _ => {}
                }
            }
            if !changed {
                return true;
            }
        }
    }

    fn leaf(&mut self) {
        // atoms never derived are false
        let satisfied = self.rules.iter().all(|rule| match rule {
            CRule::Fact(a) => self.state[*a] == TRUE,
            CRule::Horn { pos, neg, head } => {
                !(pos.iter().all(|&b| self.state[b] == TRUE)
                    && neg.iter().all(|&b| self.state[b] != TRUE))
                    || self.state[*head] == TRUE
            }
            CRule::Disj { pos, neg, heads } => {
                !(pos.iter().all(|&b| self.state[b] == TRUE)
                    && neg.iter().all(|&b| self.state[b] != TRUE))
                    || heads.iter().any(|&h| self.state[h] == TRUE)
            }
            CRule::Constraint { pos, neg } => {
                !(pos.iter().all(|&b| self.state[b] == TRUE)
                    && neg.iter().all(|&b| self.state[b] != TRUE))
            }
            CRule::Choice { .. } => true,
            CRule::Card { atoms } => atoms.iter().any(|&a| self.state[a] == TRUE),
        });
        if !satisfied {
            return;
        }
        let model: CandidateModel = (0..self.space.total)
            .filter(|&ix| self.state[ix] == TRUE)
            .map(|ix| self.space.atom(ix))
            .collect();
        if is_stable(&model, self.program) {
            self.models.push(model);
        }
    }

    fn search(&mut self, next: usize) {
        let Some(&ix) = self.choice_points.get(next) else {
            self.leaf();
            return;
        };
        if self.state[ix] != UNKNOWN {
            self.search(next + 1);
            return;
        }
        for value in [TRUE, FALSE] {
            let mark = self.trail.len();
            if self.set(ix, value) && self.propagate() {
                self.search(next + 1);
            }
            self.undo_to(mark);
        }
    }
}

/// All Herbrand stable models of a program, sorted lexicographically on
/// their sorted atom lists.  Two runs produce identical output.
pub fn enumerate_stable_models(
    p: &GroundProgram,
    limits: &SolveLimits,
) -> Result<Vec<CandidateModel>, SolveError> {
    let space = AtomSpace::new(p.signature());
    if !limits.force && space.total > limits.max_herbrand_base {
        return Err(SolveError::GuardrailExceeded {
            ground_atoms: space.total,
            max: limits.max_herbrand_base,
        });
    }
    let rules = compile_rules(p, &space);

    let mut cps = BTreeSet::new();
    for rule in &rules {
        match rule {
            CRule::Fact(_) => {}
            CRule::Horn { neg, .. } => cps.extend(neg.iter().copied()),
            CRule::Disj { neg, heads, .. } => {
                cps.extend(neg.iter().copied());
                cps.extend(heads.iter().copied());
            }
            CRule::Constraint { neg, .. } => cps.extend(neg.iter().copied()),
            CRule::Choice { neg, atom } => {
                cps.extend(neg.iter().copied());
                cps.insert(*atom);
            }
            CRule::Card { atoms } => cps.extend(atoms.iter().copied()),
        }
    }

    let mut search = Search {
        program: p,
        state: vec![UNKNOWN; space.total],
        trail: Vec::new(),
        choice_points: cps.into_iter().collect(),
        space,
        rules,
        models: Vec::new(),
    };
    let facts: Vec<usize> = search
        .rules
        .iter()
        .filter_map(|r| match r {
            CRule::Fact(a) => Some(*a),
            _ => None,
        })
        .collect();
    let mut ok = true;
    for a in facts {
        ok = ok && search.set(a, TRUE);
    }
    if ok && search.propagate() {
        search.search(0);
    }
    let mut models = search.models;
    models.sort();
    Ok(models)
}

/// Stability of a candidate model: it must satisfy every rule classically,
/// and no proper sub-valuation may satisfy the starred program.  The
/// sub-valuation search is pruned by first closing off the atoms every
/// witness is forced to contain (facts, true atoms of choice constructs,
/// and everything single-head rules derive from them); only the remainder
/// is enumerated.
pub fn is_stable(m: &CandidateModel, p: &GroundProgram) -> bool {
    let formulas: Vec<Formula> = p.rules().iter().map(rule_to_formula).collect();
    if !formulas.iter().all(|f| classical_ground(f, m)) {
        return false;
    }

    // Atoms every witness u must contain.
    fn body_settled(forced: &CandidateModel, m: &CandidateModel, body: &[Literal]) -> bool {
        body.iter().all(|l| match l {
            Literal::Pos(a) => forced.contains(a),
            Literal::Neg(a) => !m.contains(a),
        })
    }
    let mut forced: CandidateModel = BTreeSet::new();
    for rule in p.rules() {
        match rule {
            GroundRule::Fact(a) => {
                forced.insert(a.clone());
            }
            GroundRule::CardinalityChoice { atoms } => {
                forced.extend(atoms.iter().filter(|a| m.contains(a)).cloned());
            }
            _ => {}
        }
    }
    loop {
        let mut changed = false;
        for rule in p.rules() {
            let new_atom = match rule {
                GroundRule::Disjunctive { head, body } if body_settled(&forced, m, body) => {
                    let in_m: Vec<&Atom> = head.iter().filter(|a| m.contains(a)).collect();
                    debug_assert!(!in_m.is_empty(), "classically satisfied rule with settled body");
                    if in_m.len() == 1 && !forced.contains(in_m[0]) {
                        Some(in_m[0].clone())
                    } else {
                        None
                    }
                }
                GroundRule::Choice { atom, body }
                    if m.contains(atom)
                        && !forced.contains(atom)
                        && body_settled(&forced, m, body) =>
                {
                    Some(atom.clone())
                }
                _ => None,
            };
            if let Some(a) = new_atom {
                forced.insert(a);
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    debug_assert!(forced.is_subset(m));
    if forced.len() == m.len() {
        return true;
    }

    let rest: Vec<Atom> = m.difference(&forced).cloned().collect();
    let mut bits = vec![false; rest.len()];
    loop {
        if !bits.iter().all(|&b| b) {
            let mut u = forced.clone();
            u.extend(rest.iter().zip(&bits).filter(|(_, &b)| b).map(|(a, _)| a.clone()));
            if formulas.iter().all(|f| star_ground(f, m, &u)) {
                return false;
            }
        }
        if !crate::fo::next_subset(&mut bits) {
            return true;
        }
    }
}

/// Independent stability check for programs without choice or cardinality
/// rules: drop every rule whose negative body intersects the candidate,
/// strip the remaining negations, and ask whether the candidate is a
/// minimal classical model of what is left.
pub fn reduct_stable(m: &CandidateModel, p: &GroundProgram) -> Result<bool, SolveError> {
    struct Positive {
        pos: Vec<Atom>,
        heads: Vec<Atom>, // empty for constraints
    }
    let mut reduct = Vec::new();
    for rule in p.rules() {
        let (heads, body) = match rule {
            GroundRule::Fact(a) => (vec![a.clone()], &[][..]),
            GroundRule::Disjunctive { head, body } => (head.clone(), &body[..]),
            GroundRule::Constraint { body } => (Vec::new(), &body[..]),
            GroundRule::Choice { .. } | GroundRule::CardinalityChoice { .. } => {
                return Err(SolveError::NotChoiceFree)
            }
        };
        if body.iter().any(|l| !l.is_positive() && m.contains(l.atom())) {
            continue;
        }
        let pos = body.iter().filter(|l| l.is_positive()).map(|l| l.atom().clone()).collect();
        reduct.push(Positive { pos, heads });
    }

    let satisfies = |candidate: &CandidateModel| {
        reduct.iter().all(|r| {
            !r.pos.iter().all(|a| candidate.contains(a))
                || r.heads.iter().any(|h| candidate.contains(h))
        })
    };
    if !satisfies(m) {
        return Ok(false);
    }
    let atoms: Vec<Atom> = m.iter().cloned().collect();
    let mut bits = vec![false; atoms.len()];
    loop {
        if !bits.iter().all(|&b| b) {
            let sub: CandidateModel =
                atoms.iter().zip(&bits).filter(|(_, &b)| b).map(|(a, _)| a.clone()).collect();
            if satisfies(&sub) {
                return Ok(false);
            }
        }
        if !crate::fo::next_subset(&mut bits) {
            return Ok(true);
        }
    }
}
