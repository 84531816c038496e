//! First-order semantics: formulas, interpretations satisfying domain
//! closure, diagrams, and the brute-force model oracle.
//!
//! An interpretation satisfying the domain closure axiom (a
//! DCA-interpretation) is, up to isomorphism, a quotient of the constants
//! by an equivalence relation together with predicate extensions over the
//! classes.  The oracle exploits this: it walks set partitions of the
//! constants (as restricted growth strings, in lexicographic order),
//! refines them by the unique name axioms in force, enumerates predicate
//! extensions over each quotient, and evaluates every axiom of the theory
//! on every candidate.  Models are reported as diagrams: the set of ground
//! atoms and ground equalities true in the interpretation, which determines
//! it up to isomorphism.
//!
//! Everything here is deliberately naive.  The guardrail in
//! [`OracleLimits`] keeps instances at desk scale unless forced.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::theory::{required_una_pairs, Atom, Clause, ConstId, PredId, Signature, TheorySpec};

/// Object-level term: a constant or a variable.  There are no function
/// symbols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Term {
    Const(ConstId),
    Var(String),
}

/// Predicate position of an atomic formula: either a predicate of the
/// signature or a predicate variable (used by stability conditions).
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PredRef {
    Sig(PredId),
    Var(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    Atom(PredRef, Vec<Term>),
    Eq(Term, Term),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    ForAll(String, Box<Formula>),
    Exists(String, Box<Formula>),
    /// Existential quantifier over a predicate variable of the given arity.
    ExistsPred { var: String, arity: usize, body: Box<Formula> },
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn forall(v: impl Into<String>, f: Formula) -> Formula {
        Formula::ForAll(v.into(), Box::new(f))
    }

    pub fn exists(v: impl Into<String>, f: Formula) -> Formula {
        Formula::Exists(v.into(), Box::new(f))
    }

    pub fn sig_atom(pred: PredId, args: Vec<Term>) -> Formula {
        Formula::Atom(PredRef::Sig(pred), args)
    }

    pub fn ground_atom(atom: &Atom) -> Formula {
        Formula::Atom(PredRef::Sig(atom.pred), atom.args.iter().map(|&c| Term::Const(c)).collect())
    }

    /// Disjunction that collapses the empty and singleton cases.
    pub fn or_of(mut fs: Vec<Formula>) -> Formula {
        match fs.len() {
            0 => Formula::False,
            1 => fs.pop().unwrap(),
            _ => Formula::Or(fs),
        }
    }

    /// Conjunction that collapses the empty and singleton cases.
    pub fn and_of(mut fs: Vec<Formula>) -> Formula {
        match fs.len() {
            0 => Formula::True,
            1 => fs.pop().unwrap(),
            _ => Formula::And(fs),
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FoError {
    #[error("the domain closure axiom is undefined: the signature has no object constants")]
    NoConstants,
    #[error("malformed interpretation: {0}")]
    BadInterpretation(String),
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("unbound object variable `{0}`")]
    UnboundVariable(String),
    #[error("unbound predicate variable `{0}`")]
    UnboundPredVariable(String),
    #[error("atom arity does not match its predicate")]
    ArityMismatch,
    #[error("predicate variable ranges over {tuples} tuples; refusing to enumerate more than {max}")]
    PredVarSpaceTooLarge { tuples: usize, max: usize },
}

/// An interpretation satisfying domain closure, represented as a quotient
/// of the object constants.  Universe elements are identified with class
/// representatives: the least constant (in declaration order) of each
/// class.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DcaInterpretation {
    universe: Vec<ConstId>,
    const_map: Vec<ConstId>,
    extensions: Vec<BTreeSet<Vec<ConstId>>>,
}

impl DcaInterpretation {
    pub fn from_parts(
        sig: &Signature,
        const_map: Vec<ConstId>,
        extensions: Vec<BTreeSet<Vec<ConstId>>>,
    ) -> Result<Self, FoError> {
        if const_map.len() != sig.num_consts() {
            return Err(FoError::BadInterpretation("constant map has the wrong length".into()));
        }
        if const_map.is_empty() {
            return Err(FoError::NoConstants);
        }
        for (i, &rep) in const_map.iter().enumerate() {
            let r = rep.0 as usize;
            if r >= const_map.len() {
                return Err(FoError::BadInterpretation(format!("representative out of range for constant {i}")));
            }
            if const_map[r] != rep {
                return Err(FoError::BadInterpretation("representatives must map to themselves".into()));
            }
        }
        let universe: Vec<ConstId> = {
            let mut u: Vec<ConstId> = const_map.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
            u.sort();
            u
        };
        if extensions.len() != sig.num_preds() {
            return Err(FoError::BadInterpretation("one extension per predicate required".into()));
        }
        for (p, ext) in extensions.iter().enumerate() {
            let arity = sig.pred_arity(PredId(p as u32));
            for tuple in ext {
                if tuple.len() != arity {
                    return Err(FoError::BadInterpretation(format!("tuple arity mismatch for predicate {p}")));
                }
                if tuple.iter().any(|e| !universe.contains(e)) {
                    return Err(FoError::BadInterpretation("extension tuple uses a non-representative element".into()));
                }
            }
        }
        Ok(DcaInterpretation { universe, const_map, extensions })
    }

    /// The Herbrand interpretation with the given true atoms: the discrete
    /// quotient, every constant denoting itself.
    pub fn herbrand(sig: &Signature, atoms: &BTreeSet<Atom>) -> Self {
        let const_map: Vec<ConstId> = sig.const_ids().collect();
        let mut extensions = vec![BTreeSet::new(); sig.num_preds()];
        for a in atoms {
            extensions[a.pred.0 as usize].insert(a.args.clone());
        }
        DcaInterpretation { universe: const_map.clone(), const_map, extensions }
    }

    pub fn universe(&self) -> &[ConstId] {
        &self.universe
    }

    /// Representative of the class a constant denotes.
    pub fn rep(&self, c: ConstId) -> ConstId {
        self.const_map[c.0 as usize]
    }

    pub fn extension(&self, p: PredId) -> &BTreeSet<Vec<ConstId>> {
        &self.extensions[p.0 as usize]
    }

    pub fn holds_atom(&self, p: PredId, elems: &[ConstId]) -> bool {
        self.extensions[p.0 as usize].contains(elems)
    }
}

/// Variable bindings used during evaluation; scoped push/pop.
#[derive(Debug, Default)]
pub struct Env {
    vars: Vec<(String, ConstId)>,
    preds: Vec<(String, BTreeSet<Vec<ConstId>>)>,
}

impl Env {
    pub fn new() -> Self {
        Env::default()
    }

    fn lookup_var(&self, name: &str) -> Option<ConstId> {
        self.vars.iter().rev().find(|(n, _)| n == name).map(|(_, e)| *e)
    }

    fn lookup_pred(&self, name: &str) -> Option<&BTreeSet<Vec<ConstId>>> {
        self.preds.iter().rev().find(|(n, _)| n == name).map(|(_, e)| e)
    }

    pub fn push_var(&mut self, name: impl Into<String>, elem: ConstId) {
        self.vars.push((name.into(), elem));
    }

    pub fn pop_var(&mut self) {
        self.vars.pop();
    }

    pub fn push_pred(&mut self, name: impl Into<String>, ext: BTreeSet<Vec<ConstId>>) {
        self.preds.push((name.into(), ext));
    }

    pub fn pop_pred(&mut self) {
        self.preds.pop();
    }
}

const PRED_VAR_TUPLE_MAX: usize = 20;

fn term_elem(t: &Term, i: &DcaInterpretation, env: &Env) -> Result<ConstId, EvalError> {
    match t {
        Term::Const(c) => Ok(i.rep(*c)),
        Term::Var(v) => env.lookup_var(v).ok_or_else(|| EvalError::UnboundVariable(v.clone())),
    }
}

/// Tarskian satisfaction.  Equality is identity of denoted elements.
pub fn eval(f: &Formula, i: &DcaInterpretation, env: &mut Env) -> Result<bool, EvalError> {
    match f {
        Formula::True => Ok(true),
        Formula::False => Ok(false),
        Formula::Eq(a, b) => Ok(term_elem(a, i, env)? == term_elem(b, i, env)?),
        Formula::Atom(pred, args) => {
            let mut elems = Vec::with_capacity(args.len());
            for t in args {
                elems.push(term_elem(t, i, env)?);
            }
            match pred {
                PredRef::Sig(p) => Ok(i.holds_atom(*p, &elems)),
                PredRef::Var(v) => {
                    let ext = env.lookup_pred(v).ok_or_else(|| EvalError::UnboundPredVariable(v.clone()))?;
                    Ok(ext.contains(&elems))
                }
            }
        }
        Formula::Not(g) => Ok(!eval(g, i, env)?),
        Formula::And(fs) => {
            for g in fs {
                if !eval(g, i, env)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Or(fs) => {
            for g in fs {
                if eval(g, i, env)? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::Implies(a, b) => Ok(!eval(a, i, env)? || eval(b, i, env)?),
        Formula::ForAll(v, body) => {
            for &e in i.universe() {
                env.push_var(v.clone(), e);
                let r = eval(body, i, env);
                env.pop_var();
                if !r? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        Formula::Exists(v, body) => {
            for &e in i.universe() {
                env.push_var(v.clone(), e);
                let r = eval(body, i, env);
                env.pop_var();
                if r? {
                    return Ok(true);
                }
            }
            Ok(false)
        }
        Formula::ExistsPred { var, arity, body } => {
            let tuples = all_tuples(i.universe(), *arity);
            if tuples.len() > PRED_VAR_TUPLE_MAX {
                return Err(EvalError::PredVarSpaceTooLarge { tuples: tuples.len(), max: PRED_VAR_TUPLE_MAX });
            }
            let mut bits = vec![false; tuples.len()];
            loop {
                let ext: BTreeSet<Vec<ConstId>> = tuples
                    .iter()
                    .zip(&bits)
                    .filter(|(_, &b)| b)
                    .map(|(t, _)| t.clone())
                    .collect();
                env.push_pred(var.clone(), ext);
                let r = eval(body, i, env);
                env.pop_pred();
                if r? {
                    return Ok(true);
                }
                if !next_subset(&mut bits) {
                    return Ok(false);
                }
            }
        }
    }
}

/// Evaluate a sentence (no free variables).
pub fn holds(f: &Formula, i: &DcaInterpretation) -> Result<bool, EvalError> {
    eval(f, i, &mut Env::new())
}

/// `∀x (x = c1 ∨ ... ∨ x = ck)` over all object constants.
pub fn dca_axiom(sig: &Signature) -> Result<Formula, FoError> {
    if sig.num_consts() == 0 {
        return Err(FoError::NoConstants);
    }
    let x = || Term::Var("X".into());
    let cases = sig.const_ids().map(|c| Formula::Eq(x(), Term::Const(c))).collect();
    Ok(Formula::forall("X", Formula::or_of(cases)))
}

/// The unique name axiom `a != b`.
pub fn una_axiom(a: ConstId, b: ConstId) -> Formula {
    Formula::not(Formula::Eq(Term::Const(a), Term::Const(b)))
}

/// The clause `A1 ∨ ... ∨ Ar` as a formula.
pub fn clause_formula(clause: &Clause) -> Formula {
    Formula::or_of(clause.atoms().iter().map(Formula::ground_atom).collect())
}

/// Tuples of atoms of `pred` occurring in the clauses, in first-occurrence
/// order.
pub fn occurring_tuples(pred: PredId, delta: &[Clause]) -> Vec<Vec<ConstId>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for clause in delta {
        for atom in clause.atoms() {
            if atom.pred == pred && seen.insert(atom.args.clone()) {
                out.push(atom.args.clone());
            }
        }
    }
    out
}

/// The completion axiom for `pred`: anything satisfying it equals one of
/// the tuples that occur for it in the clauses.  A predicate with no
/// occurrences completes to `∀x (P(x) → ⊥)`; a 0-ary one degenerates to
/// `P → ⊥` or `P → ⊤`.
pub fn completion_axiom(sig: &Signature, pred: PredId, delta: &[Clause]) -> Formula {
    let arity = sig.pred_arity(pred);
    let vars: Vec<String> = (1..=arity).map(|i| format!("X{i}")).collect();
    let head = Formula::Atom(PredRef::Sig(pred), vars.iter().map(|v| Term::Var(v.clone())).collect());
    let cases = occurring_tuples(pred, delta)
        .into_iter()
        .map(|tuple| {
            Formula::and_of(
                vars.iter()
                    .zip(&tuple)
                    .map(|(v, &c)| Formula::Eq(Term::Var(v.clone()), Term::Const(c)))
                    .collect(),
            )
        })
        .collect();
    let mut f = Formula::implies(head, Formula::or_of(cases));
    for v in vars.into_iter().rev() {
        f = Formula::forall(v, f);
    }
    f
}

/// The full axiom list of the theory: domain closure, the required unique
/// name axioms, the chosen optional ones, the clauses, and one completion
/// axiom per predicate.
pub fn theory_axioms(t: &TheorySpec) -> Result<Vec<Formula>, FoError> {
    let sig = t.signature();
    let mut out = vec![dca_axiom(sig)?];
    for &(a, b) in &required_una_pairs(sig) {
        out.push(una_axiom(a, b));
    }
    for &(a, b) in t.sigma() {
        out.push(una_axiom(a, b));
    }
    for clause in t.delta() {
        out.push(clause_formula(clause));
    }
    for p in sig.pred_ids() {
        out.push(completion_axiom(sig, p, t.delta()));
    }
    Ok(out)
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ClosureViolation {
    #[error("diagram is missing the reflexive equality ({0}, {0})")]
    MissingReflexive(String),
    #[error("diagram contains ({0}, {1}) but not the symmetric ({1}, {0})")]
    MissingSymmetric(String, String),
    #[error("diagram contains ({0}, {1}) and ({1}, {2}) but not ({0}, {2})")]
    MissingTransitive(String, String, String),
    #[error("diagram contains {from} and the equalities to rewrite it, but not {to}")]
    MissingSubstitution { from: String, to: String },
    #[error("diagram refers to a constant or predicate outside the signature")]
    OutOfSignature,
}

/// The diagram of a DCA-interpretation: all ground atoms and all ground
/// equalities true in it.  Equalities are stored as ordered pairs, with
/// both directions and the reflexive pairs materialized.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord)]
pub struct Diagram {
    pub atoms: BTreeSet<Atom>,
    pub equalities: BTreeSet<(ConstId, ConstId)>,
}

impl Diagram {
    /// Check the two closure conditions that characterize diagrams: the
    /// equalities form an equivalence relation on the constants, and the
    /// atoms are closed under substitution of equals.
    pub fn validate(&self, sig: &Signature) -> Result<(), ClosureViolation> {
        let n = sig.num_consts();
        let name = |c: ConstId| sig.const_name(c).to_owned();
        for &(a, b) in &self.equalities {
            if a.0 as usize >= n || b.0 as usize >= n {
                return Err(ClosureViolation::OutOfSignature);
            }
        }
        for c in sig.const_ids() {
            if !self.equalities.contains(&(c, c)) {
                return Err(ClosureViolation::MissingReflexive(name(c)));
            }
        }
        for &(a, b) in &self.equalities {
            if !self.equalities.contains(&(b, a)) {
                return Err(ClosureViolation::MissingSymmetric(name(a), name(b)));
            }
            for &(b2, c) in &self.equalities {
                if b2 == b && !self.equalities.contains(&(a, c)) {
                    return Err(ClosureViolation::MissingTransitive(name(a), name(b), name(c)));
                }
            }
        }
        for atom in &self.atoms {
            if atom.pred.0 as usize >= sig.num_preds()
                || atom.args.len() != sig.pred_arity(atom.pred)
                || atom.args.iter().any(|c| c.0 as usize >= n)
            {
                return Err(ClosureViolation::OutOfSignature);
            }
            for (pos, &arg) in atom.args.iter().enumerate() {
                for &(a, b) in &self.equalities {
                    if a == arg && b != arg {
                        let mut rewritten = atom.clone();
                        rewritten.args[pos] = b;
                        if !self.atoms.contains(&rewritten) {
                            return Err(ClosureViolation::MissingSubstitution {
                                from: atom.display(sig).to_string(),
                                to: rewritten.display(sig).to_string(),
                            });
                        }
                    }
                }
            }
        }
        Ok(())
    }

    /// One ground atom per line, then the equalities as `eq(a,b)` lines, in
    /// the same canonical order the solver uses.
    pub fn display<'a>(&'a self, sig: &'a Signature) -> DiagramDisplay<'a> {
        DiagramDisplay { diagram: self, sig }
    }
}

pub struct DiagramDisplay<'a> {
    diagram: &'a Diagram,
    sig: &'a Signature,
}

impl fmt::Display for DiagramDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for atom in &self.diagram.atoms {
            writeln!(f, "{}", atom.display(self.sig))?;
        }
        for &(a, b) in &self.diagram.equalities {
            writeln!(f, "eq({},{})", self.sig.const_name(a), self.sig.const_name(b))?;
        }
        Ok(())
    }
}

/// The diagram `D(I)`: everything from the extended Herbrand base that is
/// true in the interpretation.
pub fn diagram_of(i: &DcaInterpretation, sig: &Signature) -> Diagram {
    let mut equalities = BTreeSet::new();
    for a in sig.const_ids() {
        for b in sig.const_ids() {
            if i.rep(a) == i.rep(b) {
                equalities.insert((a, b));
            }
        }
    }
    let consts: Vec<ConstId> = sig.const_ids().collect();
    let mut atoms = BTreeSet::new();
    for p in sig.pred_ids() {
        for tuple in all_tuples(&consts, sig.pred_arity(p)) {
            let elems: Vec<ConstId> = tuple.iter().map(|&c| i.rep(c)).collect();
            if i.holds_atom(p, &elems) {
                atoms.insert(Atom { pred: p, args: tuple });
            }
        }
    }
    Diagram { atoms, equalities }
}

/// Complexity guardrail for the enumeration entry points.
#[derive(Debug, Clone, Copy)]
pub struct OracleLimits {
    pub max_constants: usize,
    pub max_ground_atoms: usize,
    pub force: bool,
}

impl Default for OracleLimits {
    fn default() -> Self {
        OracleLimits { max_constants: 10, max_ground_atoms: 24, force: false }
    }
}

impl OracleLimits {
    pub fn forced() -> Self {
        OracleLimits { force: true, ..OracleLimits::default() }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance exceeds the oracle guardrail: {constants} constants and {ground_atoms} ground atoms (limits: {max_constants} and {max_ground_atoms}); use --force to run it anyway")]
    GuardrailExceeded { constants: usize, ground_atoms: usize, max_constants: usize, max_ground_atoms: usize },
    #[error(transparent)]
    Fo(#[from] FoError),
    #[error(transparent)]
    Eval(#[from] EvalError),
}

fn check_guardrail(sig: &Signature, limits: &OracleLimits) -> Result<(), OracleError> {
    let constants = sig.num_consts();
    let ground_atoms = sig.herbrand_base_size();
    if !limits.force && (constants > limits.max_constants || ground_atoms > limits.max_ground_atoms) {
        return Err(OracleError::GuardrailExceeded {
            constants,
            ground_atoms,
            max_constants: limits.max_constants,
            max_ground_atoms: limits.max_ground_atoms,
        });
    }
    Ok(())
}

/// All tuples over the given elements, leftmost position most significant.
pub(crate) fn all_tuples(elems: &[ConstId], arity: usize) -> Vec<Vec<ConstId>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        let mut next = Vec::with_capacity(out.len() * elems.len());
        for t in &out {
            for &e in elems {
                let mut t2 = t.clone();
                t2.push(e);
                next.push(t2);
            }
        }
        out = next;
    }
    out
}

/// Binary odometer over a subset mask; returns false once wrapped back to
/// the empty set.
pub(crate) fn next_subset(bits: &mut [bool]) -> bool {
    for b in bits.iter_mut() {
        if *b {
            *b = false;
        } else {
            *b = true;
            return true;
        }
    }
    false
}

/// Set partitions of `0..n` as restricted growth strings, lexicographically,
/// keeping only partitions where no barred pair shares a class.
fn partitions_rgs(n: usize, barred: &BTreeSet<(ConstId, ConstId)>) -> Vec<Vec<usize>> {
    fn go(n: usize, barred: &BTreeSet<(ConstId, ConstId)>, rgs: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rgs.len() == n {
            out.push(rgs.clone());
            return;
        }
        let i = rgs.len();
        let max = rgs.iter().copied().max().map_or(0, |m| m + 1);
        'group: for g in 0..=max {
            for (j, &gj) in rgs.iter().enumerate() {
                if gj == g {
                    let a = ConstId(j as u32);
                    let b = ConstId(i as u32);
                    if barred.contains(&(a.min(b), a.max(b))) {
                        continue 'group;
                    }
                }
            }
            rgs.push(g);
            go(n, barred, rgs, out);
            rgs.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    go(n, barred, &mut Vec::new(), &mut out);
    out
}

/// Constant map (constant -> class representative) for a restricted growth
/// string.  The representative of a class is its least member.
fn rgs_const_map(rgs: &[usize]) -> Vec<ConstId> {
    let groups = rgs.iter().copied().max().map_or(0, |m| m + 1);
    let mut rep = vec![ConstId(0); groups];
    let mut seen = vec![false; groups];
    for (i, &g) in rgs.iter().enumerate() {
        if !seen[g] {
            seen[g] = true;
            rep[g] = ConstId(i as u32);
        }
    }
    rgs.iter().map(|&g| rep[g]).collect()
}

/// Enumerate the DCA-models of the clauses under a given set of unique name
/// axioms, together with the completion axioms and domain closure.  The
/// candidate extensions per predicate range over the quotient images of the
/// tuples occurring in the clauses: the completion axiom rejects everything
/// else, and every axiom is still evaluated on every candidate.
pub fn enumerate_dca_models_with_una(
    sig: &Signature,
    delta: &[Clause],
    una: &BTreeSet<(ConstId, ConstId)>,
    limits: &OracleLimits,
) -> Result<Vec<Diagram>, OracleError> {
    check_guardrail(sig, limits)?;
    let mut axioms = vec![dca_axiom(sig)?];
    for &(a, b) in una {
        axioms.push(una_axiom(a, b));
    }
    for clause in delta {
        axioms.push(clause_formula(clause));
    }
    for p in sig.pred_ids() {
        axioms.push(completion_axiom(sig, p, delta));
    }

    let mut models = Vec::new();
    for rgs in partitions_rgs(sig.num_consts(), una) {
        let const_map = rgs_const_map(&rgs);
        // candidate atoms: quotient images of the occurring tuples
        let mut candidates: Vec<(PredId, Vec<ConstId>)> = Vec::new();
        for p in sig.pred_ids() {
            let mut space = BTreeSet::new();
            for tuple in occurring_tuples(p, delta) {
                space.insert(tuple.iter().map(|&c| const_map[c.0 as usize]).collect::<Vec<_>>());
            }
            candidates.extend(space.into_iter().map(|t| (p, t)));
        }
        let mut bits = vec![false; candidates.len()];
        loop {
            let mut extensions = vec![BTreeSet::new(); sig.num_preds()];
            for ((p, tuple), &b) in candidates.iter().zip(&bits) {
                if b {
                    extensions[p.0 as usize].insert(tuple.clone());
                }
            }
            let interp = DcaInterpretation::from_parts(sig, const_map.clone(), extensions)?;
            let mut ok = true;
            for ax in &axioms {
                if !holds(ax, &interp)? {
                    ok = false;
                    break;
                }
            }
            if ok {
                models.push(diagram_of(&interp, sig));
            }
            if !next_subset(&mut bits) {
                break;
            }
        }
    }
    models.sort();
    debug_assert!(models.windows(2).all(|w| w[0] != w[1]));
    Ok(models)
}

/// Enumerate the DCA-models of a theory: its own unique name axioms are the
/// required ones plus Σ.
pub fn enumerate_dca_models(t: &TheorySpec, limits: &OracleLimits) -> Result<Vec<Diagram>, OracleError> {
    let mut una = required_una_pairs(t.signature());
    una.extend(t.sigma().iter().copied());
    enumerate_dca_models_with_una(t.signature(), t.delta(), &una, limits)
}

/// Diagrams of the DCA-models of a sentence that are minimal with respect
/// to the predicate extensions, within each choice of quotient universe.
pub fn minimal_dca_models(
    f: &Formula,
    sig: &Signature,
    limits: &OracleLimits,
) -> Result<Vec<Diagram>, OracleError> {
    check_guardrail(sig, limits)?;
    let mut models = Vec::new();
    for rgs in partitions_rgs(sig.num_consts(), &BTreeSet::new()) {
        let const_map = rgs_const_map(&rgs);
        let universe: Vec<ConstId> = {
            let mut u: Vec<ConstId> = const_map.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
            u.sort();
            u
        };
        let mut candidates: Vec<(PredId, Vec<ConstId>)> = Vec::new();
        for p in sig.pred_ids() {
            candidates.extend(all_tuples(&universe, sig.pred_arity(p)).into_iter().map(|t| (p, t)));
        }
        let mut satisfying: Vec<BTreeSet<(PredId, Vec<ConstId>)>> = Vec::new();
        let mut bits = vec![false; candidates.len()];
        loop {
            let chosen: BTreeSet<(PredId, Vec<ConstId>)> = candidates
                .iter()
                .zip(&bits)
                .filter(|(_, &b)| b)
                .map(|(c, _)| c.clone())
                .collect();
            let mut extensions = vec![BTreeSet::new(); sig.num_preds()];
            for (p, tuple) in &chosen {
                extensions[p.0 as usize].insert(tuple.clone());
            }
            let interp = DcaInterpretation::from_parts(sig, const_map.clone(), extensions)?;
            if holds(f, &interp)? {
                satisfying.push(chosen);
            }
            if !next_subset(&mut bits) {
                break;
            }
        }
        for m in &satisfying {
            if !satisfying.iter().any(|o| o.len() < m.len() && o.is_subset(m)) {
                let mut extensions = vec![BTreeSet::new(); sig.num_preds()];
                for (p, tuple) in m {
                    extensions[p.0 as usize].insert(tuple.clone());
                }
                let interp = DcaInterpretation::from_parts(sig, const_map.clone(), extensions)?;
                models.push(diagram_of(&interp, sig));
            }
        }
    }
    models.sort();
    Ok(models)
}

/// Herbrand models of the clauses together with the completion axioms,
/// evaluated classically.  Candidates range over the atoms occurring in the
/// clauses; the completion axioms force every other atom false.
pub fn herbrand_models(
    sig: &Signature,
    delta: &[Clause],
    limits: &OracleLimits,
) -> Result<Vec<BTreeSet<Atom>>, OracleError> {
    check_guardrail(sig, limits)?;
    let mut formulas = Vec::new();
    for clause in delta {
        formulas.push(clause_formula(clause));
    }
    for p in sig.pred_ids() {
        formulas.push(completion_axiom(sig, p, delta));
    }
    let mut candidates: Vec<Atom> = Vec::new();
    for p in sig.pred_ids() {
        for tuple in occurring_tuples(p, delta) {
            candidates.push(Atom { pred: p, args: tuple });
        }
    }
    let mut models = Vec::new();
    let mut bits = vec![false; candidates.len()];
    loop {
        let atoms: BTreeSet<Atom> = candidates
            .iter()
            .zip(&bits)
            .filter(|(_, &b)| b)
            .map(|(a, _)| a.clone())
            .collect();
        let interp = DcaInterpretation::herbrand(sig, &atoms);
        let mut ok = true;
        for f in &formulas {
            if !holds(f, &interp)? {
                ok = false;
                break;
            }
        }
        if ok {
            models.push(atoms);
        }
        if !next_subset(&mut bits) {
            break;
        }
    }
    models.sort();
    Ok(models)
}
