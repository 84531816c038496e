//! The compiler: clauses to choice rules, unique name axioms to
//! constraints, and the equality rewrite that lets a Herbrand solver see
//! models that merge constants.
//!
//! A clause `A1 | ... | Ar` becomes the cardinality-choice rule
//! `1{A1,...,Ar}` (a unit clause simplifies to the fact `A1`).  The
//! equality rewrite then extends the signature with the reserved binary
//! predicate `eq` and adds, ground over the constant set: reflexivity
//! facts, symmetry and transitivity rules, one substitution rule per
//! predicate, and a choice rule `{eq(c,d)}` for every ordered pair.  Unique
//! name axioms `a != b` become constraints `:- eq(a,b)`.  Domain closure
//! needs no rule: grounding over the constants realizes it.
//!
//! Nothing is simplified beyond the unit-clause case.  Trivially true
//! instances (reflexive symmetry, degenerate transitivity) are kept, so
//! rule counts are exact and predictable.

use std::collections::BTreeSet;
use std::ops::Range;

use thiserror::Error;

use crate::theory::{
    required_una_pairs, Atom, Clause, ConstId, ParseError, ParseErrorKind, PredId, Signature,
    TheorySpec, EQ_NAME,
};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Literal {
    Pos(Atom),
    Neg(Atom),
}

impl Literal {
    pub fn atom(&self) -> &Atom {
        match self {
            Literal::Pos(a) | Literal::Neg(a) => a,
        }
    }

    pub fn is_positive(&self) -> bool {
        matches!(self, Literal::Pos(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GroundRule {
    /// `A.`
    Fact(Atom),
    /// `H1 | ... | Hk :- B.` with `k >= 1`.
    Disjunctive { head: Vec<Atom>, body: Vec<Literal> },
    /// `:- B.`
    Constraint { body: Vec<Literal> },
    /// `{A} :- B.`
    Choice { atom: Atom, body: Vec<Literal> },
    /// `1{A1,...,Ar}.` — include any subset, at least one.
    CardinalityChoice { atoms: Vec<Atom> },
}

impl GroundRule {
    pub fn body(&self) -> &[Literal] {
        match self {
            GroundRule::Fact(_) | GroundRule::CardinalityChoice { .. } => &[],
            GroundRule::Disjunctive { body, .. } => body,
            GroundRule::Constraint { body } => body,
            GroundRule::Choice { body, .. } => body,
        }
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TranslateError {
    #[error("the program already uses the reserved predicate `{}`", EQ_NAME)]
    ReservedPredicateInUse,
    #[error("a cardinality-choice rule needs at least one atom")]
    EmptyCardinalityChoice,
    #[error("a disjunctive rule needs at least one head atom")]
    EmptyHead,
    #[error("rule refers to a constant or predicate outside the signature")]
    OutOfSignature,
    #[error("unknown constant `{0}` in unique-name list")]
    UnknownConstant(String),
}

/// A ground program: rules over a signature, with every predicate
/// intensional.  After the equality rewrite the signature additionally
/// carries the reserved `eq` predicate, and `machinery` marks the rule
/// range holding the equality axioms (the emitter uses it for the legacy
/// schematic output).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundProgram {
    signature: Signature,
    rules: Vec<GroundRule>,
    intensional: BTreeSet<PredId>,
    eq_pred: Option<PredId>,
    machinery: Option<Range<usize>>,
}

impl GroundProgram {
    pub fn new(signature: Signature, rules: Vec<GroundRule>) -> Result<Self, TranslateError> {
        let check_atom = |a: &Atom| -> Result<(), TranslateError> {
            if a.pred.0 as usize >= signature.num_preds()
                || a.args.len() != signature.pred_arity(a.pred)
                || a.args.iter().any(|c| c.0 as usize >= signature.num_consts())
            {
                return Err(TranslateError::OutOfSignature);
            }
            Ok(())
        };
        for rule in &rules {
            match rule {
                GroundRule::Fact(a) => check_atom(a)?,
                GroundRule::Disjunctive { head, body } => {
                    if head.is_empty() {
                        return Err(TranslateError::EmptyHead);
                    }
                    for a in head {
                        check_atom(a)?;
                    }
                    for l in body {
                        check_atom(l.atom())?;
                    }
                }
                GroundRule::Constraint { body } => {
                    for l in body {
                        check_atom(l.atom())?;
                    }
                }
                GroundRule::Choice { atom, body } => {
                    check_atom(atom)?;
                    for l in body {
                        check_atom(l.atom())?;
                    }
                }
                GroundRule::CardinalityChoice { atoms } => {
                    if atoms.is_empty() {
                        return Err(TranslateError::EmptyCardinalityChoice);
                    }
                    for a in atoms {
                        check_atom(a)?;
                    }
                }
            }
        }
        let intensional = signature.pred_ids().collect();
        let eq_pred = signature.pred_id(EQ_NAME);
        Ok(GroundProgram { signature, rules, intensional, eq_pred, machinery: None })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn rules(&self) -> &[GroundRule] {
        &self.rules
    }

    pub fn intensional(&self) -> &BTreeSet<PredId> {
        &self.intensional
    }

    pub fn eq_pred(&self) -> Option<PredId> {
        self.eq_pred
    }
}

/// One rule per clause: a fact for a unit clause, a cardinality-choice
/// rule otherwise.
pub fn delta_to_pi(sig: &Signature, delta: &[Clause]) -> GroundProgram {
    let rules = delta
        .iter()
        .map(|clause| {
            if clause.is_unit() {
                GroundRule::Fact(clause.atoms()[0].clone())
            } else {
                GroundRule::CardinalityChoice { atoms: clause.atoms().to_vec() }
            }
        })
        .collect();
    GroundProgram {
        signature: sig.clone(),
        rules,
        intensional: sig.pred_ids().collect(),
        eq_pred: None,
        machinery: None,
    }
}

/// Which unique name axioms to compile into constraints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum UnaMode {
    /// The theory's own axioms: all required ones plus Σ.
    Theory,
    /// `a != b` for all pairs of distinct constants from the list.
    Una(Vec<String>),
    /// `a != b` for all pairs of distinct constants such that at least one
    /// of them does not occur in the list.
    NoUna(Vec<String>),
}

fn resolve_consts(sig: &Signature, names: &[String]) -> Result<BTreeSet<ConstId>, TranslateError> {
    names
        .iter()
        .map(|n| sig.const_id(n).ok_or_else(|| TranslateError::UnknownConstant(n.clone())))
        .collect()
}

/// The unique name axioms selected by a mode, as unordered constant pairs.
/// `own` is what `Theory` mode stands for: a theory's required pairs plus
/// Σ, or nothing for a bare program.
pub fn una_pairs_over(
    sig: &Signature,
    own: &BTreeSet<(ConstId, ConstId)>,
    mode: &UnaMode,
) -> Result<BTreeSet<(ConstId, ConstId)>, TranslateError> {
    match mode {
        UnaMode::Theory => Ok(own.clone()),
        UnaMode::Una(names) => {
            let listed: Vec<ConstId> = resolve_consts(sig, names)?.into_iter().collect();
            let mut pairs = BTreeSet::new();
            for (i, &a) in listed.iter().enumerate() {
                for &b in &listed[i + 1..] {
                    pairs.insert((a, b));
                }
            }
            Ok(pairs)
        }
        UnaMode::NoUna(names) => {
            let listed = resolve_consts(sig, names)?;
            let mut pairs = BTreeSet::new();
            for a in sig.const_ids() {
                for b in sig.const_ids() {
                    if a < b && (!listed.contains(&a) || !listed.contains(&b)) {
                        pairs.insert((a, b));
                    }
                }
            }
            Ok(pairs)
        }
    }
}

/// The unique name axioms a mode selects for a theory.
pub fn una_pairs(t: &TheorySpec, mode: &UnaMode) -> Result<BTreeSet<(ConstId, ConstId)>, TranslateError> {
    let mut own = required_una_pairs(t.signature());
    own.extend(t.sigma().iter().copied());
    una_pairs_over(t.signature(), &own, mode)
}

fn pairs_to_constraints(pairs: BTreeSet<(ConstId, ConstId)>, eq: PredId) -> Vec<GroundRule> {
    pairs
        .into_iter()
        .map(|(a, b)| GroundRule::Constraint {
            body: vec![Literal::Pos(Atom { pred: eq, args: vec![a, b] })],
        })
        .collect()
}

/// Each selected axiom `a != b` as the constraint `:- eq(a,b)`.
pub fn una_constraints(
    t: &TheorySpec,
    mode: &UnaMode,
    eq: PredId,
) -> Result<Vec<GroundRule>, TranslateError> {
    Ok(pairs_to_constraints(una_pairs(t, mode)?, eq))
}

/// Extend a program with the ground equality machinery: `eq` becomes an
/// ordinary intensional predicate, constrained to an equivalence relation
/// that atoms respect, with every pair freely choosable.  The Herbrand
/// stable models of the result are exactly the diagrams of the stable
/// DCA-models of the input, with `=` spelled `eq`.
pub fn eq_rewrite(p: &GroundProgram) -> Result<GroundProgram, TranslateError> {
    if p.eq_pred.is_some() || p.signature.pred_id(EQ_NAME).is_some() {
        return Err(TranslateError::ReservedPredicateInUse);
    }
    let mut sig = p.signature.clone();
    let eq = sig.add_eq_pred();
    let consts: Vec<ConstId> = sig.const_ids().collect();
    let eq_atom = |a: ConstId, b: ConstId| Atom { pred: eq, args: vec![a, b] };

    let mut rules = p.rules.clone();
    let start = rules.len();

    // eq(c,c).
    for &c in &consts {
        rules.push(GroundRule::Fact(eq_atom(c, c)));
    }
    // eq(x,y) :- eq(y,x).
    for &x in &consts {
        for &y in &consts {
            rules.push(GroundRule::Disjunctive {
                head: vec![eq_atom(x, y)],
                body: vec![Literal::Pos(eq_atom(y, x))],
            });
        }
    }
    // eq(x,z) :- eq(x,y), eq(y,z).
    for &x in &consts {
        for &y in &consts {
            for &z in &consts {
                rules.push(GroundRule::Disjunctive {
                    head: vec![eq_atom(x, z)],
                    body: vec![Literal::Pos(eq_atom(x, y)), Literal::Pos(eq_atom(y, z))],
                });
            }
        }
    }
    // P(y1..yn) :- P(x1..xn), eq(x1,y1), ..., eq(xn,yn).
    for pred in p.signature.pred_ids() {
        let arity = sig.pred_arity(pred);
        for xs in crate::fo::all_tuples(&consts, arity) {
            for ys in crate::fo::all_tuples(&consts, arity) {
                let mut body = vec![Literal::Pos(Atom { pred, args: xs.clone() })];
                body.extend(xs.iter().zip(&ys).map(|(&x, &y)| Literal::Pos(eq_atom(x, y))));
                rules.push(GroundRule::Disjunctive {
                    head: vec![Atom { pred, args: ys.clone() }],
                    body,
                });
            }
        }
    }
    // {eq(x,y)}.
    for &x in &consts {
        for &y in &consts {
            rules.push(GroundRule::Choice { atom: eq_atom(x, y), body: Vec::new() });
        }
    }

    let machinery = Some(start..rules.len());
    Ok(GroundProgram {
        intensional: sig.pred_ids().collect(),
        signature: sig,
        rules,
        eq_pred: Some(eq),
        machinery,
    })
}

/// Full pipeline for a theory: translate the clauses, apply the equality
/// rewrite, and append the constraints for the selected unique name axioms.
pub fn compile_with_mode(t: &TheorySpec, mode: &UnaMode) -> Result<GroundProgram, TranslateError> {
    let pi = delta_to_pi(t.signature(), t.delta());
    let mut prog = eq_rewrite(&pi)?;
    let eq = prog.eq_pred.expect("rewrite introduces eq");
    prog.rules.extend(una_constraints(t, mode, eq)?);
    Ok(prog)
}

/// [`compile_with_mode`] with the theory's own unique name axioms.
pub fn compile(t: &TheorySpec) -> Result<GroundProgram, TranslateError> {
    compile_with_mode(t, &UnaMode::Theory)
}

/// Equality rewrite for a bare program: like [`compile_with_mode`] but
/// there is no theory to take unique name axioms from, so `Theory` mode
/// adds no constraints.
pub fn rewrite_with_mode(p: &GroundProgram, mode: &UnaMode) -> Result<GroundProgram, TranslateError> {
    let mut prog = eq_rewrite(p)?;
    let eq = prog.eq_pred.expect("rewrite introduces eq");
    let pairs = una_pairs_over(prog.signature(), &BTreeSet::new(), mode)?;
    prog.rules.extend(pairs_to_constraints(pairs, eq));
    Ok(prog)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitStyle {
    /// Fully ground rules, one per line.
    Modern,
    /// The equality machinery as schematic rules over a `u/1` universe
    /// predicate with `#domain` declarations, as older grounders expect.
    Legacy,
}

fn atom_text(sig: &Signature, a: &Atom) -> String {
    a.display(sig).to_string()
}

fn body_text(sig: &Signature, body: &[Literal]) -> String {
    body.iter()
        .map(|l| match l {
            Literal::Pos(a) => atom_text(sig, a),
            Literal::Neg(a) => format!("not {}", atom_text(sig, a)),
        })
        .collect::<Vec<_>>()
        .join(", ")
}

fn rule_text(sig: &Signature, rule: &GroundRule) -> String {
    match rule {
        GroundRule::Fact(a) => format!("{}.", atom_text(sig, a)),
        GroundRule::Disjunctive { head, body } => {
            let h = head.iter().map(|a| atom_text(sig, a)).collect::<Vec<_>>().join("|");
            if body.is_empty() {
                format!("{h}.")
            } else {
                format!("{h} :- {}.", body_text(sig, body))
            }
        }
        GroundRule::Constraint { body } => format!(":- {}.", body_text(sig, body)),
        GroundRule::Choice { atom, body } => {
            if body.is_empty() {
                format!("{{{}}}.", atom_text(sig, atom))
            } else {
                format!("{{{}}} :- {}.", atom_text(sig, atom), body_text(sig, body))
            }
        }
        GroundRule::CardinalityChoice { atoms } => {
            let list = atoms.iter().map(|a| atom_text(sig, a)).collect::<Vec<_>>().join(",");
            format!("1{{{list}}}.")
        }
    }
}

fn legacy_machinery_text(p: &GroundProgram) -> String {
    let sig = &p.signature;
    let mut out = String::new();
    out.push_str("eq(X,X).\n");
    out.push_str("eq(X,Y) :- eq(Y,X).\n");
    out.push_str("eq(X,Z) :- eq(X,Y), eq(Y,Z).\n");
    for pred in sig.pred_ids() {
        if Some(pred) == p.eq_pred {
            continue;
        }
        let name = sig.pred_name(pred);
        let arity = sig.pred_arity(pred);
        match arity {
            0 => out.push_str(&format!("{name} :- {name}.\n")),
            1 => out.push_str(&format!("{name}(Y) :- {name}(X), eq(X,Y).\n")),
            _ => {
                let ys: Vec<String> = (1..=arity).map(|i| format!("Y{i}")).collect();
                let xs: Vec<String> = (1..=arity).map(|i| format!("X{i}")).collect();
                let eqs: Vec<String> =
                    xs.iter().zip(&ys).map(|(x, y)| format!("eq({x},{y})")).collect();
                out.push_str(&format!(
                    "{name}({}) :- {name}({}), {}.\n",
                    ys.join(","),
                    xs.join(","),
                    eqs.join(", ")
                ));
            }
        }
    }
    out.push_str("{eq(X,Y)}.\n");
    out
}

fn legacy_universe_text(sig: &Signature) -> String {
    let consts: Vec<&str> = sig.const_ids().map(|c| sig.const_name(c)).collect();
    format!("u({}).\n#domain u(X). #domain u(Y).\n#hide u/1.\n", consts.join(";"))
}

/// Deterministic text for a program: rule order is construction order, atom
/// order inside a rule is construction order.  `Legacy` replaces the ground
/// equality machinery by the schematic six-rule block plus the universe
/// declarations; a program without machinery emits the same text in both
/// styles.
pub fn emit_asp_text(p: &GroundProgram, style: EmitStyle) -> String {
    let sig = &p.signature;
    let mut out = String::new();
    match (style, &p.machinery) {
        (EmitStyle::Legacy, Some(mach)) => {
            for rule in &p.rules[..mach.start] {
                out.push_str(&rule_text(sig, rule));
                out.push('\n');
            }
            out.push_str(&legacy_machinery_text(p));
            for rule in &p.rules[mach.end..] {
                out.push_str(&rule_text(sig, rule));
                out.push('\n');
            }
            out.push_str(&legacy_universe_text(sig));
        }
        _ => {
            for rule in &p.rules {
                out.push_str(&rule_text(sig, rule));
                out.push('\n');
            }
        }
    }
    out
}

/// Parse a ground program: facts, disjunctive rules, constraints, choice
/// rules `{a}`, and cardinality-choice rules `1{a,...}`, with `not` for
/// negated body literals.  Constants and predicates are declared by use.
pub fn parse_program(src: &str) -> Result<GroundProgram, ParseError> {
    use crate::lex::{Cursor, Tok};

    let toks = crate::lex::tokenize(src)?;
    let mut cur = Cursor::new(&toks, src);
    let mut sig = Signature::new();
    let mut rules: Vec<GroundRule> = Vec::new();

    fn parse_atom(cur: &mut Cursor, sig: &mut Signature) -> Result<Atom, ParseError> {
        let (pred, line, col) = cur.expect_ident("a predicate name")?;
        let pred = pred.to_owned();
        let mut args = Vec::new();
        if matches!(cur.peek().map(|t| &t.tok), Some(Tok::LParen)) {
            cur.next();
            loop {
                let (name, aline, acol) = cur.expect_ident("a constant name")?;
                let id = match sig.const_id(name) {
                    Some(id) => id,
                    None => sig
                        .add_const(name, crate::theory::ConstKind::Database)
                        .map_err(|_| ParseError::at(aline, acol, ParseErrorKind::ReservedName(name.to_owned())))?,
                };
                args.push(id);
                if matches!(cur.peek().map(|t| &t.tok), Some(Tok::Comma)) {
                    cur.next();
                } else {
                    break;
                }
            }
            cur.expect(&Tok::RParen, "`)` closing the argument list")?;
        }
        let pid = match sig.pred_id(&pred) {
            Some(id) => {
                let expected = sig.pred_arity(id);
                if expected != args.len() {
                    return Err(ParseError::at(
                        line,
                        col,
                        ParseErrorKind::ArityClash { name: pred, expected, found: args.len() },
                    ));
                }
                id
            }
            None => sig
                .add_pred(&pred, args.len())
                .map_err(|_| ParseError::at(line, col, ParseErrorKind::ReservedName(pred.clone())))?,
        };
        Ok(Atom { pred: pid, args })
    }

    fn parse_body(cur: &mut Cursor, sig: &mut Signature) -> Result<Vec<Literal>, ParseError> {
        let mut body = Vec::new();
        loop {
            let neg = matches!(cur.peek().map(|t| &t.tok), Some(Tok::Ident(s)) if s == "not");
            if neg {
                cur.next();
            }
            let atom = parse_atom(cur, sig)?;
            body.push(if neg { Literal::Neg(atom) } else { Literal::Pos(atom) });
            if matches!(cur.peek().map(|t| &t.tok), Some(Tok::Comma)) {
                cur.next();
            } else {
                break;
            }
        }
        Ok(body)
    }

    while !cur.at_end() {
        match cur.peek().map(|t| t.tok.clone()) {
            Some(Tok::ColonDash) => {
                cur.next();
                let body = parse_body(&mut cur, &mut sig)?;
                cur.expect(&Tok::Dot, "`.` ending the constraint")?;
                rules.push(GroundRule::Constraint { body });
            }
            Some(Tok::Nat(1)) => {
                cur.next();
                cur.expect(&Tok::LBrace, "`{` after the lower bound")?;
                let mut atoms = vec![parse_atom(&mut cur, &mut sig)?];
                while matches!(cur.peek().map(|t| &t.tok), Some(Tok::Comma)) {
                    cur.next();
                    atoms.push(parse_atom(&mut cur, &mut sig)?);
                }
                cur.expect(&Tok::RBrace, "`}` closing the rule")?;
                if matches!(cur.peek().map(|t| &t.tok), Some(Tok::ColonDash)) {
                    let (line, col) = cur.here();
                    return Err(ParseError::at(
                        line,
                        col,
                        ParseErrorKind::Unsupported("cardinality-choice rules cannot have a body"),
                    ));
                }
                cur.expect(&Tok::Dot, "`.` ending the rule")?;
                rules.push(GroundRule::CardinalityChoice { atoms });
            }
            Some(Tok::LBrace) => {
                cur.next();
                let atom = parse_atom(&mut cur, &mut sig)?;
                if matches!(cur.peek().map(|t| &t.tok), Some(Tok::Comma)) {
                    let (line, col) = cur.here();
                    return Err(ParseError::at(
                        line,
                        col,
                        ParseErrorKind::Unsupported("choice rules hold a single atom"),
                    ));
                }
                cur.expect(&Tok::RBrace, "`}` closing the choice")?;
                let body = if matches!(cur.peek().map(|t| &t.tok), Some(Tok::ColonDash)) {
                    cur.next();
                    parse_body(&mut cur, &mut sig)?
                } else {
                    Vec::new()
                };
                cur.expect(&Tok::Dot, "`.` ending the rule")?;
                rules.push(GroundRule::Choice { atom, body });
            }
            Some(Tok::Ident(_)) => {
                let mut head = vec![parse_atom(&mut cur, &mut sig)?];
                while matches!(cur.peek().map(|t| &t.tok), Some(Tok::Pipe)) {
                    cur.next();
                    head.push(parse_atom(&mut cur, &mut sig)?);
                }
                let body = if matches!(cur.peek().map(|t| &t.tok), Some(Tok::ColonDash)) {
                    cur.next();
                    parse_body(&mut cur, &mut sig)?
                } else {
                    Vec::new()
                };
                cur.expect(&Tok::Dot, "`.` ending the rule")?;
                if head.len() == 1 && body.is_empty() {
                    rules.push(GroundRule::Fact(head.pop().unwrap()));
                } else {
                    rules.push(GroundRule::Disjunctive { head, body });
                }
            }
            _ => return Err(cur.err_here("a rule")),
        }
    }

    Ok(GroundProgram {
        intensional: sig.pred_ids().collect(),
        eq_pred: sig.pred_id(EQ_NAME),
        signature: sig,
        rules,
        machinery: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::theory::parse_theory;

    fn supplier() -> TheorySpec {
        parse_theory(crate::theory::tests::SUPPLIER).unwrap()
    }

    fn supplier_null() -> TheorySpec {
        parse_theory(crate::theory::tests::SUPPLIER_NULL).unwrap()
    }

    #[test]
    fn delta_to_pi_simplifies_unit_clauses() {
        let t = supplier();
        let p = delta_to_pi(t.signature(), t.delta());
        let facts = p.rules().iter().filter(|r| matches!(r, GroundRule::Fact(_))).count();
        let cards = p
            .rules()
            .iter()
            .filter(|r| matches!(r, GroundRule::CardinalityChoice { .. }))
            .count();
        assert_eq!((facts, cards), (8, 1));
        match p.rules().last().unwrap() {
            GroundRule::CardinalityChoice { atoms } => assert_eq!(atoms.len(), 2),
            other => panic!("expected a cardinality rule, got {other:?}"),
        }
    }

    #[test]
    fn delta_to_pi_of_empty_delta() {
        let t = parse_theory("#const a. #pred p/1.").unwrap();
        let p = delta_to_pi(t.signature(), t.delta());
        assert!(p.rules().is_empty());
    }

    #[test]
    fn una_pairs_theory_mode() {
        let t = supplier_null();
        let pairs = una_pairs(&t, &UnaMode::Theory).unwrap();
        assert_eq!(pairs.len(), 13);
        let sig = t.signature();
        let omega = sig.const_id("omega").unwrap();
        let acme = sig.const_id("acme").unwrap();
        let foo = sig.const_id("foo").unwrap();
        assert!(!pairs.contains(&(acme.min(omega), acme.max(omega))));
        assert!(!pairs.contains(&(foo.min(omega), foo.max(omega))));
    }

    #[test]
    fn una_pairs_list_modes() {
        let t = parse_theory("p(a;b;c).").unwrap();
        let pairs = una_pairs(&t, &UnaMode::Una(vec!["a".into(), "b".into()])).unwrap();
        assert_eq!(pairs.len(), 1);

        let tn = supplier_null();
        let pairs = una_pairs(&tn, &UnaMode::NoUna(vec!["omega".into()])).unwrap();
        assert_eq!(pairs.len(), 15);

        let err = una_pairs(&t, &UnaMode::Una(vec!["zz".into()])).unwrap_err();
        assert!(matches!(err, TranslateError::UnknownConstant(_)));
    }

    #[test]
    fn eq_rewrite_rule_counts() {
        // p(a)|p(b) over two constants
        let src = "p(a)|p(b).";
        let p = parse_program(src).unwrap();
        let rw = eq_rewrite(&p).unwrap();
        let n = 2usize;
        let facts = rw.rules().iter().filter(|r| matches!(r, GroundRule::Fact(_))).count();
        let choices = rw.rules().iter().filter(|r| matches!(r, GroundRule::Choice { .. })).count();
        let horn = rw
            .rules()
            .iter()
            .filter(|r| matches!(r, GroundRule::Disjunctive { head, .. } if head.len() == 1))
            .count();
        assert_eq!(facts, n); // reflexivity
        assert_eq!(choices, n * n); // one per ordered pair
        // symmetry + transitivity + substitution for the unary p
        assert_eq!(horn, n * n + n * n * n + n * n);
        // original disjunction is still the first rule
        assert!(matches!(&rw.rules()[0], GroundRule::Disjunctive { head, .. } if head.len() == 2));
        assert_eq!(rw.rules().len(), 1 + n + n * n + n * n * n + n * n + n * n);
    }

    #[test]
    fn eq_rewrite_single_constant() {
        let p = parse_program("q(a).").unwrap();
        let rw = eq_rewrite(&p).unwrap();
        // fact, eq(a,a), symmetry, transitivity, substitution, choice
        assert_eq!(rw.rules().len(), 1 + 1 + 1 + 1 + 1 + 1);
        assert!(rw.eq_pred().is_some());
    }

    #[test]
    fn eq_rewrite_refuses_reserved_collision() {
        let p = parse_program("p(a).").unwrap();
        let rw = eq_rewrite(&p).unwrap();
        assert_eq!(eq_rewrite(&rw).unwrap_err(), TranslateError::ReservedPredicateInUse);
    }

    #[test]
    fn compile_appends_constraints_after_machinery() {
        let t = supplier_null();
        let prog = compile(&t).unwrap();
        let constraints: Vec<&GroundRule> = prog
            .rules()
            .iter()
            .filter(|r| matches!(r, GroundRule::Constraint { .. }))
            .collect();
        assert_eq!(constraints.len(), 13);
        let eq = prog.eq_pred().unwrap();
        for c in constraints {
            match c {
                GroundRule::Constraint { body } => {
                    assert_eq!(body.len(), 1);
                    assert_eq!(body[0].atom().pred, eq);
                }
                _ => unreachable!(),
            }
        }
    }

    #[test]
    fn modern_emission_is_ground() {
        let p = parse_program("p(a)|p(b).").unwrap();
        let rw = eq_rewrite(&p).unwrap();
        let text = emit_asp_text(&rw, EmitStyle::Modern);
        assert!(text.starts_with("p(a)|p(b).\neq(a,a).\neq(b,b).\n"));
        assert!(text.contains("eq(a,b) :- eq(b,a).\n"));
        assert!(text.contains("p(b) :- p(a), eq(a,b).\n"));
        assert!(text.contains("{eq(a,b)}.\n"));
        assert!(!text.contains("#domain"));
    }

    #[test]
    fn legacy_emission_matches_schema() {
        let p = parse_program("p(a)|p(b).").unwrap();
        let rw = eq_rewrite(&p).unwrap();
        let text = emit_asp_text(&rw, EmitStyle::Legacy);
        let expected = "\
p(a)|p(b).
eq(X,X).
eq(X,Y) :- eq(Y,X).
eq(X,Z) :- eq(X,Y), eq(Y,Z).
p(Y) :- p(X), eq(X,Y).
{eq(X,Y)}.
u(a;b).
#domain u(X). #domain u(Y).
#hide u/1.
";
        assert_eq!(text, expected);
    }

    #[test]
    fn emit_empty_program() {
        let p = parse_program("").unwrap();
        assert_eq!(emit_asp_text(&p, EmitStyle::Modern), "");
    }

    #[test]
    fn parse_program_round_trips_modern_text() {
        let src = "p(a)|p(b).\n1{q(a),q(b)}.\n{p(a)}.\n:- q(a), not p(b).\nr :- p(a).\n";
        let p = parse_program(src).unwrap();
        assert_eq!(emit_asp_text(&p, EmitStyle::Modern), src);
    }

    #[test]
    fn parse_program_rejects_card_with_body() {
        let err = parse_program("1{p(a)} :- q.").unwrap_err();
        assert!(matches!(err.kind, ParseErrorKind::Unsupported(_)));
    }
}
