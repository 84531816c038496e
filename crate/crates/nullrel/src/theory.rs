//! The source language: signatures, positive ground clauses, and theories.
//!
//! A theory is given by a signature (object constants split into database
//! constants and null values, plus predicates with fixed arities), a finite
//! set of positive ground clauses `A1 | ... | Ar`, and a set Σ of chosen
//! optional unique name axioms.  A unique name axiom `a != b` is required
//! when both constants are database constants and optional otherwise; Σ may
//! only contain optional ones.
//!
//! The textual format is line oriented with `%` comments:
//!
//! ```text
//! part(p1;p2;p3).                    % semicolon pooling expands to facts
//! supplies(acme,p1;;foo,p2).         % `;;` separates whole argument tuples
//! supplies(foo,p1) | supplies(foo,p3).
//! #null omega.                       % declares a null value
//! #una omega p1.                     % puts {omega, p1} into Σ
//! #const a.                          % declares an unused database constant
//! #pred q/2.                         % declares an unused predicate
//! ```
//!
//! Constants and predicates are otherwise declared by first use.  Pooling
//! (`;` and `;;`) is only allowed in single-atom clauses, where it expands
//! to separate facts.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

/// Name reserved for the equality-encoding predicate introduced by the
/// translation; it may not appear in a user signature.
pub const EQ_NAME: &str = "eq";

/// Index of an object constant in its signature, in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ConstId(pub u32);

/// Index of a predicate in its signature, in declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PredId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ConstKind {
    Database,
    Null,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct ConstDecl {
    name: String,
    kind: ConstKind,
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct PredDecl {
    name: String,
    arity: usize,
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SignatureError {
    #[error("duplicate constant `{0}`")]
    DuplicateConstant(String),
    #[error("duplicate predicate `{0}`")]
    DuplicatePredicate(String),
    #[error("`{0}` is reserved for the equality encoding")]
    ReservedName(String),
}

/// Finitely many object constants and predicates.  Declaration order is
/// significant: it fixes the canonical order of atoms, diagrams, and
/// emitted rules everywhere downstream.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Signature {
    consts: Vec<ConstDecl>,
    preds: Vec<PredDecl>,
}

impl Signature {
    pub fn new() -> Self {
        Signature::default()
    }

    pub fn add_const(&mut self, name: &str, kind: ConstKind) -> Result<ConstId, SignatureError> {
        if name == EQ_NAME {
            return Err(SignatureError::ReservedName(name.to_owned()));
        }
        if self.const_id(name).is_some() {
            return Err(SignatureError::DuplicateConstant(name.to_owned()));
        }
        self.consts.push(ConstDecl { name: name.to_owned(), kind });
        Ok(ConstId(self.consts.len() as u32 - 1))
    }

    pub fn add_pred(&mut self, name: &str, arity: usize) -> Result<PredId, SignatureError> {
        if name == EQ_NAME {
            return Err(SignatureError::ReservedName(name.to_owned()));
        }
        if self.pred_id(name).is_some() {
            return Err(SignatureError::DuplicatePredicate(name.to_owned()));
        }
        self.preds.push(PredDecl { name: name.to_owned(), arity });
        Ok(PredId(self.preds.len() as u32 - 1))
    }

    /// Append the reserved binary `eq` predicate.  Only the translation may
    /// do this; the result is no longer a valid source signature.
    pub(crate) fn add_eq_pred(&mut self) -> PredId {
        debug_assert!(self.pred_id(EQ_NAME).is_none());
        self.preds.push(PredDecl { name: EQ_NAME.to_owned(), arity: 2 });
        PredId(self.preds.len() as u32 - 1)
    }

    pub fn num_consts(&self) -> usize {
        self.consts.len()
    }

    pub fn num_preds(&self) -> usize {
        self.preds.len()
    }

    pub fn const_id(&self, name: &str) -> Option<ConstId> {
        self.consts.iter().position(|c| c.name == name).map(|i| ConstId(i as u32))
    }

    pub fn pred_id(&self, name: &str) -> Option<PredId> {
        self.preds.iter().position(|p| p.name == name).map(|i| PredId(i as u32))
    }

    pub fn const_name(&self, id: ConstId) -> &str {
        &self.consts[id.0 as usize].name
    }

    pub fn pred_name(&self, id: PredId) -> &str {
        &self.preds[id.0 as usize].name
    }

    pub fn pred_arity(&self, id: PredId) -> usize {
        self.preds[id.0 as usize].arity
    }

    pub fn const_kind(&self, id: ConstId) -> ConstKind {
        self.consts[id.0 as usize].kind
    }

    pub fn is_null(&self, id: ConstId) -> bool {
        self.const_kind(id) == ConstKind::Null
    }

    pub fn const_ids(&self) -> impl Iterator<Item = ConstId> {
        (0..self.consts.len() as u32).map(ConstId)
    }

    pub fn pred_ids(&self) -> impl Iterator<Item = PredId> {
        (0..self.preds.len() as u32).map(PredId)
    }

    pub fn database_consts(&self) -> impl Iterator<Item = ConstId> + '_ {
        self.const_ids().filter(|&c| !self.is_null(c))
    }

    /// Number of ground atoms over this signature, saturating on overflow.
    pub fn herbrand_base_size(&self) -> usize {
        let n = self.num_consts();
        self.preds
            .iter()
            .map(|p| n.checked_pow(p.arity as u32).unwrap_or(usize::MAX))
            .fold(0usize, |a, b| a.saturating_add(b))
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TheoryError {
    #[error("clause has no disjuncts")]
    EmptyClause,
    #[error("predicate `{pred}` expects {expected} arguments, got {found}")]
    ArityMismatch { pred: String, expected: usize, found: usize },
    #[error("atom refers to a constant or predicate outside the signature")]
    OutOfSignature,
    #[error("Σ pair ({0}, {1}) repeats a constant")]
    SigmaSamePair(String, String),
    #[error("Σ pair ({0}, {1}) is required, not optional: both are database constants")]
    SigmaBothDatabase(String, String),
}

/// A ground atom `P(c1, ..., cn)`.  The predicate is never the equality
/// symbol; equality lives in formulas and diagrams, not in atoms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Atom {
    pub pred: PredId,
    pub args: Vec<ConstId>,
}

impl Atom {
    pub fn new(sig: &Signature, pred: PredId, args: Vec<ConstId>) -> Result<Self, TheoryError> {
        if pred.0 as usize >= sig.num_preds() || args.iter().any(|c| c.0 as usize >= sig.num_consts()) {
            return Err(TheoryError::OutOfSignature);
        }
        let expected = sig.pred_arity(pred);
        if args.len() != expected {
            return Err(TheoryError::ArityMismatch {
                pred: sig.pred_name(pred).to_owned(),
                expected,
                found: args.len(),
            });
        }
        Ok(Atom { pred, args })
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> AtomDisplay<'a> {
        AtomDisplay { atom: self, sig }
    }
}

pub struct AtomDisplay<'a> {
    atom: &'a Atom,
    sig: &'a Signature,
}

impl fmt::Display for AtomDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.sig.pred_name(self.atom.pred))?;
        if !self.atom.args.is_empty() {
            write!(f, "(")?;
            for (i, a) in self.atom.args.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{}", self.sig.const_name(*a))?;
            }
            write!(f, ")")?;
        }
        Ok(())
    }
}

/// A positive ground clause `A1 | ... | Ar`, `r >= 1`.  Duplicate disjuncts
/// are dropped on construction; the order of the rest is preserved.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Clause {
    atoms: Vec<Atom>,
}

impl Clause {
    pub fn new(atoms: Vec<Atom>) -> Result<Self, TheoryError> {
        if atoms.is_empty() {
            return Err(TheoryError::EmptyClause);
        }
        let mut seen = BTreeSet::new();
        let atoms = atoms.into_iter().filter(|a| seen.insert(a.clone())).collect();
        Ok(Clause { atoms })
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn is_unit(&self) -> bool {
        self.atoms.len() == 1
    }
}

/// A theory: signature, clauses Δ, and the chosen optional unique name
/// axioms Σ (unordered constant pairs, stored with the smaller id first).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TheorySpec {
    signature: Signature,
    delta: Vec<Clause>,
    sigma: BTreeSet<(ConstId, ConstId)>,
}

impl TheorySpec {
    pub fn new(
        signature: Signature,
        delta: Vec<Clause>,
        sigma: BTreeSet<(ConstId, ConstId)>,
    ) -> Result<Self, TheoryError> {
        for clause in &delta {
            for atom in clause.atoms() {
                // Re-validate against this signature: clauses may have been
                // built against another one.
                Atom::new(&signature, atom.pred, atom.args.clone())?;
            }
        }
        let mut norm = BTreeSet::new();
        for &(a, b) in &sigma {
            if a.0 as usize >= signature.num_consts() || b.0 as usize >= signature.num_consts() {
                return Err(TheoryError::OutOfSignature);
            }
            if a == b {
                return Err(TheoryError::SigmaSamePair(
                    signature.const_name(a).to_owned(),
                    signature.const_name(b).to_owned(),
                ));
            }
            if !signature.is_null(a) && !signature.is_null(b) {
                return Err(TheoryError::SigmaBothDatabase(
                    signature.const_name(a).to_owned(),
                    signature.const_name(b).to_owned(),
                ));
            }
            norm.insert((a.min(b), a.max(b)));
        }
        let mut seen = BTreeSet::new();
        let delta = delta.into_iter().filter(|c| seen.insert(c.clone())).collect();
        Ok(TheorySpec { signature, delta, sigma: norm })
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn delta(&self) -> &[Clause] {
        &self.delta
    }

    pub fn sigma(&self) -> &BTreeSet<(ConstId, ConstId)> {
        &self.sigma
    }
}

/// All unordered pairs of distinct database constants: the unique name
/// axioms that every theory over `sig` must contain.
pub fn required_una_pairs(sig: &Signature) -> BTreeSet<(ConstId, ConstId)> {
    let db: Vec<ConstId> = sig.database_consts().collect();
    let mut out = BTreeSet::new();
    for (i, &a) in db.iter().enumerate() {
        for &b in &db[i + 1..] {
            out.insert((a, b));
        }
    }
    out
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseErrorKind {
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("unexpected {found}, expected {expected}")]
    UnexpectedToken { found: String, expected: &'static str },
    #[error("unexpected end of input, expected {expected}")]
    UnexpectedEnd { expected: &'static str },
    #[error("predicate `{name}` used with {found} arguments but declared with {expected}")]
    ArityClash { name: String, expected: usize, found: usize },
    #[error("`{0}` is reserved for the equality encoding")]
    ReservedName(String),
    #[error("`{0}` is declared both as a database constant and as a null value")]
    ConflictingConstKind(String),
    #[error("unknown constant `{0}` in #una")]
    UnaUnknownConstant(String),
    #[error("#una pair ({0}, {1}) is required, not optional: both are database constants")]
    UnaBothDatabase(String, String),
    #[error("#una pair repeats the constant `{0}`")]
    UnaSamePair(String),
    #[error("argument pooling is only allowed in single-atom clauses")]
    PoolingInDisjunction,
    #[error("{0}")]
    Unsupported(&'static str),
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}, column {col}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub kind: ParseErrorKind,
}

impl ParseError {
    pub(crate) fn at(line: usize, col: usize, kind: ParseErrorKind) -> Self {
        ParseError { line, col, kind }
    }
}

/// One atom as written, before pooling expansion: for each `;;`-separated
/// tuple, each argument position carries its `;`-separated alternatives.
#[derive(Debug)]
struct AtomTpl {
    pred: String,
    /// tuples -> positions -> alternatives; a bare `p` is one empty tuple.
    tuples: Vec<Vec<Vec<String>>>,
    line: usize,
    col: usize,
}

impl AtomTpl {
    fn is_plain(&self) -> bool {
        self.tuples.len() == 1 && self.tuples[0].iter().all(|alts| alts.len() == 1)
    }
}

#[derive(Debug)]
enum Stmt {
    Null { name: String, line: usize, col: usize },
    Const { name: String, line: usize, col: usize },
    Pred { name: String, arity: usize, line: usize, col: usize },
    Una { a: String, b: String, line: usize, col: usize },
    Clause { atoms: Vec<AtomTpl> },
}

use crate::lex::{Cursor, Tok};

fn parse_atom_tpl(cur: &mut Cursor) -> Result<AtomTpl, ParseError> {
    let (pred, line, col) = cur.expect_ident("a predicate name")?;
    let mut tuples = Vec::new();
    if matches!(cur.peek().map(|t| &t.tok), Some(Tok::LParen)) {
        cur.next();
        loop {
            // one tuple: positions separated by `,`
            let mut positions = Vec::new();
            loop {
                // one position: alternatives separated by `;`
                let mut alts = Vec::new();
                loop {
                    let (name, _, _) = cur.expect_ident("a constant name")?;
                    alts.push(name.to_owned());
                    if matches!(cur.peek().map(|t| &t.tok), Some(Tok::Semi)) {
                        cur.next();
                    } else {
                        break;
                    }
                }
                positions.push(alts);
                if matches!(cur.peek().map(|t| &t.tok), Some(Tok::Comma)) {
                    cur.next();
                } else {
                    break;
                }
            }
            tuples.push(positions);
            if matches!(cur.peek().map(|t| &t.tok), Some(Tok::SemiSemi)) {
                cur.next();
            } else {
                break;
            }
        }
        cur.expect(&Tok::RParen, "`)` closing the argument list")?;
    } else {
        tuples.push(Vec::new());
    }
    Ok(AtomTpl { pred: pred.to_owned(), tuples, line, col })
}

fn parse_statements(cur: &mut Cursor) -> Result<Vec<Stmt>, ParseError> {
    let mut stmts = Vec::new();
    while !cur.at_end() {
        match cur.peek().map(|t| t.tok.clone()) {
            Some(Tok::Directive(d)) => {
                let t = cur.next().unwrap();
                let (line, col) = (t.line, t.col);
                match d.as_str() {
                    "null" | "const" => {
                        let (name, _, _) = cur.expect_ident("a constant name")?;
                        let name = name.to_owned();
                        cur.expect(&Tok::Dot, "`.` ending the directive")?;
                        if d == "null" {
                            stmts.push(Stmt::Null { name, line, col });
                        } else {
                            stmts.push(Stmt::Const { name, line, col });
                        }
                    }
                    "pred" => {
                        let (name, _, _) = cur.expect_ident("a predicate name")?;
                        let name = name.to_owned();
                        cur.expect(&Tok::Slash, "`/` before the arity")?;
                        let arity = match cur.peek().map(|t| &t.tok) {
                            Some(Tok::Nat(n)) => {
                                let n = *n;
                                cur.next();
                                n
                            }
                            _ => return Err(cur.err_here("an arity")),
                        };
                        cur.expect(&Tok::Dot, "`.` ending the directive")?;
                        stmts.push(Stmt::Pred { name, arity, line, col });
                    }
                    "una" => {
                        let (a, _, _) = cur.expect_ident("a constant name")?;
                        let a = a.to_owned();
                        let (b, _, _) = cur.expect_ident("a constant name")?;
                        let b = b.to_owned();
                        cur.expect(&Tok::Dot, "`.` ending the directive")?;
                        stmts.push(Stmt::Una { a, b, line, col });
                    }
                    _ => {
                        return Err(ParseError::at(
                            line,
                            col,
                            ParseErrorKind::UnexpectedToken {
                                found: format!("`#{d}`"),
                                expected: "#null, #const, #pred, or #una",
                            },
                        ))
                    }
                }
            }
            Some(Tok::Ident(_)) => {
                let mut atoms = vec![parse_atom_tpl(cur)?];
                while matches!(cur.peek().map(|t| &t.tok), Some(Tok::Pipe)) {
                    cur.next();
                    atoms.push(parse_atom_tpl(cur)?);
                }
                cur.expect(&Tok::Dot, "`.` ending the clause")?;
                stmts.push(Stmt::Clause { atoms });
            }
            _ => return Err(cur.err_here("a clause or a directive")),
        }
    }
    Ok(stmts)
}

struct Builder {
    sig: Signature,
    nulls: BTreeSet<String>,
}

impl Builder {
    fn declare_const(&mut self, name: &str, line: usize, col: usize) -> Result<ConstId, ParseError> {
        if let Some(id) = self.sig.const_id(name) {
            return Ok(id);
        }
        let kind = if self.nulls.contains(name) { ConstKind::Null } else { ConstKind::Database };
        self.sig
            .add_const(name, kind)
            .map_err(|_| ParseError::at(line, col, ParseErrorKind::ReservedName(name.to_owned())))
    }

    fn declare_pred(&mut self, name: &str, arity: usize, line: usize, col: usize) -> Result<PredId, ParseError> {
        if let Some(id) = self.sig.pred_id(name) {
            let expected = self.sig.pred_arity(id);
            if expected != arity {
                return Err(ParseError::at(
                    line,
                    col,
                    ParseErrorKind::ArityClash { name: name.to_owned(), expected, found: arity },
                ));
            }
            return Ok(id);
        }
        self.sig
            .add_pred(name, arity)
            .map_err(|_| ParseError::at(line, col, ParseErrorKind::ReservedName(name.to_owned())))
    }
}

/// Parse a theory from source text.
pub fn parse_theory(src: &str) -> Result<TheorySpec, ParseError> {
    let toks = crate::lex::tokenize(src)?;
    let mut cur = Cursor::new(&toks, src);
    let stmts = parse_statements(&mut cur)?;

    // Null declarations apply to the whole source, regardless of where the
    // constant is first used.
    let mut nulls = BTreeSet::new();
    for s in &stmts {
        if let Stmt::Null { name, .. } = s {
            nulls.insert(name.clone());
        }
    }
    for s in &stmts {
        if let Stmt::Const { name, line, col } = s {
            if nulls.contains(name) {
                return Err(ParseError::at(*line, *col, ParseErrorKind::ConflictingConstKind(name.clone())));
            }
        }
    }

    let mut b = Builder { sig: Signature::new(), nulls };
    let mut delta: Vec<Clause> = Vec::new();
    let mut unas: Vec<(String, String, usize, usize)> = Vec::new();

    for s in &stmts {
        match s {
            Stmt::Null { name, line, col } | Stmt::Const { name, line, col } => {
                b.declare_const(name, *line, *col)?;
            }
            Stmt::Pred { name, arity, line, col } => {
                b.declare_pred(name, *arity, *line, *col)?;
            }
            Stmt::Una { a, b: bb, line, col } => {
                unas.push((a.clone(), bb.clone(), *line, *col));
            }
            Stmt::Clause { atoms } => {
                // Declare predicates and constants in source order, then
                // expand pooling.
                let mut expanded: Vec<Vec<Atom>> = Vec::new();
                for tpl in atoms {
                    if atoms.len() > 1 && !tpl.is_plain() {
                        return Err(ParseError::at(tpl.line, tpl.col, ParseErrorKind::PoolingInDisjunction));
                    }
                    let mut atom_group = Vec::new();
                    let arity = tpl.tuples[0].len();
                    let pred = b.declare_pred(&tpl.pred, arity, tpl.line, tpl.col)?;
                    for tuple in &tpl.tuples {
                        if tuple.len() != arity {
                            return Err(ParseError::at(
                                tpl.line,
                                tpl.col,
                                ParseErrorKind::ArityClash {
                                    name: tpl.pred.clone(),
                                    expected: arity,
                                    found: tuple.len(),
                                },
                            ));
                        }
                        let mut ids: Vec<Vec<ConstId>> = Vec::new();
                        for alts in tuple {
                            let mut alt_ids = Vec::new();
                            for name in alts {
                                alt_ids.push(b.declare_const(name, tpl.line, tpl.col)?);
                            }
                            ids.push(alt_ids);
                        }
                        // cross product over positions, leftmost varying slowest
                        let mut combos: Vec<Vec<ConstId>> = vec![Vec::new()];
                        for alt_ids in &ids {
                            let mut next = Vec::new();
                            for combo in &combos {
                                for &id in alt_ids {
                                    let mut c = combo.clone();
                                    c.push(id);
                                    next.push(c);
                                }
                            }
                            combos = next;
                        }
                        for args in combos {
                            atom_group.push(Atom { pred, args });
                        }
                    }
                    expanded.push(atom_group);
                }
                if expanded.len() == 1 {
                    // single-atom clause: each pooled atom is its own fact
                    for atom in expanded.pop().unwrap() {
                        delta.push(Clause::new(vec![atom]).unwrap());
                    }
                } else {
                    let atoms: Vec<Atom> = expanded.into_iter().map(|mut g| g.pop().unwrap()).collect();
                    delta.push(Clause::new(atoms).unwrap());
                }
            }
        }
    }

    let mut sigma = BTreeSet::new();
    for (a, bname, line, col) in unas {
        let ca = b
            .sig
            .const_id(&a)
            .ok_or_else(|| ParseError::at(line, col, ParseErrorKind::UnaUnknownConstant(a.clone())))?;
        let cb = b
            .sig
            .const_id(&bname)
            .ok_or_else(|| ParseError::at(line, col, ParseErrorKind::UnaUnknownConstant(bname.clone())))?;
        if ca == cb {
            return Err(ParseError::at(line, col, ParseErrorKind::UnaSamePair(a)));
        }
        if !b.sig.is_null(ca) && !b.sig.is_null(cb) {
            return Err(ParseError::at(line, col, ParseErrorKind::UnaBothDatabase(a, bname)));
        }
        sigma.insert((ca.min(cb), ca.max(cb)));
    }

    // Deduplicate clauses, keeping first occurrences.
    let mut seen = BTreeSet::new();
    let delta: Vec<Clause> = delta.into_iter().filter(|c| seen.insert(c.clone())).collect();

    Ok(TheorySpec { signature: b.sig, delta, sigma })
}

/// Canonical printer.  `parse_theory(print_theory(t)) == t` for every valid
/// theory: every constant and predicate is declared explicitly, in
/// declaration order, before the clauses.
pub fn print_theory(t: &TheorySpec) -> String {
    let sig = t.signature();
    let mut out = String::new();
    for c in sig.const_ids() {
        let dir = if sig.is_null(c) { "#null" } else { "#const" };
        out.push_str(&format!("{dir} {}.\n", sig.const_name(c)));
    }
    for p in sig.pred_ids() {
        out.push_str(&format!("#pred {}/{}.\n", sig.pred_name(p), sig.pred_arity(p)));
    }
    for clause in t.delta() {
        let parts: Vec<String> = clause.atoms().iter().map(|a| a.display(sig).to_string()).collect();
        out.push_str(&parts.join(" | "));
        out.push_str(".\n");
    }
    for &(a, b) in t.sigma() {
        out.push_str(&format!("#una {} {}.\n", sig.const_name(a), sig.const_name(b)));
    }
    out
}
