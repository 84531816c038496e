//! Conversions between answer sets (with `eq` atoms), diagrams (with
//! equalities), and quotient interpretations.
//!
//! A valid diagram determines a DCA-interpretation up to isomorphism, so
//! isomorphism-respecting comparison of models reduces to set equality of
//! diagrams.  The conversions validate the closure conditions eagerly
//! rather than trusting upstream: an answer set whose `eq` atoms are not an
//! equivalence relation, or whose atoms are not substitution closed, means
//! a solver bug and is reported as an error here.

use thiserror::Error;

use crate::fo::{ClosureViolation, DcaInterpretation, Diagram, FoError};
use crate::solver::CandidateModel;
use crate::theory::{ConstId, Signature, EQ_NAME};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DiagramError {
    #[error("the signature has no `{}` predicate to decode", EQ_NAME)]
    NoEqPredicate,
    #[error(transparent)]
    Closure(#[from] ClosureViolation),
    #[error(transparent)]
    Fo(#[from] FoError),
}

/// Split an answer set over a signature containing `eq` into a diagram:
/// `eq(a,b)` atoms become equality pairs, everything else passes through.
/// The closure conditions are validated before returning.
pub fn answer_set_to_diagram(m: &CandidateModel, sig: &Signature) -> Result<Diagram, DiagramError> {
    let eq = sig.pred_id(EQ_NAME).ok_or(DiagramError::NoEqPredicate)?;
    let mut diagram = Diagram::default();
    for atom in m {
        if atom.pred == eq {
            diagram.equalities.insert((atom.args[0], atom.args[1]));
        } else {
            diagram.atoms.insert(atom.clone());
        }
    }
    diagram.validate(sig)?;
    Ok(diagram)
}

/// The interpretation a diagram denotes: the universe is the set of
/// equivalence classes of the diagram's equalities, each represented by its
/// least constant in declaration order; a predicate holds on a class tuple
/// exactly when it holds on a representative tuple in the diagram.
pub fn quotient(d: &Diagram, sig: &Signature) -> Result<DcaInterpretation, DiagramError> {
    d.validate(sig)?;
    let const_map: Vec<ConstId> = sig
        .const_ids()
        .map(|c| {
            d.equalities
                .iter()
                .filter(|&&(a, _)| a == c)
                .map(|&(_, b)| b)
                .min()
                .expect("validated diagrams are reflexive")
        })
        .collect();
    let mut extensions = vec![std::collections::BTreeSet::new(); sig.num_preds()];
    for atom in &d.atoms {
        let elems: Vec<ConstId> = atom.args.iter().map(|&c| const_map[c.0 as usize]).collect();
        extensions[atom.pred.0 as usize].insert(elems);
    }
    Ok(DcaInterpretation::from_parts(sig, const_map, extensions)?)
}

/// Whether two diagrams denote isomorphic interpretations.  Because a
/// diagram pins its interpretation down up to isomorphism, this is set
/// equality once both closures have been validated.
pub fn diagrams_equal_up_to_iso(d1: &Diagram, d2: &Diagram, sig: &Signature) -> Result<bool, DiagramError> {
    d1.validate(sig)?;
    d2.validate(sig)?;
    Ok(d1 == d2)
}

/// Convert every model of a compiled program into a diagram, sorted
/// canonically.
pub fn answer_sets_to_diagrams(
    models: &[CandidateModel],
    sig: &Signature,
) -> Result<Vec<Diagram>, DiagramError> {
    let mut out = models
        .iter()
        .map(|m| answer_set_to_diagram(m, sig))
        .collect::<Result<Vec<_>, _>>()?;
    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fo::diagram_of;
    use crate::solver::{enumerate_stable_models, SolveLimits};
    use crate::theory::{parse_theory, Atom};
    use crate::translate::compile;
    use std::collections::BTreeSet;

    fn atom(sig: &Signature, pred: &str, args: &[&str]) -> Atom {
        Atom::new(
            sig,
            sig.pred_id(pred).unwrap(),
            args.iter().map(|a| sig.const_id(a).unwrap()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn answer_sets_of_the_compiled_supplier_theory_decode_to_diagrams() {
        let t = parse_theory(crate::theory::tests::SUPPLIER_NULL).unwrap();
        let prog = compile(&t).unwrap();
        let models = enumerate_stable_models(&prog, &SolveLimits::forced()).unwrap();
        let got = answer_sets_to_diagrams(&models, prog.signature()).unwrap();
        let expected = crate::fo::tests::supplier_null_expected_diagrams(t.signature());
        assert_eq!(got, expected);
    }

    #[test]
    fn reflexive_singleton_decodes() {
        let t = parse_theory("#const a.").unwrap();
        let prog = compile(&t).unwrap();
        let sig = prog.signature();
        let a = sig.const_id("a").unwrap();
        let m: CandidateModel = [atom(sig, "eq", &["a", "a"])].into();
        let d = answer_set_to_diagram(&m, sig).unwrap();
        assert!(d.atoms.is_empty());
        assert_eq!(d.equalities, [(a, a)].into());
    }

    #[test]
    fn closure_violations_are_reported() {
        let t = parse_theory("#null a. #null b. p(a).").unwrap();
        let prog = compile(&t).unwrap();
        let sig = prog.signature();
        // missing eq(b,a) and p(b)
        let m: CandidateModel = [
            atom(sig, "p", &["a"]),
            atom(sig, "eq", &["a", "a"]),
            atom(sig, "eq", &["b", "b"]),
            atom(sig, "eq", &["a", "b"]),
        ]
        .into();
        assert!(matches!(
            answer_set_to_diagram(&m, sig),
            Err(DiagramError::Closure(ClosureViolation::MissingSymmetric(..)))
        ));
    }

    #[test]
    fn quotient_merges_classes() {
        let t = parse_theory("#null a. #null b. p(a).").unwrap();
        let sig = t.signature();
        let a = sig.const_id("a").unwrap();
        let b = sig.const_id("b").unwrap();
        let pa = atom(sig, "p", &["a"]);
        let pb = atom(sig, "p", &["b"]);

        let merged = Diagram {
            atoms: [pa.clone(), pb.clone()].into(),
            equalities: [(a, a), (b, b), (a, b), (b, a)].into(),
        };
        let i = quotient(&merged, sig).unwrap();
        assert_eq!(i.universe(), [a]);
        assert!(i.holds_atom(pa.pred, &[a]));

        let split = Diagram { atoms: [pa.clone()].into(), equalities: [(a, a), (b, b)].into() };
        let i = quotient(&split, sig).unwrap();
        assert_eq!(i.universe(), [a, b]);
        assert!(i.holds_atom(pa.pred, &[a]));
        assert!(!i.holds_atom(pa.pred, &[b]));
    }

    #[test]
    fn quotient_of_a_discrete_diagram_is_discrete() {
        let t = parse_theory("#const a. #const b. #const c. #pred p/1.").unwrap();
        let sig = t.signature();
        let d = Diagram {
            atoms: BTreeSet::new(),
            equalities: sig.const_ids().map(|c| (c, c)).collect(),
        };
        let i = quotient(&d, sig).unwrap();
        assert_eq!(i.universe().len(), 3);
        assert!(i.extension(sig.pred_id("p").unwrap()).is_empty());
    }

    #[test]
    fn diagram_round_trip_through_quotient() {
        let t = parse_theory(crate::theory::tests::SUPPLIER_NULL).unwrap();
        let sig = t.signature();
        for d in crate::fo::tests::supplier_null_expected_diagrams(sig) {
            let i = quotient(&d, sig).unwrap();
            assert_eq!(diagram_of(&i, sig), d);
        }
    }

    #[test]
    fn iso_comparison_is_set_equality_after_validation() {
        let t = parse_theory(crate::theory::tests::SUPPLIER_NULL).unwrap();
        let sig = t.signature();
        let ds = crate::fo::tests::supplier_null_expected_diagrams(sig);
        assert!(diagrams_equal_up_to_iso(&ds[0], &ds[0], sig).unwrap());
        assert!(!diagrams_equal_up_to_iso(&ds[0], &ds[1], sig).unwrap());
        assert!(!diagrams_equal_up_to_iso(&ds[1], &ds[2], sig).unwrap());
    }
}
