//! End-to-end acceptance suite.  One test per criterion; each prints a
//! PASS line once its assertions hold (visible with `--nocapture`).
//!
//! Everything asserted here is exact: model sets, diagram sets, counts,
//! and emitted text, with no tolerances anywhere.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use nullrel::cli::{check_theory, random_theory, TheoryBounds};
use nullrel::diagrams::{answer_sets_to_diagrams, quotient};
use nullrel::fo::{
    diagram_of, enumerate_dca_models, herbrand_models, minimal_dca_models, Diagram, Formula,
    OracleLimits, Term,
};
use nullrel::solver::{enumerate_stable_models, is_stable, reduct_stable, CandidateModel, SolveLimits};
use nullrel::theory::{parse_theory, print_theory, Atom, ConstId, ConstKind, PredId, Signature};
use nullrel::translate::{
    compile, delta_to_pi, emit_asp_text, eq_rewrite, parse_program, EmitStyle, GroundProgram,
    GroundRule, Literal,
};

fn atom(sig: &Signature, pred: &str, args: &[&str]) -> Atom {
    Atom::new(
        sig,
        sig.pred_id(pred).unwrap_or_else(|| panic!("no predicate {pred}")),
        args.iter()
            .map(|a| sig.const_id(a).unwrap_or_else(|| panic!("no constant {a}")))
            .collect(),
    )
    .unwrap()
}

fn reflexive_equalities(sig: &Signature) -> BTreeSet<(ConstId, ConstId)> {
    sig.const_ids().map(|c| (c, c)).collect()
}

/// The three Herbrand models of the supplier theory without nulls.
fn supplier_expected_models(sig: &Signature) -> Vec<CandidateModel> {
    let base: Vec<Atom> = vec![
        atom(sig, "part", &["p1"]),
        atom(sig, "part", &["p2"]),
        atom(sig, "part", &["p3"]),
        atom(sig, "supplier", &["acme"]),
        atom(sig, "supplier", &["foo"]),
        atom(sig, "supplies", &["acme", "p1"]),
        atom(sig, "supplies", &["foo", "p2"]),
        atom(sig, "subpart", &["p1", "p2"]),
    ];
    let fp1 = atom(sig, "supplies", &["foo", "p1"]);
    let fp3 = atom(sig, "supplies", &["foo", "p3"]);
    let mut models: Vec<CandidateModel> = vec![
        base.iter().cloned().chain([fp1.clone()]).collect(),
        base.iter().cloned().chain([fp3.clone()]).collect(),
        base.iter().cloned().chain([fp1, fp3]).collect(),
    ];
    models.sort();
    models
}

/// The three diagrams of the supplier theory with the null value.
fn supplier_null_expected_diagrams(sig: &Signature) -> Vec<Diagram> {
    let j1 = Diagram {
        atoms: [
            atom(sig, "part", &["p1"]),
            atom(sig, "part", &["p2"]),
            atom(sig, "part", &["p3"]),
            atom(sig, "supplier", &["acme"]),
            atom(sig, "supplier", &["foo"]),
            atom(sig, "supplier", &["omega"]),
            atom(sig, "supplies", &["acme", "p1"]),
            atom(sig, "supplies", &["foo", "p2"]),
            atom(sig, "supplies", &["omega", "p3"]),
            atom(sig, "subpart", &["p1", "p2"]),
        ]
        .into(),
        equalities: reflexive_equalities(sig),
    };
    let omega = sig.const_id("omega").unwrap();
    let acme = sig.const_id("acme").unwrap();
    let foo = sig.const_id("foo").unwrap();

    let mut j2 = j1.clone();
    j2.atoms.insert(atom(sig, "supplies", &["acme", "p3"]));
    j2.atoms.insert(atom(sig, "supplies", &["omega", "p1"]));
    j2.equalities.insert((omega, acme));
    j2.equalities.insert((acme, omega));

    let mut j3 = j1.clone();
    j3.atoms.insert(atom(sig, "supplies", &["foo", "p3"]));
    j3.atoms.insert(atom(sig, "supplies", &["omega", "p2"]));
    j3.equalities.insert((omega, foo));
    j3.equalities.insert((foo, omega));

    let mut out = vec![j1, j2, j3];
    out.sort();
    out
}

fn solve_rewritten(program_src: &str) -> (GroundProgram, Vec<Diagram>) {
    let p = parse_program(program_src).unwrap();
    let rw = eq_rewrite(&p).unwrap();
    let models = enumerate_stable_models(&rw, &SolveLimits::forced()).unwrap();
    let diagrams = answer_sets_to_diagrams(&models, rw.signature()).unwrap();
    (p, diagrams)
}

#[test]
fn acceptance_01_supplier_answer_sets_are_its_herbrand_models() {
    let t = parse_theory(include_str!("fixtures/supplier.lp")).unwrap();
    let pi = delta_to_pi(t.signature(), t.delta());
    let got = enumerate_stable_models(&pi, &SolveLimits::forced()).unwrap();
    assert_eq!(got, supplier_expected_models(t.signature()));
    println!("acceptance 1 (supplier without nulls: exactly the 3 expected answer sets): PASS");
}

#[test]
fn acceptance_02_supplier_with_null_yields_the_three_diagrams() {
    let t = parse_theory(include_str!("fixtures/supplier_null.lp")).unwrap();
    let prog = compile(&t).unwrap();
    let models = enumerate_stable_models(&prog, &SolveLimits::forced()).unwrap();
    let got = answer_sets_to_diagrams(&models, prog.signature()).unwrap();
    let expected = supplier_null_expected_diagrams(t.signature());
    assert_eq!(got, expected);

    // the merged model carries both equality directions and the derived
    // supplies atoms
    let sig = t.signature();
    let omega = sig.const_id("omega").unwrap();
    let acme = sig.const_id("acme").unwrap();
    let j2 = got.iter().find(|d| d.equalities.contains(&(omega, acme))).unwrap();
    assert!(j2.equalities.contains(&(acme, omega)));
    assert!(j2.atoms.contains(&atom(sig, "supplies", &["acme", "p3"])));
    assert!(j2.atoms.contains(&atom(sig, "supplies", &["omega", "p1"])));
    println!("acceptance 2 (supplier with null: exactly the 3 expected diagrams): PASS");
}

#[test]
fn acceptance_03_disjunction_diagrams_agree_on_both_routes() {
    let (p, via_program) = solve_rewritten(include_str!("fixtures/disjunction.lp"));
    let sig = p.signature();
    let a = sig.const_id("a").unwrap();
    let b = sig.const_id("b").unwrap();
    let pred = sig.pred_id("p").unwrap();
    let pa = Atom { pred, args: vec![a] };
    let pb = Atom { pred, args: vec![b] };
    let refl: BTreeSet<(ConstId, ConstId)> = [(a, a), (b, b)].into();
    let mut expected = vec![
        Diagram { atoms: [pa.clone()].into(), equalities: refl.clone() },
        Diagram { atoms: [pb.clone()].into(), equalities: refl },
        Diagram {
            atoms: [pa, pb].into(),
            equalities: [(a, a), (b, b), (a, b), (b, a)].into(),
        },
    ];
    expected.sort();
    assert_eq!(via_program, expected);

    let f = Formula::Or(vec![
        Formula::sig_atom(pred, vec![Term::Const(a)]),
        Formula::sig_atom(pred, vec![Term::Const(b)]),
    ]);
    let via_oracle = minimal_dca_models(&f, sig, &OracleLimits::default()).unwrap();
    assert_eq!(via_oracle, expected);
    println!("acceptance 3 (single disjunction: the 3 expected diagrams on both routes): PASS");
}

#[test]
fn acceptance_04_pair_of_conjunctions_has_23_models() {
    let (p, via_program) = solve_rewritten(include_str!("fixtures/pair_of_pairs.lp"));
    assert_eq!(via_program.len(), 23);

    let sig = p.signature();
    let pred = sig.pred_id("p").unwrap();
    let c = |n: &str| Term::Const(sig.const_id(n).unwrap());
    let at = |n: &str| Formula::sig_atom(pred, vec![c(n)]);
    let f = Formula::Or(vec![
        Formula::And(vec![at("a"), at("b")]),
        Formula::And(vec![at("c"), at("d")]),
    ]);
    let via_oracle = minimal_dca_models(&f, sig, &OracleLimits::default()).unwrap();
    assert_eq!(via_oracle.len(), 23);
    assert_eq!(via_program, via_oracle);
    println!("acceptance 4 (pair of conjunctions: exactly 23 stable models): PASS");
}

#[test]
fn acceptance_05_answer_sets_equal_models_on_random_theories() {
    let bounds = TheoryBounds { max_null_values: 0, ..TheoryBounds::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(51);
    for i in 0..200 {
        let t = random_theory(&mut rng, &bounds);
        let oracle = enumerate_dca_models(&t, &OracleLimits::forced()).unwrap();
        let oracle_atom_sets: Vec<CandidateModel> = oracle
            .iter()
            .map(|d| {
                assert!(d.equalities.iter().all(|&(x, y)| x == y), "non-Herbrand model without nulls");
                d.atoms.clone()
            })
            .collect();
        let pi = delta_to_pi(t.signature(), t.delta());
        let solver = enumerate_stable_models(&pi, &SolveLimits::forced()).unwrap();
        assert_eq!(solver, oracle_atom_sets, "instance {i}:\n{}", print_theory(&t));
    }
    println!("acceptance 5 (200 random theories: answer sets = Herbrand models): PASS");
}

#[test]
fn acceptance_06_compile_and_solve_match_the_oracle_with_nulls() {
    let bounds = TheoryBounds::default();
    let mut rng = ChaCha8Rng::seed_from_u64(62);
    for i in 0..100 {
        let t = random_theory(&mut rng, &bounds);
        let outcome = check_theory(&t, &nullrel::translate::UnaMode::Theory, true).unwrap();
        assert!(
            outcome.matches(),
            "instance {i}: solver {} vs oracle {} models\n{}",
            outcome.solver.len(),
            outcome.oracle.len(),
            print_theory(&t)
        );
    }
    println!("acceptance 6 (100 random theories with nulls: solver diagrams = oracle diagrams): PASS");
}

#[test]
fn acceptance_07_answer_sets_equal_classical_completion_models() {
    let bounds = TheoryBounds { max_null_values: 0, ..TheoryBounds::default() };
    let mut rng = ChaCha8Rng::seed_from_u64(73);
    for i in 0..50 {
        let t = random_theory(&mut rng, &bounds);
        let classical = herbrand_models(t.signature(), t.delta(), &OracleLimits::forced()).unwrap();
        let pi = delta_to_pi(t.signature(), t.delta());
        let solver = enumerate_stable_models(&pi, &SolveLimits::forced()).unwrap();
        assert_eq!(solver, classical, "instance {i}:\n{}", print_theory(&t));
    }
    println!("acceptance 7 (50 random theories: answer sets = clauses + completion, classically): PASS");
}

#[test]
fn acceptance_08_diagrams_round_trip_through_their_quotients() {
    let mut diagrams: Vec<(Diagram, Signature)> = Vec::new();

    let t = parse_theory(include_str!("fixtures/supplier_null.lp")).unwrap();
    for d in supplier_null_expected_diagrams(t.signature()) {
        diagrams.push((d, t.signature().clone()));
    }
    let (p, via_program) = solve_rewritten(include_str!("fixtures/disjunction.lp"));
    for d in via_program {
        diagrams.push((d, p.signature().clone()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(84);
    for _ in 0..30 {
        let t = random_theory(&mut rng, &TheoryBounds::default());
        for d in enumerate_dca_models(&t, &OracleLimits::forced()).unwrap() {
            diagrams.push((d, t.signature().clone()));
        }
    }

    assert!(diagrams.len() > 30);
    for (d, sig) in &diagrams {
        d.validate(sig).unwrap();
        let i = quotient(d, sig).unwrap();
        assert_eq!(&diagram_of(&i, sig), d);
    }
    println!("acceptance 8 (diagram = diagram of its quotient, on every diagram produced): PASS");
}

/// All ground atoms over a signature, in canonical order.
fn herbrand_base(sig: &Signature) -> Vec<Atom> {
    let consts: Vec<ConstId> = sig.const_ids().collect();
    let mut out = Vec::new();
    for p in sig.pred_ids() {
        let mut tuples: Vec<Vec<ConstId>> = vec![Vec::new()];
        for _ in 0..sig.pred_arity(p) {
            let mut next = Vec::new();
            for t in &tuples {
                for &c in &consts {
                    let mut t2 = t.clone();
                    t2.push(c);
                    next.push(t2);
                }
            }
            tuples = next;
        }
        out.extend(tuples.into_iter().map(|args| Atom { pred: p, args }));
    }
    out
}

fn random_choice_free_program(rng: &mut ChaCha8Rng) -> GroundProgram {
    loop {
        let mut sig = Signature::new();
        for i in 0..rng.gen_range(1..=3usize) {
            sig.add_const(&format!("c{i}"), ConstKind::Database).unwrap();
        }
        for i in 0..rng.gen_range(1..=2usize) {
            sig.add_pred(&format!("p{i}"), rng.gen_range(0..=2)).unwrap();
        }
        if sig.herbrand_base_size() > 12 {
            continue;
        }
        let random_atom = |rng: &mut ChaCha8Rng| {
            let pred = PredId(rng.gen_range(0..sig.num_preds()) as u32);
            let args = (0..sig.pred_arity(pred))
                .map(|_| ConstId(rng.gen_range(0..sig.num_consts()) as u32))
                .collect();
            Atom { pred, args }
        };
        let random_literal = |rng: &mut ChaCha8Rng| {
            let a = random_atom(rng);
            if rng.gen_bool(0.3) {
                Literal::Neg(a)
            } else {
                Literal::Pos(a)
            }
        };
        let mut rules = Vec::new();
        for _ in 0..rng.gen_range(0..=2usize) {
            rules.push(GroundRule::Fact(random_atom(rng)));
        }
        for _ in 0..rng.gen_range(1..=3usize) {
            let head = (0..rng.gen_range(1..=3usize)).map(|_| random_atom(rng)).collect();
            let body = (0..rng.gen_range(0..=2usize)).map(|_| random_literal(rng)).collect();
            rules.push(GroundRule::Disjunctive { head, body });
        }
        for _ in 0..rng.gen_range(0..=1usize) {
            let body = (0..rng.gen_range(1..=2usize)).map(|_| random_literal(rng)).collect();
            rules.push(GroundRule::Constraint { body });
        }
        return GroundProgram::new(sig, rules).unwrap();
    }
}

#[test]
fn acceptance_09_stability_check_agrees_with_the_reduct_route() {
    let mut programs = vec![
        parse_program(include_str!("fixtures/disjunction.lp")).unwrap(),
        parse_program(include_str!("fixtures/pair_of_pairs.lp")).unwrap(),
        parse_program("p|q. p :- q. q :- p.").unwrap(),
        parse_program("q :- not p.").unwrap(),
        parse_program("p :- not q. q :- not p.").unwrap(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(95);
    for _ in 0..25 {
        programs.push(random_choice_free_program(&mut rng));
    }

    let mut candidates_checked = 0usize;
    for prog in &programs {
        let hb = herbrand_base(prog.signature());
        assert!(hb.len() <= 12, "cross-validation programs stay small");
        let mut bits = vec![false; hb.len()];
        loop {
            let m: CandidateModel =
                hb.iter().zip(&bits).filter(|(_, &b)| b).map(|(a, _)| a.clone()).collect();
            let star_route = is_stable(&m, prog);
            let reduct_route = reduct_stable(&m, prog).unwrap();
            assert_eq!(star_route, reduct_route, "disagreement on {m:?} for {prog:?}");
            candidates_checked += 1;
            if !next_subset(&mut bits) {
                break;
            }
        }
    }
    assert!(candidates_checked > 1000);
    println!(
        "acceptance 9 (star-based and reduct-based stability agree on {candidates_checked} candidates): PASS"
    );
}

fn next_subset(bits: &mut [bool]) -> bool {
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

#[test]
fn acceptance_10_legacy_emission_reproduces_the_schematic_listing() {
    let p = parse_program(include_str!("fixtures/disjunction.lp")).unwrap();
    let rw = eq_rewrite(&p).unwrap();
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
    assert_eq!(emit_asp_text(&rw, EmitStyle::Legacy), expected);
    println!("acceptance 10 (legacy emission matches the schematic listing byte for byte): PASS");
}
