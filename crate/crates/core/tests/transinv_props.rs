//! Transition invariants against simulated runs.

use termlab_core::corpus;
use termlab_core::interp::{run, StateBox, Strategy};
use termlab_core::transinv::{check_dwf, check_transition_invariant, segment_coloring};
use termlab_core::{InvariantCandidate, Program, StateVector};

struct Fixture {
    program: &'static str,
    invariant: &'static str,
    bx: StateBox,
    /// Every disjunct is well-founded over all integers, not just the box.
    well_founded: bool,
}

fn fixtures() -> Vec<Fixture> {
    vec![
        Fixture {
            program: corpus::PROG5,
            invariant: corpus::PROG5_INV,
            bx: StateBox::cube(2, 1, 15),
            well_founded: true,
        },
        Fixture {
            program: corpus::PROG6,
            invariant: corpus::PROG6_INV,
            bx: StateBox::cube(2, -15, 15),
            well_founded: true,
        },
        Fixture {
            program: corpus::NOT_TRANSITIVE,
            invariant: corpus::NOT_TRANSITIVE_RELAXED_INV,
            bx: StateBox::cube(1, 1, 40),
            // x >= x' + 1 descends forever through the negatives
            well_founded: false,
        },
    ]
}

/// Σ over disjuncts of (max witness on the box + 1), times (disjuncts + 1).
fn run_length_bound(c: &InvariantCandidate, bx: &StateBox) -> usize {
    let per: i64 = c
        .disjuncts
        .iter()
        .map(|d| bx.states().map(|s| d.witness.eval_small(&s)).max().unwrap() + 1)
        .sum();
    per as usize * (c.disjuncts.len() + 1)
}

#[test]
fn certified_runs_stop_within_the_bound() {
    for f in fixtures() {
        let p = Program::parse(f.program).unwrap();
        let c = InvariantCandidate::parse(f.invariant, &p.vars).unwrap();
        assert!(check_transition_invariant(&p, &c, &f.bx, 3).passed());
        let dwf = check_dwf(&c, &f.bx);
        assert_eq!(dwf.passed(), f.well_founded, "{}: {:?}", p.name, dwf.first_failure());
        assert!(dwf.disjuncts.iter().all(|d| d.pairs_checked > 0));
        let bound = run_length_bound(&c, &f.bx);
        for (n, s) in f.bx.states().enumerate() {
            for seed in 0..3 {
                let strategy = Strategy::SeededRandom {
                    seed: seed * 7919 + n as u64,
                    input_cap: 3,
                };
                let t = run(&p, &StateVector(s.clone()), &strategy, bound + 1).unwrap();
                assert!(t.terminated, "{} from {:?} ran past {bound} steps", p.name, s);
            }
        }
    }
}

#[test]
fn colorings_of_certified_traces_are_total() {
    for f in fixtures() {
        let p = Program::parse(f.program).unwrap();
        let c = InvariantCandidate::parse(f.invariant, &p.vars).unwrap();
        for (n, s) in f.bx.states().enumerate().step_by(5) {
            let strategy = Strategy::SeededRandom {
                seed: n as u64,
                input_cap: 3,
            };
            let t = run(&p, &StateVector(s), &strategy, 40).unwrap();
            let col = segment_coloring(&c, &t).unwrap();
            assert_eq!(col.vertices(), t.len());
        }
    }
}

#[test]
fn single_disjunct_colors_constantly() {
    let p = Program::parse(corpus::NOT_TRANSITIVE).unwrap();
    let c = InvariantCandidate::parse("disjunct:\n x > x'\nrank: x\n", &p.vars).unwrap();
    let t = run(&p, &StateVector(vec![100]), &Strategy::Scripted(vec![]), 0).unwrap();
    assert_eq!(segment_coloring(&c, &t).unwrap().vertices(), 1);
    let t = run(
        &p,
        &StateVector(vec![100]),
        &Strategy::SeededRandom { seed: 1, input_cap: 0 },
        50,
    )
    .unwrap();
    let col = segment_coloring(&c, &t).unwrap();
    assert!(col.is_transitive());
}
