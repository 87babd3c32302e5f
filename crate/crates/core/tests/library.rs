use gpt_phase::interference::{spekkens_hadamard, square_phase_fixtures};
use gpt_phase::library::*;
use gpt_phase::rational::{ints, q};
use gpt_phase::symmetry::automorphism_group;
use gpt_phase::{Error, Rational, SearchConfig, TransformPolicy};

fn h() -> Rational {
    q(1, 2)
}

#[test]
fn classical_bit_vertices() {
    let t = classical_dit(2).unwrap();
    let vs: Vec<Vec<Rational>> = t.extreme_points().iter().map(|s| s.coords().to_vec()).collect();
    assert_eq!(vs, vec![ints(&[1, 0]), ints(&[0, 1])]);
    assert_eq!(t.distinguishable(), 2);
    assert!(matches!(classical_dit(1), Err(Error::Precondition(_))));
}

#[test]
fn classical_automorphism_orders() {
    let cfg = SearchConfig::default();
    assert_eq!(automorphism_group(&classical_dit(2).unwrap(), &cfg).unwrap().order(), 2);
    assert_eq!(automorphism_group(&classical_dit(3).unwrap(), &cfg).unwrap().order(), 6);
}

#[test]
fn gbit_counts() {
    for (m, n) in [(1, 2), (2, 2), (3, 2), (4, 2), (2, 3), (3, 3)] {
        let t = gbit(m, n).unwrap();
        assert_eq!(t.vertex_count(), n.pow(m as u32));
        assert_eq!(t.affine_dim(), m * (n - 1));
        assert_eq!(t.distinguishable(), n);
    }
    assert_eq!(gbit(3, 2).unwrap().layout().blocks().iter().map(|b| b.label.as_str()).collect::<Vec<_>>(), ["X", "Y", "Z"]);
}

#[test]
fn single_block_gbit_is_classical_bit() {
    let a = gbit(1, 2).unwrap();
    let b = classical_dit(2).unwrap();
    let va: Vec<_> = a.extreme_points().iter().map(|s| s.coords().to_vec()).collect();
    let vb: Vec<_> = b.extreme_points().iter().map(|s| s.coords().to_vec()).collect();
    assert_eq!(va, vb);
}

#[test]
fn gbit_budget() {
    assert!(matches!(gbit_with_limit(4, 2, 15), Err(Error::BudgetExceeded { budget: 15 })));
    assert!(gbit_with_limit(4, 2, 16).is_ok());
}

#[test]
fn spekkens_ontic_and_epistemic() {
    let s = spekkens_bit().unwrap();
    let ontic: Vec<Vec<Rational>> = s.ontic_vertices.clone();
    assert_eq!(
        ontic,
        vec![ints(&[1, 0, 1, 0, 1, 0]), ints(&[0, 1, 0, 1, 1, 0]), ints(&[1, 0, 0, 1, 0, 1]), ints(&[0, 1, 1, 0, 0, 1])]
    );
    let zp = s.epistemic(Basis::Z, true);
    assert_eq!(zp.coords(), &[h(), h(), h(), h(), Rational::one(), Rational::zero()][..]);
    // every epistemic vertex is the midpoint of exactly one ontic pair
    for v in s.theory().extreme_points() {
        let mut hits = 0;
        for i in 0..4 {
            for j in i + 1..4 {
                let mid: Vec<Rational> = ontic[i].iter().zip(&ontic[j]).map(|(a, b)| (a.clone() + b) * h()).collect();
                if mid == v.coords() {
                    hits += 1;
                }
            }
        }
        assert_eq!(hits, 1);
    }
    assert_eq!(s.allowed_group_label, "induced S4");
    assert!(matches!(s.theory().policy(), TransformPolicy::ExplicitGroup(_)));
}

#[test]
fn spekkens_induced_group() {
    let s = spekkens_bit().unwrap();
    assert_eq!(s.induced_group().len(), 24);
    let g = automorphism_group(s.theory(), &SearchConfig::default()).unwrap();
    assert_eq!(g.order(), 24);
    // every induced map preserves both the octahedron and the ontic tetrahedron
    for t in s.induced_group() {
        assert!(s.theory().vertex_permutation(t).is_some());
        for v in &s.ontic_vertices {
            let img = t.apply_raw(v).unwrap();
            assert!(s.ontic_vertices.contains(&img));
        }
    }
}

#[test]
fn quarter_turn_is_not_induced() {
    let s = spekkens_bit().unwrap();
    let t = s.theory();
    // the 90° turn about Z, realised on the octahedron
    let quarter = square_phase_fixtures()[0].1.clone();
    assert!(t.vertex_permutation(&quarter).is_some());
    let g = automorphism_group(t, &SearchConfig::default()).unwrap();
    assert!(!g.contains(t, &quarter));
    let full = gpt_phase::symmetry::polytope_automorphisms(t, &SearchConfig::default()).unwrap();
    assert!(full.contains(t, &quarter));
}

#[test]
fn spekkens_hadamard_is_transposition() {
    let s = spekkens_bit().unwrap();
    let th = spekkens_hadamard();
    assert_eq!(s.ontic_word(&th), Some([0, 2, 1, 3]));
}

#[test]
fn measure_update_examples() {
    let s = spekkens_bit().unwrap();
    let zp = s.epistemic(Basis::Z, true).clone();
    let out = s.measure_update(&zp, Basis::X, true).unwrap();
    assert_eq!(out.coords(), &[Rational::one(), Rational::zero(), h(), h(), h(), h()][..]);
    assert_eq!(s.measure_update(&zp, Basis::Z, true).unwrap(), zp);
    assert_eq!(s.outcome_distribution(&zp, Basis::X), (h(), h()));
    assert!(matches!(s.measure_update(&zp, Basis::Z, false), Err(Error::Precondition(_))));
}

#[test]
fn measure_update_is_idempotent() {
    let s = spekkens_bit().unwrap();
    for v in s.theory().extreme_points() {
        for b in Basis::ALL {
            for plus in [true, false] {
                if let Ok(once) = s.measure_update(v, b, plus) {
                    assert_eq!(s.measure_update(&once, b, plus).unwrap(), once);
                }
            }
        }
    }
}

#[test]
fn standard_measurement_contents() {
    let t = gbit(3, 2).unwrap();
    let ms = standard_measurements(&t).unwrap();
    let z = ms.iter().find(|m| m.label() == "Z").unwrap();
    assert_eq!(z.effects()[0].coords(), &ints(&[0, 0, 0, 0, 1, 0])[..]);
    assert_eq!(z.effects()[1].coords(), &ints(&[0, 0, 0, 0, 0, 1])[..]);
    let d = t.measurement("diagonal").unwrap();
    assert_eq!(d.effects()[0].eval(&ints(&[1, 0, 1, 0, 1, 0])), Rational::one());
    let third = q(1, 3);
    let zero = Rational::zero();
    assert_eq!(d.effects()[1].coords(), &[zero.clone(), third.clone(), zero.clone(), third.clone(), zero, third][..]);
    assert!(t.measurement("xy-halves").is_ok());
}

#[test]
fn gbit4_effect_sets() {
    let t = gbit(4, 2).unwrap();
    let g = t.measurement("g-set").unwrap();
    let coords: Vec<Vec<Rational>> = g.effects().iter().map(|e| e.coords().to_vec()).collect();
    assert_eq!(coords.len(), 4);
    assert!(is_complete(&t, &coords));
    let six = t.measurement("six-effect").unwrap();
    assert_eq!(six.len(), 6);
    // dropping the appended pair breaks completeness
    let four: Vec<Vec<Rational>> = six.effects()[..4].iter().map(|e| e.coords().to_vec()).collect();
    assert!(!is_complete(&t, &four));
    let d = t.measurement("diagonal").unwrap();
    assert_eq!(d.effects()[0].coords()[0], q(1, 4));
}

#[test]
fn unknown_theory() {
    assert!(matches!(builtin("nope"), Err(Error::UnknownTheory(_))));
    assert!(matches!(builtin("qubit"), Err(Error::Unsupported(_))));
}

#[test]
fn measurements_sum_to_unit_on_affine_hull() {
    for name in ["classical-4", "gbit-3-2", "gbit-4-2", "gbit-2-3", "spekkens"] {
        let t = builtin(name).unwrap();
        for m in t.measurements() {
            let coords: Vec<Vec<Rational>> = m.effects().iter().map(|e| e.coords().to_vec()).collect();
            assert!(is_complete(&t, &coords), "{name}/{}", m.label());
        }
    }
}

#[test]
fn qubit_ball_center_slack() {
    let b = QubitBallSpec::default();
    assert_eq!(b.slack(&[0.5; 6]), 0.25);
}
