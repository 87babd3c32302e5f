use gpt_phase::interference::{gbit_hadamard, square_phase_fixtures};
use gpt_phase::library::{builtin, decoherence_map, gbit, octahedron};
use gpt_phase::rational::{ints, q};
use gpt_phase::{apply_effect, compose, Error, Rational, Transform};
use proptest::prelude::*;

fn half() -> Rational {
    q(1, 2)
}

#[test]
fn z_effect_on_corner() {
    let t = gbit(3, 2).unwrap();
    let e = t.effect(ints(&[0, 0, 0, 0, 1, 0])).unwrap();
    let s = t.state(ints(&[1, 0, 1, 0, 1, 0])).unwrap();
    assert_eq!(apply_effect(&e, &s).unwrap(), Rational::one());
}

#[test]
fn unit_effect_is_one_everywhere() {
    let t = gbit(3, 2).unwrap();
    let unit = t.effect(vec![q(1, 3); 6]).unwrap();
    for v in t.extreme_points() {
        assert_eq!(apply_effect(&unit, v).unwrap(), Rational::one());
    }
    let mixed = t.state(vec![half(); 6]).unwrap();
    assert_eq!(apply_effect(&unit, &mixed).unwrap(), Rational::one());
}

#[test]
fn diagonal_effect_vanishes_on_opposite_corner() {
    let t = gbit(3, 2).unwrap();
    let f0 = t.effect(vec![q(1, 3), q(0, 1), q(1, 3), q(0, 1), q(1, 3), q(0, 1)]).unwrap();
    let s = t.state(ints(&[0, 1, 0, 1, 0, 1])).unwrap();
    assert_eq!(apply_effect(&f0, &s).unwrap(), Rational::zero());
}

#[test]
fn effect_layout_mismatch() {
    let cube = gbit(3, 2).unwrap();
    let square = gbit(2, 2).unwrap();
    let e = cube.effect(ints(&[0, 0, 0, 0, 1, 0])).unwrap();
    let s = square.state(ints(&[1, 0, 1, 0])).unwrap();
    assert!(matches!(apply_effect(&e, &s), Err(Error::LayoutMismatch { .. })));
}

#[test]
fn identity_transform_fixes_states() {
    let t = gbit(3, 2).unwrap();
    let s = t.state(vec![half(), half(), q(1, 4), q(3, 4), Rational::one(), Rational::zero()]).unwrap();
    let out = t.apply_transform(&Transform::identity(6), &s).unwrap();
    assert_eq!(out, s);
}

#[test]
fn hadamard_swaps_x_and_z() {
    let t = gbit(3, 2).unwrap();
    let s = t.state(vec![Rational::one(), Rational::zero(), half(), half(), half(), half()]).unwrap();
    let out = t.apply_transform(&gbit_hadamard(), &s).unwrap();
    assert_eq!(out.coords(), &[half(), half(), half(), half(), Rational::one(), Rational::zero()][..]);
}

#[test]
fn decoherence_on_x_eigenstate() {
    let t = gbit(3, 2).unwrap();
    let s = t.state(vec![Rational::one(), Rational::zero(), half(), half(), half(), half()]).unwrap();
    let out = t.apply_transform(&decoherence_map(), &s).unwrap();
    assert_eq!(out.coords(), &vec![half(); 6][..]);
}

#[test]
fn apply_transform_rejects_escape() {
    let t = gbit(3, 2).unwrap();
    let mut m = gpt_phase::Matrix::identity(6);
    m.set(0, 0, Rational::from_int(2));
    let bad = Transform::new(m, false).unwrap();
    let s = t.state(ints(&[1, 0, 1, 0, 1, 0])).unwrap();
    assert!(matches!(t.apply_transform(&bad, &s), Err(Error::InvalidTransform(_))));
}

#[test]
fn hadamard_is_involution() {
    let h = gbit_hadamard();
    let hh = compose(&h, &h).unwrap();
    assert_eq!(hh.matrix(), Transform::identity(6).matrix());
}

#[test]
fn first_rotation_has_order_four() {
    let g1 = square_phase_fixtures()[0].1.clone();
    let mut acc = Transform::identity(6);
    for _ in 0..4 {
        acc = compose(&acc, &g1).unwrap();
    }
    assert_eq!(acc.matrix(), Transform::identity(6).matrix());
    let g2 = compose(&g1, &g1).unwrap();
    assert_ne!(g2.matrix(), Transform::identity(6).matrix());
}

#[test]
fn compose_with_identity_and_flags() {
    let h = gbit_hadamard();
    let id = Transform::identity(6);
    assert_eq!(compose(&h, &id).unwrap().matrix(), h.matrix());
    let d = decoherence_map();
    assert!(!compose(&h, &d).unwrap().is_reversible());
    assert!(compose(&h, &h).unwrap().is_reversible());
    assert!(matches!(compose(&h, &Transform::identity(4)), Err(Error::LayoutMismatch { .. })));
}

#[test]
fn membership_examples() {
    let cube = gbit(3, 2).unwrap();
    assert!(cube.membership(&ints(&[1, 0, 1, 0, 1, 0])));
    assert!(!cube.membership(&[q(3, 2), q(-1, 2), Rational::one(), Rational::zero(), Rational::one(), Rational::zero()]));
    let oct = octahedron().unwrap();
    assert!(!oct.membership(&ints(&[1, 0, 1, 0, 1, 0])));
    assert!(oct.membership(&vec![half(); 6]));
}

#[test]
fn effect_rejects_out_of_range() {
    let t = gbit(3, 2).unwrap();
    assert!(matches!(t.effect(ints(&[1, 0, 1, 0, 0, 0])), Err(Error::InvalidEffect(_))));
    assert!(matches!(t.state(ints(&[1, 1, 1, 0, 1, 0])), Err(Error::InvalidState(_))));
}

#[test]
fn effect_completeness_on_builtins() {
    for name in ["classical-2", "classical-3", "classical-4", "gbit-2-2", "gbit-3-2", "gbit-4-2", "gbit-2-3", "spekkens", "octahedron"] {
        let t = builtin(name).unwrap();
        for m in t.measurements() {
            for v in t.extreme_points() {
                let total: Rational = m.statistics(v.coords()).into_iter().sum();
                assert_eq!(total, Rational::one(), "{name}/{}", m.label());
            }
        }
    }
}

#[test]
fn transform_closure_for_allowed_group() {
    let cfg = gpt_phase::SearchConfig::default();
    for name in ["gbit-3-2", "spekkens", "classical-3"] {
        let t = builtin(name).unwrap();
        let g = gpt_phase::symmetry::automorphism_group(&t, &cfg).unwrap();
        for el in g.elements() {
            for img in t.vertex_images(el).unwrap() {
                assert!(t.membership(&img), "{name}");
            }
        }
    }
}

fn rational() -> impl Strategy<Value = Rational> {
    (-50i64..50, 1i64..30).prop_map(|(n, d)| q(n, d))
}

proptest! {
    #[test]
    fn reassociation_is_exact(xs in prop::collection::vec(rational(), 2..12), seed in any::<u64>()) {
        let left: Rational = xs.iter().fold(Rational::zero(), |acc, x| acc + x);
        let mut ys = xs.clone();
        let n = ys.len();
        ys.rotate_left((seed as usize) % n);
        ys.reverse();
        let right: Rational = ys.iter().fold(Rational::zero(), |acc, x| acc + x);
        prop_assert_eq!(left, right);
        let p1: Rational = xs.iter().fold(Rational::one(), |acc, x| acc * x);
        let p2: Rational = ys.iter().rev().fold(Rational::one(), |acc, x| x.clone() * acc);
        prop_assert_eq!(p1, p2);
    }

    #[test]
    fn matrix_product_associates(a in prop::collection::vec(rational(), 9), b in prop::collection::vec(rational(), 9), c in prop::collection::vec(rational(), 9)) {
        let m = |v: &Vec<Rational>| gpt_phase::Matrix::from_rows(v.chunks(3).map(|r| r.to_vec()).collect());
        let (a, b, c) = (m(&a), m(&b), m(&c));
        prop_assert_eq!(a.mul(&b).unwrap().mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
    }
}

// Effects are validated only on extreme points; mixtures must stay in range.
#[test]
fn convexity_spot_check() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for name in ["gbit-3-2", "spekkens", "gbit-4-2"] {
        let t = builtin(name).unwrap();
        for _ in 0..100 {
            let weights: Vec<i64> = (0..t.vertex_count()).map(|_| rng.random_range(0..20)).collect();
            let total: i64 = weights.iter().sum::<i64>().max(1);
            let mut x = vec![Rational::zero(); t.dim()];
            for (w, v) in weights.iter().zip(t.extreme_points()) {
                for (xi, vi) in x.iter_mut().zip(v.coords()) {
                    *xi += q(*w, total) * vi.clone();
                }
            }
            if weights.iter().all(|&w| w == 0) {
                x = t.vertex(0).to_vec();
            }
            assert!(t.membership(&x));
            for m in t.measurements() {
                for p in m.statistics(&x) {
                    assert!(p.is_probability(), "{name}/{}", m.label());
                }
            }
        }
    }
}
