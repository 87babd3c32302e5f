use std::collections::BTreeSet;

use gpt_phase::library::{builtin, classical_dit, gbit, octahedron};
use gpt_phase::phase::phase_group_of;
use gpt_phase::rational::q;
use gpt_phase::symmetry::*;
use gpt_phase::{Error, Rational, Theory, TransformPolicy};
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn cfg() -> SearchConfig {
    SearchConfig::default()
}

#[test]
fn automorphism_orders() {
    let cases = [
        ("classical-2", 2, "C2"),
        ("classical-3", 6, "S3"),
        ("classical-4", 24, "S4"),
        ("gbit-2-2", 8, "D4_order8"),
        ("gbit-3-2", 48, "B3_order48"),
        ("gbit-4-2", 384, "B4_order384"),
        ("gbit-2-3", 72, "other(72)"),
        ("octahedron", 48, "B3_order48"),
        ("spekkens", 24, "S4"),
    ];
    for (name, order, label) in cases {
        let t = builtin(name).unwrap();
        let g = automorphism_group(&t, &cfg()).unwrap();
        assert_eq!(g.order(), order, "{name}");
        assert_eq!(identify(&g).label(), label, "{name}");
    }
}

#[test]
fn spekkens_polytope_group_ignores_embedding() {
    let s = builtin("spekkens").unwrap();
    assert_eq!(polytope_automorphisms(&s, &cfg()).unwrap().order(), 48);
}

#[test]
fn exclude_reflections_on_cube() {
    let mut def = gbit(3, 2).unwrap().definition();
    def.policy = TransformPolicy::ExcludeReflections;
    let t = Theory::from_definition(def).unwrap();
    let g = allowed_group(&t, &cfg()).unwrap();
    assert_eq!(g.order(), 24);
    assert_eq!(identify(&g), GroupName::S4);
}

#[test]
fn orientation_examples() {
    let cube = gbit(3, 2).unwrap();
    let g = automorphism_group(&cube, &cfg()).unwrap();
    let rot = orientation_subgroup(&g, &cube).unwrap();
    assert_eq!(rot.order(), 24);
    let square = phase_group_of(&cube, "Z", &cfg()).unwrap();
    let c4 = orientation_subgroup(&square.group, &cube).unwrap();
    assert_eq!(c4.order(), 4);
    assert_eq!(identify(&c4), GroupName::Cyclic(4));
    let trivial = g.subgroup(&[0]).unwrap();
    assert!(orientation_subgroup(&trivial, &cube).unwrap().is_trivial());
}

#[test]
fn orientation_index_at_most_two() {
    for name in ["classical-2", "classical-3", "classical-4", "gbit-2-2", "gbit-3-2", "gbit-2-3", "octahedron", "spekkens"] {
        let t = builtin(name).unwrap();
        let g = automorphism_group(&t, &cfg()).unwrap();
        let r = orientation_subgroup(&g, &t).unwrap();
        assert!(r.is_subgroup_of(&g));
        let index = g.order() / r.order();
        assert!(g.order().is_multiple_of(r.order()) && (index == 1 || index == 2), "{name}");
    }
}

#[test]
fn identification_examples() {
    let d4 = PermGroup::generated_by(&[vec![1, 2, 3, 0], vec![1, 0, 3, 2]], 4).unwrap();
    let sig = d4.signature();
    assert_eq!(sig.order, 8);
    assert!(!sig.abelian);
    assert_eq!(sig.element_orders, vec![1, 2, 2, 2, 2, 2, 4, 4]);
    assert_eq!(identify_perm_group(&d4), GroupName::D4Order8);

    let v4 = PermGroup::generated_by(&[vec![1, 0, 3, 2], vec![2, 3, 0, 1]], 4).unwrap();
    assert_eq!(identify_perm_group(&v4), GroupName::Z2xZ2);
    assert_eq!(identify_perm_group(&PermGroup::new(vec![vec![0, 1]]).unwrap()), GroupName::Trivial);
    let c4 = PermGroup::generated_by(&[vec![1, 2, 3, 0]], 4).unwrap();
    assert_eq!(identify_perm_group(&c4), GroupName::Cyclic(4));

    // the quaternion group shares D4's order but not its element orders
    let q8 = PermGroup::generated_by(
        &[vec![1, 4, 3, 6, 5, 0, 7, 2], vec![2, 7, 4, 1, 6, 3, 0, 5]],
        8,
    )
    .unwrap();
    assert_eq!(q8.order(), 8);
    assert_eq!(identify_perm_group(&q8), GroupName::Other(8));

    // C2 x C2 x C2 is not Z2xZ2 nor D4
    let c2_3 = PermGroup::generated_by(&[vec![1, 0, 2, 3, 4, 5], vec![0, 1, 3, 2, 4, 5], vec![0, 1, 2, 3, 5, 4]], 6).unwrap();
    assert_eq!(identify_perm_group(&c2_3), GroupName::Other(8));
}

#[test]
fn group_axioms_are_checked() {
    assert!(PermGroup::new(vec![vec![0, 1, 2], vec![1, 2, 0]]).is_err());
    let s3 = PermGroup::generated_by(&[vec![1, 0, 2], vec![1, 2, 0]], 3).unwrap();
    assert_eq!(s3.order(), 6);
    for a in 0..6 {
        assert_eq!(s3.mul(a, s3.inverse(a)), 0);
        for b in 0..6 {
            assert!(s3.mul(a, b) < 6);
        }
    }
}

#[test]
fn sequential_and_parallel_agree() {
    for name in ["gbit-3-2", "gbit-4-2", "gbit-2-3", "octahedron"] {
        let t = builtin(name).unwrap();
        let a = automorphism_permutations(&t, &SearchConfig::sequential()).unwrap();
        let b = automorphism_permutations(&t, &cfg()).unwrap();
        assert_eq!(a, b, "{name}");
    }
}

#[test]
fn budget_is_enforced() {
    let t = gbit(3, 2).unwrap();
    let err = automorphism_group(&t, &SearchConfig::with_budget(3)).unwrap_err();
    assert!(matches!(err, Error::BudgetExceeded { budget: 3 }));
}

#[test]
fn relabelling_invariance() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for name in ["gbit-3-2", "gbit-2-3", "octahedron", "classical-4"] {
        let t = builtin(name).unwrap();
        let g = automorphism_group(&t, &cfg()).unwrap();
        let mut def = t.definition();
        def.extreme_points.shuffle(&mut rng);
        let shuffled = Theory::from_definition(def).unwrap();
        let h = automorphism_group(&shuffled, &cfg()).unwrap();
        assert_eq!(g.order(), h.order());
        for el in g.elements() {
            assert!(h.contains(&shuffled, el), "{name}");
        }
    }
}

#[test]
fn facets_map_to_facets() {
    for name in ["gbit-3-2", "gbit-4-2", "octahedron", "spekkens", "gbit-2-3"] {
        let t = builtin(name).unwrap();
        let g = automorphism_group(&t, &cfg()).unwrap();
        let tight: Vec<BTreeSet<usize>> = t
            .facets()
            .iter()
            .map(|f| (0..t.vertex_count()).filter(|&v| f.is_tight(t.vertex(v))).collect())
            .collect();
        for i in 0..g.order() {
            let p = g.perm(i);
            for set in &tight {
                let image: BTreeSet<usize> = set.iter().map(|&v| p[v]).collect();
                assert!(tight.contains(&image), "{name}");
            }
        }
    }
}

// Expectation coordinates r_i = p(+|i) - p(-|i).
fn expectations(v: &[Rational]) -> Vec<Rational> {
    v.chunks(2).map(|b| b[0].clone() - b[1].clone()).collect()
}

#[test]
fn binary_gbit_automorphisms_are_signed_permutations() {
    for m in 1..=4 {
        let t = gbit(m, 2).unwrap();
        let g = automorphism_group(&t, &cfg()).unwrap();
        assert_eq!(g.order(), (1..=m).product::<usize>() * (1 << m));
        let rs: Vec<Vec<Rational>> = (0..t.vertex_count()).map(|v| expectations(t.vertex(v))).collect();
        for k in 0..g.order() {
            let p = g.perm(k);
            // A e_i from vertex 0 and its neighbour across axis i
            let mut cols = Vec::new();
            for i in 0..m {
                let mut flipped = rs[0].clone();
                flipped[i] = -flipped[i].clone();
                let w = rs.iter().position(|r| *r == flipped).unwrap();
                let col: Vec<Rational> =
                    rs[p[0]].iter().zip(&rs[p[w]]).map(|(a, b)| (a.clone() - b.clone()) * q(1, 2) * rs[0][i].clone()).collect();
                cols.push(col);
            }
            for c in &cols {
                let nonzero: Vec<&Rational> = c.iter().filter(|x| !x.is_zero()).collect();
                assert_eq!(nonzero.len(), 1);
                assert!(nonzero[0].abs().is_one());
            }
            for (v, r) in rs.iter().enumerate() {
                let img: Vec<Rational> =
                    (0..m).map(|row| (0..m).map(|i| cols[i][row].clone() * r[i].clone()).sum()).collect();
                assert_eq!(img, rs[p[v]]);
            }
        }
    }
}

#[test]
fn explicit_group_returned_verbatim() {
    let s = builtin("spekkens").unwrap();
    let g = automorphism_group(&s, &cfg()).unwrap();
    let explicit = s.explicit_group().unwrap();
    assert!(g.elements()[0].matrix() == gpt_phase::Transform::identity(6).matrix() || s.acts_as_identity(&g.elements()[0]));
    for t in explicit {
        assert!(g.contains(&s, t));
    }
}

#[test]
fn deterministic_ordering() {
    let t = octahedron().unwrap();
    let a = automorphism_group(&t, &cfg()).unwrap();
    let b = automorphism_group(&t, &SearchConfig::sequential()).unwrap();
    assert_eq!(a.perms(), b.perms());
    assert!(t.acts_as_identity(a.element(0)));
    let c = automorphism_group(&classical_dit(2).unwrap(), &cfg()).unwrap();
    assert_eq!(c.generators().len(), 1);
}
