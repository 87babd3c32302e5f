//! Interferometer circuits `T_H⁻¹ ∘ g ∘ T_H` over a phase group, symbolic
//! output tables, and commutation checks between branch operations.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::layout::CoordLabel;
use crate::library::spekkens_bit;
use crate::phase::PhaseGroupResult;
use crate::rational::Rational;
use crate::state::Measurement;
use crate::theory::Theory;
use crate::transform::{compose, coordinate_permutation_matrix, Transform};

/// Swaps the X and Z blocks and the two Y outcomes.
pub fn gbit_hadamard() -> Transform {
    Transform::new(coordinate_permutation_matrix(&[4, 5, 3, 2, 0, 1]), true).expect("square")
}

/// Swaps the X and Z blocks and fixes Y: the hidden-variable swap of the
/// second and third values.
pub fn spekkens_hadamard() -> Transform {
    Transform::new(coordinate_permutation_matrix(&[4, 5, 2, 3, 0, 1]), true).expect("square")
}

pub fn hadamard_for(theory: &Theory) -> Result<Transform> {
    let t = match theory.name() {
        "gbit-3-2" => gbit_hadamard(),
        "spekkens" => spekkens_hadamard(),
        other => {
            return Err(Error::Unsupported(format!("no beamsplitter registered for {other}")))
        }
    };
    theory.validate_transform(&t)?;
    Ok(t)
}

/// The eight square symmetries of the gbit Z phase group as explicit 0/1
/// matrices, labelled `g1`..`g8`: `g1`..`g4` rotations, `g5`..`g8` flips.
pub fn square_phase_fixtures() -> Vec<(String, Transform)> {
    let blocks: [[usize; 4]; 8] = [
        [3, 2, 0, 1],
        [1, 0, 3, 2],
        [2, 3, 1, 0],
        [0, 1, 2, 3],
        [1, 0, 2, 3],
        [3, 2, 1, 0],
        [0, 1, 3, 2],
        [2, 3, 0, 1],
    ];
    blocks
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let perm = [p[0], p[1], p[2], p[3], 4, 5];
            let t = Transform::new(coordinate_permutation_matrix(&perm), true).expect("square");
            (format!("g{}", i + 1), t)
        })
        .collect()
}

/// If `t` acts on every extreme point as a coordinate permutation, returns
/// `src` with `(T v)_i = v_{src[i]}`.
pub fn detect_coordinate_permutation(theory: &Theory, t: &Transform) -> Option<Vec<usize>> {
    let images = theory.vertex_images(t).ok()?;
    let dim = theory.dim();
    let mut src = Vec::with_capacity(dim);
    let mut used = vec![false; dim];
    for i in 0..dim {
        let j = (0..dim).find(|&j| {
            !used[j]
                && theory
                    .extreme_points()
                    .iter()
                    .zip(&images)
                    .all(|(v, img)| img[i] == v.coords()[j])
        })?;
        used[j] = true;
        src.push(j);
    }
    Some(src)
}

#[derive(Clone, Debug)]
pub struct CircuitResult {
    pub label: String,
    pub composite: Transform,
    /// Outcome `k` of the measurement reads input coordinate
    /// `symbolic_row[k]`. Present iff the composite permutes coordinates and
    /// the measurement is one-hot.
    pub symbolic_row: Option<Vec<CoordLabel>>,
    /// Output distribution on every extreme point, in V-rep order.
    pub numeric_row: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug)]
pub struct InterferenceTable {
    pub theory: String,
    pub measurement: String,
    pub rows: Vec<CircuitResult>,
    pub nontrivial: bool,
}

/// `T_H⁻¹ ∘ g ∘ T_H`.
pub fn conjugate(t_h: &Transform, g: &Transform) -> Result<Transform> {
    let inv = t_h
        .matrix()
        .inverse()
        .ok_or_else(|| Error::Precondition("beamsplitter is not invertible".into()))?;
    let inv = Transform::new(inv, t_h.is_reversible())?;
    compose(&inv, &compose(g, t_h)?)
}

fn circuit(
    theory: &Theory,
    t_h: &Transform,
    label: String,
    g: &Transform,
    m: &Measurement,
) -> Result<CircuitResult> {
    let composite = conjugate(t_h, g)?;
    let images = theory.vertex_images(&composite)?;
    let numeric_row = images.iter().map(|img| m.statistics(img)).collect();
    let symbolic_row = detect_coordinate_permutation(theory, &composite).and_then(|src| {
        m.effects()
            .iter()
            .map(|e| e.one_hot_index().map(|k| theory.layout().coord_label(src[k])))
            .collect()
    });
    Ok(CircuitResult { label, composite, symbolic_row, numeric_row })
}

/// Labels for the phase elements and the order rows are emitted in.
fn labelled_elements(theory: &Theory, phase: &PhaseGroupResult) -> Result<Vec<(String, usize)>> {
    let g = &phase.group;
    if theory.name() == "gbit-3-2" {
        let fixtures = square_phase_fixtures();
        let rows: Vec<(String, usize)> = fixtures
            .iter()
            .filter_map(|(l, t)| g.position_of(theory, t).map(|i| (l.clone(), i)))
            .collect();
        if rows.len() == g.order() {
            return Ok(rows);
        }
    }
    if theory.name() == "spekkens" {
        let spek = spekkens_bit()?;
        let mut rows = Vec::with_capacity(g.order());
        for i in 0..g.order() {
            let w = spek.ontic_word(g.element(i)).ok_or_else(|| {
                Error::Precondition("phase element does not permute the ontic states".into())
            })?;
            let moved: Vec<usize> = (0..4).filter(|&k| w[k] != k).collect();
            rows.push(((moved.len(), moved, w), i));
        }
        rows.sort();
        return Ok(rows
            .into_iter()
            .map(|((_, _, w), i)| (format!("g{}", crate::library::word_label(&w)), i))
            .collect());
    }
    Ok((0..g.order()).map(|i| (format!("g{}", i + 1), i)).collect())
}

pub fn interference_table(
    theory: &Theory,
    t_h: &Transform,
    phase: &PhaseGroupResult,
    m: &Measurement,
) -> Result<InterferenceTable> {
    let rows = labelled_elements(theory, phase)?
        .into_iter()
        .map(|(label, i)| circuit(theory, t_h, label, phase.group.element(i), m))
        .collect::<Result<Vec<_>>>()?;
    let nontrivial = rows.iter().any(|r| r.numeric_row != rows[0].numeric_row);
    Ok(InterferenceTable {
        theory: theory.name().to_string(),
        measurement: m.label().to_string(),
        rows,
        nontrivial,
    })
}

/// Phase labels grouped by identical symbolic output rows, in order of
/// first appearance.
pub fn indistinguishable_partition(t: &InterferenceTable) -> Result<Vec<Vec<String>>> {
    let mut blocks: Vec<(Vec<CoordLabel>, Vec<String>)> = Vec::new();
    for row in &t.rows {
        let sym = row.symbolic_row.clone().ok_or_else(|| {
            Error::Unsupported(format!("row {} has no symbolic form", row.label))
        })?;
        match blocks.iter_mut().find(|(s, _)| *s == sym) {
            Some((_, labels)) => labels.push(row.label.clone()),
            None => blocks.push((sym, vec![row.label.clone()])),
        }
    }
    Ok(blocks.into_iter().map(|(_, l)| l).collect())
}

/// Full output vector of each fixture circuit on the gbit, as coordinate
/// labels of the input.
pub fn square_fixture_conjugates(theory: &Theory) -> Result<Vec<(String, Vec<CoordLabel>)>> {
    if theory.name() != "gbit-3-2" {
        return Err(Error::Precondition("fixture circuits are defined on gbit-3-2".into()));
    }
    let t_h = hadamard_for(theory)?;
    square_phase_fixtures()
        .into_iter()
        .map(|(label, g)| {
            let c = conjugate(&t_h, &g)?;
            let src = detect_coordinate_permutation(theory, &c).ok_or_else(|| {
                Error::Unsupported(format!("conjugate of {label} is not a coordinate permutation"))
            })?;
            Ok((label, src.iter().map(|&j| theory.layout().coord_label(j)).collect()))
        })
        .collect()
}

pub fn commutes(a: &Transform, b: &Transform, theory: &Theory) -> Result<bool> {
    Ok(theory.same_action(&compose(a, b)?, &compose(b, a)?))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalityWitness {
    pub a: usize,
    pub b: usize,
    /// Extreme point on which the two orderings give different final
    /// statistics, if one exists.
    pub vertex: Option<usize>,
    pub stats_ab: Vec<Rational>,
    pub stats_ba: Vec<Rational>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalityReport {
    pub admissible: bool,
    pub witness: Option<LocalityWitness>,
}

/// Every operation of one branch must commute with every operation of the
/// other. On failure the witness runs both orderings inside the
/// interferometer and reads `m`.
pub fn locality_admissible(
    a_set: &[Transform],
    b_set: &[Transform],
    theory: &Theory,
    t_h: &Transform,
    m: &Measurement,
) -> Result<LocalityReport> {
    for (i, a) in a_set.iter().enumerate() {
        for (j, b) in b_set.iter().enumerate() {
            if commutes(a, b, theory)? {
                continue;
            }
            let ab = conjugate(t_h, &compose(a, b)?)?;
            let ba = conjugate(t_h, &compose(b, a)?)?;
            let mut witness = LocalityWitness {
                a: i,
                b: j,
                vertex: None,
                stats_ab: Vec::new(),
                stats_ba: Vec::new(),
            };
            for (k, v) in theory.extreme_points().iter().enumerate() {
                let sa = m.statistics(&ab.apply_raw(v.coords())?);
                let sb = m.statistics(&ba.apply_raw(v.coords())?);
                if sa != sb {
                    witness.vertex = Some(k);
                    witness.stats_ab = sa;
                    witness.stats_ba = sb;
                    break;
                }
            }
            return Ok(LocalityReport { admissible: false, witness: Some(witness) });
        }
    }
    Ok(LocalityReport { admissible: true, witness: None })
}

/// Renders a symbolic row like `p(+1|Y), p(-1|Y)`.
pub fn render_row(row: &[CoordLabel]) -> String {
    row.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(", ")
}

/// Per-label symbolic rows, convenient for comparisons.
pub fn symbolic_rows(t: &InterferenceTable) -> BTreeMap<String, Option<Vec<String>>> {
    t.rows
        .iter()
        .map(|r| {
            (r.label.clone(), r.symbolic_row.as_ref().map(|s| s.iter().map(|l| l.to_string()).collect()))
        })
        .collect()
}
