//! Phase groups of measurements, maximality and classicality checks,
//! irreversible phase dynamics and the canonical collapse map used in the
//! proof that non-classical theories always admit non-trivial phase
//! dynamics.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::{dot, Rational};
use crate::state::Measurement;
use crate::symmetry::{allowed_group, identify, Exec, Group, GroupName, SearchConfig};
use crate::theory::Theory;
use crate::transform::Transform;

#[derive(Clone, Debug)]
pub struct PhaseGroupResult {
    pub group: Group,
    pub measurement: Measurement,
    pub name: GroupName,
    pub is_trivial: bool,
    /// Indices of the phase elements inside the ambient group.
    pub ambient_indices: Vec<usize>,
}

fn vertex_statistics(theory: &Theory, m: &Measurement) -> Vec<Vec<Rational>> {
    theory.extreme_points().iter().map(|v| m.statistics(v.coords())).collect()
}

fn stabilises(stats: &[Vec<Rational>], perm: &[usize]) -> bool {
    perm.iter().enumerate().all(|(v, &w)| stats[w] == stats[v])
}

/// Ambient elements leaving every outcome probability of `m` unchanged on
/// every extreme point.
pub fn phase_group(theory: &Theory, m: &Measurement, ambient: &Group) -> Result<PhaseGroupResult> {
    phase_group_with(theory, m, ambient, Exec::Parallel)
}

pub fn phase_group_with(
    theory: &Theory,
    m: &Measurement,
    ambient: &Group,
    exec: Exec,
) -> Result<PhaseGroupResult> {
    if m.effects().first().map(|e| e.coords().len()) != Some(theory.dim()) {
        return Err(Error::LayoutMismatch {
            expected: theory.dim(),
            found: m.effects().first().map_or(0, |e| e.coords().len()),
        });
    }
    let stats = vertex_statistics(theory, m);
    let keep: Vec<usize> = match exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            (0..ambient.order())
                .into_par_iter()
                .filter(|&i| stabilises(&stats, ambient.perm(i)))
                .collect()
        }
        _ => (0..ambient.order()).filter(|&i| stabilises(&stats, ambient.perm(i))).collect(),
    };
    let group = ambient.subgroup(&keep)?;
    let name = identify(&group);
    Ok(PhaseGroupResult {
        is_trivial: group.is_trivial(),
        group,
        measurement: m.clone(),
        name,
        ambient_indices: keep,
    })
}

/// Convenience: phase group of a registered measurement inside the theory's
/// allowed group.
pub fn phase_group_of(theory: &Theory, label: &str, cfg: &SearchConfig) -> Result<PhaseGroupResult> {
    let m = theory.measurement(label)?.clone();
    let ambient = allowed_group(theory, cfg)?;
    phase_group_with(theory, &m, &ambient, cfg.exec)
}

/// Re-checks the defining equality on every element and vertex, and that
/// every ambient element left out breaks it somewhere.
pub fn verify_phase_group(theory: &Theory, result: &PhaseGroupResult, ambient: &Group) -> bool {
    let effects = result.measurement.effects();
    let holds = |t: &Transform| -> bool {
        theory.extreme_points().iter().all(|v| match t.apply_raw(v.coords()) {
            Ok(img) => effects.iter().all(|e| e.eval(&img) == e.eval(v.coords())),
            Err(_) => false,
        })
    };
    let members_ok = result.group.elements().iter().all(holds);
    let excluded_ok = (0..ambient.order())
        .filter(|i| !result.ambient_indices.contains(i))
        .all(|i| !holds(ambient.element(i)));
    members_ok && excluded_ok && result.group.is_subgroup_of(ambient)
}

/// Indices `v_1..v_N` of extreme points with `e_i · v_j = δ_ij`, if the
/// measurement has exactly `N` effects and such points exist.
pub fn maximal_witnesses(theory: &Theory, m: &Measurement) -> Option<Vec<usize>> {
    let n = theory.distinguishable();
    if m.len() != n {
        return None;
    }
    (0..n)
        .map(|i| {
            theory.extreme_points().iter().position(|v| {
                m.effects()
                    .iter()
                    .enumerate()
                    .all(|(k, e)| e.eval(v.coords()) == if k == i { Rational::one() } else { Rational::zero() })
            })
        })
        .collect()
}

pub fn verify_maximal(theory: &Theory, m: &Measurement) -> bool {
    maximal_witnesses(theory, m).is_some()
}

/// Rank of the statistics map restricted to the affine hull.
fn statistics_rank(theory: &Theory, m: &Measurement) -> usize {
    let dirs = theory.affine_directions();
    let rows: Vec<Vec<Rational>> =
        m.effects().iter().map(|e| dirs.iter().map(|d| e.eval(d)).collect()).collect();
    Matrix::from_rows(rows).rank()
}

/// A state is fixed by the statistics of one maximal measurement.
pub fn is_classical(theory: &Theory) -> Result<bool> {
    let maximal: Vec<&Measurement> =
        theory.measurements().iter().filter(|m| verify_maximal(theory, m)).collect();
    if maximal.is_empty() {
        return Err(Error::Precondition(format!(
            "{} has no maximal measurement registered",
            theory.name()
        )));
    }
    let k = theory.affine_dim();
    Ok(k + 1 == theory.distinguishable()
        && maximal.iter().any(|m| statistics_rank(theory, m) == k))
}

#[derive(Clone, Debug)]
pub struct CanonicalPhaseMap {
    pub block: usize,
    /// One-hot covectors of the frozen block.
    pub effects: Vec<Vec<Rational>>,
    /// Indices of the anchor extreme points `μ_1..μ_N`.
    pub anchors: Vec<usize>,
    pub transform: Transform,
    /// (a) every extreme point is mapped into the state space.
    pub maps_into_state_space: bool,
    /// (b) `e_i · T = e_i` on the affine hull.
    pub preserves_statistics: bool,
    /// (c) two distinct extreme points with equal statistics and equal
    /// images, present iff the theory is non-classical.
    pub witness: Option<(usize, usize)>,
    pub acts_as_identity: bool,
}

impl CanonicalPhaseMap {
    pub fn obligations_hold(&self, classical: bool) -> bool {
        self.maps_into_state_space
            && self.preserves_statistics
            && if classical { self.acts_as_identity && self.witness.is_none() } else { self.witness.is_some() }
    }
}

/// `T = Σ μ_i e_iᵀ` for a maximal fiducial measurement, with anchors chosen
/// as the lexicographically smallest extreme points satisfying
/// `e_i · μ_j = δ_ij`.
pub fn canonical_phase_map(theory: &Theory, m: &Measurement) -> Result<CanonicalPhaseMap> {
    let block = m.fiducial_block().ok_or_else(|| {
        Error::Precondition(format!("`{}` is not a fiducial block measurement", m.label()))
    })?;
    if !verify_maximal(theory, m) {
        return Err(Error::Precondition(format!("`{}` is not maximal", m.label())));
    }
    let effects: Vec<Vec<Rational>> = m.effects().iter().map(|e| e.coords().to_vec()).collect();
    let n = effects.len();
    let anchors: Vec<usize> = (0..n)
        .map(|i| {
            *theory
                .canonical_order()
                .iter()
                .find(|&&v| {
                    (0..n).all(|k| {
                        dot(&effects[k], theory.vertex(v))
                            == if k == i { Rational::one() } else { Rational::zero() }
                    })
                })
                .expect("maximality checked")
        })
        .collect();

    let dim = theory.dim();
    let mut matrix = Matrix::zeros(dim, dim);
    for (e, &mu) in effects.iter().zip(&anchors) {
        let mu = theory.vertex(mu);
        for r in 0..dim {
            for c in 0..dim {
                if !mu[r].is_zero() && !e[c].is_zero() {
                    let v = matrix.get(r, c) + &(&mu[r] * &e[c]);
                    matrix.set(r, c, v);
                }
            }
        }
    }
    let transform = Transform::new(matrix, false)?;
    let images = theory.vertex_images(&transform)?;
    let maps_into_state_space = images.iter().all(|img| theory.membership(img));
    let preserves_statistics = theory.extreme_points().iter().zip(&images).all(|(v, img)| {
        effects.iter().all(|e| dot(e, img) == dot(e, v.coords()))
    });
    let acts_as_identity = theory.acts_as_identity(&transform);

    let classical = is_classical(theory)?;
    let witness = if classical {
        None
    } else {
        // first colliding pair in V-rep order
        let stats = vertex_statistics(theory, m);
        let count = theory.vertex_count();
        (0..count)
            .flat_map(|i| (i + 1..count).map(move |j| (i, j)))
            .find(|&(i, j)| stats[i] == stats[j] && images[i] == images[j])
    };
    Ok(CanonicalPhaseMap {
        block,
        effects,
        anchors,
        transform,
        maps_into_state_space,
        preserves_statistics,
        witness,
        acts_as_identity,
    })
}

#[derive(Clone, Debug)]
pub struct PhaseDynamicsReport {
    pub transform: Transform,
    pub preserves_measurement: bool,
    pub preserves_state_space: bool,
    pub is_reversible: bool,
    /// Extreme points moved by the transform.
    pub changed_states: Vec<usize>,
}

pub fn is_phase_dynamics(theory: &Theory, m: &Measurement, t: &Transform) -> Result<PhaseDynamicsReport> {
    let images = theory.vertex_images(t)?;
    let preserves_state_space = images.iter().all(|img| theory.membership(img));
    let preserves_measurement = theory
        .extreme_points()
        .iter()
        .zip(&images)
        .all(|(v, img)| m.effects().iter().all(|e| e.eval(img) == e.eval(v.coords())));
    let changed_states = theory
        .extreme_points()
        .iter()
        .zip(&images)
        .enumerate()
        .filter(|(_, (v, img))| v.coords() != img.as_slice())
        .map(|(i, _)| i)
        .collect();
    Ok(PhaseDynamicsReport {
        transform: t.clone(),
        preserves_measurement,
        preserves_state_space,
        is_reversible: theory.vertex_permutation(t).is_some(),
        changed_states,
    })
}

/// Convex combination of phase-group elements.
pub fn mixture_of_phase_elements(
    theory: &Theory,
    phase: &PhaseGroupResult,
    weights: &[(Rational, Transform)],
) -> Result<Transform> {
    if weights.is_empty() {
        return Err(Error::Precondition("empty mixture".into()));
    }
    if weights.iter().any(|(w, _)| w.is_negative()) {
        return Err(Error::Precondition("negative mixture weight".into()));
    }
    let total: Rational = weights.iter().map(|(w, _)| w).sum();
    if !total.is_one() {
        return Err(Error::Precondition(format!("mixture weights sum to {total}")));
    }
    for (_, t) in weights {
        if !phase.group.contains(theory, t) {
            return Err(Error::Precondition("mixture term is not a phase-group element".into()));
        }
    }
    let live: Vec<&(Rational, Transform)> = weights.iter().filter(|(w, _)| !w.is_zero()).collect();
    if let [(_, t)] = live.as_slice() {
        return Ok(t.clone());
    }
    let dim = theory.dim();
    let mut acc = Matrix::zeros(dim, dim);
    for (w, t) in live {
        acc = acc.add(&t.matrix().scale(w)).ok_or(Error::LayoutMismatch {
            expected: dim,
            found: t.dim(),
        })?;
    }
    Transform::new(acc, false)
}

/// `fine` refines `coarse` when every coarse effect agrees, on the state
/// space, with the sum of a subset of the fine effects.
pub fn refines(theory: &Theory, fine: &Measurement, coarse: &Measurement) -> bool {
    let n = fine.len();
    if n >= 24 {
        return false;
    }
    let fine_vals = vertex_statistics(theory, fine);
    let coarse_vals = vertex_statistics(theory, coarse);
    (0..coarse.len()).all(|k| {
        (1u32..(1 << n)).any(|mask| {
            fine_vals.iter().zip(&coarse_vals).all(|(f, c)| {
                let sum: Rational = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| &f[i]).sum();
                sum == c[k]
            })
        })
    })
}

#[derive(Clone, Debug)]
pub struct TheoremReport {
    pub theory: String,
    pub classical: bool,
    pub measurement: String,
    pub phase_group_order: usize,
    /// Orders of the phase groups of every registered maximal measurement.
    pub maximal_phase_orders: Vec<(String, usize)>,
    pub canonical: CanonicalPhaseMap,
    pub pass: bool,
}

/// Runs the classical ⇔ trivial-phase-dynamics statement on one theory,
/// using the first maximal fiducial measurement.
pub fn verify_theorem(theory: &Theory, cfg: &SearchConfig) -> Result<TheoremReport> {
    let classical = is_classical(theory)?;
    let m = theory
        .measurements()
        .iter()
        .find(|m| m.fiducial_block().is_some() && verify_maximal(theory, m))
        .ok_or_else(|| {
            Error::Precondition(format!("{} has no maximal fiducial measurement", theory.name()))
        })?
        .clone();
    let ambient = allowed_group(theory, cfg)?;
    let mut maximal_phase_orders = Vec::new();
    for mm in theory.measurements().iter().filter(|mm| verify_maximal(theory, mm)) {
        let r = phase_group_with(theory, mm, &ambient, cfg.exec)?;
        maximal_phase_orders.push((mm.label().to_string(), r.group.order()));
    }
    let phase_group_order = maximal_phase_orders
        .iter()
        .find(|(l, _)| l == m.label())
        .map(|(_, o)| *o)
        .expect("measurement is maximal");
    let canonical = canonical_phase_map(theory, &m)?;
    let pass = canonical.obligations_hold(classical)
        && (!classical || maximal_phase_orders.iter().all(|(_, o)| *o == 1));
    Ok(TheoremReport {
        theory: theory.name().to_string(),
        classical,
        measurement: m.label().to_string(),
        phase_group_order,
        maximal_phase_orders,
        canonical,
        pass,
    })
}
