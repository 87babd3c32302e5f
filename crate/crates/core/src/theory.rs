//! The [`Theory`] container: a polytope state space given by both its
//! extreme points and its facet inequalities, the measurements registered
//! with it, and the policy that decides which reversible maps are allowed.
//!
//! Construction is the only place validation happens. A `Theory` value is a
//! proof that the V- and H-descriptions agree, that every registered effect
//! yields probabilities on every state and that the declared number of
//! distinguishable states is attained by a registered measurement.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::layout::MeasurementLayout;
use crate::linalg::{affine_dimension, vec_sub, Matrix};
use crate::rational::{dot, lex_cmp, Rational};
use crate::state::{Effect, Measurement, State};
use crate::transform::Transform;

/// Exhaustive facet-intersection cross-check is refused above this many
/// hyperplane subsets.
pub const MAX_FACET_COMBINATIONS: u128 = 200_000;

/// Inequality `normal · x <= bound`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Facet {
    pub normal: Vec<Rational>,
    pub bound: Rational,
}

impl Facet {
    pub fn new(normal: Vec<Rational>, bound: Rational) -> Self {
        Facet { normal, bound }
    }

    /// `x_i >= 0`, written as `-x_i <= 0`.
    pub fn nonnegative(dim: usize, index: usize) -> Self {
        let mut normal = vec![Rational::zero(); dim];
        normal[index] = -Rational::one();
        Facet { normal, bound: Rational::zero() }
    }

    pub fn value(&self, v: &[Rational]) -> Rational {
        dot(&self.normal, v)
    }

    pub fn is_satisfied(&self, v: &[Rational]) -> bool {
        self.value(v) <= self.bound
    }

    pub fn is_tight(&self, v: &[Rational]) -> bool {
        self.value(v) == self.bound
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum TransformPolicy {
    /// Every linear automorphism of the state space is allowed.
    AllAutomorphisms,
    /// Only orientation-preserving automorphisms are allowed.
    ExcludeReflections,
    /// A fixed list of allowed reversible maps.
    ExplicitGroup(Vec<Matrix>),
}

impl TransformPolicy {
    pub fn name(&self) -> &'static str {
        match self {
            TransformPolicy::AllAutomorphisms => "all_automorphisms",
            TransformPolicy::ExcludeReflections => "exclude_reflections",
            TransformPolicy::ExplicitGroup(_) => "explicit_group",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MeasurementSpec {
    pub label: String,
    pub effects: Vec<Vec<Rational>>,
}

/// Unvalidated description of a theory, as produced by builders and parsed
/// from theory files.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoryDefinition {
    pub name: String,
    pub layout: MeasurementLayout,
    pub extreme_points: Vec<Vec<Rational>>,
    pub facets: Vec<Facet>,
    pub distinguishable: usize,
    pub measurements: Vec<MeasurementSpec>,
    pub policy: TransformPolicy,
}

#[derive(Clone, Debug)]
struct Geometry {
    affine_dim: usize,
    vertex_index: HashMap<Vec<Rational>, usize>,
    incidence: Vec<Vec<usize>>,
    affine_basis: Vec<usize>,
    barycentric: Vec<Vec<Rational>>,
    complement: Vec<Vec<Rational>>,
    basis_inverse: Matrix,
    canonical_order: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct Theory {
    name: String,
    layout: Arc<MeasurementLayout>,
    extreme_points: Vec<State>,
    facets: Vec<Facet>,
    distinguishable: usize,
    policy: TransformPolicy,
    measurements: Vec<Measurement>,
    explicit_group: Option<Vec<Transform>>,
    geometry: Geometry,
}

impl PartialEq for Theory {
    fn eq(&self, other: &Self) -> bool {
        self.definition() == other.definition()
    }
}

impl Theory {
    pub fn from_definition(def: TheoryDefinition) -> Result<Theory> {
        let TheoryDefinition {
            name,
            layout,
            extreme_points,
            facets,
            distinguishable,
            measurements,
            policy,
        } = def;
        let tag = name.clone();
        let invalid = |msg: String| Error::InvalidTheory(format!("{tag}: {msg}"));
        let dim = layout.total_dim();
        if layout.block_count() == 0 || layout.blocks().iter().any(|b| b.outcomes == 0) {
            return Err(invalid("layout needs at least one block with outcomes".into()));
        }
        if extreme_points.is_empty() {
            return Err(invalid("no extreme points".into()));
        }
        if distinguishable == 0 {
            return Err(invalid("distinguishable count must be positive".into()));
        }

        let mut vertex_index = HashMap::new();
        for (i, v) in extreme_points.iter().enumerate() {
            if v.len() != dim {
                return Err(Error::LayoutMismatch { expected: dim, found: v.len() });
            }
            if !layout.is_normalized(v) {
                return Err(invalid(format!("extreme point {i} is not block-normalised")));
            }
            if !v.iter().all(Rational::is_probability) {
                return Err(invalid(format!("extreme point {i} has a coordinate outside [0,1]")));
            }
            if vertex_index.insert(v.clone(), i).is_some() {
                return Err(invalid(format!("extreme point {i} is a duplicate")));
            }
        }
        for (f, facet) in facets.iter().enumerate() {
            if facet.normal.len() != dim {
                return Err(Error::LayoutMismatch { expected: dim, found: facet.normal.len() });
            }
            if let Some(i) = extreme_points.iter().position(|v| !facet.is_satisfied(v)) {
                return Err(invalid(format!("extreme point {i} violates facet {f}")));
            }
        }

        let affine_dim = affine_dimension(&extreme_points);
        if affine_dim != layout.normalized_dim() {
            return Err(invalid(format!(
                "state space has affine dimension {affine_dim}, layout requires {}",
                layout.normalized_dim()
            )));
        }
        if affine_dim == 0 {
            return Err(invalid("state space is a single point".into()));
        }

        let incidence: Vec<Vec<usize>> = extreme_points
            .iter()
            .map(|v| (0..facets.len()).filter(|&f| facets[f].is_tight(v)).collect())
            .collect();

        for (f, facet) in facets.iter().enumerate() {
            let tight: Vec<Vec<Rational>> =
                extreme_points.iter().filter(|v| facet.is_tight(v)).cloned().collect();
            if tight.len() < affine_dim || affine_dimension(&tight) + 1 != affine_dim {
                return Err(invalid(format!("inequality {f} does not define a facet")));
            }
        }

        // A listed point is extreme iff no other listed point lies on every
        // facet it lies on.
        for (i, fi) in incidence.iter().enumerate() {
            if let Some(j) = incidence
                .iter()
                .enumerate()
                .position(|(j, fj)| j != i && fi.iter().all(|f| fj.contains(f)))
            {
                return Err(invalid(format!(
                    "extreme point {i} is not extreme (it shares all its facets with point {j})"
                )));
            }
        }

        let affine_basis = pick_affine_basis(&extreme_points, affine_dim);
        let basis_vectors: Vec<Vec<Rational>> =
            affine_basis.iter().map(|&i| extreme_points[i].clone()).collect();
        let complement = Matrix::from_rows(basis_vectors.clone()).null_space();
        let mut columns = basis_vectors.clone();
        columns.extend(complement.iter().cloned());
        let basis_inverse = Matrix::from_columns(&columns)
            .inverse()
            .ok_or_else(|| invalid("extreme points do not span their affine hull".into()))?;
        let barycentric: Vec<Vec<Rational>> = extreme_points
            .iter()
            .map(|v| {
                let mut coeffs = basis_inverse.mul_vec(v).expect("dimension checked");
                coeffs.truncate(affine_basis.len());
                coeffs
            })
            .collect();

        hrep_vertices_are_listed(&layout, &facets, &basis_vectors, &vertex_index).map_err(|e| match e {
            Error::InvalidTheory(msg) => invalid(msg),
            other => other,
        })?;

        let mut canonical_order: Vec<usize> = (0..extreme_points.len()).collect();
        canonical_order.sort_by(|&a, &b| lex_cmp(&extreme_points[a], &extreme_points[b]));

        let layout = Arc::new(layout);
        let geometry = Geometry {
            affine_dim,
            vertex_index,
            incidence,
            affine_basis,
            barycentric,
            complement,
            basis_inverse,
            canonical_order,
        };
        let mut theory = Theory {
            name,
            extreme_points: extreme_points
                .into_iter()
                .map(|v| State::new_unchecked(v, layout.clone()))
                .collect(),
            layout,
            facets,
            distinguishable,
            policy: TransformPolicy::AllAutomorphisms,
            measurements: Vec::new(),
            explicit_group: None,
            geometry,
        };

        let mut registered = Vec::with_capacity(measurements.len());
        let mut seen = HashSet::new();
        for spec in &measurements {
            if !seen.insert(spec.label.clone()) {
                return Err(invalid(format!("measurement `{}` registered twice", spec.label)));
            }
            registered.push(theory.measurement_from(&spec.label, spec.effects.clone())?);
        }
        if !registered.is_empty() {
            let best = registered.iter().map(|m| theory.max_distinguishable(m)).max().unwrap_or(0);
            if best != distinguishable {
                return Err(invalid(format!(
                    "declared {distinguishable} distinguishable states, registered measurements \
                     distinguish at most {best}"
                )));
            }
        }
        theory.measurements = registered;

        if let TransformPolicy::ExplicitGroup(matrices) = &policy {
            let mut group = Vec::with_capacity(matrices.len());
            for (i, m) in matrices.iter().enumerate() {
                let t = Transform::new(m.clone(), true)?;
                theory.validate_transform(&t).map_err(|e| invalid(format!("group element {i}: {e}")))?;
                group.push(t);
            }
            theory.explicit_group = Some(group);
        }
        theory.policy = policy;
        Ok(theory)
    }

    /// Reconstructs the definition this theory was validated from.
    pub fn definition(&self) -> TheoryDefinition {
        TheoryDefinition {
            name: self.name.clone(),
            layout: (*self.layout).clone(),
            extreme_points: self.extreme_points.iter().map(|s| s.coords().to_vec()).collect(),
            facets: self.facets.clone(),
            distinguishable: self.distinguishable,
            measurements: self
                .measurements
                .iter()
                .map(|m| MeasurementSpec {
                    label: m.label().to_string(),
                    effects: m.effects().iter().map(|e| e.coords().to_vec()).collect(),
                })
                .collect(),
            policy: self.policy.clone(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn layout(&self) -> &MeasurementLayout {
        &self.layout
    }

    pub fn dim(&self) -> usize {
        self.layout.total_dim()
    }

    pub fn extreme_points(&self) -> &[State] {
        &self.extreme_points
    }

    pub fn vertex(&self, i: usize) -> &[Rational] {
        self.extreme_points[i].coords()
    }

    pub fn vertex_count(&self) -> usize {
        self.extreme_points.len()
    }

    pub fn vertex_index_of(&self, v: &[Rational]) -> Option<usize> {
        self.geometry.vertex_index.get(v).copied()
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    /// Facets tight at vertex `i`.
    pub fn incidence(&self, i: usize) -> &[usize] {
        &self.geometry.incidence[i]
    }

    pub fn distinguishable(&self) -> usize {
        self.distinguishable
    }

    pub fn policy(&self) -> &TransformPolicy {
        &self.policy
    }

    pub fn explicit_group(&self) -> Option<&[Transform]> {
        self.explicit_group.as_deref()
    }

    pub fn affine_dim(&self) -> usize {
        self.geometry.affine_dim
    }

    /// Indices of affinely independent vertices spanning the state space.
    pub fn affine_basis(&self) -> &[usize] {
        &self.geometry.affine_basis
    }

    /// Coefficients of vertex `i` in the affine basis (they sum to one).
    pub fn barycentric(&self, i: usize) -> &[Rational] {
        &self.geometry.barycentric[i]
    }

    /// Vertex indices sorted lexicographically by coordinates.
    pub fn canonical_order(&self) -> &[usize] {
        &self.geometry.canonical_order
    }

    pub fn measurements(&self) -> &[Measurement] {
        &self.measurements
    }

    pub fn measurement(&self, label: &str) -> Result<&Measurement> {
        self.measurements
            .iter()
            .find(|m| m.label() == label)
            .ok_or_else(|| Error::UnknownMeasurement(label.to_string()))
    }

    /// Block normalisation, probability range and every facet, exactly.
    pub fn membership(&self, v: &[Rational]) -> bool {
        v.len() == self.dim()
            && self.layout.is_normalized(v)
            && v.iter().all(Rational::is_probability)
            && self.facets.iter().all(|f| f.is_satisfied(v))
    }

    pub fn state(&self, coords: Vec<Rational>) -> Result<State> {
        if coords.len() != self.dim() {
            return Err(Error::LayoutMismatch { expected: self.dim(), found: coords.len() });
        }
        if !self.membership(&coords) {
            return Err(Error::InvalidState(format!(
                "{} is outside the state space of {}",
                self.layout.render(&coords),
                self.name
            )));
        }
        Ok(State::new_unchecked(coords, self.layout.clone()))
    }

    /// Validates a covector as an effect of this theory: its value on every
    /// extreme point (hence, by convexity, on every state) is in `[0, 1]`.
    pub fn effect(&self, coords: Vec<Rational>) -> Result<Effect> {
        if coords.len() != self.dim() {
            return Err(Error::LayoutMismatch { expected: self.dim(), found: coords.len() });
        }
        for (i, v) in self.extreme_points.iter().enumerate() {
            let p = dot(&coords, v.coords());
            if !p.is_probability() {
                return Err(Error::InvalidEffect(format!(
                    "value {p} on extreme point {i} of {}",
                    self.name
                )));
            }
        }
        Ok(Effect::new_unchecked(coords, self.layout.clone()))
    }

    /// Validates a measurement against this theory without registering it.
    pub fn measurement_from(&self, label: &str, effects: Vec<Vec<Rational>>) -> Result<Measurement> {
        let bad = |reason: String| Error::InvalidMeasurement { label: label.to_string(), reason };
        if effects.is_empty() {
            return Err(bad("no effects".into()));
        }
        let effects = effects
            .into_iter()
            .map(|e| self.effect(e))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| bad(e.to_string()))?;
        for (i, v) in self.extreme_points.iter().enumerate() {
            let total: Rational = effects.iter().map(|e| e.eval(v.coords())).sum();
            if !total.is_one() {
                return Err(bad(format!("outcome probabilities sum to {total} on extreme point {i}")));
            }
        }
        Ok(Measurement::new_unchecked(label.to_string(), effects))
    }

    /// Largest set of extreme points the measurement tells apart with
    /// certainty (pairwise disjoint outcome supports).
    pub fn max_distinguishable(&self, m: &Measurement) -> usize {
        let mut supports: Vec<u128> = self
            .extreme_points
            .iter()
            .map(|v| {
                m.effects()
                    .iter()
                    .enumerate()
                    .filter(|(_, e)| !e.eval(v.coords()).is_zero())
                    .fold(0u128, |acc, (i, _)| acc | (1u128 << (i % 128)))
            })
            .collect();
        supports.sort_unstable();
        supports.dedup();
        max_disjoint_packing(&supports, 0, 0)
    }

    /// Applies `t` and re-validates the image.
    pub fn apply_transform(&self, t: &Transform, s: &State) -> Result<State> {
        if s.layout() != &*self.layout {
            return Err(Error::LayoutMismatch { expected: self.dim(), found: s.coords().len() });
        }
        let image = t.apply_raw(s.coords())?;
        if !self.membership(&image) {
            return Err(Error::InvalidTransform(format!(
                "image {} of {} leaves the state space of {}",
                self.layout.render(&image),
                s,
                self.name
            )));
        }
        Ok(State::new_unchecked(image, self.layout.clone()))
    }

    /// Checks that `t` maps the state space into itself and, when flagged
    /// reversible, permutes the extreme points.
    pub fn validate_transform(&self, t: &Transform) -> Result<()> {
        if t.dim() != self.dim() {
            return Err(Error::LayoutMismatch { expected: self.dim(), found: t.dim() });
        }
        for (i, v) in self.extreme_points.iter().enumerate() {
            let image = t.apply_raw(v.coords())?;
            if !self.membership(&image) {
                return Err(Error::InvalidTransform(format!(
                    "extreme point {i} is mapped outside the state space"
                )));
            }
        }
        if t.is_reversible() && self.vertex_permutation(t).is_none() {
            return Err(Error::InvalidTransform(
                "flagged reversible but does not permute the extreme points".into(),
            ));
        }
        Ok(())
    }

    pub fn vertex_images(&self, t: &Transform) -> Result<Vec<Vec<Rational>>> {
        self.extreme_points.iter().map(|v| t.apply_raw(v.coords())).collect()
    }

    /// `perm[i]` is the index of the image of vertex `i`, when `t` maps the
    /// vertex set bijectively onto itself.
    pub fn vertex_permutation(&self, t: &Transform) -> Option<Vec<usize>> {
        if t.dim() != self.dim() {
            return None;
        }
        let mut used = vec![false; self.vertex_count()];
        let mut perm = Vec::with_capacity(self.vertex_count());
        for v in &self.extreme_points {
            let image = t.apply_raw(v.coords()).ok()?;
            let j = self.vertex_index_of(&image)?;
            if std::mem::replace(&mut used[j], true) {
                return None;
            }
            perm.push(j);
        }
        Some(perm)
    }

    /// The canonical matrix realising a vertex permutation: the unique
    /// linear map on the span of the state space sending vertex `i` to
    /// vertex `perm[i]`, extended by the identity on the orthogonal
    /// complement. The caller guarantees `perm` is realisable.
    pub fn transform_from_permutation(&self, perm: &[usize]) -> Transform {
        let mut columns: Vec<Vec<Rational>> =
            self.geometry.affine_basis.iter().map(|&b| self.vertex(perm[b]).to_vec()).collect();
        columns.extend(self.geometry.complement.iter().cloned());
        let images = Matrix::from_columns(&columns);
        let m = images.mul(&self.geometry.basis_inverse).expect("square of matching size");
        Transform::new(m, true).expect("square")
    }

    /// Images of all vertices under the affine extension of a partial
    /// assignment of the affine basis (`basis_images[k]` is the image of
    /// `affine_basis()[k]`).
    pub fn extend_basis_assignment(&self, basis_images: &[usize]) -> Vec<Vec<Rational>> {
        (0..self.vertex_count())
            .map(|i| {
                let mut acc = vec![Rational::zero(); self.dim()];
                for (coef, &img) in self.geometry.barycentric[i].iter().zip(basis_images) {
                    if coef.is_zero() {
                        continue;
                    }
                    for (a, x) in acc.iter_mut().zip(self.vertex(img)) {
                        if !x.is_zero() {
                            *a += coef * x;
                        }
                    }
                }
                acc
            })
            .collect()
    }

    /// Equality of action on the affine hull of the state space.
    pub fn same_action(&self, a: &Transform, b: &Transform) -> bool {
        match (self.vertex_images(a), self.vertex_images(b)) {
            (Ok(x), Ok(y)) => x == y,
            _ => false,
        }
    }

    /// Whether `t` acts as the identity on every state.
    pub fn acts_as_identity(&self, t: &Transform) -> bool {
        self.vertex_images(t)
            .map(|imgs| imgs.iter().zip(&self.extreme_points).all(|(a, b)| a == b.coords()))
            .unwrap_or(false)
    }

    /// Difference vectors `b_k - b_0` of the affine basis.
    pub fn affine_directions(&self) -> Vec<Vec<Rational>> {
        let basis = &self.geometry.affine_basis;
        let origin = self.vertex(basis[0]);
        basis[1..].iter().map(|&b| vec_sub(self.vertex(b), origin)).collect()
    }
}

fn max_disjoint_packing(supports: &[u128], used: u128, start: usize) -> usize {
    let mut best = 0;
    for i in start..supports.len() {
        if supports[i] & used == 0 {
            best = best.max(1 + max_disjoint_packing(supports, used | supports[i], i + 1));
        }
    }
    best
}

fn pick_affine_basis(points: &[Vec<Rational>], affine_dim: usize) -> Vec<usize> {
    let mut basis = vec![0];
    let mut diffs: Vec<Vec<Rational>> = Vec::new();
    for (i, p) in points.iter().enumerate().skip(1) {
        if basis.len() == affine_dim + 1 {
            break;
        }
        let mut trial = diffs.clone();
        trial.push(vec_sub(p, &points[0]));
        if Matrix::from_rows(trial.clone()).rank() == trial.len() {
            diffs = trial;
            basis.push(i);
        }
    }
    basis
}

/// Enumerates every intersection of `affine_dim` bounding hyperplanes inside
/// the affine hull and checks that each feasible one is a listed extreme
/// point. Coordinate bounds take part unless they are implied by the facets.
fn hrep_vertices_are_listed(
    layout: &MeasurementLayout,
    facets: &[Facet],
    basis: &[Vec<Rational>],
    index: &HashMap<Vec<Rational>, usize>,
) -> Result<(), Error> {
    let dim = layout.total_dim();
    let k = basis.len() - 1;
    let mut constraints: Vec<Facet> = facets.to_vec();
    let has_lower: Vec<bool> =
        (0..dim).map(|i| facets.contains(&Facet::nonnegative(dim, i))).collect();
    for i in 0..dim {
        if !has_lower[i] {
            constraints.push(Facet::nonnegative(dim, i));
        }
    }
    for b in 0..layout.block_count() {
        let range = layout.block_range(b);
        for i in range.clone() {
            if range.clone().filter(|&j| j != i).all(|j| has_lower[j]) {
                continue;
            }
            let mut normal = vec![Rational::zero(); dim];
            normal[i] = Rational::one();
            constraints.push(Facet::new(normal, Rational::one()));
        }
    }

    let origin = &basis[0];
    let dirs: Vec<Vec<Rational>> = basis[1..].iter().map(|b| vec_sub(b, origin)).collect();
    // Constraint restricted to the hull: coeffs . y <= rhs.
    let mut reduced: Vec<(Vec<Rational>, Rational)> = Vec::new();
    for c in &constraints {
        let coeffs: Vec<Rational> = dirs.iter().map(|d| dot(&c.normal, d)).collect();
        let row = (coeffs, &c.bound - &c.value(origin));
        if row.0.iter().all(Rational::is_zero) || reduced.contains(&row) {
            continue;
        }
        reduced.push(row);
    }
    if reduced.len() < k {
        return Err(Error::InvalidTheory(format!(
            "{} inequalities cannot bound a {k}-dimensional polytope",
            reduced.len()
        )));
    }
    let combos = binomial(reduced.len() as u128, k as u128);
    if combos > MAX_FACET_COMBINATIONS {
        return Err(Error::BudgetExceeded { budget: MAX_FACET_COMBINATIONS as u64 });
    }
    let mut subset: Vec<usize> = (0..k).collect();
    loop {
        let system = Matrix::from_rows(subset.iter().map(|&i| reduced[i].0.clone()).collect());
        if let Some(inv) = system.inverse() {
            let rhs: Vec<Rational> = subset.iter().map(|&i| reduced[i].1.clone()).collect();
            let y = inv.mul_vec(&rhs).expect("square");
            let mut x = origin.clone();
            for (yi, d) in y.iter().zip(&dirs) {
                for (xj, dj) in x.iter_mut().zip(d) {
                    *xj += yi * dj;
                }
            }
            let feasible = constraints.iter().all(|f| f.is_satisfied(&x));
            if feasible && !index.contains_key(&x) {
                return Err(Error::InvalidTheory(format!(
                    "bounding hyperplanes meet at {} which is not a listed extreme point",
                    layout.render(&x)
                )));
            }
        }
        if !next_combination(&mut subset, reduced.len()) {
            break;
        }
    }
    Ok(())
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc.saturating_mul(n - i) / (i + 1))
}

/// Advances `c` to the next `k`-subset of `0..n` in lexicographic order.
pub(crate) fn next_combination(c: &mut [usize], n: usize) -> bool {
    let k = c.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if c[i] < n - k + i {
            c[i] += 1;
            for j in i + 1..k {
                c[j] = c[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::layout::MeasurementLayout;
    use crate::rational::{ints, q};

    fn segment() -> TheoryDefinition {
        let layout = MeasurementLayout::uniform(&["M"], 2);
        TheoryDefinition {
            name: "segment".into(),
            layout,
            extreme_points: vec![ints(&[1, 0]), ints(&[0, 1])],
            facets: vec![Facet::nonnegative(2, 0), Facet::nonnegative(2, 1)],
            distinguishable: 2,
            measurements: vec![MeasurementSpec {
                label: "M".into(),
                effects: vec![ints(&[1, 0]), ints(&[0, 1])],
            }],
            policy: TransformPolicy::AllAutomorphisms,
        }
    }

    #[test]
    fn valid_segment_builds() {
        let t = Theory::from_definition(segment()).unwrap();
        assert_eq!(t.affine_dim(), 1);
        assert!(t.membership(&[q(1, 3), q(2, 3)]));
        assert!(!t.membership(&[q(3, 2), q(-1, 2)]));
        assert!(!t.membership(&[q(1, 2), q(1, 3)]));
    }

    #[test]
    fn duplicate_vertex_rejected() {
        let mut d = segment();
        d.extreme_points.push(ints(&[1, 0]));
        let err = Theory::from_definition(d).unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
    }

    #[test]
    fn interior_point_rejected() {
        let mut d = segment();
        d.extreme_points.push(vec![q(1, 2), q(1, 2)]);
        let err = Theory::from_definition(d).unwrap_err();
        assert!(err.to_string().contains("not extreme"), "{err}");
    }

    #[test]
    fn missing_vertex_detected_by_facet_intersection() {
        // Square with one corner dropped: the H-rep still has the corner.
        let layout = MeasurementLayout::uniform(&["A", "B"], 2);
        let d = TheoryDefinition {
            name: "broken-square".into(),
            layout,
            extreme_points: vec![ints(&[1, 0, 1, 0]), ints(&[1, 0, 0, 1]), ints(&[0, 1, 1, 0])],
            facets: (0..4).map(|i| Facet::nonnegative(4, i)).collect(),
            distinguishable: 2,
            measurements: vec![],
            policy: TransformPolicy::AllAutomorphisms,
        };
        assert!(Theory::from_definition(d).is_err());
    }

    #[test]
    fn wrong_distinguishable_count_rejected() {
        let mut d = segment();
        d.distinguishable = 3;
        assert!(Theory::from_definition(d).is_err());
    }

    #[test]
    fn incomplete_measurement_rejected() {
        let mut d = segment();
        d.measurements[0].effects.pop();
        assert!(matches!(Theory::from_definition(d), Err(Error::InvalidMeasurement { .. })));
    }

    #[test]
    fn effect_out_of_range_rejected() {
        let t = Theory::from_definition(segment()).unwrap();
        assert!(t.effect(ints(&[2, 0])).is_err());
        assert!(t.effect(ints(&[1, 0, 0])).is_err());
    }

    #[test]
    fn combinations_enumerate_all() {
        let mut c = vec![0, 1];
        let mut n = 1;
        while next_combination(&mut c, 4) {
            n += 1;
        }
        assert_eq!(n, 6);
        assert_eq!(binomial(8, 4), 70);
    }

    #[test]
    fn permutation_matrix_matches_action() {
        let t = Theory::from_definition(segment()).unwrap();
        let flip = t.transform_from_permutation(&[1, 0]);
        assert_eq!(t.vertex_permutation(&flip), Some(vec![1, 0]));
        let s = t.state(vec![q(1, 3), q(2, 3)]).unwrap();
        let out = t.apply_transform(&flip, &s).unwrap();
        assert_eq!(out.coords(), &[q(2, 3), q(1, 3)]);
    }
}
