use std::sync::Arc;

use crate::error::{Error, Result};
use crate::layout::MeasurementLayout;
use crate::rational::{dot, Rational};

/// A normalised state: one probability distribution per fiducial block.
///
/// States are only handed out by [`crate::Theory`] after membership has been
/// checked, so every `State` satisfies its theory's inequalities.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct State {
    coords: Vec<Rational>,
    layout: Arc<MeasurementLayout>,
}

impl State {
    pub(crate) fn new_unchecked(coords: Vec<Rational>, layout: Arc<MeasurementLayout>) -> Self {
        State { coords, layout }
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn layout(&self) -> &MeasurementLayout {
        &self.layout
    }

    pub fn into_coords(self) -> Vec<Rational> {
        self.coords
    }

    /// Distribution of one fiducial block.
    pub fn block(&self, block: usize) -> &[Rational] {
        &self.coords[self.layout.block_range(block)]
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(Rational::to_f64).collect()
    }
}

impl std::fmt::Display for State {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.layout.render(&self.coords))
    }
}

/// A covector assigning an outcome probability to every state.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Effect {
    coords: Vec<Rational>,
    layout: Arc<MeasurementLayout>,
}

impl Effect {
    pub(crate) fn new_unchecked(coords: Vec<Rational>, layout: Arc<MeasurementLayout>) -> Self {
        Effect { coords, layout }
    }

    pub fn coords(&self) -> &[Rational] {
        &self.coords
    }

    pub fn layout(&self) -> &MeasurementLayout {
        &self.layout
    }

    /// Raw evaluation on an arbitrary vector of the right length.
    pub fn eval(&self, v: &[Rational]) -> Rational {
        dot(&self.coords, v)
    }

    /// Index of the single non-zero entry when the effect is a one-hot
    /// covector with entry one (a fiducial effect).
    pub fn one_hot_index(&self) -> Option<usize> {
        let mut found = None;
        for (i, x) in self.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            if !x.is_one() || found.is_some() {
                return None;
            }
            found = Some(i);
        }
        found
    }
}

/// Probability of the effect's outcome on a state: the exact dot product.
pub fn apply_effect(e: &Effect, s: &State) -> Result<Rational> {
    if e.layout != s.layout {
        return Err(Error::LayoutMismatch {
            expected: e.layout.total_dim(),
            found: s.layout.total_dim(),
        });
    }
    Ok(dot(&e.coords, &s.coords))
}

/// A named list of effects whose outcome probabilities sum to one on every
/// state of the theory that registered it.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Measurement {
    label: String,
    effects: Vec<Effect>,
}

impl Measurement {
    pub(crate) fn new_unchecked(label: String, effects: Vec<Effect>) -> Self {
        Measurement { label, effects }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    /// Outcome distribution on an arbitrary vector.
    pub fn statistics(&self, v: &[Rational]) -> Vec<Rational> {
        self.effects.iter().map(|e| e.eval(v)).collect()
    }

    /// If this is the fiducial measurement of one block (one-hot effects
    /// covering exactly that block, in order), returns the block index.
    pub fn fiducial_block(&self) -> Option<usize> {
        let layout = self.effects.first()?.layout();
        let first = self.effects[0].one_hot_index()?;
        let (block, outcome) = layout.coordinate(first)?;
        let range = layout.block_range(block);
        if outcome != 0 || self.effects.len() != range.len() {
            return None;
        }
        self.effects
            .iter()
            .zip(range)
            .all(|(e, i)| e.one_hot_index() == Some(i))
            .then_some(block)
    }
}
