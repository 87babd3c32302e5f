use std::fmt;
use std::ops::Range;

use crate::rational::Rational;

/// One fiducial measurement: its label and number of outcomes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Block {
    pub label: String,
    pub outcomes: usize,
}

/// Stacked-probability coordinate system: the ordered list of fiducial
/// measurements and their outcome counts.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct MeasurementLayout {
    blocks: Vec<Block>,
    offsets: Vec<usize>,
    total_dim: usize,
}

/// Human-readable name of a single coordinate, e.g. `p(+1|Y)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CoordLabel {
    pub block: String,
    pub outcome: String,
}

impl CoordLabel {
    /// `P(+1|X)` style, as used for full output vectors.
    pub fn upper(&self) -> String {
        format!("P({}|{})", self.outcome, self.block)
    }
}

impl fmt::Display for CoordLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "p({}|{})", self.outcome, self.block)
    }
}

/// Outcome names: binary measurements use `+1`/`-1`, larger ones their index.
pub fn outcome_label(outcomes: usize, index: usize) -> String {
    if outcomes == 2 {
        if index == 0 { "+1".into() } else { "-1".into() }
    } else {
        index.to_string()
    }
}

impl MeasurementLayout {
    pub fn new(blocks: Vec<Block>) -> Self {
        let mut offsets = Vec::with_capacity(blocks.len());
        let mut total = 0;
        for b in &blocks {
            offsets.push(total);
            total += b.outcomes;
        }
        MeasurementLayout { blocks, offsets, total_dim: total }
    }

    /// `k` blocks of `n` outcomes each, with the given labels.
    pub fn uniform(labels: &[&str], outcomes: usize) -> Self {
        MeasurementLayout::new(
            labels.iter().map(|l| Block { label: (*l).to_string(), outcomes }).collect(),
        )
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    pub fn block_count(&self) -> usize {
        self.blocks.len()
    }

    pub fn total_dim(&self) -> usize {
        self.total_dim
    }

    pub fn block_range(&self, block: usize) -> Range<usize> {
        let start = self.offsets[block];
        start..start + self.blocks[block].outcomes
    }

    pub fn block_index(&self, label: &str) -> Option<usize> {
        self.blocks.iter().position(|b| b.label == label)
    }

    /// Maps a coordinate index to its `(block, outcome)` pair.
    pub fn coordinate(&self, index: usize) -> Option<(usize, usize)> {
        if index >= self.total_dim {
            return None;
        }
        let block = self.offsets.partition_point(|&o| o <= index) - 1;
        Some((block, index - self.offsets[block]))
    }

    pub fn coord_label(&self, index: usize) -> CoordLabel {
        let (b, o) = self.coordinate(index).expect("coordinate out of range");
        let block = &self.blocks[b];
        CoordLabel { block: block.label.clone(), outcome: outcome_label(block.outcomes, o) }
    }

    /// Dimension of the normalised affine space, `sum_j (l_j - 1)`.
    pub fn normalized_dim(&self) -> usize {
        self.blocks.iter().map(|b| b.outcomes.saturating_sub(1)).sum()
    }

    /// True iff every block of `v` sums to exactly one.
    pub fn is_normalized(&self, v: &[Rational]) -> bool {
        v.len() == self.total_dim
            && (0..self.blocks.len())
                .all(|b| v[self.block_range(b)].iter().sum::<Rational>().is_one())
    }

    /// Covector summing one block: the block's normalisation functional.
    pub fn block_functional(&self, block: usize) -> Vec<Rational> {
        let mut f = vec![Rational::zero(); self.total_dim];
        for i in self.block_range(block) {
            f[i] = Rational::one();
        }
        f
    }

    /// One-hot covector for a single coordinate.
    pub fn one_hot(&self, index: usize) -> Vec<Rational> {
        let mut f = vec![Rational::zero(); self.total_dim];
        f[index] = Rational::one();
        f
    }

    /// The uniformly mixed point: every block uniform.
    pub fn center(&self) -> Vec<Rational> {
        let mut c = Vec::with_capacity(self.total_dim);
        for b in &self.blocks {
            let p = Rational::new(1, b.outcomes as i64);
            c.extend(std::iter::repeat_n(p, b.outcomes));
        }
        c
    }

    /// Renders a vector with block separators: `(1,0|1/2,1/2)`.
    pub fn render(&self, v: &[Rational]) -> String {
        let parts: Vec<String> = (0..self.blocks.len())
            .map(|b| {
                v[self.block_range(b)].iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")
            })
            .collect();
        format!("({})", parts.join("|"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{ints, q};

    #[test]
    fn coordinates_map_to_blocks() {
        let l = MeasurementLayout::new(vec![
            Block { label: "A".into(), outcomes: 3 },
            Block { label: "B".into(), outcomes: 2 },
        ]);
        assert_eq!(l.total_dim(), 5);
        assert_eq!(l.coordinate(0), Some((0, 0)));
        assert_eq!(l.coordinate(2), Some((0, 2)));
        assert_eq!(l.coordinate(3), Some((1, 0)));
        assert_eq!(l.coordinate(4), Some((1, 1)));
        assert_eq!(l.coordinate(5), None);
        assert_eq!(l.normalized_dim(), 3);
        assert_eq!(l.coord_label(3).to_string(), "p(+1|B)");
        assert_eq!(l.coord_label(1).to_string(), "p(1|A)");
    }

    #[test]
    fn normalisation_check() {
        let l = MeasurementLayout::uniform(&["X", "Y"], 2);
        assert!(l.is_normalized(&[q(1, 2), q(1, 2), Rational::one(), Rational::zero()]));
        assert!(!l.is_normalized(&ints(&[1, 1, 1, 0])));
        assert!(!l.is_normalized(&ints(&[1, 0])));
        assert_eq!(l.render(&ints(&[1, 0, 0, 1])), "(1,0|0,1)");
    }
}
