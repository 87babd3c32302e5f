//! Built-in theories: classical dits, m-in n-out gbits, the Spekkens toy bit
//! and the plain octahedron, together with their standard measurements and a
//! few fixed maps used throughout the examples.

use crate::error::{Error, Result};
use crate::layout::{Block, MeasurementLayout};
use crate::linalg::Matrix;
use crate::rational::{ints, Rational};
use crate::state::State;
use crate::theory::{Facet, MeasurementSpec, Theory, TheoryDefinition, TransformPolicy};
use crate::transform::Transform;

pub use crate::qubit::QubitBallSpec;

/// Default cap on the number of extreme points a builder will enumerate.
pub const DEFAULT_VERTEX_LIMIT: u64 = 10_000_000;

fn spec(label: &str, effects: Vec<Vec<Rational>>) -> MeasurementSpec {
    MeasurementSpec { label: label.to_string(), effects }
}

fn scaled(v: &[i64], k: &Rational) -> Vec<Rational> {
    v.iter().map(|&x| Rational::from_int(x) * k).collect()
}

fn fiducials(layout: &MeasurementLayout) -> Vec<MeasurementSpec> {
    layout
        .blocks()
        .iter()
        .enumerate()
        .map(|(b, block)| {
            spec(&block.label, layout.block_range(b).map(|i| layout.one_hot(i)).collect())
        })
        .collect()
}

fn unit(layout: &MeasurementLayout) -> MeasurementSpec {
    let k = Rational::new(1, layout.block_count() as i64);
    spec("unit", vec![vec![k; layout.total_dim()]])
}

/// The simplex of `n` outcomes: a single fiducial block `M0`.
pub fn classical_dit(n: usize) -> Result<Theory> {
    if n < 2 {
        return Err(Error::Precondition(format!("classical dit needs n >= 2, got {n}")));
    }
    let layout = MeasurementLayout::uniform(&["M0"], n);
    let extreme_points = (0..n).map(|i| layout.one_hot(i)).collect();
    let facets = (0..n).map(|i| Facet::nonnegative(n, i)).collect();
    let mut measurements = fiducials(&layout);
    measurements.push(unit(&layout));
    if n == 4 {
        // Outcomes read as bit pairs 00, 01, 10, 11.
        measurements.push(spec("parity", vec![ints(&[1, 0, 0, 1]), ints(&[0, 1, 1, 0])]));
        measurements.push(spec("bit0", vec![ints(&[1, 1, 0, 0]), ints(&[0, 0, 1, 1])]));
    }
    Theory::from_definition(TheoryDefinition {
        name: format!("classical-{n}"),
        layout,
        extreme_points,
        facets,
        distinguishable: n,
        measurements,
        policy: TransformPolicy::AllAutomorphisms,
    })
}

pub fn gbit_labels(m: usize) -> Vec<String> {
    if m == 3 {
        vec!["X".into(), "Y".into(), "Z".into()]
    } else {
        (0..m).map(|i| format!("X{i}")).collect()
    }
}

pub fn gbit(m: usize, n: usize) -> Result<Theory> {
    gbit_with_limit(m, n, DEFAULT_VERTEX_LIMIT)
}

/// The `m`-in `n`-out gbit: the full product of `m` simplices with `n`
/// vertices each. Refuses to enumerate more than `limit` extreme points.
pub fn gbit_with_limit(m: usize, n: usize, limit: u64) -> Result<Theory> {
    if m < 1 || n < 2 {
        return Err(Error::Precondition(format!("gbit needs m >= 1 and n >= 2, got {m}, {n}")));
    }
    let count = (n as u64).checked_pow(m as u32).filter(|&c| c <= limit);
    let Some(count) = count else {
        return Err(Error::BudgetExceeded { budget: limit });
    };
    let labels = gbit_labels(m);
    let layout = MeasurementLayout::new(
        labels.iter().map(|l| Block { label: l.clone(), outcomes: n }).collect(),
    );
    let dim = layout.total_dim();

    let mut extreme_points = Vec::with_capacity(count as usize);
    let mut digits = vec![0usize; m];
    loop {
        let mut v = vec![Rational::zero(); dim];
        for (b, &d) in digits.iter().enumerate() {
            v[b * n + d] = Rational::one();
        }
        extreme_points.push(v);
        let Some(pos) = (0..m).rev().find(|&b| digits[b] + 1 < n) else {
            break;
        };
        digits[pos] += 1;
        for d in digits.iter_mut().skip(pos + 1) {
            *d = 0;
        }
    }

    let facets = (0..dim).map(|i| Facet::nonnegative(dim, i)).collect();
    let mut measurements = fiducials(&layout);
    measurements.push(unit(&layout));
    let share = Rational::new(1, m as i64);
    measurements.push(spec(
        "diagonal",
        (0..n)
            .map(|k| {
                let mut e = vec![Rational::zero(); dim];
                for b in 0..m {
                    e[b * n + k] = share.clone();
                }
                e
            })
            .collect(),
    ));
    let half = Rational::half();
    if (m, n) == (3, 2) {
        measurements.push(spec(
            "xy-halves",
            (0..4).map(|i| scaled(&one_hot_i64(6, i), &half)).collect(),
        ));
    }
    if (m, n) == (4, 2) {
        measurements.push(spec(
            "g-set",
            [6, 7, 4, 5].iter().map(|&i| scaled(&one_hot_i64(8, i), &half)).collect(),
        ));
        let third = Rational::new(1, 3);
        measurements.push(spec(
            "six-effect",
            [0, 1, 2, 3, 6, 7].iter().map(|&i| scaled(&one_hot_i64(8, i), &third)).collect(),
        ));
    }
    Theory::from_definition(TheoryDefinition {
        name: format!("gbit-{m}-{n}"),
        layout,
        extreme_points,
        facets,
        distinguishable: n,
        measurements,
        policy: TransformPolicy::AllAutomorphisms,
    })
}

fn one_hot_i64(dim: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; dim];
    v[i] = 1;
    v
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Basis {
    X,
    Y,
    Z,
}

impl Basis {
    pub const ALL: [Basis; 3] = [Basis::X, Basis::Y, Basis::Z];

    pub fn block(self) -> usize {
        self as usize
    }

    pub fn label(self) -> &'static str {
        ["X", "Y", "Z"][self as usize]
    }

    pub fn parse(s: &str) -> Option<Basis> {
        match s {
            "X" | "x" => Some(Basis::X),
            "Y" | "y" => Some(Basis::Y),
            "Z" | "z" => Some(Basis::Z),
            _ => None,
        }
    }
}

/// Ontic vertices of the Spekkens bit, hidden-variable values 1..4.
pub const ONTIC: [[i64; 6]; 4] =
    [[1, 0, 1, 0, 1, 0], [0, 1, 0, 1, 1, 0], [1, 0, 0, 1, 0, 1], [0, 1, 1, 0, 0, 1]];

/// Ontic support (0-based) of each epistemic state, in extreme-point order
/// X+, X-, Y+, Y-, Z+, Z-.
pub const EPISTEMIC_SUPPORT: [(usize, usize); 6] = [(0, 2), (1, 3), (0, 3), (1, 2), (0, 1), (2, 3)];

fn octahedron_definition(name: &str) -> TheoryDefinition {
    let layout = MeasurementLayout::uniform(&["X", "Y", "Z"], 2);
    let extreme_points = EPISTEMIC_SUPPORT
        .iter()
        .map(|&(a, b)| {
            ONTIC[a].iter().zip(&ONTIC[b]).map(|(&x, &y)| Rational::new(x + y, 2)).collect()
        })
        .collect();
    // s_x<X> + s_y<Y> + s_z<Z> <= 1 with <W> = p(+1|W) - p(-1|W).
    let mut facets = Vec::with_capacity(8);
    for sx in [1, -1] {
        for sy in [1, -1] {
            for sz in [1, -1] {
                facets.push(Facet::new(ints(&[sx, -sx, sy, -sy, sz, -sz]), Rational::one()));
            }
        }
    }
    let mut measurements = fiducials(&layout);
    let third = Rational::new(1, 3);
    measurements.push(spec(
        "diagonal",
        vec![scaled(&[1, 0, 1, 0, 1, 0], &third), scaled(&[0, 1, 0, 1, 0, 1], &third)],
    ));
    measurements.push(unit(&layout));
    TheoryDefinition {
        name: name.to_string(),
        layout,
        extreme_points,
        facets,
        distinguishable: 2,
        measurements,
        policy: TransformPolicy::AllAutomorphisms,
    }
}

/// The octahedron of the six axis states with every linear automorphism
/// allowed, ignoring any ontic embedding.
pub fn octahedron() -> Result<Theory> {
    Theory::from_definition(octahedron_definition("octahedron"))
}

/// All 24 permutations of the hidden variable as one-line words
/// `[g(1), g(2), g(3), g(4)]` (0-based entries), in lexicographic order.
pub fn ontic_permutations() -> Vec<[usize; 4]> {
    let mut out = Vec::with_capacity(24);
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let w = [a, b, c, d];
                    let mut seen = [false; 4];
                    if w.iter().all(|&x| !std::mem::replace(&mut seen[x], true)) {
                        out.push(w);
                    }
                }
            }
        }
    }
    out
}

/// One-line word label, e.g. `2134` for the swap of the first two values.
pub fn word_label(w: &[usize; 4]) -> String {
    w.iter().map(|x| (x + 1).to_string()).collect()
}

#[derive(Clone, Debug)]
pub struct SpekkensBit {
    pub base: Theory,
    /// Corners of the ontic tetrahedron. They lie outside the octahedron and
    /// are therefore plain vectors, not states.
    pub ontic_vertices: Vec<Vec<Rational>>,
    pub allowed_group_label: &'static str,
    words: Vec<[usize; 4]>,
}

pub fn spekkens_bit() -> Result<SpekkensBit> {
    let scratch = Theory::from_definition(octahedron_definition("spekkens"))?;
    let words = ontic_permutations();
    let matrices = words
        .iter()
        .map(|w| {
            let perm = epistemic_permutation(w);
            scratch.transform_from_permutation(&perm).matrix().clone()
        })
        .collect();
    let mut def = octahedron_definition("spekkens");
    def.policy = TransformPolicy::ExplicitGroup(matrices);
    Ok(SpekkensBit {
        base: Theory::from_definition(def)?,
        ontic_vertices: ONTIC.iter().map(|v| ints(v)).collect(),
        allowed_group_label: "induced S4",
        words,
    })
}

/// Epistemic extreme-point permutation induced by an ontic word: the state
/// `i v j` goes to `g(i) v g(j)`.
pub fn epistemic_permutation(w: &[usize; 4]) -> Vec<usize> {
    EPISTEMIC_SUPPORT
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (w[a].min(w[b]), w[a].max(w[b]));
            EPISTEMIC_SUPPORT.iter().position(|&s| s == (x, y)).expect("pair exists")
        })
        .collect()
}

impl SpekkensBit {
    pub fn theory(&self) -> &Theory {
        &self.base
    }

    /// The induced transforms, in the same order as [`Self::words`].
    pub fn induced_group(&self) -> &[Transform] {
        self.base.explicit_group().expect("spekkens carries an explicit group")
    }

    pub fn words(&self) -> &[[usize; 4]] {
        &self.words
    }

    pub fn induced(&self, w: &[usize; 4]) -> Option<&Transform> {
        let i = self.words.iter().position(|x| x == w)?;
        Some(&self.induced_group()[i])
    }

    /// The ontic word a transform realises, if it permutes the tetrahedron.
    pub fn ontic_word(&self, t: &Transform) -> Option<[usize; 4]> {
        let mut w = [0usize; 4];
        for (i, v) in self.ontic_vertices.iter().enumerate() {
            let image = t.apply_raw(v).ok()?;
            w[i] = self.ontic_vertices.iter().position(|o| *o == image)?;
        }
        Some(w)
    }

    pub fn epistemic(&self, basis: Basis, plus: bool) -> &State {
        &self.base.extreme_points()[2 * basis.block() + usize::from(!plus)]
    }

    /// Outcome probabilities `(P(+1), P(-1))` for a basis measurement.
    pub fn outcome_distribution(&self, s: &State, basis: Basis) -> (Rational, Rational) {
        let b = s.block(basis.block());
        (b[0].clone(), b[1].clone())
    }

    /// Measures `s` in `basis`, conditions on `outcome` and re-randomises
    /// the hidden variable within the observed pair.
    pub fn measure_update(&self, s: &State, basis: Basis, plus: bool) -> Result<State> {
        let (p, m) = self.outcome_distribution(s, basis);
        let prob = if plus { p } else { m };
        if prob.is_zero() {
            return Err(Error::Precondition(format!(
                "outcome {} of {} has probability zero on {s}",
                if plus { "+1" } else { "-1" },
                basis.label()
            )));
        }
        Ok(self.epistemic(basis, plus).clone())
    }
}

/// Replaces the X and Y statistics by `(1/2, 1/2)` and leaves Z alone.
pub fn decoherence_map() -> Transform {
    let h = Rational::half();
    let mut m = Matrix::zeros(6, 6);
    for block in [0, 2] {
        for r in block..block + 2 {
            for c in block..block + 2 {
                m.set(r, c, h.clone());
            }
        }
    }
    m.set(4, 4, Rational::one());
    m.set(5, 5, Rational::one());
    Transform::new(m, false).expect("square")
}

/// Forces the X statistics to `(1, 0)` and keeps Y and Z.
pub fn measurement_setting_map() -> Transform {
    let m = Matrix::from_int_rows(&[
        &[1, 1, 0, 0, 0, 0],
        &[0, 0, 0, 0, 0, 0],
        &[0, 0, 1, 0, 0, 0],
        &[0, 0, 0, 1, 0, 0],
        &[0, 0, 0, 0, 1, 0],
        &[0, 0, 0, 0, 0, 1],
    ]);
    Transform::new(m, false).expect("square")
}

/// Built-in theory by name: `classical-N`, `gbit-M-N`, `spekkens`,
/// `octahedron`.
pub fn builtin(name: &str) -> Result<Theory> {
    builtin_with_limit(name, DEFAULT_VERTEX_LIMIT)
}

pub fn builtin_with_limit(name: &str, limit: u64) -> Result<Theory> {
    let parse = |s: &str| s.parse::<usize>().map_err(|_| Error::UnknownTheory(name.to_string()));
    let parts: Vec<&str> = name.split('-').collect();
    match parts.as_slice() {
        ["classical", n] => classical_dit(parse(n)?),
        ["gbit", m, n] => gbit_with_limit(parse(m)?, parse(n)?, limit),
        ["spekkens"] => Ok(spekkens_bit()?.base),
        ["octahedron"] => octahedron(),
        ["qubit"] => Err(Error::Unsupported(
            "the qubit ball is not a polytope; use the qubit commands".into(),
        )),
        _ => Err(Error::UnknownTheory(name.to_string())),
    }
}

/// Registered measurements of a built-in theory.
pub fn standard_measurements(theory: &Theory) -> Result<Vec<crate::state::Measurement>> {
    builtin(theory.name())?;
    Ok(theory.measurements().to_vec())
}

/// True iff the effects sum to one on every extreme point.
pub fn is_complete(theory: &Theory, effects: &[Vec<Rational>]) -> bool {
    theory.extreme_points().iter().all(|v| {
        effects.iter().map(|e| crate::rational::dot(e, v.coords())).sum::<Rational>().is_one()
    })
}
