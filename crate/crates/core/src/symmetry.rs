//! Finite groups of reversible transforms: the automorphism search over
//! vertex permutations, orientation filtering and identification of small
//! groups by signature plus an explicit isomorphism search.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use crate::rational::Rational;
use crate::theory::{Theory, TransformPolicy};
use crate::transform::Transform;

pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

/// Groups larger than this are only reported by order.
pub const IDENTIFY_BOUND: usize = 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    /// Fans the search out over rayon workers. Without the `parallel`
    /// feature this runs sequentially.
    Parallel,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Maximum number of candidate vertex assignments examined.
    pub budget: u64,
    pub exec: Exec,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: DEFAULT_SEARCH_BUDGET,
            exec: if cfg!(feature = "parallel") { Exec::Parallel } else { Exec::Sequential },
        }
    }
}

impl SearchConfig {
    pub fn sequential() -> Self {
        SearchConfig { exec: Exec::Sequential, ..Default::default() }
    }

    pub fn with_budget(budget: u64) -> Self {
        SearchConfig { budget, ..Default::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Signature {
    pub order: usize,
    pub abelian: bool,
    /// Element orders, sorted ascending.
    pub element_orders: Vec<usize>,
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let orders: Vec<String> = self.element_orders.iter().map(|o| o.to_string()).collect();
        write!(
            f,
            "order {}, {}, element orders {{{}}}",
            self.order,
            if self.abelian { "abelian" } else { "non-abelian" },
            orders.join(",")
        )
    }
}

/// A finite group of permutations given by its elements, with a full
/// multiplication table. `table[a][b]` is the index of `a ∘ b`.
#[derive(Clone, Debug)]
pub struct PermGroup {
    perms: Vec<Vec<usize>>,
    index: HashMap<Vec<usize>, usize>,
    table: Vec<Vec<usize>>,
    inverses: Vec<usize>,
    orders: Vec<usize>,
}

fn compose_perm(a: &[usize], b: &[usize]) -> Vec<usize> {
    b.iter().map(|&x| a[x]).collect()
}

fn is_identity(p: &[usize]) -> bool {
    p.iter().enumerate().all(|(i, &x)| i == x)
}

impl PermGroup {
    /// Checks the group axioms exhaustively. The identity must be first.
    pub fn new(perms: Vec<Vec<usize>>) -> Result<PermGroup> {
        let not_group = |msg: &str| Error::InvalidTransform(format!("not a group: {msg}"));
        if perms.first().map(|p| is_identity(p)) != Some(true) {
            return Err(not_group("identity is not the first element"));
        }
        let mut index = HashMap::with_capacity(perms.len());
        for (i, p) in perms.iter().enumerate() {
            if index.insert(p.clone(), i).is_some() {
                return Err(not_group("duplicate element"));
            }
        }
        let n = perms.len();
        let mut table = vec![vec![0; n]; n];
        for a in 0..n {
            for b in 0..n {
                let ab = compose_perm(&perms[a], &perms[b]);
                table[a][b] = *index.get(&ab).ok_or_else(|| not_group("not closed"))?;
            }
        }
        let mut inverses = vec![0; n];
        for a in 0..n {
            let ids: Vec<usize> = (0..n).filter(|&b| table[a][b] == 0).collect();
            if ids.len() != 1 || table[ids[0]][a] != 0 {
                return Err(not_group("inverse missing or not unique"));
            }
            inverses[a] = ids[0];
        }
        let orders = (0..n)
            .map(|a| {
                let (mut x, mut k) = (a, 1);
                while x != 0 {
                    x = table[x][a];
                    k += 1;
                }
                k
            })
            .collect();
        Ok(PermGroup { perms, index, table, inverses, orders })
    }

    /// Closure of a generating set, identity first, then breadth-first.
    pub fn generated_by(gens: &[Vec<usize>], degree: usize) -> Result<PermGroup> {
        let id: Vec<usize> = (0..degree).collect();
        let mut seen: HashSet<Vec<usize>> = HashSet::from([id.clone()]);
        let mut perms = vec![id];
        let mut i = 0;
        while i < perms.len() {
            for g in gens {
                let p = compose_perm(&perms[i], g);
                if seen.insert(p.clone()) {
                    perms.push(p);
                }
            }
            i += 1;
        }
        PermGroup::new(perms)
    }

    pub fn order(&self) -> usize {
        self.perms.len()
    }

    pub fn perms(&self) -> &[Vec<usize>] {
        &self.perms
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a][b]
    }

    pub fn inverse(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn element_order(&self, a: usize) -> usize {
        self.orders[a]
    }

    pub fn index_of(&self, perm: &[usize]) -> Option<usize> {
        self.index.get(perm).copied()
    }

    pub fn is_abelian(&self) -> bool {
        let n = self.order();
        (0..n).all(|a| (a + 1..n).all(|b| self.table[a][b] == self.table[b][a]))
    }

    pub fn signature(&self) -> Signature {
        let mut element_orders = self.orders.clone();
        element_orders.sort_unstable();
        Signature { order: self.order(), abelian: self.is_abelian(), element_orders }
    }

    /// Indices generated by `gens` inside this group.
    pub fn closure_of(&self, gens: &[usize]) -> Vec<bool> {
        let mut inside = vec![false; self.order()];
        inside[0] = true;
        let mut queue = VecDeque::from([0]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.table[x][g];
                if !std::mem::replace(&mut inside[y], true) {
                    queue.push_back(y);
                }
            }
        }
        inside
    }

    /// Greedy generating set: scan elements in order and keep each one not
    /// already generated by the previous picks.
    pub fn greedy_generators(&self) -> Vec<usize> {
        let mut gens = Vec::new();
        let mut inside = self.closure_of(&gens);
        for i in 1..self.order() {
            if !inside[i] {
                gens.push(i);
                inside = self.closure_of(&gens);
            }
        }
        gens
    }
}

/// A group of reversible transforms of one theory, stored alongside its
/// action on the theory's extreme points.
#[derive(Clone, Debug)]
pub struct Group {
    elements: Vec<Transform>,
    perms: PermGroup,
    signature: Signature,
    generators: Vec<usize>,
}

impl Group {
    fn assemble(perms: Vec<Vec<usize>>, elements: Vec<Transform>) -> Result<Group> {
        let perms = PermGroup::new(perms)?;
        let signature = perms.signature();
        let generators = perms.greedy_generators();
        Ok(Group { elements, perms, signature, generators })
    }

    /// Builds the group from vertex permutations, using the canonical
    /// matrix for each and sorting by action on the canonical vertex order.
    pub fn from_permutations(theory: &Theory, mut perms: Vec<Vec<usize>>) -> Result<Group> {
        let canon = theory.canonical_order();
        let mut rank = vec![0; canon.len()];
        for (r, &v) in canon.iter().enumerate() {
            rank[v] = r;
        }
        let key = |p: &Vec<usize>| -> Vec<usize> { canon.iter().map(|&v| rank[p[v]]).collect() };
        perms.sort_by_cached_key(key);
        perms.dedup();
        let elements = perms.iter().map(|p| theory.transform_from_permutation(p)).collect();
        Group::assemble(perms, elements)
    }

    /// Keeps the given transforms verbatim (identity moved to the front,
    /// duplicate actions dropped) after checking each permutes the vertices.
    pub fn from_transforms(theory: &Theory, transforms: Vec<Transform>) -> Result<Group> {
        let mut perms = Vec::with_capacity(transforms.len());
        let mut elements = Vec::with_capacity(transforms.len());
        let mut seen = HashSet::new();
        for t in transforms {
            let p = theory.vertex_permutation(&t).ok_or_else(|| {
                Error::InvalidTransform("group element does not permute the extreme points".into())
            })?;
            if seen.insert(p.clone()) {
                perms.push(p);
                elements.push(t);
            }
        }
        if let Some(id) = perms.iter().position(|p| is_identity(p)) {
            let p = perms.remove(id);
            perms.insert(0, p);
            let t = elements.remove(id);
            elements.insert(0, t);
        }
        Group::assemble(perms, elements)
    }

    /// Subgroup on the given element indices, in this group's order.
    pub fn subgroup(&self, keep: &[usize]) -> Result<Group> {
        let perms = keep.iter().map(|&i| self.perms.perms[i].clone()).collect();
        let elements = keep.iter().map(|&i| self.elements[i].clone()).collect();
        Group::assemble(perms, elements)
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn elements(&self) -> &[Transform] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &Transform {
        &self.elements[i]
    }

    pub fn perm(&self, i: usize) -> &[usize] {
        &self.perms.perms[i]
    }

    pub fn perms(&self) -> &[Vec<usize>] {
        self.perms.perms()
    }

    pub fn perm_group(&self) -> &PermGroup {
        &self.perms
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn is_abelian(&self) -> bool {
        self.signature.abelian
    }

    pub fn is_trivial(&self) -> bool {
        self.order() == 1
    }

    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    pub fn element_order(&self, i: usize) -> usize {
        self.perms.element_order(i)
    }

    /// Index of the element acting like `t` on the theory's vertices.
    pub fn position_of(&self, theory: &Theory, t: &Transform) -> Option<usize> {
        self.perms.index_of(&theory.vertex_permutation(t)?)
    }

    pub fn contains(&self, theory: &Theory, t: &Transform) -> bool {
        self.position_of(theory, t).is_some()
    }

    pub fn is_subgroup_of(&self, other: &Group) -> bool {
        self.perms().iter().all(|p| other.perms.index_of(p).is_some())
    }
}

struct SearchData<'a> {
    theory: &'a Theory,
    basis: &'a [usize],
    degree: Vec<usize>,
    shared: Vec<Vec<usize>>,
    budget: u64,
    counter: AtomicU64,
}

impl SearchData<'_> {
    fn new<'a>(theory: &'a Theory, budget: u64) -> SearchData<'a> {
        let n = theory.vertex_count();
        let degree = (0..n).map(|v| theory.incidence(v).len()).collect();
        let shared = (0..n)
            .map(|v| {
                (0..n)
                    .map(|w| {
                        let fw = theory.incidence(w);
                        theory.incidence(v).iter().filter(|f| fw.binary_search(f).is_ok()).count()
                    })
                    .collect()
            })
            .collect();
        SearchData {
            theory,
            basis: theory.affine_basis(),
            degree,
            shared,
            budget,
            counter: AtomicU64::new(0),
        }
    }

    fn admissible(&self, level: usize, cand: usize, assigned: &[usize]) -> bool {
        let b = self.basis[level];
        self.degree[cand] == self.degree[b]
            && self.shared[cand][cand] == self.shared[b][b]
            && (0..level).all(|j| self.shared[cand][assigned[j]] == self.shared[b][self.basis[j]])
    }

    fn tick(&self) -> Result<()> {
        if self.counter.fetch_add(1, Ordering::Relaxed) >= self.budget {
            return Err(Error::BudgetExceeded { budget: self.budget });
        }
        Ok(())
    }

    fn leaf(&self, assigned: &[usize]) -> Option<Vec<usize>> {
        let images = self.theory.extend_basis_assignment(assigned);
        let mut used = vec![false; images.len()];
        let mut perm = Vec::with_capacity(images.len());
        for img in &images {
            let j = self.theory.vertex_index_of(img)?;
            if std::mem::replace(&mut used[j], true) {
                return None;
            }
            perm.push(j);
        }
        Some(perm)
    }

    fn extend(
        &self,
        assigned: &mut Vec<usize>,
        used: &mut [bool],
        out: &mut Vec<Vec<usize>>,
    ) -> Result<()> {
        let level = assigned.len();
        if level == self.basis.len() {
            if let Some(p) = self.leaf(assigned) {
                out.push(p);
            }
            return Ok(());
        }
        for cand in 0..used.len() {
            if used[cand] {
                continue;
            }
            self.tick()?;
            if !self.admissible(level, cand, assigned) {
                continue;
            }
            used[cand] = true;
            assigned.push(cand);
            let r = self.extend(assigned, used, out);
            assigned.pop();
            used[cand] = false;
            r?;
        }
        Ok(())
    }

    fn subtree(&self, first: usize) -> Result<Vec<Vec<usize>>> {
        let mut out = Vec::new();
        self.tick()?;
        if !self.admissible(0, first, &[]) {
            return Ok(out);
        }
        let mut used = vec![false; self.theory.vertex_count()];
        used[first] = true;
        let mut assigned = vec![first];
        self.extend(&mut assigned, &mut used, &mut out)?;
        Ok(out)
    }
}

/// Every vertex permutation realised by a linear map of the state space onto
/// itself, in no particular order.
pub fn automorphism_permutations(theory: &Theory, cfg: &SearchConfig) -> Result<Vec<Vec<usize>>> {
    let data = SearchData::new(theory, cfg.budget);
    let anchors: Vec<usize> = (0..theory.vertex_count()).collect();
    let parts: Vec<Result<Vec<Vec<usize>>>> = match cfg.exec {
        #[cfg(feature = "parallel")]
        Exec::Parallel => {
            use rayon::prelude::*;
            anchors.par_iter().map(|&a| data.subtree(a)).collect()
        }
        _ => anchors.iter().map(|&a| data.subtree(a)).collect(),
    };
    let mut perms = Vec::new();
    for p in parts {
        perms.extend(p?);
    }
    Ok(perms)
}

/// All linear automorphisms of the state space, ignoring the theory's
/// transform policy.
pub fn polytope_automorphisms(theory: &Theory, cfg: &SearchConfig) -> Result<Group> {
    Group::from_permutations(theory, automorphism_permutations(theory, cfg)?)
}

/// The automorphism group: searched for polytope policies, or the explicit
/// group after validation.
pub fn automorphism_group(theory: &Theory, cfg: &SearchConfig) -> Result<Group> {
    match theory.policy() {
        TransformPolicy::ExplicitGroup(_) => explicit_group(theory),
        _ => polytope_automorphisms(theory, cfg),
    }
}

fn explicit_group(theory: &Theory) -> Result<Group> {
    let ts = theory.explicit_group().expect("validated explicit group").to_vec();
    Group::from_transforms(theory, ts)
}

/// The reversible transforms the theory allows.
pub fn allowed_group(theory: &Theory, cfg: &SearchConfig) -> Result<Group> {
    match theory.policy() {
        TransformPolicy::AllAutomorphisms => polytope_automorphisms(theory, cfg),
        TransformPolicy::ExcludeReflections => {
            orientation_subgroup(&polytope_automorphisms(theory, cfg)?, theory)
        }
        TransformPolicy::ExplicitGroup(_) => explicit_group(theory),
    }
}

/// Sign of the determinant of the induced map on the affine hull.
pub fn orientation_sign(theory: &Theory, perm: &[usize]) -> i32 {
    let basis = theory.affine_basis();
    let k = basis.len() - 1;
    if k == 0 {
        return 1;
    }
    let origin = theory.barycentric(perm[basis[0]]);
    let mut m = Matrix::zeros(k, k);
    for col in 1..=k {
        let img = theory.barycentric(perm[basis[col]]);
        for row in 1..=k {
            m.set(row - 1, col - 1, &img[row] - &origin[row]);
        }
    }
    let det = m.determinant().unwrap_or_else(Rational::zero);
    if det.is_positive() {
        1
    } else if det.is_negative() {
        -1
    } else {
        0
    }
}

/// Elements whose action on the affine hull has positive determinant.
pub fn orientation_subgroup(g: &Group, theory: &Theory) -> Result<Group> {
    let keep: Vec<usize> =
        (0..g.order()).filter(|&i| orientation_sign(theory, g.perm(i)) > 0).collect();
    g.subgroup(&keep)
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum GroupName {
    Trivial,
    C2,
    /// Cyclic of order at least three.
    Cyclic(usize),
    Z2xZ2,
    S3,
    D4Order8,
    S4,
    B3Order48,
    B4Order384,
    Other(usize),
}

impl GroupName {
    pub fn label(&self) -> String {
        match self {
            GroupName::Trivial => "trivial".into(),
            GroupName::C2 => "C2".into(),
            GroupName::Cyclic(n) => format!("C{n}"),
            GroupName::Z2xZ2 => "Z2xZ2".into(),
            GroupName::S3 => "S3".into(),
            GroupName::D4Order8 => "D4_order8".into(),
            GroupName::S4 => "S4".into(),
            GroupName::B3Order48 => "B3_order48".into(),
            GroupName::B4Order384 => "B4_order384".into(),
            GroupName::Other(n) => format!("other({n})"),
        }
    }
}

impl fmt::Display for GroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

/// Concrete permutation model of a named group and generators for it.
pub struct Model {
    pub name: GroupName,
    pub group: PermGroup,
    pub generators: Vec<usize>,
}

fn model(name: GroupName, degree: usize, gens: &[Vec<usize>]) -> Model {
    let group = PermGroup::generated_by(gens, degree).expect("model generators form a group");
    let generators = gens.iter().map(|g| group.index_of(g).expect("generator present")).collect();
    Model { name, group, generators }
}

/// Signed permutations of `n` axes acting on the `2n` points `±e_i`
/// (point `2i` is `+e_i`, `2i+1` is `-e_i`).
fn hyperoctahedral_generators(n: usize) -> Vec<Vec<usize>> {
    let mut cycle = vec![0; 2 * n];
    for i in 0..n {
        let (plus, minus) = if i + 1 < n { (2 * (i + 1), 2 * (i + 1) + 1) } else { (1, 0) };
        cycle[2 * i] = plus;
        cycle[2 * i + 1] = minus;
    }
    let mut swap: Vec<usize> = (0..2 * n).collect();
    swap.swap(0, 2);
    swap.swap(1, 3);
    vec![cycle, swap]
}

pub fn models() -> Vec<Model> {
    vec![
        model(GroupName::Z2xZ2, 4, &[vec![1, 0, 3, 2], vec![2, 3, 0, 1]]),
        model(GroupName::S3, 3, &[vec![1, 2, 0], vec![1, 0, 2]]),
        model(GroupName::D4Order8, 4, &[vec![1, 2, 3, 0], vec![1, 0, 3, 2]]),
        model(GroupName::S4, 4, &[vec![1, 2, 3, 0], vec![1, 0, 2, 3]]),
        model(GroupName::B3Order48, 6, &hyperoctahedral_generators(3)),
        model(GroupName::B4Order384, 8, &hyperoctahedral_generators(4)),
    ]
}

/// Searches for an isomorphism from the model onto `target` that sends the
/// model generators to chosen images; returns the images on success.
pub fn find_isomorphism(model: &PermGroup, gens: &[usize], target: &PermGroup) -> Option<Vec<usize>> {
    if model.order() != target.order() {
        return None;
    }
    let candidates: Vec<Vec<usize>> = gens
        .iter()
        .map(|&g| {
            (0..target.order())
                .filter(|&t| target.element_order(t) == model.element_order(g))
                .collect()
        })
        .collect();
    let mut images = Vec::with_capacity(gens.len());
    search_images(model, gens, target, &candidates, &mut images)
}

fn search_images(
    model: &PermGroup,
    gens: &[usize],
    target: &PermGroup,
    candidates: &[Vec<usize>],
    images: &mut Vec<usize>,
) -> Option<Vec<usize>> {
    if images.len() == gens.len() {
        return extends_to_isomorphism(model, gens, target, images).then(|| images.clone());
    }
    for &c in &candidates[images.len()] {
        images.push(c);
        if let Some(found) = search_images(model, gens, target, candidates, images) {
            return Some(found);
        }
        images.pop();
    }
    None
}

fn extends_to_isomorphism(
    model: &PermGroup,
    gens: &[usize],
    target: &PermGroup,
    images: &[usize],
) -> bool {
    let n = model.order();
    let mut phi: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    phi[0] = Some(0);
    used[0] = true;
    let mut queue = VecDeque::from([0]);
    let mut reached = 1;
    while let Some(x) = queue.pop_front() {
        let px = phi[x].expect("visited");
        for (&s, &img) in gens.iter().zip(images) {
            let y = model.mul(x, s);
            let val = target.mul(px, img);
            match phi[y] {
                Some(existing) if existing != val => return false,
                Some(_) => {}
                None => {
                    if std::mem::replace(&mut used[val], true) {
                        return false;
                    }
                    phi[y] = Some(val);
                    reached += 1;
                    queue.push_back(y);
                }
            }
        }
    }
    reached == n
}

/// Names a group by its signature, confirming non-cyclic matches with an
/// explicit isomorphism to a concrete model.
pub fn identify(g: &Group) -> GroupName {
    identify_perm_group(g.perm_group())
}

pub fn identify_perm_group(g: &PermGroup) -> GroupName {
    let sig = g.signature();
    let n = sig.order;
    if n == 1 {
        return GroupName::Trivial;
    }
    if n > IDENTIFY_BOUND {
        return GroupName::Other(n);
    }
    if sig.abelian && sig.element_orders.last() == Some(&n) {
        return if n == 2 { GroupName::C2 } else { GroupName::Cyclic(n) };
    }
    for m in models() {
        if m.group.signature() == sig && find_isomorphism(&m.group, &m.generators, g).is_some() {
            return m.name;
        }
    }
    GroupName::Other(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn model_orders() {
        let orders: Vec<usize> = models().iter().map(|m| m.group.order()).collect();
        assert_eq!(orders, vec![4, 6, 8, 24, 48, 384]);
    }

    #[test]
    fn models_identify_themselves() {
        for m in models() {
            assert_eq!(identify_perm_group(&m.group), m.name);
        }
    }

    #[test]
    fn square_signature() {
        let d4 = models().into_iter().find(|m| m.name == GroupName::D4Order8).unwrap();
        let sig = d4.group.signature();
        assert!(!sig.abelian);
        assert_eq!(sig.element_orders, vec![1, 2, 2, 2, 2, 2, 4, 4]);
    }

    #[test]
    fn cyclic_groups() {
        let c4 = PermGroup::generated_by(&[vec![1, 2, 3, 0]], 4).unwrap();
        assert_eq!(identify_perm_group(&c4), GroupName::Cyclic(4));
        let c2 = PermGroup::generated_by(&[vec![1, 0]], 2).unwrap();
        assert_eq!(identify_perm_group(&c2), GroupName::C2);
        let t = PermGroup::generated_by(&[], 3).unwrap();
        assert_eq!(identify_perm_group(&t), GroupName::Trivial);
    }

    #[test]
    fn closure_violation_detected() {
        let err = PermGroup::new(vec![vec![0, 1, 2], vec![1, 2, 0]]).unwrap_err();
        assert!(err.to_string().contains("not closed"));
    }

    #[test]
    fn d8_is_not_z2_cubed() {
        let z2cubed = PermGroup::generated_by(
            &[vec![1, 0, 2, 3, 4, 5], vec![0, 1, 3, 2, 4, 5], vec![0, 1, 2, 3, 5, 4]],
            6,
        )
        .unwrap();
        assert_eq!(identify_perm_group(&z2cubed), GroupName::Other(8));
    }
}
