//! Finite permutations on `0..degree` and permutation groups given by
//! generators, with capped brute-force enumeration.
//!
//! Composition convention: `(p * q)(x) = p(q(x))`, the right factor acts
//! first. Group enumeration is a plain breadth-first closure with a hard
//! element cap; all element lists are sorted lexicographically by image
//! table so every downstream search is deterministic.

use std::collections::{HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Default cap for group enumeration.
pub const DEFAULT_ELEMENT_CAP: usize = 1_000_000;

/// Largest flattened degree accepted by [`PermutationGroup::wreath_action`].
pub const MAX_WREATH_DEGREE: usize = 4096;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PermError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("images are not a bijection on 0..{degree}")]
    NotBijective { degree: usize },
    #[error("group closure exceeded the cap of {cap} elements")]
    GroupTooLarge { cap: usize },
    #[error("generator moves point {point} outside the given set")]
    NotInvariant { point: usize },
    #[error("flattened wreath degree {degree} exceeds the bound {bound}")]
    DegreeOverflow { degree: usize, bound: usize },
}

/// A permutation of `0..degree`, stored as its image table.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Permutation {
    images: Vec<usize>,
}

impl std::fmt::Debug for Permutation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Perm{:?}", self.images)
    }
}

impl TryFrom<Vec<usize>> for Permutation {
    type Error = PermError;
    fn try_from(images: Vec<usize>) -> Result<Self, PermError> {
        Permutation::from_images(images)
    }
}

impl From<Permutation> for Vec<usize> {
    fn from(p: Permutation) -> Vec<usize> {
        p.images
    }
}

impl Permutation {
    pub fn identity(degree: usize) -> Self {
        Permutation {
            images: (0..degree).collect(),
        }
    }

    /// Builds a permutation from its image table, checking bijectivity.
    pub fn from_images(images: Vec<usize>) -> Result<Self, PermError> {
        let degree = images.len();
        let mut seen = vec![false; degree];
        for &y in &images {
            if y >= degree || seen[y] {
                return Err(PermError::NotBijective { degree });
            }
            seen[y] = true;
        }
        Ok(Permutation { images })
    }

    /// Builds a permutation of `0..degree` from disjoint cycles, e.g.
    /// `from_cycles(5, &[&[0, 1]])` is the transposition (0 1).
    pub fn from_cycles(degree: usize, cycles: &[&[usize]]) -> Result<Self, PermError> {
        let mut images: Vec<usize> = (0..degree).collect();
        for cycle in cycles {
            for (pos, &x) in cycle.iter().enumerate() {
                let y = cycle[(pos + 1) % cycle.len()];
                if x >= degree || y >= degree {
                    return Err(PermError::NotBijective { degree });
                }
                images[x] = y;
            }
        }
        Permutation::from_images(images)
    }

    pub fn degree(&self) -> usize {
        self.images.len()
    }

    pub fn apply(&self, x: usize) -> usize {
        self.images[x]
    }

    pub fn images(&self) -> &[usize] {
        &self.images
    }

    pub fn is_identity(&self) -> bool {
        self.images.iter().enumerate().all(|(i, &y)| i == y)
    }

    /// `(self * other)(x) = self(other(x))`; `other` acts first.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation, PermError> {
        if self.degree() != other.degree() {
            return Err(PermError::DegreeMismatch(self.degree(), other.degree()));
        }
        Ok(Permutation {
            images: other.images.iter().map(|&y| self.images[y]).collect(),
        })
    }

    pub fn inverse(&self) -> Permutation {
        let mut images = vec![0; self.images.len()];
        for (x, &y) in self.images.iter().enumerate() {
            images[y] = x;
        }
        Permutation { images }
    }

    /// `c⁻¹ · self · c`; used to move a permutation between labelings.
    pub fn conjugated_by(&self, c: &Permutation) -> Result<Permutation, PermError> {
        c.inverse().compose(self)?.compose(c)
    }

    pub fn pow(&self, k: u32) -> Permutation {
        let mut acc = Permutation::identity(self.degree());
        for _ in 0..k {
            acc = self.compose(&acc).expect("same degree");
        }
        acc
    }

    /// +1 for even permutations, -1 for odd ones.
    pub fn sign(&self) -> i32 {
        let mut seen = vec![false; self.images.len()];
        let mut sign = 1;
        for start in 0..self.images.len() {
            if seen[start] {
                continue;
            }
            let mut len = 0;
            let mut x = start;
            while !seen[x] {
                seen[x] = true;
                x = self.images[x];
                len += 1;
            }
            if len % 2 == 0 {
                sign = -sign;
            }
        }
        sign
    }
}

/// A finite permutation group given by generators.
///
/// The `element_cap` bounds brute-force enumeration; everything at the
/// scales this crate targets stays well below the default.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "GroupData", into = "GroupData")]
pub struct PermutationGroup {
    degree: usize,
    generators: Vec<Permutation>,
    element_cap: usize,
}

#[derive(Serialize, Deserialize)]
struct GroupData {
    degree: usize,
    generators: Vec<Vec<usize>>,
}

impl TryFrom<GroupData> for PermutationGroup {
    type Error = PermError;
    fn try_from(data: GroupData) -> Result<Self, PermError> {
        let generators = data
            .generators
            .into_iter()
            .map(Permutation::from_images)
            .collect::<Result<Vec<_>, _>>()?;
        PermutationGroup::new(data.degree, generators)
    }
}

impl From<PermutationGroup> for GroupData {
    fn from(g: PermutationGroup) -> GroupData {
        GroupData {
            degree: g.degree,
            generators: g.generators.into_iter().map(|p| p.images).collect(),
        }
    }
}

impl PermutationGroup {
    pub fn new(degree: usize, generators: Vec<Permutation>) -> Result<Self, PermError> {
        for g in &generators {
            if g.degree() != degree {
                return Err(PermError::DegreeMismatch(degree, g.degree()));
            }
        }
        Ok(PermutationGroup {
            degree,
            generators,
            element_cap: DEFAULT_ELEMENT_CAP,
        })
    }

    pub fn with_cap(mut self, cap: usize) -> Self {
        self.element_cap = cap;
        self
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn generators(&self) -> &[Permutation] {
        &self.generators
    }

    pub fn element_cap(&self) -> usize {
        self.element_cap
    }

    /// The symmetric group on `m` points: `{(0 1), (0 1 ... m-1)}`.
    pub fn symmetric(m: usize) -> Self {
        let mut generators = Vec::new();
        if m >= 2 {
            generators.push(Permutation::from_cycles(m, &[&[0, 1]]).unwrap());
        }
        if m >= 3 {
            let cycle: Vec<usize> = (0..m).collect();
            generators.push(Permutation::from_cycles(m, &[&cycle]).unwrap());
        }
        PermutationGroup::new(m, generators).unwrap()
    }

    /// The cyclic group generated by the m-cycle `(0 1 ... m-1)`.
    pub fn cyclic(m: usize) -> Self {
        let mut generators = Vec::new();
        if m >= 2 {
            let cycle: Vec<usize> = (0..m).collect();
            generators.push(Permutation::from_cycles(m, &[&cycle]).unwrap());
        }
        PermutationGroup::new(m, generators).unwrap()
    }

    /// The imprimitive action of the wreath product of `top` (on blocks)
    /// with `bottom` (inside each block) on `top.degree * bottom.degree`
    /// points; point `(y, z)` is flattened to `y * bottom.degree + z`.
    ///
    /// Generators: each generator of `top` permuting the blocks, plus a
    /// copy of each generator of `bottom` inside every block, so the
    /// closure has order `|top| * |bottom|^top.degree` unconditionally.
    pub fn wreath_action(
        top: &PermutationGroup,
        bottom: &PermutationGroup,
    ) -> Result<Self, PermError> {
        let blocks = top.degree();
        let width = bottom.degree();
        let degree = blocks.saturating_mul(width);
        if degree > MAX_WREATH_DEGREE {
            return Err(PermError::DegreeOverflow {
                degree,
                bound: MAX_WREATH_DEGREE,
            });
        }
        let mut generators = Vec::new();
        for a in top.generators() {
            let mut images = vec![0; degree];
            for y in 0..blocks {
                for z in 0..width {
                    images[y * width + z] = a.apply(y) * width + z;
                }
            }
            generators.push(Permutation::from_images(images)?);
        }
        for y in 0..blocks {
            for b in bottom.generators() {
                let mut images: Vec<usize> = (0..degree).collect();
                for z in 0..width {
                    images[y * width + z] = y * width + b.apply(z);
                }
                generators.push(Permutation::from_images(images)?);
            }
        }
        PermutationGroup::new(degree, generators)
    }

    /// Breadth-first closure of the generators, sorted lexicographically
    /// by image table. Always contains the identity.
    pub fn enumerate(&self) -> Result<Vec<Permutation>, PermError> {
        closure_of(
            self.degree,
            std::iter::once(Permutation::identity(self.degree))
                .chain(self.generators.iter().cloned()),
            &self.generators,
            self.element_cap,
        )
    }

    pub fn order(&self) -> Result<usize, PermError> {
        Ok(self.enumerate()?.len())
    }
}

/// Closure of `seed` under right multiplication by `generators`, sorted.
/// For finite groups this is the subgroup generated when the seed
/// contains the identity and the generators.
fn closure_of(
    degree: usize,
    seed: impl IntoIterator<Item = Permutation>,
    generators: &[Permutation],
    cap: usize,
) -> Result<Vec<Permutation>, PermError> {
    let mut seen: HashSet<Permutation> = HashSet::new();
    let mut queue: VecDeque<Permutation> = VecDeque::new();
    for p in seed {
        if p.degree() != degree {
            return Err(PermError::DegreeMismatch(degree, p.degree()));
        }
        if seen.insert(p.clone()) {
            queue.push_back(p);
        }
        if seen.len() > cap {
            return Err(PermError::GroupTooLarge { cap });
        }
    }
    while let Some(p) = queue.pop_front() {
        for g in generators {
            let next = p.compose(g)?;
            if seen.insert(next.clone()) {
                if seen.len() > cap {
                    return Err(PermError::GroupTooLarge { cap });
                }
                queue.push_back(next);
            }
        }
    }
    let mut out: Vec<Permutation> = seen.into_iter().collect();
    out.sort();
    Ok(out)
}

/// Subgroup generated by `elements` inside the full symmetric group,
/// as a sorted element list.
pub fn generated_subgroup(
    degree: usize,
    elements: &[Permutation],
    cap: usize,
) -> Result<Vec<Permutation>, PermError> {
    closure_of(
        degree,
        std::iter::once(Permutation::identity(degree)).chain(elements.iter().cloned()),
        elements,
        cap,
    )
}

/// Orbits of a set of points under a list of permutations, all of which
/// must map the set into itself.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitDecomposition {
    pub orbits: Vec<Vec<usize>>,
    pub transitive: bool,
}

pub fn orbits_on(elements: &[Permutation], set: &[usize]) -> Result<OrbitDecomposition, PermError> {
    let members: HashSet<usize> = set.iter().copied().collect();
    for g in elements {
        for &x in set {
            if !members.contains(&g.apply(x)) {
                return Err(PermError::NotInvariant { point: x });
            }
        }
    }
    let mut orbits = Vec::new();
    let mut assigned: HashSet<usize> = HashSet::new();
    let mut sorted: Vec<usize> = set.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    for &start in &sorted {
        if assigned.contains(&start) {
            continue;
        }
        let mut orbit = vec![start];
        assigned.insert(start);
        let mut frontier = vec![start];
        while let Some(x) = frontier.pop() {
            for g in elements {
                let y = g.apply(x);
                if assigned.insert(y) {
                    orbit.push(y);
                    frontier.push(y);
                }
            }
        }
        orbit.sort_unstable();
        orbits.push(orbit);
    }
    let transitive = orbits.len() == 1;
    Ok(OrbitDecomposition { orbits, transitive })
}

/// The elements of `elements` fixing every point of `set`.
pub fn pointwise_stabilizer(elements: &[Permutation], set: &[usize]) -> Vec<Permutation> {
    elements
        .iter()
        .filter(|g| set.iter().all(|&x| g.apply(x) == x))
        .cloned()
        .collect()
}

/// True iff `s` generates the whole of `group` and no proper subset of
/// `s` does. Decided by brute-force closures.
pub fn is_minimal_generating_set(
    group: &PermutationGroup,
    s: &[Permutation],
) -> Result<bool, PermError> {
    let order = group.order()?;
    let full = generated_subgroup(group.degree(), s, group.element_cap())?;
    if full.len() != order {
        return Ok(false);
    }
    for skip in 0..s.len() {
        let rest: Vec<Permutation> = s
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .map(|(_, p)| p.clone())
            .collect();
        let sub = generated_subgroup(group.degree(), &rest, group.element_cap())?;
        if sub.len() == order {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Commutator subgroup of the group with the given (full) element list.
pub fn derived_subgroup(
    degree: usize,
    elements: &[Permutation],
    cap: usize,
) -> Result<Vec<Permutation>, PermError> {
    let mut commutators = Vec::new();
    for a in elements {
        for b in elements {
            let c = a.compose(b)?.compose(&a.inverse())?.compose(&b.inverse())?;
            commutators.push(c);
        }
    }
    generated_subgroup(degree, &commutators, cap)
}

/// Subgroup generated by all k-th powers.
pub fn power_subgroup(
    degree: usize,
    elements: &[Permutation],
    k: u32,
    cap: usize,
) -> Result<Vec<Permutation>, PermError> {
    let powers: Vec<Permutation> = elements.iter().map(|g| g.pow(k)).collect();
    generated_subgroup(degree, &powers, cap)
}
