//! Arithmetic in the permutational wreath product of a permutation group
//! acting on `0..degree` with a finite base group `H`.
//!
//! Elements are kept in factored form: a top permutation together with a
//! tuple of `H`-elements, one per point. Base-group elements are indices
//! into the canonical element list of an enumerated [`FiniteGroup`].
//!
//! Conjugating a tuple by a top permutation `a` moves the entry at
//! coordinate `i` to coordinate `a(i)`; with the composition convention
//! of [`crate::perm`] this is the inner automorphism `k -> a k a⁻¹`. The
//! product of `g = a1·k1` and `h = a2·k2` is then
//! `(a1 a2) · ((a2⁻¹ k1 a2) ⊙ k2)`, coordinatewise `H`-products on the
//! tails.

use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{PermError, Permutation, PermutationGroup};

/// Largest base group for which multiplication tables are built.
pub const MAX_BASE_ORDER: usize = 2048;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WreathError {
    #[error("degree mismatch: {0} vs {1}")]
    DegreeMismatch(usize, usize),
    #[error("base group mismatch: element index {index} out of range for order {order}")]
    GroupMismatch { index: u32, order: usize },
    #[error("base group order {order} exceeds table bound {bound}")]
    BaseTooLarge { order: usize, bound: usize },
    #[error("element is not in the base group")]
    NotInBaseGroup,
    #[error("closure exceeded the cap of {cap} elements")]
    ClosureTooLarge { cap: usize },
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// An enumerated finite group with multiplication and inverse tables,
/// elements addressed by their position in the canonical (sorted) list.
#[derive(Debug, Clone)]
pub struct FiniteGroup {
    degree: usize,
    elements: Vec<Permutation>,
    index: HashMap<Permutation, u32>,
    mul: Vec<u32>,
    inv: Vec<u32>,
    identity: u32,
}

impl FiniteGroup {
    pub fn new(group: &PermutationGroup) -> Result<Self, WreathError> {
        let elements = group.enumerate()?;
        let order = elements.len();
        if order > MAX_BASE_ORDER {
            return Err(WreathError::BaseTooLarge {
                order,
                bound: MAX_BASE_ORDER,
            });
        }
        let index: HashMap<Permutation, u32> = elements
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        let mut mul = vec![0u32; order * order];
        for (i, a) in elements.iter().enumerate() {
            for (j, b) in elements.iter().enumerate() {
                mul[i * order + j] = index[&a.compose(b)?];
            }
        }
        let mut inv = vec![0u32; order];
        for (i, a) in elements.iter().enumerate() {
            inv[i] = index[&a.inverse()];
        }
        let identity = index[&Permutation::identity(group.degree())];
        Ok(FiniteGroup {
            degree: group.degree(),
            elements,
            index,
            mul,
            inv,
            identity,
        })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn identity(&self) -> u32 {
        self.identity
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        self.mul[a as usize * self.order() + b as usize]
    }

    pub fn inv(&self, a: u32) -> u32 {
        self.inv[a as usize]
    }

    pub fn pow(&self, a: u32, k: u32) -> u32 {
        let mut acc = self.identity;
        for _ in 0..k {
            acc = self.mul(acc, a);
        }
        acc
    }

    pub fn element(&self, i: u32) -> &Permutation {
        &self.elements[i as usize]
    }

    pub fn elements(&self) -> &[Permutation] {
        &self.elements
    }

    pub fn index_of(&self, p: &Permutation) -> Result<u32, WreathError> {
        self.index
            .get(p)
            .copied()
            .ok_or(WreathError::NotInBaseGroup)
    }

    /// Order of a single element.
    pub fn element_order(&self, a: u32) -> u32 {
        let mut n = 1;
        let mut x = a;
        while x != self.identity {
            x = self.mul(x, a);
            n += 1;
        }
        n
    }

    /// Subgroup generated by the given element indices, sorted.
    pub fn closure_indices(&self, seed: &[u32]) -> Vec<u32> {
        let mut seen: HashSet<u32> = HashSet::new();
        seen.insert(self.identity);
        let mut queue: VecDeque<u32> = VecDeque::new();
        queue.push_back(self.identity);
        for &s in seed {
            if seen.insert(s) {
                queue.push_back(s);
            }
        }
        while let Some(x) = queue.pop_front() {
            for &s in seed {
                let y = self.mul(x, s);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        let mut out: Vec<u32> = seen.into_iter().collect();
        out.sort_unstable();
        out
    }

    pub fn derived_subgroup_indices(&self) -> Vec<u32> {
        let order = self.order() as u32;
        let mut commutators = Vec::new();
        for a in 0..order {
            for b in 0..order {
                let c = self.mul(self.mul(self.mul(a, b), self.inv(a)), self.inv(b));
                commutators.push(c);
            }
        }
        self.closure_indices(&commutators)
    }

    pub fn power_subgroup_indices(&self, k: u32) -> Vec<u32> {
        let powers: Vec<u32> = (0..self.order() as u32).map(|a| self.pow(a, k)).collect();
        self.closure_indices(&powers)
    }

    /// Whether the given sorted element set is normal in the whole group.
    pub fn is_normal(&self, sub: &[u32]) -> bool {
        for g in 0..self.order() as u32 {
            for &x in sub {
                let conj = self.mul(self.mul(g, x), self.inv(g));
                if sub.binary_search(&conj).is_err() {
                    return false;
                }
            }
        }
        true
    }
}

/// One element of the wreath product: a top permutation and a tuple of
/// base-group element indices, one per point.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WreathElement {
    pub top: Permutation,
    pub tail: Vec<u32>,
}

/// Standalone file form of a wreath element; the header names the group
/// file whose canonical element order the tail indices refer to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WreathElementFile {
    pub h_group: String,
    pub top: Vec<usize>,
    pub tail: Vec<u32>,
}

impl WreathElement {
    pub fn to_file(&self, h_group: &str) -> WreathElementFile {
        WreathElementFile {
            h_group: h_group.to_string(),
            top: self.top.images().to_vec(),
            tail: self.tail.clone(),
        }
    }

    pub fn from_file(file: &WreathElementFile) -> Result<Self, WreathError> {
        Ok(WreathElement {
            top: Permutation::from_images(file.top.clone())?,
            tail: file.tail.clone(),
        })
    }
}

/// Multiplication context for `(A, X) ≀ H`: the degree of `X` and the
/// enumerated base group.
#[derive(Debug, Clone)]
pub struct WreathProduct {
    degree: usize,
    base: FiniteGroup,
}

impl WreathProduct {
    pub fn new(degree: usize, base: FiniteGroup) -> Self {
        WreathProduct { degree, base }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn base(&self) -> &FiniteGroup {
        &self.base
    }

    pub fn identity(&self) -> WreathElement {
        WreathElement {
            top: Permutation::identity(self.degree),
            tail: vec![self.base.identity(); self.degree],
        }
    }

    fn check(&self, g: &WreathElement) -> Result<(), WreathError> {
        if g.top.degree() != self.degree || g.tail.len() != self.degree {
            return Err(WreathError::DegreeMismatch(self.degree, g.tail.len()));
        }
        for &t in &g.tail {
            if t as usize >= self.base.order() {
                return Err(WreathError::GroupMismatch {
                    index: t,
                    order: self.base.order(),
                });
            }
        }
        Ok(())
    }

    pub fn element(&self, top: Permutation, tail: Vec<u32>) -> Result<WreathElement, WreathError> {
        let g = WreathElement { top, tail };
        self.check(&g)?;
        Ok(g)
    }

    pub fn top_element(&self, top: Permutation) -> Result<WreathElement, WreathError> {
        self.element(top, vec![self.base.identity(); self.degree])
    }

    pub fn tail_element(&self, tail: Vec<u32>) -> Result<WreathElement, WreathError> {
        self.element(Permutation::identity(self.degree), tail)
    }

    /// Tail with a single non-identity entry.
    pub fn single_entry_tail(&self, coord: usize, h: u32) -> Result<WreathElement, WreathError> {
        let mut tail = vec![self.base.identity(); self.degree];
        tail[coord] = h;
        self.tail_element(tail)
    }

    /// Conjugates a tail by a top permutation: the entry at coordinate
    /// `i` moves to coordinate `a(i)`, so `result[j] = tail[a⁻¹(j)]`.
    pub fn conjugate_tail(&self, tail: &[u32], a: &Permutation) -> Result<Vec<u32>, WreathError> {
        if tail.len() != a.degree() {
            return Err(WreathError::DegreeMismatch(a.degree(), tail.len()));
        }
        let mut out = vec![self.base.identity(); tail.len()];
        for (i, &t) in tail.iter().enumerate() {
            out[a.apply(i)] = t;
        }
        Ok(out)
    }

    pub fn product(
        &self,
        g: &WreathElement,
        h: &WreathElement,
    ) -> Result<WreathElement, WreathError> {
        self.check(g)?;
        self.check(h)?;
        let top = g.top.compose(&h.top)?;
        let mut tail = vec![self.base.identity(); self.degree];
        for (j, slot) in tail.iter_mut().enumerate() {
            *slot = self.base.mul(g.tail[h.top.apply(j)], h.tail[j]);
        }
        Ok(WreathElement { top, tail })
    }

    pub fn inverse(&self, g: &WreathElement) -> Result<WreathElement, WreathError> {
        self.check(g)?;
        let top = g.top.inverse();
        let mut tail = vec![self.base.identity(); self.degree];
        for (j, slot) in tail.iter_mut().enumerate() {
            *slot = self.base.inv(g.tail[top.apply(j)]);
        }
        Ok(WreathElement { top, tail })
    }

    /// `a · g · a⁻¹` for a top permutation `a`.
    pub fn conjugate(
        &self,
        g: &WreathElement,
        a: &Permutation,
    ) -> Result<WreathElement, WreathError> {
        let ae = self.top_element(a.clone())?;
        let ai = self.top_element(a.inverse())?;
        self.product(&self.product(&ae, g)?, &ai)
    }

    pub fn pow(&self, g: &WreathElement, k: u32) -> Result<WreathElement, WreathError> {
        let mut acc = self.identity();
        for _ in 0..k {
            acc = self.product(&acc, g)?;
        }
        Ok(acc)
    }

    /// All elements of the subgroup generated by `gens`, up to `cap`.
    pub fn closure(
        &self,
        gens: &[WreathElement],
        cap: usize,
    ) -> Result<HashSet<WreathElement>, WreathError> {
        let mut seen: HashSet<WreathElement> = HashSet::new();
        let mut queue: VecDeque<WreathElement> = VecDeque::new();
        seen.insert(self.identity());
        queue.push_back(self.identity());
        for g in gens {
            self.check(g)?;
            if seen.insert(g.clone()) {
                queue.push_back(g.clone());
            }
        }
        if seen.len() > cap {
            return Err(WreathError::ClosureTooLarge { cap });
        }
        while let Some(x) = queue.pop_front() {
            for g in gens {
                let y = self.product(&x, g)?;
                if seen.insert(y.clone()) {
                    if seen.len() > cap {
                        return Err(WreathError::ClosureTooLarge { cap });
                    }
                    queue.push_back(y);
                }
            }
        }
        Ok(seen)
    }

    pub fn closure_order(&self, gens: &[WreathElement], cap: usize) -> Result<usize, WreathError> {
        Ok(self.closure(gens, cap)?.len())
    }
}
