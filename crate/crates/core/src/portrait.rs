//! Depth-truncated automorphisms of rooted trees, possibly spherically
//! homogeneous: one permutation per vertex above the truncation depth.
//!
//! Portraits of a fixed shape form a group (the quotient of the full
//! automorphism group by the depth-D level stabilizer). Identity
//! permutations are never stored, so structural equality coincides with
//! behavioral equality.
//!
//! The level parity functional multiplies the signs of all vertex
//! permutations on one level. It is a homomorphism to `{±1}` at every
//! level, so squares always have parity `+1`; a `-1` level therefore
//! certifies that an automorphism is not a square.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{PermError, Permutation};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PortraitError {
    #[error("shape mismatch: {0:?} vs {1:?}")]
    ShapeMismatch(Vec<usize>, Vec<usize>),
    #[error("letter {letter} out of range for alphabet of size {size} at level {level}")]
    LetterOutOfRange {
        letter: usize,
        size: usize,
        level: usize,
    },
    #[error("word of length {len} exceeds depth {depth}")]
    WordTooLong { len: usize, depth: usize },
    #[error("level {level} not below depth {depth}")]
    LevelOutOfRange { level: usize, depth: usize },
    #[error("alphabet sizes must all be at least 2, got {0}")]
    AlphabetTooSmall(usize),
    #[error("cannot parse vertex key {0:?}")]
    BadVertexKey(String),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// A truncated tree automorphism: a permutation at every vertex above
/// the truncation depth. `sizes[k]` is the alphabet size at level `k`
/// (the branching below level-`k` vertices); `depth = sizes.len()`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "PortraitData", into = "PortraitData")]
pub struct Portrait {
    sizes: Vec<usize>,
    perms: BTreeMap<Vec<usize>, Permutation>,
}

#[derive(Serialize, Deserialize)]
struct PortraitData {
    alphabet_sizes: Vec<usize>,
    depth: usize,
    perms: BTreeMap<String, Vec<usize>>,
}

impl TryFrom<PortraitData> for Portrait {
    type Error = PortraitError;
    fn try_from(data: PortraitData) -> Result<Self, PortraitError> {
        if data.depth != data.alphabet_sizes.len() {
            return Err(PortraitError::ShapeMismatch(
                data.alphabet_sizes.clone(),
                vec![data.depth],
            ));
        }
        let dotted = data.alphabet_sizes.iter().any(|&s| s > 10);
        let mut p = Portrait::identity(data.alphabet_sizes)?;
        for (key, images) in data.perms {
            let vertex = parse_vertex_key(&key, dotted)?;
            p.set(&vertex, Permutation::from_images(images)?)?;
        }
        Ok(p)
    }
}

impl From<Portrait> for PortraitData {
    fn from(p: Portrait) -> PortraitData {
        let dotted = p.sizes.iter().any(|&s| s > 10);
        PortraitData {
            alphabet_sizes: p.sizes.clone(),
            depth: p.sizes.len(),
            perms: p
                .perms
                .iter()
                .map(|(v, perm)| (vertex_key(v, dotted), perm.images().to_vec()))
                .collect(),
        }
    }
}

fn vertex_key(v: &[usize], dotted: bool) -> String {
    let parts: Vec<String> = v.iter().map(|l| l.to_string()).collect();
    parts.join(if dotted { "." } else { "" })
}

/// Letters are joined into plain digit strings when every alphabet fits
/// a single digit, and dot-separated otherwise; the shape decides which
/// mode a file uses.
fn parse_vertex_key(key: &str, dotted: bool) -> Result<Vec<usize>, PortraitError> {
    if key.is_empty() {
        return Ok(Vec::new());
    }
    if dotted {
        key.split('.')
            .map(|part| {
                part.parse::<usize>()
                    .map_err(|_| PortraitError::BadVertexKey(key.to_string()))
            })
            .collect()
    } else {
        key.chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as usize)
                    .ok_or_else(|| PortraitError::BadVertexKey(key.to_string()))
            })
            .collect()
    }
}

/// Outcome of the parity scan.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SquareObstruction {
    /// Some level has parity -1, so the automorphism is not the square
    /// of any tree automorphism.
    NotASquare(usize),
    /// All scanned levels have parity +1; nothing can be concluded.
    Inconclusive,
}

impl Portrait {
    /// The all-identity portrait of the given shape.
    pub fn identity(sizes: Vec<usize>) -> Result<Self, PortraitError> {
        if let Some(&bad) = sizes.iter().find(|&&s| s < 2) {
            return Err(PortraitError::AlphabetTooSmall(bad));
        }
        Ok(Portrait {
            sizes,
            perms: BTreeMap::new(),
        })
    }

    /// Level-homogeneous shape helper.
    pub fn regular(alphabet: usize, depth: usize) -> Result<Self, PortraitError> {
        Portrait::identity(vec![alphabet; depth])
    }

    pub fn depth(&self) -> usize {
        self.sizes.len()
    }

    pub fn sizes(&self) -> &[usize] {
        &self.sizes
    }

    fn check_vertex(&self, v: &[usize]) -> Result<(), PortraitError> {
        if v.len() >= self.depth() {
            return Err(PortraitError::WordTooLong {
                len: v.len(),
                depth: self.depth(),
            });
        }
        for (level, &letter) in v.iter().enumerate() {
            if letter >= self.sizes[level] {
                return Err(PortraitError::LetterOutOfRange {
                    letter,
                    size: self.sizes[level],
                    level,
                });
            }
        }
        Ok(())
    }

    /// The permutation at a vertex (identity when none is stored).
    pub fn vertex_perm(&self, v: &[usize]) -> Permutation {
        self.perms
            .get(v)
            .cloned()
            .unwrap_or_else(|| Permutation::identity(self.sizes[v.len()]))
    }

    /// Sets the permutation at a vertex; identity entries are dropped.
    pub fn set(&mut self, v: &[usize], p: Permutation) -> Result<(), PortraitError> {
        self.check_vertex(v)?;
        if p.degree() != self.sizes[v.len()] {
            return Err(PermError::DegreeMismatch(self.sizes[v.len()], p.degree()).into());
        }
        if p.is_identity() {
            self.perms.remove(v);
        } else {
            self.perms.insert(v.to_vec(), p);
        }
        Ok(())
    }

    /// All vertices above the truncation depth, level by level.
    pub fn vertices(&self) -> Vec<Vec<usize>> {
        if self.depth() == 0 {
            return Vec::new();
        }
        let mut out = vec![Vec::new()];
        let mut level: Vec<Vec<usize>> = vec![Vec::new()];
        for &size in &self.sizes[..self.depth() - 1] {
            let mut next = Vec::new();
            for v in &level {
                for letter in 0..size {
                    let mut w = v.clone();
                    w.push(letter);
                    next.push(w);
                }
            }
            out.extend(next.iter().cloned());
            level = next;
        }
        out
    }

    /// Applies the automorphism to a word of length at most `depth`.
    pub fn act(&self, word: &[usize]) -> Result<Vec<usize>, PortraitError> {
        if word.len() > self.depth() {
            return Err(PortraitError::WordTooLong {
                len: word.len(),
                depth: self.depth(),
            });
        }
        for (level, &letter) in word.iter().enumerate() {
            if letter >= self.sizes[level] {
                return Err(PortraitError::LetterOutOfRange {
                    letter,
                    size: self.sizes[level],
                    level,
                });
            }
        }
        let mut out = Vec::with_capacity(word.len());
        for (i, &letter) in word.iter().enumerate() {
            out.push(self.vertex_perm(&word[..i]).apply(letter));
        }
        Ok(out)
    }

    fn check_shape(&self, other: &Portrait) -> Result<(), PortraitError> {
        if self.sizes != other.sizes {
            return Err(PortraitError::ShapeMismatch(
                self.sizes.clone(),
                other.sizes.clone(),
            ));
        }
        Ok(())
    }

    /// Group product: the right factor acts first, so the product's
    /// permutation at `v` is this portrait's permutation at `other(v)`
    /// composed with `other`'s at `v`.
    pub fn product(&self, other: &Portrait) -> Result<Portrait, PortraitError> {
        self.check_shape(other)?;
        let mut out = Portrait::identity(self.sizes.clone())?;
        for v in self.vertices() {
            let image = other.act(&v)?;
            let p = self.vertex_perm(&image).compose(&other.vertex_perm(&v))?;
            out.set(&v, p)?;
        }
        Ok(out)
    }

    pub fn inverse(&self) -> Portrait {
        let mut out = Portrait::identity(self.sizes.clone()).expect("shape already valid");
        for v in self.vertices() {
            let image = self.act(&v).expect("own vertices are valid words");
            out.set(&image, self.vertex_perm(&v).inverse())
                .expect("image stays within shape");
        }
        out
    }

    pub fn is_identity(&self) -> bool {
        self.perms.is_empty()
    }

    /// Splits off the part above level `k`: `top` agrees with this
    /// portrait on levels below `k` and is trivial further down, `rest`
    /// fixes everything above level `k`, and `top · rest` rebuilds the
    /// portrait exactly. `rest` is computed as `top⁻¹ · self`, so the
    /// identity is a group identity rather than a coordinate copy.
    pub fn decompose_at(&self, k: usize) -> Result<(Portrait, Portrait), PortraitError> {
        if k > self.depth() {
            return Err(PortraitError::LevelOutOfRange {
                level: k,
                depth: self.depth(),
            });
        }
        let mut top = Portrait::identity(self.sizes.clone())?;
        for (v, p) in &self.perms {
            if v.len() < k {
                top.set(v, p.clone())?;
            }
        }
        let rest = top.inverse().product(self)?;
        debug_assert!(rest.perms.keys().all(|v| v.len() >= k));
        Ok((top, rest))
    }

    /// Product of the signs of all vertex permutations on level `n`:
    /// the sign of the level-section product, which does not depend on
    /// the order the sections are multiplied in.
    pub fn level_parity(&self, n: usize) -> Result<i32, PortraitError> {
        if n >= self.depth() {
            return Err(PortraitError::LevelOutOfRange {
                level: n,
                depth: self.depth(),
            });
        }
        Ok(self
            .perms
            .iter()
            .filter(|(v, _)| v.len() == n)
            .map(|(_, p)| p.sign())
            .product())
    }

    /// Scans levels `0..depth-1` for a parity of -1, which certifies
    /// that no tree automorphism squares to this portrait.
    pub fn square_obstruction(&self) -> SquareObstruction {
        for n in 0..self.depth().saturating_sub(1) {
            if self.level_parity(n).expect("level below depth") == -1 {
                return SquareObstruction::NotASquare(n);
            }
        }
        SquareObstruction::Inconclusive
    }

    /// Uniformly random permutation at every vertex, deterministic in
    /// the seed.
    pub fn random(sizes: Vec<usize>, seed: u64) -> Result<Portrait, PortraitError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut out = Portrait::identity(sizes)?;
        for v in out.vertices() {
            let size = out.sizes[v.len()];
            let mut images: Vec<usize> = (0..size).collect();
            images.shuffle(&mut rng);
            out.set(&v, Permutation::from_images(images)?)?;
        }
        Ok(out)
    }
}
