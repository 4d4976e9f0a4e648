//! Finite-state automorphisms of the regular rooted tree as invertible
//! Mealy machines: a finite set of states, each with an output
//! permutation of the alphabet and one successor state per letter.
//!
//! Machines are always stored minimized (partition refinement) with
//! states renumbered breadth-first from the initial state, so structural
//! equality coincides with equality of the automorphisms and the machine
//! for a given automorphism is unique.
//!
//! The action is on the left with sections acting on suffixes:
//! `g(x w) = σ(x) · g|_x(w)`. Products compose right-factor-first, like
//! everything else in this crate: `act(g · h, w) = act(g, act(h, w))`.

use std::collections::{HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{PermError, Permutation};
use crate::portrait::{Portrait, PortraitError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AutomatonError {
    #[error("alphabet mismatch: {0} vs {1}")]
    AlphabetMismatch(usize, usize),
    #[error("letter {letter} out of range for alphabet of size {alphabet}")]
    LetterOutOfRange { letter: usize, alphabet: usize },
    #[error("state index {state} out of range for {count} states")]
    StateOutOfRange { state: usize, count: usize },
    #[error("alphabet must have at least 2 letters, got {0}")]
    AlphabetTooSmall(usize),
    #[error("machine has no states")]
    NoStates,
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Portrait(#[from] PortraitError),
}

/// One state: an output permutation and a successor per letter.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MealyState {
    pub output: Permutation,
    pub next: Vec<usize>,
}

/// An invertible Mealy machine in canonical form: minimized, reachable
/// states only, numbered breadth-first from the initial state, which is
/// always state 0.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "MachineData", into = "MachineData")]
pub struct MealyAutomorphism {
    alphabet: usize,
    states: Vec<MealyState>,
    initial: usize,
}

#[derive(Serialize, Deserialize)]
struct MachineData {
    alphabet: usize,
    states: Vec<MachineStateData>,
    initial: usize,
}

#[derive(Serialize, Deserialize)]
struct MachineStateData {
    output: Vec<usize>,
    next: Vec<usize>,
}

impl TryFrom<MachineData> for MealyAutomorphism {
    type Error = AutomatonError;
    fn try_from(data: MachineData) -> Result<Self, AutomatonError> {
        let states = data
            .states
            .into_iter()
            .map(|s| {
                Ok(MealyState {
                    output: Permutation::from_images(s.output)?,
                    next: s.next,
                })
            })
            .collect::<Result<Vec<_>, AutomatonError>>()?;
        MealyAutomorphism::new(data.alphabet, states, data.initial)
    }
}

impl From<MealyAutomorphism> for MachineData {
    fn from(m: MealyAutomorphism) -> MachineData {
        MachineData {
            alphabet: m.alphabet,
            states: m
                .states
                .into_iter()
                .map(|s| MachineStateData {
                    output: s.output.images().to_vec(),
                    next: s.next,
                })
                .collect(),
            initial: m.initial,
        }
    }
}

/// Growth class of the activity sequence.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Activity {
    Bounded,
    Polynomial(usize),
    Exponential,
}

/// Activity counts per level: the number of length-n words whose section
/// is nontrivial.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ActivityProfile {
    pub counts: Vec<u128>,
}

/// Cycle structure of the graph on nontrivial states.
#[derive(Debug, Clone)]
pub struct ActivityAnalysis {
    pub classification: Activity,
    /// Lengths of the simple-cycle components (meaningful when the
    /// machine is not exponential).
    pub cycle_lengths: Vec<usize>,
    pub nontrivial_states: usize,
}

impl MealyAutomorphism {
    /// Builds and canonicalizes a machine from raw states.
    pub fn new(
        alphabet: usize,
        states: Vec<MealyState>,
        initial: usize,
    ) -> Result<Self, AutomatonError> {
        if alphabet < 2 {
            return Err(AutomatonError::AlphabetTooSmall(alphabet));
        }
        if states.is_empty() {
            return Err(AutomatonError::NoStates);
        }
        if initial >= states.len() {
            return Err(AutomatonError::StateOutOfRange {
                state: initial,
                count: states.len(),
            });
        }
        for s in &states {
            if s.output.degree() != alphabet {
                return Err(AutomatonError::AlphabetMismatch(
                    alphabet,
                    s.output.degree(),
                ));
            }
            if s.next.len() != alphabet {
                return Err(AutomatonError::AlphabetMismatch(alphabet, s.next.len()));
            }
            if let Some(&bad) = s.next.iter().find(|&&t| t >= states.len()) {
                return Err(AutomatonError::StateOutOfRange {
                    state: bad,
                    count: states.len(),
                });
            }
        }
        Ok(Self::canonicalize(alphabet, states, initial))
    }

    /// Partition refinement followed by a breadth-first renumbering of
    /// the reachable quotient states.
    fn canonicalize(alphabet: usize, states: Vec<MealyState>, initial: usize) -> Self {
        // initial partition by output permutation
        let mut class_of: Vec<usize> = vec![0; states.len()];
        {
            let mut by_output: HashMap<&Permutation, usize> = HashMap::new();
            for (i, s) in states.iter().enumerate() {
                let next_id = by_output.len();
                class_of[i] = *by_output.entry(&s.output).or_insert(next_id);
            }
        }
        loop {
            let mut sig_to_class: HashMap<(usize, Vec<usize>), usize> = HashMap::new();
            let mut new_class: Vec<usize> = vec![0; states.len()];
            for (i, s) in states.iter().enumerate() {
                let sig = (
                    class_of[i],
                    s.next.iter().map(|&t| class_of[t]).collect::<Vec<_>>(),
                );
                let next_id = sig_to_class.len();
                new_class[i] = *sig_to_class.entry(sig).or_insert(next_id);
            }
            let stable = (0..states.len()).all(|i| {
                (0..states.len())
                    .all(|j| (class_of[i] == class_of[j]) == (new_class[i] == new_class[j]))
            });
            class_of = new_class;
            if stable {
                break;
            }
        }

        // representative per class, then BFS from the initial class
        let mut rep_of_class: HashMap<usize, usize> = HashMap::new();
        for (i, &c) in class_of.iter().enumerate() {
            rep_of_class.entry(c).or_insert(i);
        }
        let mut order: Vec<usize> = Vec::new(); // class ids in BFS order
        let mut position: HashMap<usize, usize> = HashMap::new();
        let mut queue = VecDeque::new();
        let start = class_of[initial];
        position.insert(start, 0);
        order.push(start);
        queue.push_back(start);
        while let Some(c) = queue.pop_front() {
            let rep = rep_of_class[&c];
            for &t in &states[rep].next {
                let tc = class_of[t];
                if let std::collections::hash_map::Entry::Vacant(slot) = position.entry(tc) {
                    slot.insert(order.len());
                    order.push(tc);
                    queue.push_back(tc);
                }
            }
        }
        let new_states: Vec<MealyState> = order
            .iter()
            .map(|&c| {
                let rep = rep_of_class[&c];
                MealyState {
                    output: states[rep].output.clone(),
                    next: states[rep]
                        .next
                        .iter()
                        .map(|&t| position[&class_of[t]])
                        .collect(),
                }
            })
            .collect();
        MealyAutomorphism {
            alphabet,
            states: new_states,
            initial: 0,
        }
    }

    pub fn identity(alphabet: usize) -> Self {
        MealyAutomorphism {
            alphabet,
            states: vec![MealyState {
                output: Permutation::identity(alphabet),
                next: vec![0; alphabet],
            }],
            initial: 0,
        }
    }

    /// The binary adding machine: increments a reversed binary number,
    /// flipping the first letter and carrying along the ones.
    pub fn odometer() -> Self {
        let swap = Permutation::from_cycles(2, &[&[0, 1]]).unwrap();
        MealyAutomorphism::new(
            2,
            vec![
                MealyState {
                    output: swap,
                    next: vec![1, 0],
                },
                MealyState {
                    output: Permutation::identity(2),
                    next: vec![1, 1],
                },
            ],
            0,
        )
        .unwrap()
    }

    /// The order-two automorphism exchanging the two subtrees below the
    /// vertex `0^i 1`: it maps `0^i 1 0 w` to `0^i 1 1 w` and back, and
    /// fixes every other word. These generate an elementary abelian
    /// 2-group along the leftmost path.
    pub fn spine_swap(i: usize) -> Self {
        let id = Permutation::identity(2);
        let swap = Permutation::from_cycles(2, &[&[0, 1]]).unwrap();
        // states: i delay states, gate, swap, trivial
        let gate = i;
        let swap_state = i + 1;
        let trivial = i + 2;
        let mut states = Vec::new();
        for d in 0..i {
            states.push(MealyState {
                output: id.clone(),
                next: vec![if d + 1 == i { gate } else { d + 1 }, trivial],
            });
        }
        states.push(MealyState {
            output: id.clone(),
            next: vec![trivial, swap_state],
        });
        states.push(MealyState {
            output: swap,
            next: vec![trivial, trivial],
        });
        states.push(MealyState {
            output: id,
            next: vec![trivial, trivial],
        });
        MealyAutomorphism::new(2, states, 0).unwrap()
    }

    /// A pseudorandom machine with the given number of raw states,
    /// canonicalized; deterministic in the seed.
    pub fn random(alphabet: usize, state_count: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let states: Vec<MealyState> = (0..state_count)
            .map(|_| {
                let mut images: Vec<usize> = (0..alphabet).collect();
                for i in (1..alphabet).rev() {
                    let j = rng.random_range(0..=i);
                    images.swap(i, j);
                }
                MealyState {
                    output: Permutation::from_images(images).unwrap(),
                    next: (0..alphabet)
                        .map(|_| rng.random_range(0..state_count))
                        .collect(),
                }
            })
            .collect();
        MealyAutomorphism::new(alphabet, states, 0).unwrap()
    }

    pub fn alphabet(&self) -> usize {
        self.alphabet
    }

    pub fn states(&self) -> &[MealyState] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    /// Index of the unique identity-behavior state, if present.
    pub fn trivial_state(&self) -> Option<usize> {
        (0..self.states.len()).find(|&s| {
            self.states[s].output.is_identity() && self.states[s].next.iter().all(|&t| t == s)
        })
    }

    pub fn is_identity(&self) -> bool {
        self.states.len() == 1 && self.states[0].output.is_identity()
    }

    fn check_word(&self, word: &[usize]) -> Result<(), AutomatonError> {
        if let Some(&bad) = word.iter().find(|&&x| x >= self.alphabet) {
            return Err(AutomatonError::LetterOutOfRange {
                letter: bad,
                alphabet: self.alphabet,
            });
        }
        Ok(())
    }

    /// Applies the automorphism to a word.
    pub fn act(&self, word: &[usize]) -> Result<Vec<usize>, AutomatonError> {
        self.check_word(word)?;
        let mut state = self.initial;
        let mut out = Vec::with_capacity(word.len());
        for &x in word {
            out.push(self.states[state].output.apply(x));
            state = self.states[state].next[x];
        }
        Ok(out)
    }

    /// The state reached by reading `word` (the section at that vertex).
    pub fn state_at(&self, word: &[usize]) -> Result<usize, AutomatonError> {
        self.check_word(word)?;
        let mut state = self.initial;
        for &x in word {
            state = self.states[state].next[x];
        }
        Ok(state)
    }

    /// The section at a vertex: the same machine restarted at the state
    /// reached along the vertex, re-canonicalized.
    pub fn section(&self, word: &[usize]) -> Result<MealyAutomorphism, AutomatonError> {
        let state = self.state_at(word)?;
        Ok(Self::canonicalize(
            self.alphabet,
            self.states.clone(),
            state,
        ))
    }

    /// Product: this machine applied after `other`.
    pub fn product(&self, other: &MealyAutomorphism) -> Result<MealyAutomorphism, AutomatonError> {
        if self.alphabet != other.alphabet {
            return Err(AutomatonError::AlphabetMismatch(
                self.alphabet,
                other.alphabet,
            ));
        }
        // pair machine on reachable (self-state, other-state) pairs
        let mut index: HashMap<(usize, usize), usize> = HashMap::new();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        let start = (self.initial, other.initial);
        index.insert(start, 0);
        pairs.push(start);
        let mut states: Vec<MealyState> = Vec::new();
        let mut cursor = 0;
        while cursor < pairs.len() {
            let (sg, sh) = pairs[cursor];
            cursor += 1;
            let out = self.states[sg].output.compose(&other.states[sh].output)?;
            let mut next = Vec::with_capacity(self.alphabet);
            for x in 0..self.alphabet {
                let y = other.states[sh].output.apply(x);
                let pair = (self.states[sg].next[y], other.states[sh].next[x]);
                let next_id = index.len();
                let id = *index.entry(pair).or_insert(next_id);
                if id == pairs.len() {
                    pairs.push(pair);
                }
                next.push(id);
            }
            states.push(MealyState { output: out, next });
        }
        Ok(Self::canonicalize(self.alphabet, states, 0))
    }

    pub fn inverse(&self) -> MealyAutomorphism {
        let states: Vec<MealyState> = self
            .states
            .iter()
            .map(|s| {
                let inv = s.output.inverse();
                MealyState {
                    next: (0..self.alphabet).map(|x| s.next[inv.apply(x)]).collect(),
                    output: inv,
                }
            })
            .collect();
        Self::canonicalize(self.alphabet, states, self.initial)
    }

    /// Re-runs canonicalization; a no-op on machines built through
    /// [`MealyAutomorphism::new`].
    pub fn minimized(&self) -> MealyAutomorphism {
        Self::canonicalize(self.alphabet, self.states.clone(), self.initial)
    }

    /// Truncates to a depth-D portrait: the permutation at vertex `v` is
    /// the output of the section at `v`.
    pub fn to_portrait(&self, depth: usize) -> Result<Portrait, AutomatonError> {
        let mut portrait = Portrait::regular(self.alphabet, depth)?;
        let mut level: Vec<(Vec<usize>, usize)> = vec![(Vec::new(), self.initial)];
        for _ in 0..depth {
            let mut next_level = Vec::new();
            for (v, state) in &level {
                portrait.set(v, self.states[*state].output.clone())?;
                if v.len() + 1 < depth {
                    for x in 0..self.alphabet {
                        let mut w = v.clone();
                        w.push(x);
                        next_level.push((w, self.states[*state].next[x]));
                    }
                }
            }
            level = next_level;
        }
        Ok(portrait)
    }

    /// Number of length-n words with nontrivial section, for n up to and
    /// including `levels`, by dynamic programming on state occupancy.
    pub fn activity_profile(&self, levels: usize) -> ActivityProfile {
        let trivial = self.trivial_state();
        let mut counts = Vec::with_capacity(levels + 1);
        let mut occupancy = vec![0u128; self.states.len()];
        occupancy[self.initial] = 1;
        for _ in 0..=levels {
            let active: u128 = occupancy
                .iter()
                .enumerate()
                .filter(|(s, _)| Some(*s) != trivial)
                .map(|(_, &c)| c)
                .sum();
            counts.push(active);
            let mut next = vec![0u128; self.states.len()];
            for (s, &c) in occupancy.iter().enumerate() {
                if c == 0 {
                    continue;
                }
                for x in 0..self.alphabet {
                    next[self.states[s].next[x]] += c;
                }
            }
            occupancy = next;
        }
        ActivityProfile { counts }
    }

    /// Adjacency among nontrivial states (parallel edges kept).
    fn nontrivial_edges(&self) -> Vec<Vec<usize>> {
        let trivial = self.trivial_state();
        (0..self.states.len())
            .map(|s| {
                if Some(s) == trivial {
                    Vec::new()
                } else {
                    self.states[s]
                        .next
                        .iter()
                        .copied()
                        .filter(|&t| Some(t) != trivial)
                        .collect()
                }
            })
            .collect()
    }

    /// Strongly connected components of the nontrivial-state graph, via
    /// Kosaraju with explicit stacks.
    fn sccs(&self, adj: &[Vec<usize>]) -> Vec<Vec<usize>> {
        let n = adj.len();
        let trivial = self.trivial_state();
        let mut order = Vec::with_capacity(n);
        let mut visited = vec![false; n];
        for start in 0..n {
            if visited[start] || Some(start) == trivial {
                continue;
            }
            let mut stack = vec![(start, 0usize)];
            visited[start] = true;
            while let Some(&mut (v, ref mut i)) = stack.last_mut() {
                if *i < adj[v].len() {
                    let t = adj[v][*i];
                    *i += 1;
                    if !visited[t] {
                        visited[t] = true;
                        stack.push((t, 0));
                    }
                } else {
                    order.push(v);
                    stack.pop();
                }
            }
        }
        let mut radj = vec![Vec::new(); n];
        for (v, outs) in adj.iter().enumerate() {
            for &t in outs {
                radj[t].push(v);
            }
        }
        let mut comp = vec![usize::MAX; n];
        let mut comps: Vec<Vec<usize>> = Vec::new();
        for &start in order.iter().rev() {
            if comp[start] != usize::MAX {
                continue;
            }
            let id = comps.len();
            let mut members = vec![start];
            comp[start] = id;
            let mut stack = vec![start];
            while let Some(v) = stack.pop() {
                for &t in &radj[v] {
                    if comp[t] == usize::MAX {
                        comp[t] = id;
                        members.push(t);
                        stack.push(t);
                    }
                }
            }
            comps.push(members);
        }
        comps
    }

    /// Classifies activity growth from the cycle structure of the
    /// nontrivial-state graph: exponential iff some state lies on two
    /// distinct cycles; otherwise the polynomial degree is one less than
    /// the maximum number of cycles met along a path from the initial
    /// state, with degree zero reported as bounded.
    pub fn analyze_activity(&self) -> ActivityAnalysis {
        if self.is_identity() {
            return ActivityAnalysis {
                classification: Activity::Bounded,
                cycle_lengths: Vec::new(),
                nontrivial_states: 0,
            };
        }
        let adj = self.nontrivial_edges();
        let trivial = self.trivial_state();
        let nontrivial_states = self.states.len() - trivial.map_or(0, |_| 1);
        let comps = self.sccs(&adj);
        let mut comp_of = vec![usize::MAX; self.states.len()];
        for (id, members) in comps.iter().enumerate() {
            for &v in members {
                comp_of[v] = id;
            }
        }
        let mut cyclic = vec![false; comps.len()];
        let mut cycle_lengths = Vec::new();
        for (id, members) in comps.iter().enumerate() {
            let mut within = 0;
            for &v in members {
                for &t in &adj[v] {
                    if comp_of[t] == id {
                        within += 1;
                    }
                }
            }
            if within > members.len() {
                return ActivityAnalysis {
                    classification: Activity::Exponential,
                    cycle_lengths: Vec::new(),
                    nontrivial_states,
                };
            }
            if within == members.len() {
                cyclic[id] = true;
                cycle_lengths.push(members.len());
            }
        }
        // condensation is a DAG; count cyclic components along paths
        // from the initial state's component (components are indexed in
        // reverse topological order by Kosaraju, so process in order)
        let mut comp_adj: Vec<Vec<usize>> = vec![Vec::new(); comps.len()];
        for (v, outs) in adj.iter().enumerate() {
            for &t in outs {
                if comp_of[v] != comp_of[t] {
                    comp_adj[comp_of[v]].push(comp_of[t]);
                }
            }
        }
        // longest cyclic-count over paths, memoized over the DAG
        let mut best = vec![usize::MAX; comps.len()];
        fn dfs(c: usize, comp_adj: &[Vec<usize>], cyclic: &[bool], best: &mut Vec<usize>) -> usize {
            if best[c] != usize::MAX {
                return best[c];
            }
            best[c] = 0; // DAG, no revisit issues
            let below = comp_adj[c]
                .iter()
                .map(|&t| dfs(t, comp_adj, cyclic, best))
                .max()
                .unwrap_or(0);
            best[c] = below + usize::from(cyclic[c]);
            best[c]
        }
        let start = comp_of[self.initial];
        let max_cycles = dfs(start, &comp_adj, &cyclic, &mut best);
        let classification = if max_cycles <= 1 {
            Activity::Bounded
        } else {
            Activity::Polynomial(max_cycles - 1)
        };
        ActivityAnalysis {
            classification,
            cycle_lengths,
            nontrivial_states,
        }
    }

    pub fn classify_activity(&self) -> Activity {
        self.analyze_activity().classification
    }

    /// Depth below which the automorphism acts trivially, or `None` when
    /// it touches arbitrarily deep levels. The identity has depth 0; a
    /// single root permutation has depth 1.
    pub fn finitary_depth(&self) -> Option<usize> {
        if self.is_identity() {
            return Some(0);
        }
        let adj = self.nontrivial_edges();
        let comps = self.sccs(&adj);
        let mut comp_of = vec![usize::MAX; self.states.len()];
        for (id, members) in comps.iter().enumerate() {
            for &v in members {
                comp_of[v] = id;
            }
        }
        for (id, members) in comps.iter().enumerate() {
            let within: usize = members
                .iter()
                .map(|&v| adj[v].iter().filter(|&&t| comp_of[t] == id).count())
                .sum();
            if within >= members.len() {
                return None; // a cycle through nontrivial states
            }
        }
        // acyclic: longest chain of nontrivial states from the initial
        fn chain(v: usize, adj: &[Vec<usize>], memo: &mut HashMap<usize, usize>) -> usize {
            if let Some(&c) = memo.get(&v) {
                return c;
            }
            let below = adj[v]
                .iter()
                .map(|&t| chain(t, adj, memo))
                .max()
                .unwrap_or(0);
            memo.insert(v, below + 1);
            below + 1
        }
        let mut memo = HashMap::new();
        Some(chain(self.initial, &adj, &mut memo))
    }
}
