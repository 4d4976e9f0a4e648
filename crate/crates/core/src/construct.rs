//! Element constructions inside `(A, X) ≀ H` for a finite stand-in base
//! group `H`: the generating set `S = S_A ∪ S_K`, the commutator-style
//! `t` and `u` elements, the pure-tail commutator and k-th-power
//! elements, and closure/irredundancy checks for `S`.
//!
//! Every construction follows the point conditions of its source
//! derivation (`b_j(0) = j`, steering images, and so on), multiplies the
//! pieces out with [`WreathProduct`] arithmetic, and asserts the closed
//! form exactly; a mismatch is an error carrying both sides, never a
//! silent pass. All searches take the first hit in the canonical element
//! order, so instances replay identically across runs.
//!
//! Everything here works in label coordinates: the top group is the
//! witness-relabeled copy of `A`, so `X1` is an initial and `X2` a final
//! segment of `0..degree`.

use std::collections::{BTreeMap, HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{self, PermError, Permutation, PermutationGroup};
use crate::pscert::{self, CheckEntry, PsError, PsWitness, SteeringCase, SteeringElement};
use crate::wreath::{FiniteGroup, WreathElement, WreathError, WreathProduct};

#[derive(Debug, Error)]
pub enum ConstructError {
    #[error("invalid instance data: {0}")]
    InvalidData(String),
    #[error("element not expressible in the required form: {0}")]
    NotExpressible(String),
    #[error("no element with the required property: {0}")]
    SearchFailed(String),
    #[error("{what}: computed {lhs}, expected {rhs}")]
    AssertionFailure {
        what: String,
        lhs: String,
        rhs: String,
    },
    #[error(transparent)]
    Perm(#[from] PermError),
    #[error(transparent)]
    Ps(#[from] PsError),
    #[error(transparent)]
    Wreath(#[from] WreathError),
}

/// Raw description of an instance: the top group, the base group, the
/// normal subgroup, the exponent, the chosen representatives and the
/// tail map. This is the `lemma-replay` file format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LConditionData {
    pub a_group: PermutationGroup,
    pub h_group: PermutationGroup,
    pub h0_generators: Vec<Permutation>,
    pub k: u32,
    pub f: Vec<Permutation>,
    /// Indices into `f` whose generators carry a tail entry.
    pub i2: Vec<usize>,
    /// Tail entries, aligned with `i2`.
    pub phi: Vec<Permutation>,
}

/// A signed word over the representative indices.
pub type SignedWord = Vec<(usize, bool)>;

/// A prepared instance: witness and steering found, top group relabeled,
/// base group enumerated, generators built.
#[derive(Debug, Clone)]
pub struct Instance {
    pub data: LConditionData,
    pub witness: PsWitness,
    pub steering: SteeringElement,
    /// Relabeled elements of `A`, sorted canonically.
    pub tops: Vec<Permutation>,
    /// Relabeled generators of `A` (the candidate `S_A`).
    pub top_generators: Vec<Permutation>,
    pub wreath: WreathProduct,
    /// Sorted element indices of the normal subgroup.
    pub h0: Vec<u32>,
    pub k: u32,
    /// Representative element indices, position = index in `I`.
    pub f: Vec<u32>,
    pub i2: Vec<usize>,
    pub phi: BTreeMap<usize, u32>,
    /// The tail generators `q_i`.
    pub q: Vec<WreathElement>,
}

impl Instance {
    pub fn prepare(data: LConditionData) -> Result<Self, ConstructError> {
        if data.k < 2 {
            return Err(ConstructError::InvalidData(format!(
                "k must be at least 2, got {}",
                data.k
            )));
        }
        let witness = pscert::find_witness(&data.a_group)?;
        let (witness, steering) = pscert::find_steering(&data.a_group, &witness)?;

        let elements = data.a_group.enumerate()?;
        let mut tops = elements
            .iter()
            .map(|g| g.conjugated_by(&witness.labeling))
            .collect::<Result<Vec<_>, _>>()?;
        tops.sort();
        let top_generators = data
            .a_group
            .generators()
            .iter()
            .map(|g| g.conjugated_by(&witness.labeling))
            .collect::<Result<Vec<_>, _>>()?;

        let base = FiniteGroup::new(&data.h_group)?;
        let h0_seed = data
            .h0_generators
            .iter()
            .map(|p| base.index_of(p))
            .collect::<Result<Vec<_>, _>>()?;
        let h0 = base.closure_indices(&h0_seed);
        let f = data
            .f
            .iter()
            .map(|p| base.index_of(p))
            .collect::<Result<Vec<_>, _>>()?;

        let mut i2 = data.i2.clone();
        i2.sort_unstable();
        i2.dedup();
        if i2.len() != data.i2.len() {
            return Err(ConstructError::InvalidData(
                "i2 contains duplicate indices".into(),
            ));
        }
        if let Some(&bad) = i2.iter().find(|&&i| i >= f.len()) {
            return Err(ConstructError::InvalidData(format!(
                "i2 index {bad} out of range for {} representatives",
                f.len()
            )));
        }
        if data.phi.len() != data.i2.len() {
            return Err(ConstructError::InvalidData(format!(
                "phi has {} entries for {} i2 indices",
                data.phi.len(),
                data.i2.len()
            )));
        }
        let mut phi = BTreeMap::new();
        for (&i, p) in data.i2.iter().zip(data.phi.iter()) {
            phi.insert(i, base.index_of(p)?);
        }

        let degree = data.a_group.degree();
        let wreath = WreathProduct::new(degree, base);
        let mut q = Vec::with_capacity(f.len());
        for (i, &fi) in f.iter().enumerate() {
            let mut tail = vec![wreath.base().identity(); degree];
            tail[0] = fi;
            if let Some(&ph) = phi.get(&i) {
                tail[degree - 1] = ph;
            }
            q.push(wreath.tail_element(tail)?);
        }

        let k = data.k;
        Ok(Instance {
            data,
            witness,
            steering,
            tops,
            top_generators,
            wreath,
            h0,
            k,
            f,
            i2,
            phi,
            q,
        })
    }

    pub fn degree(&self) -> usize {
        self.data.a_group.degree()
    }

    /// Highest label; X2 always contains it.
    pub fn n(&self) -> usize {
        self.degree() - 1
    }

    pub fn x1_len(&self) -> usize {
        self.witness.x1.len()
    }

    pub fn x2_start(&self) -> usize {
        self.degree() - self.witness.x2.len()
    }

    pub fn base(&self) -> &FiniteGroup {
        self.wreath.base()
    }

    /// Relabeled stabilizer fixing everything outside the `X1` labels.
    pub fn a1_elements(&self) -> Vec<Permutation> {
        let outside: Vec<usize> = (self.x1_len()..self.degree()).collect();
        perm::pointwise_stabilizer(&self.tops, &outside)
    }

    /// Relabeled stabilizer fixing everything outside the `X2` labels.
    pub fn a2_elements(&self) -> Vec<Permutation> {
        let outside: Vec<usize> = (0..self.x2_start()).collect();
        perm::pointwise_stabilizer(&self.tops, &outside)
    }

    fn first_with(
        list: &[Permutation],
        what: &str,
        pred: impl Fn(&Permutation) -> bool,
    ) -> Result<Permutation, ConstructError> {
        list.iter()
            .find(|p| pred(p))
            .cloned()
            .ok_or_else(|| ConstructError::SearchFailed(what.to_string()))
    }

    /// Value of a signed word as a base-group element.
    pub fn word_value(&self, word: &[(usize, bool)]) -> Result<u32, ConstructError> {
        let base = self.base();
        let mut acc = base.identity();
        for &(i, invert) in word {
            let fi = *self.f.get(i).ok_or_else(|| {
                ConstructError::InvalidData(format!("word index {i} out of range"))
            })?;
            let factor = if invert { base.inv(fi) } else { fi };
            acc = base.mul(acc, factor);
        }
        Ok(acc)
    }

    /// Product of the `q_i^{±1}` over a signed word.
    pub fn word_product(&self, word: &[(usize, bool)]) -> Result<WreathElement, ConstructError> {
        let mut acc = self.wreath.identity();
        for &(i, invert) in word {
            let qi = self.q.get(i).ok_or_else(|| {
                ConstructError::InvalidData(format!("word index {i} out of range"))
            })?;
            let factor = if invert {
                self.wreath.inverse(qi)?
            } else {
                qi.clone()
            };
            acc = self.wreath.product(&acc, &factor)?;
        }
        Ok(acc)
    }

    /// Shortest signed words for every element of the subgroup generated
    /// by the representatives at the given indices, in BFS order.
    fn word_map(&self, indices: &[usize]) -> HashMap<u32, SignedWord> {
        let base = self.base();
        let mut words: HashMap<u32, SignedWord> = HashMap::new();
        let mut queue = VecDeque::new();
        words.insert(base.identity(), Vec::new());
        queue.push_back(base.identity());
        while let Some(x) = queue.pop_front() {
            let word = words[&x].clone();
            for &i in indices {
                for invert in [false, true] {
                    let fi = self.f[i];
                    let factor = if invert { base.inv(fi) } else { fi };
                    let y = base.mul(x, factor);
                    words.entry(y).or_insert_with(|| {
                        queue.push_back(y);
                        let mut next = word.clone();
                        next.push((i, invert));
                        next
                    });
                }
            }
        }
        words
    }

    fn i1_indices(&self) -> Vec<usize> {
        (0..self.f.len())
            .filter(|i| self.i2.binary_search(i).is_err())
            .collect()
    }

    fn all_indices(&self) -> Vec<usize> {
        (0..self.f.len()).collect()
    }

    fn assert_equal(
        what: &str,
        lhs: &WreathElement,
        rhs: &WreathElement,
    ) -> Result<(), ConstructError> {
        if lhs == rhs {
            Ok(())
        } else {
            Err(ConstructError::AssertionFailure {
                what: what.to_string(),
                lhs: format!("{lhs:?}"),
                rhs: format!("{rhs:?}"),
            })
        }
    }

    /// The element `t_j = b_j · Q_w · b_j⁻¹ · Q_w⁻¹` with `b_j` the first
    /// `A1` element sending label 0 to `j`; checked against the closed
    /// form: the word value inverted at coordinate 0, plain at
    /// coordinate `j`, identity elsewhere.
    pub fn t_element(
        &self,
        j: usize,
        word: &[(usize, bool)],
    ) -> Result<WreathElement, ConstructError> {
        if j == 0 || j >= self.x1_len() {
            return Err(ConstructError::InvalidData(format!(
                "j = {j} is not a non-zero X1 label"
            )));
        }
        let b = Self::first_with(&self.a1_elements(), "A1 element with b(0) = j", |p| {
            p.apply(0) == j
        })?;
        let q_w = self.word_product(word)?;
        let w = &self.wreath;
        let b_el = w.top_element(b)?;
        let t = w.product(
            &w.product(&w.product(&b_el, &q_w)?, &w.inverse(&b_el)?)?,
            &w.inverse(&q_w)?,
        )?;

        let g = self.word_value(word)?;
        let mut tail = vec![self.base().identity(); self.degree()];
        tail[0] = self.base().inv(g);
        tail[j] = g;
        let expected = w.tail_element(tail)?;
        Self::assert_equal("t element closed form", &t, &expected)?;
        Ok(t)
    }

    /// The pair `(u_{n-2}, u_{n-1})` for a word, built by the
    /// case-appropriate steering conjugations. Each element is checked to
    /// be a pure tail, identity everywhere except coordinates `m` and
    /// `n`, which carry the word value and its inverse.
    pub fn u_elements(
        &self,
        word: &[(usize, bool)],
    ) -> Result<(WreathElement, WreathElement), ConstructError> {
        let n = self.n();
        let w = &self.wreath;
        let d = &self.steering.d;
        let (u_low, u_high) = match self.steering.case {
            SteeringCase::Case1 => {
                let t1 = self.t_element(1, word)?;
                let td = w.conjugate(&t1, d)?;
                // the steering conjugation parks the word value at the
                // last coordinate and its inverse outside X2
                let g = self.word_value(word)?;
                let mut td_tail = vec![self.base().identity(); self.degree()];
                td_tail[d.apply(0)] = self.base().inv(g);
                td_tail[n] = g;
                Self::assert_equal("steered t shape", &td, &w.tail_element(td_tail)?)?;
                let mut out = Vec::new();
                for m in [n - 2, n - 1] {
                    let c_m =
                        Self::first_with(&self.a2_elements(), "A2 element with c(n) = m", |p| {
                            p.apply(n) == m
                        })?;
                    let tdc = w.conjugate(&td, &c_m)?;
                    out.push(w.product(&td, &w.inverse(&tdc)?)?);
                }
                let high = out.pop().unwrap();
                (out.pop().unwrap(), high)
            }
            SteeringCase::Case2 => {
                let t1 = self.t_element(1, word)?;
                let t2 = self.t_element(2, word)?;
                (w.conjugate(&t2, d)?, w.conjugate(&t1, d)?)
            }
        };

        let g = self.word_value(word)?;
        self.check_u_shape(&u_low, n - 2, g)?;
        self.check_u_shape(&u_high, n - 1, g)?;
        Ok((u_low, u_high))
    }

    fn check_u_shape(&self, u: &WreathElement, m: usize, g: u32) -> Result<(), ConstructError> {
        let base = self.base();
        let n = self.n();
        let e = base.identity();
        let ok = u.top.is_identity()
            && u.tail
                .iter()
                .enumerate()
                .all(|(c, &t)| c == m || c == n || t == e)
            && base.mul(u.tail[m], u.tail[n]) == e
            && (u.tail[m] == g || u.tail[m] == base.inv(g));
        if ok {
            Ok(())
        } else {
            Err(ConstructError::AssertionFailure {
                what: format!("u element shape at coordinates {m} and {n}"),
                lhs: format!("{u:?}"),
                rhs: format!("mutually inverse entries from element {g} only at {m}, {n}"),
            })
        }
    }

    /// Pure tail with the word value at coordinate `n` and its inverse at
    /// coordinate `m`, obtained from the `u` machinery (inverting when
    /// the steering case flips the pair).
    fn paired_tail(
        &self,
        m: usize,
        word: &[(usize, bool)],
    ) -> Result<WreathElement, ConstructError> {
        let n = self.n();
        let (u_low, u_high) = self.u_elements(word)?;
        let u = if m == n - 2 { u_low } else { u_high };
        let g = self.word_value(word)?;
        if u.tail[n] == g {
            Ok(u)
        } else {
            Ok(self.wreath.inverse(&u)?)
        }
    }

    /// Decomposes `h = g · phi(i)` with `g` in the subgroup generated by
    /// all representatives and `i` in `I2`; smallest `i` first, words in
    /// BFS order.
    fn decompose_with_tail(&self, h: u32) -> Result<(SignedWord, usize), ConstructError> {
        let words = self.word_map(&self.all_indices());
        let base = self.base();
        for &i in &self.i2 {
            let g = base.mul(h, base.inv(self.phi[&i]));
            if let Some(word) = words.get(&g) {
                return Ok((word.clone(), i));
            }
        }
        Err(ConstructError::NotExpressible(format!(
            "element {h} is not of the form g * phi(i) with g generated by the representatives"
        )))
    }

    /// The commutator `h1' h2' h1'⁻¹ h2'⁻¹` built from decompositions
    /// `h_j = g_j phi(i_j)`; checked to be the pure tail carrying the
    /// commutator of `h1` and `h2` at the last coordinate.
    pub fn commutator_tail(&self, h1: u32, h2: u32) -> Result<WreathElement, ConstructError> {
        let n = self.n();
        let w = &self.wreath;
        let base = self.base();

        let (w1, i1) = self.decompose_with_tail(h1)?;
        let (w2, i2) = self.decompose_with_tail(h2)?;
        let g1 = self.word_value(&w1)?;
        let g2 = self.word_value(&w2)?;

        // t1 = (g1⁻¹ at n-2, g1 at n), t2 = (g2⁻¹ at n-1, g2 at n)
        let t1 = self.paired_tail(n - 2, &w1)?;
        debug_assert_eq!(t1.tail[n], g1);
        let t2 = self.paired_tail(n - 1, &w2)?;
        debug_assert_eq!(t2.tail[n], g2);

        let a = Self::first_with(&self.a1_elements(), "A1 element with a(0) = 1", |p| {
            p.apply(0) == 1
        })?;
        let h1p = w.product(&t1, &self.q[i1])?;
        let mut h1p_tail = vec![base.identity(); self.degree()];
        h1p_tail[0] = self.f[i1];
        h1p_tail[n - 2] = base.inv(g1);
        h1p_tail[n] = base.mul(g1, self.phi[&i1]);
        Self::assert_equal("h1' shape", &h1p, &w.tail_element(h1p_tail)?)?;

        let q2a = w.conjugate(&self.q[i2], &a)?;
        let h2p = w.product(&t2, &q2a)?;
        let mut h2p_tail = vec![base.identity(); self.degree()];
        h2p_tail[1] = self.f[i2];
        h2p_tail[n - 1] = base.inv(g2);
        h2p_tail[n] = base.mul(g2, self.phi[&i2]);
        Self::assert_equal("h2' shape", &h2p, &w.tail_element(h2p_tail)?)?;

        let comm = w.product(
            &w.product(&w.product(&h1p, &h2p)?, &w.inverse(&h1p)?)?,
            &w.inverse(&h2p)?,
        )?;

        let expected_entry = base.mul(base.mul(base.mul(h1, h2), base.inv(h1)), base.inv(h2));
        let expected = w.single_entry_tail(n, expected_entry)?;
        Self::assert_equal("commutator closed form", &comm, &expected)?;
        Ok(comm)
    }

    /// Decomposes `h = g1 · g2 · phi(i)` with `g1` over the plain
    /// representatives and `g2` over the `I2` representatives.
    fn decompose_split(&self, h: u32) -> Result<(SignedWord, SignedWord, usize), ConstructError> {
        let base = self.base();
        let words1 = self.word_map(&self.i1_indices());
        let words2 = self.word_map(&self.i2.clone());
        let mut g1s: Vec<u32> = words1.keys().copied().collect();
        g1s.sort_unstable();
        for &i in &self.i2 {
            let target = base.mul(h, base.inv(self.phi[&i]));
            for &g1 in &g1s {
                let need = base.mul(base.inv(g1), target);
                if let Some(w2) = words2.get(&need) {
                    return Ok((words1[&g1].clone(), w2.clone(), i));
                }
            }
        }
        Err(ConstructError::NotExpressible(format!(
            "element {h} is not of the form g1 * g2 * phi(i)"
        )))
    }

    /// The k-th power construction: builds `h' = t1 · t2 · q_i` from a
    /// decomposition `h = g1 g2 phi(i)`, takes its k-th power, cancels
    /// the leftover coordinate with a conjugated derived-subgroup tail,
    /// and checks the result is the pure tail `h^k` at the last
    /// coordinate. Requires every `I2` representative to satisfy
    /// `f^k = e` (the power branch).
    pub fn power_tail(&self, h: u32) -> Result<WreathElement, ConstructError> {
        let base = self.base();
        let n = self.n();
        let w = &self.wreath;
        for &i in &self.i2 {
            if base.pow(self.f[i], self.k) != base.identity() {
                return Err(ConstructError::InvalidData(format!(
                    "representative {i} does not have order dividing k = {}",
                    self.k
                )));
            }
        }

        let (w1, w2, i) = self.decompose_split(h)?;
        let g1 = self.word_value(&w1)?;
        let g2 = self.word_value(&w2)?;
        if base.mul(base.mul(g1, g2), self.phi[&i]) != h {
            return Err(ConstructError::NotExpressible(format!(
                "decomposition of {h} does not multiply back"
            )));
        }

        let a = Self::first_with(&self.tops, "top element with a(0) = n", |p| p.apply(0) == n)?;
        let q_w1 = self.word_product(&w1)?;
        let t1 = w.conjugate(&q_w1, &a)?;
        Self::assert_equal(
            "g1 moved to the last coordinate",
            &t1,
            &w.single_entry_tail(n, g1)?,
        )?;

        let t2 = self.paired_tail(n - 1, &w2)?;

        let hp = w.product(&w.product(&t1, &t2)?, &self.q[i])?;
        let mut hp_tail = vec![base.identity(); self.degree()];
        hp_tail[0] = self.f[i];
        hp_tail[n - 1] = base.inv(g2);
        hp_tail[n] = h;
        Self::assert_equal("h' shape", &hp, &w.tail_element(hp_tail)?)?;

        let power = w.pow(&hp, self.k)?;

        let h2 = base.pow(g2, self.k);
        let derived = base.derived_subgroup_indices();
        if derived.binary_search(&h2).is_err() {
            return Err(ConstructError::AssertionFailure {
                what: "g2^k lies in the derived subgroup".into(),
                lhs: format!("element {h2}"),
                rhs: format!("one of {derived:?}"),
            });
        }
        let a1 = Self::first_with(&self.a2_elements(), "A2 element with a1(n-1) = n", |p| {
            p.apply(n - 1) == n
        })?;
        let correction = w.conjugate(&w.single_entry_tail(n, h2)?, &a1.inverse())?;
        Self::assert_equal(
            "correction sits at coordinate n-1",
            &correction,
            &w.single_entry_tail(n - 1, h2)?,
        )?;

        let result = w.product(&power, &correction)?;
        let expected = w.single_entry_tail(n, base.pow(h, self.k))?;
        Self::assert_equal("k-th power closed form", &result, &expected)?;
        Ok(result)
    }

    /// The generating set `S`: the relabeled minimal generators of `A`
    /// as top elements, followed by the tail generators `q_i`.
    pub fn build_s(&self) -> Result<Vec<WreathElement>, ConstructError> {
        if !perm::is_minimal_generating_set(&self.data.a_group, self.data.a_group.generators())? {
            return Err(ConstructError::InvalidData(
                "the generators of A are not a minimal generating set".into(),
            ));
        }
        let mut s = Vec::new();
        for g in &self.top_generators {
            s.push(self.wreath.top_element(g.clone())?);
        }
        s.extend(self.q.iter().cloned());
        Ok(s)
    }

    /// Order of the subgroup generated by `gens`.
    pub fn closure_order(
        &self,
        gens: &[WreathElement],
        cap: usize,
    ) -> Result<usize, ConstructError> {
        Ok(self.wreath.closure_order(gens, cap)?)
    }

    /// Full order of `(A, X) ≀ H`, saturating.
    pub fn full_order(&self) -> u128 {
        let mut order = self.tops.len() as u128;
        for _ in 0..self.degree() {
            order = order.saturating_mul(self.base().order() as u128);
        }
        order
    }

    /// True iff dropping any single generator strictly shrinks the
    /// closure.
    pub fn check_irredundant(
        &self,
        gens: &[WreathElement],
        cap: usize,
    ) -> Result<bool, ConstructError> {
        let full = self.closure_order(gens, cap)?;
        for skip in 0..gens.len() {
            let rest: Vec<WreathElement> = gens
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, g)| g.clone())
                .collect();
            if self.closure_order(&rest, cap)? == full {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Which branch of the subgroup-chain condition matched.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Branch {
    /// The normal subgroup sits inside the derived subgroup.
    A,
    /// The derived subgroup sits strictly inside the normal subgroup,
    /// which sits inside the product of the k-th-power and derived
    /// subgroups.
    B,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub entries: Vec<CheckEntry>,
    pub branch: Option<Branch>,
    /// Whether the checks the element constructions rely on all passed.
    pub essential_passed: bool,
    pub all_passed: bool,
    pub notes: Vec<String>,
}

const ESSENTIAL: &[&str] = &[
    "ps_witness_verified",
    "h0_normal",
    "phi_maps_into_h0",
    "phi_surjective_onto_h0",
    "f_images_generate_quotient",
    "branch_membership",
];

/// Names of entries that are reported but do not gate the element
/// constructions (nothing in the generation arguments uses them).
const INFORMATIONAL: &[&str] = &["quotient_at_least_h0", "f_images_irredundant"];

/// Checks every finite-scale condition on an instance. Failures are
/// report entries, never errors; the informational entries do not block
/// replays.
pub fn validate(inst: &Instance) -> ValidationReport {
    let base = inst.base();
    let mut entries = Vec::new();
    let mut notes = Vec::new();

    let ps_report = pscert::verify_witness(&inst.data.a_group, &inst.witness);
    entries.push(CheckEntry::new("ps_witness_verified", ps_report.all_passed));

    entries.push(CheckEntry::new("h0_normal", base.is_normal(&inst.h0)));

    let phi_in = inst.phi.values().all(|v| inst.h0.binary_search(v).is_ok());
    entries.push(CheckEntry::new("phi_maps_into_h0", phi_in));

    let phi_onto = inst.h0.iter().all(|h| inst.phi.values().any(|v| v == h));
    entries.push(CheckEntry::with_detail(
        "phi_surjective_onto_h0",
        phi_onto,
        format!(
            "{} tail values for |H0| = {}",
            inst.phi.len(),
            inst.h0.len()
        ),
    ));

    let mut gen_seed = inst.f.clone();
    gen_seed.extend(inst.h0.iter().copied());
    let generated = base.closure_indices(&gen_seed);
    let f_generates = generated.len() == base.order();
    entries.push(CheckEntry::new("f_images_generate_quotient", f_generates));
    notes.push(
        "quotient generation by representative images stands in for the unbounded \
         minimal-generating-set requirement, which has no finite analogue"
            .to_string(),
    );

    let quotient_order = base.order() / inst.h0.len();
    entries.push(CheckEntry::with_detail(
        "quotient_at_least_h0",
        quotient_order >= inst.h0.len(),
        format!(
            "|H/H0| = {} vs |H0| = {} (informational)",
            quotient_order,
            inst.h0.len()
        ),
    ));

    let derived = base.derived_subgroup_indices();
    let power = base.power_subgroup_indices(inst.k);
    let mut pd_seed = power.clone();
    pd_seed.extend(derived.iter().copied());
    let power_derived = base.closure_indices(&pd_seed);
    let subset = |a: &[u32], b: &[u32]| a.iter().all(|x| b.binary_search(x).is_ok());

    let branch_a = subset(&inst.h0, &derived);
    let branch_b = subset(&derived, &inst.h0)
        && derived.len() < inst.h0.len()
        && subset(&inst.h0, &power_derived);
    let branch = if branch_a {
        Some(Branch::A)
    } else if branch_b {
        Some(Branch::B)
    } else {
        None
    };
    entries.push(CheckEntry::with_detail(
        "branch_membership",
        branch.is_some(),
        match branch {
            Some(Branch::A) => "branch A: H0 inside the derived subgroup".to_string(),
            Some(Branch::B) => {
                "branch B: derived subgroup strictly inside H0 inside H^k H'".to_string()
            }
            None => format!(
                "|H'| = {}, |H0| = {}, |H^k H'| = {}: neither inclusion chain holds",
                derived.len(),
                inst.h0.len(),
                power_derived.len()
            ),
        },
    ));

    if branch != Some(Branch::A) {
        let mut all_ok = true;
        let mut detail = Vec::new();
        for &i in &inst.i2 {
            if base.pow(inst.f[i], inst.k) != base.identity() {
                all_ok = false;
                // distinguish a bad representative choice from a coset
                // with no order-k element at all
                let fixable = inst
                    .h0
                    .iter()
                    .map(|&h0| base.mul(inst.f[i], h0))
                    .any(|c| base.element_order(c) == inst.k);
                detail.push(format!(
                    "representative {i} has order {} and its coset {} an order-{} element",
                    base.element_order(inst.f[i]),
                    if fixable {
                        "contains"
                    } else {
                        "does not contain"
                    },
                    inst.k
                ));
            }
        }
        entries.push(CheckEntry::with_detail(
            "branch_b_representatives_order_k",
            all_ok,
            detail.join("; "),
        ));
    }

    if f_generates && !inst.f.is_empty() {
        let mut irredundant = true;
        for skip in 0..inst.f.len() {
            let mut seed: Vec<u32> = inst
                .f
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != skip)
                .map(|(_, &v)| v)
                .collect();
            seed.extend(inst.h0.iter().copied());
            if base.closure_indices(&seed).len() == base.order() {
                irredundant = false;
                break;
            }
        }
        entries.push(CheckEntry::new("f_images_irredundant", irredundant));
    }
    if inst.f.is_empty() {
        notes.push("no representatives given: S reduces to S_A".to_string());
    }

    let essential_passed = entries
        .iter()
        .filter(|e| ESSENTIAL.contains(&e.name.as_str()))
        .all(|e| e.passed);
    let all_passed = entries
        .iter()
        .filter(|e| !INFORMATIONAL.contains(&e.name.as_str()))
        .all(|e| e.passed);
    ValidationReport {
        entries,
        branch,
        essential_passed,
        all_passed,
        notes,
    }
}

/// Per-lemma replay report.
#[derive(Debug, Clone, Serialize)]
pub struct LemmaReport {
    pub lemma: String,
    pub instances_checked: usize,
    pub all_passed: bool,
    pub first_failure: Option<String>,
    pub notes: Vec<String>,
}

impl LemmaReport {
    fn new(lemma: &str) -> Self {
        LemmaReport {
            lemma: lemma.to_string(),
            instances_checked: 0,
            all_passed: true,
            first_failure: None,
            notes: Vec::new(),
        }
    }

    fn record<T>(&mut self, outcome: Result<T, ConstructError>) {
        self.instances_checked += 1;
        if let Err(err) = outcome {
            if self.first_failure.is_none() {
                self.first_failure = Some(err.to_string());
            }
            self.all_passed = false;
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LemmaKind {
    T,
    U,
    Commutator,
    Power,
    Closure,
    Minimal,
}

impl LemmaKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "t" => Some(LemmaKind::T),
            "u" => Some(LemmaKind::U),
            "comm" => Some(LemmaKind::Commutator),
            "power" => Some(LemmaKind::Power),
            "closure" => Some(LemmaKind::Closure),
            "minimal" => Some(LemmaKind::Minimal),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            LemmaKind::T => "t",
            LemmaKind::U => "u",
            LemmaKind::Commutator => "comm",
            LemmaKind::Power => "power",
            LemmaKind::Closure => "closure",
            LemmaKind::Minimal => "minimal",
        }
    }
}

fn random_word(rng: &mut ChaCha8Rng, index_count: usize, max_len: usize) -> SignedWord {
    let len = rng.random_range(0..=max_len);
    (0..len)
        .map(|_| (rng.random_range(0..index_count), rng.random_bool(0.5)))
        .collect()
}

/// Runs one construction's checks over seeded random inputs.
pub fn run_lemma(
    inst: &Instance,
    kind: LemmaKind,
    trials: usize,
    seed: u64,
    cap: usize,
) -> Result<LemmaReport, ConstructError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = LemmaReport::new(kind.name());
    let index_count = inst.f.len();
    match kind {
        LemmaKind::T => {
            if index_count == 0 || inst.x1_len() < 2 {
                return Err(ConstructError::InvalidData(
                    "t elements need representatives and |X1| >= 2".into(),
                ));
            }
            for _ in 0..trials {
                let word = random_word(&mut rng, index_count, 6);
                let j = rng.random_range(1..inst.x1_len());
                report.record(inst.t_element(j, &word));
            }
        }
        LemmaKind::U => {
            if index_count == 0 {
                return Err(ConstructError::InvalidData(
                    "u elements need representatives".into(),
                ));
            }
            for _ in 0..trials {
                let word = random_word(&mut rng, index_count, 6);
                report.record(inst.u_elements(&word));
            }
        }
        LemmaKind::Commutator => {
            let order = inst.base().order() as u32;
            for _ in 0..trials {
                let h1 = rng.random_range(0..order);
                let h2 = rng.random_range(0..order);
                report.record(inst.commutator_tail(h1, h2));
            }
        }
        LemmaKind::Power => {
            report.notes.push(
                "the source derivation names the exponent of g2 inconsistently (p vs k); \
                 the construction uses k throughout"
                    .to_string(),
            );
            let order = inst.base().order() as u32;
            for _ in 0..trials {
                let h = rng.random_range(0..order);
                report.record(inst.power_tail(h));
            }
        }
        LemmaKind::Closure => {
            let s = inst.build_s()?;
            if s.len() == inst.top_generators.len() {
                report
                    .notes
                    .push("S has no tail generators; closure stays in the top factor".to_string());
            }
            let predicted = inst.full_order();
            if predicted > cap as u128 {
                return Err(ConstructError::Wreath(WreathError::ClosureTooLarge { cap }));
            }
            let order = inst.closure_order(&s, cap)?;
            report.instances_checked = 1;
            if order as u128 != predicted {
                report.all_passed = false;
                report.first_failure = Some(format!(
                    "closure of S has order {order}, full wreath product has order {predicted}"
                ));
            }
        }
        LemmaKind::Minimal => {
            let s = inst.build_s()?;
            let predicted = inst.full_order();
            if predicted > cap as u128 {
                return Err(ConstructError::Wreath(WreathError::ClosureTooLarge { cap }));
            }
            let ok = inst.check_irredundant(&s, cap)?;
            report.instances_checked = 1;
            if !ok {
                report.all_passed = false;
                report.first_failure = Some("some generator of S is redundant".to_string());
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c2_x_c4() -> PermutationGroup {
        PermutationGroup::new(
            6,
            vec![
                Permutation::from_cycles(6, &[&[0, 1]]).unwrap(),
                Permutation::from_cycles(6, &[&[2, 3, 4, 5]]).unwrap(),
            ],
        )
        .unwrap()
    }

    /// A = S_5, H = C2, H0 = {e}, k = 2, one representative with trivial
    /// tail entry.
    fn s5_c2_instance() -> Instance {
        let c2 = PermutationGroup::cyclic(2);
        let f = c2.generators()[0].clone();
        Instance::prepare(LConditionData {
            a_group: PermutationGroup::symmetric(5),
            h_group: c2,
            h0_generators: vec![],
            k: 2,
            f: vec![f],
            i2: vec![0],
            phi: vec![Permutation::identity(2)],
        })
        .unwrap()
    }

    /// A = S_5, H = S_3, H0 = A_3, three copies of a transposition with
    /// the tail map running over all of H0.
    fn s5_s3_instance() -> Instance {
        let s3 = PermutationGroup::symmetric(3);
        let t = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        Instance::prepare(LConditionData {
            a_group: PermutationGroup::symmetric(5),
            h_group: s3,
            h0_generators: vec![Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap()],
            k: 2,
            f: vec![t.clone(), t.clone(), t],
            i2: vec![0, 1, 2],
            phi: vec![
                Permutation::identity(3),
                Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap(),
                Permutation::from_cycles(3, &[&[0, 2, 1]]).unwrap(),
            ],
        })
        .unwrap()
    }

    /// Power-branch instance: A = S_5, H = C2 x C4, H0 = H^2, k = 2.
    fn s5_c2x4_instance() -> Instance {
        let h = c2_x_c4();
        let s = Permutation::from_cycles(6, &[&[0, 1]]).unwrap();
        let r = Permutation::from_cycles(6, &[&[2, 3, 4, 5]]).unwrap();
        let r2 = r.compose(&r).unwrap();
        let sr2 = s.compose(&r2).unwrap();
        Instance::prepare(LConditionData {
            a_group: PermutationGroup::symmetric(5),
            h_group: h,
            h0_generators: vec![r2.clone()],
            k: 2,
            f: vec![r, s, sr2],
            i2: vec![1, 2],
            phi: vec![Permutation::identity(6), r2],
        })
        .unwrap()
    }

    /// Instance over the block-imprimitive witness (case-2 steering).
    fn wreath_c2_instance() -> Instance {
        let a = PermutationGroup::wreath_action(
            &PermutationGroup::cyclic(2),
            &PermutationGroup::cyclic(3),
        )
        .unwrap();
        let c2 = PermutationGroup::cyclic(2);
        let f = c2.generators()[0].clone();
        Instance::prepare(LConditionData {
            a_group: a,
            h_group: c2,
            h0_generators: vec![],
            k: 2,
            f: vec![f],
            i2: vec![0],
            phi: vec![Permutation::identity(2)],
        })
        .unwrap()
    }

    #[test]
    fn c2_instance_validates() {
        let inst = s5_c2_instance();
        let report = validate(&inst);
        assert!(report.all_passed, "{:?}", report.entries);
        assert_eq!(report.branch, Some(Branch::A));
    }

    #[test]
    fn s3_instance_validates_with_honest_size_failure() {
        let inst = s5_s3_instance();
        let report = validate(&inst);
        assert!(report.essential_passed, "{:?}", report.entries);
        assert_eq!(report.branch, Some(Branch::A));
        // |H/H0| = 2 < |H0| = 3: reported, informational
        let size = report
            .entries
            .iter()
            .find(|e| e.name == "quotient_at_least_h0")
            .unwrap();
        assert!(!size.passed);
    }

    #[test]
    fn c2x4_branch_b_validates() {
        let inst = s5_c2x4_instance();
        let report = validate(&inst);
        assert!(report.essential_passed, "{:?}", report.entries);
        assert_eq!(report.branch, Some(Branch::B));
        assert!(
            report
                .entries
                .iter()
                .find(|e| e.name == "branch_b_representatives_order_k")
                .unwrap()
                .passed
        );
    }

    #[test]
    fn c4_instance_fails_honestly() {
        // H = C4, H0 = {e, r^2} = H^2: the generating coset has no
        // order-2 representative, and one representative cannot cover H0.
        let c4 = PermutationGroup::cyclic(4);
        let r = c4.generators()[0].clone();
        let r2 = r.compose(&r).unwrap();
        let inst = Instance::prepare(LConditionData {
            a_group: PermutationGroup::symmetric(5),
            h_group: c4,
            h0_generators: vec![r2.clone()],
            k: 2,
            f: vec![r],
            i2: vec![0],
            phi: vec![r2],
        })
        .unwrap();
        let report = validate(&inst);
        assert_eq!(report.branch, Some(Branch::B));
        assert!(!report.all_passed);
        let order_entry = report
            .entries
            .iter()
            .find(|e| e.name == "branch_b_representatives_order_k")
            .unwrap();
        assert!(!order_entry.passed);
        assert!(order_entry
            .detail
            .as_ref()
            .unwrap()
            .contains("does not contain"));
        assert!(
            !report
                .entries
                .iter()
                .find(|e| e.name == "phi_surjective_onto_h0")
                .unwrap()
                .passed
        );
    }

    #[test]
    fn build_s_matches_the_tail_formula() {
        let inst = s5_s3_instance();
        let s = inst.build_s().unwrap();
        assert_eq!(s.len(), 2 + 3);
        let base = inst.base();
        let t_idx = base
            .index_of(&Permutation::from_cycles(3, &[&[0, 1]]).unwrap())
            .unwrap();
        for (pos, i) in (2..5).zip(0..3) {
            let q = &s[pos];
            assert!(q.top.is_identity());
            assert_eq!(q.tail[0], t_idx);
            assert_eq!(q.tail[4], inst.phi[&i]);
            assert!(q.tail[1..4].iter().all(|&t| t == base.identity()));
        }
    }

    #[test]
    fn build_s_splits_tail_entries_by_index_set() {
        // representatives outside i2 get a bare first coordinate; those
        // in i2 also carry their tail value at the last coordinate
        let inst = s5_c2x4_instance();
        let s = inst.build_s().unwrap();
        let base = inst.base();
        let n = inst.n();
        let q0 = &s[2]; // index 0 is in I1
        assert_eq!(q0.tail[0], inst.f[0]);
        assert_eq!(q0.tail[n], base.identity());
        let q2 = &s[4]; // index 2 is in I2 with a nontrivial tail value
        assert_eq!(q2.tail[0], inst.f[2]);
        assert_eq!(q2.tail[n], inst.phi[&2]);
        assert_ne!(inst.phi[&2], base.identity());
    }

    #[test]
    fn build_s_with_no_representatives() {
        let c2 = PermutationGroup::cyclic(2);
        let inst = Instance::prepare(LConditionData {
            a_group: PermutationGroup::symmetric(5),
            h_group: c2,
            h0_generators: vec![],
            k: 2,
            f: vec![],
            i2: vec![],
            phi: vec![],
        })
        .unwrap();
        let s = inst.build_s().unwrap();
        assert_eq!(s.len(), 2);
        assert_eq!(inst.closure_order(&s, 10_000).unwrap(), 120);
    }

    #[test]
    fn t_element_single_letter() {
        let inst = s5_s3_instance();
        let t = inst.t_element(1, &[(0, false)]).unwrap();
        let base = inst.base();
        let f = base
            .index_of(&Permutation::from_cycles(3, &[&[0, 1]]).unwrap())
            .unwrap();
        let e = base.identity();
        assert!(t.top.is_identity());
        assert_eq!(t.tail, vec![base.inv(f), f, e, e, e]);
    }

    #[test]
    fn t_element_empty_word() {
        let inst = s5_s3_instance();
        assert_eq!(inst.t_element(1, &[]).unwrap(), inst.wreath.identity());
    }

    #[test]
    fn u_elements_on_the_standard_instance() {
        let inst = s5_s3_instance();
        let base = inst.base();
        let f = base
            .index_of(&Permutation::from_cycles(3, &[&[0, 1]]).unwrap())
            .unwrap();
        let e = base.identity();
        let (u2, u3) = inst.u_elements(&[(0, false)]).unwrap();
        // n = 4: pairs at {2, 4} and {3, 4}
        assert_eq!(u3.tail, vec![e, e, e, base.inv(f), f]);
        assert_eq!(u2.tail, vec![e, e, base.inv(f), e, f]);
    }

    #[test]
    fn u_elements_empty_word() {
        let inst = s5_c2_instance();
        let (u2, u3) = inst.u_elements(&[]).unwrap();
        assert_eq!(u2, inst.wreath.identity());
        assert_eq!(u3, inst.wreath.identity());
    }

    #[test]
    fn u_elements_case2() {
        let inst = wreath_c2_instance();
        assert_eq!(inst.steering.case, SteeringCase::Case2);
        let (u_low, u_high) = inst.u_elements(&[(0, false)]).unwrap();
        let n = inst.n();
        let g = inst.f[0];
        assert_eq!(u_high.tail[n - 1], g);
        assert_eq!(u_high.tail[n], inst.base().inv(g));
        assert_eq!(u_low.tail[n - 2], g);
        assert_eq!(u_low.tail[n], inst.base().inv(g));
    }

    #[test]
    fn random_t_and_u_words() {
        let inst = s5_s3_instance();
        let t_report = run_lemma(&inst, LemmaKind::T, 100, 7, 1_000_000).unwrap();
        assert!(t_report.all_passed, "{:?}", t_report.first_failure);
        let u_report = run_lemma(&inst, LemmaKind::U, 100, 7, 1_000_000).unwrap();
        assert!(u_report.all_passed, "{:?}", u_report.first_failure);
    }

    #[test]
    fn random_words_on_case2_witness() {
        let inst = wreath_c2_instance();
        let report = run_lemma(&inst, LemmaKind::U, 50, 3, 1_000_000).unwrap();
        assert!(report.all_passed, "{:?}", report.first_failure);
    }

    #[test]
    fn case2_witness_with_nonabelian_tails() {
        // the steering conjugations and tail orientations must hold with
        // noncommuting base entries too
        let a = PermutationGroup::wreath_action(
            &PermutationGroup::cyclic(2),
            &PermutationGroup::cyclic(3),
        )
        .unwrap();
        let s3 = PermutationGroup::symmetric(3);
        let t = Permutation::from_cycles(3, &[&[0, 1]]).unwrap();
        let inst = Instance::prepare(LConditionData {
            a_group: a,
            h_group: s3,
            h0_generators: vec![Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap()],
            k: 2,
            f: vec![t.clone(), t.clone(), t],
            i2: vec![0, 1, 2],
            phi: vec![
                Permutation::identity(3),
                Permutation::from_cycles(3, &[&[0, 1, 2]]).unwrap(),
                Permutation::from_cycles(3, &[&[0, 2, 1]]).unwrap(),
            ],
        })
        .unwrap();
        assert_eq!(inst.steering.case, SteeringCase::Case2);
        for (kind, trials) in [
            (LemmaKind::T, 60),
            (LemmaKind::U, 60),
            (LemmaKind::Commutator, 60),
        ] {
            let report = run_lemma(&inst, kind, trials, 21, 1_000_000).unwrap();
            assert!(
                report.all_passed,
                "{}: {:?}",
                kind.name(),
                report.first_failure
            );
        }
    }

    #[test]
    fn commutator_of_equal_elements_is_trivial() {
        let inst = s5_s3_instance();
        let c = inst.commutator_tail(3, 3).unwrap();
        assert_eq!(c, inst.wreath.identity());
    }

    #[test]
    fn commutator_of_two_transpositions() {
        let inst = s5_s3_instance();
        let base = inst.base();
        let h1 = base
            .index_of(&Permutation::from_cycles(3, &[&[0, 1]]).unwrap())
            .unwrap();
        let h2 = base
            .index_of(&Permutation::from_cycles(3, &[&[1, 2]]).unwrap())
            .unwrap();
        let c = inst.commutator_tail(h1, h2).unwrap();
        let expected = base.mul(base.mul(base.mul(h1, h2), base.inv(h1)), base.inv(h2));
        assert_ne!(expected, base.identity());
        assert_eq!(c, inst.wreath.single_entry_tail(4, expected).unwrap());
    }

    #[test]
    fn random_commutators() {
        let inst = s5_s3_instance();
        let report = run_lemma(&inst, LemmaKind::Commutator, 100, 11, 1_000_000).unwrap();
        assert!(report.all_passed, "{:?}", report.first_failure);
    }

    #[test]
    fn power_of_identity_is_identity() {
        let inst = s5_c2x4_instance();
        let e = inst.base().identity();
        let p = inst.power_tail(e).unwrap();
        assert_eq!(p, inst.wreath.identity());
    }

    #[test]
    fn power_of_order_four_generator() {
        let inst = s5_c2x4_instance();
        let base = inst.base();
        let r = base
            .index_of(&Permutation::from_cycles(6, &[&[2, 3, 4, 5]]).unwrap())
            .unwrap();
        let p = inst.power_tail(r).unwrap();
        let r2 = base.pow(r, 2);
        assert_ne!(r2, base.identity());
        assert_eq!(p, inst.wreath.single_entry_tail(inst.n(), r2).unwrap());
    }

    #[test]
    fn random_powers() {
        let inst = s5_c2x4_instance();
        let report = run_lemma(&inst, LemmaKind::Power, 50, 13, 1_000_000).unwrap();
        assert!(report.all_passed, "{:?}", report.first_failure);
        assert!(report.notes.iter().any(|n| n.contains("p vs k")));
    }

    #[test]
    fn closure_of_s_is_the_full_wreath_product() {
        let inst = s5_c2_instance();
        let s = inst.build_s().unwrap();
        assert_eq!(inst.closure_order(&s, 10_000).unwrap(), 3840);
        let report = run_lemma(&inst, LemmaKind::Closure, 1, 0, 10_000).unwrap();
        assert!(report.all_passed);
    }

    #[test]
    fn closure_over_the_block_imprimitive_witness() {
        // same group as wreath_c2_instance but generated minimally (the
        // block swap conjugates one rotation into the other), so that
        // build_s accepts the generators; |A| * |H|^degree = 18 * 2^6
        let a = PermutationGroup::new(
            6,
            vec![
                Permutation::from_images(vec![3, 4, 5, 0, 1, 2]).unwrap(),
                Permutation::from_cycles(6, &[&[0, 1, 2]]).unwrap(),
            ],
        )
        .unwrap();
        let c2 = PermutationGroup::cyclic(2);
        let inst = Instance::prepare(LConditionData {
            a_group: a,
            h_group: c2.clone(),
            h0_generators: vec![],
            k: 2,
            f: vec![c2.generators()[0].clone()],
            i2: vec![0],
            phi: vec![Permutation::identity(2)],
        })
        .unwrap();
        let s = inst.build_s().unwrap();
        assert_eq!(inst.full_order(), 18 * 64);
        assert_eq!(inst.closure_order(&s, 10_000).unwrap(), 18 * 64);
    }

    #[test]
    #[ignore = "walks 933120 elements; run with -- --ignored"]
    fn closure_of_s_fills_the_s3_wreath_product() {
        let inst = s5_s3_instance();
        let s = inst.build_s().unwrap();
        assert_eq!(inst.full_order(), 120 * 6u128.pow(5));
        assert_eq!(inst.closure_order(&s, 1_000_000).unwrap(), 933_120);
    }

    #[test]
    fn build_s_rejects_redundant_generators() {
        // the stock wreath action carries one generator per block, which
        // is not minimal
        let a = PermutationGroup::wreath_action(
            &PermutationGroup::cyclic(2),
            &PermutationGroup::cyclic(3),
        )
        .unwrap();
        let c2 = PermutationGroup::cyclic(2);
        let inst = Instance::prepare(LConditionData {
            a_group: a,
            h_group: c2.clone(),
            h0_generators: vec![],
            k: 2,
            f: vec![c2.generators()[0].clone()],
            i2: vec![0],
            phi: vec![Permutation::identity(2)],
        })
        .unwrap();
        assert!(matches!(
            inst.build_s(),
            Err(ConstructError::InvalidData(_))
        ));
    }

    #[test]
    fn s_is_irredundant_on_the_c2_instance() {
        let inst = s5_c2_instance();
        let s = inst.build_s().unwrap();
        assert!(inst.check_irredundant(&s, 10_000).unwrap());
    }

    #[test]
    fn duplicated_generator_is_redundant() {
        let inst = s5_c2_instance();
        let mut s = inst.build_s().unwrap();
        s.push(s[0].clone());
        assert!(!inst.check_irredundant(&s, 10_000).unwrap());
    }

    #[test]
    fn power_of_generator_is_redundant() {
        // {q, q^2} inside a cyclic tail group of odd order
        let c3 = PermutationGroup::cyclic(3);
        let f = c3.generators()[0].clone();
        let inst = Instance::prepare(LConditionData {
            a_group: PermutationGroup::symmetric(5),
            h_group: c3,
            h0_generators: vec![],
            k: 2,
            f: vec![f],
            i2: vec![0],
            phi: vec![Permutation::identity(3)],
        })
        .unwrap();
        let q = inst.q[0].clone();
        let q2 = inst.wreath.product(&q, &q).unwrap();
        assert!(!inst.check_irredundant(&[q, q2], 10_000).unwrap());
    }

    #[test]
    fn replay_outputs_lie_in_the_closure_of_s() {
        let inst = s5_c2_instance();
        let s = inst.build_s().unwrap();
        let closure = inst.wreath.closure(&s, 10_000).unwrap();
        let t = inst.t_element(1, &[(0, false)]).unwrap();
        assert!(closure.contains(&t));
        let (u2, u3) = inst.u_elements(&[(0, false)]).unwrap();
        assert!(closure.contains(&u2));
        assert!(closure.contains(&u3));
        let c = inst.commutator_tail(1, 0).unwrap();
        assert!(closure.contains(&c));
    }

    #[test]
    fn closure_respects_the_cap() {
        let inst = s5_c2_instance();
        let err = run_lemma(&inst, LemmaKind::Closure, 1, 0, 100).unwrap_err();
        assert!(matches!(
            err,
            ConstructError::Wreath(WreathError::ClosureTooLarge { cap: 100 })
        ));
    }

    #[test]
    fn instance_data_round_trips_as_json() {
        let inst = s5_c2x4_instance();
        let json = serde_json::to_string(&inst.data).unwrap();
        let parsed: LConditionData = serde_json::from_str(&json).unwrap();
        let again = Instance::prepare(parsed).unwrap();
        assert_eq!(again.f, inst.f);
        assert_eq!(again.phi, inst.phi);
    }
}
