//! Deciding the PS condition on finite permutation groups and locating
//! the steering elements used by the generating-set constructions.
//!
//! A PS witness consists of disjoint point sets `X1`, `X2` (sizes at
//! least 2 and 3) such that the pointwise stabilizer of the complement
//! of each set acts transitively on it, plus, when `|X1| = 2`, a group
//! element mapping `X1` partly but not wholly into `X2`. Stabilizers are
//! always taken as full pointwise stabilizers: any subgroup that works
//! is contained in one, so the restriction loses no witnesses.
//!
//! Witnesses carry a labeling placing `X1` as an initial segment and
//! `X2` as a final segment of `0..degree`; the steering search refines
//! that labeling so the steering element hits the exact points the
//! constructions expect.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::perm::{orbits_on, pointwise_stabilizer, PermError, Permutation, PermutationGroup};

/// Degrees above this make the 3^degree subset search unreasonable.
pub const MAX_SEARCH_DEGREE: usize = 12;

/// The first PS criterion that ruled every candidate out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FailedCriterion {
    NotTransitive,
    NoAdmissibleSubsets,
    StabilizerNotTransitiveOnX1,
    StabilizerNotTransitiveOnX2,
    NoSpecialElement,
}

impl std::fmt::Display for FailedCriterion {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let msg = match self {
            FailedCriterion::NotTransitive => "group is not transitive",
            FailedCriterion::NoAdmissibleSubsets => {
                "no disjoint subsets of required sizes (|X1| >= 2, |X2| >= 3)"
            }
            FailedCriterion::StabilizerNotTransitiveOnX1 => {
                "no candidate X1 whose complement stabilizer is transitive on X1"
            }
            FailedCriterion::StabilizerNotTransitiveOnX2 => {
                "no candidate X2 whose complement stabilizer is transitive on X2"
            }
            FailedCriterion::NoSpecialElement => {
                "|X1| = 2 but no element maps X1 into X2 without containment"
            }
        };
        f.write_str(msg)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PsError {
    #[error("PS condition not satisfied: {0}")]
    NotSatisfied(FailedCriterion),
    #[error("degree {degree} exceeds the subset search bound {bound}")]
    DegreeTooLarge { degree: usize, bound: usize },
    #[error("no steering element exists: {0}")]
    SteeringNotFound(String),
    #[error(transparent)]
    Perm(#[from] PermError),
}

/// A PS certificate for a permutation group.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PsWitness {
    pub x1: Vec<usize>,
    pub x2: Vec<usize>,
    pub a1_order: usize,
    pub a2_order: usize,
    pub a_special: Option<Permutation>,
    /// Maps labels to points: `labeling.apply(i)` is the point carrying
    /// label `i`. Labels `0..|x1|` cover `x1`, the top `|x2|` labels
    /// cover `x2`.
    pub labeling: Permutation,
}

/// Serialized form of a witness.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PsWitnessFile {
    pub x1: Vec<usize>,
    pub x2: Vec<usize>,
    pub labeling: Vec<usize>,
    pub a_special: Option<Vec<usize>>,
}

impl PsWitness {
    pub fn to_file(&self) -> PsWitnessFile {
        PsWitnessFile {
            x1: self.x1.clone(),
            x2: self.x2.clone(),
            labeling: self.labeling.images().to_vec(),
            a_special: self.a_special.as_ref().map(|p| p.images().to_vec()),
        }
    }

    /// Rebuilds a witness from its file form, recomputing the stabilizer
    /// orders from the group.
    pub fn from_file(group: &PermutationGroup, file: &PsWitnessFile) -> Result<Self, PsError> {
        let elements = group.enumerate()?;
        let degree = group.degree();
        let a_special = file
            .a_special
            .as_ref()
            .map(|imgs| Permutation::from_images(imgs.clone()))
            .transpose()?;
        let labeling = Permutation::from_images(file.labeling.clone())?;
        let a1 = pointwise_stabilizer(&elements, &complement(degree, &file.x1));
        let a2 = pointwise_stabilizer(&elements, &complement(degree, &file.x2));
        Ok(PsWitness {
            x1: file.x1.clone(),
            x2: file.x2.clone(),
            a1_order: a1.len(),
            a2_order: a2.len(),
            a_special,
            labeling,
        })
    }
}

fn complement(degree: usize, set: &[usize]) -> Vec<usize> {
    (0..degree).filter(|x| !set.contains(x)).collect()
}

/// Labeling with `x1` ascending on the initial labels, the untouched
/// points ascending in the middle, and `x2` ascending on the final labels.
fn canonical_labeling(degree: usize, x1: &[usize], x2: &[usize]) -> Permutation {
    let mut images = Vec::with_capacity(degree);
    images.extend_from_slice(x1);
    images.extend(complement(degree, &[x1, x2].concat()));
    images.extend_from_slice(x2);
    Permutation::from_images(images).expect("x1, x2 disjoint subsets of 0..degree")
}

fn special_element_for(
    elements: &[Permutation],
    x1: &[usize],
    x2: &[usize],
) -> Option<Permutation> {
    elements
        .iter()
        .find(|g| {
            let hits = x1.iter().filter(|&&x| x2.contains(&g.apply(x))).count();
            hits > 0 && hits < x1.len()
        })
        .cloned()
}

/// Exhaustive PS search. Candidate subset pairs are enumerated as base-3
/// assignments over the points (point 0 most significant, digit order
/// neither < X1 < X2) and the first valid pair wins, so results are
/// reproducible. On failure, reports the deepest criterion any candidate
/// reached.
pub fn find_witness(group: &PermutationGroup) -> Result<PsWitness, PsError> {
    let degree = group.degree();
    if degree > MAX_SEARCH_DEGREE {
        return Err(PsError::DegreeTooLarge {
            degree,
            bound: MAX_SEARCH_DEGREE,
        });
    }
    let elements = group.enumerate()?;
    let all: Vec<usize> = (0..degree).collect();
    if !orbits_on(&elements, &all)?.transitive {
        return Err(PsError::NotSatisfied(FailedCriterion::NotTransitive));
    }

    // progress: 1 = sizes ok, 2 = A1 transitive, 3 = A2 transitive
    let mut progress = 0usize;
    let total = 3usize.pow(degree as u32);
    for code in 0..total {
        let mut x1 = Vec::new();
        let mut x2 = Vec::new();
        let mut c = code;
        let mut place = total / 3;
        for point in 0..degree {
            match c / place {
                1 => x1.push(point),
                2 => x2.push(point),
                _ => {}
            }
            c %= place;
            place = std::cmp::max(place / 3, 1);
        }
        if x1.len() < 2 || x2.len() < 3 {
            continue;
        }
        progress = progress.max(1);
        let a1 = pointwise_stabilizer(&elements, &complement(degree, &x1));
        if !orbits_on(&a1, &x1)?.transitive {
            continue;
        }
        progress = progress.max(2);
        let a2 = pointwise_stabilizer(&elements, &complement(degree, &x2));
        if !orbits_on(&a2, &x2)?.transitive {
            continue;
        }
        progress = progress.max(3);
        let a_special = if x1.len() == 2 {
            match special_element_for(&elements, &x1, &x2) {
                Some(a) => Some(a),
                None => continue,
            }
        } else {
            None
        };
        let labeling = canonical_labeling(degree, &x1, &x2);
        return Ok(PsWitness {
            a1_order: a1.len(),
            a2_order: a2.len(),
            x1,
            x2,
            a_special,
            labeling,
        });
    }
    Err(PsError::NotSatisfied(match progress {
        0 => FailedCriterion::NoAdmissibleSubsets,
        1 => FailedCriterion::StabilizerNotTransitiveOnX1,
        2 => FailedCriterion::StabilizerNotTransitiveOnX2,
        _ => FailedCriterion::NoSpecialElement,
    }))
}

/// One line of a verification report.
#[derive(Debug, Clone, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub passed: bool,
    pub detail: Option<String>,
}

impl CheckEntry {
    pub fn new(name: &str, passed: bool) -> Self {
        CheckEntry {
            name: name.to_string(),
            passed,
            detail: None,
        }
    }

    pub fn with_detail(name: &str, passed: bool, detail: String) -> Self {
        CheckEntry {
            name: name.to_string(),
            passed,
            detail: Some(detail),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub entries: Vec<CheckEntry>,
    pub all_passed: bool,
}

impl CheckReport {
    pub fn from_entries(entries: Vec<CheckEntry>) -> Self {
        let all_passed = entries.iter().all(|e| e.passed);
        CheckReport {
            entries,
            all_passed,
        }
    }

    pub fn entry(&self, name: &str) -> Option<&CheckEntry> {
        self.entries.iter().find(|e| e.name == name)
    }
}

/// Re-checks every PS criterion for a witness, independently of how the
/// witness was produced. Failures show up as report entries, never as
/// errors.
pub fn verify_witness(group: &PermutationGroup, w: &PsWitness) -> CheckReport {
    let degree = group.degree();
    let mut entries = Vec::new();
    let elements = match group.enumerate() {
        Ok(e) => e,
        Err(err) => {
            entries.push(CheckEntry::with_detail(
                "group_enumerable",
                false,
                err.to_string(),
            ));
            return CheckReport::from_entries(entries);
        }
    };

    let all: Vec<usize> = (0..degree).collect();
    let transitive = orbits_on(&elements, &all)
        .map(|d| d.transitive)
        .unwrap_or(false);
    entries.push(CheckEntry::new("group_transitive", transitive));

    let disjoint = w.x1.iter().all(|x| !w.x2.contains(x));
    entries.push(CheckEntry::new("x1_x2_disjoint", disjoint));
    entries.push(CheckEntry::new("x1_size_at_least_2", w.x1.len() >= 2));
    entries.push(CheckEntry::new("x2_size_at_least_3", w.x2.len() >= 3));

    let in_range = w.x1.iter().chain(w.x2.iter()).all(|&x| x < degree);
    let labeling_ok = in_range && w.labeling.degree() == degree && {
        let l1 = w.x1.len();
        let l2 = degree - w.x2.len();
        (0..l1).all(|i| w.x1.contains(&w.labeling.apply(i)))
            && (l2..degree).all(|i| w.x2.contains(&w.labeling.apply(i)))
    };
    entries.push(CheckEntry::new("labeling_segments_match", labeling_ok));

    if in_range && disjoint {
        let a1 = pointwise_stabilizer(&elements, &complement(degree, &w.x1));
        let a2 = pointwise_stabilizer(&elements, &complement(degree, &w.x2));
        let a1_trans = orbits_on(&a1, &w.x1).map(|d| d.transitive).unwrap_or(false);
        let a2_trans = orbits_on(&a2, &w.x2).map(|d| d.transitive).unwrap_or(false);
        entries.push(CheckEntry::new("a1_transitive_on_x1", a1_trans));
        entries.push(CheckEntry::new("a2_transitive_on_x2", a2_trans));
        let fixes = |els: &[Permutation], outside: &[usize]| {
            els.iter().all(|g| outside.iter().all(|&x| g.apply(x) == x))
        };
        entries.push(CheckEntry::new(
            "a1_fixes_complement",
            fixes(&a1, &complement(degree, &w.x1)),
        ));
        entries.push(CheckEntry::new(
            "a2_fixes_complement",
            fixes(&a2, &complement(degree, &w.x2)),
        ));
        entries.push(CheckEntry::with_detail(
            "a1_order_matches",
            a1.len() == w.a1_order,
            format!("recomputed {} vs stored {}", a1.len(), w.a1_order),
        ));
        entries.push(CheckEntry::with_detail(
            "a2_order_matches",
            a2.len() == w.a2_order,
            format!("recomputed {} vs stored {}", a2.len(), w.a2_order),
        ));
    }

    let needs_special = w.x1.len() == 2;
    entries.push(CheckEntry::new(
        "special_element_present_iff_needed",
        needs_special == w.a_special.is_some(),
    ));
    if let Some(a) = &w.a_special {
        let in_group = elements.binary_search(a).is_ok();
        let hits = w.x1.iter().filter(|&&x| w.x2.contains(&a.apply(x))).count();
        entries.push(CheckEntry::new(
            "special_element_valid",
            in_group && hits > 0 && hits < w.x1.len(),
        ));
    }

    CheckReport::from_entries(entries)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SteeringCase {
    /// Some element maps `X1` partly into `X2`; the steering element `d`
    /// satisfies `d(0) ∉ X2` and `d(1) = n` under the witness labeling.
    Case1,
    /// Every element meeting `X2` maps `X1` wholly into it; `d` sends
    /// the first three `X1` labels to `n, n-1, n-2`.
    Case2,
}

/// A steering element in label coordinates, together with the original
/// `X2` points hit in case 2.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SteeringElement {
    pub case: SteeringCase,
    pub d: Permutation,
    pub targets: Option<[usize; 3]>,
}

/// Finds a steering element for a verified witness, refining the witness
/// labeling so the element's images land on the labels the constructions
/// use. Returns the updated witness with the steering element.
///
/// Case 1 takes the first element (in canonical order) mapping `X1`
/// partly into `X2`; case 2 is attempted only when no such element
/// exists anywhere and searches for an element carrying three `X1`
/// points into `X2`, exploiting the freedom to reorder `X2` labels.
pub fn find_steering(
    group: &PermutationGroup,
    witness: &PsWitness,
) -> Result<(PsWitness, SteeringElement), PsError> {
    let degree = group.degree();
    let elements = group.enumerate()?;
    let x1 = &witness.x1;
    let x2 = &witness.x2;

    let case1 = elements.iter().find(|g| {
        let hits = x1.iter().filter(|&&x| x2.contains(&g.apply(x))).count();
        hits > 0 && hits < x1.len()
    });
    if let Some(g) = case1 {
        let x0 = *x1.iter().find(|&&x| !x2.contains(&g.apply(x))).unwrap();
        let xn = *x1.iter().find(|&&x| x2.contains(&g.apply(x))).unwrap();
        let mut x1_order = vec![x0, xn];
        x1_order.extend(x1.iter().copied().filter(|&x| x != x0 && x != xn));
        let target = g.apply(xn);
        let mut x2_order: Vec<usize> = x2.iter().copied().filter(|&x| x != target).collect();
        x2_order.push(target);
        let labeling = relabeling(degree, &x1_order, &x2_order);
        let d = g.conjugated_by(&labeling)?;
        debug_assert_eq!(d.apply(1), degree - 1);
        let updated = PsWitness {
            labeling,
            ..witness.clone()
        };
        return Ok((
            updated,
            SteeringElement {
                case: SteeringCase::Case1,
                d,
                targets: None,
            },
        ));
    }

    if x1.len() >= 3 {
        let case2 = elements
            .iter()
            .find(|g| x1.iter().filter(|&&x| x2.contains(&g.apply(x))).count() >= 3);
        if let Some(g) = case2 {
            let moved: Vec<usize> = x1
                .iter()
                .copied()
                .filter(|&x| x2.contains(&g.apply(x)))
                .take(3)
                .collect();
            let mut x1_order = moved.clone();
            x1_order.extend(x1.iter().copied().filter(|x| !moved.contains(x)));
            let targets = [g.apply(moved[0]), g.apply(moved[1]), g.apply(moved[2])];
            let mut x2_order: Vec<usize> = x2
                .iter()
                .copied()
                .filter(|x| !targets.contains(x))
                .collect();
            // labels n-2, n-1, n in ascending label order
            x2_order.push(targets[2]);
            x2_order.push(targets[1]);
            x2_order.push(targets[0]);
            let labeling = relabeling(degree, &x1_order, &x2_order);
            let d = g.conjugated_by(&labeling)?;
            debug_assert_eq!(d.apply(0), degree - 1);
            let updated = PsWitness {
                labeling,
                ..witness.clone()
            };
            return Ok((
                updated,
                SteeringElement {
                    case: SteeringCase::Case2,
                    d,
                    targets: Some(targets),
                },
            ));
        }
    }

    Err(PsError::SteeringNotFound(format!(
        "no element of the {}-element group maps X1 = {:?} across or into X2 = {:?}",
        elements.len(),
        x1,
        x2
    )))
}

/// Labeling from explicit orderings of `x1` and `x2`.
fn relabeling(degree: usize, x1_order: &[usize], x2_order: &[usize]) -> Permutation {
    let mut images = Vec::with_capacity(degree);
    images.extend_from_slice(x1_order);
    let used: Vec<usize> = [x1_order, x2_order].concat();
    images.extend((0..degree).filter(|x| !used.contains(x)));
    images.extend_from_slice(x2_order);
    Permutation::from_images(images).expect("orderings partition a subset of the points")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dihedral5() -> PermutationGroup {
        PermutationGroup::new(
            5,
            vec![
                Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap(),
                Permutation::from_images(vec![0, 4, 3, 2, 1]).unwrap(),
            ],
        )
        .unwrap()
    }

    fn alternating5() -> PermutationGroup {
        PermutationGroup::new(
            5,
            vec![
                Permutation::from_cycles(5, &[&[0, 1, 2]]).unwrap(),
                Permutation::from_cycles(5, &[&[0, 1, 2, 3, 4]]).unwrap(),
            ],
        )
        .unwrap()
    }

    #[test]
    fn s5_witness_is_the_expected_one() {
        let s5 = PermutationGroup::symmetric(5);
        let w = find_witness(&s5).unwrap();
        assert_eq!(w.x1, vec![0, 1]);
        assert_eq!(w.x2, vec![2, 3, 4]);
        assert_eq!(w.a1_order, 2);
        assert_eq!(w.a2_order, 6);
        assert_eq!(w.labeling, Permutation::identity(5));
        // first special element in canonical order is (1 2)
        assert_eq!(
            w.a_special,
            Some(Permutation::from_cycles(5, &[&[1, 2]]).unwrap())
        );
    }

    #[test]
    fn s4_fails_on_sizes() {
        let err = find_witness(&PermutationGroup::symmetric(4)).unwrap_err();
        assert_eq!(
            err,
            PsError::NotSatisfied(FailedCriterion::NoAdmissibleSubsets)
        );
    }

    #[test]
    fn a5_c5_d5_fail_on_stabilizer_transitivity() {
        for group in [alternating5(), PermutationGroup::cyclic(5), dihedral5()] {
            let err = find_witness(&group).unwrap_err();
            assert_eq!(
                err,
                PsError::NotSatisfied(FailedCriterion::StabilizerNotTransitiveOnX1),
            );
        }
    }

    #[test]
    fn intransitive_group_fails_on_transitivity() {
        let g = PermutationGroup::new(6, vec![Permutation::from_cycles(6, &[&[0, 1, 2]]).unwrap()])
            .unwrap();
        assert_eq!(
            find_witness(&g).unwrap_err(),
            PsError::NotSatisfied(FailedCriterion::NotTransitive)
        );
    }

    #[test]
    fn degree_bound_is_enforced() {
        let g = PermutationGroup::symmetric(13);
        assert!(matches!(
            find_witness(&g).unwrap_err(),
            PsError::DegreeTooLarge { degree: 13, .. }
        ));
    }

    #[test]
    fn found_witnesses_verify() {
        for group in [
            PermutationGroup::symmetric(5),
            PermutationGroup::symmetric(6),
            PermutationGroup::symmetric(7),
        ] {
            let w = find_witness(&group).unwrap();
            assert!(verify_witness(&group, &w).all_passed);
        }
    }

    #[test]
    fn wreath_witness_is_the_block_pair() {
        let w_group = PermutationGroup::wreath_action(
            &PermutationGroup::cyclic(2),
            &PermutationGroup::cyclic(3),
        )
        .unwrap();
        let w = find_witness(&w_group).unwrap();
        assert_eq!(w.x1, vec![0, 1, 2]);
        assert_eq!(w.x2, vec![3, 4, 5]);
        assert!(w.a_special.is_none());
        assert!(verify_witness(&w_group, &w).all_passed);
    }

    #[test]
    fn bad_witness_fails_disjointness() {
        let s5 = PermutationGroup::symmetric(5);
        let bad = PsWitness {
            x1: vec![0, 1, 2],
            x2: vec![0, 1, 2],
            a1_order: 1,
            a2_order: 1,
            a_special: None,
            labeling: Permutation::identity(5),
        };
        let report = verify_witness(&s5, &bad);
        assert!(!report.all_passed);
        assert!(!report.entry("x1_x2_disjoint").unwrap().passed);
    }

    #[test]
    fn s5_steering_is_case1() {
        let s5 = PermutationGroup::symmetric(5);
        let w = find_witness(&s5).unwrap();
        let (updated, steer) = find_steering(&s5, &w).unwrap();
        assert_eq!(steer.case, SteeringCase::Case1);
        // relabeled d is the transposition (1 4): d(0) = 0 is outside X2
        // labels and d(1) = 4 = n
        assert_eq!(steer.d, Permutation::from_cycles(5, &[&[1, 4]]).unwrap());
        assert_eq!(
            updated.labeling,
            Permutation::from_images(vec![0, 1, 3, 4, 2]).unwrap()
        );
    }

    #[test]
    fn wreath_steering_is_case2_block_swap() {
        let group = PermutationGroup::wreath_action(
            &PermutationGroup::cyclic(2),
            &PermutationGroup::cyclic(3),
        )
        .unwrap();
        let w = find_witness(&group).unwrap();
        let (updated, steer) = find_steering(&group, &w).unwrap();
        assert_eq!(steer.case, SteeringCase::Case2);
        assert_eq!(steer.targets, Some([3, 4, 5]));
        assert_eq!(
            updated.labeling,
            Permutation::from_images(vec![0, 1, 2, 5, 4, 3]).unwrap()
        );
        assert_eq!(
            steer.d,
            Permutation::from_images(vec![5, 4, 3, 2, 1, 0]).unwrap()
        );
        let n = group.degree() - 1;
        assert_eq!(steer.d.apply(0), n);
        assert_eq!(steer.d.apply(1), n - 1);
        assert_eq!(steer.d.apply(2), n - 2);
    }

    #[test]
    fn steering_not_found_across_orbits() {
        // X1 and X2 lie in different orbits of an intransitive group.
        let group = PermutationGroup::new(
            5,
            vec![
                Permutation::from_cycles(5, &[&[0, 1]]).unwrap(),
                Permutation::from_cycles(5, &[&[2, 3, 4]]).unwrap(),
                Permutation::from_cycles(5, &[&[2, 3]]).unwrap(),
            ],
        )
        .unwrap();
        let mock = PsWitness {
            x1: vec![0, 1],
            x2: vec![2, 3, 4],
            a1_order: 2,
            a2_order: 6,
            a_special: None,
            labeling: Permutation::identity(5),
        };
        assert!(matches!(
            find_steering(&group, &mock).unwrap_err(),
            PsError::SteeringNotFound(_)
        ));
    }

    #[test]
    fn wreath_families_satisfy_ps() {
        // transitive wreath actions with |Y1| >= 2, |Y2| >= 3, and the
        // triple wreath with all block sizes >= 2
        let c2 = PermutationGroup::cyclic(2);
        let c3 = PermutationGroup::cyclic(3);
        let s3 = PermutationGroup::symmetric(3);
        let groups = [
            PermutationGroup::wreath_action(&c2, &c3).unwrap(),
            PermutationGroup::wreath_action(&c2, &s3).unwrap(),
            PermutationGroup::wreath_action(&s3, &c3).unwrap(),
            PermutationGroup::wreath_action(
                &PermutationGroup::wreath_action(&c2, &c2).unwrap(),
                &c2,
            )
            .unwrap(),
        ];
        for group in groups {
            let w = find_witness(&group).unwrap();
            assert!(verify_witness(&group, &w).all_passed);
        }
    }

    #[test]
    fn search_is_deterministic() {
        let s6 = PermutationGroup::symmetric(6);
        assert_eq!(find_witness(&s6).unwrap(), find_witness(&s6).unwrap());
    }

    #[test]
    fn witness_file_round_trip() {
        let s5 = PermutationGroup::symmetric(5);
        let w = find_witness(&s5).unwrap();
        let file = w.to_file();
        let json = serde_json::to_string(&file).unwrap();
        let parsed: PsWitnessFile = serde_json::from_str(&json).unwrap();
        let back = PsWitness::from_file(&s5, &parsed).unwrap();
        assert_eq!(back, w);
    }
}
