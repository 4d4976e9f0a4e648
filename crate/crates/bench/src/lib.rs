//! Shared fixtures for the benchmark targets.

use minigen_core::{MealyAutomorphism, PermutationGroup};

/// The triple wreath action on 8 points (order 128).
pub fn triple_wreath() -> PermutationGroup {
    let c2 = PermutationGroup::cyclic(2);
    let inner = PermutationGroup::wreath_action(&c2, &c2).expect("degree 4");
    PermutationGroup::wreath_action(&inner, &c2).expect("degree 8")
}

/// The block-imprimitive action of C2 wr C3 on 6 points.
pub fn c2_wr_c3() -> PermutationGroup {
    PermutationGroup::wreath_action(&PermutationGroup::cyclic(2), &PermutationGroup::cyclic(3))
        .expect("degree 6")
}

/// A chain of odometer products: a machine with several states whose
/// minimization does real work.
pub fn odometer_power(k: usize) -> MealyAutomorphism {
    let a = MealyAutomorphism::odometer();
    let mut acc = a.clone();
    for _ in 1..k {
        acc = acc.product(&a).expect("same alphabet");
    }
    acc
}
