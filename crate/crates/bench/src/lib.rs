// SPDX-License-Identifier: Apache-2.0

//! Shared fixtures for the benchmarks.

use formclass::{enumerate_classes, ClassGroup, InvariantSpec, LevelStructure, Order};
use num_bigint::BigInt;

/// Class group and invariant recipe for `(D, N, G = {1})`.
pub fn fixture(d: i64, n: u64) -> (ClassGroup, InvariantSpec) {
    let order = Order::from_disc(&BigInt::from(d)).expect("valid discriminant");
    let level = LevelStructure::trivial(n).expect("valid level");
    let cg = enumerate_classes(&order, &level).expect("classes");
    let spec = InvariantSpec::for_level(&level).expect("N >= 2");
    (cg, spec)
}
