//! Exact scalars and symmetric-group combinatorics.

mod laurent;
mod partition;
mod sqrtq;

pub use laurent::{qbinom, qfactorial, qint, LaurentInt};
pub use partition::{
    decompose_character, hook_length_dimension, kostka, partitions, perm_module_multiplicities, symmetric_group_characters, Partition,
};
pub use sqrtq::ScalarSqrtQ;
