//! Element invariants, finite spines and the definability of convex
//! subgroups.

pub mod decide;
pub mod oracle;
pub mod invariants;
pub mod spine;

pub use decide::{decide_definable, drk_group, order_rank_check, subgroup_label, DrkMember, GroupDrk, OrderRankCheck, Verdict};
pub use oracle::{convex_subgroups, oracle_spine, OracleValues};
pub use invariants::{abc, abc_n, e_n, f_n, f_subset, EMembership, Invariants, Section};
pub use spine::{spine, Spine, SpineElement, SpineKind};
