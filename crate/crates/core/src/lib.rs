pub mod algebra;
pub mod curve;
pub mod local;
pub mod rayclass;
pub mod invariants;
pub mod fixtures;
pub mod records;
pub mod search;
