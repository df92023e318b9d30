pub mod braid;
pub mod exec;
pub mod invariants;
pub mod surgery;
pub mod tangle;
pub mod verify;
