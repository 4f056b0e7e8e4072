pub mod appell;
pub mod eval;
pub mod formal_group;
pub mod verify;
