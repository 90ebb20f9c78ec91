//! Library side of the `modinv` command: oracle checks and report builders.

pub mod checks;
pub mod reports;
