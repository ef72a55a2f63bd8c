//! Brute-force oracles and seeded instance generators.

mod generate;
mod oracle;

pub use generate::{generate, random_dst, ArcParams, DstInstance, GenSpec, Generated};
pub use oracle::{brute_force_augmentation, brute_force_augmentation_of, brute_force_ftf, brute_force_ftp, brute_force_ftp_k};
