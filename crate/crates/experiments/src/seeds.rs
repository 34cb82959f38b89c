//! Component seeds derived from one master seed.

use sha2::{Digest, Sha256};

/// First eight bytes (little endian) of `sha256(master_le || component)`.
pub fn component_seed(master: u64, component: &str) -> u64 {
    let mut hasher = Sha256::new();
    hasher.update(master.to_le_bytes());
    hasher.update(component.as_bytes());
    let digest = hasher.finalize();
    u64::from_le_bytes(digest[..8].try_into().expect("digest has 32 bytes"))
}
