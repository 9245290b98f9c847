//! Labelled sub-seeding. Every random stream in the crate is a ChaCha8
//! generator keyed by a 64-bit master seed, a purpose label and an index, so
//! parallel work never shares state and any single stream can be replayed.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

use crate::hypergraph::VertexSet;

pub type StreamRng = ChaCha8Rng;

pub fn derive_seed(master: u64, label: &str, index: u64) -> [u8; 32] {
    let mut hasher = Sha256::new();
    hasher.update(master.to_le_bytes());
    hasher.update((label.len() as u64).to_le_bytes());
    hasher.update(label.as_bytes());
    hasher.update(index.to_le_bytes());
    hasher.finalize().into()
}

pub fn stream(master: u64, label: &str, index: u64) -> StreamRng {
    StreamRng::from_seed(derive_seed(master, label, index))
}

/// A stream that depends only on the master seed and the contents of `set`.
pub fn set_stream(master: u64, label: &str, set: &VertexSet) -> StreamRng {
    let mut hasher = Sha256::new();
    hasher.update(derive_seed(master, label, 0));
    hasher.update(set.content_hash().as_bytes());
    StreamRng::from_seed(hasher.finalize().into())
}
