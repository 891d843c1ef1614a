use std::collections::{BTreeMap, HashMap};

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::decode::DecodePlan;
use super::{build_placement, chunk_index, generate_transmissions, DemandAssignment, SchemeParams, SubfileId, Transmission};
use crate::combinatorics::SubsetId;
use crate::error::{Error, Result};

/// Upper bound on `binom(C, t)` for byte-level runs.
const MAX_CHUNKS: u128 = 1 << 22;

/// Outcome of a byte-level placement, delivery and decoding run.
#[derive(Clone, Debug)]
pub struct Simulation {
    pub transmissions: Vec<Transmission>,
    /// Length of one subfile in bytes after padding.
    pub chunk_len: usize,
    /// Reconstructed file of every active user.
    pub decoded: BTreeMap<SubsetId, Vec<u8>>,
}

impl Simulation {
    /// Bytes sent over the shared link.
    pub fn transmitted_bytes(&self) -> usize {
        self.transmissions.len() * self.chunk_len
    }
}

/// Byte storage of one cache, keyed by (file, index-set mask).
struct CacheStore {
    chunks: HashMap<(u32, u128), Vec<u8>>,
}

/// Runs placement, XOR delivery and per-user decoding on real payloads.
///
/// Each payload is zero-padded to a multiple of `binom(C, t)` and cut into
/// contiguous chunks; chunk `j` is the subfile whose index set has rank `j`.
/// Decoded outputs are truncated back to the original length.
pub fn simulate_end_to_end(p: &SchemeParams, payloads: &[Vec<u8>], demands: &DemandAssignment) -> Result<Simulation> {
    if payloads.len() != p.files as usize {
        return Err(Error::PayloadCount { expected: p.files, got: payloads.len() });
    }
    let len = payloads.first().map_or(0, Vec::len);
    if let Some((index, w)) = payloads.iter().enumerate().find(|(_, w)| w.len() != len) {
        return Err(Error::PayloadLength { index, got: w.len(), expected: len });
    }
    let f = p.subpacketization();
    if f > MAX_CHUNKS {
        return Err(Error::TooLarge(format!("subpacketization {f}")));
    }
    let f = f as usize;
    let chunk_len = len.div_ceil(f);
    let padded: Vec<Vec<u8>> = payloads
        .iter()
        .map(|w| {
            let mut w = w.clone();
            w.resize(chunk_len * f, 0);
            w
        })
        .collect();
    let chunk = |w: &SubfileId| -> &[u8] {
        let start = chunk_index(&w.index_set) * chunk_len;
        &padded[w.file as usize - 1][start..start + chunk_len]
    };

    let placement = build_placement(p);
    let stores: Vec<CacheStore> = placement
        .iter()
        .map(|z| CacheStore { chunks: z.subfiles().map(|w| ((w.file, w.index_set.mask()), chunk(&w).to_vec())).collect() })
        .collect();

    let transmissions = generate_transmissions(p, demands)?;
    let coded: Vec<Vec<u8>> = transmissions
        .par_iter()
        .map(|y| {
            let mut acc = vec![0u8; chunk_len];
            for w in y.subfiles() {
                xor_into(&mut acc, chunk(&w));
            }
            acc
        })
        .collect();

    let users: Vec<(SubsetId, u32)> = demands.iter().collect();
    let decoded = users
        .par_iter()
        .map(|(user, _)| {
            let plan = DecodePlan::build(p, user, demands, &transmissions, &placement)?;
            let read = |w: &SubfileId, cache: u32| -> Result<&[u8]> {
                stores[cache as usize - 1]
                    .chunks
                    .get(&(w.file, w.index_set.mask()))
                    .map(Vec::as_slice)
                    .ok_or_else(|| Error::DecodeFailure { user: *user, detail: format!("cache {cache} lacks {w}") })
            };
            let mut out = vec![0u8; chunk_len * f];
            for (w, cache) in &plan.cached {
                let start = chunk_index(&w.index_set) * chunk_len;
                out[start..start + chunk_len].copy_from_slice(read(w, *cache)?);
            }
            for step in &plan.peeled {
                let mut buf = coded[step.transmission].clone();
                for (w, cache) in &step.cancel {
                    xor_into(&mut buf, read(w, *cache)?);
                }
                let start = chunk_index(&step.target.index_set) * chunk_len;
                out[start..start + chunk_len].copy_from_slice(&buf);
            }
            out.truncate(len);
            Ok((*user, out))
        })
        .collect::<Result<BTreeMap<_, _>>>()?;

    Ok(Simulation { transmissions, chunk_len, decoded })
}

fn xor_into(acc: &mut [u8], src: &[u8]) {
    for (a, b) in acc.iter_mut().zip(src) {
        *a ^= b;
    }
}

/// `count` pseudorandom payloads of `len` bytes from a ChaCha8 stream seeded
/// with `seed`.
pub fn random_payloads(count: u32, len: usize, seed: u64) -> Vec<Vec<u8>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let mut w = vec![0u8; len];
            rng.fill_bytes(&mut w);
            w
        })
        .collect()
}
