//! Seedable, splittable random streams.
//!
//! Every stochastic choice in the crate draws from an [`RngStream`]. A stream is
//! identified by its origin `(seed, stream_index)`: the ChaCha8 key is expanded
//! from `seed` and `stream_index` selects one of its 2^64 independent streams.
//! Child streams get a `stream_index` that is a SplitMix64 hash of the parent's
//! index and the child number, so a child depends only on its parent's origin and
//! its own index, never on how many siblings were derived before it.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::dataset::Dataset;
use crate::error::{EifError, Result};
use crate::scalar::Scalar;

/// Generator family recorded in model files. Bump together with the model
/// format version whenever the derivation rule or the Gaussian transform changes.
pub const RNG_FAMILY: &str = "chacha8/rand_chacha-0.9;derive=splitmix64;normal=ziggurat/rand_distr-0.5";

/// Seed used by the command line front end when `--seed` is absent.
pub const DEFAULT_SEED: u64 = 1;

#[derive(Clone, Debug)]
pub struct RngStream {
    inner: ChaCha8Rng,
    seed: u64,
    stream_index: u64,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

impl RngStream {
    fn at(seed: u64, stream_index: u64) -> Self {
        let mut inner = ChaCha8Rng::seed_from_u64(seed);
        inner.set_stream(stream_index);
        Self {
            inner,
            seed,
            stream_index,
        }
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn stream_index(&self) -> u64 {
        self.stream_index
    }

    /// Child stream number `index`; see the module docs for the derivation rule.
    pub fn derive(&self, index: u64) -> RngStream {
        let child = splitmix64(self.stream_index ^ splitmix64(index));
        RngStream::at(self.seed, child)
    }

    pub fn standard_normal(&mut self) -> f64 {
        StandardNormal.sample(&mut self.inner)
    }

    /// Uniform draw in `[lo, hi]`. Always consumes one draw, even when `lo == hi`.
    pub fn uniform(&mut self, lo: f64, hi: f64) -> Result<f64> {
        if !(lo <= hi) {
            return Err(EifError::InvalidRange { lo, hi });
        }
        let u: f64 = self.inner.random();
        Ok((lo + (hi - lo) * u).min(hi))
    }

    /// Uniform index in `0..n`. `n` must be nonzero.
    pub fn index(&mut self, n: usize) -> usize {
        self.inner.random_range(0..n)
    }
}

impl RngCore for RngStream {
    fn next_u32(&mut self) -> u32 {
        self.inner.next_u32()
    }

    fn next_u64(&mut self) -> u64 {
        self.inner.next_u64()
    }

    fn fill_bytes(&mut self, dst: &mut [u8]) {
        self.inner.fill_bytes(dst)
    }
}

/// Root stream (`stream_index` 0) for `seed`.
pub fn make_rng(seed: u64) -> RngStream {
    RngStream::at(seed, 0)
}

pub fn derive_stream(parent: &RngStream, index: u64) -> RngStream {
    parent.derive(index)
}

/// A 64-bit seed for sub-task `index` of a run seeded with `seed`.
pub fn derive_seed(seed: u64, index: u64) -> u64 {
    make_rng(seed).derive(index).next_u64()
}

pub fn draw_standard_normal(rng: &mut RngStream) -> f64 {
    rng.standard_normal()
}

pub fn draw_uniform(rng: &mut RngStream, lo: f64, hi: f64) -> Result<f64> {
    rng.uniform(lo, hi)
}

/// The first `k` entries of a partial Fisher-Yates shuffle of `0..n`.
///
/// Draws exactly `k` random indices, so the stream position afterwards depends
/// only on `k`.
pub fn sample_indices(rng: &mut RngStream, n: usize, k: usize) -> Result<Vec<usize>> {
    if k == 0 {
        return Err(EifError::invalid("sample size must be at least 1"));
    }
    if k > n {
        return Err(EifError::InsufficientData {
            requested: k,
            available: n,
        });
    }
    let mut idx: Vec<usize> = (0..n).collect();
    for i in 0..k {
        let j = i + rng.index(n - i);
        idx.swap(i, j);
    }
    idx.truncate(k);
    Ok(idx)
}

/// `psi` rows drawn uniformly without replacement, in draw order.
pub fn subsample<T: Scalar>(rng: &mut RngStream, data: &Dataset<T>, psi: usize) -> Result<Dataset<T>> {
    let idx = sample_indices(rng, data.len(), psi)?;
    Ok(data.select(&idx))
}
