//! Reproducible randomness.
//!
//! Every stream is keyed by `(master seed, trial, lane, role, user)` and
//! nothing else, so results do not depend on evaluation order or thread
//! scheduling. Keys are SHA-256 digests of the tuple; each key seeds a
//! ChaCha8 generator.

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// What a stream is used for. Distinct roles of the same user never share
/// randomness.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[repr(u8)]
pub enum Role {
    Generation = 1,
    Sampling = 2,
    Projection = 3,
    DegreeNoise = 4,
    RandomizedResponse = 5,
    CountNoise = 6,
    CentralNoise = 7,
}

impl Role {
    fn is_laplace(self) -> bool {
        matches!(self, Role::DegreeNoise | Role::CountNoise | Role::CentralNoise)
    }
}

/// Root of all randomness for an experiment.
///
/// The Laplace and randomized-response channels can be switched off to
/// obtain noiseless oracle runs: a silenced Laplace channel returns exactly
/// 0 and a silenced RR channel never flips (and reports a flip probability
/// of 0 to the aggregators that debias against it).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RandomSource {
    master_seed: u64,
    laplace_live: bool,
    rr_live: bool,
}

impl RandomSource {
    pub fn new(master_seed: u64) -> Self {
        RandomSource {
            master_seed,
            laplace_live: true,
            rr_live: true,
        }
    }

    pub fn without_laplace_noise(mut self) -> Self {
        self.laplace_live = false;
        self
    }

    pub fn with_identity_rr(mut self) -> Self {
        self.rr_live = false;
        self
    }

    /// Both channels silenced.
    pub fn noiseless(self) -> Self {
        self.without_laplace_noise().with_identity_rr()
    }

    pub fn master_seed(&self) -> u64 {
        self.master_seed
    }

    pub fn trial(&self, trial: u64) -> TrialSource {
        TrialSource {
            root: *self,
            trial,
            lane: 0,
        }
    }
}

/// Randomness scoped to one trial.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrialSource {
    root: RandomSource,
    trial: u64,
    lane: u32,
}

impl TrialSource {
    pub fn trial_index(&self) -> u64 {
        self.trial
    }

    /// An independent copy for a sub-protocol run inside the same trial.
    pub fn lane(mut self, lane: u32) -> Self {
        self.lane = lane;
        self
    }

    pub fn laplace_live(&self) -> bool {
        self.root.laplace_live
    }

    pub fn rr_live(&self) -> bool {
        self.root.rr_live
    }

    /// Flip probability of the RR channel actually in use at budget `eps`.
    pub fn rr_channel_flip_prob(&self, eps: f64) -> f64 {
        if self.root.rr_live {
            super::rr_flip_prob(eps)
        } else {
            0.0
        }
    }

    pub fn key(&self, role: Role, user: u64) -> [u8; 32] {
        let mut h = Sha256::new();
        h.update(b"ldp-subgraph stream v1");
        h.update(self.root.master_seed.to_le_bytes());
        h.update(self.trial.to_le_bytes());
        h.update(self.lane.to_le_bytes());
        h.update([role as u8]);
        h.update(user.to_le_bytes());
        h.finalize().into()
    }

    pub fn stream(&self, role: Role, user: u64) -> Stream {
        let silenced = if role.is_laplace() {
            !self.root.laplace_live
        } else {
            role == Role::RandomizedResponse && !self.root.rr_live
        };
        if silenced {
            Stream::silent()
        } else {
            Stream::from_key(self.key(role, user))
        }
    }
}

/// A stream of 64-bit draws. The silent stream models an injected
/// zero-entropy channel: mechanisms reading it add no noise.
#[derive(Clone, Debug)]
pub struct Stream(Inner);

// Not boxed: lazy noisy-graph queries build one stream per probe.
#[allow(clippy::large_enum_variant)]
#[derive(Clone, Debug)]
enum Inner {
    Live(ChaCha8Rng),
    Silent,
}

impl Stream {
    pub fn from_key(key: [u8; 32]) -> Self {
        Stream(Inner::Live(ChaCha8Rng::from_seed(key)))
    }

    /// Convenience for tests and one-off sampling.
    pub fn from_seed(seed: u64) -> Self {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&seed.to_le_bytes());
        Self::from_key(key)
    }

    pub fn silent() -> Self {
        Stream(Inner::Silent)
    }

    pub fn is_silent(&self) -> bool {
        matches!(self.0, Inner::Silent)
    }

    /// Positions the stream so the next `next_u64` returns draw `index`
    /// (0-based) of a fresh stream with the same key.
    pub fn seek_draw(&mut self, index: u64) {
        if let Inner::Live(rng) = &mut self.0 {
            rng.set_word_pos(2 * index as u128);
        }
    }
}

const SILENT_WORD: u64 = 1 << 63;

impl RngCore for Stream {
    fn next_u32(&mut self) -> u32 {
        match &mut self.0 {
            Inner::Live(rng) => rng.next_u32(),
            Inner::Silent => (SILENT_WORD >> 32) as u32,
        }
    }

    fn next_u64(&mut self) -> u64 {
        match &mut self.0 {
            Inner::Live(rng) => rng.next_u64(),
            Inner::Silent => SILENT_WORD,
        }
    }

    fn fill_bytes(&mut self, dest: &mut [u8]) {
        match &mut self.0 {
            Inner::Live(rng) => rng.fill_bytes(dest),
            Inner::Silent => dest.fill(0),
        }
    }
}
