//! Splittable deterministic random streams and the samplers built on them.
//!
//! A [`RandomStream`] is identified by a root seed and a path of string
//! labels. Child streams are derived by keyed hashing — child key =
//! SHA-256(parent key ‖ 0x01 ‖ label) — so derivation depends only on the
//! static key, never on how much of the parent has been consumed. That is
//! what makes Monte Carlo results independent of worker count: rep `i`
//! always samples from the stream at path `["rep:i", …]`, regardless of
//! which thread runs it or in what order.
//!
//! The key seeds a ChaCha12 generator for the actual sampling. This is not
//! cryptographic randomness in any security sense; ChaCha is used because it
//! is counter-based, fast, and has no detectable statistical structure.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;
use sha2::{Digest, Sha256};

/// A deterministic, splittable source of randomness.
///
/// Two streams with equal (seed, path) produce identical output sequences;
/// streams with different paths are statistically independent. Sampling
/// mutates only the local stream; deriving never does.
#[derive(Clone, Debug)]
pub struct RandomStream {
    seed: u64,
    path: Vec<String>,
    key: [u8; 32],
    rng: ChaCha12Rng,
}

impl RandomStream {
    /// Root stream for a 64-bit seed (the CLI/config `seed` key).
    pub fn from_seed(seed: u64) -> Self {
        let mut hasher = Sha256::new();
        hasher.update(b"metameans/root/");
        hasher.update(seed.to_le_bytes());
        let key: [u8; 32] = hasher.finalize().into();
        RandomStream {
            seed,
            path: Vec::new(),
            key,
            rng: ChaCha12Rng::from_seed(key),
        }
    }

    /// Derive the child stream for `label`. Deterministic, injective in the
    /// label, and independent of any sampling already done on `self`.
    pub fn derive(&self, label: &str) -> Self {
        assert!(!label.is_empty(), "stream label must be nonempty");
        let mut hasher = Sha256::new();
        hasher.update(self.key);
        hasher.update([0x01]);
        hasher.update(label.as_bytes());
        let key: [u8; 32] = hasher.finalize().into();
        let mut path = self.path.clone();
        path.push(label.to_owned());
        RandomStream {
            seed: self.seed,
            path,
            key,
            rng: ChaCha12Rng::from_seed(key),
        }
    }

    /// The root seed this stream was grown from.
    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// The label path from the root to this stream.
    pub fn path(&self) -> &[String] {
        &self.path
    }

    /// First eight key bytes as a little-endian u64 — a compact provenance
    /// tag for output files (identifies the stream without replaying it).
    pub fn fingerprint(&self) -> u64 {
        u64::from_le_bytes(self.key[..8].try_into().unwrap())
    }

    /// Uniform double in [0, 1).
    pub fn next_f64(&mut self) -> f64 {
        self.rng.random()
    }

    /// One standard normal draw.
    pub fn next_gaussian(&mut self) -> f64 {
        self.rng.sample(StandardNormal)
    }

    /// `d` iid standard normals.
    pub fn gaussian_vector(&mut self, d: usize) -> Vec<f64> {
        assert!(d >= 1);
        (0..d).map(|_| self.next_gaussian()).collect()
    }

    /// Fair random sign.
    pub fn rademacher(&mut self) -> f64 {
        if self.rng.random::<bool>() {
            1.0
        } else {
            -1.0
        }
    }

    /// `d` iid fair signs.
    pub fn rademacher_vector(&mut self, d: usize) -> Vec<f64> {
        (0..d).map(|_| self.rademacher()).collect()
    }

    /// Haar-distributed orthogonal d×d matrix.
    ///
    /// QR-orthonormalization of a Gaussian matrix, with each column of Q
    /// negated where the corresponding diagonal entry of R is negative.
    /// Without that sign convention the factorization is not unique and the
    /// result is not Haar.
    pub fn haar_orthogonal(&mut self, d: usize) -> OrthogonalMatrix {
        assert!(d >= 1);
        let g = DMatrix::from_fn(d, d, |_, _| self.next_gaussian());
        let qr = g.qr();
        let r = qr.r();
        let mut q = qr.q();
        for i in 0..d {
            if r[(i, i)] < 0.0 {
                for k in 0..d {
                    q[(k, i)] = -q[(k, i)];
                }
            }
        }
        OrthogonalMatrix {
            m: q,
            tag: self.fingerprint(),
        }
    }
}

/// A d×d orthogonal matrix (UᵀU = I within 1e-10 per entry).
#[derive(Clone, Debug)]
pub struct OrthogonalMatrix {
    m: DMatrix<f64>,
    /// Fingerprint of the stream that drew this matrix (0 for identity);
    /// lets statistics record *which* shared rotation they depend on.
    tag: u64,
}

impl OrthogonalMatrix {
    /// The identity rotation; used to force a known projection direction.
    pub fn identity(d: usize) -> Self {
        OrthogonalMatrix {
            m: DMatrix::identity(d, d),
            tag: 0,
        }
    }

    /// Identity of the stream this matrix came from.
    pub fn tag(&self) -> u64 {
        self.tag
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    /// U·v.
    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.dim());
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.m[(i, j)] * v[j]).sum())
            .collect()
    }

    /// (U·v)₁ without materializing the product — the only entry the
    /// coordinated projection statistic needs.
    pub fn first_component(&self, v: &[f64]) -> f64 {
        assert_eq!(v.len(), self.dim());
        (0..self.dim()).map(|j| self.m[(0, j)] * v[j]).sum()
    }

    pub fn entries(&self) -> &DMatrix<f64> {
        &self.m
    }
}
