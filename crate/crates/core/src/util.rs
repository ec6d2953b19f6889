//! Small numeric helpers shared across the crate: compensated summation,
//! relative-error metrics, unit-circle evaluation and seeded RNG derivation.

use crate::Cplx;
use num_traits::Float;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Neumaier-compensated accumulator, generic over the float width.
#[derive(Clone, Copy, Debug, Default)]
pub struct Kahan<T: Float> {
    sum: T,
    comp: T,
}

impl<T: Float> Kahan<T> {
    pub fn new() -> Self {
        Kahan { sum: T::zero(), comp: T::zero() }
    }

    pub fn add(&mut self, x: T) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp = self.comp + ((self.sum - t) + x);
        } else {
            self.comp = self.comp + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn value(&self) -> T {
        self.sum + self.comp
    }
}

/// Compensated complex accumulator (componentwise Neumaier).
#[derive(Clone, Copy, Debug, Default)]
pub struct KahanC {
    re: Kahan<f64>,
    im: Kahan<f64>,
}

impl KahanC {
    pub fn new() -> Self {
        KahanC { re: Kahan::new(), im: Kahan::new() }
    }

    pub fn add(&mut self, z: Cplx) {
        self.re.add(z.re);
        self.im.add(z.im);
    }

    pub fn value(&self) -> Cplx {
        Cplx::new(self.re.value(), self.im.value())
    }
}

/// e(x) = exp(2πix).
pub fn e(x: f64) -> Cplx {
    Cplx::from_polar(1.0, 2.0 * std::f64::consts::PI * x)
}

/// Table of c-th roots of unity: `table[k] = e(k/c)`.
///
/// Direct summation over residues is done with this table so the only
/// rounding per term is one complex multiply-add.
pub fn root_of_unity_table(c: u64) -> Vec<Cplx> {
    (0..c).map(|k| e(k as f64 / c as f64)).collect()
}

/// |a - b| / max(|a|, |b|), with 0/0 = 0.
pub fn rel_err(a: Cplx, b: Cplx) -> f64 {
    let denom = a.norm().max(b.norm());
    if denom == 0.0 {
        0.0
    } else {
        (a - b).norm() / denom
    }
}

/// Relative error against a reference scale: |a - b| / max(|b|, scale).
///
/// Used when the reference value may legitimately be a structural zero and
/// the natural magnitude of nonzero values is `scale`.
pub fn rel_err_scaled(a: Cplx, b: Cplx, scale: f64) -> f64 {
    (a - b).norm() / b.norm().max(scale)
}

/// Deterministic per-case RNG: stream derived from a master seed and an index.
pub fn rng_for(seed: u64, index: u64) -> ChaCha8Rng {
    let mut key = [0u8; 32];
    key[..8].copy_from_slice(&seed.to_le_bytes());
    key[8..16].copy_from_slice(&index.to_le_bytes());
    key[16..24].copy_from_slice(&(seed ^ 0x9e37_79b9_7f4a_7c15).to_le_bytes());
    ChaCha8Rng::from_seed(key)
}
