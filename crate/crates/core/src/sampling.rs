//! Seeded random tensors for tests and sweeps.

use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::tensor3::{SymTensor3, Tensor3};

/// Deterministic generator for a given seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian_matrix<R: Rng + ?Sized>(rng: &mut R) -> Matrix3<f64> {
    Matrix3::from_fn(|_, _| rng.sample(StandardNormal))
}

fn to_tensor(m: &Matrix3<f64>) -> Tensor3 {
    Tensor3(std::array::from_fn(|i| std::array::from_fn(|j| m[(i, j)])))
}

/// Uniformly distributed proper rotation, from the QR factorization of a
/// Gaussian matrix with the signs of `R`'s diagonal moved into `Q`.
pub fn rotation<R: Rng + ?Sized>(rng: &mut R) -> Tensor3 {
    let qr = gaussian_matrix(rng).qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..3 {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    if q.determinant() < 0.0 {
        q.column_mut(0).neg_mut();
    }
    to_tensor(&q)
}

/// `Qᵀ D Q` with a random rotation `Q` and eigenvalues log-uniform in `[lo, hi]`.
pub fn spd<R: Rng + ?Sized>(rng: &mut R, lo: f64, hi: f64) -> SymTensor3 {
    let (a, b) = (lo.ln(), hi.ln());
    let d = SymTensor3::from_diag(std::array::from_fn(|_| rng.random_range(a..=b).exp()));
    d.pull(&rotation(rng))
}

/// Unimodular SPD tensor with eigenvalues in roughly `[1/spread, spread]`.
pub fn unimodular_spd<R: Rng + ?Sized>(rng: &mut R, spread: f64) -> SymTensor3 {
    spd(rng, spread.recip(), spread).unimodular().expect("SPD tensor has positive determinant")
}

/// `exp(scale · dev G)` for a Gaussian `G`: unimodular, with principal
/// stretches bounded by `exp(scale · ‖G‖)`.
pub fn unimodular_near_identity<R: Rng + ?Sized>(rng: &mut R, scale: f64) -> Tensor3 {
    let g = to_tensor(&gaussian_matrix(rng));
    let dev = g - Tensor3::IDENTITY * (g.trace() / 3.0);
    (dev * scale).exp().unimodular().expect("exponential has positive determinant")
}
