//! Seeded generators for random couplings, gauges, vectors and grid
//! functions. Everything is driven by a [`ChaCha8Rng`] so sweeps are
//! reproducible across platforms.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{ComplexMatrix, C64};
use crate::one_particle::{GridFunction, GridSpec};
use crate::slh::{CouplingMatrix, GaugeMatrix};

pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex normal: real and imaginary parts each `N(0, 1)`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, len: usize) -> Vec<C64> {
    (0..len).map(|_| complex_normal(rng)).collect()
}

/// `(A + A†)/2` for a Ginibre matrix `A`, rescaled so the largest entry has
/// modulus one.
pub fn random_hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let a = ComplexMatrix::from_fn(dim, dim, |_, _| complex_normal(rng));
    let h = (&a + &a.adjoint()).scale(C64::new(0.5, 0.0));
    let max = h.max_abs();
    let mut h = if max > 0.0 {
        h.scale(C64::new(1.0 / max, 0.0))
    } else {
        h
    };
    // Scaling keeps Hermiticity up to rounding; make the diagonal exactly real.
    for k in 0..dim {
        h[(k, k)].im = 0.0;
    }
    for r in 0..dim {
        for c in r + 1..dim {
            h[(c, r)] = h[(r, c)].conj();
        }
    }
    h
}

pub fn random_coupling<R: Rng + ?Sized>(rng: &mut R, m: usize, n: usize) -> CouplingMatrix {
    let e = random_hermitian(rng, (n + 1) * m);
    crate::slh::validate_coupling(&e, m, n).expect("random Hermitian matrix is a valid coupling")
}

/// Random Hermitian gauge on `K ⊗ h` with entries of modulus at most
/// `scale`.
pub fn random_gauge<R: Rng + ?Sized>(rng: &mut R, nm: usize, scale: f64) -> GaugeMatrix {
    let z = random_hermitian(rng, nm).scale(C64::new(scale, 0.0));
    GaugeMatrix::new(z).expect("random gauge is Hermitian")
}

/// A sum of two Gaussians on each half-line with independent amplitudes,
/// centers in `[-3, 3]` and widths in `[0.3, 1.5]`, so the traces at `0±`
/// differ generically.
pub fn random_discontinuous<R: Rng + ?Sized>(rng: &mut R, spec: GridSpec) -> GridFunction {
    let mut bumps = || -> Vec<(C64, f64, f64)> {
        (0..2)
            .map(|_| {
                (
                    complex_normal(rng),
                    rng.random_range(-3.0..3.0),
                    rng.random_range(0.3..1.5),
                )
            })
            .collect()
    };
    let left = bumps();
    let right = bumps();
    let eval = |b: &[(C64, f64, f64)], t: f64| -> C64 {
        b.iter()
            .map(|&(a, c, w)| a * (-((t - c) / w).powi(2)).exp())
            .sum()
    };
    GridFunction::from_fn(spec, |t| eval(&left, t), |t| eval(&right, t))
        .expect("Gaussians with these widths decay long before the cut")
}

/// A single Gaussian on one side of the origin, zero on the other.
pub fn random_gaussian<R: Rng + ?Sized>(rng: &mut R, spec: GridSpec, right: bool) -> GridFunction {
    let amp = complex_normal(rng);
    let center = rng.random_range(-1.0..1.0);
    let width = rng.random_range(0.5..1.5);
    let g = move |t: f64| amp * (-((t - center) / width).powi(2)).exp();
    let zero = |_: f64| C64::new(0.0, 0.0);
    if right {
        GridFunction::from_fn(spec, zero, g)
    } else {
        GridFunction::from_fn(spec, g, zero)
    }
    .expect("Gaussian decays before the cut")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitian_sample_is_exact_and_normalized() {
        let mut rng = seeded_rng(7);
        let h = random_hermitian(&mut rng, 4);
        assert_eq!(h.hermiticity_defect(), 0.0);
        assert!((h.max_abs() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn same_seed_same_coupling() {
        let a = random_coupling(&mut seeded_rng(3), 2, 1);
        let b = random_coupling(&mut seeded_rng(3), 2, 1);
        assert_eq!(a.full(), b.full());
        let c = random_coupling(&mut seeded_rng(4), 2, 1);
        assert_ne!(a.full(), c.full());
    }
}
