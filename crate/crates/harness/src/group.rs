use num::{BigRational, One};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qtau_core::ncalg::{rat, RatMatrix};

/// What a draw is used for; each kind has its own range.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Draw {
    /// Numerator of a unipotent entry, in `-3..=3`.
    Numerator,
    /// Denominator offset, in `0..=2`.
    Denominator,
    /// Power of two on the diagonal, in `-1..=1`.
    Exponent,
}

/// `upper * diag * lower` with unit determinant, entries taken from `draw`.
///
/// A source that always returns zero gives the identity.
pub fn compose_group_element(n: usize, mut draw: impl FnMut(Draw) -> i64) -> RatMatrix {
    let mut entry = || rat(draw(Draw::Numerator), 1 + draw(Draw::Denominator));
    let mut upper = RatMatrix::identity(n);
    let mut lower = RatMatrix::identity(n);
    for i in 0..n {
        for j in i + 1..n {
            upper.set(i, j, entry());
            lower.set(j, i, entry());
        }
    }
    let mut diag = RatMatrix::identity(n);
    let mut prod = BigRational::one();
    for i in 0..n - 1 {
        let e = draw(Draw::Exponent);
        let d = if e >= 0 { rat(1 << e, 1) } else { rat(1, 1 << -e) };
        prod *= &d;
        diag.set(i, i, d);
    }
    diag.set(n - 1, n - 1, prod.recip());
    upper.mul(&diag).mul(&lower)
}

/// Seeded random element of SL(N) over the rationals.
pub fn random_group_element(n: usize, seed: u64) -> RatMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    compose_group_element(n, |d| match d {
        Draw::Numerator => rng.gen_range(-3..=3),
        Draw::Denominator => rng.gen_range(0..=2),
        Draw::Exponent => rng.gen_range(-1..=1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn same_seed_same_matrix() {
        assert_eq!(random_group_element(3, 11), random_group_element(3, 11));
        assert_ne!(random_group_element(3, 11), random_group_element(3, 12));
    }

    #[test]
    fn unit_determinant() {
        for seed in 0..100 {
            assert_eq!(random_group_element(4, seed).det(), BigRational::one(), "seed {seed}");
        }
    }

    #[test]
    fn zero_draws_give_identity() {
        assert_eq!(compose_group_element(4, |_| 0), RatMatrix::identity(4));
    }
}
