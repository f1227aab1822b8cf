//! Heavy-tailed Lévy steps via Mantegna's algorithm.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use statrs::function::gamma::gamma;

use crate::error::{Error, Result};

/// Lévy step generator for a fixed stability exponent `beta` in `(1, 2]`.
///
/// Each coordinate is `u / |v|^(1/beta)` with `u ~ N(0, sigma_u^2)` and
/// `v ~ N(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LevyFlight {
    beta: f64,
    sigma_u: f64,
}

impl LevyFlight {
    pub fn new(beta: f64) -> Result<Self> {
        if !(beta > 1.0 && beta <= 2.0) {
            return Err(Error::InvalidConfig(format!("levy exponent {beta} must lie in (1, 2]")));
        }
        Ok(Self {
            beta,
            sigma_u: mantegna_sigma(beta),
        })
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn sigma_u(&self) -> f64 {
        self.sigma_u
    }

    /// Combines one numerator and one denominator normal draw.
    pub fn step_from_normals(&self, u_std: f64, v: f64) -> f64 {
        self.sigma_u * u_std / v.abs().powf(1.0 / self.beta)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u: f64 = StandardNormal.sample(rng);
        let v: f64 = StandardNormal.sample(rng);
        self.step_from_normals(u, v)
    }

    pub fn sample_vec<R: Rng + ?Sized>(&self, rng: &mut R, dim: usize) -> Vec<f64> {
        (0..dim).map(|_| self.sample(rng)).collect()
    }
}

/// Standard deviation of the numerator normal in Mantegna's algorithm.
pub fn mantegna_sigma(beta: f64) -> f64 {
    let num = gamma(1.0 + beta) * (PI * beta / 2.0).sin();
    let den = gamma((1.0 + beta) / 2.0) * beta * 2f64.powf((beta - 1.0) / 2.0);
    (num / den).powf(1.0 / beta)
}

/// `dim` independent Lévy steps with exponent `beta`.
pub fn levy_step<R: Rng + ?Sized>(rng: &mut R, beta: f64, dim: usize) -> Result<Vec<f64>> {
    Ok(LevyFlight::new(beta)?.sample_vec(rng, dim))
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    #[test]
    fn sigma_for_canonical_exponent() {
        // Gamma(2.5) sin(0.75 pi) / (Gamma(1.25) 1.5 2^0.25), to the 1/1.5.
        let g25 = 0.75 * PI.sqrt();
        let g125 = 0.906_402_477_055_477;
        let inner = g25 * (0.75 * PI).sin() / (g125 * 1.5 * 2f64.powf(0.25));
        let expected = inner.powf(1.0 / 1.5);
        assert!((mantegna_sigma(1.5) - expected).abs() < 1e-12);
        assert!((mantegna_sigma(1.5) - 0.696_574_502_557_697).abs() < 1e-9);
    }

    #[test]
    fn beta_two_collapses_sigma() {
        // At beta = 2 sin(pi) vanishes, so sigma_u is 0.
        assert!(mantegna_sigma(2.0).abs() < 1e-7);
    }

    #[test]
    fn zero_numerator_gives_zero_step() {
        let lf = LevyFlight::new(1.5).unwrap();
        assert_eq!(lf.step_from_normals(0.0, 0.7), 0.0);
    }

    #[test]
    fn rejects_exponent_outside_range() {
        assert!(LevyFlight::new(1.0).is_err());
        assert!(LevyFlight::new(2.5).is_err());
        assert!(LevyFlight::new(f64::NAN).is_err());
    }

    #[test]
    fn seeded_steps_repeat() {
        let a = levy_step(&mut ChaCha8Rng::seed_from_u64(4), 1.5, 16).unwrap();
        let b = levy_step(&mut ChaCha8Rng::seed_from_u64(4), 1.5, 16).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 16);
    }
}
