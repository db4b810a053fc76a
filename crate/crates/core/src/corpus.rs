//! Seeded random polynomial corpora.
//!
//! Entry `i` of a corpus depends only on `(seed, i, generator)`: every entry
//! draws from its own ChaCha stream, so corpora regenerate bit-identically,
//! can be built in parallel, and a corpus of size `2n` extends the corpus of
//! size `n` with the same seed.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{FpError, Result};
use crate::series::TruncatedSeries;

/// Distribution of corpus entries.
///
/// Degrees are log-uniform in `[min_degree, max_degree]`; coefficient `a_n`
/// is a standard complex Gaussian scaled by `(n+1)^{-gamma}` with `gamma`
/// picked uniformly from `decay_exponents`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub min_degree: usize,
    pub max_degree: usize,
    pub decay_exponents: Vec<f64>,
}

impl Default for GeneratorSpec {
    fn default() -> Self {
        Self {
            min_degree: 4,
            max_degree: 256,
            decay_exponents: vec![0.0, 1.0],
        }
    }
}

impl GeneratorSpec {
    pub fn with_max_degree(max_degree: usize) -> Self {
        Self {
            max_degree,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.min_degree == 0 || self.min_degree > self.max_degree {
            return Err(FpError::param(format!(
                "degree range [{}, {}] must satisfy 1 <= min <= max",
                self.min_degree, self.max_degree
            )));
        }
        if self.decay_exponents.is_empty() || self.decay_exponents.iter().any(|g| !g.is_finite()) {
            return Err(FpError::param("decay exponents must be a nonempty list of finite values"));
        }
        Ok(())
    }

    /// The `index`-th entry of the corpus with this seed.
    pub fn entry(&self, seed: u64, index: usize) -> TruncatedSeries {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index as u64);

        let lo = (self.min_degree as f64).ln();
        let hi = ((self.max_degree + 1) as f64).ln();
        let u: f64 = rng.gen();
        let degree = ((lo + u * (hi - lo)).exp().floor() as usize).clamp(self.min_degree, self.max_degree);
        let gamma = self.decay_exponents[rng.gen_range(0..self.decay_exponents.len())];

        let coeffs = (0..=degree)
            .map(|n| {
                let re: f64 = rng.sample(StandardNormal);
                let im: f64 = rng.sample(StandardNormal);
                let scale = ((n + 1) as f64).powf(-gamma) * std::f64::consts::FRAC_1_SQRT_2;
                Complex64::new(re * scale, im * scale)
            })
            .collect();
        TruncatedSeries::from_vec_unchecked(coeffs)
    }
}

/// A list of series with its provenance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Corpus {
    pub seed: u64,
    /// `None` for hand-built corpora.
    pub generator: Option<GeneratorSpec>,
    pub entries: Vec<TruncatedSeries>,
}

impl Corpus {
    pub fn generate(seed: u64, size: usize, generator: GeneratorSpec) -> Result<Self> {
        generator.validate()?;
        let entries = (0..size)
            .into_par_iter()
            .map(|i| generator.entry(seed, i))
            .collect();
        Ok(Self {
            seed,
            generator: Some(generator),
            entries,
        })
    }

    pub fn from_entries(entries: Vec<TruncatedSeries>) -> Self {
        Self {
            seed: 0,
            generator: None,
            entries,
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Same seed and generator, twice the size; `None` for hand-built corpora.
    pub fn doubled(&self) -> Option<Self> {
        let generator = self.generator.clone()?;
        Self::generate(self.seed, 2 * self.len(), generator).ok()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regeneration_is_bit_identical() {
        let a = Corpus::generate(7, 50, GeneratorSpec::default()).unwrap();
        let b = Corpus::generate(7, 50, GeneratorSpec::default()).unwrap();
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
        let c = Corpus::generate(8, 50, GeneratorSpec::default()).unwrap();
        assert_ne!(a.entries, c.entries);
    }

    #[test]
    fn doubling_extends_the_corpus() {
        let a = Corpus::generate(3, 40, GeneratorSpec::default()).unwrap();
        let b = a.doubled().unwrap();
        assert_eq!(b.len(), 80);
        assert_eq!(&b.entries[..40], &a.entries[..]);
        assert!(Corpus::from_entries(vec![TruncatedSeries::one()]).doubled().is_none());
    }

    #[test]
    fn degrees_respect_the_range() {
        let spec = GeneratorSpec::default();
        let corpus = Corpus::generate(11, 500, spec.clone()).unwrap();
        let degrees: Vec<usize> = corpus.entries.iter().map(|e| e.degree()).collect();
        assert!(degrees.iter().all(|&d| (spec.min_degree..=spec.max_degree).contains(&d)));
        assert!(degrees.iter().any(|&d| d < 16));
        assert!(degrees.iter().any(|&d| d > 128));
        assert!(corpus.entries.iter().all(|e| e.coeffs().iter().all(|c| c.is_finite())));
    }

    #[test]
    fn invalid_generator_is_rejected() {
        let bad = GeneratorSpec {
            min_degree: 10,
            max_degree: 5,
            decay_exponents: vec![0.0],
        };
        assert!(Corpus::generate(0, 1, bad).is_err());
    }
}
