//! Finite probability distributions, entropy functionals, and the
//! descending-sorted probability view used throughout the secrecy bounds.

use crate::{Error, Result};

/// Absolute tolerance for "sums to one" checks.
pub const SUM_TOLERANCE: f64 = 1e-9;

/// Kahan compensated sum.
pub fn kahan_sum<I: IntoIterator<Item = f64>>(xs: I) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for x in xs {
        let y = x - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

/// A finite probability distribution together with its descending-sorted
/// view p₀ ≥ p₁ ≥ … .
#[derive(Clone, Debug, PartialEq)]
pub struct ProbVector {
    probs: Vec<f64>,
    sorted: Vec<f64>,
}

impl ProbVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDistribution("empty support".into()));
        }
        if let Some(&p) = probs.iter().find(|&&p| !(0.0..=1.0 + SUM_TOLERANCE).contains(&p)) {
            return Err(Error::InvalidDistribution(format!(
                "probability {p} outside [0, 1]"
            )));
        }
        let total = kahan_sum(probs.iter().copied());
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        let mut sorted = probs.clone();
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        Ok(ProbVector { probs, sorted })
    }

    pub fn uniform(n: usize) -> Self {
        ProbVector::new(vec![1.0 / n as f64; n]).expect("uniform is valid")
    }

    pub fn point_mass(n: usize, at: usize) -> Self {
        let mut p = vec![0.0; n];
        p[at] = 1.0;
        ProbVector::new(p).expect("point mass is valid")
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Probabilities in outcome order.
    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    /// Non-increasing view p₀ ≥ p₁ ≥ … ; a permutation of `probs`.
    pub fn sorted(&self) -> &[f64] {
        &self.sorted
    }
}

/// Descending-sorted probabilities of a distribution.
pub fn sorted_probs(d: &ProbVector) -> Vec<f64> {
    d.sorted().to_vec()
}

/// Binary entropy h(p) = -p log₂ p - (1-p) log₂(1-p), with 0 log 0 := 0.
pub fn binary_entropy(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ProbabilityRange(p));
    }
    Ok(surprisal_term(p) + surprisal_term(1.0 - p))
}

fn surprisal_term(p: f64) -> f64 {
    if p == 0.0 {
        0.0
    } else {
        -p * p.log2()
    }
}

/// Shannon entropy H and Var[-log₂ P], both in bits (resp. bits²).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntropyStats {
    pub entropy: f64,
    pub variance_log: f64,
}

pub fn entropy_stats(d: &ProbVector) -> EntropyStats {
    let entropy = kahan_sum(d.probs().iter().map(|&p| surprisal_term(p)));
    let variance_log = kahan_sum(d.probs().iter().filter(|&&p| p > 0.0).map(|&p| {
        let s = -p.log2();
        p * (s - entropy) * (s - entropy)
    }));
    EntropyStats {
        entropy,
        variance_log,
    }
}
