//! Invertible strong extractors: finite-field multiplication and modified
//! Toeplitz hashing.
//!
//! Bit strings of length n live in the low n bits of a `u64`, with the
//! *first* bit of the string in the most significant position. Under this
//! convention "the first λ bits" of an l-bit word `v` are `v >> (l - λ)`,
//! and the concatenation m || r is `(m << (l - λ)) | r`.

use crate::field::Gf2Field;
use crate::{Error, Result};
use rand::Rng;

/// Shape of an extractor family instance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ExtractorParams {
    /// Input length in bits.
    pub l: u32,
    /// Output (message) length in bits.
    pub lambda: u32,
    /// Seed length in bits.
    pub seed_len: u32,
    /// Inverter randomness length, always l - λ.
    pub rand_len: u32,
}

impl ExtractorParams {
    fn check(l: u32, lambda: u32) -> Result<()> {
        if lambda == 0 || lambda > l {
            return Err(Error::InvalidParameter(format!(
                "output length must satisfy 0 < λ ≤ l, got λ={lambda}, l={l}"
            )));
        }
        Ok(())
    }
}

/// A seeded extractor with an explicit inverter.
///
/// `invert` maps uniform randomness `r` to a uniform preimage of `m`
/// under `extract(·, s)`; the exhaustive verifications live in
/// [`crate::oracle`].
pub trait InvertibleExtractor: Send + Sync {
    fn params(&self) -> ExtractorParams;

    fn extract(&self, v: u64, s: u64) -> Result<u64>;

    fn invert(&self, m: u64, s: u64, r: u64) -> Result<u64>;

    /// Number of valid seeds.
    fn seed_count(&self) -> u64;

    /// The idx-th valid seed, for exhaustive enumeration.
    fn seed_at(&self, idx: u64) -> u64;

    fn sample_seed(&self, rng: &mut dyn rand::RngCore) -> u64 {
        let idx = rng.gen_range(0..self.seed_count());
        self.seed_at(idx)
    }

    /// Whether `s` is a usable seed for this family.
    fn seed_valid(&self, s: u64) -> bool {
        s >> self.params().seed_len == 0
    }
}

fn check_fits(name: &str, value: u64, bits: u32) -> Result<()> {
    if value >> bits != 0 {
        return Err(Error::InvalidParameter(format!(
            "{name} value {value:#x} does not fit in {bits} bits"
        )));
    }
    Ok(())
}

/// Ext(v, s) = (v ⋆ s)|_λ over GF(2^l); the seed ranges over the nonzero
/// field elements and Inv(m, s, r) = s⁻¹ ⋆ (m || r).
pub struct FiniteFieldExtractor {
    field: Gf2Field,
    lambda: u32,
}

impl FiniteFieldExtractor {
    pub fn new(l: u32, lambda: u32) -> Result<Self> {
        ExtractorParams::check(l, lambda)?;
        Ok(FiniteFieldExtractor {
            field: Gf2Field::new(l)?,
            lambda,
        })
    }

    pub fn with_field(field: Gf2Field, lambda: u32) -> Result<Self> {
        ExtractorParams::check(field.degree(), lambda)?;
        Ok(FiniteFieldExtractor { field, lambda })
    }

    pub fn field(&self) -> &Gf2Field {
        &self.field
    }

    fn check_seed(&self, s: u64) -> Result<()> {
        if s == 0 {
            return Err(Error::ZeroSeed);
        }
        check_fits("seed", s, self.field.degree())
    }
}

impl InvertibleExtractor for FiniteFieldExtractor {
    fn params(&self) -> ExtractorParams {
        let l = self.field.degree();
        ExtractorParams {
            l,
            lambda: self.lambda,
            seed_len: l,
            rand_len: l - self.lambda,
        }
    }

    fn extract(&self, v: u64, s: u64) -> Result<u64> {
        self.check_seed(s)?;
        check_fits("input", v, self.field.degree())?;
        Ok(self.field.mul(v, s) >> (self.field.degree() - self.lambda))
    }

    fn invert(&self, m: u64, s: u64, r: u64) -> Result<u64> {
        self.check_seed(s)?;
        let l = self.field.degree();
        check_fits("message", m, self.lambda)?;
        check_fits("randomness", r, l - self.lambda)?;
        let concat = (m << (l - self.lambda)) | r;
        Ok(self.field.mul(self.field.inv(s)?, concat))
    }

    fn seed_count(&self) -> u64 {
        self.field.size() - 1
    }

    fn seed_at(&self, idx: u64) -> u64 {
        idx + 1
    }

    fn seed_valid(&self, s: u64) -> bool {
        s != 0 && s >> self.field.degree() == 0
    }
}

/// Modified Toeplitz hashing: Ext(v, s) = [T(s) | I_λ] v over GF(2).
///
/// The seed's first λ bits fill column 0 of the λ×(l-λ) Toeplitz matrix
/// top to bottom; the remaining l-λ-1 bits fill row 0 left to right.
/// Inv(m, s, r) = (r, T(s) r + m).
pub struct ToeplitzExtractor {
    l: u32,
    lambda: u32,
}

impl ToeplitzExtractor {
    pub fn new(l: u32, lambda: u32) -> Result<Self> {
        ExtractorParams::check(l, lambda)?;
        if l > 63 {
            return Err(Error::TooLarge(format!("l = {l} exceeds the word size")));
        }
        Ok(ToeplitzExtractor { l, lambda })
    }

    /// Seed bit s_j (0-based in the convention order).
    fn seed_bit(&self, s: u64, j: u32) -> u64 {
        s >> (self.l - 2 - j) & 1
    }

    /// Toeplitz entry T[i][j] = c(i - j): diagonals are constant; c(d) for
    /// d ≥ 0 comes from column 0 and c(-j) from row 0.
    fn entry(&self, s: u64, i: u32, j: u32) -> u64 {
        if i >= j {
            self.seed_bit(s, i - j)
        } else {
            self.seed_bit(s, self.lambda - 1 + (j - i))
        }
    }

    /// Mask over the first l-λ positions of v (stored MSB-first) selecting
    /// row i of T(s). Reference implementation; the hot paths advance row
    /// masks incrementally instead.
    fn row_mask(&self, s: u64, i: u32) -> u64 {
        let mut mask = 0u64;
        for j in 0..self.l - self.lambda {
            mask |= self.entry(s, i, j) << (self.l - 1 - j);
        }
        mask
    }

    /// Row i+1 of a Toeplitz matrix is row i shifted right with a fresh
    /// column-0 entry; `region` confines the mask to the T columns.
    fn next_row_mask(&self, s: u64, mask: u64, i: u32) -> u64 {
        if self.l == self.lambda {
            return 0;
        }
        let region = (1u64 << self.l) - (1u64 << self.lambda);
        (mask >> 1) & region | self.seed_bit(s, i + 1) << (self.l - 1)
    }

    fn mul_t(&self, s: u64, r: u64) -> u64 {
        // r holds bits r_j at position (l - λ - 1 - j); row masks are built
        // against v positions, so shift them down by λ.
        let mut out = 0u64;
        let mut mask = self.row_mask(s, 0);
        for i in 0..self.lambda {
            let bit = ((mask >> self.lambda) & r).count_ones() as u64 & 1;
            out |= bit << (self.lambda - 1 - i);
            if i + 1 < self.lambda {
                mask = self.next_row_mask(s, mask, i);
            }
        }
        out
    }
}

impl InvertibleExtractor for ToeplitzExtractor {
    fn params(&self) -> ExtractorParams {
        ExtractorParams {
            l: self.l,
            lambda: self.lambda,
            seed_len: self.l - 1,
            rand_len: self.l - self.lambda,
        }
    }

    fn extract(&self, v: u64, s: u64) -> Result<u64> {
        check_fits("input", v, self.l)?;
        check_fits("seed", s, self.l - 1)?;
        let mut out = 0u64;
        let mut mask = self.row_mask(s, 0);
        for i in 0..self.lambda {
            let row = mask | 1 << (self.lambda - 1 - i);
            let bit = (row & v).count_ones() as u64 & 1;
            out |= bit << (self.lambda - 1 - i);
            if i + 1 < self.lambda {
                mask = self.next_row_mask(s, mask, i);
            }
        }
        Ok(out)
    }

    fn invert(&self, m: u64, s: u64, r: u64) -> Result<u64> {
        check_fits("message", m, self.lambda)?;
        check_fits("seed", s, self.l - 1)?;
        check_fits("randomness", r, self.l - self.lambda)?;
        // over GF(2), -T(s)r + m = T(s)r XOR m
        Ok((r << self.lambda) | (self.mul_t(s, r) ^ m))
    }

    fn seed_count(&self) -> u64 {
        1u64 << (self.l - 1)
    }

    fn seed_at(&self, idx: u64) -> u64 {
        idx
    }
}

/// Extractor family selector, serde-friendly for scheme configs.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case")]
pub enum ExtractorKind {
    FiniteField { l: u32, lambda: u32 },
    Toeplitz { l: u32, lambda: u32 },
}

impl ExtractorKind {
    pub fn build(&self) -> Result<Box<dyn InvertibleExtractor>> {
        Ok(match *self {
            ExtractorKind::FiniteField { l, lambda } => {
                Box::new(FiniteFieldExtractor::new(l, lambda)?)
            }
            ExtractorKind::Toeplitz { l, lambda } => Box::new(ToeplitzExtractor::new(l, lambda)?),
        })
    }

    pub fn l(&self) -> u32 {
        match *self {
            ExtractorKind::FiniteField { l, .. } | ExtractorKind::Toeplitz { l, .. } => l,
        }
    }

    pub fn lambda(&self) -> u32 {
        match *self {
            ExtractorKind::FiniteField { lambda, .. } | ExtractorKind::Toeplitz { lambda, .. } => {
                lambda
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Gf2Field;

    #[test]
    fn ff_extract_anchors() {
        // GF(2^3): v = x, s = x^2, product x+1 = 0b011, leading bit 0
        let ext = FiniteFieldExtractor::new(3, 1).unwrap();
        assert_eq!(ext.extract(0b010, 0b100).unwrap(), 0);
        // zero input annihilates
        assert_eq!(ext.extract(0, 0b101).unwrap(), 0);
        // identity seed, full output
        let full = FiniteFieldExtractor::new(3, 3).unwrap();
        for v in 0..8 {
            assert_eq!(full.extract(v, 1).unwrap(), v);
        }
        assert!(matches!(ext.extract(0b010, 0), Err(Error::ZeroSeed)));
    }

    #[test]
    fn ff_invert_anchor() {
        // l = 3, λ = 1, s = x, m = 1, r = 00: v = s⁻¹ ⋆ (m||r) = 0b101 ⋆ 0b100
        let ext = FiniteFieldExtractor::new(3, 1).unwrap();
        let f = Gf2Field::new(3).unwrap();
        let expected = f.mul(f.inv(0b010).unwrap(), 0b100);
        let v = ext.invert(1, 0b010, 0b00).unwrap();
        assert_eq!(v, expected);
        assert_eq!(ext.extract(v, 0b010).unwrap(), 1);
        // m = 0, s = 1, r = 0 → zero word
        assert_eq!(ext.invert(0, 1, 0).unwrap(), 0);
    }

    #[test]
    fn toeplitz_anchors() {
        // l = 2, λ = 1: Ext(v, s) = s·v₀ + v₁ mod 2
        let ext = ToeplitzExtractor::new(2, 1).unwrap();
        assert_eq!(ext.extract(0b11, 1).unwrap(), 0);
        assert_eq!(ext.extract(0b10, 1).unwrap(), 1);
        assert_eq!(ext.extract(0b10, 0).unwrap(), 0);
        // zero input maps to zero for any seed
        let ext = ToeplitzExtractor::new(6, 3).unwrap();
        for s in 0..ext.seed_count() {
            assert_eq!(ext.extract(0, s).unwrap(), 0);
        }
        // zero seed: output is the last λ bits of v
        for v in 0..64u64 {
            assert_eq!(ext.extract(v, 0).unwrap(), v & 0b111);
        }
    }

    #[test]
    fn toeplitz_invert_closed_form() {
        let ext = ToeplitzExtractor::new(6, 2).unwrap();
        // r = 0 → (0^{l-λ}, m)
        for s in 0..ext.seed_count() {
            for m in 0..4u64 {
                assert_eq!(ext.invert(m, s, 0).unwrap(), m);
            }
        }
    }

    #[test]
    fn round_trip_exhaustive_small() {
        for l in 2..=8u32 {
            for lambda in 1..=l {
                let exts: [Box<dyn InvertibleExtractor>; 2] = [
                    Box::new(FiniteFieldExtractor::new(l, lambda).unwrap()),
                    Box::new(ToeplitzExtractor::new(l, lambda).unwrap()),
                ];
                for ext in &exts {
                    let p = ext.params();
                    assert_eq!(p.rand_len, l - lambda);
                    for sidx in 0..ext.seed_count() {
                        let s = ext.seed_at(sidx);
                        for m in 0..1u64 << lambda {
                            for r in 0..1u64 << (l - lambda) {
                                let v = ext.invert(m, s, r).unwrap();
                                assert_eq!(ext.extract(v, s).unwrap(), m);
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn incremental_row_masks_match_reference() {
        for l in 2..=10u32 {
            for lambda in 1..=l {
                let ext = ToeplitzExtractor::new(l, lambda).unwrap();
                for s in 0..ext.seed_count() {
                    let mut mask = ext.row_mask(s, 0);
                    for i in 0..lambda {
                        assert_eq!(mask, ext.row_mask(s, i), "l={l} λ={lambda} s={s} i={i}");
                        if i + 1 < lambda {
                            mask = ext.next_row_mask(s, mask, i);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn inverter_is_injective_in_r() {
        let ext = ToeplitzExtractor::new(8, 3).unwrap();
        for sidx in 0..ext.seed_count() {
            let s = ext.seed_at(sidx);
            for m in 0..8u64 {
                let mut seen = std::collections::HashSet::new();
                for r in 0..32u64 {
                    assert!(seen.insert(ext.invert(m, s, r).unwrap()));
                }
            }
        }
    }
}
