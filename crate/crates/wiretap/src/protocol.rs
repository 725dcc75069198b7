//! End-to-end seeded and unseeded schemes: extractor-inverter encoding
//! through a linear code, Monte Carlo correctness, and exact desk-scale
//! secrecy against enumerable adversary strategies.

use crate::channel::{avc_channels, product_output_dist, sample, wiretap2_channel, wiretap2_masks, AvcSpec, TransitionMatrix};
use crate::ecc::LinearCode;
use crate::extractor::ExtractorKind;
use crate::oracle::{exact_du, variational_distance};
use crate::{Error, Result};
use serde::Serialize;

/// Joint-table cap for exact secrecy: |M| · |S| · |Z|ⁿ entries.
pub const MAX_JOINT_ENTRIES: u64 = 1 << 24;

/// Adversary channel model, determining the enumerable strategy set.
#[derive(Clone, Debug)]
pub enum AdversarySpec {
    /// Fixed (possibly non-identical) per-use channels; one strategy.
    Memoryless { per_use: Vec<TransitionMatrix> },
    /// Selection adversary reading q of n bits noiselessly; strategies are
    /// all weight-q masks.
    Wiretap2 { q: usize },
    /// Type-constrained varying channel; strategies are all state orders.
    Avc { spec: AvcSpec },
}

/// A complete scheme: extractor + inverter over l = k bits, a binary
/// (n, k) code, per-use receiver channels, an adversary model, and the
/// number of message blocks t for the unseeded variant.
#[derive(Clone, Debug)]
pub struct SchemeConfig {
    pub extractor: ExtractorKind,
    pub code: LinearCode,
    pub receiver: Vec<TransitionMatrix>,
    pub adversary: AdversarySpec,
    pub t: u64,
}

impl SchemeConfig {
    pub fn validate(&self) -> Result<()> {
        if self.code.p() != 2 {
            return Err(Error::InvalidParameter(
                "scheme codes must be binary".into(),
            ));
        }
        if self.extractor.l() as usize != self.code.k() {
            return Err(Error::DimensionMismatch(format!(
                "extractor input length {} but code dimension {}",
                self.extractor.l(),
                self.code.k()
            )));
        }
        if self.receiver.len() != self.code.n() {
            return Err(Error::DimensionMismatch(format!(
                "{} receiver channel uses but code length {}",
                self.receiver.len(),
                self.code.n()
            )));
        }
        if self.t < 1 {
            return Err(Error::InvalidParameter("t must be at least 1".into()));
        }
        Ok(())
    }

    /// All adversary per-use channel lists in the strategy set.
    pub fn strategies(&self) -> Result<Vec<Vec<TransitionMatrix>>> {
        let n = self.code.n();
        match &self.adversary {
            AdversarySpec::Memoryless { per_use } => {
                if per_use.len() != n {
                    return Err(Error::DimensionMismatch(format!(
                        "{} adversary uses but code length {n}",
                        per_use.len()
                    )));
                }
                Ok(vec![per_use.clone()])
            }
            AdversarySpec::Wiretap2 { q } => wiretap2_masks(n, *q)
                .iter()
                .map(|mask| wiretap2_channel(n, mask, *q))
                .collect(),
            AdversarySpec::Avc { spec } => spec
                .state_sequences(n)?
                .iter()
                .map(|seq| avc_channels(spec, seq))
                .collect(),
        }
    }
}

/// Bits of v as symbols, most significant first.
pub fn v_to_bits(v: u64, l: u32) -> Vec<u32> {
    (0..l).map(|i| (v >> (l - 1 - i) & 1) as u32).collect()
}

/// Inverse of `v_to_bits`.
pub fn bits_to_v(bits: &[u32]) -> u64 {
    bits.iter().fold(0, |acc, &b| acc << 1 | u64::from(b))
}

/// Encoder: draw fresh r, invert (m, s, r) to v, encode v. Returns the
/// transmitted word and v itself.
pub fn send(cfg: &SchemeConfig, m: u64, s: u64, rng: &mut dyn rand::RngCore) -> Result<(Vec<u32>, u64)> {
    cfg.validate()?;
    let ext = cfg.extractor.build()?;
    let p = ext.params();
    let r = if p.rand_len == 0 {
        0
    } else {
        rng.next_u64() & ((1u64 << p.rand_len) - 1)
    };
    let v = ext.invert(m, s, r)?;
    let x = cfg.code.encode(&v_to_bits(v, p.l))?;
    Ok((x, v))
}

/// Decoder: nearest-codeword decode then extract with the shared seed.
pub fn receive(cfg: &SchemeConfig, y: &[u32], s: u64) -> Result<u64> {
    cfg.validate()?;
    let ext = cfg.extractor.build()?;
    let v = bits_to_v(&cfg.code.decode(y)?);
    ext.extract(v, s)
}

/// Monte Carlo correctness of the seeded scheme.
#[derive(Clone, Debug, Serialize)]
pub struct CorrectnessReport {
    pub trials: u64,
    /// Pr[DEC(ChR(ECC(v))) ≠ v]: block decoding failure.
    pub v_error_rate: f64,
    /// Pr[m′ ≠ m]: end-to-end message error.
    pub m_error_rate: f64,
    /// Message error rate conditioned on each message value.
    pub per_message: Vec<f64>,
}

pub fn run_seeded_trials(
    cfg: &SchemeConfig,
    trials: u64,
    rng: &mut dyn rand::RngCore,
) -> Result<CorrectnessReport> {
    cfg.validate()?;
    if trials == 0 {
        return Err(Error::InvalidParameter("need at least one trial".into()));
    }
    let ext = cfg.extractor.build()?;
    let p = ext.params();
    let m_count = 1u64 << p.lambda;
    let mut v_errors = 0u64;
    let mut m_errors = 0u64;
    let mut per_m_errors = vec![0u64; m_count as usize];
    let mut per_m_trials = vec![0u64; m_count as usize];
    for _ in 0..trials {
        let m = rng.next_u64() & (m_count - 1);
        let s = ext.sample_seed(rng);
        let (x, v) = send(cfg, m, s, rng)?;
        let y = sample(&cfg.receiver, &x, rng)?;
        let v_dec = bits_to_v(&cfg.code.decode(&y)?);
        let m_dec = ext.extract(v_dec, s)?;
        per_m_trials[m as usize] += 1;
        if v_dec != v {
            v_errors += 1;
        }
        if m_dec != m {
            m_errors += 1;
            per_m_errors[m as usize] += 1;
        }
    }
    let per_message = per_m_errors
        .iter()
        .zip(&per_m_trials)
        .map(|(&e, &t)| if t == 0 { 0.0 } else { e as f64 / t as f64 })
        .collect();
    Ok(CorrectnessReport {
        trials,
        v_error_rate: v_errors as f64 / trials as f64,
        m_error_rate: m_errors as f64 / trials as f64,
        per_message,
    })
}

/// Transcript of one unseeded run: t seeded message rounds, then the seed
/// itself ECC-encoded and sent last so the adversary's channel strategy
/// cannot depend on it.
#[derive(Clone, Debug, Serialize)]
pub struct UnseededReport {
    pub recovered: Vec<u64>,
    pub seed_recovered: bool,
    /// True for round i when the receiver got message i right; all false
    /// when the seed itself was lost.
    pub round_ok: Vec<bool>,
}

pub fn run_unseeded(
    cfg: &SchemeConfig,
    messages: &[u64],
    rng: &mut dyn rand::RngCore,
) -> Result<UnseededReport> {
    cfg.validate()?;
    if messages.len() != cfg.t as usize {
        return Err(Error::DimensionMismatch(format!(
            "{} messages but t = {}",
            messages.len(),
            cfg.t
        )));
    }
    let ext = cfg.extractor.build()?;
    let p = ext.params();
    let s = ext.sample_seed(rng);

    // message rounds
    let mut received_words = Vec::with_capacity(messages.len());
    for &m in messages {
        let (x, _) = send(cfg, m, s, rng)?;
        received_words.push(sample(&cfg.receiver, &x, rng)?);
    }

    // seed rounds: chunk the seed into k-bit blocks, reuse the code
    let k = cfg.code.k() as u32;
    let blocks = p.seed_len.div_ceil(k).max(1);
    let mut seed_bits: Vec<u32> = (0..p.seed_len)
        .map(|i| (s >> (p.seed_len - 1 - i) & 1) as u32)
        .collect();
    seed_bits.resize((blocks * k) as usize, 0);
    let mut decoded_seed_bits = Vec::new();
    for chunk in seed_bits.chunks(k as usize) {
        let x = cfg.code.encode(chunk)?;
        let y = sample(&cfg.receiver, &x, rng)?;
        decoded_seed_bits.extend(cfg.code.decode(&y)?);
    }
    decoded_seed_bits.truncate(p.seed_len as usize);
    let s_dec = bits_to_v(&decoded_seed_bits);
    let seed_recovered = s_dec == s && ext.seed_valid(s_dec);

    let mut recovered = Vec::with_capacity(messages.len());
    let mut round_ok = Vec::with_capacity(messages.len());
    for (y, &m) in received_words.iter().zip(messages) {
        if !ext.seed_valid(s_dec) {
            recovered.push(0);
            round_ok.push(false);
            continue;
        }
        let m_dec = ext.extract(bits_to_v(&cfg.code.decode(y)?), s_dec)?;
        recovered.push(m_dec);
        round_ok.push(seed_recovered && m_dec == m);
    }
    Ok(UnseededReport {
        recovered,
        seed_recovered,
        round_ok,
    })
}

/// Exact secrecy of the seeded scheme against its whole strategy set.
#[derive(Clone, Debug, Serialize)]
pub struct SecrecyReport {
    /// max over strategies of d_U(M | Z⁽ⁿ⁾, S), uniform message.
    pub rm: f64,
    /// max over strategies and message pairs of the pairwise advantage.
    pub mt: f64,
    pub per_strategy_rm: Vec<f64>,
    pub per_strategy_mt: Vec<f64>,
}

/// Exact joint-distribution secrecy evaluation; enumerates messages,
/// seeds, local randomness, and the whole output space per strategy.
pub fn exact_secrecy(cfg: &SchemeConfig) -> Result<SecrecyReport> {
    cfg.validate()?;
    let ext = cfg.extractor.build()?;
    let strategies = cfg.strategies()?;
    let mut per_strategy_rm = Vec::with_capacity(strategies.len());
    let mut per_strategy_mt = Vec::with_capacity(strategies.len());
    for per_use in &strategies {
        let (rm, mt) = strategy_secrecy(cfg, ext.as_ref(), per_use)?;
        per_strategy_rm.push(rm);
        per_strategy_mt.push(mt);
    }
    Ok(SecrecyReport {
        rm: per_strategy_rm.iter().copied().fold(0.0, f64::max),
        mt: per_strategy_mt.iter().copied().fold(0.0, f64::max),
        per_strategy_rm,
        per_strategy_mt,
    })
}

fn strategy_secrecy(
    cfg: &SchemeConfig,
    ext: &dyn crate::extractor::InvertibleExtractor,
    per_use: &[TransitionMatrix],
) -> Result<(f64, f64)> {
    let p = ext.params();
    let m_count = 1u64 << p.lambda;
    let r_count = 1u64 << p.rand_len;
    let seeds = ext.seed_count();
    let z_count: u64 = per_use.iter().map(|w| w.outputs() as u64).product();
    let entries = m_count
        .checked_mul(seeds)
        .and_then(|e| e.checked_mul(z_count))
        .ok_or_else(|| Error::TooLarge("joint table overflows".into()))?;
    if entries > MAX_JOINT_ENTRIES {
        return Err(Error::TooLarge(format!(
            "joint table of {entries} entries exceeds 2^24"
        )));
    }
    // per-v output distributions, computed once per strategy
    let v_count = 1u64 << p.l;
    let mut dist_cache: Vec<Option<Vec<f64>>> = vec![None; v_count as usize];
    let cols = (seeds * z_count) as usize;
    let mut joint = vec![vec![0.0f64; cols]; m_count as usize];
    let coeff = 1.0 / (m_count * seeds * r_count) as f64;
    for si in 0..seeds {
        let s = ext.seed_at(si);
        let col0 = (si * z_count) as usize;
        for m in 0..m_count {
            let row = &mut joint[m as usize];
            for r in 0..r_count {
                let v = ext.invert(m, s, r)?;
                if dist_cache[v as usize].is_none() {
                    let x = cfg.code.encode(&v_to_bits(v, p.l))?;
                    dist_cache[v as usize] =
                        Some(product_output_dist(per_use, &x)?.probs().to_vec());
                }
                let dist = dist_cache[v as usize].as_ref().unwrap();
                for (z, &pz) in dist.iter().enumerate() {
                    row[col0 + z] += coeff * pz;
                }
            }
        }
    }
    let rm = exact_du(&joint)?;
    // pairwise advantage between conditional distributions P(z, s | m)
    let mut mt = 0.0f64;
    for a in 0..m_count as usize {
        for b in a + 1..m_count as usize {
            let pa: Vec<f64> = joint[a].iter().map(|&x| x * m_count as f64).collect();
            let pb: Vec<f64> = joint[b].iter().map(|&x| x * m_count as f64).collect();
            mt = mt.max(variational_distance(&pa, &pb)?);
        }
    }
    Ok((rm, mt))
}

/// Secrecy of a bare coded channel without the extractor layer: M is the
/// uniform code message, Z the adversary's view of its codeword. Returns
/// (rm, mt) computed exactly.
pub fn coded_channel_secrecy(
    per_use: &[TransitionMatrix],
    code: &LinearCode,
) -> Result<(f64, f64)> {
    if code.message_count() > 1 << 12 {
        return Err(Error::TooLarge("too many messages to enumerate".into()));
    }
    let m_count = code.message_count();
    let rows: Vec<Vec<f64>> = (0..m_count)
        .map(|idx| {
            let x = code.encode(&code.message_at(idx))?;
            Ok(product_output_dist(per_use, &x)?.probs().to_vec())
        })
        .collect::<Result<_>>()?;
    let joint: Vec<Vec<f64>> = rows
        .iter()
        .map(|r| r.iter().map(|&p| p / m_count as f64).collect())
        .collect();
    let rm = exact_du(&joint)?;
    let mut mt = 0.0f64;
    for a in 0..rows.len() {
        for b in a + 1..rows.len() {
            mt = mt.max(variational_distance(&rows[a], &rows[b])?);
        }
    }
    Ok((rm, mt))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channel::TransitionMatrix;
    use crate::ecc::{hamming_7_4, identity_code, repetition_code};
    use rand::SeedableRng;
    use rand_chacha::ChaCha12Rng;
    use std::collections::BTreeMap;

    fn noiseless_cfg(ext: ExtractorKind, code: LinearCode) -> SchemeConfig {
        let n = code.n();
        SchemeConfig {
            extractor: ext,
            code,
            receiver: vec![TransitionMatrix::noiseless(2); n],
            adversary: AdversarySpec::Memoryless {
                per_use: vec![TransitionMatrix::uniform_noise(2, 2); n],
            },
            t: 1,
        }
    }

    #[test]
    fn send_receive_round_trip() {
        let mut rng = ChaCha12Rng::seed_from_u64(7);
        for ext in [
            ExtractorKind::FiniteField { l: 4, lambda: 2 },
            ExtractorKind::Toeplitz { l: 4, lambda: 2 },
        ] {
            let cfg = noiseless_cfg(ext, hamming_7_4());
            let built = cfg.extractor.build().unwrap();
            for m in 0..4u64 {
                let s = built.sample_seed(&mut rng);
                let (x, v) = send(&cfg, m, s, &mut rng).unwrap();
                assert_eq!(bits_to_v(&cfg.code.decode(&x).unwrap()), v);
                assert_eq!(receive(&cfg, &x, s).unwrap(), m);
            }
        }
    }

    #[test]
    fn toeplitz_zero_seed_sends_r_then_m() {
        // identity code, Toeplitz with s = 0: v = (r, m)
        let cfg = noiseless_cfg(
            ExtractorKind::Toeplitz { l: 4, lambda: 2 },
            identity_code(2, 4).unwrap(),
        );
        let mut rng = ChaCha12Rng::seed_from_u64(1);
        for m in 0..4u64 {
            let (x, v) = send(&cfg, m, 0, &mut rng).unwrap();
            assert_eq!(v & 0b11, m, "low bits carry the message");
            assert_eq!(bits_to_v(&x), v);
        }
    }

    #[test]
    fn deterministic_given_rng_seed() {
        let cfg = noiseless_cfg(
            ExtractorKind::FiniteField { l: 4, lambda: 2 },
            hamming_7_4(),
        );
        let a = send(&cfg, 3, 5, &mut ChaCha12Rng::seed_from_u64(99)).unwrap();
        let b = send(&cfg, 3, 5, &mut ChaCha12Rng::seed_from_u64(99)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn noiseless_trials_have_zero_errors() {
        let cfg = noiseless_cfg(
            ExtractorKind::FiniteField { l: 4, lambda: 2 },
            hamming_7_4(),
        );
        let mut rng = ChaCha12Rng::seed_from_u64(3);
        let rep = run_seeded_trials(&cfg, 500, &mut rng).unwrap();
        assert_eq!(rep.v_error_rate, 0.0);
        assert_eq!(rep.m_error_rate, 0.0);
    }

    #[test]
    fn repetition_over_fair_coin_is_useless() {
        // BSC(0.5): the received word is independent of the sent one
        let code = repetition_code(2, 3).unwrap();
        let mut cfg = noiseless_cfg(ExtractorKind::FiniteField { l: 1, lambda: 1 }, code);
        cfg.receiver = vec![TransitionMatrix::bsc(0.5).unwrap(); 3];
        let mut rng = ChaCha12Rng::seed_from_u64(11);
        let rep = run_seeded_trials(&cfg, 20_000, &mut rng).unwrap();
        assert!((rep.m_error_rate - 0.5).abs() < 0.02, "{}", rep.m_error_rate);
    }

    #[test]
    fn unseeded_round_trip_and_seed_loss() {
        let mut cfg = noiseless_cfg(
            ExtractorKind::FiniteField { l: 4, lambda: 2 },
            hamming_7_4(),
        );
        cfg.t = 3;
        let mut rng = ChaCha12Rng::seed_from_u64(5);
        let rep = run_unseeded(&cfg, &[1, 2, 3], &mut rng).unwrap();
        assert!(rep.seed_recovered);
        assert_eq!(rep.recovered, vec![1, 2, 3]);
        assert!(rep.round_ok.iter().all(|&b| b));

        // always-flip channel: uncorrectable, seed lost, all rounds failed
        cfg.receiver = vec![TransitionMatrix::bsc(1.0).unwrap(); 7];
        let rep = run_unseeded(&cfg, &[1, 2, 3], &mut rng).unwrap();
        assert!(!rep.seed_recovered);
        assert!(rep.round_ok.iter().all(|&b| !b));
    }

    #[test]
    fn fully_noisy_adversary_leaks_nothing() {
        let cfg = noiseless_cfg(
            ExtractorKind::FiniteField { l: 3, lambda: 1 },
            identity_code(2, 3).unwrap(),
        );
        let rep = exact_secrecy(&cfg).unwrap();
        assert!(rep.rm < 1e-12);
        assert!(rep.mt < 1e-12);
    }

    #[test]
    fn noiseless_adversary_with_full_rate_leaks_everything() {
        // λ = l: v determines m given s, and the adversary sees v
        let mut cfg = noiseless_cfg(
            ExtractorKind::FiniteField { l: 3, lambda: 3 },
            identity_code(2, 3).unwrap(),
        );
        cfg.adversary = AdversarySpec::Memoryless {
            per_use: vec![TransitionMatrix::noiseless(2); 3],
        };
        let rep = exact_secrecy(&cfg).unwrap();
        assert!((rep.rm - (1.0 - 1.0 / 8.0)).abs() < 1e-9);
        assert!((rep.mt - 1.0).abs() < 1e-9);
    }

    #[test]
    fn wiretap2_strategies_enumerate_masks() {
        let mut cfg = noiseless_cfg(
            ExtractorKind::FiniteField { l: 4, lambda: 1 },
            identity_code(2, 4).unwrap(),
        );
        cfg.adversary = AdversarySpec::Wiretap2 { q: 2 };
        assert_eq!(cfg.strategies().unwrap().len(), 6);
        let rep = exact_secrecy(&cfg).unwrap();
        assert_eq!(rep.per_strategy_rm.len(), 6);
        // bound from the closed form: ½·2^{(1+2−4)/2}
        let bound = crate::bounds::wiretap2_bound(1, 2, 4).epsilon_sec_rm;
        for &v in &rep.per_strategy_rm {
            assert!(v <= bound + 1e-9, "{v} > {bound}");
        }
    }

    #[test]
    fn avc_order_invariance_small() {
        let spec = AvcSpec::new(
            vec![
                TransitionMatrix::bsc(0.1).unwrap(),
                TransitionMatrix::bsc(0.4).unwrap(),
            ],
            BTreeMap::from([(0, 0.5), (1, 0.5)]),
        )
        .unwrap();
        let mut cfg = noiseless_cfg(
            ExtractorKind::FiniteField { l: 4, lambda: 1 },
            identity_code(2, 4).unwrap(),
        );
        cfg.adversary = AdversarySpec::Avc { spec };
        let rep = exact_secrecy(&cfg).unwrap();
        assert_eq!(rep.per_strategy_rm.len(), 6);
        for &v in &rep.per_strategy_rm {
            assert!((v - rep.per_strategy_rm[0]).abs() < 1e-9);
        }
    }

    #[test]
    fn coded_secrecy_anchors() {
        // fully noisy: nothing leaks
        let noisy = vec![TransitionMatrix::uniform_noise(2, 2); 2];
        let code = identity_code(2, 2).unwrap();
        let (rm, mt) = coded_channel_secrecy(&noisy, &code).unwrap();
        assert!(rm < 1e-12 && mt < 1e-12);

        // noiseless: rm = 1 − 1/|M|, mt = 1
        let clean = vec![TransitionMatrix::noiseless(2); 2];
        let (rm, mt) = coded_channel_secrecy(&clean, &code).unwrap();
        assert!((rm - 0.75).abs() < 1e-12);
        assert!((mt - 1.0).abs() < 1e-12);

        // mt ≤ 2·rm on a symmetric instance
        let bsc = vec![TransitionMatrix::bsc(0.2).unwrap(); 3];
        let rep3 = repetition_code(2, 3).unwrap();
        let (rm, mt) = coded_channel_secrecy(&bsc, &rep3).unwrap();
        assert!(mt <= 2.0 * rm + 1e-12);
    }
}
