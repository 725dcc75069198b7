//! Channel models: single-use transition matrices, memoryless products,
//! wiretap-II selection channels, type-constrained adversarially varying
//! channels, and symmetry classification.

use crate::ecc::LinearCode;
use crate::prob::{kahan_sum, ProbVector, SUM_TOLERANCE};
use crate::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// Hard cap on enumerated outcome spaces |Z|^n.
pub const MAX_OUTCOMES: u64 = 1 << 20;

const TOL: f64 = 1e-9;

/// One channel use W(z|x): a stochastic |X| × |Z| matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawMatrix", into = "RawMatrix")]
pub struct TransitionMatrix {
    inputs: usize,
    outputs: usize,
    rows: Vec<Vec<f64>>,
}

/// On-disk form: {"inputs": int, "outputs": int, "rows": [[float]]}.
#[derive(Serialize, Deserialize)]
struct RawMatrix {
    inputs: usize,
    outputs: usize,
    rows: Vec<Vec<f64>>,
}

impl TryFrom<RawMatrix> for TransitionMatrix {
    type Error = Error;
    fn try_from(raw: RawMatrix) -> Result<Self> {
        if raw.rows.len() != raw.inputs || raw.rows.iter().any(|r| r.len() != raw.outputs) {
            return Err(Error::DimensionMismatch(format!(
                "transition matrix must be {}x{}",
                raw.inputs, raw.outputs
            )));
        }
        TransitionMatrix::new(raw.rows)
    }
}

impl From<TransitionMatrix> for RawMatrix {
    fn from(m: TransitionMatrix) -> RawMatrix {
        RawMatrix {
            inputs: m.inputs,
            outputs: m.outputs,
            rows: m.rows,
        }
    }
}

impl TransitionMatrix {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let inputs = rows.len();
        if inputs == 0 {
            return Err(Error::InvalidParameter("channel with no inputs".into()));
        }
        let outputs = rows[0].len();
        if outputs == 0 || rows.iter().any(|r| r.len() != outputs) {
            return Err(Error::DimensionMismatch("ragged transition matrix".into()));
        }
        for (i, row) in rows.iter().enumerate() {
            if row.iter().any(|&p| p < 0.0) {
                return Err(Error::InvalidDistribution(format!(
                    "negative entry in row {i}"
                )));
            }
            let total = kahan_sum(row.iter().copied());
            if (total - 1.0).abs() > SUM_TOLERANCE {
                return Err(Error::InvalidDistribution(format!(
                    "row {i} sums to {total}"
                )));
            }
        }
        Ok(TransitionMatrix {
            inputs,
            outputs,
            rows,
        })
    }

    pub fn inputs(&self) -> usize {
        self.inputs
    }

    pub fn outputs(&self) -> usize {
        self.outputs
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn prob(&self, z: usize, x: usize) -> f64 {
        self.rows[x][z]
    }

    /// Binary symmetric channel with crossover probability p.
    pub fn bsc(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ProbabilityRange(p));
        }
        TransitionMatrix::new(vec![vec![1.0 - p, p], vec![p, 1.0 - p]])
    }

    /// Binary erasure channel; output 2 is the erasure symbol.
    pub fn bec(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::ProbabilityRange(p));
        }
        TransitionMatrix::new(vec![vec![1.0 - p, 0.0, p], vec![0.0, 1.0 - p, p]])
    }

    /// Noiseless identity channel on an alphabet of the given size.
    pub fn noiseless(size: usize) -> Self {
        let rows = (0..size)
            .map(|i| (0..size).map(|j| f64::from(i == j)).collect())
            .collect();
        TransitionMatrix::new(rows).expect("identity rows are stochastic")
    }

    /// Completely noisy channel: uniform output regardless of input.
    pub fn uniform_noise(inputs: usize, outputs: usize) -> Self {
        let rows = vec![vec![1.0 / outputs as f64; outputs]; inputs];
        TransitionMatrix::new(rows).expect("uniform rows are stochastic")
    }

    /// Ternary "cyclic-shift" channel over Z/q: W(z|x) depends on z - x mod q.
    /// Strongly symmetric by construction.
    pub fn cyclic(offsets: &[f64]) -> Result<Self> {
        let q = offsets.len();
        let rows = (0..q)
            .map(|x| (0..q).map(|z| offsets[(q + z - x) % q]).collect())
            .collect();
        TransitionMatrix::new(rows)
    }
}

fn outcome_count(per_use: &[TransitionMatrix]) -> Result<u64> {
    let mut total = 1u64;
    for m in per_use {
        total = total
            .checked_mul(m.outputs() as u64)
            .filter(|&t| t <= MAX_OUTCOMES)
            .ok_or_else(|| Error::TooLarge("outcome space exceeds 2^20".into()))?;
    }
    Ok(total)
}

/// Exact output distribution of a (not necessarily identical) memoryless
/// product channel on input x: P(z⁽ⁿ⁾) = ∏ Wᵢ(zᵢ|xᵢ).
///
/// Outcomes are indexed with symbol 0 most significant.
pub fn product_output_dist(per_use: &[TransitionMatrix], x: &[u32]) -> Result<ProbVector> {
    if per_use.len() != x.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} channel uses but {} input symbols",
            per_use.len(),
            x.len()
        )));
    }
    for (m, &xi) in per_use.iter().zip(x) {
        if xi as usize >= m.inputs() {
            return Err(Error::InvalidParameter(format!(
                "input symbol {xi} outside channel alphabet"
            )));
        }
    }
    let total = outcome_count(per_use)?;
    let mut probs = vec![1.0f64; 1];
    for (m, &xi) in per_use.iter().zip(x) {
        let row = &m.rows()[xi as usize];
        let mut next = Vec::with_capacity(probs.len() * row.len());
        for &p in &probs {
            for &w in row {
                next.push(p * w);
            }
        }
        probs = next;
    }
    debug_assert_eq!(probs.len() as u64, total);
    ProbVector::new(probs)
}

/// One draw of z⁽ⁿ⁾ from the product channel.
pub fn sample(per_use: &[TransitionMatrix], x: &[u32], rng: &mut dyn rand::RngCore) -> Result<Vec<u32>> {
    if per_use.len() != x.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} channel uses but {} input symbols",
            per_use.len(),
            x.len()
        )));
    }
    let mut out = Vec::with_capacity(x.len());
    for (m, &xi) in per_use.iter().zip(x) {
        let row = &m.rows()[xi as usize];
        let mut u: f64 = rng.gen();
        let mut z = row.len() - 1;
        for (j, &w) in row.iter().enumerate() {
            if u < w {
                z = j;
                break;
            }
            u -= w;
        }
        out.push(z as u32);
    }
    Ok(out)
}

/// Symmetry class of a single channel use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Symmetry {
    StronglySymmetric,
    Symmetric,
    Asymmetric,
}

/// Classification result with the witness output partition when one exists.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SymmetryReport {
    pub class: Symmetry,
    /// Output partition whose induced submatrices are strongly symmetric.
    pub partition: Option<Vec<Vec<usize>>>,
}

fn sorted_desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.partial_cmp(a).unwrap());
    v
}

fn lists_equal(a: &[f64], b: &[f64]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() <= TOL)
}

/// Rows and columns of the submatrix over `cols` are permutations of each
/// other.
fn block_strongly_symmetric(w: &TransitionMatrix, cols: &[usize]) -> bool {
    let row_profiles: Vec<Vec<f64>> = (0..w.inputs())
        .map(|x| sorted_desc(cols.iter().map(|&z| w.prob(z, x)).collect()))
        .collect();
    if !row_profiles.iter().all(|r| lists_equal(r, &row_profiles[0])) {
        return false;
    }
    let col_profiles: Vec<Vec<f64>> = cols
        .iter()
        .map(|&z| sorted_desc((0..w.inputs()).map(|x| w.prob(z, x)).collect()))
        .collect();
    col_profiles.iter().all(|c| lists_equal(c, &col_profiles[0]))
}

/// Classify a channel as strongly symmetric, symmetric, or asymmetric.
///
/// The partition search groups output columns by their sorted column
/// multiset; any strongly symmetric block must have identical column
/// multisets, so this stays polynomial.
pub fn classify_symmetry(w: &TransitionMatrix) -> SymmetryReport {
    let all: Vec<usize> = (0..w.outputs()).collect();
    if block_strongly_symmetric(w, &all) {
        return SymmetryReport {
            class: Symmetry::StronglySymmetric,
            partition: Some(vec![all]),
        };
    }
    // group columns by sorted multiset (within tolerance)
    let mut groups: Vec<(Vec<f64>, Vec<usize>)> = Vec::new();
    for z in 0..w.outputs() {
        let profile = sorted_desc((0..w.inputs()).map(|x| w.prob(z, x)).collect());
        match groups.iter_mut().find(|(p, _)| lists_equal(p, &profile)) {
            Some((_, members)) => members.push(z),
            None => groups.push((profile, vec![z])),
        }
    }
    let partition: Vec<Vec<usize>> = groups.into_iter().map(|(_, m)| m).collect();
    if partition
        .iter()
        .all(|block| block_strongly_symmetric(w, block))
    {
        SymmetryReport {
            class: Symmetry::Symmetric,
            partition: Some(partition),
        }
    } else {
        SymmetryReport {
            class: Symmetry::Asymmetric,
            partition: None,
        }
    }
}

/// Wiretap II per-use channels for a selection mask: a noiseless bit where
/// the mask is set, a completely noisy (uniform-output) bit elsewhere.
pub fn wiretap2_channel(n: usize, mask: &[bool], q: usize) -> Result<Vec<TransitionMatrix>> {
    if mask.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "mask length {} but n = {n}",
            mask.len()
        )));
    }
    let weight = mask.iter().filter(|&&b| b).count();
    if weight != q {
        return Err(Error::InvalidParameter(format!(
            "mask weight {weight} but q = {q}"
        )));
    }
    Ok(mask
        .iter()
        .map(|&observed| {
            if observed {
                TransitionMatrix::noiseless(2)
            } else {
                TransitionMatrix::uniform_noise(2, 2)
            }
        })
        .collect())
}

/// All weight-q masks of length n.
pub fn wiretap2_masks(n: usize, q: usize) -> Vec<Vec<bool>> {
    let mut out = Vec::new();
    for bits in 0u64..1 << n {
        if bits.count_ones() as usize == q {
            out.push((0..n).map(|i| bits >> (n - 1 - i) & 1 == 1).collect());
        }
    }
    out
}

/// A type-constrained adversarially varying channel: a set of per-state
/// channels and a fixed empirical frequency for each state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AvcSpec {
    pub states: Vec<TransitionMatrix>,
    /// Map from state index to frequency; must sum to 1.
    pub frequencies: BTreeMap<usize, f64>,
}

impl AvcSpec {
    pub fn new(states: Vec<TransitionMatrix>, frequencies: BTreeMap<usize, f64>) -> Result<Self> {
        if states.is_empty() {
            return Err(Error::InvalidParameter("AVC with no states".into()));
        }
        let (inp, out) = (states[0].inputs(), states[0].outputs());
        if states.iter().any(|s| s.inputs() != inp || s.outputs() != out) {
            return Err(Error::DimensionMismatch(
                "all AVC states must share alphabets".into(),
            ));
        }
        if frequencies.keys().any(|&q| q >= states.len()) {
            return Err(Error::InvalidParameter("frequency for unknown state".into()));
        }
        let total = kahan_sum(frequencies.values().copied());
        if (total - 1.0).abs() > SUM_TOLERANCE {
            return Err(Error::InvalidDistribution(format!(
                "state frequencies sum to {total}"
            )));
        }
        Ok(AvcSpec {
            states,
            frequencies,
        })
    }

    /// Exact per-state counts for block length n; errors when f_q · n is
    /// not integral.
    pub fn counts(&self, n: usize) -> Result<BTreeMap<usize, usize>> {
        let mut counts = BTreeMap::new();
        for (&q, &f) in &self.frequencies {
            let c = f * n as f64;
            if (c - c.round()).abs() > SUM_TOLERANCE * n as f64 {
                return Err(Error::InvalidParameter(format!(
                    "frequency {f} of state {q} is not integral at n = {n}"
                )));
            }
            if c.round() as usize > 0 {
                counts.insert(q, c.round() as usize);
            }
        }
        Ok(counts)
    }

    /// All state orderings consistent with the type constraint at length n.
    pub fn state_sequences(&self, n: usize) -> Result<Vec<StateSequence>> {
        let counts = self.counts(n)?;
        let mut seqs = Vec::new();
        let mut cur = Vec::with_capacity(n);
        fn rec(
            counts: &mut BTreeMap<usize, usize>,
            cur: &mut Vec<usize>,
            n: usize,
            out: &mut Vec<Vec<usize>>,
        ) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            let keys: Vec<usize> = counts.keys().copied().collect();
            for q in keys {
                if counts[&q] == 0 {
                    continue;
                }
                *counts.get_mut(&q).unwrap() -= 1;
                cur.push(q);
                rec(counts, cur, n, out);
                cur.pop();
                *counts.get_mut(&q).unwrap() += 1;
            }
        }
        let mut raw = Vec::new();
        let mut counts = counts;
        rec(&mut counts, &mut cur, n, &mut raw);
        for seq in raw {
            seqs.push(StateSequence { seq });
        }
        Ok(seqs)
    }
}

/// A concrete adversarial state ordering.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateSequence {
    pub seq: Vec<usize>,
}

/// Per-use channel list realizing a state sequence; errors when the
/// sequence violates the type constraint.
pub fn avc_channels(spec: &AvcSpec, seq: &StateSequence) -> Result<Vec<TransitionMatrix>> {
    let expected = spec.counts(seq.seq.len())?;
    let mut actual: BTreeMap<usize, usize> = BTreeMap::new();
    for &q in &seq.seq {
        if q >= spec.states.len() {
            return Err(Error::InvalidParameter(format!("unknown state {q}")));
        }
        *actual.entry(q).or_insert(0) += 1;
    }
    if actual != expected {
        return Err(Error::InvalidParameter(format!(
            "state counts {actual:?} violate the type constraint {expected:?}"
        )));
    }
    Ok(seq.seq.iter().map(|&q| spec.states[q].clone()).collect())
}

/// True iff every codeword produces the same descending-sorted output
/// probability vector, the operative consequence of symmetry closure
/// for linear codes over Z/p.
pub fn restricted_symmetry_check(per_use: &[TransitionMatrix], code: &LinearCode) -> Result<bool> {
    outcome_count(per_use)?;
    if code.message_count() > 1 << 16 {
        return Err(Error::TooLarge("too many codewords to enumerate".into()));
    }
    let mut reference: Option<Vec<f64>> = None;
    for idx in 0..code.message_count() {
        let x = code.encode(&code.message_at(idx))?;
        let dist = product_output_dist(per_use, &x)?;
        match &reference {
            None => reference = Some(dist.sorted().to_vec()),
            Some(r) => {
                if !lists_equal(r, dist.sorted()) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ecc::{identity_code, repetition_code};
    use rand::SeedableRng;

    #[test]
    fn product_dist_anchors() {
        let bsc = TransitionMatrix::bsc(0.2).unwrap();
        let d = product_output_dist(std::slice::from_ref(&bsc), &[0]).unwrap();
        assert!((d.probs()[0] - 0.8).abs() < 1e-12);
        assert!((d.probs()[1] - 0.2).abs() < 1e-12);

        let d = product_output_dist(&[bsc.clone(), bsc.clone()], &[0, 0]).unwrap();
        let expect = [0.64, 0.16, 0.16, 0.04];
        for (a, b) in d.probs().iter().zip(expect) {
            assert!((a - b).abs() < 1e-12);
        }

        let id = TransitionMatrix::noiseless(2);
        let d = product_output_dist(&[id.clone(), id.clone(), id], &[1, 0, 1]).unwrap();
        // point mass on x = 101 → index 5
        assert_eq!(d.probs()[5], 1.0);
        assert_eq!(kahan_sum(d.probs().iter().copied()), 1.0);
    }

    #[test]
    fn sampling_matches_exact_distribution() {
        let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(42);
        let noiseless = TransitionMatrix::noiseless(2);
        assert_eq!(
            sample(&[noiseless.clone(), noiseless], &[1, 0], &mut rng).unwrap(),
            vec![1, 0]
        );
        let flip = TransitionMatrix::bsc(1.0).unwrap();
        assert_eq!(sample(&[flip.clone(), flip], &[1, 0], &mut rng).unwrap(), vec![0, 1]);

        let bsc = TransitionMatrix::bsc(0.2).unwrap();
        let trials = 100_000;
        let mut ones = 0usize;
        for _ in 0..trials {
            if sample(std::slice::from_ref(&bsc), &[0], &mut rng).unwrap()[0] == 1 {
                ones += 1;
            }
        }
        let rate = ones as f64 / trials as f64;
        assert!((rate - 0.2).abs() < 0.01, "flip rate {rate}");
    }

    #[test]
    fn symmetry_classification_anchors() {
        let bsc = TransitionMatrix::bsc(0.3).unwrap();
        assert_eq!(classify_symmetry(&bsc).class, Symmetry::StronglySymmetric);

        let bec = TransitionMatrix::bec(0.25).unwrap();
        let report = classify_symmetry(&bec);
        assert_eq!(report.class, Symmetry::Symmetric);
        let partition = report.partition.unwrap();
        assert!(partition.contains(&vec![0, 1]));
        assert!(partition.contains(&vec![2]));

        let z = TransitionMatrix::new(vec![vec![1.0, 0.0], vec![0.3, 0.7]]).unwrap();
        assert_eq!(classify_symmetry(&z).class, Symmetry::Asymmetric);
    }

    #[test]
    fn degenerate_blocks_are_symmetric() {
        // single-input channel
        let single = TransitionMatrix::new(vec![vec![0.2, 0.5, 0.3]]).unwrap();
        assert_ne!(classify_symmetry(&single).class, Symmetry::Asymmetric);
    }

    #[test]
    fn product_of_strongly_symmetric_stays_symmetric() {
        // parameter grid over 2x2 and 3x3 strongly symmetric uses
        for &p in &[0.0, 0.1, 0.35, 0.5] {
            let w = TransitionMatrix::bsc(p).unwrap();
            let prod = tensor(&w, &w);
            assert_ne!(
                classify_symmetry(&prod).class,
                Symmetry::Asymmetric,
                "BSC({p}) ⊗ BSC({p})"
            );
        }
        for &(a, b) in &[(0.1, 0.2), (0.05, 0.15), (0.3, 0.3)] {
            let w = TransitionMatrix::cyclic(&[1.0 - a - b, a, b]).unwrap();
            assert_eq!(classify_symmetry(&w).class, Symmetry::StronglySymmetric);
            let prod = tensor(&w, &w);
            assert_ne!(classify_symmetry(&prod).class, Symmetry::Asymmetric);
        }
    }

    fn tensor(a: &TransitionMatrix, b: &TransitionMatrix) -> TransitionMatrix {
        let mut rows = Vec::new();
        for xa in 0..a.inputs() {
            for xb in 0..b.inputs() {
                let mut row = Vec::new();
                for za in 0..a.outputs() {
                    for zb in 0..b.outputs() {
                        row.push(a.prob(za, xa) * b.prob(zb, xb));
                    }
                }
                rows.push(row);
            }
        }
        TransitionMatrix::new(rows).unwrap()
    }

    #[test]
    fn wiretap2_anchors() {
        let all = wiretap2_channel(3, &[true, true, true], 3).unwrap();
        let d = product_output_dist(&all, &[1, 0, 1]).unwrap();
        assert_eq!(d.probs()[5], 1.0);

        let none = wiretap2_channel(3, &[false, false, false], 0).unwrap();
        let d = product_output_dist(&none, &[1, 0, 1]).unwrap();
        for &p in d.probs() {
            assert!((p - 0.125).abs() < 1e-12);
        }

        // n=3, q=1, w=100, x=101: P(z) = [z₀=1] · 1/4
        let w = wiretap2_channel(3, &[true, false, false], 1).unwrap();
        let d = product_output_dist(&w, &[1, 0, 1]).unwrap();
        for z in 0..8 {
            let expect = if z >= 4 { 0.25 } else { 0.0 };
            assert!((d.probs()[z] - expect).abs() < 1e-12);
        }

        assert!(wiretap2_channel(3, &[true, false, false], 2).is_err());
        assert_eq!(wiretap2_masks(6, 2).len(), 15);
    }

    #[test]
    fn avc_anchors() {
        let spec = AvcSpec::new(
            vec![TransitionMatrix::bsc(0.0).unwrap(), TransitionMatrix::bsc(0.5).unwrap()],
            BTreeMap::from([(0, 0.5), (1, 0.5)]),
        )
        .unwrap();
        let seqs = spec.state_sequences(2).unwrap();
        assert_eq!(seqs.len(), 2);
        for seq in &seqs {
            let chans = avc_channels(&spec, seq).unwrap();
            assert_eq!(chans.len(), 2);
        }
        // counts mismatch
        let bad = StateSequence { seq: vec![0, 0] };
        assert!(avc_channels(&spec, &bad).is_err());

        let single = AvcSpec::new(
            vec![TransitionMatrix::bsc(0.1).unwrap()],
            BTreeMap::from([(0, 1.0)]),
        )
        .unwrap();
        let seqs = single.state_sequences(3).unwrap();
        assert_eq!(seqs.len(), 1);
        assert_eq!(seqs[0].seq, vec![0, 0, 0]);
    }

    #[test]
    fn restricted_symmetry_anchors() {
        let bsc = TransitionMatrix::bsc(0.2).unwrap();
        let id = identity_code(2, 2).unwrap();
        assert!(restricted_symmetry_check(&[bsc.clone(), bsc.clone()], &id).unwrap());

        let rep = repetition_code(2, 3).unwrap();
        let uses = vec![bsc.clone(), bsc.clone(), bsc.clone()];
        assert!(restricted_symmetry_check(&uses, &rep).unwrap());

        // verifier on a non-identical product: still a permutation here
        let other = TransitionMatrix::bsc(0.3).unwrap();
        let id2 = identity_code(2, 2).unwrap();
        assert!(restricted_symmetry_check(&[bsc, other], &id2).unwrap());
    }

    #[test]
    fn sorted_output_invariance_under_joint_permutation() {
        let a = TransitionMatrix::bsc(0.1).unwrap();
        let b = TransitionMatrix::bsc(0.4).unwrap();
        let x = [1u32, 0];
        let d1 = product_output_dist(&[a.clone(), b.clone()], &x).unwrap();
        let d2 = product_output_dist(&[b, a], &[x[1], x[0]]).unwrap();
        for (p, q) in d1.sorted().iter().zip(d2.sorted()) {
            assert!((p - q).abs() < 1e-12);
        }
    }
}
