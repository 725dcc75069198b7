//! Exhaustive oracles: exact guessing probability, exact uniformity
//! distance, cut-and-redistribute smoothing, and brute-force checks of the
//! extractor properties. Everything here enumerates its whole space; these
//! are the references the analytical bounds are tested against.

use crate::extractor::InvertibleExtractor;
use crate::prob::{kahan_sum, ProbVector, SUM_TOLERANCE};
use crate::{Error, Result};
use std::collections::HashMap;

/// Joint distribution P(a, b) as a dense row-major matrix `joint[a][b]`.
fn validate_joint(joint: &[Vec<f64>]) -> Result<()> {
    if joint.is_empty() || joint[0].is_empty() {
        return Err(Error::InvalidDistribution("empty joint distribution".into()));
    }
    let cols = joint[0].len();
    if joint.iter().any(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch("ragged joint distribution".into()));
    }
    if joint.iter().flatten().any(|&p| p < 0.0) {
        return Err(Error::InvalidDistribution("negative joint entry".into()));
    }
    let total = kahan_sum(joint.iter().flatten().copied());
    if (total - 1.0).abs() > SUM_TOLERANCE {
        return Err(Error::InvalidDistribution(format!(
            "joint sums to {total}"
        )));
    }
    Ok(())
}

/// Exact guessing probability of A from B under `joint[a][b]`:
/// P_guess = Σ_b max_a P(a, b). Equals 2⁻ᴴ∞ for the conditional
/// min-entropy H∞(A|B).
pub fn exact_pguess(joint: &[Vec<f64>]) -> Result<f64> {
    validate_joint(joint)?;
    let cols = joint[0].len();
    let mut total = 0.0;
    for b in 0..cols {
        let best = joint
            .iter()
            .map(|row| row[b])
            .fold(0.0f64, f64::max);
        total += best;
    }
    Ok(total)
}

/// Exact distance of A from uniform given B:
/// d(A | B) = ½ Σ_b Σ_a |P(a, b) - P(b) / |A||.
pub fn exact_du(joint: &[Vec<f64>]) -> Result<f64> {
    validate_joint(joint)?;
    let na = joint.len() as f64;
    let cols = joint[0].len();
    let mut total = 0.0;
    for b in 0..cols {
        let pb = kahan_sum(joint.iter().map(|row| row[b]));
        for row in joint {
            total += (row[b] - pb / na).abs();
        }
    }
    Ok(total / 2.0)
}

/// Exact variational distance ½ Σ |p - q| between equal-length vectors.
pub fn variational_distance(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(format!(
            "distributions of length {} and {}",
            p.len(),
            q.len()
        )));
    }
    Ok(kahan_sum(p.iter().zip(q).map(|(a, b)| (a - b).abs())) / 2.0)
}

/// Cut construction: cap every probability at `cap` and redistribute the
/// removed mass onto the largest below-cap entries, filling each up to the
/// cap; the last touched entry keeps the residual. The result is a valid
/// distribution with no mass above `cap`, and the returned ε (the total
/// mass moved) is exactly the variational distance to the input.
pub fn cut_distribution(d: &ProbVector, cap: f64) -> Result<(ProbVector, f64)> {
    if !(0.0..=1.0).contains(&cap) {
        return Err(Error::ProbabilityRange(cap));
    }
    let n = d.len();
    if cap * (n as f64) < 1.0 - SUM_TOLERANCE {
        return Err(Error::InvalidParameter(format!(
            "cap {cap} below the uniform level 1/{n}"
        )));
    }
    let mut out: Vec<f64> = d.probs().to_vec();
    for p in &mut out {
        *p = p.min(cap);
    }
    let eps = kahan_sum(d.probs().iter().map(|&p| (p - cap).max(0.0)));
    // fill the largest below-cap entries first, matching the sorted form
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| d.probs()[b].partial_cmp(&d.probs()[a]).unwrap());
    let mut excess = eps;
    for &i in &order {
        if excess <= 0.0 {
            break;
        }
        let room = cap - out[i];
        if room > 0.0 {
            let add = room.min(excess);
            out[i] += add;
            excess -= add;
        }
    }
    Ok((ProbVector::new(out)?, eps))
}

/// Sum of the top `t` entries of a descending-sorted probability list.
pub fn top_sum(sorted: &[f64], t: u64) -> Result<f64> {
    if (sorted.len() as u64) < t {
        return Err(Error::InvalidParameter(format!(
            "need the top {t} entries but only {} are present",
            sorted.len()
        )));
    }
    Ok(kahan_sum(sorted.iter().take(t as usize).copied()))
}

/// Exact smoothed guessing value: cut the conditional distribution at
/// `cap`, then take the top-⌈|Z|ⁿ/|V|⌉ sum of the result. Returns the
/// (guessing bound, smoothing ε) pair.
pub fn exact_smooth_guess_bound(
    sorted_cond: &ProbVector,
    v_size: u64,
    z_size: u64,
    n: usize,
    cap: f64,
) -> Result<(f64, f64)> {
    let outcomes = z_size
        .checked_pow(n as u32)
        .ok_or_else(|| Error::TooLarge("|Z|^n overflows".into()))?;
    let t = outcomes.div_ceil(v_size);
    let (cut, eps) = cut_distribution(sorted_cond, cap)?;
    Ok((top_sum(cut.sorted(), t)?, eps))
}

/// Brute-force check that the inverter is a bijection between
/// {0,1}^λ × {0,1}^(l-λ) and {0,1}^l for every seed, and that extract is
/// its left inverse. Implies: with uniform (m, r) the inverter output is
/// uniform on {0,1}^l.
pub fn verify_inverter_uniformity(ext: &dyn InvertibleExtractor) -> Result<()> {
    let p = ext.params();
    let v_count = 1u64 << p.l;
    for si in 0..ext.seed_count() {
        let s = ext.seed_at(si);
        let mut seen = vec![false; v_count as usize];
        for m in 0..1u64 << p.lambda {
            for r in 0..1u64 << p.rand_len {
                let v = ext.invert(m, s, r)?;
                if v >= v_count {
                    return Err(Error::InvalidParameter(format!(
                        "inverter output {v} outside the field"
                    )));
                }
                if seen[v as usize] {
                    return Err(Error::InvalidParameter(format!(
                        "inverter collision at v = {v}, seed {s}"
                    )));
                }
                seen[v as usize] = true;
                if ext.extract(v, s)? != m {
                    return Err(Error::InvalidParameter(format!(
                        "extract(invert({m}, {s}, {r})) != {m}"
                    )));
                }
            }
        }
    }
    Ok(())
}

/// Brute-force two-universality check: for every pair v ≠ v', the fraction
/// of seeds with Ext(v, s) = Ext(v', s) is at most 2⁻λ (tolerance 1e-12).
pub fn verify_two_universality(ext: &dyn InvertibleExtractor) -> Result<()> {
    let p = ext.params();
    let v_count = 1u64 << p.l;
    let seeds: Vec<u64> = (0..ext.seed_count()).map(|i| ext.seed_at(i)).collect();
    let bound = 1.0 / (1u64 << p.lambda) as f64;
    // precompute Ext(v, s) for all v, s
    let mut table = vec![vec![0u64; seeds.len()]; v_count as usize];
    for v in 0..v_count {
        for (si, &s) in seeds.iter().enumerate() {
            table[v as usize][si] = ext.extract(v, s)?;
        }
    }
    for v in 0..v_count as usize {
        for v2 in v + 1..v_count as usize {
            let collisions = table[v]
                .iter()
                .zip(&table[v2])
                .filter(|(a, b)| a == b)
                .count();
            let rate = collisions as f64 / seeds.len() as f64;
            if rate > bound + 1e-12 {
                return Err(Error::InvalidParameter(format!(
                    "collision rate {rate} > 2^-λ = {bound} for pair ({v}, {v2})"
                )));
            }
        }
    }
    Ok(())
}

/// Exact distinguishing advantage of the best statistical test between two
/// distributions, which is the variational distance. Computed via the
/// maximizing event as a cross-check of the half-L1 formula.
pub fn distinguishing_advantage(p: &[f64], q: &[f64]) -> Result<f64> {
    if p.len() != q.len() {
        return Err(Error::DimensionMismatch(format!(
            "distributions of length {} and {}",
            p.len(),
            q.len()
        )));
    }
    Ok(kahan_sum(
        p.iter().zip(q).map(|(a, b)| (a - b).max(0.0)),
    ))
}

/// Check that every pair of conditional output distributions (rows of
/// `per_message[m]`, one per message) has the same variational distance to
/// the average, and return that common distance. Errors when the rows are
/// not equidistant within `tol`.
pub fn equidistance(per_message: &[Vec<f64>], tol: f64) -> Result<f64> {
    if per_message.is_empty() {
        return Err(Error::InvalidDistribution("no conditional rows".into()));
    }
    let cols = per_message[0].len();
    if per_message.iter().any(|r| r.len() != cols) {
        return Err(Error::DimensionMismatch("ragged conditional rows".into()));
    }
    let n = per_message.len() as f64;
    let avg: Vec<f64> = (0..cols)
        .map(|z| kahan_sum(per_message.iter().map(|r| r[z])) / n)
        .collect();
    let dists: Vec<f64> = per_message
        .iter()
        .map(|r| variational_distance(r, &avg))
        .collect::<Result<_>>()?;
    let first = dists[0];
    for (i, d) in dists.iter().enumerate() {
        if (d - first).abs() > tol {
            return Err(Error::InvalidParameter(format!(
                "row {i} at distance {d}, row 0 at {first}"
            )));
        }
    }
    Ok(first)
}

/// Equidistance of a coded channel: every message's output distribution
/// sits at the same variational distance Δ from the uniform-message
/// average, and every pairwise distance is at most 2Δ. Returns
/// (Δ, max pairwise distance).
pub fn verify_equidistance(
    per_use: &[crate::channel::TransitionMatrix],
    code: &crate::ecc::LinearCode,
) -> Result<(f64, f64)> {
    if code.message_count() > 1 << 12 {
        return Err(Error::TooLarge("too many messages to enumerate".into()));
    }
    let rows: Vec<Vec<f64>> = (0..code.message_count())
        .map(|idx| {
            let x = code.encode(&code.message_at(idx))?;
            Ok(crate::channel::product_output_dist(per_use, &x)?
                .probs()
                .to_vec())
        })
        .collect::<Result<_>>()?;
    let delta = equidistance(&rows, 1e-9)?;
    let mut max_pair = 0.0f64;
    for i in 0..rows.len() {
        for j in i + 1..rows.len() {
            max_pair = max_pair.max(variational_distance(&rows[i], &rows[j])?);
        }
    }
    if max_pair > 2.0 * delta + 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "pairwise distance {max_pair} exceeds 2Δ = {}",
            2.0 * delta
        )));
    }
    Ok((delta, max_pair))
}

/// Histogram of a sampled discrete sequence, as empirical frequencies.
pub fn empirical_frequencies<I: IntoIterator<Item = u64>>(samples: I) -> HashMap<u64, f64> {
    let mut counts: HashMap<u64, u64> = HashMap::new();
    let mut total = 0u64;
    for s in samples {
        *counts.entry(s).or_insert(0) += 1;
        total += 1;
    }
    counts
        .into_iter()
        .map(|(k, c)| (k, c as f64 / total as f64))
        .collect()
}
