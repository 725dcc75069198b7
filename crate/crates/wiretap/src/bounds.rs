//! Closed-form and semi-numeric secrecy bounds, rate formulas, and the
//! message-length curves comparing them over a grid of block lengths.

use crate::channel::TransitionMatrix;
use crate::oracle::top_sum;
use crate::prob::{binary_entropy, kahan_sum, ProbVector};
use crate::{Error, Result};
use serde::Serialize;

/// Parameter record attached to every bound, for provenance.
#[derive(Clone, Debug, Default, Serialize)]
pub struct BoundParams {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ell: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub k: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub q: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub p_a: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub kappa: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps_smooth: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub z_size: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub v_size: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m_size: Option<u64>,
}

/// A secrecy bound for uniformly random messages, with the arbitrary-message
/// bound attached when the factor-two conversion applies.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub epsilon_sec_rm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon_sec_mt: Option<f64>,
    /// True when the bound is ≥ ½ and therefore carries no information.
    pub vacuous: bool,
    pub params: BoundParams,
    pub source: String,
}

impl BoundReport {
    fn new(eps: f64, params: BoundParams, source: &str) -> Self {
        BoundReport {
            epsilon_sec_rm: eps,
            epsilon_sec_mt: None,
            vacuous: eps >= 0.5 || eps.is_nan(),
            params,
            source: source.to_string(),
        }
    }

    /// Attach the arbitrary-message bound mt = 2·rm; valid for linear codes
    /// over Z/p through symmetric memoryless uses.
    pub fn with_mt_factor(mut self) -> Self {
        self.epsilon_sec_mt = Some(2.0 * self.epsilon_sec_rm);
        self
    }
}

/// Worst-case top-probability bound: ε = ½√(2^ℓ · Σ_{i<⌈|Z|ⁿ/|V|⌉} pᵢ),
/// where pᵢ is the shared descending-sorted conditional output
/// distribution of each codeword.
pub fn simple_bound(
    ell: u64,
    sorted_cond: &ProbVector,
    v_size: u64,
    z_size: u64,
    n: usize,
) -> Result<BoundReport> {
    let outcomes = z_size
        .checked_pow(n as u32)
        .ok_or_else(|| Error::TooLarge("|Z|^n overflows".into()))?;
    let t = outcomes.div_ceil(v_size);
    let sum = top_sum(sorted_cond.sorted(), t)?;
    let eps = 0.5 * ((1u64 << ell) as f64 * sum).sqrt();
    Ok(BoundReport::new(
        eps,
        BoundParams {
            n: Some(n as u64),
            ell: Some(ell),
            z_size: Some(z_size),
            v_size: Some(v_size),
            m_size: Some(1 << ell),
            ..Default::default()
        },
        "top-probability sum, uniform message",
    ))
}

/// Wiretap II bound for an adversary reading q of n symbols through a
/// dimension-k binary linear code: ε = ½·2^{(ℓ+q−k)/2}.
pub fn wiretap2_bound(ell: u64, q: u64, k: u64) -> BoundReport {
    let eps = 0.5 * (0.5 * (ell as f64 + q as f64 - k as f64)).exp2();
    BoundReport::new(
        eps,
        BoundParams {
            ell: Some(ell),
            q: Some(q),
            k: Some(k),
            m_size: Some(1 << ell.min(62)),
            ..Default::default()
        },
        "wiretap II closed form",
    )
}

/// Smoothed bound for a BSC(p_A) adversary with an (n, k) binary code:
/// ε = ½√(2^{ℓ+n−k−n·h(p_A−δ)}) + e^{−2nδ²}.
pub fn bsc_smoothed_bound(ell: u64, k: u64, n: u64, p_a: f64, delta: f64) -> Result<BoundReport> {
    if !(0.0 < delta && delta < p_a && p_a < 0.5) {
        return Err(Error::InvalidParameter(format!(
            "need 0 < δ < p_A < ½, got δ = {delta}, p_A = {p_a}"
        )));
    }
    let h = binary_entropy(p_a - delta)?;
    let main = 0.5 * (0.5 * (ell as f64 + n as f64 - k as f64 - n as f64 * h)).exp2();
    let smooth = (-2.0 * n as f64 * delta * delta).exp();
    Ok(BoundReport::new(
        main + smooth,
        BoundParams {
            n: Some(n),
            ell: Some(ell),
            k: Some(k),
            p_a: Some(p_a),
            delta: Some(delta),
            eps_smooth: Some(smooth),
            ..Default::default()
        },
        "BSC Chernoff-smoothed bound",
    ))
}

/// Golden-section minimization over [lo, hi] with a coarse grid pre-scan;
/// assumes the function is unimodal on the bracket found. Relative
/// tolerance 1e-6. Returns the minimizing argument and value.
pub fn optimize_delta<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Result<(f64, f64)> {
    if !(lo.is_finite() && hi.is_finite()) || lo > hi {
        return Err(Error::InvalidParameter(format!(
            "bad range [{lo}, {hi}]"
        )));
    }
    if lo == hi {
        return Ok((lo, f(lo)));
    }
    // grid scan to bracket the minimum
    const GRID: usize = 64;
    let mut best_i = 0;
    let mut best = f64::INFINITY;
    for i in 0..=GRID {
        let x = lo + (hi - lo) * i as f64 / GRID as f64;
        let v = f(x);
        if v < best {
            best = v;
            best_i = i;
        }
    }
    let mut a = lo + (hi - lo) * best_i.saturating_sub(1) as f64 / GRID as f64;
    let mut b = lo + (hi - lo) * (best_i + 1).min(GRID) as f64 / GRID as f64;
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while (b - a) > 1e-6 * (1.0 + a.abs() + b.abs()) {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = (a + b) / 2.0;
    Ok((x, f(x)))
}

/// General smoothed AEP bound: ε = ½√(|M|·(|Z|ⁿ/|V|)·κ) + ε_smooth.
pub fn general_aep_bound(
    m_size: u64,
    z_size: u64,
    n: usize,
    v_size: u64,
    kappa: f64,
    eps_smooth: f64,
) -> Result<BoundReport> {
    if !(0.0..=1.0).contains(&eps_smooth) {
        return Err(Error::ProbabilityRange(eps_smooth));
    }
    let log_ratio = n as f64 * (z_size as f64).log2() - (v_size as f64).log2();
    if kappa.log2() < -(n as f64) * (z_size as f64).log2() - 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "cap κ = {kappa} below the uniform level |Z|^-n"
        )));
    }
    let eps = 0.5 * (0.5 * ((m_size as f64).log2() + log_ratio + kappa.log2())).exp2() + eps_smooth;
    Ok(BoundReport::new(
        eps,
        BoundParams {
            n: Some(n as u64),
            m_size: Some(m_size),
            z_size: Some(z_size),
            v_size: Some(v_size),
            kappa: Some(kappa),
            eps_smooth: Some(eps_smooth),
            ..Default::default()
        },
        "smoothed AEP bound",
    ))
}

/// Asymptotic secure message length ℓ = n(C_R − log₂|Z| + H(Z|X)),
/// clamped at 0. Returns (ℓ, clamped).
pub fn achievable_length(n: u64, c_r: f64, z_size: u64, h_z_given_x: f64) -> (f64, bool) {
    let ell = n as f64 * (c_r - (z_size as f64).log2() + h_z_given_x);
    if ell < 0.0 {
        (0.0, true)
    } else {
        (ell, false)
    }
}

/// Mutual information I(X;Z) of one channel use at uniform input, in bits.
pub fn mutual_information_uniform(w: &TransitionMatrix) -> Result<f64> {
    let nx = w.inputs() as f64;
    let marginal: Vec<f64> = (0..w.outputs())
        .map(|z| kahan_sum((0..w.inputs()).map(|x| w.prob(z, x))) / nx)
        .collect();
    let h_z = crate::prob::entropy_stats(&ProbVector::new(marginal)?).entropy;
    let h_z_given_x = kahan_sum(w.rows().iter().map(|row| {
        crate::prob::entropy_stats(&ProbVector::new(row.clone()).expect("stochastic row")).entropy
    })) / nx;
    Ok(h_z - h_z_given_x)
}

/// Adversarially-varying message length ℓ = log₂|V| − n·Σ_q f_q·I_q, where
/// I_q is the state-q mutual information at uniform input.
pub fn avwtc_length(v_size: u64, n: u64, frequencies: &[f64], per_state_info: &[f64]) -> Result<f64> {
    if frequencies.len() != per_state_info.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} frequencies but {} informations",
            frequencies.len(),
            per_state_info.len()
        )));
    }
    let total = kahan_sum(frequencies.iter().copied());
    if (total - 1.0).abs() > crate::prob::SUM_TOLERANCE {
        return Err(Error::InvalidDistribution(format!(
            "state frequencies sum to {total}"
        )));
    }
    let avg_info = kahan_sum(frequencies.iter().zip(per_state_info).map(|(&f, &i)| f * i));
    Ok((v_size as f64).log2() - n as f64 * avg_info)
}

/// Composition accounting for the unseeded scheme over t message blocks:
/// secrecy degrades to t·ε_rm, correctness to t·ε_cor plus the seed
/// transmission error.
pub fn unseeded_compose(eps_rm: f64, eps_cor: f64, t: u64, seed_err: f64) -> (f64, f64) {
    (t as f64 * eps_rm, t as f64 * eps_cor + seed_err)
}

/// Largest ℓ in [0, hi] with f(ℓ) ≤ eps, for f non-decreasing in ℓ.
/// None when even ℓ = 0 violates the target.
pub fn max_ell_below<F: Fn(u64) -> f64>(hi: u64, eps: f64, f: F) -> Option<u64> {
    if f(0) > eps {
        return None;
    }
    let (mut lo, mut hi) = (0u64, hi);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if f(mid) <= eps {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    Some(lo)
}

fn lse2(a: f64, b: f64) -> f64 {
    if a == f64::NEG_INFINITY {
        return b;
    }
    if b == f64::NEG_INFINITY {
        return a;
    }
    let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
    hi + ((lo - hi) * std::f64::consts::LN_2).exp().ln_1p() / std::f64::consts::LN_2
}

/// log₂(1 − 2^x) for x ≤ 0.
fn log2_1m_exp2(x: f64) -> f64 {
    if x == f64::NEG_INFINITY {
        return 0.0;
    }
    (-(x * std::f64::consts::LN_2).exp_m1()).ln() / std::f64::consts::LN_2
}

/// log₂ of the sum of the top 2^cutoff probabilities of n i.i.d.
/// Bernoulli(p) flips, grouped by Hamming-weight shells in decreasing
/// per-outcome probability (valid for p < ½); the boundary shell is
/// included fractionally.
fn log2_top_sum_bsc(n: u64, cutoff_log2: f64, p: f64) -> f64 {
    let lp = p.log2();
    let lq = (1.0 - p).log2();
    let mut log_c = 0.0f64;
    let mut cum_count = f64::NEG_INFINITY;
    let mut acc = f64::NEG_INFINITY;
    for w in 0..=n {
        if w > 0 {
            log_c += ((n - w + 1) as f64 / w as f64).log2();
        }
        let new_count = lse2(cum_count, log_c);
        let per_outcome = w as f64 * lp + (n - w) as f64 * lq;
        if new_count >= cutoff_log2 {
            let remaining = cutoff_log2 + log2_1m_exp2(cum_count - cutoff_log2);
            return lse2(acc, remaining + per_outcome);
        }
        cum_count = new_count;
        acc = lse2(acc, log_c + per_outcome);
    }
    acc
}

/// Bound family selector for curve generation.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundKind {
    Simple,
    Smoothed,
    Aep,
    Capacity,
}

impl BoundKind {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "simple" => Ok(BoundKind::Simple),
            "smoothed" => Ok(BoundKind::Smoothed),
            "aep" => Ok(BoundKind::Aep),
            "capacity" => Ok(BoundKind::Capacity),
            other => Err(Error::InvalidParameter(format!(
                "unknown bound kind {other}"
            ))),
        }
    }
}

/// Largest secure message length at block length n for one bound family,
/// with the code rate fixed at k(n) = ⌊n(1−h(p_R))⌋ and δ optimized per
/// point for the smoothed and AEP families. The capacity row is the real
/// value n·(h(p_A)−h(p_R)).
pub fn curve_point(kind: BoundKind, p_r: f64, p_a: f64, eps: f64, n: u64) -> Result<f64> {
    let h_r = binary_entropy(p_r)?;
    let h_a = binary_entropy(p_a)?;
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::ProbabilityRange(eps));
    }
    let k = (n as f64 * (1.0 - h_r)).floor() as u64;
    let nk = (n - k) as f64;
    match kind {
        BoundKind::Capacity => Ok((n as f64 * (h_a - h_r)).max(0.0)),
        BoundKind::Simple => {
            let log_sum = log2_top_sum_bsc(n, nk, p_a);
            let ell = max_ell_below(n, eps, |ell| {
                0.5 * (0.5 * (ell as f64 + log_sum)).exp2()
            });
            Ok(ell.unwrap_or(0) as f64)
        }
        BoundKind::Smoothed => {
            let eval = |ell: u64| {
                let f = |delta: f64| {
                    let h = binary_entropy(p_a - delta).expect("delta in range");
                    0.5 * (0.5 * (ell as f64 + nk - n as f64 * h)).exp2()
                        + (-2.0 * n as f64 * delta * delta).exp()
                };
                optimize_delta(f, 1e-9, p_a - 1e-9).expect("valid range").1
            };
            Ok(max_ell_below(n, eps, eval).unwrap_or(0) as f64)
        }
        BoundKind::Aep => {
            // i.i.d. instantiation: κ = 2^{−n(h(p_A)−δ)},
            // ε_smooth = Var[−log₂ P]/(nδ²) per Chebyshev
            let var1 = p_a * (-p_a.log2() - h_a).powi(2)
                + (1.0 - p_a) * (-(1.0 - p_a).log2() - h_a).powi(2);
            let eval = |ell: u64| {
                let f = |delta: f64| {
                    0.5 * (0.5 * (ell as f64 + nk - n as f64 * (h_a - delta))).exp2()
                        + var1 / (n as f64 * delta * delta)
                };
                optimize_delta(f, 1e-9, h_a - 1e-9).expect("valid range").1
            };
            Ok(max_ell_below(n, eps, eval).unwrap_or(0) as f64)
        }
    }
}

/// Curve over a grid of block lengths: (n, max ℓ with bound ≤ eps).
pub fn curve(kind: BoundKind, p_r: f64, p_a: f64, eps: f64, n_grid: &[u64]) -> Result<Vec<(u64, f64)>> {
    n_grid
        .iter()
        .map(|&n| Ok((n, curve_point(kind, p_r, p_a, eps, n)?)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wiretap2_anchors() {
        let r = wiretap2_bound(1, 2, 4);
        assert!((r.epsilon_sec_rm - 0.3535533905932738).abs() < 1e-12);
        assert!(!r.vacuous);

        let r = wiretap2_bound(0, 4, 4);
        assert!((r.epsilon_sec_rm - 0.5).abs() < 1e-12);
        assert!(r.vacuous);

        // mt doubling
        let r = wiretap2_bound(1, 2, 4).with_mt_factor();
        assert!((r.epsilon_sec_mt.unwrap() - 2.0 * r.epsilon_sec_rm).abs() < 1e-15);
    }

    #[test]
    fn simple_bound_anchors() {
        // selection adversary reading q=2 of n=6 through a k=4 code:
        // 2^{n−q} outcomes of 2^{q−n} each, top 2^{n−k} sum to 2^{q−k}
        let mut probs = vec![1.0 / 16.0; 16];
        probs.extend(vec![0.0; 48]);
        let d = ProbVector::new(probs).unwrap();
        let r = simple_bound(1, &d, 16, 2, 6).unwrap();
        assert!((r.epsilon_sec_rm - 0.3535533905932738).abs() < 1e-12);

        // noiseless adversary, identity code, ℓ = k = 4: vacuous
        let d = ProbVector::point_mass(16, 0);
        let r = simple_bound(4, &d, 16, 2, 4).unwrap();
        assert!((r.epsilon_sec_rm - 2.0).abs() < 1e-12);
        assert!(r.vacuous);

        // fully noisy adversary, ℓ = 0: ½·2^{−k/2}
        let d = ProbVector::uniform(64);
        let r = simple_bound(0, &d, 16, 2, 6).unwrap();
        assert!((r.epsilon_sec_rm - 0.5 * 0.25).abs() < 1e-12);
    }

    #[test]
    fn bsc_smoothed_anchors() {
        let r = bsc_smoothed_bound(10, 800, 1000, 0.35, 0.05).unwrap();
        let smooth = r.params.eps_smooth.unwrap();
        assert!((smooth - (-5.0f64).exp()).abs() < 1e-12);
        assert!(r.epsilon_sec_rm >= smooth);

        assert!(bsc_smoothed_bound(1, 1, 10, 0.35, 0.4).is_err());
        assert!(bsc_smoothed_bound(1, 1, 10, 0.6, 0.1).is_err());
    }

    #[test]
    fn optimizer_matches_grid_scan() {
        // the smoothed bound at 90% of capacity, n = 10^4
        let n = 10_000u64;
        let h_r = binary_entropy(0.03).unwrap();
        let k = (n as f64 * (1.0 - h_r)).floor() as u64;
        let ell = (0.9 * n as f64 * (binary_entropy(0.35).unwrap() - h_r)) as u64;
        let f = |d: f64| {
            bsc_smoothed_bound(ell, k, n, 0.35, d)
                .unwrap()
                .epsilon_sec_rm
        };
        let (d_star, v_star) = optimize_delta(f, 1e-6, 0.35 - 1e-6).unwrap();
        assert!(d_star > 0.0 && d_star < 0.35);
        assert!(v_star <= f(1e-6) && v_star <= f(0.35 - 1e-6));
        let grid_best = (1..1000)
            .map(|i| f(0.35 * i as f64 / 1000.0))
            .fold(f64::INFINITY, f64::min);
        assert!(v_star <= grid_best + 1e-5);

        // constant function: any point works
        let (_, v) = optimize_delta(|_| 7.0, 0.0, 1.0).unwrap();
        assert_eq!(v, 7.0);
        // degenerate range
        let (d, _) = optimize_delta(|x| x, 0.3, 0.3).unwrap();
        assert_eq!(d, 0.3);
    }

    #[test]
    fn aep_anchors() {
        // minimal configuration: κ at the uniform level, |V| = |Z|^n, |M| = 1
        let r = general_aep_bound(1, 2, 4, 16, 1.0 / 16.0, 0.01).unwrap();
        assert!((r.epsilon_sec_rm - (0.5 * 0.25 + 0.01)).abs() < 1e-12);

        assert!(general_aep_bound(1, 2, 4, 16, 1.0 / 64.0, 0.0).is_err());
        assert!(general_aep_bound(1, 2, 4, 16, 0.1, 1.5).is_err());
    }

    #[test]
    fn rate_formula_anchors() {
        let h_r = binary_entropy(0.03).unwrap();
        let h_a = binary_entropy(0.35).unwrap();
        let (ell, clamped) = achievable_length(1, 1.0 - h_r, 2, h_a);
        assert!((ell - 0.7396761975439148).abs() < 1e-5);
        assert!(!clamped);

        // noiseless adversary: negative, clamped
        let (ell, clamped) = achievable_length(10, 0.5, 2, 0.0);
        assert_eq!(ell, 0.0);
        assert!(clamped);
    }

    #[test]
    fn mutual_info_anchors() {
        let noiseless = TransitionMatrix::noiseless(2);
        assert!((mutual_information_uniform(&noiseless).unwrap() - 1.0).abs() < 1e-12);
        let noisy = TransitionMatrix::bsc(0.5).unwrap();
        assert!(mutual_information_uniform(&noisy).unwrap().abs() < 1e-12);
        let bsc = TransitionMatrix::bsc(0.1).unwrap();
        let expect = 1.0 - binary_entropy(0.1).unwrap();
        assert!((mutual_information_uniform(&bsc).unwrap() - expect).abs() < 1e-12);
    }

    #[test]
    fn avwtc_anchors() {
        // states {BSC(0), BSC(0.5)}, even frequencies: ℓ = k − n/2
        let ell = avwtc_length(16, 8, &[0.5, 0.5], &[1.0, 0.0]).unwrap();
        assert!((ell - (4.0 - 4.0)).abs() < 1e-12);

        // single BSC(p): ℓ = k − n(1−h(p))
        let info = 1.0 - binary_entropy(0.2).unwrap();
        let ell = avwtc_length(16, 6, &[1.0], &[info]).unwrap();
        assert!((ell - (4.0 - 6.0 * info)).abs() < 1e-12);

        // noiseless state only: ℓ = k − n ≤ 0
        let ell = avwtc_length(16, 8, &[1.0], &[1.0]).unwrap();
        assert!((ell - (4.0 - 8.0)).abs() < 1e-12);

        assert!(avwtc_length(16, 8, &[0.5, 0.4], &[1.0, 0.0]).is_err());
    }

    #[test]
    fn compose_anchors() {
        assert_eq!(unseeded_compose(1e-4, 2e-3, 1, 0.0), (1e-4, 2e-3));
        let (s, c) = unseeded_compose(1e-4, 2e-3, 10, 0.05);
        assert!((s - 1e-3).abs() < 1e-15);
        assert!((c - 0.07).abs() < 1e-15);
    }

    #[test]
    fn top_sum_log_domain_matches_direct() {
        // n = 20, p = 0.35: compare against a direct enumeration by shells
        let n = 20u64;
        let p = 0.35f64;
        for &cutoff in &[0.0, 3.0, 7.5, 12.0, 20.0] {
            let got = log2_top_sum_bsc(n, cutoff, p).exp2();
            // direct: walk shells, take outcomes until 2^cutoff of them
            let mut budget = cutoff.exp2();
            let mut sum = 0.0;
            let mut c = 1.0f64;
            for w in 0..=n {
                if w > 0 {
                    c *= (n - w + 1) as f64 / w as f64;
                }
                let per = p.powi(w as i32) * (1.0 - p).powi((n - w) as i32);
                let take = budget.min(c);
                sum += take * per;
                budget -= take;
                if budget <= 0.0 {
                    break;
                }
            }
            assert!(
                (got - sum).abs() < 1e-9 * sum.max(1e-300),
                "cutoff {cutoff}: {got} vs {sum}"
            );
        }
    }

    #[test]
    fn curve_sanity_small_grid() {
        let grid = [100u64, 1000, 10_000];
        let cap = curve(BoundKind::Capacity, 0.03, 0.35, 1e-2, &grid).unwrap();
        for kind in [BoundKind::Simple, BoundKind::Smoothed, BoundKind::Aep] {
            let pts = curve(kind, 0.03, 0.35, 1e-2, &grid).unwrap();
            for (i, &(n, ell)) in pts.iter().enumerate() {
                assert!(ell <= cap[i].1 + 1e-9, "{kind:?} beats capacity at n={n}");
                if i > 0 {
                    assert!(ell >= pts[i - 1].1, "{kind:?} not monotone at n={n}");
                }
            }
        }
        // adversary better than receiver: everything at zero
        let pts = curve(BoundKind::Capacity, 0.35, 0.03, 1e-2, &[1000]).unwrap();
        assert_eq!(pts[0].1, 0.0);
    }

    #[test]
    fn max_ell_below_is_exact() {
        let f = |ell: u64| ell as f64 * 0.1;
        assert_eq!(max_ell_below(100, 0.55, f), Some(5));
        assert_eq!(max_ell_below(100, 100.0, f), Some(100));
        assert_eq!(max_ell_below(100, -1.0, f), None);
    }
}
