//! Self-check suites wiring the exhaustive oracles against the analytic
//! bounds. Each suite returns a pass/fail outcome with a counterexample
//! description on failure; the CLI `verify` subcommand runs them all.

use crate::bounds::{general_aep_bound, simple_bound};
use crate::channel::{classify_symmetry, product_output_dist, AvcSpec, Symmetry, TransitionMatrix};
use crate::ecc::{identity_code, repetition_code, standard_code};
use crate::extractor::ExtractorKind;
use crate::oracle::{
    exact_du, exact_pguess, verify_equidistance, verify_inverter_uniformity,
    verify_two_universality,
};
use crate::protocol::{exact_secrecy, AdversarySpec, SchemeConfig};
use crate::Result;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use serde::Serialize;
use std::collections::BTreeMap;

/// Result of one verification suite.
#[derive(Clone, Debug, Serialize)]
pub struct CheckOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    fn pass(name: &str, detail: String) -> Self {
        CheckOutcome {
            name: name.into(),
            passed: true,
            detail,
        }
    }

    fn fail(name: &str, detail: String) -> Self {
        CheckOutcome {
            name: name.into(),
            passed: false,
            detail,
        }
    }

    fn from_result(name: &str, r: Result<String>) -> Self {
        match r {
            Ok(detail) => CheckOutcome::pass(name, detail),
            Err(e) => CheckOutcome::fail(name, e.to_string()),
        }
    }
}

/// Problem sizes for the verification run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Scale {
    Small,
    FullDesk,
}

impl Scale {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "small" => Ok(Scale::Small),
            "full-desk" => Ok(Scale::FullDesk),
            other => Err(crate::Error::InvalidParameter(format!(
                "unknown scale {other}"
            ))),
        }
    }
}

/// Run every suite; deterministic for a fixed RNG seed.
pub fn run_all(scale: Scale, seed: u64) -> Vec<CheckOutcome> {
    vec![
        inverter_uniformity_suite(scale),
        two_universality_suite(scale),
        lohl_soundness_suite(scale, seed),
        symmetry_closure_suite(scale, seed),
        bound_soundness_suite(scale),
        avc_order_invariance_suite(scale),
    ]
}

fn inverter_uniformity_suite(scale: Scale) -> CheckOutcome {
    let name = "inverter-uniformity";
    let max_l = match scale {
        Scale::Small => 6,
        Scale::FullDesk => 10,
    };
    let run = || -> Result<String> {
        let mut checked = 0u64;
        for l in 2..=max_l {
            for lambda in 1..=l {
                for kind in [
                    ExtractorKind::FiniteField { l, lambda },
                    ExtractorKind::Toeplitz { l, lambda },
                ] {
                    verify_inverter_uniformity(kind.build()?.as_ref())?;
                    checked += 1;
                }
            }
        }
        Ok(format!("{checked} family instances, l ≤ {max_l}"))
    };
    CheckOutcome::from_result(name, run())
}

fn two_universality_suite(scale: Scale) -> CheckOutcome {
    let name = "two-universality";
    let max_l = match scale {
        Scale::Small => 6,
        Scale::FullDesk => 8,
    };
    let run = || -> Result<String> {
        let mut checked = 0u64;
        for l in 2..=max_l {
            for lambda in 1..=l {
                for kind in [
                    ExtractorKind::FiniteField { l, lambda },
                    ExtractorKind::Toeplitz { l, lambda },
                ] {
                    verify_two_universality(kind.build()?.as_ref())?;
                    checked += 1;
                }
            }
        }
        Ok(format!("{checked} family instances, l ≤ {max_l}"))
    };
    CheckOutcome::from_result(name, run())
}

/// Random joint distribution over |V| × |Z| outcomes.
fn random_joint(rng: &mut ChaCha12Rng, nv: usize, nz: usize) -> Vec<Vec<f64>> {
    let mut joint: Vec<Vec<f64>> = (0..nv)
        .map(|_| (0..nz).map(|_| rng.gen_range(0.0f64..1.0)).collect())
        .collect();
    let total: f64 = joint.iter().flatten().sum();
    for row in &mut joint {
        for p in row {
            *p /= total;
        }
    }
    joint
}

/// Exact d_U(Ext(V,S), S | Z) ≤ ½√(|M| · P_guess(V|Z)) on random joints.
pub fn lohl_check(
    joint: &[Vec<f64>],
    kind: ExtractorKind,
    tol: f64,
) -> Result<(f64, f64)> {
    let ext = kind.build()?;
    let p = ext.params();
    let nz = joint[0].len();
    let seeds = ext.seed_count();
    let m_count = 1usize << p.lambda;
    // joint of (m, (s, z)): average over the seed
    let mut out = vec![vec![0.0f64; seeds as usize * nz]; m_count];
    for si in 0..seeds {
        let s = ext.seed_at(si);
        for (v, row) in joint.iter().enumerate() {
            let m = ext.extract(v as u64, s)? as usize;
            for (z, &pvz) in row.iter().enumerate() {
                out[m][si as usize * nz + z] += pvz / seeds as f64;
            }
        }
    }
    let lhs = exact_du(&out)?;
    let rhs = 0.5 * (m_count as f64 * exact_pguess(joint)?).sqrt();
    if lhs > rhs + tol {
        return Err(crate::Error::InvalidParameter(format!(
            "d_U = {lhs} exceeds the hash bound {rhs}"
        )));
    }
    Ok((lhs, rhs))
}

fn lohl_soundness_suite(scale: Scale, seed: u64) -> CheckOutcome {
    let name = "leftover-hash-soundness";
    let (cases, max_l, max_z) = match scale {
        Scale::Small => (50, 4u32, 4usize),
        Scale::FullDesk => (200, 6, 8),
    };
    let run = || -> Result<String> {
        let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x10f1);
        for case in 0..cases {
            let l = rng.gen_range(2..=max_l);
            let lambda = rng.gen_range(1..=l);
            let nz = rng.gen_range(2..=max_z);
            let joint = random_joint(&mut rng, 1 << l, nz);
            let kind = if case % 2 == 0 {
                ExtractorKind::FiniteField { l, lambda }
            } else {
                ExtractorKind::Toeplitz { l, lambda }
            };
            lohl_check(&joint, kind, 1e-9)?;
        }
        Ok(format!("{cases} random joints, |V| ≤ {}", 1u32 << max_l))
    };
    CheckOutcome::from_result(name, run())
}

fn symmetry_closure_suite(scale: Scale, seed: u64) -> CheckOutcome {
    let name = "symmetry-closure";
    let (codes, max_n) = match scale {
        Scale::Small => (10u64, 4usize),
        Scale::FullDesk => (50, 6),
    };
    let run = || -> Result<String> {
        // classification anchors
        let anchors = [
            (TransitionMatrix::bsc(0.25)?, Symmetry::StronglySymmetric),
            (TransitionMatrix::bec(0.25)?, Symmetry::Symmetric),
            (
                TransitionMatrix::new(vec![vec![1.0, 0.0], vec![0.3, 0.7]])?,
                Symmetry::Asymmetric,
            ),
        ];
        for (w, expect) in &anchors {
            let got = classify_symmetry(w).class;
            if got != *expect {
                return Err(crate::Error::InvalidParameter(format!(
                    "classified as {got:?}, expected {expect:?}"
                )));
            }
        }
        // sorted-output invariance and equidistance over random linear codes
        let mut rng = ChaCha12Rng::seed_from_u64(seed ^ 0x51a9);
        for i in 0..codes {
            let p = if i % 2 == 0 { 2 } else { 3 };
            let n = rng.gen_range(2..=max_n);
            let k = rng.gen_range(1..=n);
            let code = standard_code("random_linear", p, n, k, rng.gen())?;
            let w = if p == 2 {
                TransitionMatrix::bsc(0.2)?
            } else {
                TransitionMatrix::cyclic(&[0.7, 0.2, 0.1])?
            };
            let uses = vec![w; n];
            if !crate::channel::restricted_symmetry_check(&uses, &code)? {
                return Err(crate::Error::InvalidParameter(format!(
                    "sorted-output check failed for a ({n}, {k}) code over Z/{p}"
                )));
            }
            verify_equidistance(&uses, &code)?;
        }
        Ok(format!("{codes} random codes over Z/2 and Z/3, n ≤ {max_n}"))
    };
    CheckOutcome::from_result(name, run())
}

/// Exact scheme secrecy ≤ simple bound ≤ AEP bound with the exhaustive cut,
/// for a BSC adversary. Returns (exact, simple, aep).
pub fn bound_chain_check(
    code: &crate::ecc::LinearCode,
    extractor: ExtractorKind,
    p_adv: f64,
) -> Result<(f64, f64, f64)> {
    let n = code.n();
    let lambda = extractor.lambda();
    let cfg = SchemeConfig {
        extractor,
        code: code.clone(),
        receiver: vec![TransitionMatrix::noiseless(2); n],
        adversary: AdversarySpec::Memoryless {
            per_use: vec![TransitionMatrix::bsc(p_adv)?; n],
        },
        t: 1,
    };
    let exact = exact_secrecy(&cfg)?.rm;
    // every codeword's output distribution is a permutation of the
    // all-zero codeword's; use its sorted view
    let zero = vec![0u32; code.k()];
    let cond = product_output_dist(
        &vec![TransitionMatrix::bsc(p_adv)?; n],
        &code.encode(&zero)?,
    )?;
    let v_size = code.message_count();
    let simple = simple_bound(lambda as u64, &cond, v_size, 2, n)?.epsilon_sec_rm;
    // exhaustive cut: cap at the top-cutoff boundary probability
    let t = (2u64.pow(n as u32)).div_ceil(v_size);
    let kappa = cond.sorted()[t as usize - 1].max(1.0 / 2f64.powi(n as i32));
    let (_, eps_cut) = crate::oracle::cut_distribution(&cond, kappa)?;
    let aep = general_aep_bound(1 << lambda, 2, n, v_size, kappa, eps_cut.min(1.0))?.epsilon_sec_rm;
    Ok((exact, simple, aep))
}

fn bound_soundness_suite(scale: Scale) -> CheckOutcome {
    let name = "bound-soundness";
    let max_n = match scale {
        Scale::Small => 6usize,
        Scale::FullDesk => 10,
    };
    let run = || -> Result<String> {
        let mut checked = 0u64;
        for n in 2..=max_n {
            let codes = vec![identity_code(2, n)?, repetition_code(2, n)?];
            for code in codes {
                let max_lambda = (code.k() as u32).min(3);
                for lambda in 1..=max_lambda {
                    let kind = ExtractorKind::FiniteField {
                        l: code.k() as u32,
                        lambda,
                    };
                    let (exact, simple, aep) = bound_chain_check(&code, kind, 0.35)?;
                    if exact > simple + 1e-9 {
                        return Err(crate::Error::InvalidParameter(format!(
                            "exact {exact} > simple {simple} at n = {n}, λ = {lambda}"
                        )));
                    }
                    if simple > aep + 1e-9 {
                        return Err(crate::Error::InvalidParameter(format!(
                            "simple {simple} > aep {aep} at n = {n}, λ = {lambda}"
                        )));
                    }
                    checked += 1;
                }
            }
        }
        Ok(format!("{checked} instances, BSC(0.35), n ≤ {max_n}"))
    };
    CheckOutcome::from_result(name, run())
}

fn avc_order_invariance_suite(scale: Scale) -> CheckOutcome {
    let name = "avc-order-invariance";
    let n = match scale {
        Scale::Small => 4usize,
        Scale::FullDesk => 8,
    };
    let run = || -> Result<String> {
        let spec = AvcSpec::new(
            vec![TransitionMatrix::bsc(0.1)?, TransitionMatrix::bsc(0.4)?],
            BTreeMap::from([(0, 0.5), (1, 0.5)]),
        )?;
        let cfg = SchemeConfig {
            extractor: ExtractorKind::FiniteField {
                l: n as u32,
                lambda: 1,
            },
            code: identity_code(2, n)?,
            receiver: vec![TransitionMatrix::noiseless(2); n],
            adversary: AdversarySpec::Avc { spec },
            t: 1,
        };
        let rep = exact_secrecy(&cfg)?;
        let first = rep.per_strategy_rm[0];
        for (i, &v) in rep.per_strategy_rm.iter().enumerate() {
            if (v - first).abs() > 1e-9 {
                return Err(crate::Error::InvalidParameter(format!(
                    "ordering {i} gives {v}, ordering 0 gives {first}"
                )));
            }
        }
        Ok(format!(
            "{} orderings at n = {n}, common value {first:.6}",
            rep.per_strategy_rm.len()
        ))
    };
    CheckOutcome::from_result(name, run())
}
