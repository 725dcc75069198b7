//! Linear block codes over prime fields Z/p with exhaustive nearest-codeword
//! decoding at desk scale.

use crate::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// Largest message space p^k accepted by the exhaustive decoder.
const DECODE_LIMIT: u64 = 1 << 20;

/// A linear [n, k] code over Z/p given by a full-row-rank generator matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCode", into = "RawCode")]
pub struct LinearCode {
    p: u32,
    n: usize,
    k: usize,
    rows: Vec<Vec<u32>>,
}

/// On-disk form: {"p": int, "n": int, "k": int, "rows": [[int]]}.
#[derive(Serialize, Deserialize)]
struct RawCode {
    p: u32,
    n: usize,
    k: usize,
    rows: Vec<Vec<u32>>,
}

impl TryFrom<RawCode> for LinearCode {
    type Error = Error;
    fn try_from(raw: RawCode) -> Result<Self> {
        if raw.rows.len() != raw.k || raw.rows.iter().any(|r| r.len() != raw.n) {
            return Err(Error::DimensionMismatch(format!(
                "generator must be {}x{}",
                raw.k, raw.n
            )));
        }
        LinearCode::new(raw.p, raw.rows)
    }
}

impl From<LinearCode> for RawCode {
    fn from(c: LinearCode) -> RawCode {
        RawCode {
            p: c.p,
            n: c.n,
            k: c.k,
            rows: c.rows,
        }
    }
}

fn is_prime(p: u32) -> bool {
    if p < 2 {
        return false;
    }
    (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

/// Row rank over Z/p by Gaussian elimination.
fn rank_mod_p(rows: &[Vec<u32>], p: u32) -> usize {
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| (x % p) as u64).collect())
        .collect();
    let p = p as u64;
    let ncols = m.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for col in 0..ncols {
        let Some(pivot) = (rank..m.len()).find(|&i| m[i][col] != 0) else {
            continue;
        };
        m.swap(rank, pivot);
        let inv = mod_inverse(m[rank][col], p);
        for x in m[rank].iter_mut() {
            *x = *x * inv % p;
        }
        let pivot = m[rank].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != rank && row[col] != 0 {
                let f = row[col];
                for (x, &pv) in row.iter_mut().zip(&pivot) {
                    *x = (*x + (p - f) * pv) % p;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

fn mod_inverse(a: u64, p: u64) -> u64 {
    // Fermat; p is prime and a != 0
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

impl LinearCode {
    pub fn new(p: u32, rows: Vec<Vec<u32>>) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::InvalidParameter(format!("{p} is not prime")));
        }
        let k = rows.len();
        if k == 0 {
            return Err(Error::InvalidParameter("empty generator".into()));
        }
        let n = rows[0].len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch("ragged generator matrix".into()));
        }
        if rank_mod_p(&rows, p) != k {
            return Err(Error::InvalidParameter(
                "generator matrix is not full row rank".into(),
            ));
        }
        let rows = rows
            .into_iter()
            .map(|r| r.into_iter().map(|x| x % p).collect())
            .collect();
        Ok(LinearCode { p, n, k, rows })
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn generator(&self) -> &[Vec<u32>] {
        &self.rows
    }

    /// Number of messages, p^k.
    pub fn message_count(&self) -> u64 {
        (self.p as u64).pow(self.k as u32)
    }

    /// v · G over Z/p.
    pub fn encode(&self, v: &[u32]) -> Result<Vec<u32>> {
        if v.len() != self.k {
            return Err(Error::DimensionMismatch(format!(
                "message has {} symbols, code dimension is {}",
                v.len(),
                self.k
            )));
        }
        if v.iter().any(|&x| x >= self.p) {
            return Err(Error::InvalidParameter(format!(
                "message symbol out of Z/{}",
                self.p
            )));
        }
        let mut out = vec![0u64; self.n];
        for (coef, row) in v.iter().zip(&self.rows) {
            for (o, &g) in out.iter_mut().zip(row) {
                *o += *coef as u64 * g as u64;
            }
        }
        Ok(out.into_iter().map(|x| (x % self.p as u64) as u32).collect())
    }

    /// The idx-th message in lexicographic symbol order (first symbol most
    /// significant).
    pub fn message_at(&self, idx: u64) -> Vec<u32> {
        let mut v = vec![0u32; self.k];
        let mut rem = idx;
        for i in (0..self.k).rev() {
            v[i] = (rem % self.p as u64) as u32;
            rem /= self.p as u64;
        }
        v
    }

    pub fn message_index(&self, v: &[u32]) -> u64 {
        v.iter()
            .fold(0u64, |acc, &x| acc * self.p as u64 + x as u64)
    }

    /// Exhaustive nearest-codeword decoding; ties go to the
    /// lexicographically smallest message.
    pub fn decode(&self, y: &[u32]) -> Result<Vec<u32>> {
        if y.len() != self.n {
            return Err(Error::DimensionMismatch(format!(
                "received word has {} symbols, code length is {}",
                y.len(),
                self.n
            )));
        }
        if self.message_count() > DECODE_LIMIT {
            return Err(Error::TooLarge(format!(
                "exhaustive decoding over {} messages",
                self.message_count()
            )));
        }
        let mut best: Option<(usize, Vec<u32>)> = None;
        for idx in 0..self.message_count() {
            let v = self.message_at(idx);
            let c = self.encode(&v)?;
            let dist = c.iter().zip(y).filter(|(a, b)| a != b).count();
            // strict improvement keeps the lexicographically first winner
            if best.as_ref().is_none_or(|(d, _)| dist < *d) {
                best = Some((dist, v));
            }
        }
        Ok(best.expect("nonempty code").1)
    }
}

/// G = I_n over Z/p.
pub fn identity_code(p: u32, n: usize) -> Result<LinearCode> {
    let rows = (0..n)
        .map(|i| (0..n).map(|j| u32::from(i == j)).collect())
        .collect();
    LinearCode::new(p, rows)
}

/// G = [1 1 … 1], the length-n repetition code.
pub fn repetition_code(p: u32, n: usize) -> Result<LinearCode> {
    LinearCode::new(p, vec![vec![1; n]])
}

/// The [7, 4] binary Hamming code in systematic form.
pub fn hamming_7_4() -> LinearCode {
    LinearCode::new(
        2,
        vec![
            vec![1, 0, 0, 0, 1, 1, 0],
            vec![0, 1, 0, 0, 1, 0, 1],
            vec![0, 0, 1, 0, 0, 1, 1],
            vec![0, 0, 0, 1, 1, 1, 1],
        ],
    )
    .expect("hamming generator is full rank")
}

/// Uniformly random full-rank generator; rank-deficient draws are
/// resampled.
pub fn random_linear_code(p: u32, n: usize, k: usize, rng: &mut dyn rand::RngCore) -> Result<LinearCode> {
    if k > n {
        return Err(Error::InvalidParameter(format!("k = {k} exceeds n = {n}")));
    }
    loop {
        let rows: Vec<Vec<u32>> = (0..k)
            .map(|_| (0..n).map(|_| rng.gen_range(0..p)).collect())
            .collect();
        if rank_mod_p(&rows, p) == k {
            return LinearCode::new(p, rows);
        }
    }
}

/// Named construction dispatch used by config files.
pub fn standard_code(name: &str, p: u32, n: usize, k: usize, seed: u64) -> Result<LinearCode> {
    use rand::SeedableRng;
    match name {
        "identity" => identity_code(p, n),
        "repetition" => repetition_code(p, n),
        "hamming_7_4" => Ok(hamming_7_4()),
        "random_linear" => {
            let mut rng = rand_chacha::ChaCha12Rng::seed_from_u64(seed);
            random_linear_code(p, n, k, &mut rng)
        }
        other => Err(Error::InvalidParameter(format!("unknown code '{other}'"))),
    }
}
