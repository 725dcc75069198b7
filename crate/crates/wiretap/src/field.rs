//! Arithmetic in the binary extension fields GF(2^l).
//!
//! An element is stored in a `u64` where bit `i` holds the coefficient of
//! x^i. When an element is viewed as an l-bit string, the *first* bit is the
//! coefficient of x^(l-1); "the first λ bits" of a word are its top λ
//! coefficients.
//!
//! The irreducible modulus per degree is fixed by [`default_poly`] so that
//! results are reproducible; [`Gf2Field::with_poly`] accepts any other
//! irreducible polynomial of the right degree.

use crate::{Error, Result};

/// Largest supported extension degree.
pub const MAX_DEGREE: u32 = 24;

/// Degree up to which log/antilog tables are built.
const TABLE_DEGREE: u32 = 16;

/// Low-weight irreducible polynomials over GF(2), indexed by degree.
/// Bit i is the coefficient of x^i, including the leading term.
const DEFAULT_POLYS: [u64; 25] = [
    0, // degree 0 unused
    0b11,
    0b111,
    0b1011,
    0b1_0011,
    0b10_0101,
    0b100_0011,
    0b1000_0011,
    0b1_0001_1011,
    0b10_0001_0001,
    0b100_0000_1001,
    0b1000_0000_0101,
    0x1053,
    0x201B,
    0x4443,
    0x8003,
    0x1100B,
    0x2_0009,
    0x4_0009,
    0x8_0027,
    0x10_0009,
    0x20_0005,
    0x40_0003,
    0x80_0021,
    0x100_001B,
];

/// Default irreducible modulus for GF(2^l).
pub fn default_poly(l: u32) -> Result<u64> {
    if l == 0 || l > MAX_DEGREE {
        return Err(Error::InvalidParameter(format!(
            "field degree must be in 1..={MAX_DEGREE}, got {l}"
        )));
    }
    Ok(DEFAULT_POLYS[l as usize])
}

/// Carry-less product of two GF(2) polynomials (no reduction).
pub fn clmul(a: u64, b: u64) -> u64 {
    debug_assert!(a < 1 << 32 && b < 1 << 32);
    let mut acc = 0u64;
    let mut b = b;
    let mut shift = 0;
    while b != 0 {
        if b & 1 == 1 {
            acc ^= a << shift;
        }
        b >>= 1;
        shift += 1;
    }
    acc
}

/// Degree of a GF(2) polynomial; `None` for the zero polynomial.
pub fn poly_degree(p: u64) -> Option<u32> {
    if p == 0 {
        None
    } else {
        Some(63 - p.leading_zeros())
    }
}

/// Remainder of `a` modulo `m` over GF(2).
pub fn poly_rem(mut a: u64, m: u64) -> u64 {
    let dm = poly_degree(m).expect("zero modulus");
    while let Some(da) = poly_degree(a) {
        if da < dm {
            break;
        }
        a ^= m << (da - dm);
    }
    a
}

fn poly_gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let r = poly_rem(a, b);
        a = b;
        b = r;
    }
    a
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    poly_rem(clmul(a, b), m)
}

/// Ben-Or irreducibility test: f of degree l is irreducible iff
/// gcd(f, x^(2^i) - x) = 1 for all i = 1..=l/2.
pub fn is_irreducible(f: u64, l: u32) -> bool {
    if poly_degree(f) != Some(l) {
        return false;
    }
    if l == 1 {
        return true;
    }
    let x = 0b10u64;
    let mut cur = x;
    for _ in 1..=l / 2 {
        cur = mulmod(cur, cur, f);
        if poly_gcd(f, cur ^ x) != 1 {
            return false;
        }
    }
    true
}

/// Field descriptor: extension degree and irreducible modulus.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct FieldDesc {
    pub l: u32,
    pub poly: u64,
}

/// An element of GF(2^l) tagged with its field descriptor.
///
/// Words from different fields never combine; [`gf_mul`] and [`gf_inv`]
/// enforce this.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct FieldWord {
    pub value: u64,
    pub desc: FieldDesc,
}

impl FieldWord {
    pub fn new(value: u64, desc: FieldDesc) -> Result<Self> {
        if value >> desc.l != 0 {
            return Err(Error::InvalidParameter(format!(
                "value {value:#x} does not fit in GF(2^{})",
                desc.l
            )));
        }
        Ok(FieldWord { value, desc })
    }
}

/// Field product a ⋆ b, reduced by the common modulus.
pub fn gf_mul(a: FieldWord, b: FieldWord) -> Result<FieldWord> {
    if a.desc != b.desc {
        return Err(Error::FieldMismatch);
    }
    Ok(FieldWord {
        value: mulmod(a.value, b.value, a.desc.poly),
        desc: a.desc,
    })
}

/// Field addition (coefficient-wise XOR).
pub fn gf_add(a: FieldWord, b: FieldWord) -> Result<FieldWord> {
    if a.desc != b.desc {
        return Err(Error::FieldMismatch);
    }
    Ok(FieldWord {
        value: a.value ^ b.value,
        desc: a.desc,
    })
}

/// Multiplicative inverse; errors on zero.
pub fn gf_inv(a: FieldWord) -> Result<FieldWord> {
    if a.value == 0 {
        return Err(Error::ZeroInverse);
    }
    // a^(2^l - 2) by square-and-multiply.
    let mut result = 1u64;
    let mut base = a.value;
    let mut e = (1u64 << a.desc.l) - 2;
    while e != 0 {
        if e & 1 == 1 {
            result = mulmod(result, base, a.desc.poly);
        }
        base = mulmod(base, base, a.desc.poly);
        e >>= 1;
    }
    Ok(FieldWord {
        value: result,
        desc: a.desc,
    })
}

/// GF(2^l) with optional log/antilog tables for fast multiplication.
#[derive(Clone, Debug)]
pub struct Gf2Field {
    desc: FieldDesc,
    exp: Vec<u64>,
    log: Vec<u32>,
}

impl Gf2Field {
    /// Field with the default modulus for degree `l`.
    pub fn new(l: u32) -> Result<Self> {
        Self::with_poly(l, default_poly(l)?)
    }

    /// Field with a caller-supplied irreducible modulus.
    pub fn with_poly(l: u32, poly: u64) -> Result<Self> {
        if l == 0 || l > MAX_DEGREE {
            return Err(Error::InvalidParameter(format!(
                "field degree must be in 1..={MAX_DEGREE}, got {l}"
            )));
        }
        if !is_irreducible(poly, l) {
            return Err(Error::InvalidParameter(format!(
                "polynomial {poly:#x} is not irreducible of degree {l}"
            )));
        }
        let desc = FieldDesc { l, poly };
        let mut field = Gf2Field {
            desc,
            exp: Vec::new(),
            log: Vec::new(),
        };
        if l <= TABLE_DEGREE {
            field.build_tables();
        }
        Ok(field)
    }

    fn build_tables(&mut self) {
        let order = (1u64 << self.desc.l) - 1;
        if order == 1 {
            // GF(2): the unit group is trivial
            self.exp = vec![1];
            self.log = vec![0, 0];
            return;
        }
        'outer: for g in 2..=order {
            let mut exp = Vec::with_capacity(order as usize);
            let mut cur = 1u64;
            for _ in 0..order {
                exp.push(cur);
                cur = mulmod(cur, g, self.desc.poly);
                if cur == 1 && exp.len() < order as usize {
                    continue 'outer; // not primitive
                }
            }
            let mut log = vec![0u32; (order + 1) as usize];
            for (i, &e) in exp.iter().enumerate() {
                log[e as usize] = i as u32;
            }
            self.exp = exp;
            self.log = log;
            return;
        }
        unreachable!("every finite field has a primitive element");
    }

    pub fn desc(&self) -> FieldDesc {
        self.desc
    }

    pub fn degree(&self) -> u32 {
        self.desc.l
    }

    /// Number of elements, 2^l.
    pub fn size(&self) -> u64 {
        1u64 << self.desc.l
    }

    pub fn word(&self, value: u64) -> Result<FieldWord> {
        FieldWord::new(value, self.desc)
    }

    /// Product via tables when available, else shift-and-XOR.
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        debug_assert!(a < self.size() && b < self.size());
        if a == 0 || b == 0 {
            return 0;
        }
        if self.exp.is_empty() {
            return mulmod(a, b, self.desc.poly);
        }
        let order = self.size() - 1;
        let idx = (self.log[a as usize] as u64 + self.log[b as usize] as u64) % order;
        self.exp[idx as usize]
    }

    /// Reference product, always shift-and-XOR with reduction.
    pub fn mul_schoolbook(&self, a: u64, b: u64) -> u64 {
        mulmod(a, b, self.desc.poly)
    }

    pub fn inv(&self, a: u64) -> Result<u64> {
        if a == 0 {
            return Err(Error::ZeroInverse);
        }
        if self.exp.is_empty() {
            return Ok(gf_inv(FieldWord {
                value: a,
                desc: self.desc,
            })?
            .value);
        }
        let order = self.size() - 1;
        let idx = (order - self.log[a as usize] as u64) % order;
        Ok(self.exp[idx as usize])
    }
}
