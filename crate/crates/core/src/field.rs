//! Finite fields `F_q` for the small prime powers used at desk scale.
//!
//! Elements are stored as a single byte index. For prime `q` the index is the
//! residue; for `q = p^k` it is the coefficient vector `c_0 + c_1 p + ...` of the
//! residue polynomial modulo a fixed Conway polynomial.

use std::fmt;

use crate::error::{HallError, Result};

/// The prime powers with a baked-in arithmetic table.
pub const SUPPORTED_ORDERS: [u32; 7] = [2, 3, 4, 5, 7, 8, 9];

/// Conway polynomials for the non-prime orders, low coefficient first
/// (`x^2+x+1`, `x^3+x+1`, `x^2+2x+2`).
const CONWAY: [(u32, u32, &[u8]); 3] = [(2, 2, &[1, 1, 1]), (2, 3, &[1, 1, 0, 1]), (3, 2, &[2, 2, 1])];

/// An element of `F_q`, meaningful only together with its [`GaloisField`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Fq(pub u8);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    #[inline]
    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Display for Fq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone)]
pub struct GaloisField {
    q: u32,
    p: u32,
    degree: u32,
    add: Vec<u8>,
    mul: Vec<u8>,
    neg: Vec<u8>,
    inv: Vec<u8>,
    generator: u8,
}

impl fmt::Debug for GaloisField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({})", self.q)
    }
}

impl PartialEq for GaloisField {
    fn eq(&self, other: &Self) -> bool {
        self.q == other.q
    }
}

impl Eq for GaloisField {}

fn prime_power(q: u32) -> Option<(u32, u32)> {
    if q < 2 {
        return None;
    }
    let p = (2..=q).find(|d| q % d == 0)?;
    let mut rest = q;
    let mut k = 0;
    while rest % p == 0 {
        rest /= p;
        k += 1;
    }
    (rest == 1).then_some((p, k))
}

fn digits(x: u32, p: u32, k: u32) -> Vec<u32> {
    let mut out = Vec::with_capacity(k as usize);
    let mut x = x;
    for _ in 0..k {
        out.push(x % p);
        x /= p;
    }
    out
}

fn undigits(d: &[u32], p: u32) -> u32 {
    d.iter().rev().fold(0, |acc, &c| acc * p + c)
}

impl GaloisField {
    pub fn new(q: u32) -> Result<Self> {
        if !SUPPORTED_ORDERS.contains(&q) {
            return Err(HallError::UnsupportedField(q));
        }
        let (p, k) = prime_power(q).ok_or(HallError::UnsupportedField(q))?;
        let modulus: Option<&[u8]> = if k == 1 {
            None
        } else {
            CONWAY.iter().find(|(pp, kk, _)| *pp == p && *kk == k).map(|(_, _, m)| *m)
        };
        let n = q as usize;
        let mut add = vec![0u8; n * n];
        let mut mul = vec![0u8; n * n];
        for x in 0..q {
            for y in 0..q {
                let (s, m) = match modulus {
                    None => ((x + y) % p, (x * y) % p),
                    Some(poly) => {
                        let dx = digits(x, p, k);
                        let dy = digits(y, p, k);
                        let sum: Vec<u32> = dx.iter().zip(&dy).map(|(a, b)| (a + b) % p).collect();
                        let mut prod = vec![0u32; (2 * k - 1) as usize];
                        for (i, a) in dx.iter().enumerate() {
                            for (j, b) in dy.iter().enumerate() {
                                prod[i + j] = (prod[i + j] + a * b) % p;
                            }
                        }
                        // reduce by the monic modulus from the top degree down
                        for deg in (k as usize..prod.len()).rev() {
                            let c = prod[deg];
                            if c != 0 {
                                for (i, &m) in poly.iter().enumerate() {
                                    let idx = deg - k as usize + i;
                                    prod[idx] = (prod[idx] + p * p - c * m as u32 % p) % p;
                                }
                            }
                        }
                        (undigits(&sum, p), undigits(&prod[..k as usize], p))
                    }
                };
                add[(x * q + y) as usize] = s as u8;
                mul[(x * q + y) as usize] = m as u8;
            }
        }
        let mut neg = vec![0u8; n];
        let mut inv = vec![0u8; n];
        for x in 0..n {
            neg[x] = (0..n).find(|&y| add[x * n + y] == 0).unwrap() as u8;
            if x != 0 {
                inv[x] = (0..n).find(|&y| mul[x * n + y] == 1).unwrap() as u8;
            }
        }
        let mut field = GaloisField { q, p, degree: k, add, mul, neg, inv, generator: 1 };
        field.generator = (1..q as u8)
            .find(|&g| field.multiplicative_order(Fq(g)) == q - 1)
            .expect("finite field has a primitive element");
        Ok(field)
    }

    #[inline]
    pub fn order(&self) -> u32 {
        self.q
    }

    #[inline]
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    #[inline]
    pub fn degree(&self) -> u32 {
        self.degree
    }

    /// Smallest primitive element of the multiplicative group.
    pub fn generator(&self) -> Fq {
        Fq(self.generator)
    }

    pub fn elements(&self) -> impl Iterator<Item = Fq> {
        (0..self.q as u8).map(Fq)
    }

    /// Coefficient vector over the prime field, low degree first.
    pub fn coefficients(&self, x: Fq) -> Vec<u32> {
        digits(x.0 as u32, self.p, self.degree)
    }

    #[inline]
    pub fn add(&self, x: Fq, y: Fq) -> Fq {
        Fq(self.add[x.0 as usize * self.q as usize + y.0 as usize])
    }

    #[inline]
    pub fn sub(&self, x: Fq, y: Fq) -> Fq {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: Fq, y: Fq) -> Fq {
        Fq(self.mul[x.0 as usize * self.q as usize + y.0 as usize])
    }

    #[inline]
    pub fn neg(&self, x: Fq) -> Fq {
        Fq(self.neg[x.0 as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    #[inline]
    pub fn inv(&self, x: Fq) -> Option<Fq> {
        (!x.is_zero()).then(|| Fq(self.inv[x.0 as usize]))
    }

    pub fn from_int(&self, n: i64) -> Fq {
        let p = self.p as i64;
        Fq(n.rem_euclid(p) as u8)
    }

    fn multiplicative_order(&self, x: Fq) -> u32 {
        let mut acc = x;
        let mut k = 1;
        while acc != Fq::ONE {
            acc = self.mul(acc, x);
            k += 1;
            if k > self.q {
                return 0;
            }
        }
        k
    }

    pub fn pow(&self, x: Fq, mut e: u64) -> Fq {
        let mut base = x;
        let mut acc = Fq::ONE;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        acc
    }
}
