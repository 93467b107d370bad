//! Quadratic permutation polynomials `f(x) = f1*x + f2*x^2 (mod N)`.
//!
//! A QPP is the single object that defines a code: the edge with left-label `i`
//! gets right-label `f(i)`. This module decides which coefficient pairs give a
//! permutation of `Z_N`, evaluates them, and inverts them.

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Prime factorization as `(prime, exponent)` pairs, primes strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization(Vec<(u64, u32)>);

impl Factorization {
    pub fn factors(&self) -> &[(u64, u32)] {
        &self.0
    }

    pub fn primes(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().map(|&(p, _)| p)
    }

    /// Exponent of `p` in the factored number (zero when absent).
    pub fn exponent(&self, p: u64) -> u32 {
        self.0
            .iter()
            .find(|&&(q, _)| q == p)
            .map_or(0, |&(_, e)| e)
    }

    pub fn value(&self) -> u64 {
        self.0.iter().map(|&(p, e)| p.pow(e)).product()
    }
}

/// Trial-division factorization. Fine for the ring sizes used here (N up to a few million).
pub fn factorize(n: u64) -> Result<Factorization> {
    if n < 2 {
        return invalid(format!("cannot factorize {n}: need N >= 2"));
    }
    let mut rest = n;
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= rest {
        if rest % p == 0 {
            let mut e = 0;
            while rest % p == 0 {
                rest /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if rest > 1 {
        out.push((rest, 1));
    }
    Ok(Factorization(out))
}

/// Necessary and sufficient condition for `f1*x + f2*x^2` to permute `Z_N`.
///
/// Coefficients are reduced mod `N` first. With `f2 = 0` the test collapses to
/// `gcd(f1, N) = 1`, the linear case.
pub fn is_permutation_poly(n: u64, f1: u64, f2: u64) -> Result<bool> {
    let fac = factorize(n)?;
    let (f1, f2) = (f1 % n, f2 % n);
    let twos = fac.exponent(2);
    let ok = if twos != 1 {
        f1.gcd(&n) == 1 && fac.primes().all(|p| f2 % p == 0)
    } else {
        (f1 + f2) % 2 == 1 && f1.gcd(&(n / 2)) == 1 && fac.primes().filter(|&p| p != 2).all(|p| f2 % p == 0)
    };
    Ok(ok)
}

/// Radical of `N` (product of its distinct primes); the prime 2 is left out when
/// `N = 2 (mod 4)`, where `f2` only has to carry the odd primes.
pub fn min_f2(n: u64) -> Result<u64> {
    let fac = factorize(n)?;
    let skip_two = fac.exponent(2) == 1;
    Ok(fac.primes().filter(|&p| !(skip_two && p == 2)).product())
}

/// A validated quadratic permutation polynomial over `Z_N`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Qpp {
    modulus: u64,
    f1: u64,
    f2: u64,
}

impl Qpp {
    /// Builds `f1*x + f2*x^2 mod n`, rejecting pairs that are not permutations.
    pub fn new(n: u64, f1: u64, f2: u64) -> Result<Self> {
        if n > u32::MAX as u64 {
            return invalid(format!("modulus {n} exceeds 2^32"));
        }
        if !is_permutation_poly(n, f1, f2)? {
            return invalid(format!("{f1}x + {f2}x^2 is not a permutation polynomial mod {n}"));
        }
        Ok(Qpp { modulus: n, f1: f1 % n, f2: f2 % n })
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn f1(&self) -> u64 {
        self.f1
    }

    pub fn f2(&self) -> u64 {
        self.f2
    }

    /// True when `f2 = 0 (mod N)`, i.e. the polynomial is linear.
    pub fn is_linear(&self) -> bool {
        self.f2 == 0
    }

    #[inline]
    pub fn eval(&self, x: u64) -> u64 {
        let n = self.modulus;
        let x = x % n;
        // N < 2^32 so every product below fits in u64.
        let sq = x * x % n;
        (self.f1 * x % n + self.f2 * sq % n) % n
    }

    /// The image array `[f(0), f(1), ..., f(N-1)]`.
    pub fn table(&self) -> Vec<u32> {
        (0..self.modulus).map(|x| self.eval(x) as u32).collect()
    }

    /// Inverse permutation `g` with `g[f(x)] = x`.
    pub fn invert(&self) -> Vec<u32> {
        let mut g = vec![0u32; self.modulus as usize];
        for x in 0..self.modulus {
            g[self.eval(x) as usize] = x as u32;
        }
        g
    }
}

impl std::fmt::Display for Qpp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x+{}x^2 (mod {})", self.f1, self.f2, self.modulus)
    }
}
