//! Exact integer, modular and multiplicative-function arithmetic.
//!
//! Everything here is 64-bit with overflow-checked multiplication; moduli
//! above 2^31 are rejected rather than silently wrapped. Factorization is
//! trial division against a precomputed prime table, which covers every
//! desk-scale modulus used by the other modules.

use crate::Cplx;
use std::sync::OnceLock;
use thiserror::Error;

/// Largest accepted modulus.
pub const MAX_MODULUS: u64 = 1 << 31;

const PRIME_TABLE_LIMIT: usize = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ArithError {
    #[error("modulus must be odd and positive, got {0}")]
    EvenOrNonpositiveModulus(i64),
    #[error("modulus {0} exceeds the 2^31 guard")]
    ModulusTooLarge(u64),
    #[error("{0} is not invertible modulo {1}")]
    NonInvertible(i64, u64),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}

fn primes() -> &'static [u32] {
    static TABLE: OnceLock<Vec<u32>> = OnceLock::new();
    TABLE.get_or_init(|| {
        let mut is_comp = vec![false; PRIME_TABLE_LIMIT + 1];
        let mut ps = Vec::with_capacity(78_498);
        for p in 2..=PRIME_TABLE_LIMIT {
            if !is_comp[p] {
                ps.push(p as u32);
                let mut q = p * p;
                while q <= PRIME_TABLE_LIMIT {
                    is_comp[q] = true;
                    q += p;
                }
            }
        }
        ps
    })
}

pub fn gcd(a: i64, b: i64) -> u64 {
    let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// gcd with the convention gcd(0, c) = c, matching divisor conditions on
/// sums indexed by possibly-zero frequencies.
pub fn gcd0(a: i64, c: u64) -> u64 {
    if a == 0 {
        c
    } else {
        gcd(a, c as i64)
    }
}

/// 2-adic valuation of n (n != 0).
pub fn valuation2(n: u64) -> u32 {
    debug_assert!(n != 0);
    n.trailing_zeros()
}

/// p-adic valuation.
pub fn valuation(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0 && p >= 2);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}

/// Prime factorization as (p, exponent) pairs in increasing p.
pub fn factorize(mut n: u64) -> Vec<(u64, u32)> {
    assert!(n >= 1, "factorize requires n >= 1");
    let mut out = Vec::new();
    for &p in primes() {
        let p = p as u64;
        if p * p > n {
            break;
        }
        if n % p == 0 {
            out.push((p, valuation(n, p)));
            while n % p == 0 {
                n /= p;
            }
        }
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_squarefree(n: u64) -> bool {
    factorize(n).iter().all(|&(_, e)| e == 1)
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factorize(n) == [(n, 1)]
}

/// Squarefree part A of n = A·B², together with B.
pub fn squarefree_split(n: u64) -> (u64, u64) {
    let mut a = 1u64;
    let mut b = 1u64;
    for (p, e) in factorize(n) {
        if e % 2 == 1 {
            a *= p;
        }
        b *= p.pow(e / 2);
    }
    (a, b)
}

pub fn divisors(n: u64) -> Vec<u64> {
    let mut ds = vec![1u64];
    for (p, e) in factorize(n) {
        let len = ds.len();
        let mut pe = 1u64;
        for _ in 0..e {
            pe *= p;
            for i in 0..len {
                ds.push(ds[i] * pe);
            }
        }
    }
    ds.sort_unstable();
    ds
}

pub fn divisor_count(n: u64) -> u64 {
    factorize(n).iter().map(|&(_, e)| (e + 1) as u64).product()
}

pub fn euler_phi(n: u64) -> u64 {
    let mut phi = n;
    for (p, _) in factorize(n) {
        phi = phi / p * (p - 1);
    }
    phi
}

/// Jacobi symbol (m/n) for odd positive n; negative m is reduced mod n first,
/// so the symbol is the periodic extension in the top argument.
pub fn jacobi(m: i64, n: i64) -> Result<i32, ArithError> {
    if n <= 0 || n % 2 == 0 {
        return Err(ArithError::EvenOrNonpositiveModulus(n));
    }
    if n as u64 > MAX_MODULUS {
        return Err(ArithError::ModulusTooLarge(n as u64));
    }
    let mut den = n as u64;
    let mut num = (m.rem_euclid(n)) as u64;
    let mut sign = 1i32;
    while num != 0 {
        while num % 2 == 0 {
            num /= 2;
            if den % 8 == 3 || den % 8 == 5 {
                sign = -sign;
            }
        }
        std::mem::swap(&mut num, &mut den);
        if num % 4 == 3 && den % 4 == 3 {
            sign = -sign;
        }
        num %= den;
    }
    Ok(if den == 1 { sign } else { 0 })
}

/// Modular inverse via extended Euclid; errors when gcd(a, c) > 1.
pub fn mod_inverse(a: i64, c: u64) -> Result<u64, ArithError> {
    if c == 0 || c > MAX_MODULUS {
        return Err(ArithError::ModulusTooLarge(c));
    }
    let a_red = a.rem_euclid(c as i64) as u64;
    let (mut r0, mut r1) = (c as i64, a_red as i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    if r0 != 1 {
        return Err(ArithError::NonInvertible(a, c));
    }
    Ok(t0.rem_euclid(c as i64) as u64)
}

/// Checked product guarding the 2^31 modulus ceiling.
pub fn checked_mul(a: u64, b: u64) -> Result<u64, ArithError> {
    a.checked_mul(b).ok_or(ArithError::Overflow("u64 product"))
}

/// The fourth-root-of-unity factor attached to quadratic Gauss sums over an
/// odd modulus: 1 when c ≡ 1 (mod 4) and i when c ≡ 3 (mod 4).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EpsilonFactor {
    is_i: bool,
}

impl EpsilonFactor {
    pub fn value(self) -> Cplx {
        if self.is_i {
            Cplx::new(0.0, 1.0)
        } else {
            Cplx::new(1.0, 0.0)
        }
    }

    /// ε² = ±1 as an exact integer.
    pub fn square(self) -> i32 {
        if self.is_i {
            -1
        } else {
            1
        }
    }
}

pub fn epsilon(c: i64) -> Result<EpsilonFactor, ArithError> {
    if c <= 0 || c % 2 == 0 {
        return Err(ArithError::EvenOrNonpositiveModulus(c));
    }
    Ok(EpsilonFactor { is_i: c % 4 == 3 })
}

/// A positive integer c together with every decomposition the character-sum
/// evaluations need:
///
///   c       = 2^λ · c_o              (c_o odd, δ ≡ λ mod 2)
///   c_o     = q · r₁² · r₂²          (q squarefree, every prime of r₁
///                                     divides q, gcd(q, r₂) = 1)
///   c*      = product of primes with odd exponent in c_o (so c* = q)
///   c_□     = product of primes with even exponent in c_o
///   c       = c₁ · c₂                (c | c₁², c₂ | c₁, c₁/c₂ squarefree;
///                                     from c = A·B² one has c₁ = AB, c₂ = B)
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactoredModulus {
    pub value: u64,
    pub two_exponent: u32,
    pub odd_part: u64,
    pub delta: u8,
    pub squarefree_kernel: u64,
    pub square_support: u64,
    pub q: u64,
    pub r1: u64,
    pub r2: u64,
    pub c1: u64,
    pub c2: u64,
    odd_factors: Vec<(u64, u32)>,
}

impl FactoredModulus {
    /// Prime factorization of the odd part.
    pub fn odd_factors(&self) -> &[(u64, u32)] {
        &self.odd_factors
    }
}

pub fn factor_modulus(c: u64) -> Result<FactoredModulus, ArithError> {
    if c == 0 || c > MAX_MODULUS {
        return Err(ArithError::ModulusTooLarge(c));
    }
    let lambda = if c == 1 { 0 } else { valuation2(c) };
    let odd_part = c >> lambda;
    let odd_factors = factorize(odd_part);

    let mut q = 1u64;
    let mut r1 = 1u64;
    let mut r2 = 1u64;
    let mut kernel = 1u64;
    let mut square_support = 1u64;
    for &(p, e) in &odd_factors {
        if e % 2 == 1 {
            q *= p;
            kernel *= p;
            r1 *= p.pow((e - 1) / 2);
        } else {
            square_support *= p;
            r2 *= p.pow(e / 2);
        }
    }

    let (a, b) = squarefree_split(c);
    let fm = FactoredModulus {
        value: c,
        two_exponent: lambda,
        odd_part,
        delta: (lambda % 2) as u8,
        squarefree_kernel: kernel,
        square_support,
        q,
        r1,
        r2,
        c1: checked_mul(a, b)?,
        c2: b,
        odd_factors,
    };
    debug_assert_eq!(fm.value, (1u64 << fm.two_exponent) * fm.odd_part);
    debug_assert_eq!(fm.odd_part, fm.q * fm.r1 * fm.r1 * fm.r2 * fm.r2);
    Ok(fm)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn jacobi_examples() {
        assert_eq!(jacobi(1, 15).unwrap(), 1);
        assert_eq!(jacobi(3, 9).unwrap(), 0);
        assert_eq!(jacobi(2, 15).unwrap(), 1);
        assert_eq!(jacobi(1001, 9907).unwrap(), -1);
        assert!(jacobi(2, 4).is_err());
        assert!(jacobi(2, -3).is_err());
    }

    #[test]
    fn jacobi_euler_criterion_on_small_primes() {
        // (m/p) ≡ m^((p-1)/2) mod p for odd primes.
        for &p in &[3i64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97] {
            for m in 0..p {
                let mut pow = 1i64;
                for _ in 0..(p - 1) / 2 {
                    pow = pow * m % p;
                }
                let want = if pow == p - 1 { -1 } else { pow as i32 };
                assert_eq!(jacobi(m, p).unwrap(), want, "m={m} p={p}");
            }
        }
    }

    #[test]
    fn jacobi_multiplicative_in_modulus() {
        for n in (1..10_000i64).step_by(2) {
            let fs = factorize(n as u64);
            for m in [-7i64, 2, 3, 10, 911] {
                let mut prod = 1i32;
                for &(p, e) in &fs {
                    let jp = jacobi(m, p as i64).unwrap();
                    for _ in 0..e {
                        prod *= jp;
                    }
                }
                assert_eq!(jacobi(m, n).unwrap(), prod, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn quadratic_reciprocity_exhaustive_to_500() {
        for m in (1..=500i64).step_by(2) {
            for n in (1..=500i64).step_by(2) {
                if gcd(m, n) != 1 {
                    continue;
                }
                let lhs = jacobi(m, n).unwrap() * jacobi(n, m).unwrap();
                let rhs = if (m - 1) / 2 % 2 == 1 && (n - 1) / 2 % 2 == 1 { -1 } else { 1 };
                assert_eq!(lhs, rhs, "m={m} n={n}");
            }
        }
    }

    #[test]
    fn factor_modulus_examples() {
        let f = factor_modulus(16).unwrap();
        assert_eq!((f.two_exponent, f.odd_part, f.delta), (4, 1, 0));
        assert_eq!((f.q, f.r1, f.r2), (1, 1, 1));

        let f = factor_modulus(2448).unwrap();
        assert_eq!((f.two_exponent, f.delta, f.odd_part), (4, 0, 153));
        assert_eq!((f.q, f.r1, f.r2), (17, 1, 3));
        assert_eq!((f.squarefree_kernel, f.square_support), (17, 3));

        let f = factor_modulus(200).unwrap();
        assert_eq!((f.two_exponent, f.delta, f.odd_part), (3, 1, 25));
        assert_eq!((f.q, f.r1, f.r2), (1, 1, 5));
        assert_eq!((f.c1, f.c2), (20, 10));
    }

    #[test]
    fn factor_modulus_roundtrip_to_1e5() {
        for c in 1..=100_000u64 {
            let f = factor_modulus(c).unwrap();
            assert_eq!(f.value, c);
            assert_eq!((1u64 << f.two_exponent) * f.odd_part, c);
            assert_eq!(f.q * f.r1 * f.r1 * f.r2 * f.r2, f.odd_part);
            assert!(is_squarefree(f.q));
            assert_eq!(gcd(f.q as i64, f.r2 as i64), 1);
            // every prime of r1 divides q
            for (p, _) in factorize(f.r1) {
                assert_eq!(f.q % p, 0);
            }
            // c | c1^2, c2 | c1, c1/c2 squarefree
            assert_eq!((f.c1 * f.c1) % c, 0);
            assert_eq!(f.c1 % f.c2, 0);
            assert!(is_squarefree(f.c1 / f.c2));
            assert_eq!(f.c1 * f.c2, c);
        }
    }

    #[test]
    fn epsilon_examples_and_square_identity() {
        assert_eq!(epsilon(5).unwrap().value(), Cplx::new(1.0, 0.0));
        assert_eq!(epsilon(7).unwrap().value(), Cplx::new(0.0, 1.0));
        assert_eq!(epsilon(1).unwrap().value(), Cplx::new(1.0, 0.0));
        assert!(epsilon(6).is_err());
        for c in (1..10_000i64).step_by(2) {
            assert_eq!(epsilon(c).unwrap().square(), jacobi(-1, c).unwrap());
        }
    }

    #[test]
    fn mod_inverse_examples() {
        assert_eq!(mod_inverse(3, 16).unwrap(), 11);
        assert_eq!(mod_inverse(1, 97).unwrap(), 1);
        assert_eq!(mod_inverse(-3, 16).unwrap(), 5);
        assert_eq!(mod_inverse(4, 16), Err(ArithError::NonInvertible(4, 16)));
        assert_eq!(valuation2(48), 4);
    }

    #[test]
    fn helper_functions() {
        assert_eq!(squarefree_split(200), (2, 10));
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisor_count(12), 6);
        assert_eq!(euler_phi(16), 8);
        assert_eq!(euler_phi(1), 1);
    }
}
