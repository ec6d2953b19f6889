//! Finite exponential and character sums: quadratic Gauss sums, Kloosterman
//! sums, real-character sums over arithmetic progressions, and the twisted
//! double sum
//!
//!   T(a,b;c) = Σ_{x,y mod c} S(x², y²; c) e_c(2xy + ax + by),
//!
//! each with a closed-form evaluation paired against exact direct summation.
//!
//! Conventions: e_c(x) = e(x/c) = exp(2πix/c); gcd(0, c) = c, so conditions
//! like (a,c) = (b,c) stay meaningful on the zero row.

use crate::arith::{
    self, epsilon, factor_modulus, gcd, gcd0, mod_inverse, ArithError, FactoredModulus,
};
use crate::util::{root_of_unity_table, KahanC};
use crate::Cplx;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CharSumError {
    #[error("modulus {0} not covered by the closed form (need c odd or 4 | c)")]
    UnsupportedModulus(u64),
    #[error("modulus {0} exceeds the size guard {1}")]
    SizeGuard(u64, u64),
    #[error("precondition violated: {0}")]
    Precondition(&'static str),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// Result of a finite sum; `is_exact_zero` marks structurally forced
/// vanishing, in which case `value` is exactly 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SumValue {
    pub value: Cplx,
    pub is_exact_zero: bool,
}

impl SumValue {
    fn exact_zero() -> Self {
        SumValue { value: Cplx::new(0.0, 0.0), is_exact_zero: true }
    }

    fn of(value: Cplx) -> Self {
        SumValue { value, is_exact_zero: false }
    }
}

/// Direct evaluation of the Gauss sum G(a/c) = Σ_{x mod c} e_c(a x²).
pub fn gauss_sum_oracle(a: i64, c: u64) -> SumValue {
    debug_assert!(c >= 1);
    let table = root_of_unity_table(c);
    let mut acc = KahanC::new();
    let ci = c as i64;
    for x in 0..ci {
        let k = (a % ci * (x * x % ci)).rem_euclid(ci);
        acc.add(table[k as usize]);
    }
    SumValue::of(acc.value())
}

/// Closed form of G(a/c) for gcd(a,c) = 1:
///   c odd:             (a/c) ε_c √c
///   c = 2^k c_o, k ≥ 2: ε_{c_o} √c (a 2^δ / c_o) · { 1 + e₄(a c_o)   δ = 0
///                                                   { √2 e₈(a c_o)   δ = 1
/// The case 2‖c has no closed form here; the sum vanishes (verified by the
/// oracle) and this returns `UnsupportedModulus`.
pub fn gauss_sum_closed(a: i64, c: u64) -> Result<SumValue, CharSumError> {
    if gcd0(a, c) != 1 {
        return Err(CharSumError::Precondition("gauss_sum_closed needs gcd(a, c) = 1"));
    }
    let fm = factor_modulus(c)?;
    let sqrt_c = (c as f64).sqrt();
    if fm.two_exponent == 0 {
        let chi = arith::jacobi(a, c as i64)? as f64;
        return Ok(SumValue::of(epsilon(c as i64)?.value() * chi * sqrt_c));
    }
    if fm.two_exponent == 1 {
        return Err(CharSumError::UnsupportedModulus(c));
    }
    let c_o = fm.odd_part;
    let delta = fm.delta as u32;
    let chi = arith::jacobi(a * (1 << delta), c_o as i64)? as f64;
    let eps = epsilon(c_o as i64)?.value();
    let a_co = (a % 8 * (c_o % 8) as i64).rem_euclid(8) as usize;
    let e8 = root_of_unity_table(8);
    let two_part = if delta == 0 {
        Cplx::new(1.0, 0.0) + e8[(a_co * 2) % 8]
    } else {
        std::f64::consts::SQRT_2 * e8[a_co]
    };
    Ok(SumValue::of(eps * sqrt_c * chi * two_part))
}

/// Kloosterman sums S(m, n; c) = Σ_{(x,c)=1} e_c(mx + n·x̄) over a fixed
/// modulus, with the unit-inverse and root-of-unity tables built once.
pub struct KloostermanEvaluator {
    c: u64,
    table: Vec<Cplx>,
    inverse: Vec<Option<u32>>,
}

impl KloostermanEvaluator {
    pub fn new(c: u64) -> Self {
        let table = root_of_unity_table(c);
        let mut inverse = vec![None; c as usize];
        if c == 1 {
            inverse[0] = Some(0);
        } else {
            for x in 1..c {
                if gcd(x as i64, c as i64) == 1 {
                    inverse[x as usize] = Some(mod_inverse(x as i64, c).unwrap() as u32);
                }
            }
        }
        KloostermanEvaluator { c, table, inverse }
    }

    pub fn sum(&self, m: i64, n: i64) -> SumValue {
        let c = self.c as i64;
        if self.c == 1 {
            return SumValue::of(Cplx::new(1.0, 0.0));
        }
        let (m, n) = (m.rem_euclid(c), n.rem_euclid(c));
        let mut acc = KahanC::new();
        for x in 1..c {
            if let Some(xinv) = self.inverse[x as usize] {
                let k = ((m * x + n * xinv as i64) % c) as usize;
                acc.add(self.table[k]);
            }
        }
        SumValue::of(acc.value())
    }
}

pub fn kloosterman(m: i64, n: i64, c: u64) -> SumValue {
    KloostermanEvaluator::new(c).sum(m, n)
}

/// A real Dirichlet character mod q: the Jacobi character mod q* times the
/// trivial character mod q₀, with gcd(q*, q₀) = 1 and every prime of q
/// dividing q*·q₀.
#[derive(Clone, Debug)]
pub struct RealCharacter {
    pub q: u64,
    pub q_star: u64,
    pub q0: u64,
}

impl RealCharacter {
    pub fn new(q: u64, q_star: u64, q0: u64) -> Result<Self, CharSumError> {
        if q == 0 || q_star == 0 {
            return Err(CharSumError::Precondition("moduli must be positive"));
        }
        if q_star % 2 == 0 || !arith::is_squarefree(q_star) {
            return Err(CharSumError::Precondition("q* must be odd and squarefree"));
        }
        if q % q_star != 0 {
            return Err(CharSumError::Precondition("q* must divide q"));
        }
        if gcd(q_star as i64, q0 as i64) != 1 {
            return Err(CharSumError::Precondition("q* and q0 must be coprime"));
        }
        for (p, _) in arith::factorize(q) {
            if q_star % p != 0 && q0 % p != 0 {
                return Err(CharSumError::Precondition("every prime of q must divide q*·q0"));
            }
        }
        for (p, _) in arith::factorize(q0) {
            if q % p != 0 {
                return Err(CharSumError::Precondition("primes of q0 must divide q"));
            }
        }
        Ok(RealCharacter { q, q_star, q0 })
    }

    pub fn eval(&self, n: i64) -> i32 {
        if gcd(n, self.q0 as i64) != 1 {
            return 0;
        }
        arith::jacobi(n, self.q_star as i64).unwrap()
    }
}

/// Closed form of S_χ(a, d, q) = Σ_{n mod q, n ≡ a mod d} χ(n):
/// zero unless q* | d, else (q/d)·χ*(a)·Π_{p | q0, p ∤ d}(1 − 1/p),
/// an exact integer.
pub fn char_sum_ap(chi: &RealCharacter, a: i64, d: u64) -> Result<i64, CharSumError> {
    if d == 0 || chi.q % d != 0 {
        return Err(CharSumError::Precondition("d must divide q"));
    }
    if gcd(a, d as i64) != 1 {
        return Err(CharSumError::Precondition("need gcd(a, d) = 1"));
    }
    if d % chi.q_star != 0 {
        return Ok(0);
    }
    let mut val = (chi.q / d) as i64;
    for (p, _) in arith::factorize(chi.q0) {
        if d % p != 0 {
            debug_assert_eq!(val % p as i64, 0);
            val = val / p as i64 * (p as i64 - 1);
        }
    }
    Ok(val * arith::jacobi(a, chi.q_star as i64)? as i64)
}

/// Direct integer summation of S_χ(a, d, q).
pub fn char_sum_ap_direct(chi: &RealCharacter, a: i64, d: u64) -> Result<i64, CharSumError> {
    if d == 0 || chi.q % d != 0 {
        return Err(CharSumError::Precondition("d must divide q"));
    }
    if gcd(a, d as i64) != 1 {
        return Err(CharSumError::Precondition("need gcd(a, d) = 1"));
    }
    let mut n = a.rem_euclid(d as i64) as u64;
    let mut total = 0i64;
    while n < chi.q {
        total += chi.eval(n as i64) as i64;
        n += d;
    }
    Ok(total)
}

pub const T_SUM_ORACLE_MAX_C: u64 = 4096;
pub const T_SUM_NAIVE_MAX_C: u64 = 256;

/// Exact evaluation of T(a,b;c) through the one-variable collapse
///
///   T(a,b;c) = c · Σ*_{t mod c, bt ≡ a mod c} Σ_{x mod c} e_c(t x² + a x),
///
/// which is an identity for all a, b, c (opening S(x²,y²;c) over units and
/// summing the y variable by orthogonality).
pub fn t_sum_oracle(a: i64, b: i64, c: u64) -> Result<SumValue, CharSumError> {
    if c == 0 || c > T_SUM_ORACLE_MAX_C {
        return Err(CharSumError::SizeGuard(c, T_SUM_ORACLE_MAX_C));
    }
    let ci = c as i64;
    let table = root_of_unity_table(c);
    let (a, b) = (a.rem_euclid(ci), b.rem_euclid(ci));

    // units t with b·t ≡ a (mod c)
    let g = gcd0(b, c);
    if (a as u64) % g != 0 {
        return Ok(SumValue::of(Cplx::new(0.0, 0.0)));
    }
    let step = (c / g) as i64;
    let t0 = if b == 0 {
        0
    } else {
        (a / g as i64 * mod_inverse(b / g as i64, c / g)? as i64).rem_euclid(step)
    };

    let mut acc = KahanC::new();
    let mut t = t0;
    while t < ci {
        if gcd(t, ci) == 1 {
            let mut inner = KahanC::new();
            for x in 0..ci {
                let k = ((t * (x * x % ci) + a * x) % ci).rem_euclid(ci);
                inner.add(table[k as usize]);
            }
            acc.add(inner.value());
        }
        t += step;
    }
    Ok(SumValue::of(acc.value() * c as f64))
}

/// Literal double sum over x, y mod c with tabulated Kloosterman values;
/// cross-checks the collapsed oracle at small moduli.
pub fn t_sum_naive(a: i64, b: i64, c: u64) -> Result<SumValue, CharSumError> {
    if c == 0 || c > T_SUM_NAIVE_MAX_C {
        return Err(CharSumError::SizeGuard(c, T_SUM_NAIVE_MAX_C));
    }
    let ci = c as i64;
    let table = root_of_unity_table(c);
    let kl = KloostermanEvaluator::new(c);
    let mut cache: HashMap<(i64, i64), Cplx> = HashMap::new();
    let mut acc = KahanC::new();
    for x in 0..ci {
        for y in 0..ci {
            let key = (x * x % ci, y * y % ci);
            let s = *cache.entry(key).or_insert_with(|| kl.sum(key.0, key.1).value);
            let k = ((2 * x * y + a * x + b * y) % ci).rem_euclid(ci);
            acc.add(s * table[k as usize]);
        }
    }
    Ok(SumValue::of(acc.value()))
}

/// Closed form of T(a,b;c) for c = 2^j c_o with j ≥ 4:
///
/// T = 0 unless (a,c) = (b,c) and 4 | (a,b); otherwise
///
///   T = c^{3/2} ε_{c_o} e_c(−ab/4) (a, c/2^{2+δ}) (2/c_o)^δ (a'b'/c*)
///       · δ(c* | c_o/(a,c_o)) · Π_{p | c_□, p ∤ c_o/(a,c_o)} (1 − 1/p) · V,
///
/// where a' = a/(a,c), b' = b/(b,c) and V is the explicit unit sum
///
///   V = Σ*_{v mod 2^{2+δ}, v ≡ b̄'a' mod (2^j/(a,2^j), 2^{2+δ})}
///         { 1 + e₄(v c_o)    δ = 0
///         { √2 e₈(v c_o)     δ = 1.
pub fn t_sum_closed(a: i64, b: i64, c: u64) -> Result<SumValue, CharSumError> {
    let fm = factor_modulus(c)?;
    let j = fm.two_exponent;
    if j < 4 {
        return Err(CharSumError::UnsupportedModulus(c));
    }
    let ga = gcd0(a, c);
    let gb = gcd0(b, c);
    if ga != gb {
        return Ok(SumValue::exact_zero());
    }
    let gab = gcd(a, b); // gcd(0,0) = 0, divisible by 4
    if gab % 4 != 0 {
        return Ok(SumValue::exact_zero());
    }

    let c_o = fm.odd_part;
    let d_o = c_o / gcd0(a, c_o);
    let c_star = fm.squarefree_kernel;
    if d_o % c_star != 0 {
        return Ok(SumValue::exact_zero());
    }

    let a_prime = if a == 0 { 0 } else { a / ga as i64 };
    let b_prime = if b == 0 { 0 } else { b / gb as i64 };

    let delta = fm.delta as u32;
    let chi = arith::jacobi(2, c_o as i64)?.pow(delta) * arith::jacobi(a_prime * b_prime, c_star as i64)?;
    if chi == 0 {
        // only possible on the a = 0 row with c* > 1, already zero above
        return Ok(SumValue::exact_zero());
    }

    let mut euler = 1.0f64;
    for (p, _) in arith::factorize(fm.square_support) {
        if d_o % p != 0 {
            euler *= 1.0 - 1.0 / p as f64;
        }
    }

    let gcd_factor = (gcd0(a, 1 << (j - 2 - delta)) * gcd0(a, c_o)) as f64;

    // v-sum over units mod 2^{2+δ} with the congruence inherited from t
    let two_mod = 1u64 << (2 + delta);
    let m2 = gcd0(a, 1 << j); // (a, 2^j)
    let m2 = gcd(((1u64 << j) / m2) as i64, two_mod as i64);
    let v0 = if m2 > 1 {
        debug_assert!(b_prime % 2 != 0);
        (mod_inverse(b_prime, m2)? as i64 * a_prime).rem_euclid(m2 as i64) as u64
    } else {
        0
    };
    let e8 = root_of_unity_table(8);
    let mut v_sum = Cplx::new(0.0, 0.0);
    let mut v = 1u64;
    while v < two_mod {
        if v % m2 == v0 % m2 {
            let vc = (v * (c_o % 8)) % 8;
            v_sum += if delta == 0 {
                Cplx::new(1.0, 0.0) + e8[((vc % 4) * 2) as usize]
            } else {
                std::f64::consts::SQRT_2 * e8[vc as usize]
            };
        }
        v += 2;
    }

    let phase_index = {
        let q = (a as i128 * b as i128 / 4).rem_euclid(c as i128) as u64;
        ((c - q % c) % c) as usize
    };
    let table = root_of_unity_table(c);
    let value = (c as f64).powf(1.5)
        * epsilon(c_o as i64)?.value()
        * table[phase_index]
        * gcd_factor
        * chi as f64
        * euler
        * v_sum;
    Ok(SumValue::of(value))
}
