//! Local factors at odd primes, the correction coefficients a_p, and the
//! auxiliary series D(α, β, χ) in both its Dirichlet-sum and Euler-product
//! forms.

use super::{SeriesPoint, Truncated, ZError};
use crate::arith;
use crate::util::KahanC;
use crate::zseries::Mod8Character;
use crate::Cplx;

fn p_pow(p: u64, z: Cplx) -> Cplx {
    // p^{-z}
    (-z * (p as f64).ln()).exp()
}

const POLE_GUARD: f64 = 1e-12;

/// Local factor at an odd prime p with χ(p) = ±1:
///
///   (1 + p^{−α−2β} − p^{−1−2α−2β} + χ(p) p^{−1−2α−3β})
///   / ((1 − χ(p) p^{−β})(1 − p^{−2α−2β}))
pub fn local_factor_unramified(p: u64, chi_p: i32, pt: &SeriesPoint) -> Result<Cplx, ZError> {
    assert!(chi_p == 1 || chi_p == -1, "unramified means χ(p) = ±1");
    let (a, b) = (pt.alpha(), pt.beta());
    let l_factor = 1.0 - p_pow(p, b) * chi_p as f64;
    let zeta_factor = 1.0 - p_pow(p, 2.0 * (a + b));
    if l_factor.norm() < POLE_GUARD || zeta_factor.norm() < POLE_GUARD {
        return Err(ZError::SingularEvaluation("denominator of the local factor vanishes"));
    }
    let num = 1.0 + p_pow(p, a + 2.0 * b) - p_pow(p, 1.0 + 2.0 * a + 2.0 * b)
        + p_pow(p, 1.0 + 2.0 * a + 3.0 * b) * chi_p as f64;
    Ok(num / (l_factor * zeta_factor))
}

/// Local factor at an odd prime with χ(p) = 0:
/// (1 − p^{−1−2α−2β}) / (1 − p^{−2α−2β}).
pub fn local_factor_ramified(p: u64, pt: &SeriesPoint) -> Result<Cplx, ZError> {
    let (a, b) = (pt.alpha(), pt.beta());
    let denom = 1.0 - p_pow(p, 2.0 * (a + b));
    if denom.norm() < POLE_GUARD {
        return Err(ZError::SingularEvaluation("1 - p^{-2α-2β} vanishes"));
    }
    Ok((1.0 - p_pow(p, 1.0 + 2.0 * a + 2.0 * b)) / denom)
}

/// Direct evaluation of the defining local multi-sum
///
///   Σ_{min(r₁,r₂)=0} Σ_{0≤g₁≤2r₁} Σ_{0≤g₂≤2r₂} Σ_{q∈{0,1}}
///       (1 − 1/p)^{[g₂=2r₂>0]} χ(p)^q p^{−β(q+2r₁+2r₂) − α(g₁+g₂)}
///
/// restricted by q ≥ [r₁ > 0] and min(q, r₂) = 0; for χ(p) = 0 the local
/// membership constraint additionally forces g₂ = 2r₂.
pub fn local_factor_oracle(p: u64, chi_p: i32, pt: &SeriesPoint, cutoff: u32) -> Truncated {
    assert!(cutoff >= 10);
    let (a, b) = (pt.alpha(), pt.beta());
    let one_minus_inv_p = 1.0 - 1.0 / p as f64;
    let mut acc = KahanC::new();
    for r1 in 0..=cutoff {
        for r2 in 0..=cutoff {
            if r1.min(r2) != 0 {
                continue;
            }
            for q in 0u32..=1 {
                if r1 > 0 && q == 0 {
                    continue;
                }
                if q.min(r2) != 0 {
                    continue;
                }
                let chi_q = if q == 0 { 1 } else { chi_p };
                if chi_q == 0 {
                    continue;
                }
                for g1 in 0..=2 * r1 {
                    for g2 in 0..=2 * r2 {
                        let closes_square = r2 > 0 && g2 == 2 * r2;
                        if chi_p == 0 && r2 > 0 && !closes_square {
                            continue;
                        }
                        let coef = if closes_square { one_minus_inv_p } else { 1.0 };
                        let term = p_pow(p, b * (q + 2 * r1 + 2 * r2) as f64 + a * (g1 + g2) as f64);
                        acc.add(term * (coef * chi_q as f64));
                    }
                }
            }
        }
    }
    // geometric tails in the r₁ and r₂ directions
    let ra = p_pow(p, a).norm();
    let rb2 = p_pow(p, 2.0 * b).norm();
    let tail_bound = if ra < 1.0 && rb2 < 1.0 {
        let g_cap = 1.0 / (1.0 - ra);
        2.0 * rb2.powi(cutoff as i32 + 1) / (1.0 - rb2) * g_cap * (1.0 + p_pow(p, b).norm())
    } else {
        f64::INFINITY
    };
    Truncated { value: acc.value(), tail_bound }
}

/// a_p = (1 − p^{−1−2α−2β}) / (1 + p^{−α−2β} − p^{−1−2α−2β}).
pub fn a_p(p: u64, pt: &SeriesPoint) -> Result<Cplx, ZError> {
    let (a, b) = (pt.alpha(), pt.beta());
    let small = p_pow(p, 1.0 + 2.0 * a + 2.0 * b);
    let denom = 1.0 + p_pow(p, a + 2.0 * b) - small;
    if denom.norm() < POLE_GUARD {
        return Err(ZError::SingularEvaluation("denominator of a_p vanishes"));
    }
    Ok((1.0 - small) / denom)
}

fn chi_at(p: u64, kl: u64, eta: Mod8Character) -> i32 {
    arith::jacobi(p as i64, kl as i64).unwrap() * eta.eval_odd(p as i64)
}

/// Dirichlet-sum form of D(α, β, χ_{kℓ}·η):
///
///   Σ_{n odd squarefree} n^{−α−2β} Π_{p|n} (1 − p^{−1−α} + χ(p) p^{−1−α−β})
///
/// summed directly over n ≤ cutoff (the inner sum over abc = n collapses to
/// the displayed multiplicative coefficient for squarefree n).
pub fn d_series_sum(pt: &SeriesPoint, kl: u64, eta: Mod8Character, cutoff: u64) -> Result<Truncated, ZError> {
    let (a, b) = (pt.alpha(), pt.beta());
    let sigma = (a + 2.0 * b).re;
    if sigma <= 1.0 || (a + b).re <= 0.0 {
        return Err(ZError::Divergent("need Re(α+2β) > 1 and Re(α+β) > 0"));
    }
    let mut acc = KahanC::new();
    acc.add(Cplx::new(1.0, 0.0));
    let mut n = 3u64;
    while n <= cutoff {
        let fs = arith::factorize(n);
        if fs.iter().all(|&(_, e)| e == 1) {
            let mut coef = Cplx::new(1.0, 0.0);
            for &(p, _) in &fs {
                coef *= 1.0 - p_pow(p, 1.0 + a) + p_pow(p, 1.0 + a + b) * chi_at(p, kl, eta) as f64;
            }
            acc.add(coef * p_pow(n, a + 2.0 * b));
        }
        n += 2;
    }
    // |coef(n)| ≤ 3^{ω(n)} ≤ 1.6·n^{0.6}
    let tail_bound = if sigma > 1.7 {
        1.6 * (cutoff as f64).powf(1.6 - sigma) / (sigma - 1.6)
    } else {
        f64::INFINITY
    };
    Ok(Truncated { value: acc.value(), tail_bound })
}

/// Euler-product form of D(α, β, χ_{kℓ}·η):
/// Π_{p odd ≤ cutoff} (1 + p^{−α−2β}(1 − p^{−1−α} + χ(p) p^{−1−α−β})).
pub fn d_series_product(pt: &SeriesPoint, kl: u64, eta: Mod8Character, cutoff: u64) -> Result<Truncated, ZError> {
    let (a, b) = (pt.alpha(), pt.beta());
    let sigma = (a + 2.0 * b).re;
    if sigma <= 1.0 || (a + b).re <= 0.0 {
        return Err(ZError::Divergent("need Re(α+2β) > 1 and Re(α+β) > 0"));
    }
    let mut value = Cplx::new(1.0, 0.0);
    let mut p = 3u64;
    while p <= cutoff {
        if arith::is_prime(p) {
            value *= 1.0
                + p_pow(p, a + 2.0 * b)
                    * (1.0 - p_pow(p, 1.0 + a) + p_pow(p, 1.0 + a + b) * chi_at(p, kl, eta) as f64);
        }
        p += 2;
    }
    // log-tail Σ_{p>cutoff} 3 p^{-σ}
    let log_tail = 3.0 * (cutoff as f64).powf(1.0 - sigma) / (sigma - 1.0);
    Ok(Truncated { value, tail_bound: value.norm() * log_tail.exp_m1().abs() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::util::rel_err;

    fn pt_re(u1: f64, u2: f64, u3: f64) -> SeriesPoint {
        SeriesPoint::from_u(Cplx::new(u1, 0.0), Cplx::new(u2, 0.0), Cplx::new(u3, 0.0))
    }

    /// α = β = 2 corresponds to u = (2, 5/2, 5/2) at s = 0.
    fn pt_alpha_beta(alpha: f64, beta: f64) -> SeriesPoint {
        pt_re(beta, (alpha + 1.0) / 2.0, (alpha + 1.0) / 2.0)
    }

    #[test]
    fn unramified_closed_form_example() {
        let pt = pt_alpha_beta(2.0, 2.0);
        let got = local_factor_unramified(3, 1, &pt).unwrap();
        let p = 3.0f64;
        let want = (1.0 + p.powi(-6) - p.powi(-9) + p.powi(-13)) / ((1.0 - p.powi(-2)) * (1.0 - p.powi(-8)));
        assert!(rel_err(got, Cplx::new(want, 0.0)) < 1e-14);
    }

    #[test]
    fn ramified_closed_form_examples() {
        let pt = pt_alpha_beta(1.0, 1.0);
        let got = local_factor_ramified(3, &pt).unwrap();
        let want = (1.0 - 3.0f64.powi(-5)) / (1.0 - 3.0f64.powi(-4));
        assert!(rel_err(got, Cplx::new(want, 0.0)) < 1e-14);

        let pt = pt_alpha_beta(2.0, 1.0);
        let got = local_factor_ramified(7, &pt).unwrap();
        let want = (1.0 - 7.0f64.powi(-7)) / (1.0 - 7.0f64.powi(-6));
        assert!(rel_err(got, Cplx::new(want, 0.0)) < 1e-14);
    }

    #[test]
    fn oracle_matches_closed_forms() {
        let pt = pt_alpha_beta(2.0, 2.0);
        for p in [3u64, 5, 7, 11] {
            for chi in [1i32, -1] {
                let oracle = local_factor_oracle(p, chi, &pt, 40);
                let closed = local_factor_unramified(p, chi, &pt).unwrap();
                assert!(rel_err(oracle.value, closed) < 1e-12, "p={p} chi={chi}");
                assert!(oracle.tail_bound < 1e-12);
            }
            let oracle = local_factor_oracle(p, 0, &pt, 40);
            let closed = local_factor_ramified(p, &pt).unwrap();
            assert!(rel_err(oracle.value, closed) < 1e-12, "p={p} ramified");
        }
    }

    #[test]
    fn oracle_cutoff_stability() {
        let pt = pt_alpha_beta(2.0, 2.0);
        let a = local_factor_oracle(3, 1, &pt, 40).value;
        let b = local_factor_oracle(3, 1, &pt, 50).value;
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn a_p_example_and_limit() {
        let pt = pt_alpha_beta(1.0, 1.0);
        let got = a_p(3, &pt).unwrap();
        let want = (1.0 - 3.0f64.powi(-5)) / (1.0 + 3.0f64.powi(-3) - 3.0f64.powi(-5));
        assert!(rel_err(got, Cplx::new(want, 0.0)) < 1e-14);

        let far = pt_alpha_beta(30.0, 30.0);
        assert!((a_p(3, &far).unwrap() - 1.0).norm() < 1e-12);
    }

    #[test]
    fn a_p_is_one_plus_big_o_of_inverse_p() {
        // scan p ≤ 1000 at a D∞ point and record max p·|a_p − 1|
        let pt = pt_re(0.6, 0.75, 0.75);
        let mut max_scaled = 0.0f64;
        let mut p = 3u64;
        while p <= 1000 {
            if arith::is_prime(p) {
                let dev = (a_p(p, &pt).unwrap() - 1.0).norm() * p as f64;
                max_scaled = max_scaled.max(dev);
            }
            p += 2;
        }
        assert!(max_scaled.is_finite());
        assert!(max_scaled < 10.0, "max p|a_p - 1| = {max_scaled}");
    }

    #[test]
    fn d_series_sum_vs_product() {
        let pt = pt_alpha_beta(2.0, 2.0);
        for kl in [1u64, 15] {
            let sum = d_series_sum(&pt, kl, Mod8Character::Trivial, 10_000).unwrap();
            let prod = d_series_product(&pt, kl, Mod8Character::Trivial, 10_000).unwrap();
            assert!(rel_err(sum.value, prod.value) < 1e-8, "kl={kl}");
            assert!(sum.tail_bound < 1e-8 && prod.tail_bound < 1e-8);
        }
    }

    #[test]
    fn d_series_trivial_limits() {
        // α + β → ∞ sends the product to 1; the n = 1 term contributes exactly 1
        let far = pt_alpha_beta(40.0, 40.0);
        let prod = d_series_product(&far, 1, Mod8Character::Trivial, 1000).unwrap();
        assert!((prod.value - 1.0).norm() < 1e-12);
        let sum = d_series_sum(&far, 1, Mod8Character::Trivial, 1000).unwrap();
        assert!((sum.value - 1.0).norm() < 1e-12);
    }

    #[test]
    fn domain_guards_fire() {
        let bad = pt_re(0.1, 0.1, 0.1);
        assert!(d_series_sum(&bad, 1, Mod8Character::Trivial, 100).is_err());
    }
}
