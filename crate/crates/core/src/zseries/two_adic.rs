//! The 2-adic series
//!
//!   Z^(2) = Σ (2^ν, 2^{λ−2−δ}) / 2^{λ(u₁+s) + ν(u₂−iU−s) + γ(u₃+iU−s)}
//!
//! over ν, γ ≥ 2, λ ≥ 4 with min(λ,ν) = min(λ,γ), restricted to one of the
//! four λ/ν relations, and — in the λ ≥ ν+3 case — optionally split by the
//! size of λ − ν. Closed forms:
//!
//!   λ ≤ ν:     2^{−2−δ} 2^{−4(α+β)} (1−2^{−α−β})⁻¹ (1−2^{−(u₂−iU−s)})⁻¹ (1−2^{−(u₃+iU−s)})⁻¹
//!   λ = ν+1:   2^{−1−δ−3α−4β} (1−2^{−α−β})⁻¹
//!   λ = ν+2:   2^{−δ−2α−4β} (1−2^{−α−β})⁻¹
//!   λ ≥ ν+3:   2^{−2α−2β} (1−2^{−α−β})⁻¹ · Σ_{3≤μ(≤L or >L)} 2^{−μβ}
//!
//! so the tail piece is 2^{−2α−2β}(1−2^{−α−β})⁻¹·2^{−β(L+1)}(1−2^{−β})⁻¹.

use super::{CaseLabel, SeriesPoint, Truncated, ZError};
use crate::util::KahanC;
use crate::Cplx;

/// Which part of the λ − ν range to take in the λ ≥ ν+3 case.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TailRange {
    Full,
    /// λ − ν ≤ L
    UpTo(u32),
    /// λ − ν > L
    Beyond(u32),
}

fn two_pow(z: Cplx) -> Cplx {
    // 2^{-z}
    (-z * std::f64::consts::LN_2).exp()
}

const GUARD: f64 = 1e-12;

fn checked_inv(denom: Cplx, what: &'static str) -> Result<Cplx, ZError> {
    if denom.norm() < GUARD {
        return Err(ZError::SingularEvaluation(what));
    }
    Ok(1.0 / denom)
}

/// Closed form of Z^(2) for the given case, δ and range.
///
/// In the first three cases the series carries no λ−ν split: `UpTo` returns
/// the full value and `Beyond` returns exactly zero.
pub fn z2_closed(case: CaseLabel, pt: &SeriesPoint, delta: u8, range: TailRange) -> Result<Cplx, ZError> {
    debug_assert!(delta <= 1);
    let (a, b) = (pt.alpha(), pt.beta());
    if (a + b).re <= 0.0 {
        return Err(ZError::Divergent("need Re(α+β) > 0"));
    }
    let geo_ab = checked_inv(1.0 - two_pow(a + b), "1 - 2^{-α-β} vanishes")?;
    let d = delta as f64;
    match case {
        CaseLabel::LambdaAtMostNu | CaseLabel::LambdaIsNuPlus1 | CaseLabel::LambdaIsNuPlus2 => {
            if matches!(range, TailRange::Beyond(_)) {
                return Ok(Cplx::new(0.0, 0.0));
            }
            match case {
                CaseLabel::LambdaAtMostNu => {
                    if pt.u2.re <= 0.0 || pt.u3.re <= 0.0 {
                        return Err(ZError::Divergent("need Re(u₂), Re(u₃) > 0"));
                    }
                    let g2 = checked_inv(1.0 - two_pow(pt.k_exponent()), "1 - 2^{-(u₂-iU-s)} vanishes")?;
                    let g3 = checked_inv(1.0 - two_pow(pt.l_exponent()), "1 - 2^{-(u₃+iU-s)} vanishes")?;
                    Ok(two_pow(Cplx::new(2.0 + d, 0.0)) * two_pow(4.0 * (a + b)) * geo_ab * g2 * g3)
                }
                CaseLabel::LambdaIsNuPlus1 => Ok(two_pow((1.0 + d) + 3.0 * a + 4.0 * b) * geo_ab),
                CaseLabel::LambdaIsNuPlus2 => Ok(two_pow(d + 2.0 * a + 4.0 * b) * geo_ab),
                CaseLabel::LambdaAtLeastNuPlus3 => unreachable!(),
            }
        }
        CaseLabel::LambdaAtLeastNuPlus3 => {
            let prefactor = two_pow(2.0 * (a + b)) * geo_ab;
            let mu_sum = match range {
                TailRange::Full => {
                    if b.re <= 0.0 {
                        return Err(ZError::Divergent("need Re(β) > 0 for the full λ-ν sum"));
                    }
                    two_pow(3.0 * b) * checked_inv(1.0 - two_pow(b), "1 - 2^{-β} vanishes")?
                }
                TailRange::UpTo(l) => {
                    let mut s = Cplx::new(0.0, 0.0);
                    for mu in 3..=l {
                        s += two_pow(b * mu as f64);
                    }
                    s
                }
                TailRange::Beyond(l) => {
                    if b.re <= 0.0 {
                        return Err(ZError::Divergent("need Re(β) > 0 for the tail"));
                    }
                    two_pow(b * (l + 1) as f64) * checked_inv(1.0 - two_pow(b), "1 - 2^{-β} vanishes")?
                }
            };
            Ok(prefactor * mu_sum)
        }
    }
}

/// Direct triple sum over (λ, ν, γ) up to `grid_cutoff` in each exponent.
pub fn z2_oracle(
    case: CaseLabel,
    pt: &SeriesPoint,
    delta: u8,
    range: TailRange,
    grid_cutoff: u32,
) -> Truncated {
    debug_assert!(delta <= 1);
    let g = grid_cutoff;
    let mut acc = KahanC::new();
    let (b_exp, k_exp, l_exp) = (pt.beta(), pt.k_exponent(), pt.l_exponent());
    for lambda in 4..=g {
        for nu in 2..=g {
            if CaseLabel::classify(lambda, nu) != case {
                continue;
            }
            match range {
                TailRange::Full => {}
                TailRange::UpTo(l) => {
                    if lambda > nu && lambda - nu > l {
                        continue;
                    }
                }
                TailRange::Beyond(l) => {
                    if lambda <= nu || lambda - nu <= l {
                        continue;
                    }
                }
            }
            for gamma in 2..=g {
                if lambda.min(nu) != lambda.min(gamma) {
                    continue;
                }
                // (2^ν, 2^{λ-2-δ}) / 2^{λβ + ν(u₂-iU-s) + γ(u₃+iU-s)}
                let gcd_exp = nu.min(lambda.saturating_sub(2 + delta as u32)) as f64;
                let term = two_pow(b_exp * lambda as f64 + k_exp * nu as f64 + l_exp * gamma as f64)
                    * 2f64.powf(gcd_exp);
                acc.add(term);
            }
        }
    }
    // the slowest geometric direction bounds the discarded box
    let rates = [
        two_pow(b_exp - 1.0).norm(),
        two_pow(k_exp - 1.0).norm(),
        two_pow(l_exp).norm(),
    ];
    let worst = rates.iter().cloned().fold(0.0, f64::max);
    let tail_bound = if worst < 1.0 {
        3.0 * (g as f64 + 1.0).powi(2) * worst.powi(g as i32 + 1) / (1.0 - worst)
    } else {
        f64::INFINITY
    };
    Truncated { value: acc.value(), tail_bound }
}
