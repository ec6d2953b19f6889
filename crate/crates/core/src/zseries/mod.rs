//! Dirichlet-series objects attached to the shifted double character sums:
//! local Euler factors and their defining multi-sums, the auxiliary series
//! D(α,β,χ), the correction factors a_p, the 2-adic series Z^(2) in its four
//! exponent-relation cases, and the Euler-product identity for Z_{k,ℓ}
//! against the raw (q, r₁, r₂, g₁, g₂) sum.

mod global;
mod local;
mod two_adic;

pub use global::{z_kl_oracle, z_kl_oracle_batch, z_kl_product, ZklFactors};
pub use local::{a_p, d_series_product, d_series_sum, local_factor_oracle, local_factor_ramified, local_factor_unramified};
pub use two_adic::{z2_closed, z2_oracle, TailRange};

use crate::Cplx;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ZError {
    #[error("series point outside the required domain: {0}")]
    DomainViolation(&'static str),
    #[error("evaluation too close to a singular point: {0}")]
    SingularEvaluation(&'static str),
    #[error("parameters give a divergent sum: {0}")]
    Divergent(&'static str),
}

/// Truncated evaluation with a bound on the discarded tail.
#[derive(Clone, Copy, Debug)]
pub struct Truncated {
    pub value: Cplx,
    pub tail_bound: f64,
}

/// The evaluation point (s, u₁, u₂, u₃, U) with Re(s) = 0 by construction.
/// The combinations α = u₂ + u₃ − 2s − 1 and β = u₁ + s are recomputed on
/// demand, never stored.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeriesPoint {
    s_im: f64,
    pub u1: Cplx,
    pub u2: Cplx,
    pub u3: Cplx,
    pub big_u: f64,
}

impl SeriesPoint {
    pub fn new(s_im: f64, u1: Cplx, u2: Cplx, u3: Cplx, big_u: f64) -> Self {
        assert!(big_u >= 0.0, "U must be nonnegative");
        SeriesPoint { s_im, u1, u2, u3, big_u }
    }

    /// Convenience constructor for points with s = 0, U = 0.
    pub fn from_u(u1: Cplx, u2: Cplx, u3: Cplx) -> Self {
        Self::new(0.0, u1, u2, u3, 0.0)
    }

    pub fn s(&self) -> Cplx {
        Cplx::new(0.0, self.s_im)
    }

    pub fn alpha(&self) -> Cplx {
        self.u2 + self.u3 - 2.0 * self.s() - 1.0
    }

    pub fn beta(&self) -> Cplx {
        self.u1 + self.s()
    }

    /// Exponent of the k-variable: u₂ − iU − s.
    pub fn k_exponent(&self) -> Cplx {
        self.u2 - Cplx::new(0.0, self.big_u) - self.s()
    }

    /// Exponent of the ℓ-variable: u₃ + iU − s.
    pub fn l_exponent(&self) -> Cplx {
        self.u3 + Cplx::new(0.0, self.big_u) - self.s()
    }
}

/// Convergence/continuation domains, cut out by linear conditions on the
/// real parts of (u₁, u₂, u₃):
///
///   D₀: Re u₁ > 1, Re u₂ > 1, Re u₃ > 1
///   D₁: Re u₂ > 1, Re u₃ > 1, Re u₁ + min > 3/2, Re u₁ + 2·min > 3
///   D₂: Re u₂ > 1/2, Re u₃ > 1/2, Re u₁ + min > 3/2
///   D∞: Re u₂ > 1/2, Re u₃ > 1/2, Re u₁ + min > 1
///
/// where min = min(Re u₂, Re u₃).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DomainLabel {
    D0,
    D1,
    D2,
    DInfinity,
}

/// Tests membership with every strict inequality tightened by `margin`.
pub fn domain_contains(label: DomainLabel, pt: &SeriesPoint, margin: f64) -> bool {
    debug_assert!(margin >= 0.0);
    let (r1, r2, r3) = (pt.u1.re, pt.u2.re, pt.u3.re);
    let min23 = r2.min(r3);
    match label {
        DomainLabel::D0 => r1 >= 1.0 + margin && r2 >= 1.0 + margin && r3 >= 1.0 + margin,
        DomainLabel::D1 => {
            r2 >= 1.0 + margin
                && r3 >= 1.0 + margin
                && r1 + min23 >= 1.5 + margin
                && r1 + 2.0 * min23 >= 3.0 + margin
        }
        DomainLabel::D2 => r2 >= 0.5 + margin && r3 >= 0.5 + margin && r1 + min23 >= 1.5 + margin,
        DomainLabel::DInfinity => {
            r2 >= 0.5 + margin && r3 >= 0.5 + margin && r1 + min23 >= 1.0 + margin
        }
    }
}

/// The four relations between the 2-adic exponents λ = v₂(c) and ν = v₂(k)
/// that control the gcd factor (2^ν, 2^{λ−2−δ}).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CaseLabel {
    /// λ ≤ ν
    LambdaAtMostNu,
    /// λ = ν + 1
    LambdaIsNuPlus1,
    /// λ = ν + 2
    LambdaIsNuPlus2,
    /// λ ≥ ν + 3
    LambdaAtLeastNuPlus3,
}

impl CaseLabel {
    pub const ALL: [CaseLabel; 4] = [
        CaseLabel::LambdaAtMostNu,
        CaseLabel::LambdaIsNuPlus1,
        CaseLabel::LambdaIsNuPlus2,
        CaseLabel::LambdaAtLeastNuPlus3,
    ];

    pub fn classify(lambda: u32, nu: u32) -> CaseLabel {
        if lambda <= nu {
            CaseLabel::LambdaAtMostNu
        } else if lambda == nu + 1 {
            CaseLabel::LambdaIsNuPlus1
        } else if lambda == nu + 2 {
            CaseLabel::LambdaIsNuPlus2
        } else {
            CaseLabel::LambdaAtLeastNuPlus3
        }
    }
}

/// The four real characters modulo 8, named by the Kronecker symbol they
/// restrict to on odd arguments.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mod8Character {
    #[default]
    Trivial,
    /// (−1/n): +1 for n ≡ 1 (mod 4), −1 for n ≡ 3 (mod 4)
    MinusOne,
    /// (2/n): +1 for n ≡ ±1 (mod 8), −1 for n ≡ ±3 (mod 8)
    Two,
    /// (−2/n)
    MinusTwo,
}

impl Mod8Character {
    /// Value at an odd integer.
    pub fn eval_odd(self, n: i64) -> i32 {
        debug_assert!(n % 2 != 0);
        let r = n.rem_euclid(8);
        match self {
            Mod8Character::Trivial => 1,
            Mod8Character::MinusOne => {
                if r == 1 || r == 5 {
                    1
                } else {
                    -1
                }
            }
            Mod8Character::Two => {
                if r == 1 || r == 7 {
                    1
                } else {
                    -1
                }
            }
            Mod8Character::MinusTwo => {
                if r == 1 || r == 3 {
                    1
                } else {
                    -1
                }
            }
        }
    }

    pub fn is_trivial(self) -> bool {
        self == Mod8Character::Trivial
    }
}
