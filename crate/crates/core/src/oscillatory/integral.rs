//! The two-variable oscillatory integral
//!
//!   I(A,B,U,ε,N) = ∬ e^{iφ(x,y)} w(x/N) w(y/N) dx dy,
//!   φ(x,y) = −U log x + U log y + Ax − By + εxy,
//!
//! its stationary points in the two phase-dominance regimes, and the Taylor
//! expansion of the phase value at the stationary point.

use super::window::DyadicWindow;
use super::OscError;
use crate::quad::{integrate_2d, QuadOpts, QuadResult};
use crate::Cplx;

#[derive(Clone, Copy, Debug)]
pub struct OscParams {
    pub a: f64,
    pub b: f64,
    pub u: f64,
    pub eps: f64,
    pub n: f64,
    pub window: DyadicWindow,
}

impl OscParams {
    pub fn new(a: f64, b: f64, u: f64, eps: f64, n: f64) -> Self {
        assert!(n >= 1.0 && eps >= 0.0 && u >= 0.0);
        OscParams { a, b, u, eps, n, window: DyadicWindow }
    }

    pub fn phase(&self, x: f64, y: f64) -> f64 {
        -self.u * x.ln() + self.u * y.ln() + self.a * x - self.b * y + self.eps * x * y
    }

    pub fn grad_phase(&self, x: f64, y: f64) -> (f64, f64) {
        (-self.u / x + self.a + self.eps * y, self.u / y - self.b + self.eps * x)
    }

    /// εN²/U, the quantity that decides which phase term dominates.
    pub fn regime_ratio(&self) -> f64 {
        if self.u == 0.0 {
            f64::INFINITY
        } else {
            self.eps * self.n * self.n / self.u
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Regime {
    /// εN² ≪ U: the logarithmic phase dominates.
    UDominant,
    /// U ≪ εN²: the bilinear phase dominates.
    EpsilonDominant,
}

/// 2-d quadrature of the defining integral.
pub fn i_integral(p: &OscParams, abs_tol: f64) -> QuadResult<f64> {
    let n = p.n;
    let f = move |x: f64, y: f64| {
        let w = p.window.eval(x / n) * p.window.eval(y / n);
        if w == 0.0 {
            return Cplx::new(0.0, 0.0);
        }
        Cplx::from_polar(w, p.phase(x, y))
    };
    let freq_x = move |x: f64| (-p.u / x + p.a).abs() + p.eps * 2.0 * n;
    let freq_y = move |y: f64| (p.u / y - p.b).abs() + p.eps * 2.0 * n;
    integrate_2d(&f, (n, 2.0 * n), (n, 2.0 * n), QuadOpts::with_tol(abs_tol, 1e-9), freq_x, freq_y)
}

#[derive(Clone, Copy, Debug)]
pub struct StationaryPoint {
    pub x: f64,
    pub y: f64,
    pub phase: f64,
    pub regime: Regime,
    /// Root of the normalized phase in the regime's rescaled coordinates.
    pub scaled_x: f64,
    pub scaled_y: f64,
    /// The small expansion parameter δ of the regime.
    pub delta: f64,
}

/// Scaled stationary roots as functions of δ alone.
///
/// U-dominant: x' = 1 − δr₀, y' = 1 + δr₀ with r₀ = 2/(1 + √(1+4δ²))
/// (the root of r = 1 − δ²r²).
/// ε-dominant: x' = (1 − 2δ + √(1+4δ²))/2, y' = (1 + 2δ + √(1+4δ²))/2.
pub fn scaled_root(regime: Regime, delta: f64) -> (f64, f64) {
    let s = (1.0 + 4.0 * delta * delta).sqrt();
    match regime {
        Regime::UDominant => {
            let r0 = 2.0 / (1.0 + s);
            (1.0 - delta * r0, 1.0 + delta * r0)
        }
        Regime::EpsilonDominant => ((1.0 - 2.0 * delta + s) / 2.0, (1.0 + 2.0 * delta + s) / 2.0),
    }
}

/// Product x'y' of the U-dominant scaled root, the solution of r = 1 − δ²r².
pub fn u_dominant_root_product(delta: f64) -> f64 {
    2.0 / (1.0 + (1.0 + 4.0 * delta * delta).sqrt())
}

/// The stationary point of φ, rejecting the near-coalescing band
/// 1/3 < εN²/U < 3 where neither phase term dominates.
pub fn stationary_point(p: &OscParams) -> Result<StationaryPoint, OscError> {
    let ratio = p.regime_ratio();
    if ratio > 1.0 / 3.0 && ratio < 3.0 {
        return Err(OscError::GuardBand { ratio });
    }
    let regime = if ratio <= 1.0 / 3.0 { Regime::UDominant } else { Regime::EpsilonDominant };
    let (x, y, sx, sy, delta) = match regime {
        Regime::UDominant => {
            if p.a <= 0.0 || p.b <= 0.0 {
                return Err(OscError::BadParameters("U-dominant regime needs A, B > 0"));
            }
            let delta = p.eps * p.u / (p.a * p.b);
            let (sx, sy) = scaled_root(regime, delta);
            (p.u / p.a * sx, p.u / p.b * sy, sx, sy, delta)
        }
        Regime::EpsilonDominant => {
            if !(p.a < 0.0 && p.b > 0.0) {
                return Err(OscError::BadParameters("ε-dominant regime needs A < 0 < B"));
            }
            let delta = p.u * p.eps / (p.a * p.b).abs();
            let (sx, sy) = scaled_root(regime, delta);
            (p.b / p.eps * sx, -p.a / p.eps * sy, sx, sy, delta)
        }
    };
    let (gx, gy) = p.grad_phase(x, y);
    let scale = p.u / p.n + p.a.abs() + p.eps * p.n;
    if gx.abs() + gy.abs() > 1e-10 * scale.max(1e-300) {
        return Err(OscError::BadParameters("stationary root failed the gradient residual check"));
    }
    Ok(StationaryPoint { x, y, phase: p.phase(x, y), regime, scaled_x: sx, scaled_y: sy, delta })
}

/// Normalized phase value at the stationary point, as a function of δ:
///
/// U-dominant:  Φ(δ) = log((1+δr₀)/(1−δr₀)) − δr₀            (odd in δ)
/// ε-dominant:  Φ(δ) = −(1+√(1+4δ²))/2 − δ·log(y₀/x₀)        (even in δ)
pub fn scaled_phase_value(regime: Regime, delta: f64) -> f64 {
    match regime {
        Regime::UDominant => {
            let r0 = u_dominant_root_product(delta);
            let u = delta * r0;
            ((1.0 + u) / (1.0 - u)).ln() - u
        }
        Regime::EpsilonDominant => {
            let s = (1.0 + 4.0 * delta * delta).sqrt();
            -(1.0 + s) / 2.0 - delta * ((1.0 + 2.0 * delta + s) / (1.0 - 2.0 * delta + s)).ln()
        }
    }
}

#[derive(Clone, Debug)]
pub struct PhaseTaylor {
    /// U-dominant: Φ(δ) ≈ Σ_j coeffs[j] δ^{2j+1}.
    /// ε-dominant: Φ(δ) ≈ Σ_j coeffs[j] δ^j (odd entries vanish).
    pub coeffs: Vec<f64>,
    /// max |Φ − truncation| over |δ'| ≤ δ.
    pub remainder_bound: f64,
    /// max |Φ(δ') − Φ(−δ')|/2 over the grid; certifies parity numerically.
    pub odd_part_residual: f64,
}

/// Chebyshev coefficients of f on [0,1], degree < n.
fn chebyshev_fit(f: impl Fn(f64) -> f64, n: usize) -> Vec<f64> {
    let vals: Vec<f64> = (0..n)
        .map(|j| {
            let xi = (std::f64::consts::PI * (j as f64 + 0.5) / n as f64).cos();
            f((xi + 1.0) / 2.0)
        })
        .collect();
    (0..n)
        .map(|k| {
            let mut s = 0.0;
            for (j, v) in vals.iter().enumerate() {
                s += v * (std::f64::consts::PI * k as f64 * (j as f64 + 0.5) / n as f64).cos();
            }
            s * if k == 0 { 1.0 } else { 2.0 } / n as f64
        })
        .collect()
}

/// Monomial coefficients (in t) of Σ a_k T_k(2t−1).
fn chebyshev_to_monomial(a: &[f64]) -> Vec<f64> {
    let n = a.len();
    let mut t_prev = vec![0.0; n];
    let mut t_cur = vec![0.0; n];
    t_prev[0] = 1.0; // T_0
    if n > 1 {
        t_cur[0] = -1.0;
        t_cur[1] = 2.0; // T_1(2t-1)
    }
    let mut out = vec![0.0; n];
    out[0] += a[0] * t_prev[0];
    if n > 1 {
        for (o, c) in out.iter_mut().zip(&t_cur) {
            *o += a[1] * c;
        }
    }
    for k in 2..n {
        // T_k = 2(2t-1)T_{k-1} - T_{k-2}
        let mut t_next = vec![0.0; n];
        for i in 0..n {
            if t_cur[i] != 0.0 {
                if i + 1 < n {
                    t_next[i + 1] += 4.0 * t_cur[i];
                }
                t_next[i] -= 2.0 * t_cur[i];
            }
            t_next[i] -= t_prev[i];
        }
        for (o, c) in out.iter_mut().zip(&t_next) {
            *o += a[k] * c;
        }
        t_prev = t_cur;
        t_cur = t_next;
    }
    out
}

/// Numerically extract the Taylor coefficients of Φ around δ = 0 from
/// pointwise evaluation, up to index J, together with a remainder bound on
/// |δ'| ≤ delta.
pub fn phase_taylor(regime: Regime, delta: f64, j_max: usize) -> Result<PhaseTaylor, OscError> {
    if !(delta > 0.0 && delta <= 0.3) {
        return Err(OscError::BadParameters("expansion parameter must lie in (0, 0.3]"));
    }
    let fit_scale = delta.min(0.12);
    let degree = 12usize;

    // fit the even function g(t) on [0,1], where t = (δ/fit_scale)²
    let g = |t: f64| {
        let d = fit_scale * t.sqrt();
        match regime {
            Regime::UDominant => {
                if d == 0.0 {
                    // Φ(δ)/δ → 1
                    1.0
                } else {
                    scaled_phase_value(regime, d) / d
                }
            }
            Regime::EpsilonDominant => scaled_phase_value(regime, d),
        }
    };
    let mono = chebyshev_to_monomial(&chebyshev_fit(g, degree));
    // coefficient of δ^{2j} in g comes with fit_scale^{-2j}
    let even: Vec<f64> = mono.iter().enumerate().map(|(j, &c)| c / fit_scale.powi(2 * j as i32)).collect();

    let coeffs: Vec<f64> = match regime {
        Regime::UDominant => even.iter().take(j_max + 1).copied().collect(),
        Regime::EpsilonDominant => {
            let mut full = vec![0.0; j_max + 1];
            for (j, v) in full.iter_mut().enumerate() {
                if j % 2 == 0 {
                    *v = even[j / 2];
                }
            }
            full
        }
    };

    let mut remainder_bound = 0.0f64;
    let mut odd_part_residual = 0.0f64;
    for i in 1..=200 {
        let d = delta * i as f64 / 200.0;
        let exact = scaled_phase_value(regime, d);
        let approx: f64 = match regime {
            Regime::UDominant => coeffs.iter().enumerate().map(|(j, c)| c * d.powi(2 * j as i32 + 1)).sum(),
            Regime::EpsilonDominant => coeffs.iter().enumerate().map(|(j, c)| c * d.powi(j as i32)).sum(),
        };
        remainder_bound = remainder_bound.max((exact - approx).abs());
        let mirrored = scaled_phase_value(regime, -d);
        let parity_defect = match regime {
            Regime::UDominant => (exact + mirrored).abs() / 2.0,
            Regime::EpsilonDominant => (exact - mirrored).abs() / 2.0,
        };
        odd_part_residual = odd_part_residual.max(parity_defect);
    }
    Ok(PhaseTaylor { coeffs, remainder_bound, odd_part_residual })
}
