//! The spectral weight h(t), its cosine-transform window g, and the kernel
//! transform K₊(x) = ∫ e^{ix(cosh v − 1) − 2ivT} g(Δv) dv.

use crate::quad::{integrate_with_freq, QuadOpts, QuadResult};
use crate::util::KahanC;
use crate::Cplx;

/// h(t) = (t² + 1/4)/T² · [exp(−(t−T)²/Δ²) + exp(−(t+T)²/Δ²)].
pub fn spectral_weight_h(t: f64, big_t: f64, delta: f64) -> f64 {
    debug_assert!(big_t >= 1.0 && delta >= 1.0);
    let gauss = (-((t - big_t) / delta).powi(2)).exp() + (-((t + big_t) / delta).powi(2)).exp();
    (t * t + 0.25) / (big_t * big_t) * gauss
}

/// Integrand of the defining t-integral: t·tanh(πt)·h(t).
fn weighted_h(t: f64, big_t: f64, delta: f64) -> f64 {
    t * (std::f64::consts::PI * t).tanh() * spectral_weight_h(t, big_t, delta)
}

/// Numerator ∫ e^{−2ivt} t tanh(πt) h(t) dt, computed as a cosine transform
/// of the even integrand over the two Gaussian windows.
pub fn h_transform_numerator(v: f64, big_t: f64, delta: f64) -> f64 {
    let lo = (big_t - 14.0 * delta).max(0.0);
    let hi = big_t + 14.0 * delta;
    let mut f = |t: f64| Cplx::new((2.0 * v * t).cos() * weighted_h(t, big_t, delta), 0.0);
    let r = integrate_with_freq(&mut f, lo, hi, QuadOpts::with_tol(1e-11 * big_t * delta, 1e-11), |_| 2.0 * v.abs());
    2.0 * r.value.re
}

/// The window g: defined by
///   ∫ e^{−2ivt} t tanh(πt) h(t) dt = ΔT (e^{−2ivT} + e^{2ivT}) g(Δv),
/// precomputed on a uniform grid in y = Δv with cubic interpolation.
/// Grid points where the denominator cos(2vT) nearly vanishes are filled by
/// interpolating g across them (g itself is smooth there).
pub struct GWindow {
    pub big_t: f64,
    pub delta: f64,
    step: f64,
    values: Vec<f64>,
}

impl GWindow {
    pub fn new(big_t: f64, delta: f64) -> Self {
        assert!(big_t >= 1.0 && delta >= 1.0 && delta <= big_t);
        let y_max = 42.0;
        let step = 0.01;
        let n = (y_max / step) as usize + 1;
        let mut values = vec![f64::NAN; n];
        for (i, value) in values.iter_mut().enumerate() {
            let y = i as f64 * step;
            let v = y / delta;
            let denom = 2.0 * delta * big_t * (2.0 * v * big_t).cos();
            if denom.abs() >= 0.05 * 2.0 * delta * big_t {
                *value = h_transform_numerator(v, big_t, delta) / denom;
            }
        }
        // fill skipped points from smooth neighbours
        for i in 0..n {
            if values[i].is_nan() {
                let mut left = i;
                while left > 0 && values[left].is_nan() {
                    left -= 1;
                }
                let mut right = i;
                while right < n - 1 && values[right].is_nan() {
                    right += 1;
                }
                if values[left].is_nan() || values[right].is_nan() {
                    values[i] = 0.0;
                } else {
                    let t = (i - left) as f64 / (right - left) as f64;
                    values[i] = values[left] * (1.0 - t) + values[right] * t;
                }
            }
        }
        GWindow { big_t, delta, step, values }
    }

    pub fn y_max(&self) -> f64 {
        (self.values.len() - 1) as f64 * self.step
    }

    /// g(y), even in y; zero beyond the tabulated range (Schwartz decay).
    pub fn eval(&self, y: f64) -> f64 {
        let y = y.abs();
        let pos = y / self.step;
        let i = pos.floor() as usize;
        if i + 2 >= self.values.len() {
            return 0.0;
        }
        let t = pos - i as f64;
        // Catmull-Rom using clamped neighbours
        let p0 = self.values[i.saturating_sub(1)];
        let p1 = self.values[i];
        let p2 = self.values[i + 1];
        let p3 = self.values[i + 2];
        let a = 2.0 * p1;
        let b = p2 - p0;
        let c = 2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3;
        let d = -p0 + 3.0 * p1 - 3.0 * p2 + p3;
        0.5 * (a + b * t + c * t * t + d * t * t * t)
    }

    pub fn g0(&self) -> f64 {
        self.values[0]
    }
}

/// K₊(x) over the full tabulated v-range.
pub fn k_plus(x: f64, gw: &GWindow) -> QuadResult<f64> {
    let v_max = gw.y_max() / gw.delta;
    k_plus_on(x, gw, -v_max, v_max)
}

/// K₊(x) restricted to v ∈ [v_lo, v_hi]; the difference against the full
/// range measures how much of the transform lives outside that window.
pub fn k_plus_on(x: f64, gw: &GWindow, v_lo: f64, v_hi: f64) -> QuadResult<f64> {
    debug_assert!(x > 0.0);
    let big_t = gw.big_t;
    let mut f = |v: f64| {
        let w = gw.eval(gw.delta * v);
        if w == 0.0 {
            return Cplx::new(0.0, 0.0);
        }
        Cplx::from_polar(w, x * (v.cosh() - 1.0) - 2.0 * v * big_t)
    };
    let freq = |v: f64| x * v.sinh() - 2.0 * big_t;
    integrate_with_freq(&mut f, v_lo, v_hi, QuadOpts::with_tol(1e-12, 1e-9), freq)
}

/// Total |integrand| mass of K₊ on a v-interval (both signs of v).
pub fn k_plus_mass_on(x: f64, gw: &GWindow, v_lo: f64, v_hi: f64) -> f64 {
    let mut total = KahanC::new();
    let steps = 40_000;
    let h = (v_hi - v_lo) / steps as f64;
    for i in 0..=steps {
        let v = v_lo + i as f64 * h;
        let w = gw.eval(gw.delta * v).abs() + gw.eval(-gw.delta * v).abs();
        total.add(Cplx::new(w * h, 0.0));
    }
    total.value().re
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn h_examples() {
        let (t_big, delta) = (100.0, 10.0);
        let want = (t_big * t_big + 0.25) / (t_big * t_big) * (1.0 + (-4.0 * t_big * t_big / (delta * delta)).exp());
        assert!((spectral_weight_h(t_big, t_big, delta) - want).abs() < 1e-15);
        for t in [0.3, 5.0, 99.0, 150.0] {
            assert_eq!(spectral_weight_h(t, t_big, delta), spectral_weight_h(-t, t_big, delta));
            assert!(spectral_weight_h(t, t_big, delta) > 0.0);
            assert!(spectral_weight_h(t, t_big, delta) <= 2.0 * (t * t + 0.25) / (t_big * t_big));
        }
    }

    #[test]
    fn g_window_identity_at_zero() {
        let gw = GWindow::new(60.0, 6.0);
        let numerator = h_transform_numerator(0.0, 60.0, 6.0);
        assert!((numerator - 2.0 * 6.0 * 60.0 * gw.g0()).abs() < 1e-9 * numerator.abs());
        // scale sanity: g(0) is of order one
        assert!(gw.g0() > 0.3 && gw.g0() < 6.0, "g(0) = {}", gw.g0());
    }

    #[test]
    fn g_window_even_and_decays() {
        let gw = GWindow::new(100.0, 10.0);
        for y in [0.4, 1.7, 8.3] {
            assert_eq!(gw.eval(y), gw.eval(-y));
        }
        assert!(gw.eval(10.0).abs() <= 1e-4 * gw.g0().abs());
        // empirical Schwartz decay: |g(y)|(1+y)^A bounded for A ≤ 6
        for a in 1..=6 {
            let mut max_scaled: f64 = 0.0;
            let mut y = 3.0;
            while y <= 30.0 {
                max_scaled = max_scaled.max(gw.eval(y).abs() * (1.0 + y).powi(a));
                y += 0.37;
            }
            assert!(max_scaled < 1e3, "A={a}: {max_scaled}");
        }
    }

    #[test]
    fn g_window_interpolation_consistency() {
        // off-grid values agree with a direct quotient evaluation where the
        // denominator is safely away from zero
        let gw = GWindow::new(80.0, 8.0);
        for y in [0.203, 1.111, 2.077] {
            let v = y / 8.0;
            let denom = 2.0 * 8.0 * 80.0 * (2.0 * v * 80.0).cos();
            if denom.abs() < 0.2 * 2.0 * 8.0 * 80.0 {
                continue;
            }
            let direct = h_transform_numerator(v, 80.0, 8.0) / denom;
            assert!((gw.eval(y) - direct).abs() < 1e-6 * direct.abs().max(1e-3), "y={y}");
        }
    }
}
