//! Mellin-side surrogate of the additive character: for f(x) = e^{−ix} w(x/X)
//! the transform f̃(−it) = ∫ f(x) x^{−it} dx/x concentrates on −t ≍ X with
//! |f̃| ≍ X^{−1/2}, and inverting over that range reconstructs f.

use super::window::DyadicWindow;
use crate::quad::{integrate_with_freq, QuadOpts};
use crate::Cplx;

/// f̃(−it) = ∫ e^{−ix} x^{−it} w(x/X) dx/x.
pub fn mellin_forward(t: f64, x_scale: f64) -> Cplx {
    let w = DyadicWindow;
    let mut f = |x: f64| {
        let win = w.eval(x / x_scale);
        if win == 0.0 {
            return Cplx::new(0.0, 0.0);
        }
        Cplx::from_polar(win / x, -x - t * x.ln())
    };
    let freq = |x: f64| (1.0 + t / x).abs();
    integrate_with_freq(&mut f, x_scale, 2.0 * x_scale, QuadOpts::with_tol(1e-11, 1e-9), freq).value
}

#[derive(Clone, Debug)]
pub struct MellinReport {
    pub x_scale: f64,
    /// max over the reconstruction grid of |f_rec(x) − f(x)|, relative to
    /// the window peak (= 1).
    pub reconstruction_err: f64,
    /// range of |f̃(−it)|·√X over the dyadic window −t ∈ [1.2X, 1.8X].
    pub scaled_magnitude: (f64, f64),
    /// max |f̃| outside −t ∈ [X/4, 4X], relative to the in-window max.
    pub outside_ratio: f64,
    /// max |f̃(−it)| for t > 0 (the wrong sign), absolute.
    pub wrong_sign_max: f64,
}

/// Runs the full transform/support/reconstruction experiment at scale X.
pub fn mellin_surrogate(x_scale: f64) -> MellinReport {
    assert!(x_scale >= 10.0);
    let x = x_scale;

    // sample the transform on a Simpson grid covering the inversion range
    let t_lo = -6.0 * x;
    let t_hi = 0.5 * x;
    let n_half = (((t_hi - t_lo) / 0.08).ceil() as usize).div_ceil(2);
    let n = 2 * n_half;
    let h = (t_hi - t_lo) / n as f64;
    let samples: Vec<(f64, Cplx)> =
        (0..=n).map(|i| { let t = t_lo + i as f64 * h; (t, mellin_forward(t, x)) }).collect();

    let mut in_window_max = 0.0f64;
    let mut scaled_lo = f64::INFINITY;
    let mut scaled_hi = 0.0f64;
    let mut outside_max = 0.0f64;
    let mut wrong_sign_max = 0.0f64;
    for &(t, v) in &samples {
        let m = v.norm();
        let neg = -t;
        if (1.2 * x..=1.8 * x).contains(&neg) {
            scaled_lo = scaled_lo.min(m * x.sqrt());
            scaled_hi = scaled_hi.max(m * x.sqrt());
        }
        if (0.25 * x..=4.0 * x).contains(&neg) {
            in_window_max = in_window_max.max(m);
        } else {
            outside_max = outside_max.max(m);
        }
        if t > 0.0 {
            wrong_sign_max = wrong_sign_max.max(m);
        }
    }

    // reconstruction: f(x) = (1/2π) ∫ f̃(−it) x^{it} dt over the sampled range
    let mut reconstruction_err = 0.0f64;
    for i in 1..60 {
        let xx = x * (1.0 + i as f64 / 60.0 * 0.96 + 0.02);
        let mut acc = Cplx::new(0.0, 0.0);
        for (j, &(t, v)) in samples.iter().enumerate() {
            let weight = if j == 0 || j == n { 1.0 } else if j % 2 == 1 { 4.0 } else { 2.0 };
            acc += v * Cplx::from_polar(1.0, t * xx.ln()) * weight;
        }
        let f_rec = acc * h / 3.0 / (2.0 * std::f64::consts::PI);
        let f_exact = Cplx::from_polar(DyadicWindow.eval(xx / x), -xx);
        reconstruction_err = reconstruction_err.max((f_rec - f_exact).norm());
    }

    MellinReport {
        x_scale: x,
        reconstruction_err,
        scaled_magnitude: (scaled_lo, scaled_hi),
        outside_ratio: outside_max / in_window_max,
        wrong_sign_max,
    }
}
