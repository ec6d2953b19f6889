//! The fixed smooth dyadic window used by every oscillatory integral here:
//! the mollifier exp(−1/(u(1−u))) rescaled to peak 1 on (0,1) and shifted to
//! the dyadic interval [1,2]. Its derivatives are computed exactly through
//! the recurrence f' = g'·f with g(u) = −1/u − 1/(1−u) whose derivatives
//! are elementary, so the inert-scaling constants sup |x^j w^(j)(x)| can be
//! tabulated without numerical differentiation.

use std::sync::OnceLock;

/// exp(4 − 1/(u(1−u))) on (0,1), zero outside; peak value 1 at u = 1/2.
pub fn bump01(u: f64) -> f64 {
    if u <= 0.0 || u >= 1.0 {
        return 0.0;
    }
    (4.0 - 1.0 / (u * (1.0 - u))).exp()
}

/// Derivatives (f, f', ..., f^(order)) of bump01 at u, exact up to rounding.
pub fn bump01_derivatives(u: f64, order: usize) -> Vec<f64> {
    if u <= 0.0 || u >= 1.0 {
        return vec![0.0; order + 1];
    }
    // g^{(k)}(u) = -[(-1)^k k! u^{-k-1} + k! (1-u)^{-k-1}]
    let mut g = Vec::with_capacity(order + 1);
    let mut fact = 1.0f64;
    for k in 0..=order {
        if k > 0 {
            fact *= k as f64;
        }
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        g.push(-(sign * fact * u.powi(-(k as i32) - 1) + fact * (1.0 - u).powi(-(k as i32) - 1)));
    }
    let mut f = Vec::with_capacity(order + 1);
    f.push(bump01(u));
    for j in 0..order {
        // f^{(j+1)} = Σ_{i≤j} C(j,i) g^{(i+1)} f^{(j-i)}
        let mut binom = 1.0f64;
        let mut val = 0.0;
        for i in 0..=j {
            val += binom * g[i + 1] * f[j - i];
            binom = binom * (j - i) as f64 / (i + 1) as f64;
        }
        f.push(val);
    }
    f
}

/// Unit dyadic window: supported on [1,2], peak 1 at x = 3/2.
#[derive(Clone, Copy, Debug, Default)]
pub struct DyadicWindow;

impl DyadicWindow {
    pub fn eval(&self, x: f64) -> f64 {
        bump01(x - 1.0)
    }

    /// j-th derivative at x.
    pub fn derivative(&self, x: f64, j: usize) -> f64 {
        bump01_derivatives(x - 1.0, j)[j]
    }

    /// Inert scaling constants C(j) = sup_x |x^j w^(j)(x)|, tabulated j ≤ 6.
    pub fn inert_constants(&self) -> &'static [f64; 7] {
        static CONSTS: OnceLock<[f64; 7]> = OnceLock::new();
        CONSTS.get_or_init(|| {
            let mut c = [0.0f64; 7];
            let n = 40_000;
            for i in 1..n {
                let x = 1.0 + i as f64 / n as f64;
                let d = bump01_derivatives(x - 1.0, 6);
                for (j, cj) in c.iter_mut().enumerate() {
                    *cj = cj.max((x.powi(j as i32) * d[j]).abs());
                }
            }
            c
        })
    }
}

/// Product window on [N,2N]²: w(x/N)·w(y/N).
pub fn window_2d(n: f64, x: f64, y: f64) -> f64 {
    DyadicWindow.eval(x / n) * DyadicWindow.eval(y / n)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bump_shape() {
        assert_eq!(bump01(0.0), 0.0);
        assert_eq!(bump01(1.0), 0.0);
        assert_eq!(bump01(-3.0), 0.0);
        assert!((bump01(0.5) - 1.0).abs() < 1e-15);
        assert!(bump01(0.1) > 0.0 && bump01(0.1) < bump01(0.3));
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let h = 1e-5;
        for u in [0.2, 0.45, 0.7] {
            let d = bump01_derivatives(u, 3);
            let fd1 = (bump01(u + h) - bump01(u - h)) / (2.0 * h);
            assert!((d[1] - fd1).abs() < 1e-5, "u={u}: {} vs {fd1}", d[1]);
            let fd2 = (bump01(u + h) - 2.0 * bump01(u) + bump01(u - h)) / (h * h);
            assert!((d[2] - fd2).abs() < 1e-3 * d[2].abs().max(1.0), "u={u}");
        }
    }

    #[test]
    fn inert_constants_finite_and_growing() {
        let c = DyadicWindow.inert_constants();
        assert!((c[0] - 1.0).abs() < 1e-12);
        for j in 1..=6 {
            assert!(c[j].is_finite() && c[j] > 0.0);
        }
        // derivative bounds grow with order for this window
        assert!(c[6] > c[1]);
    }

    #[test]
    fn window_mass_is_stable_under_refinement() {
        // non-oscillatory integral of the window: zero-phase case
        let mut f = |x: f64| crate::Cplx::new(DyadicWindow.eval(x), 0.0);
        let coarse = crate::quad::integrate(&mut f, 1.0, 2.0, crate::quad::QuadOpts::with_tol(1e-10, 1e-10));
        let fine = crate::quad::integrate(&mut f, 1.0, 2.0, crate::quad::QuadOpts::with_tol(1e-13, 1e-13));
        assert!((coarse.value.re - fine.value.re).abs() < 1e-10);
        assert!(coarse.value.re > 0.1 && coarse.value.re < 1.0);
    }
}
