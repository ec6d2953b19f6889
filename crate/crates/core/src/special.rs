//! Complex special functions: log-gamma, Hurwitz zeta by Euler–Maclaurin,
//! and Dirichlet L-series summed over residue classes.
//!
//! The Euler–Maclaurin path is the workhorse oracle for every L-value in the
//! crate: it is slow but uniformly accurate on vertical lines, which is what
//! an independent reference needs to be.

use crate::Cplx;

/// Lanczos g = 7, n = 9 coefficients.
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// Principal branch of ln Γ(z), Re(z) > 0 (reflection handles the rest).
pub fn ln_gamma(z: Cplx) -> Cplx {
    if z.re < 0.5 {
        // reflection: Γ(z)Γ(1-z) = π / sin(πz)
        let pi = std::f64::consts::PI;
        let sin = (Cplx::new(pi, 0.0) * z).sin();
        return Cplx::new(pi, 0.0).ln() - sin.ln() - ln_gamma(Cplx::new(1.0, 0.0) - z);
    }
    let zm1 = z - 1.0;
    let mut acc = Cplx::new(LANCZOS[0], 0.0);
    for (i, &c) in LANCZOS.iter().enumerate().skip(1) {
        acc += c / (zm1 + i as f64);
    }
    let t = zm1 + 7.5;
    (zm1 + 0.5) * t.ln() - t + (2.0 * std::f64::consts::PI).sqrt().ln() + acc.ln()
}

pub fn gamma(z: Cplx) -> Cplx {
    ln_gamma(z).exp()
}

/// B_2, B_4, ..., B_30.
const BERNOULLI_EVEN: [f64; 15] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
    8553103.0 / 6.0,
    -23749461029.0 / 870.0,
    8615841276005.0 / 14322.0,
];

/// Hurwitz zeta ζ(s, a) = Σ_{n≥0} (n+a)^{-s} by truncated sum plus
/// Euler–Maclaurin tail. Accurate to ~1e-13 relative for Re(s) > -1,
/// |Im(s)| up to a few thousand, a ∈ (0, 1].
///
/// s = 1 is the pole and is rejected by debug assertion.
pub fn hurwitz_zeta(s: Cplx, a: f64) -> Cplx {
    debug_assert!(a > 0.0 && a <= 1.0);
    debug_assert!((s - Cplx::new(1.0, 0.0)).norm() > 1e-12, "pole at s = 1");
    let j = (1.3 * s.im.abs()).ceil().max(24.0) as usize;

    let mut head = crate::util::KahanC::new();
    for n in 0..j {
        head.add((-s * Cplx::new(n as f64 + a, 0.0).ln()).exp());
    }
    let x = j as f64 + a;
    let lx = Cplx::new(x, 0.0).ln();
    // ∫_J^∞ + ½ f(J) corrections
    let mut tail = ((1.0 - s) * lx).exp() / (s - 1.0) + 0.5 * (-s * lx).exp();
    // Σ B_2k/(2k)! · s(s+1)…(s+2k-2) · x^{-s-2k+1}
    let mut rising = s; // s(s+1)…(s+2k-2), starts at k=1 as just s
    let mut fact = 2.0; // (2k)!
    for (k, &b2k) in BERNOULLI_EVEN.iter().enumerate() {
        let k = k + 1;
        let term = rising * (b2k / fact) * ((-s - (2 * k - 1) as f64) * lx).exp();
        tail += term;
        rising *= (s + (2 * k - 1) as f64) * (s + (2 * k) as f64);
        fact *= (2 * k + 1) as f64 * (2 * k + 2) as f64;
    }
    head.value() + tail
}

pub fn riemann_zeta(s: Cplx) -> Cplx {
    hurwitz_zeta(s, 1.0)
}

/// L(s, χ) = q^{-s} Σ_{r=1..q} χ(r) ζ(s, r/q) for a character given by its
/// value table (chi[r] = χ(r), indices mod q). Handles imprimitive and
/// trivial tables alike; the caller avoids s = 1 when Σχ(r) ≠ 0.
pub fn dirichlet_l(s: Cplx, chi: &[i32]) -> Cplx {
    let q = chi.len();
    debug_assert!(q >= 1);
    let mut acc = crate::util::KahanC::new();
    for (r, &x) in chi.iter().enumerate().skip(1) {
        if x != 0 {
            acc.add(hurwitz_zeta(s, r as f64 / q as f64) * x as f64);
        }
    }
    // r = q residue class (χ(0) is zero unless q = 1)
    if chi[0] != 0 {
        acc.add(hurwitz_zeta(s, 1.0) * chi[0] as f64);
    }
    acc.value() * (-s * Cplx::new(q as f64, 0.0).ln()).exp()
}

/// Value table of the Jacobi character n ↦ (n/m) for odd m ≥ 1.
pub fn jacobi_table(m: u64) -> Vec<i32> {
    (0..m).map(|n| crate::arith::jacobi(n as i64, m as i64).unwrap()).collect()
}
