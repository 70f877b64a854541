//! Special functions: modified Bessel K₀, generalized Laguerre polynomials
//! and matrix elements of the oscillator displacement operator.

use num_complex::Complex64;

use crate::error::{domain, Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Highest oscillator level / polynomial degree accepted.
pub const MAX_LEVEL: usize = 64;

/// Complex amplitude of a coherent displacement.
pub type ComplexAmplitude = Complex64;

// Series / continued-fraction crossover.
const K0_SPLIT: f64 = 2.0;

/// K₀(x) for x > 0. Underflows to 0 for very large x, see [`bessel_k0_flagged`].
pub fn bessel_k0(x: f64) -> Result<f64> {
    bessel_k0_flagged(x).map(|(v, _)| v)
}

/// K₀(x) together with a flag telling whether the result underflowed.
pub fn bessel_k0_flagged(x: f64) -> Result<(f64, bool)> {
    check_positive(x)?;
    if x <= K0_SPLIT {
        return Ok((k0_series(x), false));
    }
    let v = k0_scaled_cf(x) * (-x).exp();
    if v < f64::MIN_POSITIVE {
        Ok((0.0, true))
    } else {
        Ok((v, false))
    }
}

/// eˣ·K₀(x) for x > 0, finite for every positive x.
pub fn bessel_k0_scaled(x: f64) -> Result<f64> {
    check_positive(x)?;
    if x <= K0_SPLIT {
        Ok(k0_series(x) * x.exp())
    } else {
        Ok(k0_scaled_cf(x))
    }
}

fn check_positive(x: f64) -> Result<()> {
    if x > 0.0 && !x.is_nan() {
        Ok(())
    } else {
        Err(domain(format!("K0 requires x > 0, got {x}")))
    }
}

/// Ascending series K₀ = −(ln(x/2) + γ)·I₀(x) + Σ (x²/4)ᵏ/(k!)²·H_k.
fn k0_series(x: f64) -> f64 {
    let y = 0.25 * x * x;
    let mut term = 1.0;
    let mut i0 = 1.0;
    let mut tail = 0.0;
    let mut harmonic = 0.0;
    for k in 1..200 {
        let kf = k as f64;
        term *= y / (kf * kf);
        harmonic += 1.0 / kf;
        i0 += term;
        tail += term * harmonic;
        if term < 1e-18 * i0 {
            break;
        }
    }
    -((0.5 * x).ln() + EULER_GAMMA) * i0 + tail
}

/// Steed's continued fraction (Temme's CF2) for eˣ·K₀(x), x ≳ 2.
fn k0_scaled_cf(x: f64) -> f64 {
    let mut b = 2.0 * (1.0 + x);
    let mut d = 1.0 / b;
    let mut delh = d;
    let (mut q1, mut q2) = (0.0, 1.0);
    let a1 = 0.25;
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = 1.0 + q * delh;
    for i in 2..10_000 {
        let fi = i as f64;
        a -= 2.0 * (fi - 1.0);
        c = -a * c / fi;
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q += c * qnew;
        b += 2.0;
        d = 1.0 / (b + a * d);
        delh *= b * d - 1.0;
        let dels = q * delh;
        s += dels;
        if (dels / s).abs() < 1e-17 {
            break;
        }
    }
    (std::f64::consts::PI / (2.0 * x)).sqrt() / s
}

/// Generalized Laguerre polynomial L_m^{(l)}(x) by upward recurrence.
pub fn laguerre(m: usize, l: usize, x: f64) -> Result<f64> {
    if m > MAX_LEVEL {
        return Err(Error::LevelOutOfRange {
            level: m,
            max: MAX_LEVEL,
        });
    }
    let alpha = l as f64;
    let mut prev = 1.0;
    if m == 0 {
        return Ok(prev);
    }
    let mut cur = 1.0 + alpha - x;
    for k in 1..m {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

fn ln_factorial(n: usize) -> f64 {
    (2..=n).map(|k| (k as f64).ln()).sum()
}

/// ⟨ψ_m| D(μ) |ψ_n⟩ for D(μ) = exp(μa† − μ*a).
///
/// Factorial ratios enter under a square root, which is what makes the
/// matrix unitary.
pub fn displacement_element(m: usize, n: usize, mu: ComplexAmplitude) -> Result<ComplexAmplitude> {
    for level in [m, n] {
        if level > MAX_LEVEL {
            return Err(Error::LevelOutOfRange {
                level,
                max: MAX_LEVEL,
            });
        }
    }
    let x = mu.norm_sqr();
    let gauss = (-0.5 * x).exp();
    let (lo, hi, base) = if m >= n {
        (n, m, mu)
    } else {
        (m, n, -mu.conj())
    };
    let diff = hi - lo;
    let ratio = (0.5 * (ln_factorial(lo) - ln_factorial(hi))).exp();
    let lag = laguerre(lo, diff, x)?;
    Ok(base.powu(diff as u32) * (gauss * ratio * lag))
}
