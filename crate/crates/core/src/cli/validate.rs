//! Oracle comparisons run by the `validate` command.

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{
    build_majorana_transmon, default_cutoff, exact_even_odd_splitting, hermitian_eigensolve,
    ho_operator_matrix, majorana_levels, LatticeModel, OperatorKind, Spacing,
};
use crate::qubit_model::{
    cos_half_matrix_element, even_odd_splitting, junction_geometry, majorana_splitting,
    majorana_splitting_at_level, sin_half_matrix_element, QubitParams,
};
use crate::rates::{
    default_omega_floor, parity_switch_rate_ground, parity_switch_rate_matrix_form, sqp,
};
use crate::specfun::bessel_k0;

/// Tolerance scaling for the checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Profile {
    #[default]
    Default,
    /// Every tolerance halved.
    Strict,
}

impl Profile {
    fn scale(self) -> f64 {
        match self {
            Profile::Default => 1.0,
            Profile::Strict => 0.5,
        }
    }
}

impl std::str::FromStr for Profile {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "default" => Ok(Profile::Default),
            "strict" => Ok(Profile::Strict),
            _ => Err(Error::Config(format!(
                "unknown profile '{s}' (expected default or strict)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    /// Measured deviation, in the units of `tolerance`.
    pub value: f64,
    pub tolerance: f64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub profile: &'static str,
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn lines(&self) -> String {
        self.checks
            .iter()
            .map(|c| format!("{}: {}\n", c.name, if c.passed { "pass" } else { "fail" }))
            .collect()
    }
}

fn check(name: &'static str, value: f64, tolerance: f64, detail: String) -> Check {
    Check {
        name,
        passed: value <= tolerance,
        value,
        tolerance,
        detail,
    }
}

fn failed(name: &'static str, err: Error) -> Check {
    Check {
        name,
        passed: false,
        value: f64::NAN,
        tolerance: f64::NAN,
        detail: err.to_string(),
    }
}

fn fig2(e_m: f64, n_g: f64, flux: f64) -> QubitParams {
    let (e_j0, e_j1) = QubitParams::split_josephson(8.0, 0.25);
    QubitParams {
        e_c: 1.0,
        e_j0,
        e_j1,
        e_m0: e_m,
        e_m1: e_m,
        n_g,
        flux,
        gap: 38.92962680,
        temperature: 2.083661912,
    }
}

fn splitting_error(ratio: f64) -> Result<f64> {
    let e_c = 0.2;
    let e_j = ratio * e_c;
    let exact = exact_even_odd_splitting(e_c, e_j, 0.0)?;
    Ok((even_odd_splitting(e_c, e_j, 0.0)? - exact).abs() / exact)
}

fn splitting_checks(scale: f64) -> Vec<Check> {
    let mut out = Vec::new();
    let errors: Result<Vec<f64>> = [20.0, 35.0, 50.0, 80.0]
        .into_iter()
        .map(splitting_error)
        .collect();
    match errors {
        Ok(e) => {
            out.push(check(
                "even_odd_splitting_vs_exact_ratio20",
                e[0],
                0.10 * scale,
                format!("relative error {:.4}", e[0]),
            ));
            out.push(check(
                "eq18_vs_exact_ratio50",
                e[2],
                0.05 * scale,
                format!("relative error {:.4}", e[2]),
            ));
            let worst = e
                .windows(2)
                .map(|w| w[1] - w[0])
                .fold(f64::NEG_INFINITY, f64::max);
            let detail = format!("errors {e:?}");
            out.push(Check {
                name: "even_odd_splitting_error_decreasing",
                passed: worst < 0.0,
                value: worst,
                tolerance: 0.0,
                detail,
            });
        }
        Err(err) => out.push(failed("eq18_vs_exact_ratio50", err)),
    }
    out
}

fn half_angle_check(scale: f64) -> Check {
    let name = "half_angle_elements_vs_oscillator";
    let run = || -> Result<Check> {
        let (e_c, e_j): (f64, f64) = (0.2, 10.0);
        let omega_p = (8.0 * e_c * e_j).sqrt();
        let s2 = e_c / omega_p;
        let mu = Complex64::new(0.0, s2.sqrt());
        let tol = 5.0 * s2.powf(1.5) * scale;
        let mut worst: f64 = 0.0;
        for phase in [0.0, 0.7, 2.1] {
            let c = ho_operator_matrix(OperatorKind::CosHalf, phase, mu, 128)?;
            let s = ho_operator_matrix(OperatorKind::SinHalf, phase, mu, 128)?;
            for (m, n) in [(0, 0), (0, 1), (1, 0), (1, 1), (0, 2), (2, 0)] {
                {
                    let dc = (cos_half_matrix_element(m, n, phase, e_c, omega_p)?
                        - c.matrix[(m, n)].re)
                        .abs();
                    let ds = (sin_half_matrix_element(m, n, phase, e_c, omega_p)?
                        - s.matrix[(m, n)].re)
                        .abs();
                    worst = worst.max(dc).max(ds);
                }
            }
        }
        Ok(check(
            name,
            worst,
            tol,
            format!("max deviation {worst:.3e}"),
        ))
    };
    run().unwrap_or_else(|e| failed(name, e))
}

fn gauge_check() -> Check {
    let name = "gauge_invariance_EM_sign";
    let run = || -> Result<Check> {
        let mut worst: f64 = 0.0;
        for (flux, n_g) in [(0.0, 0.1), (0.31, 0.25), (0.77, 0.4)] {
            let p = QubitParams {
                e_m1: 0.2,
                ..fig2(0.15, n_g, flux)
            };
            let h = build_majorana_transmon(
                &p,
                default_cutoff(p.e_c, p.e_j_sum(), n_g, Spacing::SingleElectron),
            )?;
            // E_M0, E_M1 -> -E_M0, -E_M1 flips every odd-distance hopping.
            let mut flipped = h.clone();
            flipped.model = LatticeModel::Custom;
            for c in &mut flipped.band1 {
                *c = -*c;
            }
            let a = hermitian_eigensolve(&h, false)?.eigenvalues;
            let b = hermitian_eigensolve(&flipped, false)?.eigenvalues;
            for (x, y) in a.iter().zip(&b).take(10) {
                worst = worst.max((x - y).abs());
            }
        }
        Ok(check(
            name,
            worst,
            1e-9,
            format!("max level shift {worst:.3e} GHz"),
        ))
    };
    run().unwrap_or_else(|e| failed(name, e))
}

fn hermiticity_check() -> Check {
    let name = "exact_hamiltonian_hermitian";
    let run = || -> Result<Check> {
        let p = QubitParams {
            e_m1: 0.3,
            ..fig2(0.2, 0.13, 0.37)
        };
        let h = build_majorana_transmon(
            &p,
            default_cutoff(p.e_c, p.e_j_sum(), p.n_g, Spacing::SingleElectron),
        )?;
        let dense = h.to_dense();
        let dev = (&dense - dense.adjoint())
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        let conv = hermitian_eigensolve(&h, false)?
            .convergence_delta
            .unwrap_or(0.0);
        Ok(check(
            name,
            dev.max(conv),
            1e-8,
            format!("asymmetry {dev:.1e}, convergence {conv:.1e}"),
        ))
    };
    run().unwrap_or_else(|e| failed(name, e))
}

fn parity_crossing_check(scale: f64) -> Check {
    let name = "parity_crossing_splitting";
    let run = || -> Result<Check> {
        let p = fig2(0.05, 0.25, 0.0);
        let geo = junction_geometry(&p)?;
        let e = majorana_levels(&p)?;
        let expected =
            majorana_splitting_at_level(p.e_m0, p.e_m1, 0.0, geo.theta, 0, p.e_c, geo.omega_p);
        let rel = ((e[1] - e[0]) - expected).abs() / expected;
        Ok(check(
            name,
            rel,
            0.02 * scale,
            format!(
                "exact {:.6} vs level-corrected {:.6} GHz",
                e[1] - e[0],
                expected
            ),
        ))
    };
    run().unwrap_or_else(|e| failed(name, e))
}

fn flux_period_check() -> Check {
    let name = "majorana_splitting_vanishes_f1";
    let v = majorana_splitting(0.5, 0.5, 1.0, std::f64::consts::PI).abs();
    check(name, v, 0.0, format!("omega_M(f=1) = {v:e}"))
}

fn rate_forms_check(scale: f64) -> Check {
    let name = "eq23_line2_vs_line3";
    let run = || -> Result<Check> {
        let mut worst: f64 = 0.0;
        let mut margin = f64::INFINITY;
        for ratio in [20.0, 50.0, 100.0] {
            for flux in [0.1, 0.25, 0.4] {
                for d in [0.0, 0.25] {
                    let e_c = 0.2;
                    let (e_j0, e_j1) = QubitParams::split_josephson(ratio * e_c, d);
                    let p = QubitParams {
                        e_c,
                        e_j0,
                        e_j1,
                        e_m0: 0.05,
                        e_m1: 0.05,
                        n_g: 0.1,
                        flux,
                        ..fig2(0.0, 0.0, 0.0)
                    };
                    let floor = default_omega_floor(p.temperature);
                    let closed = parity_switch_rate_ground(&p, floor)?.gamma;
                    let matrix = parity_switch_rate_matrix_form(&p, floor)?;
                    let rel = (closed - matrix).abs() / closed.abs();
                    // E_J here is the flux-dependent effective energy.
                    let e_j_eff = junction_geometry(&p)?.e_j_eff;
                    let tol = (e_c / (8.0 * e_j_eff)).sqrt() * scale;
                    worst = worst.max(rel);
                    margin = margin.min(tol - rel);
                }
            }
        }
        Ok(Check {
            name,
            passed: margin >= 0.0,
            value: worst,
            tolerance: worst + margin,
            detail: format!("worst relative difference {worst:.3e}"),
        })
    };
    run().unwrap_or_else(|e| failed(name, e))
}

fn detailed_balance_check() -> Check {
    let name = "sqp_detailed_balance";
    let run = || -> Result<Check> {
        let mut worst: f64 = 0.0;
        for t in [0.5, 2.08, 5.0] {
            for w in [0.01, 0.3, 1.0, 4.0] {
                let up = sqp(w, t, 38.9, 10.0, 1e-6)?;
                let down = sqp(-w, t, 38.9, 10.0, 1e-6)?;
                worst = worst.max((up / down / (w / t).exp() - 1.0).abs());
            }
        }
        Ok(check(
            name,
            worst,
            1e-10,
            format!("max relative deviation {worst:.1e}"),
        ))
    };
    run().unwrap_or_else(|e| failed(name, e))
}

fn k0_check() -> Check {
    let name = "k0_reference_values";
    // Reference values to 16 digits.
    let table = [
        (0.1, 2.427_069_024_702_017),
        (1.0, 0.421_024_438_240_708_3),
        (5.0, 0.003_691_098_334_042_594),
        (20.0, 5.741_237_815_336_524e-10),
    ];
    let mut worst: f64 = 0.0;
    for (x, want) in table {
        match bessel_k0(x) {
            Ok(v) => worst = worst.max((v - want).abs() / want),
            Err(e) => return failed(name, e),
        }
    }
    check(
        name,
        worst,
        1e-9,
        format!("max relative deviation {worst:.1e}"),
    )
}

pub fn run_validation(profile: Profile) -> Report {
    let scale = profile.scale();
    let mut checks = splitting_checks(scale);
    checks.push(half_angle_check(scale));
    checks.push(gauge_check());
    checks.push(hermiticity_check());
    checks.push(parity_crossing_check(scale));
    checks.push(flux_period_check());
    checks.push(rate_forms_check(scale));
    checks.push(detailed_balance_check());
    checks.push(k0_check());
    Report {
        profile: match profile {
            Profile::Default => "default",
            Profile::Strict => "strict",
        },
        checks,
    }
}
