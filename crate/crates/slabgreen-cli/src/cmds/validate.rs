//! `validate`: built-in consistency suites. Each check prints one PASS or
//! FAIL line; any failure turns into exit code 1. Numerical breakdowns
//! inside a check are reported as that check's failure rather than aborting
//! the run, so a partially broken build still yields a full report.

use slabgreen::eigen::{auto_basis, eigen_green_z, eigen_uniform_temp};
use slabgreen::kernel::{green_halfspace, green_z, image_term, p_coeff, ImageSign};
use slabgreen::quad::GaussLegendre;
use slabgreen::special::{binomial, f_k};
use slabgreen::temp::{l_coeffs, temp, temp_dirichlet, temp_quadrature};
use slabgreen::{
    Result as SlabResult, RobinCondition, SlabConfig, SlabError, TruncationPolicy,
};

use crate::args::{Suite, ValidateArgs};
use crate::conf::{self, CliError, Resolved};

struct Check {
    name: &'static str,
    passed: bool,
    detail: String,
}

/// Runs one check body, folding numerical errors into a failure line.
fn run_check(
    name: &'static str,
    body: impl FnOnce() -> SlabResult<(bool, String)>,
) -> Check {
    match body() {
        Ok((passed, detail)) => Check {
            name,
            passed,
            detail,
        },
        Err(err) => Check {
            name,
            passed: false,
            detail: format!("error: {err}"),
        },
    }
}

pub fn run(args: ValidateArgs) -> Result<(), CliError> {
    let resolved = conf::resolve(&args.common)?;
    let mut checks = Vec::new();
    if matches!(args.suite, Suite::Limits | Suite::All) {
        checks.extend(limits(&resolved));
    }
    if matches!(args.suite, Suite::Residuals | Suite::All) {
        checks.extend(residuals(&resolved));
    }
    if matches!(args.suite, Suite::Oracle | Suite::All) {
        checks.extend(oracle(&resolved));
    }
    if matches!(args.suite, Suite::Coefficients | Suite::All) {
        checks.extend(coefficients(&resolved));
    }

    let mut failed = 0usize;
    for check in &checks {
        let verdict = if check.passed { "PASS" } else { "FAIL" };
        println!("{verdict} {}: {}", check.name, check.detail);
        if !check.passed {
            failed += 1;
        }
    }
    if failed > 0 {
        return Err(CliError::Validation(format!(
            "{failed} of {} checks failed",
            checks.len()
        )));
    }
    println!("all {} checks passed", checks.len());
    Ok(())
}

fn limits(resolved: &Resolved) -> Vec<Check> {
    let thickness = resolved.thickness;
    let kappa = resolved.kappa;
    let policy = resolved.policy;
    let tau = thickness * thickness / (4.0 * kappa);
    let mut checks = Vec::new();

    checks.push(run_check("insulated mass conservation", || {
        let cfg = SlabConfig::new(thickness, kappa, RobinCondition::Finite(0.0))?;
        let rule = GaussLegendre::new(200);
        let z = 0.3 * thickness;
        let mut worst: f64 = 0.0;
        for ratio in [0.01, 1.0, 10.0] {
            let t = ratio * tau;
            let mass =
                rule.try_integrate(0.0, thickness, |zp| Ok(green_z(z, zp, t, &cfg, &policy)?.value))?;
            worst = worst.max((mass - 1.0).abs());
        }
        Ok((worst <= 1e-10, format!("worst |mass - 1| = {worst:.3e}")))
    }));

    checks.push(run_check("strong wall limit", || {
        let finite = SlabConfig::new(thickness, kappa, RobinCondition::Finite(1e6 / thickness))?;
        let held = SlabConfig::new(thickness, kappa, RobinCondition::DirichletInfinite)?;
        let mut worst: f64 = 0.0;
        for frac in [0.2, 0.35, 0.5, 0.65, 0.8] {
            let z = frac * thickness;
            let a = green_z(z, 0.5 * thickness, tau, &finite, &policy)?.value;
            let b = green_z(z, 0.5 * thickness, tau, &held, &policy)?.value;
            worst = worst.max((a - b).abs() / b.abs());
        }
        Ok((worst <= 1e-4, format!("worst relative gap = {worst:.3e}")))
    }));

    checks.push(run_check("half space limit", || {
        // A layer one hundred thermal depths thick hides its far wall.
        let t = tau;
        let depth = (kappa * t).sqrt();
        let lambda = 2.0 / thickness;
        let wide = SlabConfig::new(100.0 * depth, kappa, RobinCondition::Finite(lambda))?;
        let mut worst: f64 = 0.0;
        for (z, zp) in [(0.1 * thickness, 0.4 * thickness), (0.5 * thickness, 0.2 * thickness)] {
            let slab_value = green_z(z, zp, t, &wide, &policy)?.value;
            let half_value = green_halfspace(z, zp, t, lambda, kappa)?;
            worst = worst.max((slab_value - half_value).abs() / half_value.abs());
        }
        Ok((worst <= 1e-12, format!("worst relative gap = {worst:.3e}")))
    }));

    checks.push(run_check("insulated layer equilibrium", || {
        let cfg = SlabConfig::new(thickness, kappa, RobinCondition::Finite(0.0))?;
        let value = temp(0.3 * thickness, tau, &cfg)?;
        Ok((value == 1.0, format!("T/T0 = {value}")))
    }));

    checks.push(run_check("held wall values vanish", || {
        let held = SlabConfig::new(thickness, kappa, RobinCondition::DirichletInfinite)?;
        let kernel = green_z(0.0, 0.4 * thickness, tau, &held, &policy)?.value;
        let wall0 = temp_dirichlet(0.0, tau, &held)?;
        let wall1 = temp_dirichlet(thickness, tau, &held)?;
        let passed = kernel.abs() <= policy.abs_tol && wall0 == 0.0 && wall1 == 0.0;
        Ok((
            passed,
            format!("kernel at wall = {kernel:.3e}, T(0) = {wall0}, T(L) = {wall1}"),
        ))
    }));

    checks
}

fn residuals(resolved: &Resolved) -> Vec<Check> {
    let thickness = resolved.thickness;
    let kappa = resolved.kappa;
    let tau = thickness * thickness / (4.0 * kappa);
    let lambda = 2.0 / thickness;
    // Truncation noise must sit far below the stencil error. The kernel
    // magnitude scales like 1/thickness, so the absolute noise floor has to
    // scale the same way or thin slabs trip the rounding guard.
    let probe = TruncationPolicy {
        abs_tol: resolved.policy.abs_tol.min(1e-12 / thickness),
        ..resolved.policy
    };
    let mut checks = Vec::new();

    checks.push(run_check("field equation residual", || {
        let cfg = SlabConfig::new(thickness, kappa, RobinCondition::Finite(lambda))?;
        let t = tau;
        let dz = thickness / 2000.0;
        let dt = t / 2000.0;
        let mut worst: f64 = 0.0;
        for zf in [0.25, 0.5, 0.75] {
            for zpf in [0.3, 0.5, 0.7] {
                let (z, zp) = (zf * thickness, zpf * thickness);
                let g = |zz: f64, tt: f64| Ok::<f64, SlabError>(green_z(zz, zp, tt, &cfg, &probe)?.value);
                let dt_g = (g(z, t + dt)? - g(z, t - dt)?) / (2.0 * dt);
                let dzz_g = (g(z + dz, t)? - 2.0 * g(z, t)? + g(z - dz, t)?) / (dz * dz);
                worst = worst.max((dt_g - kappa * dzz_g).abs() / dt_g.abs());
            }
        }
        Ok((worst <= 1e-5, format!("worst relative residual = {worst:.3e}")))
    }));

    checks.push(run_check("wall condition residual", || {
        let cfg = SlabConfig::new(thickness, kappa, RobinCondition::Finite(lambda))?;
        let h = thickness / 2000.0;
        let mut worst: f64 = 0.0;
        for zpf in [0.25, 0.5, 0.75] {
            let zp = zpf * thickness;
            let g = |z: f64| Ok::<f64, SlabError>(green_z(z, zp, tau, &cfg, &probe)?.value);
            let edge = |f: &dyn Fn(f64) -> SlabResult<f64>| -> SlabResult<f64> {
                Ok((-11.0 * f(0.0)? + 18.0 * f(h)? - 9.0 * f(2.0 * h)? + 2.0 * f(3.0 * h)?)
                    / (6.0 * h))
            };
            let slope0 = edge(&|s| g(s))?;
            let value0 = g(0.0)?;
            worst = worst
                .max((slope0 - lambda * value0).abs() / (slope0.abs() + lambda * value0.abs()));
            let slope1 = -edge(&|s| g(thickness - s))?;
            let value1 = g(thickness)?;
            worst = worst
                .max((slope1 + lambda * value1).abs() / (slope1.abs() + lambda * value1.abs()));
        }
        Ok((worst <= 1e-6, format!("worst scaled residual = {worst:.3e}")))
    }));

    checks.push(run_check("paired image identity", || {
        let cfg = SlabConfig::new(thickness, kappa, RobinCondition::Finite(lambda))?;
        let h = thickness / 2000.0;
        let zp = 0.6 * thickness;
        let mut worst: f64 = 0.0;
        for n in -3i64..=3 {
            let pair = |z: f64| -> SlabResult<f64> {
                Ok(image_term(ImageSign::Minus, n, z, zp, tau, &cfg)?
                    + image_term(ImageSign::Plus, -n, z, zp, tau, &cfg)?)
            };
            let slope = (-11.0 * pair(0.0)? + 18.0 * pair(h)? - 9.0 * pair(2.0 * h)?
                + 2.0 * pair(3.0 * h)?)
                / (6.0 * h);
            let value = pair(0.0)?;
            worst =
                worst.max((slope - lambda * value).abs() / (slope.abs() + lambda * value.abs()));
        }
        Ok((worst <= 1e-6, format!("worst scaled residual = {worst:.3e}")))
    }));

    checks
}

fn oracle(resolved: &Resolved) -> Vec<Check> {
    let thickness = resolved.thickness;
    let kappa = resolved.kappa;
    let policy = resolved.policy;
    let tau = thickness * thickness / (4.0 * kappa);
    let mut checks = Vec::new();

    checks.push(run_check("kernel oracle agreement", || {
        let mut worst: f64 = 0.0;
        for lambda_l in [0.2, 2.0, 20.0] {
            let cfg = SlabConfig::new(thickness, kappa, RobinCondition::Finite(lambda_l / thickness))?;
            for ratio in [0.05, 1.0] {
                let t = ratio * tau;
                let basis = auto_basis(&cfg, t)?;
                for i in 0..6 {
                    for j in 0..6 {
                        let z = thickness * i as f64 / 5.0;
                        let zp = thickness * j as f64 / 5.0;
                        let image = green_z(z, zp, t, &cfg, &policy)?.value;
                        let spectral = eigen_green_z(z, zp, t, kappa, &basis)?;
                        let scale = image.abs().max(1.0 / thickness);
                        worst = worst.max((image - spectral).abs() / scale);
                    }
                }
            }
        }
        Ok((worst <= 1e-8, format!("worst scaled gap = {worst:.3e}")))
    }));

    checks.push(run_check("history oracle agreement", || {
        let mut worst: f64 = 0.0;
        for bi in [0.1, 1.0, 10.0] {
            let cfg = SlabConfig::from_biot(thickness, kappa, bi)?;
            let basis = auto_basis(&cfg, tau)?;
            for frac in [0.0, 0.25, 0.5] {
                let z = frac * thickness;
                let series = temp(z, tau, &cfg)?;
                let spectral = eigen_uniform_temp(z, tau, kappa, &basis)?;
                let integral = temp_quadrature(z, tau, &cfg)?;
                worst = worst
                    .max((series - spectral).abs())
                    .max((series - integral).abs());
            }
        }
        Ok((worst <= 1e-6, format!("worst absolute gap = {worst:.3e}")))
    }));

    checks
}

fn coefficients(resolved: &Resolved) -> Vec<Check> {
    let thickness = resolved.thickness;
    let kappa = resolved.kappa;
    let tau = thickness * thickness / (4.0 * kappa);
    let mut checks = Vec::new();

    checks.push(run_check("layer coefficient tables", || {
        for n in 1..=30usize {
            let table = l_coeffs(n)?;
            let m2 = 2 * n as u32;
            // Closed partial sums of the alternating binomial rows.
            let mut acc: i128 = 0;
            for m in 1..=(2 * n - 1) {
                let j = m as u32;
                let term = (-2i128).pow(j) * binomial(m2, j)? as i128;
                acc += term;
                if table.l(m) * 2 != acc {
                    return Ok((false, format!("l mismatch at n = {n}, m = {m}")));
                }
            }
            let mut acc2: i128 = 2;
            if table.lt(0) * 2 != acc2 {
                return Ok((false, format!("lt mismatch at n = {n}, m = 0")));
            }
            for m in 1..=(2 * n) {
                acc2 += (-2i128).pow(m as u32) * binomial(m2 + 1, m as u32)? as i128;
                if table.lt(m) * 2 != acc2 {
                    return Ok((false, format!("lt mismatch at n = {n}, m = {m}")));
                }
            }
        }
        Ok((true, "all 30 tables match their closed sums exactly".into()))
    }));

    checks.push(run_check("far image weights", || {
        let cfg = SlabConfig::new(thickness, kappa, RobinCondition::Finite(2.0 / thickness))?;
        let anchor = (-2.0f64).exp();
        let mut worst: f64 = 0.0;
        for (sign, n, rings) in [
            (ImageSign::Minus, 40i64, 80.0),
            (ImageSign::Plus, 40, 81.0),
            (ImageSign::Plus, -40, 79.0),
        ] {
            let weight = p_coeff(sign, n, rings * thickness, &cfg, tau)?;
            worst = worst.max((weight - anchor).abs() / anchor);
        }
        Ok((worst <= 0.05, format!("worst relative gap to e^-2 = {worst:.3e}")))
    }));

    checks.push(run_check("derivative family sign law", || {
        let mut x = -2.0;
        while x <= 10.0 {
            let seq = f_k(12, x)?;
            for (k, &value) in seq.values.iter().enumerate() {
                let expected = if k % 2 == 0 { 1.0 } else { -1.0 };
                if value.signum() != expected {
                    return Ok((false, format!("sign broken at k = {k}, x = {x}")));
                }
            }
            x += 0.5;
        }
        Ok((true, "alternation holds for k <= 12 on [-2, 10]".into()))
    }));

    checks.push(run_check("derivative ladder identity", || {
        let h = 1e-5;
        let mut worst: f64 = 0.0;
        for k in [0usize, 1, 3, 7, 11] {
            for x in [-1.2, 0.4, 1.7, 3.2] {
                let hi = f_k(k, x + h)?.values[k];
                let lo = f_k(k, x - h)?.values[k];
                let ladder = (k + 1) as f64 * f_k(k + 1, x)?.values[k + 1];
                worst = worst.max(((hi - lo) / (2.0 * h) - ladder).abs() / ladder.abs());
            }
        }
        Ok((worst <= 1e-6, format!("worst relative gap = {worst:.3e}")))
    }));

    checks
}
