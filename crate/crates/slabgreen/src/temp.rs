//! Evolution of an initially uniform temperature in the slab.
//!
//! The field splits as `T = T_dirichlet + delta_T`: the zero-wall solution
//! is a fast alternating `erfc` sum, and the finite-conductance correction
//! is an image series whose ring `n` combines six shifted coordinates with
//! exact integer layer coefficients `l_{m,n}` / `lt_{m,n}` and `beta_m`
//! factors. The regrouped form implemented here keeps every partial weight
//! bounded (the `2^-(m+1)` scaling cancels the growth of `beta_m`), which
//! is what makes the series usable at conductances where the raw double
//! sum loses all its digits. Approximate closed forms for strong cooling
//! (`lambda_tilde >= 5`) and thick layers (`l >= 3`) are provided with
//! explicit validity guards, plus a quadrature route through the kernel as
//! an independent cross-check. All temperatures are normalized to a unit
//! initial value.

use crate::error::{ensure_finite, Result, SlabError};
use crate::kernel::{green_z, TruncationPolicy};
use crate::quad::rule_200;
use crate::slab::{RobinCondition, ScaledVars, SlabConfig};
use crate::special::{beta_seq, binomial, erf_raw, erfc_raw, SQRT_PI};
use crate::sum::CompensatedSum;
use rayon::prelude::*;
use std::sync::OnceLock;

/// Largest image ring the correction series will use (binomial rows up to
/// `2n + 1 = 61` stay within exact `u64` range).
pub const MAX_RING_COUNT: usize = 30;

/// `erfc` argument beyond which a tail term is below 1e-22 and the
/// alternating wall sum may stop.
const ERFC_CUTOFF: f64 = 7.0;

/// Ring Gaussians below this no longer move the correction series.
const GAUSSIAN_CUTOFF: f64 = 1e-18;

/// Relative rounding rate per unit of tracked magnitude (same convention
/// as the kernel module).
const ROUNDING_RATE: f64 = 1e-13;

/// Estimated rounding damage above this fails the correction series.
const DELTA_PRECISION_TOL: f64 = 1e-9;

/// Validity floor for the strong-cooling approximation.
pub const LARGE_LAMBDA_MIN: f64 = 5.0;

/// Validity floors for the thick-layer approximation.
pub const THICK_MIN_L: f64 = 3.0;
pub const THICK_MIN_LAMBDA_TILDE: f64 = 1.0;

/// Kernel tolerance handed to the quadrature route, scaled by 1/thickness
/// so the integrated error stays near 1e-9.
const QUADRATURE_KERNEL_TOL: f64 = 1e-9;

/// Hard cap on wall-sum terms; reached only for absurd time ratios.
const MAX_DIRICHLET_TERMS: usize = 1_000_000;

/// Ring cap for the strong-cooling approximation (its terms carry no
/// binomial rows, so it can run much deeper than the full series).
const LARGE_LAMBDA_MAX_RINGS: usize = 200;

/// Exact integer layer coefficients for image ring `n`.
///
/// `l_vals[m - 1]` holds `l_{m,n}` for `m = 1..=2n-1` and `lt_vals[m]`
/// holds `lt_{m,n}` for `m = 0..=2n`. Both recurrences (forward from
/// `l_{1,n} = -2n` and backward from the `+-2^(2n +- ...)` anchors) are
/// built and asserted equal, so a transcription error in either direction
/// cannot survive construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerCoefficients {
    pub n: usize,
    pub l_vals: Vec<i128>,
    pub lt_vals: Vec<i128>,
}

impl LayerCoefficients {
    /// `l_{m,n}` for `m` in `1..=2n-1`.
    pub fn l(&self, m: usize) -> i128 {
        self.l_vals[m - 1]
    }

    /// `lt_{m,n}` for `m` in `0..=2n`.
    pub fn lt(&self, m: usize) -> i128 {
        self.lt_vals[m]
    }
}

fn c2(row: u32, j: u32) -> i128 {
    binomial(row, j).expect("rows <= 61 are within exact binomial range") as i128
}

fn build_layer(n: usize) -> LayerCoefficients {
    let row = 2 * n as u32;
    let top = 2 * n - 1;

    // Forward direction: l_{1,n} = -2n, then add (-1)^m 2^(m-1) C(2n, m).
    let mut l_forward = Vec::with_capacity(top);
    l_forward.push(-2 * n as i128);
    for m in 2..=top {
        let sign = if m % 2 == 0 { 1 } else { -1 };
        let step = sign * (1i128 << (m - 1)) * c2(row, m as u32);
        l_forward.push(l_forward[m - 2] + step);
    }

    // Backward direction: anchor l_{2n-1,n} = -2^(2n-1), then add
    // (-2)^m C(2n, m+1) stepping down.
    let mut l_backward = vec![0i128; top];
    l_backward[top - 1] = -(1i128 << (2 * n - 1));
    for m in (1..top).rev() {
        let sign = if m % 2 == 0 { 1 } else { -1 };
        let step = sign * (1i128 << m) * c2(row, m as u32 + 1);
        l_backward[m - 1] = l_backward[m] + step;
    }
    assert_eq!(l_forward, l_backward, "layer recurrences disagree at n = {n}");

    let row = 2 * n as u32 + 1;
    let top = 2 * n;
    let mut lt_forward = Vec::with_capacity(top + 1);
    lt_forward.push(1i128);
    for m in 1..=top {
        let sign = if m % 2 == 0 { 1 } else { -1 };
        let step = sign * (1i128 << (m - 1)) * c2(row, m as u32);
        lt_forward.push(lt_forward[m - 1] + step);
    }
    let mut lt_backward = vec![0i128; top + 1];
    lt_backward[top] = 1i128 << (2 * n);
    for m in (0..top).rev() {
        let sign = if m % 2 == 0 { 1 } else { -1 };
        let step = sign * (1i128 << m) * c2(row, m as u32 + 1);
        lt_backward[m] = lt_backward[m + 1] + step;
    }
    assert_eq!(lt_forward, lt_backward, "shifted layer recurrences disagree at n = {n}");

    LayerCoefficients {
        n,
        l_vals: l_forward,
        lt_vals: lt_forward,
    }
}

fn layer_table() -> &'static Vec<LayerCoefficients> {
    static TABLE: OnceLock<Vec<LayerCoefficients>> = OnceLock::new();
    TABLE.get_or_init(|| (1..=MAX_RING_COUNT).map(build_layer).collect())
}

/// Layer coefficients for ring `n`, `1 <= n <= 30`, from the cached table.
pub fn l_coeffs(n: usize) -> Result<&'static LayerCoefficients> {
    if n == 0 {
        return Err(SlabError::Domain("ring index must be at least 1".into()));
    }
    if n > MAX_RING_COUNT {
        return Err(SlabError::Capacity(format!(
            "ring {n} exceeds the coefficient table cap {MAX_RING_COUNT}"
        )));
    }
    Ok(&layer_table()[n - 1])
}

/// Temperature history for a wall held at zero temperature: the
/// alternating image sum `sum_n (-1)^n [erfc(n l - xi) + erfc((n+1) l +
/// xi)] - 1`, truncated once both arguments pass [`ERFC_CUTOFF`]. The
/// trailing constant is folded into the `n = 0` term as `erf(xi)`, which
/// avoids a `1 - erfc` cancellation near the wall and lets the remaining
/// pairs telescope to exactly zero at `xi = 0`.
pub fn temp_dirichlet(z: f64, t: f64, cfg: &SlabConfig) -> Result<f64> {
    let scaled = ScaledVars::new(cfg, z, t)?;
    // The held walls sit exactly at the bath temperature; the truncated
    // alternating sum would otherwise leave a signed erfc-cutoff-sized
    // crumb there instead of the exact limit.
    if z == 0.0 || z == cfg.thickness {
        return Ok(0.0);
    }
    let mut acc = CompensatedSum::new();
    acc.add(erf_raw(scaled.xi));
    acc.add(erfc_raw(scaled.l + scaled.xi));
    let mut sign = -1.0;
    let mut n = 1usize;
    loop {
        let a = n as f64 * scaled.l - scaled.xi;
        let b = (n + 1) as f64 * scaled.l + scaled.xi;
        if a > ERFC_CUTOFF && b > ERFC_CUTOFF {
            break;
        }
        acc.add(sign * erfc_raw(a));
        acc.add(sign * erfc_raw(b));
        sign = -sign;
        n += 1;
        if n > MAX_DIRICHLET_TERMS {
            return Err(SlabError::Convergence {
                achieved: erfc_raw(a),
                tolerance: GAUSSIAN_CUTOFF,
                terms: MAX_DIRICHLET_TERMS,
            });
        }
    }
    Ok(acc.value())
}

/// Per-order weights at one image coordinate: `w_m = e^{-(pos/sqrt(4 kappa
/// t))^2} (-1)^m beta_m(|pos|) 2^{-(m+1)}` for `m = 0..=m_top`. The
/// `2^{-(m+1)}` factor cancels the `(2 lambda_tilde)^{m+1}`-style growth of
/// `beta_m`, keeping each weight below its Gaussian.
fn weight_column(
    pos: f64,
    m_top: usize,
    lambda: f64,
    t: f64,
    kappa: f64,
    root_4kt: f64,
) -> Result<Vec<f64>> {
    let u = pos / root_4kt;
    let gauss = (-u * u).exp();
    if gauss == 0.0 {
        return Ok(vec![0.0; m_top + 1]);
    }
    let betas = beta_seq(m_top, pos.abs(), lambda, t, kappa)?;
    let mut factor = 0.5;
    let mut column = Vec::with_capacity(m_top + 1);
    for beta in betas {
        column.push(gauss * factor * beta);
        factor *= -0.5;
    }
    Ok(column)
}

/// One ring of the regrouped correction series: value and the magnitude
/// tracked for rounding-loss accounting (both without the overall
/// `1/(lambda_tilde sqrt(pi))` prefactor).
fn delta_ring(
    n: usize,
    z: f64,
    cfg: &SlabConfig,
    lambda: f64,
    t: f64,
    root_4kt: f64,
) -> Result<(f64, f64)> {
    let length = cfg.thickness;
    let m_top = 2 * n;
    let positions = [
        2.0 * n as f64 * length - z,
        2.0 * n as f64 * length + z,
        (2.0 * n as f64 - 1.0) * length + z,
        (2.0 * n as f64 + 1.0) * length - z,
        (2.0 * n as f64 + 2.0) * length - z,
        (2.0 * n as f64 + 1.0) * length + z,
    ];
    let mut w = Vec::with_capacity(6);
    for pos in positions {
        w.push(weight_column(pos, m_top, lambda, t, cfg.kappa, root_4kt)?);
    }
    let coeffs = l_coeffs(n)?;
    let mut value = CompensatedSum::new();
    let mut magnitude = 0.0;
    for m in 1..=2 * n - 1 {
        let c = coeffs.l(m) as f64;
        value.add(c * (w[0][m] - w[1][m] + w[2][m] - w[3][m]));
        magnitude +=
            c.abs() * (w[0][m].abs() + w[1][m].abs() + w[2][m].abs() + w[3][m].abs());
    }
    for m in 0..=2 * n {
        let c = coeffs.lt(m) as f64;
        value.add(c * (w[1][m] - w[4][m] + w[3][m] - w[5][m]));
        magnitude +=
            c.abs() * (w[1][m].abs() + w[4][m].abs() + w[3][m].abs() + w[5][m].abs());
    }
    Ok((value.value(), magnitude))
}

/// Finite-conductance correction to the zero-wall history, by image rings.
///
/// Ring `n` is skipped once its leading Gaussian `e^{-((2n-1) l)^2}` falls
/// below [`GAUSSIAN_CUTOFF`]; if `n_terms` rings are exhausted first the
/// series has genuinely not converged (very deep times) and a convergence
/// error reports the achieved level rather than returning a truncated
/// value.
pub fn delta_temp(z: f64, t: f64, cfg: &SlabConfig, n_terms: usize) -> Result<f64> {
    let lambda = match cfg.robin {
        RobinCondition::Finite(lambda) if lambda > 0.0 => lambda,
        _ => {
            return Err(SlabError::Domain(
                "the correction series needs a finite positive wall conductance".into(),
            ))
        }
    };
    if n_terms == 0 {
        return Err(SlabError::Domain("n_terms must be at least 1".into()));
    }
    if n_terms > MAX_RING_COUNT {
        return Err(SlabError::Capacity(format!(
            "n_terms = {n_terms} exceeds the coefficient table cap {MAX_RING_COUNT}"
        )));
    }
    let scaled = ScaledVars::new(cfg, z, t)?;
    let root_4kt = (4.0 * cfg.kappa * t).sqrt();
    let length = cfg.thickness;

    // Ring 0 is the shifted family alone: lt_{0,0} = 1 at coordinates
    // z, 2L - z, L - z, L + z.
    let mut acc = CompensatedSum::new();
    let mut magnitude = 0.0;
    let ring0 = [z, 2.0 * length - z, length - z, length + z];
    let mut w0 = [0.0f64; 4];
    for (slot, pos) in w0.iter_mut().zip(ring0) {
        *slot = weight_column(pos, 0, lambda, t, cfg.kappa, root_4kt)?[0];
    }
    acc.add(w0[0] - w0[1] + w0[2] - w0[3]);
    magnitude += w0.iter().map(|v| v.abs()).sum::<f64>();

    let ring_lead = |n: usize| {
        let arg = (2.0 * n as f64 - 1.0) * scaled.l;
        (-arg * arg).exp()
    };
    let mut converged = false;
    for n in 1..=n_terms {
        if ring_lead(n) < GAUSSIAN_CUTOFF {
            converged = true;
            break;
        }
        let (value, mag) = delta_ring(n, z, cfg, lambda, t, root_4kt)?;
        acc.add(value);
        magnitude += mag;
    }
    if !converged && ring_lead(n_terms + 1) >= GAUSSIAN_CUTOFF {
        return Err(SlabError::Convergence {
            achieved: ring_lead(n_terms + 1),
            tolerance: GAUSSIAN_CUTOFF,
            terms: n_terms,
        });
    }

    let prefactor = 1.0 / (scaled.lambda_tilde * SQRT_PI);
    let rounding_estimate = ROUNDING_RATE * magnitude * prefactor;
    if rounding_estimate > DELTA_PRECISION_TOL {
        return Err(SlabError::PrecisionLoss(format!(
            "layer-coefficient cancellation leaves an estimated rounding error \
             {rounding_estimate:.3e} above {DELTA_PRECISION_TOL:.1e} \
             (lambda_tilde = {:.3e})",
            scaled.lambda_tilde
        )));
    }
    let value = prefactor * acc.value();
    ensure_finite(value, "delta_temp value")?;
    Ok(value)
}

/// Normalized temperature of the initially uniform slab.
///
/// Insulated walls hold the uniform state exactly; zero-temperature walls
/// reduce to [`temp_dirichlet`]; finite conductance adds the correction
/// series.
pub fn temp(z: f64, t: f64, cfg: &SlabConfig) -> Result<f64> {
    match cfg.robin {
        RobinCondition::DirichletInfinite => temp_dirichlet(z, t, cfg),
        RobinCondition::Finite(lambda) if lambda == 0.0 => {
            cfg.check_z(z, "z")?;
            cfg.check_t(t)?;
            Ok(1.0)
        }
        RobinCondition::Finite(_) => {
            Ok(temp_dirichlet(z, t, cfg)? + delta_temp(z, t, cfg, MAX_RING_COUNT)?)
        }
    }
}

/// `(1 - (1 + |v|)(1 + 2|v|)^j) / (v (1 + |v|))`, continued through the
/// removable zero at `v = 0` with the side supplied by the caller.
fn strong_cooling_weight(v: f64, j: i64, positive_side: bool) -> f64 {
    let a = v.abs();
    if a >= 1e-9 {
        (1.0 - (1.0 + a) * (1.0 + 2.0 * a).powi(j as i32)) / (v * (1.0 + a))
    } else {
        let hint = if positive_side { 1.0 } else { -1.0 };
        -hint * (1.0 + 2.0 * j as f64)
    }
}

fn strong_cooling_term(n: i64, scaled: &ScaledVars) -> (f64, f64) {
    let gamma_arg = 2.0 * n as f64 * scaled.l - scaled.xi;
    let alpha_arg = (2.0 * n as f64 + 1.0) * scaled.l - scaled.xi;
    let k = if n > 0 { 2 * n - 1 } else { -2 * n };
    let m = if n >= 0 { 2 * n } else { -(2 * n + 1) };
    let gauss_gamma = (-gamma_arg * gamma_arg).exp();
    let gauss_alpha = (-alpha_arg * alpha_arg).exp();
    let term = strong_cooling_weight(gamma_arg / scaled.lambda_tilde, k, n >= 1) * gauss_gamma
        - strong_cooling_weight(alpha_arg / scaled.lambda_tilde, m, n >= 0) * gauss_alpha;
    (term, gauss_gamma.max(gauss_alpha))
}

/// Strong-cooling approximation: the correction series collapsed to one
/// weight per Gaussian, valid for `lambda_tilde >= 5`.
pub fn temp_large_lambda(z: f64, t: f64, cfg: &SlabConfig) -> Result<f64> {
    let lambda = match cfg.robin {
        RobinCondition::DirichletInfinite => return temp_dirichlet(z, t, cfg),
        RobinCondition::Finite(lambda) => lambda,
    };
    let scaled = ScaledVars::new(cfg, z, t)?;
    if !(scaled.lambda_tilde >= LARGE_LAMBDA_MIN) {
        return Err(SlabError::Validity(format!(
            "strong-cooling form needs lambda_tilde >= {LARGE_LAMBDA_MIN}, got {:.3e} \
             (lambda = {lambda:.3e})",
            scaled.lambda_tilde
        )));
    }
    let dirichlet = temp_dirichlet(z, t, cfg)?;
    let mut acc = CompensatedSum::new();
    let (center, _) = strong_cooling_term(0, &scaled);
    acc.add(center);
    let mut ring = 1i64;
    loop {
        let (above, gauss_above) = strong_cooling_term(ring, &scaled);
        let (below, gauss_below) = strong_cooling_term(-ring, &scaled);
        acc.add(above);
        acc.add(below);
        if gauss_above.max(gauss_below) < GAUSSIAN_CUTOFF {
            break;
        }
        ring += 1;
        if ring as usize > LARGE_LAMBDA_MAX_RINGS {
            return Err(SlabError::Convergence {
                achieved: gauss_above.max(gauss_below),
                tolerance: GAUSSIAN_CUTOFF,
                terms: LARGE_LAMBDA_MAX_RINGS,
            });
        }
    }
    Ok(dirichlet + acc.value() / (scaled.lambda_tilde * SQRT_PI))
}

/// Thick-layer approximation: two independent half-space cooldowns joined
/// at the midplane, `T = T_sb(xi) + T_sb(l - xi) - 1` with `T_sb(v) =
/// erf(v) + e^{-v^2} / (sqrt(pi) (v + lambda_tilde))`. Valid for `l >= 3`
/// and `lambda_tilde >= 1`.
pub fn temp_thick(z: f64, t: f64, cfg: &SlabConfig) -> Result<f64> {
    let scaled = ScaledVars::new(cfg, z, t)?;
    if !(scaled.l >= THICK_MIN_L) {
        return Err(SlabError::Validity(format!(
            "thick-layer form needs l >= {THICK_MIN_L}, got {:.3}",
            scaled.l
        )));
    }
    if !(scaled.lambda_tilde >= THICK_MIN_LAMBDA_TILDE) {
        return Err(SlabError::Validity(format!(
            "thick-layer form needs lambda_tilde >= {THICK_MIN_LAMBDA_TILDE}, got {:.3e}",
            scaled.lambda_tilde
        )));
    }
    let half = |v: f64| erf_raw(v) + (-v * v).exp() / (SQRT_PI * (v + scaled.lambda_tilde));
    Ok(half(scaled.xi) + half(scaled.l - scaled.xi) - 1.0)
}

/// Temperature by direct quadrature of the kernel against the unit initial
/// condition: `int_0^L G(z, zp, t) dzp` on a 200-node Gauss-Legendre rule.
/// A third route, independent of both the correction series and the
/// spectral basis.
pub fn temp_quadrature(z: f64, t: f64, cfg: &SlabConfig) -> Result<f64> {
    let policy = TruncationPolicy {
        abs_tol: QUADRATURE_KERNEL_TOL / cfg.thickness,
        ..TruncationPolicy::default()
    };
    rule_200().try_integrate(0.0, cfg.thickness, |zp| {
        green_z(z, zp, t, cfg, &policy).map(|series| series.value)
    })
}

/// Temperature samples on a `t x z` lattice.
#[derive(Debug, Clone)]
pub struct TemperatureField {
    /// `values[i][j]` is `T(z_nodes[j], t_nodes[i]) / T0`.
    pub values: Vec<Vec<f64>>,
    pub z_nodes: Vec<f64>,
    pub t_nodes: Vec<f64>,
    pub config: SlabConfig,
}

/// Slack allowed outside the physical range `[0, 1]`.
pub const FIELD_BOUNDS_EPS: f64 = 1e-9;

/// Largest asymmetry tolerated between mirrored nodes.
pub const FIELD_SYMMETRY_TOL: f64 = 1e-10;

impl TemperatureField {
    /// Fills the lattice, one parallel task per time row.
    pub fn compute(cfg: &SlabConfig, z_nodes: &[f64], t_nodes: &[f64]) -> Result<Self> {
        let values = t_nodes
            .par_iter()
            .map(|&t| {
                z_nodes
                    .iter()
                    .map(|&z| temp(z, t, cfg))
                    .collect::<Result<Vec<f64>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(TemperatureField {
            values,
            z_nodes: z_nodes.to_vec(),
            t_nodes: t_nodes.to_vec(),
            config: *cfg,
        })
    }

    /// Verifies the physical range of every sample, and midplane symmetry
    /// for every pair of nodes that mirror each other across `L/2`.
    pub fn check_bounds(&self) -> Result<()> {
        let length = self.config.thickness;
        for (i, row) in self.values.iter().enumerate() {
            for (j, &value) in row.iter().enumerate() {
                if !(-FIELD_BOUNDS_EPS..=1.0 + FIELD_BOUNDS_EPS).contains(&value) {
                    return Err(SlabError::Validity(format!(
                        "T = {value} out of range at z = {}, t = {}",
                        self.z_nodes[j], self.t_nodes[i]
                    )));
                }
            }
        }
        let mirrors: Vec<(usize, usize)> = self
            .z_nodes
            .iter()
            .enumerate()
            .flat_map(|(a, &za)| {
                self.z_nodes
                    .iter()
                    .enumerate()
                    .filter(move |(b, &zb)| a < *b && (za + zb - length).abs() <= 1e-12 * length)
                    .map(move |(b, _)| (a, b))
            })
            .collect();
        for row in &self.values {
            for &(a, b) in &mirrors {
                if (row[a] - row[b]).abs() > FIELD_SYMMETRY_TOL {
                    return Err(SlabError::Validity(format!(
                        "asymmetry {} between z = {} and z = {}",
                        (row[a] - row[b]).abs(),
                        self.z_nodes[a],
                        self.z_nodes[b]
                    )));
                }
            }
        }
        Ok(())
    }
}
