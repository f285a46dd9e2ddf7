//! Eigenfunction-expansion solution path.
//!
//! The classical alternative to the image-source series: eigenvalues
//! `alpha_m` solve `(alpha^2 - lambda^2) sin(alpha L) = 2 lambda alpha
//! cos(alpha L)` (the pole-free form of the usual tangent equation), the
//! eigenfunctions are `phi_m(z) = cos(alpha_m z) + (lambda/alpha_m)
//! sin(alpha_m z)`, and kernels/temperatures are spectral sums weighted by
//! `exp(-kappa alpha_m^2 t)`. The series converges slowly for small times,
//! so this path refuses `t/tau < 1e-3`; it exists as an independent
//! ground-truth oracle for the image representation, not as the fast path.

use crate::error::{ensure_finite, Result, SlabError};
use crate::quad::rule_64;
use crate::slab::{RobinCondition, SlabConfig};
use crate::sum::CompensatedSum;

/// Largest mode count a basis will hold.
pub const MAX_MODES: usize = 10_000;

/// The slowest omitted mode must have decayed at least this far.
const MODE_TAIL_LIMIT: f64 = 1e-16;

/// Smallest `t/tau` the spectral path accepts.
pub const MIN_TIME_RATIO: f64 = 1e-3;

/// Which eigenfunction family a basis holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BasisKind {
    /// Finite-conductance family `cos(alpha z) + (lambda/alpha) sin(alpha z)`.
    /// `lambda = 0` adds an implicit constant mode with norm `L`.
    Robin { lambda: f64 },
    /// Dedicated sine family for the zero-temperature boundary.
    DirichletSine,
}

/// Immutable eigenvalue/eigenfunction table for one layer.
#[derive(Debug, Clone)]
pub struct EigenBasis {
    /// Layer thickness.
    pub thickness: f64,
    /// Eigenfunction family.
    pub kind: BasisKind,
    /// Eigenvalues `alpha_m`, strictly increasing.
    pub alphas: Vec<f64>,
    /// Norms `int_0^L phi_m^2 dz`, same order as `alphas`.
    pub norms: Vec<f64>,
}

fn secular(alpha: f64, lambda: f64, thickness: f64) -> f64 {
    (alpha * alpha - lambda * lambda) * (alpha * thickness).sin()
        - 2.0 * lambda * alpha * (alpha * thickness).cos()
}

fn secular_derivative(alpha: f64, lambda: f64, thickness: f64) -> f64 {
    let s = (alpha * thickness).sin();
    let c = (alpha * thickness).cos();
    2.0 * alpha * s + (alpha * alpha - lambda * lambda) * thickness * c - 2.0 * lambda * c
        + 2.0 * lambda * alpha * thickness * s
}

fn solve_bracket(lo0: f64, hi0: f64, lambda: f64, thickness: f64) -> Result<f64> {
    let mut lo = lo0;
    let mut hi = hi0;
    let mut flo = secular(lo, lambda, thickness);
    let fhi = secular(hi, lambda, thickness);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(SlabError::RootFinding(format!(
            "no sign change in ({lo0}, {hi0}): f = ({flo:e}, {fhi:e})"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = secular(mid, lambda, thickness);
        if fm == 0.0 {
            return Ok(mid);
        }
        if flo.signum() == fm.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-14 * hi {
            break;
        }
    }
    let mut root = 0.5 * (lo + hi);
    for _ in 0..3 {
        let f = secular(root, lambda, thickness);
        let df = secular_derivative(root, lambda, thickness);
        if df == 0.0 {
            break;
        }
        let step = f / df;
        let next = root - step;
        if next <= lo0 || next >= hi0 {
            break;
        }
        root = next;
        if step.abs() <= 1e-15 * root {
            break;
        }
    }
    Ok(root)
}

fn robin_mode(alpha: f64, lambda: f64, z: f64) -> f64 {
    (alpha * z).cos() + (lambda / alpha) * (alpha * z).sin()
}

fn quadrature_norm(alpha: f64, lambda: f64, thickness: f64) -> f64 {
    rule_64().integrate(0.0, thickness, |z| {
        let phi = robin_mode(alpha, lambda, z);
        phi * phi
    })
}

/// First `count` positive eigenvalues for a finite-conductance layer, with
/// quadrature norms. `lambda = 0` returns the insulated-layer family
/// `alpha_m = m pi / L`; its constant mode is handled inside the evaluation
/// routines rather than stored as a zero eigenvalue.
pub fn find_roots(thickness: f64, lambda: f64, count: usize) -> Result<EigenBasis> {
    ensure_finite(thickness, "thickness")?;
    ensure_finite(lambda, "lambda")?;
    if thickness <= 0.0 {
        return Err(SlabError::Domain(format!(
            "thickness must be positive, got {thickness}"
        )));
    }
    if lambda < 0.0 {
        return Err(SlabError::Domain(format!("lambda must be nonnegative, got {lambda}")));
    }
    if count == 0 || count > MAX_MODES {
        return Err(SlabError::Domain(format!(
            "mode count must be in 1..={MAX_MODES}, got {count}"
        )));
    }
    let pi_over_l = std::f64::consts::PI / thickness;
    let mut alphas = Vec::with_capacity(count);
    if lambda == 0.0 {
        for m in 1..=count {
            alphas.push(m as f64 * pi_over_l);
        }
    } else {
        for m in 1..=count {
            // One root per ((m-1) pi/L, m pi/L); the secular function has
            // strictly alternating signs at the interval ends. The first
            // interval starts just above the spurious root at alpha = 0.
            let lo = if m == 1 {
                1e-9 * pi_over_l
            } else {
                (m as f64 - 1.0) * pi_over_l
            };
            let hi = m as f64 * pi_over_l;
            let root = solve_bracket(lo, hi, lambda, thickness).map_err(|e| {
                SlabError::RootFinding(format!("mode {m}: {e}"))
            })?;
            alphas.push(root);
        }
    }
    let norms = alphas
        .iter()
        .map(|&a| quadrature_norm(a, lambda, thickness))
        .collect();
    Ok(EigenBasis {
        thickness,
        kind: BasisKind::Robin { lambda },
        alphas,
        norms,
    })
}

/// Dedicated sine basis for the zero-temperature boundary:
/// `alpha_m = m pi / L`, `phi_m = sin(alpha_m z)`, norms exactly `L/2`.
pub fn dirichlet_basis(thickness: f64, count: usize) -> Result<EigenBasis> {
    ensure_finite(thickness, "thickness")?;
    if thickness <= 0.0 {
        return Err(SlabError::Domain(format!(
            "thickness must be positive, got {thickness}"
        )));
    }
    if count == 0 || count > MAX_MODES {
        return Err(SlabError::Domain(format!(
            "mode count must be in 1..={MAX_MODES}, got {count}"
        )));
    }
    let pi_over_l = std::f64::consts::PI / thickness;
    let alphas: Vec<f64> = (1..=count).map(|m| m as f64 * pi_over_l).collect();
    let norms = vec![0.5 * thickness; count];
    Ok(EigenBasis {
        thickness,
        kind: BasisKind::DirichletSine,
        alphas,
        norms,
    })
}

impl EigenBasis {
    pub fn count(&self) -> usize {
        self.alphas.len()
    }

    /// Whether the implicit constant equilibrium mode participates
    /// (insulated layer only).
    pub fn has_constant_mode(&self) -> bool {
        matches!(self.kind, BasisKind::Robin { lambda } if lambda == 0.0)
    }

    /// Eigenfunction `phi_m(z)`.
    pub fn mode(&self, m: usize, z: f64) -> f64 {
        let alpha = self.alphas[m];
        match self.kind {
            BasisKind::Robin { lambda } => robin_mode(alpha, lambda, z),
            BasisKind::DirichletSine => (alpha * z).sin(),
        }
    }

    /// `int_0^L phi_m dz` in closed form.
    fn mode_integral(&self, m: usize) -> f64 {
        let alpha = self.alphas[m];
        let al = alpha * self.thickness;
        match self.kind {
            BasisKind::Robin { lambda } => {
                al.sin() / alpha + lambda * (1.0 - al.cos()) / (alpha * alpha)
            }
            BasisKind::DirichletSine => (1.0 - al.cos()) / alpha,
        }
    }

    fn check_tail(&self, kappa: f64, t: f64) -> Result<()> {
        let last = *self.alphas.last().expect("basis is never empty");
        let tail = (-kappa * last * last * t).exp();
        if tail > MODE_TAIL_LIMIT {
            return Err(SlabError::Convergence {
                achieved: tail,
                tolerance: MODE_TAIL_LIMIT,
                terms: self.count(),
            });
        }
        Ok(())
    }
}

/// Spectral axial Green's function `sum_m phi_m(z) phi_m(zp)
/// exp(-kappa alpha_m^2 t) / norm_m` (plus `1/L` for the insulated layer's
/// constant mode).
pub fn eigen_green_z(z: f64, zp: f64, t: f64, kappa: f64, basis: &EigenBasis) -> Result<f64> {
    ensure_finite(z, "z")?;
    ensure_finite(zp, "zp")?;
    ensure_finite(t, "t")?;
    ensure_finite(kappa, "kappa")?;
    if t <= 0.0 || kappa <= 0.0 {
        return Err(SlabError::Domain(format!(
            "t and kappa must be positive, got t = {t}, kappa = {kappa}"
        )));
    }
    if z < 0.0 || z > basis.thickness || zp < 0.0 || zp > basis.thickness {
        return Err(SlabError::Domain(format!(
            "coordinates ({z}, {zp}) outside the layer [0, {}]",
            basis.thickness
        )));
    }
    basis.check_tail(kappa, t)?;
    let mut acc = CompensatedSum::new();
    if basis.has_constant_mode() {
        acc.add(1.0 / basis.thickness);
    }
    for m in 0..basis.count() {
        let alpha = basis.alphas[m];
        let decay = (-kappa * alpha * alpha * t).exp();
        acc.add(basis.mode(m, z) * basis.mode(m, zp) * decay / basis.norms[m]);
    }
    Ok(acc.value())
}

/// Spectral evolution of an initially uniform unit temperature:
/// `sum_m (int phi_m / norm_m) phi_m(z) exp(-kappa alpha_m^2 t)`.
pub fn eigen_uniform_temp(z: f64, t: f64, kappa: f64, basis: &EigenBasis) -> Result<f64> {
    ensure_finite(z, "z")?;
    ensure_finite(t, "t")?;
    ensure_finite(kappa, "kappa")?;
    if t <= 0.0 || kappa <= 0.0 {
        return Err(SlabError::Domain(format!(
            "t and kappa must be positive, got t = {t}, kappa = {kappa}"
        )));
    }
    if z < 0.0 || z > basis.thickness {
        return Err(SlabError::Domain(format!(
            "z = {z} outside the layer [0, {}]",
            basis.thickness
        )));
    }
    basis.check_tail(kappa, t)?;
    let mut acc = CompensatedSum::new();
    if basis.has_constant_mode() {
        acc.add(1.0);
    }
    for m in 0..basis.count() {
        let alpha = basis.alphas[m];
        let decay = (-kappa * alpha * alpha * t).exp();
        acc.add(basis.mode_integral(m) / basis.norms[m] * basis.mode(m, z) * decay);
    }
    Ok(acc.value())
}

/// Builds a basis sized for the requested time from the decay criterion
/// `exp(-kappa alpha^2 t) <= 1e-16`, refusing `t/tau < 1e-3` where the
/// spectral series needs too many modes to be a trustworthy oracle.
pub fn auto_basis(cfg: &SlabConfig, t: f64) -> Result<EigenBasis> {
    cfg.check_t(t)?;
    let ratio = t / cfg.tau();
    if ratio < MIN_TIME_RATIO {
        return Err(SlabError::Validity(format!(
            "spectral path unavailable: t/tau = {ratio:.3e} below {MIN_TIME_RATIO}"
        )));
    }
    // Need kappa alpha^2 t >= -ln(limit); roots sit near m pi / L.
    let target_alpha = (-MODE_TAIL_LIMIT.ln() / (cfg.kappa * t)).sqrt();
    let count = (target_alpha * cfg.thickness / std::f64::consts::PI).ceil() as usize + 2;
    match cfg.robin {
        RobinCondition::DirichletInfinite => dirichlet_basis(cfg.thickness, count),
        RobinCondition::Finite(lambda) => find_roots(cfg.thickness, lambda, count),
    }
}

/// Modes required to push the slowest omitted decay factor below `tol`.
pub fn modes_needed(basis: &EigenBasis, kappa: f64, t: f64, tol: f64) -> usize {
    let mut needed = basis.count();
    for (m, &alpha) in basis.alphas.iter().enumerate() {
        if (-kappa * alpha * alpha * t).exp() <= tol {
            needed = m + 1;
            break;
        }
    }
    needed
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Closed-form norm used only as a cross-check on the quadrature norms.
    fn closed_form_norm(alpha: f64, lambda: f64, thickness: f64) -> f64 {
        let r = lambda / alpha;
        let al = alpha * thickness;
        0.5 * thickness * (1.0 + r * r)
            + (2.0 * al).sin() * (1.0 - r * r) / (4.0 * alpha)
            + lambda * (1.0 - (2.0 * al).cos()) / (2.0 * alpha * alpha)
    }

    #[test]
    fn first_roots_match_frozen_references() {
        // (lambda * L, first four alpha_m * L)
        let cases = [
            (0.2, [0.622105696401, 3.26398905443, 6.34619435339, 9.46702360471]),
            (2.0, [1.72066717804, 4.05751567622, 6.85123691896, 9.82636087887]),
            (20.0, [2.85774002243, 5.72554517503, 8.61160282624, 11.5211158654]),
            (200.0, [3.11049025851, 6.22099540461, 9.33153028345, 12.4421096556]),
        ];
        for (lambda_l, roots) in cases {
            for thickness in [1.0, 2.5] {
                let basis = find_roots(thickness, lambda_l / thickness, 4).unwrap();
                for (m, want) in roots.iter().enumerate() {
                    let got = basis.alphas[m] * thickness;
                    let err = ((got - want) / want).abs();
                    println!("lambda L = {lambda_l}, alpha_{} L = {got:.12}", m + 1);
                    assert!(err <= 1e-10, "root {m} off by {err:e}");
                }
            }
        }
    }

    #[test]
    fn roots_satisfy_secular_equation_tightly() {
        for lambda_l in [1e-3, 0.2, 2.0, 20.0, 200.0] {
            let basis = find_roots(1.0, lambda_l, 30).unwrap();
            for &alpha in &basis.alphas {
                let f = secular(alpha, lambda_l, 1.0);
                let scale = alpha * alpha + lambda_l * lambda_l + 2.0 * lambda_l * alpha;
                assert!(
                    f.abs() <= 1e-10 * scale,
                    "residual {f:e} too large at alpha = {alpha}, lambda L = {lambda_l}"
                );
            }
        }
    }

    #[test]
    fn roots_interlace_one_per_pi_interval() {
        let basis = find_roots(1.0, 5.0, 40).unwrap();
        let pi = std::f64::consts::PI;
        for (m, &alpha) in basis.alphas.iter().enumerate() {
            let lo = m as f64 * pi;
            let hi = (m as f64 + 1.0) * pi;
            assert!(alpha > lo && alpha < hi, "alpha_{m} = {alpha} escaped its interval");
        }
        // Sign scan: secular changes sign exactly once in each interval.
        for m in 0..8 {
            let mut crossings = 0;
            let mut prev = secular(m as f64 * pi + 1e-9, 5.0, 1.0);
            for i in 1..=64 {
                let a = m as f64 * pi + i as f64 * pi / 64.0 - 1e-9 * ((i == 64) as i32 as f64);
                let cur = secular(a, 5.0, 1.0);
                if prev.signum() != cur.signum() {
                    crossings += 1;
                }
                prev = cur;
            }
            assert_eq!(crossings, 1, "interval {m} does not contain exactly one root");
        }
    }

    #[test]
    fn tangent_form_holds_where_well_conditioned() {
        let lambda = 2.0;
        let basis = find_roots(1.0, lambda, 25).unwrap();
        for &alpha in &basis.alphas {
            let al = alpha;
            if al.cos().abs() <= 0.1 {
                continue;
            }
            let denom = alpha * alpha - lambda * lambda;
            if denom.abs() <= 0.01 * alpha * alpha {
                continue;
            }
            let lhs = al.tan();
            let rhs = 2.0 * lambda * alpha / denom;
            assert!(
                (lhs - rhs).abs() <= 1e-9 * lhs.abs().max(1.0),
                "tangent form broken at alpha = {alpha}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn lambda_continuity_toward_neumann_and_dirichlet() {
        let pi = std::f64::consts::PI;
        // Small conductance: the first root collapses toward zero (it is
        // the constant mode acquiring a slow decay, alpha_1^2 -> 2 lambda / L)
        // and the rest slide down to the insulated family (m - 1) pi / L.
        let lambda = 1e-6;
        let nearly_neumann = find_roots(1.0, lambda, 10).unwrap();
        let first = nearly_neumann.alphas[0];
        assert!(
            (first * first / (2.0 * lambda) - 1.0).abs() <= 1e-2,
            "slow mode off: alpha_1 = {first:e}"
        );
        for (m, &alpha) in nearly_neumann.alphas.iter().enumerate().skip(1) {
            let neumann = m as f64 * pi;
            assert!(
                (alpha - neumann).abs() <= 1e-5 * pi,
                "mode {m}: {alpha} vs insulated limit {neumann}"
            );
        }
        // Large conductance: roots rise to the zero-wall family m pi / L.
        let nearly_dirichlet = find_roots(1.0, 1e6, 10).unwrap();
        for (m, &alpha) in nearly_dirichlet.alphas.iter().enumerate() {
            let dirichlet = (m as f64 + 1.0) * pi;
            assert!(
                (alpha - dirichlet).abs() <= 1e-4 * pi,
                "mode {m}: {alpha} vs zero-wall limit {dirichlet}"
            );
        }
    }

    #[test]
    fn neumann_family_is_exact() {
        let basis = find_roots(2.0, 0.0, 6).unwrap();
        let pi = std::f64::consts::PI;
        for (m, &alpha) in basis.alphas.iter().enumerate() {
            assert_eq!(alpha, (m as f64 + 1.0) * pi / 2.0);
            assert!((basis.norms[m] - 1.0).abs() <= 1e-13, "cos^2 norm should be L/2");
        }
        assert!(basis.has_constant_mode());
    }

    #[test]
    fn quadrature_norms_match_the_closed_form() {
        for lambda_l in [0.2, 2.0, 20.0, 200.0] {
            let basis = find_roots(1.7, lambda_l / 1.7, 20).unwrap();
            for (m, &alpha) in basis.alphas.iter().enumerate() {
                let want = closed_form_norm(alpha, lambda_l / 1.7, 1.7);
                let got = basis.norms[m];
                let err = ((got - want) / want).abs();
                assert!(
                    err <= 1e-13,
                    "norm {m} mismatch at lambda L = {lambda_l}: {err:e}"
                );
                assert!(got > 0.0);
            }
        }
    }

    #[test]
    fn green_kernel_is_symmetric_and_has_correct_long_time_limits() {
        let basis = find_roots(1.0, 2.0, 40).unwrap();
        let a = eigen_green_z(0.3, 0.8, 0.5, 1.0, &basis).unwrap();
        let b = eigen_green_z(0.8, 0.3, 0.5, 1.0, &basis).unwrap();
        assert!((a - b).abs() <= 1e-14 * a.abs().max(1.0));

        // All modes decay for lambda > 0.
        let late = eigen_green_z(0.4, 0.6, 50.0, 1.0, &basis).unwrap();
        assert!(late.abs() <= 1e-12, "kernel should vanish at long times, got {late}");

        // The insulated layer settles to the constant equilibrium 1/L.
        let neumann = find_roots(1.0, 0.0, 40).unwrap();
        let eq = eigen_green_z(0.4, 0.6, 50.0, 1.0, &neumann).unwrap();
        assert!((eq - 1.0).abs() <= 1e-12, "equilibrium should be 1/L = 1, got {eq}");
    }

    #[test]
    fn frozen_robin_kernel_value_at_the_center() {
        // lambda L = 2, z = zp = L/2, t = tau, L = kappa = 1.
        let basis = find_roots(1.0, 2.0, 60).unwrap();
        let got = eigen_green_z(0.5, 0.5, 0.25, 1.0, &basis).unwrap();
        let want = 0.60590108780305908238;
        let err = ((got - want) / want).abs();
        println!("spectral center kernel = {got:.15}, rel err {err:.2e}");
        assert!(err <= 1e-12);
    }

    #[test]
    fn uniform_temperature_matches_frozen_anchors() {
        // Dirichlet center value at t = tau.
        let sine = dirichlet_basis(1.0, 50).unwrap();
        let got = eigen_uniform_temp(0.5, 0.25, 1.0, &sine).unwrap();
        assert!(
            ((got - 0.107977044444109) / 0.107977044444109).abs() <= 1e-10,
            "Dirichlet center value off: {got}"
        );

        // (lambda L, z, T) at t = tau, L = kappa = 1.
        let cases = [
            (0.2, 0.5, 0.92238857160013),
            (2.0, 0.5, 0.53385940140857),
            (2.0, 0.0, 0.3481768516616694),
            (20.0, 0.5, 0.16381764169303),
            (200.0, 0.5, 0.11334236446413),
        ];
        for (lambda_l, z, want) in cases {
            let basis = find_roots(1.0, lambda_l, 60).unwrap();
            let got = eigen_uniform_temp(z, 0.25, 1.0, &basis).unwrap();
            let err = ((got - want) / want).abs();
            println!("T(lambda L = {lambda_l}, z = {z}) = {got:.12}, rel err {err:.2e}");
            assert!(err <= 1e-10, "temperature off by {err:e}");
        }
    }

    #[test]
    fn uniform_temperature_is_symmetric_about_the_midplane() {
        let basis = find_roots(1.0, 7.0, 60).unwrap();
        for &z in &[0.0, 0.15, 0.33, 0.49] {
            let a = eigen_uniform_temp(z, 0.3, 1.0, &basis).unwrap();
            let b = eigen_uniform_temp(1.0 - z, 0.3, 1.0, &basis).unwrap();
            assert!((a - b).abs() <= 1e-12, "asymmetry at z = {z}: {a} vs {b}");
        }
    }

    #[test]
    fn insulated_layer_keeps_uniform_temperature() {
        let basis = find_roots(1.0, 0.0, 30).unwrap();
        for &t in &[0.01, 0.25, 3.0] {
            let got = eigen_uniform_temp(0.3, t, 1.0, &basis).unwrap();
            assert!((got - 1.0).abs() <= 1e-14);
        }
    }

    #[test]
    fn tail_guard_rejects_underresolved_bases() {
        let basis = find_roots(1.0, 2.0, 3).unwrap();
        // Three modes cannot resolve t = 0.001 tau.
        let err = eigen_green_z(0.5, 0.5, 2.5e-4, 1.0, &basis);
        assert!(matches!(err, Err(SlabError::Convergence { .. })));
    }

    #[test]
    fn auto_basis_refuses_small_times_and_sizes_itself() {
        let cfg = SlabConfig::new(1.0, 1.0, RobinCondition::Finite(2.0)).unwrap();
        let tau = cfg.tau();
        assert!(matches!(
            auto_basis(&cfg, 1e-4 * tau),
            Err(SlabError::Validity(_))
        ));
        let basis = auto_basis(&cfg, tau).unwrap();
        // Must satisfy its own tail criterion.
        assert!(eigen_green_z(0.5, 0.5, tau, 1.0, &basis).is_ok());
        println!("auto basis at t = tau holds {} modes", basis.count());
        // Two modes suffice for 1e-10 at t = 10 tau.
        let late = auto_basis(&cfg, 10.0 * tau).unwrap();
        assert!(modes_needed(&late, 1.0, 10.0 * tau, 1e-10) <= 3);
    }
}
