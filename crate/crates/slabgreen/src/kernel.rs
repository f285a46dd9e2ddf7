//! Image-source representation of the axial Green's function.
//!
//! The kernel for a slab with symmetric third-kind walls is a sum of
//! free-space Gaussians at mirrored source positions `Z_(+-)(n) =
//! (z +- zp) + 2 n L`, each weighted by a coordinate- and time-dependent
//! reflection coefficient `P_n^(+-)` built from binomial-weighted `beta_k`
//! values. Truncation is certified: after ring `N` every remaining image
//! sits at least `2 N L` away, so the omitted mass is bounded by a pair of
//! leading Gaussians plus an `erfc` integral tail, and that bound is what
//! `SeriesValue::remainder_bound` records. The same ring loop serves the
//! insulated wall (`lambda = 0`, all weights exactly 1) and the
//! zero-temperature wall (`DirichletInfinite`, weights exactly +-1).

use crate::error::{ensure_finite, Result, SlabError};
use crate::slab::{RobinCondition, ScaledVars, SlabConfig};
use crate::special::{
    beta_seq, binomial_beta_sum, erfc_raw, PASCAL_MAX_ROW, SQRT_PI,
};
use crate::sum::CompensatedSum;

/// Which mirror family an image belongs to: `Minus` uses `Z = (z - zp) +
/// 2nL`, `Plus` uses `Z = (z + zp) + 2nL`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageSign {
    Minus,
    Plus,
}

/// Relative rounding rate assumed per unit of tracked term magnitude when
/// estimating cancellation damage. Ten times the observed backward-recursion
/// error, so the estimate errs on the side of reporting loss.
const ROUNDING_RATE: f64 = 1e-13;

/// How far below `abs_tol` the last included ring must fall.
const LAST_RING_MARGIN: f64 = 10.0;

/// Truncation control for the image series.
#[derive(Debug, Clone, Copy)]
pub struct TruncationPolicy {
    /// Absolute tolerance on the kernel value (kernel units, 1/length).
    pub abs_tol: f64,
    /// Largest image index `|n|` the series may use.
    pub n_max: usize,
    /// Safety factor applied to the analytic remainder template.
    pub safety: f64,
}

impl Default for TruncationPolicy {
    fn default() -> Self {
        TruncationPolicy {
            abs_tol: 1e-10,
            n_max: 64,
            safety: 2.0,
        }
    }
}

impl TruncationPolicy {
    pub fn validate(&self) -> Result<()> {
        ensure_finite(self.abs_tol, "abs_tol")?;
        ensure_finite(self.safety, "safety")?;
        if self.abs_tol <= 0.0 {
            return Err(SlabError::Domain(format!(
                "abs_tol must be positive, got {}",
                self.abs_tol
            )));
        }
        if self.n_max == 0 {
            return Err(SlabError::Domain("n_max must be at least 1".into()));
        }
        if self.safety < 1.0 {
            return Err(SlabError::Domain(format!(
                "safety must be at least 1, got {}",
                self.safety
            )));
        }
        Ok(())
    }
}

/// A truncated series evaluation: the value, the largest image index
/// included, and the certified bound on everything left out.
#[derive(Debug, Clone, Copy)]
pub struct SeriesValue {
    pub value: f64,
    pub terms_used: usize,
    pub remainder_bound: f64,
}

fn row_index(sign: ImageSign, n: i64) -> usize {
    match sign {
        ImageSign::Minus => 2 * n.unsigned_abs() as usize,
        ImageSign::Plus => {
            if n >= 0 {
                2 * n as usize + 1
            } else {
                2 * n.unsigned_abs() as usize - 1
            }
        }
    }
}

/// Reflection weight plus the magnitude its inner sum accumulated, for
/// cancellation accounting. `z_img` is the already-formed `|Z_(+-)(n)|`.
fn coeff_tracked(
    sign: ImageSign,
    n: i64,
    z_img: f64,
    cfg: &SlabConfig,
    t: f64,
) -> Result<(f64, f64)> {
    let lambda = match cfg.robin {
        RobinCondition::DirichletInfinite => {
            // The infinite-conductance limit of every weight is +-1.
            return Ok(match sign {
                ImageSign::Minus => (1.0, 1.0),
                ImageSign::Plus => (-1.0, 1.0),
            });
        }
        RobinCondition::Finite(lambda) => lambda,
    };
    let row = row_index(sign, n);
    if row == 0 || lambda == 0.0 {
        return Ok((1.0, 1.0));
    }
    if row > PASCAL_MAX_ROW {
        return Err(SlabError::Capacity(format!(
            "image index {n} needs binomial row {row}, beyond the cap {PASCAL_MAX_ROW}"
        )));
    }
    let betas = beta_seq(row - 1, z_img, lambda, t, cfg.kappa)?;
    let (sum, magnitude) = binomial_beta_sum(row, &betas);
    Ok((1.0 - sum, 1.0 + magnitude))
}

/// Reflection weight `P_n^(+-)` for the image at `Z_(+-)(n)`, with `z_img =
/// |Z_(+-)(n)|` formed by the caller.
///
/// `(Minus, 0)` is exactly 1 (the physical source carries no reflection),
/// and an insulated wall (`lambda = 0`) gives exactly 1 for every image.
/// A `DirichletInfinite` wall gives the limiting weights +1 (`Minus`) and
/// -1 (`Plus`).
pub fn p_coeff(sign: ImageSign, n: i64, z_img: f64, cfg: &SlabConfig, t: f64) -> Result<f64> {
    ensure_finite(z_img, "z_img")?;
    if z_img < 0.0 {
        return Err(SlabError::Domain(format!(
            "z_img must be nonnegative, got {z_img}"
        )));
    }
    cfg.check_t(t)?;
    coeff_tracked(sign, n, z_img, cfg, t).map(|(value, _)| value)
}

/// Certified bound on the sum of all rings beyond `rings`, in the
/// dimensionless units of the ring loop (divide `sqrt(pi) sqrt(4 kappa t)`
/// out of the kernel). Every image in ring `M > N` sits at distance at
/// least `(2M - 2) l`, each integer distance index appears at most twice,
/// and the weights are bounded by 1, so the tail is at most
/// `2 e^{-(2Nl)^2} + 2 e^{-((2N+1)l)^2}` plus the integral comparison
/// `(sqrt(pi)/l) erfc((2N+1) l)`.
fn ring_tail(rings: usize, l: f64) -> f64 {
    let a = 2.0 * rings as f64 * l;
    let b = a + l;
    2.0 * (-a * a).exp() + 2.0 * (-b * b).exp() + SQRT_PI / l * erfc_raw(b)
}

struct RingAccumulator {
    acc: CompensatedSum,
    /// Tracked magnitude for the rounding-loss estimate.
    error_mass: f64,
    /// Magnitude of the ring currently being accumulated.
    ring_mass: f64,
}

impl RingAccumulator {
    fn new() -> Self {
        RingAccumulator {
            acc: CompensatedSum::new(),
            error_mass: 0.0,
            ring_mass: 0.0,
        }
    }

    fn add_image(
        &mut self,
        sign: ImageSign,
        n: i64,
        z_pair: f64,
        cfg: &SlabConfig,
        t: f64,
        root_4kt: f64,
    ) -> Result<()> {
        let z_image = z_pair + 2.0 * n as f64 * cfg.thickness;
        let u = z_image / root_4kt;
        let gauss = (-u * u).exp();
        if gauss == 0.0 {
            return Ok(());
        }
        let (weight, magnitude) = coeff_tracked(sign, n, z_image.abs(), cfg, t)?;
        let term = weight * gauss;
        self.acc.add(term);
        self.error_mass += magnitude * gauss;
        self.ring_mass += term.abs().max(gauss * 1e-30);
        Ok(())
    }
}

/// Axial Green's function by summed image rings.
///
/// Rings are added symmetrically (`n = 0`, then `+-1`, `+-2`, ...) until
/// both the analytic tail bound and the last ring's own contribution fall
/// under the policy tolerance; the tail bound is recorded as
/// `remainder_bound`, so `Ok` results always satisfy `remainder_bound <=
/// abs_tol`. Runs that converge numerically but whose tracked term
/// magnitudes imply rounding damage above the tolerance fail with
/// `PrecisionLoss` instead of returning a value that merely looks converged.
pub fn green_z(
    z: f64,
    zp: f64,
    t: f64,
    cfg: &SlabConfig,
    policy: &TruncationPolicy,
) -> Result<SeriesValue> {
    policy.validate()?;
    let scaled = ScaledVars::new(cfg, z, t)?;
    cfg.check_z(zp, "zp")?;
    let root_4kt = (4.0 * cfg.kappa * t).sqrt();
    let prefactor = 1.0 / (SQRT_PI * root_4kt);
    let z_minus = z - zp;
    let z_plus = z + zp;

    let mut rings = RingAccumulator::new();
    rings.add_image(ImageSign::Minus, 0, z_minus, cfg, t, root_4kt)?;
    rings.add_image(ImageSign::Plus, 0, z_plus, cfg, t, root_4kt)?;

    let mut tail = ring_tail(0, scaled.l);
    let mut used = 0usize;
    let mut converged = tail * prefactor <= policy.abs_tol
        && rings.ring_mass * prefactor <= policy.abs_tol / LAST_RING_MARGIN;
    while !converged {
        if used == policy.n_max {
            return Err(SlabError::Convergence {
                achieved: tail * prefactor,
                tolerance: policy.abs_tol,
                terms: policy.n_max,
            });
        }
        used += 1;
        let n = used as i64;
        rings.ring_mass = 0.0;
        rings.add_image(ImageSign::Minus, n, z_minus, cfg, t, root_4kt)?;
        rings.add_image(ImageSign::Plus, -n, z_plus, cfg, t, root_4kt)?;
        rings.add_image(ImageSign::Minus, -n, z_minus, cfg, t, root_4kt)?;
        rings.add_image(ImageSign::Plus, n, z_plus, cfg, t, root_4kt)?;
        tail = ring_tail(used, scaled.l);
        converged = tail * prefactor <= policy.abs_tol
            && rings.ring_mass * prefactor <= policy.abs_tol / LAST_RING_MARGIN;
    }

    let rounding_estimate = ROUNDING_RATE * rings.error_mass * prefactor;
    if rounding_estimate > policy.abs_tol {
        return Err(SlabError::PrecisionLoss(format!(
            "cancellation in the image weights leaves an estimated rounding error \
             {rounding_estimate:.3e} above the tolerance {:.3e} (lambda_tilde = {:.3e}, \
             rings = {used}); the spectral path covers this regime",
            policy.abs_tol, scaled.lambda_tilde
        )));
    }
    let value = rings.acc.value() * prefactor;
    ensure_finite(value, "green_z value")?;
    Ok(SeriesValue {
        value,
        terms_used: used,
        remainder_bound: tail * prefactor,
    })
}

/// One image contribution `P_n^(+-) e^{-Z^2/4 kappa t} / sqrt(4 pi kappa t)`.
/// Summing over both signs and `|n| <= N` reproduces `green_z` up to its
/// recorded remainder bound.
pub fn image_term(
    sign: ImageSign,
    n: i64,
    z: f64,
    zp: f64,
    t: f64,
    cfg: &SlabConfig,
) -> Result<f64> {
    cfg.check_z(z, "z")?;
    cfg.check_z(zp, "zp")?;
    cfg.check_t(t)?;
    let root_4kt = (4.0 * cfg.kappa * t).sqrt();
    let pair = match sign {
        ImageSign::Minus => z - zp,
        ImageSign::Plus => z + zp,
    };
    let z_image = pair + 2.0 * n as f64 * cfg.thickness;
    let u = z_image / root_4kt;
    let gauss = (-u * u).exp();
    if gauss == 0.0 {
        return Ok(0.0);
    }
    let weight = p_coeff(sign, n, z_image.abs(), cfg, t)?;
    Ok(weight * gauss / (SQRT_PI * root_4kt))
}

/// Full three-dimensional kernel: a free transverse Gaussian times the
/// axial image series.
pub fn green_3d(
    x: f64,
    y: f64,
    z: f64,
    xp: f64,
    yp: f64,
    zp: f64,
    t: f64,
    cfg: &SlabConfig,
    policy: &TruncationPolicy,
) -> Result<f64> {
    for (v, name) in [(x, "x"), (y, "y"), (xp, "xp"), (yp, "yp")] {
        ensure_finite(v, name)?;
    }
    let axial = green_z(z, zp, t, cfg, policy)?;
    let r_perp_sq = (x - xp) * (x - xp) + (y - yp) * (y - yp);
    let four_kt = 4.0 * cfg.kappa * t;
    Ok((-r_perp_sq / four_kt).exp() / (std::f64::consts::PI * four_kt) * axial.value)
}

/// Closed-form third-kind half-space kernel: two Gaussians minus a
/// conductance correction. The `e^{lambda_tilde^2 + lambda Z_+} erfc(...)`
/// product is evaluated through `erfcx` with the exponents cancelled
/// analytically (the combination collapses to `erfcx(u_+ + lambda_tilde)
/// e^{-u_+^2}`), so no intermediate overflows for any conductance.
pub fn green_halfspace(z: f64, zp: f64, t: f64, lambda: f64, kappa: f64) -> Result<f64> {
    for (v, name) in [(z, "z"), (zp, "zp"), (t, "t"), (lambda, "lambda"), (kappa, "kappa")] {
        ensure_finite(v, name)?;
    }
    if z < 0.0 || zp < 0.0 {
        return Err(SlabError::Domain(format!(
            "half-space coordinates must be nonnegative, got z = {z}, zp = {zp}"
        )));
    }
    if t <= 0.0 || kappa <= 0.0 {
        return Err(SlabError::Domain(format!(
            "t and kappa must be positive, got t = {t}, kappa = {kappa}"
        )));
    }
    if lambda < 0.0 {
        return Err(SlabError::Domain(format!(
            "lambda must be nonnegative, got {lambda}"
        )));
    }
    let root_4kt = (4.0 * kappa * t).sqrt();
    let u_minus = (z - zp) / root_4kt;
    let u_plus = (z + zp) / root_4kt;
    let lambda_tilde = lambda * (kappa * t).sqrt();
    let gauss_plus = (-u_plus * u_plus).exp();
    let correction =
        SQRT_PI * 2.0 * lambda_tilde * crate::special::erfcx(u_plus + lambda_tilde)? * gauss_plus;
    let value =
        ((-u_minus * u_minus).exp() + gauss_plus - correction) / (SQRT_PI * root_4kt);
    ensure_finite(value, "green_halfspace value")?;
    Ok(value)
}

/// Smallest ring count whose analytic remainder template (with the policy's
/// safety factor) meets `abs_tol`. `green_z` additionally verifies the
/// last-ring criterion at runtime, so this is the a priori estimate.
pub fn truncation_n(policy: &TruncationPolicy, cfg: &SlabConfig, t: f64) -> Result<usize> {
    policy.validate()?;
    cfg.check_t(t)?;
    let l = cfg.thickness / (4.0 * cfg.kappa * t).sqrt();
    let root_kt = (cfg.kappa * t).sqrt();
    let mut bound = f64::INFINITY;
    for n in 1..=policy.n_max {
        bound = policy.safety / l * erfc_raw((2.0 * n as f64 - 1.0) * cfg.thickness / root_kt);
        if bound <= policy.abs_tol {
            return Ok(n);
        }
    }
    Err(SlabError::Convergence {
        achieved: bound,
        tolerance: policy.abs_tol,
        terms: policy.n_max,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    fn robin_cfg(lambda: f64) -> SlabConfig {
        SlabConfig::new(1.0, 1.0, RobinCondition::Finite(lambda)).unwrap()
    }

    #[test]
    fn source_weight_is_exactly_one() {
        let cfg = robin_cfg(3.7);
        for &z_img in &[0.0, 0.4, 5.0] {
            assert_eq!(p_coeff(ImageSign::Minus, 0, z_img, &cfg, 0.3).unwrap(), 1.0);
        }
    }

    #[test]
    fn insulated_wall_weights_are_all_one() {
        let cfg = robin_cfg(0.0);
        for n in -5..=5 {
            for sign in [ImageSign::Minus, ImageSign::Plus] {
                assert_eq!(p_coeff(sign, n, 2.0 * n.abs() as f64, &cfg, 0.25).unwrap(), 1.0);
            }
        }
    }

    #[test]
    fn zero_temperature_wall_weights_are_plus_minus_one() {
        let cfg = SlabConfig::new(1.0, 1.0, RobinCondition::DirichletInfinite).unwrap();
        assert_eq!(p_coeff(ImageSign::Minus, 7, 14.0, &cfg, 0.1).unwrap(), 1.0);
        assert_eq!(p_coeff(ImageSign::Plus, -7, 13.0, &cfg, 0.1).unwrap(), -1.0);
    }

    #[test]
    fn first_reflected_weight_matches_the_beta_anchor() {
        // z_img = 0, lambda_tilde = 1: P_0^(+) = 1 - sqrt(pi) * 2 * erfcx(1).
        let cfg = robin_cfg(1.0);
        let got = p_coeff(ImageSign::Plus, 0, 0.0, &cfg, 1.0).unwrap();
        let want = 1.0 - 1.51574431228262421209;
        assert!(rel(got, want) <= 1e-13, "got {got}, want {want}");
    }

    #[test]
    fn far_image_weights_approach_the_conductance_decay() {
        // lambda L = 2, t = tau: the |n| -> infinity limit is e^{-4 lambda
        // kappa t / L} = e^{-2}; frozen values computed at z = zp = L/2.
        let cfg = robin_cfg(2.0);
        let t = 0.25;
        let cases = [
            (ImageSign::Minus, 40, 80.0, 0.1353211869),
            (ImageSign::Plus, 40, 81.0, 0.1353215328),
            (ImageSign::Plus, -40, 79.0, 0.1353208278),
        ];
        let limit = (-2.0f64).exp();
        for (sign, n, z_img, want) in cases {
            let got = p_coeff(sign, n, z_img, &cfg, t).unwrap();
            println!("P({sign:?}, {n}) = {got:.10}, limit {limit:.10}");
            assert!(rel(got, want) <= 1e-8, "frozen value mismatch: {got} vs {want}");
            assert!(rel(got, limit) <= 0.05, "asymptote violated: {got} vs {limit}");
        }
    }

    #[test]
    fn image_index_beyond_binomial_capacity_is_rejected() {
        let cfg = robin_cfg(1.0);
        let err = p_coeff(ImageSign::Plus, 70, 140.0, &cfg, 0.25);
        assert!(matches!(err, Err(SlabError::Capacity(_))), "got {err:?}");
    }

    #[test]
    fn source_term_is_the_free_space_kernel() {
        let cfg = robin_cfg(5.0);
        let (z, zp, t) = (0.3, 0.8, 0.07);
        let got = image_term(ImageSign::Minus, 0, z, zp, t, &cfg).unwrap();
        let dz = z - zp;
        let want = (-dz * dz / (4.0 * t)).exp() / (4.0 * std::f64::consts::PI * t).sqrt();
        assert!(rel(got, want) <= 1e-15, "got {got}, want {want}");
    }

    #[test]
    fn ring_count_estimate_matches_worked_examples() {
        let cfg = robin_cfg(2.0);
        let policy = TruncationPolicy::default();
        // Early time: one ring suffices.
        assert_eq!(truncation_n(&policy, &cfg, 1e-6).unwrap(), 1);
        // kappa t = L^2: erfc(5) passes 1e-10 after the safety factor,
        // erfc(3) does not.
        assert_eq!(truncation_n(&policy, &cfg, 1.0).unwrap(), 3);
    }

    #[test]
    fn frozen_center_values_for_robin_and_insulated_walls() {
        let policy = TruncationPolicy::default();
        let robin = green_z(0.5, 0.5, 0.25, &robin_cfg(2.0), &policy).unwrap();
        assert!(
            rel(robin.value, 0.60590108780305908238) <= 1e-10,
            "Robin center kernel off: {}",
            robin.value
        );
        let neumann = green_z(0.5, 0.5, 0.25, &robin_cfg(0.0), &policy).unwrap();
        assert!(
            rel(neumann.value, 1.0001034463724076389) <= 1e-12,
            "insulated center kernel off: {}",
            neumann.value
        );
        println!(
            "center kernels: robin {} ({} rings), insulated {} ({} rings)",
            robin.value, robin.terms_used, neumann.value, neumann.terms_used
        );
    }

    #[test]
    fn kernel_is_reciprocal_in_source_and_observer() {
        let cfg = robin_cfg(3.0);
        let policy = TruncationPolicy::default();
        for &(z, zp) in &[(0.1, 0.9), (0.0, 0.37), (0.25, 0.5)] {
            let a = green_z(z, zp, 0.1, &cfg, &policy).unwrap().value;
            let b = green_z(zp, z, 0.1, &cfg, &policy).unwrap().value;
            assert!((a - b).abs() <= 1e-15 * a.abs().max(1.0), "{a} vs {b} at ({z}, {zp})");
        }
    }

    #[test]
    fn zero_temperature_wall_kills_the_kernel_at_the_wall() {
        let cfg = SlabConfig::new(1.0, 1.0, RobinCondition::DirichletInfinite).unwrap();
        let policy = TruncationPolicy::default();
        let at_wall = green_z(0.0, 0.6, 0.2, &cfg, &policy).unwrap();
        assert!(
            at_wall.value.abs() <= 1e-16,
            "wall value should vanish, got {}",
            at_wall.value
        );
    }

    #[test]
    fn partial_sums_reproduce_the_series_within_its_remainder() {
        let cfg = robin_cfg(2.0);
        let policy = TruncationPolicy::default();
        let series = green_z(0.3, 0.6, 0.25, &cfg, &policy).unwrap();
        let mut partial = image_term(ImageSign::Minus, 0, 0.3, 0.6, 0.25, &cfg).unwrap()
            + image_term(ImageSign::Plus, 0, 0.3, 0.6, 0.25, &cfg).unwrap();
        for n in 1..=series.terms_used as i64 {
            for sign in [ImageSign::Minus, ImageSign::Plus] {
                partial += image_term(sign, n, 0.3, 0.6, 0.25, &cfg).unwrap();
                partial += image_term(sign, -n, 0.3, 0.6, 0.25, &cfg).unwrap();
            }
        }
        let diff = (partial - series.value).abs();
        assert!(
            diff <= series.remainder_bound.max(1e-15),
            "partial sum off by {diff}, bound {}",
            series.remainder_bound
        );
        assert!(series.remainder_bound <= policy.abs_tol);
        assert!(series.terms_used <= policy.n_max);
    }

    #[test]
    fn exhausted_ring_budget_reports_convergence_failure() {
        let cfg = robin_cfg(0.0);
        let policy = TruncationPolicy {
            n_max: 2,
            ..TruncationPolicy::default()
        };
        // t = 4 tau needs more than two rings.
        let err = green_z(0.5, 0.5, 1.0, &cfg, &policy);
        match err {
            Err(SlabError::Convergence {
                achieved,
                tolerance,
                terms,
            }) => {
                assert!(achieved > tolerance);
                assert_eq!(terms, 2);
            }
            other => panic!("expected a convergence error, got {other:?}"),
        }
    }

    #[test]
    fn deep_time_cancellation_raises_precision_loss() {
        // t = 100 tau: tens of rings with rows near 50 and lambda_tilde = 10;
        // the alternating weight sums cancel far beyond the tolerance.
        let cfg = robin_cfg(2.0);
        let policy = TruncationPolicy::default();
        let err = green_z(0.5, 0.5, 25.0, &cfg, &policy);
        assert!(matches!(err, Err(SlabError::PrecisionLoss(_))), "got {err:?}");
    }

    #[test]
    fn halfspace_limits_insulated_and_zero_temperature() {
        // lambda = 0: plain sum of direct and mirrored Gaussians.
        let (z, zp, t, kappa) = (0.4f64, 1.1f64, 0.6f64, 1.0f64);
        let root = (4.0 * kappa * t).sqrt();
        let um = (z - zp) / root;
        let up = (z + zp) / root;
        let neumann = green_halfspace(z, zp, t, 0.0, kappa).unwrap();
        let want = ((-um * um).exp() + (-up * up).exp()) / (SQRT_PI * root);
        assert!(rel(neumann, want) <= 1e-15);

        // Large conductance: difference of the same Gaussians. Checked on
        // the diagonal (z = zp) where the direct Gaussian is 1, so the image
        // is not masked by cancellation; the correction term is O(1/lambda).
        let zd = 1.2f64;
        let upd = (zd + zd) / root;
        let lambda = 1e3 / (kappa * t).sqrt();
        let dirichlet = green_halfspace(zd, zd, t, lambda, kappa).unwrap();
        let want = (1.0 - (-upd * upd).exp()) / (SQRT_PI * root);
        assert!(rel(dirichlet, want) <= 1e-3, "got {dirichlet}, want {want}");
    }

    #[test]
    fn thick_slab_matches_the_halfspace_kernel() {
        // L = 100 sqrt(kappa t): only the n = 0 ring survives.
        let cfg = SlabConfig::new(100.0, 1.0, RobinCondition::Finite(2.0)).unwrap();
        let policy = TruncationPolicy::default();
        for &(z, zp) in &[(0.0, 0.5), (0.3, 0.7), (1.5, 0.2)] {
            let slab = green_z(z, zp, 1.0, &cfg, &policy).unwrap().value;
            let half = green_halfspace(z, zp, 1.0, 2.0, 1.0).unwrap();
            assert!(rel(slab, half) <= 1e-12, "slab {slab} vs half-space {half}");
        }
    }

    #[test]
    fn transverse_factorization_is_exact() {
        let cfg = robin_cfg(1.5);
        let policy = TruncationPolicy::default();
        let t = 0.2;
        let axial = green_z(0.3, 0.8, t, &cfg, &policy).unwrap().value;
        let coincident = green_3d(1.0, -2.0, 0.3, 1.0, -2.0, 0.8, t, &cfg, &policy).unwrap();
        let four_kt = 4.0 * cfg.kappa * t;
        assert!(rel(coincident, axial / (std::f64::consts::PI * four_kt)) <= 1e-15);

        let offset = green_3d(1.0, -2.0, 0.3, 0.4, 0.1, 0.8, t, &cfg, &policy).unwrap();
        let r_sq = (1.0f64 - 0.4).powi(2) + (-2.0f64 - 0.1).powi(2);
        let want = (-r_sq / four_kt).exp() / (std::f64::consts::PI * four_kt) * axial;
        assert!(rel(offset, want) <= 1e-15);
    }
}
