//! Physical configuration of the layer and its dimensionless variables.

use crate::error::{ensure_finite, Result, SlabError};

/// Boundary condition shared by both faces of the layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RobinCondition {
    /// Finite surface conductance `lambda >= 0`; `lambda = 0` is an
    /// insulated (no-flux) layer.
    Finite(f64),
    /// The infinite-conductance limit: both faces held at zero temperature.
    /// Kept as an explicit variant rather than a huge `lambda`, so the
    /// limiting closed forms are evaluated exactly.
    DirichletInfinite,
}

/// Layer geometry and material data in caller-supplied consistent units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlabConfig {
    /// Layer thickness `L > 0`.
    pub thickness: f64,
    /// Thermal diffusivity `kappa > 0`.
    pub kappa: f64,
    /// Boundary condition applied at `z = 0` and `z = L`.
    pub robin: RobinCondition,
}

impl SlabConfig {
    pub fn new(thickness: f64, kappa: f64, robin: RobinCondition) -> Result<Self> {
        ensure_finite(thickness, "thickness")?;
        ensure_finite(kappa, "kappa")?;
        if thickness <= 0.0 {
            return Err(SlabError::Domain(format!(
                "thickness must be positive, got {thickness}"
            )));
        }
        if kappa <= 0.0 {
            return Err(SlabError::Domain(format!("kappa must be positive, got {kappa}")));
        }
        if let RobinCondition::Finite(lambda) = robin {
            ensure_finite(lambda, "lambda")?;
            if lambda < 0.0 {
                return Err(SlabError::Domain(format!(
                    "lambda must be nonnegative, got {lambda}"
                )));
            }
        }
        Ok(SlabConfig {
            thickness,
            kappa,
            robin,
        })
    }

    /// Construct from the Biot number `Bi = L*lambda/2` (note the factor
    /// 1/2: this is not the more common `lambda*L`). An infinite Biot
    /// number selects the Dirichlet limit.
    pub fn from_biot(thickness: f64, kappa: f64, bi: f64) -> Result<Self> {
        if bi.is_nan() || bi < 0.0 {
            return Err(SlabError::Domain(format!(
                "Biot number must be nonnegative, got {bi}"
            )));
        }
        if bi.is_infinite() {
            Self::new(thickness, kappa, RobinCondition::DirichletInfinite)
        } else {
            Self::new(thickness, kappa, RobinCondition::Finite(2.0 * bi / thickness))
        }
    }

    /// Diffusion time scale `tau = L^2 / (4 kappa)`.
    pub fn tau(&self) -> f64 {
        self.thickness * self.thickness / (4.0 * self.kappa)
    }

    /// Surface conductance, when finite.
    pub fn lambda(&self) -> Option<f64> {
        match self.robin {
            RobinCondition::Finite(lambda) => Some(lambda),
            RobinCondition::DirichletInfinite => None,
        }
    }

    /// Biot number `Bi = L*lambda/2`; infinite in the Dirichlet limit.
    pub fn biot(&self) -> f64 {
        match self.robin {
            RobinCondition::Finite(lambda) => 0.5 * self.thickness * lambda,
            RobinCondition::DirichletInfinite => f64::INFINITY,
        }
    }

    pub(crate) fn check_z(&self, z: f64, name: &str) -> Result<()> {
        ensure_finite(z, name)?;
        if z < 0.0 || z > self.thickness {
            return Err(SlabError::Domain(format!(
                "{name} = {z} outside the layer [0, {}]",
                self.thickness
            )));
        }
        Ok(())
    }

    pub(crate) fn check_t(&self, t: f64) -> Result<()> {
        ensure_finite(t, "t")?;
        if t <= 0.0 {
            return Err(SlabError::Domain(format!("t must be positive, got {t}")));
        }
        Ok(())
    }
}

/// Dimensionless variables of one `(config, z, t)` query.
#[derive(Debug, Clone, Copy)]
pub struct ScaledVars {
    /// `xi = z / sqrt(4 kappa t)`.
    pub xi: f64,
    /// `l = L / sqrt(4 kappa t)`; also `sqrt(tau / t)`.
    pub l: f64,
    /// `lambda_tilde = lambda * sqrt(kappa t)`; infinite in the Dirichlet
    /// limit.
    pub lambda_tilde: f64,
    /// `tau = L^2 / (4 kappa)`.
    pub tau: f64,
    /// `bi = L * lambda / 2`; infinite in the Dirichlet limit.
    pub bi: f64,
}

impl ScaledVars {
    pub fn new(cfg: &SlabConfig, z: f64, t: f64) -> Result<Self> {
        cfg.check_t(t)?;
        ensure_finite(z, "z")?;
        let root = (4.0 * cfg.kappa * t).sqrt();
        let (lambda_tilde, bi) = match cfg.robin {
            RobinCondition::Finite(lambda) => (
                lambda * (cfg.kappa * t).sqrt(),
                0.5 * cfg.thickness * lambda,
            ),
            RobinCondition::DirichletInfinite => (f64::INFINITY, f64::INFINITY),
        };
        Ok(ScaledVars {
            xi: z / root,
            l: cfg.thickness / root,
            lambda_tilde,
            tau: cfg.tau(),
            bi,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_nonpositive_geometry() {
        assert!(SlabConfig::new(0.0, 1.0, RobinCondition::Finite(1.0)).is_err());
        assert!(SlabConfig::new(1.0, -2.0, RobinCondition::Finite(1.0)).is_err());
        assert!(SlabConfig::new(1.0, 1.0, RobinCondition::Finite(-0.5)).is_err());
        assert!(SlabConfig::new(f64::NAN, 1.0, RobinCondition::DirichletInfinite).is_err());
    }

    #[test]
    fn biot_convention_is_half_l_lambda() {
        let cfg = SlabConfig::from_biot(2.0, 0.5, 10.0).unwrap();
        assert_eq!(cfg.lambda(), Some(10.0));
        assert_eq!(cfg.biot(), 10.0);
        let inf = SlabConfig::from_biot(2.0, 0.5, f64::INFINITY).unwrap();
        assert_eq!(inf.robin, RobinCondition::DirichletInfinite);
        assert!(inf.biot().is_infinite());
    }

    #[test]
    fn scaled_vars_are_mutually_consistent() {
        let cfg = SlabConfig::new(3.0, 0.7, RobinCondition::Finite(1.3)).unwrap();
        for &(z, t) in &[(0.0, 0.1), (1.5, 2.0), (3.0, 17.0)] {
            let sv = ScaledVars::new(&cfg, z, t).unwrap();
            // bi = l * lambda_tilde exactly up to rounding.
            let recomputed = sv.l * sv.lambda_tilde;
            assert!(
                (recomputed - sv.bi).abs() <= 1e-15 * sv.bi,
                "bi inconsistency: {recomputed} vs {}",
                sv.bi
            );
            // xi / l = z / L.
            assert!((sv.xi / sv.l - z / cfg.thickness).abs() <= 1e-15);
            // l = sqrt(tau / t).
            assert!(((sv.l * sv.l) * t - sv.tau).abs() <= 1e-15 * sv.tau);
        }
    }

    #[test]
    fn tau_matches_definition() {
        let cfg = SlabConfig::new(2.0, 0.25, RobinCondition::Finite(0.0)).unwrap();
        assert_eq!(cfg.tau(), 4.0);
    }
}
