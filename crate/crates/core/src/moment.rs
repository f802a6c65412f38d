//! Evaluation points and moment values shared by every route.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::exact::{rational_to_f64, ExactRational};

/// Where a moment is evaluated.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Regime {
    InsideDisc,
    /// `z = 1 - c/N`.
    Microscopic { c: Complex64, n: u32 },
    UnitCircle,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralPoint {
    z: Complex64,
    regime: Regime,
}

impl SpectralPoint {
    pub fn inside_disc(z: Complex64) -> Result<Self> {
        if !(z.norm() < 1.0) {
            return Err(Error::Domain(format!("|z| = {} is not < 1", z.norm())));
        }
        Ok(Self { z, regime: Regime::InsideDisc })
    }

    pub fn microscopic(c: Complex64, n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("N must be positive".into()));
        }
        Ok(Self {
            z: Complex64::new(1.0, 0.0) - c / f64::from(n),
            regime: Regime::Microscopic { c, n },
        })
    }

    pub fn unit_circle(theta: f64) -> Self {
        Self { z: Complex64::from_polar(1.0, theta), regime: Regime::UnitCircle }
    }

    pub fn z(&self) -> Complex64 {
        self.z
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    /// `tau = c + conj(c)` in the microscopic regime.
    pub fn tau(&self) -> Option<f64> {
        match self.regime {
            Regime::Microscopic { c, .. } => Some(2.0 * c.re),
            _ => None,
        }
    }
}

/// The scale factor already divided out of a [`MomentValue`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Normalization {
    /// The moment itself.
    None,
    /// Divided by `N^e`.
    PowerOfN(u32),
    /// Multiplied by `(1 - |z|^2)^e`.
    DiscPower(u32),
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Normalization::None => write!(f, "none"),
            Normalization::PowerOfN(e) => write!(f, "N^-{e}"),
            Normalization::DiscPower(e) => write!(f, "(1-|z|^2)^{e}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MomentValue {
    pub numeric: Complex64,
    pub exact: Option<ExactRational>,
    pub stderr: Option<f64>,
    pub normalization: Normalization,
}

impl MomentValue {
    pub fn numeric(numeric: Complex64, normalization: Normalization) -> Self {
        Self { numeric, exact: None, stderr: None, normalization }
    }

    /// Numeric part is the rounded exact value.
    pub fn exact(q: ExactRational, normalization: Normalization) -> Self {
        Self {
            numeric: Complex64::new(rational_to_f64(&q), 0.0),
            exact: Some(q),
            stderr: None,
            normalization,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectral_points() {
        assert!(SpectralPoint::inside_disc(Complex64::new(1.0, 0.0)).is_err());
        assert!(SpectralPoint::inside_disc(Complex64::new(f64::NAN, 0.0)).is_err());
        let p = SpectralPoint::microscopic(Complex64::new(1.0, 2.0), 10).unwrap();
        assert_eq!(p.z(), Complex64::new(0.9, -0.2));
        assert_eq!(p.tau(), Some(2.0));
        assert!(SpectralPoint::microscopic(Complex64::new(1.0, 0.0), 0).is_err());
        assert!((SpectralPoint::unit_circle(0.3).z().norm() - 1.0).abs() < 1e-15);
    }
}
