//! Coordinates on the unit-area disk, the cylinder `S¹ × (0, 1]` and the
//! circle `S¹ = ℝ/ℤ`, with the map between disk and cylinder.
//!
//! The map `(r, φ) ↦ (φ/2π, πr²)` sends area to area and turns the disk
//! symmetries into cylinder symmetries: a rotation by `2πh` becomes
//! `u ↦ u + h`, and the reflection in the diameter `φ = πg` becomes
//! `u ↦ g − u`.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack allowed when validating a radius against the rim `1/√π`.
const RIM_SLACK: f64 = 1e-12;

/// Radius of the disk of unit area.
pub fn disk_radius() -> f64 {
    1.0 / PI.sqrt()
}

/// Reduce `x` modulo 1 into `[0, 1)`.
pub fn wrap_unit(x: f64) -> f64 {
    let w = x.rem_euclid(1.0);
    // rem_euclid rounds tiny negatives up to exactly 1.0
    if w >= 1.0 {
        0.0
    } else {
        w
    }
}

/// Reduce `x` modulo 1 into `(0, 1]`.
fn wrap_unit_upper(x: f64) -> f64 {
    let w = wrap_unit(x);
    if w == 0.0 {
        1.0
    } else {
        w
    }
}

/// A point of `S¹ = ℝ/ℤ`, kept as its representative in `[0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(from = "f64", into = "f64")]
pub struct CirclePoint(f64);

impl CirclePoint {
    pub fn new(x: f64) -> Self {
        CirclePoint(wrap_unit(x))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<f64> for CirclePoint {
    fn from(x: f64) -> Self {
        CirclePoint::new(x)
    }
}

impl From<CirclePoint> for f64 {
    fn from(p: CirclePoint) -> f64 {
        p.0
    }
}

impl std::ops::Add for CirclePoint {
    type Output = CirclePoint;
    fn add(self, rhs: CirclePoint) -> CirclePoint {
        CirclePoint::new(self.0 + rhs.0)
    }
}

impl std::ops::Sub for CirclePoint {
    type Output = CirclePoint;
    fn sub(self, rhs: CirclePoint) -> CirclePoint {
        CirclePoint::new(self.0 - rhs.0)
    }
}

impl std::ops::Neg for CirclePoint {
    type Output = CirclePoint;
    fn neg(self) -> CirclePoint {
        CirclePoint::new(-self.0)
    }
}

/// Polar point of the punctured unit-area disk.
///
/// `r ∈ (0, 1/√π]`, `phi` is stored in `(0, 2π]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiskPoint {
    r: f64,
    phi: f64,
}

impl DiskPoint {
    pub fn new(r: f64, phi: f64) -> Result<Self> {
        if !(r > 0.0 && r <= disk_radius() + RIM_SLACK) {
            return Err(Error::InvalidRadius(r));
        }
        Ok(DiskPoint {
            r: r.min(disk_radius()),
            phi: TAU * wrap_unit_upper(phi / TAU),
        })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Cartesian coordinates `(r cos φ, r sin φ)`.
    pub fn to_xy(&self) -> (f64, f64) {
        (self.r * self.phi.cos(), self.r * self.phi.sin())
    }

    /// Reflection of the disk in the diameter at angle `πg`.
    pub fn reflect(&self, g: CirclePoint) -> DiskPoint {
        DiskPoint {
            r: self.r,
            phi: TAU * wrap_unit_upper(g.value() - self.phi / TAU),
        }
    }

    /// Rotation of the disk by angle `2πh`.
    pub fn rotate(&self, h: CirclePoint) -> DiskPoint {
        DiskPoint {
            r: self.r,
            phi: TAU * wrap_unit_upper(self.phi / TAU + h.value()),
        }
    }
}

/// Point `(u, v)` of the cylinder `S¹ × (0, 1]`, both coordinates in `(0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CylinderPoint {
    u: f64,
    v: f64,
}

impl CylinderPoint {
    pub fn new(u: f64, v: f64) -> Result<Self> {
        if !(v > 0.0 && v <= 1.0 + RIM_SLACK) {
            return Err(Error::InvalidParameter {
                name: "v",
                value: v,
                reason: "height must lie in (0, 1]".into(),
            });
        }
        Ok(CylinderPoint {
            u: wrap_unit_upper(u),
            v: v.min(1.0),
        })
    }

    pub fn u(&self) -> f64 {
        self.u
    }

    pub fn v(&self) -> f64 {
        self.v
    }
}

pub fn disk_to_cylinder(p: DiskPoint) -> CylinderPoint {
    CylinderPoint {
        u: wrap_unit_upper(p.phi / TAU),
        v: (PI * p.r * p.r).min(1.0),
    }
}

pub fn cylinder_to_disk(p: CylinderPoint) -> DiskPoint {
    DiskPoint {
        r: (p.v / PI).sqrt(),
        phi: TAU * p.u,
    }
}

/// The cylinder reflection `(u, v) ↦ (g − u, v)`.
pub fn reflect_u(g: CirclePoint, p: CylinderPoint) -> CylinderPoint {
    CylinderPoint {
        u: wrap_unit_upper(g.value() - p.u),
        v: p.v,
    }
}

/// The cylinder rotation `(u, v) ↦ (u + h, v)`.
pub fn rotate_u(h: CirclePoint, p: CylinderPoint) -> CylinderPoint {
    CylinderPoint {
        u: wrap_unit_upper(p.u + h.value()),
        v: p.v,
    }
}
