//! Curve families as alpha profiles.
//!
//! Under `F(r, φ) = (φ/2π, πr²)` one branch of a spiral becomes the graph of
//! a strictly increasing profile `v = α(u)` on `(0, ℓ/2]`, where `ℓ` is the
//! number of turns. The other branches are the same graph shifted by
//! `1/parts` in `u`, so the region between two neighbouring branches has the
//! arc `[α⁻¹(v), α⁻¹(v) + 1/parts)` as its section at height `v`.

use std::cmp::Ordering;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::circle_set::{Arc, CircleSet};
use crate::error::{Error, Result};
use crate::geometry::{cylinder_to_disk, disk_radius, disk_to_cylinder, CylinderPoint, DiskPoint};

/// Grid size for monotonicity and endpoint validation.
pub const VALIDATION_GRID: usize = 10_000;

const INVERSE_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Fermat,
    #[serde(alias = "sine_variant")]
    Sine,
    #[serde(alias = "ck_variant")]
    Ck,
    Custom,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Fermat => "fermat",
            Family::Sine => "sine",
            Family::Ck => "ck",
            Family::Custom => "custom",
        }
    }
}

fn default_turns() -> f64 {
    1.0
}

fn default_parts() -> u32 {
    2
}

/// Declarative description of a curve.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub family: Family,
    #[serde(default = "default_turns")]
    pub turns: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<u32>,
    #[serde(default = "default_parts")]
    pub parts: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<[f64; 2]>>,
}

impl CurveSpec {
    fn base(family: Family) -> CurveSpec {
        CurveSpec {
            family,
            turns: 1.0,
            lambda: None,
            k: None,
            parts: 2,
            samples: None,
        }
    }

    pub fn fermat(turns: f64) -> CurveSpec {
        CurveSpec {
            turns,
            ..Self::base(Family::Fermat)
        }
    }

    pub fn sine(lambda: f64) -> CurveSpec {
        CurveSpec {
            lambda: Some(lambda),
            ..Self::base(Family::Sine)
        }
    }

    pub fn ck(lambda: f64, k: u32) -> CurveSpec {
        CurveSpec {
            lambda: Some(lambda),
            k: Some(k),
            ..Self::base(Family::Ck)
        }
    }

    /// Custom profile from `(u, v)` samples; the turn count is read off the
    /// last abscissa (`ℓ = 2·u_last`).
    pub fn custom(samples: Vec<[f64; 2]>) -> CurveSpec {
        let turns = samples.last().map_or(1.0, |s| 2.0 * s[0]);
        CurveSpec {
            turns,
            samples: Some(samples),
            ..Self::base(Family::Custom)
        }
    }

    pub fn with_parts(mut self, parts: u32) -> CurveSpec {
        self.parts = parts;
        self
    }

    pub fn build(&self) -> Result<Curve> {
        if self.parts < 2 {
            return Err(Error::InvalidParameter {
                name: "parts",
                value: self.parts as f64,
                reason: "a symbol needs at least 2 parts".into(),
            });
        }
        let profile = match self.family {
            Family::Fermat => AlphaProfile::fermat(self.turns)?,
            Family::Sine => {
                self.require_one_turn()?;
                AlphaProfile::sine(self.require_lambda()?)?
            }
            Family::Ck => {
                self.require_one_turn()?;
                let k = self.k.ok_or_else(|| missing("k"))?;
                AlphaProfile::ck(self.require_lambda()?, k)?
            }
            Family::Custom => {
                let samples = self.samples.as_deref().ok_or_else(|| missing("samples"))?;
                let profile = AlphaProfile::table(samples)?;
                if (profile.turns - self.turns).abs() > 1e-9 {
                    return Err(Error::InvalidTable(format!(
                        "table spans {} turns but turns = {}",
                        profile.turns, self.turns
                    )));
                }
                profile
            }
        };
        Ok(Curve {
            spec: self.clone(),
            profile,
        })
    }

    fn require_lambda(&self) -> Result<f64> {
        self.lambda.ok_or_else(|| missing("lambda"))
    }

    fn require_one_turn(&self) -> Result<()> {
        if self.turns != 1.0 {
            return Err(Error::InvalidParameter {
                name: "turns",
                value: self.turns,
                reason: format!("the {} family is a one-turn curve", self.family.name()),
            });
        }
        Ok(())
    }
}

fn missing(name: &'static str) -> Error {
    Error::InvalidParameter {
        name,
        value: f64::NAN,
        reason: "required for this family".into(),
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    /// `α(u) = slope·u`
    Linear { slope: f64 },
    /// `α(u) = 2u + (λ/π) sin 8πu`
    Sine { lambda: f64 },
    /// `2u + λ u^{k+1} (1/4 − u)^{k+1}` on `[0, 1/4]`, continued by
    /// `α(u + 1/4) = α(u) + 1/2`.
    Ck { lambda: f64, k: u32 },
    /// Piecewise-linear interpolation of strictly increasing samples.
    Table { us: Vec<f64>, vs: Vec<f64> },
}

/// Monotone profile `v = α(u)` of one spiral branch on the cylinder.
#[derive(Debug, Clone, PartialEq)]
pub struct AlphaProfile {
    turns: f64,
    shape: Shape,
}

fn ck_bump(lambda: f64, k: u32, u: f64) -> f64 {
    let e = k as i32 + 1;
    2.0 * u + lambda * u.powi(e) * (0.25 - u).powi(e)
}

fn ck_bump_slope(lambda: f64, k: u32, u: f64) -> f64 {
    let (k, kf) = (k as i32, k as f64);
    2.0 + lambda * (kf + 1.0) * u.powi(k) * (0.25 - u).powi(k) * (0.25 - 2.0 * u)
}

impl AlphaProfile {
    /// `ℓ`-turn Fermat spiral `ℓπ²r² = φ`: `α(u) = (2/ℓ)·u`.
    pub fn fermat(turns: f64) -> Result<AlphaProfile> {
        if !(turns > 0.0 && turns.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "turns",
                value: turns,
                reason: "must be positive".into(),
            });
        }
        Ok(AlphaProfile {
            turns,
            shape: Shape::Linear { slope: 2.0 / turns },
        })
    }

    /// `π²r² = φ + λ sin 4φ`, for `0 < λ < 1/4`.
    pub fn sine(lambda: f64) -> Result<AlphaProfile> {
        if !(lambda > 0.0 && lambda < 0.25) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: lambda,
                reason: "sine variant needs 0 < lambda < 1/4".into(),
            });
        }
        Ok(AlphaProfile {
            turns: 1.0,
            shape: Shape::Sine { lambda },
        })
    }

    /// The `C^k` variant. `λ` is accepted only if the bump keeps a positive
    /// slope on a grid of `[0, 1/4]`; otherwise the first offending `u` is
    /// reported.
    pub fn ck(lambda: f64, k: u32) -> Result<AlphaProfile> {
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::InvalidParameter {
                name: "lambda",
                value: lambda,
                reason: "must be positive".into(),
            });
        }
        for i in 0..=VALIDATION_GRID {
            let u = 0.25 * i as f64 / VALIDATION_GRID as f64;
            if ck_bump_slope(lambda, k, u) <= 0.0 {
                return Err(Error::NotMonotone { u });
            }
        }
        Ok(AlphaProfile {
            turns: 1.0,
            shape: Shape::Ck { lambda, k },
        })
    }

    /// Piecewise-linear profile through `(u, v)` samples. The table must start
    /// at `(0, 0)`, end at `v = 1` and be strictly increasing in both
    /// coordinates.
    pub fn table(samples: &[[f64; 2]]) -> Result<AlphaProfile> {
        if samples.len() < 2 {
            return Err(Error::InvalidTable("need at least two samples".into()));
        }
        let first = samples[0];
        if first[0].abs() > 1e-12 || first[1].abs() > 1e-12 {
            return Err(Error::InvalidTable(format!(
                "table must start at (0, 0), got ({}, {})",
                first[0], first[1]
            )));
        }
        for w in samples.windows(2) {
            if w[1][0].partial_cmp(&w[0][0]) != Some(Ordering::Greater)
                || w[1][1].partial_cmp(&w[0][1]) != Some(Ordering::Greater)
            {
                return Err(Error::NotMonotone { u: w[1][0] });
            }
        }
        let last = samples[samples.len() - 1];
        if (last[1] - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidTable(format!(
                "table must end at v = 1, got {}",
                last[1]
            )));
        }
        let mut us: Vec<f64> = samples.iter().map(|s| s[0]).collect();
        let mut vs: Vec<f64> = samples.iter().map(|s| s[1]).collect();
        us[0] = 0.0;
        vs[0] = 0.0;
        *vs.last_mut().unwrap() = 1.0;
        Ok(AlphaProfile {
            turns: 2.0 * last[0],
            shape: Shape::Table { us, vs },
        })
    }

    pub fn turns(&self) -> f64 {
        self.turns
    }

    /// Right end `ℓ/2` of the profile's domain.
    pub fn domain_end(&self) -> f64 {
        0.5 * self.turns
    }

    pub fn is_table(&self) -> bool {
        matches!(self.shape, Shape::Table { .. })
    }

    /// `α(u)` for `u ∈ [0, ℓ/2]`. Closed forms extend past the domain;
    /// tables are clamped.
    pub fn eval(&self, u: f64) -> f64 {
        match &self.shape {
            Shape::Linear { slope } => slope * u,
            Shape::Sine { lambda } => 2.0 * u + lambda / PI * (8.0 * PI * u).sin(),
            Shape::Ck { lambda, k } => {
                if u <= 0.25 {
                    ck_bump(*lambda, *k, u)
                } else {
                    0.5 + ck_bump(*lambda, *k, u - 0.25)
                }
            }
            Shape::Table { us, vs } => interpolate(us, vs, u),
        }
    }

    /// The unique `u` with `α(u) = v`. Heights outside `(0, 1]` are clamped,
    /// so `v = 0` gives the limit point `u = 0`.
    pub fn inverse(&self, v: f64) -> f64 {
        if v <= 0.0 {
            return 0.0;
        }
        if v >= 1.0 {
            return self.domain_end();
        }
        match &self.shape {
            Shape::Linear { slope } => v / slope,
            Shape::Table { us, vs } => interpolate(vs, us, v),
            Shape::Ck { lambda, k } => {
                // each quarter of the domain carries half of the range
                if v <= 0.5 {
                    bisect(|u| ck_bump(*lambda, *k, u), v, 0.0, 0.25)
                } else {
                    0.25 + bisect(|u| ck_bump(*lambda, *k, u), v - 0.5, 0.0, 0.25)
                }
            }
            Shape::Sine { .. } => bisect(|u| self.eval(u), v, 0.0, self.domain_end()),
        }
    }
}

/// Piecewise-linear interpolation through increasing `xs`, clamped at the ends.
fn interpolate(xs: &[f64], ys: &[f64], x: f64) -> f64 {
    let n = xs.len();
    if x <= xs[0] {
        return ys[0];
    }
    if x >= xs[n - 1] {
        return ys[n - 1];
    }
    let i = xs.partition_point(|&t| t <= x) - 1;
    let t = (x - xs[i]) / (xs[i + 1] - xs[i]);
    ys[i] + t * (ys[i + 1] - ys[i])
}

/// Solves `f(u) = target` for increasing `f` on `[lo, hi]`.
fn bisect<F: Fn(f64) -> f64>(f: F, target: f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        if hi - lo <= INVERSE_TOL {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if f(mid) < target {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// A validated curve: its spec together with the profile of branch 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    spec: CurveSpec,
    profile: AlphaProfile,
}

impl Curve {
    pub fn spec(&self) -> &CurveSpec {
        &self.spec
    }

    pub fn profile(&self) -> &AlphaProfile {
        &self.profile
    }

    pub fn parts(&self) -> u32 {
        self.spec.parts
    }

    /// Section at height `v` of the region between branch 0 and branch 1.
    pub fn section_arc(&self, v: f64) -> Arc {
        Arc::new(self.profile.inverse(v), 1.0 / self.spec.parts as f64)
            .expect("parts >= 2 gives a valid arc length")
    }

    pub fn section(&self, v: f64) -> CircleSet {
        CircleSet::normalize([self.section_arc(v)])
    }

    /// Whether `p` lies in the region whose sections are [`Self::section`].
    pub fn contains(&self, p: DiskPoint) -> bool {
        let c = disk_to_cylinder(p);
        self.section_arc(c.v()).contains(c.u())
    }

    /// Point of branch `branch` at height `v ∈ (0, 1]`.
    pub fn point_at(&self, branch: u32, v: f64) -> Result<DiskPoint> {
        let u = self.profile.inverse(v) + branch as f64 / self.spec.parts as f64;
        Ok(cylinder_to_disk(CylinderPoint::new(u, v)?))
    }

    /// `n` points per branch at radii `R·j/n`, `j = 1..=n`, one list per
    /// branch. Branch `b` is branch 0 rotated by `2πb/parts`.
    pub fn beta_polyline(&self, n: usize) -> Result<Vec<Vec<DiskPoint>>> {
        if n < 2 {
            return Err(Error::InvalidParameter {
                name: "n",
                value: n as f64,
                reason: "need at least two samples per branch".into(),
            });
        }
        (0..self.spec.parts)
            .map(|b| {
                (1..=n)
                    .map(|j| {
                        let t = j as f64 / n as f64;
                        self.point_at(b, t * t)
                    })
                    .collect()
            })
            .collect()
    }
}

/// Chord and turning-angle bounds of a sampled branch.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Regularity {
    pub max_chord: f64,
    pub max_turn: f64,
}

pub fn polyline_regularity(points: &[DiskPoint]) -> Regularity {
    let xy: Vec<(f64, f64)> = points.iter().map(|p| p.to_xy()).collect();
    let chords: Vec<(f64, f64)> = xy
        .windows(2)
        .map(|w| (w[1].0 - w[0].0, w[1].1 - w[0].1))
        .collect();
    let max_chord = chords.iter().map(|c| c.0.hypot(c.1)).fold(0.0, f64::max);
    let max_turn = chords
        .windows(2)
        .map(|w| {
            let cross = w[0].0 * w[1].1 - w[0].1 * w[1].0;
            let dot = w[0].0 * w[1].0 + w[0].1 * w[1].1;
            cross.atan2(dot).abs()
        })
        .fold(0.0, f64::max);
    Regularity {
        max_chord: max_chord / disk_radius(),
        max_turn,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::CirclePoint;
    use std::f64::consts::TAU;

    fn grid(end: f64) -> impl Iterator<Item = f64> {
        (1..=VALIDATION_GRID).map(move |i| end * i as f64 / VALIDATION_GRID as f64)
    }

    #[test]
    fn fermat_profiles() {
        let one = AlphaProfile::fermat(1.0).unwrap();
        assert_eq!(one.eval(0.25), 0.5);
        assert_eq!(one.eval(0.5), 1.0);
        let two = AlphaProfile::fermat(2.0).unwrap();
        assert_eq!(two.eval(0.5), 0.5);
        assert_eq!(two.eval(1.0), 1.0);
        for u in grid(0.25) {
            assert!((one.eval(u + 0.25) - one.eval(u) - 0.5).abs() < 1e-15);
        }
        assert!(AlphaProfile::fermat(0.0).is_err());
        assert!(AlphaProfile::fermat(-1.0).is_err());
    }

    #[test]
    fn sine_profile() {
        let p = AlphaProfile::sine(0.1).unwrap();
        assert!((p.eval(0.125) - 0.25).abs() < 1e-15);
        for u in grid(0.25) {
            assert!((p.eval(u + 0.25) - p.eval(u) - 0.5).abs() < 1e-12);
        }
        assert!(AlphaProfile::sine(0.3).is_err());
        assert!(AlphaProfile::sine(0.25).is_err());
        assert!(AlphaProfile::sine(0.0).is_err());
    }

    #[test]
    fn ck_profile() {
        let p = AlphaProfile::ck(1.0, 0).unwrap();
        assert_eq!(p.eval(0.125), 0.265625);
        for k in 0..4 {
            let p = AlphaProfile::ck(2.0, k).unwrap();
            assert!((p.eval(0.25) - 0.5).abs() < 1e-15);
            assert!((p.eval(0.5) - 1.0).abs() < 1e-15);
            for u in grid(0.25) {
                assert!((p.eval(u + 0.25) - p.eval(u) - 0.5).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn ck_rejects_steep_bumps_with_a_witness() {
        // for k = 0 the slope 2 + λ(1/4 − 2u) first vanishes at u = 1/λ + 1/8
        match AlphaProfile::ck(9.0, 0) {
            Err(Error::NotMonotone { u }) => {
                assert!((u - (1.0 / 9.0 + 0.125)).abs() <= 0.25 / VALIDATION_GRID as f64);
                assert!(2.0 + 9.0 * (0.25 - 2.0 * u) <= 0.0);
            }
            other => panic!("expected rejection, got {other:?}"),
        }
        assert!(AlphaProfile::ck(7.9, 0).is_ok());
        assert!(AlphaProfile::ck(-1.0, 1).is_err());
    }

    #[test]
    fn ck_is_k_times_differentiable_at_the_seam() {
        // one-sided difference quotients of order ≤ k agree across u = 1/4
        let k = 2;
        let p = AlphaProfile::ck(50.0, k).unwrap();
        let h = 1e-4;
        let left = (p.eval(0.25) - p.eval(0.25 - h)) / h;
        let right = (p.eval(0.25 + h) - p.eval(0.25)) / h;
        assert!((left - right).abs() < 1e-3);
        let l2 = (p.eval(0.25) - 2.0 * p.eval(0.25 - h) + p.eval(0.25 - 2.0 * h)) / (h * h);
        let r2 = (p.eval(0.25 + 2.0 * h) - 2.0 * p.eval(0.25 + h) + p.eval(0.25)) / (h * h);
        assert!((l2 - r2).abs() < 1e-2);
    }

    #[test]
    fn profile_invariants_hold_for_every_family() {
        let profiles = [
            AlphaProfile::fermat(1.0).unwrap(),
            AlphaProfile::fermat(2.0).unwrap(),
            AlphaProfile::fermat(1.5).unwrap(),
            AlphaProfile::sine(0.2).unwrap(),
            AlphaProfile::ck(3.0, 1).unwrap(),
            AlphaProfile::table(&[[0.0, 0.0], [0.2, 0.3], [0.5, 1.0]]).unwrap(),
        ];
        for p in &profiles {
            assert!(p.eval(0.0).abs() < 1e-15);
            assert!((p.eval(p.domain_end()) - 1.0).abs() < 1e-12);
            let mut prev = 0.0;
            for u in grid(p.domain_end()) {
                let v = p.eval(u);
                assert!(v > prev, "{p:?} not increasing at {u}");
                prev = v;
            }
        }
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(AlphaProfile::fermat(1.0).unwrap().inverse(0.5), 0.25);
        assert_eq!(AlphaProfile::fermat(2.0).unwrap().inverse(0.7), 0.7);
        let s = AlphaProfile::sine(0.1).unwrap();
        assert!((s.inverse(s.eval(0.2)) - 0.2).abs() < 1e-10);
        let c = AlphaProfile::ck(5.0, 2).unwrap();
        for u in [0.01, 0.2, 0.25, 0.31, 0.49] {
            let v = c.eval(u);
            assert!((c.eval(c.inverse(v)) - v).abs() < 1e-12);
        }
        let t = AlphaProfile::table(&[[0.0, 0.0], [0.25, 0.75], [0.5, 1.0]]).unwrap();
        assert_eq!(t.inverse(0.375), 0.125);
        assert_eq!(t.inverse(0.875), 0.375);
    }

    #[test]
    fn table_validation() {
        assert!(AlphaProfile::table(&[[0.0, 0.0]]).is_err());
        assert!(AlphaProfile::table(&[[0.1, 0.0], [0.5, 1.0]]).is_err());
        assert!(AlphaProfile::table(&[[0.0, 0.0], [0.5, 0.9]]).is_err());
        assert!(matches!(
            AlphaProfile::table(&[[0.0, 0.0], [0.3, 0.6], [0.2, 0.7], [0.5, 1.0]]),
            Err(Error::NotMonotone { .. })
        ));
        assert!(AlphaProfile::table(&[[0.0, 0.0], [0.3, 0.6], [0.4, 0.6], [0.5, 1.0]]).is_err());
        let two_turns = AlphaProfile::table(&[[0.0, 0.0], [1.0, 1.0]]).unwrap();
        assert_eq!(two_turns.turns(), 2.0);
    }

    #[test]
    fn sections() {
        let fermat = CurveSpec::fermat(1.0).build().unwrap();
        let s = fermat.section(1e-300);
        assert_eq!(s.intervals(), &[(0.0, 0.5)]);
        assert_eq!(fermat.section(0.5).intervals(), &[(0.25, 0.75)]);

        let three = CurveSpec::fermat(1.0).with_parts(3).build().unwrap();
        let arc = three.section_arc(0.5);
        assert_eq!(arc.start().value(), 0.25);
        assert!((arc.length() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn membership() {
        let fermat = CurveSpec::fermat(1.0).build().unwrap();
        let inside = cylinder_to_disk(CylinderPoint::new(0.5, 0.5).unwrap());
        let outside = cylinder_to_disk(CylinderPoint::new(0.9, 0.5).unwrap());
        assert!(fermat.contains(inside));
        assert!(!fermat.contains(outside));
    }

    #[test]
    fn half_turn_swaps_membership() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let curves = [
            CurveSpec::fermat(1.0).build().unwrap(),
            CurveSpec::fermat(2.0).build().unwrap(),
            CurveSpec::sine(0.2).build().unwrap(),
            CurveSpec::ck(4.0, 1).build().unwrap(),
        ];
        for curve in &curves {
            for _ in 0..20_000 {
                let r = (rng.random::<f64>() / PI).sqrt().max(1e-9);
                let p = DiskPoint::new(r, TAU * rng.random::<f64>()).unwrap();
                let q = p.rotate(CirclePoint::new(0.5));
                assert_ne!(curve.contains(p), curve.contains(q));
            }
        }
    }

    #[test]
    fn contains_agrees_with_sections() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        let curve = CurveSpec::sine(0.15).with_parts(3).build().unwrap();
        for _ in 0..100_000 {
            let (u, v) = (rng.random::<f64>(), rng.random::<f64>().max(1e-12));
            let c = CylinderPoint::new(u, v).unwrap();
            let p = cylinder_to_disk(c);
            let back = disk_to_cylinder(p);
            assert_eq!(
                curve.contains(p),
                curve.section(back.v()).contains(back.u())
            );
        }
    }

    #[test]
    fn polyline_endpoints_and_samples() {
        let fermat = CurveSpec::fermat(1.0).build().unwrap();
        let branches = fermat.beta_polyline(64).unwrap();
        assert_eq!(branches.len(), 2);
        let end = branches[0].last().unwrap();
        assert!((end.r() - disk_radius()).abs() < 1e-12 && (end.phi() - PI).abs() < 1e-12);
        let end2 = branches[1].last().unwrap();
        assert!((end2.phi() - TAU).abs() < 1e-12);

        let mid = fermat.point_at(0, 0.5).unwrap();
        assert!((mid.r() - 1.0 / TAU.sqrt()).abs() < 1e-12);
        assert!((mid.phi() - PI / 2.0).abs() < 1e-12);

        assert!(fermat.beta_polyline(1).is_err());
    }

    #[test]
    fn polyline_points_satisfy_polar_equations() {
        let fermat = CurveSpec::fermat(1.0).build().unwrap();
        for p in &fermat.beta_polyline(500).unwrap()[0] {
            assert!((PI * PI * p.r() * p.r() - p.phi()).abs() < 1e-10);
        }
        // two turns: 2π²r² = φ up to a whole revolution
        let two = CurveSpec::fermat(2.0).build().unwrap();
        for p in &two.beta_polyline(500).unwrap()[0] {
            let d = (2.0 * PI * PI * p.r() * p.r() - p.phi()).rem_euclid(TAU);
            assert!(d.min(TAU - d) < 1e-10);
        }
        let sine = CurveSpec::sine(0.1).build().unwrap();
        for p in &sine.beta_polyline(500).unwrap()[0] {
            let phi = p.phi();
            assert!((PI * PI * p.r() * p.r() - phi - 0.1 * (4.0 * phi).sin()).abs() < 1e-10);
        }
    }

    #[test]
    fn polylines_are_regular() {
        for spec in [
            CurveSpec::fermat(1.0),
            CurveSpec::sine(0.2),
            CurveSpec::ck(2.0, 2),
        ] {
            let curve = spec.build().unwrap();
            for branch in curve.beta_polyline(4000).unwrap() {
                let reg = polyline_regularity(&branch);
                assert!(reg.max_chord < 0.01, "{reg:?}");
                assert!(reg.max_turn < 0.1, "{reg:?}");
            }
        }
    }

    #[test]
    fn spec_json_round_trip() {
        let spec = CurveSpec::ck(1.5, 2).with_parts(3);
        let text = serde_json::to_string(&spec).unwrap();
        assert_eq!(
            text,
            r#"{"family":"ck","turns":1.0,"lambda":1.5,"k":2,"parts":3}"#
        );
        assert_eq!(serde_json::from_str::<CurveSpec>(&text).unwrap(), spec);

        let legacy: CurveSpec =
            serde_json::from_str(r#"{"family":"sine_variant","lambda":0.1}"#).unwrap();
        assert_eq!(legacy, CurveSpec::sine(0.1));

        let custom: CurveSpec =
            serde_json::from_str(r#"{"family":"custom","samples":[[0,0],[0.5,1]]}"#).unwrap();
        assert!(custom.build().is_ok());
    }

    #[test]
    fn build_rejects_bad_specs() {
        assert!(CurveSpec::fermat(1.0).with_parts(1).build().is_err());
        let mut sine = CurveSpec::sine(0.1);
        sine.turns = 2.0;
        assert!(sine.build().is_err());
        let mut ck = CurveSpec::ck(1.0, 0);
        ck.k = None;
        assert!(ck.build().is_err());
        let mut custom = CurveSpec::custom(vec![[0.0, 0.0], [0.5, 1.0]]);
        custom.turns = 2.0;
        assert!(custom.build().is_err());
    }
}
