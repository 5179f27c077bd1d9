//! Finite unions of half-open arcs on `S¹ = ℝ/ℤ`.
//!
//! A [`CircleSet`] is kept in canonical form: a sorted list of disjoint,
//! non-adjacent intervals `[a, b)` with `0 ≤ a < b ≤ 1`. An arc that runs
//! over the wrap point is stored as two pieces `[a, 1)` and `[0, b)`; the two
//! are not merged, so equal sets always have identical representations.
//!
//! The reflection overlap `f(g) = λ(S ∩ (g − S))` is the self-convolution of
//! the indicator of `S`. For a union of intervals it is piecewise linear with
//! kinks only at sums of two endpoints (mod 1), so [`OverlapProfile`] holds it
//! exactly and its mean and maximum come out without sampling.

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geometry::{wrap_unit, CirclePoint};

/// Absolute tolerance for endpoint comparisons in the set algebra.
pub const SET_EPS: f64 = 1e-12;

/// Half-open arc `[start, start + length)` on the circle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Arc {
    start: CirclePoint,
    length: f64,
}

impl Arc {
    pub fn new(start: f64, length: f64) -> Result<Arc> {
        if !(length > 0.0 && length <= 1.0) {
            return Err(Error::InvalidParameter {
                name: "length",
                value: length,
                reason: "arc length must lie in (0, 1]".into(),
            });
        }
        Ok(Arc {
            start: CirclePoint::new(start),
            length,
        })
    }

    pub fn full() -> Arc {
        Arc {
            start: CirclePoint::new(0.0),
            length: 1.0,
        }
    }

    pub fn start(&self) -> CirclePoint {
        self.start
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn contains(&self, x: f64) -> bool {
        wrap_unit(x - self.start.value()) < self.length
    }

    /// `λ(I ∩ (g − I))` for this arc `I`, in closed form.
    ///
    /// `g − I` is an arc of the same length starting at `g − s − w`, so the
    /// overlap only depends on the offset `d = g − 2s − w (mod 1)` between
    /// the two starts.
    pub fn reflection_overlap(&self, g: f64) -> f64 {
        let w = self.length;
        let d = wrap_unit(g - 2.0 * self.start.value() - w);
        (w - d).max(0.0) + (w - (1.0 - d)).max(0.0)
    }

    /// Pieces of the arc inside `[0, 1]`.
    fn pieces(&self) -> impl Iterator<Item = (f64, f64)> {
        let a = self.start.value();
        let b = a + self.length;
        let (first, second) = if self.length >= 1.0 - SET_EPS {
            ((0.0, 1.0), None)
        } else if b <= 1.0 {
            ((a, b), None)
        } else {
            ((a, 1.0), Some((0.0, b - 1.0)))
        };
        std::iter::once(first).chain(second)
    }
}

/// Canonical finite union of arcs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CircleSet {
    intervals: Vec<(f64, f64)>,
}

impl CircleSet {
    pub fn empty() -> CircleSet {
        CircleSet::default()
    }

    pub fn full() -> CircleSet {
        CircleSet {
            intervals: vec![(0.0, 1.0)],
        }
    }

    /// Canonical form of an arbitrary list of arcs.
    pub fn normalize<I: IntoIterator<Item = Arc>>(arcs: I) -> CircleSet {
        Self::from_intervals(arcs.into_iter().flat_map(|a| a.pieces()).collect())
    }

    /// Builds a set from `(start, length)` pairs.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<CircleSet> {
        let arcs = pairs
            .iter()
            .map(|&(s, l)| Arc::new(s, l))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::normalize(arcs))
    }

    fn from_intervals(mut intervals: Vec<(f64, f64)>) -> CircleSet {
        for iv in intervals.iter_mut() {
            if iv.0 < SET_EPS {
                iv.0 = 0.0;
            }
            if iv.1 > 1.0 - SET_EPS {
                iv.1 = 1.0;
            }
        }
        intervals.retain(|&(a, b)| b - a > SET_EPS);
        intervals.sort_by(|x, y| x.0.total_cmp(&y.0));

        let mut merged: Vec<(f64, f64)> = Vec::with_capacity(intervals.len());
        for (a, b) in intervals {
            match merged.last_mut() {
                Some(last) if a <= last.1 + SET_EPS => last.1 = last.1.max(b),
                _ => merged.push((a, b)),
            }
        }
        CircleSet { intervals: merged }
    }

    pub fn arcs(&self) -> Vec<Arc> {
        self.intervals
            .iter()
            .map(|&(a, b)| Arc {
                start: CirclePoint::new(a),
                length: b - a,
            })
            .collect()
    }

    /// Canonical intervals `[a, b)` with `0 ≤ a < b ≤ 1`.
    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(|&(a, b)| b - a).sum()
    }

    pub fn contains(&self, x: f64) -> bool {
        let x = wrap_unit(x);
        let idx = self.intervals.partition_point(|&(a, _)| a <= x);
        idx > 0 && x < self.intervals[idx - 1].1
    }

    pub fn intersect(&self, other: &CircleSet) -> CircleSet {
        let (xs, ys) = (&self.intervals, &other.intervals);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < xs.len() && j < ys.len() {
            let lo = xs[i].0.max(ys[j].0);
            let hi = xs[i].1.min(ys[j].1);
            if hi > lo {
                out.push((lo, hi));
            }
            if xs[i].1 < ys[j].1 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Self::from_intervals(out)
    }

    pub fn union(&self, other: &CircleSet) -> CircleSet {
        let mut all = self.intervals.clone();
        all.extend_from_slice(&other.intervals);
        Self::from_intervals(all)
    }

    pub fn complement(&self) -> CircleSet {
        let mut out = Vec::with_capacity(self.intervals.len() + 1);
        let mut cursor = 0.0;
        for &(a, b) in &self.intervals {
            if a > cursor {
                out.push((cursor, a));
            }
            cursor = b;
        }
        if cursor < 1.0 {
            out.push((cursor, 1.0));
        }
        Self::from_intervals(out)
    }

    /// `S + h`.
    pub fn translate(&self, h: CirclePoint) -> CircleSet {
        Self::normalize(self.intervals.iter().map(|&(a, b)| Arc {
            start: CirclePoint::new(a + h.value()),
            length: b - a,
        }))
    }

    /// `g − S`; the image of `[a, b)` is `(g − b, g − a]`, taken half-open
    /// since endpoints carry no measure.
    pub fn reflect(&self, g: CirclePoint) -> CircleSet {
        Self::normalize(self.intervals.iter().map(|&(a, b)| Arc {
            start: CirclePoint::new(g.value() - b),
            length: b - a,
        }))
    }

    /// `λ(S ∩ (g − S))`, by set algebra.
    pub fn reflection_overlap(&self, g: CirclePoint) -> f64 {
        self.intersect(&self.reflect(g)).measure()
    }

    pub fn overlap_profile(&self) -> OverlapProfile {
        OverlapProfile::of(self)
    }

    /// `∫ f(g) dg`, which equals `λ(S)²`.
    pub fn mean_overlap(&self) -> f64 {
        self.overlap_profile().mean()
    }

    /// Largest reflection overlap and a reflection attaining it.
    ///
    /// Requires `0 < λ(S) < 1`; for such sets the maximum is strictly
    /// greater than `λ(S)²`.
    pub fn max_overlap(&self) -> Result<(CirclePoint, f64)> {
        let m = self.measure();
        if m <= SET_EPS || m >= 1.0 - SET_EPS {
            return Err(Error::Hypothesis(format!(
                "maximal overlap needs 0 < measure < 1, got {m}"
            )));
        }
        Ok(self.overlap_profile().max())
    }

    /// Largest subset invariant under rotation by `p/q`:
    /// `⋂_{n<q} (S + n·p/q)`.
    pub fn rotation_invariant_part(&self, p: u32, q: u32) -> Result<CircleSet> {
        if q < 2 {
            return Err(Error::InvalidParameter {
                name: "q",
                value: q as f64,
                reason: "rotation denominator must be at least 2".into(),
            });
        }
        if p == 0 || p >= q || gcd(p, q) != 1 {
            return Err(Error::InvalidParameter {
                name: "p",
                value: p as f64,
                reason: format!("need 0 < p < {q} and gcd(p, {q}) = 1"),
            });
        }
        let mut part = self.clone();
        for n in 1..q {
            if part.is_empty() {
                break;
            }
            let shift = CirclePoint::new(((n * p) % q) as f64 / q as f64);
            part = part.intersect(&self.translate(shift));
        }
        Ok(part)
    }
}

pub(crate) fn gcd(mut a: u32, mut b: u32) -> u32 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Serialize for CircleSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.intervals.iter().map(|&(a, b)| [a, b - a]).collect();
        pairs.serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CircleSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs: Vec<(f64, f64)> = Vec::deserialize(deserializer)?;
        CircleSet::from_pairs(&pairs).map_err(serde::de::Error::custom)
    }
}

/// Overlap of `[a, b)` with the reflection `g − [c, d)`, as an exact function
/// of `g ∈ [0, 1)`. Both intervals lie in `[0, 1]`, so only the shifts
/// `n ∈ {-1, 0, 1, 2}` of the reflected interval can reach `[a, b)`.
fn pair_overlap(a: f64, b: f64, c: f64, d: f64, g: f64) -> f64 {
    (-1..=2)
        .map(|n| {
            let t = g + n as f64;
            (b.min(t - c) - a.max(t - d)).max(0.0)
        })
        .sum()
}

/// Exact piecewise-linear reflection-overlap function `g ↦ λ(S ∩ (g − S))`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OverlapProfile {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
}

impl OverlapProfile {
    fn of(set: &CircleSet) -> OverlapProfile {
        let ivs = set.intervals();
        let endpoints: Vec<f64> = ivs.iter().flat_map(|&(a, b)| [a, b]).collect();

        let mut breakpoints = vec![0.0];
        for &x in &endpoints {
            for &y in &endpoints {
                breakpoints.push(wrap_unit(x + y));
            }
        }
        breakpoints.sort_by(f64::total_cmp);
        breakpoints.dedup();

        let values = breakpoints
            .iter()
            .map(|&g| {
                let mut f = 0.0;
                for &(a, b) in ivs {
                    for &(c, d) in ivs {
                        f += pair_overlap(a, b, c, d, g);
                    }
                }
                f
            })
            .collect();
        OverlapProfile {
            breakpoints,
            values,
        }
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn eval(&self, g: CirclePoint) -> f64 {
        let g = g.value();
        let i = self.breakpoints.partition_point(|&x| x <= g) - 1;
        let (x0, y0) = (self.breakpoints[i], self.values[i]);
        let (x1, y1) = match self.breakpoints.get(i + 1) {
            Some(&x) => (x, self.values[i + 1]),
            None => (1.0, self.values[0]),
        };
        if x1 - x0 <= 0.0 {
            return y0;
        }
        y0 + (y1 - y0) * (g - x0) / (x1 - x0)
    }

    /// Integral over the circle; the trapezoid rule is exact between kinks.
    pub fn mean(&self) -> f64 {
        let n = self.breakpoints.len();
        (0..n)
            .map(|i| {
                let (x1, y1) = if i + 1 < n {
                    (self.breakpoints[i + 1], self.values[i + 1])
                } else {
                    (1.0, self.values[0])
                };
                0.5 * (x1 - self.breakpoints[i]) * (self.values[i] + y1)
            })
            .sum()
    }

    /// Maximum value and the first breakpoint attaining it.
    pub fn max(&self) -> (CirclePoint, f64) {
        let mut best = 0;
        for (i, &v) in self.values.iter().enumerate() {
            if v > self.values[best] {
                best = i;
            }
        }
        (CirclePoint::new(self.breakpoints[best]), self.values[best])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn set(pairs: &[(f64, f64)]) -> CircleSet {
        CircleSet::from_pairs(pairs).unwrap()
    }

    fn cp(x: f64) -> CirclePoint {
        CirclePoint::new(x)
    }

    /// Midpoint-grid count of `x ∈ S ∧ g − x ∈ S`.
    fn brute_overlap(s: &CircleSet, g: f64, n: usize) -> f64 {
        let hits = (0..n)
            .filter(|&i| {
                let x = (i as f64 + 0.5) / n as f64;
                s.contains(x) && s.contains(g - x)
            })
            .count();
        hits as f64 / n as f64
    }

    #[test]
    fn normalize_splits_at_the_wrap_point() {
        let s = set(&[(0.9, 0.2)]);
        assert_eq!(s.intervals().len(), 2);
        assert!((s.intervals()[0].0 - 0.0).abs() < 1e-15);
        assert!((s.intervals()[0].1 - 0.1).abs() < 1e-12);
        assert_eq!(s.intervals()[1], (0.9, 1.0));
        assert!((s.measure() - 0.2).abs() < 1e-12);
    }

    #[test]
    fn normalize_merges_adjacent_arcs() {
        let s = set(&[(0.0, 0.3), (0.3, 0.2)]);
        assert_eq!(s.intervals(), &[(0.0, 0.5)]);
        assert_eq!(CircleSet::normalize([]), CircleSet::empty());
        assert_eq!(CircleSet::empty().measure(), 0.0);
    }

    #[test]
    fn measures() {
        assert_eq!(set(&[(0.0, 0.5)]).measure(), 0.5);
        assert_eq!(set(&[(0.25, 1.0)]).measure(), 1.0);
        assert!((set(&[(0.0, 0.1), (0.5, 0.2)]).measure() - 0.3).abs() < 1e-15);
    }

    #[test]
    fn set_operation_examples() {
        let half = set(&[(0.0, 0.5)]);
        assert_eq!(half.intersect(&set(&[(0.25, 0.5)])), set(&[(0.25, 0.25)]));
        assert_eq!(half.complement(), set(&[(0.5, 0.5)]));
        assert_eq!(half.reflect(cp(0.5)), half);
        assert_eq!(half.translate(cp(0.5)), set(&[(0.5, 0.5)]));
    }

    #[test]
    fn reflection_overlap_examples() {
        let half = set(&[(0.0, 0.5)]);
        assert!((half.reflection_overlap(cp(0.5)) - 0.5).abs() < 1e-15);
        assert!(half.reflection_overlap(cp(0.0)).abs() < 1e-15);
        let got = half.reflection_overlap(cp(0.25));
        assert!((got - brute_overlap(&half, 0.25, 1_000_000)).abs() < 1e-6);
        assert!((got - 0.25).abs() < 1e-15);
    }

    #[test]
    fn semicircle_profile_is_a_triangle() {
        let half = set(&[(0.0, 0.5)]);
        let profile = half.overlap_profile();
        assert!((profile.eval(cp(0.5)) - 0.5).abs() < 1e-15);
        assert!(profile.eval(cp(0.0)).abs() < 1e-15);
        let n = 10_000;
        for i in 0..n {
            let g = i as f64 / n as f64;
            let brute = brute_overlap(&half, g, 20_000);
            assert!((profile.eval(cp(g)) - brute).abs() < 1e-4, "g = {g}");
        }
    }

    #[test]
    fn degenerate_profiles() {
        let full = CircleSet::full().overlap_profile();
        for g in [0.0, 0.1, 0.5, 0.99] {
            assert!((full.eval(cp(g)) - 1.0).abs() < 1e-15);
        }
        let empty = CircleSet::empty().overlap_profile();
        assert_eq!(empty.eval(cp(0.3)), 0.0);
        assert_eq!(empty.mean(), 0.0);
    }

    #[test]
    fn mean_overlap_examples() {
        assert!((set(&[(0.0, 0.5)]).mean_overlap() - 0.25).abs() < 1e-12);
        assert!((set(&[(0.0, 0.3)]).mean_overlap() - 0.09).abs() < 1e-12);
        assert!((set(&[(0.12, 0.15), (0.61, 0.25)]).mean_overlap() - 0.16).abs() < 1e-12);
    }

    #[test]
    fn max_overlap_examples() {
        let (g, v) = set(&[(0.0, 0.5)]).max_overlap().unwrap();
        assert_eq!((g.value(), v), (0.5, 0.5));

        let quarter = set(&[(0.0, 0.25)]);
        let (g, v) = quarter.max_overlap().unwrap();
        assert!((g.value() - 0.25).abs() < 1e-15 && (v - 0.25).abs() < 1e-15);
        let brute_max = (0..1000)
            .map(|i| brute_overlap(&quarter, i as f64 / 1000.0, 4000))
            .fold(0.0, f64::max);
        assert!((brute_max - v).abs() < 1e-3);

        assert!(matches!(
            CircleSet::full().max_overlap(),
            Err(Error::Hypothesis(_))
        ));
        assert!(CircleSet::empty().max_overlap().is_err());
    }

    #[test]
    fn rotation_invariant_part_examples() {
        let half = set(&[(0.0, 0.5)]);
        assert!(half.rotation_invariant_part(1, 2).unwrap().is_empty());
        // [0,1/2) ∩ [1/3,5/6) ∩ [2/3,7/6) = [1/3,1/2) ∩ ([2/3,1) ∪ [0,1/6)) = ∅
        assert!(half.rotation_invariant_part(1, 3).unwrap().is_empty());
        assert_eq!(
            CircleSet::full().rotation_invariant_part(2, 5).unwrap(),
            CircleSet::full()
        );
        // three evenly spaced arcs are fixed by the third-turn
        let spokes = set(&[(0.0, 0.1), (1.0 / 3.0, 0.1), (2.0 / 3.0, 0.1)]);
        let inv = spokes.rotation_invariant_part(1, 3).unwrap();
        assert!((inv.measure() - 0.3).abs() < 1e-12);

        assert!(half.rotation_invariant_part(1, 1).is_err());
        assert!(half.rotation_invariant_part(2, 4).is_err());
    }

    #[test]
    fn arc_closed_form_matches_set_algebra() {
        for &(s, w) in &[
            (0.0, 0.5),
            (0.3, 0.5),
            (0.9, 0.3),
            (0.2, 0.75),
            (0.6, 1.0 / 3.0),
        ] {
            let arc = Arc::new(s, w).unwrap();
            let as_set = CircleSet::normalize([arc]);
            for i in 0..200 {
                let g = i as f64 / 200.0 + 0.0013;
                let exact = as_set.reflection_overlap(cp(g));
                assert!((arc.reflection_overlap(g) - exact).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn json_is_an_array_of_pairs() {
        let s = set(&[(0.0, 0.1), (0.5, 0.25)]);
        let text = serde_json::to_string(&s).unwrap();
        assert_eq!(text, "[[0.0,0.1],[0.5,0.25]]");
        let back: CircleSet = serde_json::from_str("[[0.9, 0.2], [0.5, 0.25]]").unwrap();
        assert!((back.measure() - 0.45).abs() < 1e-12);
        assert!(serde_json::from_str::<CircleSet>("[[0.1, 1.5]]").is_err());
    }

    fn arb_set() -> impl Strategy<Value = CircleSet> {
        prop::collection::vec((0.0f64..1.0, 0.001f64..0.3), 0..8)
            .prop_map(|v| CircleSet::from_pairs(&v).unwrap())
    }

    proptest! {
        #[test]
        fn normalize_is_idempotent(s in arb_set()) {
            prop_assert_eq!(CircleSet::from_intervals(s.intervals.clone()), s.clone());
            // (start, length) form costs at most an ulp per endpoint
            let again = CircleSet::normalize(s.arcs());
            prop_assert_eq!(again.intervals.len(), s.intervals.len());
            for (x, y) in again.intervals.iter().zip(&s.intervals) {
                prop_assert!((x.0 - y.0).abs() <= 1e-15 && (x.1 - y.1).abs() <= 1e-15);
            }
        }

        #[test]
        fn measure_laws(s in arb_set(), h in 0.0f64..1.0) {
            prop_assert!((s.complement().measure() - (1.0 - s.measure())).abs() < 1e-12);
            prop_assert!((s.translate(cp(h)).measure() - s.measure()).abs() < 1e-12);
            prop_assert!((s.reflect(cp(h)).measure() - s.measure()).abs() < 1e-12);
        }

        #[test]
        fn averaging_identity(s in arb_set()) {
            let m = s.measure();
            prop_assert!((s.mean_overlap() - m * m).abs() <= 1e-12);
        }

        #[test]
        fn profile_matches_pointwise_overlap(s in arb_set(), gs in prop::collection::vec(0.0f64..1.0, 20)) {
            let profile = s.overlap_profile();
            for g in gs {
                prop_assert!((profile.eval(cp(g)) - s.reflection_overlap(cp(g))).abs() <= 1e-12);
            }
        }

        #[test]
        fn maximum_beats_the_square(s in arb_set()) {
            let m = s.measure();
            prop_assume!((0.05..=0.95).contains(&m));
            let (_, best) = s.max_overlap().unwrap();
            prop_assert!(best - m * m > 0.0);
        }

        #[test]
        fn overlap_is_symmetric_under_mirroring(s in arb_set(), g in 0.0f64..1.0) {
            let mirrored = s.reflect(cp(0.0));
            let lhs = s.reflection_overlap(cp(g));
            let rhs = mirrored.reflection_overlap(cp(-g));
            prop_assert!((lhs - rhs).abs() <= 1e-12);
        }
    }
}
