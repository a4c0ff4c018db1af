//! Year-indexed series and the transforms used throughout the pipeline:
//! differencing, integration, growth rates and growth-path compounding.

use serde::Serialize;

use crate::error::{Error, Result};

/// How the values of a series should be read. Advisory only; arithmetic
/// never checks it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum UnitTag {
    /// Money amounts, millions of currency units.
    #[default]
    Level,
    /// Dimensionless fractions (0.0763 for 7.63%).
    Rate,
}

/// A contiguous run of annual observations.
///
/// Construction rejects empty and non-finite input, so every value held by
/// an `AnnualSeries` is a finite `f64` and years have no gaps.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AnnualSeries {
    start_year: i32,
    values: Vec<f64>,
    unit: UnitTag,
}

impl AnnualSeries {
    pub fn new(start_year: i32, values: Vec<f64>, unit: UnitTag) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::insufficient("annual series", 1, 0));
        }
        if let Some(index) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self {
            start_year,
            values,
            unit,
        })
    }

    /// Level-tagged series.
    pub fn levels(start_year: i32, values: Vec<f64>) -> Result<Self> {
        Self::new(start_year, values, UnitTag::Level)
    }

    /// Rate-tagged series.
    pub fn rates(start_year: i32, values: Vec<f64>) -> Result<Self> {
        Self::new(start_year, values, UnitTag::Rate)
    }

    pub fn start_year(&self) -> i32 {
        self.start_year
    }

    /// Last covered year (inclusive).
    pub fn end_year(&self) -> i32 {
        self.start_year + self.values.len() as i32 - 1
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn unit(&self) -> UnitTag {
        self.unit
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    /// Always false; kept for API symmetry with collections.
    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn years(&self) -> impl Iterator<Item = i32> + '_ {
        (0..self.values.len()).map(move |i| self.start_year + i as i32)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        self.years().zip(self.values.iter().copied())
    }

    pub fn get(&self, year: i32) -> Option<f64> {
        let offset = year.checked_sub(self.start_year)?;
        if offset < 0 {
            return None;
        }
        self.values.get(offset as usize).copied()
    }

    pub fn last(&self) -> f64 {
        self.values[self.values.len() - 1]
    }

    pub fn with_unit(mut self, unit: UnitTag) -> Self {
        self.unit = unit;
        self
    }

    /// Sub-series covering `from..=to`; both years must lie inside the series.
    pub fn window(&self, from: i32, to: i32) -> Result<Self> {
        if from > to || from < self.start_year || to > self.end_year() {
            return Err(Error::Alignment(format!(
                "window {from}..={to} is outside {}..={}",
                self.start_year,
                self.end_year()
            )));
        }
        let lo = (from - self.start_year) as usize;
        let hi = (to - self.start_year) as usize;
        Ok(Self {
            start_year: from,
            values: self.values[lo..=hi].to_vec(),
            unit: self.unit,
        })
    }

    /// Δᵈ of the series. `d = 0` returns a copy.
    pub fn difference(&self, d: usize) -> Result<Self> {
        if self.len() <= d {
            return Err(Error::insufficient(
                format!("differencing of order {d}"),
                d + 1,
                self.len(),
            ));
        }
        let mut values = self.values.clone();
        for _ in 0..d {
            values = values.windows(2).map(|w| w[1] - w[0]).collect();
        }
        Ok(Self {
            start_year: self.start_year + d as i32,
            values,
            unit: self.unit,
        })
    }

    /// Undo `order` rounds of differencing on this series of differences.
    /// `anchors` must hold the first `order` values of the original series.
    pub fn integrate(&self, order: usize, anchors: &[f64]) -> Result<Self> {
        if anchors.len() != order {
            return Err(Error::Arity {
                what: "integration anchors".into(),
                expected: order,
                got: anchors.len(),
            });
        }
        integrate(
            self.start_year - anchors.len() as i32,
            &self.values,
            anchors,
        )
        .map(|s| s.with_unit(self.unit))
    }

    /// Year-on-year growth, `sₜ/sₜ₋₁ − 1`.
    pub fn pct_change(&self) -> Result<Self> {
        if self.len() < 2 {
            return Err(Error::insufficient("growth rates", 2, self.len()));
        }
        let mut out = Vec::with_capacity(self.len() - 1);
        for (i, w) in self.values.windows(2).enumerate() {
            if w[0] == 0.0 {
                return Err(Error::DivisionByZero {
                    year: self.start_year + i as i32,
                });
            }
            out.push(w[1] / w[0] - 1.0);
        }
        Self::rates(self.start_year + 1, out)
    }

    /// Element-wise `a·self + b·other` on identically indexed series.
    pub fn linear_combination(&self, a: f64, other: &Self, b: f64) -> Result<Self> {
        check_same_years(self, other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(x, y)| a * x + b * y)
            .collect();
        Self::new(self.start_year, values, self.unit)
    }
}

/// Rebuild a series from its `d`-th differences, where `d = anchors.len()`
/// and `anchors` are the first `d` values of the original series.
///
/// `first_year` is the year of the first anchor. With `d = 0` the differences
/// are returned as-is; an empty `diffs` returns just the anchors.
pub fn integrate(first_year: i32, diffs: &[f64], anchors: &[f64]) -> Result<AnnualSeries> {
    let d = anchors.len();
    if d == 0 {
        return AnnualSeries::levels(first_year, diffs.to_vec());
    }
    // initial value of each intermediate difference order, from the anchors
    let mut inits = Vec::with_capacity(d);
    let mut level = anchors.to_vec();
    for _ in 0..d {
        inits.push(level[0]);
        level = level.windows(2).map(|w| w[1] - w[0]).collect();
    }
    let mut current = diffs.to_vec();
    for k in (0..d).rev() {
        let mut next = Vec::with_capacity(current.len() + 1);
        let mut acc = inits[k];
        next.push(acc);
        for v in &current {
            acc += v;
            next.push(acc);
        }
        current = next;
    }
    // The reconstruction from anchor differences can drift by rounding;
    // pin the anchors themselves exactly.
    current[..d].copy_from_slice(anchors);
    AnnualSeries::levels(first_year, current)
}

/// A sequence of annual growth rates starting at `start_year`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowthPath {
    start_year: i32,
    rates: Vec<f64>,
}

impl GrowthPath {
    pub fn new(start_year: i32, rates: Vec<f64>) -> Result<Self> {
        if rates.is_empty() {
            return Err(Error::insufficient("growth path", 1, 0));
        }
        for (index, &rate) in rates.iter().enumerate() {
            if !rate.is_finite() {
                return Err(Error::NonFinite { index });
            }
            if rate <= -1.0 {
                return Err(Error::InvalidRate { index, rate });
            }
        }
        Ok(Self { start_year, rates })
    }

    pub fn start_year(&self) -> i32 {
        self.start_year
    }

    pub fn rates(&self) -> &[f64] {
        &self.rates
    }

    pub fn len(&self) -> usize {
        self.rates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rates.is_empty()
    }

    pub fn end_year(&self) -> i32 {
        self.start_year + self.rates.len() as i32 - 1
    }
}

/// Compound `base_level` along `path`: value `k` is
/// `base_level · Π_{j≤k}(1 + rate_j)`.
pub fn apply_growth_path(base_level: f64, path: &GrowthPath) -> Result<AnnualSeries> {
    if !base_level.is_finite() {
        return Err(Error::NonFinite { index: 0 });
    }
    let mut level = base_level;
    let values = path
        .rates
        .iter()
        .map(|r| {
            level *= 1.0 + r;
            level
        })
        .collect();
    AnnualSeries::levels(path.start_year, values)
}

pub(crate) fn check_same_years(a: &AnnualSeries, b: &AnnualSeries) -> Result<()> {
    if a.start_year != b.start_year || a.len() != b.len() {
        return Err(Error::Alignment(format!(
            "series cover {}..={} and {}..={}",
            a.start_year,
            a.end_year(),
            b.start_year,
            b.end_year()
        )));
    }
    Ok(())
}

/// Trim both series to their common span of years.
pub fn align(a: &AnnualSeries, b: &AnnualSeries) -> Result<(AnnualSeries, AnnualSeries)> {
    let from = a.start_year.max(b.start_year);
    let to = a.end_year().min(b.end_year());
    if from > to {
        return Err(Error::Alignment(format!(
            "no overlapping years between {}..={} and {}..={}",
            a.start_year,
            a.end_year(),
            b.start_year,
            b.end_year()
        )));
    }
    Ok((a.window(from, to)?, b.window(from, to)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(v: &[f64]) -> AnnualSeries {
        AnnualSeries::levels(2000, v.to_vec()).unwrap()
    }

    #[test]
    fn difference_examples() {
        let d1 = s(&[10.0, 12.0, 15.0, 19.0]).difference(1).unwrap();
        assert_eq!(d1.values(), &[2.0, 3.0, 4.0]);
        assert_eq!(d1.start_year(), 2001);
        assert_eq!(s(&[5.0, 5.0, 5.0]).difference(1).unwrap().values(), &[0.0, 0.0]);
        let d2 = s(&[1.0, 3.0, 6.0, 10.0]).difference(2).unwrap();
        assert_eq!(d2.values(), &[1.0, 1.0]);
        assert_eq!(d2.start_year(), 2002);
        let d0 = s(&[1.0, 3.0]).difference(0).unwrap();
        assert_eq!(d0, s(&[1.0, 3.0]));
    }

    #[test]
    fn difference_needs_more_than_d_values() {
        let err = s(&[1.0, 2.0]).difference(2).unwrap_err();
        assert!(matches!(err, Error::InsufficientData { .. }));
    }

    #[test]
    fn integrate_examples() {
        let out = integrate(2000, &[2.0, 3.0, 4.0], &[10.0]).unwrap();
        assert_eq!(out.values(), &[10.0, 12.0, 15.0, 19.0]);
        assert_eq!(integrate(2000, &[], &[7.0]).unwrap().values(), &[7.0]);
        let out = integrate(2000, &[1.0, 1.0], &[1.0, 3.0]).unwrap();
        assert_eq!(out.values(), &[1.0, 3.0, 6.0, 10.0]);
    }

    #[test]
    fn integrate_method_checks_anchor_arity_through_years() {
        let diffs = s(&[10.0, 12.0, 15.0, 19.0]).difference(1).unwrap();
        let back = diffs.integrate(1, &[10.0]).unwrap();
        assert!(matches!(diffs.integrate(2, &[10.0]), Err(Error::Arity { .. })));
        assert_eq!(back.start_year(), 2000);
        assert_eq!(back.values(), &[10.0, 12.0, 15.0, 19.0]);
    }

    #[test]
    fn pct_change_examples() {
        let g = s(&[100.0, 110.0]).pct_change().unwrap();
        assert!((g.values()[0] - 0.10).abs() < 1e-15);
        assert_eq!(g.unit(), UnitTag::Rate);
        assert_eq!(g.start_year(), 2001);
        assert_eq!(s(&[100.0, 100.0, 100.0]).pct_change().unwrap().values(), &[0.0, 0.0]);
        let g = s(&[200.0, 150.0, 180.0]).pct_change().unwrap();
        assert!((g.values()[0] + 0.25).abs() < 1e-15);
        assert!((g.values()[1] - 0.20).abs() < 1e-15);
    }

    #[test]
    fn pct_change_names_zero_year() {
        let err = s(&[100.0, 0.0, 5.0]).pct_change().unwrap_err();
        assert_eq!(err, Error::DivisionByZero { year: 2001 });
    }

    #[test]
    fn growth_path_examples() {
        let p = GrowthPath::new(2020, vec![0.10, 0.10]).unwrap();
        let out = apply_growth_path(100.0, &p).unwrap();
        assert!((out.values()[0] - 110.0).abs() < 1e-12);
        assert!((out.values()[1] - 121.0).abs() < 1e-12);
        assert_eq!(out.start_year(), 2020);

        let p = GrowthPath::new(2020, vec![0.0]).unwrap();
        assert_eq!(apply_growth_path(100.0, &p).unwrap().values(), &[100.0]);

        // pension path: 100·1.1579 = 115.79; ·1.18 = 136.6322; ·1.0043 = 137.2197
        let p = GrowthPath::new(2020, vec![0.1579, 0.18, 0.0043]).unwrap();
        let out = apply_growth_path(100.0, &p).unwrap();
        for (got, want) in out.values().iter().zip([115.79, 136.63, 137.22]) {
            assert!((got - want).abs() < 0.01, "{got} vs {want}");
        }
    }

    #[test]
    fn construction_rejects_bad_input() {
        assert!(AnnualSeries::levels(2000, vec![]).is_err());
        assert_eq!(
            AnnualSeries::levels(2000, vec![1.0, f64::NAN]).unwrap_err(),
            Error::NonFinite { index: 1 }
        );
        assert!(matches!(
            GrowthPath::new(2020, vec![0.1, -1.0]),
            Err(Error::InvalidRate { index: 1, .. })
        ));
    }

    #[test]
    fn window_and_align() {
        let a = AnnualSeries::levels(2000, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let b = AnnualSeries::levels(2002, vec![9.0, 8.0, 7.0]).unwrap();
        let (a2, b2) = align(&a, &b).unwrap();
        assert_eq!(a2.values(), &[3.0, 4.0]);
        assert_eq!(b2.values(), &[9.0, 8.0]);
        assert_eq!(a.get(2003), Some(4.0));
        assert_eq!(a.get(1999), None);
        let c = AnnualSeries::levels(2010, vec![1.0]).unwrap();
        assert!(matches!(align(&a, &c), Err(Error::Alignment(_))));
    }

    fn finite_values(min_len: usize) -> impl Strategy<Value = Vec<f64>> {
        prop::collection::vec(-1e6f64..1e6, min_len..40)
    }

    proptest! {
        #[test]
        fn difference_integrate_round_trip(v in finite_values(3), d in 1usize..=2) {
            let series = AnnualSeries::levels(1995, v.clone()).unwrap();
            let diffs = series.difference(d).unwrap();
            let back = diffs.integrate(d, &v[..d]).unwrap();
            prop_assert_eq!(back.start_year(), 1995);
            let scale = v.iter().fold(1.0f64, |m, x| m.max(x.abs()));
            for (x, y) in back.values().iter().zip(&v) {
                prop_assert!((x - y).abs() <= 1e-12 * scale * v.len() as f64);
            }
        }

        #[test]
        fn difference_is_linear(
            pair in (3usize..30).prop_flat_map(|n| (
                prop::collection::vec(-1e3f64..1e3, n),
                prop::collection::vec(-1e3f64..1e3, n),
            )),
            a in -10.0f64..10.0,
            b in -10.0f64..10.0,
        ) {
            let (x, y) = pair;
            let sx = AnnualSeries::levels(0, x).unwrap();
            let sy = AnnualSeries::levels(0, y).unwrap();
            let lhs = sx.linear_combination(a, &sy, b).unwrap().difference(1).unwrap();
            let rhs = sx.difference(1).unwrap().linear_combination(a, &sy.difference(1).unwrap(), b).unwrap();
            for (l, r) in lhs.values().iter().zip(rhs.values()) {
                prop_assert!((l - r).abs() <= 1e-9 * (1.0 + l.abs()));
            }
        }

        #[test]
        fn pct_change_then_compound_reconstructs(v in prop::collection::vec(1.0f64..100.0, 2..30)) {
            let series = AnnualSeries::levels(2000, v.clone()).unwrap();
            let growth = series.pct_change().unwrap();
            let path = GrowthPath::new(growth.start_year(), growth.values().to_vec()).unwrap();
            let rebuilt = apply_growth_path(v[0], &path).unwrap();
            for (got, want) in rebuilt.values().iter().zip(&v[1..]) {
                prop_assert!(((got - want) / want).abs() < 1e-12);
            }
        }
    }
}
