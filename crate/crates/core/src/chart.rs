//! Coordinate charts: named coordinates, open-box domains, periodicity flags,
//! and deterministic (seeded) interior sampling.

use crate::error::{Error, Result};
use crate::expr::Binding;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::Arc;

/// A ball removed from the domain (used by the punctured catalog example).
/// Distances are measured with angular wrapping on periodic coordinates.
#[derive(Debug, Clone)]
pub struct Exclusion {
    pub center: Vec<f64>,
    pub radius: f64,
}

/// An open-box coordinate chart. Sampling draws points at distance >= margin
/// from every finite boundary; unbounded directions are sampled from a fixed
/// window of width 2 so that sampling stays deterministic and bounded.
#[derive(Debug, Clone)]
pub struct Chart {
    name: String,
    coords: Vec<String>,
    intervals: Vec<(f64, f64)>,
    periodic: Vec<bool>,
    margin: f64,
    exclusions: Vec<Exclusion>,
}

pub const DEFAULT_MARGIN: f64 = 1e-3;

impl Chart {
    pub fn new(
        name: impl Into<String>,
        coords: Vec<String>,
        intervals: Vec<(f64, f64)>,
        periodic: Vec<bool>,
        margin: f64,
    ) -> Result<Chart> {
        let name = name.into();
        if coords.is_empty() {
            return Err(Error::InvalidChart("no coordinates".into()));
        }
        if coords.len() != intervals.len() || coords.len() != periodic.len() {
            return Err(Error::InvalidChart(
                "coords, intervals and periodic flags must have equal length".into(),
            ));
        }
        for (i, c) in coords.iter().enumerate() {
            if coords[..i].contains(c) {
                return Err(Error::InvalidChart(format!("duplicate coordinate `{c}`")));
            }
        }
        for (i, &(lo, hi)) in intervals.iter().enumerate() {
            if !(lo < hi) {
                return Err(Error::InvalidChart(format!(
                    "empty interval for `{}`",
                    coords[i]
                )));
            }
            if periodic[i] && !(lo.is_finite() && hi.is_finite()) {
                return Err(Error::InvalidChart(format!(
                    "periodic coordinate `{}` needs a finite interval",
                    coords[i]
                )));
            }
        }
        if !(margin >= 0.0) {
            return Err(Error::InvalidChart("margin must be >= 0".into()));
        }
        Ok(Chart {
            name,
            coords,
            intervals,
            periodic,
            margin,
            exclusions: Vec::new(),
        })
    }

    /// All-of-R^d chart with the default margin.
    pub fn euclidean(name: impl Into<String>, coords: &[&str]) -> Chart {
        let coords: Vec<String> = coords.iter().map(|s| s.to_string()).collect();
        let n = coords.len();
        Chart::new(
            name,
            coords,
            vec![(f64::NEG_INFINITY, f64::INFINITY); n],
            vec![false; n],
            DEFAULT_MARGIN,
        )
        .expect("euclidean chart is well formed")
    }

    pub fn with_exclusion(mut self, center: Vec<f64>, radius: f64) -> Chart {
        self.exclusions.push(Exclusion { center, radius });
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[String] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &str {
        &self.coords[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.coords.iter().position(|c| c == name)
    }

    pub fn intervals(&self) -> &[(f64, f64)] {
        &self.intervals
    }

    pub fn periodic(&self) -> &[bool] {
        &self.periodic
    }

    pub fn margin(&self) -> f64 {
        self.margin
    }

    pub fn exclusions(&self) -> &[Exclusion] {
        &self.exclusions
    }

    /// Same coordinate list (names and order). Domain metadata may differ.
    pub fn compatible(&self, other: &Chart) -> bool {
        self.coords == other.coords
    }

    pub fn mismatch(&self, other: &Chart) -> Error {
        Error::ChartMismatch {
            expected: self.name.clone(),
            found: other.name.clone(),
        }
    }

    pub fn binding<'a>(&'a self, point: &'a [f64]) -> Binding<'a> {
        Binding::new(&self.coords, point)
    }

    /// Open-box membership. Periodic coordinates always pass (they wrap);
    /// excluded balls do not count as inside.
    pub fn contains(&self, point: &[f64]) -> bool {
        if point.len() != self.dim() {
            return false;
        }
        for i in 0..self.dim() {
            if self.periodic[i] {
                continue;
            }
            let (lo, hi) = self.intervals[i];
            if !(point[i] > lo && point[i] < hi) {
                return false;
            }
        }
        !self
            .exclusions
            .iter()
            .any(|b| self.distance(point, &b.center) < b.radius)
    }

    /// Wrap periodic coordinates into their intervals, in place.
    pub fn wrap(&self, point: &mut [f64]) {
        for i in 0..self.dim() {
            if self.periodic[i] {
                let (lo, hi) = self.intervals[i];
                let width = hi - lo;
                point[i] = (point[i] - lo).rem_euclid(width) + lo;
            }
        }
    }

    /// Coordinatewise difference a - b with angular wrapping on periodic
    /// coordinates (result in [-width/2, width/2]).
    pub fn wrapped_diff(&self, a: &[f64], b: &[f64]) -> Vec<f64> {
        (0..self.dim())
            .map(|i| {
                let d = a[i] - b[i];
                if self.periodic[i] {
                    let width = self.intervals[i].1 - self.intervals[i].0;
                    let mut r = d.rem_euclid(width);
                    if r > width / 2.0 {
                        r -= width;
                    }
                    r
                } else {
                    d
                }
            })
            .collect()
    }

    /// l-infinity distance with angular wrapping.
    pub fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        self.wrapped_diff(a, b)
            .iter()
            .fold(0.0, |m, d| m.max(d.abs()))
    }

    fn sampling_interval(&self, i: usize) -> (f64, f64) {
        let (lo, hi) = self.intervals[i];
        let eps = self.margin;
        match (lo.is_finite(), hi.is_finite()) {
            (true, true) => (lo + eps, hi - eps),
            (true, false) => (lo + eps, lo + eps + 2.0),
            (false, true) => (hi - eps - 2.0, hi - eps),
            (false, false) => (-1.0, 1.0),
        }
    }

    /// One interior point. Rejection-samples around exclusions.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Vec<f64> {
        for _ in 0..1000 {
            let p: Vec<f64> = (0..self.dim())
                .map(|i| {
                    let (lo, hi) = self.sampling_interval(i);
                    rng.random_range(lo..hi)
                })
                .collect();
            if self
                .exclusions
                .iter()
                .all(|b| self.distance(&p, &b.center) >= b.radius + self.margin)
            {
                return p;
            }
        }
        panic!("chart `{}`: exclusions leave no room to sample", self.name);
    }

    /// Deterministic batch of interior points for a given seed.
    pub fn sample_n(&self, n: usize, seed: u64) -> Vec<Vec<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..n).map(|_| self.sample(&mut rng)).collect()
    }

    /// Extend by one trailing coordinate (used by symplectization and the
    /// contact product). The new name gets underscores appended until fresh.
    pub fn extend(
        &self,
        name_hint: &str,
        interval: (f64, f64),
        suffix: &str,
    ) -> (Arc<Chart>, String) {
        let mut fresh = name_hint.to_string();
        while self.coords.contains(&fresh) {
            fresh.push('_');
        }
        let mut coords = self.coords.clone();
        coords.push(fresh.clone());
        let mut intervals = self.intervals.clone();
        intervals.push(interval);
        let mut periodic = self.periodic.clone();
        periodic.push(false);
        let chart = Chart {
            name: format!("{}{}", self.name, suffix),
            coords,
            intervals,
            periodic,
            margin: self.margin,
            exclusions: self.exclusions.clone(),
        };
        (Arc::new(chart), fresh)
    }
}
