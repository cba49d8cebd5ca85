//! Gridded results and peak analysis.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Axis {
    pub name: String,
    pub unit: String,
    pub values: Vec<f64>,
}

impl Axis {
    pub fn new(name: &str, unit: &str, values: Vec<f64>) -> Self {
        Axis { name: name.into(), unit: unit.into(), values }
    }
}

/// Real-valued data on a rectangular grid, row-major with the last axis
/// fastest. `None` marks a masked sample.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumResult {
    pub quantity: String,
    pub unit: String,
    pub axes: Vec<Axis>,
    pub values: Vec<Option<f64>>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl SpectrumResult {
    pub fn new(quantity: &str, unit: &str, axes: Vec<Axis>, values: Vec<Option<f64>>) -> Self {
        let expected: usize = axes.iter().map(|a| a.values.len()).product();
        assert_eq!(expected, values.len(), "values do not match axes");
        SpectrumResult { quantity: quantity.into(), unit: unit.into(), axes, values, warnings: Vec::new() }
    }

    pub fn from_dense(quantity: &str, unit: &str, axes: Vec<Axis>, values: Vec<f64>) -> Self {
        Self::new(quantity, unit, axes, values.into_iter().map(Some).collect())
    }

    pub fn shape(&self) -> Vec<usize> {
        self.axes.iter().map(|a| a.values.len()).collect()
    }

    /// Values with masked samples replaced by `fill`.
    pub fn dense(&self, fill: f64) -> Vec<f64> {
        self.values.iter().map(|v| v.unwrap_or(fill)).collect()
    }

    /// Row `i` of a 2D result.
    pub fn row(&self, i: usize) -> &[Option<f64>] {
        let w = self.axes[self.axes.len() - 1].values.len();
        &self.values[i * w..(i + 1) * w]
    }
}

/// (k∥, ω) axes of a dispersion map.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SpectrumGrid {
    pub omegas: Vec<f64>,
    pub k_parallels: Vec<f64>,
}

impl SpectrumGrid {
    pub fn validate(&self) -> Result<()> {
        check_omegas(&self.omegas)?;
        if self.k_parallels.is_empty() || !strictly_increasing(&self.k_parallels) {
            return Err(Error::invalid("k_parallels", "must be non-empty and strictly increasing"));
        }
        Ok(())
    }
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite()) && v.windows(2).all(|w| w[1] > w[0])
}

pub fn check_omegas(omegas: &[f64]) -> Result<()> {
    if omegas.is_empty() || !strictly_increasing(omegas) {
        return Err(Error::invalid("omegas", "must be non-empty and strictly increasing"));
    }
    if omegas[0] <= 0.0 {
        return Err(Error::NonPositiveFrequency(omegas[0]));
    }
    Ok(())
}

/// Frequencies on [lo, hi] with step `fine` within `window` of any of the
/// `anchors` and step `coarse` elsewhere. Segment boundaries are included.
pub fn piecewise_omegas(lo: f64, hi: f64, anchors: &[f64], window: f64, fine: f64, coarse: f64) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi > lo && fine > 0.0 && coarse >= fine && window >= 0.0) {
        return Err(Error::invalid("grid", "need 0 < lo < hi and 0 < fine <= coarse"));
    }
    let mut zones: Vec<(f64, f64)> = anchors
        .iter()
        .map(|&c| ((c - window).max(lo), (c + window).min(hi)))
        .filter(|(a, b)| b > a)
        .collect();
    zones.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut merged: Vec<(f64, f64)> = Vec::new();
    for z in zones {
        match merged.last_mut() {
            Some(last) if z.0 <= last.1 => last.1 = last.1.max(z.1),
            _ => merged.push(z),
        }
    }
    let mut cuts = vec![(lo, false)];
    for (a, b) in merged {
        cuts.push((a, true));
        cuts.push((b, false));
    }
    cuts.push((hi, false));
    let mut out: Vec<f64> = Vec::new();
    for w in cuts.windows(2) {
        let (a, is_fine) = w[0];
        let b = w[1].0;
        if b <= a {
            continue;
        }
        let step = if is_fine { fine } else { coarse };
        let n = ((b - a) / step).ceil().max(1.0) as usize;
        for i in 0..n {
            let x = a + (b - a) * i as f64 / n as f64;
            if out.last().is_none_or(|&l| x > l) {
                out.push(x);
            }
        }
    }
    if out.last().is_none_or(|&l| hi > l) {
        out.push(hi);
    }
    Ok(out)
}

/// Index and value of the global maximum.
pub fn argmax(values: &[f64]) -> Option<(usize, f64)> {
    values
        .iter()
        .copied()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .fold(None, |best, (i, v)| match best {
            Some((_, b)) if b >= v => best,
            _ => Some((i, v)),
        })
}

/// Full width at half of `values[peak]`, from linearly interpolated crossings
/// on both sides. `None` if either side never drops below half.
pub fn fwhm(xs: &[f64], values: &[f64], peak: usize) -> Option<f64> {
    width_at(xs, values, peak, values[peak] / 2.0)
}

/// Width of the peak at absolute `level`.
pub fn width_at(xs: &[f64], values: &[f64], peak: usize, level: f64) -> Option<f64> {
    let cross = |i: usize, j: usize| {
        let t = (values[i] - level) / (values[i] - values[j]);
        xs[i] + t * (xs[j] - xs[i])
    };
    let mut left = None;
    for i in (1..=peak).rev() {
        if values[i - 1] < level {
            left = Some(cross(i, i - 1));
            break;
        }
    }
    let mut right = None;
    for i in peak..values.len() - 1 {
        if values[i + 1] < level {
            right = Some(cross(i, i + 1));
            break;
        }
    }
    Some(right? - left?)
}

/// Interior strict local maxima (ties on plateaus count once, at the left end).
pub fn local_maxima(values: &[f64]) -> Vec<usize> {
    extrema(values, |a, b| a > b)
}

pub fn local_minima(values: &[f64]) -> Vec<usize> {
    extrema(values, |a, b| a < b)
}

fn extrema(values: &[f64], better: impl Fn(f64, f64) -> bool) -> Vec<usize> {
    let mut out = Vec::new();
    let n = values.len();
    let mut i = 1;
    while i + 1 < n {
        if better(values[i], values[i - 1]) {
            let mut j = i;
            while j + 1 < n && values[j + 1] == values[i] {
                j += 1;
            }
            if j + 1 < n && better(values[i], values[j + 1]) {
                out.push(i);
            }
            i = j + 1;
        } else {
            i += 1;
        }
    }
    out
}

/// Topographic prominence of the local maximum at `peak`: height above the
/// higher of the two lowest points separating it from taller terrain (or the
/// array ends).
pub fn prominence(values: &[f64], peak: usize) -> f64 {
    let h = values[peak];
    let mut left_min = h;
    for i in (0..peak).rev() {
        if values[i] > h {
            break;
        }
        left_min = left_min.min(values[i]);
    }
    let mut right_min = h;
    for &v in &values[peak + 1..] {
        if v > h {
            break;
        }
        right_min = right_min.min(v);
    }
    h - left_min.max(right_min)
}

/// A spectral feature: local maximum with its prominence and its width at
/// half prominence.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Feature {
    pub index: usize,
    pub position: f64,
    pub height: f64,
    pub prominence: f64,
    pub width: Option<f64>,
}

/// Local maxima whose prominence is at least `min_fraction` of the global
/// maximum.
pub fn features(xs: &[f64], values: &[f64], min_fraction: f64) -> Vec<Feature> {
    let top = argmax(values).map(|(_, v)| v).unwrap_or(0.0);
    local_maxima(values)
        .into_iter()
        .filter_map(|i| {
            let p = prominence(values, i);
            if p < min_fraction * top.abs() {
                return None;
            }
            Some(Feature {
                index: i,
                position: xs[i],
                height: values[i],
                prominence: p,
                width: width_at(xs, values, i, values[i] - p / 2.0),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn piecewise_grid_is_fine_near_anchor() {
        let g = piecewise_omegas(1.6, 2.8, &[2.2542], 0.1, 5e-4, 5e-3).unwrap();
        assert!(g.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(g[0], 1.6);
        assert_eq!(*g.last().unwrap(), 2.8);
        let near: Vec<f64> = g.windows(2).filter(|w| (w[0] - 2.2542).abs() < 0.09).map(|w| w[1] - w[0]).collect();
        assert!(near.iter().all(|&d| d <= 5e-4 + 1e-12));
        assert!(g.windows(2).all(|w| w[1] - w[0] <= 5e-3 + 1e-12));
    }

    #[test]
    fn lorentzian_fwhm() {
        let xs: Vec<f64> = (0..2001).map(|i| -1.0 + i as f64 * 1e-3).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 1.0 / (x * x + 0.01)).collect();
        let (p, _) = argmax(&ys).unwrap();
        assert!((fwhm(&xs, &ys, p).unwrap() - 0.2).abs() < 1e-4);
    }

    #[test]
    fn prominence_of_shoulder() {
        let v = [0.0, 5.0, 1.0, 3.0, 2.0, 10.0, 0.0];
        assert_eq!(local_maxima(&v), vec![1, 3, 5]);
        assert_eq!(prominence(&v, 3), 1.0);
        assert_eq!(prominence(&v, 1), 4.0);
        assert_eq!(prominence(&v, 5), 10.0);
        assert_eq!(local_minima(&v), vec![2, 4]);
    }
}
