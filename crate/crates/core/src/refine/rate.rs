//! Rates `log_2(bound)/n` at fixed relative distances, with the reference
//! binary values at `n = 1000` for comparison.

use serde::Serialize;

use super::{refined_bound_with, Options};
use crate::error::{Error, Result};
use crate::krawtchouk::{KrawtchoukTable, Space};
use crate::numkit::BigFloat;

/// `(d/n, Levenshtein, refined)` as printed for `q = 2`, `n = 1000`.
pub const REFERENCE_RATES: &[(f64, f64, f64)] =
    &[(0.25, 0.387, 0.386), (0.30, 0.283, 0.281), (0.35, 0.191, 0.188), (0.40, 0.115, 0.110), (0.45, 0.505, 0.047)];

#[derive(Clone, Debug, Serialize)]
pub struct RateRow {
    pub ratio: f64,
    /// Nearest grid distance to `ratio · n`.
    pub d: i64,
    pub levenshtein_rate: f64,
    pub refined_rate: f64,
    pub certified: bool,
    pub fell_back: bool,
    pub reference_levenshtein: Option<f64>,
    pub reference_refined: Option<f64>,
    pub flags: Vec<String>,
}

fn nearest_distance(space: &Space, ratio: f64) -> Result<i64> {
    if !(ratio > 0.0 && ratio <= 1.0) {
        return Err(Error::InvalidParameter(format!("d/n = {ratio} must lie in (0, 1]")));
    }
    Ok(((ratio * space.n() as f64).round() as i64).clamp(1, space.n() as i64))
}

fn reference(space: &Space, ratio: f64) -> Option<(f64, f64)> {
    if (space.q(), space.n()) != (2, 1000) {
        return None;
    }
    REFERENCE_RATES.iter().find(|r| (r.0 - ratio).abs() < 1e-9).map(|r| (r.1, r.2))
}

/// One row per ratio, in the given order. A printed value that breaks the
/// decrease of its row (rates fall as `d/n` grows) is flagged.
pub fn rate_table(space: &Space, ratios: &[f64], options: &Options) -> Result<Vec<RateRow>> {
    let table = KrawtchoukTable::new(*space);
    let n = space.n() as f64;
    let mut rows = Vec::with_capacity(ratios.len());
    for &ratio in ratios {
        let d = nearest_distance(space, ratio)?;
        let report = refined_bound_with(space, d, &table, options)?;
        let lev = report.levenshtein.as_ref().expect("refined reports carry the Levenshtein value");
        let lev_log = BigFloat::from_bigint(lev.numer(), 128).log2() - BigFloat::from_bigint(lev.denom(), 128).log2();
        let reference = reference(space, ratio);
        rows.push(RateRow {
            ratio,
            d,
            levenshtein_rate: lev_log / n,
            refined_rate: report.value.log2() / n,
            certified: report.value.is_certified(),
            fell_back: report.fell_back,
            reference_levenshtein: reference.map(|r| r.0),
            reference_refined: reference.map(|r| r.1),
            flags: Vec::new(),
        });
    }
    flag_increases(&mut rows, |r| (r.reference_levenshtein, r.levenshtein_rate), "printed Levenshtein rate");
    flag_increases(&mut rows, |r| (r.reference_refined, r.refined_rate), "printed refined rate");
    Ok(rows)
}

/// `get` returns the printed value and ours.
fn flag_increases(rows: &mut [RateRow], get: impl Fn(&RateRow) -> (Option<f64>, f64), what: &str) {
    let mut order: Vec<usize> = (0..rows.len()).collect();
    order.sort_by(|&a, &b| rows[a].ratio.total_cmp(&rows[b].ratio));
    let mut prev: Option<f64> = None;
    for i in order {
        let (Some(v), ours) = get(&rows[i]) else { continue };
        if let Some(p) = prev {
            if v > p {
                rows[i].flags.push(format!("{what} {v} exceeds the previous {p}; the row must decrease (suspected misprint, computed {ours:.3})"));
            }
        }
        prev = Some(v);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rates_decrease_and_refine() {
        let space = Space::new(100, 2).unwrap();
        let rows = rate_table(&space, &[0.2, 0.3, 0.4, 0.5], &Options::default()).unwrap();
        for w in rows.windows(2) {
            assert!(w[1].refined_rate < w[0].refined_rate);
        }
        for r in &rows {
            assert!(r.refined_rate <= r.levenshtein_rate + 1e-12 && r.refined_rate > 0.0);
            assert!(r.reference_refined.is_none());
        }
        assert_eq!(rows[3].d, 50);
    }

    #[test]
    fn misprint_is_flagged() {
        let mut rows: Vec<RateRow> = REFERENCE_RATES
            .iter()
            .map(|&(ratio, lev, refined)| RateRow {
                ratio,
                d: 0,
                levenshtein_rate: 0.0,
                refined_rate: 0.0,
                certified: true,
                fell_back: false,
                reference_levenshtein: Some(lev),
                reference_refined: Some(refined),
                flags: Vec::new(),
            })
            .collect();
        flag_increases(&mut rows, |r| (r.reference_levenshtein, 0.0), "x");
        flag_increases(&mut rows, |r| (r.reference_refined, 0.0), "y");
        let flagged: Vec<f64> = rows.iter().filter(|r| !r.flags.is_empty()).map(|r| r.ratio).collect();
        assert_eq!(flagged, vec![0.45]);
    }
}
