//! Adaptive Gauss–Kronrod quadrature (7-point Gauss, 15-point Kronrod).
//!
//! A globally adaptive scheme: every interval carries the embedded
//! `|K15 − G7|` error estimate, and the interval with the largest estimate is
//! bisected until the summed estimate meets `max(abs_tol, rel_tol·|I|)`. The
//! action integrals feeding on this rule are pre-substituted to be smooth, so
//! convergence is fast; the subdivision cap exists for honesty, not comfort.

// The node/weight tables below keep their full published precision; the
// extra digits beyond f64 resolution document the source values.
#![allow(clippy::excessive_precision)]

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

/// 15-point Kronrod abscissae on `[−1, 1]` (non-negative half; the rule is
/// symmetric). Entries at odd indices are the embedded 7-point Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_33,
    0.949_107_912_342_758_524_526_189_684_047_85,
    0.864_864_423_359_769_072_789_712_788_640_93,
    0.741_531_185_599_394_439_863_864_773_280_79,
    0.586_087_235_467_691_130_294_144_838_258_73,
    0.405_845_151_377_397_166_906_606_412_076_96,
    0.207_784_955_007_898_467_600_689_403_773_24,
    0.0,
];

/// Kronrod weights matching [`XGK`].
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_97,
    0.063_092_092_629_978_553_290_700_663_189_2,
    0.104_790_010_322_250_183_839_876_322_541_52,
    0.140_653_259_715_525_918_745_189_590_510_24,
    0.169_004_726_639_267_902_826_583_426_598_55,
    0.190_350_578_064_785_409_913_256_402_421_01,
    0.204_432_940_075_298_892_414_161_999_234_65,
    0.209_482_141_084_727_828_012_999_174_891_71,
];

/// 7-point Gauss weights for the nodes at odd indices of [`XGK`].
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_08,
    0.279_705_391_489_276_667_901_467_771_423_78,
    0.381_830_050_505_118_944_950_369_775_488_98,
    0.417_959_183_673_469_387_755_102_040_816_33,
];

/// Value, error estimate and interval count of an adaptive integration.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    /// The integral estimate.
    pub value: f64,
    /// Summed `|K15 − G7|` error estimate over all intervals.
    pub error_estimate: f64,
    /// Number of intervals in the final partition.
    pub intervals: usize,
}

/// One `(a, b)` interval with its Kronrod value and error estimate, ordered
/// by error so the worst interval sits on top of the heap.
struct Segment {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// Gauss–Kronrod 7/15 rule on one interval: returns the Kronrod value and
/// the `|K15 − G7|` error estimate.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut kronrod = WGK[7] * f_center;
    let mut gauss = WG[3] * f_center;
    for (i, &x) in XGK.iter().enumerate().take(7) {
        let dx = half * x;
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    kronrod *= half;
    gauss *= half;
    (kronrod, (kronrod - gauss).abs())
}

/// Adaptively integrates `f` over `[a, b]` to `max(abs_tol, rel_tol·|I|)`.
pub fn integral<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    rel_tol: f64,
    abs_tol: f64,
) -> Result<QuadratureResult> {
    if !a.is_finite() || !b.is_finite() || a > b {
        return Err(Error::InvalidParameter(format!(
            "integration bounds must be finite with a <= b, got [{a}, {b}]"
        )));
    }
    if !(rel_tol.is_finite() && rel_tol >= 0.0 && abs_tol.is_finite() && abs_tol >= 0.0) {
        return Err(Error::InvalidParameter(
            "quadrature tolerances must be non-negative and finite".into(),
        ));
    }
    if a == b {
        return Ok(QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            intervals: 0,
        });
    }

    const MAX_INTERVALS: usize = 512;
    let (value, error) = gk15(&f, a, b);
    let mut heap = BinaryHeap::new();
    heap.push(Segment { a, b, value, error });
    let mut total = value;
    let mut total_error = error;
    while total_error > abs_tol.max(rel_tol * total.abs()) {
        if heap.len() >= MAX_INTERVALS {
            return Err(Error::QuadratureDidNotConverge {
                estimate: total_error,
                intervals: heap.len(),
            });
        }
        let worst = heap.pop().expect("heap holds at least one segment");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // The interval is below floating-point resolution; no further
            // subdivision can improve the estimate.
            return Err(Error::QuadratureDidNotConverge {
                estimate: total_error,
                intervals: heap.len() + 1,
            });
        }
        total -= worst.value;
        total_error -= worst.error;
        for (lo, hi) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = gk15(&f, lo, hi);
            total += value;
            total_error += error;
            heap.push(Segment {
                a: lo,
                b: hi,
                value,
                error,
            });
        }
        if !total.is_finite() {
            return Err(Error::QuadratureDidNotConverge {
                estimate: f64::INFINITY,
                intervals: heap.len(),
            });
        }
    }
    Ok(QuadratureResult {
        value: total,
        error_estimate: total_error,
        intervals: heap.len(),
    })
}
