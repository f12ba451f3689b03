//! System-level metrics: configuration efficiency, percentage I.H.V. and
//! anomalous minimised configuration (A.M.C.) detection.

use crate::error::{invalid, Result};
use crate::model::FlatSystem;
use crate::psc::{self, psc_unencapsulated, system_psc, uniform_psc_of};

/// Metrics for one flat system. Values that are undefined for the system
/// (fewer than two nodes, no violating node) are `None`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricsReport {
    pub n: u64,
    pub r: u64,
    pub h: u64,
    pub p_bar: Option<f64>,
    /// Actual P.S.C.
    pub s: u64,
    pub s_max: u64,
    /// Minimum uniform P.S.C. at the system's own average violation.
    pub s_min: Option<f64>,
    /// Minimum uniform P.S.C. at one violation per region (the lower edge
    /// of the P.S.C. surface).
    pub s_min_p1: Option<f64>,
    /// Unclamped inefficiency; may fall outside `[0, 1]` for A.M.C.s.
    pub c_i_raw: Option<f64>,
    pub c_i: Option<f64>,
    pub c_e: Option<f64>,
    pub ihv_percent: Option<f64>,
    pub r_min: Option<f64>,
}

impl MetricsReport {
    /// True when configuration efficiency could be computed.
    pub fn is_defined(&self) -> bool {
        self.c_e.is_some()
    }
}

/// Percentage information-hiding violation, `100 h / n`.
pub fn ihv_percent(n: u64, h: u64) -> Result<f64> {
    if n == 0 {
        return Err(invalid("I.H.V. needs at least one node"));
    }
    if h > n {
        return Err(invalid(format!("{h} violating nodes exceed {n} nodes")));
    }
    Ok(100.0 * h as f64 / n as f64)
}

/// Configuration inefficiency from its three P.S.C. values, unclamped.
/// When `s_min == s_max` the system sits at its only attainable value, the
/// maximum, and the inefficiency is 1.
pub fn configuration_inefficiency(s: f64, s_min: f64, s_max: f64) -> f64 {
    let span = s_max - s_min;
    if span <= 0.0 {
        1.0
    } else {
        (s - s_min) / span
    }
}

/// Full metrics report for a flat system.
pub fn configuration_efficiency(sys: &FlatSystem) -> MetricsReport {
    let (n, r, h) = (sys.n(), sys.r(), sys.h());
    let s = system_psc(sys).total;
    let s_max = psc_unencapsulated(n);
    let p_bar = sys.p_bar();
    let s_min = p_bar.and_then(|p| psc::s_min(n, p).ok());
    let s_min_p1 = psc::s_min(n, 1.0).ok();
    let r_min = p_bar.and_then(|p| psc::r_min(n, p).ok());
    let c_i_raw = if n >= 2 {
        s_min.map(|lo| configuration_inefficiency(s as f64, lo, s_max as f64))
    } else {
        None
    };
    let c_i = c_i_raw.map(|c| c.clamp(0.0, 1.0));
    MetricsReport {
        n,
        r,
        h,
        p_bar,
        s,
        s_max,
        s_min,
        s_min_p1,
        c_i_raw,
        c_i,
        c_e: c_i.map(|c| 1.0 - c),
        ihv_percent: ihv_percent(n, h).ok(),
        r_min,
    }
}

/// A.M.C. verdict for one system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmcVerdict {
    /// A uniform system with the same `n`, `r` and `h / r` exists.
    pub comparable: bool,
    /// Non-uniform and strictly below the same-`r` uniform P.S.C.
    pub is_amc: bool,
    pub psc: u64,
    pub uniform_psc_same_r: Option<f64>,
    /// Minimum uniform P.S.C. over real `r` at `p = h / r`.
    pub s_min_real_r: Option<f64>,
    /// Strictly below `s_min_real_r`.
    pub below_s_min: bool,
}

pub fn amc_check(sys: &FlatSystem) -> AmcVerdict {
    let (n, r, h) = (sys.n(), sys.r(), sys.h());
    let psc = system_psc(sys).total;
    let comparable = r > 0 && n % r == 0 && h % r == 0;
    let p = (r > 0).then(|| h as f64 / r as f64);
    let s_min_real_r = p.and_then(|p| psc::s_min(n, p).ok());
    let uniform_psc_same_r = if comparable {
        uniform_psc_of(n as f64, r as f64, h as f64 / r as f64).ok()
    } else {
        None
    };
    let is_amc = comparable
        && !sys.is_uniform()
        && uniform_psc_same_r.is_some_and(|u| (psc as f64) < u);
    AmcVerdict {
        comparable,
        is_amc,
        psc,
        uniform_psc_same_r,
        s_min_real_r,
        below_s_min: s_min_real_r.is_some_and(|lo| (psc as f64) < lo),
    }
}
