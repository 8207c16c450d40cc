use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{Error, Result};

/// Jacobi coefficients that repeat with period `q` after an optional finite
/// prefix: index `n >= prefix length` uses `a_per[(n - p) mod q]`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicJacobi {
    a_per: Vec<f64>,
    b_per: Vec<f64>,
    prefix_a: Vec<f64>,
    prefix_b: Vec<f64>,
}

impl PeriodicJacobi {
    pub fn new(a_per: Vec<f64>, b_per: Vec<f64>) -> Result<Self> {
        Self::with_prefix(Vec::new(), Vec::new(), a_per, b_per)
    }

    pub fn with_prefix(prefix_a: Vec<f64>, prefix_b: Vec<f64>, a_per: Vec<f64>, b_per: Vec<f64>) -> Result<Self> {
        if a_per.is_empty() || a_per.len() != b_per.len() {
            return Err(Error::InvalidArgument("period coefficients must be nonempty and of equal length".into()));
        }
        if prefix_a.len() != prefix_b.len() {
            return Err(Error::InvalidArgument("prefix coefficients must have equal length".into()));
        }
        if a_per.iter().chain(&prefix_a).any(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::InvalidArgument("off-diagonal coefficients must be positive".into()));
        }
        if b_per.iter().chain(&prefix_b).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite diagonal coefficient".into()));
        }
        Ok(Self {
            a_per,
            b_per,
            prefix_a,
            prefix_b,
        })
    }

    pub fn period(&self) -> usize {
        self.a_per.len()
    }

    pub fn prefix_len(&self) -> usize {
        self.prefix_a.len()
    }

    pub fn a_at(&self, n: usize) -> f64 {
        match self.prefix_a.get(n) {
            Some(&x) => x,
            None => self.a_per[(n - self.prefix_len()) % self.period()],
        }
    }

    pub fn b_at(&self, n: usize) -> f64 {
        match self.prefix_b.get(n) {
            Some(&x) => x,
            None => self.b_per[(n - self.prefix_len()) % self.period()],
        }
    }

    /// Trace of `T_{q-1} ... T_0` with
    /// `T_n = [[(lambda - b_n)/a_n, -a_{n-1}/a_n], [1, 0]]`, `a_{-1} = a_{q-1}`.
    pub fn discriminant(&self, lambda: f64) -> f64 {
        let q = self.period();
        let (mut m00, mut m01, mut m10, mut m11) = (1.0, 0.0, 0.0, 1.0);
        for n in 0..q {
            let an = self.a_per[n];
            let prev = self.a_per[(n + q - 1) % q];
            let t00 = (lambda - self.b_per[n]) / an;
            let t01 = -prev / an;
            // T * M with T = [[t00, t01], [1, 0]]
            let (n00, n01) = (t00 * m00 + t01 * m10, t00 * m01 + t01 * m11);
            m10 = m00;
            m11 = m01;
            m00 = n00;
            m01 = n01;
        }
        m00 + m11
    }

    /// Interval containing the spectrum of the periodic part, widened by 1.
    fn search_window(&self) -> (f64, f64) {
        let amax = self.a_per.iter().fold(0.0f64, |m, &x| m.max(x));
        let bmin = self.b_per.iter().fold(f64::INFINITY, |m, &x| m.min(x));
        let bmax = self.b_per.iter().fold(f64::NEG_INFINITY, |m, &x| m.max(x));
        (bmin - 2.0 * amax - 1.0, bmax + 2.0 * amax + 1.0)
    }
}

/// Closed, disjoint, sorted intervals.
#[derive(Debug, Clone, PartialEq)]
pub struct BandStructure {
    pub bands: Vec<(f64, f64)>,
}

impl BandStructure {
    pub fn contains(&self, x: f64) -> bool {
        self.bands.iter().any(|&(lo, hi)| lo <= x && x <= hi)
    }

    /// Distance from `x` to the union of bands.
    pub fn distance(&self, x: f64) -> f64 {
        self.bands
            .iter()
            .map(|&(lo, hi)| {
                if x < lo {
                    lo - x
                } else if x > hi {
                    x - hi
                } else {
                    0.0
                }
            })
            .fold(f64::INFINITY, f64::min)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("lo,hi\n");
        for (lo, hi) in &self.bands {
            writeln!(out, "{lo},{hi}").unwrap();
        }
        out
    }
}

const ROOT_TOL: f64 = 1e-10;
const MAX_REFINE_DEPTH: usize = 40;

fn refine(pj: &PeriodicJacobi, x0: f64, d0: f64, x1: f64, d1: f64, depth: usize, out: &mut Vec<(f64, f64)>) {
    let xm = 0.5 * (x0 + x1);
    let dm = pj.discriminant(xm);
    let steep = (d1 - d0).abs() > 1.0;
    let curved = (dm - 0.5 * (d0 + d1)).abs() > 0.25;
    if depth < MAX_REFINE_DEPTH && (steep || curved) && x1 - x0 > ROOT_TOL {
        refine(pj, x0, d0, xm, dm, depth + 1, out);
        refine(pj, xm, dm, x1, d1, depth + 1, out);
    } else {
        out.push((x1, d1));
    }
}

fn bisect_level(pj: &PeriodicJacobi, mut lo: f64, mut hi: f64, level: f64) -> f64 {
    let mut flo = pj.discriminant(lo) - level;
    while hi - lo > ROOT_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = pj.discriminant(mid) - level;
        if (fm < 0.0) == (flo < 0.0) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Bands `{lambda : |d(lambda)| <= 2}` of the periodic part of `pj`.
///
/// The discriminant is sampled on `8q + 1` Chebyshev points over a window
/// containing the spectrum, refined where it changes quickly, and every
/// crossing of `d = +-2` is bisected to `1e-10`.
pub fn bands_periodic(pj: &PeriodicJacobi) -> BandStructure {
    let q = pj.period();
    let (lo, hi) = pj.search_window();
    let count = 8 * q + 1;
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut nodes: Vec<f64> = (0..count)
        .map(|i| mid - half * (PI * i as f64 / (count - 1) as f64).cos())
        .collect();
    nodes[0] = lo;
    nodes[count - 1] = hi;
    let mut grid = vec![(lo, pj.discriminant(lo))];
    for w in nodes.windows(2) {
        let (x0, d0) = *grid.last().unwrap();
        refine(pj, x0, d0, w[1], pj.discriminant(w[1]), 0, &mut grid);
    }
    let mut cuts = vec![lo];
    for w in grid.windows(2) {
        let ((x0, d0), (x1, d1)) = (w[0], w[1]);
        for level in [2.0, -2.0] {
            if (d0 - level < 0.0) != (d1 - level < 0.0) {
                cuts.push(bisect_level(pj, x0, x1, level));
            }
        }
    }
    cuts.push(hi);
    cuts.sort_by(f64::total_cmp);
    let mut bands: Vec<(f64, f64)> = Vec::new();
    for w in cuts.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        if x1 - x0 <= 0.0 {
            continue;
        }
        if pj.discriminant(0.5 * (x0 + x1)).abs() <= 2.0 {
            match bands.last_mut() {
                Some(last) if x0 - last.1 <= ROOT_TOL => last.1 = x1,
                _ => bands.push((x0, x1)),
            }
        }
    }
    BandStructure { bands }
}
