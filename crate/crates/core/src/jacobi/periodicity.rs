use crate::error::{Error, Result};

fn close(x: f64, y: f64) -> bool {
    x == y || (x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1.0)
}

/// Smallest offset `N` with `eq(n, n + q)` for all `N <= n < len - q`.
fn start_of_period(len: usize, q: usize, eq: &impl Fn(usize, usize) -> bool) -> usize {
    (0..len.saturating_sub(q)).rev().find(|&n| !eq(n, n + q)).map_or(0, |n| n + 1)
}

/// Eventual periodicity on observed data, with a caller-supplied equality
/// on indices.
///
/// Returns the smallest period `q <= max_period`, and for it the smallest
/// `N`, such that `seq[n + q] == seq[n]` for `N <= n < len - q`. The
/// periodic stretch `N..len` must hold at least `max_period * min_repeats`
/// samples: a shorter stretch cannot rule out the longer periods that were
/// asked about.
pub fn detect_eventually_periodic_by(
    len: usize,
    max_period: usize,
    min_repeats: usize,
    eq: impl Fn(usize, usize) -> bool,
) -> Option<(usize, usize)> {
    let window = max_period.max(1) * min_repeats.max(1);
    (1..=max_period).find_map(|q| {
        let n = start_of_period(len, q, &eq);
        (len >= n + window).then_some((n, q))
    })
}

/// [`detect_eventually_periodic_by`] on reals, equal up to a relative
/// `1e-9`.
pub fn detect_eventually_periodic(seq: &[f64], max_period: usize, min_repeats: usize) -> Option<(usize, usize)> {
    detect_eventually_periodic_by(seq.len(), max_period, min_repeats, |i, j| close(seq[i], seq[j]))
}

/// Jacobi coefficients `a_n = sqrt(s_n s_{n+1})`, `b_n = s_{n-1} + s_{n+1}`
/// (with `s_{-1} = 0`) for `n = 0..len - 1`.
pub fn antitree_coefficients(s: &[u64]) -> (Vec<f64>, Vec<f64>) {
    let len = s.len().saturating_sub(1);
    let a = (0..len).map(|n| ((s[n] * s[n + 1]) as f64).sqrt()).collect();
    let b = (0..len)
        .map(|n| (if n == 0 { 0 } else { s[n - 1] } + s[n + 1]) as f64)
        .collect();
    (a, b)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PeriodicityTransfer {
    /// Detection result on `s`.
    pub sizes: Option<(usize, usize)>,
    /// Detection result on the pairs `(a_n, b_n)`.
    pub coefficients: Option<(usize, usize)>,
}

impl PeriodicityTransfer {
    /// Both sequences periodic with the same period, or neither periodic.
    pub fn consistent(&self) -> bool {
        match (self.sizes, self.coefficients) {
            (Some((_, q1)), Some((_, q2))) => q1 == q2,
            (None, None) => true,
            _ => false,
        }
    }
}

/// Compares eventual periodicity of sphere sizes with that of the antitree
/// Jacobi coefficients they induce. Sizes must be positive.
pub fn check_periodicity_transfer(s: &[u64], max_period: usize, min_repeats: usize) -> Result<PeriodicityTransfer> {
    if s.first() != Some(&1) || s.contains(&0) {
        return Err(Error::InvalidSequence("sphere sizes must start with 1 and stay positive".into()));
    }
    let (a, b) = antitree_coefficients(s);
    // the coefficient sequences are one shorter, compare on common support
    let sizes = detect_eventually_periodic_by(a.len(), max_period, min_repeats, |i, j| s[i] == s[j]);
    let coefficients = detect_eventually_periodic_by(a.len(), max_period, min_repeats, |i, j| {
        close(a[i], a[j]) && close(b[i], b[j])
    });
    Ok(PeriodicityTransfer { sizes, coefficients })
}

/// The point `2 + sqrt(4 + kappa^2)`.
pub fn essential_point_tcs2(kappa: u64) -> Result<f64> {
    if kappa < 2 {
        return Err(Error::InvalidArgument(format!("kappa must be at least 2, got {kappa}")));
    }
    let k = kappa as f64;
    Ok(2.0 + (4.0 + k * k).sqrt())
}
