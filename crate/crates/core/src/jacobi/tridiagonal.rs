use crate::error::{Error, Result};

/// Finite symmetric tridiagonal matrix with diagonal `b` and off-diagonal
/// `a`. Only `a_k^2` enters the spectrum, so signs of `a` are not
/// restricted here.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiMatrix {
    b: Vec<f64>,
    a: Vec<f64>,
}

impl JacobiMatrix {
    pub fn new(b: Vec<f64>, a: Vec<f64>) -> Result<Self> {
        if b.is_empty() {
            return Err(Error::InvalidArgument("Jacobi matrix needs at least one diagonal entry".into()));
        }
        if a.len() + 1 != b.len() {
            return Err(Error::InvalidArgument(format!(
                "off-diagonal length {} does not match diagonal length {}",
                a.len(),
                b.len()
            )));
        }
        if b.iter().chain(&a).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("non-finite Jacobi coefficient".into()));
        }
        Ok(Self { b, a })
    }

    pub fn len(&self) -> usize {
        self.b.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    /// Gershgorin interval containing the spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..self.len() {
            let left = if i > 0 { self.a[i - 1].abs() } else { 0.0 };
            let right = self.a.get(i).map_or(0.0, |x| x.abs());
            lo = lo.min(self.b[i] - left - right);
            hi = hi.max(self.b[i] + left + right);
        }
        (lo, hi)
    }

    pub fn norm_bound(&self) -> f64 {
        let (lo, hi) = self.gershgorin();
        lo.abs().max(hi.abs())
    }

    fn pivmin(&self) -> f64 {
        f64::EPSILON * self.norm_bound().max(1.0)
    }
}

fn count_below(j: &JacobiMatrix, lambda: f64, pivmin: f64) -> usize {
    let mut count = 0;
    let mut d = 1.0;
    for k in 0..j.len() {
        let off = if k == 0 { 0.0 } else { j.a[k - 1] * j.a[k - 1] / d };
        d = j.b[k] - lambda - off;
        if d.abs() < pivmin {
            d = if d < 0.0 { -pivmin } else { pivmin };
        }
        if d < 0.0 {
            count += 1;
        }
    }
    count
}

/// Number of eigenvalues strictly below `lambda`, from the signs of the
/// pivots `d_1 = b_1 - lambda`, `d_k = b_k - lambda - a_{k-1}^2 / d_{k-1}`.
/// Pivots smaller than `eps * |J|` are replaced by a floor of the same sign
/// (zero counts as positive).
pub fn sturm_count(j: &JacobiMatrix, lambda: f64) -> usize {
    if lambda == f64::INFINITY {
        return j.len();
    }
    if lambda == f64::NEG_INFINITY {
        return 0;
    }
    count_below(j, lambda, j.pivmin())
}

/// All eigenvalues in ascending order, each bracketed by bisection on the
/// Sturm count to an interval narrower than `tol`.
pub fn eigenvalues_tridiagonal(j: &JacobiMatrix, tol: f64) -> Vec<f64> {
    let tol = if tol > 0.0 { tol } else { f64::EPSILON };
    let pivmin = j.pivmin();
    let (glo, ghi) = j.gershgorin();
    let pad = 2.0 * f64::EPSILON * glo.abs().max(ghi.abs()).max(1.0) + 2.0 * pivmin;
    let (glo, ghi) = (glo - pad, ghi + pad);
    let mut out = Vec::with_capacity(j.len());
    for k in 0..j.len() {
        let (mut lo, mut hi) = (glo, ghi);
        // bracket reuse: the k-th eigenvalue is at least the previous one
        if let Some(&prev) = out.last() {
            let prev: f64 = prev;
            lo = lo.max(prev - tol);
        }
        for _ in 0..256 {
            if hi - lo < tol {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if count_below(j, mid, pivmin) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        out.push(0.5 * (lo + hi));
    }
    out
}
