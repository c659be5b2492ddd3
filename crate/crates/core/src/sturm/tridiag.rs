//! Symmetric tridiagonal eigenvalues by Sturm-sequence bisection, and
//! eigenvectors by inverse iteration.

/// Symmetric tridiagonal matrix: `diag[0..n]`, `off[0..n-1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiagonal {
    pub diag: Vec<f64>,
    pub off: Vec<f64>,
}

impl SymTridiagonal {
    pub fn new(diag: Vec<f64>, off: Vec<f64>) -> Self {
        assert_eq!(
            off.len() + 1,
            diag.len(),
            "off-diagonal must have n-1 entries"
        );
        Self { diag, off }
    }

    pub fn len(&self) -> usize {
        self.diag.len()
    }

    pub fn is_empty(&self) -> bool {
        self.diag.is_empty()
    }

    /// Number of eigenvalues strictly below `lambda` (negative pivots of the
    /// LDLᵀ factorisation of `A - λI`).
    pub fn count_below(&self, lambda: f64) -> usize {
        let scale = self.gershgorin().1.abs().max(1.0);
        let guard = f64::EPSILON * f64::EPSILON * scale;
        let mut count = 0;
        let mut q = self.diag[0] - lambda;
        for i in 0..self.len() {
            if i > 0 {
                let e = self.off[i - 1];
                q = self.diag[i] - lambda - e * e / q;
            }
            if q == 0.0 {
                q = -guard;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Interval containing all eigenvalues.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let left = if i > 0 { self.off[i - 1].abs() } else { 0.0 };
            let right = if i + 1 < n { self.off[i].abs() } else { 0.0 };
            lo = lo.min(self.diag[i] - left - right);
            hi = hi.max(self.diag[i] + left + right);
        }
        (lo, hi)
    }

    /// The `k`-th smallest eigenvalue (0-based), bisected to machine resolution.
    pub fn eigenvalue(&self, k: usize) -> f64 {
        assert!(k < self.len());
        let (mut lo, mut hi) = self.gershgorin();
        let pad = 1e-12 * (hi - lo).abs().max(1.0);
        lo -= pad;
        hi += pad;
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.count_below(mid) <= k {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Unit eigenvector for a (converged) eigenvalue by inverse iteration.
    pub fn eigenvector(&self, lambda: f64) -> Vec<f64> {
        let n = self.len();
        let (lo, hi) = self.gershgorin();
        let shift = lambda + 1e-13 * (hi - lo).abs().max(1.0);
        let mut x: Vec<f64> = (0..n)
            .map(|i| 1.0 + 0.37 * ((i as f64) * 0.61).sin())
            .collect();
        normalize(&mut x);
        for _ in 0..4 {
            x = self.solve_shifted(shift, &x);
            normalize(&mut x);
        }
        x
    }

    /// Solves `(A - shift I) y = b` by Gaussian elimination with partial pivoting.
    fn solve_shifted(&self, shift: f64, b: &[f64]) -> Vec<f64> {
        let n = self.len();
        // rows stored as (a_i,i, a_i,i+1, a_i,i+2) after elimination
        let mut d: Vec<f64> = self.diag.iter().map(|v| v - shift).collect();
        let mut u1: Vec<f64> = (0..n)
            .map(|i| if i + 1 < n { self.off[i] } else { 0.0 })
            .collect();
        let mut u2 = vec![0.0; n];
        let mut l: Vec<f64> = self.off.clone();
        let mut rhs = b.to_vec();
        let tiny = f64::EPSILON * self.gershgorin().1.abs().max(1.0);
        for i in 0..n.saturating_sub(1) {
            // row i+1 has sub-diagonal l[i], diagonal d[i+1], super u1[i+1]
            if l[i].abs() > d[i].abs() {
                // swap rows i and i+1
                let (ri0, ri1, ri2) = (d[i], u1[i], u2[i]);
                d[i] = l[i];
                u1[i] = d[i + 1];
                u2[i] = u1[i + 1];
                l[i] = ri0;
                d[i + 1] = ri1;
                u1[i + 1] = ri2;
                rhs.swap(i, i + 1);
            }
            if d[i] == 0.0 {
                d[i] = tiny;
            }
            let factor = l[i] / d[i];
            d[i + 1] -= factor * u1[i];
            u1[i + 1] -= factor * u2[i];
            rhs[i + 1] -= factor * rhs[i];
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        let mut y = vec![0.0; n];
        for i in (0..n).rev() {
            let mut acc = rhs[i];
            if i + 1 < n {
                acc -= u1[i] * y[i + 1];
            }
            if i + 2 < n {
                acc -= u2[i] * y[i + 2];
            }
            y[i] = acc / d[i];
        }
        y
    }
}

fn normalize(x: &mut [f64]) {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    x.iter_mut().for_each(|v| *v /= norm);
}
