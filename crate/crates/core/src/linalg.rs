//! Dense helpers, GMRES, Lanczos and cubic splines.

use alloc::vec::Vec;

use crate::error::{invalid, Error, Result};
use crate::num::sqrt;

/// Solves `a x = b` in place by Gaussian elimination with partial pivoting.
/// `a` is row-major `n × n`.
pub fn solve_dense(a: &mut [f64], b: &mut [f64]) -> Result<()> {
    let n = b.len();
    if a.len() != n * n {
        return Err(invalid("matrix shape does not match right-hand side"));
    }
    for col in 0..n {
        let mut piv = col;
        for r in col + 1..n {
            if a[r * n + col].abs() > a[piv * n + col].abs() {
                piv = r;
            }
        }
        if a[piv * n + col] == 0.0 {
            return Err(invalid("singular matrix"));
        }
        if piv != col {
            for c in 0..n {
                a.swap(col * n + c, piv * n + c);
            }
            b.swap(col, piv);
        }
        let d = a[col * n + col];
        for r in col + 1..n {
            let factor = a[r * n + col] / d;
            if factor == 0.0 {
                continue;
            }
            for c in col..n {
                a[r * n + c] -= factor * a[col * n + c];
            }
            b[r] -= factor * b[col];
        }
    }
    for col in (0..n).rev() {
        let mut s = b[col];
        for c in col + 1..n {
            s -= a[col * n + c] * b[c];
        }
        b[col] = s / a[col * n + col];
    }
    Ok(())
}

#[derive(Debug, Clone, Copy)]
pub struct GmresOptions {
    /// Relative residual target `|b − A x| ≤ tol·|b|`.
    pub tol: f64,
    pub max_iter: usize,
    /// Krylov dimension between restarts.
    pub restart: usize,
}

impl Default for GmresOptions {
    fn default() -> Self {
        GmresOptions { tol: 1e-8, max_iter: 600, restart: 200 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GmresReport {
    pub iterations: usize,
    pub relative_residual: f64,
}

/// Right-preconditioned restarted GMRES under a caller-supplied inner product.
///
/// `apply(x, out)` computes `A x`, `precond(x, out)` an approximation of
/// `A⁻¹ x`. `x` holds the initial guess on entry and the solution on exit.
pub fn gmres(
    apply: &mut dyn FnMut(&[f64], &mut [f64]),
    precond: &mut dyn FnMut(&[f64], &mut [f64]),
    inner: &dyn Fn(&[f64], &[f64]) -> f64,
    b: &[f64],
    x: &mut [f64],
    opts: GmresOptions,
) -> Result<GmresReport> {
    let n = b.len();
    let bnorm = sqrt(inner(b, b).max(0.0));
    if bnorm == 0.0 {
        x.iter_mut().for_each(|v| *v = 0.0);
        return Ok(GmresReport { iterations: 0, relative_residual: 0.0 });
    }
    let m = opts.restart.max(1);
    let mut total = 0usize;
    let mut ax = alloc::vec![0.0; n];
    let mut rel = f64::INFINITY;
    while total < opts.max_iter {
        apply(x, &mut ax);
        let r: Vec<f64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
        let beta = sqrt(inner(&r, &r).max(0.0));
        rel = beta / bnorm;
        if rel <= opts.tol {
            return Ok(GmresReport { iterations: total, relative_residual: rel });
        }
        let mut v: Vec<Vec<f64>> = Vec::with_capacity(m + 1);
        let mut z: Vec<Vec<f64>> = Vec::with_capacity(m);
        v.push(r.iter().map(|t| t / beta).collect());
        let mut h = alloc::vec![0.0; (m + 1) * m];
        let mut cs = alloc::vec![0.0; m];
        let mut sn = alloc::vec![0.0; m];
        let mut g = alloc::vec![0.0; m + 1];
        g[0] = beta;
        let mut k = 0;
        while k < m && total < opts.max_iter {
            let mut zk = alloc::vec![0.0; n];
            precond(&v[k], &mut zk);
            let mut w = alloc::vec![0.0; n];
            apply(&zk, &mut w);
            z.push(zk);
            for _pass in 0..2 {
                for (i, vi) in v.iter().enumerate() {
                    let hij = inner(&w, vi);
                    h[i * m + k] += hij;
                    w.iter_mut().zip(vi).for_each(|(w, vi)| *w -= hij * vi);
                }
            }
            let hn = sqrt(inner(&w, &w).max(0.0));
            h[(k + 1) * m + k] = hn;
            for i in 0..k {
                let a = h[i * m + k];
                let bb = h[(i + 1) * m + k];
                h[i * m + k] = cs[i] * a + sn[i] * bb;
                h[(i + 1) * m + k] = -sn[i] * a + cs[i] * bb;
            }
            let a = h[k * m + k];
            let bb = h[(k + 1) * m + k];
            let d = crate::num::hypot(a, bb);
            cs[k] = if d == 0.0 { 1.0 } else { a / d };
            sn[k] = if d == 0.0 { 0.0 } else { bb / d };
            h[k * m + k] = d;
            h[(k + 1) * m + k] = 0.0;
            g[k + 1] = -sn[k] * g[k];
            g[k] *= cs[k];
            total += 1;
            k += 1;
            rel = g[k].abs() / bnorm;
            if rel <= opts.tol || hn == 0.0 {
                break;
            }
            v.push(w.iter().map(|t| t / hn).collect());
        }
        let mut y = alloc::vec![0.0; k];
        for i in (0..k).rev() {
            let mut s = g[i];
            for j in i + 1..k {
                s -= h[i * m + j] * y[j];
            }
            y[i] = s / h[i * m + i];
        }
        for (yi, zi) in y.iter().zip(&z) {
            x.iter_mut().zip(zi).for_each(|(x, z)| *x += yi * z);
        }
        if rel <= opts.tol {
            apply(x, &mut ax);
            let r: Vec<f64> = b.iter().zip(&ax).map(|(b, a)| b - a).collect();
            let true_rel = sqrt(inner(&r, &r).max(0.0)) / bnorm;
            if true_rel <= opts.tol * 10.0 {
                return Ok(GmresReport { iterations: total, relative_residual: true_rel });
            }
        }
    }
    Err(Error::NoConvergence { iterations: total, residual: rel })
}

/// Eigenvalues of the symmetric tridiagonal matrix with diagonal `a` and
/// off-diagonal `b` (`b.len() == a.len() − 1`), ascending, by Sturm bisection.
pub fn tridiagonal_eigenvalues(a: &[f64], b: &[f64]) -> Vec<f64> {
    let n = a.len();
    if n == 0 {
        return Vec::new();
    }
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..n {
        let r = if i > 0 { b[i - 1].abs() } else { 0.0 } + if i + 1 < n { b[i].abs() } else { 0.0 };
        lo = lo.min(a[i] - r);
        hi = hi.max(a[i] + r);
    }
    let count_below = |x: f64| -> usize {
        let mut c = 0;
        let mut d = 1.0;
        for i in 0..n {
            let off = if i > 0 { b[i - 1] * b[i - 1] } else { 0.0 };
            d = a[i] - x - if i > 0 { off / d } else { 0.0 };
            if d == 0.0 {
                d = -1e-300;
            }
            if d < 0.0 {
                c += 1;
            }
        }
        c
    };
    let span = (hi - lo).abs().max(1e-300);
    (0..n)
        .map(|k| {
            let (mut l, mut h) = (lo - 1e-12 * span, hi + 1e-12 * span);
            for _ in 0..200 {
                let mid = 0.5 * (l + h);
                if count_below(mid) > k {
                    h = mid;
                } else {
                    l = mid;
                }
                if h - l <= 1e-15 * span {
                    break;
                }
            }
            0.5 * (l + h)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LanczosReport {
    pub smallest: f64,
    pub largest: f64,
    pub steps: usize,
    /// Change of the smallest Ritz value over the last check interval.
    pub last_change: f64,
}

/// Extreme eigenvalues of a symmetric operator by Lanczos with full
/// reorthogonalization. `project` is applied to every Krylov vector and
/// restricts the iteration to a subspace; it must be an orthogonal projector
/// in the standard inner product.
pub fn lanczos_extremes(
    apply: &mut dyn FnMut(&[f64], &mut [f64]),
    project: &dyn Fn(&mut [f64]),
    start: &[f64],
    max_steps: usize,
    tol: f64,
) -> Result<LanczosReport> {
    let n = start.len();
    let dotp = |x: &[f64], y: &[f64]| x.iter().zip(y).map(|(a, b)| a * b).sum::<f64>();
    let mut q0: Vec<f64> = start.to_vec();
    project(&mut q0);
    let nrm = sqrt(dotp(&q0, &q0));
    if nrm == 0.0 {
        return Err(invalid("Lanczos start vector vanishes on the subspace"));
    }
    q0.iter_mut().for_each(|v| *v /= nrm);
    let mut basis: Vec<Vec<f64>> = alloc::vec![q0];
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let mut w = alloc::vec![0.0; n];
    let mut prev_small = f64::NAN;
    let mut change = f64::INFINITY;
    let mut report = None;
    for step in 0..max_steps.min(n) {
        apply(&basis[step], &mut w);
        project(&mut w);
        let a = dotp(&w, &basis[step]);
        alpha.push(a);
        for _pass in 0..2 {
            for q in basis.iter() {
                let c = dotp(&w, q);
                w.iter_mut().zip(q).for_each(|(w, q)| *w -= c * q);
            }
        }
        project(&mut w);
        let bn = sqrt(dotp(&w, &w));
        let done_check = (step + 1) % 5 == 0 || bn < 1e-12 || step + 1 == max_steps.min(n);
        if done_check {
            let ev = tridiagonal_eigenvalues(&alpha, &beta);
            let small = ev[0];
            let large = ev[ev.len() - 1];
            if prev_small.is_finite() {
                change = (small - prev_small).abs();
            }
            prev_small = small;
            report = Some(LanczosReport { smallest: small, largest: large, steps: step + 1, last_change: change });
            if change <= tol * small.abs().max(1e-300) || bn < 1e-12 {
                break;
            }
        }
        if bn < 1e-12 {
            break;
        }
        beta.push(bn);
        basis.push(w.iter().map(|t| t / bn).collect());
    }
    report.ok_or_else(|| invalid("Lanczos made no steps"))
}

/// Cubic spline with not-a-knot end conditions.
#[derive(Debug, Clone, PartialEq)]
pub struct CubicSpline {
    x: Vec<f64>,
    y: Vec<f64>,
    m: Vec<f64>,
}

impl CubicSpline {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        let n = x.len();
        if n < 4 || y.len() != n {
            return Err(invalid("spline needs at least four matching samples"));
        }
        if x.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(invalid("spline abscissae must be strictly increasing"));
        }
        let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
        let mut a = alloc::vec![0.0; n * n];
        let mut rhs = alloc::vec![0.0; n];
        a[0] = h[1];
        a[1] = -(h[0] + h[1]);
        a[2] = h[0];
        for i in 1..n - 1 {
            a[i * n + i - 1] = h[i - 1];
            a[i * n + i] = 2.0 * (h[i - 1] + h[i]);
            a[i * n + i + 1] = h[i];
            rhs[i] = 6.0 * ((y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1]);
        }
        let last = n - 1;
        a[last * n + last - 2] = h[last - 1];
        a[last * n + last - 1] = -(h[last - 2] + h[last - 1]);
        a[last * n + last] = h[last - 2];
        solve_dense(&mut a, &mut rhs)?;
        Ok(CubicSpline { x, y, m: rhs })
    }

    pub fn domain(&self) -> (f64, f64) {
        (self.x[0], self.x[self.x.len() - 1])
    }

    fn segment(&self, t: f64) -> usize {
        let n = self.x.len();
        match self.x.binary_search_by(|p| p.partial_cmp(&t).unwrap_or(core::cmp::Ordering::Less)) {
            Ok(i) => i.min(n - 2),
            Err(i) => i.saturating_sub(1).min(n - 2),
        }
    }

    /// Value and first derivative at `t`.
    pub fn eval(&self, t: f64) -> (f64, f64) {
        let i = self.segment(t);
        let h = self.x[i + 1] - self.x[i];
        let a = (self.x[i + 1] - t) / h;
        let b = (t - self.x[i]) / h;
        let (mi, mj) = (self.m[i], self.m[i + 1]);
        let val = a * self.y[i] + b * self.y[i + 1] + ((a * a * a - a) * mi + (b * b * b - b) * mj) * h * h / 6.0;
        let der = (self.y[i + 1] - self.y[i]) / h + (-(3.0 * a * a - 1.0) * mi + (3.0 * b * b - 1.0) * mj) * h / 6.0;
        (val, der)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_solve_recovers_known_solution() {
        let mut a = alloc::vec![4.0, 1.0, 0.0, 1.0, 3.0, 1.0, 0.0, 1.0, 2.0];
        let x = [1.0, -2.0, 0.5];
        let mut b = alloc::vec![4.0 - 2.0, 1.0 - 6.0 + 0.5, -2.0 + 1.0];
        solve_dense(&mut a, &mut b).unwrap();
        for (u, v) in b.iter().zip(x) {
            assert!((u - v).abs() < 1e-14);
        }
    }

    #[test]
    fn gmres_solves_nonsymmetric_system() {
        let n = 30;
        let mat = |i: usize, j: usize| -> f64 {
            if i == j {
                3.0 + i as f64 * 0.1
            } else {
                0.3 / (1.0 + (i as f64 - 2.0 * j as f64).abs())
            }
        };
        let xs: Vec<f64> = (0..n).map(|i| (i as f64 * 0.7).sin()).collect();
        let b: Vec<f64> = (0..n).map(|i| (0..n).map(|j| mat(i, j) * xs[j]).sum()).collect();
        let mut x = alloc::vec![0.0; n];
        let mut apply = |v: &[f64], out: &mut [f64]| {
            for i in 0..n {
                out[i] = (0..n).map(|j| mat(i, j) * v[j]).sum();
            }
        };
        let mut pre = |v: &[f64], out: &mut [f64]| out.copy_from_slice(v);
        let inner = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(a, b)| a * b).sum::<f64>();
        let rep = gmres(&mut apply, &mut pre, &inner, &b, &mut x, GmresOptions { tol: 1e-12, max_iter: 100, restart: 7 })
            .unwrap();
        assert!(rep.relative_residual < 1e-11);
        for (u, v) in x.iter().zip(&xs) {
            assert!((u - v).abs() < 1e-10);
        }
    }

    #[test]
    fn tridiagonal_eigenvalues_match_closed_form() {
        let n = 12;
        let a = alloc::vec![2.0; n];
        let b = alloc::vec![-1.0; n - 1];
        let ev = tridiagonal_eigenvalues(&a, &b);
        for (k, e) in ev.iter().enumerate() {
            let exact = 2.0 - 2.0 * libm::cos((k + 1) as f64 * crate::consts::PI / (n as f64 + 1.0));
            assert!((e - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn lanczos_finds_extremes_on_subspace() {
        let n = 40;
        let diag: Vec<f64> = (0..n).map(|i| 1.0 + i as f64).collect();
        let mut apply = |v: &[f64], out: &mut [f64]| {
            for i in 0..n {
                out[i] = diag[i] * v[i];
            }
        };
        // Exclude the first coordinate: smallest eigenvalue becomes 2.
        let project = |v: &mut [f64]| v[0] = 0.0;
        let start: Vec<f64> = (0..n).map(|i| 1.0 + 0.01 * i as f64).collect();
        let rep = lanczos_extremes(&mut apply, &project, &start, 40, 1e-12).unwrap();
        assert!((rep.smallest - 2.0).abs() < 1e-9);
        assert!((rep.largest - 40.0).abs() < 1e-9);
    }

    #[test]
    fn spline_reproduces_cubics() {
        let x: Vec<f64> = (0..10).map(|i| 0.5 + 0.3 * i as f64 + 0.01 * (i * i) as f64).collect();
        let f = |t: f64| 1.0 - 2.0 * t + 0.5 * t * t - 0.25 * t * t * t;
        let df = |t: f64| -2.0 + t - 0.75 * t * t;
        let y: Vec<f64> = x.iter().map(|&t| f(t)).collect();
        let s = CubicSpline::new(x, y).unwrap();
        for k in 0..50 {
            let t = 0.5 + k as f64 * 0.06;
            let (v, d) = s.eval(t);
            assert!((v - f(t)).abs() < 1e-11);
            assert!((d - df(t)).abs() < 1e-10);
        }
    }
}
