use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Univariate polynomial in Bernstein form on `[t0, t1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Bernstein1D {
    coeffs: Vec<f64>,
    t0: f64,
    t1: f64,
}

impl Bernstein1D {
    pub fn new(coeffs: Vec<f64>, t0: f64, t1: f64) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::Domain("Bernstein polynomial needs coefficients".into()));
        }
        if !(t0 < t1) {
            return Err(Error::Domain(format!("empty interval [{t0}, {t1}]")));
        }
        Ok(Bernstein1D { coeffs, t0, t1 })
    }

    pub(crate) fn from_parts(coeffs: Vec<f64>, t0: f64, t1: f64) -> Self {
        debug_assert!(!coeffs.is_empty() && t0 < t1);
        Bernstein1D { coeffs, t0, t1 }
    }

    /// Interpolates `f` at `d + 1` Chebyshev nodes of `[t0, t1]`.
    /// Polynomials of degree `<= d` are reproduced exactly.
    pub fn interpolate(f: impl Fn(f64) -> f64, t0: f64, t1: f64, d: usize) -> Result<Self> {
        if !(t0 < t1) {
            return Err(Error::Domain(format!("empty interval [{t0}, {t1}]")));
        }
        let nodes = chebyshev_nodes(d);
        let values: Vec<f64> = nodes.iter().map(|&s| f(t0 + (t1 - t0) * s)).collect();
        let inv = collocation_inverse(d);
        let coeffs = apply(&inv, &values);
        Ok(Bernstein1D { coeffs, t0, t1 })
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn interval(&self) -> (f64, f64) {
        (self.t0, self.t1)
    }

    /// Largest coefficient magnitude.
    pub fn scale(&self) -> f64 {
        self.coeffs.iter().fold(0.0, |m, c| m.max(c.abs()))
    }

    pub fn eval(&self, t: f64) -> f64 {
        de_casteljau(&self.coeffs, (t - self.t0) / (self.t1 - self.t0))
    }

    /// Derivative with respect to `t`.
    pub fn derivative(&self) -> Bernstein1D {
        let d = self.degree();
        if d == 0 {
            return Bernstein1D::from_parts(vec![0.0], self.t0, self.t1);
        }
        let s = d as f64 / (self.t1 - self.t0);
        let coeffs = self.coeffs.windows(2).map(|w| s * (w[1] - w[0])).collect();
        Bernstein1D::from_parts(coeffs, self.t0, self.t1)
    }

    /// Same polynomial with degree raised by one.
    pub fn elevate(&self) -> Bernstein1D {
        let d = self.degree();
        let n = d + 1;
        let mut out = Vec::with_capacity(n + 1);
        out.push(self.coeffs[0]);
        for i in 1..n {
            let a = i as f64 / n as f64;
            out.push(a * self.coeffs[i - 1] + (1.0 - a) * self.coeffs[i]);
        }
        out.push(self.coeffs[d]);
        Bernstein1D::from_parts(out, self.t0, self.t1)
    }

    pub fn elevate_to(&self, degree: usize) -> Bernstein1D {
        let mut b = self.clone();
        while b.degree() < degree {
            b = b.elevate();
        }
        b
    }

    /// `self + s * other` on a common interval, raising degrees as needed.
    pub fn axpy(&self, s: f64, other: &Bernstein1D) -> Bernstein1D {
        let d = self.degree().max(other.degree());
        let a = self.elevate_to(d);
        let b = other.elevate_to(d);
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + s * y).collect();
        Bernstein1D::from_parts(coeffs, self.t0, self.t1)
    }

    /// Product of two polynomials on the same interval.
    pub fn mul(&self, other: &Bernstein1D) -> Bernstein1D {
        let (m, n) = (self.degree(), other.degree());
        let mut out = vec![0.0; m + n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += binom(m, i) * binom(n, j) / binom(m + n, i + j) * a * b;
            }
        }
        Bernstein1D::from_parts(out, self.t0, self.t1)
    }

    /// Splits at local parameter `s` in `(0, 1)`.
    pub fn split(&self, s: f64) -> (Bernstein1D, Bernstein1D) {
        let (l, r) = split_coeffs(&self.coeffs, s);
        let tm = self.t0 + (self.t1 - self.t0) * s;
        (
            Bernstein1D::from_parts(l, self.t0, tm),
            Bernstein1D::from_parts(r, tm, self.t1),
        )
    }

    /// Real roots in `[t0, t1]`; see [`roots_in_interval`].
    pub fn roots(&self, tol: f64) -> Result<Vec<f64>> {
        roots_in_interval(self, tol)
    }
}

/// De Casteljau evaluation at local parameter `s`.
pub(crate) fn de_casteljau(c: &[f64], s: f64) -> f64 {
    let mut b = c.to_vec();
    let n = b.len();
    for r in 1..n {
        for i in 0..n - r {
            b[i] = (1.0 - s) * b[i] + s * b[i + 1];
        }
    }
    b[0]
}

/// Value and derivative (w.r.t. the local parameter) at `s`.
fn de_casteljau_with_derivative(c: &[f64], s: f64) -> (f64, f64) {
    let n = c.len();
    if n == 1 {
        return (c[0], 0.0);
    }
    let mut b = c.to_vec();
    for r in 1..n - 1 {
        for i in 0..n - r {
            b[i] = (1.0 - s) * b[i] + s * b[i + 1];
        }
    }
    let d = (n - 1) as f64 * (b[1] - b[0]);
    ((1.0 - s) * b[0] + s * b[1], d)
}

pub(crate) fn split_coeffs(c: &[f64], s: f64) -> (Vec<f64>, Vec<f64>) {
    let n = c.len();
    let mut b = c.to_vec();
    let mut left = Vec::with_capacity(n);
    let mut right = vec![0.0; n];
    left.push(b[0]);
    right[n - 1] = b[n - 1];
    for r in 1..n {
        for i in 0..n - r {
            b[i] = (1.0 - s) * b[i] + s * b[i + 1];
        }
        left.push(b[0]);
        right[n - 1 - r] = b[n - 1 - r];
    }
    (left, right)
}

pub(crate) fn binom(n: usize, k: usize) -> f64 {
    let mut r = 1.0;
    for i in 0..k {
        r = r * (n - i) as f64 / (i + 1) as f64;
    }
    r
}

/// The `d + 1` Chebyshev nodes (zeros of `T_{d+1}`) mapped to `[0, 1]`,
/// ascending.
pub(crate) fn chebyshev_nodes(d: usize) -> Vec<f64> {
    let n = (d + 1) as f64;
    (0..=d)
        .map(|k| 0.5 * (1.0 - (PI * (2 * k + 1) as f64 / (2.0 * n)).cos()))
        .collect()
}

fn bernstein_basis(d: usize, i: usize, s: f64) -> f64 {
    binom(d, i) * s.powi(i as i32) * (1.0 - s).powi((d - i) as i32)
}

/// Inverse of the Bernstein collocation matrix at the Chebyshev nodes, row
/// major.
pub(crate) fn collocation_inverse(d: usize) -> Vec<f64> {
    let n = d + 1;
    let nodes = chebyshev_nodes(d);
    let mut m = vec![0.0; n * n];
    for (k, &s) in nodes.iter().enumerate() {
        for i in 0..n {
            m[k * n + i] = bernstein_basis(d, i, s);
        }
    }
    invert(&m, n).expect("Bernstein collocation at distinct nodes is nonsingular")
}

pub(crate) fn apply(m: &[f64], v: &[f64]) -> Vec<f64> {
    let n = v.len();
    (0..n).map(|r| (0..n).map(|c| m[r * n + c] * v[c]).sum()).collect()
}

/// Gauss–Jordan inverse with partial pivoting.
fn invert(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut m = a.to_vec();
    let mut inv = vec![0.0; n * n];
    for i in 0..n {
        inv[i * n + i] = 1.0;
    }
    for col in 0..n {
        let piv = (col..n).max_by(|&r, &s| m[r * n + col].abs().total_cmp(&m[s * n + col].abs()))?;
        if m[piv * n + col].abs() < 1e-300 {
            return None;
        }
        for k in 0..n {
            m.swap(col * n + k, piv * n + k);
            inv.swap(col * n + k, piv * n + k);
        }
        let d = m[col * n + col];
        for k in 0..n {
            m[col * n + k] /= d;
            inv[col * n + k] /= d;
        }
        for r in 0..n {
            if r != col {
                let f = m[r * n + col];
                if f != 0.0 {
                    for k in 0..n {
                        m[r * n + k] -= f * m[col * n + k];
                        inv[r * n + k] -= f * inv[col * n + k];
                    }
                }
            }
        }
    }
    Some(inv)
}

/// Sign of `v` with magnitudes at or below `eps` treated as zero.
fn sign(v: f64, eps: f64) -> i8 {
    if v > eps {
        1
    } else if v < -eps {
        -1
    } else {
        0
    }
}

const MAX_DEPTH: usize = 60;
const BISECTION_STEPS: usize = 30;
const NEWTON_STEPS: usize = 5;

/// All real roots of `b` in its closed interval, sorted ascending.
///
/// Roots are isolated by de Casteljau subdivision driven by coefficient sign
/// variations, then polished by bisection and Newton until
/// `|f(root)| <= tol * max|b_i|`. Roots of even multiplicity (tangential
/// contacts) are reported once.
pub fn roots_in_interval(b: &Bernstein1D, tol: f64) -> Result<Vec<f64>> {
    roots_with_scale(b, tol, b.scale())
}

/// As [`roots_in_interval`], but coefficients at or below `1e-14 * scale` are
/// treated as zero. Callers pass the magnitude of the function the
/// polynomial was cut from, so that a restriction which vanishes relative to
/// its source is reported as [`Error::DegeneratePolynomial`].
pub fn roots_with_scale(b: &Bernstein1D, tol: f64, scale: f64) -> Result<Vec<f64>> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("root tolerance must be positive, got {tol}")));
    }
    let own = b.scale();
    let scale = scale.max(own);
    let eps = 1e-14 * scale;
    if !(own > eps) {
        return Err(Error::DegeneratePolynomial);
    }
    let ftol = tol * scale;
    let c = &b.coeffs;
    let d = c.len() - 1;
    let mut found: Vec<f64> = Vec::new();
    if c[0].abs() <= ftol {
        found.push(0.0);
    }
    if c[d].abs() <= ftol {
        found.push(1.0);
    }
    if d > 0 {
        let mut work = c.clone();
        // endpoint zeros take the sign of their neighbours during isolation
        if work[0].abs() <= ftol {
            work[0] = 0.0;
        }
        if work[d].abs() <= ftol {
            work[d] = 0.0;
        }
        isolate(c, &work, 0.0, 1.0, 0, eps, ftol, &mut found)?;
    }
    found.sort_by(|a, b| a.total_cmp(b));
    let merge = 1e-11;
    let mut out: Vec<f64> = Vec::with_capacity(found.len());
    for s in found {
        match out.last() {
            Some(&last) if s - last <= merge => {}
            _ => out.push(s),
        }
    }
    let (t0, t1) = (b.t0, b.t1);
    Ok(out
        .into_iter()
        .map(|s| {
            if s == 0.0 {
                t0
            } else if s == 1.0 {
                t1
            } else {
                t0 + (t1 - t0) * s
            }
        })
        .collect())
}

#[allow(clippy::too_many_arguments)]
fn isolate(
    orig: &[f64],
    c: &[f64],
    a: f64,
    b: f64,
    depth: usize,
    eps: f64,
    ftol: f64,
    out: &mut Vec<f64>,
) -> Result<()> {
    let signs: Vec<i8> = c.iter().map(|&v| sign(v, eps)).filter(|&s| s != 0).collect();
    let variations = signs.windows(2).filter(|w| w[0] != w[1]).count();
    if variations == 0 {
        return Ok(());
    }
    if variations == 1 {
        let s_lo = signs[0];
        out.push(polish(orig, a, b, s_lo, ftol));
        return Ok(());
    }
    if b - a < 1e-13 || c.iter().all(|v| v.abs() <= ftol) {
        // cluster of nearly coincident roots
        out.push(0.5 * (a + b));
        return Ok(());
    }
    if depth >= MAX_DEPTH {
        return Err(Error::NonConvergence(format!(
            "subdivision depth exceeded near [{a}, {b}]"
        )));
    }
    let (mut l, mut r) = split_coeffs(c, 0.5);
    let m = 0.5 * (a + b);
    let n = l.len() - 1;
    if l[n].abs() <= ftol {
        out.push(m);
        l[n] = 0.0;
        r[0] = 0.0;
    }
    isolate(orig, &l, a, m, depth + 1, eps, ftol, out)?;
    isolate(orig, &r, m, b, depth + 1, eps, ftol, out)
}

/// Refines the single sign change of `orig` inside `(a, b)`; `s_lo` is the
/// sign just to the right of `a`.
fn polish(orig: &[f64], a: f64, b: f64, s_lo: i8, ftol: f64) -> f64 {
    let (mut lo, mut hi) = (a, b);
    let lo_positive = s_lo > 0;
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        let v = de_casteljau(orig, mid);
        if v == 0.0 {
            return mid;
        }
        if (v > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..NEWTON_STEPS {
        let (v, dv) = de_casteljau_with_derivative(orig, x);
        if v == 0.0 {
            return x;
        }
        if (v > 0.0) == lo_positive {
            lo = x;
        } else {
            hi = x;
        }
        if dv == 0.0 {
            break;
        }
        let next = x - v / dv;
        if (next - x).abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
            return next.clamp(lo, hi);
        }
        if !(next > lo && next < hi) {
            break;
        }
        x = next;
    }
    // Newton left the bracket or stalled: finish by bisection
    let mut steps = 0;
    x = 0.5 * (lo + hi);
    while steps < 64 && hi - lo > 2.0 * f64::EPSILON * hi.abs().max(1e-300) {
        let v = de_casteljau(orig, x);
        if v == 0.0 || (v.abs() <= ftol && hi - lo <= 1e-15) {
            break;
        }
        if (v > 0.0) == lo_positive {
            lo = x;
        } else {
            hi = x;
        }
        x = 0.5 * (lo + hi);
        steps += 1;
    }
    x
}
