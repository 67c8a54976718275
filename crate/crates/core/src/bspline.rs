//! Univariate B-spline basis evaluation on open knot vectors.

/// Index `s` of the knot span `[U[s], U[s+1])` containing `t`, for a basis of
/// `n` functions of degree `p`. The right end of the knot range maps to the
/// last non-empty span.
pub fn find_span(knots: &[f64], p: usize, n: usize, t: f64) -> usize {
    if t >= knots[n] {
        let mut s = n - 1;
        while s > p && knots[s] == knots[s + 1] {
            s -= 1;
        }
        return s;
    }
    if t <= knots[p] {
        let mut s = p;
        while s < n - 1 && knots[s] == knots[s + 1] {
            s += 1;
        }
        return s;
    }
    let (mut lo, mut hi) = (p, n);
    let mut mid = (lo + hi) / 2;
    while t < knots[mid] || t >= knots[mid + 1] {
        if t < knots[mid] {
            hi = mid;
        } else {
            lo = mid;
        }
        mid = (lo + hi) / 2;
    }
    mid
}

/// Values and derivatives up to order `nd` of the `p + 1` basis functions that
/// are nonzero on span `s`. Row `k` holds the `k`-th derivatives of
/// `N_{s-p}, ..., N_s`.
pub fn basis_derivatives(knots: &[f64], p: usize, s: usize, t: f64, nd: usize) -> Vec<Vec<f64>> {
    let mut ndu = vec![vec![0.0; p + 1]; p + 1];
    let mut left = vec![0.0; p + 1];
    let mut right = vec![0.0; p + 1];
    ndu[0][0] = 1.0;
    for j in 1..=p {
        left[j] = t - knots[s + 1 - j];
        right[j] = knots[s + j] - t;
        let mut saved = 0.0;
        for r in 0..j {
            ndu[j][r] = right[r + 1] + left[j - r];
            let temp = ndu[r][j - 1] / ndu[j][r];
            ndu[r][j] = saved + right[r + 1] * temp;
            saved = left[j - r] * temp;
        }
        ndu[j][j] = saved;
    }

    let mut ders = vec![vec![0.0; p + 1]; nd + 1];
    for j in 0..=p {
        ders[0][j] = ndu[j][p];
    }
    let mut a = vec![vec![0.0; p + 1]; 2];
    for r in 0..=p {
        let (mut s1, mut s2) = (0usize, 1usize);
        a[0][0] = 1.0;
        for k in 1..=nd.min(p) {
            let mut d = 0.0;
            let rk = r as isize - k as isize;
            let pk = p - k;
            if r >= k {
                a[s2][0] = a[s1][0] / ndu[pk + 1][rk as usize];
                d = a[s2][0] * ndu[rk as usize][pk];
            }
            let j1 = if rk >= -1 { 1 } else { (-rk) as usize };
            let j2 = if r as isize - 1 <= pk as isize { k - 1 } else { p - r };
            for j in j1..=j2 {
                let idx = (rk + j as isize) as usize;
                a[s2][j] = (a[s1][j] - a[s1][j - 1]) / ndu[pk + 1][idx];
                d += a[s2][j] * ndu[idx][pk];
            }
            if r <= pk {
                a[s2][k] = -a[s1][k - 1] / ndu[pk + 1][r];
                d += a[s2][k] * ndu[r][pk];
            }
            ders[k][r] = d;
            std::mem::swap(&mut s1, &mut s2);
        }
    }
    let mut fac = p as f64;
    for k in 1..=nd.min(p) {
        for v in ders[k].iter_mut() {
            *v *= fac;
        }
        fac *= (p - k) as f64;
    }
    ders
}

/// Open (clamped) knot vector over `[a, b]` with `cells` uniform spans and
/// maximal continuity.
pub fn open_uniform_knots(p: usize, cells: usize, a: f64, b: f64) -> Vec<f64> {
    let mut knots = Vec::with_capacity(cells + 2 * p + 1);
    knots.extend(std::iter::repeat_n(a, p + 1));
    for i in 1..cells {
        knots.push(a + (b - a) * i as f64 / cells as f64);
    }
    knots.extend(std::iter::repeat_n(b, p + 1));
    knots
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_of_unity_and_derivative_sum() {
        let knots = open_uniform_knots(3, 5, 0.0, 2.0);
        let n = knots.len() - 4;
        for k in 0..=200 {
            let t = 2.0 * k as f64 / 200.0;
            let s = find_span(&knots, 3, n, t);
            let d = basis_derivatives(&knots, 3, s, t, 2);
            let sum: f64 = d[0].iter().sum();
            assert!((sum - 1.0).abs() < 1e-14);
            assert!(d[0].iter().all(|&v| v >= -1e-15));
            assert!(d[1].iter().sum::<f64>().abs() < 1e-12);
            assert!(d[2].iter().sum::<f64>().abs() < 1e-10);
        }
    }

    #[test]
    fn span_lookup_at_ends_and_interior_knots() {
        let knots = vec![0.0, 0.0, 0.0, 0.5, 1.0, 1.0, 1.0];
        assert_eq!(find_span(&knots, 2, 4, 0.0), 2);
        assert_eq!(find_span(&knots, 2, 4, 0.5), 3);
        assert_eq!(find_span(&knots, 2, 4, 0.49), 2);
        assert_eq!(find_span(&knots, 2, 4, 1.0), 3);
    }

    #[test]
    fn derivative_matches_finite_difference() {
        let knots = vec![0.0, 0.0, 0.0, 0.3, 0.7, 1.0, 1.0, 1.0];
        let n = 5;
        let t = 0.41;
        let s = find_span(&knots, 2, n, t);
        let d = basis_derivatives(&knots, 2, s, t, 1);
        let h = 1e-6;
        let dp = basis_derivatives(&knots, 2, s, t + h, 0);
        let dm = basis_derivatives(&knots, 2, s, t - h, 0);
        for j in 0..3 {
            let fd = (dp[0][j] - dm[0][j]) / (2.0 * h);
            assert!((fd - d[1][j]).abs() < 1e-7);
        }
    }
}
