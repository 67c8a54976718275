//! Banded symmetric storage, constraints and the direct solver.

use crate::error::{Error, Result};

/// Square matrix stored as a full band of half-width `bw` (both triangles).
#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    bw: usize,
    data: Vec<f64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, bw: usize) -> Self {
        BandMatrix {
            n,
            bw,
            data: vec![0.0; n * (2 * bw + 1)],
        }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn bandwidth(&self) -> usize {
        self.bw
    }

    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        (i.abs_diff(j) <= self.bw).then(|| i * (2 * self.bw + 1) + (j + self.bw - i))
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.slot(i, j).map_or(0.0, |k| self.data[k])
    }

    /// Adds `v` at `(i, j)`; panics if the entry lies outside the band.
    pub fn add(&mut self, i: usize, j: usize, v: f64) {
        let k = self.slot(i, j).expect("entry outside the band");
        self.data[k] += v;
    }

    fn cols(&self, i: usize) -> std::ops::Range<usize> {
        i.saturating_sub(self.bw)..(i + self.bw + 1).min(self.n)
    }

    pub fn matvec(&self, x: &[f64]) -> Vec<f64> {
        (0..self.n).map(|i| self.cols(i).map(|j| self.get(i, j) * x[j]).sum()).collect()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Largest `|A_ij - A_ji|`.
    pub fn asymmetry(&self) -> f64 {
        let mut m = 0.0f64;
        for i in 0..self.n {
            for j in self.cols(i) {
                m = m.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        m
    }
}

/// Stiffness, load and the prescribed values of constrained dofs.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub stiffness: BandMatrix,
    pub load: Vec<f64>,
    pub fixed: Vec<Option<f64>>,
}

impl LinearSystem {
    pub fn new(n: usize, bw: usize) -> Self {
        LinearSystem {
            stiffness: BandMatrix::zeros(n, bw),
            load: vec![0.0; n],
            fixed: vec![None; n],
        }
    }

    pub fn n_dofs(&self) -> usize {
        self.load.len()
    }

    pub fn constrain(&mut self, dof: usize, value: f64) {
        self.fixed[dof] = Some(value);
    }

    pub fn n_free(&self) -> usize {
        self.fixed.iter().filter(|f| f.is_none()).count()
    }
}

/// Solution vector and the diagnostics of the solve.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub values: Vec<f64>,
    pub n_free: usize,
    /// Ratio of extreme eigenvalues of the diagonally scaled free block.
    pub cond_estimate: f64,
}

/// Lower Cholesky factor in band storage.
struct BandCholesky {
    n: usize,
    bw: usize,
    l: Vec<f64>,
}

impl BandCholesky {
    fn at(&self, i: usize, j: usize) -> f64 {
        self.l[i * (self.bw + 1) + (j + self.bw - i)]
    }

    fn factor(a: &BandMatrix, dofs: &[usize]) -> Result<Self> {
        let (n, bw) = (a.n, a.bw);
        let mut f = BandCholesky {
            n,
            bw,
            l: vec![0.0; n * (bw + 1)],
        };
        for i in 0..n {
            for j in i.saturating_sub(bw)..=i {
                let mut s = a.get(i, j);
                for k in i.saturating_sub(bw).max(j.saturating_sub(bw))..j {
                    s -= f.at(i, k) * f.at(j, k);
                }
                let slot = i * (bw + 1) + (j + bw - i);
                if i == j {
                    // pivots of the unit-diagonal matrix; tiny means rank loss
                    if !(s > 1e-14) {
                        return Err(Error::Singular(format!(
                            "pivot {s:e} at dof {} (free row {i} of {n})",
                            dofs[i]
                        )));
                    }
                    f.l[slot] = s.sqrt();
                } else {
                    f.l[slot] = s / f.at(j, j);
                }
            }
        }
        Ok(f)
    }

    fn solve(&self, b: &[f64]) -> Vec<f64> {
        let mut y = b.to_vec();
        for i in 0..self.n {
            let mut s = y[i];
            for k in i.saturating_sub(self.bw)..i {
                s -= self.at(i, k) * y[k];
            }
            y[i] = s / self.at(i, i);
        }
        for i in (0..self.n).rev() {
            let mut s = y[i];
            for k in i + 1..(i + self.bw + 1).min(self.n) {
                s -= self.at(k, i) * y[k];
            }
            y[i] = s / self.at(i, i);
        }
        y
    }
}

fn normalize(v: &mut [f64]) -> f64 {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if n > 0.0 {
        v.iter_mut().for_each(|x| *x /= n);
    }
    n
}

const EIGEN_ITERATIONS: usize = 60;

fn start_vector(n: usize) -> Vec<f64> {
    (0..n).map(|i| 1.0 + 0.5 * ((i as f64) * 0.618_033_988_75).fract()).collect()
}

/// Power and inverse iteration on the scaled matrix.
fn condition_estimate(a: &BandMatrix, chol: &BandCholesky) -> f64 {
    let n = a.n;
    if n == 0 {
        return 1.0;
    }
    let mut v = start_vector(n);
    normalize(&mut v);
    let mut lmax = 0.0;
    for _ in 0..EIGEN_ITERATIONS {
        let mut w = a.matvec(&v);
        lmax = normalize(&mut w);
        v = w;
    }
    let mut v = start_vector(n);
    normalize(&mut v);
    let mut inv_lmin = 0.0;
    for _ in 0..EIGEN_ITERATIONS {
        let mut w = chol.solve(&v);
        inv_lmin = normalize(&mut w);
        v = w;
    }
    lmax * inv_lmin
}

/// Solves for the free dofs after moving the prescribed values to the right
/// hand side. The free block is scaled to unit diagonal before factoring.
pub fn solve_system(sys: &LinearSystem) -> Result<SolveResult> {
    let n = sys.n_dofs();
    let free: Vec<usize> = (0..n).filter(|&d| sys.fixed[d].is_none()).collect();
    let mut slot = vec![usize::MAX; n];
    for (r, &d) in free.iter().enumerate() {
        slot[d] = r;
    }
    let k = &sys.stiffness;
    let bw = k.bw;

    let mut scale = Vec::with_capacity(free.len());
    for &d in &free {
        let diag = k.get(d, d);
        if !(diag > 0.0) {
            return Err(Error::Singular(format!("dof {d} has stiffness diagonal {diag:e}")));
        }
        scale.push(1.0 / diag.sqrt());
    }

    // renumbering keeps the order, so the band does not grow
    let mut a = BandMatrix::zeros(free.len(), bw);
    let mut rhs = vec![0.0; free.len()];
    for (r, &d) in free.iter().enumerate() {
        let mut b = sys.load[d];
        for c in k.cols(d) {
            let v = k.get(d, c);
            if v == 0.0 {
                continue;
            }
            match sys.fixed[c] {
                Some(g) => b -= v * g,
                None => {
                    let s = slot[c];
                    a.add(r, s, v * scale[r] * scale[s]);
                }
            }
        }
        rhs[r] = b * scale[r];
    }

    let chol = BandCholesky::factor(&a, &free)?;
    let y = chol.solve(&rhs);
    let mut values: Vec<f64> = sys.fixed.iter().map(|f| f.unwrap_or(0.0)).collect();
    for (r, &d) in free.iter().enumerate() {
        values[d] = y[r] * scale[r];
    }
    Ok(SolveResult {
        values,
        n_free: free.len(),
        cond_estimate: condition_estimate(&a, &chol),
    })
}
