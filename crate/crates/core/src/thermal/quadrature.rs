//! Gaussian quadrature rules from three-term recurrences (Golub–Welsch).

use nalgebra::{DMatrix, SymmetricEigen};

/// Nodes and weights of the Gauss rule with Jacobi coefficients `a` (diagonal)
/// and `b` (squared off-diagonal, `b[0]` unused) for a measure of mass `mu0`.
fn golub_welsch(a: &[f64], b: &[f64], mu0: f64) -> Vec<(f64, f64)> {
    let n = a.len();
    let mut j = DMatrix::zeros(n, n);
    for i in 0..n {
        j[(i, i)] = a[i];
        if i > 0 {
            let off = b[i].sqrt();
            j[(i, i - 1)] = off;
            j[(i - 1, i)] = off;
        }
    }
    let eig = SymmetricEigen::new(j);
    let mut rule: Vec<(f64, f64)> = (0..n)
        .map(|k| (eig.eigenvalues[k], mu0 * eig.eigenvectors[(0, k)].powi(2)))
        .collect();
    rule.sort_by(|x, y| x.0.total_cmp(&y.0));
    rule
}

/// Gauss–Hermite rule for the standard normal density, weights summing to 1.
///
/// The nodes are symmetrised so that `x[k] = -x[n-1-k]` holds exactly.
pub fn gauss_hermite(n: usize) -> Vec<(f64, f64)> {
    let a = vec![0.0; n];
    let b: Vec<f64> = (0..n).map(|k| k as f64).collect();
    symmetrise(golub_welsch(&a, &b, 1.0))
}

/// Gauss–Legendre rule on [−1, 1].
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let a = vec![0.0; n];
    let b: Vec<f64> = (0..n).map(|k| {
        let k = k as f64;
        k * k / (4.0 * k * k - 1.0)
    }).collect();
    symmetrise(golub_welsch(&a, &b, 2.0))
}

fn symmetrise(mut rule: Vec<(f64, f64)>) -> Vec<(f64, f64)> {
    let n = rule.len();
    for k in 0..n / 2 {
        let x = 0.5 * (rule[n - 1 - k].0 - rule[k].0);
        let w = 0.5 * (rule[k].1 + rule[n - 1 - k].1);
        rule[k] = (-x, w);
        rule[n - 1 - k] = (x, w);
    }
    if n % 2 == 1 {
        rule[n / 2].0 = 0.0;
    }
    rule
}

/// Gauss rule for the discrete measure `ws` on `xs` up to order `n`, by the
/// Stieltjes procedure.
fn stieltjes(xs: &[f64], ws: &[f64], n: usize) -> Vec<(f64, f64)> {
    let m = xs.len();
    let mut a = vec![0.0; n];
    let mut b = vec![0.0; n];
    let mut prev = vec![0.0; m];
    // orthonormal polynomials evaluated on the mesh
    let mass: f64 = ws.iter().sum();
    let mut cur = vec![1.0 / mass.sqrt(); m];
    let mut beta_prev = 0.0;
    for k in 0..n {
        let ak: f64 = (0..m).map(|i| ws[i] * xs[i] * cur[i] * cur[i]).sum();
        a[k] = ak;
        b[k] = beta_prev * beta_prev;
        let mut next: Vec<f64> = (0..m).map(|i| (xs[i] - ak) * cur[i] - beta_prev * prev[i]).collect();
        let nrm: f64 = (0..m).map(|i| ws[i] * next[i] * next[i]).sum::<f64>().sqrt();
        next.iter_mut().for_each(|v| *v /= nrm);
        prev = std::mem::replace(&mut cur, next);
        beta_prev = nrm;
    }
    golub_welsch(&a, &b, mass)
}

/// Composite 20-point Gauss–Legendre mesh of `density` on `[lo, hi]`.
fn mesh(lo: f64, hi: f64, panels: usize, density: impl Fn(f64) -> f64) -> (Vec<f64>, Vec<f64>) {
    let gl = gauss_legendre(20);
    let h = (hi - lo) / panels as f64;
    let mut xs = Vec::with_capacity(panels * gl.len());
    let mut ws = Vec::with_capacity(panels * gl.len());
    for p in 0..panels {
        let mid = lo + (p as f64 + 0.5) * h;
        for &(x, w) in &gl {
            let s = mid + 0.5 * h * x;
            xs.push(s);
            ws.push(0.5 * h * w * density(s));
        }
    }
    (xs, ws)
}

fn half_normal(s: f64) -> f64 {
    (2.0 / std::f64::consts::PI).sqrt() * (-0.5 * s * s).exp()
}

/// Gauss rule for the half-normal density √(2/π)·e^(−s²/2) on [0, ∞).
///
/// Recurrence coefficients come from a discretised Stieltjes procedure on a
/// fine composite Gauss–Legendre mesh.
pub fn half_range_gauss(n: usize) -> Vec<(f64, f64)> {
    let (xs, ws) = mesh(0.0, 16.0, 80, half_normal);
    stieltjes(&xs, &ws, n)
}

/// Rule for the half-normal density on [lo, ∞), Gauss in u = ln(s + shift),
/// so that nodes are spaced roughly geometrically from `lo` up to about
/// `shift` and evenly beyond. Returns (s, weight) in increasing s; weights
/// sum to the mass above `lo`.
pub fn log_half_range_gauss(n: usize, lo: f64, shift: f64) -> Vec<(f64, f64)> {
    assert!(lo > 0.0 && lo < 1.0, "lower bound {lo} outside (0, 1)");
    assert!(shift >= 0.0, "negative shift {shift}");
    let (us, ws) = mesh((lo + shift).ln(), (9.0 + shift).ln(), 300, |u| {
        let t = u.exp();
        t * half_normal(t - shift)
    });
    stieltjes(&us, &ws, n).into_iter().map(|(u, w)| (u.exp() - shift, w)).collect()
}

/// Half-normal mass on [0, s].
pub fn half_normal_mass_below(s: f64) -> f64 {
    gauss_legendre(20).iter().map(|&(x, w)| 0.5 * s * w * half_normal(0.5 * s * (x + 1.0))).sum()
}

/// Composite 4-point Gauss–Legendre rule on `[lo, hi]` with panels graded
/// geometrically towards each point of `features`.
///
/// Panels touching a feature have width `ratio·width`; they grow by a factor
/// `1 + ratio` per panel away from it, never exceeding `cap`.
pub fn graded_rule(lo: f64, hi: f64, features: &[f64], width: f64, ratio: f64, cap: f64) -> Vec<(f64, f64)> {
    let mut marks: Vec<f64> = features.iter().copied().filter(|f| *f > lo && *f < hi).collect();
    marks.sort_by(f64::total_cmp);
    marks.dedup_by(|x, y| (*x - *y).abs() < ratio * width);

    let mut edges = vec![lo];
    let mut bounds = vec![(lo, false)];
    bounds.extend(marks.iter().map(|&m| (m, true)));
    bounds.push((hi, false));
    for pair in bounds.windows(2) {
        let ((a, ga), (b, gb)) = (pair[0], pair[1]);
        let split = match (ga, gb) {
            (true, true) => 0.5 * (a + b),
            (true, false) => b,
            (false, true) => a,
            (false, false) => a,
        };
        let mut left = Vec::new();
        let mut x = a;
        while x < split {
            let step = if ga { (ratio * (width + x - a)).min(cap) } else { cap };
            x = (x + step).min(split);
            left.push(x);
        }
        let mut right = Vec::new();
        let mut x = b;
        while x > split {
            let step = if gb { (ratio * (width + b - x)).min(cap) } else { cap };
            x = (x - step).max(split);
            right.push(x);
        }
        if !ga && !gb {
            let n = ((b - a) / cap).ceil().max(1.0) as usize;
            left = (1..=n).map(|k| a + (b - a) * k as f64 / n as f64).collect();
        }
        if let Some(last) = left.last() {
            if *last == split && right.last() == Some(&split) {
                right.pop();
            }
        }
        edges.extend(left);
        edges.extend(right.into_iter().rev());
    }
    edges.dedup();

    let gl = GAUSS_LEGENDRE_4;
    let mut rule = Vec::with_capacity(4 * edges.len());
    for e in edges.windows(2) {
        let (mid, half) = (0.5 * (e[0] + e[1]), 0.5 * (e[1] - e[0]));
        for &(x, w) in &gl {
            rule.push((mid + half * x, half * w));
        }
    }
    rule
}

pub const GAUSS_LEGENDRE_4: [(f64, f64); 4] = [
    (-0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
    (-0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
    (0.339_981_043_584_856_3, 0.652_145_154_862_546_1),
    (0.861_136_311_594_052_6, 0.347_854_845_137_453_9),
];
