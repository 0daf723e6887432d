//! Oracles shared by the integration tests. Nothing here calls into the
//! production root finder or quadrature.

#![allow(dead_code)]

use num_complex::Complex64;

fn horner(coeffs: &[Complex64], z: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * z + p;
        p = p * z + c;
    }
    (p, dp)
}

/// Starting radii from the upper convex hull of `(n, ln|c_n|)`; each edge from
/// `i` to `j` contributes `j − i` points on a circle of radius `(|c_i|/|c_j|)^{1/(j−i)}`.
fn newton_polygon_starts(coeffs: &[Complex64]) -> Vec<Complex64> {
    let pts: Vec<(usize, f64)> =
        coeffs.iter().enumerate().filter(|(_, c)| c.norm() > 0.0).map(|(i, c)| (i, c.norm().ln())).collect();
    let mut hull: Vec<(usize, f64)> = Vec::new();
    for p in pts {
        while hull.len() >= 2 {
            let (a, b) = (hull[hull.len() - 2], hull[hull.len() - 1]);
            let cross = (b.0 as f64 - a.0 as f64) * (p.1 - a.1) - (b.1 - a.1) * (p.0 as f64 - a.0 as f64);
            if cross >= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push(p);
    }
    let mut starts = Vec::new();
    for w in hull.windows(2) {
        let (i, j) = (w[0].0, w[1].0);
        let d = (j - i) as f64;
        let r = ((w[0].1 - w[1].1) / d).exp();
        for s in 0..(j - i) {
            let theta = 2.0 * std::f64::consts::PI * s as f64 / d + 0.4 + 0.1 * i as f64;
            starts.push(Complex64::from_polar(r, theta));
        }
    }
    starts
}

/// All roots of `Σ c_n zⁿ` by simultaneous Aberth–Ehrlich iteration.
pub fn aberth(coeffs: &[Complex64]) -> Vec<Complex64> {
    let mut z = newton_polygon_starts(coeffs);
    let n = z.len();
    for _ in 0..500 {
        let mut moved = 0.0f64;
        for i in 0..n {
            let (p, dp) = horner(coeffs, z[i]);
            if p.norm() == 0.0 {
                continue;
            }
            let ratio = p / dp;
            let sum: Complex64 = (0..n).filter(|&j| j != i).map(|j| 1.0 / (z[i] - z[j])).sum();
            let step = ratio / (1.0 - ratio * sum);
            z[i] -= step;
            moved = moved.max(step.norm() / z[i].norm());
        }
        if moved < 1e-15 {
            break;
        }
    }
    z
}

/// Pairs each root of `a` with the nearest unused root of `b` and returns the
/// largest relative distance.
pub fn max_relative_mismatch(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let mut used = vec![false; b.len()];
    let mut worst = 0.0f64;
    for &x in a {
        let (j, d) = b
            .iter()
            .enumerate()
            .filter(|(j, _)| !used[*j])
            .map(|(j, y)| (j, (x - y).norm()))
            .min_by(|p, q| p.1.total_cmp(&q.1))
            .unwrap();
        used[j] = true;
        worst = worst.max(d / x.norm());
    }
    worst
}

/// Composite Simpson rule on `n` (even) panels.
pub fn simpson(f: impl Fn(f64) -> f64, lo: f64, hi: f64, n: usize) -> f64 {
    let h = (hi - lo) / n as f64;
    let mut s = f(lo) + f(hi);
    for i in 1..n {
        s += f(lo + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}
