//! Test-only oracles, written straight from the index definitions and kept
//! independent of the library's evaluation paths.

#![allow(dead_code)]

use num_complex::Complex64;

/// Naive gains: `(h_sp, h_si, h_mai)` from explicit index loops.
pub fn naive_gains(
    taps: &[Vec<Complex64>],
    weights: &[Vec<Complex64>],
    chips: usize,
    processing_gain: usize,
) -> (Vec<f64>, Vec<f64>, Vec<Vec<f64>>) {
    let k_users = taps.len();
    let l = taps[0].len();
    let n = processing_gain as f64;
    // (1-based) entry (i, j) = v_{L - j + i} for i <= j, zero otherwise; L rows, L-1 columns
    let conv = |v: &[Complex64]| -> Vec<Vec<Complex64>> {
        let mut m = vec![vec![Complex64::new(0.0, 0.0); l - 1]; l];
        for i in 1..=l {
            for j in 1..=(l - 1) {
                if i <= j {
                    m[i - 1][j - 1] = v[l - j + i - 1];
                }
            }
        }
        m
    };
    // M^H x
    let adj_mul = |m: &Vec<Vec<Complex64>>, x: &[Complex64]| -> Vec<Complex64> {
        (0..l - 1)
            .map(|j| {
                let mut s = Complex64::new(0.0, 0.0);
                for i in 0..l {
                    s += m[i][j].conj() * x[i];
                }
                s
            })
            .collect()
    };
    let inner = |a: &[Complex64], b: &[Complex64]| -> Complex64 {
        let mut s = Complex64::new(0.0, 0.0);
        for i in 0..l {
            s += a[i].conj() * b[i];
        }
        s
    };
    let phi: Vec<f64> = (1..l)
        .map(|i| (((l - i).min(chips)) as f64 / chips as f64).sqrt())
        .collect();

    let h_sp: Vec<f64> = (0..k_users)
        .map(|k| inner(&weights[k], &taps[k]).re)
        .collect();
    let mut h_si = vec![0.0; k_users];
    let mut h_mai = vec![vec![0.0; k_users]; k_users];
    for k in 0..k_users {
        let a_k = conv(&taps[k]);
        let b_k = conv(&weights[k]);
        let x = adj_mul(&b_k, &taps[k]);
        let y = adj_mul(&a_k, &weights[k]);
        let mut num = 0.0;
        for c in 0..l - 1 {
            num += (phi[c] * (x[c] + y[c])).norm_sqr();
        }
        h_si[k] = num / (n * h_sp[k]);
        for j in 0..k_users {
            if j == k {
                continue;
            }
            let a_j = conv(&taps[j]);
            let t1: f64 = adj_mul(&b_k, &taps[j]).iter().map(|z| z.norm_sqr()).sum();
            let t2: f64 = adj_mul(&a_j, &weights[k])
                .iter()
                .map(|z| z.norm_sqr())
                .sum();
            let t3 = inner(&weights[k], &taps[j]).norm_sqr();
            h_mai[k][j] = (t1 + t2 + t3) / (n * h_sp[k]);
        }
    }
    (h_sp, h_si, h_mai)
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

/// Composite Gauss-Legendre (5 points) on `[a, b]` split into `pieces` panels.
pub fn gauss_legendre<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, pieces: usize) -> f64 {
    const X: [f64; 5] = [
        0.0,
        -0.538_469_310_105_683_1,
        0.538_469_310_105_683_1,
        -0.906_179_845_938_664,
        0.906_179_845_938_664,
    ];
    const W: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    if b <= a {
        return 0.0;
    }
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|p| {
            let lo = a + p as f64 * h;
            let mid = lo + h / 2.0;
            X.iter()
                .zip(W)
                .map(|(x, w)| w * f(mid + x * h / 2.0))
                .sum::<f64>()
                * h
                / 2.0
        })
        .sum()
}

/// Large-system SI factor from the continuum limit of the expected
/// self-interference numerator over the squared expected signal gain:
///
/// `nu = int_0^1 min(y, a)/a int_0^{min(b, 1-y)} c(x, y) L^{-(2x+y)} dx dy / ((1 - L^-b)/ln L)^2`
///
/// with `c = 4` when both correlation terms overlap (`x + y <= b`) and `c = 1` otherwise.
pub fn nu_quadrature(pdp_ratio: f64, beta: f64, alpha: f64) -> f64 {
    let u = pdp_ratio.ln();
    // int_lo^hi exp(-2 u x) dx
    let g = |lo: f64, hi: f64| {
        if hi <= lo {
            0.0
        } else if u == 0.0 {
            hi - lo
        } else {
            -(-2.0 * u * lo).exp() * (-2.0 * u * (hi - lo)).exp_m1() / (2.0 * u)
        }
    };
    let inner = |y: f64| {
        let top = beta.min(1.0 - y);
        let overlap = (beta - y).max(0.0).min(top);
        (-u * y).exp() * (4.0 * g(0.0, overlap) + g(overlap, top))
    };
    let weight = |y: f64| y.min(alpha) / alpha;
    let mut cuts = vec![0.0, 1.0, alpha.min(1.0), beta, 1.0 - beta];
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    cuts.dedup();
    let num: f64 = cuts
        .windows(2)
        .map(|w| gauss_legendre(|y| weight(y) * inner(y), w[0], w[1], 64))
        .sum();
    let den = if u == 0.0 {
        beta
    } else {
        -(-u * beta).exp_m1() / u
    };
    num / (den * den)
}
