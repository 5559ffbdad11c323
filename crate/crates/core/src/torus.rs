//! Equispaced grids on the torus `T^d`, evaluation of functions along
//! character orbits, deterministic reductions, and the normalized
//! multidimensional DFT.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;

use crate::function_algebra::AnalyticElement;
use crate::semicharacter::Semicharacter;

/// Chunk length for parallel reductions. Fixed so sums do not depend on the
/// thread count.
pub const CHUNK: usize = 4096;

/// Angles of grid point `index` (row-major, last coordinate fastest).
pub fn grid_point(index: usize, n: usize, d: usize) -> Vec<f64> {
    let mut theta = vec![0.0; d];
    let mut rest = index;
    for c in (0..d).rev() {
        theta[c] = (rest % n) as f64 / n as f64;
        rest /= n;
    }
    theta
}

fn grid_index(index: usize, n: usize, d: usize) -> Vec<usize> {
    let mut j = vec![0; d];
    let mut rest = index;
    for c in (0..d).rev() {
        j[c] = rest % n;
        rest /= n;
    }
    j
}

/// `F(base * chi_theta)` for every `theta` in the grid `{0, 1/n, ..}^d`,
/// where `d` is the dimension of `base`.
pub fn grid_values(f: &AnalyticElement, base: &Semicharacter, n: usize) -> Vec<Complex64> {
    let d = base.chi().dim();
    let total = n.pow(d as u32);
    if let Some(terms) = f.term_list() {
        return term_grid(&terms, base, n, d);
    }
    match f {
        AnalyticElement::Sum(parts) => {
            let mut acc = vec![Complex64::new(0.0, 0.0); total];
            for (c, g) in parts {
                for (a, v) in acc.iter_mut().zip(grid_values(g, base, n)) {
                    *a += c * v;
                }
            }
            acc
        }
        AnalyticElement::Product(parts) => {
            let mut acc = vec![Complex64::new(1.0, 0.0); total];
            for g in parts {
                for (a, v) in acc.iter_mut().zip(grid_values(g, base, n)) {
                    *a *= v;
                }
            }
            acc
        }
        _ => (0..total)
            .into_par_iter()
            .map(|i| f.eval(&base.rotated(&grid_point(i, n, d))))
            .collect(),
    }
}

/// Fast path for finite sums `sum c_s psi(s)`: a table of `n`-th roots of
/// unity indexed by `s . j mod n`.
fn term_grid(
    terms: &[(Complex64, crate::semigroup::Element)],
    base: &Semicharacter,
    n: usize,
    d: usize,
) -> Vec<Complex64> {
    let roots: Vec<Complex64> = (0..n)
        .map(|k| Complex64::cis(TAU * k as f64 / n as f64))
        .collect();
    let weighted: Vec<(Complex64, Vec<i64>)> = terms
        .iter()
        .filter_map(|(c, s)| {
            let b = base.value_at(s);
            (b != Complex64::new(0.0, 0.0))
                .then(|| (c * b, s.coords().iter().map(|x| x.rem_euclid(n as i64)).collect()))
        })
        .collect();
    let total = n.pow(d as u32);
    (0..total)
        .into_par_iter()
        .map(|i| {
            let j = grid_index(i, n, d);
            weighted
                .iter()
                .map(|(c, s)| {
                    let k: i64 = s.iter().zip(&j).map(|(a, b)| a * *b as i64).sum();
                    c * roots[k.rem_euclid(n as i64) as usize]
                })
                .sum()
        })
        .collect()
}

/// Sum in fixed-size chunks, chunk sums added in order: the result does not
/// depend on the number of threads.
pub fn deterministic_sum(values: &[Complex64]) -> Complex64 {
    let partial: Vec<Complex64> = values
        .par_chunks(CHUNK)
        .map(|c| c.iter().sum::<Complex64>())
        .collect();
    partial.into_iter().sum()
}

/// Largest value of `f` with its index; ties keep the first index.
pub fn argmax(values: &[f64]) -> (usize, f64) {
    let best = values
        .par_chunks(CHUNK)
        .enumerate()
        .map(|(ci, c)| {
            let mut b = (ci * CHUNK, f64::NEG_INFINITY);
            for (k, &v) in c.iter().enumerate() {
                if v > b.1 {
                    b = (ci * CHUNK + k, v);
                }
            }
            b
        })
        .collect::<Vec<_>>();
    best.into_iter()
        .fold((0, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a })
}

/// Coefficients `c_k = n^{-d} sum_j F(j/n) e^{-2 pi i k . j / n}` of grid
/// samples in row-major order, by row-column FFT.
pub fn fourier_coefficients(values: &[Complex64], n: usize, d: usize) -> Vec<Complex64> {
    let mut data = values.to_vec();
    let fft = FftPlanner::<f64>::new().plan_fft_forward(n);
    let total = data.len();
    for axis in 0..d {
        let stride = n.pow((d - 1 - axis) as u32);
        let outer = total / (n * stride);
        let lines: Vec<Vec<Complex64>> = (0..outer * stride)
            .into_par_iter()
            .map(|l| {
                let (o, r) = (l / stride, l % stride);
                let start = o * n * stride + r;
                let mut line: Vec<Complex64> = (0..n).map(|k| data[start + k * stride]).collect();
                fft.process(&mut line);
                line
            })
            .collect();
        for (l, line) in lines.into_iter().enumerate() {
            let (o, r) = (l / stride, l % stride);
            let start = o * n * stride + r;
            for (k, v) in line.into_iter().enumerate() {
                data[start + k * stride] = v;
            }
        }
    }
    let scale = 1.0 / total as f64;
    data.iter_mut().for_each(|v| *v *= scale);
    data
}

/// Frequency represented by DFT bin `b`: `b` for `b < n/2`, `b - n` above.
/// The Nyquist bin maps to `-n/2`.
pub fn bin_to_frequency(b: usize, n: usize) -> i64 {
    if 2 * b < n {
        b as i64
    } else {
        b as i64 - n as i64
    }
}

/// Multi-frequency of flat bin index `index`.
pub fn frequency_of(index: usize, n: usize, d: usize) -> Vec<i64> {
    grid_index(index, n, d)
        .into_iter()
        .map(|b| bin_to_frequency(b, n))
        .collect()
}
