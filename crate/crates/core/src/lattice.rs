//! Exact integer linear algebra on small lattices: Hermite row reduction,
//! rational kernels, lattice membership and cone pointedness.
//!
//! Everything here works on `i64` inputs with `i128` (or `Ratio<i128>`)
//! intermediates; the matrices involved are tiny (a handful of generators in
//! dimension at most four or five), so no attempt is made to control
//! coefficient growth beyond that.

use num_rational::Ratio;

type Q = Ratio<i128>;

/// Row-style Hermite normal form of the lattice spanned by `rows`.
///
/// The returned rows are a basis of the Z-span of the input, in echelon form
/// with positive pivots and reduced entries above each pivot. Zero rows are
/// dropped, so the length of the result is the rank.
pub fn hermite_basis(rows: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let Some(ncols) = rows.first().map(Vec::len) else {
        return Vec::new();
    };
    let mut m: Vec<Vec<i128>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| x as i128).collect())
        .collect();
    let mut pivot_row = 0;
    for col in 0..ncols {
        if pivot_row == m.len() {
            break;
        }
        loop {
            let mut best: Option<usize> = None;
            for r in pivot_row..m.len() {
                if m[r][col] != 0 && best.is_none_or(|b| m[r][col].abs() < m[b][col].abs()) {
                    best = Some(r);
                }
            }
            let Some(b) = best else { break };
            m.swap(pivot_row, b);
            let mut done = true;
            for r in (pivot_row + 1)..m.len() {
                if m[r][col] != 0 {
                    let q = m[r][col] / m[pivot_row][col];
                    for c in 0..ncols {
                        m[r][c] -= q * m[pivot_row][c];
                    }
                    if m[r][col] != 0 {
                        done = false;
                    }
                }
            }
            if done {
                break;
            }
        }
        if m[pivot_row][col] == 0 {
            continue;
        }
        if m[pivot_row][col] < 0 {
            for x in m[pivot_row].iter_mut() {
                *x = -*x;
            }
        }
        let piv = m[pivot_row][col];
        for r in 0..pivot_row {
            let q = m[r][col].div_euclid(piv);
            if q != 0 {
                for c in 0..ncols {
                    m[r][c] -= q * m[pivot_row][c];
                }
            }
        }
        pivot_row += 1;
    }
    m.truncate(pivot_row);
    m.into_iter()
        .map(|r| r.into_iter().map(|x| x as i64).collect())
        .collect()
}

/// Whether `v` lies in the lattice whose Hermite basis is `basis`.
pub fn in_lattice(basis: &[Vec<i64>], v: &[i64]) -> bool {
    let mut rem: Vec<i128> = v.iter().map(|&x| x as i128).collect();
    for row in basis {
        let Some(p) = row.iter().position(|&x| x != 0) else {
            continue;
        };
        let piv = row[p] as i128;
        if rem[p] % piv != 0 {
            return false;
        }
        let q = rem[p] / piv;
        for (r, &x) in rem.iter_mut().zip(row) {
            *r -= q * x as i128;
        }
    }
    rem.iter().all(|&x| x == 0)
}

/// Rank over Q of the row set.
pub fn rank(rows: &[Vec<i64>]) -> usize {
    hermite_basis(rows).len()
}

/// Basis of the rational kernel `{y : A y = 0}` of the matrix with the given
/// rows, each basis vector scaled to a primitive integer vector.
pub fn rational_kernel(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    let mut a: Vec<Vec<Q>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| Q::from_integer(x as i128)).collect())
        .collect();
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        let Some(p) = (row..a.len()).find(|&r| a[r][col] != Q::from_integer(0)) else {
            continue;
        };
        a.swap(row, p);
        let inv = a[row][col].recip();
        for x in a[row].iter_mut() {
            *x *= inv;
        }
        for r in 0..a.len() {
            if r != row && a[r][col] != Q::from_integer(0) {
                let f = a[r][col];
                for c in 0..ncols {
                    let t = a[row][c] * f;
                    a[r][c] -= t;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == a.len() {
            break;
        }
    }
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut y = vec![Q::from_integer(0); ncols];
            y[f] = Q::from_integer(1);
            for (i, &p) in pivots.iter().enumerate() {
                y[p] = -a[i][f];
            }
            primitive(&y)
        })
        .collect()
}

fn primitive(y: &[Q]) -> Vec<i64> {
    let lcm = y.iter().fold(1i128, |acc, q| lcm(acc, *q.denom()));
    let ints: Vec<i128> = y.iter().map(|q| q.numer() * (lcm / q.denom())).collect();
    let g = ints.iter().fold(0i128, |acc, &x| gcd(acc, x)).max(1);
    ints.into_iter().map(|x| (x / g) as i64).collect()
}

pub fn gcd(a: i128, b: i128) -> i128 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

fn lcm(a: i128, b: i128) -> i128 {
    if a == 0 || b == 0 {
        return 0;
    }
    (a / gcd(a, b) * b).abs()
}

/// Whether the rational cone spanned by `vectors` is pointed, i.e. no
/// nontrivial nonnegative combination of the vectors vanishes.
///
/// A vanishing nonnegative combination decomposes conformally into circuits,
/// so it suffices to look for a minimal dependent subset whose (one
/// dimensional) kernel is spanned by a strictly positive vector. Subsets are
/// enumerated up to size `rank + 1`.
pub fn is_pointed_cone(vectors: &[Vec<i64>]) -> bool {
    if vectors.iter().any(|v| v.iter().all(|&x| x == 0)) {
        return false;
    }
    let Some(dim) = vectors.first().map(Vec::len) else {
        return true;
    };
    let k = vectors.len();
    let max_size = (rank(vectors) + 1).min(k);
    let mut subset = Vec::with_capacity(max_size);
    !has_positive_circuit(vectors, dim, 0, max_size, &mut subset)
}

fn has_positive_circuit(
    vectors: &[Vec<i64>],
    dim: usize,
    start: usize,
    max_size: usize,
    subset: &mut Vec<usize>,
) -> bool {
    if subset.len() >= 2 {
        let rows: Vec<Vec<i64>> = (0..dim)
            .map(|i| subset.iter().map(|&j| vectors[j][i]).collect())
            .collect();
        let ker = rational_kernel(&rows, subset.len());
        if ker.len() == 1 {
            let y = &ker[0];
            if y.iter().all(|&x| x > 0) || y.iter().all(|&x| x < 0) {
                return true;
            }
        }
    }
    if subset.len() == max_size {
        return false;
    }
    for j in start..vectors.len() {
        subset.push(j);
        let found = has_positive_circuit(vectors, dim, j + 1, max_size, subset);
        subset.pop();
        if found {
            return true;
        }
    }
    false
}

/// Whether `v` lies in the rational cone spanned by `vectors`.
///
/// By Carathéodory it suffices to try linearly independent subsets: `v` is
/// in the cone iff it is a nonnegative combination of one of them.
pub fn in_rational_cone(vectors: &[Vec<i64>], v: &[i64]) -> bool {
    if v.iter().all(|&x| x == 0) {
        return true;
    }
    let r = rank(vectors);
    let mut subset = Vec::with_capacity(r);
    cone_subsets(vectors, v, 0, r, &mut subset)
}

fn cone_subsets(
    vectors: &[Vec<i64>],
    v: &[i64],
    start: usize,
    max_size: usize,
    subset: &mut Vec<usize>,
) -> bool {
    if !subset.is_empty() {
        let cols: Vec<Vec<i64>> = subset.iter().map(|&j| vectors[j].clone()).collect();
        if rank(&cols) == subset.len() {
            let k = subset.len();
            let rows: Vec<Vec<i64>> = (0..v.len())
                .map(|i| {
                    let mut row: Vec<i64> = subset.iter().map(|&j| vectors[j][i]).collect();
                    row.push(-v[i]);
                    row
                })
                .collect();
            let ker = rational_kernel(&rows, k + 1);
            if let [y] = ker.as_slice() {
                let last = y[k];
                if last != 0 && y[..k].iter().all(|&x| x == 0 || (x > 0) == (last > 0)) {
                    return true;
                }
            }
        } else {
            return false;
        }
    }
    if subset.len() == max_size {
        return false;
    }
    for j in start..vectors.len() {
        subset.push(j);
        let found = cone_subsets(vectors, v, j + 1, max_size, subset);
        subset.pop();
        if found {
            return true;
        }
    }
    false
}

/// An integer functional `c` with `c . v >= 1` for every vector, found by the
/// margin perceptron. Returns `None` when the iteration cap is hit, which for
/// a pointed cone only happens on pathologically thin instances.
pub fn positive_functional(vectors: &[Vec<i64>]) -> Option<Vec<i64>> {
    let dim = vectors.first()?.len();
    let mut c = vec![0i128; dim];
    for _ in 0..100_000 {
        let mut updated = false;
        for v in vectors {
            let dot: i128 = c.iter().zip(v).map(|(a, &b)| a * b as i128).sum();
            if dot < 1 {
                for (a, &b) in c.iter_mut().zip(v) {
                    *a += b as i128;
                }
                updated = true;
            }
        }
        if !updated {
            return Some(c.into_iter().map(|x| x as i64).collect());
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermite_of_even_lattice() {
        let b = hermite_basis(&[vec![2, 0], vec![0, 2]]);
        assert_eq!(b, vec![vec![2, 0], vec![0, 2]]);
        let b = hermite_basis(&[vec![2], vec![3]]);
        assert_eq!(b, vec![vec![1]]);
        let b = hermite_basis(&[vec![4], vec![6]]);
        assert_eq!(b, vec![vec![2]]);
    }

    #[test]
    fn hermite_drops_dependent_rows() {
        let b = hermite_basis(&[vec![1, 1], vec![2, 2], vec![3, 3]]);
        assert_eq!(b, vec![vec![1, 1]]);
        assert_eq!(rank(&[vec![1, 0, 1], vec![0, 1, 1], vec![1, 1, 2]]), 2);
    }

    #[test]
    fn membership_in_lattice() {
        let b = hermite_basis(&[vec![2, 0], vec![1, 1]]);
        assert!(in_lattice(&b, &[3, 1]));
        assert!(!in_lattice(&b, &[1, 0]));
        assert!(in_lattice(&b, &[0, 2]));
    }

    #[test]
    fn kernel_is_annihilated() {
        let rows = vec![vec![1, 2, 3], vec![2, 4, 7]];
        let ker = rational_kernel(&rows, 3);
        assert_eq!(ker.len(), 1);
        for r in &rows {
            let dot: i64 = r.iter().zip(&ker[0]).map(|(a, b)| a * b).sum();
            assert_eq!(dot, 0);
        }
    }

    #[test]
    fn pointedness() {
        assert!(is_pointed_cone(&[vec![1, 0], vec![0, 1]]));
        assert!(!is_pointed_cone(&[vec![1, 0], vec![-1, 0]]));
        assert!(!is_pointed_cone(&[vec![1, 1], vec![-1, 0], vec![0, -1]]));
        assert!(is_pointed_cone(&[vec![1, -1], vec![1, 1], vec![2, 0]]));
    }

    #[test]
    fn rational_cone_membership() {
        let g = vec![vec![1, 0], vec![-1, 0], vec![0, 1]];
        assert!(in_rational_cone(&g, &[-3, 2]));
        assert!(!in_rational_cone(&g, &[0, -1]));
        let g = vec![vec![1, 1], vec![1, -1]];
        assert!(in_rational_cone(&g, &[3, 0]));
        assert!(!in_rational_cone(&g, &[0, 1]));
    }

    #[test]
    fn perceptron_separates_pointed_cone() {
        let gens = vec![vec![1, -3], vec![1, 5], vec![2, 1]];
        let c = positive_functional(&gens).unwrap();
        for g in &gens {
            assert!(c[0] * g[0] + c[1] * g[1] >= 1);
        }
    }
}
