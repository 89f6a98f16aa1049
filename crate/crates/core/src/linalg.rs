//! Small dense linear-algebra helpers shared by the backends.

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;

/// Spectrum tolerance used when clamping eigenvalues before logarithms.
pub const SPECTRUM_TOL: f64 = 1e-10;

/// Off-diagonal entries below this magnitude are dropped when splitting a
/// matrix into independent blocks.
const COUPLING_TOL: f64 = 1e-15;

/// Eigenvalues of a Hermitian matrix, ascending.
///
/// The matrix is first split into the connected blocks of its nonzero
/// pattern, which keeps sparse density matrices away from the underflow that
/// makes the QR iteration return NaN on them.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> Vec<f64> {
    let n = m.nrows();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut i: usize) -> usize {
        while p[i] != i {
            p[i] = p[p[i]];
            i = p[i];
        }
        i
    }
    for j in 0..n {
        for i in 0..j {
            if m[(i, j)].norm() > COUPLING_TOL {
                let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = find(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = blocks.len();
            blocks.push(Vec::new());
        }
        blocks[slot[r]].push(i);
    }
    let mut ev = Vec::with_capacity(n);
    for idx in blocks {
        let k = idx.len();
        let sub = DMatrix::from_fn(k, k, |a, b| if a == b { Complex64::new(m[(idx[a], idx[a])].re, 0.0) } else { m[(idx[a], idx[b])] });
        ev.extend(block_spectrum(&sub));
    }
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

fn block_spectrum(m: &DMatrix<Complex64>) -> Vec<f64> {
    match m.nrows() {
        0 => Vec::new(),
        1 => vec![m[(0, 0)].re],
        2 => {
            let a = m[(0, 0)].re;
            let d = m[(1, 1)].re;
            let b = m[(0, 1)];
            let mean = 0.5 * (a + d);
            let r = (0.25 * (a - d) * (a - d) + b.norm_sqr()).sqrt();
            vec![mean - r, mean + r]
        }
        _ => real_symmetric_spectrum(m),
    }
}

/// Spectrum through a real symmetric problem: `A` itself when `m = A` is
/// real, otherwise `[[A, −B], [B, A]]` for `m = A + iB`, whose spectrum is
/// that of `m` with every eigenvalue doubled. The complex solver in nalgebra
/// returns NaN on some sparse, highly degenerate density matrices.
fn real_symmetric_spectrum(m: &DMatrix<Complex64>) -> Vec<f64> {
    let n = m.nrows();
    if m.iter().all(|c| c.im == 0.0) {
        return symmetric_eigenvalues(m.map(|c| c.re));
    }
    let mut big = DMatrix::<f64>::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let c = m[(i, j)];
            big[(i, j)] = c.re;
            big[(i + n, j + n)] = c.re;
            big[(i, j + n)] = -c.im;
            big[(i + n, j)] = c.im;
        }
    }
    let mut ev = symmetric_eigenvalues(big);
    ev.sort_by(|a, b| a.total_cmp(b));
    ev.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
}

/// Real symmetric spectrum, falling back to cyclic Jacobi rotations if the
/// QR iteration produces NaN.
fn symmetric_eigenvalues(m: DMatrix<f64>) -> Vec<f64> {
    let ev: Vec<f64> = SymmetricEigen::new(m.clone()).eigenvalues.iter().copied().collect();
    if ev.iter().all(|v| v.is_finite()) {
        return ev;
    }
    jacobi_eigenvalues(m)
}

pub(crate) fn jacobi_eigenvalues(mut a: DMatrix<f64>) -> Vec<f64> {
    let n = a.nrows();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[(i, j)].powi(2)).sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() < 1e-300 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[(i, i)]).collect()
}

/// `-Σ p log2 p` over a probability list, with `0 log 0 = 0`.
pub fn shannon_bits<I: IntoIterator<Item = f64>>(probs: I) -> f64 {
    probs
        .into_iter()
        .map(|p| {
            let p = p.clamp(0.0, 1.0);
            if p <= SPECTRUM_TOL {
                0.0
            } else {
                -p * p.log2()
            }
        })
        .sum()
}

/// Binary entropy `H(x) = -x log2 x - (1-x) log2(1-x)`.
pub fn binary_entropy(x: f64) -> f64 {
    let x = x.clamp(0.0, 1.0);
    let term = |p: f64| if p <= 0.0 { 0.0 } else { -p * p.log2() };
    term(x) + term(1.0 - x)
}

/// Largest entrywise deviation of `u u†` from the identity.
pub fn unitarity_deviation(u: &DMatrix<Complex64>) -> f64 {
    let n = u.nrows();
    if u.ncols() != n {
        return f64::INFINITY;
    }
    let prod = u * u.adjoint();
    let mut dev = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let target = if i == j { 1.0 } else { 0.0 };
            dev = dev.max((prod[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    dev
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_by_two_matches_general_solver() {
        let m = DMatrix::from_row_slice(
            2,
            2,
            &[
                Complex64::new(0.7, 0.0),
                Complex64::new(0.1, -0.2),
                Complex64::new(0.1, 0.2),
                Complex64::new(0.3, 0.0),
            ],
        );
        let fast = hermitian_eigenvalues(&m);
        let mut slow: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        slow.sort_by(|a, b| a.total_cmp(b));
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(1.0), 0.0);
        assert!((binary_entropy(0.5) - 1.0).abs() < 1e-15);
        assert!((binary_entropy(0.75) - 0.811_278_124_459_132_9).abs() < 1e-12);
    }

    #[test]
    fn sparse_rank_one_spectrum() {
        // Rank-one projector on 16 of 256 basis states; a plain QR sweep on the
        // full matrix returns NaN here.
        let signs = [1.0, 1.0, 1.0, -1.0];
        let mut v = vec![0.0; 256];
        for (i, a) in signs.iter().enumerate() {
            for (j, b) in signs.iter().enumerate() {
                v[(i * 3) << 4 | (j * 3)] = a * b / 4.0;
            }
        }
        let m = DMatrix::from_fn(256, 256, |i, j| Complex64::new(v[i] * v[j], 0.0));
        let ev = hermitian_eigenvalues(&m);
        assert!(ev.iter().all(|x| x.is_finite()));
        assert!((ev[255] - 1.0).abs() < 1e-12);
        assert!(ev[..255].iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn jacobi_matches_qr() {
        let m = DMatrix::from_row_slice(3, 3, &[2.0, 1.0, 0.5, 1.0, 3.0, -0.2, 0.5, -0.2, 1.0]);
        let mut a = jacobi_eigenvalues(m.clone());
        let mut b: Vec<f64> = SymmetricEigen::new(m).eigenvalues.iter().copied().collect();
        a.sort_by(|x, y| x.total_cmp(y));
        b.sort_by(|x, y| x.total_cmp(y));
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-12);
        }
    }
}
