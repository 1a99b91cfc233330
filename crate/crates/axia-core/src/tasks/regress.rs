//! Tiny dense least-squares helper shared by the simulator tasks.
//!
//! Feature counts here stay below ~30, so normal equations with Gaussian
//! elimination are accurate enough and keep the dependency surface flat.

/// Solve `(XᵀX + ridge·I) w = Xᵀy` for `w`.
///
/// `rows` yields one feature vector per sample, paired with `y` by position.
pub(crate) fn fit_least_squares(rows: &[Vec<f64>], y: &[f64], ridge: f64) -> Vec<f64> {
    assert_eq!(rows.len(), y.len());
    assert!(!rows.is_empty());
    let k = rows[0].len();
    let flat: Vec<f64> = rows.iter().flat_map(|r| r.iter().copied()).collect();
    fit_least_squares_flat(&flat, k, y, ridge)
}

/// Same solve over a row-major flat feature buffer; avoids per-row
/// allocations on hot paths.
pub(crate) fn fit_least_squares_flat(flat: &[f64], k: usize, y: &[f64], ridge: f64) -> Vec<f64> {
    assert_eq!(flat.len(), k * y.len());
    assert!(!y.is_empty());
    let mut xtx = vec![0.0f64; k * k];
    let mut xty = vec![0.0f64; k];
    for (row, &target) in flat.chunks_exact(k).zip(y) {
        for i in 0..k {
            let ri = row[i];
            xty[i] += ri * target;
            let dst = &mut xtx[i * k + i..i * k + k];
            for (d, rj) in dst.iter_mut().zip(&row[i..]) {
                *d += ri * rj;
            }
        }
    }
    for i in 0..k {
        for j in 0..i {
            xtx[i * k + j] = xtx[j * k + i];
        }
        xtx[i * k + i] += ridge;
    }
    solve(&mut xtx, &mut xty, k);
    xty
}

/// In-place Gaussian elimination with partial pivoting; `b` becomes the
/// solution. Singular pivots fall back to a tiny diagonal bump rather than
/// failing, which for our regularized systems only occurs on degenerate
/// all-constant features.
fn solve(a: &mut [f64], b: &mut [f64], k: usize) {
    for col in 0..k {
        let mut pivot = col;
        for row in col + 1..k {
            if a[row * k + col].abs() > a[pivot * k + col].abs() {
                pivot = row;
            }
        }
        if pivot != col {
            for j in 0..k {
                a.swap(col * k + j, pivot * k + j);
            }
            b.swap(col, pivot);
        }
        let mut diag = a[col * k + col];
        if diag.abs() < 1e-12 {
            diag = 1e-12;
            a[col * k + col] = diag;
        }
        for row in col + 1..k {
            let factor = a[row * k + col] / diag;
            if factor == 0.0 {
                continue;
            }
            for j in col..k {
                a[row * k + j] -= factor * a[col * k + j];
            }
            b[row] -= factor * b[col];
        }
    }
    for col in (0..k).rev() {
        let mut acc = b[col];
        for j in col + 1..k {
            acc -= a[col * k + j] * b[j];
        }
        b[col] = acc / a[col * k + col];
    }
}

pub(crate) fn dot(w: &[f64], feats: &[f64]) -> f64 {
    w.iter().zip(feats).map(|(a, b)| a * b).sum()
}
