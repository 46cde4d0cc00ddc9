//! Dense 4×4 complex arithmetic for the sideband system.

use num_complex::Complex64;
use thiserror::Error;

pub type Vec4 = [Complex64; 4];
pub type Mat4 = [[Complex64; 4]; 4];

pub const ZERO4: Vec4 = [Complex64::new(0.0, 0.0); 4];

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum LinalgError {
    /// No usable pivot in the given column after elimination.
    #[error("matrix is singular (no pivot in column {column})")]
    Singular { column: usize },
}

pub fn zeros() -> Mat4 {
    [ZERO4; 4]
}

pub fn identity() -> Mat4 {
    let mut m = zeros();
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = Complex64::new(1.0, 0.0);
    }
    m
}

pub fn mat_vec(m: &Mat4, x: &Vec4) -> Vec4 {
    let mut out = ZERO4;
    for (o, row) in out.iter_mut().zip(m) {
        *o = row.iter().zip(x).map(|(a, b)| a * b).sum();
    }
    out
}

pub fn norm(x: &Vec4) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn sub(x: &Vec4, y: &Vec4) -> Vec4 {
    std::array::from_fn(|i| x[i] - y[i])
}

pub fn scale(x: &Vec4, s: Complex64) -> Vec4 {
    std::array::from_fn(|i| x[i] * s)
}

/// Solves `m·x = v` by Gaussian elimination with partial pivoting.
#[allow(clippy::needless_range_loop)]
pub fn solve(m: &Mat4, v: &Vec4) -> Result<Vec4, LinalgError> {
    let mut a = *m;
    let mut b = *v;
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .unwrap_or(col);
        if a[pivot][col].norm() == 0.0 || !a[pivot][col].is_finite() {
            return Err(LinalgError::Singular { column: col });
        }
        a.swap(col, pivot);
        b.swap(col, pivot);
        for row in col + 1..4 {
            let factor = a[row][col] / a[col][col];
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for k in col..4 {
                let upd = factor * a[col][k];
                a[row][k] -= upd;
            }
            let upd = factor * b[col];
            b[row] -= upd;
        }
    }
    let mut x = ZERO4;
    for row in (0..4).rev() {
        let tail: Complex64 = (row + 1..4).map(|k| a[row][k] * x[k]).sum();
        x[row] = (b[row] - tail) / a[row][row];
    }
    Ok(x)
}

/// Determinant via the same pivoted elimination.
#[allow(clippy::needless_range_loop)]
pub fn determinant(m: &Mat4) -> Complex64 {
    let mut a = *m;
    let mut det = Complex64::new(1.0, 0.0);
    for col in 0..4 {
        let pivot = (col..4)
            .max_by(|&i, &j| a[i][col].norm().total_cmp(&a[j][col].norm()))
            .unwrap_or(col);
        if a[pivot][col].norm() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if pivot != col {
            a.swap(col, pivot);
            det = -det;
        }
        det *= a[col][col];
        for row in col + 1..4 {
            let factor = a[row][col] / a[col][col];
            for k in col..4 {
                let upd = factor * a[col][k];
                a[row][k] -= upd;
            }
        }
    }
    det
}
