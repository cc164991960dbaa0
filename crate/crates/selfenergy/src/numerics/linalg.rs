//! Thin checked wrappers around the dense symmetric eigensolver.

use ndarray::{Array1, Array2};
use ndarray_linalg::{EigValshInto, EighInto, UPLO};

use crate::error::{Error, Result};

fn eig_failure(e: ndarray_linalg::error::LinalgError) -> Error {
    Error::NumericalFailure {
        what: "dense symmetric eigensolve",
        residual: f64::NAN,
        tol: 0.0,
        detail: e.to_string(),
    }
}

/// All eigenvalues of a real symmetric matrix, ascending. Consumes the input
/// (LAPACK overwrites its argument; callers keep no copy alive).
pub fn sym_eigvals(a: Array2<f64>) -> Result<Array1<f64>> {
    debug_assert_eq!(a.nrows(), a.ncols());
    if a.nrows() == 0 {
        return Ok(Array1::zeros(0));
    }
    a.eigvalsh_into(UPLO::Lower).map_err(eig_failure)
}

/// Lowest eigenpair of a real symmetric matrix.
pub fn sym_eig_ground(a: Array2<f64>) -> Result<(f64, Array1<f64>)> {
    debug_assert_eq!(a.nrows(), a.ncols());
    let (vals, vecs) = a.eigh_into(UPLO::Lower).map_err(eig_failure)?;
    // ascending order: ground pair is column 0
    Ok((vals[0], vecs.column(0).to_owned()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::array;

    #[test]
    fn eigvals_of_known_matrix() {
        // [[2,1],[1,2]] has eigenvalues 1, 3
        let vals = sym_eigvals(array![[2.0, 1.0], [1.0, 2.0]]).unwrap();
        assert!((vals[0] - 1.0).abs() < 1e-14);
        assert!((vals[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn ground_pair_satisfies_eigen_equation() {
        let a = array![[4.0, -1.0, 0.5], [-1.0, 3.0, 0.0], [0.5, 0.0, 1.0]];
        let (e0, v) = sym_eig_ground(a.clone()).unwrap();
        let av = a.dot(&v);
        let mut resid: f64 = 0.0;
        for i in 0..3 {
            resid = resid.max((av[i] - e0 * v[i]).abs());
        }
        assert!(resid < 1e-12);
    }

    #[test]
    fn empty_matrix_is_fine() {
        let vals = sym_eigvals(Array2::zeros((0, 0))).unwrap();
        assert_eq!(vals.len(), 0);
    }
}
