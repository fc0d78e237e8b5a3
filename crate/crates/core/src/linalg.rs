use nalgebra::DMatrix;

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn axpy(acc: &mut [f64], alpha: f64, x: &[f64]) {
    for (a, v) in acc.iter_mut().zip(x) {
        *a += alpha * v;
    }
}

/// Rows of `vectors` stacked into a matrix.
fn stack(vectors: &[Vec<f64>], dim: usize) -> DMatrix<f64> {
    DMatrix::from_fn(vectors.len(), dim, |i, j| vectors[i][j])
}

/// Numerical rank of a set of vectors, singular values below `tol` (relative to
/// the largest, floored at 1) count as zero.
pub(crate) fn rank(vectors: &[Vec<f64>], dim: usize, tol: f64) -> usize {
    if vectors.is_empty() || dim == 0 {
        return 0;
    }
    let sv = stack(vectors, dim).singular_values();
    let top = sv.iter().fold(1.0f64, |a, s| a.max(*s));
    sv.iter().filter(|s| **s > tol * top).count()
}

/// Orthonormal basis (as rows) of the linear span of `vectors`.
pub(crate) fn span_basis(vectors: &[Vec<f64>], dim: usize, tol: f64) -> Vec<Vec<f64>> {
    if vectors.is_empty() {
        return Vec::new();
    }
    // Right singular vectors of the stacked matrix span its row space.
    let mat = stack(vectors, dim);
    let svd = mat.svd(false, true);
    let v_t = svd.v_t.expect("requested v_t");
    let top = svd.singular_values.iter().fold(1.0f64, |a, s| a.max(*s));
    let mut out = Vec::new();
    for (k, s) in svd.singular_values.iter().enumerate() {
        if *s > tol * top {
            out.push(v_t.row(k).iter().copied().collect());
        }
    }
    out
}

/// Unit vector spanning the null space of a `(k-1) x k` system, if it is one-dimensional.
#[cfg(test)]
pub(crate) fn null_vector(rows: &[Vec<f64>], dim: usize, tol: f64) -> Option<Vec<f64>> {
    let mut padded = rows.to_vec();
    // Pad to a square matrix so the SVD yields a full set of right singular vectors.
    while padded.len() < dim {
        padded.push(vec![0.0; dim]);
    }
    let mat = stack(&padded, dim);
    let svd = mat.svd(false, true);
    let v_t = svd.v_t.expect("requested v_t");
    let sv = &svd.singular_values;
    let top = sv.iter().fold(1.0f64, |a, s| a.max(*s));
    let small: Vec<usize> = (0..sv.len()).filter(|&k| sv[k] <= tol * top).collect();
    if small.len() != 1 {
        return None;
    }
    Some(v_t.row(small[0]).iter().copied().collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_of_dependent_set() {
        let v = vec![
            vec![1.0, 0.0, 1.0],
            vec![0.0, 1.0, 1.0],
            vec![1.0, 1.0, 2.0],
        ];
        assert_eq!(rank(&v, 3, 1e-9), 2);
        assert_eq!(span_basis(&v, 3, 1e-9).len(), 2);
    }

    #[test]
    fn null_vector_of_plane() {
        let n = null_vector(&[vec![1.0, 0.0, 0.0], vec![0.0, 1.0, 0.0]], 3, 1e-9).unwrap();
        assert!(n[0].abs() < 1e-12 && n[1].abs() < 1e-12 && (n[2].abs() - 1.0).abs() < 1e-12);
        assert!(null_vector(&[vec![1.0, 0.0, 0.0]], 3, 1e-9).is_none());
    }
}
