//! Small dense integer matrices as row vectors.

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix};

pub type IntMatrix = Vec<Vec<i64>>;

pub fn identity(n: usize) -> IntMatrix {
    (0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect()
}

pub fn transpose(a: &[Vec<i64>]) -> IntMatrix {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j]).collect()).collect()
}

pub fn mul(a: &[Vec<i64>], b: &[Vec<i64>]) -> IntMatrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            assert_eq!(row.len(), inner, "inner dimensions differ");
            (0..cols).map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum()).collect()
        })
        .collect()
}

pub fn determinant(a: &[Vec<i64>]) -> Result<i64> {
    let d = Matrix::from_i64(Field::Rational, a).determinant()?;
    d.to_i64().ok_or_else(|| Error::Invalid("determinant out of range".into()))
}

/// Exact inverse; fails unless the inverse is integral.
pub fn inverse(a: &[Vec<i64>]) -> Result<IntMatrix> {
    let inv = Matrix::from_i64(Field::Rational, a).inverse()?;
    inv.to_i64_rows().ok_or_else(|| Error::Invalid("inverse is not integral".into()))
}

/// The first `cols` columns.
pub fn left_columns(a: &[Vec<i64>], cols: usize) -> IntMatrix {
    a.iter().map(|row| row[..cols].to_vec()).collect()
}

/// Rows as `[a, b, c]` lines joined by newlines.
pub fn render(a: &[Vec<i64>]) -> String {
    a.iter()
        .map(|row| format!("[{}]", row.iter().map(|x| format!("{x:>2}")).collect::<Vec<_>>().join(" ")))
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let c = vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 1, 1]];
        assert_eq!(determinant(&c).unwrap(), 1);
        let inv = inverse(&c).unwrap();
        assert_eq!(mul(&c, &inv), identity(3));
        assert_eq!(transpose(&transpose(&c)), c);
        assert!(inverse(&[vec![2]]).is_err());
        assert_eq!(left_columns(&c, 1), vec![vec![1], vec![0], vec![1]]);
    }
}
