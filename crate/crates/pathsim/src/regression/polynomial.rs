//! Polynomial feature expansion: all monomials of total degree 1..=d,
//! including interaction terms, applied before a linear fit.

use crate::dataset::FeatureMatrix;
use crate::error::{Error, Result};

/// Monomial terms for `n_features` inputs up to `degree`. Each term is a
/// sorted multiset of feature indices; the constant term is excluded
/// (the model keeps an explicit intercept).
pub fn expansion_terms(n_features: usize, degree: usize) -> Vec<Vec<usize>> {
    let mut terms = Vec::new();
    let mut current = Vec::new();
    for d in 1..=degree {
        combinations_with_replacement(n_features, d, 0, &mut current, &mut terms);
    }
    terms
}

fn combinations_with_replacement(
    n: usize,
    remaining: usize,
    start: usize,
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if remaining == 0 {
        out.push(current.clone());
        return;
    }
    for i in start..n {
        current.push(i);
        combinations_with_replacement(n, remaining - 1, i, current, out);
        current.pop();
    }
}

/// Evaluate the expansion for every row.
pub fn expand(x: &FeatureMatrix, degree: usize) -> Result<FeatureMatrix> {
    if degree < 1 {
        return Err(Error::Domain(format!("degree must be >= 1, got {degree}")));
    }
    let terms = expansion_terms(x.cols, degree);
    let mut data = Vec::with_capacity(x.rows * terms.len());
    for r in 0..x.rows {
        let row = x.row(r);
        for term in &terms {
            data.push(term.iter().map(|&f| row[f]).product());
        }
    }
    Ok(FeatureMatrix {
        data,
        rows: x.rows,
        cols: terms.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn term_counts() {
        // p + p(p+1)/2 terms at degree 2.
        assert_eq!(expansion_terms(11, 2).len(), 11 + 66);
        assert_eq!(expansion_terms(2, 1).len(), 2);
        assert_eq!(expansion_terms(1, 3).len(), 3);
    }

    #[test]
    fn degree_two_values() {
        let x = FeatureMatrix::from_rows(&[vec![2.0, 3.0]]);
        let expanded = expand(&x, 2).unwrap();
        // Terms: x0, x1, x0^2, x0*x1, x1^2.
        assert_eq!(expanded.row(0), &[2.0, 3.0, 4.0, 6.0, 9.0]);
        assert!(expand(&x, 0).is_err());
    }
}
