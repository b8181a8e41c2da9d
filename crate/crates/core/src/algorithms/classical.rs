use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DifferenceScheme {
    Forward,
    Centered,
}

/// Returns the gradient and the number of evaluations of `f`.
pub fn finite_difference_gradient(
    mut f: impl FnMut(&[f64]) -> f64,
    x: &[f64],
    scheme: DifferenceScheme,
    l: f64,
) -> Result<(Vec<f64>, u64)> {
    if !(l > 0.0) {
        return Err(Error::InvalidParameter("step must be positive".into()));
    }
    let mut queries = 0u64;
    let mut eval = |p: &[f64]| {
        queries += 1;
        f(p)
    };
    let mut point = x.to_vec();
    let grad = match scheme {
        DifferenceScheme::Forward => {
            let base = eval(x);
            (0..x.len())
                .map(|j| {
                    point[j] = x[j] + l;
                    let v = eval(&point);
                    point[j] = x[j];
                    (v - base) / l
                })
                .collect()
        }
        DifferenceScheme::Centered => (0..x.len())
            .map(|j| {
                point[j] = x[j] + l;
                let up = eval(&point);
                point[j] = x[j] - l;
                let down = eval(&point);
                point[j] = x[j];
                (up - down) / (2.0 * l)
            })
            .collect(),
    };
    Ok((grad, queries))
}

#[derive(Debug, Clone, Serialize)]
pub struct PolynomialFit {
    /// Constant term first.
    pub coefficients: Vec<f64>,
    pub residual: Vec<f64>,
    pub condition: f64,
}

const CONDITION_LIMIT: f64 = 1e12;

/// Monomial fit of `degree` through `(x, v)` nodes: interpolation when the
/// node count is `degree + 1`, least squares beyond.
pub fn vandermonde_fit(nodes: &[(f64, f64)], degree: usize) -> Result<PolynomialFit> {
    let k = nodes.len();
    if k < degree + 1 {
        return Err(Error::InvalidParameter(format!("{k} nodes cannot fix a degree-{degree} polynomial")));
    }
    for (i, a) in nodes.iter().enumerate() {
        if nodes[..i].iter().any(|b| b.0 == a.0) {
            return Err(Error::InvalidParameter(format!("repeated node {}", a.0)));
        }
    }
    let vmat = DMatrix::from_fn(k, degree + 1, |r, c| nodes[r].0.powi(c as i32));
    let rhs = DVector::from_iterator(k, nodes.iter().map(|n| n.1));
    let svd = vmat.clone().svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if condition > CONDITION_LIMIT {
        return Err(Error::IllConditioned(condition));
    }
    let coeffs = if k == degree + 1 {
        vmat.clone()
            .lu()
            .solve(&rhs)
            .ok_or(Error::IllConditioned(condition))?
    } else {
        svd.solve(&rhs, 0.0).map_err(|_| Error::IllConditioned(condition))?
    };
    let residual = &vmat * &coeffs - &rhs;
    Ok(PolynomialFit {
        coefficients: coeffs.iter().copied().collect(),
        residual: residual.iter().copied().collect(),
        condition,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn query_counts() {
        let f = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>();
        let x = [1.0, 2.0, 3.0];
        let (_, q) = finite_difference_gradient(f, &x, DifferenceScheme::Forward, 1e-4).unwrap();
        assert_eq!(q, 4);
        let (g, q) = finite_difference_gradient(f, &x, DifferenceScheme::Centered, 1e-4).unwrap();
        assert_eq!(q, 6);
        for (a, b) in g.iter().zip([2.0, 4.0, 6.0]) {
            assert!((a - b).abs() < 1e-6);
        }
    }

    #[test]
    fn linear_exact_for_any_step() {
        let f = |x: &[f64]| 2.0 * x[0] - 0.5 * x[1] + 3.0;
        for l in [1e-3, 0.5, 4.0] {
            for s in [DifferenceScheme::Forward, DifferenceScheme::Centered] {
                let (g, _) = finite_difference_gradient(f, &[0.7, -1.1], s, l).unwrap();
                assert!((g[0] - 2.0).abs() < 1e-9 && (g[1] + 0.5).abs() < 1e-9);
            }
        }
        assert!(finite_difference_gradient(f, &[0.0, 0.0], DifferenceScheme::Forward, 0.0).is_err());
    }

    #[test]
    fn interpolates_quadratic() {
        let p = |x: f64| 1.0 + 2.0 * x + 3.0 * x * x;
        let nodes: Vec<(f64, f64)> = [-1.0, 0.5, 2.0].iter().map(|&x| (x, p(x))).collect();
        let fit = vandermonde_fit(&nodes, 2).unwrap();
        for (c, want) in fit.coefficients.iter().zip([1.0, 2.0, 3.0]) {
            assert!((c - want).abs() < 1e-9);
        }
        assert!(fit.residual.iter().all(|r| r.abs() < 1e-12));
    }

    #[test]
    fn least_squares_and_constants() {
        let nodes: Vec<(f64, f64)> = (0..6).map(|i| (i as f64, 4.0)).collect();
        let fit = vandermonde_fit(&nodes, 2).unwrap();
        assert!((fit.coefficients[0] - 4.0).abs() < 1e-9);
        assert!(fit.coefficients[1..].iter().all(|c| c.abs() < 1e-9));
        assert!(vandermonde_fit(&[(1.0, 1.0), (1.0, 2.0)], 1).is_err());
        assert!(vandermonde_fit(&[(1.0, 1.0)], 1).is_err());
    }
}
