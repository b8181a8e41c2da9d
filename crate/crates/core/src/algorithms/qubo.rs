use serde::Serialize;

use crate::error::{Error, Result};

/// `H₀(x) = Σ_ij Q_ij x_i x_j + Σ_i c_i x_i` over `x ∈ {0,1}^n`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuboProblem {
    q: Vec<Vec<f64>>,
    c: Vec<f64>,
}

impl QuboProblem {
    pub fn new(q: Vec<Vec<f64>>, c: Vec<f64>) -> Result<Self> {
        let n = c.len();
        if n == 0 || n > 24 {
            return Err(Error::InvalidParameter(format!("{n} variables outside 1..=24")));
        }
        if q.len() != n || q.iter().any(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: q.len(),
            });
        }
        for i in 0..n {
            for j in 0..n {
                if !q[i][j].is_finite() || (q[i][j] - q[j][i]).abs() > 1e-12 {
                    return Err(Error::InvalidParameter(format!("Q not symmetric and finite at ({i}, {j})")));
                }
            }
        }
        Ok(Self { q, c })
    }

    pub fn n(&self) -> usize {
        self.c.len()
    }

    pub fn objective(&self, x: &[bool]) -> f64 {
        let n = self.n();
        let mut h = 0.0;
        for i in 0..n {
            if !x[i] {
                continue;
            }
            h += self.c[i];
            for j in 0..n {
                if x[j] {
                    h += self.q[i][j];
                }
            }
        }
        h
    }
}

/// Bit vector with `x_0` as the most significant bit of `index`.
fn bits_of(index: u32, n: usize) -> Vec<bool> {
    (0..n).map(|i| (index >> (n - 1 - i)) & 1 == 1).collect()
}

/// Exhaustive minimum over a Gray-code walk. Ties (within rounding of the
/// incremental update) go to the lexicographically smallest vector.
pub fn qubo_bruteforce(p: &QuboProblem) -> (Vec<bool>, f64) {
    let n = p.n();
    let scale = 1.0
        + p.q.iter().flatten().map(|v| v.abs()).sum::<f64>()
        + p.c.iter().map(|v| v.abs()).sum::<f64>();
    let tie = 1e-12 * scale;
    let mut x = vec![false; n];
    // field[i] = Σ_{j≠i} Q_ij x_j
    let mut field = vec![0.0; n];
    let mut h = 0.0;
    let mut index: u32 = 0;
    let (mut best_h, mut best_index) = (0.0, 0u32);
    for step in 1u64..(1u64 << n) {
        let bit = step.trailing_zeros() as usize;
        // Gray step flips the variable whose position is `bit` from the least
        // significant end
        let i = n - 1 - bit;
        let delta = p.q[i][i] + p.c[i] + 2.0 * field[i];
        if x[i] {
            h -= delta;
        } else {
            h += delta;
        }
        x[i] = !x[i];
        let sign = if x[i] { 1.0 } else { -1.0 };
        for (j, f) in field.iter_mut().enumerate() {
            if j != i {
                *f += sign * p.q[j][i];
            }
        }
        index ^= 1 << bit;
        if h < best_h - tie || (h <= best_h + tie && index < best_index) {
            best_h = h;
            best_index = index;
        }
    }
    let best = bits_of(best_index, n);
    let h0 = p.objective(&best);
    (best, h0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::trial_rng;
    use rand::Rng;

    fn dfs(p: &QuboProblem, x: &mut Vec<bool>, best: &mut Option<(Vec<bool>, f64)>) {
        if x.len() == p.n() {
            let h = p.objective(x);
            // lexicographic order of visits means strict improvement keeps the smallest
            if best.as_ref().is_none_or(|b| h < b.1 - 1e-9) {
                *best = Some((x.clone(), h));
            }
            return;
        }
        for v in [false, true] {
            x.push(v);
            dfs(p, x, best);
            x.pop();
        }
    }

    fn random_problem(n: usize, rng: &mut crate::seed::SeededRng, integer: bool) -> QuboProblem {
        let mut q = vec![vec![0.0; n]; n];
        let draw = |rng: &mut crate::seed::SeededRng| {
            if integer {
                rng.random_range(-3..=3) as f64
            } else {
                rng.random::<f64>() * 2.0 - 1.0
            }
        };
        for i in 0..n {
            for j in i..n {
                let v = draw(rng);
                q[i][j] = v;
                q[j][i] = v;
            }
        }
        let c = (0..n).map(|_| draw(rng)).collect();
        QuboProblem::new(q, c).unwrap()
    }

    #[test]
    fn trivial_cases() {
        let zero = vec![vec![0.0; 2]; 2];
        let p = QuboProblem::new(zero.clone(), vec![1.0, 1.0]).unwrap();
        assert_eq!(qubo_bruteforce(&p), (vec![false, false], 0.0));
        let p = QuboProblem::new(zero, vec![-1.0, -1.0]).unwrap();
        assert_eq!(qubo_bruteforce(&p), (vec![true, true], -2.0));
    }

    #[test]
    fn ties_go_to_smallest() {
        let p = QuboProblem::new(vec![vec![0.0; 3]; 3], vec![0.0, -1.0, 0.0]).unwrap();
        assert_eq!(qubo_bruteforce(&p).0, vec![false, true, false]);
    }

    #[test]
    fn matches_second_enumerator() {
        for trial in 0..100 {
            let mut rng = trial_rng(5, trial);
            let n = rng.random_range(1..=12);
            let p = random_problem(n, &mut rng, trial % 2 == 0);
            let (x, h) = qubo_bruteforce(&p);
            let mut best = None;
            dfs(&p, &mut Vec::new(), &mut best);
            let (bx, bh) = best.unwrap();
            assert!((h - bh).abs() < 1e-9, "trial {trial}");
            assert_eq!(x, bx, "trial {trial}");
        }
    }

    #[test]
    fn beats_random_sampling() {
        let mut rng = trial_rng(9, 0);
        let p = random_problem(10, &mut rng, false);
        let (_, h) = qubo_bruteforce(&p);
        for _ in 0..1000 {
            let x: Vec<bool> = (0..10).map(|_| rng.random::<bool>()).collect();
            assert!(h <= p.objective(&x) + 1e-12);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(QuboProblem::new(vec![vec![0.0, 1.0], vec![0.0, 0.0]], vec![0.0, 0.0]).is_err());
        assert!(QuboProblem::new(vec![], vec![]).is_err());
    }
}
