//! Thomas algorithm for tridiagonal systems.

use crate::error::{Error, Result};

/// LU factorization of a tridiagonal matrix, reusable for several right-hand sides.
///
/// Row `i` reads `lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1]`; `lower[0]` and
/// `upper[n-1]` are ignored.
#[derive(Debug, Clone)]
pub struct Tridiagonal {
    lower: Vec<f64>,
    upper_mod: Vec<f64>,
    pivot: Vec<f64>,
}

impl Tridiagonal {
    pub fn factor(lower: &[f64], diag: &[f64], upper: &[f64]) -> Result<Self> {
        let mut out = Self {
            lower: Vec::new(),
            upper_mod: Vec::new(),
            pivot: Vec::new(),
        };
        out.refactor(lower, diag, upper)?;
        Ok(out)
    }

    /// Factor in place, reusing the allocations of `self`.
    pub fn refactor(&mut self, lower: &[f64], diag: &[f64], upper: &[f64]) -> Result<()> {
        let n = diag.len();
        if n == 0 || lower.len() != n || upper.len() != n {
            return Err(Error::Consistency(format!(
                "tridiagonal bands have lengths {}/{}/{}",
                lower.len(),
                n,
                upper.len()
            )));
        }
        self.lower.clear();
        self.lower.extend_from_slice(lower);
        self.upper_mod.resize(n, 0.0);
        self.pivot.resize(n, 0.0);
        let mut prev_upper = 0.0;
        for i in 0..n {
            let p = if i == 0 { diag[0] } else { diag[i] - lower[i] * prev_upper };
            if !p.is_finite() || p.abs() < 1e-300 {
                return Err(Error::Consistency(format!("zero pivot in tridiagonal row {i}")));
            }
            self.pivot[i] = p;
            prev_upper = if i + 1 < n { upper[i] / p } else { 0.0 };
            self.upper_mod[i] = prev_upper;
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.pivot.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pivot.is_empty()
    }

    /// Overwrite `rhs` with the solution.
    pub fn solve_in_place(&self, rhs: &mut [f64]) {
        let n = self.pivot.len();
        debug_assert_eq!(rhs.len(), n);
        rhs[0] /= self.pivot[0];
        for i in 1..n {
            rhs[i] = (rhs[i] - self.lower[i] * rhs[i - 1]) / self.pivot[i];
        }
        for i in (0..n - 1).rev() {
            rhs[i] -= self.upper_mod[i] * rhs[i + 1];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        // [2 1 0; 1 3 1; 0 1 2] x = [3, 5, 3] -> x = [1, 1, 1]
        let t = Tridiagonal::factor(&[0.0, 1.0, 1.0], &[2.0, 3.0, 2.0], &[1.0, 1.0, 0.0]).unwrap();
        let mut b = vec![3.0, 5.0, 3.0];
        t.solve_in_place(&mut b);
        for x in b {
            assert!((x - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn rejects_singular() {
        assert!(Tridiagonal::factor(&[0.0, 1.0], &[1.0, 1.0], &[1.0, 0.0]).is_err());
    }
}
