use crate::error::{Error, Result};

/// Symmetric tridiagonal matrix stored as its diagonal and one off-diagonal.
#[derive(Debug, Clone, PartialEq)]
pub struct TridiagonalMatrix {
    diagonal: Vec<f64>,
    off_diagonal: Vec<f64>,
}

impl TridiagonalMatrix {
    pub fn new(diagonal: Vec<f64>, off_diagonal: Vec<f64>) -> Result<Self> {
        if diagonal.len() < 2 || off_diagonal.len() + 1 != diagonal.len() {
            return Err(Error::BadParameter(format!(
                "need order >= 2 and one fewer off-diagonal entries, got {} and {}",
                diagonal.len(),
                off_diagonal.len()
            )));
        }
        if diagonal.iter().chain(&off_diagonal).any(|x| !x.is_finite()) {
            return Err(Error::BadParameter("matrix entries must be finite".into()));
        }
        Ok(Self { diagonal, off_diagonal })
    }

    pub fn order(&self) -> usize {
        self.diagonal.len()
    }

    pub fn diagonal(&self) -> &[f64] {
        &self.diagonal
    }

    pub fn off_diagonal(&self) -> &[f64] {
        &self.off_diagonal
    }

    pub fn negated(&self) -> Self {
        Self {
            diagonal: self.diagonal.iter().map(|x| -x).collect(),
            off_diagonal: self.off_diagonal.iter().map(|x| -x).collect(),
        }
    }
}

/// All eigenvalues in ascending order by implicit-shift QL.
pub fn symmetric_tridiagonal_eigenvalues(m: &TridiagonalMatrix) -> Result<Vec<f64>> {
    let n = m.order();
    let mut d = m.diagonal.clone();
    let mut e = m.off_diagonal.clone();
    e.push(0.0);
    let budget = 50 * n;
    let mut spent = 0;

    for l in 0..n {
        loop {
            let mut mm = l;
            while mm + 1 < n {
                let dd = d[mm].abs() + d[mm + 1].abs();
                if e[mm].abs() <= f64::EPSILON * dd {
                    break;
                }
                mm += 1;
            }
            if mm == l {
                break;
            }
            spent += 1;
            if spent > budget {
                return Err(Error::NonConvergence { what: "tridiagonal QL", iterations: budget });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[mm] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut deflated = false;
            for i in (l..mm).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[mm] = 0.0;
                    deflated = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if deflated {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[mm] = 0.0;
        }
    }
    d.sort_by(f64::total_cmp);
    Ok(d)
}
