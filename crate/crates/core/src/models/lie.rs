use num_traits::{One, Zero};

use super::ModelsError;
use crate::graded::{int, Parity, Rational};

/// A finite-dimensional real Lie superalgebra with structure constants
/// `[e_i, e_j] = c^r_{ij} e_r` and an invariant non-degenerate metric `h^{ij}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LieSuperAlgebraSpec {
    pub name: String,
    pub parities: Vec<Parity>,
    /// `structure[r][i][j] = c^r_{ij}`.
    pub structure: Vec<Vec<Vec<Rational>>>,
    /// `metric[i][j] = h^{ij}`.
    pub metric: Vec<Vec<Rational>>,
}

impl LieSuperAlgebraSpec {
    pub fn new(
        name: impl Into<String>,
        parities: Vec<Parity>,
        structure: Vec<Vec<Vec<Rational>>>,
        metric: Vec<Vec<Rational>>,
    ) -> Result<Self, ModelsError> {
        let spec = LieSuperAlgebraSpec {
            name: name.into(),
            parities,
            structure,
            metric,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// `su(2)` with `c^r_{ij} = ε_{rij}` and `h = 1`.
    pub fn su2() -> Self {
        let mut c = vec![vec![vec![Rational::zero(); 3]; 3]; 3];
        for (r, i, j) in [(0, 1, 2), (1, 2, 0), (2, 0, 1)] {
            c[r][i][j] = int(1);
            c[r][j][i] = int(-1);
        }
        Self::new("su2", vec![Parity::Even; 3], c, identity(3)).expect("su(2) is a Lie algebra")
    }

    /// The abelian algebra of dimension `m` with `h = 1`.
    pub fn abelian(m: usize) -> Self {
        let c = vec![vec![vec![Rational::zero(); m]; m]; m];
        Self::new(format!("u1x{m}"), vec![Parity::Even; m], c, identity(m)).expect("abelian algebra")
    }

    pub fn dim(&self) -> usize {
        self.parities.len()
    }

    pub fn c(&self, r: usize, i: usize, j: usize) -> &Rational {
        &self.structure[r][i][j]
    }

    fn validate(&self) -> Result<(), ModelsError> {
        let m = self.dim();
        let shape_ok = self.structure.len() == m
            && self.structure.iter().all(|a| a.len() == m && a.iter().all(|b| b.len() == m))
            && self.metric.len() == m
            && self.metric.iter().all(|row| row.len() == m);
        if !shape_ok {
            return Err(ModelsError::Algebra("structure constants or metric have the wrong shape".into()));
        }
        let par = |i: usize| self.parities[i].bit() as i64;
        for r in 0..m {
            for i in 0..m {
                for j in 0..m {
                    let c = self.c(r, i, j);
                    if c.is_zero() {
                        continue;
                    }
                    if self.parities[r] != self.parities[i] + self.parities[j] {
                        return Err(ModelsError::Algebra(format!("c^{r}_{{{i}{j}}} is not even")));
                    }
                    let swap = if par(i) * par(j) % 2 == 1 { int(1) } else { int(-1) };
                    if *c != swap * self.c(r, j, i) {
                        return Err(ModelsError::Algebra(format!(
                            "c^{r}_{{{i}{j}}} is not graded antisymmetric"
                        )));
                    }
                }
            }
        }
        // (−1)^{[i][k]}[[e_i,e_j],e_k] + (−1)^{[j][i]}[[e_j,e_k],e_i] + (−1)^{[k][j]}[[e_k,e_i],e_j] = 0
        let sign = |a: usize, b: usize| if par(a) * par(b) % 2 == 1 { int(-1) } else { int(1) };
        for i in 0..m {
            for j in 0..m {
                for k in 0..m {
                    for s in 0..m {
                        let mut acc = Rational::zero();
                        for r in 0..m {
                            acc += sign(i, k) * self.c(r, i, j) * self.c(s, r, k);
                            acc += sign(j, i) * self.c(r, j, k) * self.c(s, r, i);
                            acc += sign(k, j) * self.c(r, k, i) * self.c(s, r, j);
                        }
                        if !acc.is_zero() {
                            return Err(ModelsError::Algebra(format!(
                                "Jacobi identity fails for (e{i}, e{j}, e{k}) in direction e{s}"
                            )));
                        }
                    }
                }
            }
        }
        if inverse(&self.metric).is_none() {
            return Err(ModelsError::Algebra("metric is degenerate".into()));
        }
        Ok(())
    }

    /// `h_{ij}`, the inverse of the metric.
    pub fn metric_inverse(&self) -> Vec<Vec<Rational>> {
        inverse(&self.metric).expect("validated metric is invertible")
    }
}

fn identity(m: usize) -> Vec<Vec<Rational>> {
    (0..m)
        .map(|i| (0..m).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect())
        .collect()
}

/// Gauss–Jordan inverse over the rationals.
pub(crate) fn inverse(a: &[Vec<Rational>]) -> Option<Vec<Vec<Rational>>> {
    let m = a.len();
    let mut work: Vec<Vec<Rational>> = a.to_vec();
    let mut inv = identity(m);
    for col in 0..m {
        let pivot = (col..m).find(|&r| !work[r][col].is_zero())?;
        work.swap(col, pivot);
        inv.swap(col, pivot);
        let p = work[col][col].clone();
        for x in work[col].iter_mut().chain(inv[col].iter_mut()) {
            *x /= p.clone();
        }
        for r in 0..m {
            if r != col && !work[r][col].is_zero() {
                let f = work[r][col].clone();
                for c in 0..m {
                    let w = work[col][c].clone() * f.clone();
                    work[r][c] -= w;
                    let v = inv[col][c].clone() * f.clone();
                    inv[r][c] -= v;
                }
            }
        }
    }
    Some(inv)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::ratio;

    #[test]
    fn su2_validates() {
        let g = LieSuperAlgebraSpec::su2();
        assert_eq!(g.dim(), 3);
        assert_eq!(*g.c(0, 1, 2), int(1));
        assert_eq!(*g.c(0, 2, 1), int(-1));
    }

    #[test]
    fn broken_jacobi_is_rejected() {
        // [e0,e1] = e1, [e0,e2] = e1, [e1,e2] = e0 violates Jacobi.
        let mut c = vec![vec![vec![Rational::zero(); 3]; 3]; 3];
        let mut set = |r: usize, i: usize, j: usize, v: i64| {
            c[r][i][j] = int(v);
            c[r][j][i] = int(-v);
        };
        set(1, 0, 1, 1);
        set(1, 0, 2, 1);
        set(0, 1, 2, 1);
        let err = LieSuperAlgebraSpec::new("bad", vec![Parity::Even; 3], c, identity(3));
        assert!(matches!(err, Err(ModelsError::Algebra(msg)) if msg.contains("Jacobi")));
    }

    #[test]
    fn asymmetric_constants_are_rejected() {
        let mut c = vec![vec![vec![Rational::zero(); 2]; 2]; 2];
        c[0][0][1] = int(1);
        assert!(LieSuperAlgebraSpec::new("bad", vec![Parity::Even; 2], c, identity(2)).is_err());
    }

    #[test]
    fn rational_inverse() {
        let a = vec![vec![int(2), int(1)], vec![int(1), int(1)]];
        let inv = inverse(&a).unwrap();
        assert_eq!(inv, vec![vec![int(1), int(-1)], vec![int(-1), int(2)]]);
        let b = vec![vec![int(1), ratio(1, 2)], vec![int(2), int(1)]];
        assert!(inverse(&b).is_none());
    }
}
