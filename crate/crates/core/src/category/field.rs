//! Finite fields of desk size and Gaussian elimination over them.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `F_q` given by explicit addition and multiplication tables.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "u32", into = "u32")]
pub struct FiniteField {
    q: usize,
    add: Vec<Vec<usize>>,
    mul: Vec<Vec<usize>>,
    neg: Vec<usize>,
    inv: Vec<usize>,
}

impl TryFrom<u32> for FiniteField {
    type Error = Error;
    fn try_from(q: u32) -> Result<Self> {
        FiniteField::new(q as usize)
    }
}

impl From<FiniteField> for u32 {
    fn from(f: FiniteField) -> u32 {
        f.q as u32
    }
}

fn is_prime(n: usize) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
}

impl FiniteField {
    /// Prime fields `Z/p` (p < 256) and `F_4 = F_2[x]/(x² + x + 1)`.
    pub fn new(q: usize) -> Result<Self> {
        let (add, mul) = if is_prime(q) && q < 256 {
            let add = (0..q).map(|a| (0..q).map(|b| (a + b) % q).collect()).collect();
            let mul = (0..q).map(|a| (0..q).map(|b| (a * b) % q).collect()).collect();
            (add, mul)
        } else if q == 4 {
            // elements a + b·x encoded as 2b + a
            let add = (0..4).map(|a| (0..4).map(|b| a ^ b).collect()).collect();
            let mul = (0..4)
                .map(|a| {
                    (0..4)
                        .map(|b| {
                            let (a0, a1, b0, b1) = (a & 1, a >> 1, b & 1, b >> 1);
                            // (a0 + a1 x)(b0 + b1 x), x² = x + 1
                            let c0 = (a0 * b0) ^ (a1 * b1);
                            let c1 = (a0 * b1) ^ (a1 * b0) ^ (a1 * b1);
                            c0 | (c1 << 1)
                        })
                        .collect()
                })
                .collect();
            (add, mul)
        } else {
            return Err(Error::InvalidInput(format!(
                "unsupported field order {q}: use a prime below 256 or 4"
            )));
        };
        let field = FiniteField::from_tables(q, add, mul);
        field.check_axioms()?;
        Ok(field)
    }

    fn from_tables(q: usize, add: Vec<Vec<usize>>, mul: Vec<Vec<usize>>) -> Self {
        let neg = (0..q).map(|a| (0..q).find(|&b| add[a][b] == 0).unwrap_or(0)).collect();
        let inv = (0..q).map(|a| (1..q).find(|&b| mul[a][b] == 1).unwrap_or(0)).collect();
        FiniteField { q, add, mul, neg, inv }
    }

    pub fn check_axioms(&self) -> Result<()> {
        let q = self.q;
        let fail = |what: &str| Err(Error::Structural(format!("F_{q}: {what} fails")));
        for a in 0..q {
            if self.add[a][0] != a || self.mul[a][1] != a {
                return fail("identity");
            }
            if self.add[a][self.neg[a]] != 0 {
                return fail("additive inverse");
            }
            if a != 0 && self.mul[a][self.inv[a]] != 1 {
                return fail("multiplicative inverse");
            }
            for b in 0..q {
                if self.add[a][b] != self.add[b][a] || self.mul[a][b] != self.mul[b][a] {
                    return fail("commutativity");
                }
                for c in 0..q {
                    if self.add[self.add[a][b]][c] != self.add[a][self.add[b][c]]
                        || self.mul[self.mul[a][b]][c] != self.mul[a][self.mul[b][c]]
                    {
                        return fail("associativity");
                    }
                    if self.mul[a][self.add[b][c]] != self.add[self.mul[a][b]][self.mul[a][c]] {
                        return fail("distributivity");
                    }
                }
            }
        }
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.q
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a][b]
    }

    pub fn sub(&self, a: usize, b: usize) -> usize {
        self.add[a][self.neg[b]]
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn neg(&self, a: usize) -> usize {
        self.neg[a]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn dot(&self, a: &[usize], b: &[usize]) -> usize {
        a.iter().zip(b).fold(0, |acc, (&x, &y)| self.add(acc, self.mul(x, y)))
    }

    /// Reduced row echelon form in place; returns the pivot columns.
    pub fn rref(&self, rows: &mut Vec<Vec<usize>>, ncols: usize) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..ncols {
            let Some(p) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
                continue;
            };
            rows.swap(r, p);
            let scale = self.inv(rows[r][col]);
            for v in rows[r].iter_mut() {
                *v = self.mul(*v, scale);
            }
            for i in 0..rows.len() {
                if i != r && rows[i][col] != 0 {
                    let factor = rows[i][col];
                    let pivot = rows[r].clone();
                    for (v, &p) in rows[i].iter_mut().zip(&pivot) {
                        *v = self.sub(*v, self.mul(factor, p));
                    }
                }
            }
            pivots.push(col);
            r += 1;
            if r == rows.len() {
                break;
            }
        }
        rows.truncate(r);
        pivots
    }

    pub fn rank(&self, rows: &[Vec<usize>], ncols: usize) -> usize {
        let mut m = rows.to_vec();
        self.rref(&mut m, ncols).len()
    }

    /// A basis of `{x | A x = 0}` read off the reduced echelon form, one vector per free column.
    pub fn nullspace(&self, rows: &[Vec<usize>], ncols: usize) -> Vec<Vec<usize>> {
        let mut m = rows.to_vec();
        let pivots = self.rref(&mut m, ncols);
        let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut v = vec![0; ncols];
                v[f] = 1;
                for (row, &p) in m.iter().zip(&pivots) {
                    v[p] = self.neg(row[f]);
                }
                v
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn desk_fields_satisfy_axioms() {
        for q in [2, 3, 4, 5, 7] {
            let f = FiniteField::new(q).unwrap();
            assert_eq!(f.order(), q);
        }
        assert!(FiniteField::new(6).is_err());
        assert!(FiniteField::new(1).is_err());
    }

    #[test]
    fn f4_has_a_cube_root_of_unity() {
        let f = FiniteField::new(4).unwrap();
        let x = 2;
        assert_eq!(f.mul(x, f.mul(x, x)), 1);
        assert_ne!(f.mul(x, x), 1);
    }

    #[test]
    fn nullspace_vectors_solve_the_system() {
        let f = FiniteField::new(3).unwrap();
        let a = vec![vec![1, 2, 0, 1], vec![0, 1, 1, 2]];
        let ns = f.nullspace(&a, 4);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            for row in &a {
                assert_eq!(f.dot(row, v), 0);
            }
        }
        assert_eq!(f.rank(&ns, 4), 2);
    }
}
