//! Finite-dimensional vector spaces over a finite field, with vectors
//! enumerated explicitly as coordinate tuples.

use serde::{Deserialize, Serialize};

use super::field::FiniteField;
use crate::caps::{checked_pow, Caps};
use crate::error::{Error, Result};
use crate::finset::{lex_rank, lex_unrank, FinMap, FinSet};

/// Largest explicit vector enumeration.
pub const VECTOR_CAP: u128 = 1 << 16;

/// `F_q^dim`; element `i` is the coordinate tuple of `i` in base `q`, first coordinate most significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VectObject {
    pub dim: usize,
}

impl VectObject {
    pub fn new(dim: usize) -> Self {
        VectObject { dim }
    }
}

/// Arithmetic on explicitly enumerated spaces over one field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VectSpaces {
    pub field: FiniteField,
}

impl VectSpaces {
    pub fn new(q: usize) -> Result<Self> {
        Ok(VectSpaces {
            field: FiniteField::new(q)?,
        })
    }

    pub fn q(&self) -> usize {
        self.field.order()
    }

    pub fn size(&self, v: &VectObject) -> Result<usize> {
        let n = checked_pow(self.q() as u128, v.dim as u128);
        match n {
            Some(n) if n <= VECTOR_CAP => Ok(n as usize),
            _ => Err(Error::too_large(
                format!("F_{}^{}", self.q(), v.dim),
                n.map(|n| n.to_string()).unwrap_or("overflow".into()),
                VECTOR_CAP,
            )),
        }
    }

    pub fn carrier(&self, v: &VectObject) -> Result<FinSet> {
        Ok(FinSet::new(self.size(v)?))
    }

    pub fn coords(&self, v: &VectObject, index: usize) -> Vec<usize> {
        lex_unrank(index as u128, v.dim, self.q())
    }

    pub fn index(&self, coords: &[usize]) -> usize {
        lex_rank(coords, self.q()) as usize
    }

    pub fn add(&self, v: &VectObject, a: usize, b: usize) -> usize {
        let (x, y) = (self.coords(v, a), self.coords(v, b));
        self.index(
            &x.iter()
                .zip(&y)
                .map(|(&s, &t)| self.field.add(s, t))
                .collect::<Vec<_>>(),
        )
    }

    pub fn scale(&self, v: &VectObject, s: usize, a: usize) -> usize {
        let x = self.coords(v, a);
        self.index(&x.iter().map(|&t| self.field.mul(s, t)).collect::<Vec<_>>())
    }

    /// The map of an `m × n` matrix (rows are output coordinates).
    pub fn linear_map(&self, src: &VectObject, tgt: &VectObject, matrix: &[Vec<usize>]) -> Result<FinMap> {
        let n = self.size(src)?;
        let table = (0..n)
            .map(|i| {
                let x = self.coords(src, i);
                let y: Vec<usize> = matrix.iter().map(|row| self.field.dot(row, &x)).collect();
                self.index(&y)
            })
            .collect();
        FinMap::new(FinSet::new(n), self.carrier(tgt)?, table)
    }

    /// Recovers the matrix of `f` from basis images; `None` when `f` is not linear.
    pub fn matrix_of(&self, src: &VectObject, tgt: &VectObject, f: &FinMap) -> Option<Vec<Vec<usize>>> {
        if f.dom.size != self.size(src).ok()? || f.cod.size != self.size(tgt).ok()? {
            return None;
        }
        let columns: Vec<Vec<usize>> = (0..src.dim)
            .map(|j| {
                let mut e = vec![0; src.dim];
                e[j] = 1;
                self.coords(tgt, f.apply(self.index(&e)))
            })
            .collect();
        let matrix: Vec<Vec<usize>> = (0..tgt.dim).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
        let rebuilt = self.linear_map(src, tgt, &matrix).ok()?;
        (rebuilt.table == f.table).then_some(matrix)
    }

    pub fn is_linear(&self, src: &VectObject, tgt: &VectObject, f: &FinMap) -> bool {
        self.matrix_of(src, tgt, f).is_some()
    }

    /// All linear maps `src → tgt`, sorted by value table.
    pub fn linear_maps(&self, src: &VectObject, tgt: &VectObject, caps: &Caps) -> Result<Vec<FinMap>> {
        let entries = src.dim * tgt.dim;
        let count = caps.admit(
            &format!("linear maps F_{q}^{}→F_{q}^{}", src.dim, tgt.dim, q = self.q()),
            checked_pow(self.q() as u128, entries as u128),
        )?;
        let mut maps = (0..count)
            .map(|r| {
                let flat = lex_unrank(r, entries, self.q());
                let matrix: Vec<Vec<usize>> = flat.chunks(src.dim.max(1)).map(|c| c.to_vec()).collect();
                let matrix = if src.dim == 0 {
                    vec![Vec::new(); tgt.dim]
                } else {
                    matrix
                };
                self.linear_map(src, tgt, &matrix)
            })
            .collect::<Result<Vec<_>>>()?;
        maps.sort_by(|a, b| a.table.cmp(&b.table));
        maps.dedup();
        Ok(maps)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dual_space_sizes() {
        let caps = Caps::default();
        for q in [2, 3, 4, 5] {
            let vs = VectSpaces::new(q).unwrap();
            for dim in 0..3 {
                let maps = vs
                    .linear_maps(&VectObject::new(dim), &VectObject::new(1), &caps)
                    .unwrap();
                assert_eq!(maps.len(), q.pow(dim as u32), "q={q} dim={dim}");
                assert!(maps
                    .iter()
                    .all(|f| vs.is_linear(&VectObject::new(dim), &VectObject::new(1), f)));
            }
        }
    }

    #[test]
    fn nonlinear_map_is_detected() {
        let vs = VectSpaces::new(2).unwrap();
        let v = VectObject::new(2);
        let k = VectObject::new(1);
        // the product of the two coordinates
        let f = FinMap::from_table(4, 2, vec![0, 0, 0, 1]);
        assert!(!vs.is_linear(&v, &k, &f));
    }

    #[test]
    fn zero_dimensional_space() {
        let vs = VectSpaces::new(3).unwrap();
        let caps = Caps::default();
        let z = VectObject::new(0);
        let maps = vs.linear_maps(&z, &VectObject::new(2), &caps).unwrap();
        assert_eq!(maps.len(), 1);
        assert_eq!(vs.linear_maps(&VectObject::new(2), &z, &caps).unwrap().len(), 1);
    }
}
