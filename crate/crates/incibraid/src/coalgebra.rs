//! The incidence coalgebra `D = KY` and exact linear maps on its tensor
//! powers.
//!
//! Basis of `D^{⊗k}`: tuples of interval indices flattened row-major, so
//! `(i1,i2,i3) ↦ i1·|Y|² + i2·|Y| + i3`. Maps store sparse columns: column
//! `j` lists the image of basis vector `j` (rows are outputs).

use std::collections::BTreeMap;

use thiserror::Error;

use crate::poset::Poset;
use crate::scalars::{Field, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoalgebraError {
    #[error("({0},{1}) is not an interval")]
    NotInterval(String, String),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("tensor_lift needs a map on D⊗D, got power {0}")]
    WrongPower(u32),
    #[error("field mismatch")]
    FieldMismatch,
}

/// All pairs `(a,b)` with `a <= b`, ordered by `a` then `b` in element order.
#[derive(Debug, Clone)]
pub struct IntervalBasis {
    poset: Poset,
    pairs: Vec<(usize, usize)>,
    index: Vec<Vec<Option<usize>>>,
}

impl IntervalBasis {
    pub fn new(poset: Poset) -> IntervalBasis {
        let n = poset.len();
        let mut pairs = Vec::new();
        let mut index = vec![vec![None; n]; n];
        for a in 0..n {
            for b in 0..n {
                if poset.leq(a, b) {
                    index[a][b] = Some(pairs.len());
                    pairs.push((a, b));
                }
            }
        }
        IntervalBasis { poset, pairs, index }
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn pair(&self, i: usize) -> (usize, usize) {
        self.pairs[i]
    }

    pub fn index(&self, a: usize, b: usize) -> Option<usize> {
        self.index[a][b]
    }

    pub fn try_index(&self, a: usize, b: usize) -> Result<usize, CoalgebraError> {
        self.index[a][b].ok_or_else(|| self.not_interval(a, b))
    }

    fn not_interval(&self, a: usize, b: usize) -> CoalgebraError {
        CoalgebraError::NotInterval(self.poset.label(a).into(), self.poset.label(b).into())
    }

    /// `Δ(a,b) = Σ_{c∈[a,b]} (a,c)⊗(c,b)`.
    pub fn delta(&self, a: usize, b: usize) -> Result<Vec<((usize, usize), (usize, usize))>, CoalgebraError> {
        self.try_index(a, b)?;
        Ok(self.poset.interval(a, b).into_iter().map(|c| ((a, c), (c, b))).collect())
    }

    pub fn epsilon(&self, a: usize, b: usize, field: Field) -> Result<Scalar, CoalgebraError> {
        self.try_index(a, b)?;
        Ok(if a == b { field.one() } else { field.zero() })
    }

    pub fn group_likes(&self) -> Vec<(usize, usize)> {
        (0..self.poset.len()).map(|a| (a, a)).collect()
    }

    pub fn pair_label(&self, i: usize) -> String {
        let (a, b) = self.pairs[i];
        format!("({},{})", self.poset.label(a), self.poset.label(b))
    }
}

pub type SparseVec = Vec<(usize, Scalar)>;

fn collect(acc: BTreeMap<usize, Scalar>) -> SparseVec {
    acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
}

fn accumulate(acc: &mut BTreeMap<usize, Scalar>, k: usize, v: Scalar) {
    match acc.get_mut(&k) {
        Some(x) => *x += &v,
        None => {
            acc.insert(k, v);
        }
    }
}

/// A linear endomorphism of `D^{⊗power}` with `base = |Y|`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearMap {
    field: Field,
    base: usize,
    power: u32,
    cols: Vec<SparseVec>,
}

impl LinearMap {
    pub fn from_columns(field: Field, base: usize, power: u32, cols: Vec<SparseVec>) -> LinearMap {
        assert_eq!(cols.len(), base.pow(power));
        let cols = cols
            .into_iter()
            .map(|c| {
                let mut acc = BTreeMap::new();
                for (k, v) in c {
                    accumulate(&mut acc, k, v);
                }
                collect(acc)
            })
            .collect();
        LinearMap { field, base, power, cols }
    }

    pub fn identity(field: Field, base: usize, power: u32) -> LinearMap {
        let n = base.pow(power);
        LinearMap {
            field,
            base,
            power,
            cols: (0..n).map(|j| vec![(j, field.one())]).collect(),
        }
    }

    /// `u⊗v ↦ v⊗u` on `D⊗D`.
    pub fn flip(field: Field, base: usize) -> LinearMap {
        let cols = (0..base * base)
            .map(|j| vec![((j % base) * base + j / base, field.one())])
            .collect();
        LinearMap { field, base, power: 2, cols }
    }

    /// Rows are outputs.
    pub fn from_dense(field: Field, base: usize, power: u32, rows: &[Vec<Scalar>]) -> LinearMap {
        let n = base.pow(power);
        assert_eq!(rows.len(), n);
        let mut cols = vec![Vec::new(); n];
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), n);
            for (j, v) in row.iter().enumerate() {
                if !v.is_zero() {
                    cols[j].push((i, v.clone()));
                }
            }
        }
        LinearMap { field, base, power, cols }
    }

    pub fn to_dense(&self) -> Vec<Vec<Scalar>> {
        let n = self.dim();
        let mut rows = vec![vec![self.field.zero(); n]; n];
        for (j, col) in self.cols.iter().enumerate() {
            for (i, v) in col {
                rows[*i][j] = v.clone();
            }
        }
        rows
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn base(&self) -> usize {
        self.base
    }

    pub fn power(&self) -> u32 {
        self.power
    }

    pub fn dim(&self) -> usize {
        self.cols.len()
    }

    pub fn column(&self, j: usize) -> &SparseVec {
        &self.cols[j]
    }

    pub fn entry(&self, i: usize, j: usize) -> Scalar {
        self.cols[j]
            .iter()
            .find(|(k, _)| *k == i)
            .map_or_else(|| self.field.zero(), |(_, v)| v.clone())
    }

    pub fn apply(&self, v: &SparseVec) -> SparseVec {
        let mut acc = BTreeMap::new();
        for (j, c) in v {
            for (i, m) in &self.cols[*j] {
                accumulate(&mut acc, *i, c * m);
            }
        }
        collect(acc)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinearMap) -> Result<LinearMap, CoalgebraError> {
        if self.dim() != other.dim() {
            return Err(CoalgebraError::DimensionMismatch(self.dim(), other.dim()));
        }
        if self.field != other.field {
            return Err(CoalgebraError::FieldMismatch);
        }
        Ok(LinearMap {
            field: self.field,
            base: self.base,
            power: self.power,
            cols: other.cols.iter().map(|c| self.apply(c)).collect(),
        })
    }

    /// `maps[0] ∘ maps[1] ∘ ...`.
    pub fn compose_all(maps: &[&LinearMap]) -> Result<LinearMap, CoalgebraError> {
        let (last, rest) = maps.split_last().expect("at least one map");
        let mut acc = (*last).clone();
        for m in rest.iter().rev() {
            acc = m.compose(&acc)?;
        }
        Ok(acc)
    }

    pub fn sub(&self, other: &LinearMap) -> Result<LinearMap, CoalgebraError> {
        if self.dim() != other.dim() {
            return Err(CoalgebraError::DimensionMismatch(self.dim(), other.dim()));
        }
        let cols = self
            .cols
            .iter()
            .zip(&other.cols)
            .map(|(a, b)| {
                let mut acc = BTreeMap::new();
                for (k, v) in a {
                    accumulate(&mut acc, *k, v.clone());
                }
                for (k, v) in b {
                    accumulate(&mut acc, *k, -v);
                }
                collect(acc)
            })
            .collect();
        Ok(LinearMap { cols, ..self.clone() })
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(|c| c.is_empty())
    }

    /// First nonzero entry as `(row, col, value)`.
    pub fn first_nonzero(&self) -> Option<(usize, usize, Scalar)> {
        self.cols
            .iter()
            .enumerate()
            .find_map(|(j, c)| c.first().map(|(i, v)| (*i, j, v.clone())))
    }

    /// `m ⊗ id` (position 12) or `id ⊗ m` (position 23) on `D^{⊗3}`.
    pub fn tensor_lift(&self, position: u8) -> Result<LinearMap, CoalgebraError> {
        if self.power != 2 {
            return Err(CoalgebraError::WrongPower(self.power));
        }
        let n = self.base;
        let mut cols = Vec::with_capacity(n * n * n);
        for j in 0..n * n * n {
            let (j1, j2, j3) = (j / (n * n), (j / n) % n, j % n);
            let col = match position {
                12 => self.cols[j1 * n + j2].iter().map(|(o, v)| (o * n + j3, v.clone())).collect(),
                23 => self.cols[j2 * n + j3].iter().map(|(o, v)| (j1 * n * n + o, v.clone())).collect(),
                _ => panic!("tensor_lift position must be 12 or 23"),
            };
            cols.push(col);
        }
        Ok(LinearMap {
            field: self.field,
            base: n,
            power: 3,
            cols,
        })
    }

    /// Kronecker product of two dense matrices (row-major on indices).
    pub fn kron(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
        let (n, m) = (a.len(), b.len());
        let mut out = Vec::with_capacity(n * m);
        for ra in a {
            for rb in b {
                let mut row = Vec::with_capacity(n * m);
                for x in ra {
                    for y in rb {
                        row.push(x * y);
                    }
                }
                out.push(row);
            }
        }
        out
    }

    pub fn rank(&self) -> usize {
        rank(self.to_dense())
    }

    pub fn is_invertible(&self) -> bool {
        self.rank() == self.dim()
    }

    pub fn inverse(&self) -> Option<LinearMap> {
        inverse(&self.to_dense()).map(|rows| LinearMap::from_dense(self.field, self.base, self.power, &rows))
    }
}

/// Rank by exact Gaussian elimination.
pub fn rank(mut m: Vec<Vec<Scalar>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].inv().unwrap();
        for i in r + 1..rows {
            if m[i][c].is_zero() {
                continue;
            }
            let f = &m[i][c] * &inv;
            for k in c..cols {
                let d = &f * &m[r][k];
                m[i][k] -= &d;
            }
        }
        r += 1;
    }
    r
}

/// Gauss–Jordan inverse of a square matrix.
pub fn inverse(m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    let field = m.first()?.first()?.field();
    let mut a: Vec<Vec<Scalar>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { field.one() } else { field.zero() }));
            r
        })
        .collect();
    for c in 0..n {
        let p = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, p);
        let inv = a[c][c].inv().unwrap();
        for k in 0..2 * n {
            a[c][k] *= &inv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in 0..2 * n {
                    let d = &f * &a[c][k];
                    a[i][k] -= &d;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_and_delta() {
        let b = IntervalBasis::new(Poset::two_chain());
        assert_eq!(b.pairs(), &[(0, 0), (0, 1), (1, 1)]);
        assert_eq!(b.delta(0, 1).unwrap(), vec![((0, 0), (0, 1)), ((0, 1), (1, 1))]);
        assert_eq!(b.delta(0, 0).unwrap(), vec![((0, 0), (0, 0))]);
        let v = IntervalBasis::new(Poset::vee());
        assert!(v.delta(0, 2).is_err());
        assert_eq!(v.group_likes(), vec![(0, 0), (1, 1), (2, 2)]);
        let q = Field::Rational;
        assert!(b.epsilon(0, 0, q).unwrap().is_one());
        assert!(b.epsilon(0, 1, q).unwrap().is_zero());
    }

    #[test]
    fn flip_squares_to_identity() {
        let q = Field::Rational;
        let f = LinearMap::flip(q, 3);
        assert_eq!(f.compose(&f).unwrap(), LinearMap::identity(q, 3, 2));
        let f12 = f.tensor_lift(12).unwrap();
        // u⊗v⊗w = (0,1,2) goes to (1,0,2)
        assert_eq!(f12.column(5), &vec![(9 + 2, q.one())]);
    }

    #[test]
    fn singular_is_not_invertible() {
        let q = Field::Rational;
        let rows = vec![vec![q.one(), q.int(2)], vec![q.int(2), q.int(4)]];
        let m = LinearMap::from_dense(q, 2, 1, &rows);
        assert!(!m.is_invertible());
        assert!(m.inverse().is_none());
    }
}
