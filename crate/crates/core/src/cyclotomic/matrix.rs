//! Dense matrices over `Q(ζ_n)` with exact determinants and kernels.

use alloc::vec::Vec;

use super::exact_div::ExactDivisor;
use super::{CycError, CycNum};

/// How a Bareiss step divides by the previous pivot.
enum Divisor {
    One,
    /// Integral input: quotients stay in `Z[ζ_n]` and are recovered modularly.
    Integral(ExactDivisor),
    /// Rational input: multiply by the inverse in `Q(ζ_n)`.
    Rational(CycNum),
}

/// Row-major matrix whose entries all share one cyclotomic order.
#[derive(Debug, Clone, PartialEq)]
pub struct CycMatrix {
    rows: usize,
    cols: usize,
    order: u32,
    entries: Vec<CycNum>,
    row_labels: Option<Vec<u64>>,
    col_labels: Option<Vec<u64>>,
}

/// Largest size handled by cofactor expansion before switching to Bareiss elimination.
const COFACTOR_LIMIT: usize = 4;

impl CycMatrix {
    /// Builds a matrix, lifting every entry to the least common order.
    pub fn new(rows: usize, cols: usize, entries: Vec<CycNum>) -> Result<Self, CycError> {
        if entries.len() != rows * cols {
            return Err(CycError::DimensionMismatch("entry count differs from rows * cols"));
        }
        let mut order = 1u64;
        for e in &entries {
            order = crate::ntheory::lcm(order, u64::from(e.order()));
        }
        let cap = super::max_order();
        let uniform = entries.iter().all(|e| u64::from(e.order()) == order);
        if !uniform && order > u64::from(cap) {
            return Err(CycError::OrderOverflow { order, cap });
        }
        let order = order as u32;
        let entries = entries
            .into_iter()
            .map(|e| e.embed(order))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(CycMatrix {
            rows,
            cols,
            order,
            entries,
            row_labels: None,
            col_labels: None,
        })
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> CycNum,
    ) -> Result<Self, CycError> {
        let mut entries = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                entries.push(f(i, j));
            }
        }
        Self::new(rows, cols, entries)
    }

    pub fn identity(size: usize, order: u32) -> Self {
        Self::from_fn(size, size, |i, j| CycNum::from_i64(order, i64::from(i == j)))
            .expect("uniform order")
    }

    pub fn with_labels(mut self, rows: Vec<u64>, cols: Vec<u64>) -> Result<Self, CycError> {
        if rows.len() != self.rows || cols.len() != self.cols {
            return Err(CycError::DimensionMismatch("label count differs from matrix shape"));
        }
        self.row_labels = Some(rows);
        self.col_labels = Some(cols);
        Ok(self)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row_labels(&self) -> Option<&[u64]> {
        self.row_labels.as_deref()
    }

    pub fn col_labels(&self) -> Option<&[u64]> {
        self.col_labels.as_deref()
    }

    pub fn get(&self, i: usize, j: usize) -> &CycNum {
        &self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[CycNum] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[CycNum] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    /// The submatrix on the given rows and columns, in the given order. Labels are dropped.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> CycMatrix {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                entries.push(self.get(i, j).clone());
            }
        }
        CycMatrix {
            rows: rows.len(),
            cols: cols.len(),
            order: self.order,
            entries,
            row_labels: None,
            col_labels: None,
        }
    }

    pub fn transpose(&self) -> CycMatrix {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j).clone());
            }
        }
        CycMatrix {
            rows: self.cols,
            cols: self.rows,
            order: self.order,
            entries,
            row_labels: self.col_labels.clone(),
            col_labels: self.row_labels.clone(),
        }
    }

    pub fn is_symmetric(&self) -> bool {
        self.is_square()
            && (0..self.rows).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn mul_vector(&self, v: &[CycNum]) -> Result<Vec<CycNum>, CycError> {
        if v.len() != self.cols {
            return Err(CycError::DimensionMismatch("vector length differs from column count"));
        }
        (0..self.rows)
            .map(|i| {
                let mut acc = CycNum::zero(self.order);
                for (a, x) in self.row(i).iter().zip(v) {
                    acc = acc.checked_add(&a.checked_mul(x)?)?;
                }
                Ok(acc)
            })
            .collect()
    }

    /// Multiplies row `i` by `c`.
    pub fn scale_row(&mut self, i: usize, c: &CycNum) -> Result<(), CycError> {
        for j in 0..self.cols {
            let k = i * self.cols + j;
            self.entries[k] = self.entries[k].checked_mul(c)?.embed(self.order)?;
        }
        Ok(())
    }

    /// Multiplies column `j` by `c`.
    pub fn scale_col(&mut self, j: usize, c: &CycNum) -> Result<(), CycError> {
        for i in 0..self.rows {
            let k = i * self.cols + j;
            self.entries[k] = self.entries[k].checked_mul(c)?.embed(self.order)?;
        }
        Ok(())
    }

    fn require_square(&self) -> Result<(), CycError> {
        if self.is_square() {
            Ok(())
        } else {
            Err(CycError::NotSquare {
                rows: self.rows,
                cols: self.cols,
            })
        }
    }

    /// Exact determinant; the empty matrix has determinant 1.
    pub fn determinant(&self) -> Result<CycNum, CycError> {
        self.require_square()?;
        if self.rows <= COFACTOR_LIMIT {
            Ok(self.det_cofactor())
        } else {
            Ok(self.det_bareiss())
        }
    }

    /// Laplace expansion along the first row.
    pub fn det_cofactor(&self) -> CycNum {
        debug_assert!(self.is_square());
        match self.rows {
            0 => CycNum::one(self.order),
            1 => self.entries[0].clone(),
            2 => self.get(0, 0) * self.get(1, 1) - self.get(0, 1) * self.get(1, 0),
            n => {
                let rest: Vec<usize> = (1..n).collect();
                let mut acc = CycNum::zero(self.order);
                for j in 0..n {
                    let a = self.get(0, j);
                    if a.is_zero() {
                        continue;
                    }
                    let cols: Vec<usize> = (0..n).filter(|&c| c != j).collect();
                    let term = a * self.submatrix(&rest, &cols).det_cofactor();
                    acc = if j % 2 == 0 { acc + term } else { acc - term };
                }
                acc
            }
        }
    }

    /// Fraction-free Bareiss elimination. Each division is exact; when the input is integral
    /// every quotient must be integral too, and failing to find an integral quotient panics.
    pub fn det_bareiss(&self) -> CycNum {
        debug_assert!(self.is_square());
        let n = self.rows;
        if n == 0 {
            return CycNum::one(self.order);
        }
        let integral = self.entries.iter().all(CycNum::is_integral);
        let mut a: Vec<Vec<CycNum>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut negate = false;
        let mut prev = CycNum::one(self.order);
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                    Some(r) => {
                        a.swap(k, r);
                        negate = !negate;
                    }
                    None => return CycNum::zero(self.order),
                }
            }
            let mut divisor = if prev == CycNum::one(self.order) {
                Divisor::One
            } else if integral {
                Divisor::Integral(ExactDivisor::new(&prev).expect("Bareiss pivot is nonzero"))
            } else {
                Divisor::Rational(prev.inverse().expect("Bareiss pivot is nonzero"))
            };
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                    a[i][j] = match &mut divisor {
                        Divisor::One => num,
                        Divisor::Integral(d) => d
                            .divide(&num)
                            .expect("Bareiss quotient left Z[zeta]; exact division failed"),
                        Divisor::Rational(inv) => &num * &*inv,
                    };
                }
                a[i][k] = CycNum::zero(self.order);
            }
            prev = a[k][k].clone();
        }
        let det = a[n - 1][n - 1].clone();
        if negate {
            -det
        } else {
            det
        }
    }

    /// A nonzero `v` with `Mv = 0`, normalised so its first nonzero entry is 1; `None` when
    /// the matrix is nonsingular.
    pub fn kernel_vector(&self) -> Result<Option<Vec<CycNum>>, CycError> {
        self.require_square()?;
        let n = self.rows;
        let mut a: Vec<Vec<CycNum>> = (0..n).map(|i| self.row(i).to_vec()).collect();
        let mut pivots: Vec<(usize, usize)> = Vec::new();
        let mut row = 0;
        let mut free = None;
        for col in 0..n {
            let Some(p) = (row..n).find(|&r| !a[r][col].is_zero()) else {
                free.get_or_insert(col);
                continue;
            };
            a.swap(row, p);
            let inv = a[row][col].inverse()?;
            for x in &mut a[row][col..] {
                *x = &*x * &inv;
            }
            let pivot = a[row].clone();
            for (r, cur) in a.iter_mut().enumerate() {
                if r == row || cur[col].is_zero() {
                    continue;
                }
                let factor = cur[col].clone();
                for (x, y) in cur[col..].iter_mut().zip(&pivot[col..]) {
                    *x = &*x - &(&factor * y);
                }
            }
            pivots.push((row, col));
            row += 1;
        }
        let Some(free) = free else {
            return Ok(None);
        };
        let mut v: Vec<CycNum> = (0..n).map(|_| CycNum::zero(self.order)).collect();
        v[free] = CycNum::one(self.order);
        for &(r, c) in &pivots {
            if c < free {
                v[c] = -&a[r][free];
            }
        }
        if let Some(first) = v.iter().find(|x| !x.is_zero()).cloned() {
            let inv = first.inverse()?;
            for x in v.iter_mut() {
                *x = &*x * &inv;
            }
        }
        Ok(Some(v))
    }
}

pub fn det_exact(m: &CycMatrix) -> Result<CycNum, CycError> {
    m.determinant()
}

pub fn kernel_vector(m: &CycMatrix) -> Result<Option<Vec<CycNum>>, CycError> {
    m.kernel_vector()
}
