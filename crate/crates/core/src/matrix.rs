//! Exact dense matrices over a [`FieldCtx`]: rank, reduced row echelon form,
//! kernel bases. Gaussian elimination with exact division; no floating point.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::field::{FieldCtx, FieldElem};

/// A rows x cols matrix with entries in one shared field context.
/// Row-major storage. 0 x n and n x 0 matrices are allowed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExactMatrix {
    ctx: FieldCtx,
    rows: usize,
    cols: usize,
    entries: Vec<FieldElem>,
}

impl ExactMatrix {
    pub fn zero(ctx: &FieldCtx, rows: usize, cols: usize) -> Self {
        ExactMatrix {
            ctx: ctx.clone(),
            rows,
            cols,
            entries: vec![ctx.zero(); rows * cols],
        }
    }

    /// Build from row-major entries; every entry must share `ctx`.
    pub fn from_entries(
        ctx: &FieldCtx,
        rows: usize,
        cols: usize,
        entries: Vec<FieldElem>,
    ) -> Result<Self> {
        assert_eq!(entries.len(), rows * cols, "dimension mismatch");
        if entries.iter().any(|e| e.ctx() != ctx) {
            return Err(Error::MixedContexts);
        }
        Ok(ExactMatrix {
            ctx: ctx.clone(),
            rows,
            cols,
            entries,
        })
    }

    pub fn identity(ctx: &FieldCtx, n: usize) -> Self {
        let mut m = Self::zero(ctx, n, n);
        for i in 0..n {
            *m.at_mut(i, i) = ctx.one();
        }
        m
    }

    pub fn ctx(&self) -> &FieldCtx {
        &self.ctx
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn at(&self, r: usize, c: usize) -> &FieldElem {
        &self.entries[r * self.cols + c]
    }

    pub fn at_mut(&mut self, r: usize, c: usize) -> &mut FieldElem {
        &mut self.entries[r * self.cols + c]
    }

    pub fn transpose(&self) -> ExactMatrix {
        let mut t = Self::zero(&self.ctx, self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                *t.at_mut(c, r) = self.at(r, c).clone();
            }
        }
        t
    }

    /// Rank over the field (fraction field for rationals).
    pub fn rank(&self) -> usize {
        self.clone().rref().0
    }

    /// In-place reduction to reduced row echelon form.
    /// Returns (rank, pivot column indices).
    pub fn rref(&mut self) -> (usize, Vec<usize>) {
        let mut pivots = Vec::new();
        let mut pr = 0usize;
        for c in 0..self.cols {
            if pr == self.rows {
                break;
            }
            let Some(sel) = (pr..self.rows).find(|&r| !self.at(r, c).is_zero()) else {
                continue;
            };
            self.swap_rows(pr, sel);
            if self.ctx.is_rationals() {
                self.make_row_primitive(pr);
            }
            let inv = self.at(pr, c).inv();
            for j in c..self.cols {
                let v = self.at(pr, j).mul(&inv);
                *self.at_mut(pr, j) = v;
            }
            for r in 0..self.rows {
                if r == pr || self.at(r, c).is_zero() {
                    continue;
                }
                let factor = self.at(r, c).clone();
                for j in c..self.cols {
                    let v = self.at(r, j).sub(&factor.mul(self.at(pr, j)));
                    *self.at_mut(r, j) = v;
                }
            }
            pivots.push(c);
            pr += 1;
        }
        (pivots.len(), pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.entries.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    /// Scale a rational row to a primitive integer vector (gcd of numerators 1,
    /// lcm of denominators cleared) to bound entry growth during elimination.
    fn make_row_primitive(&mut self, r: usize) {
        let mut lcm = BigInt::one();
        let mut gcd = BigInt::zero();
        for c in 0..self.cols {
            let q = self.at(r, c).as_rational().unwrap();
            if !q.is_zero() {
                lcm = lcm.lcm(q.denom());
                gcd = gcd.gcd(q.numer());
            }
        }
        if gcd.is_zero() || (gcd.is_one() && lcm.is_one()) {
            return;
        }
        let scale = num_rational::BigRational::new(lcm, gcd.abs());
        for c in 0..self.cols {
            let v = self.at(r, c).as_rational().unwrap() * &scale;
            *self.at_mut(r, c) = self.ctx.from_big_rational(v);
        }
    }

    /// Basis of the right kernel {v : Mv = 0} as rows of length `cols`.
    /// Deterministic: derived from the RREF with free variables in column order.
    pub fn kernel_basis(&self) -> Vec<Vec<FieldElem>> {
        let mut m = self.clone();
        let (_, pivots) = m.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.cols];
            for (i, &c) in pivots.iter().enumerate() {
                v[c] = Some(i);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.cols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut vec = vec![self.ctx.zero(); self.cols];
            vec[free] = self.ctx.one();
            for (c, slot) in pivot_set.iter().enumerate() {
                if let Some(row) = slot {
                    vec[c] = m.at(*row, free).neg();
                }
            }
            basis.push(vec);
        }
        basis
    }
}

impl std::fmt::Display for ExactMatrix {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for r in 0..self.rows {
            write!(f, "[")?;
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(r, c))?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}
