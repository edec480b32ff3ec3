//! Exact linear algebra over `A` for basis re-expression.
//!
//! The realized bases in this crate are triangular with monomial pivots in
//! practice, so the solver first tries ordered elimination against distinct
//! pivot coordinates with exact division. When pivots collide it falls back
//! to fraction-free (Bareiss) elimination, which stays exact over the
//! integral domain `A`.

use crate::laurent::LaurentPoly;

/// Expresses targets as `A`-linear combinations of a fixed list of basis
/// vectors given in dense coordinates.
pub struct VecSolver {
    dim: usize,
    basis: Vec<Vec<LaurentPoly>>,
    /// Coordinate scan order; earlier entries are eliminated first.
    priority: Vec<usize>,
    /// `pivot[k]` = basis index whose first nonzero coordinate (in priority
    /// order) is `priority[k]`; `None` when that coordinate is free.
    pivot_of_coord: Option<Vec<Option<usize>>>,
}

impl VecSolver {
    /// Default scan order: last coordinate first (our element lists are
    /// sorted by (length, word), so this scans longest elements first).
    pub fn new(dim: usize, basis: Vec<Vec<LaurentPoly>>) -> Self {
        let priority: Vec<usize> = (0..dim).rev().collect();
        Self::with_priority(dim, basis, priority)
    }

    pub fn with_priority(dim: usize, basis: Vec<Vec<LaurentPoly>>, priority: Vec<usize>) -> Self {
        debug_assert!(basis.iter().all(|v| v.len() == dim));
        let mut pivot_of_coord = vec![None; dim];
        let mut ok = true;
        'outer: for (bi, v) in basis.iter().enumerate() {
            for (slot, &coord) in priority.iter().enumerate() {
                if !v[coord].is_zero() {
                    if pivot_of_coord[slot].is_some() {
                        ok = false; // pivot collision: fall back to Bareiss
                        break 'outer;
                    }
                    pivot_of_coord[slot] = Some(bi);
                    continue 'outer;
                }
            }
            ok = false; // zero basis vector
            break;
        }
        VecSolver {
            dim,
            basis,
            priority,
            pivot_of_coord: if ok { Some(pivot_of_coord) } else { None },
        }
    }

    pub fn basis(&self) -> &[Vec<LaurentPoly>] {
        &self.basis
    }

    pub fn has_distinct_pivots(&self) -> bool {
        self.pivot_of_coord.is_some()
    }

    /// Coefficients `c` with `target = Σ c_i · basis_i`, or `None` if no such
    /// combination exists over `A`.
    pub fn express(&self, target: &[LaurentPoly]) -> Option<Vec<LaurentPoly>> {
        debug_assert_eq!(target.len(), self.dim);
        if let Some(pivots) = &self.pivot_of_coord {
            let mut residual = target.to_vec();
            let mut coeffs = vec![LaurentPoly::zero(); self.basis.len()];
            for (slot, &coord) in self.priority.iter().enumerate() {
                if residual[coord].is_zero() {
                    continue;
                }
                let bi = pivots[slot]?;
                let c = residual[coord].divide_exact(&self.basis[bi][coord])?;
                for (r, b) in residual.iter_mut().zip(&self.basis[bi]) {
                    if !b.is_zero() {
                        *r = &*r - &(&c * b);
                    }
                }
                coeffs[bi] = c;
            }
            debug_assert!(residual.iter().all(|p| p.is_zero()));
            Some(coeffs)
        } else {
            self.express_bareiss(target)
        }
    }

    fn express_bareiss(&self, target: &[LaurentPoly]) -> Option<Vec<LaurentPoly>> {
        let n = self.basis.len();
        // Augmented system: rows = coordinates, columns = basis + target.
        let mut m: Vec<Vec<LaurentPoly>> = (0..self.dim)
            .map(|i| {
                let mut row: Vec<LaurentPoly> =
                    self.basis.iter().map(|b| b[i].clone()).collect();
                row.push(target[i].clone());
                row
            })
            .collect();
        let pivots = echelonize(&mut m);
        // Inconsistent if the target column carries a pivot.
        if pivots.iter().any(|&(_, c)| c == n) {
            return None;
        }
        // A dependent basis cannot express targets uniquely.
        if pivots.len() < n {
            return None;
        }
        let mut coeffs = vec![LaurentPoly::zero(); n];
        for &(row, col) in pivots.iter().rev() {
            let mut rhs = m[row][n].clone();
            for j in col + 1..n {
                if !m[row][j].is_zero() && !coeffs[j].is_zero() {
                    rhs = &rhs - &(&m[row][j] * &coeffs[j]);
                }
            }
            coeffs[col] = rhs.divide_exact(&m[row][col])?;
        }
        // Confirm on the full (possibly overdetermined) system.
        for i in 0..self.dim {
            let mut acc = LaurentPoly::zero();
            for (c, b) in coeffs.iter().zip(&self.basis) {
                if !c.is_zero() && !b[i].is_zero() {
                    acc = &acc + &(c * &b[i]);
                }
            }
            if acc != target[i] {
                return None;
            }
        }
        Some(coeffs)
    }
}

/// Fraction-free row echelon form; returns the (row, col) pivot positions.
/// Divisions in the Bareiss update are exact by the Sylvester identity.
fn echelonize(m: &mut [Vec<LaurentPoly>]) -> Vec<(usize, usize)> {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let mut pivots = Vec::new();
    let mut prev = None::<LaurentPoly>;
    let mut row = 0;
    for col in 0..cols {
        if row >= rows {
            break;
        }
        let Some(pr) = (row..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, pr);
        for r in row + 1..rows {
            let mut new_row = Vec::with_capacity(cols);
            for j in 0..cols {
                if j <= col {
                    new_row.push(LaurentPoly::zero());
                    continue;
                }
                let num = &(&m[row][col] * &m[r][j]) - &(&m[r][col] * &m[row][j]);
                let val = match &prev {
                    None => num,
                    Some(p) => num
                        .divide_exact(p)
                        .expect("Bareiss division is exact over an integral domain"),
                };
                new_row.push(val);
            }
            m[r] = new_row;
        }
        prev = Some(m[row][col].clone());
        pivots.push((row, col));
        row += 1;
    }
    pivots
}

/// Rank of a list of vectors over the fraction field of `A`.
pub fn rank(dim: usize, vectors: &[Vec<LaurentPoly>]) -> usize {
    let mut m: Vec<Vec<LaurentPoly>> = (0..dim)
        .map(|i| vectors.iter().map(|v| v[i].clone()).collect())
        .collect();
    echelonize(&mut m).len()
}

/// Whether `candidate` is independent of `basis` over the fraction field.
pub fn is_independent(dim: usize, basis: &[Vec<LaurentPoly>], candidate: &[LaurentPoly]) -> bool {
    let mut all: Vec<Vec<LaurentPoly>> = basis.to_vec();
    all.push(candidate.to_vec());
    rank(dim, &all) == basis.len() + 1
}
