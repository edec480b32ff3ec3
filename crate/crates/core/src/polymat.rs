//! Dense square matrices over `A` used for the polynomial families
//! (`R`, `P`, `Q`, their tilde and π variants) and for action tables.
//!
//! Entries are indexed by positions in an ideal's element list. Sizes here
//! are desk-scale (|E| ≤ a few dozen), so a dense layout with sparse
//! polynomial entries is the simple, fast representation.

use crate::laurent::LaurentPoly;

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MatrixKind {
    R,
    RTilde,
    P,
    PTilde,
    Q,
    QTilde,
    RPi,
    PPi,
    PTildePi,
    QPi,
    Action,
    Other,
}

impl MatrixKind {
    pub fn label(self) -> &'static str {
        match self {
            MatrixKind::R => "R",
            MatrixKind::RTilde => "Rt",
            MatrixKind::P => "P",
            MatrixKind::PTilde => "Pt",
            MatrixKind::Q => "Q",
            MatrixKind::QTilde => "Qt",
            MatrixKind::RPi => "Rpi",
            MatrixKind::PPi => "Ppi",
            MatrixKind::PTildePi => "Ptpi",
            MatrixKind::QPi => "Qpi",
            MatrixKind::Action => "action",
            MatrixKind::Other => "other",
        }
    }
}

/// A square matrix over `A` with a kind tag. Row/column indices are local
/// indices into the owning ideal's element list.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyMatrix {
    pub kind: MatrixKind,
    n: usize,
    entries: Vec<LaurentPoly>,
}

impl PolyMatrix {
    pub fn zero(kind: MatrixKind, n: usize) -> Self {
        PolyMatrix {
            kind,
            n,
            entries: vec![LaurentPoly::zero(); n * n],
        }
    }

    pub fn identity(kind: MatrixKind, n: usize, rank: usize) -> Self {
        let mut m = Self::zero(kind, n);
        for i in 0..n {
            *m.at_mut(i, i) = LaurentPoly::one(rank);
        }
        m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn at(&self, row: usize, col: usize) -> &LaurentPoly {
        &self.entries[row * self.n + col]
    }

    pub fn at_mut(&mut self, row: usize, col: usize) -> &mut LaurentPoly {
        &mut self.entries[row * self.n + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: LaurentPoly) {
        self.entries[row * self.n + col] = value;
    }

    /// Entrywise bar.
    pub fn bar(&self) -> PolyMatrix {
        PolyMatrix {
            kind: self.kind,
            n: self.n,
            entries: self.entries.iter().map(|p| p.bar()).collect(),
        }
    }

    pub fn transpose(&self) -> PolyMatrix {
        let mut out = PolyMatrix::zero(self.kind, self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                out.set(j, i, self.at(i, j).clone());
            }
        }
        out
    }

    /// Conjugate by the sign diagonal `S = diag(ε)`: entry (i,j) scaled by
    /// `ε_i ε_j`.
    pub fn sign_conjugate(&self, eps: &[i64]) -> PolyMatrix {
        let mut out = self.clone();
        for i in 0..self.n {
            for j in 0..self.n {
                if eps[i] * eps[j] < 0 {
                    let v = -out.at(i, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn mul(&self, other: &PolyMatrix) -> PolyMatrix {
        assert_eq!(self.n, other.n);
        let mut out = PolyMatrix::zero(self.kind, self.n);
        for i in 0..self.n {
            for k in 0..self.n {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..self.n {
                    let b = other.at(k, j);
                    if b.is_zero() {
                        continue;
                    }
                    let acc = &*out.at(i, j) + &(a * b);
                    out.set(i, j, acc);
                }
            }
        }
        out
    }

    /// Matrix-vector product (vector as column of coordinates).
    pub fn mul_vec(&self, v: &[LaurentPoly]) -> Vec<LaurentPoly> {
        assert_eq!(self.n, v.len());
        let mut out = vec![LaurentPoly::zero(); self.n];
        for (j, vj) in v.iter().enumerate() {
            if vj.is_zero() {
                continue;
            }
            for (i, slot) in out.iter_mut().enumerate() {
                let a = self.at(i, j);
                if !a.is_zero() {
                    *slot = &*slot + &(a * vj);
                }
            }
        }
        out
    }

    pub fn is_identity(&self, rank: usize) -> bool {
        let one = LaurentPoly::one(rank);
        for i in 0..self.n {
            for j in 0..self.n {
                let e = self.at(i, j);
                if i == j {
                    if *e != one {
                        return false;
                    }
                } else if !e.is_zero() {
                    return false;
                }
            }
        }
        true
    }

    /// First (row, col) where the two matrices differ.
    pub fn first_difference<'a>(
        &'a self,
        other: &'a PolyMatrix,
    ) -> Option<(usize, usize, &'a LaurentPoly, &'a LaurentPoly)> {
        for i in 0..self.n {
            for j in 0..self.n {
                if self.at(i, j) != other.at(i, j) {
                    return Some((i, j, self.at(i, j), other.at(i, j)));
                }
            }
        }
        None
    }

    pub fn with_kind(mut self, kind: MatrixKind) -> Self {
        self.kind = kind;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::{Coeff, GammaExp};

    fn q(n: i64) -> LaurentPoly {
        LaurentPoly::q_power(GammaExp::int(n))
    }

    #[test]
    fn mul_and_identity() {
        let mut a = PolyMatrix::identity(MatrixKind::Other, 2, 1);
        a.set(0, 1, q(3));
        let mut b = PolyMatrix::identity(MatrixKind::Other, 2, 1);
        b.set(0, 1, -&q(3));
        assert!(a.mul(&b).is_identity(1));
    }

    #[test]
    fn sign_conjugation_is_involutive() {
        let mut a = PolyMatrix::zero(MatrixKind::Other, 3, );
        a.set(0, 2, q(1));
        a.set(1, 1, LaurentPoly::monomial(GammaExp::int(0), Coeff::from(5)));
        let eps = [1i64, -1, 1];
        assert_eq!(a.sign_conjugate(&eps).sign_conjugate(&eps), a);
    }
}
