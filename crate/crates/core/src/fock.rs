//! Truncated bosonic and two-level operators as dense real matrices.
//!
//! The product basis is fixed once for the whole crate: a state `|m, s⟩` with
//! photon number `m` and atomic level `s` (0 = `|g⟩`, 1 = `|e⟩`) sits at index
//! `2·m + s`. The atom index varies fastest, so the atomic partial trace is a
//! stride-2 contraction and the total space is `field ⊗ atom` in [`kron`]
//! order.
//!
//! Every construction here is exact: entries are either integers, `√m`, or
//! products of a single such factor with zero/one, so symmetric operators are
//! bitwise symmetric.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use crate::error::{Error, Result};

/// Largest operator dimension [`kron`] will produce.
pub const MAX_DIM: usize = 8192;

/// Atomic basis label in the ordered basis `(|g⟩, |e⟩)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Atom {
    Ground = 0,
    Excited = 1,
}

impl Atom {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn flipped(self) -> Atom {
        match self {
            Atom::Ground => Atom::Excited,
            Atom::Excited => Atom::Ground,
        }
    }
}

/// Atom ⊗ field space truncated at photon number `n_trunc`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TruncatedSpace {
    n_trunc: usize,
}

impl TruncatedSpace {
    pub fn new(n_trunc: usize) -> Result<Self> {
        if n_trunc < 1 {
            return Err(Error::InvalidTruncation(n_trunc));
        }
        Ok(TruncatedSpace { n_trunc })
    }

    /// Largest photon number kept.
    pub fn n_trunc(&self) -> usize {
        self.n_trunc
    }

    pub fn field_dim(&self) -> usize {
        self.n_trunc + 1
    }

    pub fn total_dim(&self) -> usize {
        2 * (self.n_trunc + 1)
    }

    /// Index of `|m, s⟩` in the product basis.
    pub fn index(&self, photons: usize, atom: Atom) -> usize {
        debug_assert!(photons <= self.n_trunc);
        2 * photons + atom.index()
    }

    /// Inverse of [`TruncatedSpace::index`].
    pub fn label(&self, index: usize) -> (usize, Atom) {
        let atom = if index % 2 == 0 {
            Atom::Ground
        } else {
            Atom::Excited
        };
        (index / 2, atom)
    }
}

/// Dense square real matrix, row-major.
#[derive(Clone, PartialEq)]
pub struct OperatorMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl OperatorMatrix {
    pub fn zeros(dim: usize) -> Self {
        OperatorMatrix {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(&vec![1.0; dim])
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from row slices; every row must have `rows.len()` entries.
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::ShapeMismatch {
                    expected: dim,
                    actual: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(OperatorMatrix { dim, data })
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        OperatorMatrix { dim, data }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self[(i, i)]).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn scale(&self, factor: f64) -> Self {
        OperatorMatrix {
            dim: self.dim,
            data: self.data.iter().map(|x| factor * x).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                let row = &other.data[k * n..(k + 1) * n];
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `[A, B] = AB − BA`.
    pub fn commutator(&self, other: &Self) -> Result<Self> {
        Ok(&self.matmul(other)? - &other.matmul(self)?)
    }

    pub fn apply(&self, v: &[f64]) -> Result<Vec<f64>> {
        if v.len() != self.dim {
            return Err(Error::ShapeMismatch {
                expected: self.dim,
                actual: v.len(),
            });
        }
        Ok((0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `max |A − Aᵀ|`; zero for every Hermitian construction in this crate.
    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0_f64;
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                worst = worst.max((self[(i, j)] - self[(j, i)]).abs());
            }
        }
        worst
    }

    pub fn is_symmetric(&self) -> bool {
        self.max_asymmetry() == 0.0
    }

    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        self.check_dim(other)?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs())))
    }

    /// Leading `dim × dim` block.
    pub fn truncated(&self, dim: usize) -> Self {
        assert!(dim <= self.dim);
        Self::from_fn(dim, |i, j| self[(i, j)])
    }

    /// 64-bit FNV-1a hash over the entry bit patterns.
    pub fn fingerprint(&self) -> u64 {
        let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
        for x in &self.data {
            for byte in x.to_bits().to_le_bytes() {
                hash ^= byte as u64;
                hash = hash.wrapping_mul(0x0100_0000_01b3);
            }
        }
        hash
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::ShapeMismatch {
                expected: self.dim,
                actual: other.dim,
            });
        }
        Ok(())
    }
}

impl Index<(usize, usize)> for OperatorMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for OperatorMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn add(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix sum");
        OperatorMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &OperatorMatrix {
    type Output = OperatorMatrix;

    fn sub(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch in matrix difference");
        OperatorMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul<&OperatorMatrix> for f64 {
    type Output = OperatorMatrix;

    fn mul(self, rhs: &OperatorMatrix) -> OperatorMatrix {
        rhs.scale(self)
    }
}

impl fmt::Debug for OperatorMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "OperatorMatrix({}×{}) [", self.dim, self.dim)?;
        let shown = self.dim.min(8);
        for i in 0..shown {
            write!(f, "  ")?;
            for j in 0..shown {
                write!(f, "{:>10.4} ", self[(i, j)])?;
            }
            writeln!(f, "{}", if self.dim > shown { "…" } else { "" })?;
        }
        write!(f, "]")
    }
}

/// Bosonic annihilation operator on `n_trunc + 1` Fock states:
/// `a[m−1, m] = √m`.
pub fn annihilation(n_trunc: usize) -> Result<OperatorMatrix> {
    if n_trunc < 1 {
        return Err(Error::InvalidTruncation(n_trunc));
    }
    let mut a = OperatorMatrix::zeros(n_trunc + 1);
    for m in 1..=n_trunc {
        a[(m - 1, m)] = (m as f64).sqrt();
    }
    Ok(a)
}

pub fn creation(n_trunc: usize) -> Result<OperatorMatrix> {
    Ok(annihilation(n_trunc)?.transpose())
}

/// `a†a` written directly as `diag(0, 1, …, n_trunc)`; the product of the
/// truncated ladder matrices only reproduces it up to rounding.
pub fn number(n_trunc: usize) -> Result<OperatorMatrix> {
    if n_trunc < 1 {
        return Err(Error::InvalidTruncation(n_trunc));
    }
    let diag: Vec<f64> = (0..=n_trunc).map(|m| m as f64).collect();
    Ok(OperatorMatrix::from_diagonal(&diag))
}

/// `a + a†`, the (unnormalized) field quadrature.
pub fn quadrature(n_trunc: usize) -> Result<OperatorMatrix> {
    let a = annihilation(n_trunc)?;
    Ok(&a + &a.transpose())
}

/// Real two-level operators. `σ_y` is deliberately absent: all arithmetic is
/// kept real.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Z,
    /// `σ₊ = |e⟩⟨g|`
    Plus,
    /// `σ₋ = |g⟩⟨e|`
    Minus,
}

pub fn pauli(which: Pauli) -> OperatorMatrix {
    let rows = match which {
        Pauli::X => [[0.0, 1.0], [1.0, 0.0]],
        Pauli::Z => [[-1.0, 0.0], [0.0, 1.0]],
        Pauli::Plus => [[0.0, 0.0], [1.0, 0.0]],
        Pauli::Minus => [[0.0, 1.0], [0.0, 0.0]],
    };
    OperatorMatrix::from_fn(2, |i, j| rows[i][j])
}

/// Kronecker product `A ⊗ B`; with `A` on the field and `B` on the atom this
/// matches the basis ordering of [`TruncatedSpace`].
pub fn kron(a: &OperatorMatrix, b: &OperatorMatrix) -> Result<OperatorMatrix> {
    kron_with_limit(a, b, MAX_DIM)
}

pub fn kron_with_limit(
    a: &OperatorMatrix,
    b: &OperatorMatrix,
    max_dim: usize,
) -> Result<OperatorMatrix> {
    let dim = a
        .dim()
        .checked_mul(b.dim())
        .ok_or(Error::DimensionTooLarge {
            dim: usize::MAX,
            max: max_dim,
        })?;
    if dim > max_dim {
        return Err(Error::DimensionTooLarge { dim, max: max_dim });
    }
    let (na, nb) = (a.dim(), b.dim());
    let mut out = OperatorMatrix::zeros(dim);
    for i in 0..na {
        for j in 0..na {
            let x = a[(i, j)];
            if x == 0.0 {
                continue;
            }
            for k in 0..nb {
                for l in 0..nb {
                    out[(i * nb + k, j * nb + l)] = x * b[(k, l)];
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(dim: usize, i: usize) -> Vec<f64> {
        let mut v = vec![0.0; dim];
        v[i] = 1.0;
        v
    }

    #[test]
    fn annihilation_small() {
        let a = annihilation(2).unwrap();
        let s2 = 2f64.sqrt();
        let expected =
            OperatorMatrix::from_rows(&[vec![0.0, 1.0, 0.0], vec![0.0, 0.0, s2], vec![0.0; 3]])
                .unwrap();
        assert_eq!(a, expected);
    }

    #[test]
    fn rejects_zero_truncation() {
        assert!(matches!(annihilation(0), Err(Error::InvalidTruncation(0))));
        assert!(TruncatedSpace::new(0).is_err());
    }

    #[test]
    fn number_operator_from_ladder() {
        let n_trunc = 6;
        let a = annihilation(n_trunc).unwrap();
        let n = a.transpose().matmul(&a).unwrap();
        for m in 0..=n_trunc {
            let out = n.apply(&basis(n_trunc + 1, m)).unwrap();
            for (k, x) in out.iter().enumerate() {
                let want = if k == m { m as f64 } else { 0.0 };
                assert!((x - want).abs() < 1e-12, "m={m}, k={k}: {x}");
            }
        }
        assert_eq!(
            number(n_trunc).unwrap().diagonal(),
            (0..=n_trunc).map(|m| m as f64).collect::<Vec<_>>()
        );
    }

    #[test]
    fn ladder_commutator_truncation_artifact() {
        // Direct arithmetic at n_trunc = 3: [a, a†] = diag(1, 1, 1, -3).
        let a = annihilation(3).unwrap();
        let c = a.commutator(&a.transpose()).unwrap();
        let want = [1.0, 1.0, 1.0, -3.0];
        for i in 0..4 {
            for j in 0..4 {
                let w = if i == j { want[i] } else { 0.0 };
                assert!((c[(i, j)] - w).abs() < 1e-12, "({i},{j}) = {}", c[(i, j)]);
            }
        }
    }

    #[test]
    fn pauli_identities() {
        let sp = pauli(Pauli::Plus);
        let sm = pauli(Pauli::Minus);
        assert_eq!(sp.apply(&[1.0, 0.0]).unwrap(), vec![0.0, 1.0]);
        assert_eq!(sp.apply(&[0.0, 1.0]).unwrap(), vec![0.0, 0.0]);
        assert_eq!(sm, sp.transpose());
        assert_eq!(
            sp.matmul(&sm).unwrap(),
            OperatorMatrix::from_diagonal(&[0.0, 1.0])
        );
        let sx = pauli(Pauli::X);
        assert_eq!(sx.matmul(&sx).unwrap(), OperatorMatrix::identity(2));
        assert_eq!(&sp + &sm, sx);
        assert_eq!(pauli(Pauli::Z).diagonal(), vec![-1.0, 1.0]);
    }

    #[test]
    fn kron_identities() {
        let i2 = OperatorMatrix::identity(2);
        assert_eq!(kron(&i2, &i2).unwrap(), OperatorMatrix::identity(4));
        let p = OperatorMatrix::from_diagonal(&[0.0, 1.0]);
        assert_eq!(kron(&p, &i2).unwrap().diagonal(), vec![0.0, 0.0, 1.0, 1.0]);
    }

    #[test]
    fn kron_ladder_with_sigma_x() {
        // a(n_trunc=1) = [[0,1],[0,0]]; ⊗ σx puts σx in the upper-right block.
        let k = kron(&annihilation(1).unwrap(), &pauli(Pauli::X)).unwrap();
        let expected = OperatorMatrix::from_rows(&[
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0],
            vec![0.0, 0.0, 0.0, 0.0],
        ])
        .unwrap();
        assert_eq!(k, expected);
        // |m=1, g⟩ (index 2) maps to |m=0, e⟩ (index 1).
        let space = TruncatedSpace::new(1).unwrap();
        let out = k.apply(&basis(4, space.index(1, Atom::Ground))).unwrap();
        assert_eq!(out, basis(4, space.index(0, Atom::Excited)));
    }

    #[test]
    fn kron_dimension_guard() {
        let big = OperatorMatrix::identity(100);
        assert!(matches!(
            kron_with_limit(&big, &big, 5000),
            Err(Error::DimensionTooLarge {
                dim: 10000,
                max: 5000
            })
        ));
    }

    #[test]
    fn basis_labels_roundtrip() {
        let space = TruncatedSpace::new(5).unwrap();
        assert_eq!(space.total_dim(), 12);
        for i in 0..space.total_dim() {
            let (m, s) = space.label(i);
            assert_eq!(space.index(m, s), i);
        }
    }

    #[test]
    fn ladder_constructions_are_bitwise_symmetric() {
        let x = quadrature(40).unwrap();
        assert!(x.is_symmetric());
        let h = kron(&x, &pauli(Pauli::X)).unwrap();
        assert_eq!(h.max_asymmetry(), 0.0);
    }

    mod props {
        use super::super::*;
        use proptest::prelude::*;

        fn int_matrix(dim: usize) -> impl Strategy<Value = OperatorMatrix> {
            prop::collection::vec(-5i32..=5, dim * dim)
                .prop_map(move |v| OperatorMatrix::from_fn(dim, |i, j| v[i * dim + j] as f64))
        }

        proptest! {
            #[test]
            fn kron_is_associative_on_integers(
                a in int_matrix(2), b in int_matrix(3), c in int_matrix(2)
            ) {
                let left = kron(&kron(&a, &b).unwrap(), &c).unwrap();
                let right = kron(&a, &kron(&b, &c).unwrap()).unwrap();
                prop_assert_eq!(left, right);
            }

            #[test]
            fn number_spectrum_is_exact(n_trunc in 1usize..60) {
                let d = number(n_trunc).unwrap().diagonal();
                prop_assert_eq!(d, (0..=n_trunc).map(|m| m as f64).collect::<Vec<_>>());
            }
        }
    }
}
