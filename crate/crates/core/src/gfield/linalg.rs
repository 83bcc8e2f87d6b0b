//! Dense linear algebra over the prime field F_p.
//!
//! Everything the crate needs from F_p-linearity (subfield bases, additive
//! polynomial solvers, the translation-correction solver in `autgrp`) goes
//! through [`FpSystem`], which row-reduces once and then answers many
//! right-hand sides.

/// Multiplicative inverse modulo a prime `p`.
pub fn inv_mod(a: u32, p: u32) -> u32 {
    debug_assert!(!a.is_multiple_of(p));
    let mut result = 1u64;
    let mut base = (a % p) as u64;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p as u64;
        }
        base = base * base % p as u64;
        e >>= 1;
    }
    result as u32
}

/// A row-major matrix with entries in `[0, p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FpMatrix {
    p: u32,
    rows: usize,
    cols: usize,
    data: Vec<u32>,
}

impl FpMatrix {
    pub fn zeros(p: u32, rows: usize, cols: usize) -> Self {
        Self { p, rows, cols, data: vec![0; rows * cols] }
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(p: u32, rows: usize, columns: &[Vec<u32>]) -> Self {
        let mut m = Self::zeros(p, rows, columns.len());
        for (j, col) in columns.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length mismatch");
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v % p);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul_vec(&self, v: &[u32]) -> Vec<u32> {
        assert_eq!(v.len(), self.cols);
        let p = self.p as u64;
        (0..self.rows)
            .map(|i| {
                let row = &self.data[i * self.cols..(i + 1) * self.cols];
                (row.iter().zip(v).map(|(&a, &b)| a as u64 * b as u64).sum::<u64>() % p) as u32
            })
            .collect()
    }
}

/// A linear system `M t = rhs` over F_p, reduced once.
///
/// Keeps the reduced row echelon form `R` of `M` together with the
/// invertible transform `E` with `E M = R`, so each new right-hand side costs
/// one matrix-vector product.
#[derive(Clone, Debug)]
pub struct FpSystem {
    p: u32,
    rows: usize,
    cols: usize,
    rref: FpMatrix,
    transform: FpMatrix,
    pivots: Vec<usize>,
}

impl FpSystem {
    pub fn new(m: &FpMatrix) -> Self {
        let p = m.p;
        let (rows, cols) = (m.rows, m.cols);
        let mut r = m.clone();
        let mut e = FpMatrix::zeros(p, rows, rows);
        for i in 0..rows {
            e.set(i, i, 1);
        }
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..cols {
            if row == rows {
                break;
            }
            let Some(piv) = (row..rows).find(|&i| r.get(i, col) != 0) else {
                continue;
            };
            swap_rows(&mut r, row, piv);
            swap_rows(&mut e, row, piv);
            let inv = inv_mod(r.get(row, col), p);
            scale_row(&mut r, row, inv);
            scale_row(&mut e, row, inv);
            for i in 0..rows {
                if i != row {
                    let f = r.get(i, col);
                    if f != 0 {
                        let neg = p - f;
                        add_row_multiple(&mut r, i, row, neg);
                        add_row_multiple(&mut e, i, row, neg);
                    }
                }
            }
            pivots.push(col);
            row += 1;
        }
        Self { p, rows, cols, rref: r, transform: e, pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// One solution of `M t = rhs`, with all free variables set to zero.
    pub fn solve(&self, rhs: &[u32]) -> Option<Vec<u32>> {
        assert_eq!(rhs.len(), self.rows);
        let y = self.transform.mul_vec(rhs);
        if y[self.rank()..].iter().any(|&v| v != 0) {
            return None;
        }
        let mut t = vec![0u32; self.cols];
        for (r, &c) in self.pivots.iter().enumerate() {
            t[c] = y[r];
        }
        Some(t)
    }

    /// `true` iff `rhs` lies in the column space.
    pub fn is_consistent(&self, rhs: &[u32]) -> bool {
        let p = self.p as u64;
        let rank = self.rank();
        (rank..self.rows).all(|i| {
            let row = &self.transform.data[i * self.rows..(i + 1) * self.rows];
            row.iter().zip(rhs).map(|(&a, &b)| a as u64 * b as u64).sum::<u64>() % p == 0
        })
    }

    /// A basis of the null space.
    pub fn kernel_basis(&self) -> Vec<Vec<u32>> {
        let p = self.p;
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.cols];
            for &c in &self.pivots {
                v[c] = true;
            }
            v
        };
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut t = vec![0u32; self.cols];
                t[free] = 1;
                for (r, &c) in self.pivots.iter().enumerate() {
                    let v = self.rref.get(r, free);
                    t[c] = (p - v) % p;
                }
                t
            })
            .collect()
    }
}

fn swap_rows(m: &mut FpMatrix, a: usize, b: usize) {
    if a != b {
        for j in 0..m.cols {
            m.data.swap(a * m.cols + j, b * m.cols + j);
        }
    }
}

fn scale_row(m: &mut FpMatrix, row: usize, f: u32) {
    let p = m.p as u64;
    for j in 0..m.cols {
        let idx = row * m.cols + j;
        m.data[idx] = (m.data[idx] as u64 * f as u64 % p) as u32;
    }
}

// row[dst] += f * row[src]
fn add_row_multiple(m: &mut FpMatrix, dst: usize, src: usize, f: u32) {
    let p = m.p as u64;
    for j in 0..m.cols {
        let s = m.data[src * m.cols + j];
        if s != 0 {
            let idx = dst * m.cols + j;
            m.data[idx] = ((m.data[idx] as u64 + f as u64 * s as u64) % p) as u32;
        }
    }
}

/// Enumerates every F_p-combination `base + Σ t_i k_i` of a kernel basis.
pub fn span_with_offset(p: u32, base: &[u32], kernel: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut out = vec![base.to_vec()];
    for k in kernel {
        let mut next = Vec::with_capacity(out.len() * p as usize);
        for v in &out {
            for t in 0..p {
                next.push(
                    v.iter()
                        .zip(k)
                        .map(|(&a, &b)| ((a as u64 + t as u64 * b as u64) % p as u64) as u32)
                        .collect(),
                );
            }
        }
        out = next;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_and_finds_kernel() {
        // [1 1 0; 0 1 1] over F_3
        let m = FpMatrix::from_columns(3, 2, &[vec![1, 0], vec![1, 1], vec![0, 1]]);
        let sys = FpSystem::new(&m);
        assert_eq!(sys.rank(), 2);
        let t = sys.solve(&[2, 1]).unwrap();
        assert_eq!(m.mul_vec(&t), vec![2, 1]);
        let ker = sys.kernel_basis();
        assert_eq!(ker.len(), 1);
        assert_eq!(m.mul_vec(&ker[0]), vec![0, 0]);
    }

    #[test]
    fn inconsistent_system() {
        let m = FpMatrix::from_columns(2, 2, &[vec![1, 1]]);
        let sys = FpSystem::new(&m);
        assert!(sys.solve(&[1, 0]).is_none());
        assert!(!sys.is_consistent(&[1, 0]));
        assert!(sys.is_consistent(&[1, 1]));
    }

    #[test]
    fn span_size() {
        let all = span_with_offset(3, &[0, 0], &[vec![1, 0], vec![0, 1]]);
        assert_eq!(all.len(), 9);
    }

    #[test]
    fn inverses() {
        for p in [2u32, 3, 5, 7, 13] {
            for a in 1..p {
                assert_eq!(a * inv_mod(a, p) % p, 1);
            }
        }
    }
}
