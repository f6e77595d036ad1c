//! Quaternionic structures `(J1, J2, J3)` on `R^{4n}` and adapted frames.
//!
//! The standard structure is block diagonal: on each copy of `H = R^4`
//! (basis order `1, i, j, k`) the three endomorphisms act as left
//! multiplication by `i`, `j` and `k`. Any structure obtained from it by an
//! orthogonal change of basis is equally valid and is what the randomized
//! tests use.

use nalgebra::{DMatrix, DVector};

use crate::check::{Check, CheckReport};
use crate::error::{Error, Result};
use crate::seeded;

/// Three endomorphisms of `R^{4n}` with `J_a^2 = -I` and `J1 J2 = J3`
/// (cyclically), each orthogonal.
#[derive(Debug, Clone, PartialEq)]
pub struct QuaternionStructure {
    n: usize,
    j: [DMatrix<f64>; 3],
}

/// Max-abs entry of `a * b - c` for square matrices.
fn product_residual(a: &DMatrix<f64>, b: &DMatrix<f64>, c: &DMatrix<f64>) -> f64 {
    (a * b - c).amax()
}

fn left_mult_block(unit: usize) -> [[f64; 4]; 4] {
    // Row-major matrix of q -> u q for u in {i, j, k}, basis (1, i, j, k).
    match unit {
        0 => [
            [0.0, -1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, -1.0],
            [0.0, 0.0, 1.0, 0.0],
        ],
        1 => [
            [0.0, 0.0, -1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [1.0, 0.0, 0.0, 0.0],
            [0.0, -1.0, 0.0, 0.0],
        ],
        _ => [
            [0.0, 0.0, 0.0, -1.0],
            [0.0, 0.0, -1.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [1.0, 0.0, 0.0, 0.0],
        ],
    }
}

pub(crate) fn real_dim(n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidDimension(n));
    }
    n.checked_mul(4).ok_or(Error::InvalidDimension(n))
}

impl QuaternionStructure {
    /// Block-diagonal left multiplication by `i, j, k` on `H^n`.
    pub fn standard(n: usize) -> Result<Self> {
        let dim = real_dim(n)?;
        let j = [0, 1, 2].map(|unit| {
            let block = left_mult_block(unit);
            let mut m = DMatrix::zeros(dim, dim);
            for b in 0..n {
                for (r, row) in block.iter().enumerate() {
                    for (c, &v) in row.iter().enumerate() {
                        m[(4 * b + r, 4 * b + c)] = v;
                    }
                }
            }
            m
        });
        Ok(QuaternionStructure { n, j })
    }

    /// Wraps three matrices without checking the quaternion relations; use
    /// [`QuaternionStructure::verify`] for that.
    pub fn from_matrices(n: usize, j: [DMatrix<f64>; 3]) -> Result<Self> {
        let dim = real_dim(n)?;
        for m in &j {
            if m.nrows() != dim || m.ncols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: if m.nrows() != dim { m.nrows() } else { m.ncols() },
                });
            }
        }
        Ok(QuaternionStructure { n, j })
    }

    /// Quaternion dimension.
    pub fn n(&self) -> usize {
        self.n
    }

    /// Real dimension `4n`.
    pub fn dim(&self) -> usize {
        4 * self.n
    }

    /// `J_{alpha+1}` for `alpha` in `0..3`.
    pub fn j(&self, alpha: usize) -> &DMatrix<f64> {
        &self.j[alpha]
    }

    pub fn matrices(&self) -> &[DMatrix<f64>; 3] {
        &self.j
    }

    /// `(O^T J1 O, O^T J2 O, O^T J3 O)`.
    pub fn conjugated(&self, o: &DMatrix<f64>) -> Result<Self> {
        let dim = self.dim();
        if o.nrows() != dim || o.ncols() != dim {
            return Err(Error::DimensionMismatch { expected: dim, actual: o.nrows() });
        }
        let deviation = (o.transpose() * o - DMatrix::<f64>::identity(dim, dim)).amax();
        if !(deviation <= 1e-10) {
            return Err(Error::NotOrthogonal { deviation });
        }
        let ot = o.transpose();
        let j = [0, 1, 2].map(|a| &ot * &self.j[a] * o);
        Ok(QuaternionStructure { n: self.n, j })
    }

    /// Max-abs residual of every structure invariant.
    pub fn verify(&self, tol: f64) -> CheckReport {
        let dim = self.dim();
        let id = DMatrix::<f64>::identity(dim, dim);
        let neg_id = -&id;
        let mut square = 0.0f64;
        let mut forward = 0.0f64;
        let mut backward = 0.0f64;
        let mut orthogonal = 0.0f64;
        let mut skew = 0.0f64;
        for a in 0..3 {
            let (b, c) = ((a + 1) % 3, (a + 2) % 3);
            let ja = &self.j[a];
            square = square.max(product_residual(ja, ja, &neg_id));
            forward = forward.max(product_residual(ja, &self.j[b], &self.j[c]));
            backward = backward.max(product_residual(&self.j[b], ja, &(-&self.j[c])));
            orthogonal = orthogonal.max(product_residual(&ja.transpose(), ja, &id));
            skew = skew.max((ja.transpose() + ja).amax());
        }
        let mut report = CheckReport::new();
        let label = "quaternion relations";
        report.push(Check::residual("J_a^2 = -I", label, square, tol));
        report.push(Check::residual("J_a J_(a+1) = J_(a+2)", label, forward, tol));
        report.push(Check::residual("J_(a+1) J_a = -J_(a+2)", label, backward, tol));
        report.push(Check::residual("J_a^T J_a = I", "metric compatibility", orthogonal, tol));
        report.push(Check::residual("J_a^T = -J_a", "skew-adjointness", skew, tol));
        report
    }
}

/// Orthonormal basis `{E_1..E_n, J1 E_1..J1 E_n, J2 E_1.., J3 E_1..}`.
#[derive(Debug, Clone, PartialEq)]
pub struct AdaptedFrame {
    n: usize,
    vectors: Vec<DVector<f64>>,
}

const MAX_RETRIES: usize = 100;
const DEGENERATE_NORM: f64 = 1e-8;

impl AdaptedFrame {
    /// Greedy seeded construction: each new `E_i` is a Gaussian draw
    /// projected off the quaternion blocks already chosen.
    pub fn build(q: &QuaternionStructure, seed: u64) -> Result<Self> {
        Self::build_with_first(q, None, seed)
    }

    /// As [`AdaptedFrame::build`], optionally forcing the direction of `E_1`.
    pub fn build_with_first(
        q: &QuaternionStructure,
        first: Option<&DVector<f64>>,
        seed: u64,
    ) -> Result<Self> {
        let n = q.n();
        let dim = q.dim();
        let mut rng = seeded::rng(seed);
        let mut basis: Vec<DVector<f64>> = Vec::with_capacity(dim);
        let mut es: Vec<DVector<f64>> = Vec::with_capacity(n);

        for i in 0..n {
            let e = match (i, first) {
                (0, Some(v)) => {
                    if v.len() != dim {
                        return Err(Error::DimensionMismatch { expected: dim, actual: v.len() });
                    }
                    let norm = v.norm();
                    if !(norm > 0.0) {
                        return Err(Error::ZeroVector);
                    }
                    v / norm
                }
                _ => {
                    let mut accepted = None;
                    for _ in 0..MAX_RETRIES {
                        let mut v = seeded::gaussian_vector(&mut rng, dim);
                        // two passes of modified Gram-Schmidt
                        for _ in 0..2 {
                            for f in &basis {
                                let d = f.dot(&v);
                                v.axpy(-d, f, 1.0);
                            }
                        }
                        let norm = v.norm();
                        if norm >= DEGENERATE_NORM {
                            accepted = Some(v / norm);
                            break;
                        }
                    }
                    accepted.ok_or(Error::FrameConstruction { retries: MAX_RETRIES })?
                }
            };
            basis.push(e.clone());
            for a in 0..3 {
                basis.push(q.j(a) * &e);
            }
            es.push(e);
        }

        let mut vectors = es.clone();
        for a in 0..3 {
            vectors.extend(es.iter().map(|e| q.j(a) * e));
        }
        Ok(AdaptedFrame { n, vectors })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// All `4n` vectors in block order.
    pub fn vectors(&self) -> &[DVector<f64>] {
        &self.vectors
    }

    /// `E_i` (`i` in `0..n`).
    pub fn e(&self, i: usize) -> &DVector<f64> {
        &self.vectors[i]
    }

    /// `J_{alpha+1} E_i` (`alpha` in `0..3`, `i` in `0..n`).
    pub fn je(&self, alpha: usize, i: usize) -> &DVector<f64> {
        &self.vectors[(alpha + 1) * self.n + i]
    }

    /// Orthonormality and block-structure residuals against `q`.
    pub fn verify(&self, q: &QuaternionStructure, tol: f64) -> CheckReport {
        let dim = self.vectors.len();
        let mut gram = 0.0f64;
        for a in 0..dim {
            for b in 0..dim {
                let expected = if a == b { 1.0 } else { 0.0 };
                gram = gram.max((self.vectors[a].dot(&self.vectors[b]) - expected).abs());
            }
        }
        let mut block = 0.0f64;
        for alpha in 0..3 {
            for i in 0..self.n {
                block = block.max((q.j(alpha) * self.e(i) - self.je(alpha, i)).amax());
            }
        }
        let mut report = CheckReport::new();
        report.push(Check::residual("frame Gram = I", "adapted frame orthonormality", gram, tol));
        report.push(Check::residual("frame block structure", "adapted frame J-blocks", block, tol));
        report
    }
}
