//! Fixed-size 3×3 tensor algebra.
//!
//! Everything here works on stack values; nothing allocates. [`SymTensor3`]
//! stores the six independent components of a symmetric tensor so that
//! symmetry holds by construction, while [`Tensor3`] is a general second-rank
//! tensor in row-major layout.

use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};

use crate::error::DomainError;

/// Component order of [`SymTensor3`]: 11, 22, 33, 12, 13, 23.
pub const SYM_INDEX: [(usize, usize); 6] = [(0, 0), (1, 1), (2, 2), (0, 1), (0, 2), (1, 2)];

const EIGEN_MAX_SWEEPS: usize = 30;
const EIGEN_REL_TOL: f64 = 1e-15;

/// General second-rank tensor, `self.0[i][j]` is the component a_ij.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tensor3(pub [[f64; 3]; 3]);

/// Symmetric second-rank tensor with components (a11, a22, a33, a12, a13, a23).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymTensor3(pub [f64; 6]);

/// Spectral decomposition of a [`SymTensor3`].
///
/// Eigenvalues are sorted in descending order and `vectors` holds the
/// matching unit eigenvectors as columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSystem3 {
    pub values: [f64; 3],
    pub vectors: Tensor3,
}

impl Tensor3 {
    pub const ZERO: Tensor3 = Tensor3([[0.0; 3]; 3]);
    pub const IDENTITY: Tensor3 = Tensor3([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);

    pub fn from_diag(d: [f64; 3]) -> Self {
        Tensor3([[d[0], 0.0, 0.0], [0.0, d[1], 0.0], [0.0, 0.0, d[2]]])
    }

    /// Tensor whose columns are the given vectors.
    pub fn from_columns(c: [[f64; 3]; 3]) -> Self {
        let mut m = [[0.0; 3]; 3];
        for (j, col) in c.iter().enumerate() {
            for i in 0..3 {
                m[i][j] = col[i];
            }
        }
        Tensor3(m)
    }

    pub fn column(&self, j: usize) -> [f64; 3] {
        [self.0[0][j], self.0[1][j], self.0[2][j]]
    }

    pub fn transpose(&self) -> Self {
        let a = &self.0;
        Tensor3([
            [a[0][0], a[1][0], a[2][0]],
            [a[0][1], a[1][1], a[2][1]],
            [a[0][2], a[1][2], a[2][2]],
        ])
    }

    pub fn trace(&self) -> f64 {
        self.0[0][0] + self.0[1][1] + self.0[2][2]
    }

    pub fn det(&self) -> f64 {
        let a = &self.0;
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
            - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
            + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    }

    /// Closed-form cofactor inverse.
    pub fn inverse(&self) -> Result<Self, DomainError> {
        let a = &self.0;
        let det = self.det();
        if det == 0.0 || !det.is_finite() {
            return Err(DomainError::Singular(det));
        }
        let r = 1.0 / det;
        let inv = Tensor3([
            [
                (a[1][1] * a[2][2] - a[1][2] * a[2][1]) * r,
                (a[0][2] * a[2][1] - a[0][1] * a[2][2]) * r,
                (a[0][1] * a[1][2] - a[0][2] * a[1][1]) * r,
            ],
            [
                (a[1][2] * a[2][0] - a[1][0] * a[2][2]) * r,
                (a[0][0] * a[2][2] - a[0][2] * a[2][0]) * r,
                (a[0][2] * a[1][0] - a[0][0] * a[1][2]) * r,
            ],
            [
                (a[1][0] * a[2][1] - a[1][1] * a[2][0]) * r,
                (a[0][1] * a[2][0] - a[0][0] * a[2][1]) * r,
                (a[0][0] * a[1][1] - a[0][1] * a[1][0]) * r,
            ],
        ]);
        Ok(inv)
    }

    /// `(det A)^(-1/3) A`.
    ///
    /// The scaling is applied twice so that the determinant evaluated on the
    /// result is 1 to a few ulps even when `A` is poorly conditioned.
    pub fn unimodular(&self) -> Result<Self, DomainError> {
        let det = self.det();
        if !(det > 0.0) || !det.is_finite() {
            return Err(DomainError::NonPositiveDeterminant(det));
        }
        let once = *self * det.cbrt().recip();
        Ok(once * once.det().cbrt().recip())
    }

    pub fn norm(&self) -> f64 {
        self.0.iter().flatten().map(|x| x * x).sum::<f64>().sqrt()
    }

    /// Maximum absolute column sum.
    pub fn norm_1(&self) -> f64 {
        (0..3)
            .map(|j| (0..3).map(|i| self.0[i][j].abs()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().flatten().all(|x| x.is_finite())
    }

    /// Frobenius norm of the skew part.
    pub fn asymmetry(&self) -> f64 {
        let a = &self.0;
        let d01 = a[0][1] - a[1][0];
        let d02 = a[0][2] - a[2][0];
        let d12 = a[1][2] - a[2][1];
        (0.5 * (d01 * d01 + d02 * d02 + d12 * d12)).sqrt()
    }

    /// Symmetric part `(A + Aᵀ)/2`.
    pub fn sym_part(&self) -> SymTensor3 {
        let a = &self.0;
        SymTensor3([
            a[0][0],
            a[1][1],
            a[2][2],
            0.5 * (a[0][1] + a[1][0]),
            0.5 * (a[0][2] + a[2][0]),
            0.5 * (a[1][2] + a[2][1]),
        ])
    }

    /// Symmetric part of a product that is symmetric in exact arithmetic.
    ///
    /// Debug builds check that the discarded skew part is round-off.
    pub fn into_sym(self) -> SymTensor3 {
        let s = self.sym_part();
        debug_assert!(
            !self.is_finite() || self.asymmetry() <= 1e-10 * s.norm().max(f64::MIN_POSITIVE),
            "asymmetry {:e} exceeds round-off for norm {:e}",
            self.asymmetry(),
            s.norm()
        );
        s
    }

    /// Matrix exponential by scaling and squaring around a truncated Taylor core.
    ///
    /// The argument is scaled by 2^-s so that its 1-norm is at most 0.5, the
    /// series is summed through degree 13, and the result is squared s times.
    pub fn exp(&self) -> Tensor3 {
        let norm = self.norm_1();
        let mut squarings = 0i32;
        if norm > 0.5 {
            squarings = (norm / 0.5).log2().ceil() as i32;
        }
        let scaled = *self * 2f64.powi(-squarings);
        let mut term = Tensor3::IDENTITY;
        let mut sum = Tensor3::IDENTITY;
        for k in 1..=13 {
            term = term * scaled * (1.0 / k as f64);
            sum += term;
        }
        for _ in 0..squarings {
            sum = sum * sum;
        }
        sum
    }
}

impl SymTensor3 {
    pub const ZERO: SymTensor3 = SymTensor3([0.0; 6]);
    pub const IDENTITY: SymTensor3 = SymTensor3([1.0, 1.0, 1.0, 0.0, 0.0, 0.0]);

    pub fn from_diag(d: [f64; 3]) -> Self {
        SymTensor3([d[0], d[1], d[2], 0.0, 0.0, 0.0])
    }

    /// Builds from a full matrix, reading the upper triangle.
    pub fn from_upper(m: [[f64; 3]; 3]) -> Self {
        SymTensor3([m[0][0], m[1][1], m[2][2], m[0][1], m[0][2], m[1][2]])
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        let a = &self.0;
        match (i.min(j), i.max(j)) {
            (0, 0) => a[0],
            (1, 1) => a[1],
            (2, 2) => a[2],
            (0, 1) => a[3],
            (0, 2) => a[4],
            (1, 2) => a[5],
            _ => panic!("index ({i}, {j}) out of range"),
        }
    }

    pub fn to_tensor(&self) -> Tensor3 {
        let a = &self.0;
        Tensor3([[a[0], a[3], a[4]], [a[3], a[1], a[5]], [a[4], a[5], a[2]]])
    }

    pub fn trace(&self) -> f64 {
        self.0[0] + self.0[1] + self.0[2]
    }

    pub fn det(&self) -> f64 {
        let [a11, a22, a33, a12, a13, a23] = self.0;
        a11 * (a22 * a33 - a23 * a23) - a12 * (a12 * a33 - a23 * a13)
            + a13 * (a12 * a23 - a22 * a13)
    }

    pub fn inverse(&self) -> Result<Self, DomainError> {
        let [a11, a22, a33, a12, a13, a23] = self.0;
        let c11 = a22 * a33 - a23 * a23;
        let c12 = a13 * a23 - a12 * a33;
        let c13 = a12 * a23 - a13 * a22;
        let det = a11 * c11 + a12 * c12 + a13 * c13;
        if det == 0.0 || !det.is_finite() {
            return Err(DomainError::Singular(det));
        }
        let r = 1.0 / det;
        Ok(SymTensor3([
            c11 * r,
            (a11 * a33 - a13 * a13) * r,
            (a11 * a22 - a12 * a12) * r,
            c12 * r,
            c13 * r,
            (a12 * a13 - a11 * a23) * r,
        ]))
    }

    /// `(det A)^(-1/3) A`.
    ///
    /// The scaling is applied twice so that the determinant evaluated on the
    /// result is 1 to a few ulps even when `A` is poorly conditioned.
    pub fn unimodular(&self) -> Result<Self, DomainError> {
        let det = self.det();
        if !(det > 0.0) || !det.is_finite() {
            return Err(DomainError::NonPositiveDeterminant(det));
        }
        let once = *self * det.cbrt().recip();
        Ok(once * once.det().cbrt().recip())
    }

    /// `A - tr(A)/3 I`.
    pub fn deviator(&self) -> Self {
        let m = self.trace() / 3.0;
        let a = &self.0;
        SymTensor3([a[0] - m, a[1] - m, a[2] - m, a[3], a[4], a[5]])
    }

    /// Frobenius norm, counting each off-diagonal component twice.
    pub fn norm(&self) -> f64 {
        let a = &self.0;
        (a[0] * a[0] + a[1] * a[1] + a[2] * a[2] + 2.0 * (a[3] * a[3] + a[4] * a[4] + a[5] * a[5]))
            .sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }

    /// `self · other`, generally not symmetric.
    pub fn dot(&self, other: &SymTensor3) -> Tensor3 {
        self.to_tensor() * other.to_tensor()
    }

    /// Double contraction `A : B`.
    pub fn ddot(&self, other: &SymTensor3) -> f64 {
        let a = &self.0;
        let b = &other.0;
        a[0] * b[0] + a[1] * b[1] + a[2] * b[2] + 2.0 * (a[3] * b[3] + a[4] * b[4] + a[5] * b[5])
    }

    /// `F · A · Fᵀ`.
    pub fn push(&self, f: &Tensor3) -> SymTensor3 {
        (*f * self.to_tensor() * f.transpose()).sym_part()
    }

    /// `Fᵀ · A · F`.
    pub fn pull(&self, f: &Tensor3) -> SymTensor3 {
        (f.transpose() * self.to_tensor() * *f).sym_part()
    }

    /// `B · A · B` for symmetric `B`.
    pub fn sandwich(&self, b: &SymTensor3) -> SymTensor3 {
        let bt = b.to_tensor();
        (bt * self.to_tensor() * bt).sym_part()
    }

    /// Spectral decomposition by cyclic Jacobi rotations.
    pub fn eigen(&self) -> EigenSystem3 {
        let mut a = self.to_tensor().0;
        let mut v = Tensor3::IDENTITY.0;
        let scale = self.norm();
        let off = |a: &[[f64; 3]; 3]| {
            (2.0 * (a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2])).sqrt()
        };
        for _ in 0..EIGEN_MAX_SWEEPS {
            if off(&a) <= EIGEN_REL_TOL * scale {
                break;
            }
            for &(p, q) in &[(0usize, 1usize), (0, 2), (1, 2)] {
                let apq = a[p][q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta.is_infinite() { 0.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                let r = 3 - p - q;
                let app = a[p][p];
                let aqq = a[q][q];
                a[p][p] = app - t * apq;
                a[q][q] = aqq + t * apq;
                a[p][q] = 0.0;
                a[q][p] = 0.0;
                let arp = a[r][p];
                let arq = a[r][q];
                a[r][p] = c * arp - s * arq;
                a[p][r] = a[r][p];
                a[r][q] = s * arp + c * arq;
                a[q][r] = a[r][q];
                for row in v.iter_mut() {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
        let mut order = [0usize, 1, 2];
        order.sort_by(|&i, &j| a[j][j].total_cmp(&a[i][i]));
        let values = [a[order[0]][order[0]], a[order[1]][order[1]], a[order[2]][order[2]]];
        let vectors = Tensor3::from_columns([
            [v[0][order[0]], v[1][order[0]], v[2][order[0]]],
            [v[0][order[1]], v[1][order[1]], v[2][order[1]]],
            [v[0][order[2]], v[1][order[2]], v[2][order[2]]],
        ]);
        EigenSystem3 { values, vectors }
    }

    /// Principal square root of an SPD tensor.
    pub fn spd_sqrt(&self) -> Result<SymTensor3, DomainError> {
        let e = self.spd_eigen()?;
        Ok(e.map(f64::sqrt))
    }

    /// Inverse of the principal square root of an SPD tensor.
    pub fn spd_inv_sqrt(&self) -> Result<SymTensor3, DomainError> {
        let e = self.spd_eigen()?;
        Ok(e.map(|x| x.sqrt().recip()))
    }

    /// Eigensystem, rejecting tensors that are not positive definite.
    pub fn spd_eigen(&self) -> Result<EigenSystem3, DomainError> {
        if !self.is_finite() {
            return Err(DomainError::NonFinite("spd_eigen"));
        }
        let e = self.eigen();
        let min = e.values[2];
        if !(min > 1e-14 * self.norm()) {
            return Err(DomainError::NotPositiveDefinite { min_eigenvalue: min });
        }
        Ok(e)
    }

    /// Sylvester criterion on the leading principal minors.
    pub fn is_positive_definite(&self) -> bool {
        let [a11, a22, _, a12, _, _] = self.0;
        self.is_finite() && a11 > 0.0 && a11 * a22 - a12 * a12 > 0.0 && self.det() > 0.0
    }

    /// Smallest eigenvalue.
    pub fn min_eigenvalue(&self) -> f64 {
        self.eigen().values[2]
    }
}

impl EigenSystem3 {
    /// `Σ g(λᵢ) vᵢ⊗vᵢ`.
    pub fn map(&self, g: impl Fn(f64) -> f64) -> SymTensor3 {
        self.compose(self.values.map(g))
    }

    /// `Σ dᵢ vᵢ⊗vᵢ` for given spectral values.
    pub fn compose(&self, d: [f64; 3]) -> SymTensor3 {
        let v = &self.vectors.0;
        let mut out = [0.0; 6];
        for (k, &(i, j)) in SYM_INDEX.iter().enumerate() {
            out[k] = (0..3).map(|m| d[m] * v[i][m] * v[j][m]).sum();
        }
        SymTensor3(out)
    }

    pub fn reconstruct(&self) -> SymTensor3 {
        self.map(|x| x)
    }
}

impl Index<(usize, usize)> for Tensor3 {
    type Output = f64;
    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        &self.0[i][j]
    }
}

impl Add for Tensor3 {
    type Output = Tensor3;
    fn add(mut self, rhs: Tensor3) -> Tensor3 {
        self += rhs;
        self
    }
}

impl AddAssign for Tensor3 {
    fn add_assign(&mut self, rhs: Tensor3) {
        for i in 0..3 {
            for j in 0..3 {
                self.0[i][j] += rhs.0[i][j];
            }
        }
    }
}

impl Sub for Tensor3 {
    type Output = Tensor3;
    fn sub(self, rhs: Tensor3) -> Tensor3 {
        self + rhs * -1.0
    }
}

impl Neg for Tensor3 {
    type Output = Tensor3;
    fn neg(self) -> Tensor3 {
        self * -1.0
    }
}

impl Mul<f64> for Tensor3 {
    type Output = Tensor3;
    fn mul(mut self, s: f64) -> Tensor3 {
        self.0.iter_mut().flatten().for_each(|x| *x *= s);
        self
    }
}

impl Mul for Tensor3 {
    type Output = Tensor3;
    fn mul(self, rhs: Tensor3) -> Tensor3 {
        let a = &self.0;
        let b = &rhs.0;
        let mut c = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j] + a[i][2] * b[2][j];
            }
        }
        Tensor3(c)
    }
}

impl Add for SymTensor3 {
    type Output = SymTensor3;
    fn add(mut self, rhs: SymTensor3) -> SymTensor3 {
        self += rhs;
        self
    }
}

impl AddAssign for SymTensor3 {
    fn add_assign(&mut self, rhs: SymTensor3) {
        for k in 0..6 {
            self.0[k] += rhs.0[k];
        }
    }
}

impl Sub for SymTensor3 {
    type Output = SymTensor3;
    fn sub(mut self, rhs: SymTensor3) -> SymTensor3 {
        for k in 0..6 {
            self.0[k] -= rhs.0[k];
        }
        self
    }
}

impl Neg for SymTensor3 {
    type Output = SymTensor3;
    fn neg(self) -> SymTensor3 {
        self * -1.0
    }
}

impl Mul<f64> for SymTensor3 {
    type Output = SymTensor3;
    fn mul(mut self, s: f64) -> SymTensor3 {
        self.0.iter_mut().for_each(|x| *x *= s);
        self
    }
}

impl Mul<SymTensor3> for f64 {
    type Output = SymTensor3;
    fn mul(self, t: SymTensor3) -> SymTensor3 {
        t * self
    }
}

impl Mul<Tensor3> for f64 {
    type Output = Tensor3;
    fn mul(self, t: Tensor3) -> Tensor3 {
        t * self
    }
}
