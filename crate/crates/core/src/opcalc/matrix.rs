//! Operators as matrices on the monomial basis `{1, ε, …, ε^N}`.
//!
//! Column `m` holds the image of `ε^m`. Multiplication by `ε` pushes the top
//! degree out of the basis, so identities involving it hold only on the
//! lower degrees.

use super::operator::{DiffOperator, Symbol};
use crate::error::{Error, Result};
use crate::powerseries::PowerSeries;
use crate::scalar::{exact_int, Coef, ExactComplex, Scalar, C64};
use num_traits::Zero;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixRole {
    Derivative,
    MultiplyByEps,
    General,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Entries {
    Exact(Vec<Vec<ExactComplex>>),
    Float(Vec<Vec<C64>>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct OperatorMatrix {
    pub entries: Entries,
    pub role: MatrixRole,
}

fn zeros<C: Coef>(n: usize) -> Vec<Vec<C>> {
    vec![vec![C::zero(); n]; n]
}

fn matmul<C: Coef>(a: &[Vec<C>], b: &[Vec<C>]) -> Vec<Vec<C>> {
    let n = a.len();
    let mut out = zeros::<C>(n);
    for i in 0..n {
        for k in 0..n {
            if a[i][k].is_zero() {
                continue;
            }
            for j in 0..n {
                if !b[k][j].is_zero() {
                    out[i][j] = out[i][j].clone() + a[i][k].clone() * b[k][j].clone();
                }
            }
        }
    }
    out
}

fn lincomb<C: Coef>(a: &[Vec<C>], b: &[Vec<C>], sb: C) -> Vec<Vec<C>> {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x.clone() + sb.clone() * y.clone()).collect())
        .collect()
}

impl Entries {
    fn dim(&self) -> usize {
        match self {
            Entries::Exact(m) => m.len(),
            Entries::Float(m) => m.len(),
        }
    }

    fn to_float(&self) -> Vec<Vec<C64>> {
        match self {
            Entries::Exact(m) => m.iter().map(|r| r.iter().map(Coef::to_c64).collect()).collect(),
            Entries::Float(m) => m.clone(),
        }
    }
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.entries.dim()
    }

    /// `D[m][m+1] = m + 1`.
    pub fn derivative(order: usize) -> Self {
        let n = order + 1;
        let mut m = zeros::<ExactComplex>(n);
        for i in 0..order {
            m[i][i + 1] = exact_int(i as i64 + 1);
        }
        OperatorMatrix { entries: Entries::Exact(m), role: MatrixRole::Derivative }
    }

    /// `E[m+1][m] = 1`.
    pub fn multiply_by_eps(order: usize) -> Self {
        let n = order + 1;
        let mut m = zeros::<ExactComplex>(n);
        for i in 0..order {
            m[i + 1][i] = exact_int(1);
        }
        OperatorMatrix { entries: Entries::Exact(m), role: MatrixRole::MultiplyByEps }
    }

    pub fn identity(order: usize) -> Self {
        let n = order + 1;
        let mut m = zeros::<ExactComplex>(n);
        for (i, row) in m.iter_mut().enumerate() {
            row[i] = exact_int(1);
        }
        OperatorMatrix { entries: Entries::Exact(m), role: MatrixRole::General }
    }

    /// `Σ c_n ν^n D^n` for a series symbol.
    pub fn from_operator(op: &DiffOperator, order: usize) -> Result<Self> {
        let f = match &op.symbol {
            Symbol::Series(s) => s.clone(),
            Symbol::Class(c) => c.maclaurin(order)?,
        };
        Ok(Self::from_series(&f, op.nu.value(), order))
    }

    pub fn from_series(f: &PowerSeries, nu: Scalar, order: usize) -> Self {
        let d = Self::derivative(order);
        let mut acc = Self::zero(order);
        let mut power = Self::identity(order);
        for n in 0..=f.order().min(order) {
            let c = f.coeff(n) * nu.powi(n as i32);
            if !c.is_zero() {
                acc = acc.add_scaled(&power, &c);
            }
            power = power.mul(&d);
        }
        acc.role = MatrixRole::General;
        acc
    }

    pub fn zero(order: usize) -> Self {
        OperatorMatrix { entries: Entries::Exact(zeros(order + 1)), role: MatrixRole::General }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let entries = match (&self.entries, &other.entries) {
            (Entries::Exact(a), Entries::Exact(b)) => Entries::Exact(matmul(a, b)),
            _ => Entries::Float(matmul(&self.entries.to_float(), &other.entries.to_float())),
        };
        OperatorMatrix { entries, role: MatrixRole::General }
    }

    /// `self + s · other`.
    pub fn add_scaled(&self, other: &Self, s: &Scalar) -> Self {
        let entries = match (&self.entries, &other.entries, s) {
            (Entries::Exact(a), Entries::Exact(b), Scalar::Exact(e)) => Entries::Exact(lincomb(a, b, e.clone())),
            _ => Entries::Float(lincomb(&self.entries.to_float(), &other.entries.to_float(), s.to_c64())),
        };
        OperatorMatrix { entries, role: MatrixRole::General }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add_scaled(other, &Scalar::int(-1))
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::identity(self.dim() - 1);
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn entry(&self, i: usize, j: usize) -> Scalar {
        match &self.entries {
            Entries::Exact(m) => Scalar::Exact(m[i][j].clone()),
            Entries::Float(m) => Scalar::Float(m[i][j]),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.entries {
            Entries::Exact(m) => m.iter().all(|r| r.iter().all(Zero::is_zero)),
            Entries::Float(m) => m.iter().all(|r| r.iter().all(|z| z.norm() == 0.0)),
        }
    }

    /// Max-norm over the leading `(w+1)×(w+1)` block; exact when possible.
    pub fn block_max_norm(&self, w: usize) -> Scalar {
        let mut best = Scalar::zero();
        let mut best_mag = 0.0;
        for i in 0..=w {
            for j in 0..=w {
                let e = self.entry(i, j);
                let mag = e.norm();
                if mag > best_mag {
                    best_mag = mag;
                    best = e;
                }
            }
        }
        match best {
            Scalar::Exact(_) if best_mag == 0.0 => Scalar::zero(),
            Scalar::Exact(_) => Scalar::from_f64(best_mag),
            Scalar::Float(_) => Scalar::float(C64::new(best_mag, 0.0)),
        }
    }
}

/// Checks `f′(∂) = f(∂)ε − εf(∂)` on degrees `0..N − deg f − 1`, returning
/// the max-norm residual there (exactly zero for exact input).
pub fn commutator_derivative_check(f: &PowerSeries, order: usize) -> Result<Scalar> {
    let deg = f.degree().unwrap_or(0);
    if order <= deg {
        return Err(Error::WindowTooSmall(format!("order {order} does not exceed the symbol degree {deg}")));
    }
    let window = order - deg - 1;
    let nu = Scalar::one();
    let mf = OperatorMatrix::from_series(f, nu.clone(), order);
    let mfp = OperatorMatrix::from_series(&f.differentiate(), nu, order);
    let e = OperatorMatrix::multiply_by_eps(order);
    let comm = mf.mul(&e).sub(&e.mul(&mf));
    Ok(mfp.sub(&comm).block_max_norm(window))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::powerseries::series_known;

    #[test]
    fn derivative_matrix_shape_and_nilpotency() {
        let d = OperatorMatrix::derivative(3);
        assert_eq!(d.entry(0, 1), Scalar::int(1));
        assert_eq!(d.entry(1, 2), Scalar::int(2));
        assert_eq!(d.entry(2, 3), Scalar::int(3));
        assert!(d.pow(4).is_zero());
        assert!(!d.pow(3).is_zero());
    }

    #[test]
    fn canonical_commutator_is_identity_below_top() {
        let n = 6;
        let d = OperatorMatrix::derivative(n);
        let e = OperatorMatrix::multiply_by_eps(n);
        let c = d.mul(&e).sub(&e.mul(&d));
        let id = OperatorMatrix::identity(n);
        assert_eq!(c.sub(&id).block_max_norm(n - 1), Scalar::zero());
        assert!(!c.sub(&id).is_zero());
    }

    #[test]
    fn square_symbol_is_d_squared() {
        let f = PowerSeries::from_ints(&[0, 0, 1]);
        let d = OperatorMatrix::derivative(5);
        assert_eq!(OperatorMatrix::from_series(&f, Scalar::one(), 5).entries, d.mul(&d).entries);
    }

    #[test]
    fn commutator_examples() {
        assert_eq!(commutator_derivative_check(&PowerSeries::from_ints(&[0, 0, 1]), 8).unwrap(), Scalar::zero());
        let e6 = series_known("exp", &[], 6).unwrap();
        assert_eq!(commutator_derivative_check(&e6, 16).unwrap(), Scalar::zero());
        assert_eq!(commutator_derivative_check(&PowerSeries::from_ints(&[4]), 3).unwrap(), Scalar::zero());
        assert!(commutator_derivative_check(&PowerSeries::from_ints(&[0, 0, 0, 1]), 3).is_err());
    }
}
