//! Fourier-component stacks `{Φ̃(k) : −M < k ≤ M}` of a `T`-periodic state.
//!
//! Time-domain reconstruction uses `Φ(t) = Σ_k Φ̃(k) e^{+ikωt}`, the sign
//! that pairs with `+kω` on the `k`-th diagonal block of the Floquet matrix
//! and `H(t) = Σ_j H̃_j e^{−ijωt}`.

use crate::linalg::{c, CMatrix, CVector, C64, ZERO};

#[derive(Clone, Debug, PartialEq)]
pub struct FourierStack {
    dim: usize,
    m_max: usize,
    data: CVector,
}

impl FourierStack {
    pub fn zeros(dim: usize, m_max: usize) -> Self {
        FourierStack {
            dim,
            m_max,
            data: CVector::zeros(2 * m_max * dim),
        }
    }

    /// Wraps a flat extended-space vector (component `k` at offset `(k + M − 1)·d`).
    pub fn from_flat(dim: usize, m_max: usize, data: CVector) -> Self {
        assert_eq!(data.len(), 2 * m_max * dim);
        FourierStack { dim, m_max, data }
    }

    /// Single Fourier component `v` at index `k = 0`.
    pub fn constant(v: &CVector, m_max: usize) -> Self {
        let mut s = Self::zeros(v.len(), m_max.max(1));
        s.set_component(0, v);
        s
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn m_max(&self) -> usize {
        self.m_max
    }

    pub fn flat(&self) -> &CVector {
        &self.data
    }

    /// Fourier indices held, ascending.
    pub fn indices(&self) -> std::ops::RangeInclusive<i64> {
        (1 - self.m_max as i64)..=(self.m_max as i64)
    }

    fn offset(&self, k: i64) -> Option<usize> {
        let m = self.m_max as i64;
        (k > -m && k <= m).then(|| (k + m - 1) as usize * self.dim)
    }

    /// Component `Φ̃(k)`; zero outside the truncation window.
    pub fn component(&self, k: i64) -> CVector {
        match self.offset(k) {
            Some(o) => self.data.rows(o, self.dim).clone_owned(),
            None => CVector::zeros(self.dim),
        }
    }

    pub fn set_component(&mut self, k: i64, v: &CVector) {
        let o = self.offset(k).expect("Fourier index outside the stack");
        self.data.rows_mut(o, self.dim).copy_from(v);
    }

    /// `Σ_k ‖Φ̃(k)‖²`.
    pub fn norm_sqr(&self) -> f64 {
        self.data.norm_squared()
    }

    /// `Σ_k ⟨self(k)|other(k)⟩`, the extended-space inner product.
    pub fn inner(&self, other: &FourierStack) -> C64 {
        assert_eq!(self.dim, other.dim);
        if self.m_max == other.m_max {
            return self.data.dotc(&other.data);
        }
        self.indices()
            .map(|k| self.component(k).dotc(&other.component(k)))
            .fold(ZERO, |a, b| a + b)
    }

    /// `Φ(t)`.
    pub fn value_at(&self, t: f64, omega: f64) -> CVector {
        let mut out = CVector::zeros(self.dim);
        for k in self.indices() {
            let o = self.offset(k).unwrap();
            let phase = c(0.0, k as f64 * omega * t).exp();
            out.axpy(phase, &self.data.rows(o, self.dim), c(1.0, 0.0));
        }
        out
    }

    /// `Φ(0) = Σ_k Φ̃(k)`.
    pub fn at_zero(&self) -> CVector {
        let mut out = CVector::zeros(self.dim);
        for k in self.indices() {
            out += self.data.rows(self.offset(k).unwrap(), self.dim);
        }
        out
    }

    /// Stack shifted by `n` indices, `w(k) = Φ̃(k − n)`; its eigenvalue is
    /// raised by `nω`. Components pushed past the window are dropped.
    pub fn shifted(&self, n: i64) -> FourierStack {
        let mut out = Self::zeros(self.dim, self.m_max);
        for k in self.indices() {
            if out.offset(k + n).is_some() {
                out.set_component(k + n, &self.component(k));
            }
        }
        out
    }

    /// Same state in a window of half-width `m_max` (padded or clipped).
    pub fn resized(&self, m_max: usize) -> FourierStack {
        let mut out = Self::zeros(self.dim, m_max);
        for k in self.indices() {
            if out.offset(k).is_some() {
                out.set_component(k, &self.component(k));
            }
        }
        out
    }

    /// First moment `Σ_k k‖Φ̃(k)‖²`.
    pub fn centroid(&self) -> f64 {
        self.indices()
            .map(|k| k as f64 * self.component(k).norm_squared())
            .sum()
    }

    /// `Σ_k (−1)^k ⟨Φ̃(k)|Z|Φ̃(k)⟩`, the generalized-parity expectation.
    pub fn parity_expectation(&self, z: &CMatrix) -> f64 {
        self.indices()
            .map(|k| {
                let v = self.component(k);
                let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
                sign * v.dotc(&(z * &v)).re
            })
            .sum()
    }

    /// Applies `(−1)^k P` blockwise.
    pub fn apply_generalized_parity(&self, p: &CMatrix) -> FourierStack {
        let mut out = Self::zeros(self.dim, self.m_max);
        for k in self.indices() {
            let sign = if k.rem_euclid(2) == 0 { 1.0 } else { -1.0 };
            out.set_component(k, &(p * self.component(k)).scale(sign));
        }
        out
    }

    /// Applies a static operator to every component.
    pub fn apply_static(&self, u: &CMatrix) -> FourierStack {
        let mut out = Self::zeros(u.nrows(), self.m_max);
        for k in self.indices() {
            out.set_component(k, &(u * self.component(k)));
        }
        out
    }

    pub fn scaled(&self, s: C64) -> FourierStack {
        FourierStack {
            dim: self.dim,
            m_max: self.m_max,
            data: &self.data * s,
        }
    }

    /// Tensor product in time, i.e. a convolution over Fourier indices.
    /// The result lives in a window of half-width `M₁ + M₂`.
    pub fn tensor(&self, other: &FourierStack) -> FourierStack {
        let m = self.m_max + other.m_max;
        let mut out = Self::zeros(self.dim * other.dim, m);
        for k1 in self.indices() {
            let a = self.component(k1);
            if a.norm_squared() == 0.0 {
                continue;
            }
            for k2 in other.indices() {
                let b = other.component(k2);
                let o = out.offset(k1 + k2).expect("convolution stays in the window");
                let prod = a.kronecker(&b);
                let mut slot = out.data.rows_mut(o, out.dim);
                slot += prod;
            }
        }
        out
    }

    /// Linear combination `Σ w_i s_i` of equally shaped stacks.
    pub fn combine(terms: &[(C64, &FourierStack)]) -> FourierStack {
        let first = terms[0].1;
        let mut out = Self::zeros(first.dim, first.m_max);
        for (w, s) in terms {
            out.data.axpy(*w, &s.data, c(1.0, 0.0));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;

    fn sample() -> FourierStack {
        let mut s = FourierStack::zeros(2, 2);
        s.set_component(-1, &CVector::from_vec(vec![c(0.1, 0.0), c(0.0, 0.2)]));
        s.set_component(0, &CVector::from_vec(vec![c(0.7, 0.0), ZERO]));
        s.set_component(2, &CVector::from_vec(vec![ZERO, c(0.3, -0.1)]));
        s
    }

    #[test]
    fn value_at_zero_is_component_sum() {
        let s = sample();
        assert!((s.value_at(0.0, 1.3) - s.at_zero()).norm() < 1e-15);
    }

    #[test]
    fn shift_moves_components_and_centroid() {
        let s = sample();
        let w = s.shifted(-1);
        assert_eq!(w.component(-2), CVector::zeros(2));
        assert_eq!(w.component(1), s.component(2));
        assert_eq!(w.component(-1), s.component(0));
        let inside = s.shifted(0);
        assert!((inside.centroid() - s.centroid()).abs() < 1e-15);
    }

    #[test]
    fn tensor_matches_pointwise_product() {
        let a = sample();
        let b = sample().shifted(-1);
        let p = a.tensor(&b);
        let t = 0.83;
        let direct = a.value_at(t, 2.0).kronecker(&b.value_at(t, 2.0));
        assert!((p.value_at(t, 2.0) - direct).norm() < 1e-14);
        assert_eq!(p.m_max(), 4);
    }

    #[test]
    fn parity_of_static_sigma_z_eigenstate() {
        let z = CMatrix::from_diagonal(&CVector::from_vec(vec![ONE, -ONE]));
        let up = FourierStack::constant(&CVector::from_vec(vec![ONE, ZERO]), 3);
        assert!((up.parity_expectation(&z) - 1.0).abs() < 1e-15);
        assert!((up.shifted(1).parity_expectation(&z) + 1.0).abs() < 1e-15);
    }
}
