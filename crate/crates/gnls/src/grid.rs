//! Periodic-box discretization metadata.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::num::Real;

/// A cubic periodic grid: `n` points per axis over a box of side `length`,
/// holding `n_components` complex fields.
///
/// Physical coordinates are centered, x_i = −L/2 + i·L/n, and wavenumbers
/// follow FFT ordering k ∈ (2π/L)·{0, …, n/2−1, −n/2, …, −1}.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridDescriptor<T> {
    n: usize,
    length: T,
    n_components: usize,
}

impl<T: Real> GridDescriptor<T> {
    pub fn new(n: usize, length: T, n_components: usize) -> Result<Self> {
        if n < 8 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "points per axis must be a power of two >= 8, got {n}"
            )));
        }
        if !(length > T::zero()) || !length.is_finite() {
            return Err(Error::InvalidGrid("box length must be positive".into()));
        }
        if n_components == 0 {
            return Err(Error::InvalidGrid("component count must be at least 1".into()));
        }
        Ok(Self { n, length, n_components })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn length(&self) -> T {
        self.length
    }

    pub fn n_components(&self) -> usize {
        self.n_components
    }

    pub fn points(&self) -> usize {
        self.n * self.n * self.n
    }

    pub fn dx(&self) -> T {
        self.length / T::of_usize(self.n)
    }

    pub fn cell_volume(&self) -> T {
        let dx = self.dx();
        dx * dx * dx
    }

    /// Centered physical coordinate of axis index `i`.
    pub fn coord(&self, i: usize) -> T {
        T::of_usize(i) * self.dx() - self.length * T::of(0.5)
    }

    /// Wavenumber of axis index `i` in FFT ordering.
    pub fn wavenumber(&self, i: usize) -> T {
        let m = if i < self.n / 2 {
            T::of_usize(i)
        } else {
            T::of_usize(i) - T::of_usize(self.n)
        };
        T::of(2.0) * T::PI() / self.length * m
    }

    /// Wavenumber with the Nyquist mode zeroed, for odd (first) derivatives.
    pub fn wavenumber_odd(&self, i: usize) -> T {
        if i == self.n / 2 {
            T::zero()
        } else {
            self.wavenumber(i)
        }
    }

    pub fn coords(&self) -> Vec<T> {
        (0..self.n).map(|i| self.coord(i)).collect()
    }

    pub fn wavenumbers(&self) -> Vec<T> {
        (0..self.n).map(|i| self.wavenumber(i)).collect()
    }

    /// Same descriptor with a different component count.
    pub fn with_components(&self, n_components: usize) -> Result<Self> {
        Self::new(self.n, self.length, n_components)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        assert!(GridDescriptor::<f64>::new(7, 1.0, 1).is_err());
        assert!(GridDescriptor::<f64>::new(24, 1.0, 1).is_err());
        assert!(GridDescriptor::<f64>::new(16, 0.0, 1).is_err());
        assert!(GridDescriptor::<f64>::new(16, 1.0, 0).is_err());
    }

    #[test]
    fn wavenumber_layout() {
        let g = GridDescriptor::<f64>::new(8, 2.0 * std::f64::consts::PI, 1).unwrap();
        let k: Vec<f64> = g.wavenumbers();
        assert_eq!(k, vec![0.0, 1.0, 2.0, 3.0, -4.0, -3.0, -2.0, -1.0]);
        assert_eq!(g.wavenumber_odd(4), 0.0);
        assert_eq!(g.coord(0), -std::f64::consts::PI);
    }
}
