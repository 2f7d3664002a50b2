//! In-place 3D FFT over `Array3<Complex<T>>`, built on per-axis 1D plans.
//!
//! The contiguous x axis is transformed in place; the strided y and z axes
//! go through a transposed per-plane buffer so each 1D FFT sees contiguous
//! data. Planes are processed in parallel; normalization (1/n³ on the
//! inverse) is folded into the last pass.

use std::sync::Arc;

use ndarray::parallel::prelude::*;
use ndarray::{Array3, ArrayViewMut2, Axis};
use rustfft::{Fft, FftPlanner};

use crate::num::{Real, C};

pub struct SpectralEngine<T> {
    n: usize,
    fwd: Arc<dyn Fft<T>>,
    inv: Arc<dyn Fft<T>>,
}

impl<T: Real> SpectralEngine<T> {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            fwd: planner.plan_fft_forward(n),
            inv: planner.plan_fft_inverse(n),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Unnormalized forward DFT, e^{-ik·x} convention.
    pub fn forward(&self, a: &mut Array3<C<T>>) {
        self.transform(a, true);
    }

    /// Inverse DFT normalized by 1/n³.
    pub fn inverse(&self, a: &mut Array3<C<T>>) {
        self.transform(a, false);
    }

    fn transform(&self, a: &mut Array3<C<T>>, forward: bool) {
        let n = self.n;
        debug_assert_eq!(a.dim(), (n, n, n), "grid/engine size mismatch");
        let fft = if forward { &self.fwd } else { &self.inv };
        let scale = if forward {
            None
        } else {
            Some(T::one() / T::of_usize(n * n * n))
        };

        // x lines: each (y, x) plane is contiguous and holds n row FFTs.
        a.axis_iter_mut(Axis(0)).into_par_iter().for_each(|mut plane| {
            let mut scratch = scratch_for(fft);
            let slice = plane.as_slice_mut().expect("standard layout");
            fft.process_with_scratch(slice, &mut scratch);
        });
        // y lines: columns of each (y, x) plane.
        a.axis_iter_mut(Axis(0)).into_par_iter().for_each(|plane| {
            columns_fft(plane, fft, n, None);
        });
        // z lines: columns of each (z, x) plane.
        a.axis_iter_mut(Axis(1)).into_par_iter().for_each(|plane| {
            columns_fft(plane, fft, n, scale);
        });
    }
}

fn scratch_for<T: Real>(fft: &Arc<dyn Fft<T>>) -> Vec<C<T>> {
    vec![C::new(T::zero(), T::zero()); fft.get_inplace_scratch_len()]
}

/// FFTs the leading-axis lines of an (m, x) plane view through a transposed
/// contiguous buffer.
fn columns_fft<T: Real>(
    mut plane: ArrayViewMut2<'_, C<T>>,
    fft: &Arc<dyn Fft<T>>,
    n: usize,
    scale: Option<T>,
) {
    let mut buf = vec![C::new(T::zero(), T::zero()); n * n];
    let mut scratch = scratch_for(fft);
    for m in 0..n {
        for x in 0..n {
            buf[x * n + m] = plane[(m, x)];
        }
    }
    fft.process_with_scratch(&mut buf, &mut scratch);
    match scale {
        None => {
            for m in 0..n {
                for x in 0..n {
                    plane[(m, x)] = buf[x * n + m];
                }
            }
        }
        Some(s) => {
            for m in 0..n {
                for x in 0..n {
                    plane[(m, x)] = buf[x * n + m] * s;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_cube(n: usize, seed: u64) -> Array3<C<f64>> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        Array3::from_shape_fn((n, n, n), |_| {
            C::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
        })
    }

    fn naive_dft3(a: &Array3<C<f64>>) -> Array3<C<f64>> {
        let n = a.dim().0;
        let mut out = Array3::zeros((n, n, n));
        for kz in 0..n {
            for ky in 0..n {
                for kx in 0..n {
                    let mut acc = C::new(0.0, 0.0);
                    for z in 0..n {
                        for y in 0..n {
                            for x in 0..n {
                                let ph = -2.0 * std::f64::consts::PI / n as f64
                                    * (kx * x + ky * y + kz * z) as f64;
                                acc += a[(z, y, x)] * C::new(ph.cos(), ph.sin());
                            }
                        }
                    }
                    out[(kz, ky, kx)] = acc;
                }
            }
        }
        out
    }

    #[test]
    fn matches_naive_dft() {
        let n = 8;
        let engine = SpectralEngine::<f64>::new(n);
        let a = random_cube(n, 1);
        let want = naive_dft3(&a);
        let mut got = a.clone();
        engine.forward(&mut got);
        for (g, w) in got.iter().zip(want.iter()) {
            assert!((g - w).norm() < 1e-10, "{g} vs {w}");
        }
    }

    #[test]
    fn round_trip_is_identity() {
        let n = 16;
        let engine = SpectralEngine::<f64>::new(n);
        let a = random_cube(n, 2);
        let mut b = a.clone();
        engine.forward(&mut b);
        engine.inverse(&mut b);
        for (x, y) in a.iter().zip(b.iter()) {
            assert!((x - y).norm() < 1e-13);
        }
    }

    #[test]
    fn parseval() {
        let n = 16;
        let engine = SpectralEngine::<f64>::new(n);
        let a = random_cube(n, 3);
        let direct: f64 = a.iter().map(|v| v.norm_sqr()).sum();
        let mut hat = a.clone();
        engine.forward(&mut hat);
        let spectral: f64 = hat.iter().map(|v| v.norm_sqr()).sum::<f64>() / (n * n * n) as f64;
        assert!((direct - spectral).abs() < 1e-10 * direct);
    }
}
