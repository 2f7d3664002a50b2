//! N-component complex grid functions on the periodic box.

use ndarray::Array3;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fft::SpectralEngine;
use crate::grid::GridDescriptor;
use crate::num::{Real, C};

/// Chunk length for deterministic parallel reductions: partial sums are
/// collected per fixed chunk in index order, then folded sequentially, so
/// results do not depend on thread scheduling.
pub(crate) const NODE_CHUNK: usize = 8192;

/// Ordered parallel sum over `0..len` in fixed chunks.
pub(crate) fn par_range_sum<T, F>(len: usize, f: F) -> T
where
    T: Real,
    F: Fn(std::ops::Range<usize>) -> T + Sync + Send,
{
    let ranges: Vec<_> = (0..len)
        .step_by(NODE_CHUNK)
        .map(|s| s..(s + NODE_CHUNK).min(len))
        .collect();
    let partials: Vec<T> = ranges.into_par_iter().map(f).collect();
    partials.into_iter().fold(T::zero(), |a, b| a + b)
}

/// Splits the flat data of all components into lockstep chunks and runs `f`
/// on each chunk in parallel. `f` receives the flat start index and one
/// mutable slice per component.
pub(crate) fn par_node_chunks<T, F>(comps: &mut [Array3<C<T>>], f: F)
where
    T: Real,
    F: Fn(usize, &mut [&mut [C<T>]]) + Sync + Send,
{
    let mut rest: Vec<&mut [C<T>]> = comps
        .iter_mut()
        .map(|a| a.as_slice_mut().expect("standard layout"))
        .collect();
    let len = rest.first().map_or(0, |s| s.len());
    let mut tasks: Vec<(usize, Vec<&mut [C<T>]>)> = Vec::new();
    let mut offset = 0;
    while offset < len {
        let take = NODE_CHUNK.min(len - offset);
        let mut heads = Vec::with_capacity(rest.len());
        for r in rest.iter_mut() {
            let (head, tail) = std::mem::take(r).split_at_mut(take);
            heads.push(head);
            *r = tail;
        }
        tasks.push((offset, heads));
        offset += take;
    }
    tasks.into_par_iter().for_each(|(off, mut heads)| f(off, &mut heads));
}

/// A field u = (u_1, …, u_N) on a periodic grid at one time instant.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldState<T> {
    grid: GridDescriptor<T>,
    time: T,
    components: Vec<Array3<C<T>>>,
}

impl<T: Real> FieldState<T> {
    pub fn zeros(grid: GridDescriptor<T>) -> Self {
        let n = grid.n();
        Self {
            grid,
            time: T::zero(),
            components: (0..grid.n_components()).map(|_| Array3::zeros((n, n, n))).collect(),
        }
    }

    /// Samples `f(component, x, y, z)` on the centered physical grid.
    pub fn from_fn(
        grid: GridDescriptor<T>,
        f: impl Fn(usize, T, T, T) -> C<T> + Sync + Send,
    ) -> Self {
        let mut state = Self::zeros(grid);
        let coords = grid.coords();
        for (j, comp) in state.components.iter_mut().enumerate() {
            let slice = comp.as_slice_mut().expect("standard layout");
            let n = grid.n();
            slice.par_chunks_mut(n * n).enumerate().for_each(|(iz, plane)| {
                let z = coords[iz];
                for iy in 0..n {
                    let y = coords[iy];
                    for ix in 0..n {
                        plane[iy * n + ix] = f(j, coords[ix], y, z);
                    }
                }
            });
        }
        state
    }

    /// Gaussian wave packet u_j = amp_j · e^{−|x−c|²/(2σ²)} · e^{i ξ·x}.
    pub fn gaussian(
        grid: GridDescriptor<T>,
        amplitudes: &[C<T>],
        width: T,
        center: [T; 3],
        phase_xi: [T; 3],
    ) -> Result<Self> {
        if amplitudes.len() != grid.n_components() {
            return Err(Error::DimensionMismatch {
                expected: grid.n_components(),
                got: amplitudes.len(),
            });
        }
        if !(width > T::zero()) {
            return Err(Error::InvalidArgument("gaussian width must be positive".into()));
        }
        Ok(Self::from_fn(grid, |j, x, y, z| {
            let dx = x - center[0];
            let dy = y - center[1];
            let dz = z - center[2];
            let env = (-(dx * dx + dy * dy + dz * dz) / (T::of(2.0) * width * width)).exp();
            let ph = phase_xi[0] * x + phase_xi[1] * y + phase_xi[2] * z;
            amplitudes[j] * C::new(ph.cos(), ph.sin()) * env
        }))
    }

    pub fn grid(&self) -> GridDescriptor<T> {
        self.grid
    }

    pub fn time(&self) -> T {
        self.time
    }

    pub fn set_time(&mut self, t: T) {
        self.time = t;
    }

    pub fn n_components(&self) -> usize {
        self.components.len()
    }

    pub fn component(&self, j: usize) -> &Array3<C<T>> {
        &self.components[j]
    }

    pub fn component_mut(&mut self, j: usize) -> &mut Array3<C<T>> {
        &mut self.components[j]
    }

    pub fn components(&self) -> &[Array3<C<T>>] {
        &self.components
    }

    pub fn components_mut(&mut self) -> &mut [Array3<C<T>>] {
        &mut self.components
    }

    pub fn same_grid(&self, other: &Self) -> Result<()> {
        if self.grid != other.grid {
            return Err(Error::InvalidArgument("grids do not match".into()));
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        self.components.iter().all(|a| {
            let s = a.as_slice().expect("standard layout");
            s.par_chunks(NODE_CHUNK)
                .all(|c| c.iter().all(|v| v.re.is_finite() && v.im.is_finite()))
        })
    }

    /// Σ_j ∫ |u_j|² dx on the grid.
    pub fn l2_norm_sq(&self) -> T {
        let cell = self.grid.cell_volume();
        let mut acc = T::zero();
        for a in &self.components {
            let s = a.as_slice().expect("standard layout");
            acc += par_range_sum(s.len(), |r| {
                s[r].iter().map(|v| v.norm_sqr()).fold(T::zero(), |x, y| x + y)
            });
        }
        acc * cell
    }

    /// ‖u − v‖_{L²} / ‖v‖_{L²} over all components.
    pub fn rel_l2_distance(&self, other: &Self) -> T {
        let mut num = T::zero();
        let mut den = T::zero();
        for (a, b) in self.components.iter().zip(&other.components) {
            let sa = a.as_slice().expect("standard layout");
            let sb = b.as_slice().expect("standard layout");
            num += par_range_sum(sa.len(), |r| {
                r.clone()
                    .map(|i| (sa[i] - sb[i]).norm_sqr())
                    .fold(T::zero(), |x, y| x + y)
            });
            den += par_range_sum(sb.len(), |r| {
                r.clone().map(|i| sb[i].norm_sqr()).fold(T::zero(), |x, y| x + y)
            });
        }
        (num / den).sqrt()
    }

    /// ‖u(t)‖_{(L⁴)^N} = (Σ_j ‖u_j‖²_{L⁴})^{1/2}.
    pub fn l4_norm(&self) -> T {
        let cell = self.grid.cell_volume();
        let mut acc = T::zero();
        for a in &self.components {
            let s = a.as_slice().expect("standard layout");
            let q: T = par_range_sum(s.len(), |r| {
                s[r].iter()
                    .map(|v| {
                        let d = v.norm_sqr();
                        d * d
                    })
                    .fold(T::zero(), |x, y| x + y)
            });
            acc += (q * cell).sqrt();
        }
        acc.sqrt()
    }

    /// In-place multiplication of every component by the plane-wave phase
    /// e^{i x·ξ} (the instantaneous Galilean boost).
    pub fn multiply_phase(&mut self, xi: [T; 3]) {
        let coords = self.grid.coords();
        let n = self.grid.n();
        for comp in &mut self.components {
            let slice = comp.as_slice_mut().expect("standard layout");
            slice.par_chunks_mut(n * n).enumerate().for_each(|(iz, plane)| {
                let pz = coords[iz] * xi[2];
                for iy in 0..n {
                    let py = coords[iy] * xi[1] + pz;
                    for ix in 0..n {
                        let ph = coords[ix] * xi[0] + py;
                        plane[iy * n + ix] = plane[iy * n + ix] * C::new(ph.cos(), ph.sin());
                    }
                }
            });
        }
    }

    /// Multiplies every component by a constant phase e^{iθ}.
    pub fn rotate_global_phase(&mut self, theta: T) {
        let rot = C::new(theta.cos(), theta.sin());
        for comp in &mut self.components {
            let slice = comp.as_slice_mut().expect("standard layout");
            slice.par_chunks_mut(NODE_CHUNK).for_each(|chunk| {
                for v in chunk {
                    *v = *v * rot;
                }
            });
        }
    }

    /// Scales the whole field by a real factor.
    pub fn scale(&mut self, factor: T) {
        for comp in &mut self.components {
            let slice = comp.as_slice_mut().expect("standard layout");
            slice.par_chunks_mut(NODE_CHUNK).for_each(|chunk| {
                for v in chunk {
                    *v = *v * factor;
                }
            });
        }
    }

    /// Exact periodic translation u(x) ← u(x − delta) via spectral shift.
    pub fn spectral_shift(&mut self, engine: &SpectralEngine<T>, delta: [T; 3]) {
        let grid = self.grid;
        let n = grid.n();
        let phase: Vec<[C<T>; 3]> = (0..n)
            .map(|i| {
                let mut out = [C::new(T::zero(), T::zero()); 3];
                for (d, slot) in out.iter_mut().enumerate() {
                    let ang = -grid.wavenumber(i) * delta[d];
                    *slot = C::new(ang.cos(), ang.sin());
                }
                out
            })
            .collect();
        for comp in &mut self.components {
            engine.forward(comp);
            let slice = comp.as_slice_mut().expect("standard layout");
            slice.par_chunks_mut(n * n).enumerate().for_each(|(kz, plane)| {
                let fz = phase[kz][2];
                for ky in 0..n {
                    let fyz = phase[ky][1] * fz;
                    for kx in 0..n {
                        plane[ky * n + kx] = plane[ky * n + kx] * phase[kx][0] * fyz;
                    }
                }
            });
            engine.inverse(comp);
        }
    }

    /// Spectral gradient (∂_x, ∂_y, ∂_z) of component `j`. First derivatives
    /// use the odd-derivative convention (Nyquist mode zeroed).
    pub fn gradient(&self, engine: &SpectralEngine<T>, j: usize) -> [Array3<C<T>>; 3] {
        let grid = self.grid;
        let n = grid.n();
        let mut hat = self.components[j].clone();
        engine.forward(&mut hat);
        let k: Vec<T> = (0..n).map(|i| grid.wavenumber_odd(i)).collect();
        let hat_slice = hat.as_slice().expect("standard layout");
        let mut out: Vec<Array3<C<T>>> = Vec::with_capacity(3);
        for dir in 0..3 {
            let mut d = Array3::zeros((n, n, n));
            {
                let ds = d.as_slice_mut().expect("standard layout");
                ds.par_chunks_mut(n * n).enumerate().for_each(|(kz, plane)| {
                    for ky in 0..n {
                        for kx in 0..n {
                            let kv = match dir {
                                0 => k[kx],
                                1 => k[ky],
                                _ => k[kz],
                            };
                            let src = hat_slice[(kz * n + ky) * n + kx];
                            plane[ky * n + kx] = C::new(-src.im, src.re) * kv;
                        }
                    }
                });
            }
            engine.inverse(&mut d);
            out.push(d);
        }
        out.try_into().expect("three directions")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid() -> GridDescriptor<f64> {
        GridDescriptor::new(16, 8.0, 2).unwrap()
    }

    #[test]
    fn gaussian_l2_norm_matches_closed_form() {
        let g = GridDescriptor::new(32, 16.0, 1).unwrap();
        let sigma = 1.2f64;
        let u = FieldState::gaussian(g, &[C::new(0.8, 0.0)], sigma, [0.0; 3], [0.0; 3]).unwrap();
        let want = 0.8f64.powi(2) * (std::f64::consts::PI * sigma * sigma).powf(1.5);
        let got = u.l2_norm_sq();
        assert!((got - want).abs() < 1e-8 * want, "{got} vs {want}");
    }

    #[test]
    fn phase_rotation_preserves_norm() {
        let mut u =
            FieldState::gaussian(grid(), &[C::new(1.0, 0.0), C::new(0.0, 0.5)], 1.0, [0.0; 3], [
                0.0; 3
            ])
            .unwrap();
        let before = u.l2_norm_sq();
        u.rotate_global_phase(0.7);
        assert!((u.l2_norm_sq() - before).abs() < 1e-13 * before);
    }

    #[test]
    fn spectral_shift_matches_resampling() {
        let g = GridDescriptor::new(16, 8.0, 1).unwrap();
        let engine = SpectralEngine::new(16);
        // Shift by exactly two grid cells: spectral shift must equal index rotation.
        let dx = g.dx();
        let u = FieldState::from_fn(g, |_, x, y, z| {
            C::new((0.3 * x).sin() * (0.7 * y).cos(), (0.2 * z).sin())
        });
        let mut shifted = u.clone();
        shifted.spectral_shift(&engine, [2.0 * dx, 0.0, 0.0]);
        for iz in 0..16 {
            for iy in 0..16 {
                for ix in 0..16 {
                    let src = u.component(0)[(iz, iy, (ix + 16 - 2) % 16)];
                    let dst = shifted.component(0)[(iz, iy, ix)];
                    assert!((src - dst).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn gradient_of_plane_wave() {
        let g = GridDescriptor::new(16, 2.0 * std::f64::consts::PI, 1).unwrap();
        let engine = SpectralEngine::new(16);
        let u = FieldState::from_fn(g, |_, x, y, _| {
            let ph = 3.0 * x - 2.0 * y;
            C::new(ph.cos(), ph.sin())
        });
        let grad = u.gradient(&engine, 0);
        for iz in 0..16 {
            for iy in 0..16 {
                for ix in 0..16 {
                    let v = u.component(0)[(iz, iy, ix)];
                    let gx = grad[0][(iz, iy, ix)];
                    let gy = grad[1][(iz, iy, ix)];
                    let gz = grad[2][(iz, iy, ix)];
                    assert!((gx - v * C::new(0.0, 3.0)).norm() < 1e-10);
                    assert!((gy - v * C::new(0.0, -2.0)).norm() < 1e-10);
                    assert!(gz.norm() < 1e-10);
                }
            }
        }
    }
}
