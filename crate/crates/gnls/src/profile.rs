//! The scalar radial ground state Q of −ΔQ + Q = Q³ on ℝ³.
//!
//! Q is computed by bisection shooting on Q(0): trajectories below the
//! ground-state value turn around and diverge to +∞, trajectories above it
//! cross zero, and the ground state is the separatrix. The raw trajectory is
//! kept only up to a switch radius (separatrix tracking degrades like e^{+r}
//! in finite precision); beyond it the profile is completed with the exact
//! far-field form c·e^{−r}/r, which is accurate to O(e^{−2r}) relative.

use crate::error::{Error, Result};
use crate::num::Real;

/// Uniform radial sampling of Q with derivative and cached integrals.
#[derive(Debug, Clone)]
pub struct RadialProfile<T> {
    h: T,
    r_max: T,
    q: Vec<T>,
    qp: Vec<T>,
    far_amp: T,
    integrals: ProfileIntegrals<T>,
}

/// ∫ over ℝ³ with the 4πr² weight, by trapezoid on the radial grid.
#[derive(Debug, Clone, Copy)]
pub struct ProfileIntegrals<T> {
    /// ∫ Q² dx
    pub l2: T,
    /// ∫ |∇Q|² dx
    pub grad2: T,
    /// ∫ Q⁴ dx
    pub l4: T,
}

/// Radial step of the shooting integrator.
const RK_STEP: f64 = 1e-3;
/// Radius beyond which the trajectory is replaced by the far field.
const SWITCH_RADIUS: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shot {
    /// Q turned upward while still positive: Q(0) below the ground state.
    Diverged,
    /// Q crossed zero: Q(0) above the ground state.
    Crossed,
    /// No event before the integration cap (numerically on the separatrix).
    Decayed,
}

fn rhs<T: Real>(r: T, q: T, p: T) -> (T, T) {
    let nl = q - q * q * q;
    if r < T::of(1e-12) {
        (p, nl / T::of(3.0))
    } else {
        (p, nl - T::of(2.0) / r * p)
    }
}

fn rk4_step<T: Real>(r: T, q: T, p: T, h: T) -> (T, T) {
    let half = T::of(0.5);
    let (k1q, k1p) = rhs(r, q, p);
    let (k2q, k2p) = rhs(r + half * h, q + half * h * k1q, p + half * h * k1p);
    let (k3q, k3p) = rhs(r + half * h, q + half * h * k2q, p + half * h * k2p);
    let (k4q, k4p) = rhs(r + h, q + h * k3q, p + h * k3p);
    let sixth = h / T::of(6.0);
    (
        q + sixth * (k1q + T::of(2.0) * (k2q + k3q) + k4q),
        p + sixth * (k1p + T::of(2.0) * (k2p + k3p) + k4p),
    )
}

fn classify<T: Real>(q0: T, r_stop: T, h: T) -> Shot {
    let mut r = T::zero();
    let mut q = q0;
    let mut p = T::zero();
    let mut step = 0usize;
    while r < r_stop {
        let (qn, pn) = rk4_step(r, q, p, h);
        step += 1;
        r = T::of_usize(step) * h;
        q = qn;
        p = pn;
        if q <= T::zero() {
            return Shot::Crossed;
        }
        if p > T::zero() {
            return Shot::Diverged;
        }
    }
    Shot::Decayed
}

/// Solves the scalar radial equation by bisection shooting.
///
/// `tol` is the requested accuracy of Q(0); `r_max` is the stored profile
/// radius. The profile must decay to 1e-8 of its peak by `r_max`, which
/// requires r_max ≳ 16.
pub fn solve_scalar_q<T: Real>(tol: T, r_max: T) -> Result<RadialProfile<T>> {
    if !(tol > T::zero()) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let floor = T::epsilon() * T::of(1e3);
    if tol < floor {
        return Err(Error::Resolution { tol: tol.to_f64(), floor: floor.to_f64() });
    }
    if !(r_max >= T::of(12.0)) {
        return Err(Error::InvalidArgument(
            "profile radius must be at least 12 for the far-field completion".into(),
        ));
    }

    let h = T::of(RK_STEP);
    let r_stop = (r_max + T::of(4.0)).max(T::of(20.0));
    let mut lo = T::one();
    let mut hi = T::of(8.0);
    if classify(lo, r_stop, h) != Shot::Diverged || classify(hi, r_stop, h) != Shot::Crossed {
        return Err(Error::BracketNotFound { lo: lo.to_f64(), hi: hi.to_f64() });
    }
    let width_target = (tol * T::of(1e-2)).max(T::epsilon() * T::of(8.0));
    for _ in 0..200 {
        if hi - lo <= width_target {
            break;
        }
        let mid = (lo + hi) * T::of(0.5);
        if mid <= lo || mid >= hi {
            break; // bisection exhausted the mantissa
        }
        match classify(mid, r_stop, h) {
            Shot::Crossed => hi = mid,
            Shot::Diverged | Shot::Decayed => lo = mid,
        }
    }
    let q0 = (lo + hi) * T::of(0.5);

    RadialProfile::from_shot(q0, h, r_max)
}

impl<T: Real> RadialProfile<T> {
    fn from_shot(q0: T, h: T, r_max: T) -> Result<Self> {
        let switch = T::of(SWITCH_RADIUS).min(r_max - T::of(2.0));
        let n_switch = (switch / h).to_f64().round() as usize;
        let n_total = (r_max / h).to_f64().round() as usize;

        let mut q = Vec::with_capacity(n_total + 1);
        let mut qp = Vec::with_capacity(n_total + 1);
        q.push(q0);
        qp.push(T::zero());
        let mut cur = (q0, T::zero());
        for i in 0..n_switch {
            let r = T::of_usize(i) * h;
            cur = rk4_step(r, cur.0, cur.1, h);
            q.push(cur.0);
            qp.push(cur.1);
        }

        // Far-field completion c·e^{−r}/r matched at the switch radius.
        let r_switch = T::of_usize(n_switch) * h;
        let far_amp = q[n_switch] * r_switch * r_switch.exp();
        for i in (n_switch + 1)..=n_total {
            let r = T::of_usize(i) * h;
            let e = (-r).exp() / r;
            q.push(far_amp * e);
            qp.push(-far_amp * e * (T::one() + T::one() / r));
        }

        let profile = Self {
            h,
            r_max: T::of_usize(n_total) * h,
            q,
            qp,
            far_amp,
            integrals: ProfileIntegrals { l2: T::zero(), grad2: T::zero(), l4: T::zero() },
        };
        profile.validated()
    }

    fn validated(mut self) -> Result<Self> {
        let q0 = self.q[0];
        if self.q.iter().any(|&v| !(v > T::zero())) {
            return Err(Error::InternalCheck("profile must stay positive".into()));
        }
        if self.q.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InternalCheck("profile must be strictly decreasing".into()));
        }
        let edge_ratio = (self.q[self.q.len() - 1] / q0).to_f64();
        if edge_ratio > 1e-8 {
            return Err(Error::Truncation { ratio: edge_ratio, max_ratio: 1e-8 });
        }

        let weight = |f: &dyn Fn(usize) -> T| -> T {
            // trapezoid with the 4πr² weight; the r=0 node has zero weight
            let mut acc = T::zero();
            for i in 0..self.q.len() {
                let r = T::of_usize(i) * self.h;
                let w = if i == 0 || i == self.q.len() - 1 { T::of(0.5) } else { T::one() };
                acc += w * f(i) * r * r;
            }
            acc * self.h * T::of(4.0) * T::PI()
        };
        let q = &self.q;
        let qp = &self.qp;
        self.integrals = ProfileIntegrals {
            l2: weight(&|i| q[i] * q[i]),
            grad2: weight(&|i| qp[i] * qp[i]),
            l4: weight(&|i| {
                let s = q[i] * q[i];
                s * s
            }),
        };

        let grad_ratio = (self.integrals.grad2 / self.integrals.l2).to_f64();
        let quartic_ratio = (self.integrals.l4 / self.integrals.l2).to_f64();
        if (grad_ratio - 3.0).abs() > 3.0 * 1e-5 || (quartic_ratio - 4.0).abs() > 4.0 * 1e-5 {
            return Err(Error::InternalCheck(format!(
                "scaling identities violated: grad2/l2 = {grad_ratio}, l4/l2 = {quartic_ratio}"
            )));
        }
        Ok(self)
    }

    pub fn q0(&self) -> T {
        self.q[0]
    }

    pub fn r_max(&self) -> T {
        self.r_max
    }

    pub fn integrals(&self) -> ProfileIntegrals<T> {
        self.integrals
    }

    pub fn far_amplitude(&self) -> T {
        self.far_amp
    }

    pub fn samples(&self) -> impl Iterator<Item = (T, T)> + '_ {
        self.q.iter().enumerate().map(|(i, &v)| (T::of_usize(i) * self.h, v))
    }

    /// Q(|r|), by cubic interpolation inside the sampled range and the
    /// far-field form beyond it.
    pub fn value_at(&self, r: T) -> T {
        let r = r.abs();
        if r >= self.r_max {
            return self.far_amp * (-r).exp() / r;
        }
        let s = r / self.h;
        let i = s.floor().to_f64() as usize;
        let t = s - T::of_usize(i);
        // Catmull-Rom on the uniform grid; evenness of Q supplies q[-1] = q[1].
        let pm1 = if i == 0 { self.q[1] } else { self.q[i - 1] };
        let p0 = self.q[i];
        let p1 = self.q[(i + 1).min(self.q.len() - 1)];
        let p2 = self.q[(i + 2).min(self.q.len() - 1)];
        let half = T::of(0.5);
        let two = T::of(2.0);
        let three = T::of(3.0);
        let a = two * p0;
        let b = p1 - pm1;
        let c = two * pm1 - T::of(5.0) * p0 + T::of(4.0) * p1 - p2;
        let d = -pm1 + three * (p0 - p1) + p2;
        half * (a + b * t + c * t * t + d * t * t * t)
    }
}
