//! Gauge-invariant quartic polynomials over ℂᴺ and the cubic nonlinearities
//! they generate.
//!
//! A nonlinearity table stores real coefficients on degree-(2,2) monomials
//! z^α z̄^β with |α| = |β| = 2. Equal holomorphic/antiholomorphic degree makes
//! g invariant under a simultaneous phase rotation of all components, and
//! real-valuedness pairs each (α, β) with its mirror (β, α) at the same
//! coefficient. The nonlinearity acting on component j is F_j = ½ ∂_{z̄_j} g.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::num::{Real, C};

/// Exponent pair (α, β) of a monomial z^α z̄^β with |α| = |β| = 2.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiIndexPair {
    alpha: Vec<u8>,
    beta: Vec<u8>,
}

impl MultiIndexPair {
    pub fn new(alpha: Vec<u8>, beta: Vec<u8>) -> Result<Self> {
        if alpha.is_empty() || alpha.len() != beta.len() {
            return Err(Error::InvalidPolynomial(format!(
                "exponent vectors must be nonempty and of equal length, got {} and {}",
                alpha.len(),
                beta.len()
            )));
        }
        let (da, db) = (
            alpha.iter().map(|&p| p as u32).sum::<u32>(),
            beta.iter().map(|&p| p as u32).sum::<u32>(),
        );
        if da != 2 || db != 2 {
            return Err(Error::InvalidPolynomial(format!(
                "|alpha| = {da} and |beta| = {db}; both must equal 2 \
                 (quartic with equal holomorphic/antiholomorphic degree)"
            )));
        }
        Ok(Self { alpha, beta })
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    pub fn alpha(&self) -> &[u8] {
        &self.alpha
    }

    pub fn beta(&self) -> &[u8] {
        &self.beta
    }

    /// The realness partner (β, α).
    pub fn mirrored(&self) -> Self {
        Self { alpha: self.beta.clone(), beta: self.alpha.clone() }
    }

    /// Whether this pair is the stored representative of its realness pair.
    pub fn is_canonical(&self) -> bool {
        (&self.alpha, &self.beta) <= (&self.beta, &self.alpha)
    }

    fn canonicalized(self) -> Self {
        if self.is_canonical() {
            self
        } else {
            self.mirrored()
        }
    }
}

/// Real-coefficient quartic polynomial g: ℂᴺ → ℝ satisfying the gauge
/// condition, stored as a canonical coefficient table.
///
/// Only the lexicographically-least member of each realness pair
/// {(α,β), (β,α)} is stored; evaluation materializes both members.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugePolynomial<T> {
    n: usize,
    terms: BTreeMap<MultiIndexPair, T>,
}

impl<T: Real> GaugePolynomial<T> {
    /// Builds a polynomial from (not necessarily canonical) terms.
    ///
    /// Mirror pairs are folded onto their canonical representative; a pair
    /// supplied with two inconsistent coefficients is a realness violation.
    /// Zero coefficients are dropped.
    pub fn new(
        n_components: usize,
        terms: impl IntoIterator<Item = (MultiIndexPair, T)>,
    ) -> Result<Self> {
        if n_components == 0 {
            return Err(Error::InvalidPolynomial(
                "component count must be at least 1".into(),
            ));
        }
        let mut table: BTreeMap<MultiIndexPair, T> = BTreeMap::new();
        let mut seen: std::collections::HashSet<MultiIndexPair> = std::collections::HashSet::new();
        for (pair, coeff) in terms {
            if pair.len() != n_components {
                return Err(Error::InvalidPolynomial(format!(
                    "term has {} components, polynomial has {}",
                    pair.len(),
                    n_components
                )));
            }
            if !coeff.is_finite() {
                return Err(Error::InvalidPolynomial("non-finite coefficient".into()));
            }
            if !seen.insert(pair.clone()) {
                return Err(Error::InvalidPolynomial(format!(
                    "duplicate term ({:?}|{:?})",
                    pair.alpha(),
                    pair.beta()
                )));
            }
            let canon = pair.canonicalized();
            match table.get(&canon) {
                None => {
                    table.insert(canon, coeff);
                }
                Some(&existing) => {
                    // The mirror orientation is legal input but realness
                    // forces it to carry the same coefficient.
                    let rel = (existing - coeff).abs()
                        / T::one().max(existing.abs().max(coeff.abs()));
                    if rel > T::of(1e-12) {
                        return Err(Error::InvalidPolynomial(format!(
                            "realness violation: pair ({:?}|{:?}) and its mirror carry \
                             coefficients {} and {}",
                            canon.alpha(),
                            canon.beta(),
                            existing,
                            coeff
                        )));
                    }
                }
            }
        }
        table.retain(|_, c| *c != T::zero());
        Ok(Self { n: n_components, terms: table })
    }

    /// The zero polynomial (free evolution).
    pub fn zero(n_components: usize) -> Self {
        Self { n: n_components, terms: BTreeMap::new() }
    }

    /// g(z) = (Σ_j |z_j|²)², the vector cubic nonlinearity.
    pub fn manakov(n_components: usize) -> Self {
        let mut terms = Vec::new();
        for j in 0..n_components {
            let mut e = vec![0u8; n_components];
            e[j] = 2;
            terms.push((
                MultiIndexPair::new(e.clone(), e).expect("valid index"),
                T::one(),
            ));
        }
        for j in 0..n_components {
            for k in (j + 1)..n_components {
                let mut e = vec![0u8; n_components];
                e[j] = 1;
                e[k] = 1;
                terms.push((
                    MultiIndexPair::new(e.clone(), e).expect("valid index"),
                    T::of(2.0),
                ));
            }
        }
        Self::new(n_components, terms).expect("preset is valid")
    }

    /// The spin-1 condensate nonlinearity on ℂ³:
    /// g = a ρ² + b ((|z₁|²−|z₃|²)² + 2|z₂|²(|z₁|²+|z₃|²) + 4 Re(z̄₁ z₂² z̄₃)).
    pub fn spinor(a: T, b: T) -> Self {
        let two = T::of(2.0);
        let idx = |al: [u8; 3], be: [u8; 3]| {
            MultiIndexPair::new(al.to_vec(), be.to_vec()).expect("valid index")
        };
        let terms = vec![
            (idx([2, 0, 0], [2, 0, 0]), a + b),
            (idx([0, 2, 0], [0, 2, 0]), a),
            (idx([0, 0, 2], [0, 0, 2]), a + b),
            (idx([1, 1, 0], [1, 1, 0]), two * (a + b)),
            (idx([1, 0, 1], [1, 0, 1]), two * (a - b)),
            (idx([0, 1, 1], [0, 1, 1]), two * (a + b)),
            (idx([0, 2, 0], [1, 0, 1]), two * b),
        ];
        Self::new(3, terms).expect("preset is valid")
    }

    pub fn n_components(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Canonical terms, in the fixed storage order.
    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndexPair, T)> + '_ {
        self.terms.iter().map(|(p, &c)| (p, c))
    }

    /// All monomials including mirror partners of asymmetric pairs.
    pub fn materialized(&self) -> impl Iterator<Item = (MultiIndexPair, T)> + '_ {
        self.terms.iter().flat_map(|(p, &c)| {
            let mirror = (p.alpha() != p.beta()).then(|| (p.mirrored(), c));
            std::iter::once((p.clone(), c)).chain(mirror)
        })
    }

    /// The polynomial c·g.
    pub fn scaled(&self, factor: T) -> Self {
        let mut out = self.clone();
        out.terms.retain(|_, c| {
            *c *= factor;
            *c != T::zero()
        });
        out
    }

    /// Σ |c| over materialized terms; bounds |g(z)| ≤ sum · |z|⁴ on ℂᴺ.
    pub fn coefficient_abs_sum(&self) -> T {
        self.materialized().map(|(_, c)| c.abs()).sum()
    }

    fn check_dim(&self, z: &[C<T>]) -> Result<()> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: z.len() });
        }
        Ok(())
    }

    /// Evaluates g(z).
    ///
    /// The complex accumulation must come out real; the imaginary part is
    /// checked against rounding scale and discarded.
    pub fn eval(&self, z: &[C<T>]) -> Result<T> {
        self.check_dim(z)?;
        let mut acc = C::new(T::zero(), T::zero());
        for (pair, coeff) in self.materialized() {
            acc = acc + monomial(&pair, z) * coeff;
        }
        debug_assert!(
            acc.im.abs() <= T::of(1e-12) * (T::one() + acc.re.abs()),
            "imaginary residue {} exceeds rounding scale",
            acc.im
        );
        Ok(acc.re)
    }

    /// Evaluates the nonlinearity F(z), component j given by ½ ∂_{z̄_j} g.
    pub fn nonlinearity(&self, z: &[C<T>]) -> Result<Vec<C<T>>> {
        self.check_dim(z)?;
        let mut out = vec![C::new(T::zero(), T::zero()); self.n];
        self.nonlinearity_into(z, &mut out);
        Ok(out)
    }

    /// Like [`Self::nonlinearity`] but without allocation or dimension checks.
    pub(crate) fn nonlinearity_into(&self, z: &[C<T>], out: &mut [C<T>]) {
        let half = T::of(0.5);
        out.fill(C::new(T::zero(), T::zero()));
        for (pair, coeff) in self.materialized() {
            for j in 0..self.n {
                let bj = pair.beta()[j];
                if bj == 0 {
                    continue;
                }
                // ∂_{z̄_j} of z^α z̄^β, evaluated term-by-term.
                let mut v = C::new(coeff * half * T::of_usize(bj as usize), T::zero());
                for k in 0..self.n {
                    let a = pair.alpha()[k];
                    if a > 0 {
                        v = v * z[k].powu(a as u32);
                    }
                    let b = if k == j { pair.beta()[k] - 1 } else { pair.beta()[k] };
                    if b > 0 {
                        v = v * z[k].conj().powu(b as u32);
                    }
                }
                out[j] = out[j] + v;
            }
        }
    }

    /// Directional derivative of g at z along dz: 4 Σ_j Re(F_j(z) conj(dz_j)).
    ///
    /// With dz = ∂_k u this is the chain-rule factor ∂_k g(u(x)); with dz = z
    /// it reduces to 4 g(z) by Euler's homogeneous function theorem.
    pub fn directional_derivative(&self, z: &[C<T>], dz: &[C<T>]) -> Result<T> {
        self.check_dim(z)?;
        self.check_dim(dz)?;
        let f = self.nonlinearity(z)?;
        let mut acc = T::zero();
        for j in 0..self.n {
            acc += (f[j] * dz[j].conj()).re;
        }
        Ok(T::of(4.0) * acc)
    }

    /// Samples random (z, θ) pairs and measures |g(e^{iθ} z) − g(z)|.
    pub fn check_gauge_invariance(&self, trials: usize, seed: u64) -> IdentityReport<T> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6a75);
        let mut report = IdentityReport::new(trials);
        for _ in 0..trials {
            let z = random_state::<T>(&mut rng, self.n);
            let theta = T::of(rng.random_range(0.0..std::f64::consts::TAU));
            let rot = C::new(theta.cos(), theta.sin());
            let zr: Vec<C<T>> = z.iter().map(|&v| v * rot).collect();
            let g0 = self.eval(&z).expect("dims match");
            let g1 = self.eval(&zr).expect("dims match");
            report.record((g1 - g0).abs(), T::of(1e-10) * (T::one() + g0.abs()));
        }
        report
    }

    /// Samples random z and measures |Σ_j Im(F_j(z) conj(z_j))|, which must
    /// vanish for any gauge-invariant table (it is the pointwise identity
    /// behind mass conservation).
    pub fn check_charge_identity(&self, trials: usize, seed: u64) -> IdentityReport<T> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x6368);
        let mut report = IdentityReport::new(trials);
        for _ in 0..trials {
            let z = random_state::<T>(&mut rng, self.n);
            let f = self.nonlinearity(&z).expect("dims match");
            let imbalance: T = (0..self.n).map(|j| (f[j] * z[j].conj()).im).sum();
            let norm2: T = z.iter().map(|v| v.norm_sqr()).sum();
            report.record(imbalance.abs(), T::of(1e-10) * (T::one() + norm2 * norm2));
        }
        report
    }
}

fn monomial<T: Real>(pair: &MultiIndexPair, z: &[C<T>]) -> C<T> {
    let mut v = C::new(T::one(), T::zero());
    for (k, zk) in z.iter().enumerate() {
        let a = pair.alpha()[k];
        if a > 0 {
            v = v * zk.powu(a as u32);
        }
        let b = pair.beta()[k];
        if b > 0 {
            v = v * zk.conj().powu(b as u32);
        }
    }
    v
}

/// Uniform-in-box complex state with a random overall radius in [0, 2].
pub(crate) fn random_state<T: Real>(rng: &mut impl Rng, n: usize) -> Vec<C<T>> {
    let radius = rng.random_range(0.0..2.0);
    (0..n)
        .map(|_| {
            C::new(
                T::of(radius * rng.random_range(-1.0..1.0)),
                T::of(radius * rng.random_range(-1.0..1.0)),
            )
        })
        .collect()
}

/// Outcome of a randomized structural identity check.
#[derive(Debug, Clone, Serialize)]
pub struct IdentityReport<T> {
    pub trials: usize,
    /// Largest absolute deviation seen.
    pub max_deviation: T,
    /// Tolerance at the worst trial.
    pub tolerance_at_worst: T,
    pub passed: bool,
}

impl<T: Real> IdentityReport<T> {
    fn new(trials: usize) -> Self {
        Self {
            trials,
            max_deviation: T::zero(),
            tolerance_at_worst: T::infinity(),
            passed: true,
        }
    }

    fn record(&mut self, deviation: T, tolerance: T) {
        if deviation > self.max_deviation {
            self.max_deviation = deviation;
            self.tolerance_at_worst = tolerance;
        }
        if deviation > tolerance {
            self.passed = false;
        }
    }
}

/// Serialization schema: `{"n": N, "terms": [{"alpha": .., "beta": .., "coeff": ..}]}`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialTable {
    pub n: usize,
    pub terms: Vec<PolynomialTerm>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolynomialTerm {
    pub alpha: Vec<u8>,
    pub beta: Vec<u8>,
    pub coeff: f64,
}

impl<T: Real> GaugePolynomial<T> {
    pub fn to_table(&self) -> PolynomialTable {
        PolynomialTable {
            n: self.n,
            terms: self
                .terms()
                .map(|(p, c)| PolynomialTerm {
                    alpha: p.alpha().to_vec(),
                    beta: p.beta().to_vec(),
                    coeff: c.to_f64(),
                })
                .collect(),
        }
    }

    pub fn from_table(table: &PolynomialTable) -> Result<Self> {
        let terms = table
            .terms
            .iter()
            .map(|t| {
                MultiIndexPair::new(t.alpha.clone(), t.beta.clone())
                    .map(|p| (p, T::of(t.coeff)))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(table.n, terms)
    }
}

impl<T: Real> Serialize for GaugePolynomial<T> {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_table().serialize(s)
    }
}

impl<'de, T: Real> Deserialize<'de> for GaugePolynomial<T> {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let table = PolynomialTable::deserialize(d)?;
        Self::from_table(&table).map_err(serde::de::Error::custom)
    }
}

/// Flattened evaluation plan for the pointwise hot loops of the integrator.
///
/// Monomials are expressed as factor lists over per-component power tables,
/// and the Wirtinger-derivative terms of each F_j are prefolded, so a node
/// evaluation is a short run of complex multiplies with no branching on the
/// exponent table.
#[derive(Debug, Clone)]
pub struct CompiledPoly<T> {
    n: usize,
    f_terms: Vec<Vec<PlanTerm<T>>>,
    /// Canonical terms only; coefficients pre-doubled for asymmetric pairs so
    /// g(z) = Σ coeff · Re(∏ factors).
    g_terms: Vec<PlanTerm<T>>,
}

#[derive(Debug, Clone)]
struct PlanTerm<T> {
    coeff: T,
    factors: SmallVec<[PlanFactor; 4]>,
}

#[derive(Debug, Clone, Copy)]
struct PlanFactor {
    comp: u8,
    pow: u8,
    conj: bool,
}

impl<T: Real> CompiledPoly<T> {
    pub fn new(poly: &GaugePolynomial<T>) -> Self {
        let n = poly.n_components();
        let half = T::of(0.5);
        let mut f_terms: Vec<Vec<PlanTerm<T>>> = vec![Vec::new(); n];
        for (pair, coeff) in poly.materialized() {
            for j in 0..n {
                let bj = pair.beta()[j];
                if bj == 0 {
                    continue;
                }
                let mut factors = SmallVec::new();
                for k in 0..n {
                    let a = pair.alpha()[k];
                    if a > 0 {
                        factors.push(PlanFactor { comp: k as u8, pow: a, conj: false });
                    }
                    let b = if k == j { pair.beta()[k] - 1 } else { pair.beta()[k] };
                    if b > 0 {
                        factors.push(PlanFactor { comp: k as u8, pow: b, conj: true });
                    }
                }
                f_terms[j].push(PlanTerm {
                    coeff: coeff * half * T::of_usize(bj as usize),
                    factors,
                });
            }
        }
        let mut g_terms = Vec::new();
        for (pair, coeff) in poly.terms() {
            let mut factors = SmallVec::new();
            for k in 0..n {
                let a = pair.alpha()[k];
                if a > 0 {
                    factors.push(PlanFactor { comp: k as u8, pow: a, conj: false });
                }
                let b = pair.beta()[k];
                if b > 0 {
                    factors.push(PlanFactor { comp: k as u8, pow: b, conj: true });
                }
            }
            let doubled = if pair.alpha() == pair.beta() { coeff } else { coeff + coeff };
            g_terms.push(PlanTerm { coeff: doubled, factors });
        }
        Self { n, f_terms, g_terms }
    }

    /// Evaluates g(z) without allocation.
    #[inline]
    pub fn eval_g(&self, z: &[C<T>]) -> T {
        debug_assert_eq!(z.len(), self.n);
        let mut acc = T::zero();
        for term in &self.g_terms {
            let mut v = C::new(T::one(), T::zero());
            for f in &term.factors {
                let mut zk = z[f.comp as usize];
                if f.conj {
                    zk = zk.conj();
                }
                v = v * if f.pow == 2 { zk * zk } else { zk };
            }
            acc += term.coeff * v.re;
        }
        acc
    }

    pub fn n_components(&self) -> usize {
        self.n
    }

    /// Writes F(z) into `out`; lengths must equal the component count.
    #[inline]
    pub fn nonlinearity_into(&self, z: &[C<T>], out: &mut [C<T>]) {
        debug_assert_eq!(z.len(), self.n);
        debug_assert_eq!(out.len(), self.n);
        for (j, terms) in self.f_terms.iter().enumerate() {
            let mut acc = C::new(T::zero(), T::zero());
            for term in terms {
                let mut v = C::new(term.coeff, T::zero());
                for f in &term.factors {
                    let mut zk = z[f.comp as usize];
                    if f.conj {
                        zk = zk.conj();
                    }
                    v = v * if f.pow == 2 { zk * zk } else { zk };
                }
                acc = acc + v;
            }
            out[j] = acc;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    type P = GaugePolynomial<f64>;

    fn cx(re: f64, im: f64) -> C<f64> {
        C::new(re, im)
    }

    #[test]
    fn manakov_unit_vector() {
        let g = P::manakov(2);
        assert_eq!(g.eval(&[cx(1.0, 0.0), cx(0.0, 0.0)]).unwrap(), 1.0);
    }

    #[test]
    fn manakov_phase_mixed_unit_vector() {
        let g = P::manakov(2);
        let s = 1.0 / 2f64.sqrt();
        let v = g.eval(&[cx(s, 0.0), cx(0.0, s)]).unwrap();
        assert!((v - 1.0).abs() < 1e-14);
    }

    #[test]
    fn spinor_first_vertex() {
        let (a, b) = (0.7, 0.4);
        let g = P::spinor(a, b);
        let v = g.eval(&[cx(1.0, 0.0), cx(0.0, 0.0), cx(0.0, 0.0)]).unwrap();
        assert!((v - (a + b)).abs() < 1e-14);
    }

    #[test]
    fn spinor_matches_component_form() {
        // The component equations written out longhand, used as an oracle.
        let (a, b) = (1.3, -0.6);
        let g = P::spinor(a, b);
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let z = random_state::<f64>(&mut rng, 3);
            let f = g.nonlinearity(&z).unwrap();
            let (z1, z2, z3) = (z[0], z[1], z[2]);
            let (r1, r2, r3) = (z1.norm_sqr(), z2.norm_sqr(), z3.norm_sqr());
            let f1 = z1 * ((a + b) * (r1 + r2) + (a - b) * r3) + z2 * z2 * z3.conj() * b;
            let f2 = z2 * ((a + b) * (r1 + r3) + a * r2) + z1 * z2.conj() * z3 * (2.0 * b);
            let f3 = z3 * ((a + b) * (r2 + r3) + (a - b) * r1) + z1.conj() * z2 * z2 * b;
            for (lhs, rhs) in f.iter().zip([f1, f2, f3]) {
                assert!((lhs - rhs).norm() < 1e-12 * (1.0 + rhs.norm()));
            }
        }
    }

    #[test]
    fn manakov_nonlinearity_examples() {
        let g = P::manakov(2);
        let f = g.nonlinearity(&[cx(1.0, 0.0), cx(0.0, 0.0)]).unwrap();
        assert_eq!(f[0], cx(1.0, 0.0));
        assert_eq!(f[1], cx(0.0, 0.0));
        let f0 = g.nonlinearity(&[cx(0.0, 0.0), cx(0.0, 0.0)]).unwrap();
        assert!(f0.iter().all(|v| v.norm() == 0.0));
    }

    #[test]
    fn spinor_reduces_to_manakov_at_b_zero() {
        let g = P::spinor(1.0, 0.0);
        let f = g.nonlinearity(&[cx(1.0, 0.0), cx(1.0, 0.0), cx(1.0, 0.0)]).unwrap();
        for v in f {
            assert!((v - cx(3.0, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn directional_derivative_euler_and_flat_direction() {
        let g = P::manakov(2);
        let z = [cx(1.0, 0.0), cx(0.0, 0.0)];
        let along_z = g.directional_derivative(&z, &z).unwrap();
        assert!((along_z - 4.0 * g.eval(&z).unwrap()).abs() < 1e-14);
        // d/dh g((1+ih) e_1) has no first-order term.
        let flat = g.directional_derivative(&z, &[cx(0.0, 1.0), cx(0.0, 0.0)]).unwrap();
        assert_eq!(flat, 0.0);
        let zero = g.directional_derivative(&z, &[cx(0.0, 0.0); 2]).unwrap();
        assert_eq!(zero, 0.0);
    }

    #[test]
    fn invalid_degree_rejected() {
        assert!(MultiIndexPair::new(vec![2, 1], vec![2, 0]).is_err());
        assert!(MultiIndexPair::new(vec![1, 0], vec![1, 0]).is_err());
        assert!(MultiIndexPair::new(vec![], vec![]).is_err());
    }

    #[test]
    fn realness_violation_rejected() {
        let p = MultiIndexPair::new(vec![0, 2], vec![1, 1]).unwrap();
        let q = p.mirrored();
        assert!(P::new(2, vec![(p.clone(), 1.0), (q, 2.0)]).is_err());
        // Consistent mirror input is folded, not duplicated.
        let p2 = MultiIndexPair::new(vec![0, 2], vec![1, 1]).unwrap();
        let g = P::new(2, vec![(p2.clone(), 1.5), (p2.mirrored(), 1.5)]).unwrap();
        assert_eq!(g.terms().count(), 1);
    }

    #[test]
    fn zero_coefficients_dropped() {
        let p = MultiIndexPair::new(vec![2, 0], vec![2, 0]).unwrap();
        let g = P::new(2, vec![(p, 0.0)]).unwrap();
        assert!(g.is_zero());
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let g = P::manakov(2);
        assert!(matches!(
            g.eval(&[cx(1.0, 0.0)]),
            Err(Error::DimensionMismatch { expected: 2, got: 1 })
        ));
        assert!(g.nonlinearity(&[cx(1.0, 0.0); 3]).is_err());
    }

    #[test]
    fn identity_checks_pass_for_presets() {
        for g in [P::manakov(2), P::manakov(3), P::spinor(1.0, 0.5), P::spinor(0.3, -0.8)] {
            let gauge = g.check_gauge_invariance(200, 42);
            assert!(gauge.passed, "gauge deviation {}", gauge.max_deviation);
            assert!(gauge.max_deviation <= 1e-12);
            let charge = g.check_charge_identity(200, 42);
            assert!(charge.passed, "charge deviation {}", charge.max_deviation);
        }
    }

    #[test]
    fn compiled_plan_matches_direct_evaluation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for g in [P::manakov(2), P::manakov(4), P::spinor(0.9, 0.35), P::zero(3)] {
            let plan = CompiledPoly::new(&g);
            let n = g.n_components();
            let mut out = vec![cx(0.0, 0.0); n];
            for _ in 0..100 {
                let z = random_state::<f64>(&mut rng, n);
                plan.nonlinearity_into(&z, &mut out);
                let direct = g.nonlinearity(&z).unwrap();
                for (a, b) in out.iter().zip(&direct) {
                    assert!((a - b).norm() <= 1e-13 * (1.0 + b.norm()));
                }
                let gv = plan.eval_g(&z);
                let gd = g.eval(&z).unwrap();
                assert!((gv - gd).abs() <= 1e-13 * (1.0 + gd.abs()));
            }
        }
    }

    #[test]
    fn json_round_trip_and_symmetrization() {
        let g = P::spinor(1.0, 0.5);
        let json = serde_json::to_string(&g).unwrap();
        let back: P = serde_json::from_str(&json).unwrap();
        assert_eq!(g, back);
        // A table carrying only one member of a mirror pair loads fine.
        let table = r#"{"n":3,"terms":[{"alpha":[0,2,0],"beta":[1,0,1],"coeff":1.0}]}"#;
        let g: P = serde_json::from_str(table).unwrap();
        let z = [cx(0.3, 0.1), cx(-0.2, 0.7), cx(0.5, -0.4)];
        let m = 2.0 * (z[0].conj() * z[1] * z[1] * z[2].conj()).re;
        assert!((g.eval(&z).unwrap() - m).abs() < 1e-14);
    }

    #[test]
    fn scaled_polynomial() {
        let g = P::manakov(2);
        let h = g.scaled(2.5);
        let z = [cx(0.4, 0.2), cx(-0.3, 0.9)];
        assert!((h.eval(&z).unwrap() - 2.5 * g.eval(&z).unwrap()).abs() < 1e-14);
    }
}
