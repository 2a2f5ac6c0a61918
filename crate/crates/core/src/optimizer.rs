//! Relative entropy of entanglement with respect to the fully separable set.
//!
//! The objective f(ρ) = S(σ‖ρ) is convex in ρ, so it is minimized with a
//! conditional-gradient (Frank–Wolfe) loop over finite product-state
//! ensembles:
//!
//! 1. gradient G = ∇f at the current ρ, via the eigenbasis of ρ;
//! 2. linear subproblem: the product vector φ minimizing ⟨φ|G|φ⟩, found by
//!    alternating per-party eigenvector updates from several starts;
//! 3. exact line search on the segment towards |φ⟩⟨φ|;
//! 4. periodically, a corrective phase re-optimizes the weights of the
//!    current terms (exponentiated gradient) and then refines weights and
//!    factors jointly with L-BFGS;
//! 5. tiny weights are pruned and the ensemble is capped at K terms.
//!
//! ρ is always regularized as (1−ε)ρ + ε·I/D before the objective is
//! evaluated, which keeps it full rank. The linear subproblem is nonconvex,
//! so the Frank–Wolfe gap reported as `gap_estimate` is a heuristic
//! certificate rather than a proof of optimality.

use rand::Rng;

use crate::ensemble::{ProductTerm, SeparableEnsemble};
use crate::entropy::{binary_entropy, relative_entropy_matrices, von_neumann_entropy};
use crate::error::{invalid, Result};
use crate::linalg::{eigh, expectation, kron_vectors, zeros};
use crate::party::PartyStructure;
use crate::rng::{derive_seed, haar_unitary, haar_vector, rng_from_seed};
use crate::scalar::{lit, log2, CMatrix, CVector, Real, C};
use crate::state::{PureState, QuantumState};

/// Restarts whose values lie within this many bits of the best count as agreeing.
pub const AGREEMENT_TOLERANCE: f64 = 1e-4;

/// Weights below this are dropped from the ensemble.
const PRUNE_WEIGHT: f64 = 1e-12;

/// Frank–Wolfe iterations between corrective phases.
const CORRECTION_PERIOD: usize = 10;

/// Alternating sweeps given to every start of the linear subproblem before
/// only the best `REFINED_STARTS` are run to convergence.
const SCREEN_SWEEPS: usize = 4;
const REFINED_STARTS: usize = 3;
const MAX_SWEEPS: usize = 100;

const REWEIGHT_ITERATIONS: usize = 50;
const REFINE_ITERATIONS: usize = 300;
const LBFGS_MEMORY: usize = 10;

/// Smoothing levels tried when certifying the final iterate.
const CERTIFICATE_SMOOTHING: [f64; 6] = [0.0, 1e-8, 1e-7, 1e-6, 1e-5, 1e-4];

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    /// Maximum number of product terms K; `None` means 4·D.
    pub ensemble_size: Option<usize>,
    pub max_outer_iterations: usize,
    /// Stop once a corrective cycle improves the value by less than this (bits).
    pub value_tolerance: f64,
    pub restarts: usize,
    /// Random starts for the linear subproblem.
    pub inner_starts: usize,
    pub seed: u64,
    /// ε in the regularization (1−ε)ρ + ε·I/D.
    pub support_floor: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            ensemble_size: None,
            max_outer_iterations: 2000,
            value_tolerance: 1e-7,
            restarts: 8,
            inner_starts: 16,
            seed: 0,
            support_floor: 1e-9,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if self.ensemble_size == Some(0) {
            return invalid("ensemble size must be positive");
        }
        if self.max_outer_iterations == 0 || self.restarts == 0 || self.inner_starts == 0 {
            return invalid("iteration, restart and inner-start counts must be positive");
        }
        if !(self.value_tolerance > 0.0 && self.value_tolerance.is_finite()) {
            return invalid("value tolerance must be positive");
        }
        if !(self.support_floor > 0.0 && self.support_floor < 1.0) {
            return invalid("support floor must lie in (0, 1)");
        }
        Ok(())
    }

    pub fn ensemble_size_for(&self, dim: usize) -> usize {
        self.ensemble_size.unwrap_or(4 * dim)
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self {
            seed,
            ..self.clone()
        }
    }

    pub fn with_restarts(&self, restarts: usize) -> Self {
        Self {
            restarts,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ReeResult<T: Real> {
    /// S(σ‖(1−ε)ρ* + ε·I/D) in bits, an upper bound on the true minimum.
    pub value: T,
    /// Unregularized closest separable state found.
    pub closest: SeparableEnsemble<T>,
    /// Heuristic bound on `value` minus the true minimum, in bits.
    pub gap_estimate: T,
    pub iterations_used: usize,
    pub restarts_agreeing: usize,
    pub support_floor: T,
}

impl<T: Real> ReeResult<T> {
    /// The closest state with the same regularization the value was computed with.
    pub fn closest_state(&self) -> QuantumState<T> {
        let rho = self.closest.to_state();
        let m = regularize(rho.matrix(), self.support_floor);
        QuantumState::from_parts(rho.structure().clone(), m)
    }
}

/// Re tr(A† B).
fn frobenius<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    a.iter().zip(b.iter()).fold(T::zero(), |acc, (x, y)| acc + (x.conj() * y).re)
}

fn regularize<T: Real>(rho: &CMatrix<T>, floor: T) -> CMatrix<T> {
    let d = rho.nrows();
    let mut m = rho * C::new(T::one() - floor, T::zero());
    let add = floor / lit(d as f64);
    for i in 0..d {
        m[(i, i)].re += add;
    }
    m
}

/// REE of a bipartite pure state across `left | rest`: the entropy of either side.
pub fn pure_state_ree_oracle<T: Real>(psi: &PureState<T>, left: &[usize]) -> Result<T> {
    let n = psi.structure().parties();
    psi.structure().check_subset(left)?;
    if left.len() == n {
        return invalid("cut must split the parties into two nonempty blocks");
    }
    let reduced = psi.to_density().partial_trace(left)?;
    Ok(von_neumann_entropy(&reduced))
}

/// E(σ) = min over fully separable ρ of S(σ‖ρ), in bits.
pub fn relative_entropy_of_entanglement<T: Real>(
    sigma: &QuantumState<T>,
    cfg: &OptimizerConfig,
) -> Result<ReeResult<T>> {
    cfg.validate()?;
    if sigma.structure().parties() < 2 {
        return invalid("entanglement needs at least two parties");
    }
    let problem = Problem::new(sigma, cfg);
    let mut runs: Vec<RunOutcome<T>> = (0..cfg.restarts)
        .map(|r| problem.run(derive_seed(cfg.seed, r as u64)))
        .collect();

    let best_idx = (0..runs.len())
        .reduce(|a, b| if runs[b].better_than(&runs[a]) { b } else { a })
        .expect("at least one restart");
    let best_value = runs[best_idx].value;
    let agreeing = runs
        .iter()
        .filter(|r| r.value - best_value <= lit(AGREEMENT_TOLERANCE))
        .count();
    let iterations: usize = runs.iter().map(|r| r.iterations).sum();
    let best = runs.swap_remove(best_idx);
    let mut rng = rng_from_seed(derive_seed(cfg.seed, u64::MAX));
    let certified = problem.certificate(&best.atoms, &best.weights, &mut rng);

    let eps = problem.floor;
    let dim = lit::<T>(problem.dim as f64);
    let correction = eps * log2(dim) + binary_entropy(eps);
    let terms = best
        .atoms
        .into_iter()
        .zip(best.weights)
        .map(|(a, w)| ProductTerm {
            weight: w,
            factors: a.factors,
        })
        .collect();
    Ok(ReeResult {
        value: best.value,
        closest: SeparableEnsemble::from_parts(sigma.structure().clone(), terms),
        gap_estimate: certified.min(best.gap).max(T::zero()) + correction,
        iterations_used: iterations,
        restarts_agreeing: agreeing,
        support_floor: eps,
    })
}

#[derive(Clone)]
struct Atom<T: Real> {
    factors: Vec<CVector<T>>,
    vector: CVector<T>,
}

impl<T: Real> Atom<T> {
    fn new(factors: Vec<CVector<T>>) -> Self {
        let vector = kron_vectors(&factors);
        Self { factors, vector }
    }
}

struct RunOutcome<T: Real> {
    value: T,
    gap: T,
    atoms: Vec<Atom<T>>,
    weights: Vec<T>,
    iterations: usize,
}

impl<T: Real> RunOutcome<T> {
    fn better_than(&self, other: &Self) -> bool {
        let tie = lit::<T>(1e-12);
        if self.value < other.value - tie {
            return true;
        }
        if self.value > other.value + tie {
            return false;
        }
        if self.gap != other.gap {
            return self.gap < other.gap;
        }
        self.atoms.len() < other.atoms.len()
    }
}

struct Problem<'a, T: Real> {
    sigma: &'a CMatrix<T>,
    sigma_entropy: T,
    structure: PartyStructure,
    dim: usize,
    floor: T,
    /// Per-party digit of every basis index.
    digits: Vec<Vec<usize>>,
    max_terms: usize,
    max_iterations: usize,
    tolerance: T,
    inner_starts: usize,
}

impl<'a, T: Real> Problem<'a, T> {
    fn new(sigma: &'a QuantumState<T>, cfg: &OptimizerConfig) -> Self {
        let structure = sigma.structure().clone();
        let dim = structure.total_dim();
        let digits = (0..dim).map(|i| structure.digits(i)).collect();
        Self {
            sigma: sigma.matrix(),
            sigma_entropy: von_neumann_entropy(sigma),
            dim,
            floor: lit(cfg.support_floor),
            digits,
            max_terms: cfg.ensemble_size_for(dim),
            max_iterations: cfg.max_outer_iterations,
            tolerance: lit(cfg.value_tolerance),
            inner_starts: cfg.inner_starts,
            structure,
        }
    }

    fn density(&self, atoms: &[Atom<T>], weights: &[T]) -> CMatrix<T> {
        let mut m = zeros::<T>(self.dim);
        let one = C::new(T::one(), T::zero());
        for (a, &w) in atoms.iter().zip(weights) {
            m.ger(C::new(w, T::zero()), &a.vector, &a.vector.conjugate(), one);
        }
        m
    }

    fn value(&self, rho: &CMatrix<T>) -> T {
        relative_entropy_matrices(self.sigma, self.sigma_entropy, &regularize(rho, self.floor))
    }

    /// Objective and its gradient with respect to the unregularized ρ.
    fn value_and_gradient(&self, rho: &CMatrix<T>) -> (T, CMatrix<T>) {
        let reg = regularize(rho, self.floor);
        let eig = eigh(&reg);
        let u = &eig.vectors;
        let lam = &eig.values;
        let n = self.dim;
        let st = u.adjoint() * self.sigma * u;
        let mut cross = T::zero();
        for i in 0..n {
            cross -= st[(i, i)].re * log2(lam[i]);
        }
        let value = cross - self.sigma_entropy;

        // Divided differences of ln on the spectrum.
        let mut inner = zeros::<T>(n);
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (lam[i], lam[j]);
                let r = a / b - T::one();
                let dd = if r.abs() < lit(1e-8) {
                    (T::one() - r * lit(0.5)) / b
                } else {
                    r.ln_1p() / (b * r)
                };
                inner[(i, j)] = st[(i, j)] * C::new(dd, T::zero());
            }
        }
        let scale = -(T::one() - self.floor) / T::ln_2();
        let g = u * inner * u.adjoint() * C::new(scale, T::zero());
        (value, crate::linalg::hermitize(&g))
    }

    /// ⟨φ|G|φ⟩ as a d_j×d_j matrix in party `j`'s factor, other factors fixed.
    fn effective_matrix(&self, g: &CMatrix<T>, factors: &[CVector<T>], j: usize) -> CMatrix<T> {
        let dj = self.structure.dims()[j];
        let w: Vec<C<T>> = self
            .digits
            .iter()
            .map(|dg| {
                let mut prod = C::new(T::one(), T::zero());
                for (p, f) in factors.iter().enumerate() {
                    if p != j {
                        prod *= f[dg[p]];
                    }
                }
                prod
            })
            .collect();
        let mut m = zeros::<T>(dj);
        for r in 0..self.dim {
            if w[r] == C::new(T::zero(), T::zero()) {
                continue;
            }
            let wr = w[r].conj();
            let x = self.digits[r][j];
            for c in 0..self.dim {
                m[(x, self.digits[c][j])] += wr * g[(r, c)] * w[c];
            }
        }
        m
    }

    /// Alternating minimization of ⟨φ|G|φ⟩ over product vectors from `factors`.
    fn alternating_descent(&self, g: &CMatrix<T>, factors: &mut [CVector<T>], sweeps: usize) -> T {
        let n = factors.len();
        let mut prev = lit::<T>(f64::INFINITY);
        let mut val = prev;
        for _ in 0..sweeps {
            for j in 0..n {
                let m = self.effective_matrix(g, factors, j);
                let (v, x) = lowest_eigenpair(&m);
                factors[j] = x;
                val = v;
            }
            if prev - val <= lit::<T>(1e-12) * (T::one() + val.abs()) {
                break;
            }
            prev = val;
        }
        val
    }

    /// Best product vector against `g` over random and warm starts.
    ///
    /// A quick solve screens all starts with a few sweeps and converges the
    /// best few; a thorough solve converges every start.
    fn linear_subproblem<R: Rng>(
        &self,
        g: &CMatrix<T>,
        warm: &[&[CVector<T>]],
        thorough: bool,
        rng: &mut R,
    ) -> (T, Vec<CVector<T>>) {
        let mut best: Option<(T, Vec<CVector<T>>)> = None;
        let starts = warm
            .iter()
            .map(|f| f.to_vec())
            .chain((0..self.inner_starts).map(|_| {
                self.structure
                    .dims()
                    .iter()
                    .map(|&d| haar_vector::<T, R>(d, rng))
                    .collect::<Vec<_>>()
            }))
            .collect::<Vec<_>>();
        let (sweeps, refined) = if thorough {
            (MAX_SWEEPS, starts.len())
        } else {
            (SCREEN_SWEEPS, REFINED_STARTS)
        };
        let mut screened: Vec<(T, Vec<CVector<T>>)> = starts
            .into_iter()
            .map(|mut f| (self.alternating_descent(g, &mut f, sweeps), f))
            .collect();
        screened.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
        for (_, mut f) in screened.into_iter().take(refined) {
            let v = self.alternating_descent(g, &mut f, MAX_SWEEPS);
            if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
                best = Some((v, f));
            }
        }
        best.expect("at least one start")
    }

    /// Minimizes the objective on the segment (1−γ)ρ + γ|φ⟩⟨φ|, γ ∈ [0, 1],
    /// by a safeguarded secant search on the derivative.
    fn line_search(&self, rho: &CMatrix<T>, phi: &CVector<T>, slope0: T) -> T {
        let target = phi * phi.adjoint();
        let dir = &target - rho;
        let at = |gamma: T| rho + &dir * C::new(gamma, T::zero());
        let slope = |gamma: T| {
            let (_, g) = self.value_and_gradient(&at(gamma));
            frobenius(&g, &dir)
        };
        if slope0 >= T::zero() {
            return T::zero();
        }
        let s1 = slope(T::one());
        if s1 <= T::zero() {
            return T::one();
        }
        let (mut lo, mut slo) = (T::zero(), slope0);
        let (mut hi, mut shi) = (T::one(), s1);
        let mut side = 0i8;
        for _ in 0..60 {
            let mut x = lo - slo * (hi - lo) / (shi - slo);
            if !(x > lo && x < hi) {
                x = (lo + hi) * lit(0.5);
            }
            let sx = slope(x);
            if sx.abs() <= lit::<T>(1e-12) || (hi - lo) <= lit::<T>(1e-14) * hi {
                return x;
            }
            if sx < T::zero() {
                lo = x;
                slo = sx;
                // Illinois modification keeps the bracket shrinking from both ends.
                if side == -1 {
                    shi *= lit(0.5);
                }
                side = -1;
            } else {
                hi = x;
                shi = sx;
                if side == 1 {
                    slo *= lit(0.5);
                }
                side = 1;
            }
            if (hi - lo) <= lit::<T>(1e-3) * lo {
                break;
            }
        }
        lo
    }

    /// Exponentiated-gradient re-optimization of the weights of fixed atoms.
    fn reweight(&self, atoms: &[Atom<T>], weights: &mut [T], iterations: usize) -> T {
        let mut rho = self.density(atoms, weights);
        let (mut f, mut g) = self.value_and_gradient(&rho);
        let mut eta = lit::<T>(1.0);
        for _ in 0..iterations {
            let grads: Vec<T> = atoms.iter().map(|a| expectation(&g, &a.vector)).collect();
            let gmin = grads.iter().copied().fold(lit::<T>(f64::INFINITY), |m, x| if x < m { x } else { m });
            let mean = weights.iter().zip(&grads).fold(T::zero(), |acc, (&w, &x)| acc + w * x);
            if mean - gmin <= lit(1e-10) {
                break;
            }
            let mut accepted = false;
            for _ in 0..40 {
                let mut trial: Vec<T> = weights
                    .iter()
                    .zip(&grads)
                    .map(|(&w, &x)| w * (-(eta * (x - gmin))).exp())
                    .collect();
                let total = trial.iter().fold(T::zero(), |a, &b| a + b);
                trial.iter_mut().for_each(|w| *w /= total);
                let trial_rho = self.density(atoms, &trial);
                let tf = self.value(&trial_rho);
                if tf < f {
                    weights.copy_from_slice(&trial);
                    rho = trial_rho;
                    eta *= lit(1.5);
                    accepted = true;
                    break;
                }
                eta *= lit(0.5);
            }
            if !accepted {
                break;
            }
            let next = self.value_and_gradient(&rho);
            f = next.0;
            g = next.1;
        }
        f
    }

    /// Joint L-BFGS refinement of weights and factors for a fixed number of terms.
    ///
    /// Parametrization: pₖ = uₖ²/Σu² and aₖʲ = yₖʲ/|yₖʲ|, so the search is
    /// unconstrained; the result is a valid ensemble for every parameter vector.
    fn refine(&self, atoms: &mut Vec<Atom<T>>, weights: &mut Vec<T>, iterations: usize) -> T {
        let mut x = pack(atoms, weights);
        let (mut f, mut grad) = self.param_value_and_gradient(&x, atoms.len());
        let mut history: std::collections::VecDeque<(Vec<T>, Vec<T>, T)> = Default::default();
        for _ in 0..iterations {
            // Two-loop recursion.
            let mut q = grad.clone();
            let mut alphas = Vec::with_capacity(history.len());
            for (sv, yv, rho) in history.iter().rev() {
                let a = *rho * dot(sv, &q);
                axpy(-a, yv, &mut q);
                alphas.push(a);
            }
            if let Some((sv, yv, _)) = history.back() {
                let scale = dot(sv, yv) / dot(yv, yv);
                q.iter_mut().for_each(|v| *v *= scale);
            } else {
                let gn = dot(&grad, &grad).sqrt();
                let scale = lit::<T>(1e-2) / (gn + lit(1e-300));
                q.iter_mut().for_each(|v| *v *= scale);
            }
            for ((sv, yv, rho), a) in history.iter().zip(alphas.iter().rev()) {
                let b = *rho * dot(yv, &q);
                axpy(*a - b, sv, &mut q);
            }
            let mut slope = -dot(&grad, &q);
            if slope >= T::zero() {
                // Not a descent direction; fall back to steepest descent.
                history.clear();
                q = grad.clone();
                let gn = dot(&grad, &grad).sqrt();
                let scale = lit::<T>(1e-2) / (gn + lit(1e-300));
                q.iter_mut().for_each(|v| *v *= scale);
                slope = -dot(&grad, &q);
                if slope >= T::zero() {
                    break;
                }
            }
            // Backtracking Armijo search along −q.
            let mut step = T::one();
            let mut accepted = None;
            for _ in 0..40 {
                let trial: Vec<T> = x.iter().zip(&q).map(|(&xi, &qi)| xi - step * qi).collect();
                let tf = self.param_value(&trial, atoms.len());
                if tf <= f + lit::<T>(1e-4) * step * slope {
                    accepted = Some((trial, tf));
                    break;
                }
                step *= lit(0.5);
            }
            let Some((next, nf)) = accepted else { break };
            let (_, ngrad) = self.param_value_and_gradient(&next, atoms.len());
            let sv: Vec<T> = next.iter().zip(&x).map(|(a, b)| *a - *b).collect();
            let yv: Vec<T> = ngrad.iter().zip(&grad).map(|(a, b)| *a - *b).collect();
            let sy = dot(&sv, &yv);
            if sy > lit::<T>(1e-300) {
                history.push_back((sv, yv, T::one() / sy));
                if history.len() > LBFGS_MEMORY {
                    history.pop_front();
                }
            }
            let improvement = f - nf;
            x = next;
            f = nf;
            grad = ngrad;
            if improvement <= lit::<T>(1e-11) * (T::one() + f.abs()) {
                break;
            }
        }
        unpack(&x, &self.structure, atoms, weights);
        f
    }

    fn param_value(&self, x: &[T], terms: usize) -> T {
        let mut atoms = Vec::with_capacity(terms);
        let mut weights = Vec::with_capacity(terms);
        unpack(x, &self.structure, &mut atoms, &mut weights);
        self.value(&self.density(&atoms, &weights))
    }

    fn param_value_and_gradient(&self, x: &[T], terms: usize) -> (T, Vec<T>) {
        let mut atoms = Vec::with_capacity(terms);
        let mut weights = Vec::with_capacity(terms);
        unpack(x, &self.structure, &mut atoms, &mut weights);
        let rho = self.density(&atoms, &weights);
        let (f, g) = self.value_and_gradient(&rho);
        let per_term: Vec<T> = atoms.iter().map(|a| expectation(&g, &a.vector)).collect();
        let mean = weights.iter().zip(&per_term).fold(T::zero(), |acc, (&w, &v)| acc + w * v);
        let mut grad = Vec::with_capacity(x.len());
        let mut offset = 0;
        let u2: T = (0..terms).fold(T::zero(), |acc, k| {
            let u = x[term_offset(&self.structure, k)];
            acc + u * u
        });
        for (k, a) in atoms.iter().enumerate() {
            let u = x[offset];
            grad.push(lit::<T>(2.0) * u / u2 * (per_term[k] - mean));
            offset += 1;
            for (j, factor) in a.factors.iter().enumerate() {
                let d = factor.len();
                let y_norm = (0..d).fold(T::zero(), |acc, i| {
                    acc + x[offset + 2 * i] * x[offset + 2 * i] + x[offset + 2 * i + 1] * x[offset + 2 * i + 1]
                })
                .sqrt();
                let m = self.effective_matrix(&g, &a.factors, j);
                let ma = &m * factor;
                let along = factor.dotc(&ma);
                let scale = lit::<T>(2.0) * weights[k] / y_norm;
                for i in 0..d {
                    let r = (ma[i] - factor[i] * along) * C::new(scale, T::zero());
                    grad.push(r.re);
                    grad.push(r.im);
                }
                offset += 2 * d;
            }
        }
        (f, grad)
    }

    fn prune(&self, atoms: &mut Vec<Atom<T>>, weights: &mut Vec<T>) {
        let keep: Vec<bool> = weights.iter().map(|&w| w >= lit(PRUNE_WEIGHT)).collect();
        if keep.iter().any(|&k| k) {
            let mut i = 0;
            atoms.retain(|_| {
                i += 1;
                keep[i - 1]
            });
            let mut i = 0;
            weights.retain(|_| {
                i += 1;
                keep[i - 1]
            });
        }
        while atoms.len() > self.max_terms {
            let small = (0..weights.len())
                .reduce(|a, b| if weights[b] < weights[a] { b } else { a })
                .unwrap();
            let host = (0..atoms.len())
                .filter(|&k| k != small)
                .map(|k| (k, atoms[k].vector.dotc(&atoms[small].vector).norm_sqr()))
                .reduce(|a, b| if b.1 > a.1 { b } else { a })
                .unwrap()
                .0;
            let moved = weights[small];
            weights[host] += moved;
            atoms.remove(small);
            weights.remove(small);
        }
        let total = weights.iter().fold(T::zero(), |a, &b| a + b);
        weights.iter_mut().for_each(|w| *w /= total);
    }

    fn run(&self, seed: u64) -> RunOutcome<T> {
        let mut rng = rng_from_seed(seed);
        let bases: Vec<CMatrix<T>> = self
            .structure
            .dims()
            .iter()
            .map(|&d| haar_unitary::<T, _>(d, &mut rng))
            .collect();
        let start = SeparableEnsemble::product_basis(self.structure.clone(), &bases)
            .expect("local bases match the structure");
        let mut atoms: Vec<Atom<T>> = start.terms().iter().map(|t| Atom::new(t.factors.clone())).collect();
        let mut weights: Vec<T> = start.terms().iter().map(|t| t.weight).collect();

        let mut last_lmo: Option<Vec<CVector<T>>> = None;
        let mut checkpoint = lit::<T>(f64::INFINITY);
        let mut gap = lit::<T>(f64::INFINITY);
        let mut iterations = 0;

        for it in 0..self.max_iterations {
            iterations = it + 1;
            let rho = self.density(&atoms, &weights);
            let (_, g) = self.value_and_gradient(&rho);
            let inner = frobenius(&rho, &g);

            let heaviest = (0..weights.len())
                .reduce(|a, b| if weights[b] > weights[a] { b } else { a })
                .unwrap();
            let mut warm: Vec<&[CVector<T>]> = vec![&atoms[heaviest].factors];
            if let Some(f) = &last_lmo {
                warm.push(f);
            }
            let (mut lmo_value, mut factors) = self.linear_subproblem(&g, &warm, false, &mut rng);
            gap = inner - lmo_value;
            if gap <= self.tolerance {
                // Confirm convergence before trusting the quick solve.
                let all: Vec<&[CVector<T>]> = atoms.iter().map(|a| a.factors.as_slice()).collect();
                (lmo_value, factors) = self.linear_subproblem(&g, &all, true, &mut rng);
                gap = inner - lmo_value;
                if gap <= self.tolerance {
                    break;
                }
            }
            let phi = kron_vectors(&factors);
            let gamma = self.line_search(&rho, &phi, -gap);
            last_lmo = Some(factors.clone());
            if gamma > T::zero() {
                weights.iter_mut().for_each(|w| *w *= T::one() - gamma);
                match atoms
                    .iter()
                    .position(|a| a.vector.dotc(&phi).norm_sqr() > T::one() - lit(1e-12))
                {
                    Some(k) => weights[k] += gamma,
                    None => {
                        atoms.push(Atom::new(factors));
                        weights.push(gamma);
                    }
                }
            }

            if (it + 1) % CORRECTION_PERIOD == 0 {
                self.reweight(&atoms, &mut weights, REWEIGHT_ITERATIONS);
                self.prune(&mut atoms, &mut weights);
                let f = self.refine(&mut atoms, &mut weights, REFINE_ITERATIONS);
                self.prune(&mut atoms, &mut weights);
                if checkpoint - f < self.tolerance {
                    break;
                }
                checkpoint = f;
            } else {
                self.prune(&mut atoms, &mut weights);
            }
        }

        let rho = self.density(&atoms, &weights);
        RunOutcome {
            value: self.value(&rho),
            gap,
            atoms,
            weights,
            iterations,
        }
    }

    /// Bound on f(ρ) − min f from Frank–Wolfe gaps at ρ and at slightly
    /// smoothed copies ρₜ = (1−t)ρ + t·I/D, using f(ρ) − f* ≤ f(ρ) − f(ρₜ) + gap(ρₜ).
    fn certificate<R: Rng>(&self, atoms: &[Atom<T>], weights: &[T], rng: &mut R) -> T {
        let rho = self.density(atoms, weights);
        let f0 = self.value(&rho);
        let warm: Vec<&[CVector<T>]> = atoms.iter().map(|a| a.factors.as_slice()).collect();
        let mut best = lit::<T>(f64::INFINITY);
        for &t in &CERTIFICATE_SMOOTHING {
            let rho_t = regularize(&rho, lit(t));
            let (ft, g) = self.value_and_gradient(&rho_t);
            let (lmo_value, _) = self.linear_subproblem(&g, &warm, true, rng);
            let bound = (f0 - ft) + (frobenius(&rho_t, &g) - lmo_value).max(T::zero());
            if bound < best {
                best = bound;
            }
        }
        best
    }
}

/// Smallest eigenvalue and a unit eigenvector of a Hermitian matrix,
/// in closed form for 2×2.
fn lowest_eigenpair<T: Real>(m: &CMatrix<T>) -> (T, CVector<T>) {
    if m.nrows() != 2 {
        let eig = eigh(m);
        return (eig.values[0], eig.vectors.column(0).into_owned());
    }
    let (a, d, b) = (m[(0, 0)].re, m[(1, 1)].re, m[(0, 1)]);
    let half = lit::<T>(0.5);
    let mid = (a + d) * half;
    let rad = ((a - d) * half * (a - d) * half + b.norm_sqr()).sqrt();
    let lambda = mid - rad;
    let zero = C::new(T::zero(), T::zero());
    let c1 = [b, C::new(lambda - a, T::zero())];
    let c2 = [C::new(lambda - d, T::zero()), b.conj()];
    let n1 = c1[0].norm_sqr() + c1[1].norm_sqr();
    let n2 = c2[0].norm_sqr() + c2[1].norm_sqr();
    let (v, n) = if n1 >= n2 { (c1, n1) } else { (c2, n2) };
    let vec = if n > T::zero() {
        let s = n.sqrt();
        CVector::from_vec(vec![v[0].unscale(s), v[1].unscale(s)])
    } else if a <= d {
        CVector::from_vec(vec![C::new(T::one(), T::zero()), zero])
    } else {
        CVector::from_vec(vec![zero, C::new(T::one(), T::zero())])
    };
    (lambda, vec)
}

fn dot<T: Real>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

fn axpy<T: Real>(a: T, x: &[T], y: &mut [T]) {
    y.iter_mut().zip(x).for_each(|(yi, &xi)| *yi += a * xi);
}

/// Offset of term `k`'s weight parameter in the packed vector.
fn term_offset(structure: &PartyStructure, k: usize) -> usize {
    k * (1 + 2 * structure.dims().iter().sum::<usize>())
}

/// Packs (√pₖ, Re/Im of every factor) per term.
fn pack<T: Real>(atoms: &[Atom<T>], weights: &[T]) -> Vec<T> {
    let mut x = Vec::new();
    for (a, &w) in atoms.iter().zip(weights) {
        x.push(w.sqrt());
        for f in &a.factors {
            for z in f.iter() {
                x.push(z.re);
                x.push(z.im);
            }
        }
    }
    x
}

fn unpack<T: Real>(x: &[T], structure: &PartyStructure, atoms: &mut Vec<Atom<T>>, weights: &mut Vec<T>) {
    atoms.clear();
    weights.clear();
    let stride = 1 + 2 * structure.dims().iter().sum::<usize>();
    let terms = x.len() / stride;
    let total = (0..terms).fold(T::zero(), |acc, k| acc + x[k * stride] * x[k * stride]);
    for k in 0..terms {
        let mut offset = k * stride;
        weights.push(x[offset] * x[offset] / total);
        offset += 1;
        let factors = structure
            .dims()
            .iter()
            .map(|&d| {
                let v = CVector::from_fn(d, |i, _| C::new(x[offset + 2 * i], x[offset + 2 * i + 1]));
                offset += 2 * d;
                let n = v.norm();
                v.map(|z| z.unscale(n))
            })
            .collect();
        atoms.push(Atom::new(factors));
    }
}
