//! Continuous-time quantum walk under `H = gamma * H0 + H_P`, started in
//! the uniform superposition, and its time-averaged success probability
//! over a window `[t, t + dt]`.

mod evolve;
mod hamiltonian;

pub use evolve::{evolve, evolve_in_place};
pub use hamiltonian::{problem_diagonal, WalkHamiltonian, DEFAULT_QUBIT_CAP};

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::error::{invalid, Error, Result};
use crate::ground::GroundStateResult;
use crate::instances::IsingInstance;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WalkParams {
    pub gamma: f64,
    /// Start of the averaging window.
    pub t: f64,
    /// Length of the averaging window.
    pub dt: f64,
    /// Quadrature points in the window, endpoints included.
    pub samples: usize,
    /// Accuracy of each evolution segment in the L2 norm.
    pub tol: f64,
}

impl WalkParams {
    pub fn new(gamma: f64) -> Self {
        Self { gamma, t: 30.0, dt: 70.0, samples: 512, tol: 1e-11 }
    }

    fn validate(&self) -> Result<()> {
        if !(self.gamma >= 0.0 && self.gamma.is_finite()) {
            return Err(invalid!("gamma must be finite and non-negative"));
        }
        if !(self.t >= 0.0) || !(self.dt > 0.0) || self.samples < 2 {
            return Err(invalid!("need t >= 0, dt > 0 and samples >= 2"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuccessMode {
    ExactGroundStates,
    AnyCopyCorrect,
    Custom,
}

/// Basis states that count as a successful measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct SuccessSet {
    mode: SuccessMode,
    mask: Vec<bool>,
}

impl SuccessSet {
    /// The exact ground states themselves.
    pub fn exact(ground: &GroundStateResult) -> Self {
        let n = ground.n();
        let mut mask = vec![false; 1 << n];
        for s in ground.states() {
            mask[s.bits() as usize] = true;
        }
        Self { mode: SuccessMode::ExactGroundStates, mask }
    }

    /// Every state of `copies` concatenated copies in which at least one
    /// copy is an exact ground state, whatever its total energy.
    pub fn any_copy_correct(ground: &GroundStateResult, copies: usize) -> Result<Self> {
        let n = ground.n();
        let total = n * copies;
        if total > DEFAULT_QUBIT_CAP.max(24) {
            return Err(Error::Resource(alloc::format!("success set over {total} qubits")));
        }
        let single = Self::exact(ground).mask;
        let low = (1usize << n) - 1;
        let mask = (0..1usize << total)
            .map(|i| (0..copies).any(|c| single[(i >> (c * n)) & low]))
            .collect();
        Ok(Self { mode: SuccessMode::AnyCopyCorrect, mask })
    }

    pub fn from_states(qubits: usize, states: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut mask = vec![false; 1 << qubits];
        for s in states {
            *mask.get_mut(s).ok_or_else(|| invalid!("basis state {s} out of range"))? = true;
        }
        Ok(Self { mode: SuccessMode::Custom, mask })
    }

    pub fn mode(&self) -> SuccessMode {
        self.mode
    }

    pub fn len(&self) -> usize {
        self.mask.iter().filter(|&&b| b).count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn dim(&self) -> usize {
        self.mask.len()
    }

    /// Fraction of basis states in the set, the `gamma -> 0` limit of the
    /// success probability.
    pub fn uniform_overlap(&self) -> f64 {
        self.len() as f64 / self.dim() as f64
    }

    pub fn probability(&self, state: &[Complex64]) -> f64 {
        state.iter().zip(&self.mask).filter(|(_, &m)| m).map(|(a, _)| a.norm_sqr()).sum()
    }
}

pub fn uniform_state(qubits: usize) -> Vec<Complex64> {
    let dim = 1usize << qubits;
    vec![Complex64::new(1.0 / libm::sqrt(dim as f64), 0.0); dim]
}

/// Time-averaged success probability and conservation diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkOutcome {
    pub mean: f64,
    /// Largest `| ||psi|| - 1 |` over the samples.
    pub norm_error: f64,
    /// Largest `|<H>(t) - <H>(0)| / max(|<H>(0)|, 1)` over the samples.
    pub energy_drift: f64,
    pub min_probability: f64,
    pub max_probability: f64,
    /// Success probability at each sample time.
    pub trace: Vec<f64>,
}

/// Trapezoid-rule average of `P(t_f)` over `samples` equally spaced times
/// in `[t, t + dt]`, starting from the uniform superposition.
pub fn time_averaged_success(h: &WalkHamiltonian, params: &WalkParams, success: &SuccessSet) -> Result<WalkOutcome> {
    params.validate()?;
    if success.dim() != h.dim() {
        return Err(Error::LengthMismatch { expected: h.dim(), actual: success.dim() });
    }
    let mut psi = uniform_state(h.qubits());
    let e0 = h.expectation(&psi);
    let scale = e0.abs().max(1.0);
    evolve_in_place(&mut psi, h, params.t, params.tol)?;
    let step = params.dt / (params.samples - 1) as f64;
    let mut trace = Vec::with_capacity(params.samples);
    let (mut norm_error, mut energy_drift) = (0.0f64, 0.0f64);
    for i in 0..params.samples {
        if i > 0 {
            evolve_in_place(&mut psi, h, step, params.tol)?;
        }
        let norm = libm::sqrt(psi.iter().map(|c| c.norm_sqr()).sum::<f64>());
        norm_error = norm_error.max((norm - 1.0).abs());
        energy_drift = energy_drift.max((h.expectation(&psi) - e0).abs() / scale);
        trace.push(success.probability(&psi));
    }
    let mean = trapezoid_mean(&trace);
    let min_probability = trace.iter().cloned().fold(f64::INFINITY, f64::min);
    let max_probability = trace.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    Ok(WalkOutcome { mean, norm_error, energy_drift, min_probability, max_probability, trace })
}

/// Mean of equally spaced samples under the trapezoid rule.
pub fn trapezoid_mean(values: &[f64]) -> f64 {
    let k = values.len();
    assert!(k >= 2);
    let inner: f64 = values.iter().sum::<f64>() - 0.5 * (values[0] + values[k - 1]);
    inner / (k - 1) as f64
}

/// Success probabilities at one hopping rate for the exact single copy,
/// the imprecise single copy and the imprecise linked system.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaRow {
    pub gamma: f64,
    pub exact_single: WalkOutcome,
    /// `1 - (1 - P_exact)^copies`: independent repeats of the exact copy.
    pub exact_repeated: f64,
    pub reduced_single: WalkOutcome,
    pub reduced_linked: WalkOutcome,
}

/// Inputs shared by every point of a hopping-rate sweep.
#[derive(Debug, Clone)]
pub struct WalkCase {
    pub exact: IsingInstance,
    pub reduced: IsingInstance,
    /// Composite Hamiltonian of the linked imprecise copies.
    pub linked: IsingInstance,
    pub copies: usize,
    pub ground: GroundStateResult,
}

impl WalkCase {
    pub fn gamma_row(&self, params: &WalkParams) -> Result<GammaRow> {
        let exact_set = SuccessSet::exact(&self.ground);
        let linked_set = SuccessSet::any_copy_correct(&self.ground, self.copies)?;
        let exact_single =
            time_averaged_success(&WalkHamiltonian::new(&self.exact, params.gamma)?, params, &exact_set)?;
        let reduced_single =
            time_averaged_success(&WalkHamiltonian::new(&self.reduced, params.gamma)?, params, &exact_set)?;
        let reduced_linked =
            time_averaged_success(&WalkHamiltonian::new(&self.linked, params.gamma)?, params, &linked_set)?;
        let exact_repeated = 1.0 - libm::pow(1.0 - exact_single.mean, self.copies as f64);
        Ok(GammaRow { gamma: params.gamma, exact_single, exact_repeated, reduced_single, reduced_linked })
    }
}

/// Shape of a success-versus-gamma curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PeakShape {
    pub max: f64,
    pub argmax: usize,
    /// `max / baseline`.
    pub ratio: f64,
    /// The points at or above half height (between baseline and maximum)
    /// form one contiguous run.
    pub contiguous: bool,
}

impl PeakShape {
    pub fn of(values: &[f64], baseline: f64) -> Result<Self> {
        if values.is_empty() || !(baseline > 0.0) {
            return Err(invalid!("peak analysis needs values and a positive baseline"));
        }
        let (argmax, max) = values
            .iter()
            .cloned()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (i, v)| if v > best.1 { (i, v) } else { best });
        let half = baseline + 0.5 * (max - baseline);
        let above: Vec<bool> = values.iter().map(|&v| v >= half).collect();
        let runs = above.windows(2).filter(|w| !w[0] && w[1]).count() + usize::from(above[0]);
        Ok(Self { max, argmax, ratio: max / baseline, contiguous: runs == 1 })
    }

    /// A single peak at least twice the baseline.
    pub fn single_broad_peak(&self) -> bool {
        self.ratio >= 2.0 && self.contiguous
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ground::brute_force_ground;
    use crate::instances::{gen_sk, Family};
    use crate::replication::{build_linked, CopyTopology};
    use crate::seed::Key;

    fn random_state(dim: usize, seed: u64) -> Vec<Complex64> {
        let k = Key::new(seed);
        let mut v: Vec<Complex64> = (0..dim)
            .map(|i| Complex64::new(k.word(2 * i as u64).unit() - 0.5, k.word(2 * i as u64 + 1).unit() - 0.5))
            .collect();
        let norm = libm::sqrt(v.iter().map(|c| c.norm_sqr()).sum::<f64>());
        v.iter_mut().for_each(|c| *c /= norm);
        v
    }

    fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
        a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
    }

    #[test]
    fn problem_diagonal_order() {
        let inst = IsingInstance::new("p", Family::Custom, None, vec![0.0, 0.0], [(0, 1, 1.0)]).unwrap();
        assert_eq!(problem_diagonal(&inst), vec![1.0, -1.0, -1.0, 1.0]);
    }

    #[test]
    fn operator_is_hermitian() {
        let inst = gen_sk(6, 1.0, 3).unwrap();
        let h = WalkHamiltonian::new(&inst, 0.7).unwrap();
        let (u, v) = (random_state(64, 1), random_state(64, 2));
        let (mut hu, mut hv) = (vec![Complex64::default(); 64], vec![Complex64::default(); 64]);
        h.apply(&u, &mut hu);
        h.apply(&v, &mut hv);
        assert!((inner(&u, &hv) - inner(&v, &hu).conj()).norm() < 1e-12);
    }

    #[test]
    fn cap_is_enforced() {
        let inst = IsingInstance::new("big", Family::Custom, None, vec![0.1; 17], []).unwrap();
        assert!(matches!(WalkHamiltonian::new(&inst, 1.0), Err(Error::Resource(_))));
    }

    #[test]
    fn diagonal_operator_keeps_basis_states() {
        let inst = gen_sk(4, 1.0, 5).unwrap();
        let h = WalkHamiltonian::new(&inst, 0.0).unwrap();
        let mut basis = vec![Complex64::default(); 16];
        basis[9] = Complex64::new(1.0, 0.0);
        let out = evolve(&basis, &h, 13.0, 1e-12).unwrap();
        assert!((out[9].norm() - 1.0).abs() < 1e-12);
        let phase = Complex64::from_polar(1.0, -inst.energy_bits(9) * 13.0);
        assert!((out[9] - phase).norm() < 1e-10);
    }

    #[test]
    fn zero_hamiltonian_is_identity() {
        let inst = IsingInstance::new("z", Family::Custom, None, vec![0.0; 3], []).unwrap();
        let h = WalkHamiltonian::new(&inst, 0.0).unwrap();
        let v = random_state(8, 4);
        assert_eq!(evolve(&v, &h, 5.0, 1e-12).unwrap(), v);
    }

    #[test]
    fn evolution_composes() {
        let inst = gen_sk(5, 1.0, 6).unwrap();
        let h = WalkHamiltonian::new(&inst, 0.9).unwrap();
        let v = random_state(32, 7);
        let tol = 1e-10;
        let split = evolve(&evolve(&v, &h, 1.3, tol).unwrap(), &h, 2.9, tol).unwrap();
        let whole = evolve(&v, &h, 4.2, tol).unwrap();
        let diff = libm::sqrt(split.iter().zip(&whole).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>());
        assert!(diff <= 2.0 * tol, "diff {diff}");
    }

    // Two-level oracle for H = -gamma X + h Z started in |+>.
    fn rabi_p1(gamma: f64, field: f64, t: f64) -> f64 {
        let w = libm::hypot(gamma, field);
        let (s, c) = (libm::sin(w * t), libm::cos(w * t));
        0.5 * (c * c + s * s * (gamma + field) * (gamma + field) / (w * w))
    }

    #[test]
    fn single_qubit_matches_rabi_oracle() {
        let (gamma, field) = (0.8, 0.35);
        let inst = IsingInstance::new("q", Family::Custom, None, vec![field], []).unwrap();
        let h = WalkHamiltonian::new(&inst, gamma).unwrap();
        let mut psi = uniform_state(1);
        let mut t = 0.0;
        for step in [0.3, 1.7, 4.0, 11.0] {
            evolve_in_place(&mut psi, &h, step, 1e-12).unwrap();
            t += step;
            assert!((psi[1].norm_sqr() - rabi_p1(gamma, field, t)).abs() < 1e-10);
        }
    }

    #[test]
    fn single_qubit_time_average_matches_closed_form() {
        let field = 0.35;
        let inst = IsingInstance::new("q", Family::Custom, None, vec![field], []).unwrap();
        let success = SuccessSet::from_states(1, [1]).unwrap();
        for gamma in [0.1, 0.5, 1.3] {
            let params = WalkParams { samples: 8193, ..WalkParams::new(gamma) };
            let h = WalkHamiltonian::new(&inst, gamma).unwrap();
            let got = time_averaged_success(&h, &params, &success).unwrap();
            // closed-form integral of the Rabi probability over the window
            let w = libm::hypot(gamma, field);
            let r = (gamma + field) * (gamma + field) / (w * w);
            let (a, b) = (params.t, params.t + params.dt);
            let int_cos2 = 0.5 * (b - a) + (libm::sin(2.0 * w * b) - libm::sin(2.0 * w * a)) / (4.0 * w);
            let int_sin2 = (b - a) - int_cos2;
            let exact = 0.5 * (int_cos2 + r * int_sin2) / (b - a);
            assert!((got.mean - exact).abs() < 1e-6, "gamma {gamma}: {} vs {exact}", got.mean);
            assert!(got.norm_error < 1e-9 && got.energy_drift < 1e-8);
        }
    }

    #[test]
    fn flat_instance_stays_uniform() {
        let inst = IsingInstance::new("f", Family::Custom, None, vec![0.0; 4], []).unwrap();
        let h = WalkHamiltonian::new(&inst, 0.6).unwrap();
        let one = SuccessSet::from_states(4, [5]).unwrap();
        let params = WalkParams { samples: 16, ..WalkParams::new(0.6) };
        let got = time_averaged_success(&h, &params, &one).unwrap();
        assert!((got.mean - 1.0 / 16.0).abs() < 1e-12);
    }

    #[test]
    fn full_success_set_has_unit_probability() {
        let inst = gen_sk(5, 1.0, 9).unwrap();
        let h = WalkHamiltonian::new(&inst, 0.5).unwrap();
        let all = SuccessSet::from_states(5, 0..32).unwrap();
        let params = WalkParams { samples: 32, ..WalkParams::new(0.5) };
        let got = time_averaged_success(&h, &params, &all).unwrap();
        assert!((got.mean - 1.0).abs() < 1e-9);
        assert!(got.trace.iter().all(|&p| (0.0..=1.0 + 1e-9).contains(&p)));
    }

    #[test]
    fn vanishing_hopping_freezes_uniform_overlap() {
        let inst = gen_sk(4, 1.0, 12).unwrap();
        let ground = brute_force_ground(&inst, 1e-9).unwrap();
        let linked = build_linked(&inst, &CopyTopology::triangle(), 0.0).unwrap();
        let set = SuccessSet::any_copy_correct(&ground, 3).unwrap();
        let h = WalkHamiltonian::new(linked.composite(), 1e-6).unwrap();
        let params = WalkParams { samples: 64, ..WalkParams::new(1e-6) };
        let got = time_averaged_success(&h, &params, &set).unwrap();
        assert!((got.mean - set.uniform_overlap()).abs() < 1e-6);
    }

    #[test]
    fn any_copy_set_counts() {
        let ground = GroundStateResult::new(0.0, vec!["10".parse().unwrap()], 1e-9).unwrap();
        let set = SuccessSet::any_copy_correct(&ground, 3).unwrap();
        // 64 states, 27 with no copy equal to "10"
        assert_eq!(set.len(), 64 - 27);
        assert_eq!(set.mode(), SuccessMode::AnyCopyCorrect);
    }

    #[test]
    fn peak_shapes() {
        let p = PeakShape::of(&[0.1, 0.2, 0.4, 0.35, 0.15], 0.1).unwrap();
        assert!(p.single_broad_peak());
        assert_eq!(p.argmax, 2);
        let twin = PeakShape::of(&[0.1, 0.4, 0.1, 0.4, 0.1], 0.1).unwrap();
        assert!(!twin.contiguous);
        let flat = PeakShape::of(&[0.1, 0.15, 0.12], 0.1).unwrap();
        assert!(!flat.single_broad_peak());
    }
}
