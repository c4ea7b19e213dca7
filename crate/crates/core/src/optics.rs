//! Two-photon Fock-space layer: the selective mode router (SMR).
//!
//! An SMR over a `d`-level qudit has `2d` optical modes. Input labels
//! `0..d` are port A and `d..2d` are port B; after the router the same labels
//! name output ports C and D. Mode block `k` couples `A_k`/`B_k` into
//! `C_k`/`D_k` through one Mach–Zehnder interferometer.
//!
//! Two-photon amplitudes use creation-operator normalization: a configuration
//! with photons in distinct modes `p < q` stands for `a†_p a†_q |0⟩`, and a
//! doubly occupied mode stands for `(a†_p)² / √2 |0⟩`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};
use core::fmt;

use num_complex::Complex64;
use num_traits::Zero;

use crate::qstate::{Matrix, PureState, StateError};
use crate::trigger::{TriggerError, TriggerSet};
use crate::TOLERANCE;

/// Coincidence probability below which post-selection counts as certain failure.
pub const CERTAIN_FAILURE: f64 = 1e-14;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum OpticsError {
    #[error("mode {mode} out of range for {modes} modes")]
    ModeOutOfRange { mode: usize, modes: usize },
    #[error("port size mismatch: expected {expected}, found {found}")]
    PortSizeMismatch { expected: usize, found: usize },
    #[error("mode transformation is not unitary (max deviation {0:e})")]
    NotUnitary(f64),
    #[error("no coincidence support (probability {0:e})")]
    NoCoincidence(f64),
    #[error("router output leaks weight {0:e} into modes outside the ancilla")]
    Leakage(f64),
    #[error(transparent)]
    State(#[from] StateError),
    #[error(transparent)]
    Trigger(#[from] TriggerError),
}

/// Output port of the router.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Port {
    C,
    D,
}

/// Placement of two photons over the `2d` modes of a router.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhotonConfig {
    port_size: usize,
    first: usize,
    second: usize,
}

impl PhotonConfig {
    pub fn new(port_size: usize, a: usize, b: usize) -> Result<Self, OpticsError> {
        let modes = 2 * port_size;
        for mode in [a, b] {
            if mode >= modes {
                return Err(OpticsError::ModeOutOfRange { mode, modes });
            }
        }
        Ok(Self {
            port_size,
            first: a.min(b),
            second: a.max(b),
        })
    }

    /// Photons at local index `c` of port C and local index `d` of port D.
    pub fn coincidence(port_size: usize, c: usize, d: usize) -> Result<Self, OpticsError> {
        Self::new(port_size, c, port_size + d)
    }

    pub fn port_size(&self) -> usize {
        self.port_size
    }

    /// The two occupied global mode labels, ascending.
    pub fn modes(&self) -> (usize, usize) {
        (self.first, self.second)
    }

    /// `(mode, photon count)` pairs; one entry when both photons share a mode.
    pub fn occupancy(&self) -> Vec<(usize, u8)> {
        if self.first == self.second {
            vec![(self.first, 2)]
        } else {
            vec![(self.first, 1), (self.second, 1)]
        }
    }

    pub fn port_of(&self, mode: usize) -> (Port, usize) {
        if mode < self.port_size {
            (Port::C, mode)
        } else {
            (Port::D, mode - self.port_size)
        }
    }

    pub fn port_counts(&self) -> (usize, usize) {
        let c = [self.first, self.second]
            .iter()
            .filter(|&&m| m < self.port_size)
            .count();
        (c, 2 - c)
    }

    pub fn is_coincidence(&self) -> bool {
        self.port_counts() == (1, 1)
    }

    /// Local `(port C index, port D index)` for coincidence configurations.
    pub fn coincidence_labels(&self) -> Option<(usize, usize)> {
        self.is_coincidence()
            .then(|| (self.first, self.second - self.port_size))
    }
}

impl fmt::Debug for PhotonConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for PhotonConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (_, a) = self.port_of(self.first);
        let (_, b) = self.port_of(self.second);
        match self.port_counts() {
            (1, 1) => write!(f, "|{a}⟩_C|{b}⟩_D"),
            (2, 0) => write!(f, "|{a},{b}⟩_C|vac⟩_D"),
            _ => write!(f, "|vac⟩_C|{a},{b}⟩_D"),
        }
    }
}

/// The router's action on basis inputs `|x⟩_A |y⟩_B`, as a case table.
pub fn smr_abstract(
    x: usize,
    y: usize,
    triggers: &TriggerSet,
) -> Result<PhotonConfig, OpticsError> {
    let d = triggers.dim();
    for mode in [x, y] {
        if mode >= d {
            return Err(OpticsError::ModeOutOfRange { mode, modes: d });
        }
    }
    match (triggers.contains(x), triggers.contains(y)) {
        (false, false) => PhotonConfig::new(d, x, d + y),
        (false, true) => PhotonConfig::new(d, x, y),
        (true, false) => PhotonConfig::new(d, d + x, d + y),
        (true, true) => PhotonConfig::new(d, y, d + x),
    }
}

/// Unitary on the `2d` creation operators of a two-port device.
#[derive(Clone, Debug, PartialEq)]
pub struct ModeUnitary {
    port_size: usize,
    matrix: Matrix,
}

impl ModeUnitary {
    pub fn new(port_size: usize, matrix: Matrix) -> Result<Self, OpticsError> {
        if matrix.order() != 2 * port_size {
            return Err(OpticsError::PortSizeMismatch {
                expected: 2 * port_size,
                found: matrix.order(),
            });
        }
        let defect = matrix.unitarity_defect();
        if defect > TOLERANCE {
            return Err(OpticsError::NotUnitary(defect));
        }
        Ok(Self { port_size, matrix })
    }

    pub fn identity(port_size: usize) -> Self {
        Self {
            port_size,
            matrix: Matrix::identity(2 * port_size),
        }
    }

    pub fn port_size(&self) -> usize {
        self.port_size
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// The 2×2 block coupling `(A_k, B_k)` into `(C_k, D_k)`.
    pub fn block(&self, k: usize) -> [[Complex64; 2]; 2] {
        let d = self.port_size;
        [
            [self.matrix.get(k, k), self.matrix.get(k, d + k)],
            [self.matrix.get(d + k, k), self.matrix.get(d + k, d + k)],
        ]
    }
}

/// Balanced beamsplitter `(1/√2)[[1, i], [i, 1]]`.
pub fn beamsplitter() -> [[Complex64; 2]; 2] {
    let r = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let t = Complex64::new(0.0, FRAC_1_SQRT_2);
    [[r, t], [t, r]]
}

/// One interferometer of the router mesh, followed by its output phase plate.
///
/// Beamsplitter, internal phase `θ` on the upper arm, inverse beamsplitter,
/// then output phases `diag(e^{-iθ/2}, e^{iθ/2})`. The plate fixes the
/// convention: `θ = 0` is the identity and `θ = π` is the bare swap.
pub fn mzi_block(theta: f64) -> [[Complex64; 2]; 2] {
    let bs = beamsplitter();
    let bs_dag = [
        [bs[0][0].conj(), bs[1][0].conj()],
        [bs[0][1].conj(), bs[1][1].conj()],
    ];
    let phase = Complex64::from_polar(1.0, theta);
    // diag(e^{iθ}, 1) · BS†
    let inner = [
        [phase * bs_dag[0][0], phase * bs_dag[0][1]],
        [bs_dag[1][0], bs_dag[1][1]],
    ];
    let mut out = [[Complex64::zero(); 2]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, slot) in row.iter_mut().enumerate() {
            *slot = bs[r][0] * inner[0][c] + bs[r][1] * inner[1][c];
        }
    }
    let plate = [
        Complex64::from_polar(1.0, -theta / 2.0),
        Complex64::from_polar(1.0, theta / 2.0),
    ];
    for (row, p) in out.iter_mut().zip(plate) {
        for slot in row.iter_mut() {
            *slot *= p;
        }
    }
    out
}

/// The router mesh: `θ_k = π` on trigger modes, `θ_k = 0` elsewhere.
pub fn build_smr_mesh(d: usize, triggers: &[usize]) -> Result<ModeUnitary, OpticsError> {
    if let Some(&mode) = triggers.iter().find(|&&t| t >= d) {
        return Err(OpticsError::ModeOutOfRange { mode, modes: d });
    }
    let mut m = Matrix::zeros(2 * d);
    for k in 0..d {
        let theta = if triggers.contains(&k) { PI } else { 0.0 };
        let b = mzi_block(theta);
        m.set(k, k, b[0][0]);
        m.set(k, d + k, b[0][1]);
        m.set(d + k, k, b[1][0]);
        m.set(d + k, d + k, b[1][1]);
    }
    ModeUnitary::new(d, m)
}

/// Amplitudes over all two-photon configurations of `2d` modes.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoPhotonState {
    port_size: usize,
    amps: Vec<Complex64>,
}

impl TwoPhotonState {
    pub fn zero(port_size: usize) -> Self {
        let n = 2 * port_size;
        Self {
            port_size,
            amps: vec![Complex64::zero(); n * (n + 1) / 2],
        }
    }

    pub fn from_config(config: PhotonConfig) -> Self {
        let mut s = Self::zero(config.port_size);
        s.set(config, Complex64::new(1.0, 0.0));
        s
    }

    /// One photon entering port A in `a` and one entering port B in `b`.
    pub fn from_ports(a: &PureState, b: &PureState) -> Result<Self, OpticsError> {
        let d = a.len();
        if b.len() != d {
            return Err(OpticsError::PortSizeMismatch {
                expected: d,
                found: b.len(),
            });
        }
        let mut s = Self::zero(d);
        for (x, &ax) in a.amps().iter().enumerate() {
            if ax.is_zero() {
                continue;
            }
            for (y, &by) in b.amps().iter().enumerate() {
                let index = s.index(x, d + y);
                s.amps[index] = ax * by;
            }
        }
        Ok(s)
    }

    pub fn port_size(&self) -> usize {
        self.port_size
    }

    pub fn amplitude(&self, config: PhotonConfig) -> Complex64 {
        self.amps[self.index(config.first, config.second)]
    }

    pub fn set(&mut self, config: PhotonConfig, value: Complex64) {
        let index = self.index(config.first, config.second);
        self.amps[index] = value;
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Nonzero configurations and their amplitudes.
    pub fn support(&self) -> Vec<(PhotonConfig, Complex64)> {
        self.configs()
            .filter_map(|cfg| {
                let a = self.amplitude(cfg);
                (!a.is_zero()).then_some((cfg, a))
            })
            .collect()
    }

    /// Total weight on configurations matching `pred`.
    pub fn weight_where(&self, pred: impl Fn(&PhotonConfig) -> bool) -> f64 {
        self.configs()
            .filter(|c| pred(c))
            .map(|c| self.amplitude(c).norm_sqr())
            .sum()
    }

    pub fn configs(&self) -> impl Iterator<Item = PhotonConfig> + '_ {
        let n = 2 * self.port_size;
        let d = self.port_size;
        (0..n).flat_map(move |p| {
            (p..n).map(move |q| PhotonConfig {
                port_size: d,
                first: p,
                second: q,
            })
        })
    }

    fn index(&self, p: usize, q: usize) -> usize {
        let n = 2 * self.port_size;
        p * n - p * p.saturating_sub(1) / 2 + (q - p)
    }
}

/// Pushes each photon through `u` (`a†_p ↦ Σ_r u[r][p] a†_r`) and regroups the
/// product of creation operators into configurations.
pub fn evolve_two_photon(
    u: &ModeUnitary,
    s: &TwoPhotonState,
) -> Result<TwoPhotonState, OpticsError> {
    if u.port_size != s.port_size {
        return Err(OpticsError::PortSizeMismatch {
            expected: s.port_size,
            found: u.port_size,
        });
    }
    let n = 2 * u.port_size;
    let columns: Vec<Vec<(usize, Complex64)>> = (0..n)
        .map(|p| {
            (0..n)
                .map(|r| (r, u.matrix.get(r, p)))
                .filter(|(_, v)| !v.is_zero())
                .collect()
        })
        .collect();

    let mut out = TwoPhotonState::zero(u.port_size);
    for (config, alpha) in s.support() {
        let (p, q) = config.modes();
        // coefficient of the monomial a†_p a†_q
        let coeff = if p == q { alpha * FRAC_1_SQRT_2 } else { alpha };
        for &(r, ur) in &columns[p] {
            for &(t, ut) in &columns[q] {
                let term = coeff * ur * ut;
                let (lo, hi) = (r.min(t), r.max(t));
                let index = out.index(lo, hi);
                if lo == hi {
                    out.amps[index] += term * SQRT_2;
                } else {
                    out.amps[index] += term;
                }
            }
        }
    }
    Ok(out)
}

/// Keeps only the one-photon-per-port configurations.
///
/// Returns the renormalized state over `(port C mode, port D mode)` and the
/// probability of the coincidence event.
pub fn postselect_coincidence(s: &TwoPhotonState) -> Result<(PureState, f64), OpticsError> {
    let d = s.port_size;
    let amps = coincidence_amplitudes(s);
    let state = PureState::new(vec![d, d], amps)?;
    let probability = state.norm_sqr();
    if probability < CERTAIN_FAILURE {
        return Err(OpticsError::NoCoincidence(probability));
    }
    let (state, _) = state.normalized()?;
    Ok((state, probability))
}

fn coincidence_amplitudes(s: &TwoPhotonState) -> Vec<Complex64> {
    let d = s.port_size;
    let mut amps = Vec::with_capacity(d * d);
    for c in 0..d {
        for dd in 0..d {
            amps.push(s.amps[s.index(c, d + dd)]);
        }
    }
    amps
}

/// Post-selected output of one router pairing a qudit with its ancilla.
#[derive(Clone, Debug, PartialEq)]
pub struct Routed {
    /// Renormalized state over `[qudit (d), ancilla (k + 1)]`.
    pub state: PureState,
    /// Coincidence probability.
    pub probability: f64,
}

/// Sends `input` through port A and `ancilla` through port B of the router
/// for `triggers`, then post-selects on coincidence.
///
/// Ancilla level `i` travels in the mode given by [`TriggerSet::ancilla_modes`],
/// and port D is read back in ancilla levels.
pub fn route_through_smr(
    input: &PureState,
    ancilla: &PureState,
    triggers: &TriggerSet,
) -> Result<Routed, OpticsError> {
    let d = triggers.dim();
    let k = triggers.len();
    if input.len() != d {
        return Err(OpticsError::PortSizeMismatch {
            expected: d,
            found: input.len(),
        });
    }
    if ancilla.len() != k + 1 {
        return Err(OpticsError::PortSizeMismatch {
            expected: k + 1,
            found: ancilla.len(),
        });
    }
    let modes = triggers.ancilla_modes();
    let mut port_b = vec![Complex64::zero(); d];
    for (level, &mode) in modes.iter().enumerate() {
        port_b[mode] = ancilla.amps()[level];
    }
    let port_b = PureState::new(vec![d], port_b)?;
    let mesh = build_smr_mesh(d, triggers.indices())?;
    let out = evolve_two_photon(&mesh, &TwoPhotonState::from_ports(input, &port_b)?)?;
    let amps = coincidence_on_ancilla(&out, &modes)?;
    let state = PureState::new(vec![d, k + 1], amps)?;
    let probability = state.norm_sqr();
    if probability < CERTAIN_FAILURE {
        return Err(OpticsError::NoCoincidence(probability));
    }
    let (state, _) = state.normalized()?;
    Ok(Routed { state, probability })
}

/// The router followed by coincidence post-selection as a linear map on
/// `[qudit (d), ancilla (k + 1)]`, built column by column from basis inputs
/// through the mesh. Columns of inputs that never give a coincidence are zero.
pub fn smr_kraus(triggers: &TriggerSet) -> Result<Matrix, OpticsError> {
    let d = triggers.dim();
    let levels = triggers.len() + 1;
    let modes = triggers.ancilla_modes();
    let mesh = build_smr_mesh(d, triggers.indices())?;
    let order = d * levels;
    let mut m = Matrix::zeros(order);
    for x in 0..d {
        for (y, &mode) in modes.iter().enumerate() {
            let input = TwoPhotonState::from_config(PhotonConfig::new(d, x, d + mode)?);
            let out = evolve_two_photon(&mesh, &input)?;
            let column = coincidence_on_ancilla(&out, &modes)?;
            for (row, v) in column.into_iter().enumerate() {
                m.set(row, x * levels + y, v);
            }
        }
    }
    Ok(m)
}

/// Coincidence amplitudes with port D relabelled into ancilla levels.
fn coincidence_on_ancilla(
    out: &TwoPhotonState,
    modes: &[usize],
) -> Result<Vec<Complex64>, OpticsError> {
    let d = out.port_size;
    let levels = modes.len();
    let full = coincidence_amplitudes(out);
    let mut amps = vec![Complex64::zero(); d * levels];
    let mut leaked = 0.0;
    for c in 0..d {
        for dd in 0..d {
            let a = full[c * d + dd];
            match modes.iter().position(|&m| m == dd) {
                Some(level) => amps[c * levels + level] = a,
                None => leaked += a.norm_sqr(),
            }
        }
    }
    if leaked > TOLERANCE {
        return Err(OpticsError::Leakage(leaked));
    }
    Ok(amps)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn case_table() {
        let t = TriggerSet::new(4, [1, 2]).unwrap();
        assert_eq!(
            smr_abstract(0, 3, &t).unwrap(),
            PhotonConfig::coincidence(4, 0, 3).unwrap()
        );
        let bunched_c = smr_abstract(0, 2, &t).unwrap();
        assert_eq!(bunched_c.port_counts(), (2, 0));
        assert_eq!(alloc::format!("{bunched_c}"), "|0,2⟩_C|vac⟩_D");
        let bunched_d = smr_abstract(1, 3, &t).unwrap();
        assert_eq!(bunched_d.port_counts(), (0, 2));
        assert_eq!(alloc::format!("{bunched_d}"), "|vac⟩_C|1,3⟩_D");
        let swapped = smr_abstract(1, 2, &t).unwrap();
        assert_eq!(swapped.coincidence_labels(), Some((2, 1)));
        assert!(matches!(
            smr_abstract(4, 0, &t),
            Err(OpticsError::ModeOutOfRange { .. })
        ));
    }

    #[test]
    fn mzi_endpoints() {
        let id = mzi_block(0.0);
        let sw = mzi_block(PI);
        for r in 0..2 {
            for col in 0..2 {
                let i = if r == col { 1.0 } else { 0.0 };
                assert!((id[r][col] - c(i)).norm() < 1e-15);
                assert!((sw[r][col] - c(1.0 - i)).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn empty_trigger_mesh_is_identity() {
        let mesh = build_smr_mesh(2, &[]).unwrap();
        assert!(mesh.matrix().max_deviation(&Matrix::identity(4)) < 1e-15);
    }

    #[test]
    fn single_trigger_mesh_blocks() {
        let mesh = build_smr_mesh(2, &[1]).unwrap();
        let mut expected = Matrix::identity(4);
        // swap (A1, B1) = modes (1, 3)
        expected.set(1, 1, c(0.0));
        expected.set(3, 3, c(0.0));
        expected.set(1, 3, c(1.0));
        expected.set(3, 1, c(1.0));
        assert!(mesh.matrix().max_deviation(&expected) < 1e-15);
    }

    #[test]
    fn mesh_counts_swap_blocks() {
        let mesh = build_smr_mesh(8, &[3, 7]).unwrap();
        assert!(mesh.matrix().unitarity_defect() < 1e-12);
        let swaps = (0..8)
            .filter(|&k| {
                let b = mesh.block(k);
                b[0][0].norm() < 1e-12 && (b[0][1] - c(1.0)).norm() < 1e-12
            })
            .count();
        assert_eq!(swaps, 2);
        assert!(build_smr_mesh(2, &[2]).is_err());
    }

    #[test]
    fn identity_evolution() {
        let a = PureState::qudit_real(&[1.0, 2.0]).unwrap();
        let b = PureState::qudit_real(&[0.5, -1.0]).unwrap();
        let s = TwoPhotonState::from_ports(&a, &b).unwrap();
        let out = evolve_two_photon(&ModeUnitary::identity(2), &s).unwrap();
        for (x, y) in out.amps.iter().zip(&s.amps) {
            assert!((x - y).norm() < 1e-15);
        }
    }

    #[test]
    fn hong_ou_mandel_dip() {
        let bs = beamsplitter();
        let m = Matrix::from_rows(vec![bs[0][0], bs[0][1], bs[1][0], bs[1][1]]).unwrap();
        let u = ModeUnitary::new(1, m).unwrap();
        let input = TwoPhotonState::from_config(PhotonConfig::new(1, 0, 1).unwrap());
        let out = evolve_two_photon(&u, &input).unwrap();
        // permanent of [[r, t], [t, r]] = r² + t² = 1/2 - 1/2
        let coincidence = out.amplitude(PhotonConfig::new(1, 0, 1).unwrap());
        assert!(coincidence.norm() < 1e-15);
        // bunched amplitudes √2·r·t = i/√2 each
        for mode in [0, 1] {
            let a = out.amplitude(PhotonConfig::new(1, mode, mode).unwrap());
            assert!((a - Complex64::new(0.0, FRAC_1_SQRT_2)).norm() < 1e-15);
        }
        assert!((out.norm_sqr() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn doubly_occupied_input_is_unitary() {
        let bs = beamsplitter();
        let m = Matrix::from_rows(vec![bs[0][0], bs[0][1], bs[1][0], bs[1][1]]).unwrap();
        let u = ModeUnitary::new(1, m).unwrap();
        let input = TwoPhotonState::from_config(PhotonConfig::new(1, 0, 0).unwrap());
        let out = evolve_two_photon(&u, &input).unwrap();
        assert!((out.norm_sqr() - 1.0).abs() < 1e-14);
        // |2,0⟩ → (|2,0⟩ - |0,2⟩)/2 + i/√2 |1,1⟩
        let c11 = out.amplitude(PhotonConfig::new(1, 0, 1).unwrap());
        assert!((c11 - Complex64::new(0.0, FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn coincidence_only_input() {
        let s = TwoPhotonState::from_config(PhotonConfig::coincidence(3, 2, 0).unwrap());
        let (state, p) = postselect_coincidence(&s).unwrap();
        assert!((p - 1.0).abs() < 1e-15);
        assert_eq!(state.amplitude(&[2, 0]), c(1.0));
    }

    #[test]
    fn bunched_only_input_fails() {
        let s = TwoPhotonState::from_config(PhotonConfig::new(2, 0, 1).unwrap());
        assert!(matches!(
            postselect_coincidence(&s),
            Err(OpticsError::NoCoincidence(_))
        ));
    }

    #[test]
    fn single_router_halves_probability() {
        // ψ = (|0⟩ + |3⟩ + |7⟩)/√3 with C = {3, 7}
        let t = TriggerSet::new(8, [3, 7]).unwrap();
        let mut amps = [0.0; 8];
        amps[0] = 1.0;
        amps[3] = 1.0;
        amps[7] = 1.0;
        let psi = PureState::qudit_real(&amps).unwrap();
        let s = 0.5;
        let anc = PureState::qudit_real(&[s, s, core::f64::consts::FRAC_1_SQRT_2]).unwrap();
        let routed = route_through_smr(&psi, &anc, &t).unwrap();
        assert!((routed.probability - 0.5).abs() < 1e-12);
        assert_eq!(routed.state.dims(), &[8, 3]);
    }

    #[test]
    fn kraus_matches_case_table() {
        let t = TriggerSet::new(4, [0, 2]).unwrap();
        let k = smr_kraus(&t).unwrap();
        let modes = t.ancilla_modes();
        let levels = modes.len();
        for x in 0..4 {
            for (y, &mode) in modes.iter().enumerate() {
                let col = k.column(x * levels + y);
                let cfg = smr_abstract(x, mode, &t).unwrap();
                match cfg.coincidence_labels() {
                    Some((cc, dd)) => {
                        let level = modes.iter().position(|&m| m == dd).unwrap();
                        assert!((col[cc * levels + level] - c(1.0)).norm() < 1e-12);
                        let rest: f64 = col.iter().map(|a| a.norm_sqr()).sum();
                        assert!((rest - 1.0).abs() < 1e-12);
                    }
                    None => assert!(col.iter().all(|a| a.norm() < 1e-12)),
                }
            }
        }
    }
}
