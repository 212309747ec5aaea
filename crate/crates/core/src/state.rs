//! Sparse pure states of labeled polarization qubits.
//!
//! A state is a map from polarization basis kets to complex amplitudes over
//! an ordered photon register. Registers carry site tags so that protocol
//! code can tell kept photons, gate photons and the ancilla apart; the
//! canonical ordering (Alice-kept, mode 1, Bob-kept, mode 2, ancilla) fixes
//! the ket-string convention everywhere.

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Amplitudes with squared magnitude below this are dropped after every
/// operation; keeps the sparse map tight without affecting 1e-12 assertions.
pub const PRUNE_THRESHOLD: f64 = 1e-15;

/// Tolerance for norm and amplitude comparisons.
pub const AMP_TOLERANCE: f64 = 1e-12;

/// Tolerance for the unitarity check in [`apply_single_qubit`].
pub const UNITARY_TOLERANCE: f64 = 1e-12;

/// Photon polarization, horizontal or vertical. V encodes logical one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum Polarization {
    H,
    V,
}

impl Polarization {
    pub fn flipped(self) -> Self {
        match self {
            Polarization::H => Polarization::V,
            Polarization::V => Polarization::H,
        }
    }

    fn index(self) -> usize {
        match self {
            Polarization::H => 0,
            Polarization::V => 1,
        }
    }
}

impl fmt::Display for Polarization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Polarization::H => write!(f, "H"),
            Polarization::V => write!(f, "V"),
        }
    }
}

/// Where a photon lives. The declaration order is the canonical register
/// order: Alice's kept photons, the mode-1 gate photon, Bob's kept
/// photons, the mode-2 gate photon, then the ancilla.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Site {
    AliceKept,
    Mode1,
    BobKept,
    Mode2,
    Ancilla,
}

/// A single photon: site tag plus index within the site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PhotonLabel {
    pub site: Site,
    pub index: u32,
}

impl PhotonLabel {
    pub const fn new(site: Site, index: u32) -> Self {
        PhotonLabel { site, index }
    }

    pub const fn alice(index: u32) -> Self {
        PhotonLabel::new(Site::AliceKept, index)
    }

    pub const fn bob(index: u32) -> Self {
        PhotonLabel::new(Site::BobKept, index)
    }

    pub const fn mode1() -> Self {
        PhotonLabel::new(Site::Mode1, 0)
    }

    pub const fn mode2() -> Self {
        PhotonLabel::new(Site::Mode2, 0)
    }

    pub const fn ancilla() -> Self {
        PhotonLabel::new(Site::Ancilla, 0)
    }
}

impl fmt::Display for PhotonLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.site {
            Site::AliceKept => write!(f, "a{}", self.index),
            Site::BobKept => write!(f, "b{}", self.index),
            Site::Mode1 if self.index == 0 => write!(f, "m1"),
            Site::Mode1 => write!(f, "m1.{}", self.index),
            Site::Mode2 if self.index == 0 => write!(f, "m2"),
            Site::Mode2 => write!(f, "m2.{}", self.index),
            Site::Ancilla if self.index == 0 => write!(f, "anc"),
            Site::Ancilla => write!(f, "anc.{}", self.index),
        }
    }
}

impl Serialize for PhotonLabel {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Which party a W state belongs to; fixes the register layout used by the
/// fusion protocol (kept photons plus one gate photon).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Party {
    Alice,
    Bob,
}

/// One computational basis label, e.g. `HHV`: one polarization per photon
/// of a register, in canonical register order. Immutable once created.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct BasisKet(Vec<Polarization>);

impl BasisKet {
    pub fn new(pols: Vec<Polarization>) -> Self {
        BasisKet(pols)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn pols(&self) -> &[Polarization] {
        &self.0
    }

    pub fn pol_at(&self, index: usize) -> Polarization {
        self.0[index]
    }

    /// A copy with the polarization at `index` replaced.
    pub fn with_pol_at(&self, index: usize, pol: Polarization) -> Self {
        let mut pols = self.0.clone();
        pols[index] = pol;
        BasisKet(pols)
    }

    /// A copy with the polarization at `index` flipped (H <-> V).
    pub fn flipped_at(&self, index: usize) -> Self {
        self.with_pol_at(index, self.0[index].flipped())
    }

    /// A copy with the polarizations at two positions exchanged.
    pub fn swapped(&self, i: usize, j: usize) -> Self {
        let mut pols = self.0.clone();
        pols.swap(i, j);
        BasisKet(pols)
    }

    /// A copy with the photon at `index` removed.
    pub fn without_index(&self, index: usize) -> Self {
        let mut pols = self.0.clone();
        pols.remove(index);
        BasisKet(pols)
    }
}

impl fmt::Display for BasisKet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for pol in &self.0 {
            write!(f, "{pol}")?;
        }
        Ok(())
    }
}

impl Serialize for BasisKet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// An ordered set of unique photon labels in canonical order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhotonRegister(Vec<PhotonLabel>);

impl PhotonRegister {
    /// Builds a register from labels, sorting them into canonical order.
    pub fn new(mut labels: Vec<PhotonLabel>) -> Result<Self> {
        labels.sort();
        for pair in labels.windows(2) {
            if pair[0] == pair[1] {
                return Err(Error::DuplicateLabel(pair[0]));
            }
        }
        Ok(PhotonRegister(labels))
    }

    /// The register of an n-photon W state held by `party`: n-1 kept
    /// photons plus the gate photon, except n = 1 which is a lone kept
    /// photon (no photon is sent to the gate).
    pub fn for_w_state(n: usize, party: Party) -> Result<Self> {
        if n == 0 {
            return Err(Error::TooSmall {
                what: "w-state size",
                got: 0,
                min: 1,
            });
        }
        let (kept, mode) = match party {
            Party::Alice => (Site::AliceKept, PhotonLabel::mode1()),
            Party::Bob => (Site::BobKept, PhotonLabel::mode2()),
        };
        let mut labels: Vec<PhotonLabel> = (0..n as u32 - 1)
            .map(|i| PhotonLabel::new(kept, i))
            .collect();
        if n == 1 {
            labels.push(PhotonLabel::new(kept, 0));
        } else {
            labels.push(mode);
        }
        PhotonRegister::new(labels)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn labels(&self) -> &[PhotonLabel] {
        &self.0
    }

    pub fn position(&self, label: PhotonLabel) -> Option<usize> {
        self.0.binary_search(&label).ok()
    }

    pub fn contains(&self, label: PhotonLabel) -> bool {
        self.position(label).is_some()
    }

    /// Labels belonging to one site, in order.
    pub fn site_labels(&self, site: Site) -> Vec<PhotonLabel> {
        self.0.iter().copied().filter(|l| l.site == site).collect()
    }

    /// The register with the photon at `index` removed.
    pub fn without_index(&self, index: usize) -> Self {
        let mut labels = self.0.clone();
        labels.remove(index);
        PhotonRegister(labels)
    }
}

impl Serialize for PhotonRegister {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.0.iter())
    }
}

/// A sparse pure state: complex amplitudes over basis kets of a register.
///
/// States returned by the public constructors are normalized; projection
/// residuals are explicitly unnormalized intermediates and carry their
/// branch weight alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    register: PhotonRegister,
    amplitudes: BTreeMap<BasisKet, Complex64>,
}

impl PureState {
    /// Builds a state from an explicit amplitude map. Kets must match the
    /// register size; amplitudes below the pruning threshold are dropped.
    pub fn new(
        register: PhotonRegister,
        amplitudes: BTreeMap<BasisKet, Complex64>,
    ) -> Result<Self> {
        for ket in amplitudes.keys() {
            if ket.len() != register.len() {
                return Err(Error::KetLengthMismatch {
                    ket_len: ket.len(),
                    register_len: register.len(),
                });
            }
        }
        let mut state = PureState {
            register,
            amplitudes,
        };
        state.prune();
        Ok(state)
    }

    /// The basis state |ket> on `register`.
    pub fn basis_state(register: PhotonRegister, ket: BasisKet) -> Result<Self> {
        let mut amplitudes = BTreeMap::new();
        amplitudes.insert(ket, Complex64::new(1.0, 0.0));
        PureState::new(register, amplitudes)
    }

    /// The all-horizontal product state |H...H> on `register`.
    pub fn h_product(register: PhotonRegister) -> Result<Self> {
        let ket = BasisKet::new(vec![Polarization::H; register.len()]);
        PureState::basis_state(register, ket)
    }

    /// The W state on an arbitrary register: the equal superposition of all
    /// kets with exactly one V, each amplitude 1/sqrt(n), real positive.
    pub fn w_state_on(register: PhotonRegister) -> Result<Self> {
        let n = register.len();
        if n == 0 {
            return Err(Error::TooSmall {
                what: "w-state size",
                got: 0,
                min: 1,
            });
        }
        let amp = Complex64::new(1.0 / (n as f64).sqrt(), 0.0);
        let mut amplitudes = BTreeMap::new();
        for i in 0..n {
            let mut pols = vec![Polarization::H; n];
            pols[i] = Polarization::V;
            amplitudes.insert(BasisKet::new(pols), amp);
        }
        PureState::new(register, amplitudes)
    }

    pub fn register(&self) -> &PhotonRegister {
        &self.register
    }

    pub fn amplitudes(&self) -> &BTreeMap<BasisKet, Complex64> {
        &self.amplitudes
    }

    /// The amplitude of one ket (zero if absent).
    pub fn amplitude(&self, ket: &BasisKet) -> Complex64 {
        self.amplitudes
            .get(ket)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn num_photons(&self) -> usize {
        self.register.len()
    }

    /// Sum of squared amplitude magnitudes.
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.values().map(|a| a.norm_sqr()).sum()
    }

    pub(crate) fn normalized(&self) -> PureState {
        let norm = self.norm_sqr().sqrt();
        debug_assert!(norm > 0.0, "cannot normalize a null state");
        let mut amplitudes = self.amplitudes.clone();
        for amp in amplitudes.values_mut() {
            *amp /= norm;
        }
        PureState {
            register: self.register.clone(),
            amplitudes,
        }
    }

    fn prune(&mut self) {
        self.amplitudes
            .retain(|_, amp| amp.norm_sqr() >= PRUNE_THRESHOLD * PRUNE_THRESHOLD);
    }
}

impl Serialize for PureState {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Entry<'a> {
            ket: &'a BasisKet,
            re: f64,
            im: f64,
        }
        let entries: Vec<Entry> = self
            .amplitudes
            .iter()
            .map(|(ket, amp)| Entry {
                ket,
                re: amp.re,
                im: amp.im,
            })
            .collect();
        let mut s = serializer.serialize_struct("PureState", 2)?;
        s.serialize_field("register", &self.register)?;
        s.serialize_field("amplitudes", &entries)?;
        s.end()
    }
}

/// A 2x2 complex matrix acting on one photon's (H, V) amplitudes.
pub type Mat2 = [[Complex64; 2]; 2];

pub fn pauli_x() -> Mat2 {
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    [[z, o], [o, z]]
}

pub fn pauli_z() -> Mat2 {
    let z = Complex64::new(0.0, 0.0);
    let o = Complex64::new(1.0, 0.0);
    [[o, z], [z, -o]]
}

pub fn hadamard() -> Mat2 {
    let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    [[h, h], [h, -h]]
}

fn unitarity_deviation(u: &Mat2) -> f64 {
    // max |(u^dagger u - I)_ij|
    let mut max_dev: f64 = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            let mut entry = Complex64::new(0.0, 0.0);
            for row in u {
                entry += row[i].conj() * row[j];
            }
            let expected = if i == j { 1.0 } else { 0.0 };
            max_dev = max_dev.max((entry - expected).norm());
        }
    }
    max_dev
}

/// The n-photon W state held by `party`, on the protocol register layout.
pub fn make_w_state(n: usize, party: Party) -> Result<PureState> {
    PureState::w_state_on(PhotonRegister::for_w_state(n, party)?)
}

/// Product of two states on disjoint registers, reordered canonically.
pub fn tensor(a: &PureState, b: &PureState) -> Result<PureState> {
    let mut labels = a.register.labels().to_vec();
    labels.extend_from_slice(b.register.labels());
    let combined = PhotonRegister::new(labels).map_err(|err| match err {
        Error::DuplicateLabel(label) => Error::OverlappingRegisters(label),
        other => other,
    })?;

    // For each combined position, where the polarization comes from.
    let sources: Vec<(bool, usize)> = combined
        .labels()
        .iter()
        .map(|&label| match a.register.position(label) {
            Some(pos) => (true, pos),
            None => (false, b.register.position(label).expect("label in b")),
        })
        .collect();

    let mut amplitudes = BTreeMap::new();
    for (ket_a, amp_a) in &a.amplitudes {
        for (ket_b, amp_b) in &b.amplitudes {
            let pols: Vec<Polarization> = sources
                .iter()
                .map(|&(from_a, pos)| {
                    if from_a {
                        ket_a.pol_at(pos)
                    } else {
                        ket_b.pol_at(pos)
                    }
                })
                .collect();
            amplitudes.insert(BasisKet::new(pols), amp_a * amp_b);
        }
    }
    PureState::new(combined, amplitudes)
}

/// |<a|b>|^2 for states of equal register size, matched ket by ket.
/// Assumes both inputs are normalized.
pub fn fidelity(a: &PureState, b: &PureState) -> Result<f64> {
    if a.num_photons() != b.num_photons() {
        return Err(Error::ShapeMismatch {
            left: a.num_photons(),
            right: b.num_photons(),
        });
    }
    let mut overlap = Complex64::new(0.0, 0.0);
    for (ket, amp_a) in &a.amplitudes {
        overlap += amp_a.conj() * b.amplitude(ket);
    }
    // Rounding can push the square a hair past one for normalized inputs.
    Ok(overlap.norm_sqr().min(1.0))
}

/// Applies a single-qubit unitary to one photon's polarization.
pub fn apply_single_qubit(state: &PureState, photon: PhotonLabel, u: &Mat2) -> Result<PureState> {
    let pos = state
        .register
        .position(photon)
        .ok_or(Error::UnknownPhoton(photon))?;
    let deviation = unitarity_deviation(u);
    if deviation > UNITARY_TOLERANCE {
        return Err(Error::NotUnitary {
            max_deviation: deviation,
            tol: UNITARY_TOLERANCE,
        });
    }

    let mut amplitudes: BTreeMap<BasisKet, Complex64> = BTreeMap::new();
    for (ket, amp) in &state.amplitudes {
        let col = ket.pol_at(pos).index();
        for out in [Polarization::H, Polarization::V] {
            let coeff = u[out.index()][col];
            if coeff.norm_sqr() == 0.0 {
                continue;
            }
            let new_ket = ket.with_pol_at(pos, out);
            *amplitudes
                .entry(new_ket)
                .or_insert(Complex64::new(0.0, 0.0)) += coeff * amp;
        }
    }
    PureState::new(state.register.clone(), amplitudes)
}

/// Exchanges the polarizations of two photons (a SWAP on the pair).
pub fn swap_photons(state: &PureState, p1: PhotonLabel, p2: PhotonLabel) -> Result<PureState> {
    let i = state
        .register
        .position(p1)
        .ok_or(Error::UnknownPhoton(p1))?;
    let j = state
        .register
        .position(p2)
        .ok_or(Error::UnknownPhoton(p2))?;
    let mut amplitudes = BTreeMap::new();
    for (ket, amp) in &state.amplitudes {
        amplitudes.insert(ket.swapped(i, j), *amp);
    }
    PureState::new(state.register.clone(), amplitudes)
}

/// Weighted sum of states on identical registers. The result is not
/// normalized; callers own the coefficients. Panics on an empty term list.
pub fn linear_combination(terms: &[(Complex64, &PureState)]) -> Result<PureState> {
    let register = terms
        .first()
        .map(|(_, s)| s.register.clone())
        .expect("at least one term");
    let mut amplitudes: BTreeMap<BasisKet, Complex64> = BTreeMap::new();
    for (coeff, state) in terms {
        if state.register != register {
            return Err(Error::ShapeMismatch {
                left: register.len(),
                right: state.register.len(),
            });
        }
        for (ket, amp) in &state.amplitudes {
            *amplitudes
                .entry(ket.clone())
                .or_insert(Complex64::new(0.0, 0.0)) += coeff * amp;
        }
    }
    PureState::new(register, amplitudes)
}

/// Checks the W-state recursion: |W_n> equals
/// (1/sqrt(n)) (|(n-1)_H>|V> + sqrt(n-1) |W_{n-1}>|H>) with the gate photon
/// last, within amplitude tolerance 1e-12.
pub fn w_recursion_check(n: usize) -> Result<bool> {
    if n < 2 {
        return Err(Error::TooSmall {
            what: "w-recursion size",
            got: n,
            min: 2,
        });
    }
    let lhs = make_w_state(n, Party::Alice)?;

    let kept = PhotonRegister::new(
        (0..n as u32 - 1).map(PhotonLabel::alice).collect(),
    )?;
    let mode = PhotonRegister::new(vec![PhotonLabel::mode1()])?;
    let all_h = tensor(
        &PureState::h_product(kept.clone())?,
        &PureState::basis_state(mode.clone(), BasisKet::new(vec![Polarization::V]))?,
    )?;
    let smaller_w = tensor(
        &PureState::w_state_on(kept)?,
        &PureState::basis_state(mode, BasisKet::new(vec![Polarization::H]))?,
    )?;
    let inv_sqrt_n = 1.0 / (n as f64).sqrt();
    let rhs = linear_combination(&[
        (Complex64::new(inv_sqrt_n, 0.0), &all_h),
        (
            Complex64::new(((n - 1) as f64).sqrt() * inv_sqrt_n, 0.0),
            &smaller_w,
        ),
    ])?;

    let mut kets: Vec<&BasisKet> = lhs.amplitudes.keys().collect();
    kets.extend(rhs.amplitudes().keys());
    Ok(kets
        .into_iter()
        .all(|ket| (lhs.amplitude(ket) - rhs.amplitude(ket)).norm() <= AMP_TOLERANCE))
}
