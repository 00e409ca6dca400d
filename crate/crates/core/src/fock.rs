//! Occupation-number representation of 4-species fermions on `omega` spatial
//! levels, and sparse operators on fixed-N sectors.
//!
//! Conventions (everything else follows from these):
//!
//! - Species indices 0..4 carry the spin-isospin labels listed on
//!   [`Species`]; the alternative spin-3/2 labeling assigns
//!   m_s = +3/2, +1/2, -1/2, -3/2 to indices 0, 1, 2, 3.
//! - Bit `species * omega + level` of a [`FockState`] is the occupation of
//!   that single-particle state (species-major, so per-species popcounts are
//!   contiguous masks).
//! - A creation operator a†_p acting on a state picks up the sign
//!   (-1)^(number of set bits below position p); products are applied
//!   right to left. All matrix elements are real.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{self, binomial};
use crate::{Error, Result, DEFAULT_DIM_CAP};

pub const FRAC_1_SQRT_2: f64 = core::f64::consts::FRAC_1_SQRT_2;

/// Largest supported level count (4 * omega occupation bits in a u128).
pub const MAX_OMEGA: usize = 32;

/// One of the four internal (spin, isospin) states.
///
/// index 0: s_z = +1/2, t_z = +1/2 (proton up)
/// index 1: s_z = -1/2, t_z = +1/2 (proton down)
/// index 2: s_z = +1/2, t_z = -1/2 (neutron up)
/// index 3: s_z = -1/2, t_z = -1/2 (neutron down)
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Species {
    ProtonUp = 0,
    ProtonDown = 1,
    NeutronUp = 2,
    NeutronDown = 3,
}

pub const SPECIES: [Species; 4] = [
    Species::ProtonUp,
    Species::ProtonDown,
    Species::NeutronUp,
    Species::NeutronDown,
];

impl Species {
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(i: usize) -> Species {
        SPECIES[i]
    }

    /// Twice the spin projection (+1 for up).
    pub fn two_sz(self) -> i32 {
        match self {
            Species::ProtonUp | Species::NeutronUp => 1,
            Species::ProtonDown | Species::NeutronDown => -1,
        }
    }

    /// Twice the isospin projection (+1 for protons).
    pub fn two_tz(self) -> i32 {
        match self {
            Species::ProtonUp | Species::ProtonDown => 1,
            Species::NeutronUp | Species::NeutronDown => -1,
        }
    }

    /// Twice the spin-3/2 projection in the cold-atom labeling.
    pub fn two_ms(self) -> i32 {
        match self {
            Species::ProtonUp => 3,
            Species::ProtonDown => 1,
            Species::NeutronUp => -1,
            Species::NeutronDown => -3,
        }
    }
}

/// Bit-encoded occupation of the 4 * omega single-particle states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FockState(pub u128);

impl FockState {
    pub const VACUUM: FockState = FockState(0);

    #[inline]
    pub fn bit_position(omega: usize, level: usize, species: Species) -> u32 {
        debug_assert!(level < omega);
        (species.index() * omega + level) as u32
    }

    #[inline]
    pub fn occupied(self, pos: u32) -> bool {
        (self.0 >> pos) & 1 == 1
    }

    pub fn count(self) -> u32 {
        self.0.count_ones()
    }

    /// Apply a†_pos; `None` when Pauli blocked, else the new state and the
    /// fermionic sign.
    #[inline]
    pub fn create(self, pos: u32) -> Option<(FockState, f64)> {
        if self.occupied(pos) {
            return None;
        }
        let below = (self.0 & ((1u128 << pos) - 1)).count_ones();
        let sign = if below.is_multiple_of(2) { 1.0 } else { -1.0 };
        Some((FockState(self.0 | (1u128 << pos)), sign))
    }

    /// Apply a_pos; `None` when the state is empty there.
    #[inline]
    pub fn annihilate(self, pos: u32) -> Option<(FockState, f64)> {
        if !self.occupied(pos) {
            return None;
        }
        let below = (self.0 & ((1u128 << pos) - 1)).count_ones();
        let sign = if below.is_multiple_of(2) { 1.0 } else { -1.0 };
        Some((FockState(self.0 & !(1u128 << pos)), sign))
    }

    /// Number of particles of one species.
    pub fn species_count(self, omega: usize, species: Species) -> u32 {
        let mask = if omega == MAX_OMEGA && species.index() == 3 {
            // top window; (1 << 128) would overflow
            !0u128 << (species.index() * omega)
        } else {
            ((1u128 << omega) - 1) << (species.index() * omega)
        };
        (self.0 & mask).count_ones()
    }

    /// Twice the total S_z.
    pub fn two_sz_total(self, omega: usize) -> i32 {
        SPECIES
            .iter()
            .map(|&s| s.two_sz() * self.species_count(omega, s) as i32)
            .sum()
    }

    /// Twice the total T_z.
    pub fn two_tz_total(self, omega: usize) -> i32 {
        SPECIES
            .iter()
            .map(|&s| s.two_tz() * self.species_count(omega, s) as i32)
            .sum()
    }
}

/// Optional totals restricting a sector; each of 2 S_z and 2 T_z can be
/// fixed independently.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SectorConstraint {
    pub two_sz: Option<i32>,
    pub two_tz: Option<i32>,
}

impl SectorConstraint {
    pub fn sz_tz(two_sz: i32, two_tz: i32) -> Self {
        SectorConstraint {
            two_sz: Some(two_sz),
            two_tz: Some(two_tz),
        }
    }

    fn admits(&self, omega: usize, s: FockState) -> bool {
        self.two_sz.is_none_or(|v| s.two_sz_total(omega) == v)
            && self.two_tz.is_none_or(|v| s.two_tz_total(omega) == v)
    }
}

/// Canonically ordered basis of all N-particle states (optionally restricted
/// to fixed S_z and T_z totals).
#[derive(Debug, Clone)]
pub struct SectorBasis {
    omega: usize,
    n_particles: usize,
    constraint: Option<SectorConstraint>,
    states: Vec<FockState>,
}

/// Gosper's hack: next larger integer with the same popcount.
#[inline]
fn next_same_popcount(v: u128) -> u128 {
    let t = v | (v.wrapping_sub(1));
    let lowest_unset = !t & (!t).wrapping_neg();
    t.wrapping_add(1) | ((lowest_unset.wrapping_sub(1)) >> (v.trailing_zeros() + 1))
}

impl SectorBasis {
    /// Enumerate the sector in strictly increasing bit-word order.
    pub fn enumerate(omega: usize, n: usize) -> Result<SectorBasis> {
        Self::enumerate_with(omega, n, None, DEFAULT_DIM_CAP)
    }

    /// Enumerate with an S_z/T_z restriction.
    pub fn enumerate_constrained(
        omega: usize,
        n: usize,
        constraint: SectorConstraint,
    ) -> Result<SectorBasis> {
        Self::enumerate_with(omega, n, Some(constraint), DEFAULT_DIM_CAP)
    }

    pub fn enumerate_with(
        omega: usize,
        n: usize,
        constraint: Option<SectorConstraint>,
        dim_cap: usize,
    ) -> Result<SectorBasis> {
        if omega == 0 || omega > MAX_OMEGA {
            return Err(Error::OmegaTooLarge {
                omega,
                max: MAX_OMEGA,
            });
        }
        if n > 4 * omega {
            return Err(Error::BadParticleNumber { n, omega });
        }
        let full_dim = binomial(4 * omega, n).unwrap_or(u128::MAX);
        if full_dim > dim_cap as u128 {
            return Err(Error::CapacityExceeded {
                dim: full_dim,
                cap: dim_cap,
            });
        }
        let count = full_dim as usize;
        let mut states = Vec::new();
        if n == 0 {
            if constraint.is_none_or(|c| c.admits(omega, FockState::VACUUM)) {
                states.push(FockState::VACUUM);
            }
        } else {
            let mut v: u128 = (1u128 << n) - 1;
            for k in 0..count {
                let s = FockState(v);
                if constraint.is_none_or(|c| c.admits(omega, s)) {
                    states.push(s);
                }
                if k + 1 < count {
                    v = next_same_popcount(v);
                }
            }
        }
        Ok(SectorBasis {
            omega,
            n_particles: n,
            constraint,
            states,
        })
    }

    pub fn omega(&self) -> usize {
        self.omega
    }

    pub fn n_particles(&self) -> usize {
        self.n_particles
    }

    pub fn constraint(&self) -> Option<SectorConstraint> {
        self.constraint
    }

    pub fn dim(&self) -> usize {
        self.states.len()
    }

    pub fn states(&self) -> &[FockState] {
        &self.states
    }

    pub fn state(&self, k: usize) -> FockState {
        self.states[k]
    }

    /// Ordinal of a state, if it belongs to the sector.
    pub fn index_of(&self, s: FockState) -> Option<usize> {
        self.states.binary_search(&s).ok()
    }
}

/// The pair-creation channels of the separable Hamiltonians.
///
/// `P(m_t)` are the spin-singlet isovector pairs, `Q(m_s)` the spin-triplet
/// isoscalar pairs; `S32`/`D32(m)` are the monopole and quadrupole pairs of
/// the spin-3/2 relabeling. Each channel is a normalized two-particle state
/// built at one level.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairChannel {
    P(i8),
    Q(i8),
    S32,
    D32(i8),
}

impl PairChannel {
    pub const ISOVECTOR: [PairChannel; 3] =
        [PairChannel::P(-1), PairChannel::P(0), PairChannel::P(1)];
    pub const ISOSCALAR: [PairChannel; 3] =
        [PairChannel::Q(-1), PairChannel::Q(0), PairChannel::Q(1)];
    pub const IDENTICAL: [PairChannel; 2] = [PairChannel::P(-1), PairChannel::P(1)];
    pub const SPIN32: [PairChannel; 6] = [
        PairChannel::S32,
        PairChannel::D32(-2),
        PairChannel::D32(-1),
        PairChannel::D32(0),
        PairChannel::D32(1),
        PairChannel::D32(2),
    ];
    pub const ALL_PQ: [PairChannel; 6] = [
        PairChannel::P(-1),
        PairChannel::P(0),
        PairChannel::P(1),
        PairChannel::Q(-1),
        PairChannel::Q(0),
        PairChannel::Q(1),
    ];

    /// The product terms of the channel's creation operator at one level:
    /// C† = sum_t amp_t a†_{a_t} a†_{b_t}. Amplitudes are the 1/2 x 1/2
    /// (or 3/2 x 3/2) Clebsch-Gordan factors with the 1/sqrt(2) channel
    /// normalization folded in.
    pub fn terms(self) -> &'static [(Species, Species, f64)] {
        use Species::*;
        match self {
            // {a†a†}^{S=0,T=1}: both nucleons of one isospin in a spin singlet
            PairChannel::P(1) => &[(ProtonUp, ProtonDown, 1.0)],
            PairChannel::P(-1) => &[(NeutronUp, NeutronDown, 1.0)],
            PairChannel::P(0) => &[
                (ProtonUp, NeutronDown, FRAC_1_SQRT_2),
                (ProtonDown, NeutronUp, -FRAC_1_SQRT_2),
            ],
            // {a†a†}^{S=1,T=0}
            PairChannel::Q(1) => &[(ProtonUp, NeutronUp, 1.0)],
            PairChannel::Q(-1) => &[(ProtonDown, NeutronDown, 1.0)],
            PairChannel::Q(0) => &[
                (ProtonUp, NeutronDown, FRAC_1_SQRT_2),
                (ProtonDown, NeutronUp, FRAC_1_SQRT_2),
            ],
            // spin-3/2 couplings, species labeled m_s = +3/2, +1/2, -1/2, -3/2
            PairChannel::S32 => &[
                (ProtonUp, NeutronDown, FRAC_1_SQRT_2),
                (ProtonDown, NeutronUp, -FRAC_1_SQRT_2),
            ],
            PairChannel::D32(2) => &[(ProtonUp, ProtonDown, 1.0)],
            PairChannel::D32(1) => &[(ProtonUp, NeutronUp, 1.0)],
            PairChannel::D32(0) => &[
                (ProtonUp, NeutronDown, FRAC_1_SQRT_2),
                (ProtonDown, NeutronUp, FRAC_1_SQRT_2),
            ],
            PairChannel::D32(-1) => &[(ProtonDown, NeutronDown, 1.0)],
            PairChannel::D32(-2) => &[(NeutronUp, NeutronDown, 1.0)],
            PairChannel::P(_) | PairChannel::Q(_) | PairChannel::D32(_) => {
                panic!("pair channel projection out of range")
            }
        }
    }
}

/// Apply the channel's pair creation operator at `level` to a state.
///
/// Returns the resulting (state, amplitude) terms with fermionic signs;
/// empty when Pauli blocked.
pub fn pair_create(
    channel: PairChannel,
    level: usize,
    omega: usize,
    state: FockState,
) -> Vec<(FockState, f64)> {
    let mut out = Vec::with_capacity(2);
    for &(sa, sb, amp) in channel.terms() {
        let pa = FockState::bit_position(omega, level, sa);
        let pb = FockState::bit_position(omega, level, sb);
        // a†_a a†_b: rightmost first
        if let Some((s1, sign_b)) = state.create(pb) {
            if let Some((s2, sign_a)) = s1.create(pa) {
                out.push((s2, amp * sign_a * sign_b));
            }
        }
    }
    out
}

/// Apply the channel's pair annihilation operator (the matrix transpose of
/// [`pair_create`]) at `level`.
pub fn pair_annihilate(
    channel: PairChannel,
    level: usize,
    omega: usize,
    state: FockState,
) -> Vec<(FockState, f64)> {
    let mut out = Vec::with_capacity(2);
    for &(sa, sb, amp) in channel.terms() {
        let pa = FockState::bit_position(omega, level, sa);
        let pb = FockState::bit_position(omega, level, sb);
        // (a†_a a†_b)† = a_b a_a
        if let Some((s1, sign_a)) = state.annihilate(pa) {
            if let Some((s2, sign_b)) = s1.annihilate(pb) {
                out.push((s2, amp * sign_a * sign_b));
            }
        }
    }
    out
}

/// One summand of an operator expression. The vocabulary is fixed: collective
/// pair hopping, level-resolved number terms, and species-mixing one-body
/// terms.
#[derive(Debug, Clone)]
pub enum Term {
    /// factor * sum_{i,j} C†_i C_j for one pair channel.
    PairHop { channel: PairChannel, factor: f64 },
    /// sum_i energies[i] * n_i with n_i counting all species at level i.
    LevelEnergy { energies: Vec<f64> },
    /// factor * sum_i a†_{i,a} M[a][b] a_{i,b}.
    OneBody { matrix: [[f64; 4]; 4], factor: f64 },
    /// factor * N-hat.
    Number { factor: f64 },
}

impl Term {
    fn is_symmetric(&self) -> bool {
        match self {
            Term::PairHop { .. } | Term::LevelEnergy { .. } | Term::Number { .. } => true,
            Term::OneBody { matrix, .. } => {
                (0..4).all(|a| (0..4).all(|b| matrix[a][b] == matrix[b][a]))
            }
        }
    }

    /// Accumulate the action of the term's TRANSPOSE on `state` into `out`
    /// (used to assemble matrix rows: row k of T is column k of Tᵀ).
    fn apply_transpose(
        &self,
        basis: &SectorBasis,
        state: FockState,
        out: &mut Vec<(FockState, f64)>,
    ) {
        let omega = basis.omega();
        match self {
            Term::PairHop { channel, factor } => {
                // (sum_ij C†_i C_j)ᵀ = itself
                for j in 0..omega {
                    for (mid, amp_ann) in pair_annihilate(*channel, j, omega, state) {
                        for i in 0..omega {
                            for (fine, amp_cre) in pair_create(*channel, i, omega, mid) {
                                out.push((fine, factor * amp_ann * amp_cre));
                            }
                        }
                    }
                }
            }
            Term::LevelEnergy { energies } => {
                let mut diag = 0.0;
                for (i, &e) in energies.iter().enumerate() {
                    if e == 0.0 {
                        continue;
                    }
                    for &sp in SPECIES.iter() {
                        if state.occupied(FockState::bit_position(omega, i, sp)) {
                            diag += e;
                        }
                    }
                }
                if diag != 0.0 {
                    out.push((state, diag));
                }
            }
            Term::OneBody { matrix, factor } => {
                for i in 0..omega {
                    for (b, row) in matrix.iter().enumerate() {
                        for (a, &m) in row.iter().enumerate() {
                            // transpose: entry M[b][a] drives a†_a a_b
                            if m == 0.0 {
                                continue;
                            }
                            let pb = FockState::bit_position(omega, i, SPECIES[b]);
                            let pa = FockState::bit_position(omega, i, SPECIES[a]);
                            if let Some((s1, sgn_b)) = state.annihilate(pb) {
                                if let Some((s2, sgn_a)) = s1.create(pa) {
                                    out.push((s2, factor * m * sgn_a * sgn_b));
                                }
                            }
                        }
                    }
                }
            }
            Term::Number { factor } => {
                out.push((state, factor * state.count() as f64));
            }
        }
    }
}

/// Real sparse matrix in compressed-row layout over a [`SectorBasis`].
#[derive(Debug, Clone)]
pub struct SparseOperator {
    dim: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<u32>,
    values: Vec<f64>,
    hermitian: bool,
}

/// Entries with |value| at or below this are treated as zero and not stored.
pub const STORE_TOLERANCE: f64 = 1e-15;

impl SparseOperator {
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn hermitian(&self) -> bool {
        self.hermitian
    }

    pub fn row(&self, k: usize) -> (&[u32], &[f64]) {
        let lo = self.row_offsets[k];
        let hi = self.row_offsets[k + 1];
        (&self.col_indices[lo..hi], &self.values[lo..hi])
    }

    /// y = A x. The per-row reduction order is fixed (ascending column).
    pub fn apply(&self, x: &[f64], y: &mut [f64]) {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(y.len(), self.dim);
        for (k, out) in y.iter_mut().enumerate() {
            let lo = self.row_offsets[k];
            let hi = self.row_offsets[k + 1];
            let mut acc = 0.0;
            for t in lo..hi {
                acc += self.values[t] * x[self.col_indices[t] as usize];
            }
            *out = acc;
        }
    }

    pub fn apply_alloc(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim];
        self.apply(x, &mut y);
        y
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().fold(0.0, |m, &v| m.max(math::abs(v)))
    }

    /// max |A - Aᵀ| over all entries.
    pub fn symmetry_residual(&self) -> f64 {
        // build the transpose by counting sort and compare
        let mut counts = vec![0usize; self.dim + 1];
        for &c in &self.col_indices {
            counts[c as usize + 1] += 1;
        }
        for i in 0..self.dim {
            counts[i + 1] += counts[i];
        }
        let mut t_rows = vec![0u32; self.nnz()];
        let mut t_vals = vec![0.0f64; self.nnz()];
        let mut cursor = counts.clone();
        for k in 0..self.dim {
            let (cols, vals) = self.row(k);
            for (c, v) in cols.iter().zip(vals) {
                let slot = cursor[*c as usize];
                t_rows[slot] = k as u32;
                t_vals[slot] = *v;
                cursor[*c as usize] += 1;
            }
        }
        // transpose rows are sorted by construction (outer loop ascending k)
        let mut worst = 0.0f64;
        for k in 0..self.dim {
            let (cols, vals) = self.row(k);
            let t_cols = &t_rows[counts[k]..counts[k + 1]];
            let t_v = &t_vals[counts[k]..counts[k + 1]];
            // merge-compare two sorted sparse rows
            let (mut a, mut b) = (0usize, 0usize);
            while a < cols.len() || b < t_cols.len() {
                let ca = cols.get(a).copied().unwrap_or(u32::MAX);
                let cb = t_cols.get(b).copied().unwrap_or(u32::MAX);
                if ca == cb {
                    worst = worst.max(math::abs(vals[a] - t_v[b]));
                    a += 1;
                    b += 1;
                } else if ca < cb {
                    worst = worst.max(math::abs(vals[a]));
                    a += 1;
                } else {
                    worst = worst.max(math::abs(t_v[b]));
                    b += 1;
                }
            }
        }
        worst
    }

    /// Dense row-major copy; intended for small dimensions.
    pub fn to_dense(&self) -> Vec<f64> {
        let mut a = vec![0.0; self.dim * self.dim];
        for k in 0..self.dim {
            let (cols, vals) = self.row(k);
            for (c, v) in cols.iter().zip(vals) {
                a[k * self.dim + *c as usize] = *v;
            }
        }
        a
    }

    /// Compress a dense row-major matrix, dropping entries at or below
    /// [`STORE_TOLERANCE`].
    pub fn from_dense(a: &[f64], dim: usize) -> SparseOperator {
        assert_eq!(a.len(), dim * dim);
        let mut row_offsets = Vec::with_capacity(dim + 1);
        row_offsets.push(0usize);
        let mut col_indices = Vec::new();
        let mut values = Vec::new();
        let mut hermitian = true;
        for i in 0..dim {
            for j in 0..dim {
                let v = a[i * dim + j];
                if math::abs(v) > STORE_TOLERANCE {
                    col_indices.push(j as u32);
                    values.push(v);
                }
                if a[i * dim + j] != a[j * dim + i] {
                    hermitian = false;
                }
            }
            row_offsets.push(col_indices.len());
        }
        SparseOperator {
            dim,
            row_offsets,
            col_indices,
            values,
            hermitian,
        }
    }
}

/// Assemble the sum of `terms` as a sparse matrix over `basis`.
///
/// Every term must conserve the particle number; when the basis carries
/// S_z/T_z constraints, terms must conserve those too or the build fails
/// with [`Error::ConstraintViolation`].
pub fn build_operator(terms: &[Term], basis: &SectorBasis) -> Result<SparseOperator> {
    let dim = basis.dim();
    let hermitian = terms.iter().all(Term::is_symmetric);
    let mut row_offsets = Vec::with_capacity(dim + 1);
    row_offsets.push(0usize);
    let mut col_indices: Vec<u32> = Vec::new();
    let mut values: Vec<f64> = Vec::new();
    let mut scratch: Vec<(FockState, f64)> = Vec::new();

    for k in 0..dim {
        scratch.clear();
        let state = basis.state(k);
        for term in terms {
            term.apply_transpose(basis, state, &mut scratch);
        }
        scratch.sort_unstable_by_key(|(s, _)| *s);
        let mut idx = 0;
        while idx < scratch.len() {
            let (s, mut acc) = scratch[idx];
            let mut j = idx + 1;
            while j < scratch.len() && scratch[j].0 == s {
                acc += scratch[j].1;
                j += 1;
            }
            idx = j;
            if math::abs(acc) <= STORE_TOLERANCE {
                continue;
            }
            match basis.index_of(s) {
                Some(col) => {
                    col_indices.push(col as u32);
                    values.push(acc);
                }
                None => return Err(Error::ConstraintViolation),
            }
        }
        row_offsets.push(col_indices.len());
    }

    Ok(SparseOperator {
        dim,
        row_offsets,
        col_indices,
        values,
        hermitian,
    })
}

/// The 15 one-body generators of SU(4) species rotations, as matrices over
/// `basis`.
///
/// Generators whose Hermitian 4x4 form has imaginary entries (an odd number
/// of "y" factors) are returned as their real representatives R with
/// G = i R; R is real antisymmetric, and commutator norms ||[H, G] v|| =
/// ||[H, R] v|| are unaffected. Order: S_x S_y S_z, T_x T_y T_z, then the
/// nine spin-isospin tensor components (xx, xy, .., zz).
pub fn su4_generators(basis: &SectorBasis) -> Result<Vec<SparseOperator>> {
    su4_generator_matrices()
        .iter()
        .map(|(m, _)| {
            build_operator(
                &[Term::OneBody {
                    matrix: *m,
                    factor: 1.0,
                }],
                basis,
            )
        })
        .collect()
}

/// The species-space matrices behind [`su4_generators`]; the flag marks the
/// Hermitian (true) versus i-times-real-antisymmetric (false) ones.
pub fn su4_generator_matrices() -> Vec<([[f64; 4]; 4], bool)> {
    // 2x2 blocks: halves of the Pauli matrices; y is the real representative
    let half_x = [[0.0, 0.5], [0.5, 0.0]];
    let half_y = [[0.0, 0.5], [-0.5, 0.0]];
    let half_z = [[0.5, 0.0], [0.0, -0.5]];
    let ident = [[1.0, 0.0], [0.0, 1.0]];
    let pauli: [([[f64; 2]; 2], bool); 3] = [(half_x, false), (half_y, true), (half_z, false)];

    // species index = 2 * tau + sigma, so the 4x4 is kron(tau_block, sigma_block)
    let kron = |t: &[[f64; 2]; 2], s: &[[f64; 2]; 2], scale: f64| -> [[f64; 4]; 4] {
        let mut m = [[0.0; 4]; 4];
        for ti in 0..2 {
            for tj in 0..2 {
                for si in 0..2 {
                    for sj in 0..2 {
                        m[2 * ti + si][2 * tj + sj] = scale * t[ti][tj] * s[si][sj];
                    }
                }
            }
        }
        m
    };

    let mut out = Vec::with_capacity(15);
    // spin
    for (s, s_is_y) in pauli.iter() {
        out.push((kron(&ident, s, 1.0), !s_is_y));
    }
    // isospin
    for (t, t_is_y) in pauli.iter() {
        out.push((kron(t, &ident, 1.0), !t_is_y));
    }
    // tensor sigma_a tau_b / 2 = 2 * (sigma_a/2)(tau_b/2); two y factors give
    // a real symmetric product
    for (t, t_is_y) in pauli.iter() {
        for (s, s_is_y) in pauli.iter() {
            let n_y = (*t_is_y as u8) + (*s_is_y as u8);
            out.push((kron(t, s, 2.0), n_y.is_multiple_of(2)));
        }
    }
    out
}

/// One-body matrix of T_+ = sum a†_p a_n (isospin raising); real.
pub fn t_plus_matrix() -> [[f64; 4]; 4] {
    let mut m = [[0.0; 4]; 4];
    m[Species::ProtonUp.index()][Species::NeutronUp.index()] = 1.0;
    m[Species::ProtonDown.index()][Species::NeutronDown.index()] = 1.0;
    m
}

/// One-body matrix of S_+ = sum a†_up a_down (spin raising); real.
pub fn s_plus_matrix() -> [[f64; 4]; 4] {
    let mut m = [[0.0; 4]; 4];
    m[Species::ProtonUp.index()][Species::ProtonDown.index()] = 1.0;
    m[Species::NeutronUp.index()][Species::NeutronDown.index()] = 1.0;
    m
}

/// Diagonal one-body matrix of T_z (proton t_z = +1/2).
pub fn t_z_matrix() -> [[f64; 4]; 4] {
    let mut m = [[0.0; 4]; 4];
    for &sp in SPECIES.iter() {
        m[sp.index()][sp.index()] = sp.two_tz() as f64 / 2.0;
    }
    m
}

/// Diagonal one-body matrix of S_z.
pub fn s_z_matrix() -> [[f64; 4]; 4] {
    let mut m = [[0.0; 4]; 4];
    for &sp in SPECIES.iter() {
        m[sp.index()][sp.index()] = sp.two_sz() as f64 / 2.0;
    }
    m
}
