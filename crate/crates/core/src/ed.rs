//! Sparse eigensolution (lowest states) and observable extraction.
//!
//! The eigensolver is Lanczos with full reorthogonalization, run one
//! eigenpair at a time against the deflated complement of everything found
//! so far, which recovers degenerate multiplets copy by copy. Start vectors
//! are deterministic: normalized all-ones plus a small fixed-seed
//! pseudorandom blend (a purely symmetric start provably never reaches
//! degenerate partners in other symmetry sectors), and restarts continue
//! from the best Ritz vector blended the same way. After k states are
//! found, fresh probes of the complement keep running until its floor
//! confirms nothing lower was missed.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::fock::{build_operator, su4_generator_matrices, SectorBasis, SparseOperator, Term};
use crate::linalg::{dense_sym_eigenvalues, sym_tridiag_eigen};
use crate::math::{self, SplitMix64};
use crate::{Error, Result};

/// Default residual tolerance for reported eigenpairs.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Hard cap on total matrix applications.
pub const MAX_ITERATIONS_CAP: usize = 50_000;

#[derive(Debug, Clone)]
pub struct EigenResult {
    /// Lowest eigenvalues, ascending.
    pub energies: Vec<f64>,
    /// Matching unit-norm eigenvectors.
    pub vectors: Vec<Vec<f64>>,
    /// ||H v - E v|| for each reported pair.
    pub residuals: Vec<f64>,
    /// Total number of matrix-vector products spent.
    pub iterations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct LanczosOptions {
    pub tolerance: f64,
    /// Krylov subspace size per restart.
    pub max_subspace: usize,
    /// Total matvec budget; `lowest_states` uses min(10 dim, 50000).
    pub max_iterations: usize,
}

impl LanczosOptions {
    pub fn for_dim(dim: usize, tolerance: f64) -> Self {
        LanczosOptions {
            tolerance,
            max_subspace: dim.min(200),
            max_iterations: (10 * dim.max(1)).clamp(256, MAX_ITERATIONS_CAP),
        }
    }
}

/// The k lowest eigenpairs of a Hermitian sparse operator to residual
/// tolerance `tol`.
///
/// ```
/// use pairkit::ed::lowest_states;
/// use pairkit::fock::SectorBasis;
/// use pairkit::models::{build_hamiltonian, Coupling, ModelClass, ModelSpec};
///
/// let spec = ModelSpec::new(ModelClass::Su4Seniority, 2, 4, Coupling::Raw(1.0));
/// let basis = SectorBasis::enumerate(2, 4).unwrap();
/// let h = build_hamiltonian(&spec, &basis).unwrap();
/// let res = lowest_states(&h, 1, 1e-10).unwrap();
/// assert!((res.energies[0] + 8.0).abs() < 1e-9);
/// ```
pub fn lowest_states(h: &SparseOperator, k: usize, tol: f64) -> Result<EigenResult> {
    lowest_states_with(h, k, LanczosOptions::for_dim(h.dim(), tol))
}

pub fn lowest_states_with(
    h: &SparseOperator,
    k: usize,
    opts: LanczosOptions,
) -> Result<EigenResult> {
    if !h.hermitian() {
        return Err(Error::Domain("eigensolver requires a Hermitian operator"));
    }
    let dim = h.dim();
    let k = k.min(dim);
    if k == 0 {
        return Ok(EigenResult {
            energies: Vec::new(),
            vectors: Vec::new(),
            residuals: Vec::new(),
            iterations: 0,
        });
    }

    let mut locked_vals: Vec<f64> = Vec::with_capacity(k + 1);
    let mut locked_vecs: Vec<Vec<f64>> = Vec::with_capacity(k + 1);
    let mut total_matvecs = 0usize;
    let mut restart = 0usize;
    let scale = h.max_abs().max(1.0);

    // discovery: peel the complement floor one eigenpair at a time
    while locked_vals.len() < k {
        let (theta, y) =
            next_lowest_in_complement(h, &opts, &mut restart, &locked_vecs, &mut total_matvecs)?;
        let pos = locked_vals.partition_point(|&v| v <= theta);
        locked_vals.insert(pos, theta);
        locked_vecs.insert(pos, y);
    }

    // completeness: a deflated run sees one direction per degenerate
    // eigenspace, so probe with fresh starts until the complement floor
    // sits at or above the k-th value
    let mut probes = 0usize;
    while locked_vals.len() < dim {
        if probes > 4 * k + 8 {
            return Err(Error::NoConvergence {
                iterations: total_matvecs,
            });
        }
        probes += 1;
        let (theta, y) =
            next_lowest_in_complement(h, &opts, &mut restart, &locked_vecs, &mut total_matvecs)?;
        if theta < locked_vals[k - 1] - 1e-12 * scale {
            let pos = locked_vals.partition_point(|&v| v <= theta);
            locked_vals.insert(pos, theta);
            locked_vecs.insert(pos, y);
        } else {
            break;
        }
    }
    locked_vals.truncate(k);
    locked_vecs.truncate(k);

    let mut residuals = Vec::with_capacity(k);
    for (val, vec_) in locked_vals.iter().zip(&locked_vecs) {
        let mut hv = vec![0.0; dim];
        h.apply(vec_, &mut hv);
        total_matvecs += 1;
        axpy(&mut hv, -*val, vec_);
        residuals.push(math::sqrt(dot(&hv, &hv)));
    }

    Ok(EigenResult {
        energies: locked_vals,
        vectors: locked_vecs,
        residuals,
        iterations: total_matvecs,
    })
}

/// Lowest eigenpair of H restricted to the orthogonal complement of
/// `locked`, converged to the requested residual tolerance. Runs restarted
/// Lanczos, continuing from the bottom Ritz vector until it converges or
/// the budget runs out.
fn next_lowest_in_complement(
    h: &SparseOperator,
    opts: &LanczosOptions,
    restart: &mut usize,
    locked: &[Vec<f64>],
    total_matvecs: &mut usize,
) -> Result<(f64, Vec<f64>)> {
    let dim = h.dim();
    let mut carry: Option<Vec<f64>> = None;
    loop {
        if *total_matvecs >= opts.max_iterations {
            return Err(Error::NoConvergence {
                iterations: *total_matvecs,
            });
        }
        let m_max = opts.max_subspace.min(dim - locked.len()).max(1);
        let mut q: Vec<Vec<f64>> = Vec::with_capacity(m_max);
        let mut alpha: Vec<f64> = Vec::with_capacity(m_max);
        let mut beta: Vec<f64> = Vec::with_capacity(m_max);
        q.push(start_vector(dim, *restart, carry.take(), locked));
        *restart += 1;
        let mut w = vec![0.0; dim];
        let mut scale = h.max_abs().max(1.0);
        let mut broke_down;

        loop {
            let j = alpha.len();
            h.apply(&q[j], &mut w);
            *total_matvecs += 1;
            let a = dot(&q[j], &w);
            alpha.push(a);
            axpy(&mut w, -a, &q[j]);
            if j > 0 {
                let b_prev = beta[j - 1];
                axpy(&mut w, -b_prev, &q[j - 1]);
            }
            // full reorthogonalization; second pass when cancellation ate a
            // substantial part of the vector
            let pre = math::sqrt(dot(&w, &w));
            for v in locked.iter().chain(q.iter()) {
                let c = dot(v, &w);
                axpy(&mut w, -c, v);
            }
            let mid = math::sqrt(dot(&w, &w));
            if mid < 0.5 * pre {
                for v in locked.iter().chain(q.iter()) {
                    let c = dot(v, &w);
                    axpy(&mut w, -c, v);
                }
            }
            let b = math::sqrt(dot(&w, &w));
            scale = scale.max(math::abs(a)).max(b);
            broke_down = b <= scale * 1e-14;
            let stop = broke_down
                || alpha.len() >= m_max
                || *total_matvecs >= opts.max_iterations
                || bottom_ritz_converged(&alpha, &beta, b, opts.tolerance);
            if stop {
                break;
            }
            beta.push(b);
            let mut next = w.clone();
            scale_in_place(&mut next, 1.0 / b);
            q.push(next);
        }

        // bottom Ritz pair of this run
        let (theta, s) = sym_tridiag_eigen(&alpha, &beta, true)?;
        let s = s.expect("vectors requested");
        let m = alpha.len();
        let mut y = vec![0.0; dim];
        for (jj, qj) in q.iter().enumerate().take(m) {
            axpy(&mut y, s[0][jj], qj);
        }
        for v in locked.iter() {
            let c = dot(v, &y);
            axpy(&mut y, -c, v);
        }
        let norm = math::sqrt(dot(&y, &y));
        if norm < 1e-8 {
            // start vector was swallowed by the locked space; retry fresh
            continue;
        }
        scale_in_place(&mut y, 1.0 / norm);
        let mut hy = vec![0.0; dim];
        h.apply(&y, &mut hy);
        *total_matvecs += 1;
        axpy(&mut hy, -theta[0], &y);
        let res = math::sqrt(dot(&hy, &hy));
        if res <= opts.tolerance {
            return Ok((theta[0], y));
        }
        carry = if broke_down { None } else { Some(y) };
    }
}

/// Cheap bound check: is the bottom Ritz value converged by the
/// beta * |last component| estimate? Evaluated periodically.
fn bottom_ritz_converged(alpha: &[f64], beta: &[f64], b_next: f64, tol: f64) -> bool {
    let m = alpha.len();
    if !m.is_multiple_of(5) && m > 1 {
        return false;
    }
    let Ok((_, Some(vecs))) = sym_tridiag_eigen(alpha, beta, true) else {
        return false;
    };
    b_next * math::abs(vecs[0][m - 1]) <= tol * 0.1
}

/// Deterministic start vector. The base direction is all-ones on the first
/// pass and the carried-over Ritz vector on restarts; a small fixed-seed
/// pseudorandom blend is always added, because a symmetric base vector (or
/// a Krylov continuation) provably never overlaps degenerate partners in
/// other symmetry sectors. Orthogonalized against the locked space.
fn start_vector(
    dim: usize,
    restart: usize,
    carry: Option<Vec<f64>>,
    locked: &[Vec<f64>],
) -> Vec<f64> {
    let mut attempt = 0u64;
    loop {
        let mut v = match (&carry, attempt) {
            (Some(c), 0) => c.clone(),
            _ if restart == 0 && attempt == 0 => vec![1.0; dim],
            _ => vec![0.0; dim],
        };
        let norm0 = math::sqrt(dot(&v, &v));
        if norm0 > 0.0 {
            scale_in_place(&mut v, 1.0 / norm0);
        }
        let mut rng = SplitMix64::new(0x5eed_0001 + restart as u64 * 97 + attempt);
        let blend = if norm0 > 0.0 { 0.05 } else { 1.0 };
        for x in v.iter_mut() {
            *x += blend * rng.next_signed();
        }
        for _ in 0..2 {
            for l in locked {
                let c = dot(l, &v);
                axpy(&mut v, -c, l);
            }
        }
        let norm = math::sqrt(dot(&v, &v));
        if norm > 1e-8 {
            scale_in_place(&mut v, 1.0 / norm);
            return v;
        }
        attempt += 1;
    }
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[inline]
fn axpy(y: &mut [f64], a: f64, x: &[f64]) {
    for (yi, xi) in y.iter_mut().zip(x) {
        *yi += a * xi;
    }
}

#[inline]
fn scale_in_place(v: &mut [f64], s: f64) {
    for x in v.iter_mut() {
        *x *= s;
    }
}

/// Full spectrum through the dense path; small dimensions only.
pub fn dense_spectrum(h: &SparseOperator) -> Result<Vec<f64>> {
    dense_sym_eigenvalues(&h.to_dense(), h.dim())
}

/// Per-level, per-species occupation expectations of a unit-norm state.
#[derive(Debug, Clone)]
pub struct Occupations {
    /// values[level][species]
    pub values: Vec<[f64; 4]>,
}

impl Occupations {
    pub fn total(&self) -> f64 {
        self.values.iter().flatten().sum()
    }

    pub fn get(&self, level: usize, species: usize) -> f64 {
        self.values[level][species]
    }
}

/// <n_{i,species}> for each level and species.
pub fn occupations(state: &[f64], basis: &SectorBasis) -> Occupations {
    let omega = basis.omega();
    let mut values = vec![[0.0f64; 4]; omega];
    for (k, amp) in state.iter().enumerate() {
        if *amp == 0.0 {
            continue;
        }
        let w = amp * amp;
        let s = basis.state(k);
        for (level, row) in values.iter_mut().enumerate() {
            for (species, slot) in row.iter_mut().enumerate() {
                if s.occupied((species * omega + level) as u32) {
                    *slot += w;
                }
            }
        }
    }
    Occupations { values }
}

/// Canonical gap from occupation dispersions,
/// (1/8)(g/omega) sum_{i, species} sqrt(n (1 - n)).
pub fn canonical_gap(occ: &Occupations, g: f64, omega: usize) -> f64 {
    let sum: f64 = occ
        .values
        .iter()
        .flatten()
        .map(|&n| {
            let p = n.clamp(0.0, 1.0);
            math::sqrt(p * (1.0 - p))
        })
        .sum();
    0.125 * (g / omega as f64) * sum
}

/// Odd-even and quasiparticle gaps from a table of ground energies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GapObservables {
    /// (1/2)(2 E(n+1) - E(n) - E(n+2)), centered on the odd system.
    pub delta_oe: f64,
    /// E(n+1) - E(n), the addition energy onto the even base.
    pub e_q: f64,
}

/// Evaluate both gaps around the even base particle number `n_base`
/// (typically a multiple of four at quarter filling).
pub fn gap_observables(energies: &BTreeMap<usize, f64>, n_base: usize) -> Result<GapObservables> {
    let get =
        |n: usize| -> Result<f64> { energies.get(&n).copied().ok_or(Error::MissingSector { n }) };
    let e0 = get(n_base)?;
    let e1 = get(n_base + 1)?;
    let e2 = get(n_base + 2)?;
    Ok(GapObservables {
        delta_oe: 0.5 * (2.0 * e1 - e0 - e2),
        e_q: e1 - e0,
    })
}

/// One excited level with measured sector labels.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LabeledLevel {
    pub energy: f64,
    /// E - E_0.
    pub excitation: f64,
    /// Total spin S from <S^2>, rounded to the nearest half-integer within
    /// 1e-6; `None` when the state straddles a degenerate multiplet or the
    /// basis is constrained.
    pub total_spin: Option<f64>,
    /// Total isospin T, likewise.
    pub total_isospin: Option<f64>,
    /// Quadratic SU(4) Casimir expectation (sum over the 15 generators of
    /// ||G v||^2); on the fully paired branch this equals
    /// lambda2 (lambda2 + 4). `None` on constrained bases.
    pub casimir_su4: Option<f64>,
}

/// Lowest-k levels with excitation energies and measured (S, T, Casimir)
/// labels.
pub fn excitation_spectrum(
    h: &SparseOperator,
    basis: &SectorBasis,
    k: usize,
    tol: f64,
) -> Result<Vec<LabeledLevel>> {
    let eig = lowest_states(h, k, tol)?;
    let labels_available = basis.constraint().is_none();
    let generators: Option<Vec<SparseOperator>> = if labels_available {
        Some(
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
                .collect::<Result<_>>()?,
        )
    } else {
        None
    };

    let e0 = eig.energies.first().copied().unwrap_or(0.0);
    let mut out = Vec::with_capacity(eig.energies.len());
    for (energy, vector) in eig.energies.iter().zip(&eig.vectors) {
        let (mut s, mut t, mut c2) = (None, None, None);
        if let Some(gens) = &generators {
            // <G^2> = ||G v||^2 for each generator (real representation)
            let sq: Vec<f64> = gens
                .iter()
                .map(|g| {
                    let gv = g.apply_alloc(vector);
                    dot(&gv, &gv)
                })
                .collect();
            let s2 = sq[0] + sq[1] + sq[2];
            let t2 = sq[3] + sq[4] + sq[5];
            c2 = Some(sq.iter().sum());
            s = round_to_half_integer_label(s2);
            t = round_to_half_integer_label(t2);
        }
        out.push(LabeledLevel {
            energy: *energy,
            excitation: energy - e0,
            total_spin: s,
            total_isospin: t,
            casimir_su4: c2,
        });
    }
    Ok(out)
}

/// Solve j(j+1) = expectation and round to the nearest half-integer when the
/// fit is within 1e-6.
fn round_to_half_integer_label(expectation: f64) -> Option<f64> {
    if expectation < -1e-9 {
        return None;
    }
    let j = 0.5 * (-1.0 + math::sqrt(1.0 + 4.0 * expectation.max(0.0)));
    let rounded = math::floor(2.0 * j + 0.5) / 2.0;
    (math::abs(j - rounded) <= 1e-6).then_some(rounded)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::SparseOperator;
    use crate::models::{build_hamiltonian, Coupling, ModelClass, ModelSpec};

    fn diagonal_operator(values: &[f64]) -> SparseOperator {
        let n = values.len();
        let mut dense = vec![0.0; n * n];
        for (i, v) in values.iter().enumerate() {
            dense[i * n + i] = *v;
        }
        SparseOperator::from_dense(&dense, n)
    }

    #[test]
    fn lanczos_on_diagonal_matrix() {
        let vals: Vec<f64> = (0..60).map(|i| i as f64).collect();
        let h = diagonal_operator(&vals);
        let res = lowest_states(&h, 2, 1e-10).unwrap();
        assert!((res.energies[0] - 0.0).abs() < 1e-9);
        assert!((res.energies[1] - 1.0).abs() < 1e-9);
        assert!(res.residuals.iter().all(|&r| r <= 1e-10));
    }

    #[test]
    fn lanczos_recovers_degenerate_multiplet() {
        // six-fold pair multiplet at -G on the single-level sector
        let basis = SectorBasis::enumerate(1, 2).unwrap();
        let spec = ModelSpec::new(ModelClass::Su4Seniority, 1, 2, Coupling::Raw(1.0));
        let h = build_hamiltonian(&spec, &basis).unwrap();
        let res = lowest_states(&h, 6, 1e-10).unwrap();
        assert_eq!(res.energies.len(), 6);
        for e in &res.energies {
            assert!((e + 1.0).abs() < 1e-9, "eigenvalue {e}");
        }
        // locked vectors stay orthonormal
        for i in 0..6 {
            for j in 0..=i {
                let d = dot(&res.vectors[i], &res.vectors[j]);
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((d - expect).abs() < 1e-8, "overlap {i},{j} = {d}");
            }
        }
    }

    #[test]
    fn lanczos_orders_degenerate_copies_found_late() {
        // two degenerate pair condensates (protons / neutrons) below a big
        // zero-energy block; the second copy must surface before the zeros
        let basis = SectorBasis::enumerate(2, 2).unwrap();
        let spec = ModelSpec::new(ModelClass::Identical, 2, 2, Coupling::Bulk(0.6));
        let h = build_hamiltonian(&spec, &basis).unwrap();
        let res = lowest_states(&h, 3, 1e-10).unwrap();
        assert!((res.energies[0] + 0.6).abs() < 1e-9, "{:?}", res.energies);
        assert!((res.energies[1] + 0.6).abs() < 1e-9, "{:?}", res.energies);
        assert!(res.energies[2].abs() < 1e-9, "{:?}", res.energies);
    }

    #[test]
    fn lanczos_su4_seniority_ground() {
        let basis = SectorBasis::enumerate(2, 4).unwrap();
        let spec = ModelSpec::new(ModelClass::Su4Seniority, 2, 4, Coupling::Raw(1.0));
        let h = build_hamiltonian(&spec, &basis).unwrap();
        let res = lowest_states(&h, 3, 1e-10).unwrap();
        assert!((res.energies[0] + 8.0).abs() < 1e-9, "{}", res.energies[0]);
        for w in res.energies.windows(2) {
            assert!(w[0] <= w[1] + 1e-12);
        }
    }

    #[test]
    fn occupations_noninteracting_ground() {
        let spec = ModelSpec::new(ModelClass::Su4Rg, 4, 4, Coupling::Raw(0.0));
        let basis = SectorBasis::enumerate(4, 4).unwrap();
        let h = build_hamiltonian(&spec, &basis).unwrap();
        let res = lowest_states(&h, 1, 1e-10).unwrap();
        let occ = occupations(&res.vectors[0], &basis);
        for species in 0..4 {
            assert!((occ.get(0, species) - 1.0).abs() < 1e-10);
            for level in 1..4 {
                assert!(occ.get(level, species).abs() < 1e-10);
            }
        }
        assert!((occ.total() - 4.0).abs() < 1e-10);
    }

    #[test]
    fn occupation_sum_rule_on_excited_states() {
        let spec = ModelSpec::new(ModelClass::Su4Rg, 3, 4, Coupling::Bulk(0.3));
        let basis = SectorBasis::enumerate(3, 4).unwrap();
        let h = build_hamiltonian(&spec, &basis).unwrap();
        let res = lowest_states(&h, 4, 1e-10).unwrap();
        for v in &res.vectors {
            let occ = occupations(v, &basis);
            assert!((occ.total() - 4.0).abs() < 1e-10);
            for n in occ.values.iter().flatten() {
                assert!((-1e-12..=1.0 + 1e-12).contains(n));
            }
        }
    }

    #[test]
    fn canonical_gap_closed_cases() {
        // all occupations 0 or 1: no dispersion
        let occ = Occupations {
            values: vec![[1.0, 1.0, 0.0, 0.0]; 3],
        };
        assert_eq!(canonical_gap(&occ, 1.0, 3), 0.0);
        // every state at n = 1/2, g = 1: (1/8)(1/omega)(4 omega)(1/2) = 1/4
        let occ = Occupations {
            values: vec![[0.5; 4]; 7],
        };
        assert!((canonical_gap(&occ, 1.0, 7) - 0.25).abs() < 1e-14);
    }

    #[test]
    fn gap_observables_noninteracting_is_gapless() {
        let mut table = BTreeMap::new();
        table.insert(4usize, 0.0);
        table.insert(5usize, 1.0 / 16.0);
        table.insert(6usize, 2.0 / 16.0);
        let gaps = gap_observables(&table, 4).unwrap();
        assert_eq!(gaps.delta_oe, 0.0);
        assert_eq!(gaps.e_q, 1.0 / 16.0);
        assert!(matches!(
            gap_observables(&table, 6),
            Err(Error::MissingSector { n: 7 })
        ));
    }

    #[test]
    fn labels_on_isovector_pair_states() {
        // two-particle isovector ground: spin singlet, isospin triplet
        let spec = ModelSpec::new(ModelClass::Isovector, 2, 2, Coupling::Raw(1.0));
        let basis = SectorBasis::enumerate(2, 2).unwrap();
        let h = build_hamiltonian(&spec, &basis).unwrap();
        let levels = excitation_spectrum(&h, &basis, 1, 1e-10).unwrap();
        assert!((levels[0].energy + 2.0).abs() < 1e-9);
        assert_eq!(levels[0].total_spin, Some(0.0));
        assert_eq!(levels[0].total_isospin, Some(1.0));
    }
}
