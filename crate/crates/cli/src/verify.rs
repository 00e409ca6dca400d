//! The `verify` task: a curated run of the library's structural invariants,
//! printed one PASS/FAIL line per property.

use pairkit::bcs;
use pairkit::ed;
use pairkit::extrapolate::{self, SeriesPoint};
use pairkit::fock::{
    build_operator, pair_annihilate, pair_create, su4_generators, PairChannel, SectorBasis,
    SectorConstraint, Term,
};
use pairkit::math::{binomial, SplitMix64};
use pairkit::models::{
    build_hamiltonian, equally_spaced_levels, spin32_relabel, Coupling, ModelClass, ModelSpec,
};
use pairkit::reference;
use pairkit::seniority;

type Check = Result<(), String>;

pub fn run_all() -> Vec<(&'static str, Check)> {
    vec![
        ("basis-enumeration", basis_enumeration()),
        ("pair-channel-completeness", pair_channel_completeness()),
        ("anticommutation-signs", anticommutation_signs()),
        ("su4-invariance", su4_invariance()),
        ("spin32-equivalence", spin32_equivalence()),
        ("seniority-vs-ed", seniority_vs_ed()),
        ("collective-excitation", collective_excitation()),
        ("bcs-closed-form-vs-quadrature", bcs_closed_vs_quadrature()),
        ("bcs-bulk-constants", bcs_bulk_constants()),
        ("bcs-discrete-continuum-limit", bcs_discrete_limit()),
        ("lanczos-vs-dense", lanczos_vs_dense()),
        ("occupation-sum-rules", occupation_sum_rules()),
        ("fit-exact-recovery", fit_exact_recovery()),
        ("bulk-series-refit", bulk_series_refit()),
    ]
}

fn ensure(cond: bool, detail: impl Into<String>) -> Check {
    if cond {
        Ok(())
    } else {
        Err(detail.into())
    }
}

fn err_str(e: impl core::fmt::Display) -> String {
    e.to_string()
}

fn basis_enumeration() -> Check {
    for (omega, n) in [(1usize, 2usize), (2, 3), (2, 4), (3, 5)] {
        let basis = SectorBasis::enumerate(omega, n).map_err(err_str)?;
        let expect = binomial(4 * omega, n).unwrap() as usize;
        ensure(
            basis.dim() == expect,
            format!("dim {} != C({}, {n}) = {expect}", basis.dim(), 4 * omega),
        )?;
        for k in 0..basis.dim() {
            ensure(
                basis.index_of(basis.state(k)) == Some(k),
                format!("index round-trip failed at {k}"),
            )?;
        }
    }
    Ok(())
}

fn pair_channel_completeness() -> Check {
    // trace of sum_mu P†_mu P_mu over the one-level two-particle space is 3
    let basis = SectorBasis::enumerate(1, 2).map_err(err_str)?;
    let terms: Vec<Term> = PairChannel::ISOVECTOR
        .iter()
        .map(|&channel| Term::PairHop {
            channel,
            factor: 1.0,
        })
        .collect();
    let op = build_operator(&terms, &basis).map_err(err_str)?;
    let dense = op.to_dense();
    let trace: f64 = (0..basis.dim()).map(|k| dense[k * basis.dim() + k]).sum();
    ensure((trace - 3.0).abs() < 1e-12, format!("trace {trace} != 3"))?;

    // transpose identity on random states
    let omega = 3;
    let basis = SectorBasis::enumerate(omega, 4).map_err(err_str)?;
    let mut rng = SplitMix64::new(23);
    for _ in 0..30 {
        let s = basis.state((rng.next_u64() % basis.dim() as u64) as usize);
        for channel in PairChannel::ALL_PQ.iter().chain(PairChannel::SPIN32.iter()) {
            for level in 0..omega {
                for (s2, amp) in pair_create(*channel, level, omega, s) {
                    let back: f64 = pair_annihilate(*channel, level, omega, s2)
                        .into_iter()
                        .filter(|(b, _)| *b == s)
                        .map(|(_, a)| a)
                        .sum();
                    ensure(
                        (back - amp).abs() < 1e-14,
                        format!("transpose mismatch on {channel:?}"),
                    )?;
                }
            }
        }
    }
    Ok(())
}

fn anticommutation_signs() -> Check {
    let omega = 4;
    let basis = SectorBasis::enumerate(omega, 5).map_err(err_str)?;
    let mut rng = SplitMix64::new(29);
    for _ in 0..100 {
        let s = basis.state((rng.next_u64() % basis.dim() as u64) as usize);
        let x = (rng.next_u64() % (4 * omega) as u64) as u32;
        let y = (rng.next_u64() % (4 * omega) as u64) as u32;
        if x == y || s.occupied(x) || s.occupied(y) {
            continue;
        }
        let (s1, g1) = s.create(y).unwrap();
        let (s2, g2) = s1.create(x).unwrap();
        let (s3, g3) = s2.annihilate(x).unwrap();
        let (s4, g4) = s3.annihilate(y).unwrap();
        ensure(
            s4 == s && g1 * g2 * g3 * g4 == 1.0,
            "sign bookkeeping broken",
        )?;
    }
    Ok(())
}

fn su4_invariance() -> Check {
    let omega = 2;
    let n = 4;
    let basis = SectorBasis::enumerate(omega, n).map_err(err_str)?;
    let gens = su4_generators(&basis).map_err(err_str)?;
    let mut rng = SplitMix64::new(31);
    let dim = basis.dim();
    let vectors: Vec<Vec<f64>> = (0..3)
        .map(|_| {
            let mut v: Vec<f64> = (0..dim).map(|_| rng.next_signed()).collect();
            let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
            v.iter_mut().for_each(|x| *x /= norm);
            v
        })
        .collect();
    let commutator =
        |h: &pairkit::fock::SparseOperator, g: &pairkit::fock::SparseOperator, v: &[f64]| -> f64 {
            let hgv = h.apply_alloc(&g.apply_alloc(v));
            let ghv = g.apply_alloc(&h.apply_alloc(v));
            hgv.iter()
                .zip(&ghv)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt()
        };
    for class in [ModelClass::Su4Seniority, ModelClass::Su4Rg] {
        let spec = ModelSpec::new(class, omega, n, Coupling::Bulk(0.8));
        let h = build_hamiltonian(&spec, &basis).map_err(err_str)?;
        let scale = h.max_abs();
        for (gi, g) in gens.iter().enumerate() {
            for v in &vectors {
                let c = commutator(&h, g, v);
                ensure(
                    c <= 1e-12 * scale,
                    format!("{}: generator {gi} commutator {c:e}", class.name()),
                )?;
            }
        }
    }
    // control: the identical-particle Hamiltonian must break isospin raising
    let spec = ModelSpec::new(ModelClass::Identical, omega, n, Coupling::Bulk(0.8));
    let h = build_hamiltonian(&spec, &basis).map_err(err_str)?;
    let t_plus = build_operator(
        &[Term::OneBody {
            matrix: pairkit::fock::t_plus_matrix(),
            factor: 1.0,
        }],
        &basis,
    )
    .map_err(err_str)?;
    ensure(
        commutator(&h, &t_plus, &vectors[0]) > 1e-3,
        "identical-particle Hamiltonian unexpectedly SU(4)-invariant",
    )
}

fn spin32_equivalence() -> Check {
    for n in [2usize, 4] {
        let su4 = ModelSpec::new(ModelClass::Su4Seniority, 2, n, Coupling::Raw(1.0));
        let relabeled = spin32_relabel(&su4).map_err(err_str)?;
        let basis = SectorBasis::enumerate(2, n).map_err(err_str)?;
        let a = ed::dense_spectrum(&build_hamiltonian(&su4, &basis).map_err(err_str)?)
            .map_err(err_str)?;
        let b = ed::dense_spectrum(&build_hamiltonian(&relabeled, &basis).map_err(err_str)?)
            .map_err(err_str)?;
        for (x, y) in a.iter().zip(&b) {
            ensure(
                (x - y).abs() < 1e-10,
                format!("n={n}: spectra differ by {}", (x - y).abs()),
            )?;
        }
    }
    Ok(())
}

fn seniority_vs_ed() -> Check {
    let ground = |class: ModelClass, omega: usize, n: usize| -> Result<f64, String> {
        let spec = ModelSpec::new(class, omega, n, Coupling::Raw(1.0));
        let basis = SectorBasis::enumerate(omega, n).map_err(err_str)?;
        let h = build_hamiltonian(&spec, &basis).map_err(err_str)?;
        Ok(ed::lowest_states(&h, 1, 1e-10).map_err(err_str)?.energies[0])
    };
    // SU(4): lambda2 = 0 or 1 by N mod 4
    for (omega, n) in [(2usize, 2usize), (2, 4), (3, 4), (3, 6)] {
        let lambda2 = if n % 4 == 0 { 0 } else { 1 };
        let formula = seniority::energy_su4(1.0, omega, n, lambda2).map_err(err_str)?;
        let e = ground(ModelClass::Su4Seniority, omega, n)?;
        ensure(
            (e - formula).abs() < 1e-9,
            format!("su4 omega={omega} n={n}: {e} vs {formula}"),
        )?;
    }
    // isovector: even ground labels (v=0, T = 0 or 1), odd blocked ground
    for (omega, n) in [(2usize, 2usize), (2, 4), (3, 4), (3, 6)] {
        let t = if n % 4 == 0 { 0.0 } else { 1.0 };
        let formula = seniority::energy_isovector(1.0, omega, n, 0, t).map_err(err_str)?;
        let e = ground(ModelClass::Isovector, omega, n)?;
        ensure(
            (e - formula).abs() < 1e-9,
            format!("isovector omega={omega} n={n}: {e} vs {formula}"),
        )?;
    }
    for (omega, n) in [(2usize, 3usize), (3, 5)] {
        let formula = seniority::energy_isovector_odd_ground(1.0, omega, n).map_err(err_str)?;
        let e = ground(ModelClass::Isovector, omega, n)?;
        ensure(
            (e - formula).abs() < 1e-9,
            format!("isovector odd omega={omega} n={n}: {e} vs {formula}"),
        )?;
    }
    // identical: ground is the best proton/neutron split of the formula
    for (omega, n) in [(2usize, 2usize), (2, 4), (3, 4)] {
        let mut best = f64::INFINITY;
        for np in 0..=n {
            let nn = n - np;
            if np > 2 * omega || nn > 2 * omega {
                continue;
            }
            let e = seniority::energy_identical(1.0, omega, np, np % 2)
                .and_then(|a| Ok(a + seniority::energy_identical(1.0, omega, nn, nn % 2)?));
            if let Ok(e) = e {
                best = best.min(e);
            }
        }
        let e = ground(ModelClass::Identical, omega, n)?;
        ensure(
            (e - best).abs() < 1e-9,
            format!("identical omega={omega} n={n}: {e} vs {best}"),
        )?;
    }
    Ok(())
}

fn collective_excitation() -> Check {
    // the lowest T >= 2 excitation of the isovector model costs exactly
    // 3 g / omega; located through a 2T_z = 4 sector, which forces T >= 2
    for omega in [2usize, 3] {
        let n = 4;
        let spec = ModelSpec::new(ModelClass::Isovector, omega, n, Coupling::Raw(1.0));
        let basis = SectorBasis::enumerate(omega, n).map_err(err_str)?;
        let h = build_hamiltonian(&spec, &basis).map_err(err_str)?;
        let e0 = ed::lowest_states(&h, 1, 1e-10).map_err(err_str)?.energies[0];
        let sector = SectorBasis::enumerate_constrained(omega, n, SectorConstraint::sz_tz(0, 4))
            .map_err(err_str)?;
        let h_t2 = build_hamiltonian(&spec, &sector).map_err(err_str)?;
        let e_t2 = ed::lowest_states(&h_t2, 1, 1e-10)
            .map_err(err_str)?
            .energies[0];
        let expected = 3.0; // 3 G at G = 1
        ensure(
            (e_t2 - e0 - expected).abs() < 1e-9,
            format!(
                "omega={omega}: collective excitation {} vs {expected}",
                e_t2 - e0
            ),
        )?;
    }
    Ok(())
}

fn bcs_closed_vs_quadrature() -> Check {
    for il in 0..5 {
        for &d in &[1e-4, 1e-3, 1e-2, 0.1] {
            let l = 0.05 + 0.1 * il as f64;
            let gap = (bcs::gap_lhs(l, d) - bcs::gap_integral_quadrature(l, d)).abs();
            let num = (bcs::number_lhs(l, d) - bcs::number_integral_quadrature(l, d)).abs();
            ensure(
                gap <= 1e-12 && num <= 1e-12,
                format!("lambda={l} delta={d}: gap {gap:e} number {num:e}"),
            )?;
        }
    }
    Ok(())
}

fn bcs_bulk_constants() -> Check {
    let sol = bcs::solve_bulk(0.15, 1.0).map_err(err_str)?;
    let e_q = bcs::quasiparticle_energy(reference::BULK_EPS_Q, sol.lambda, sol.delta);
    ensure(
        (sol.lambda - reference::BULK_LAMBDA).abs() < 5e-8,
        format!("lambda {}", sol.lambda),
    )?;
    ensure(
        (sol.delta - reference::BULK_DELTA).abs() < 5e-9,
        format!("delta {}", sol.delta),
    )?;
    ensure(
        (sol.energy_per_particle - reference::BULK_E_PER_N).abs() < 5e-9,
        format!("e_per_n {}", sol.energy_per_particle),
    )?;
    ensure(
        (e_q - reference::BULK_E_Q).abs() < 5e-6,
        format!("e_q {e_q}"),
    )
}

fn bcs_discrete_limit() -> Check {
    let bulk = bcs::solve_bulk(0.15, 1.0).map_err(err_str)?;
    let omega = 2000;
    let levels = equally_spaced_levels(omega);
    let sol = bcs::solve_discrete(&levels, 0.15, omega, omega).map_err(err_str)?;
    ensure(
        (sol.lambda - bulk.lambda).abs() < 1e-6
            && (sol.delta - bulk.delta).abs() < 1e-6
            && (sol.energy_per_particle - bulk.energy_per_particle).abs() < 1e-6,
        format!(
            "omega=2000 deviations: {:e} {:e} {:e}",
            (sol.lambda - bulk.lambda).abs(),
            (sol.delta - bulk.delta).abs(),
            (sol.energy_per_particle - bulk.energy_per_particle).abs()
        ),
    )
}

fn lanczos_vs_dense() -> Check {
    let spec = ModelSpec::new(ModelClass::Su4Rg, 3, 4, Coupling::Bulk(0.15));
    let basis = SectorBasis::enumerate(3, 4).map_err(err_str)?;
    let h = build_hamiltonian(&spec, &basis).map_err(err_str)?;
    let sparse = ed::lowest_states(&h, 5, 1e-10).map_err(err_str)?;
    let dense = ed::dense_spectrum(&h).map_err(err_str)?;
    for (i, (a, b)) in sparse.energies.iter().zip(&dense).enumerate() {
        ensure((a - b).abs() < 1e-10, format!("level {i}: {a} vs {b}"))?;
    }
    Ok(())
}

fn occupation_sum_rules() -> Check {
    let spec = ModelSpec::new(ModelClass::Su4Rg, 3, 4, Coupling::Bulk(0.3));
    let basis = SectorBasis::enumerate(3, 4).map_err(err_str)?;
    let h = build_hamiltonian(&spec, &basis).map_err(err_str)?;
    let res = ed::lowest_states(&h, 1, 1e-10).map_err(err_str)?;
    let occ = ed::occupations(&res.vectors[0], &basis);
    ensure((occ.total() - 4.0).abs() < 1e-10, "sum rule broken")?;
    for level in 0..3 {
        for species in 1..4 {
            ensure(
                (occ.get(level, species) - occ.get(level, 0)).abs() < 1e-10,
                "species symmetry broken",
            )?;
        }
    }
    Ok(())
}

fn fit_exact_recovery() -> Check {
    let coeffs = [1.0, 2.0, 3.0, 4.0];
    let eval = |n: f64| coeffs[0] + coeffs[1] / n + coeffs[2] / (n * n) + coeffs[3] / (n * n * n);
    let points: Vec<SeriesPoint> = (1..=10)
        .map(|i| {
            let n = 10.0 * i as f64;
            SeriesPoint::new(n, eval(n))
        })
        .collect();
    let fit = extrapolate::fit_cubic_inverse(&points).map_err(err_str)?;
    for (got, want) in fit.coefficients.iter().zip(&coeffs) {
        ensure(
            ((got - want) / want).abs() < 1e-10,
            format!("coefficient {got} vs {want}"),
        )?;
    }
    let mut reversed = points.clone();
    reversed.reverse();
    let fit2 = extrapolate::fit_cubic_inverse(&reversed).map_err(err_str)?;
    for (a, b) in fit.coefficients.iter().zip(&fit2.coefficients) {
        ensure((a - b).abs() < 1e-10 * a.abs().max(1.0), "reorder variance")?;
    }
    Ok(())
}

fn bulk_series_refit() -> Check {
    // regenerate the published exact-series coefficient sets and refit
    for (name, coeffs) in [
        ("e_per_n", reference::E_PER_N_EXACT),
        ("e_q", reference::E_Q_EXACT),
        ("delta_oe", reference::DELTA_OE_EXACT),
        ("delta_c", reference::DELTA_C_EXACT),
    ] {
        let points: Vec<SeriesPoint> = reference::SERIES_N
            .iter()
            .map(|&n| {
                let n = n as f64;
                SeriesPoint::new(n, extrapolate::eval_inverse_powers(&coeffs, n))
            })
            .collect();
        let fit = extrapolate::fit_cubic_inverse(&points).map_err(err_str)?;
        for (got, want) in fit.coefficients.iter().zip(&coeffs) {
            ensure(
                ((got - want) / want).abs() < 1e-8,
                format!("{name}: {got} vs {want}"),
            )?;
        }
    }
    Ok(())
}
