//! Acceptance run: one PASS/FAIL line per criterion. Exits nonzero if any
//! criterion fails.

use std::time::{Duration, Instant};

use nalgebra::DMatrix;
use ppt_antisym::certify::{certify_bound_entangled, theorem1_bounds, verify_lemma1, CertificateKind};
use ppt_antisym::cli::scan_csv;
use ppt_antisym::constructions::{
    multilevel_singlet, random_antisym_state, random_density, random_pure, random_separable, rng_from_seed, sigma_p,
    werner,
};
use ppt_antisym::linalg::min_eig;
use ppt_antisym::quantum::{antisymmetrize_product, projectors, schmidt_rank, Side, DEFAULT_SCHMIDT_TOL};
use ppt_antisym::sdp::{p_ppt, SdpForm, SolverConfig};
use ppt_antisym::{ComplexMatrix, DensityMatrix, C64};

type NaMat = DMatrix<C64>;

fn to_na(m: &ComplexMatrix) -> NaMat {
    NaMat::from_fn(m.rows(), m.cols(), |i, j| m.as_slice()[i * m.cols() + j])
}

fn swap_oracle(d: usize) -> NaMat {
    let n = d * d;
    NaMat::from_fn(n, n, |r, c| {
        let (i, j) = (c / d, c % d);
        if r == j * d + i {
            C64::new(1.0, 0.0)
        } else {
            C64::new(0.0, 0.0)
        }
    })
}

fn antisym_oracle(d: usize) -> NaMat {
    let n = d * d;
    (NaMat::identity(n, n) - swap_oracle(d)) * C64::new(0.5, 0.0)
}

/// Partial transpose on the second factor by index relabelling.
fn pt_oracle(m: &NaMat, d: usize) -> NaMat {
    let n = d * d;
    NaMat::from_fn(n, n, |r, c| {
        let (i, j) = (r / d, r % d);
        let (k, l) = (c / d, c % d);
        m[(i * d + l, k * d + j)]
    })
}

fn min_eig_oracle(m: &NaMat) -> f64 {
    let h = (m + m.adjoint()) * C64::new(0.5, 0.0);
    h.symmetric_eigenvalues().iter().cloned().fold(f64::INFINITY, f64::min)
}

fn trace_re(m: &NaMat) -> f64 {
    m.trace().re
}

fn max_abs(m: &NaMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn schmidt_rank_oracle(v: &[C64], d: usize) -> usize {
    let m = NaMat::from_fn(d, d, |i, j| v[i * d + j]);
    let s = m.singular_values();
    let top = s.iter().cloned().fold(0.0, f64::max);
    s.iter().filter(|&&x| x > 1e-8 * top.max(1.0)).count()
}

struct Outcome {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn projector_identities() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0f64;
    for d in 2..=6 {
        let p = projectors(d).unwrap();
        let n = d * d;
        let id = NaMat::identity(n, n);
        let v = to_na(&p.swap);
        let ps = to_na(&p.sym);
        let pa = to_na(&p.antisym);
        worst = worst
            .max(max_abs(&(&v - swap_oracle(d))))
            .max(max_abs(&(&v * &v - &id)))
            .max(max_abs(&(&ps + &pa - &id)))
            .max(max_abs(&(&ps * &pa)))
            .max((trace_re(&ps) - (d * (d + 1) / 2) as f64).abs())
            .max((trace_re(&pa) - (d * (d - 1) / 2) as f64).abs());
    }
    let elapsed = start.elapsed();
    Outcome {
        name: "projector identities d=2..6",
        passed: worst <= 1e-12 && elapsed < Duration::from_secs(5),
        detail: format!("max deviation {worst:.2e} (tol 1e-12), {:.3} s (limit 5 s)", elapsed.as_secs_f64()),
    }
}

fn random_rank(d: usize, seed: u64) -> usize {
    1 + (seed as usize) % (d * (d - 1) / 2)
}

fn p_ppt_bracket() -> Outcome {
    let cfg = SolverConfig::default();
    let mut failures = Vec::new();
    let mut slowest = [0.0f64; 5];
    let mut range = [(f64::INFINITY, f64::NEG_INFINITY); 5];
    for d in 2..=4 {
        let lo = 2.0 / ((d * (d + 1) + 2) as f64);
        for seed in 0..20u64 {
            let rho_a = random_antisym_state(d, random_rank(d, seed), seed).unwrap();
            let t = Instant::now();
            match p_ppt(&rho_a, &cfg, SdpForm::Full) {
                Ok(sol) => {
                    slowest[d] = slowest[d].max(t.elapsed().as_secs_f64());
                    range[d] = (range[d].0.min(sol.value), range[d].1.max(sol.value));
                    if sol.value < lo - 1e-6 || sol.value > 0.5 + 1e-6 {
                        failures.push(format!("d={d} seed={seed} p={}", sol.value));
                    }
                }
                Err(e) => failures.push(format!("d={d} seed={seed}: {e}")),
            }
        }
    }
    let within_time = slowest[2] < 60.0 && slowest[3] < 60.0 && slowest[4] < 600.0;
    Outcome {
        name: "p_ppt bracket d=2,3,4 x 20 seeds",
        passed: failures.is_empty() && within_time,
        detail: format!(
            "observed d=2 [{:.6}, {:.6}], d=3 [{:.6}, {:.6}], d=4 [{:.6}, {:.6}]; slowest instance {:.2}/{:.2}/{:.2} s; failures {:?}",
            range[2].0, range[2].1, range[3].0, range[3].1, range[4].0, range[4].1, slowest[2], slowest[3], slowest[4], failures
        ),
    }
}

fn werner_exactness() -> Outcome {
    let cfg = SolverConfig::default();
    let mut worst = 0.0f64;
    let mut errors = Vec::new();
    for d in 2..=4 {
        match p_ppt(&werner(d, 1.0).unwrap(), &cfg, SdpForm::Full) {
            Ok(sol) => worst = worst.max((sol.value - 0.5).abs()),
            Err(e) => errors.push(format!("d={d}: {e}")),
        }
    }
    Outcome {
        name: "Werner exactness p_ppt(P_A/d_A) = 1/2",
        passed: errors.is_empty() && worst <= 1e-5,
        detail: format!("max |p_ppt - 1/2| {worst:.2e} (tol 1e-5); errors {errors:?}"),
    }
}

fn sigma_pbar_ppt() -> Outcome {
    let start = Instant::now();
    let mut worst = f64::INFINITY;
    for d in 2..=6 {
        let pbar = 2.0 / ((d * (d + 1) + 2) as f64);
        for seed in 0..100u64 {
            let rho_a = random_antisym_state(d, random_rank(d, seed), seed).unwrap();
            let s = sigma_p(&rho_a, pbar).unwrap();
            worst = worst.min(min_eig_oracle(&pt_oracle(&to_na(s.matrix()), d)));
        }
    }
    let elapsed = start.elapsed();
    Outcome {
        name: "sigma(pbar) is PPT d=2..6 x 100 seeds",
        passed: worst >= -1e-9 && elapsed < Duration::from_secs(120),
        detail: format!("min eigenvalue of partial transpose {worst:.3e} (tol -1e-9), {:.2} s", elapsed.as_secs_f64()),
    }
}

fn bound_entanglement_generation() -> Outcome {
    let d = 4;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let psi = multilevel_singlet(&[C64::new(h, 0.0), C64::new(h, 0.0)], d).unwrap();
    let rho_a = DensityMatrix::from_pure(ppt_antisym::BipartiteDim::new(d).unwrap(), &psi).unwrap();
    let cert = match certify_bound_entangled(&rho_a, &SolverConfig::default(), SdpForm::Full) {
        Ok(c) => c,
        Err(e) => {
            return Outcome {
                name: "bound entanglement generation d=4 equal amplitudes",
                passed: false,
                detail: format!("certification failed: {e}"),
            }
        }
    };
    let sigma = to_na(cert.state.matrix());
    let lam = min_eig_oracle(&pt_oracle(&sigma, d));
    let pa = antisym_oracle(d);
    let block = &pa * &sigma * &pa;
    let w = trace_re(&block);
    let proj = max_abs(&(block * C64::new(1.0 / w, 0.0) - to_na(rho_a.matrix())));
    let p = cert.p_ppt.unwrap_or(f64::NAN);
    let trace_err = (trace_re(&sigma) - 1.0).abs();
    Outcome {
        name: "bound entanglement generation d=4 equal amplitudes",
        passed: cert.kind == CertificateKind::PptEntangledViaSdp
            && p < 0.5 - 1e-3
            && (w - p).abs() <= 1e-6
            && lam >= -1e-8
            && proj <= 1e-6
            && trace_err <= 1e-9,
        detail: format!(
            "kind {}, p_ppt {p:.9}, Tr(P_A sigma) {w:.9}, min eig PT {lam:.2e}, projection error {proj:.2e}",
            cert.kind.as_str()
        ),
    }
}

fn reduction_equivalence() -> Outcome {
    let cfg = SolverConfig::default();
    let d = 3;
    let mut worst = 0.0f64;
    let mut errors = Vec::new();
    for seed in 0..10u64 {
        let rho_a = random_antisym_state(d, random_rank(d, seed), 100 + seed).unwrap();
        match (p_ppt(&rho_a, &cfg, SdpForm::Full), p_ppt(&rho_a, &cfg, SdpForm::Reduced)) {
            (Ok(a), Ok(b)) => worst = worst.max((a.value - b.value).abs()),
            (a, b) => errors.push(format!("seed={seed}: {:?} {:?}", a.err(), b.err())),
        }
    }
    Outcome {
        name: "full vs reduced form d=3 x 10 seeds",
        passed: errors.is_empty() && worst <= 1e-5,
        detail: format!("max |full - reduced| {worst:.2e} (tol 1e-5); errors {errors:?}"),
    }
}

fn separable_rebuild_suite() -> Outcome {
    let mut worst_weight = 0.0f64;
    let mut worst_block = 0.0f64;
    let mut failures = 0;
    for d in 2..=4 {
        let pa = antisym_oracle(d);
        for seed in 0..100u64 {
            let mix = random_separable(d, 1 + (seed % 20) as usize, seed).unwrap();
            let (out, report) = verify_lemma1(&mix).unwrap();
            let before = to_na(mix.density().matrix());
            let after = to_na(out.density().matrix());
            let b0 = &pa * &before * &pa;
            let b1 = &pa * &after * &pa;
            let w1 = trace_re(&b1);
            let block = max_abs(&(b0.clone() * C64::new(1.0 / trace_re(&b0), 0.0) - b1 * C64::new(1.0 / w1, 0.0)));
            worst_weight = worst_weight.max((w1 - 0.5).abs());
            worst_block = worst_block.max(block);
            let separable = out.terms.iter().all(|(a, b)| a.inner(b).norm() < 1e-9);
            if !report.passed || !separable || (w1 - 0.5).abs() > 1e-9 || block > 1e-9 {
                failures += 1;
            }
        }
    }
    Outcome {
        name: "canonical separable rebuild on 100 mixtures per d=2,3,4",
        passed: failures == 0,
        detail: format!(
            "failures {failures}, max |Tr(P_A rho') - 1/2| {worst_weight:.2e}, max block error {worst_block:.2e} (tol 1e-9)"
        ),
    }
}

fn antisymmetrized_product_suite() -> Outcome {
    let mut checked = 0;
    let mut failures = 0;
    let mut seed = 0u64;
    while checked < 1000 {
        let d = 2 + (seed as usize) % 5;
        let mut rng = rng_from_seed(seed);
        seed += 1;
        let a = random_pure(d, &mut rng);
        let b = random_pure(d, &mut rng);
        if a.inner(&b).norm() > 1.0 - 1e-6 {
            continue;
        }
        let v = antisymmetrize_product(&a, &b);
        let nrm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let v: Vec<C64> = v.iter().map(|z| z / nrm).collect();
        let psi = ppt_antisym::PureState::new(v.clone()).unwrap();
        let lib = schmidt_rank(&psi, d, DEFAULT_SCHMIDT_TOL).unwrap();
        if lib != 2 || schmidt_rank_oracle(&v, d) != 2 {
            failures += 1;
        }
        checked += 1;
    }
    Outcome {
        name: "antisymmetrized product Schmidt rank 2 on 1000 pairs d=2..6",
        passed: failures == 0,
        detail: format!("pairs {checked}, failures {failures}"),
    }
}

fn scan_sanity() -> Outcome {
    let d = 4;
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let psi = multilevel_singlet(&[C64::new(h, 0.0), C64::new(h, 0.0)], d).unwrap();
    let rank = schmidt_rank_oracle(psi.amplitudes(), d);
    let text = scan_csv(&psi, d, 0.05, 1e-9).unwrap();
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let rows: Vec<(f64, f64, bool, bool)> = reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[0].parse().unwrap(), r[1].parse().unwrap(), &r[3] == "true", &r[4] == "true")
        })
        .collect();
    let slice: Vec<_> = rows.iter().filter(|r| (r.0 + r.1 - 1.0).abs() < 1e-9).collect();
    let last_ppt = slice.iter().filter(|r| r.2).map(|r| r.0).fold(f64::NEG_INFINITY, f64::max);
    let first_npt = slice.iter().filter(|r| !r.2).map(|r| r.0).fold(f64::INFINITY, f64::min);
    let monotone = slice.iter().all(|r| r.2 == (r.0 <= last_ppt));
    let interior: Vec<_> = rows.iter().filter(|r| r.0 + r.1 < 1.0 - 1e-9 && r.2 && r.3).collect();
    let oracle_ok = interior.iter().all(|r| {
        let rho = ppt_antisym::constructions::family_two_param(&psi, d, r.0, r.1).unwrap();
        min_eig_oracle(&pt_oracle(&to_na(rho.matrix()), d)) >= -1e-9
    });
    let threshold_ok = (last_ppt - 0.5).abs() <= 0.05 + 1e-12 && (first_npt - 0.5).abs() <= 0.05 + 1e-12;
    Outcome {
        name: "two-parameter family scan d=4 rank-4 step 0.05",
        passed: rank == 4 && threshold_ok && monotone && !interior.is_empty() && oracle_ok,
        detail: format!(
            "rows {}, slice PPT up to p_A = {last_ppt:.2}, NPT from {first_npt:.2}, interior PPT+Schmidt points {} (e.g. {:?})",
            rows.len(),
            interior.len(),
            interior.first().map(|r| (r.0, r.1))
        ),
    }
}

fn pt_spectrum_bound() -> Outcome {
    let mut worst = f64::INFINITY;
    let mut disagreement = 0.0f64;
    for d in 2..=4 {
        for seed in 0..1000u64 {
            let rank = 1 + (seed as usize) % (d * d);
            let rho = random_density(d, rank, seed).unwrap();
            let oracle = min_eig_oracle(&pt_oracle(&to_na(rho.matrix()), d));
            let lib = min_eig(&rho.partial_transpose(Side::B)).unwrap();
            worst = worst.min(oracle);
            disagreement = disagreement.max((oracle - lib).abs());
        }
    }
    Outcome {
        name: "partial-transpose spectrum bound min eig >= -1/2",
        passed: worst >= -0.5 - 1e-9 && disagreement < 1e-9,
        detail: format!("lowest eigenvalue {worst:.6} over 3000 states, library vs oracle {disagreement:.1e}"),
    }
}

fn main() {
    assert_eq!(theorem1_bounds(3).unwrap(), (1.0 / 7.0, 0.5));
    let checks: [fn() -> Outcome; 10] = [
        projector_identities,
        p_ppt_bracket,
        werner_exactness,
        sigma_pbar_ppt,
        bound_entanglement_generation,
        reduction_equivalence,
        separable_rebuild_suite,
        antisymmetrized_product_suite,
        scan_sanity,
        pt_spectrum_bound,
    ];
    let mut failed = 0;
    for check in checks {
        let o = check();
        println!("{} {}: {}", if o.passed { "PASS" } else { "FAIL" }, o.name, o.detail);
        if !o.passed {
            failed += 1;
        }
    }
    println!("acceptance: {} of {} criteria passed", checks.len() - failed, checks.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
