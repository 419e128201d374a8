//! Acceptance suite: one test per criterion, each printing a single
//! `criterion N: PASS|FAIL` line with the measured figure and its tolerance.
//!
//! The lines go straight to the stderr handle, which the test harness does
//! not capture, so they appear in a plain `cargo test` run.

use std::f64::consts::{FRAC_PI_2, PI};
use std::io::Write;

use num_complex::Complex64;
use qoptics::detection::{pair_covariance, sample_homodyne_scan};
use qoptics::multimode::{epr_pair, epr_variances};
use qoptics::ordering::{g2_zero, g2_zero_fock, ordering_energy_table, sym_moments_gaussian};
use qoptics::phase_space::fock::gaussian_to_fock;
use qoptics::spectra::{fit_lorentzian, synthesize_member, white_fm_lorentzian};
use qoptics::*;

fn report(id: &str, pass: bool, detail: String) {
    let verdict = if pass { "PASS" } else { "FAIL" };
    // A failed write to stderr leaves the assertion below to report.
    let _ = writeln!(std::io::stderr(), "criterion {id}: {verdict} ({detail})");
    assert!(pass, "criterion {id} failed: {detail}");
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn state(spec: StateSpec) -> State {
    make_state(&spec).unwrap()
}

#[test]
fn criterion_01_white_fm_linewidth() {
    let s_nu0 = 5.0;
    let model = NoiseModel::WhiteFm {
        amplitude: 1.0,
        s_nu0,
    };
    let mut mean: Option<SpectralDensity> = None;
    let mut acc: Vec<f64> = Vec::new();
    for member in 0..100 {
        let series = synthesize_member(&model, 10.0, 1e-4, 2024, member).unwrap();
        let sd = field_spectrum(&series).unwrap();
        if acc.is_empty() {
            acc = vec![0.0; sd.len()];
        }
        for (a, v) in acc.iter_mut().zip(sd.values()) {
            *a += v / 100.0;
        }
        mean.get_or_insert(sd);
    }
    let freqs = mean.unwrap().freqs().to_vec();
    let avg = SpectralDensity::new(freqs, acc, SpectralKind::Field).unwrap();
    let fit = fit_lorentzian(&avg).unwrap();
    let want = PI * s_nu0;
    let rel = (fit.fwhm / want - 1.0).abs();
    report(
        "1",
        rel <= 0.10,
        format!(
            "fitted FWHM {:.4} Hz vs {:.4} Hz, rel err {:.4} <= 0.10",
            fit.fwhm, want, rel
        ),
    );
}

#[test]
fn criterion_02_lineshape_pipeline() {
    let s_nu0 = 5.0;
    let (dtau, k, m) = (1e-4, 5000usize, 1usize << 20);
    let df = 1.0 / (m as f64 * dtau);
    let lags: Vec<f64> = (0..=k).map(|i| i as f64 * dtau).collect();
    let amp = CorrelationFunction::from_real(lags, &vec![1.0; k + 1], CorrelationKind::Amplitude)
        .unwrap();
    let freqs: Vec<f64> = (1..m / 2).map(|j| j as f64 * df).collect();
    let values = freqs.iter().map(|f| s_nu0 / (f * f)).collect();
    let phase = SpectralDensity::new(freqs, values, SpectralKind::Phase).unwrap();
    let line = lineshape_from_noise(&amp, &phase, 0.0).unwrap();
    let dnu = line.freqs()[1] - line.freqs()[0];
    let l1: f64 = line
        .freqs()
        .iter()
        .zip(line.values())
        .map(|(f, v)| (v - white_fm_lorentzian(*f, 1.0, s_nu0)).abs() * dnu)
        .sum();
    // Total power of the closed form is A² = 1.
    report(
        "2",
        l1 <= 0.03,
        format!("L1 {l1:.5} <= 0.03 of total power"),
    );
}

fn pulse(model: NoiseModel) -> ComplexTimeSeries {
    synthesize_field(&model, 200.0, 0.01, 0).unwrap()
}

#[test]
fn criterion_03a_pulse_spectra_agree() {
    let gamma = 1.0;
    let spectra: Vec<SpectralDensity> = [
        NoiseModel::E1 { gamma },
        NoiseModel::E2 { gamma },
        NoiseModel::E3 { gamma },
    ]
    .into_iter()
    .map(|m| field_spectrum(&pulse(m)).unwrap())
    .collect();
    let peak = spectra.iter().map(|s| s.peak().1).fold(0.0, f64::max);
    let mut worst = 0.0f64;
    for a in 0..3 {
        for b in a + 1..3 {
            for (x, y) in spectra[a].values().iter().zip(spectra[b].values()) {
                worst = worst.max((x - y).abs() / peak);
            }
        }
    }
    report(
        "3a",
        worst <= 0.01,
        format!("max pairwise spectral difference {worst:.4} of peak <= 0.01"),
    );
}

#[test]
fn criterion_03b_two_photon_correlations_differ() {
    let gamma = 1.0;
    let g: Vec<CorrelationFunction> = [
        NoiseModel::E1 { gamma },
        NoiseModel::E2 { gamma },
        NoiseModel::E3 { gamma },
    ]
    .into_iter()
    .map(|m| correlation(&pulse(m), CorrelationKind::G2TwoPhoton, 5.0).unwrap())
    .collect();
    let peak = g
        .iter()
        .flat_map(|f| f.values().iter().map(|v| v.norm()))
        .fold(0.0, f64::max);
    let mut best = 0.0f64;
    for a in 0..3 {
        for b in a + 1..3 {
            for (x, y) in g[a].values().iter().zip(g[b].values()) {
                best = best.max((x - y).norm() / peak);
            }
        }
    }
    report(
        "3b",
        best > 0.10,
        format!("largest G2_TP difference {best:.4} of peak > 0.10"),
    );
}

#[test]
fn criterion_04_wigner_closed_forms() {
    let ax = Axis::symmetric(5.0, 201);
    let origin = 100;
    let w = |spec| wigner(&state(spec), &ax, &ax).unwrap();
    let vac = w(StateSpec::Vacuum).get(origin, origin);
    let f1 = w(StateSpec::Fock(1)).get(origin, origin);
    let th = w(StateSpec::Thermal(1.0)).get(origin, origin);
    let coh = w(StateSpec::Coherent(c(1.0, 1.0)));
    let coh_err = ax
        .iter()
        .enumerate()
        .flat_map(|(i, &x)| ax.iter().enumerate().map(move |(j, &p)| (i, j, x, p)))
        .map(|(i, j, x, p)| {
            (coh.get(i, j) - 2.0 / PI * (-2.0 * ((x - 1.0).powi(2) + (p - 1.0).powi(2))).exp())
                .abs()
        })
        .fold(0.0, f64::max);

    let cat = w(StateSpec::Cat {
        alpha: c(2.0, 0.0),
        even: true,
    });
    let norm = 2.0 * (PI / 2.0).sqrt() * (1.0 + (-8.0f64).exp());
    let mp = marginal(&cat, FRAC_PI_2).unwrap();
    let p_err = mp
        .x
        .iter()
        .zip(&mp.density)
        .map(|(p, d)| (d - 2.0 * (4.0 * p).cos().powi(2) * (-2.0 * p * p).exp() * 2.0 / norm).abs())
        .fold(0.0, f64::max);
    let mx = marginal(&cat, 0.0).unwrap();
    let x_err =
        mx.x.iter()
            .zip(&mx.density)
            .map(|(x, d)| {
                let want = (-2.0 * (x - 2.0).powi(2)).exp()
                    + (-2.0 * (x + 2.0).powi(2)).exp()
                    + 2.0 * (-2.0 * x * x - 8.0).exp();
                (d - want / norm).abs()
            })
            .fold(0.0, f64::max);

    let pass = (vac - 2.0 / PI).abs() <= 1e-6
        && (f1 + 2.0 / PI).abs() <= 1e-6
        && (th - 1.0 / (1.5 * PI)).abs() <= 1e-6
        && coh_err <= 1e-6
        && p_err <= 1e-4
        && x_err <= 1e-4;
    report(
        "4",
        pass,
        format!(
            "W0(0,0) {vac:.9}, W1(0,0) {f1:.9}, Wth(0,0) {th:.9} (each ±1e-6); coherent max err {coh_err:.1e}; cat marginal err X {x_err:.1e}, P {p_err:.1e}"
        ),
    );
}

#[test]
fn criterion_05_parity_identity() {
    let ax = Axis::symmetric(5.0, 201);
    let mut worst = 0.0f64;
    for spec in [
        StateSpec::Vacuum,
        StateSpec::Fock(1),
        StateSpec::Thermal(0.5),
        StateSpec::Thermal(2.0),
    ] {
        let st = state(spec);
        let parity = parity_wigner_origin(&photon_distribution(&st).unwrap()).unwrap();
        worst = worst.max((parity - wigner_point(&st, 0.0, 0.0)).abs());
    }
    let f1 = state(StateSpec::Fock(1));
    let grid = wigner(&f1, &ax, &ax).unwrap();
    let mut scan = 0.0f64;
    for (dx, dp) in [
        (0i64, 0i64),
        (-20, 0),
        (-10, 0),
        (10, 0),
        (20, 0),
        (0, -20),
        (0, -10),
        (0, 10),
        (0, 20),
    ] {
        let (i, j) = ((100 + dx) as usize, (100 + dp) as usize);
        let beta = c(ax[i], ax[j]);
        let shifted = displace(&f1, -beta).unwrap();
        let parity = parity_wigner_origin(&photon_distribution(&shifted).unwrap()).unwrap();
        scan = scan.max((parity - grid.get(i, j)).abs());
    }
    report(
        "5",
        worst <= 1e-6 && scan <= 1e-4,
        format!("origin identity err {worst:.1e} <= 1e-6; displaced scan err {scan:.1e} <= 1e-4"),
    );
}

#[test]
fn criterion_06_photon_statistics() {
    let moments = |v: &[u64]| {
        let n = v.len() as f64;
        let m = v.iter().sum::<u64>() as f64 / n;
        (
            m,
            v.iter().map(|&k| (k as f64 - m).powi(2)).sum::<f64>() / (n - 1.0),
        )
    };
    let (m, v) =
        moments(&sample_direct(&state(StateSpec::Coherent(c(3.0, 0.0))), 100_000, 6).unwrap());
    let fano = v / m;
    let (_, vt) = moments(&sample_direct(&state(StateSpec::Thermal(4.0)), 100_000, 7).unwrap());
    let pass = (fano - 1.0).abs() <= 0.03 && (vt / 20.0 - 1.0).abs() <= 0.05;
    report(
        "6",
        pass,
        format!("coherent Fano {fano:.4} in 1±0.03; thermal variance {vt:.3} in 20±5%"),
    );
}

#[test]
fn criterion_07_ordering_gap() {
    let mut worst = 0.0f64;
    for (k, spec) in [
        StateSpec::Vacuum,
        StateSpec::Coherent(c(1.5, -0.5)),
        StateSpec::Thermal(1.0),
    ]
    .into_iter()
    .enumerate()
    {
        let st = state(spec);
        let het = sample_heterodyne(&st, 100_000, 70 + k as u64).unwrap();
        let (_, cov) = pair_covariance(&het);
        let hom = sample_homodyne_scan(&st, &[0.0, FRAC_PI_2], 100_000, 80 + k as u64).unwrap();
        for (q, scan) in hom.iter().enumerate() {
            let gap = cov[(q, q)] - scan.variance();
            worst = worst.max((gap / 0.25 - 1.0).abs());
        }
    }
    let table_ok = (0..=20u64).all(|n| {
        let t = ordering_energy_table(n);
        t.normal == n as f64 && t.symmetric == n as f64 + 0.5 && t.antinormal == n as f64 + 1.0
    });
    report("7", worst <= 0.10 && table_ok, format!("worst relative deviation of gap from 1/4: {worst:.4} <= 0.10; ladder table exact: {table_ok}"));
}

#[test]
fn criterion_08_tomography() {
    let recon = |spec: StateSpec, n_angles: usize, shots: usize, seed: u64| {
        let st = state(spec);
        let angles: Vec<f64> = (0..n_angles)
            .map(|k| k as f64 * PI / n_angles as f64)
            .collect();
        let data = TomographyDataset::new(sample_homodyne_scan(&st, &angles, shots, seed).unwrap())
            .unwrap();
        // Default grid: 201 points per axis over ±5σ of the state.
        let cfg = ReconstructionConfig::for_state(&st, 201);
        let exact = wigner(&st, &cfg.x_axis, &cfg.p_axis).unwrap();
        (reconstruct_wigner(&data, &cfg).unwrap().grid, exact)
    };
    let (rec, exact) = recon(StateSpec::Vacuum, 16, 10_000, 8);
    let l1: f64 = rec
        .values()
        .iter()
        .zip(exact.values())
        .map(|(a, b)| (a - b).abs())
        .sum::<f64>()
        * rec.dx()
        * rec.dp();
    let (rec1, _) = recon(StateSpec::Fock(1), 32, 100_000, 9);
    let w0 = rec1.value_at(0.0, 0.0);
    report(
        "8",
        l1 <= 0.1 && w0 < 0.0,
        format!("vacuum L1 {l1:.4} <= 0.1; fock(1) W_rec(0,0) {w0:.4} < 0"),
    );
}

#[test]
fn criterion_09_g2_table() {
    let g2 = |g: &GaussianState| g2_zero(&sym_moments_gaussian(g).unwrap()).unwrap();
    let coh = g2(&GaussianState::coherent(c(1.3, 0.0)));
    let th = g2(&GaussianState::thermal(2.0).unwrap());
    let sq_state = GaussianState::squeezed_vacuum(0.5).unwrap();
    let sq = g2(&sq_state);
    let oracle = g2_zero_fock(&gaussian_to_fock(&sq_state).unwrap()).unwrap();
    let f1 = g2_zero_fock(&FockVector::number(1)).unwrap();
    let vac = sym_moments_gaussian(&GaussianState::vacuum()).and_then(|m| g2_zero(&m));
    let pass = (coh - 1.0).abs() <= 1e-12
        && (th - 2.0).abs() <= 1e-12
        && (sq - 11.0).abs() <= 1e-9
        && (sq - oracle).abs() <= 1e-6
        && f1 == 0.0
        && matches!(vac, Err(Error::UndefinedForVacuum));
    report(
        "9",
        pass,
        format!("coherent {coh}, thermal {th}, squeezed {sq} vs Fock oracle {oracle} (±1e-6), fock(1) {f1}, vacuum error: {}", vac.is_err()),
    );
}

#[test]
fn criterion_10_admixture_squeezing() {
    let eps = 0.05;
    let st = state(StateSpec::Admixture { epsilon: eps, k: 2 });
    let (mean, cov) = st.quadrature_moments();
    let dev = cov[(0, 0)] - (1.0 + 2.0 * 2f64.sqrt() * eps) / 4.0;
    let pass = dev.abs() <= 2.0 * eps * eps && mean.norm() <= 1e-15;
    report(
        "10",
        pass,
        format!(
            "Var X minus first-order law {dev:.2e} (|.| <= 2 eps^2 = {:.1e}); mean {:.1e}",
            2.0 * eps * eps,
            mean.norm()
        ),
    );
}

#[test]
fn criterion_11_stokes_and_epr() {
    let mut stokes = 0.0f64;
    for kind in [BeamSplitterKind::Symmetric, BeamSplitterKind::Asymmetric] {
        for t in [0.0, 0.1, 0.5, 0.9, 1.0] {
            stokes = stokes.max(
                make_beam_splitter(kind, t)
                    .unwrap()
                    .stokes_residuals()
                    .max(),
            );
        }
    }
    let comm = epr_commutator_check(10).combined;
    let bs = make_beam_splitter(BeamSplitterKind::Symmetric, 0.5).unwrap();
    let input = TwoModeGaussianState::product(
        &GaussianState::coherent(c(2.0, 1.0)),
        &GaussianState::coherent(c(-1.0, 0.5)),
    );
    let out = apply_beam_splitter(&bs, &input).unwrap();
    let corr = out
        .correlation_of([1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 1.0, 0.0])
        .abs();
    let (vx, vp) = epr_variances(&epr_pair(0.1).unwrap());
    let pass = stokes <= 1e-12
        && comm <= 1e-10
        && corr <= 1e-12
        && (vx - 0.05).abs() <= 1e-15
        && (vp - 0.05).abs() <= 1e-15;
    report("11", pass, format!("Stokes residual {stokes:.1e}; [X3+X4, P3-P4] {comm:.1e}; |corr| {corr:.1e}; Var(X3+X4) {vx}, Var(P3-P4) {vp}"));
}

#[test]
fn criterion_12_channels() {
    let mut worst = 0.0f64;
    let mut rng_param = 1.0f64;
    for k in 0..20 {
        // Deterministic spread of gains over [1, 50].
        rng_param = 1.0 + (rng_param * 7.3 + k as f64 * 1.7) % 49.0;
        for kind in [
            ChannelKind::Amplification,
            ChannelKind::PhaseSensitive,
            ChannelKind::PhaseConjugation,
        ] {
            let d = (noise_figure(kind, rng_param).unwrap()
                - noise_figure_numeric(kind, rng_param).unwrap())
            .abs();
            worst = worst.max(d);
        }
    }
    let amp = noise_figure(ChannelKind::Amplification, 1e3).unwrap();
    let pc = noise_figure(ChannelKind::PhaseConjugation, 1e3).unwrap();
    let mut product = 0.0f64;
    for g in [1.0, 2.0, 10.0, 1e3] {
        let out = apply_channel_to_mode(
            &make_channel(ChannelKind::PhaseSensitive, g).unwrap(),
            &GaussianState::coherent(c(1.0, 0.0)),
        )
        .unwrap();
        product = product.max((out.cov()[(0, 0)] * out.cov()[(1, 1)] - 1.0 / 16.0).abs() * 16.0);
    }
    let pass =
        worst <= 1e-12 && (amp - 0.5).abs() <= 1e-3 && (pc - 0.5).abs() <= 1e-3 && product <= 1e-12;
    report("12", pass, format!("closed vs numeric NF {worst:.1e}; NF(G=1e3) amp {amp:.5}, conj {pc:.5}; uncertainty product rel dev {product:.1e}"));
}

#[test]
fn criterion_13_sideband_interferometer() {
    let (w0, wm) = (2.0 * PI * 3e14, 2.0 * PI * 1e7);
    let (length, _) = solve_arm_length(w0, wm).unwrap();
    let sq = unbalanced_interferometer(&sideband_state(1.0, 0.1).unwrap(), length, w0, wm).unwrap();
    let separated = ["out1_upper", "out2_lower"].map(|l| sq.variance(l).unwrap());
    let diff = sq.variance("difference").unwrap();
    let vac =
        unbalanced_interferometer(&sideband_state(1.0, 1.0).unwrap(), length, w0, wm).unwrap();
    let flat = vac
        .rows
        .iter()
        .map(|(_, v, _)| (v - 0.25).abs())
        .fold(0.0, f64::max);
    let pass = separated.iter().all(|v| *v > 0.25) && diff < 0.25 && flat <= 1e-12;
    report("13", pass, format!("separated {:.4}, {:.4} > 1/4; difference {diff:.4} < 1/4; eps=1 max deviation {flat:.1e}", separated[0], separated[1]));
}
