//! The three end-to-end experiments: minimum preparation fidelity under
//! local measurement noise, maximum magnetization under a rotated readout
//! basis, and entanglement witnessing with tilted observables.
//!
//! Every experiment draws its randomness from ChaCha streams derived from
//! the config seed, keyed by purpose, trial and sweep point, so per-trial
//! values do not depend on execution order and rerunning a config
//! reproduces the output byte for byte.

use crate::config::{ExperimentConfig, ExperimentKind, SamplingMode};
use anyhow::{bail, Context, Result};
use qcert::certifier::{build_region, certify, CertifiedBound, Direction, SolverSettings};
use qcert::distance::d_op_fidelity_bound;
use qcert::linalg::HermitianMatrix;
use qcert::quantum::{
    bell_phi_plus, computational_povm, haar_random_pure_state, imperfect_witness_povm,
    magnetization_operator, noise_channel, noisy_povm, sic_povm_qubit, stream_rng, tensor_povm,
    DensityMatrix, EffectConvention, NoiseModel, Observable, Povm, PureState,
};
use qcert::stats::{born_probabilities, sample_multinomial, MeasurementRecord};
use std::f64::consts::FRAC_PI_4;

/// Aggregates for one sweep point of one curve.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub sweep: f64,
    pub median: f64,
    pub q1: f64,
    pub q3: f64,
    pub n_feasible: usize,
    pub n_infeasible: usize,
    pub eps1: f64,
    pub eps2: f64,
    /// Certified bound per trial; NaN marks an infeasible solve.
    pub trial_values: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct Curve {
    pub label: String,
    pub rows: Vec<SweepRow>,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub experiment: ExperimentKind,
    pub sweep_label: &'static str,
    pub log_x: bool,
    pub curves: Vec<Curve>,
    pub meta: Vec<(String, String)>,
}

/// Dispatch on the configured experiment.
pub fn run(config: &ExperimentConfig) -> Result<ExperimentResult> {
    config.validate()?;
    match config.experiment {
        ExperimentKind::Fidelity => run_fidelity(config),
        ExperimentKind::Magnetization => run_magnetization(config),
        ExperimentKind::Witness => run_witness(config),
    }
}

const STREAM_STATE: u64 = 0;
const STREAM_MEASURE: u64 = 1;
const STREAM_MEASURE_ALT: u64 = 2;

fn stream_id(kind: u64, trial: usize, point: usize) -> u64 {
    assert!(trial < (1 << 28) && point < (1 << 28), "stream id overflow");
    (kind << 56) | ((trial as u64) << 28) | point as u64
}

fn point_id(sweep_a: usize, sweep_b: usize) -> usize {
    assert!(sweep_b < 4096, "sweep grid too large for stream keying");
    sweep_a * 4096 + sweep_b
}

/// Linear-interpolation quantiles over the feasible (non-NaN) values.
fn quartiles(values: &[f64]) -> (f64, f64, f64) {
    let mut clean: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    if clean.is_empty() {
        return (f64::NAN, f64::NAN, f64::NAN);
    }
    clean.sort_by(f64::total_cmp);
    let quantile = |p: f64| -> f64 {
        let pos = p * (clean.len() - 1) as f64;
        let lo = pos.floor() as usize;
        let hi = pos.ceil() as usize;
        let frac = pos - lo as f64;
        clean[lo] + frac * (clean[hi] - clean[lo])
    };
    (quantile(0.5), quantile(0.25), quantile(0.75))
}

fn aggregate(sweep: f64, eps1: f64, eps2: f64, trial_values: Vec<f64>) -> SweepRow {
    let (median, q1, q3) = quartiles(&trial_values);
    let n_infeasible = trial_values.iter().filter(|v| !v.is_finite()).count();
    SweepRow {
        sweep,
        median,
        q1,
        q3,
        n_feasible: trial_values.len() - n_infeasible,
        n_infeasible,
        eps1,
        eps2,
        trial_values,
    }
}

fn solver_settings(config: &ExperimentConfig) -> SolverSettings {
    SolverSettings {
        tol: config.solver_tol,
        ..SolverSettings::default()
    }
}

fn bound_value(bound: &CertifiedBound) -> f64 {
    if bound.is_infeasible() {
        f64::NAN
    } else {
        bound.dual_bound
    }
}

/// Twice the rank-one fidelity bound, the radius the confidence region adds
/// for measurement imperfection. The doubling is deliberate and logged: the
/// optimization constraint grows by two times the operational distance.
fn eps2_from_fidelity_bound(target: &Povm, actual: &Povm) -> Result<(f64, f64)> {
    let bound = d_op_fidelity_bound(target, actual)?;
    Ok((2.0 * bound.value, bound.value))
}

fn run_fidelity(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let channel_kind = config
        .channel
        .context("fidelity experiment needs a channel")?;
    let settings = solver_settings(config);
    let sic = sic_povm_qubit();
    let target = tensor_povm(&[sic.clone(), sic.clone()])?.with_id("sic2");

    let mut meta = base_meta(config);
    meta.push(("channel".into(), channel_kind.to_string()));

    // per-trial states are fixed across the whole (gamma, shots) grid
    let states: Vec<PureState> = (0..config.n_trials)
        .map(|t| {
            haar_random_pure_state(
                4,
                &mut stream_rng(config.seed, stream_id(STREAM_STATE, t, 0)),
            )
        })
        .collect();

    let mut curves = Vec::new();
    for (gi, &gamma) in config.gamma_grid.iter().enumerate() {
        let channel = noise_channel(channel_kind, gamma)?;
        let actual = noisy_povm(
            &[channel.clone(), channel],
            &[sic.clone(), sic.clone()],
            config.effect_convention,
        )?;
        let (eps2, raw_bound) = if config.include_eps2 {
            eps2_from_fidelity_bound(&target, &actual)?
        } else {
            (0.0, 0.0)
        };
        meta.push((
            format!("eps2[gamma={gamma}]"),
            format!("{eps2} = 2 * {raw_bound}"),
        ));

        let mut rows = Vec::new();
        for (ni, &shots) in config.shots_grid.iter().enumerate() {
            let mut eps1 = 0.0;
            let mut trial_values = Vec::with_capacity(config.n_trials);
            for (t, psi) in states.iter().enumerate() {
                let omega = psi.density();
                let mut rng =
                    stream_rng(config.seed, stream_id(STREAM_MEASURE, t, point_id(gi, ni)));
                let record = qcert::stats::simulate_measurement(&actual, &omega, shots, &mut rng)?;
                let region = build_region(&target, &record, eps2, config.delta)?;
                eps1 = region.eps1;
                let objective = Observable::new(HermitianMatrix::outer(psi.amplitudes(), 1.0));
                let bound = certify(&region, &objective, Direction::Min, &settings)?;
                trial_values.push(bound_value(&bound));
            }
            rows.push(aggregate(shots as f64, eps1, eps2, trial_values));
        }
        curves.push(Curve {
            label: format!("gamma={gamma}"),
            rows,
        });
    }

    Ok(ExperimentResult {
        experiment: ExperimentKind::Fidelity,
        sweep_label: "shots",
        log_x: true,
        curves,
        meta,
    })
}

fn run_magnetization(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let settings = solver_settings(config);
    let n = config.n_qubits;
    let target = computational_povm(n);
    let magnetization = magnetization_operator(n);
    let omega = PureState::basis(1 << n, 0).density();
    let shots = config.shots_grid[0];

    let mut meta = base_meta(config);
    meta.push(("shots".into(), shots.to_string()));

    let mut with_noise_rows = Vec::new();
    let mut stats_only_rows = Vec::new();
    for (gi, &gamma) in config.gamma_grid.iter().enumerate() {
        // readout basis rotated by exp(-i sigma_y gamma) per qubit: the
        // rotation channel's Kraus operator carries half its parameter
        let channel = noise_channel(NoiseModel::RotationY, 2.0 * gamma)?;
        let channels = vec![channel; n];
        let locals = vec![computational_povm(1); n];
        let actual = noisy_povm(&channels, &locals, config.effect_convention)?;
        let (eps2, raw_bound) = eps2_from_fidelity_bound(&target, &actual)?;
        meta.push((
            format!("eps2[gamma={gamma}]"),
            format!("{eps2} = 2 * {raw_bound}"),
        ));

        let mut with_noise = Vec::with_capacity(config.n_trials);
        let mut stats_only = Vec::with_capacity(config.n_trials);
        let mut eps1 = 0.0;
        for t in 0..config.n_trials {
            let mut rng = stream_rng(config.seed, stream_id(STREAM_MEASURE, t, point_id(gi, 0)));
            let record = qcert::stats::simulate_measurement(&actual, &omega, shots, &mut rng)?;
            if config.include_eps2 {
                let region = build_region(&target, &record, eps2, config.delta)?;
                let bound = certify(&region, &magnetization, Direction::Max, &settings)?;
                with_noise.push(bound_value(&bound));
            }
            let region = build_region(&target, &record, 0.0, config.delta)?;
            eps1 = region.eps1;
            let bound = certify(&region, &magnetization, Direction::Max, &settings)?;
            stats_only.push(bound_value(&bound));
        }
        if config.include_eps2 {
            with_noise_rows.push(aggregate(gamma, eps1, eps2, with_noise));
        }
        stats_only_rows.push(aggregate(gamma, eps1, 0.0, stats_only));
    }

    let mut curves = Vec::new();
    if config.include_eps2 {
        curves.push(Curve {
            label: "eps1+eps2".into(),
            rows: with_noise_rows,
        });
    }
    curves.push(Curve {
        label: "eps1-only".into(),
        rows: stats_only_rows,
    });

    Ok(ExperimentResult {
        experiment: ExperimentKind::Magnetization,
        sweep_label: "gamma",
        log_x: false,
        curves,
        meta,
    })
}

/// Separable benchmark state cos(pi/8)|0> + sin(pi/8)|1> on each qubit; its
/// witness expectation sits exactly on the separable boundary.
fn separable_pair() -> PureState {
    let phi = PureState::qubit_real((FRAC_PI_4 / 2.0).cos(), (FRAC_PI_4 / 2.0).sin())
        .expect("unit qubit state");
    phi.tensor(&phi)
}

fn run_witness(config: &ExperimentConfig) -> Result<ExperimentResult> {
    let settings = solver_settings(config);
    let target = imperfect_witness_povm(0.0, std::f64::consts::FRAC_PI_2).with_id("witness-ideal");
    let actual = imperfect_witness_povm(config.theta_x, config.theta_z);
    let witness = qcert::quantum::witness_operator();
    let (eps2, raw_bound) = eps2_from_fidelity_bound(&target, &actual)?;

    let mut meta = base_meta(config);
    meta.push(("theta_x".into(), config.theta_x.to_string()));
    meta.push(("theta_z".into(), config.theta_z.to_string()));
    meta.push(("eps2".into(), format!("{eps2} = 2 * {raw_bound}")));

    let separable = separable_pair().density();
    let bell = bell_phi_plus().density();

    let mut sep_noise_rows = Vec::new();
    let mut sep_stats_rows = Vec::new();
    let mut bell_noise_rows = Vec::new();
    for (ni, &shots) in config.shots_grid.iter().enumerate() {
        let mut sep_noise = Vec::with_capacity(config.n_trials);
        let mut sep_stats = Vec::with_capacity(config.n_trials);
        let mut bell_noise = Vec::with_capacity(config.n_trials);
        let mut eps1 = 0.0;
        for t in 0..config.n_trials {
            let mut rng_sep =
                stream_rng(config.seed, stream_id(STREAM_MEASURE, t, point_id(0, ni)));
            let record_sep = witness_record(config, &actual, &separable, shots, &mut rng_sep)?;
            if config.include_eps2 {
                let region = build_region(&target, &record_sep, eps2, config.delta)?;
                let bound = certify(&region, &witness, Direction::Min, &settings)?;
                sep_noise.push(bound_value(&bound));
            }
            let region = build_region(&target, &record_sep, 0.0, config.delta)?;
            eps1 = region.eps1;
            let bound = certify(&region, &witness, Direction::Min, &settings)?;
            sep_stats.push(bound_value(&bound));

            if config.include_eps2 {
                let mut rng_bell = stream_rng(
                    config.seed,
                    stream_id(STREAM_MEASURE_ALT, t, point_id(0, ni)),
                );
                let record_bell = witness_record(config, &actual, &bell, shots, &mut rng_bell)?;
                let region = build_region(&target, &record_bell, eps2, config.delta)?;
                let bound = certify(&region, &witness, Direction::Min, &settings)?;
                bell_noise.push(bound_value(&bound));
            }
        }
        if config.include_eps2 {
            sep_noise_rows.push(aggregate(shots as f64, eps1, eps2, sep_noise));
            bell_noise_rows.push(aggregate(shots as f64, eps1, eps2, bell_noise));
        }
        sep_stats_rows.push(aggregate(shots as f64, eps1, 0.0, sep_stats));
    }

    let mut curves = Vec::new();
    if config.include_eps2 {
        curves.push(Curve {
            label: "separable eps1+eps2".into(),
            rows: sep_noise_rows,
        });
    }
    curves.push(Curve {
        label: "separable eps1-only".into(),
        rows: sep_stats_rows,
    });
    if config.include_eps2 {
        curves.push(Curve {
            label: "entangled eps1+eps2".into(),
            rows: bell_noise_rows,
        });
    }

    Ok(ExperimentResult {
        experiment: ExperimentKind::Witness,
        sweep_label: "shots",
        log_x: true,
        curves,
        meta,
    })
}

/// Measure the witness POVM. In single-POVM mode this is one multinomial
/// over all eight outcomes. In two-setting mode half the shots go to each
/// four-outcome setting; the halved effects make the per-setting outcome
/// weights a probability vector after doubling. Either way the confidence
/// radius downstream is computed from the single-multinomial model the
/// optimization assumes, so the two-setting mode trades a small model
/// mismatch for experimental convenience.
fn witness_record<R: rand::Rng + ?Sized>(
    config: &ExperimentConfig,
    povm: &Povm,
    state: &DensityMatrix,
    shots: u64,
    rng: &mut R,
) -> Result<MeasurementRecord> {
    match config.sampling {
        SamplingMode::SinglePovm => {
            Ok(qcert::stats::simulate_measurement(povm, state, shots, rng)?)
        }
        SamplingMode::TwoSetting => {
            if povm.len() != 8 {
                bail!("two-setting sampling expects the 8-outcome witness POVM");
            }
            let probs = born_probabilities(povm, state)?;
            let first: Vec<f64> = probs[..4].iter().map(|p| 2.0 * p).collect();
            let second: Vec<f64> = probs[4..].iter().map(|p| 2.0 * p).collect();
            let half = shots / 2;
            let mut counts = sample_multinomial(&first, half, rng);
            counts.extend(sample_multinomial(&second, shots - half, rng));
            Ok(MeasurementRecord {
                counts,
                shots,
                povm_id: povm.id().to_string(),
                renormalization: None,
            })
        }
    }
}

fn base_meta(config: &ExperimentConfig) -> Vec<(String, String)> {
    let grid = |values: &[f64]| {
        values
            .iter()
            .map(f64::to_string)
            .collect::<Vec<_>>()
            .join(",")
    };
    vec![
        ("experiment".into(), config.experiment.label().to_string()),
        ("seed".into(), config.seed.to_string()),
        ("n_trials".into(), config.n_trials.to_string()),
        ("delta".into(), config.delta.to_string()),
        (
            "shots_grid".into(),
            config
                .shots_grid
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(","),
        ),
        ("gamma_grid".into(), grid(&config.gamma_grid)),
        (
            "effect_convention".into(),
            match config.effect_convention {
                EffectConvention::Heisenberg => "heisenberg".into(),
                EffectConvention::Schrodinger => "schrodinger".into(),
            },
        ),
        (
            "sampling".into(),
            match config.sampling {
                SamplingMode::SinglePovm => "single-povm".to_string(),
                SamplingMode::TwoSetting => "two-setting".to_string(),
            },
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::parse_config;

    #[test]
    fn quartile_ordering() {
        let (median, q1, q3) = quartiles(&[3.0, 1.0, 2.0, 5.0, 4.0]);
        assert_eq!((q1, median, q3), (2.0, 3.0, 4.0));
        let (median, q1, q3) = quartiles(&[1.0, f64::NAN, 3.0]);
        assert_eq!((q1, median, q3), (1.5, 2.0, 2.5));
        assert!(quartiles(&[f64::NAN]).0.is_nan());
    }

    #[test]
    fn separable_pair_on_witness_boundary() {
        let w = qcert::quantum::witness_operator();
        let value = separable_pair().density().expectation(w.matrix());
        assert!((value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn witness_two_setting_counts_split() {
        let config = parse_config("experiment = witness\nsampling = two-setting\n").unwrap();
        let actual = imperfect_witness_povm(config.theta_x, config.theta_z);
        let state = separable_pair().density();
        let mut rng = stream_rng(1, 1);
        let record = witness_record(&config, &actual, &state, 1001, &mut rng).unwrap();
        assert_eq!(record.shots, 1001);
        let first: u64 = record.counts[..4].iter().sum();
        let second: u64 = record.counts[4..].iter().sum();
        assert_eq!(first, 500);
        assert_eq!(second, 501);
    }

    #[test]
    fn magnetization_small_run_shapes() {
        let config = parse_config(
            "experiment = magnetization\nn_qubits = 2\nn_trials = 3\n\
             gamma_grid = 0,1.0\nshots_grid = 256\nseed = 5\n",
        )
        .unwrap();
        let result = run(&config).unwrap();
        assert_eq!(result.curves.len(), 2);
        assert_eq!(result.curves[0].rows.len(), 2);
        for curve in &result.curves {
            for row in &curve.rows {
                assert_eq!(row.trial_values.len(), 3);
                if row.n_feasible > 0 {
                    assert!(row.q1 <= row.median && row.median <= row.q3);
                }
            }
        }
        // the noise-aware curve certifies full magnetization everywhere
        for row in &result.curves[0].rows {
            assert!(row.median >= 1.0 - 1e-3, "median {}", row.median);
        }
    }

    #[test]
    fn trial_values_keyed_by_grid_position() {
        // randomness is keyed by (trial, grid position), so values at a
        // shared position are identical even when later sweep points differ
        let full = parse_config(
            "experiment = magnetization\nn_qubits = 2\nn_trials = 2\n\
             gamma_grid = 0.4,0.8\nshots_grid = 128\nseed = 9\n",
        )
        .unwrap();
        let solo = parse_config(
            "experiment = magnetization\nn_qubits = 2\nn_trials = 2\n\
             gamma_grid = 0.4\nshots_grid = 128\nseed = 9\n",
        )
        .unwrap();
        let full = run(&full).unwrap();
        let solo = run(&solo).unwrap();
        let full_row = &full.curves[1].rows[0];
        let solo_row = &solo.curves[1].rows[0];
        assert_eq!(full_row.sweep, solo_row.sweep);
        for (a, b) in full_row.trial_values.iter().zip(&solo_row.trial_values) {
            assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn magnetization_curves_coincide_without_rotation() {
        // at gamma = 0 the imperfection radius vanishes and the two curves
        // analyze identical records, so they agree
        let config = parse_config(
            "experiment = magnetization\nn_qubits = 3\nn_trials = 3\n\
             gamma_grid = 0\nshots_grid = 1024\nseed = 4\n",
        )
        .unwrap();
        let result = run(&config).unwrap();
        let with_noise = &result.curves[0].rows[0];
        let stats_only = &result.curves[1].rows[0];
        assert!(with_noise.eps2 < 1e-7);
        assert!((with_noise.median - stats_only.median).abs() <= 1e-6);
    }

    #[test]
    fn witness_two_setting_end_to_end() {
        let config = parse_config(
            "experiment = witness\nsampling = two-setting\nn_trials = 4\n\
             shots_grid = 4096\nseed = 8\n",
        )
        .unwrap();
        let result = run(&config).unwrap();
        assert_eq!(result.curves.len(), 3);
        for curve in &result.curves {
            let row = &curve.rows[0];
            assert_eq!(row.trial_values.len(), 4);
            assert_eq!(row.n_infeasible, 0);
        }
        // the noise-aware entangled curve still certifies entanglement
        assert!(result.curves[2].rows[0].median > 1.0);
    }

    #[test]
    fn witness_stats_only_breaks_down_at_huge_shot_counts() {
        // with the imperfection radius ignored, enough statistics leave no
        // state compatible with the tilted-basis frequencies
        let config = parse_config(
            "experiment = witness\nn_trials = 2\nshots_grid = 16777216\nseed = 12\n",
        )
        .unwrap();
        let result = run(&config).unwrap();
        let stats_only = &result.curves[1].rows[0];
        assert_eq!(stats_only.n_infeasible, 2, "expected both trials infeasible");
        assert!(stats_only.median.is_nan());
        // the radius-aware curves keep producing certified bounds
        assert_eq!(result.curves[0].rows[0].n_infeasible, 0);
        assert!(result.curves[0].rows[0].median <= 1.0);
        assert_eq!(result.curves[2].rows[0].n_infeasible, 0);
        assert!(result.curves[2].rows[0].median > 1.0);
    }

    #[test]
    fn eps2_rows_carry_twice_the_distance_bound() {
        let config =
            parse_config("experiment = witness\nn_trials = 2\nshots_grid = 512\nseed = 6\n")
                .unwrap();
        let result = run(&config).unwrap();
        let target =
            imperfect_witness_povm(0.0, std::f64::consts::FRAC_PI_2).with_id("witness-ideal");
        let actual = imperfect_witness_povm(config.theta_x, config.theta_z);
        let expected = 2.0 * d_op_fidelity_bound(&target, &actual).unwrap().value;
        for curve in &result.curves {
            for row in &curve.rows {
                if row.eps2 != 0.0 {
                    assert_eq!(row.eps2.to_bits(), expected.to_bits());
                }
            }
        }
    }

    #[test]
    fn fidelity_noiseless_large_shot_floor() {
        // with no measurement noise and 2^20 shots the certified floor
        // approaches 1 up to the shrinking shot-noise radius
        let config = parse_config(
            "experiment = fidelity\nchannel = rotation\nn_trials = 3\n\
             gamma_grid = 0\nshots_grid = 1048576\nseed = 3\n",
        )
        .unwrap();
        let result = run(&config).unwrap();
        let row = &result.curves[0].rows[0];
        assert!(row.median >= 0.9, "median {}", row.median);
    }

    #[test]
    fn fidelity_noise_orders_curves() {
        // more rotation noise can only weaken the certified floor
        let config = parse_config(
            "experiment = fidelity\nchannel = rotation\nn_trials = 4\n\
             gamma_grid = 0,0.3\nshots_grid = 16384\nseed = 3\n",
        )
        .unwrap();
        let result = run(&config).unwrap();
        let clean = result.curves[0].rows[0].median;
        let noisy = result.curves[1].rows[0].median;
        assert!(noisy <= clean + 1e-9, "noisy {noisy} vs clean {clean}");
    }

    #[test]
    fn fidelity_noiseless_identity_channel() {
        let config = parse_config(
            "experiment = fidelity\nchannel = rotation\nn_trials = 4\n\
             gamma_grid = 0\nshots_grid = 4096\nseed = 3\n",
        )
        .unwrap();
        let result = run(&config).unwrap();
        assert_eq!(result.curves.len(), 1);
        let row = &result.curves[0].rows[0];
        assert!(row.eps2 < 1e-7, "identity channel eps2 {}", row.eps2);
        assert_eq!(row.n_infeasible, 0);
        // noiseless measurement with moderate statistics certifies a
        // nontrivial fidelity floor
        assert!(row.median > 0.5, "median {}", row.median);
        assert!(row.median <= 1.0 + 1e-9);
    }
}
