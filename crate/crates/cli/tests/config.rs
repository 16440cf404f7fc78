//! Configuration ingestion: schema errors name the offending JSON path,
//! semantic validation catches bad physics, and canonical re-emission is
//! idempotent.

use jcsim_cli::config::{canonical_config_json, parse_config_str, Mode};
use jcsim_cli::error::CliError;

fn minimal_evolve() -> String {
    r#"{
        "mode": "evolve",
        "model": {
            "omega_c": 1.0, "omega_a": 1.0, "coupling": 0.0, "damping": 1.0,
            "truncation": 4,
            "dissipators": [{"preset": "photon_loss_D1"}]
        },
        "initial_state": {"kind": "fock", "n": 0, "s": "+"},
        "integrator": {"t_max": 1.0, "dt": 0.001}
    }"#
    .to_string()
}

#[test]
fn minimal_config_parses_with_defaults() {
    let cfg = parse_config_str(&minimal_evolve()).unwrap();
    assert_eq!(cfg.mode, Mode::Evolve);
    assert_eq!(cfg.seed, 0);
    assert_eq!(cfg.model.level.get(), 4);
    assert_eq!(cfg.integrator.record_every, 10);
    assert_eq!(cfg.integrator.rel_tol, 1e-8);
    assert_eq!(cfg.outputs.observables, "observables.csv");
}

#[test]
fn canonical_round_trip_is_idempotent() {
    let cfg = parse_config_str(&minimal_evolve()).unwrap();
    let first = canonical_config_json(&cfg);
    let reparsed = parse_config_str(&first).unwrap();
    let second = canonical_config_json(&reparsed);
    assert_eq!(first, second, "canonical form must be a fixed point");
}

#[test]
fn default_dt_comes_from_cavity_period() {
    let text = minimal_evolve().replace(r#""t_max": 1.0, "dt": 0.001"#, r#""t_max": 1.0"#);
    let cfg = parse_config_str(&text).unwrap();
    let expected = 1e-3 * std::f64::consts::TAU;
    assert!((cfg.integrator.dt - expected).abs() < 1e-18);
}

#[test]
fn unknown_method_names_integrator_path() {
    let text = minimal_evolve().replace(
        r#""integrator": {"t_max": 1.0, "dt": 0.001}"#,
        r#""integrator": {"t_max": 1.0, "dt": 0.001, "method": "rk5"}"#,
    );
    match parse_config_str(&text) {
        Err(CliError::Config { path, message }) => {
            assert_eq!(path, "integrator.method");
            assert!(message.contains("rk5"), "{message}");
        }
        other => panic!("expected config error, got {other:?}"),
    }
}

#[test]
fn non_hermitian_pump_is_rejected_with_report() {
    let text = minimal_evolve().replace(
        r#""truncation": 4,"#,
        r#""truncation": 4,
           "pump": {"terms": [{"raising": 0, "lowering": 0,
                    "coeff": [{"matrix": [[[0,0],[1,0]],[[0,0],[0,0]]]}]}]},"#,
    );
    // A bare sigma_+ pump only matters when it enters H, i.e. coupling != 0.
    let text = text.replace(r#""coupling": 0.0"#, r#""coupling": 0.1"#);
    match parse_config_str(&text) {
        Err(CliError::Config { path, message }) => {
            assert_eq!(path, "model.pump");
            assert!(message.contains("Hermitian"), "{message}");
            assert!(message.contains("defect"), "{message}");
        }
        other => panic!("expected Hermiticity rejection, got {other:?}"),
    }
}

#[test]
fn unknown_preset_names_path() {
    let text = minimal_evolve().replace("photon_loss_D1", "photon_loss_d2");
    match parse_config_str(&text) {
        Err(CliError::Config { path, message }) => {
            assert_eq!(path, "model.dissipators[0].preset");
            assert!(message.contains("photon_loss_d2"));
        }
        other => panic!("expected preset error, got {other:?}"),
    }
}

#[test]
fn collapse_revival_needs_omega_p() {
    let text = minimal_evolve().replace(
        r#"{"preset": "photon_loss_D1"}"#,
        r#"{"preset": "pump_collapse_revival"}"#,
    );
    match parse_config_str(&text) {
        Err(CliError::Config { path, .. }) => {
            assert_eq!(path, "model.dissipators[0].preset");
        }
        other => panic!("expected missing-parameter error, got {other:?}"),
    }
}

#[test]
fn misplaced_sections_are_rejected() {
    let text = minimal_evolve().replace(
        r#""integrator": {"t_max": 1.0, "dt": 0.001}"#,
        r#""integrator": {"t_max": 1.0, "dt": 0.001},
           "sweep": {"levels": [2, 4], "probe_entries": [], "probe_times": [0.5]}"#,
    );
    match parse_config_str(&text) {
        Err(CliError::Config { path, .. }) => assert_eq!(path, "sweep"),
        other => panic!("expected section mismatch, got {other:?}"),
    }
}

#[test]
fn bad_atomic_level_names_path() {
    let text = minimal_evolve().replace(r#""s": "+""#, r#""s": "up""#);
    match parse_config_str(&text) {
        Err(CliError::Config { path, message }) => {
            assert_eq!(path, "initial_state.s");
            assert!(message.contains("up"));
        }
        other => panic!("expected atomic level error, got {other:?}"),
    }
}

#[test]
fn fock_index_beyond_truncation_rejected() {
    let text = minimal_evolve().replace(r#""n": 0"#, r#""n": 9"#);
    match parse_config_str(&text) {
        Err(CliError::Config { path, message }) => {
            assert_eq!(path, "initial_state");
            assert!(message.contains("exceeds"), "{message}");
        }
        other => panic!("expected range error, got {other:?}"),
    }
}

#[test]
fn unknown_field_is_a_schema_error() {
    let text = minimal_evolve().replace(r#""mode": "evolve","#, r#""mode": "evolve", "extra": 1,"#);
    match parse_config_str(&text) {
        Err(CliError::Config { message, .. }) => {
            assert!(message.contains("extra"), "{message}");
        }
        other => panic!("expected unknown-field error, got {other:?}"),
    }
}

#[test]
fn check_mode_defaults_and_allow_list() {
    let text = minimal_evolve().replace(r#""mode": "evolve""#, r#""mode": "check""#);
    let cfg = parse_config_str(&text).unwrap();
    let check = cfg.check.unwrap();
    assert_eq!(check.claims.len(), 4);
    assert_eq!(check.trials, 1000);
    assert!(check.allow_violations.is_empty());
    assert_eq!(check.states.len(), 1);
}

#[test]
fn dissipator_sign_claim_requires_dissipators() {
    let text = minimal_evolve()
        .replace(r#""mode": "evolve""#, r#""mode": "check""#)
        .replace(r#""dissipators": [{"preset": "photon_loss_D1"}]"#, r#""dissipators": []"#);
    match parse_config_str(&text) {
        Err(CliError::Config { path, .. }) => assert_eq!(path, "check.claims"),
        other => panic!("expected claim/model mismatch, got {other:?}"),
    }
}

#[test]
fn explicit_state_must_be_hermitian() {
    let text = minimal_evolve().replace(
        r#""initial_state": {"kind": "fock", "n": 0, "s": "+"}"#,
        r#""initial_state": {"kind": "explicit", "entries":
            [[[1,0],[0,0],[0,0],[0,0]],
             [[1,0],[0,0],[0,0],[0,0]],
             [[0,0],[0,0],[0,0],[0,0]],
             [[0,0],[0,0],[0,0],[0,0]]]}"#,
    );
    match parse_config_str(&text) {
        Err(CliError::Config { path, message }) => {
            assert_eq!(path, "initial_state.entries");
            assert!(message.contains("Hermitian"), "{message}");
        }
        other => panic!("expected Hermiticity error, got {other:?}"),
    }
}
