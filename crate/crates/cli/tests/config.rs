use ghz_budget_cli::config::{load_config, parse_config, RunConfig};
use ghz_budget_cli::error::CliError;
use ghz_budget_cli::sweep::momentum_eta;

fn config_err(text: &str) -> String {
    match parse_config(text, false) {
        Err(CliError::Config(s)) => s,
        other => panic!("expected a config error, got {other:?}"),
    }
}

#[test]
fn minimal_config_takes_defaults() {
    let cfg = parse_config("", false).unwrap();
    assert_eq!(cfg.quadrature.nodes, 201);
    assert_eq!(cfg.oracle.shots, 100_000);
    assert_eq!(cfg, RunConfig::default());
    assert!(cfg.sweep.is_empty());
}

#[test]
fn unit_suffixes_convert_to_si() {
    let cfg = parse_config(
        r#"
[trap]
nu_trap = "14.5 kHz"
temperature = "650nK"
[raman]
omega_eff = "0.4MHz"
free_time = "2 ms"
"#,
        false,
    )
    .unwrap();
    assert!((cfg.trap.nu_trap - 14.5e3).abs() < 1e-9);
    assert!((cfg.trap.temperature - 0.65e-6).abs() < 1e-18);
    assert!((cfg.raman.omega_eff - 4e5).abs() < 1e-6);
    assert!((cfg.raman.free_time - 2e-3).abs() < 1e-15);
}

#[test]
fn negative_temperature_names_field_and_constraint() {
    let e = config_err("[trap]\ntemperature = \"-1uK\"\n");
    assert!(e.contains("trap.temperature"), "{e}");
    assert!(e.contains(">= 0"), "{e}");
}

#[test]
fn unknown_unit_and_key_are_rejected() {
    let e = config_err("[trap]\nnu_trap = \"10 parsec\"\n");
    assert!(e.contains("unknown unit"), "{e}");
    let e = config_err("[trap]\nnu_trp = 1\n");
    assert!(e.contains("nu_trp"), "{e}");
    let e = config_err("[bogus]\n");
    assert!(e.contains("bogus"), "{e}");
}

#[test]
fn parse_errors_carry_line_and_column() {
    let e = config_err("[trap]\nnu_trap = = 3\n");
    assert!(e.contains("line 2"), "{e}");
    assert!(e.contains("column"), "{e}");
    match parse_config("{\n \"trap\": {\"nu_trap\": }\n}", true) {
        Err(CliError::Config(s)) => assert!(s.contains("line 2, column"), "{s}"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn json_is_the_same_schema() {
    let toml = parse_config("[trap]\nnu_trap = \"5.9kHz\"\n[budget]\nq_det = 1e-3\n", false).unwrap();
    let json = parse_config(r#"{"trap": {"nu_trap": "5.9kHz"}, "budget": {"q_det": 1e-3}}"#, true).unwrap();
    assert_eq!(toml, json);
    assert_eq!(toml.hash(), json.hash());
}

#[test]
fn sweep_axes_validate_every_value() {
    let e = config_err("[[sweep]]\nparameter = \"budget.q_det\"\nvalues = [0.1, 1.5]\n");
    assert!(e.contains("budget.q_det"), "{e}");
    let e = config_err("[[sweep]]\nparameter = \"trap.depth\"\nvalues = [1]\n");
    assert!(e.contains("trap.depth"), "{e}");
    let e = config_err("[[sweep]]\nparameter = \"trap.nu_trap\"\nstart = \"1kHz\"\nstop = \"1kHz\"\npoints = 3\n");
    assert!(e.contains("degenerate"), "{e}");
    let cfg = parse_config(
        "[[sweep]]\nparameter = \"raman.omega_eff\"\nstart = \"100kHz\"\nstop = \"1MHz\"\npoints = 3\nscale = \"log\"\n",
        false,
    )
    .unwrap();
    let v = &cfg.sweep[0].values;
    assert_eq!(v.len(), 3);
    assert!((v[1] - 316_227.766_016_837_9).abs() < 1e-6);
}

#[test]
fn delta_raman_off_disables_spontaneous_emission() {
    let cfg = parse_config("[budget]\ndelta_raman = \"off\"\n", false).unwrap();
    assert_eq!(cfg.budget.delta_raman, None);
    let cfg = parse_config("[budget]\ndelta_raman = \"200 GHz\"\n", false).unwrap();
    assert_eq!(cfg.budget.delta_raman, Some(200e9));
}

#[test]
fn blue_row_config_reproduces_eta() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("blue.toml");
    std::fs::write(&path, "[trap]\nnu_trap = \"5.9 kHz\"\ntemperature = \"0.1 uK\"\n[raman]\nomega_eff = \"600 kHz\"\n").unwrap();
    let cfg = load_config(&path).unwrap();
    let eta = momentum_eta(&cfg).unwrap().eta;
    assert!((eta / 5.0e-4 - 1.0).abs() < 0.05, "eta = {eta}");
}

#[test]
fn missing_file_is_io_error() {
    let e = load_config(std::path::Path::new("/nonexistent/run.toml")).unwrap_err();
    assert!(matches!(e, CliError::Io { .. }));
    assert_eq!(e.exit_code(), 4);
}

#[test]
fn hash_tracks_content() {
    let a = parse_config("", false).unwrap();
    let mut b = a.clone();
    b.oracle.seed = 1;
    assert_ne!(a.hash(), b.hash());
    let mut c = a.clone();
    c.output_dir = "elsewhere".into();
    assert_eq!(a.hash(), c.hash());
}
