use kerrcat_cli::{preset, run, Format, RowStatus, RunConfig, RunOptions, SweepResult};

/// The single-mode bath preset shrunk to a few seconds of work.
fn small() -> RunConfig {
    let mut c = preset("fig5-baths").unwrap();
    c.hilbert.n_fock = 120;
    c.hilbert.n_keep = 30;
    c.sweep.eps_max = 0.4e9;
    c.sweep.delta_eps = 0.1e9;
    c.sweep.eps_min = 0.1e9;
    c.outputs.level_cut = 16;
    c.outputs.branches = 12;
    c.outputs.time_grid.points = 16;
    c.outputs.phase_grid.points = 24;
    c
}

fn csv_bytes(r: &SweepResult) -> Vec<u8> {
    let mut r = r.clone();
    r.provenance.created_unix = 0;
    let mut buf = vec![];
    r.write_csv(&mut buf).unwrap();
    buf
}

#[test]
fn empty_range_gives_one_undriven_row() {
    let mut c = small();
    c.sweep.eps_min = 0.0;
    c.sweep.eps_max = 0.0;
    let r = run(&c, &RunOptions::default()).unwrap();
    assert_eq!(r.rows.len(), 1);
    let row = &r.rows[0];
    assert_eq!(row.status, RowStatus::Ok);
    assert_eq!(row.eps_d_hz, 0.0);
    // Undriven: the tuned drive sits at twice the bare transition and the
    // cat pair splits by half the drive frequency.
    let q = &row.quasienergies_hz;
    let w = row.omega_d_hz.unwrap();
    assert!(((q[1] - q[0]).rem_euclid(w) - 0.5 * w).abs() < 1e4);
    assert!(row.photon_0.unwrap() < 1e-3);
}

#[test]
fn worker_count_does_not_change_output() {
    let mut c = small();
    c.compute.workers = 1;
    let a = run(&c, &RunOptions::default()).unwrap();
    c.compute.workers = 3;
    let b = run(&c, &RunOptions::default()).unwrap();
    assert_eq!(a.rows.len(), 5);
    assert_eq!(a.rows[0].status, RowStatus::TrackedOnly);
    assert!(a.rows[1..].iter().all(|r| r.status == RowStatus::Ok));
    assert_eq!(csv_bytes(&a), csv_bytes(&b));
}

#[test]
fn resumed_run_matches_uninterrupted_run() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = small();
    c.compute.workers = 2;
    let full = run(&c, &RunOptions::default()).unwrap();

    c.compute.checkpoint = Some(dir.path().join("ckpt.jsonl"));
    let part = run(&c, &RunOptions { max_new_points: Some(3), ..Default::default() }).unwrap();
    assert_eq!(part.rows.len(), 3);
    c.compute.resume = true;
    let resumed = run(&c, &RunOptions::default()).unwrap();
    assert_eq!(csv_bytes(&resumed), csv_bytes(&full));

    // A second resume finds nothing left to do and reproduces the same rows.
    let again = run(&c, &RunOptions::default()).unwrap();
    assert_eq!(again.rows, full.rows);
}

#[test]
fn resume_rejects_a_changed_configuration() {
    let dir = tempfile::tempdir().unwrap();
    let mut c = small();
    c.compute.checkpoint = Some(dir.path().join("ckpt.jsonl"));
    run(&c, &RunOptions { max_new_points: Some(1), ..Default::default() }).unwrap();
    c.compute.resume = true;
    c.bath.channels[0].harmonics[1].j *= 2.0;
    assert!(matches!(run(&c, &RunOptions::default()), Err(kerrcat_cli::RunError::Checkpoint(_))));
}

#[test]
fn failing_amplitudes_are_isolated() {
    let mut c = small();
    c.sweep.eps_min = 0.0;
    c.sweep.eps_max = 0.1e9;
    c.floquet.unitarity_tol = 0.0;
    let r = run(&c, &RunOptions::default()).unwrap();
    assert_eq!(r.rows.len(), 2);
    assert_eq!(r.failed_rows(), 2);
    assert!(r.rows[0].error.as_deref().unwrap().contains("unitarity"));
}

#[test]
fn exported_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let r = run(&small(), &RunOptions::default()).unwrap();
    for f in [Format::Csv, Format::Json] {
        let p = r.export(dir.path(), f).unwrap();
        assert_eq!(SweepResult::import(&p).unwrap(), r);
    }
}
