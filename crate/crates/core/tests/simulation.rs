use blinded_monitor::cli;
use blinded_monitor::design::ScenarioTruth;
use blinded_monitor::monitoring::Mode;
use blinded_monitor::simulation::invariance::standard_sets;
use blinded_monitor::simulation::{
    invariance_harness, run_scenario, run_table, ModeSelection, Scenario, TableId, Workers, DEFAULT_SEED,
};

fn row(rows: &[blinded_monitor::simulation::TableRow], mu1: f64, n_req: f64) -> &blinded_monitor::simulation::TableRow {
    rows.iter().find(|r| r.published.mu1 == mu1 && r.published.n_req == n_req).unwrap()
}

#[test]
fn published_ratio_rows() {
    let w = Workers::default();
    let t1 = run_table(TableId::SigmaGrid, DEFAULT_SEED, w).unwrap();
    let t2 = run_table(TableId::VGrid, DEFAULT_SEED, w).unwrap();

    let r = row(&t1, 1.0, 1000.0);
    assert!((r.blinded.mean_n / 1000.0 - 1.0001).abs() <= 0.0015);
    assert!((r.unblinded.mean_n / 1000.0 - 0.9999).abs() <= 0.0015);

    let r = row(&t2, 2.0, 1000.0);
    assert!((r.blinded.mean_n / 1000.0 - 2.0005).abs() <= 0.002);

    // μ1 = 5: ratios fall toward 7.25 as n_req grows, each inside its MC band
    let ladder = [10.0, 50.0, 100.0, 500.0, 1000.0];
    let ratios: Vec<f64> = ladder.iter().map(|&n| row(&t2, 5.0, n).blinded.mean_n / n).collect();
    for (&n, got) in ladder.iter().zip(&ratios) {
        let p = row(&t2, 5.0, n).published;
        assert!((got - p.ratio_b).abs() <= 4.0 * p.sd_b / 100.0 / n + 5e-5, "{ratios:?}");
    }
    assert!(ratios[0] > ratios[1] && ratios[1] > ratios[4] && ratios[4] > 7.25 - 0.005);

    for r in t1.iter().chain(&t2) {
        assert!(r.blinded.mean_n <= r.published.bound, "{} vs {:?}", r.blinded.mean_n, r.published);
        assert!((r.blinded.bound_table - r.published.bound).abs() <= 0.01);
    }
}

#[test]
fn unblinded_invariance_at_n_req_100() {
    let sets = standard_sets(100.0);
    let triples: Vec<(f64, f64, f64, f64)> = sets.iter().map(|s| (s.v, s.sigma, s.mu1, s.mu2)).collect();
    assert_eq!(triples, vec![(1.0, 10.0, 1.0, 0.0), (4.0, 5.0, 2.0, 0.0), (100.0, 1.0, 5.0, 0.0)]);
    let u = invariance_harness(100.0, &sets, Mode::Unblinded, 10, 2000, 3, Workers::default()).unwrap();
    assert!(u.identical());
    let b = invariance_harness(100.0, &sets, Mode::Blinded, 10, 2000, 3, Workers::default()).unwrap();
    assert!(!b.identical());
}

#[test]
fn mean_tracks_n_req_when_delta_is_zero() {
    // δ = 0 removes the blinding cost; both modes should land near n_req
    for (v, sigma) in [(1.0, 10.0), (100.0, 1.0), (4.0, 15.0)] {
        let truth = ScenarioTruth::new(0.0, 0.0, sigma).unwrap();
        let s = Scenario::new(v, truth).with_replications(4000).with_seed(12);
        let out = run_scenario(&s, Workers::default(), false).unwrap();
        for sum in &out.summaries {
            let n_req = v * sigma * sigma;
            assert!((sum.mean_n / n_req - 1.0).abs() < 0.03, "{} {}: {}", v, sigma, sum.mean_n);
        }
    }
}

#[test]
fn simulate_reproduces_a_table_one_cell() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("t1.cfg");
    std::fs::write(&cfg, "[t1-mu1=1-nreq=100]\nv = 1\nmu1 = 1\nsigma = 10\nmode = blinded\n").unwrap();
    let out = dir.path().join("out.csv");
    let args = ["blinded-monitor", "simulate", "--config", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()];
    assert_eq!(cli::run(args, &mut std::io::sink(), &mut std::io::sink()), cli::EXIT_OK);

    let mut rdr = csv::Reader::from_path(&out).unwrap();
    let headers = rdr.headers().unwrap().clone();
    let rec = rdr.records().next().unwrap().unwrap();
    let get = |k: &str| rec.get(headers.iter().position(|h| h == k).unwrap()).unwrap().to_string();
    assert_eq!(get("mode"), "blinded");
    assert_eq!(get("replications"), "10000");
    let mean: f64 = get("mean_n").parse().unwrap();
    assert!((mean - 99.94).abs() <= 0.41, "{mean}");
    assert_eq!(get("bound_table"), "101.75");
    assert_eq!(get("cap_hits"), "0");
}

#[test]
fn both_modes_share_the_stream() {
    let truth = ScenarioTruth::new(1.0, 0.0, 2.0).unwrap();
    let s = Scenario::new(5.0, truth).with_replications(3000).with_seed(4);
    let both = run_scenario(&s, Workers::default(), true).unwrap();
    let only = run_scenario(&s.clone().with_modes(ModeSelection::Blinded), Workers::default(), false).unwrap();
    assert_eq!(both.summaries[0].mean_n, only.summaries[0].mean_n);
    let recs = both.records.unwrap();
    let n_of = |mode: Mode| -> Vec<u64> { recs.iter().filter(|r| r.mode == mode).map(|r| r.n_stop).collect() };
    let (nb, nu) = (n_of(Mode::Blinded), n_of(Mode::Unblinded));
    assert_eq!(nb.len(), 3000);
    let later = nb.iter().zip(&nu).filter(|(b, u)| b >= u).count();
    assert!(later as f64 >= 0.9 * 3000.0, "{later}");
}
