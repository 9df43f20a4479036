//! Acceptance criteria 1 to 12, one line of output per criterion.

use psk_core::suites::*;
use std::io::Write;
use std::time::Instant;

fn line(criterion: u8, r: &SuiteReport, millis: u128) -> String {
    let verdict = if r.passed() { "PASS" } else { "FAIL" };
    let mut s = format!(
        "criterion {criterion:>2} [{}] {verdict}: {} checks, {} failed, {:.1}s",
        r.suite,
        r.checked,
        r.failed,
        millis as f64 / 1000.0
    );
    for n in &r.notes {
        s.push_str(&format!("; {n}"));
    }
    for f in r.failures.iter().take(3) {
        s.push_str(&format!("\n      {f}"));
    }
    s
}

#[test]
fn acceptance() {
    let cfg = SuiteConfig::default();
    let mut log = MapLog::default();
    type Suite<'a> = Box<dyn FnMut() -> SuiteReport + 'a>;
    let mut results: Vec<(u8, SuiteReport, u128)> = Vec::new();
    {
        let log = &mut log;
        let mut plain: Vec<(u8, Suite)> = vec![
            (1, Box::new(|| fronton_unique(&cfg))),
            (2, Box::new(|| birkhoff(&cfg))),
            (3, Box::new(|| rho_sigma(&cfg))),
            (4, Box::new(|| sigma_rho_sub(&cfg))),
            (5, Box::new(|| translation(&cfg))),
            (6, Box::new(|| prefilter_agree(&cfg))),
        ];
        for (c, run) in plain.iter_mut() {
            let t = Instant::now();
            let r = run();
            results.push((*c, r, t.elapsed().as_millis()));
        }
        let t = Instant::now();
        let r = refutalg_oracles(&cfg, log);
        results.push((7, r, t.elapsed().as_millis()));
        let t = Instant::now();
        let r = rewrite_roundtrip(&cfg, log);
        results.push((8, r, t.elapsed().as_millis()));
        let t = Instant::now();
        let r = ruletrans(&cfg, log);
        results.push((9, r, t.elapsed().as_millis()));
    }
    let t = Instant::now();
    results.push((10, grz_structural_suite(&cfg), t.elapsed().as_millis()));
    let t = Instant::now();
    results.push((11, search_map_lemmas(&log), t.elapsed().as_millis()));
    let t = Instant::now();
    results.push((12, magari_prefilter(&cfg), t.elapsed().as_millis()));

    let mut out = std::io::stdout().lock();
    for (c, r, ms) in &results {
        writeln!(out, "{}", line(*c, r, *ms)).unwrap();
    }
    let failed: Vec<u8> = results.iter().filter(|(_, r, _)| !r.passed()).map(|(c, _, _)| *c).collect();
    writeln!(out, "acceptance: {} of {} criteria pass", results.len() - failed.len(), results.len()).unwrap();
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
