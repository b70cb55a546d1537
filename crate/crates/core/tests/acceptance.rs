//! Acceptance suite: one PASS/FAIL line per criterion on stderr, each with
//! its time limit.

use std::io::Write;
use std::time::{Duration, Instant};

use irw_core::encoders::{compile, phi_word, tm_to_trs, Construction};
use irw_core::laws::{
    self, check_limit_correspondence, check_pebble_limit, check_pickn, check_r_construction,
    check_run_classification, check_run_cycles, check_srs_bisim, check_srs_random,
    check_two_sided_random, fixtures, random, LimitOutcome, RConstructionOptions,
};
use irw_core::machine::{parse_machine, print_machine};
use irw_core::omega::{membership_semidecide, parse_word, Membership, Tri};
use irw_core::rewrite::{close_limit, parse_trs, run_strategy, same_system, Rule, Strategy, Trs};
use irw_core::turing::parse_config;
use irw_core::{bisim_equal, encoders, parse_pattern, parse_term, print_term, Signature, Term};

const SEED: u64 = 20_240_601;

type Check = fn() -> Result<(), String>;

fn expect_holds(r: &laws::LawReport) -> Result<(), String> {
    if r.holds() {
        Ok(())
    } else {
        Err(r.render().replace('\n', " | "))
    }
}

fn c1_two_sided() -> Result<(), String> {
    expect_holds(&check_two_sided_random(200, 5, 50, SEED))
}

fn c2_srs() -> Result<(), String> {
    let words = fixtures::words();
    for name in ["nd_right", "nd_pong"] {
        expect_holds(&check_srs_bisim(&fixtures::nondet(name), &words, 100))?;
    }
    expect_holds(&check_srs_random(100, 100, SEED))
}

fn c3_pickn() -> Result<(), String> {
    expect_holds(&check_pickn(50))
}

fn c4_run_cycles() -> Result<(), String> {
    expect_holds(
        &check_run_cycles(&fixtures::det("m_acc"), 5, 100_000).map_err(|e| e.to_string())?,
    )?;
    let m_rej = fixtures::det("m_rej");
    let (s, _, _) = encoders::build_s(&m_rej).map_err(|e| e.to_string())?;
    if s.rules().iter().any(|r| r.id.starts_with("halt.")) {
        return Err("M_REJ system has halt rules".into());
    }
    expect_holds(&check_run_cycles(&m_rej, 2, 1000).map_err(|e| e.to_string())?)
}

fn c5_pebble_limit() -> Result<(), String> {
    expect_holds(
        &check_pebble_limit(&fixtures::det("m_acc"), 5, 100_000, 1000)
            .map_err(|e| e.to_string())?,
    )
}

fn c6_r_construction() -> Result<(), String> {
    let (pos, neg) = (fixtures::nondet("nd_right"), fixtures::nondet("nd_pong"));
    let r = check_r_construction(&pos, &neg, RConstructionOptions::default())
        .map_err(|e| e.to_string())?;
    expect_holds(&r)?;
    let opts = RConstructionOptions {
        as_printed: true,
        ..RConstructionOptions::default()
    };
    let r = check_r_construction(&pos, &neg, opts).map_err(|e| e.to_string())?;
    match r.verdict {
        laws::Verdict::Refuted(_) => Ok(()),
        _ => Err(format!("as-printed variant not refuted: {}", r.render())),
    }
}

fn c7_limit_correspondence() -> Result<(), String> {
    let right = fixtures::nondet("nd_right");
    let a = parse_word("(a)^w").unwrap();
    let (r, o) = check_limit_correspondence(&right, &a, 10_000);
    expect_holds(&r)?;
    let expected = parse_term("rec X. a(X)", &Signature::new().with("a", 1)).unwrap();
    match o {
        LimitOutcome::Closed(t) if bisim_equal(&t, &expected) => {}
        o => return Err(format!("ND_RIGHT on (a)^w: {o:?}")),
    }
    let ab = parse_word("ab(ba)^w").unwrap();
    let (r, o) = check_limit_correspondence(&right, &ab, 10_000);
    expect_holds(&r)?;
    match o {
        LimitOutcome::Closed(t) if bisim_equal(&t, &phi_word(&ab)) => {}
        o => return Err(format!("ND_RIGHT on ab(ba)^w: {o:?}")),
    }
    let (r, o) = check_limit_correspondence(&fixtures::nondet("nd_pong"), &a, 10_000);
    expect_holds(&r)?;
    match o {
        LimitOutcome::NoClosure {
            min_depth_tail: Some(d),
        } if d <= 1 => Ok(()),
        o => Err(format!("ND_PONG on (a)^w: {o:?}")),
    }
}

fn c8_classification() -> Result<(), String> {
    for (name, accepting) in [("nd_right", true), ("nd_pong", false)] {
        let m = fixtures::nondet(name);
        for w in fixtures::words() {
            expect_holds(&check_run_classification(&m, &w, 10_000))?;
            let accepted = matches!(
                membership_semidecide(&m, &w, 1000, 64),
                Membership::Accepted(_)
            );
            if accepted != accepting {
                return Err(format!("{name} on {w}: accepted = {accepted}"));
            }
        }
    }
    // the pong runs are oscillating lassos
    let ex = irw_core::omega::explore_runs(
        &fixtures::nondet("nd_pong"),
        &parse_word("(a)^w").unwrap(),
        1000,
        64,
    );
    let all_osc = ex
        .runs
        .iter()
        .all(|r| irw_core::omega::classify_run(r).oscillating == Tri::Yes);
    if !all_osc {
        return Err("ND_PONG run not classified oscillating".into());
    }
    Ok(())
}

fn c9_convergence() -> Result<(), String> {
    let m = fixtures::det("m_ext");
    let trs = tm_to_trs(&m);
    let start = encoders::encode_config(&parse_config(&m, "q0").unwrap());
    let run = run_strategy(&trs, &start, Strategy::LeftmostOutermost, 100, 32);
    let steps: Vec<_> = run.trace.steps().cloned().collect();
    if steps.len() != 100 || steps.iter().any(|s| !s.position.is_empty()) {
        return Err("M_EXT run is not 100 root steps".into());
    }
    match close_limit(&steps) {
        Ok((t, _)) => return Err(format!("M_EXT trace closed to {t}")),
        Err(nc) if nc.min_depth_tail == Some(0) => {}
        Err(nc) => return Err(format!("M_EXT tail depth {:?}", nc.min_depth_tail)),
    }

    let sig = Signature::new().with("xi", 0).with("a", 1);
    let rule = Rule::new(
        "xi",
        parse_pattern("xi", &sig).unwrap(),
        parse_pattern("a(xi)", &sig).unwrap(),
    )
    .unwrap();
    let trs = Trs::new(sig.clone(), vec![rule]).unwrap();
    let run = run_strategy(
        &trs,
        &Term::constant("xi"),
        Strategy::LeftmostOutermost,
        20,
        32,
    );
    let steps: Vec<_> = run.trace.steps().cloned().collect();
    let expected = parse_term("rec X. a(X)", &sig).unwrap();
    match close_limit(&steps) {
        Ok((t, _)) if bisim_equal(&t, &expected) => Ok(()),
        Ok((t, _)) => Err(format!("xi closed to {t}")),
        Err(nc) => Err(format!("xi not closed: {}", nc.reason)),
    }
}

fn c10_round_trips() -> Result<(), String> {
    let mut machines: Vec<_> = fixtures::ALL
        .iter()
        .map(|(n, _)| fixtures::machine(n).unwrap())
        .collect();
    let mut rng = random::rng(SEED);
    for i in 0..50 {
        machines.push(random::det_machine(&mut rng, i).machine().clone());
        machines.push(random::nd_machine(&mut rng, i).machine().clone());
    }
    for m in &machines {
        let back = parse_machine(&print_machine(m)).map_err(|e| format!("{}: {e}", m.name))?;
        if &back != m {
            return Err(format!("machine {} changed in round trip", m.name));
        }
        for c in Construction::ALL {
            let Ok(compiled) = compile(c, Some(m), false) else {
                continue;
            };
            let file =
                parse_trs(&compiled.to_file()).map_err(|e| format!("{} {c}: {e}", m.name))?;
            if !same_system(&compiled.trs, &file.trs) {
                return Err(format!("{} {c}: TRS changed in round trip", m.name));
            }
        }
    }

    let syms = [("f", 2), ("g", 1), ("a", 0), ("b", 0)];
    let sig = Signature::new()
        .with("f", 2)
        .with("g", 1)
        .with("a", 0)
        .with("b", 0);
    for _ in 0..100 {
        let t = random::term(&mut rng, &syms, 12);
        let back = parse_term(&print_term(&t), &sig).map_err(|e| format!("{t}: {e}"))?;
        if !bisim_equal(&t, &back) {
            return Err(format!("term {t} changed in round trip"));
        }
    }

    for i in 0..100 {
        let m = random::det_machine(&mut rng, i);
        let c = random::tm_config(&mut rng, &m);
        let back = parse_config(&m, &c.to_string()).map_err(|e| format!("{c}: {e}"))?;
        if back != c {
            return Err(format!("config {c} changed in round trip"));
        }
        let w = random::omega_word(&mut rng, &m.alphabet);
        let back = parse_word(&w.to_string()).map_err(|e| format!("{w}: {e}"))?;
        if back != w {
            return Err(format!("word {w} changed in round trip"));
        }
    }
    Ok(())
}

#[test]
fn acceptance() {
    let criteria: [(&str, Check, u64); 10] = [
        ("1 two-sided bisimulation", c1_two_sided, 10),
        ("2 SRS bisimulation", c2_srs, 30),
        ("3 pickn enumeration", c3_pickn, 5),
        ("4 run cycles", c4_run_cycles, 60),
        ("5 pebble prefix and loop rule", c5_pebble_limit, 60),
        ("6 construction R", c6_r_construction, 120),
        ("7 limit correspondence", c7_limit_correspondence, 10),
        ("8 run classification", c8_classification, 10),
        ("9 convergence diagnostics", c9_convergence, 1),
        ("10 round trips", c10_round_trips, 5),
    ];
    let mut failed = Vec::new();
    // libtest has already printed `test acceptance ... ` on this line
    let _ = writeln!(std::io::stderr());
    for (name, check, limit) in criteria {
        let start = Instant::now();
        let result = check();
        let elapsed = start.elapsed();
        let result = match result {
            Ok(()) if elapsed > Duration::from_secs(limit) => {
                Err(format!("took {elapsed:.2?}, limit {limit} s"))
            }
            r => r,
        };
        // the stderr handle bypasses libtest's capture
        let mut err = std::io::stderr();
        let _ = match result {
            Ok(()) => writeln!(err, "PASS {name} ({elapsed:.2?}, limit {limit} s)"),
            Err(why) => {
                failed.push(name);
                writeln!(err, "FAIL {name} ({elapsed:.2?}, limit {limit} s): {why}")
            }
        };
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
