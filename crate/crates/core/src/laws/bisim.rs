//! Step-exact correspondence between machines and their rewrite systems.

use std::collections::BTreeSet;

use super::{fixtures, random, timed, LawReport, Verdict};
use crate::encoders::{decode_config, encode_config, nd_to_srs, phi_config, tm_to_trs};
use crate::omega::{nd_steps, NdConfig, NdTmSpec, OmegaWord};
use crate::rewrite::{successors, Trs};
use crate::term::{canonical_key, TermKey};
use crate::turing::{tm_step, TmConfig, TmSpec};

const FRONTIER_WIDTH: usize = 32;

/// Runs `c` for `steps` steps on the machine and on `trs`, comparing every
/// step. Returns a witness on the first divergence.
fn compare_run(m: &TmSpec, trs: &Trs, c: &TmConfig, steps: usize) -> Result<(), String> {
    let mut cur = c.clone();
    let mut t = encode_config(c);
    for i in 0..=steps {
        let next = tm_step(m, &cur);
        let redexes = successors(trs, &t, 2);
        match (next, redexes.as_slice()) {
            (None, []) => return Ok(()),
            (None, _) => {
                return Err(format!(
                    "machine {}, config `{cur}`, step {i}: machine halts but the term {t} has a redex",
                    m.name
                ))
            }
            (Some(_), _) if i == steps => return Ok(()),
            (Some(n), [(r, after)]) if r.position.is_empty() => {
                let decoded = decode_config(m, after).map_err(|e| {
                    format!("machine {}, config `{cur}`, step {i}: {e}", m.name)
                })?;
                if decoded != n {
                    return Err(format!(
                        "machine {}, config `{cur}`, step {i}: machine gives `{n}`, rule {} gives `{decoded}`",
                        m.name,
                        trs.rules()[r.rule].id
                    ));
                }
                cur = n;
                t = after.clone();
            }
            (Some(n), rs) => {
                return Err(format!(
                    "machine {}, config `{cur}`, step {i}: machine gives `{n}`, the term has {} redexes",
                    m.name,
                    rs.len()
                ))
            }
        }
    }
    Ok(())
}

/// Random configurations (carrier at most 8) run `steps` steps on both
/// sides of `m` and its compiled system.
pub fn check_two_sided_bisim(m: &TmSpec, samples: usize, steps: usize, seed: u64) -> LawReport {
    check_two_sided_bisim_with(m, &tm_to_trs(m), samples, steps, seed)
}

/// As [`check_two_sided_bisim`] against a given (possibly corrupted) system.
pub fn check_two_sided_bisim_with(
    m: &TmSpec,
    trs: &Trs,
    samples: usize,
    steps: usize,
    seed: u64,
) -> LawReport {
    timed(|| {
        let mut report = LawReport::new("two-sided-bisim");
        report.seed = Some(seed);
        let mut rng = random::rng(seed);
        for _ in 0..samples {
            let c = random::tm_config(&mut rng, m);
            report.samples += 1;
            if let Err(w) = compare_run(m, trs, &c, steps) {
                report.refute(w);
                break;
            }
        }
        report.note(format!(
            "machine {}: {} configurations, {steps} steps each",
            m.name, report.samples
        ));
        report
    })
}

/// `machines` random machines, `configs` configurations each.
pub fn check_two_sided_random(
    machines: usize,
    configs: usize,
    steps: usize,
    seed: u64,
) -> LawReport {
    timed(|| {
        let mut report = LawReport::new("two-sided-bisim-random");
        report.seed = Some(seed);
        let mut rng = random::rng(seed);
        for i in 0..machines {
            let m = random::det_machine(&mut rng, i);
            let trs = tm_to_trs(&m);
            for _ in 0..configs {
                let c = random::tm_config(&mut rng, &m);
                report.samples += 1;
                if let Err(w) = compare_run(&m, &trs, &c, steps) {
                    report.refute(w);
                    return report;
                }
            }
        }
        report.note(format!(
            "{machines} machines x {configs} configurations x {steps} steps"
        ));
        report
    })
}

fn config_order(c: &NdConfig) -> (String, usize, Vec<(usize, String)>) {
    (
        c.state.name().to_owned(),
        c.head,
        c.writes
            .iter()
            .map(|(&k, v)| (k, v.name().to_owned()))
            .collect(),
    )
}

/// Level-by-level comparison from the initial configuration on each word:
/// for every configuration in the frontier, φ of its machine successors
/// equals the set of one-step reducts of its φ image. Frontiers keep the
/// first 32 configurations in a canonical order.
pub fn check_srs_bisim(m: &NdTmSpec, words: &[OmegaWord], depth: usize) -> LawReport {
    check_srs_bisim_with(m, &nd_to_srs(m), words, depth)
}

pub fn check_srs_bisim_with(
    m: &NdTmSpec,
    trs: &Trs,
    words: &[OmegaWord],
    depth: usize,
) -> LawReport {
    timed(|| {
        let mut report = LawReport::new("srs-bisim");
        for w in words {
            let mut frontier = vec![NdConfig::initial(m)];
            let mut levels = 0;
            for level in 0..depth {
                if frontier.is_empty() {
                    break;
                }
                levels = level + 1;
                let mut next: Vec<NdConfig> = Vec::new();
                for c in &frontier {
                    report.samples += 1;
                    let succ = nd_steps(m, w, c);
                    let machine_side: BTreeSet<TermKey> = succ
                        .iter()
                        .map(|s| canonical_key(&phi_config(w, s)))
                        .collect();
                    let term = phi_config(w, c);
                    let rewrite_side: BTreeSet<TermKey> = successors(trs, &term, c.head + 2)
                        .iter()
                        .map(|(_, t)| canonical_key(t))
                        .collect();
                    if machine_side != rewrite_side {
                        report.refute(format!(
                            "machine {}, word {w}, level {level}, config φ = {term}: {} machine successors, {} one-step reducts, sets differ",
                            m.name,
                            machine_side.len(),
                            rewrite_side.len()
                        ));
                        return report;
                    }
                    for s in succ {
                        if !next.contains(&s) {
                            next.push(s);
                        }
                    }
                }
                next.sort_by_key(config_order);
                next.truncate(FRONTIER_WIDTH);
                frontier = next;
            }
            report.note(format!(
                "machine {}, word {w}: {levels} levels compared",
                m.name
            ));
        }
        report
    })
}

/// [`check_srs_bisim`] over `machines` random machines on the fixture
/// words.
pub fn check_srs_random(machines: usize, depth: usize, seed: u64) -> LawReport {
    timed(|| {
        let mut report = LawReport::new("srs-bisim-random");
        report.seed = Some(seed);
        let mut rng = random::rng(seed);
        let words = fixtures::words();
        for i in 0..machines {
            let m = random::nd_machine(&mut rng, i);
            let r = check_srs_bisim(&m, &words, depth);
            report.samples += r.samples;
            if let Verdict::Refuted(w) = r.verdict {
                report.refute(w);
                return report;
            }
        }
        report.note(format!(
            "{machines} machines x {} words, frontier depth {depth}",
            words.len()
        ));
        report
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rewrite::Rule;
    use crate::term::parse_pattern;

    #[test]
    fn empty_table_holds_vacuously() {
        let m = fixtures::det("halt_now");
        assert!(check_two_sided_bisim(&m, 10, 5, 1).holds());
    }

    #[test]
    fn corrupted_write_is_refuted() {
        let m = fixtures::det("m_acc");
        let trs = tm_to_trs(&m);
        let mut rules = trs.rules().to_vec();
        // R.q0.S writes 0 instead of S
        rules[0] = Rule::new(
            rules[0].id.clone(),
            rules[0].lhs.clone(),
            parse_pattern("q0(0(x), y)", &trs.sig).unwrap(),
        )
        .unwrap();
        let bad = Trs::new(trs.sig.clone(), rules).unwrap();
        let r = check_two_sided_bisim_with(&m, &bad, 100, 50, 7);
        assert_eq!(r.verdict.name(), "refuted", "{}", r.render());
    }

    #[test]
    fn extra_srs_rule_is_refuted() {
        let m = fixtures::nondet("nd_right");
        let srs = nd_to_srs(&m);
        let extra = Rule::new(
            "extra",
            parse_pattern("q0(a(x))", &srs.sig).unwrap(),
            parse_pattern("b(q0(x))", &srs.sig).unwrap(),
        )
        .unwrap();
        let bad = srs.with_rule(extra).unwrap();
        let r = check_srs_bisim_with(&m, &bad, &fixtures::words(), 10);
        assert_eq!(r.verdict.name(), "refuted");
    }
}
