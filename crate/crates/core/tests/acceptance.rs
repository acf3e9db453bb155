//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any criterion fails.

mod common;

use std::collections::BTreeSet;
use std::panic;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use twistdance::codec::{parse_bytes, ParseError};
use twistdance::facing::{
    matching_check, matching_solve, parity_vector, window_parity, ParityVector,
};
use twistdance::model::paths_of;
use twistdance::scheduler::{oracle_schedule, retrograde, retrograde_gap, verify_schedule};
use twistdance::solver::{min_dancers, min_laps, placements, plan_for, Outcome};
use twistdance::{
    parse, schedule_search, serialize, CrossingRule, DancePlan, DanceRule, Diagram, Facing,
    FacingAssignment, Gap, InfeasibleReason, RuleKind,
};

const TREFOIL: &str = "O1+ U2+ O3+ U1+ O2+ U3+";
const TREFOIL_BAR: &str = "O1+ U2+ O3+ T1 U1+ O2+ U3+";
const TREFOIL_TWO_BARS: &str = "O1+ U2+ O3+ T1 T2 U1+ O2+ U3+";

type CheckResult = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> CheckResult + 'a>);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn gaps(points: &[usize]) -> Vec<Gap> {
    points.iter().map(|&g| Gap(g)).collect()
}

fn within(limit: Duration, start: Instant) -> Result<Duration, String> {
    let elapsed = start.elapsed();
    ensure!(elapsed < limit, "took {elapsed:?}, limit {limit:?}");
    Ok(elapsed)
}

fn ac1_trefoil_two_dancers() -> CheckResult {
    let start = Instant::now();
    let d = parse(TREFOIL).map_err(|e| e.to_string())?;
    let report = min_dancers(&d, RuleKind::Forward, CrossingRule::OverFirst, 1, 6)
        .map_err(|e| e.to_string())?;
    let (plan, schedule) = report.feasible().ok_or("no feasible plan")?;
    ensure!(plan.dancers() == 2, "minimal n = {}", plan.dancers());
    verify_schedule(plan, schedule).map_err(|e| e.to_string())?;
    for g in 0..6 {
        let single = DancePlan::forward(d.clone(), vec![Gap(g)], 1).unwrap();
        match schedule_search(&single) {
            Err(e) if e.reason == InfeasibleReason::Deadlock => {}
            other => return Err(format!("n=1 at gap {g}: {other:?}")),
        }
    }
    let elapsed = within(Duration::from_secs(1), start)?;
    Ok(format!(
        "n=2 at {:?}; all 6 single placements deadlock; {elapsed:?}",
        plan.points()
    ))
}

fn ac2_twist_trefoil_four_laps() -> CheckResult {
    let start = Instant::now();
    let d = parse(TREFOIL_BAR).map_err(|e| e.to_string())?;
    let short = min_laps(&d, 2, RuleKind::Forward, CrossingRule::OverFirst, 3)
        .map_err(|e| e.to_string())?;
    ensure!(
        short.outcome == Outcome::ExhaustedBounds,
        "a 2-point plan with k<=3 exists"
    );
    let report = min_laps(&d, 2, RuleKind::Forward, CrossingRule::OverFirst, 4)
        .map_err(|e| e.to_string())?;
    let (plan, _) = report.feasible().ok_or("no 2-point plan with k<=4")?;
    ensure!(plan.k() == 4, "minimal k = {}", plan.k());
    let fig = DancePlan::forward(d, gaps(&[0, 4]), 4).unwrap();
    let witness = schedule_search(&fig).map_err(|e| format!("{{0,4}} k=4: {e}"))?;
    verify_schedule(&fig, &witness).map_err(|e| e.to_string())?;
    let elapsed = within(Duration::from_secs(5), start)?;
    Ok(format!(
        "minimal k=4 over all 21 placements; {{0,4}} witness of {} steps verifies; {elapsed:?}",
        witness.steps.len()
    ))
}

fn ac3_double_bar_one_lap() -> CheckResult {
    let d = parse(TREFOIL_TWO_BARS).map_err(|e| e.to_string())?;
    let points = gaps(&[0, 5]);
    let paths = paths_of(&d, &points).map_err(|e| e.to_string())?;
    let bars: Vec<usize> = paths
        .iter()
        .map(|p| p.events(&d).filter(|e| e.is_twist_bar()).count())
        .collect();
    ensure!(bars == [2, 0], "bar distribution {bars:?}");
    let plan = DancePlan::forward(d, points, 1).unwrap();
    let witness = schedule_search(&plan).map_err(|e| e.to_string())?;
    verify_schedule(&plan, &witness).map_err(|e| e.to_string())?;
    let flips = witness
        .dancer_steps(0)
        .filter(|s| s.event.is_twist_bar())
        .count();
    ensure!(flips == 2, "dancer 0 flips {flips} times");
    Ok("both bars on one path; n=2, k=1 forward witness verifies".into())
}

/// The facing classes consistent at k=1, built by walking the chain
/// f[i+1] = f[i] ^ t[i] from both starting facings.
fn chain_classes(t: &ParityVector) -> BTreeSet<FacingAssignment> {
    let n = t.len();
    [Facing::Forward, Facing::Backward]
        .into_iter()
        .filter_map(|f0| {
            let mut f = vec![f0];
            for i in 0..n - 1 {
                f.push(f[i].after(t.bits()[i]));
            }
            (f[n - 1].after(t.bits()[n - 1]) == f0).then_some(FacingAssignment(f))
        })
        .collect()
}

fn ac4_matching_facing_sensitivity() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut corpus: Vec<Diagram> = vec![
        parse(TREFOIL_TWO_BARS).unwrap(),
        parse("O1+ T1 U2+ O3+ U1+ T2 O2+ U3+").unwrap(),
    ];
    for _ in 0..40 {
        let classical = rng.gen_range(1..=4);
        let virtual_pairs = rng.gen_range(0..=1);
        corpus.push(common::random_with_bars(
            &mut rng,
            classical,
            virtual_pairs,
            2,
        ));
    }
    let (mut placements_checked, mut witnesses, mut deadlocks) = (0, 0, 0);
    for d in &corpus {
        for points in placements(d.gap_count(), 3) {
            let t = parity_vector(d, &points).unwrap();
            if t.bits().iter().filter(|&&b| b).count() != 2 {
                continue;
            }
            placements_checked += 1;
            let classes = chain_classes(&t);
            ensure!(
                classes.len() == 2,
                "expected two consistent classes for {t:?}"
            );
            let k1: BTreeSet<FacingAssignment> = FacingAssignment::enumerate(3)
                .filter(|f| matching_check(&t, f, 1))
                .collect();
            ensure!(k1 == classes, "k=1 feasible facings {k1:?} != {classes:?}");
            let solved = matching_solve(&t, 1).ok_or("matching_solve failed at k=1")?;
            ensure!(
                classes.contains(&solved),
                "solver answer outside the classes"
            );
            ensure!(
                FacingAssignment::enumerate(3).all(|f| matching_check(&t, &f, 3)),
                "some facing fails at k=3 for {t:?}"
            );
            // Flipping one facing of a k=1 solution pushes the requirement to k=3.
            for j in 0..3 {
                let mut f = solved.clone();
                f.0[j] = f.0[j].flip();
                let min_k = (1..=3).find(|&k| matching_check(&t, &f, k));
                ensure!(min_k == Some(3), "flipped point {j}: minimal k {min_k:?}");
            }
            for f in FacingAssignment::enumerate(3) {
                let plan = DancePlan::new(
                    d.clone(),
                    points.clone(),
                    3,
                    DanceRule::Matching(f),
                    CrossingRule::OverFirst,
                )
                .unwrap();
                match schedule_search(&plan) {
                    Ok(s) => {
                        verify_schedule(&plan, &s).map_err(|e| e.to_string())?;
                        witnesses += 1;
                    }
                    Err(e) => {
                        ensure!(
                            e.reason == InfeasibleReason::Deadlock,
                            "k=3 rejected on parity"
                        );
                        deadlocks += 1;
                    }
                }
            }
        }
    }
    ensure!(
        placements_checked > 0 && witnesses > 0,
        "vacuous: {placements_checked} placements, {witnesses} witnesses"
    );
    Ok(format!(
        "{placements_checked} placements over {} diagrams; {witnesses} k=3 witnesses verified, {deadlocks} deadlocks",
        corpus.len()
    ))
}

/// Exhaustive small diagrams plus seeded random ones up to 8 events.
fn generated_corpus() -> Vec<Diagram> {
    let mut corpus: Vec<Diagram> = (0..=6).flat_map(common::all_diagrams).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..600 {
        let m = rng.gen_range(7..=8);
        corpus.push(common::random_diagram(&mut rng, m));
    }
    corpus
}

fn corpus_plans(corpus: &[Diagram]) -> impl Iterator<Item = DancePlan> + '_ {
    corpus.iter().flat_map(|d| {
        (1..=3.min(d.gap_count())).flat_map(move |n| {
            placements(d.gap_count(), n).flat_map(move |points| {
                (1..=2).flat_map(move |k| {
                    let forward = DancePlan::forward(d.clone(), points.clone(), k).unwrap();
                    let matching = plan_for(
                        d,
                        points.clone(),
                        k,
                        RuleKind::Matching,
                        CrossingRule::OverFirst,
                    );
                    std::iter::once(forward).chain(matching)
                })
            })
        })
    })
}

fn ac5_oracle_equivalence(corpus: &[Diagram]) -> CheckResult {
    let start = Instant::now();
    let (mut plans, mut feasible) = (0usize, 0usize);
    for plan in corpus_plans(corpus) {
        for rule in [CrossingRule::OverFirst, CrossingRule::UnderFirst] {
            let plan = plan.clone().with_crossing_rule(rule);
            let searched = schedule_search(&plan).is_ok();
            let brute = oracle_schedule(&plan).map_err(|e| e.to_string())?;
            ensure!(searched == brute.is_some(), "disagreement on {plan:?}");
            plans += 1;
            feasible += searched as usize;
        }
    }
    let elapsed = within(Duration::from_secs(120), start)?;
    Ok(format!(
        "{} diagrams, {plans} plans, {feasible} feasible, 0 disagreements; {elapsed:?}",
        corpus.len()
    ))
}

fn ac6_retrograde_duality(corpus: &[Diagram]) -> CheckResult {
    let mut plans = 0usize;
    for plan in corpus_plans(corpus) {
        if plan.rule() != &DanceRule::Forward {
            continue;
        }
        let m = plan.diagram().len();
        let mut mapped: Vec<Gap> = plan
            .points()
            .iter()
            .map(|&g| retrograde_gap(m, g))
            .collect();
        mapped.sort();
        let reversed = DancePlan::new(
            retrograde(plan.diagram()),
            mapped,
            plan.k(),
            DanceRule::Forward,
            CrossingRule::UnderFirst,
        )
        .unwrap();
        ensure!(
            schedule_search(&plan).is_ok() == schedule_search(&reversed).is_ok(),
            "disagreement on {plan:?}"
        );
        plans += 1;
    }
    Ok(format!("{plans} forward plans, 0 disagreements"))
}

fn ac7_facing_algebra() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checks = 0usize;
    let mut attempts = 0usize;
    while checks < 10_000 {
        attempts += 1;
        ensure!(attempts < 200_000, "too few feasible plans generated");
        let m = rng.gen_range(0..=9);
        let d = common::random_diagram(&mut rng, m);
        let n = rng.gen_range(1..=4.min(d.gap_count()));
        let all: Vec<Vec<Gap>> = placements(d.gap_count(), n).collect();
        let points = all[rng.gen_range(0..all.len())].clone();
        let k = rng.gen_range(1..=6);
        let t = parity_vector(&d, &points).unwrap();
        let rule = if rng.gen_bool(0.5) {
            DanceRule::Forward
        } else {
            match matching_solve(&t, k) {
                Some(f) => DanceRule::Matching(f),
                None => continue,
            }
        };
        let crossing = if rng.gen_bool(0.5) {
            CrossingRule::OverFirst
        } else {
            CrossingRule::Unrestricted
        };
        let plan = DancePlan::new(d, points, k, rule, crossing).unwrap();
        let Ok(schedule) = schedule_search(&plan) else {
            continue;
        };
        // Step the facings through the witness by hand.
        let mut facing: Vec<Facing> = (0..n).map(|i| plan.start_facing(i)).collect();
        for step in &schedule.steps {
            if step.event.is_twist_bar() {
                facing[step.dancer] = facing[step.dancer].flip();
            }
            ensure!(step.facing == facing[step.dancer], "recorded facing drifts");
        }
        for (i, end) in facing.iter().enumerate() {
            let predicted = plan.start_facing(i).after(window_parity(&t, i, k));
            ensure!(
                *end == predicted,
                "dancer {i} ends {end:?}, algebra says {predicted:?}"
            );
        }
        checks += 1;
    }

    let mut brute_cases = 0usize;
    for n in 1..=4usize {
        for mask in 0..1u32 << n {
            let t = ParityVector::new((0..n).map(|i| mask >> i & 1 == 1).collect());
            for k in 1..=8 {
                let any = FacingAssignment::enumerate(n).any(|f| matching_check(&t, &f, k));
                let solved = matching_solve(&t, k);
                ensure!(
                    solved.is_some() == any,
                    "solver disagrees for t={t:?} k={k}"
                );
                if let Some(f) = solved {
                    ensure!(matching_check(&t, &f, k), "solver answer fails the check");
                }
                brute_cases += 1;
            }
        }
    }
    Ok(format!("{checks} witness facing checks ({attempts} plans drawn); {brute_cases} brute-force solver cases"))
}

fn ac8_codec() -> CheckResult {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in 0..1000 {
        let m = rng.gen_range(0..=24);
        let d = common::random_diagram(&mut rng, m);
        let text = serialize(&d);
        let back = parse(&text).map_err(|e| format!("case {case}: {e}"))?;
        ensure!(back == d, "case {case}: roundtrip changed {text:?}");
        ensure!(serialize(&back) == text, "case {case}: not canonical");
        // Any separator mix parses to the same diagram.
        let noisy: String = text
            .split(' ')
            .map(|tok| {
                let sep = [",", " ", "\t", "\n", ", ", "\n\t"][rng.gen_range(0..6)];
                format!("{tok}{sep}")
            })
            .collect();
        ensure!(
            parse(&noisy).ok() == Some(d.clone()),
            "case {case}: separators matter"
        );
    }

    const ALPHABET: &[u8] = b"OUVT0123456789+-, \t\nXo\r";
    let mut structured = 0usize;
    let mut accepted = 0usize;
    for i in 0..100_000 {
        let len = rng.gen_range(0..24);
        let bytes: Vec<u8> = if i % 2 == 0 {
            (0..len).map(|_| rng.gen()).collect()
        } else {
            (0..len)
                .map(|_| ALPHABET[rng.gen_range(0..ALPHABET.len())])
                .collect()
        };
        let result = panic::catch_unwind(|| parse_bytes(&bytes))
            .map_err(|_| format!("panic on {bytes:?}"))?;
        match result {
            Ok(d) => {
                ensure!(
                    parse(&serialize(&d)).ok() == Some(d),
                    "accepted input does not roundtrip"
                );
                accepted += 1;
            }
            Err(ParseError::Utf8 { .. } | ParseError::Lex { .. } | ParseError::Invalid { .. }) => {
                structured += 1
            }
        }
    }
    Ok(format!("1000 roundtrips; 100000 fuzz inputs: {accepted} accepted, {structured} structured errors, 0 panics"))
}

fn main() -> ExitCode {
    let corpus = generated_corpus();
    let criteria: Vec<Criterion> = vec![
        (
            "AC1 trefoil is 2-danceable, not 1",
            Box::new(ac1_trefoil_two_dancers),
        ),
        (
            "AC2 twist-bar trefoil needs k=4",
            Box::new(ac2_twist_trefoil_four_laps),
        ),
        (
            "AC3 two bars on one path dance with k=1",
            Box::new(ac3_double_bar_one_lap),
        ),
        (
            "AC4 matching rule facing sensitivity",
            Box::new(ac4_matching_facing_sensitivity),
        ),
        (
            "AC5 search agrees with brute-force oracle",
            Box::new(|| ac5_oracle_equivalence(&corpus)),
        ),
        (
            "AC6 retrograde duality",
            Box::new(|| ac6_retrograde_duality(&corpus)),
        ),
        ("AC7 facing algebra", Box::new(ac7_facing_algebra)),
        ("AC8 codec roundtrip and fuzz", Box::new(ac8_codec)),
    ];

    let mut failed = 0;
    for (name, check) in &criteria {
        match panic::catch_unwind(panic::AssertUnwindSafe(check)) {
            Ok(Ok(detail)) => println!("PASS  {name}: {detail}"),
            Ok(Err(why)) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
            Err(_) => {
                failed += 1;
                println!("FAIL  {name}: panicked");
            }
        }
    }
    println!(
        "{} of {} acceptance criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
