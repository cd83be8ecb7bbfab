//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails. Runs without the libtest harness so the lines are always
//! shown.

#[path = "../../core/tests/support/iso.rs"]
mod iso;

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use durative_cli::run;
use durative_core::compiler::{compile_domain, CompileOptions};
use durative_core::model::{
    Bindings, Domain, DurativeAction, EffectAtom, GroundAtom, Plan, Problem, Rational, TimePoint, TimedEffect,
};
use durative_core::parser::{
    parse_domain, parse_plan, parse_problem, print_domain, print_plan, print_problem, Dialect,
};
use durative_core::roundtrip::{compare_verdicts, lift_plan, lower_plan, Explanation, RoundtripError};
use durative_core::synth::{random_scenario, random_source, Scenario, SynthConfig};
use durative_core::validator::{
    run as validate_run, validate, GroundEffect, Semantics, ValidateOptions, ViolationKind,
};

const RANDOM_PLANS: usize = 1000;
const CLASSIC_CASES: u64 = 500;
const FUZZ_INPUTS: u64 = 10_000;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn read(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

fn domain(name: &str) -> Domain {
    parse_domain(&read(name)).unwrap()
}

fn problem(name: &str) -> Problem {
    parse_problem(&read(name)).unwrap()
}

fn plan(name: &str) -> Plan {
    parse_plan(&read(name)).unwrap()
}

fn q(n: i64) -> Rational {
    Rational::from_integer(n)
}

fn cli(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = run(std::iter::once("durative").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn rich() -> ValidateOptions {
    ValidateOptions::new(Semantics::Rich)
}

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

type Outcome = Result<String, String>;

fn golden_compile() -> Outcome {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let out = dir.path().join("out.pddl");
    let map = dir.path().join("map.json");
    let rich_path = fixture("turn-rich.pddl");
    let (code, _, err) = cli(&[
        "compile",
        rich_path.to_str().unwrap(),
        "--untagged-clocks",
        "-o",
        out.to_str().unwrap(),
        "--map",
        map.to_str().unwrap(),
    ]);
    ensure!(code == 0, "compile exited {code}: {err}");
    let compiled = parse_domain(&std::fs::read_to_string(&out).unwrap()).map_err(|e| e.to_string())?;
    let m = durative_core::compiler::CompilationMap::from_json(&std::fs::read_to_string(&map).unwrap())
        .map_err(|e| e.to_string())?;
    let entry = &m.actions["turn"];
    let ours: Vec<&DurativeAction> = std::iter::once(&entry.envelope)
        .chain(entry.segments.iter().map(|s| &s.name))
        .filter_map(|n| compiled.action(n))
        .collect();
    ensure!(ours.len() == 4, "turn compiled to {} actions", ours.len());
    ensure!(entry.predicates.enabled.len() == 3, "enabled chain has length {}", entry.predicates.enabled.len());
    let finished =
        EffectAtom::Literal(durative_core::model::Literal::positive(entry.predicates.finished.clone(), vec![]));
    ensure!(
        ours[3].effects.contains(&TimedEffect::At(TimePoint::start(), finished)),
        "finished is not a start effect of the last segment"
    );
    let env_text = print_domain(&Domain { actions: vec![ours[0].clone()], ..compiled.clone() }, Dialect::Strict21)
        .map_err(|e| e.to_string())?;
    ensure!(
        env_text.contains("(pointing ?new-target)") && env_text.contains("(propellant)"),
        "envelope lost its content"
    );

    let rich = domain("turn-rich.pddl");
    let manual = domain("turn-decomposed.pddl");
    let theirs: Vec<&DurativeAction> = manual.actions.iter().collect();
    let theirs_clocks: BTreeSet<String> =
        manual.predicates.iter().filter(|p| rich.predicate(&p.name).is_none()).map(|p| p.name.clone()).collect();
    let ours_clocks: BTreeSet<String> = entry.clock_predicates().map(String::from).collect();
    ensure!(iso::isomorphic(&ours, &ours_clocks, &theirs, &theirs_clocks), "clock chain is not isomorphic");
    Ok("4 actions, enabled chain of 3, finished at segment start, isomorphic to the hand decomposition".into())
}

fn coast_arithmetic() -> Outcome {
    let rich = domain("turn-rich.pddl");
    let p = problem("turn-problem.pddl");
    let (compiled, m) = compile_domain(&rich, CompileOptions { tagged_clocks: false }).map_err(|e| e.to_string())?;
    let entry = &m.actions["turn"];
    let coast = compiled.action(&entry.segments[1].name).unwrap();
    let mut state = p.initial_state();
    state.set_fluent(GroundAtom::new(entry.duration_fluent.clone(), vec![]), q(180));
    let d = coast.duration.eval(&Bindings::new(), &state).map_err(|e| e.to_string())?;
    ensure!(d == q(160), "coast duration evaluates to {d}");
    let (lowered, _) = lower_plan(&plan("turn-only.plan"), &rich, &p, &m).map_err(|e| e.to_string())?;
    let stated = &lowered.steps()[2].duration;
    ensure!(*stated == q(160), "lowered coast step lasts {stated}");
    Ok("180 - 10 - 10 = 160 exactly".into())
}

fn rich_vs_conservative() -> Outcome {
    let p = problem("turn-problem.pddl");
    let pl = plan("image-after-burn.plan");
    let a = validate(&domain("turn-rich.pddl"), &p, &pl, &rich()).map_err(|e| e.to_string())?;
    let b = validate(&domain("turn-conservative.pddl"), &p, &pl, &rich()).map_err(|e| e.to_string())?;
    ensure!(a.is_valid(), "rich model rejects: {}", a.to_text());
    ensure!(!b.is_valid(), "conservative model accepts");
    Ok(format!("rich valid, conservative invalid ({} violation(s))", b.violations.len()))
}

fn burn_window() -> Outcome {
    let v = validate(&domain("turn-rich.pddl"), &problem("turn-problem.pddl"), &plan("bad-burn-overlap.plan"), &rich())
        .map_err(|e| e.to_string())?;
    ensure!(v.violations.len() == 1, "{} violations: {}", v.violations.len(), v.to_text());
    let x = &v.violations[0];
    ensure!(x.kind == ViolationKind::Invariant, "violation is {}", x.kind.as_str());
    ensure!(x.time > q(0) && x.time < q(10), "violation at {}", x.time);
    Ok(format!("one invariant violation at t={}", x.time))
}

fn propellant_trace() -> Outcome {
    let (v, sim) =
        validate_run(&domain("turn-rich.pddl"), &problem("turn-problem.pddl"), &plan("turn-only.plan"), &rich())
            .map_err(|e| e.to_string())?;
    ensure!(v.is_valid(), "{}", v.to_text());
    let propellant = GroundAtom::new("propellant", vec![]);
    let burns: Vec<(Rational, Rational)> = sim
        .happenings
        .iter()
        .flat_map(|h| {
            h.effects.iter().filter_map(|e| match &e.effect {
                GroundEffect::Decrease(f, by) if *f == propellant => Some((h.time.clone(), by.clone())),
                _ => None,
            })
        })
        .collect();
    ensure!(burns == [(q(0), q(5)), (q(170), q(5))], "burns {burns:?}");
    let last = sim.final_state.fluent(&propellant).cloned();
    ensure!(last == Some(q(90)), "final propellant {last:?}");
    Ok("5 at t=0, 5 at t=170, 90 left".into())
}

/// Random scenarios whose plans can be lowered, with how many seeds were
/// skipped because a step's breakpoints did not fit its duration.
fn corpus() -> (Vec<(Scenario, Domain, durative_core::compiler::CompilationMap)>, usize) {
    let mut out = Vec::new();
    let mut skipped = 0;
    let mut seed = 0;
    while out.len() < RANDOM_PLANS {
        let s = random_scenario(seed, &SynthConfig::default());
        seed += 1;
        let (c, m) = compile_domain(&s.domain, CompileOptions::default()).expect("synth domains compile");
        match lower_plan(&s.plan, &s.domain, &s.problem, &m) {
            Ok(_) => out.push((s, c, m)),
            Err(RoundtripError::Inversion { .. }) => skipped += 1,
            Err(e) => panic!("seed {}: {e}", seed - 1),
        }
    }
    (out, skipped)
}

fn roundtrip_identity() -> Outcome {
    let (corpus, skipped) = corpus();
    let mut lowered_steps = 0;
    for (s, _, m) in &corpus {
        let (lowered, record) = lower_plan(&s.plan, &s.domain, &s.problem, m).map_err(|e| e.to_string())?;
        ensure!(record.tiles(&lowered), "tiling fails for {}", s.plan);
        let lifted = lift_plan(&lowered, m).map_err(|e| e.to_string())?;
        ensure!(lifted == s.plan, "lift(lower(p)) != p for {}", s.plan);
        lowered_steps += lowered.len();
    }
    Ok(format!("{} plans, {lowered_steps} compiled steps, {skipped} unlowerable seeds skipped", corpus.len()))
}

fn differential() -> Outcome {
    let (corpus, _) = corpus();
    let (mut agree, mut protection, mut invalid) = (0, 0, 0);
    for (s, c, m) in &corpus {
        let r = compare_verdicts(&s.domain, c, &s.problem, &s.plan, m, &Rational::new(1, 1000))
            .map_err(|e| e.to_string())?;
        if let Some(d) = r.divergences.iter().find(|d| d.explanation == Explanation::Other) {
            return Err(format!("other divergence on {}: {} {} at {}", s.plan, d.kind, d.literal, d.time));
        }
        invalid += usize::from(!r.rich.is_valid());
        if r.agreement() {
            agree += 1;
        } else {
            protection += 1;
        }
    }
    Ok(format!("{agree} agree, {protection} protection-only, 0 other ({invalid} rich-invalid)"))
}

fn identity_compile() -> Outcome {
    let cfg = SynthConfig { classic_only: true, ..SynthConfig::default() };
    let mut invalid = 0;
    for seed in 0..CLASSIC_CASES {
        let s = random_scenario(seed, &cfg);
        let (c, m) = compile_domain(&s.domain, CompileOptions::default()).map_err(|e| e.to_string())?;
        ensure!(c == s.domain && m.actions.is_empty(), "seed {seed}: classic domain changed by compilation");
        let a = validate(&s.domain, &s.problem, &s.plan, &rich());
        let b = validate(&s.domain, &s.problem, &s.plan, &ValidateOptions::new(Semantics::Strict21));
        ensure!(a == b, "seed {seed}: semantics disagree");
        invalid += usize::from(a.is_ok_and(|v| !v.is_valid()));
    }
    Ok(format!("{CLASSIC_CASES} cases identical ({invalid} invalid)"))
}

fn protection() -> Outcome {
    let (d, p, pl) = (fixture("turn-rich.pddl"), fixture("turn-problem.pddl"), fixture("controller-release.plan"));
    let (d, p, pl) = (d.to_str().unwrap(), p.to_str().unwrap(), pl.to_str().unwrap());
    let (code, _, _) = cli(&["validate", d, p, pl]);
    ensure!(code == 1, "rich validate exited {code}");
    let rich_v =
        validate(&domain("turn-rich.pddl"), &problem("turn-problem.pddl"), &plan("controller-release.plan"), &rich())
            .map_err(|e| e.to_string())?;
    ensure!(
        rich_v.count(ViolationKind::Protection) == 1 && rich_v.violations.len() == 1,
        "rich verdict: {}",
        rich_v.to_text()
    );
    let (code, out, err) = cli(&["check", d, p, pl, "--format", "json"]);
    ensure!(code == 1, "check exited {code}: {err}");
    ensure!(out.contains("\"compiled_valid\": true"), "compiled side not valid: {out}");
    let report_lines = out.matches("\"explanation\"").count();
    ensure!(report_lines == 1 && out.contains("\"explanation\": \"protection-only\""), "report: {out}");
    Ok("rich invalid (protection), compiled valid, one protection-only divergence".into())
}

fn parser_corpus() -> Outcome {
    let mut count = 0;
    for name in ["turn-rich.pddl", "turn-conservative.pddl", "turn-decomposed.pddl"] {
        let d = domain(name);
        let again =
            parse_domain(&print_domain(&d, Dialect::Rich).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
        ensure!(again == d, "{name} changed through the printer");
        count += 1;
    }
    for name in ["turn-problem.pddl", "turn-problem-low-propellant.pddl"] {
        let p = problem(name);
        ensure!(parse_problem(&print_problem(&p)).map_err(|e| e.to_string())? == p, "{name} changed");
        count += 1;
    }
    for name in [
        "turn-only.plan",
        "image-after-burn.plan",
        "bad-burn-overlap.plan",
        "controller-release.plan",
        "turn-wrong-duration.plan",
    ] {
        let pl = plan(name);
        ensure!(parse_plan(&print_plan(&pl)).map_err(|e| e.to_string())? == pl, "{name} changed");
        count += 1;
    }
    for seed in 0..FUZZ_INPUTS {
        let text = random_source(seed);
        let ok = catch_unwind(|| {
            let spans = [
                parse_domain(&text).err().map(|e| e.span),
                parse_problem(&text).err().map(|e| e.span),
                parse_plan(&text).err().map(|e| e.span),
            ];
            spans.iter().flatten().all(|s| s.offset + s.length <= text.len())
        });
        ensure!(matches!(ok, Ok(true)), "fuzz input {seed} panicked or reported a span outside the input: {text:?}");
    }
    Ok(format!("{count} fixtures stable, {FUZZ_INPUTS} fuzz inputs without a crash"))
}

struct Criterion {
    number: usize,
    name: &'static str,
    limit: Option<Duration>,
    check: fn() -> Outcome,
}

fn main() -> ExitCode {
    let secs = |s| Some(Duration::from_secs(s));
    let criteria = [
        Criterion { number: 1, name: "golden compile", limit: secs(1), check: golden_compile },
        Criterion { number: 2, name: "coast arithmetic", limit: None, check: coast_arithmetic },
        Criterion { number: 3, name: "rich vs conservative", limit: secs(1), check: rich_vs_conservative },
        Criterion { number: 4, name: "burn-window rejection", limit: None, check: burn_window },
        Criterion { number: 5, name: "propellant trace", limit: None, check: propellant_trace },
        Criterion { number: 6, name: "roundtrip identity", limit: secs(30), check: roundtrip_identity },
        Criterion { number: 7, name: "differential equivalence", limit: secs(60), check: differential },
        Criterion { number: 8, name: "identity compile", limit: None, check: identity_compile },
        Criterion { number: 9, name: "protection semantics", limit: None, check: protection },
        Criterion { number: 10, name: "parser corpus roundtrip", limit: secs(30), check: parser_corpus },
    ];
    // keep panic messages from interleaving with the report
    std::panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for c in &criteria {
        let started = Instant::now();
        let result = catch_unwind(AssertUnwindSafe(c.check)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        let elapsed = started.elapsed();
        let result = match (result, c.limit) {
            (Ok(_), Some(limit)) if elapsed > limit => {
                Err(format!("took {:.2}s, limit {}s", elapsed.as_secs_f64(), limit.as_secs()))
            }
            (r, _) => r,
        };
        let (tag, detail) = match &result {
            Ok(d) => ("PASS", d),
            Err(d) => {
                failed += 1;
                ("FAIL", d)
            }
        };
        println!("criterion {:>2} {tag} {} ({:.3}s): {detail}", c.number, c.name, elapsed.as_secs_f64());
    }
    let _ = std::panic::take_hook();
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
