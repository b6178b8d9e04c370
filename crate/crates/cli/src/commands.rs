use std::path::Path;

use capupdate::axioms::{run_suite, HarnessConfig, PreferenceOracle, AXIOM_TOLERANCE};
use capupdate::capacity::{choquet_integral, Act, Capacity, Violation};
use capupdate::comonotonic::{envelope_capacity, hull_round_trip_deviation, is_comonotonic};
use capupdate::credal::{core_vertices, maximizer_set, min_conditional, mixture};
use capupdate::generate::{generate, GeneratorParams, GeneratorRegistry, SeededRng};
use capupdate::io::{parse_capacity_doc, parse_credal, CapacityDoc, CredalDoc};
use capupdate::updating::{erml_update, infer_alpha, AlphaEstimate, RuleParams, RuleRegistry};
use capupdate::{tolerance, EventMask, StateSpace, VERSION};
use rand::SeedableRng;
use serde_json::{json, Map, Value};

use crate::{Command, RuleArgs};

pub struct Outcome {
    pub report: Value,
    pub passed: bool,
}

type CmdResult = Result<Outcome, String>;

fn ok(report: Value) -> CmdResult {
    Ok(Outcome {
        report,
        passed: true,
    })
}

fn read(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))
}

fn load_doc(path: &Path) -> Result<CapacityDoc, String> {
    parse_capacity_doc(&read(path)?).map_err(|e| format!("{}: {e}", path.display()))
}

fn load_capacity(path: &Path) -> Result<Capacity, String> {
    load_doc(path)?
        .to_capacity()
        .map_err(|e| format!("{}: {e}", path.display()))
}

fn parse_event(space: &StateSpace, text: &str) -> Result<EventMask, String> {
    space
        .parse_event(text)
        .map_err(|e| format!("event `{text}`: {e}"))
}

/// Adds the library version and tolerance to `body`. Keys print sorted.
fn report(body: Value) -> Value {
    let mut map = Map::new();
    map.insert("version".into(), json!(VERSION));
    map.insert("tolerance".into(), json!(tolerance()));
    if let Value::Object(fields) = body {
        map.extend(fields);
    }
    Value::Object(map)
}

fn violation_json(space: &StateSpace, v: &Violation) -> Value {
    let name = |e: &EventMask| space.format_event(*e);
    match v {
        Violation::Length { expected, got } => json!({"kind": "length", "expected": expected, "got": got}),
        Violation::NonFinite { event } => json!({"kind": "non_finite", "event": name(event)}),
        Violation::Normalization { event, value } => {
            json!({"kind": "normalization", "event": name(event), "value": value})
        }
        Violation::Range { event, value } => json!({"kind": "range", "event": name(event), "value": value}),
        Violation::Monotonicity { subset, superset } => {
            json!({"kind": "monotonicity", "subset": name(subset), "superset": name(superset)})
        }
    }
}

fn rule_params(space: &StateSpace, args: &RuleArgs) -> Result<RuleParams, String> {
    Ok(RuleParams {
        alpha: args.alpha,
        alt_alpha: args.alt_alpha,
        target: args
            .target
            .as_deref()
            .map(|t| parse_event(space, t))
            .transpose()?,
        delta: args.delta,
    })
}

fn rule_json(space: &StateSpace, args: &RuleArgs) -> Value {
    let mut map = Map::new();
    map.insert("name".into(), json!(args.rule));
    for (key, value) in [("alpha", args.alpha), ("alt_alpha", args.alt_alpha), ("delta", args.delta)] {
        if let Some(v) = value {
            map.insert(key.into(), json!(v));
        }
    }
    if let Some(t) = &args.target {
        if let Ok(e) = space.parse_event(t) {
            map.insert("target".into(), json!(space.format_event(e)));
        }
    }
    Value::Object(map)
}

pub fn run(command: &Command) -> CmdResult {
    match command {
        Command::Validate { input } => validate(input),
        Command::Generate {
            kind,
            n,
            seed,
            epsilon,
            focal_sets,
        } => generate_cmd(kind, *n, *seed, *epsilon, *focal_sets),
        Command::Update { input, event, rule } => update(input, event, rule),
        Command::CoreVertices { input } => core(input),
        Command::Choquet { input, act } => choquet(input, act),
        Command::CheckEnvelope { input, alpha_grid } => check_envelope(input, alpha_grid),
        Command::CheckComonotonic { input } => check_comonotonic(input),
        Command::CheckAxioms {
            prior,
            rule,
            seed,
            samples,
        } => check_axioms(prior, rule, *seed, *samples),
        Command::InferAlpha {
            prior,
            posterior,
            event,
        } => infer(prior, posterior, event),
    }
}

fn validate(input: &Path) -> CmdResult {
    let c = load_capacity(input)?;
    let space = c.space();
    let validation = c.validate();
    let valid = validation.is_valid();
    let convex_pair = if valid { c.convexity_violation() } else { None };
    let convex = valid && convex_pair.is_none();
    Ok(Outcome {
        report: report(json!({
            "valid": valid,
            "violations": validation.violations.iter().map(|v| violation_json(space, v)).collect::<Vec<_>>(),
            "convex": convex,
            "convexity_violation": convex_pair.map(|(a, b)| [space.format_event(a), space.format_event(b)]),
        })),
        passed: convex,
    })
}

fn generate_cmd(
    kind: &str,
    n: usize,
    seed: u64,
    epsilon: Option<f64>,
    focal_sets: Option<usize>,
) -> CmdResult {
    let params = GeneratorParams {
        epsilon,
        focal_sets,
    };
    let (c, meta) = generate(&GeneratorRegistry::default(), kind, n, seed, &params).map_err(|e| e.to_string())?;
    let mut meta = serde_json::to_value(meta).expect("metadata serializes");
    meta["version"] = json!(VERSION);
    ok(serde_json::to_value(CapacityDoc::explicit(&c).with_meta(meta)).expect("documents serialize"))
}

fn update(input: &Path, event: &str, args: &RuleArgs) -> CmdResult {
    let c = load_capacity(input)?;
    let space = c.space();
    let e = parse_event(space, event)?;
    let rule = RuleRegistry::default()
        .build(&args.rule, &rule_params(space, args)?)
        .map_err(|e| e.to_string())?;
    let post = rule.condition(&c, e).map_err(|e| e.to_string())?;
    let meta = json!({
        "version": VERSION,
        "tolerance": tolerance(),
        "rule": rule_json(space, args),
        "event": space.format_event(e),
        "degenerate": post.degenerate.iter().map(|d| space.format_event(*d)).collect::<Vec<_>>(),
    });
    ok(serde_json::to_value(CapacityDoc::explicit(&post.capacity).with_meta(meta)).expect("documents serialize"))
}

fn core(input: &Path) -> CmdResult {
    let c = load_capacity(input)?;
    let set = core_vertices(&c).map_err(|e| e.to_string())?;
    ok(serde_json::to_value(CredalDoc::from_set(&set)).expect("documents serialize"))
}

fn choquet(input: &Path, utils: &[f64]) -> CmdResult {
    let c = load_capacity(input)?;
    let act = Act::new(c.space().clone(), utils.to_vec()).map_err(|e| format!("act: {e}"))?;
    let value = choquet_integral(&c, &act).map_err(|e| e.to_string())?;
    ok(report(json!({ "act": utils, "value": value })))
}

fn check_envelope(input: &Path, grid: &[f64]) -> CmdResult {
    let c = load_capacity(input)?;
    c.require_convex().map_err(|e| e.to_string())?;
    if let Some(a) = grid.iter().find(|a| !(0.0..=1.0).contains(*a)) {
        return Err(format!("alpha {a} is outside [0, 1]"));
    }
    let space = c.space();
    let tol = tolerance();
    let core = core_vertices(&c).map_err(|e| e.to_string())?;
    let mut max_dev: f64 = 0.0;
    let mut checks = 0usize;
    let mut failures = Vec::new();
    for &alpha in grid {
        for e in space.events().filter(|&e| !e.is_empty() && c.is_nonnull(e)) {
            let post = erml_update(&c, e, alpha).map_err(|e| e.to_string())?;
            let star = maximizer_set(&c, e).map_err(|e| e.to_string())?;
            let mixed = mixture(&star, &core, alpha).map_err(|e| e.to_string())?;
            let mut worst: f64 = 0.0;
            for a in space.events() {
                let lower = min_conditional(&mixed, a, e).map_err(|e| e.to_string())?;
                worst = worst.max((post.get(a) - lower).abs());
                checks += 1;
            }
            max_dev = max_dev.max(worst);
            let convex = post.is_convex();
            if worst > tol || !convex {
                failures.push(json!({
                    "alpha": alpha,
                    "event": space.format_event(e),
                    "deviation": worst,
                    "convex": convex,
                }));
            }
        }
    }
    let passed = failures.is_empty();
    Ok(Outcome {
        report: report(json!({
            "alpha_grid": grid,
            "checks": checks,
            "max_deviation": max_dev,
            "pass": passed,
            "failures": failures,
        })),
        passed,
    })
}

fn check_comonotonic(input: &Path) -> CmdResult {
    let set = parse_credal(&read(input)?).map_err(|e| format!("{}: {e}", input.display()))?;
    let space = set.space();
    let r = is_comonotonic(&set).map_err(|e| e.to_string())?;
    let env = envelope_capacity(&set);
    let envelope_convex = env.is_convex();
    let hull = if envelope_convex {
        Some(hull_round_trip_deviation(&set).map_err(|e| e.to_string())?)
    } else {
        None
    };
    let failing = r.failing.as_ref().map(|f| {
        json!({ "chain": f.chain.iter().map(|e| space.format_event(*e)).collect::<Vec<_>>() })
    });
    Ok(Outcome {
        report: report(json!({
            "comonotonic": r.comonotonic,
            "failing_chain": failing,
            "envelope_convex": envelope_convex,
            "hull_deviation": hull,
            "envelope": CapacityDoc::explicit(&env),
        })),
        passed: r.comonotonic,
    })
}

fn check_axioms(prior: &Path, args: &RuleArgs, seed: u64, samples: usize) -> CmdResult {
    let c = load_capacity(prior)?;
    let space = c.space().clone();
    let rule = RuleRegistry::default()
        .build(&args.rule, &rule_params(&space, args)?)
        .map_err(|e| e.to_string())?;
    let oracle = PreferenceOracle::new(c, rule);
    let config = HarnessConfig::with_samples(samples);
    let mut rng = SeededRng::seed_from_u64(seed);
    let suite = run_suite(&oracle, &config, &mut rng).map_err(|e| e.to_string())?;
    let passed = suite.all_passed();
    Ok(Outcome {
        report: report(json!({
            "axiom_tolerance": AXIOM_TOLERANCE,
            "rule": rule_json(&space, args),
            "seed": seed,
            "config": config,
            "pass": passed,
            "axioms": suite.summaries(),
        })),
        passed,
    })
}

fn infer(prior: &Path, posterior: &Path, event: &str) -> CmdResult {
    let c = load_capacity(prior)?;
    let post = load_capacity(posterior)?;
    let space = c.space();
    let e = parse_event(space, event)?;
    match infer_alpha(&c, &post, e) {
        Ok(inf) => {
            let (status, alpha) = match inf.estimate {
                AlphaEstimate::Identified(a) => ("identified", Some(a)),
                AlphaEstimate::Indeterminate => ("indeterminate", None),
            };
            ok(report(json!({
                "event": space.format_event(e),
                "status": status,
                "alpha": alpha,
                "spread": inf.spread,
                "per_event": inf.per_event.iter()
                    .map(|(a, x)| json!({"event": space.format_event(*a), "alpha": x}))
                    .collect::<Vec<_>>(),
            })))
        }
        Err(capupdate::Error::NotRationalizable(reason)) => Ok(Outcome {
            report: report(json!({
                "event": space.format_event(e),
                "status": "not_rationalizable",
                "reason": reason,
            })),
            passed: false,
        }),
        Err(e) => Err(e.to_string()),
    }
}
