// dev-only generator for the frozen fixtures under tests/fixtures:
// `cargo run -p capupdate --release --example genfixtures`

use capupdate::axioms::{find_violation, Axiom, PreferenceOracle};
use capupdate::comonotonic::find_fb_pathology;
use capupdate::generate::{dense_belief_function, SeededRng};
use capupdate::io::{to_json, CapacityDoc};
use capupdate::updating::{RuleParams, RuleRegistry};
use rand::SeedableRng;

#[path = "../tests/common/fixture.rs"]
mod fixture;

use fixture::{AdversarialFixture, PathologyFixture, RuleSpec};

const N: usize = 4;
const PRIOR_SEEDS: u64 = 200;
const DRAWS_PER_PRIOR: usize = 2000;

fn write(name: &str, text: String) {
    let path = fixture::dir().join(name);
    std::fs::write(&path, text + "\n").expect("fixture directory is writable");
    println!("wrote {}", path.display());
}

fn search(rule: RuleSpec, axiom: Axiom) -> AdversarialFixture {
    for seed in 0..PRIOR_SEEDS {
        let prior = dense_belief_function(N, seed);
        let params = RuleParams {
            alpha: rule.alpha,
            alt_alpha: rule.alt_alpha,
            target: rule.target.as_deref().map(|t| prior.space().parse_event(t).unwrap()),
            delta: rule.delta,
        };
        let built = RuleRegistry::default().build(&rule.name, &params).unwrap();
        let oracle = PreferenceOracle::new(prior.clone(), built);
        let mut rng = SeededRng::seed_from_u64(seed);
        if let Some(instance) = find_violation(&oracle, axiom, DRAWS_PER_PRIOR, &mut rng).unwrap() {
            println!("{} fails {axiom} on prior seed {seed}", rule.name);
            return AdversarialFixture {
                prior: CapacityDoc::explicit(&prior).with_meta(serde_json::json!({
                    "generator": "belief-function",
                    "n": N,
                    "seed": seed,
                    "focal_sets": (1 << N) - 1,
                })),
                rule,
                instance,
            };
        }
    }
    panic!("no {axiom} violation for {}", rule.name);
}

fn main() {
    let found = find_fb_pathology(N, 0..10_000).unwrap().expect("a pathology within 10,000 seeds");
    let space = found.prior.space();
    write(
        fixture::PATHOLOGY,
        to_json(&PathologyFixture {
            n: N,
            seed: found.seed,
            prior: CapacityDoc::explicit(&found.prior),
            event: space.format_event(found.event),
            failing_chain: found.failing.chain.iter().map(|e| space.format_event(*e)).collect(),
        }),
    );

    let hybrid = |name: &str| RuleSpec {
        name: name.into(),
        alpha: Some(0.2),
        alt_alpha: Some(0.8),
        target: None,
        delta: None,
    };
    write(fixture::PER_EVENT, to_json(&search(hybrid("hybrid-event"), Axiom::Ec)));
    write(fixture::PER_ACT, to_json(&search(hybrid("hybrid-act"), Axiom::DcCs)));
    let perturbed = RuleSpec {
        name: "perturbed".into(),
        alpha: Some(0.5),
        alt_alpha: None,
        target: Some("s1".into()),
        delta: Some(0.05),
    };
    write(fixture::PERTURBED, to_json(&search(perturbed, Axiom::CrUo)));
}
