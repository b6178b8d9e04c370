//! Brute-force oracles shared by the integration tests. Nothing here calls
//! into the library's credal or updating code.

#![allow(dead_code)]

pub mod fixture;

use capupdate::capacity::{from_moebius, Capacity, MoebiusMasses};
use capupdate::generate::{belief_function, dense_belief_function};
use capupdate::{EventMask, StateSpace};

/// Corpus shared by the acceptance criteria: belief functions on 3, 4 and 5
/// states, cycling with the seed. Blocks of three alternate between the
/// default sparse generator and dense focal draws.
pub const CORPUS_SIZE: u64 = 210;

pub fn corpus() -> Vec<Capacity> {
    (0..CORPUS_SIZE)
        .map(|seed| {
            let n = 3 + (seed % 3) as usize;
            if (seed / 3) % 2 == 0 {
                belief_function(n, seed)
            } else {
                dense_belief_function(n, seed)
            }
        })
        .collect()
}

pub fn set(states: &[usize]) -> EventMask {
    EventMask::from_states(states.iter().map(|s| s - 1))
}

/// m({1}) = 0.1, m({2,3}) = 0.5, m(Ω) = 0.4.
pub fn worked_example() -> Capacity {
    from_moebius(
        &MoebiusMasses::new(
            StateSpace::numbered(3).unwrap(),
            [(set(&[1]), 0.1), (set(&[2, 3]), 0.5), (set(&[1, 2, 3]), 0.4)],
        )
        .unwrap(),
    )
}

pub fn prob(p: &[f64], a: EventMask) -> f64 {
    p.iter()
        .enumerate()
        .filter(|(i, _)| a.contains(*i))
        .map(|(_, x)| x)
        .sum()
}

/// All orderings of `0..n`, by recursive insertion.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Marginal vector: each state gets its marginal contribution along the
/// ordering.
pub fn marginal(c: &Capacity, order: &[usize]) -> Vec<f64> {
    let mut p = vec![0.0; order.len()];
    let mut prefix = EventMask::EMPTY;
    for &s in order {
        let next = prefix.with(s);
        p[s] = c.get(next) - c.get(prefix);
        prefix = next;
    }
    p
}

/// Drops points within 1e-13 of an earlier one. Pairwise rather than
/// sort-then-adjacent, since rounding noise can split a lexicographic sort.
pub fn dedup(points: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    let mut kept: Vec<Vec<f64>> = Vec::with_capacity(points.len());
    for p in points {
        if !kept.iter().any(|q| p.iter().zip(q).all(|(x, y)| (x - y).abs() <= 1e-13)) {
            kept.push(p);
        }
    }
    kept
}

pub fn brute_core(c: &Capacity) -> Vec<Vec<f64>> {
    dedup(permutations(c.n()).iter().map(|o| marginal(c, o)).collect())
}

/// Points of `points` maximizing `p(E)`.
pub fn brute_star(points: &[Vec<f64>], e: EventMask) -> Vec<Vec<f64>> {
    let best = points.iter().map(|p| prob(p, e)).fold(f64::NEG_INFINITY, f64::max);
    points.iter().filter(|p| prob(p, e) >= best - 1e-12).cloned().collect()
}

/// Pairwise combinations `α·p + (1−α)·q`; their hull is the mixture.
pub fn brute_mixture(a: &[Vec<f64>], b: &[Vec<f64>], alpha: f64) -> Vec<Vec<f64>> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for p in a {
        for q in b {
            out.push(p.iter().zip(q).map(|(x, y)| alpha * x + (1.0 - alpha) * y).collect());
        }
    }
    dedup(out)
}

/// `min p(A ∩ E) / p(E)` over the points; the ratio is quasi-linear, so the
/// minimum over the hull is attained at a point of the list.
pub fn brute_min_conditional(points: &[Vec<f64>], a: EventMask, e: EventMask) -> f64 {
    points
        .iter()
        .map(|p| prob(p, a & e) / prob(p, e))
        .fold(f64::INFINITY, f64::min)
}

pub fn brute_min(points: &[Vec<f64>], a: EventMask) -> f64 {
    points.iter().map(|p| prob(p, a)).fold(f64::INFINITY, f64::min)
}

/// Supermodularity over every pair of events.
pub fn brute_supermodular(c: &Capacity, tol: f64) -> bool {
    let events: Vec<EventMask> = c.space().events().collect();
    events.iter().all(|&a| {
        events
            .iter()
            .all(|&b| c.get(a | b) + c.get(a & b) >= c.get(a) + c.get(b) - tol)
    })
}

pub fn nonnull_events(c: &Capacity) -> Vec<EventMask> {
    c.space()
        .events()
        .filter(|&e| !e.is_empty() && c.get(e) > 1e-9)
        .collect()
}
