//! Cross-checks between the exact computations: the forward policy DP
//! against full enumeration, the backward optimal DP against both, and
//! the closed-form counts the small families are known to have.

use num::bigint::BigInt;
use num::rational::BigRational;

use choicewalk::oracle::{
    binomial, exact_policy_curve, exact_solo_curve, level_probability, optimal_rchoice_curve,
    weight_census, ExactCurve,
};
use choicewalk::policies::{policy_by_name, Policy};
use choicewalk::{FamilySpec, Function};

fn fuzz_matrix() -> Vec<Box<dyn Function>> {
    [
        "dictator:n=7,i=3",
        "junta:n=8,bits=1+4+6,k=2",
        "prefix_threshold:n=9,m=4,k=2",
        "tribes:n=8,s=2",
        "recursive_majority:k=3,t=2",
        "and:n=6",
        "or:n=6",
        "majority:n=9",
        "connectivity:v=5",
        "k_connectivity:v=4,k=2",
        "random_monotone_dnf:n=10,clauses=4,width=3,seed=5",
        "random_monotone_dnf:n=12,clauses=5,width=3,seed=9",
    ]
    .iter()
    .map(|s| s.parse::<FamilySpec>().unwrap().build().unwrap())
    .collect()
}

/// Policies applicable to `f`: the generic pair plus the graph pair on
/// graph-backed functions.
fn applicable_policies(f: &dyn Function) -> Vec<std::sync::Arc<dyn Policy>> {
    let mut names = vec!["uniform", "greedy_useful"];
    if f.graph_vertices().is_some() {
        names.push("connectivity_two_phase");
        names.push("min_degree");
    }
    names
        .into_iter()
        .map(|n| policy_by_name(n).unwrap())
        .collect()
}

/// a(t) ≥ b(t) for all t, exactly when both curves are exact, within the
/// curves' float error bounds otherwise.
fn assert_dominates(a: &ExactCurve, b: &ExactCurve, label: &str) {
    assert_eq!(a.arity(), b.arity());
    for t in 0..=a.arity() {
        match (a.rational(t), b.rational(t)) {
            (Some(x), Some(y)) => {
                assert!(x >= y, "{label}: t={t}, {} < {}", a.value(t), b.value(t));
            }
            _ => {
                let slack = a.error_bound() + b.error_bound() + 1e-12;
                assert!(
                    a.value(t) >= b.value(t) - slack,
                    "{label}: t={t}, {} < {} - {slack}",
                    a.value(t),
                    b.value(t)
                );
            }
        }
    }
}

#[test]
fn policy_dp_at_r1_reproduces_the_solo_curve() {
    for f in fuzz_matrix() {
        let solo = exact_solo_curve(f.as_ref()).unwrap();
        for policy in applicable_policies(f.as_ref()) {
            let dp = exact_policy_curve(f.as_ref(), policy.as_ref(), 1).unwrap();
            for t in 0..=f.arity() {
                match dp.rational(t) {
                    Some(x) => assert_eq!(
                        x,
                        solo.rational(t).unwrap(),
                        "{} under {} at t={t}",
                        f.name(),
                        policy.name()
                    ),
                    None => assert!(
                        (dp.value(t) - solo.value(t)).abs() <= dp.error_bound() + 1e-12,
                        "{} under {} at t={t}: {} vs {}",
                        f.name(),
                        policy.name(),
                        dp.value(t),
                        solo.value(t)
                    ),
                }
            }
        }
    }
}

#[test]
fn optimal_agent_dominates_every_shipped_policy() {
    for f in fuzz_matrix() {
        for r in [2usize, 3] {
            let best = optimal_rchoice_curve(f.as_ref(), r).unwrap();
            for policy in applicable_policies(f.as_ref()) {
                let curve = exact_policy_curve(f.as_ref(), policy.as_ref(), r).unwrap();
                assert_dominates(
                    &best,
                    &curve,
                    &format!("{} r={r} policy={}", f.name(), policy.name()),
                );
            }
        }
    }
}

#[test]
fn optimal_agent_never_beats_the_complete_walk() {
    // After t steps the optimal agent has flipped t bits chosen from
    // proposals; the walk that flips r fresh uniform bits per step has
    // flipped rt. The former can never be more likely active than the
    // solo walk run for rt steps.
    for f in fuzz_matrix() {
        let n = f.arity();
        let solo = exact_solo_curve(f.as_ref()).unwrap();
        for r in [2usize, 3] {
            let best = optimal_rchoice_curve(f.as_ref(), r).unwrap();
            for t in 0..=n {
                let cap = (r * t).min(n);
                match best.rational(t) {
                    Some(x) => {
                        assert!(x <= solo.rational(cap).unwrap(), "{} r={r} t={t}", f.name())
                    }
                    None => assert!(
                        best.value(t) <= solo.value(cap) + best.error_bound() + 1e-12,
                        "{} r={r} t={t}: {} > {}",
                        f.name(),
                        best.value(t),
                        solo.value(cap)
                    ),
                }
            }
        }
    }
}

#[test]
fn tribes_of_eight_has_the_known_level_counts() {
    let f = FamilySpec::Tribes { n: 8, s: 2 }.build().unwrap();
    let census = weight_census(f.as_ref()).unwrap();
    assert_eq!(census.accepted[3], 24);
    assert_eq!(census.accepted[4], 54);
    assert_eq!(binomial(8, 3), 56);
    assert_eq!(binomial(8, 4), 70);
    let curve = exact_solo_curve(f.as_ref()).unwrap();
    assert_eq!(
        *curve.rational(3).unwrap(),
        BigRational::new(BigInt::from(24), BigInt::from(56))
    );
    assert_eq!(
        *curve.rational(4).unwrap(),
        BigRational::new(BigInt::from(54), BigInt::from(70))
    );
    assert_eq!(curve.threshold(), Some(4));
}

#[test]
fn recursive_majority_is_self_dual_and_strictly_slow_at_depth_two() {
    let f = FamilySpec::RecursiveMajority { k: 3, t: 2 }
        .build()
        .unwrap();
    let n = f.arity();
    assert_eq!(n, 9);

    // Self-duality: complementing the input flips the output, so the
    // accepted counts at weights w and n-w partition the level.
    let census = weight_census(f.as_ref()).unwrap();
    for w in 0..=n {
        assert_eq!(
            census.accepted[w] + census.accepted[n - w],
            binomial(n, w) as u64
        );
    }

    // Below the midpoint every level accepts less than half its inputs...
    let half = BigRational::new(BigInt::from(1), BigInt::from(2));
    for s in 0..=4 {
        assert!(level_probability(f.as_ref(), s).unwrap() < half, "s={s}");
    }
    // ...which pins the solo threshold to the first level past it.
    let solo = exact_solo_curve(f.as_ref()).unwrap();
    assert_eq!(solo.threshold(), Some(5));

    // Even the best adaptive pair-choice agent needs at least 3 steps,
    // so doubling its threshold stays strictly above the solo threshold:
    // the family is not accelerated by the full factor 2 at this size.
    let best = optimal_rchoice_curve(f.as_ref(), 2).unwrap();
    let t2 = best.threshold().unwrap();
    assert!(
        2 * t2 > solo.threshold().unwrap(),
        "2*{t2} should exceed {}",
        solo.threshold().unwrap()
    );
}

#[test]
fn greedy_strictly_helps_the_depth_one_junta() {
    // junta on 2 bits of 8, need both: greedy picks designated bits when
    // proposed, so its curve strictly dominates uniform somewhere.
    let f = FamilySpec::Junta {
        n: 8,
        bits: vec![2, 5],
        k: 2,
    }
    .build()
    .unwrap();
    let uniform = policy_by_name("uniform").unwrap();
    let greedy = policy_by_name("greedy_useful").unwrap();
    let cu = exact_policy_curve(f.as_ref(), uniform.as_ref(), 2).unwrap();
    let cg = exact_policy_curve(f.as_ref(), greedy.as_ref(), 2).unwrap();
    assert_dominates(&cg, &cu, "greedy vs uniform on the junta");
    assert!(
        (1..8).any(|t| cg.rational(t).unwrap() > cu.rational(t).unwrap()),
        "domination should be strict somewhere"
    );
}
