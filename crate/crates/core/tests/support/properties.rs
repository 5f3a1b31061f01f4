#![allow(dead_code)]
//! Randomized invariant suites, shared by the `properties` test target and
//! the acceptance gate. Each suite runs `CASES` cases.

use chrono::{Days, NaiveDate};
use proptest::collection::vec;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

use wscm::engine::{Direction, LocusPoint, PointKind};
use wscm::model::CommitteeAssessment;
use wscm::model::{
    classify_region, committee_cap, decayed_growth, session_severity, ModelParameters, Position, Region, FIELD_MAX,
    REGION_MIDLINE,
};
use wscm::persistence::{replay, Store};

pub const CASES: u32 = 1000;

#[derive(Debug, Clone)]
pub enum Op {
    Assess { gap: u64, scores: Vec<(u8, u8)>, df: u32 },
    Decay { gap: u64 },
}

#[derive(Debug, Clone)]
pub struct History {
    pub t_ref_days: u32,
    pub entry: Vec<(u8, u8)>,
    pub f0: u32,
    pub ops: Vec<Op>,
}

fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        3 => (1u64..60, vec((0u8..=4, 0u8..=4), 1..8), 0u32..3)
            .prop_map(|(gap, scores, df)| Op::Assess { gap, scores, df }),
        1 => (1u64..60).prop_map(|gap| Op::Decay { gap }),
    ]
}

pub fn history() -> impl Strategy<Value = History> {
    (
        prop_oneof![Just(7u32), Just(14), Just(28)],
        vec((0u8..=1, 0u8..=1), 1..6),
        0u32..5,
        vec(op(), 0..14),
    )
        .prop_map(|(t_ref_days, entry, f0, ops)| History {
            t_ref_days,
            entry,
            f0,
            ops,
        })
}

fn start() -> NaiveDate {
    NaiveDate::from_ymd_opt(2026, 1, 1).unwrap()
}

/// Plays a history through an in-memory journaled store.
pub fn build(h: &History) -> Store {
    let params = ModelParameters {
        t_ref_days: h.t_ref_days,
        ..ModelParameters::default()
    };
    let mut store = Store::in_memory(params).unwrap();
    let entry = CommitteeAssessment::from_pairs(start(), h.f0, &h.entry).unwrap();
    store.register("signal", "", "", &entry).unwrap();
    let (mut date, mut f) = (start(), h.f0);
    for op in &h.ops {
        match op {
            Op::Assess { gap, scores, df } => {
                date = date + Days::new(*gap);
                f += df;
                let a = CommitteeAssessment::from_pairs(date, f, scores).unwrap();
                store.assess("signal", &a).unwrap();
            }
            Op::Decay { gap } => {
                date = date + Days::new(*gap);
                store.decay("signal", date).unwrap();
            }
        }
    }
    store
}

fn locus(store: &Store) -> Vec<LocusPoint> {
    store.registry().signals()[0].locus().to_vec()
}

fn in_field(v: f64) -> bool {
    (0.0..=FIELD_MAX).contains(&v)
}

fn runner() -> TestRunner {
    TestRunner::new(Config {
        cases: CASES,
        failure_persistence: None,
        ..Config::default()
    })
}

fn run<S: Strategy>(strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String> {
    runner().run(&strategy, test).map_err(|e| e.to_string())
}

pub fn position_bounds() -> Result<(), String> {
    run(history(), |h| {
        for p in locus(&build(&h)) {
            prop_assert!(in_field(p.position.x()) && in_field(p.position.y()), "{:?}", p.position);
        }
        Ok(())
    })
}

pub fn x_convexity() -> Result<(), String> {
    run(history(), |h| {
        let points = locus(&build(&h));
        for w in points.windows(2) {
            let (prev, next) = (&w[0], &w[1]);
            if let Some(target) = next.outcome.x_new_agg {
                let (lo, hi) = (prev.position.x().min(target), prev.position.x().max(target));
                prop_assert!(
                    next.position.x() >= lo && next.position.x() <= hi,
                    "{} not in [{lo}, {hi}]",
                    next.position.x()
                );
            }
        }
        Ok(())
    })
}

pub fn y_floor() -> Result<(), String> {
    let y_min = ModelParameters::default().y_min;
    run(history(), |h| {
        for p in locus(&build(&h)).iter().skip(1) {
            prop_assert!(p.position.y() >= y_min, "y {} below floor", p.position.y());
        }
        Ok(())
    })
}

pub fn decay_keeps_x() -> Result<(), String> {
    run(history(), |h| {
        let points = locus(&build(&h));
        for w in points.windows(2) {
            if w[1].kind == PointKind::DecayOnly {
                prop_assert_eq!(w[1].position.x().to_bits(), w[0].position.x().to_bits());
                prop_assert!(w[1].position.y() <= w[0].position.y().max(ModelParameters::default().y_min));
            }
        }
        Ok(())
    })
}

pub fn lazy_decay_composes() -> Result<(), String> {
    let params = ModelParameters::default();
    run((0.0f64..=10.0, 0.0f64..20.0, 0.0f64..20.0), |(y, t1, t2)| {
        let stepwise = decayed_growth(decayed_growth(y, t1, &params), t2, &params);
        let direct = decayed_growth(y, t1 + t2, &params);
        prop_assert!((stepwise - direct).abs() <= 1e-12, "{stepwise} vs {direct}");
        Ok(())
    })
}

pub fn severity_concave_in_f() -> Result<(), String> {
    run((0.0f64..=200f64.sqrt(), 0u32..10_000), |(d, f)| {
        let s = |f| session_severity(d, f);
        let (a, b, c) = (s(f), s(f + 1), s(f + 2));
        prop_assert!(b >= a && c >= b);
        prop_assert!((c - b) - (b - a) <= 1e-12, "second difference {}", (c - b) - (b - a));
        Ok(())
    })
}

pub fn regions_partition_field() -> Result<(), String> {
    let edge = prop_oneof![0.0f64..=10.0, Just(0.0), Just(REGION_MIDLINE), Just(10.0)];
    run((edge.clone(), edge), |(x, y)| {
        let region = classify_region(Position::new(x, y).unwrap());
        let expected = match (x >= REGION_MIDLINE, y >= REGION_MIDLINE) {
            (false, false) => Region::QuestionMarks,
            (true, false) => Region::LitFuses,
            (true, true) => Region::Owls,
            (false, true) => Region::SleepingCats,
        };
        prop_assert_eq!(region, expected);
        prop_assert_eq!(Region::ALL.iter().filter(|r| **r == region).count(), 1);
        Ok(())
    })
}

pub fn weights_respect_cap() -> Result<(), String> {
    run(history(), |h| {
        let store = build(&h);
        let params = *store.registry().params();
        for p in locus(&store) {
            if let (Some(cap), Some(spread)) = (p.outcome.n_cap, &p.spread) {
                prop_assert_eq!(cap, committee_cap(spread.n, &params));
                prop_assert!(p.outcome.alpha_eff <= cap && p.outcome.beta_eff <= cap);
            }
        }
        Ok(())
    })
}

/// Replays direction changes independently and compares with the streak
/// fields recorded on each point.
pub fn streak_reset() -> Result<(), String> {
    run(history(), |h| {
        let points = locus(&build(&h));
        let mut state = [(0u32, None::<Direction>); 2];
        for w in points.windows(2) {
            let (prev, next) = (&w[0], &w[1]);
            if next.kind != PointKind::Assessment {
                prop_assert_eq!((next.outcome.k_x, next.outcome.k_y), (state[0].0, state[1].0));
                continue;
            }
            let axes = [
                (
                    prev.position.x(),
                    next.outcome.x_new_agg.unwrap(),
                    next.outcome.k_x,
                    next.outcome.reversal_x,
                ),
                (
                    prev.position.y(),
                    next.outcome.y_new_agg.unwrap(),
                    next.outcome.k_y,
                    next.outcome.reversal_y,
                ),
            ];
            for (i, (before, target, k, reversal)) in axes.into_iter().enumerate() {
                let (k_prev, last) = state[i];
                let expected = match (Direction::of_change(before, target), last) {
                    (None, _) => (k_prev, last, false),
                    (Some(d), Some(l)) if d != l => (0, Some(d), true),
                    (Some(d), _) => (k_prev + 1, Some(d), false),
                };
                prop_assert_eq!((k, reversal), (expected.0, expected.2));
                if reversal {
                    prop_assert_eq!(k, 0);
                }
                state[i] = (expected.0, expected.1);
            }
        }
        Ok(())
    })
}

pub fn replay_is_exact() -> Result<(), String> {
    run(history(), |h| {
        let store = build(&h);
        let records = store.journal().records();
        let rebuilt = replay(records).map_err(|e| TestCaseError::fail(e.to_string()))?;
        prop_assert_eq!(&rebuilt, store.registry());
        let text: Vec<String> = records.iter().map(|r| r.to_line().unwrap()).collect();
        let reparsed = wscm::persistence::Journal::parse(&(text.join("\n") + "\n")).unwrap();
        let again = Store::from_journal(reparsed).map_err(|e| TestCaseError::fail(e.to_string()))?;
        let retext: Vec<String> = again.journal().records().iter().map(|r| r.to_line().unwrap()).collect();
        prop_assert_eq!(retext, text);
        prop_assert_eq!(again.registry(), store.registry());
        Ok(())
    })
}

pub type Suite = fn() -> Result<(), String>;

/// Every suite by name.
pub fn suites() -> Vec<(&'static str, Suite)> {
    vec![
        ("position bounds preserved", position_bounds),
        ("x' stays between prior x and the aggregate", x_convexity),
        ("y never below y_min after entry", y_floor),
        ("decay-only points keep x", decay_keeps_x),
        ("lazy decay composes within 1e-12", lazy_decay_composes),
        ("severity index concave in f", severity_concave_in_f),
        ("regions partition the field", regions_partition_field),
        ("effective weights never exceed the committee cap", weights_respect_cap),
        ("streak reset semantics", streak_reset),
        ("journal replay exact at six decimals", replay_is_exact),
    ]
}
