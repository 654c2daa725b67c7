#![allow(clippy::approx_constant, clippy::excessive_precision)]

use super::*;

fn core() -> MemoryCore {
    MemoryCore::default()
}

fn interaction(m: &mut MemoryCore, token: &str) -> GeneralEvent {
    m.create_event(
        EventType::Interaction,
        EmotionLabel::Neutral,
        0.0,
        vec![Information::token(token)],
    )
    .unwrap()
}

fn learn(m: &mut MemoryCore, token: &str) -> GeneralEvent {
    m.create_event(
        EventType::LearnThing,
        EmotionLabel::Neutral,
        0.0,
        vec![Information::token(token)],
    )
    .unwrap()
}

fn weight(m: &MemoryCore, id: ResourceId) -> f64 {
    m.ltm().resource(id).unwrap().weight
}

#[test]
fn create_event_uses_type_weights() {
    let mut m = core();
    let e = m
        .create_event(
            EventType::MeetNewPerson,
            EmotionLabel::Neutral,
            0.0,
            vec![Information::token("knob")],
        )
        .unwrap();
    assert_eq!(e.resource_ids.len(), 1);
    let rid = e.resource_ids[0];
    assert_eq!(weight(&m, rid), 0.9);
    assert_eq!(m.stm().activation(rid), Some(1.0));

    let e = interaction(&mut m, "weather");
    assert_eq!(weight(&m, e.resource_ids[0]), 0.1);
}

#[test]
fn create_event_rejects_empty_payloads_and_bad_polarity() {
    let mut m = core();
    let err = m.create_event(EventType::LearnThing, EmotionLabel::Joy, 0.5, vec![]);
    assert!(matches!(err, Err(Error::Validation(_))));
    let err = m.create_event(
        EventType::LearnThing,
        EmotionLabel::Joy,
        1.5,
        vec![Information::token("x")],
    );
    assert!(matches!(err, Err(Error::Validation(_))));
    assert!(m.ltm().is_empty());
}

#[test]
fn stm_insert_under_capacity() {
    let mut m = core();
    learn(&mut m, "a");
    assert_eq!(m.stm().len(), 1);
}

#[test]
fn stm_insert_unknown_id() {
    let mut m = core();
    assert!(matches!(
        m.stm_insert(ResourceId(42)),
        Err(Error::UnknownResource(ResourceId(42)))
    ));
}

#[test]
fn full_stm_evicts_lowest_weight() {
    let mut m = core();
    let low = interaction(&mut m, "weather").resource_ids[0];
    for t in ["a", "b", "c", "d", "e", "f"] {
        learn(&mut m, t);
    }
    assert!(m.stm().is_full());
    let newcomer = learn(&mut m, "g").resource_ids[0];
    assert!(!m.stm().contains(low));
    assert!(m.stm().contains(newcomer));
    assert_eq!(m.stm().len(), 7);
    // never consolidated: gone for good, event included
    assert!(m.ltm().resource(low).is_none());
    assert_eq!(m.ltm().event_count(), 7);
    m.validate().unwrap();
}

#[test]
fn eviction_tie_breaks_on_age_then_id() {
    let mut m = core();
    learn(&mut m, "a");
    let older = interaction(&mut m, "x").resource_ids[0];
    m.decay_tick(1);
    let younger = interaction(&mut m, "y").resource_ids[0];
    for t in ["b", "c", "d", "e"] {
        learn(&mut m, t);
    }
    let newcomer = learn(&mut m, "z").resource_ids[0];
    assert!(!m.stm().contains(older));
    assert!(m.stm().contains(younger));
    assert!(m.stm().contains(newcomer));
}

/// Exhaustive oracle: for every assignment of weights {0.1, 0.9} to seven
/// residents with distinct creation order, the evicted slot is the first in
/// (weight, timestamp, id) order.
#[test]
fn eviction_matches_exhaustive_oracle() {
    for mask in 0u32..(1 << 7) {
        let mut m = core();
        let mut residents = Vec::new();
        for i in 0..7 {
            let low = mask & (1 << i) != 0;
            let e = if low {
                interaction(&mut m, &format!("t{i}"))
            } else {
                learn(&mut m, &format!("t{i}"))
            };
            residents.push((if low { 0.1 } else { 0.9 }, i, e.resource_ids[0]));
            if i % 3 == 2 {
                m.decay_tick(1);
            }
        }
        // oracle: lexicographic min over (weight, creation index)
        let expected = residents
            .iter()
            .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap().then(a.1.cmp(&b.1)))
            .unwrap()
            .2;
        let ev = m
            .create_event(
                EventType::LearnThing,
                EmotionLabel::Neutral,
                0.0,
                vec![Information::token("new")],
            )
            .unwrap();
        assert!(!m.stm().contains(expected), "mask {mask:07b}");
        assert!(m.stm().contains(ev.resource_ids[0]));
        assert_eq!(m.stm().len(), 7);
    }
}

#[test]
fn decay_values_match_oracle() {
    // reference values from a 40-digit iteration of A <- ln(A + 1)
    let mut m = core();
    let rid = learn(&mut m, "a").resource_ids[0];
    m.decay_tick(1);
    assert!((m.stm().activation(rid).unwrap() - 0.693_147_180_559_945_3).abs() < 1e-12);
    m.decay_tick(7);
    let a8 = m.stm().activation(rid).unwrap();
    assert!((a8 - 0.210_509_916_824_220_5).abs() < 1e-12);
    assert!(a8 >= ACTIVATION_THRESHOLD);
    m.decay_tick(1);
    let a9 = m.stm().activation(rid).unwrap();
    assert!((a9 - 0.191_041_689_699_652_1).abs() < 1e-12);
    assert!(a9 < ACTIVATION_THRESHOLD);
    assert_eq!(m.stm().tick_counter(), 9);
    assert_eq!(m.stm().len(), 1, "decay never evicts");
}

#[test]
fn rehearse_resets_and_reinserts() {
    let mut m = core();
    let rid = learn(&mut m, "a").resource_ids[0];
    m.decay_tick(3);
    assert!(m.stm().activation(rid).unwrap() < 0.5);
    m.rehearse(rid).unwrap();
    assert_eq!(m.stm().activation(rid), Some(1.0));
    m.rehearse(rid).unwrap();
    assert_eq!(m.stm().len(), 1);

    m.consolidate();
    assert!(m.stm().is_empty());
    m.rehearse(rid).unwrap();
    assert_eq!(m.stm().activation(rid), Some(1.0));

    assert!(matches!(
        m.rehearse(ResourceId(99)),
        Err(Error::UnknownResource(_))
    ));
}

#[test]
fn consolidation_forgets_stale_interaction() {
    let mut m = core();
    let e = interaction(&mut m, "weather");
    let rid = e.resource_ids[0];
    m.decay_tick(20);
    assert!(m.stm().activation(rid).unwrap() < 0.05 + 0.2);
    let report = m.consolidate();
    assert_eq!(report.reduced.len(), 1);
    let (id, old, new) = report.reduced[0];
    assert_eq!(id, rid);
    assert_eq!(old, 0.1);
    assert!((new - 0.095_310_179_804_324_86).abs() < 1e-12);
    assert_eq!(report.forgotten_resources, vec![rid]);
    assert_eq!(report.forgotten_events, vec![e.id]);
    assert!(m.ltm().is_empty());
    assert!(m.stm().is_empty());
}

#[test]
fn consolidation_retains_reduced_important_resource() {
    let mut m = core();
    let rid = learn(&mut m, "fish").resource_ids[0];
    m.decay_tick(9);
    let report = m.consolidate();
    assert!((weight(&m, rid) - 0.641_853_886_172_394_8).abs() < 1e-12);
    assert!(report.forgotten_resources.is_empty());
    assert!(m.ltm().resource(rid).unwrap().consolidated);
}

#[test]
fn fresh_resource_is_committed_at_stm_weight() {
    let mut m = core();
    let rid = learn(&mut m, "fish").resource_ids[0];
    let report = m.consolidate();
    assert!(report.reduced.is_empty());
    assert_eq!(weight(&m, rid), 0.9);
    assert_eq!(report.stm_cleared_count, 1);
}

#[test]
fn empty_consolidation_is_a_noop() {
    let mut m = core();
    let report = m.consolidate();
    assert!(report.is_empty());
    assert!(m.stm().is_empty());
}

#[test]
fn repeated_reduction_forgets_on_ninth_sleep() {
    // reference weights from a 40-digit iteration of W <- ln(W + 1), from 0.9
    const EXPECTED: [f64; 9] = [
        0.641_853_886_172_394_8,
        0.495_826_021_792_123_97,
        0.402_678_577_195_928_6,
        0.338_383_678_078_155_04,
        0.291_462_675_516_112_6,
        0.255_775_433_032_473_97,
        0.227_753_256_703_901_2,
        0.205_185_878_512_726_5,
        0.186_633_811_073_539_64,
    ];
    let mut m = core();
    let rid = learn(&mut m, "fish").resource_ids[0];
    for (sleep, expected) in EXPECTED.iter().enumerate() {
        m.rehearse(rid).unwrap();
        m.decay_tick(9);
        let report = m.consolidate();
        assert_eq!(report.reduced.len(), 1);
        assert!((report.reduced[0].2 - expected).abs() < 1e-9);
        if sleep < 8 {
            assert!(report.forgotten_resources.is_empty(), "sleep {}", sleep + 1);
        } else {
            assert_eq!(report.forgotten_resources, vec![rid]);
        }
    }
    assert!(m.ltm().is_empty());
}

#[test]
fn partial_forgetting_keeps_event() {
    let mut m = core();
    let e = m
        .create_event(
            EventType::LearnThing,
            EmotionLabel::Joy,
            0.3,
            vec![Information::token("lake"), Information::token("dad")],
        )
        .unwrap();
    let keep = e.resource_ids[0];
    let drop = e.resource_ids[1];
    m.consolidate();
    // drive `drop` down alone
    for _ in 0..9 {
        m.rehearse(drop).unwrap();
        m.decay_tick(9);
        m.rehearse(keep).unwrap();
        m.consolidate();
    }
    assert!(m.ltm().resource(drop).is_none());
    assert_eq!(m.ltm().event(e.id).unwrap().resource_ids, vec![keep]);
    m.validate().unwrap();
}

#[test]
fn retrieve_ranks_by_cue_count() {
    let mut m = core();
    m.create_event(
        EventType::Interaction,
        EmotionLabel::Sadness,
        -0.2,
        vec![
            Information::token("fish"),
            Information::token("dad"),
            Information::token("lake"),
        ],
    )
    .unwrap();
    learn(&mut m, "dad");
    let hits = m.retrieve(&["fish", "dad"], DEFAULT_K).unwrap();
    assert_eq!(hits.len(), 2);
    assert_eq!(hits[0].score, 2);
    assert_eq!(hits[0].matched_cues, vec!["fish", "dad"]);
    assert_eq!(hits[0].event.emotion, EmotionLabel::Sadness);
}

#[test]
fn retrieve_empty_ltm_and_empty_cues() {
    let mut m = core();
    assert!(m.retrieve(&["glasgow"], 3).unwrap().is_empty());
    assert!(matches!(
        m.retrieve::<&str>(&[], 3),
        Err(Error::Validation(_))
    ));
    assert!(matches!(m.retrieve(&["  "], 3), Err(Error::Validation(_))));
}

#[test]
fn retrieve_breaks_score_ties_on_mean_weight() {
    let mut m = core();
    let light = learn(&mut m, "fish");
    let heavy = learn(&mut m, "fish");
    m.consolidate();
    // push `light` through three stale sleeps: 0.9 -> 0.6419 -> 0.4958 -> 0.4027
    for _ in 0..3 {
        m.rehearse(light.resource_ids[0]).unwrap();
        m.decay_tick(9);
        m.consolidate();
    }
    // one stale sleep for `heavy`: 0.9 -> 0.6419
    m.rehearse(heavy.resource_ids[0]).unwrap();
    m.decay_tick(9);
    m.consolidate();
    let hits = m.peek(&["fish"], 3).unwrap();
    assert_eq!(hits[0].event.id, heavy.id);
    assert!(hits[0].mean_weight > hits[1].mean_weight);
}

#[test]
fn retrieve_rehearses_matches() {
    let mut m = core();
    let e = learn(&mut m, "fish");
    m.consolidate();
    assert!(m.stm().is_empty());
    m.retrieve(&["fish"], 3).unwrap();
    assert_eq!(m.stm().activation(e.resource_ids[0]), Some(1.0));
    // peek does not
    m.consolidate();
    m.peek(&["fish"], 3).unwrap();
    assert!(m.stm().is_empty());
}

#[test]
fn fact_lookup_follows_latest_live_fact() {
    let mut m = core();
    let intro = m
        .create_event(
            EventType::MeetNewPerson,
            EmotionLabel::Neutral,
            0.0,
            vec![Information::token("knob")],
        )
        .unwrap();
    m.register_person("knob", intro.id).unwrap();
    let age = |v: &str| {
        vec![Information::fact(
            "age",
            FactTriple::new("Knob", Attribute::Age, v),
        )]
    };
    m.create_event(EventType::LearnThing, EmotionLabel::Neutral, 0.0, age("30"))
        .unwrap();
    m.decay_tick(1);
    m.create_event(EventType::LearnThing, EmotionLabel::Neutral, 0.0, age("31"))
        .unwrap();
    assert_eq!(m.fact_lookup("KNOB", Attribute::Age).as_deref(), Some("31"));
    assert_eq!(m.fact_lookup("unknownperson", Attribute::Age), None);
    assert!(matches!(
        m.fact_lookup_named("knob", "shoe_size"),
        Err(Error::Validation(_))
    ));
    let view = m.person("knob").unwrap();
    assert_eq!(view.name, "Knob");
    assert_eq!(
        view.facts.get(&Attribute::Age).map(String::as_str),
        Some("31")
    );
}

#[test]
fn forgotten_fact_disappears() {
    let mut m = core();
    let intro = m
        .create_event(
            EventType::MeetNewPerson,
            EmotionLabel::Neutral,
            0.0,
            vec![Information::token("knob")],
        )
        .unwrap();
    m.register_person("knob", intro.id).unwrap();
    let fact = m
        .create_event(
            EventType::LearnThing,
            EmotionLabel::Neutral,
            0.0,
            vec![Information::fact(
                "age",
                FactTriple::new("knob", Attribute::Age, "31"),
            )],
        )
        .unwrap()
        .resource_ids[0];
    m.consolidate();
    for sleep in 1..=9 {
        m.rehearse(fact).unwrap();
        m.rehearse(intro.resource_ids[0]).unwrap();
        m.decay_tick(9);
        m.rehearse(intro.resource_ids[0]).unwrap();
        m.consolidate();
        if sleep < 9 {
            assert_eq!(m.fact_lookup("knob", Attribute::Age).as_deref(), Some("31"));
        }
    }
    assert_eq!(m.fact_lookup("knob", Attribute::Age), None);
    assert!(m.person("knob").unwrap().facts.is_empty());
}

#[test]
fn forgetting_intro_event_forgets_person() {
    let mut m = core();
    let intro = m
        .create_event(
            EventType::MeetNewPerson,
            EmotionLabel::Neutral,
            0.0,
            vec![Information::token("knob")],
        )
        .unwrap();
    m.register_person("Knob", intro.id).unwrap();
    m.consolidate();
    let mut gone = Vec::new();
    for _ in 0..9 {
        m.rehearse(intro.resource_ids[0]).unwrap();
        m.decay_tick(9);
        gone.extend(m.consolidate().forgotten_people);
    }
    assert_eq!(gone, vec!["knob".to_string()]);
    assert!(m.person("knob").is_none());
    m.validate().unwrap();
}

#[test]
fn find_term_returns_latest_image() {
    let mut m = core();
    let e = m
        .create_event(
            EventType::LearnThing,
            EmotionLabel::Neutral,
            0.0,
            vec![Information::token("cellphone"), Information::image("a.png")],
        )
        .unwrap();
    m.decay_tick(1);
    m.append_resources(e.id, vec![Information::image("b.png")])
        .unwrap();
    let recall = m.find_term("Cellphone").unwrap();
    assert_eq!(recall.event_id, e.id);
    assert_eq!(recall.image.unwrap().1, "b.png");
    assert_eq!(recall.image_count, 2);
    assert!(m.find_term("radio").is_none());
}

#[test]
fn ltm_is_unbounded() {
    let mut m = core();
    for i in 0..1200 {
        learn(&mut m, &format!("t{i}"));
        if i % 7 == 6 {
            m.consolidate();
        }
    }
    m.consolidate();
    assert_eq!(m.ltm().resource_count(), 1200);
    m.validate().unwrap();
}
