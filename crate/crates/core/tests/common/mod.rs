//! Diagram generators shared by the integration suites.
#![allow(dead_code)]

use rand::seq::SliceRandom;
use rand::Rng;
use twistdance::model::validate;
use twistdance::{CrossingSign, Diagram, Event};

/// Every diagram with exactly `m` events, up to relabeling: each position is
/// a twist bar or one end of a classical pair (over first or under first)
/// or a virtual pair. Signs are all positive.
pub fn all_diagrams(m: usize) -> Vec<Diagram> {
    fn fill(
        slots: &mut Vec<Option<Event>>,
        next_crossing: u32,
        next_bar: u32,
        out: &mut Vec<Diagram>,
    ) {
        let Some(first) = slots.iter().position(Option::is_none) else {
            out.push(validate(slots.iter().map(|e| e.unwrap()).collect()).unwrap());
            return;
        };
        slots[first] = Some(Event::TwistBar { bar: next_bar });
        fill(slots, next_crossing, next_bar + 1, out);
        for partner in first + 1..slots.len() {
            if slots[partner].is_some() {
                continue;
            }
            let c = next_crossing;
            let pairs = [
                (
                    Event::over(c, CrossingSign::Positive),
                    Event::under(c, CrossingSign::Positive),
                ),
                (
                    Event::under(c, CrossingSign::Positive),
                    Event::over(c, CrossingSign::Positive),
                ),
                (
                    Event::Virtual { crossing: c },
                    Event::Virtual { crossing: c },
                ),
            ];
            for (a, b) in pairs {
                slots[first] = Some(a);
                slots[partner] = Some(b);
                fill(slots, c + 1, next_bar, out);
            }
            slots[partner] = None;
        }
        slots[first] = None;
    }
    let mut out = Vec::new();
    fill(&mut vec![None; m], 1, 1, &mut out);
    out
}

/// Random diagram with `m` events and random signs, ids and kinds.
pub fn random_diagram<R: Rng>(rng: &mut R, m: usize) -> Diagram {
    let mut events = Vec::with_capacity(m);
    let mut next_id = rng.gen_range(1..5u32);
    let mut bar = rng.gen_range(1..5u32);
    while events.len() < m {
        let room = m - events.len();
        match rng.gen_range(0..5) {
            0 | 1 if room >= 2 => {
                let sign = if rng.gen() {
                    CrossingSign::Positive
                } else {
                    CrossingSign::Negative
                };
                events.push(Event::over(next_id, sign));
                events.push(Event::under(next_id, sign));
                next_id += rng.gen_range(1..3);
            }
            2 if room >= 2 => {
                events.push(Event::Virtual { crossing: next_id });
                events.push(Event::Virtual { crossing: next_id });
                next_id += rng.gen_range(1..3);
            }
            _ => {
                events.push(Event::TwistBar { bar });
                bar += rng.gen_range(1..3);
            }
        }
    }
    events.shuffle(rng);
    validate(events).unwrap()
}

/// Random diagram with exactly `bars` twist bars and `classical` classical
/// crossings (plus `virtual_pairs` virtual ones).
pub fn random_with_bars<R: Rng>(
    rng: &mut R,
    classical: u32,
    virtual_pairs: u32,
    bars: u32,
) -> Diagram {
    let mut events = Vec::new();
    for c in 1..=classical {
        events.push(Event::over(c, CrossingSign::Positive));
        events.push(Event::under(c, CrossingSign::Positive));
    }
    for v in 0..virtual_pairs {
        events.push(Event::Virtual {
            crossing: classical + 1 + v,
        });
        events.push(Event::Virtual {
            crossing: classical + 1 + v,
        });
    }
    for b in 1..=bars {
        events.push(Event::TwistBar { bar: b });
    }
    events.shuffle(rng);
    validate(events).unwrap()
}
