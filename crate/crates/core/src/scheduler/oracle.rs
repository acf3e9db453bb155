//! Brute-force reference for [`super::schedule_search`].
//!
//! Shares no code with the search: routes are found by walking the curve
//! from each initial point, facings are stepped event by event, and every
//! interleaving is generated in lexicographic dancer order. A prefix that
//! already breaks the crossing rule is abandoned, since no extension of it
//! can be valid.

use std::collections::{HashMap, HashSet};

use thiserror::Error;

use super::{CrossingRule, DancePlan, Schedule};
use crate::model::{Event, Strand};

/// Largest `k * m` the oracle accepts.
pub const ORACLE_MAX_STEPS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("{steps} total steps exceed the oracle limit of {ORACLE_MAX_STEPS}")]
pub struct InstanceTooLarge {
    pub steps: usize,
}

/// `Ok(Some(_))` with the first valid interleaving, `Ok(None)` when none
/// exists.
pub fn oracle_schedule(plan: &DancePlan) -> Result<Option<Schedule>, InstanceTooLarge> {
    let events = plan.diagram().events();
    let m = events.len();
    let steps = plan.k() * m;
    if steps > ORACLE_MAX_STEPS {
        return Err(InstanceTooLarge { steps });
    }

    let starts: HashSet<usize> = plan.points().iter().map(|g| g.0).collect();
    let routes: Vec<Vec<usize>> = plan
        .points()
        .iter()
        .map(|start| {
            let mut route = Vec::new();
            if m == 0 {
                return route;
            }
            let mut at = start.0;
            let mut boundaries = 0;
            while boundaries < plan.k() {
                route.push(at);
                at = (at + 1) % m;
                if starts.contains(&at) {
                    boundaries += 1;
                }
            }
            route
        })
        .collect();

    for (d, route) in routes.iter().enumerate() {
        let mut facing = plan.start_facing(d);
        for &i in route {
            if let Event::TwistBar { .. } = events[i] {
                facing = facing.flip();
            }
        }
        if facing != plan.required_end_facing(d) {
            return Ok(None);
        }
    }

    let mut search = Interleaver {
        events,
        rule: plan.crossing_rule(),
        routes: &routes,
        pos: vec![0; routes.len()],
        counts: HashMap::new(),
        order: Vec::with_capacity(steps),
        total: steps,
    };
    Ok(search
        .run()
        .then(|| Schedule::replay(plan, &routes, &search.order)))
}

struct Interleaver<'a> {
    events: &'a [Event],
    rule: CrossingRule,
    routes: &'a [Vec<usize>],
    pos: Vec<usize>,
    counts: HashMap<u32, (i64, i64)>,
    order: Vec<usize>,
    total: usize,
}

impl Interleaver<'_> {
    fn run(&mut self) -> bool {
        if self.order.len() == self.total {
            return true;
        }
        for d in 0..self.routes.len() {
            if self.pos[d] == self.routes[d].len() {
                continue;
            }
            let event = self.events[self.routes[d][self.pos[d]]];
            if let Event::Classical {
                crossing, strand, ..
            } = event
            {
                let entry = self.counts.entry(crossing).or_insert((0, 0));
                match strand {
                    Strand::Over => entry.0 += 1,
                    Strand::Under => entry.1 += 1,
                }
                let (overs, unders) = *entry;
                let prefix_ok = match self.rule {
                    CrossingRule::OverFirst => unders <= overs,
                    CrossingRule::UnderFirst => overs <= unders,
                    CrossingRule::Unrestricted => true,
                };
                if prefix_ok && self.descend(d) {
                    return true;
                }
                let entry = self.counts.get_mut(&crossing).expect("counted");
                match strand {
                    Strand::Over => entry.0 -= 1,
                    Strand::Under => entry.1 -= 1,
                }
            } else if self.descend(d) {
                return true;
            }
        }
        false
    }

    fn descend(&mut self, d: usize) -> bool {
        self.pos[d] += 1;
        self.order.push(d);
        if self.run() {
            return true;
        }
        self.order.pop();
        self.pos[d] -= 1;
        false
    }
}
