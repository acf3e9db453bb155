//! Over-first scheduling of dance plans.
//!
//! A plan fixes the initial points, the lap count `k` and the facing rule.
//! Dancer `i` walks paths `i, i+1, ..., i+k-1` (mod `n`). Speeds are free, so
//! a dance is any interleaving of the dancers' routes in which, for every
//! classical crossing and every prefix, under passes never outnumber over
//! passes (mirrored for the under-first rule). Virtual passes and twist bars
//! never block.

mod oracle;
mod verify;

pub use oracle::{oracle_schedule, InstanceTooLarge, ORACLE_MAX_STEPS};
pub use verify::{verify_schedule, Violation};

use std::collections::{HashMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::facing::{forward_rule_ok, matching_check, parity_vector, Facing, FacingAssignment};
use crate::model::{check_points, paths_of, Diagram, Event, Gap, PlacementError, Strand};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CrossingRule {
    OverFirst,
    UnderFirst,
    Unrestricted,
}

impl CrossingRule {
    /// The rule a time-reversed dance obeys.
    pub fn mirrored(self) -> Self {
        match self {
            CrossingRule::OverFirst => CrossingRule::UnderFirst,
            CrossingRule::UnderFirst => CrossingRule::OverFirst,
            CrossingRule::Unrestricted => CrossingRule::Unrestricted,
        }
    }

    /// Whether a pass on `strand` may happen given the passes of the same
    /// crossing completed so far.
    pub fn permits(self, strand: Strand, overs: u32, unders: u32) -> bool {
        match (self, strand) {
            (CrossingRule::OverFirst, Strand::Under) => overs > unders,
            (CrossingRule::UnderFirst, Strand::Over) => unders > overs,
            _ => true,
        }
    }
}

impl fmt::Display for CrossingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CrossingRule::OverFirst => "over-first",
            CrossingRule::UnderFirst => "under-first",
            CrossingRule::Unrestricted => "unrestricted",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DanceRule {
    /// Everyone starts and ends forward-facing.
    Forward,
    /// Point `i` carries a designated facing; dancers start in their point's
    /// facing and must arrive at their final point in that point's facing.
    Matching(FacingAssignment),
}

impl DanceRule {
    pub fn name(&self) -> &'static str {
        match self {
            DanceRule::Forward => "forward",
            DanceRule::Matching(_) => "matching",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlanError {
    #[error(transparent)]
    Placement(#[from] PlacementError),
    #[error("lap count k must be at least 1")]
    ZeroLaps,
    #[error("{got} facings given for {expected} initial points")]
    FacingCount { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DancePlan {
    diagram: Diagram,
    points: Vec<Gap>,
    k: usize,
    rule: DanceRule,
    crossing_rule: CrossingRule,
}

impl DancePlan {
    pub fn new(
        diagram: Diagram,
        points: Vec<Gap>,
        k: usize,
        rule: DanceRule,
        crossing_rule: CrossingRule,
    ) -> Result<Self, PlanError> {
        check_points(&diagram, &points)?;
        if k == 0 {
            return Err(PlanError::ZeroLaps);
        }
        if let DanceRule::Matching(f) = &rule {
            if f.len() != points.len() {
                return Err(PlanError::FacingCount {
                    expected: points.len(),
                    got: f.len(),
                });
            }
        }
        Ok(DancePlan {
            diagram,
            points,
            k,
            rule,
            crossing_rule,
        })
    }

    /// Forward rule, over-first crossings.
    pub fn forward(diagram: Diagram, points: Vec<Gap>, k: usize) -> Result<Self, PlanError> {
        Self::new(
            diagram,
            points,
            k,
            DanceRule::Forward,
            CrossingRule::OverFirst,
        )
    }

    pub fn diagram(&self) -> &Diagram {
        &self.diagram
    }

    pub fn points(&self) -> &[Gap] {
        &self.points
    }

    pub fn dancers(&self) -> usize {
        self.points.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rule(&self) -> &DanceRule {
        &self.rule
    }

    pub fn crossing_rule(&self) -> CrossingRule {
        self.crossing_rule
    }

    pub fn with_crossing_rule(mut self, crossing_rule: CrossingRule) -> Self {
        self.crossing_rule = crossing_rule;
        self
    }

    pub fn start_facing(&self, dancer: usize) -> Facing {
        match &self.rule {
            DanceRule::Forward => Facing::Forward,
            DanceRule::Matching(f) => f.facings()[dancer],
        }
    }

    /// Facing dancer `dancer` must have when it stops.
    pub fn required_end_facing(&self, dancer: usize) -> Facing {
        match &self.rule {
            DanceRule::Forward => Facing::Forward,
            DanceRule::Matching(f) => f.facings()[(dancer + self.k) % self.dancers()],
        }
    }

    pub fn header(&self) -> PlanHeader {
        PlanHeader {
            points: self.points.clone(),
            k: self.k,
            rule: self.rule.clone(),
        }
    }
}

/// Plan identity carried along with a schedule for trace output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlanHeader {
    pub points: Vec<Gap>,
    pub k: usize,
    pub rule: DanceRule,
}

/// Event indices a dancer visits, in order.
pub type Route = Vec<usize>;

pub fn routes_of(plan: &DancePlan) -> Vec<Route> {
    let paths = paths_of(&plan.diagram, &plan.points).expect("plan points are validated");
    let n = paths.len();
    (0..n)
        .map(|i| {
            (0..plan.k)
                .flat_map(|j| paths[(i + j) % n].indices.iter().copied())
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub dancer: usize,
    pub route_position: usize,
    pub event_index: usize,
    pub event: Event,
    /// Facing once the step is taken.
    pub facing: Facing,
}

/// A linearization of all dancers' steps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    pub steps: Vec<Step>,
    pub feasible: bool,
    pub plan: Option<PlanHeader>,
}

impl Schedule {
    pub fn empty() -> Self {
        Schedule {
            steps: Vec::new(),
            feasible: true,
            plan: None,
        }
    }

    /// Builds a schedule by replaying the given dancer order over the routes.
    pub(crate) fn replay(plan: &DancePlan, routes: &[Route], order: &[usize]) -> Self {
        let mut pos = vec![0usize; routes.len()];
        let mut facing: Vec<Facing> = (0..routes.len()).map(|d| plan.start_facing(d)).collect();
        let steps = order
            .iter()
            .map(|&d| {
                let event_index = routes[d][pos[d]];
                let event = plan.diagram.events()[event_index];
                if event.is_twist_bar() {
                    facing[d] = facing[d].flip();
                }
                let step = Step {
                    dancer: d,
                    route_position: pos[d],
                    event_index,
                    event,
                    facing: facing[d],
                };
                pos[d] += 1;
                step
            })
            .collect();
        Schedule {
            steps,
            feasible: true,
            plan: Some(plan.header()),
        }
    }

    /// Steps of one dancer, in order.
    pub fn dancer_steps(&self, dancer: usize) -> impl Iterator<Item = &Step> + '_ {
        self.steps.iter().filter(move |s| s.dancer == dancer)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InfeasibleReason {
    /// The facing rule fails before any crossing is considered.
    FacingParity,
    /// Every reachable interleaving gets stuck.
    Deadlock,
}

impl fmt::Display for InfeasibleReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InfeasibleReason::FacingParity => "FacingParity",
            InfeasibleReason::Deadlock => "Deadlock",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("infeasible ({reason}) after {states_explored} states")]
pub struct Infeasible {
    pub reason: InfeasibleReason,
    pub states_explored: usize,
}

/// Whether the plan's facing rule holds, by parity algebra.
pub fn facing_rule_ok(plan: &DancePlan) -> bool {
    let t = parity_vector(&plan.diagram, &plan.points).expect("plan points are validated");
    match &plan.rule {
        DanceRule::Forward => forward_rule_ok(&t, plan.k),
        DanceRule::Matching(f) => matching_check(&t, f, plan.k),
    }
}

/// Depth-first search over progress vectors with a set of dead states.
///
/// Dancers are tried lowest id first, so the returned witness is the
/// lexicographically least feasible dancer order.
pub fn schedule_search(plan: &DancePlan) -> Result<Schedule, Infeasible> {
    if !facing_rule_ok(plan) {
        return Err(Infeasible {
            reason: InfeasibleReason::FacingParity,
            states_explored: 0,
        });
    }
    let routes = routes_of(plan);
    let n = routes.len();

    let mut crossing_slot: HashMap<u32, usize> = HashMap::new();
    let gates: Vec<Vec<Option<(usize, Strand)>>> = routes
        .iter()
        .map(|route| {
            route
                .iter()
                .map(|&i| match plan.diagram.events()[i] {
                    Event::Classical {
                        crossing, strand, ..
                    } => {
                        let next = crossing_slot.len();
                        Some((*crossing_slot.entry(crossing).or_insert(next), strand))
                    }
                    _ => None,
                })
                .collect()
        })
        .collect();
    let slots = crossing_slot.len();
    let total: usize = routes.iter().map(Vec::len).sum();

    let mut pos = vec![0u32; n];
    // (overs, unders) per crossing; derived from `pos`, kept incrementally.
    let mut passes = vec![(0u32, 0u32); slots];
    let mut dead: HashSet<Vec<u32>> = HashSet::new();
    let mut trail: Vec<usize> = Vec::with_capacity(total);
    let mut next_try: Vec<usize> = vec![0];
    let mut states_explored = 1usize;

    let apply = |passes: &mut Vec<(u32, u32)>, gate: Option<(usize, Strand)>, delta: i32| {
        if let Some((c, strand)) = gate {
            let counter = match strand {
                Strand::Over => &mut passes[c].0,
                Strand::Under => &mut passes[c].1,
            };
            *counter = counter.wrapping_add_signed(delta);
        }
    };

    while trail.len() < total {
        let from = *next_try.last().expect("frame for current state");
        let candidate = (from..n).find(|&d| {
            let p = pos[d] as usize;
            p < routes[d].len()
                && match gates[d][p] {
                    Some((c, strand)) => {
                        plan.crossing_rule.permits(strand, passes[c].0, passes[c].1)
                    }
                    None => true,
                }
        });
        match candidate {
            Some(d) => {
                *next_try.last_mut().unwrap() = d + 1;
                apply(&mut passes, gates[d][pos[d] as usize], 1);
                pos[d] += 1;
                if dead.contains(&pos) {
                    pos[d] -= 1;
                    apply(&mut passes, gates[d][pos[d] as usize], -1);
                } else {
                    trail.push(d);
                    next_try.push(0);
                    states_explored += 1;
                }
            }
            None => {
                dead.insert(pos.clone());
                next_try.pop();
                let Some(d) = trail.pop() else {
                    return Err(Infeasible {
                        reason: InfeasibleReason::Deadlock,
                        states_explored,
                    });
                };
                pos[d] -= 1;
                apply(&mut passes, gates[d][pos[d] as usize], -1);
            }
        }
    }

    Ok(Schedule::replay(plan, &routes, &trail))
}

/// Reverses the orientation of the curve.
pub fn retrograde(diagram: &Diagram) -> Diagram {
    let mut events = diagram.events().to_vec();
    events.reverse();
    crate::model::validate(events).expect("reversal preserves validity")
}

/// Where gap `gap` lands after [`retrograde`] on a curve with `m` events.
pub fn retrograde_gap(m: usize, gap: Gap) -> Gap {
    if m == 0 {
        Gap(0)
    } else {
        Gap((m - gap.0) % m)
    }
}

/// The time-reversed plan: reversed diagram, mapped points (re-sorted into
/// cyclic order, facings following their points) and the mirrored crossing
/// rule.
pub fn retrograde_plan(plan: &DancePlan) -> DancePlan {
    let m = plan.diagram.len();
    let mut mapped: Vec<(Gap, usize)> = plan
        .points
        .iter()
        .enumerate()
        .map(|(i, &g)| (retrograde_gap(m, g), i))
        .collect();
    mapped.sort_unstable();
    let rule = match &plan.rule {
        DanceRule::Forward => DanceRule::Forward,
        DanceRule::Matching(f) => DanceRule::Matching(FacingAssignment(
            mapped.iter().map(|&(_, i)| f.facings()[i]).collect(),
        )),
    };
    DancePlan::new(
        retrograde(&plan.diagram),
        mapped.into_iter().map(|(g, _)| g).collect(),
        plan.k,
        rule,
        plan.crossing_rule.mirrored(),
    )
    .expect("mapped plan is valid")
}
