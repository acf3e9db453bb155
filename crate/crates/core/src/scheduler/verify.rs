//! Independent checker for witness schedules.

use std::collections::HashMap;

use thiserror::Error;

use super::{routes_of, CrossingRule, DancePlan, Schedule};
use crate::model::{Event, Strand};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("schedule is not marked feasible")]
    NotFeasible,
    #[error("step {t}: unknown dancer {dancer}")]
    UnknownDancer { t: usize, dancer: usize },
    #[error("step {t}: dancer {dancer} is out of route order or past its route")]
    OutOfOrder { t: usize, dancer: usize },
    #[error("step {t}: event does not match the dancer's route")]
    WrongEvent { t: usize },
    #[error("step {t}: facing does not follow the twist bars")]
    FacingMismatch { t: usize },
    #[error("step {t}: crossing {crossing} passed against the {rule} rule")]
    RuleViolation {
        t: usize,
        crossing: u32,
        rule: CrossingRule,
    },
    #[error("dancer {dancer} stops before finishing its route")]
    Incomplete { dancer: usize },
    #[error("dancer {dancer} ends with the wrong facing")]
    EndFacing { dancer: usize },
}

pub fn verify_schedule(plan: &DancePlan, schedule: &Schedule) -> Result<(), Violation> {
    if !schedule.feasible {
        return Err(Violation::NotFeasible);
    }
    let routes = routes_of(plan);
    let n = routes.len();
    let mut pos = vec![0usize; n];
    let mut facing: Vec<_> = (0..n).map(|d| plan.start_facing(d)).collect();
    let mut counts: HashMap<u32, (u32, u32)> = HashMap::new();

    for (t, step) in schedule.steps.iter().enumerate() {
        let d = step.dancer;
        if d >= n {
            return Err(Violation::UnknownDancer { t, dancer: d });
        }
        if step.route_position != pos[d] || pos[d] >= routes[d].len() {
            return Err(Violation::OutOfOrder { t, dancer: d });
        }
        let index = routes[d][pos[d]];
        if step.event_index != index || plan.diagram().events()[index] != step.event {
            return Err(Violation::WrongEvent { t });
        }
        pos[d] += 1;
        match step.event {
            Event::TwistBar { .. } => facing[d] = facing[d].flip(),
            Event::Classical {
                crossing, strand, ..
            } => {
                let c = counts.entry(crossing).or_default();
                match strand {
                    Strand::Over => c.0 += 1,
                    Strand::Under => c.1 += 1,
                }
                let ok = match plan.crossing_rule() {
                    CrossingRule::OverFirst => c.1 <= c.0,
                    CrossingRule::UnderFirst => c.0 <= c.1,
                    CrossingRule::Unrestricted => true,
                };
                if !ok {
                    return Err(Violation::RuleViolation {
                        t,
                        crossing,
                        rule: plan.crossing_rule(),
                    });
                }
            }
            Event::Virtual { .. } => {}
        }
        if step.facing != facing[d] {
            return Err(Violation::FacingMismatch { t });
        }
    }

    for d in 0..n {
        if pos[d] != routes[d].len() {
            return Err(Violation::Incomplete { dancer: d });
        }
        if facing[d] != plan.required_end_facing(d) {
            return Err(Violation::EndFacing { dancer: d });
        }
    }
    Ok(())
}
