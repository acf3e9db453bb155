//! Minimal dancer and lap counts for a fixed diagram, and placement surveys.
//!
//! Feasibility is not assumed monotone in `n` or `k`, so every bound is
//! searched exhaustively in the fixed order (n, k, placement). Placements are
//! all `n`-subsets of gaps in lexicographic order.

use std::ops::RangeInclusive;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::facing::{matching_solve, parity_vector, FacingAssignment};
use crate::model::{Diagram, Gap};
use crate::scheduler::{
    schedule_search, CrossingRule, DancePlan, DanceRule, InfeasibleReason, Schedule,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RuleKind {
    Forward,
    Matching,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("bounds must be at least 1")]
    ZeroBound,
    #[error("{n} dancers requested but the diagram has only {gaps} gaps")]
    TooManyDancers { n: usize, gaps: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Feasible { plan: DancePlan, schedule: Schedule },
    ExhaustedBounds,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveReport {
    pub outcome: Outcome,
    pub n_searched: RangeInclusive<usize>,
    pub k_searched: RangeInclusive<usize>,
    /// Number of (placement, k) plans handed to the scheduler or rejected
    /// on facing parity.
    pub placements_tried: usize,
}

impl SolveReport {
    pub fn feasible(&self) -> Option<(&DancePlan, &Schedule)> {
        match &self.outcome {
            Outcome::Feasible { plan, schedule } => Some((plan, schedule)),
            Outcome::ExhaustedBounds => None,
        }
    }
}

/// All `n`-element gap sets of a diagram with `gaps` gaps, lexicographically.
pub fn placements(gaps: usize, n: usize) -> impl Iterator<Item = Vec<Gap>> {
    let mut current: Option<Vec<usize>> = (n <= gaps).then(|| (0..n).collect());
    std::iter::from_fn(move || {
        let out = current.clone()?;
        let next = current.as_mut().unwrap();
        match (0..n).rev().find(|&i| next[i] < gaps - n + i) {
            Some(i) => {
                next[i] += 1;
                for j in i + 1..n {
                    next[j] = next[j - 1] + 1;
                }
            }
            None => current = None,
        }
        Some(out.into_iter().map(Gap).collect())
    })
}

/// Builds the plan for a placement. Matching facings come from
/// [`matching_solve`]; `None` means no facing assignment can work.
pub fn plan_for(
    diagram: &Diagram,
    points: Vec<Gap>,
    k: usize,
    rule_kind: RuleKind,
    crossing_rule: CrossingRule,
) -> Option<DancePlan> {
    let rule = match rule_kind {
        RuleKind::Forward => DanceRule::Forward,
        RuleKind::Matching => {
            let t = parity_vector(diagram, &points).expect("placement gaps are valid");
            DanceRule::Matching(matching_solve(&t, k)?)
        }
    };
    Some(
        DancePlan::new(diagram.clone(), points, k, rule, crossing_rule)
            .expect("placement plan is valid"),
    )
}

fn check_bounds(diagram: &Diagram, n_max: usize, k_max: usize) -> Result<(), SolveError> {
    if n_max == 0 || k_max == 0 {
        return Err(SolveError::ZeroBound);
    }
    if n_max > diagram.gap_count() {
        return Err(SolveError::TooManyDancers {
            n: n_max,
            gaps: diagram.gap_count(),
        });
    }
    Ok(())
}

/// Smallest `k` (then first placement) for exactly `n` dancers.
fn search_fixed_n(
    diagram: &Diagram,
    n: usize,
    rule_kind: RuleKind,
    crossing_rule: CrossingRule,
    k_max: usize,
    tried: &mut usize,
) -> Option<(DancePlan, Schedule)> {
    for k in 1..=k_max {
        for points in placements(diagram.gap_count(), n) {
            *tried += 1;
            let Some(plan) = plan_for(diagram, points, k, rule_kind, crossing_rule) else {
                continue;
            };
            if let Ok(schedule) = schedule_search(&plan) {
                return Some((plan, schedule));
            }
        }
    }
    None
}

pub fn min_dancers(
    diagram: &Diagram,
    rule_kind: RuleKind,
    crossing_rule: CrossingRule,
    k_max: usize,
    n_max: usize,
) -> Result<SolveReport, SolveError> {
    check_bounds(diagram, n_max, k_max)?;
    let mut tried = 0;
    let outcome = (1..=n_max)
        .find_map(|n| search_fixed_n(diagram, n, rule_kind, crossing_rule, k_max, &mut tried))
        .map_or(Outcome::ExhaustedBounds, |(plan, schedule)| {
            Outcome::Feasible { plan, schedule }
        });
    Ok(SolveReport {
        outcome,
        n_searched: 1..=n_max,
        k_searched: 1..=k_max,
        placements_tried: tried,
    })
}

/// Smallest lap count for a fixed dancer count, over all placements.
pub fn min_laps(
    diagram: &Diagram,
    n: usize,
    rule_kind: RuleKind,
    crossing_rule: CrossingRule,
    k_max: usize,
) -> Result<SolveReport, SolveError> {
    check_bounds(diagram, n, k_max)?;
    let mut tried = 0;
    let outcome = search_fixed_n(diagram, n, rule_kind, crossing_rule, k_max, &mut tried)
        .map_or(Outcome::ExhaustedBounds, |(plan, schedule)| {
            Outcome::Feasible { plan, schedule }
        });
    Ok(SolveReport {
        outcome,
        n_searched: n..=n,
        k_searched: 1..=k_max,
        placements_tried: tried,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurveyRow {
    pub points: Vec<Gap>,
    pub facings: Option<FacingAssignment>,
    pub feasible: bool,
    pub reason: Option<InfeasibleReason>,
}

/// One row per placement; with `all_facings` under the matching rule, one
/// row per placement and facing assignment instead.
pub fn survey(
    diagram: &Diagram,
    rule_kind: RuleKind,
    crossing_rule: CrossingRule,
    n: usize,
    k: usize,
    all_facings: bool,
) -> Result<Vec<SurveyRow>, SolveError> {
    check_bounds(diagram, n, k)?;
    let mut rows = Vec::new();
    for points in placements(diagram.gap_count(), n) {
        let plans: Vec<Result<DancePlan, ()>> = match (rule_kind, all_facings) {
            (RuleKind::Matching, true) => FacingAssignment::enumerate(n)
                .map(|f| {
                    Ok(DancePlan::new(
                        diagram.clone(),
                        points.clone(),
                        k,
                        DanceRule::Matching(f),
                        crossing_rule,
                    )
                    .expect("placement plan is valid"))
                })
                .collect(),
            _ => vec![plan_for(diagram, points.clone(), k, rule_kind, crossing_rule).ok_or(())],
        };
        for plan in plans {
            let row = match plan {
                Err(()) => SurveyRow {
                    points: points.clone(),
                    facings: None,
                    feasible: false,
                    reason: Some(InfeasibleReason::FacingParity),
                },
                Ok(plan) => {
                    let result = schedule_search(&plan);
                    SurveyRow {
                        points: points.clone(),
                        facings: match plan.rule() {
                            DanceRule::Matching(f) => Some(f.clone()),
                            DanceRule::Forward => None,
                        },
                        feasible: result.is_ok(),
                        reason: result.err().map(|e| e.reason),
                    }
                }
            };
            rows.push(row);
        }
    }
    Ok(rows)
}
