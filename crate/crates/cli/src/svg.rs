//! Dancer-lane timeline of a schedule, as SVG 1.1 text.
//!
//! One horizontal lane per dancer; step `t` of the schedule sits at column
//! `t`. Lane segments are solid while the dancer faces forward and dashed
//! while it faces backward, so every twist bar glyph switches the stroke.

use std::fmt::Write as _;

use twistdance::{DanceRule, Facing, Schedule};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TimelineStyle {
    pub lane_height: u32,
    pub step_width: u32,
    /// `stroke-dasharray` for backward-facing segments; forward is solid.
    pub backward_dash: String,
    pub dancer_palette: Vec<String>,
}

impl Default for TimelineStyle {
    fn default() -> Self {
        TimelineStyle {
            lane_height: 48,
            step_width: 40,
            backward_dash: "6 4".to_string(),
            dancer_palette: [
                "#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
            ]
            .map(String::from)
            .to_vec(),
        }
    }
}

const LEFT: u32 = 56;
const TOP: u32 = 28;
const RIGHT: u32 = 24;
const BOTTOM: u32 = 12;

fn lane_count(schedule: &Schedule) -> usize {
    let from_steps = schedule
        .steps
        .iter()
        .map(|s| s.dancer + 1)
        .max()
        .unwrap_or(0);
    schedule
        .plan
        .as_ref()
        .map_or(from_steps, |p| p.points.len().max(from_steps))
}

fn start_facing(schedule: &Schedule, dancer: usize) -> Facing {
    if let Some(plan) = &schedule.plan {
        if let DanceRule::Matching(f) = &plan.rule {
            if let Some(&facing) = f.facings().get(dancer) {
                return facing;
            }
        }
        return Facing::Forward;
    }
    schedule
        .dancer_steps(dancer)
        .next()
        .map_or(Facing::Forward, |s| s.facing.after(s.event.is_twist_bar()))
}

fn glyph_label(token: &str) -> &str {
    token.trim_end_matches(['+', '-'])
}

pub fn svg_timeline(schedule: &Schedule, style: &TimelineStyle) -> String {
    let lanes = lane_count(schedule);
    let width = LEFT + (schedule.steps.len() as u32 + 1) * style.step_width + RIGHT;
    let height = TOP + lanes as u32 * style.lane_height + BOTTOM;
    let x_of = |t: usize| LEFT + (t as u32 + 1) * style.step_width;
    let y_of = |d: usize| TOP + d as u32 * style.lane_height + style.lane_height / 2;

    let mut out = String::new();
    out.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{width}\" height=\"{height}\" viewBox=\"0 0 {width} {height}\">"
    );
    let _ = writeln!(
        out,
        "<rect x=\"0\" y=\"0\" width=\"{width}\" height=\"{height}\" fill=\"#ffffff\"/>"
    );
    let _ = writeln!(
        out,
        "<text x=\"{LEFT}\" y=\"18\" font-family=\"monospace\" font-size=\"12\">{} steps, {lanes} dancers</text>",
        schedule.steps.len()
    );

    for d in 0..lanes {
        let color = &style.dancer_palette[d % style.dancer_palette.len().max(1)];
        let y = y_of(d);
        let _ = writeln!(out, "<g class=\"lane\" data-dancer=\"{d}\">");
        let _ = writeln!(
            out,
            "<text x=\"8\" y=\"{}\" font-family=\"monospace\" font-size=\"12\" fill=\"{color}\">d{d}</text>",
            y + 4
        );

        let mut x = LEFT;
        let mut facing = start_facing(schedule, d);
        let mut glyphs = String::new();
        for (t, step) in schedule
            .steps
            .iter()
            .enumerate()
            .filter(|(_, s)| s.dancer == d)
        {
            let next_x = x_of(t);
            let dash = match facing {
                Facing::Forward => String::new(),
                Facing::Backward => format!(" stroke-dasharray=\"{}\"", style.backward_dash),
            };
            let _ = writeln!(
                out,
                "<line x1=\"{x}\" y1=\"{y}\" x2=\"{next_x}\" y2=\"{y}\" stroke=\"{color}\" stroke-width=\"2\"{dash}/>"
            );
            let token = step.event.to_string();
            let fill = match step.facing {
                Facing::Forward => color.as_str(),
                Facing::Backward => "#ffffff",
            };
            let _ = writeln!(
                glyphs,
                "<circle cx=\"{next_x}\" cy=\"{y}\" r=\"5\" fill=\"{fill}\" stroke=\"{color}\" stroke-width=\"2\"/>"
            );
            let _ = writeln!(
                glyphs,
                "<text x=\"{next_x}\" y=\"{}\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">{}</text>",
                y - 9,
                glyph_label(&token)
            );
            x = next_x;
            facing = step.facing;
        }
        out.push_str(&glyphs);
        out.push_str("</g>\n");
    }
    out.push_str("</svg>\n");
    out
}
