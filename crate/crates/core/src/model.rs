//! Diagram representation for twisted virtual knots.
//!
//! A diagram is the cyclic sequence of symbols met while walking once around
//! the (single component) curve in its chosen orientation. Three symbol kinds
//! exist: a pass through a classical crossing (on the over- or under-strand),
//! a pass through a virtual crossing, and a twist bar.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CrossingSign {
    Positive,
    Negative,
}

impl CrossingSign {
    pub fn symbol(self) -> char {
        match self {
            CrossingSign::Positive => '+',
            CrossingSign::Negative => '-',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Strand {
    Over,
    Under,
}

/// One symbol on the closed curve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Event {
    Classical {
        crossing: u32,
        strand: Strand,
        sign: CrossingSign,
    },
    Virtual {
        crossing: u32,
    },
    TwistBar {
        bar: u32,
    },
}

impl Event {
    pub fn over(crossing: u32, sign: CrossingSign) -> Self {
        Event::Classical {
            crossing,
            strand: Strand::Over,
            sign,
        }
    }

    pub fn under(crossing: u32, sign: CrossingSign) -> Self {
        Event::Classical {
            crossing,
            strand: Strand::Under,
            sign,
        }
    }

    pub fn is_twist_bar(&self) -> bool {
        matches!(self, Event::TwistBar { .. })
    }

    /// Crossing label for classical and virtual passes.
    pub fn crossing(&self) -> Option<u32> {
        match *self {
            Event::Classical { crossing, .. } | Event::Virtual { crossing } => Some(crossing),
            Event::TwistBar { .. } => None,
        }
    }
}

/// Canonical token form, e.g. `O1+`, `U3-`, `V2`, `T1`.
impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Event::Classical {
                crossing,
                strand,
                sign,
            } => {
                let letter = match strand {
                    Strand::Over => 'O',
                    Strand::Under => 'U',
                };
                write!(f, "{letter}{crossing}{}", sign.symbol())
            }
            Event::Virtual { crossing } => write!(f, "V{crossing}"),
            Event::TwistBar { bar } => write!(f, "T{bar}"),
        }
    }
}

/// Structural violations, reported for the first offending event in check
/// order: strand duplication, pairing, sign agreement, bar uniqueness.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("crossing {crossing} has two {strand:?} passes (events {first} and {second})")]
    DuplicateStrand {
        crossing: u32,
        strand: Strand,
        first: usize,
        second: usize,
    },
    #[error("crossing {crossing} is not a pair of passes of one kind (event {event})")]
    UnpairedCrossing { crossing: u32, event: usize },
    #[error("crossing {crossing} has passes with different signs (events {first} and {second})")]
    SignMismatch {
        crossing: u32,
        first: usize,
        second: usize,
    },
    #[error("twist bar {bar} appears more than once (events {first} and {second})")]
    DuplicateBar {
        bar: u32,
        first: usize,
        second: usize,
    },
}

impl ModelError {
    /// Index of the event the error should be reported at.
    pub fn event_index(&self) -> usize {
        match *self {
            ModelError::DuplicateStrand { second, .. }
            | ModelError::SignMismatch { second, .. }
            | ModelError::DuplicateBar { second, .. } => second,
            ModelError::UnpairedCrossing { event, .. } => event,
        }
    }
}

/// A validated twisted virtual Gauss code. Event order is the orientation.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<Event>", into = "Vec<Event>")]
pub struct Diagram {
    events: Vec<Event>,
}

impl TryFrom<Vec<Event>> for Diagram {
    type Error = ModelError;

    fn try_from(events: Vec<Event>) -> Result<Self, Self::Error> {
        validate(events)
    }
}

impl From<Diagram> for Vec<Event> {
    fn from(d: Diagram) -> Self {
        d.events
    }
}

impl Diagram {
    pub fn empty() -> Self {
        Diagram::default()
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    /// Number of positions an initial point may occupy: one before each
    /// event, or a single gap on the empty diagram.
    pub fn gap_count(&self) -> usize {
        self.events.len().max(1)
    }

    pub fn twist_bar_count(&self) -> usize {
        self.events.iter().filter(|e| e.is_twist_bar()).count()
    }

    pub fn has_classical(&self) -> bool {
        self.events
            .iter()
            .any(|e| matches!(e, Event::Classical { .. }))
    }
}

/// Checks the diagram invariants and wraps the events unchanged.
pub fn validate(events: Vec<Event>) -> Result<Diagram, ModelError> {
    #[derive(Default)]
    struct Uses {
        over: Vec<usize>,
        under: Vec<usize>,
        virt: Vec<usize>,
    }

    let mut crossings: BTreeMap<u32, Uses> = BTreeMap::new();
    let mut bars: BTreeMap<u32, Vec<usize>> = BTreeMap::new();
    for (i, event) in events.iter().enumerate() {
        match *event {
            Event::Classical {
                crossing, strand, ..
            } => {
                let uses = crossings.entry(crossing).or_default();
                match strand {
                    Strand::Over => uses.over.push(i),
                    Strand::Under => uses.under.push(i),
                }
            }
            Event::Virtual { crossing } => crossings.entry(crossing).or_default().virt.push(i),
            Event::TwistBar { bar } => bars.entry(bar).or_default().push(i),
        }
    }

    // Each pass of the checks reports the violation at the smallest event index.
    let mut strand_dups: Vec<ModelError> = Vec::new();
    for (&crossing, uses) in &crossings {
        for (strand, list) in [(Strand::Over, &uses.over), (Strand::Under, &uses.under)] {
            if list.len() > 1 {
                strand_dups.push(ModelError::DuplicateStrand {
                    crossing,
                    strand,
                    first: list[0],
                    second: list[1],
                });
            }
        }
    }
    if let Some(e) = strand_dups.into_iter().min_by_key(ModelError::event_index) {
        return Err(e);
    }

    let mut unpaired: Vec<ModelError> = Vec::new();
    for (&crossing, uses) in &crossings {
        let classical = uses.over.len() + uses.under.len();
        let ok =
            (classical == 2 && uses.virt.is_empty()) || (classical == 0 && uses.virt.len() == 2);
        if !ok {
            let mut all: Vec<usize> = uses
                .over
                .iter()
                .chain(&uses.under)
                .chain(&uses.virt)
                .copied()
                .collect();
            all.sort_unstable();
            // Point at the occurrence that breaks the pair: the third one if
            // there are too many, otherwise the first.
            let event = if all.len() > 2 { all[2] } else { all[0] };
            unpaired.push(ModelError::UnpairedCrossing { crossing, event });
        }
    }
    if let Some(e) = unpaired.into_iter().min_by_key(ModelError::event_index) {
        return Err(e);
    }

    let mut signs: Vec<ModelError> = Vec::new();
    for (&crossing, uses) in &crossings {
        if let (Some(&o), Some(&u)) = (uses.over.first(), uses.under.first()) {
            let sign_of = |i: usize| match events[i] {
                Event::Classical { sign, .. } => sign,
                _ => unreachable!("classical index"),
            };
            if sign_of(o) != sign_of(u) {
                signs.push(ModelError::SignMismatch {
                    crossing,
                    first: o.min(u),
                    second: o.max(u),
                });
            }
        }
    }
    if let Some(e) = signs.into_iter().min_by_key(ModelError::event_index) {
        return Err(e);
    }

    if let Some(e) = bars
        .iter()
        .filter(|(_, list)| list.len() > 1)
        .map(|(&bar, list)| ModelError::DuplicateBar {
            bar,
            first: list[0],
            second: list[1],
        })
        .min_by_key(ModelError::event_index)
    {
        return Err(e);
    }

    Ok(Diagram { events })
}

/// An initial-point position: gap `g` sits immediately before event `g`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Gap(pub usize);

impl fmt::Display for Gap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PlacementError {
    #[error("at least one initial point is required")]
    NoPoints,
    #[error("gap {0} is used by more than one initial point")]
    DuplicateGap(Gap),
    #[error("gap {gap} is out of range for a diagram with {gaps} gaps")]
    GapOutOfRange { gap: Gap, gaps: usize },
    #[error("initial points are not listed in cyclic order")]
    NotCyclicOrder,
}

/// Checks that `points` are distinct, in range and listed in cyclic order
/// (some rotation of them is strictly increasing).
pub fn check_points(diagram: &Diagram, points: &[Gap]) -> Result<(), PlacementError> {
    if points.is_empty() {
        return Err(PlacementError::NoPoints);
    }
    let gaps = diagram.gap_count();
    if let Some(&gap) = points.iter().find(|g| g.0 >= gaps) {
        return Err(PlacementError::GapOutOfRange { gap, gaps });
    }
    let mut seen = vec![false; gaps];
    for &g in points {
        if std::mem::replace(&mut seen[g.0], true) {
            return Err(PlacementError::DuplicateGap(g));
        }
    }
    let descents = (0..points.len())
        .filter(|&i| points[(i + 1) % points.len()] <= points[i])
        .count();
    if points.len() > 1 && descents != 1 {
        return Err(PlacementError::NotCyclicOrder);
    }
    Ok(())
}

/// The oriented segment between two cyclically consecutive initial points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Path {
    pub start: Gap,
    /// Indices into the diagram's events, in traversal order.
    pub indices: Vec<usize>,
}

impl Path {
    pub fn events<'a>(&'a self, diagram: &'a Diagram) -> impl Iterator<Item = &'a Event> + 'a {
        self.indices.iter().map(move |&i| &diagram.events()[i])
    }
}

/// Splits the curve at the initial points. Path `i` runs from `points[i]` up
/// to, but excluding, `points[i + 1]`.
pub fn paths_of(diagram: &Diagram, points: &[Gap]) -> Result<Vec<Path>, PlacementError> {
    check_points(diagram, points)?;
    let m = diagram.len();
    let n = points.len();
    Ok((0..n)
        .map(|i| {
            let start = points[i].0;
            let len = if m == 0 {
                0
            } else if n == 1 {
                m
            } else {
                (points[(i + 1) % n].0 + m - start) % m
            };
            Path {
                start: points[i],
                indices: (0..len).map(|j| (start + j) % m).collect(),
            }
        })
        .collect())
}
