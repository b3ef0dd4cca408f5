use crate::geometry::Vector;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectrumKind {
    Sls,
    Travel,
}

/// The finite grid a spectrum was sampled on: one key per cell (impact
/// lattice point, or concatenated `(x, y)` for travelling times).
#[derive(Clone, Debug, PartialEq)]
pub struct GridDescription {
    pub kind: SpectrumKind,
    pub label: String,
    pub keys: Vec<Vec<f64>>,
}

impl GridDescription {
    /// Same kind and bitwise identical cell keys.
    pub fn same_cells(&self, other: &GridDescription) -> bool {
        self.kind == other.kind
            && self.keys.len() == other.keys.len()
            && self.keys.iter().zip(&other.keys).all(|(a, b)| {
                a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.to_bits() == y.to_bits())
            })
    }
}

/// One measured sojourn time.
#[derive(Clone, Debug, PartialEq)]
pub struct SlsSample {
    pub omega: Vector,
    /// Coordinates of the launch point in the hyperplane orthogonal to `omega`.
    pub impact: Vec<f64>,
    pub impact_point: Vector,
    pub theta: Vector,
    pub sojourn: f64,
    pub reflections: usize,
    pub grazing: bool,
    pub itinerary: Vec<usize>,
}

/// One `(x, y)`-geodesic found by shooting.
#[derive(Clone, Debug, PartialEq)]
pub struct TravellingTimeSample {
    pub x: Vector,
    pub y: Vector,
    pub t: f64,
    pub reflections: usize,
    pub itinerary: Vec<usize>,
    /// Inward direction at `x`.
    pub dir_in: Vector,
    /// Outward direction at the exit point.
    pub dir_out: Vector,
    /// Where the refined ray actually crosses the sphere.
    pub exit_point: Vector,
    /// `|exit_point - y|`.
    pub residual: f64,
}

pub trait TimedSample {
    fn time(&self) -> f64;
}

impl TimedSample for SlsSample {
    fn time(&self) -> f64 {
        self.sojourn
    }
}

impl TimedSample for TravellingTimeSample {
    fn time(&self) -> f64 {
        self.t
    }
}

impl TimedSample for f64 {
    fn time(&self) -> f64 {
        *self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagnostics {
    /// Trajectories launched (lattice points or shooting seeds).
    pub launched: usize,
    /// Trajectories classified as cut off, i.e. trapped for this run.
    pub cutoff: usize,
    /// Shooting brackets whose refinement did not reach the tolerance.
    pub dropped: usize,
}

impl std::ops::AddAssign for Diagnostics {
    fn add_assign(&mut self, rhs: Self) {
        self.launched += rhs.launched;
        self.cutoff += rhs.cutoff;
        self.dropped += rhs.dropped;
    }
}

/// A finite sampling of a spectrum: `cells[i]` holds the samples measured at
/// `grid.keys[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumTable<S> {
    pub scene_digest: Option<String>,
    pub grid: GridDescription,
    pub cells: Vec<Vec<S>>,
    pub diagnostics: Diagnostics,
}

impl<S: TimedSample> SpectrumTable<S> {
    pub fn time_sets(&self) -> Vec<Vec<f64>> {
        self.cells.iter().map(|c| c.iter().map(TimedSample::time).collect()).collect()
    }

    pub fn sample_count(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    pub fn samples(&self) -> impl Iterator<Item = &S> {
        self.cells.iter().flatten()
    }
}
