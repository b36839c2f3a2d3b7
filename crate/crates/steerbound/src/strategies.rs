//! Optimal cheating ensembles and their geometric classification.
//!
//! The deterministic bound tables say how well a cheat can do; this module
//! says *where* the optimal local states point. Each achieving plan is paired
//! with its optimal state family — a single Bloch direction for the linear
//! criterion, and a direction, great circle, or the whole sphere for the
//! variance criterion — deduplicated into orientation classes and classified
//! against the landmark directions of the measurement solid (vertices, edge
//! midpoints, face centroids).

use crate::bounds::{self, Criterion, OptimalStates, ResponsePlan};
use crate::error::Result;
use crate::geometry::{BlochVector, MeasurementSet};
use serde::{Deserialize, Serialize};

/// Orientations closer than this (in radians) are the same class.
pub const ORIENTATION_DEDUP_RAD: f64 = 1e-6;
/// Angular tolerance for matching a landmark direction of the solid.
pub const CLASSIFY_TOL_RAD: f64 = 1e-6;
/// Dot-product tolerance when deciding vertex adjacency.
const ADJACENCY_TOL: f64 = 1e-9;

/// The shape of one optimal state family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EnsembleKind {
    /// A single optimal Bloch direction (stored in `orientation`).
    Point,
    /// A great circle of equally optimal directions; `orientation` holds the
    /// plane normal.
    Circle,
}

/// Where an orientation sits relative to the measurement solid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    VertexCentred,
    EdgeCentred,
    FaceCentred,
    Intermediate,
    /// Every pure state is equally optimal; the stored orientation is an
    /// arbitrary representative.
    AnyState,
}

impl Classification {
    pub fn name(self) -> &'static str {
        match self {
            Classification::VertexCentred => "vertex_centred",
            Classification::EdgeCentred => "edge_centred",
            Classification::FaceCentred => "face_centred",
            Classification::Intermediate => "intermediate",
            Classification::AnyState => "any_state",
        }
    }
}

/// One orientation class of optimal cheating states, with a plan achieving
/// the deterministic bound there.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalEnsemble {
    pub kind: EnsembleKind,
    /// The optimal state for point kind; the circle's plane normal otherwise.
    pub orientation: BlochVector,
    pub plan: ResponsePlan,
    pub classification: Classification,
}

/// All optimal ensembles for one (set, criterion, answer count) cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EnsembleCatalog {
    pub n: usize,
    pub criterion: Criterion,
    pub m: usize,
    pub ensembles: Vec<OptimalEnsemble>,
    /// Number of distinct orientation classes; equals `ensembles.len()`.
    pub multiplicity: usize,
}

// ---------------------------------------------------------------------------
// Landmark directions of the solid.
// ---------------------------------------------------------------------------

fn adjacency_pairs(vertices: &[BlochVector]) -> Vec<(usize, usize)> {
    let mut max_dot = -1.0f64;
    for (i, v) in vertices.iter().enumerate() {
        for w in &vertices[i + 1..] {
            max_dot = max_dot.max(v.dot(*w));
        }
    }
    let mut pairs = Vec::new();
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            if vertices[i].dot(vertices[j]) >= max_dot - ADJACENCY_TOL {
                pairs.push((i, j));
            }
        }
    }
    pairs
}

fn push_deduped(list: &mut Vec<BlochVector>, candidate: BlochVector) {
    if !list
        .iter()
        .any(|v| v.angle_to(candidate) < ORIENTATION_DEDUP_RAD)
    {
        list.push(candidate);
    }
}

/// Unit directions through the midpoints of the solid's edges (both
/// hemispheres).
pub fn edge_midpoints(set: &MeasurementSet) -> Vec<BlochVector> {
    let vertices = set.full_vertices();
    let mut midpoints = Vec::new();
    for (i, j) in adjacency_pairs(&vertices) {
        push_deduped(&mut midpoints, (vertices[i] + vertices[j]).unit());
    }
    midpoints
}

/// Unit directions through the centroids of the solid's faces (both
/// hemispheres).
///
/// Faces are recovered from the vertex list alone: every two-edge path
/// v ~ w ~ u spans a candidate plane, kept only when it supports the whole
/// solid (no vertex strictly outside). The square is planar, so its "faces"
/// are the two directions orthogonal to its plane.
pub fn face_centroids(set: &MeasurementSet) -> Vec<BlochVector> {
    let vertices = set.full_vertices();
    if set.n() == 2 {
        let pole = vertices[0].cross(vertices[1]).unit();
        return vec![pole, -pole];
    }
    let pairs = adjacency_pairs(&vertices);
    let mut neighbours = vec![Vec::new(); vertices.len()];
    for (i, j) in pairs {
        neighbours[i].push(j);
        neighbours[j].push(i);
    }
    let mut centroids = Vec::new();
    for (w, around) in neighbours.iter().enumerate() {
        for &v in around {
            for &u in around {
                if u == v {
                    continue;
                }
                let normal = (vertices[w] - vertices[v]).cross(vertices[u] - vertices[w]);
                if normal.norm() < 1e-12 {
                    continue;
                }
                let mut outward = normal.unit();
                if (vertices[v] + vertices[w] + vertices[u]).dot(outward) < 0.0 {
                    outward = -outward;
                }
                let height = vertices[v].dot(outward);
                let supporting = vertices
                    .iter()
                    .all(|x| x.dot(outward) <= height + ADJACENCY_TOL);
                if supporting {
                    push_deduped(&mut centroids, outward);
                }
            }
        }
    }
    centroids
}

struct Landmarks {
    vertices: Vec<BlochVector>,
    faces: Vec<BlochVector>,
    edges: Vec<BlochVector>,
}

impl Landmarks {
    fn new(set: &MeasurementSet) -> Self {
        Landmarks {
            vertices: set.full_vertices(),
            faces: face_centroids(set),
            edges: edge_midpoints(set),
        }
    }

    fn classify(&self, r: BlochVector) -> Classification {
        let near = |list: &[BlochVector]| list.iter().any(|v| v.angle_to(r) < CLASSIFY_TOL_RAD);
        if near(&self.vertices) {
            Classification::VertexCentred
        } else if near(&self.faces) {
            Classification::FaceCentred
        } else if near(&self.edges) {
            Classification::EdgeCentred
        } else {
            Classification::Intermediate
        }
    }
}

/// Classify a unit direction against the solid's landmark directions, with
/// priority vertex, then face, then edge; `Intermediate` otherwise.
/// Antipodes classify identically because landmarks cover both hemispheres.
pub fn classify_orientation(set: &MeasurementSet, r: BlochVector) -> Classification {
    Landmarks::new(set).classify(r)
}

// ---------------------------------------------------------------------------
// Catalogs.
// ---------------------------------------------------------------------------

/// All orientation classes achieving D_n(m/n), each with an achieving plan.
///
/// Linear optima are always single directions r = unit(sum A_j b_j), and a
/// plan's global sign flip points the state the opposite way, so antipodal
/// orientations appear as separate classes — matching the count of
/// highlighted directions on the solid.
pub fn optimal_linear_ensembles(set: &MeasurementSet, m: usize) -> Result<EnsembleCatalog> {
    let point = bounds::deterministic_linear(set, m)?;
    let landmarks = Landmarks::new(set);
    let mut ensembles: Vec<OptimalEnsemble> = Vec::new();
    for (plan, states) in point.plans.iter().zip(&point.optimal_states) {
        let OptimalStates::Point { orientation } = *states else {
            unreachable!("linear optima are point families");
        };
        let duplicate = ensembles
            .iter()
            .any(|e| e.orientation.angle_to(orientation) < ORIENTATION_DEDUP_RAD);
        if duplicate {
            continue;
        }
        ensembles.push(OptimalEnsemble {
            kind: EnsembleKind::Point,
            orientation,
            plan: plan.clone(),
            classification: landmarks.classify(orientation),
        });
    }
    let multiplicity = ensembles.len();
    Ok(EnsembleCatalog {
        n: set.n(),
        criterion: Criterion::Linear,
        m,
        ensembles,
        multiplicity,
    })
}

/// All orientation classes achieving F_n(m/n).
///
/// The variance criterion is blind to answer signs and state inversion, so
/// each class stands for both hemispheres at once: a simple top eigenvalue
/// gives a point class (canonical hemisphere), a doubly degenerate one gives
/// a great circle named by its plane normal, and a fully degenerate one means
/// any state works.
pub fn optimal_variance_ensembles(set: &MeasurementSet, m: usize) -> Result<EnsembleCatalog> {
    let point = bounds::deterministic_variance(set, m)?;
    let landmarks = Landmarks::new(set);
    let mut ensembles: Vec<OptimalEnsemble> = Vec::new();
    for (plan, states) in point.plans.iter().zip(&point.optimal_states) {
        let (kind, orientation, classification) = match *states {
            OptimalStates::Point { orientation } => (
                EnsembleKind::Point,
                orientation,
                landmarks.classify(orientation),
            ),
            OptimalStates::Circle { normal } => {
                (EnsembleKind::Circle, normal, landmarks.classify(normal))
            }
            OptimalStates::AnySphere => (
                EnsembleKind::Point,
                BlochVector::Z,
                Classification::AnyState,
            ),
        };
        let duplicate = ensembles.iter().any(|e| {
            e.kind == kind
                && (e.classification == Classification::AnyState)
                    == (classification == Classification::AnyState)
                && (classification == Classification::AnyState
                    || axis_angle(e.orientation, orientation) < ORIENTATION_DEDUP_RAD)
        });
        if duplicate {
            continue;
        }
        ensembles.push(OptimalEnsemble {
            kind,
            orientation,
            plan: plan.clone(),
            classification,
        });
    }
    let multiplicity = ensembles.len();
    Ok(EnsembleCatalog {
        n: set.n(),
        criterion: Criterion::Variance,
        m,
        ensembles,
        multiplicity,
    })
}

/// Angle between undirected axes: min of the angle to r and to -r.
fn axis_angle(a: BlochVector, b: BlochVector) -> f64 {
    a.angle_to(b).min(a.angle_to(-b))
}
