//! Integration tests for the optimal-ensemble catalogs: frozen multiplicity
//! counts, geometric classifications, cross-answer-count coincidences, and
//! invariance under the symmetry rotations of each solid.

use std::f64::consts::PI;

use steerbound::bounds::Criterion;
use steerbound::strategies::{
    classify_orientation, optimal_linear_ensembles, optimal_variance_ensembles, Classification,
    EnsembleCatalog, EnsembleKind,
};
use steerbound::{build_measurement_set, BlochVector, MeasurementSet, Rotation};

fn catalog(set: &MeasurementSet, criterion: Criterion, m: usize) -> EnsembleCatalog {
    match criterion {
        Criterion::Linear => optimal_linear_ensembles(set, m).unwrap(),
        Criterion::Variance => optimal_variance_ensembles(set, m).unwrap(),
    }
}

/// Count ensembles per classification, returned as
/// (vertex, edge, face, intermediate, any_state).
fn census(catalog: &EnsembleCatalog) -> (usize, usize, usize, usize, usize) {
    let mut counts = (0, 0, 0, 0, 0);
    for e in &catalog.ensembles {
        match e.classification {
            Classification::VertexCentred => counts.0 += 1,
            Classification::EdgeCentred => counts.1 += 1,
            Classification::FaceCentred => counts.2 += 1,
            Classification::Intermediate => counts.3 += 1,
            Classification::AnyState => counts.4 += 1,
        }
    }
    counts
}

#[test]
fn full_answer_linear_multiplicities_are_frozen() {
    // (n, multiplicity, classification): the full-sign optima sit on the
    // faces of the octahedron and cube but on the vertices of the
    // icosahedron and dodecahedron; the square's optima are edge midpoints.
    let expected = [
        (2, 4, Classification::EdgeCentred),
        (3, 8, Classification::FaceCentred),
        (4, 6, Classification::FaceCentred),
        (6, 12, Classification::VertexCentred),
        (10, 20, Classification::VertexCentred),
    ];
    for (n, multiplicity, class) in expected {
        let set = build_measurement_set(n).unwrap();
        let catalog = optimal_linear_ensembles(&set, n).unwrap();
        assert_eq!(catalog.multiplicity, multiplicity, "n={n}");
        assert_eq!(catalog.multiplicity, catalog.ensembles.len());
        for e in &catalog.ensembles {
            assert_eq!(e.kind, EnsembleKind::Point);
            assert_eq!(e.classification, class, "n={n}");
        }
    }
}

#[test]
fn single_answer_catalogs_point_at_vertices() {
    for &n in steerbound::SUPPORTED_SIZES.iter() {
        let set = build_measurement_set(n).unwrap();
        let catalog = optimal_linear_ensembles(&set, 1).unwrap();
        assert_eq!(catalog.multiplicity, 2 * n);
        for e in &catalog.ensembles {
            assert_eq!(e.classification, Classification::VertexCentred);
        }
    }
}

#[test]
fn intermediate_and_face_classes_are_frozen() {
    // Cube, three answers: optima lie between face centres and vertices.
    let set = build_measurement_set(4).unwrap();
    let catalog = optimal_linear_ensembles(&set, 3).unwrap();
    assert_eq!(catalog.multiplicity, 24);
    assert_eq!(census(&catalog), (0, 0, 0, 24, 0));

    // Dodecahedron, four answers: two equally good classes, one on the
    // vertices and one strictly between landmarks.
    let set = build_measurement_set(10).unwrap();
    let catalog = optimal_linear_ensembles(&set, 4).unwrap();
    assert_eq!(catalog.multiplicity, 80);
    assert_eq!(census(&catalog), (20, 0, 0, 60, 0));

    // Dodecahedron, five answers: the twelve face centroids.
    let catalog = optimal_linear_ensembles(&set, 5).unwrap();
    assert_eq!(catalog.multiplicity, 12);
    assert_eq!(census(&catalog), (0, 0, 12, 0, 0));

    // Icosahedron, three answers: the twenty face centroids.
    let set = build_measurement_set(6).unwrap();
    let catalog = optimal_linear_ensembles(&set, 3).unwrap();
    assert_eq!(catalog.multiplicity, 20);
    assert_eq!(census(&catalog), (0, 0, 20, 0, 0));
}

#[test]
fn variance_circle_families_are_frozen() {
    // Dropping one axis leaves a circle per omitted vertex pair.
    for (n, circles) in [(3usize, 3usize), (4, 4), (6, 6), (10, 10)] {
        let set = build_measurement_set(n).unwrap();
        let catalog = optimal_variance_ensembles(&set, n - 1).unwrap();
        assert_eq!(catalog.multiplicity, circles, "n={n}");
        for e in &catalog.ensembles {
            assert_eq!(e.kind, EnsembleKind::Circle);
            assert_eq!(e.classification, Classification::VertexCentred);
        }
    }
    // The square collapses to a single circle in its own plane.
    let set = build_measurement_set(2).unwrap();
    let catalog = optimal_variance_ensembles(&set, 2).unwrap();
    assert_eq!(catalog.multiplicity, 1);
    let e = &catalog.ensembles[0];
    assert_eq!(e.kind, EnsembleKind::Circle);
    assert_eq!(e.classification, Classification::FaceCentred);
}

#[test]
fn variance_point_families_are_frozen() {
    // Icosahedron pairs: every pair of axes is equivalent and optimal, and
    // the top eigenvector is the edge midpoint between them.
    let set = build_measurement_set(6).unwrap();
    let catalog = optimal_variance_ensembles(&set, 2).unwrap();
    assert_eq!(catalog.multiplicity, 15);
    assert_eq!(census(&catalog), (0, 15, 0, 0, 0));
    for e in &catalog.ensembles {
        assert_eq!(e.kind, EnsembleKind::Point);
    }
    // Full sets are direction-free for every solid except the square.
    for &n in &[3usize, 4, 6, 10] {
        let set = build_measurement_set(n).unwrap();
        let catalog = optimal_variance_ensembles(&set, n).unwrap();
        assert_eq!(catalog.multiplicity, 1);
        assert_eq!(
            catalog.ensembles[0].classification,
            Classification::AnyState
        );
    }
}

/// Orientation sets agree as sets, optionally up to antipodes.
fn same_orientations(a: &EnsembleCatalog, b: &EnsembleCatalog, up_to_sign: bool) {
    assert_eq!(a.multiplicity, b.multiplicity);
    for ea in &a.ensembles {
        let hit = b.ensembles.iter().any(|eb| {
            let direct = ea.orientation.angle_to(eb.orientation) < 1e-9;
            let flipped = ea.orientation.angle_to(-eb.orientation) < 1e-9;
            direct || (up_to_sign && flipped)
        });
        assert!(hit, "orientation {:?} missing from partner", ea.orientation);
    }
}

#[test]
fn catalogs_coincide_across_answer_counts() {
    // Icosahedron: one answer looks like six, two look like four.
    let set = build_measurement_set(6).unwrap();
    same_orientations(
        &optimal_linear_ensembles(&set, 1).unwrap(),
        &optimal_linear_ensembles(&set, 6).unwrap(),
        false,
    );
    same_orientations(
        &optimal_linear_ensembles(&set, 2).unwrap(),
        &optimal_linear_ensembles(&set, 4).unwrap(),
        false,
    );
    // Dodecahedron, linear: one/ten and two/eight.
    let set = build_measurement_set(10).unwrap();
    same_orientations(
        &optimal_linear_ensembles(&set, 1).unwrap(),
        &optimal_linear_ensembles(&set, 10).unwrap(),
        false,
    );
    same_orientations(
        &optimal_linear_ensembles(&set, 2).unwrap(),
        &optimal_linear_ensembles(&set, 8).unwrap(),
        false,
    );
    // Dodecahedron, variance: one answer looks like four.
    same_orientations(
        &optimal_variance_ensembles(&set, 1).unwrap(),
        &optimal_variance_ensembles(&set, 4).unwrap(),
        true,
    );
}

#[test]
fn linear_orientations_are_parallel_to_their_signed_sums() {
    for &n in steerbound::SUPPORTED_SIZES.iter() {
        let set = build_measurement_set(n).unwrap();
        for m in 1..=n {
            let catalog = optimal_linear_ensembles(&set, m).unwrap();
            for e in &catalog.ensembles {
                let mut sum = BlochVector::ZERO;
                for (j, &a) in e.plan.values().iter().enumerate() {
                    sum = sum + set.axis(j) * a as f64;
                }
                assert!(
                    e.orientation.dot(sum.unit()) > 1.0 - 1e-12,
                    "n={n} m={m}: orientation not parallel to signed sum",
                );
            }
        }
    }
}

/// A rotation that maps the solid onto itself, checked against the vertex
/// list before use.
fn verified_symmetry(set: &MeasurementSet, axis: BlochVector, angle: f64) -> Rotation {
    let rotation = Rotation::about_axis(axis, angle);
    let vertices = set.full_vertices();
    for v in &vertices {
        let image = rotation.apply(*v);
        assert!(
            vertices.iter().any(|w| w.angle_to(image) < 1e-9),
            "claimed symmetry does not permute the vertices",
        );
    }
    rotation
}

#[test]
fn catalogs_are_closed_under_solid_symmetries() {
    let cases: Vec<(usize, BlochVector, f64)> = vec![
        (2, BlochVector::Z, PI / 2.0),
        (3, BlochVector::Z, PI / 2.0),
        (3, BlochVector::new(1.0, 1.0, 1.0).unit(), 2.0 * PI / 3.0),
        (4, BlochVector::Z, PI / 2.0),
        (4, BlochVector::new(1.0, 1.0, 1.0).unit(), 2.0 * PI / 3.0),
        (6, BlochVector::ZERO, 2.0 * PI / 5.0),
        (10, BlochVector::ZERO, 2.0 * PI / 3.0),
    ];
    for (n, axis, angle) in cases {
        let set = build_measurement_set(n).unwrap();
        // A zero axis marks "use the first measurement axis".
        let axis = if axis.norm() < 0.5 { set.axis(0) } else { axis };
        let rotation = verified_symmetry(&set, axis, angle);
        for m in 1..=n {
            for criterion in Criterion::ALL {
                let cat = catalog(&set, criterion, m);
                for e in &cat.ensembles {
                    let image = rotation.apply(e.orientation);
                    let closed = cat.ensembles.iter().any(|other| {
                        other.orientation.angle_to(image) < 1e-6
                            || (criterion == Criterion::Variance
                                && other.orientation.angle_to(-image) < 1e-6)
                    });
                    assert!(
                        closed || e.classification == Classification::AnyState,
                        "n={n} m={m} {}: rotated orientation escapes the catalog",
                        criterion.name(),
                    );
                }
            }
        }
    }
}

#[test]
fn classification_is_rotation_equivariant() {
    // Classifying in a rotated frame agrees with classifying the rotated
    // direction in the rotated set.
    let set = build_measurement_set(6).unwrap();
    let rotation = Rotation::about_axis(BlochVector::new(0.3, -0.2, 0.9).unit(), 0.7);
    let rotated = set.rotated(&rotation);
    for r in [
        set.axis(0),
        (set.axis(0) + set.axis(1)).unit(),
        BlochVector::new(0.2, 0.5, 0.8).unit(),
    ] {
        let before = classify_orientation(&set, r);
        let after = classify_orientation(&rotated, rotation.apply(r));
        assert_eq!(before, after);
    }
}
