//! TOML scene documents.
//!
//! ```toml
//! dimension = 2
//!
//! [ball]
//! center = [0.0, 0.0]
//! radius = 10.0
//!
//! [[bodies]]
//! kind = "ball"
//! center = [-3.0, 0.0]
//! semiaxes = [1.0]
//!
//! [[bodies]]
//! kind = "ellipsoid"
//! center = [3.0, 0.0]
//! semiaxes = [1.5, 0.5]
//! rotation = [[0.0, -1.0], [1.0, 0.0]]
//!
//! [metadata]
//! name = "two bodies"
//! seed = 7
//! ```
//!
//! Unknown keys are rejected.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use thiserror::Error;

use crate::geometry::{
    Arc, ArcGeometry, BodyKind, ConvexBody, CurveObstacle, Scene, Violation, validate_scene, vector,
};

const ORTHONORMAL_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SceneDocument {
    pub dimension: usize,
    pub ball: BallDoc,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub bodies: Vec<BodyDoc>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub curves: Vec<CurveDoc>,
    #[serde(default)]
    pub metadata: Metadata,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BallDoc {
    pub center: Vec<f64>,
    pub radius: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BodyKindDoc {
    Ball,
    Ellipsoid,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyDoc {
    pub kind: BodyKindDoc,
    pub center: Vec<f64>,
    /// One radius for a ball, `dimension` semiaxes for an ellipsoid.
    pub semiaxes: Vec<f64>,
    /// Row-major orthonormal matrix; identity when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rotation: Option<Vec<Vec<f64>>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveDoc {
    pub arcs: Vec<ArcDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ArcDoc {
    EllipticArc {
        center: [f64; 2],
        semiaxes: [f64; 2],
        angle_start: f64,
        angle_end: f64,
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        tags: Vec<String>,
    },
    Segment {
        start: [f64; 2],
        end: [f64; 2],
        #[serde(default, skip_serializing_if = "Vec::is_empty")]
        tags: Vec<String>,
    },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

#[derive(Debug, Error)]
pub enum DocumentError {
    /// TOML syntax errors and unknown or mistyped keys; the message carries
    /// the line and column.
    #[error("parse error: {0}")]
    Syntax(String),

    #[error("schema violation at {location}: {message}")]
    Schema { location: String, message: String },

    #[error("scene is not admissible: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Validation(Vec<Violation>),
}

fn schema(location: impl Into<String>, message: impl Into<String>) -> DocumentError {
    DocumentError::Schema { location: location.into(), message: message.into() }
}

pub fn parse_document(text: &str) -> Result<SceneDocument, DocumentError> {
    toml::from_str(text).map_err(|e| DocumentError::Syntax(e.to_string()))
}

/// Parse, build and validate a scene.
pub fn parse_scene(text: &str) -> Result<Scene, DocumentError> {
    parse_document(text)?.to_scene()
}

impl SceneDocument {
    /// Builds the scene and runs [`validate_scene`] on it.
    pub fn to_scene(&self) -> Result<Scene, DocumentError> {
        let scene = self.build()?;
        let report = validate_scene(&scene);
        if report.is_admissible() { Ok(scene) } else { Err(DocumentError::Validation(report.violations)) }
    }

    /// Builds the scene without the admissibility checks.
    pub fn build(&self) -> Result<Scene, DocumentError> {
        let d = self.dimension;
        if d < 2 {
            return Err(schema("dimension", format!("must be at least 2, got {d}")));
        }
        if self.ball.center.len() != d {
            return Err(schema("ball.center", format!("expected {d} coordinates")));
        }
        let mut scene = Scene::new(vector(&self.ball.center), self.ball.radius)
            .map_err(|e| schema("ball.radius", e.to_string()))?;
        for (i, b) in self.bodies.iter().enumerate() {
            let at = |field: &str| format!("bodies[{i}].{field}");
            if b.center.len() != d {
                return Err(schema(at("center"), format!("expected {d} coordinates")));
            }
            let center = vector(&b.center);
            let body = match b.kind {
                BodyKindDoc::Ball => {
                    if b.rotation.is_some() {
                        return Err(schema(at("rotation"), "balls take no rotation"));
                    }
                    let r = b.semiaxes.first().copied().unwrap_or(f64::NAN);
                    if b.semiaxes.is_empty() || b.semiaxes.iter().any(|s| *s != r) {
                        return Err(schema(at("semiaxes"), "a ball needs one radius (or equal semiaxes)"));
                    }
                    ConvexBody::ball(center, r).map_err(|e| schema(at("semiaxes"), e.to_string()))?
                }
                BodyKindDoc::Ellipsoid => {
                    if b.semiaxes.len() != d {
                        return Err(schema(at("semiaxes"), format!("expected {d} semiaxes")));
                    }
                    if let Some(bad) = b.semiaxes.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
                        return Err(schema(at("semiaxes"), format!("semiaxis {bad} is not positive")));
                    }
                    let rotation = match &b.rotation {
                        None => None,
                        Some(rows) => {
                            if rows.len() != d || rows.iter().any(|r| r.len() != d) {
                                return Err(schema(at("rotation"), format!("expected a {d}x{d} matrix")));
                            }
                            let m = DMatrix::from_fn(d, d, |r, c| rows[r][c]);
                            let err = (m.transpose() * &m - DMatrix::<f64>::identity(d, d)).amax();
                            if !(err <= ORTHONORMAL_TOL) {
                                return Err(schema(
                                    at("rotation"),
                                    format!("R^T R differs from the identity by {err:e}"),
                                ));
                            }
                            Some(m)
                        }
                    };
                    ConvexBody::ellipsoid(center, vector(&b.semiaxes), rotation)
                        .map_err(|e| schema(at("rotation"), e.to_string()))?
                }
            };
            scene = scene.with_body(body).map_err(|e| schema(at("center"), e.to_string()))?;
        }
        for (k, c) in self.curves.iter().enumerate() {
            if d != 2 {
                return Err(schema(format!("curves[{k}]"), "curve obstacles need dimension 2"));
            }
            let arcs = c
                .arcs
                .iter()
                .map(|a| match a {
                    ArcDoc::EllipticArc { center, semiaxes, angle_start, angle_end, tags } => Arc {
                        geometry: ArcGeometry::Elliptic {
                            center: *center,
                            semiaxes: *semiaxes,
                            angle_start: *angle_start,
                            angle_end: *angle_end,
                        },
                        tags: tags.iter().cloned().collect(),
                    },
                    ArcDoc::Segment { start, end, tags } => Arc {
                        geometry: ArcGeometry::Segment { start: *start, end: *end },
                        tags: tags.iter().cloned().collect(),
                    },
                })
                .collect();
            let curve = CurveObstacle::new(arcs).map_err(|e| schema(format!("curves[{k}]"), e.to_string()))?;
            scene = scene.with_curve(curve).map_err(|e| schema(format!("curves[{k}]"), e.to_string()))?;
        }
        Ok(scene)
    }

    pub fn from_scene(scene: &Scene, metadata: Metadata) -> Self {
        let d = scene.dimension();
        let bodies = scene
            .bodies()
            .iter()
            .map(|b| match b.kind() {
                BodyKind::Ball => BodyDoc {
                    kind: BodyKindDoc::Ball,
                    center: b.center().iter().copied().collect(),
                    semiaxes: vec![b.semiaxes()[0]],
                    rotation: None,
                },
                BodyKind::Ellipsoid => {
                    let r = b.rotation();
                    BodyDoc {
                        kind: BodyKindDoc::Ellipsoid,
                        center: b.center().iter().copied().collect(),
                        semiaxes: b.semiaxes().iter().copied().collect(),
                        rotation: (*r != DMatrix::<f64>::identity(d, d))
                            .then(|| (0..d).map(|i| (0..d).map(|j| r[(i, j)]).collect()).collect()),
                    }
                }
            })
            .collect();
        let curves = scene
            .curves()
            .iter()
            .map(|c| CurveDoc {
                arcs: c
                    .arcs()
                    .iter()
                    .map(|a| {
                        let tags = a.tags.iter().cloned().collect();
                        match a.geometry {
                            ArcGeometry::Elliptic { center, semiaxes, angle_start, angle_end } => {
                                ArcDoc::EllipticArc { center, semiaxes, angle_start, angle_end, tags }
                            }
                            ArcGeometry::Segment { start, end } => ArcDoc::Segment { start, end, tags },
                        }
                    })
                    .collect(),
            })
            .collect();
        Self {
            dimension: d,
            ball: BallDoc { center: scene.ball().center.iter().copied().collect(), radius: scene.ball().radius },
            bodies,
            curves,
            metadata,
        }
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scene documents always serialise")
    }
}

pub fn serialize_scene(scene: &Scene, metadata: Metadata) -> String {
    SceneDocument::from_scene(scene, metadata).to_toml()
}

/// SHA-256 of the canonical document of the scene (metadata excluded).
pub fn scene_digest(scene: &Scene) -> String {
    hex::encode(Sha256::digest(serialize_scene(scene, Metadata::default()).as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"
dimension = 2
[ball]
center = [0.0, 0.0]
radius = 10.0
[[bodies]]
kind = "ball"
center = [0.0, 0.0]
semiaxes = [1.0]
"#;

    #[test]
    fn minimal_document() {
        let s = parse_scene(MINIMAL).unwrap();
        assert_eq!(s.bodies().len(), 1);
        assert_eq!(s.ball().radius, 10.0);
    }

    #[test]
    fn overlapping_disks_name_both_indices() {
        let text = MINIMAL.to_string() + "[[bodies]]\nkind = \"ball\"\ncenter = [0.5, 0.0]\nsemiaxes = [1.0]\n";
        let err = parse_scene(&text).unwrap_err();
        let msg = err.to_string();
        assert!(matches!(err, DocumentError::Validation(_)));
        assert!(msg.contains("0 and 1"), "{msg}");
    }

    #[test]
    fn non_orthonormal_rotation_is_schema_violation() {
        let text = MINIMAL.replace(
            "kind = \"ball\"\ncenter = [0.0, 0.0]\nsemiaxes = [1.0]",
            "kind = \"ellipsoid\"\ncenter = [0.0, 0.0]\nsemiaxes = [1.0, 2.0]\nrotation = [[1.0, 0.2], [0.0, 1.0]]",
        );
        match parse_scene(&text).unwrap_err() {
            DocumentError::Schema { location, .. } => assert_eq!(location, "bodies[0].rotation"),
            other => panic!("{other}"),
        }
    }

    #[test]
    fn unknown_keys_rejected_with_location() {
        let err = parse_scene(&(MINIMAL.to_string() + "colour = \"red\"\n")).unwrap_err();
        assert!(matches!(err, DocumentError::Syntax(_)));
        assert!(err.to_string().contains("line"), "{err}");
        let err = parse_scene(&MINIMAL.replace("semiaxes = [1.0]", "semiaxes = [1.0]\nmass = 2.0")).unwrap_err();
        assert!(matches!(err, DocumentError::Syntax(_)), "{err}");
    }

    #[test]
    fn digest_ignores_metadata() {
        let s = parse_scene(MINIMAL).unwrap();
        let other = parse_scene(&(MINIMAL.to_string() + "[metadata]\nseed = 3\n")).unwrap();
        assert_eq!(scene_digest(&s), scene_digest(&other));
        assert_eq!(scene_digest(&s).len(), 64);
    }
}
