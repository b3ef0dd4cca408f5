//! Scene documents and CSV tables.

mod document;
mod tables;

pub use document::{
    ArcDoc, BallDoc, BodyDoc, BodyKindDoc, CurveDoc, DocumentError, Metadata, SceneDocument, parse_document,
    parse_scene, scene_digest, serialize_scene,
};
pub use tables::{
    CsvError, DEFAULT_PRECISION, format_float, read_spectrum_csv, write_atlas_csv, write_coverage_csv, write_reconstruction_csv,
    write_sls_csv, write_trace_csv, write_travel_csv,
};
