//! Reading systems from manifests and Java source trees.

mod java;
mod manifest;

pub use java::{
    display_region_name, function_graph_scan, scan_java_tree, strip_comments_and_literals, ScanReport,
    DEFAULT_PACKAGE_LABEL,
};
pub use manifest::{
    parse_manifest, Manifest, ManifestLayer, ManifestSubsystem, Model, NamedRegion,
};
