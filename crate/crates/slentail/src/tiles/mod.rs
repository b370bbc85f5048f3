//! Tiles: single points-to formulas with ports, their composition into
//! characteristic formulas of tiled trees, the canonical and quasi-canonical
//! shapes, and a brute-force rotation oracle for small trees.

mod checks;
mod compose;
mod rotation;
mod tile;

pub use checks::{
    is_canonical_tile, is_canonical_tree, is_quasi_canonical_tile, is_quasi_canonical_tree, quasi_canonical_violations,
};
pub use compose::{canonical_projection, char_formula, char_tile, compose_tiles, project_tile};
pub use rotation::{rotation_oracle, ROTATION_BOUND};
pub use tile::{normalize_tile, Port, Tile};

use crate::slcore::Tree;

pub type TiledTree = Tree<Tile>;
