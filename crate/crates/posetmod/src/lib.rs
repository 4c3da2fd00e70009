//! Homological algebra of modules over finite posets.
//!
//! The crate implements, over an exact coefficient field (GF(p) or the
//! rationals):
//!
//! * finite posets, upsets/downsets, uptight regions and uptight posets;
//! * poset modules with validated commutativity, homomorphisms, kernels,
//!   cokernels, pullback and pushforward;
//! * indicator modules, Hom computations via connected components, and
//!   monomial matrices;
//! * constant subdivisions, monodromy detection, and finite encodings via
//!   the uptight construction;
//! * minimal upset covers and downset hulls, indicator resolutions,
//!   (co)presentations and fringe presentations;
//! * finitely determined Z^n-modules on bounding boxes: convex projection,
//!   Matlis duality, flange presentations, minimal flat and injective
//!   resolutions;
//! * multifiltered simplicial complexes, their persistent homology and the
//!   natural finite encoding through distinct subcomplexes.
//!
//! The `io` module defines the text interchange formats used by the
//! `posetmod` command-line tool.

pub mod encoding;
pub mod filtration;
pub mod indicator;
pub mod io;
pub mod linalg;
pub mod module;
pub mod poset;
pub mod resolve;
pub mod zn;
